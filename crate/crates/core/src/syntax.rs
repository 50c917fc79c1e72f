//! Abstract syntax shared by the modal mu-calculus and game logic.

use std::fmt;

/// Object variable name.
pub type OVar = String;

/// A swap of two object variables, recorded on renamed propositional
/// variables and named actions.
pub type Swap = (OVar, OVar);

/// Propositional variable, possibly barred and possibly carrying renaming tags.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct PVar {
    pub base: String,
    pub barred: bool,
    pub tags: Vec<Swap>,
}

impl PVar {
    pub fn new(base: impl Into<String>) -> PVar {
        PVar { base: base.into(), barred: false, tags: Vec::new() }
    }

    pub fn bar(&self) -> PVar {
        PVar { base: self.base.clone(), barred: !self.barred, tags: self.tags.clone() }
    }

    pub fn is_tagged(&self) -> bool {
        !self.tags.is_empty()
    }

    /// The untagged, unbarred variable this one is derived from.
    pub fn root(&self) -> PVar {
        PVar::new(self.base.clone())
    }

    /// Appends a swap tag. A swap directly undoing the previous one cancels it.
    pub fn tagged(&self, x: &str, y: &str) -> PVar {
        let mut tags = self.tags.clone();
        push_swap(&mut tags, x, y);
        PVar { base: self.base.clone(), barred: self.barred, tags }
    }
}

pub(crate) fn push_swap(tags: &mut Vec<Swap>, x: &str, y: &str) {
    if x == y {
        return;
    }
    if let Some((a, b)) = tags.last() {
        if (a == x && b == y) || (a == y && b == x) {
            tags.pop();
            return;
        }
    }
    tags.push((x.to_string(), y.to_string()));
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Term {
    Var(OVar),
    Const(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(x: &str) -> Term {
        Term::Var(x.to_string())
    }

    pub fn cst(c: &str) -> Term {
        Term::Const(c.to_string())
    }

    pub fn app(f: &str, args: Vec<Term>) -> Term {
        Term::App(f.to_string(), args)
    }

    pub fn vars_into(&self, out: &mut Vec<OVar>) {
        match self {
            Term::Var(x) => {
                if !out.contains(x) {
                    out.push(x.clone());
                }
            }
            Term::Const(_) => {}
            Term::App(_, args) => args.iter().for_each(|a| a.vars_into(out)),
        }
    }

    pub fn vars(&self) -> Vec<OVar> {
        let mut v = Vec::new();
        self.vars_into(&mut v);
        v
    }

    pub fn mentions(&self, x: &str) -> bool {
        match self {
            Term::Var(y) => y == x,
            Term::Const(_) => false,
            Term::App(_, args) => args.iter().any(|a| a.mentions(x)),
        }
    }

    pub fn subst(&self, x: &str, t: &Term) -> Term {
        match self {
            Term::Var(y) if y == x => t.clone(),
            Term::Var(_) | Term::Const(_) => self.clone(),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| a.subst(x, t)).collect()),
        }
    }

    pub fn swap(&self, x: &str, y: &str) -> Term {
        match self {
            Term::Var(z) if z == x => Term::var(y),
            Term::Var(z) if z == y => Term::var(x),
            Term::Var(_) | Term::Const(_) => self.clone(),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| a.swap(x, y)).collect()),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Atom {
    Pred(String, Vec<Term>),
    Eq(Term, Term),
}

impl Atom {
    pub fn terms(&self) -> Vec<&Term> {
        match self {
            Atom::Pred(_, args) => args.iter().collect(),
            Atom::Eq(a, b) => vec![a, b],
        }
    }

    fn map_terms(&self, f: impl Fn(&Term) -> Term) -> Atom {
        match self {
            Atom::Pred(p, args) => Atom::Pred(p.clone(), args.iter().map(&f).collect()),
            Atom::Eq(a, b) => Atom::Eq(f(a), f(b)),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Literal {
    pub positive: bool,
    pub atom: Atom,
}

impl Literal {
    pub fn pred(p: &str, args: Vec<Term>) -> Literal {
        Literal { positive: true, atom: Atom::Pred(p.to_string(), args) }
    }

    pub fn eq(a: Term, b: Term) -> Literal {
        Literal { positive: true, atom: Atom::Eq(a, b) }
    }

    pub fn negate(&self) -> Literal {
        Literal { positive: !self.positive, atom: self.atom.clone() }
    }

    pub fn vars_into(&self, out: &mut Vec<OVar>) {
        self.atom.terms().into_iter().for_each(|t| t.vars_into(out));
    }

    pub fn subst(&self, x: &str, t: &Term) -> Literal {
        Literal { positive: self.positive, atom: self.atom.map_terms(|s| s.subst(x, t)) }
    }

    pub fn swap(&self, x: &str, y: &str) -> Literal {
        Literal { positive: self.positive, atom: self.atom.map_terms(|s| s.swap(x, y)) }
    }
}

/// Atomic transition symbols.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Action {
    /// A transition interpreted by the structure; the tags record renamings.
    Named { name: String, tags: Vec<Swap> },
    Assign(OVar, Term),
    Random(OVar),
    Ode { eqs: Vec<(OVar, Term)>, constraint: Option<Box<MuFormula>> },
}

impl Action {
    pub fn named(name: &str) -> Action {
        Action::Named { name: name.to_string(), tags: Vec::new() }
    }

    pub fn assign(x: &str, t: Term) -> Action {
        Action::Assign(x.to_string(), t)
    }

    pub fn random(x: &str) -> Action {
        Action::Random(x.to_string())
    }

    /// Variables written by the action, when known syntactically.
    pub fn targets(&self) -> Vec<OVar> {
        match self {
            Action::Named { .. } => Vec::new(),
            Action::Assign(x, _) | Action::Random(x) => vec![x.clone()],
            Action::Ode { eqs, .. } => eqs.iter().map(|(x, _)| x.clone()).collect(),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum MuFormula {
    Lit(Literal),
    Var(PVar),
    Or(Box<MuFormula>, Box<MuFormula>),
    And(Box<MuFormula>, Box<MuFormula>),
    Diamond(Action, Box<MuFormula>),
    Box(Action, Box<MuFormula>),
    Mu(PVar, Box<MuFormula>),
    Nu(PVar, Box<MuFormula>),
}

impl MuFormula {
    pub fn lit(l: Literal) -> MuFormula {
        MuFormula::Lit(l)
    }

    pub fn var(x: &str) -> MuFormula {
        MuFormula::Var(PVar::new(x))
    }

    pub fn pred0(p: &str) -> MuFormula {
        MuFormula::Lit(Literal::pred(p, Vec::new()))
    }

    pub fn or(a: MuFormula, b: MuFormula) -> MuFormula {
        MuFormula::Or(Box::new(a), Box::new(b))
    }

    pub fn and(a: MuFormula, b: MuFormula) -> MuFormula {
        MuFormula::And(Box::new(a), Box::new(b))
    }

    pub fn dia(a: Action, f: MuFormula) -> MuFormula {
        MuFormula::Diamond(a, Box::new(f))
    }

    pub fn boxed(a: Action, f: MuFormula) -> MuFormula {
        MuFormula::Box(a, Box::new(f))
    }

    pub fn mu(x: PVar, f: MuFormula) -> MuFormula {
        MuFormula::Mu(x, Box::new(f))
    }

    pub fn nu(x: PVar, f: MuFormula) -> MuFormula {
        MuFormula::Nu(x, Box::new(f))
    }

    /// Number of nodes, counting actions and literals as one.
    pub fn size(&self) -> usize {
        match self {
            MuFormula::Lit(_) | MuFormula::Var(_) => 1,
            MuFormula::Or(a, b) | MuFormula::And(a, b) => 1 + a.size() + b.size(),
            MuFormula::Diamond(_, f) | MuFormula::Box(_, f) | MuFormula::Mu(_, f) | MuFormula::Nu(_, f) => {
                1 + f.size()
            }
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum GlFormula {
    Lit(Literal),
    Var(PVar),
    Not(Box<GlFormula>),
    Or(Box<GlFormula>, Box<GlFormula>),
    Diamond(Box<Game>, Box<GlFormula>),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Game {
    Act(Action),
    Test(Box<GlFormula>),
    Choice(Box<Game>, Box<Game>),
    Seq(Box<Game>, Box<Game>),
    Repeat(Box<Game>),
    Dual(Box<Game>),
}

impl GlFormula {
    pub fn var(x: &str) -> GlFormula {
        GlFormula::Var(PVar::new(x))
    }

    pub fn pred0(p: &str) -> GlFormula {
        GlFormula::Lit(Literal::pred(p, Vec::new()))
    }

    /// Negation, normalized: literals flip, pvars toggle their bar and
    /// double negations cancel.
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: GlFormula) -> GlFormula {
        match f {
            GlFormula::Lit(l) => GlFormula::Lit(l.negate()),
            GlFormula::Var(x) => GlFormula::Var(x.bar()),
            GlFormula::Not(g) => *g,
            other => GlFormula::Not(Box::new(other)),
        }
    }

    pub fn or(a: GlFormula, b: GlFormula) -> GlFormula {
        GlFormula::Or(Box::new(a), Box::new(b))
    }

    pub fn dia(g: Game, f: GlFormula) -> GlFormula {
        GlFormula::Diamond(Box::new(g), Box::new(f))
    }
}

impl Game {
    pub fn act(a: Action) -> Game {
        Game::Act(a)
    }

    pub fn named(a: &str) -> Game {
        Game::Act(Action::named(a))
    }

    pub fn test(f: GlFormula) -> Game {
        Game::Test(Box::new(f))
    }

    pub fn choice(a: Game, b: Game) -> Game {
        Game::Choice(Box::new(a), Box::new(b))
    }

    pub fn seq(a: Game, b: Game) -> Game {
        Game::Seq(Box::new(a), Box::new(b))
    }

    pub fn repeat(a: Game) -> Game {
        Game::Repeat(Box::new(a))
    }

    pub fn dual(a: Game) -> Game {
        Game::Dual(Box::new(a))
    }
}

/// Either kind of formula, for operations defined on both logics.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Formula {
    Mu(MuFormula),
    Gl(GlFormula),
}

impl fmt::Display for PVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.barred {
            write!(f, "~")?;
        }
        write!(f, "{}", self.base)?;
        for (x, y) in &self.tags {
            write!(f, "@({}, {})", x, y)?;
        }
        Ok(())
    }
}
