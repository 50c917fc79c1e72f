//! Syntactic operations: negation, free variables, well-formedness, rank and sugar.

use std::collections::{BTreeMap, BTreeSet};

use crate::syntax::*;

/// Syntactic negation of a mu-calculus formula.
pub fn bar(f: &MuFormula) -> MuFormula {
    match f {
        MuFormula::Lit(l) => MuFormula::Lit(l.negate()),
        MuFormula::Var(x) => MuFormula::Var(x.bar()),
        MuFormula::Or(a, b) => MuFormula::and(bar(a), bar(b)),
        MuFormula::And(a, b) => MuFormula::or(bar(a), bar(b)),
        MuFormula::Diamond(a, g) => MuFormula::boxed(a.clone(), bar(g)),
        MuFormula::Box(a, g) => MuFormula::dia(a.clone(), bar(g)),
        MuFormula::Mu(x, g) => MuFormula::nu(x.bar(), bar(g)),
        MuFormula::Nu(x, g) => MuFormula::mu(x.bar(), bar(g)),
    }
}

/// Arities and named actions of a signature.
#[derive(Clone, Debug, Default)]
pub struct Signature {
    pub constants: BTreeSet<String>,
    pub functions: BTreeMap<String, usize>,
    pub predicates: BTreeMap<String, usize>,
    /// Footprints of named actions. Actions missing here may touch any variable.
    pub actions: BTreeMap<String, Vec<OVar>>,
}

impl Signature {
    /// Footprint of a (possibly renamed) named action, if declared.
    pub fn footprint(&self, name: &str, tags: &[Swap]) -> Option<Vec<OVar>> {
        let mut fp = self.actions.get(name)?.clone();
        for (x, y) in tags {
            for v in fp.iter_mut() {
                if v == x {
                    *v = y.clone();
                } else if v == y {
                    *v = x.clone();
                }
            }
        }
        Some(fp)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("ill-formed at {path}: {reason}")]
pub struct WellFormedError {
    pub path: String,
    pub reason: String,
}

fn fail<T>(path: &[&str], reason: String) -> Result<T, WellFormedError> {
    let path = if path.is_empty() { "root".to_string() } else { path.join(".") };
    Err(WellFormedError { path, reason })
}

fn check_term(t: &Term, sig: Option<&Signature>, path: &[&str]) -> Result<(), WellFormedError> {
    if let Term::App(f, args) = t {
        if let Some(sig) = sig {
            match sig.functions.get(f) {
                Some(&n) if n == args.len() => {}
                Some(&n) => return fail(path, format!("function {} expects {} arguments, got {}", f, n, args.len())),
                None => return fail(path, format!("undeclared function {}", f)),
            }
        }
        for a in args {
            check_term(a, sig, path)?;
        }
    }
    Ok(())
}

fn check_literal(l: &Literal, sig: Option<&Signature>, path: &[&str]) -> Result<(), WellFormedError> {
    if let (Atom::Pred(p, args), Some(sig)) = (&l.atom, sig) {
        match sig.predicates.get(p) {
            Some(&n) if n == args.len() => {}
            Some(&n) => return fail(path, format!("predicate {} expects {} arguments, got {}", p, n, args.len())),
            None => return fail(path, format!("undeclared predicate {}", p)),
        }
    }
    l.atom.terms().into_iter().try_for_each(|t| check_term(t, sig, path))
}

fn check_action(a: &Action, sig: Option<&Signature>, path: &[&'static str]) -> Result<(), WellFormedError> {
    match a {
        Action::Named { .. } | Action::Random(_) => Ok(()),
        Action::Assign(_, t) => check_term(t, sig, path),
        Action::Ode { eqs, constraint } => {
            let mut seen = BTreeSet::new();
            for (x, t) in eqs {
                if !seen.insert(x) {
                    return fail(path, format!("variable {} evolves twice", x));
                }
                check_term(t, sig, path)?;
            }
            if let Some(c) = constraint {
                let mut p = path.to_vec();
                p.push("constraint");
                wf_mu(c, sig, &mut p)?;
                if !free_pvars_mu(c).is_empty() || has_binder(c) {
                    return fail(&p, "evolution constraint must be first-order".into());
                }
            }
            Ok(())
        }
    }
}

fn has_binder(f: &MuFormula) -> bool {
    match f {
        MuFormula::Lit(_) | MuFormula::Var(_) => false,
        MuFormula::Or(a, b) | MuFormula::And(a, b) => has_binder(a) || has_binder(b),
        MuFormula::Diamond(_, g) | MuFormula::Box(_, g) => has_binder(g),
        MuFormula::Mu(..) | MuFormula::Nu(..) => true,
    }
}

/// True if any occurrence (free or bound, tagged or not) of the pvar with this
/// base and bar status appears in `f`, including binders.
fn mentions_pvar(f: &MuFormula, base: &str, barred: bool) -> bool {
    match f {
        MuFormula::Lit(_) => false,
        MuFormula::Var(y) => y.base == base && y.barred == barred,
        MuFormula::Or(a, b) | MuFormula::And(a, b) => mentions_pvar(a, base, barred) || mentions_pvar(b, base, barred),
        MuFormula::Diamond(_, g) | MuFormula::Box(_, g) => mentions_pvar(g, base, barred),
        MuFormula::Mu(y, g) | MuFormula::Nu(y, g) => {
            (y.base == base && y.barred == barred) || mentions_pvar(g, base, barred)
        }
    }
}

fn wf_mu(f: &MuFormula, sig: Option<&Signature>, path: &mut Vec<&'static str>) -> Result<(), WellFormedError> {
    match f {
        MuFormula::Lit(l) => check_literal(l, sig, path),
        MuFormula::Var(_) => Ok(()),
        MuFormula::Or(a, b) | MuFormula::And(a, b) => {
            path.push("left");
            wf_mu(a, sig, path)?;
            path.pop();
            path.push("right");
            wf_mu(b, sig, path)?;
            path.pop();
            Ok(())
        }
        MuFormula::Diamond(a, g) | MuFormula::Box(a, g) => {
            path.push("action");
            check_action(a, sig, path)?;
            path.pop();
            path.push("body");
            wf_mu(g, sig, path)?;
            path.pop();
            Ok(())
        }
        MuFormula::Mu(x, g) | MuFormula::Nu(x, g) => {
            if x.is_tagged() {
                return fail(path, format!("renamed variable {} cannot be bound", x));
            }
            if mentions_pvar(g, &x.base, !x.barred) {
                return fail(path, format!("{} occurs in the scope of the binder for {}", x.bar(), x));
            }
            path.push("body");
            wf_mu(g, sig, path)?;
            path.pop();
            Ok(())
        }
    }
}

/// Checks the well-formedness conditions; arities are checked when a signature is given.
pub fn well_formed_mu(f: &MuFormula, sig: Option<&Signature>) -> Result<(), WellFormedError> {
    wf_mu(f, sig, &mut Vec::new())
}

fn wf_gl(f: &GlFormula, sig: Option<&Signature>, path: &mut Vec<&'static str>) -> Result<(), WellFormedError> {
    match f {
        GlFormula::Lit(l) => check_literal(l, sig, path),
        GlFormula::Var(_) => Ok(()),
        GlFormula::Not(g) => {
            path.push("not");
            wf_gl(g, sig, path)?;
            path.pop();
            Ok(())
        }
        GlFormula::Or(a, b) => {
            path.push("left");
            wf_gl(a, sig, path)?;
            path.pop();
            path.push("right");
            wf_gl(b, sig, path)?;
            path.pop();
            Ok(())
        }
        GlFormula::Diamond(g, b) => {
            path.push("game");
            wf_game(g, sig, path)?;
            path.pop();
            path.push("body");
            wf_gl(b, sig, path)?;
            path.pop();
            Ok(())
        }
    }
}

fn wf_game(g: &Game, sig: Option<&Signature>, path: &mut Vec<&'static str>) -> Result<(), WellFormedError> {
    match g {
        Game::Act(a) => check_action(a, sig, path),
        Game::Test(f) => {
            path.push("test");
            wf_gl(f, sig, path)?;
            path.pop();
            Ok(())
        }
        Game::Choice(a, b) | Game::Seq(a, b) => {
            path.push("left");
            wf_game(a, sig, path)?;
            path.pop();
            path.push("right");
            wf_game(b, sig, path)?;
            path.pop();
            Ok(())
        }
        Game::Repeat(a) | Game::Dual(a) => {
            path.push("inner");
            wf_game(a, sig, path)?;
            path.pop();
            Ok(())
        }
    }
}

pub fn well_formed_gl(f: &GlFormula, sig: Option<&Signature>) -> Result<(), WellFormedError> {
    wf_gl(f, sig, &mut Vec::new())
}

pub fn well_formed_game(g: &Game, sig: Option<&Signature>) -> Result<(), WellFormedError> {
    wf_game(g, sig, &mut Vec::new())
}

pub fn well_formed(f: &Formula, sig: Option<&Signature>) -> Result<(), WellFormedError> {
    match f {
        Formula::Mu(m) => well_formed_mu(m, sig),
        Formula::Gl(g) => well_formed_gl(g, sig),
    }
}

// ---- free variables ----

fn free_pvars_rec(f: &MuFormula, bound: &mut Vec<String>, out: &mut BTreeSet<PVar>) {
    match f {
        MuFormula::Lit(_) => {}
        MuFormula::Var(y) => {
            if !bound.contains(&y.base) {
                out.insert(y.clone());
            }
        }
        MuFormula::Or(a, b) | MuFormula::And(a, b) => {
            free_pvars_rec(a, bound, out);
            free_pvars_rec(b, bound, out);
        }
        MuFormula::Diamond(_, g) | MuFormula::Box(_, g) => free_pvars_rec(g, bound, out),
        MuFormula::Mu(x, g) | MuFormula::Nu(x, g) => {
            bound.push(x.base.clone());
            free_pvars_rec(g, bound, out);
            bound.pop();
        }
    }
}

/// Free propositional variables, as they occur (barred and tagged variants kept distinct).
pub fn free_pvars_mu(f: &MuFormula) -> BTreeSet<PVar> {
    let mut out = BTreeSet::new();
    free_pvars_rec(f, &mut Vec::new(), &mut out);
    out
}

/// Bases of the free propositional variables.
pub fn free_pvar_bases_mu(f: &MuFormula) -> BTreeSet<String> {
    free_pvars_mu(f).into_iter().map(|x| x.base).collect()
}

pub fn free_pvars_gl(f: &GlFormula) -> BTreeSet<PVar> {
    let mut out = BTreeSet::new();
    pvars_gl(f, &mut out);
    out
}

pub fn free_pvars_game(g: &Game) -> BTreeSet<PVar> {
    let mut out = BTreeSet::new();
    pvars_game(g, &mut out);
    out
}

fn pvars_gl(f: &GlFormula, out: &mut BTreeSet<PVar>) {
    match f {
        GlFormula::Lit(_) => {}
        GlFormula::Var(x) => {
            out.insert(x.clone());
        }
        GlFormula::Not(g) => pvars_gl(g, out),
        GlFormula::Or(a, b) => {
            pvars_gl(a, out);
            pvars_gl(b, out);
        }
        GlFormula::Diamond(g, b) => {
            pvars_game(g, out);
            pvars_gl(b, out);
        }
    }
}

fn pvars_game(g: &Game, out: &mut BTreeSet<PVar>) {
    match g {
        Game::Act(_) => {}
        Game::Test(f) => pvars_gl(f, out),
        Game::Choice(a, b) | Game::Seq(a, b) => {
            pvars_game(a, out);
            pvars_game(b, out);
        }
        Game::Repeat(a) | Game::Dual(a) => pvars_game(a, out),
    }
}

/// All pvar bases occurring anywhere, bound or free.
pub fn all_pvar_bases_mu(f: &MuFormula) -> BTreeSet<String> {
    fn rec(f: &MuFormula, out: &mut BTreeSet<String>) {
        match f {
            MuFormula::Lit(_) => {}
            MuFormula::Var(x) => {
                out.insert(x.base.clone());
            }
            MuFormula::Or(a, b) | MuFormula::And(a, b) => {
                rec(a, out);
                rec(b, out);
            }
            MuFormula::Diamond(_, g) | MuFormula::Box(_, g) => rec(g, out),
            MuFormula::Mu(x, g) | MuFormula::Nu(x, g) => {
                out.insert(x.base.clone());
                rec(g, out);
            }
        }
    }
    let mut out = BTreeSet::new();
    rec(f, &mut out);
    out
}

fn action_ovars(a: &Action, out: &mut BTreeSet<OVar>) {
    match a {
        Action::Named { tags, .. } => {
            for (x, y) in tags {
                out.insert(x.clone());
                out.insert(y.clone());
            }
        }
        Action::Assign(x, t) => {
            out.insert(x.clone());
            out.extend(t.vars());
        }
        Action::Random(x) => {
            out.insert(x.clone());
        }
        Action::Ode { eqs, constraint } => {
            for (x, t) in eqs {
                out.insert(x.clone());
                out.extend(t.vars());
            }
            if let Some(c) = constraint {
                out.extend(free_ovars_mu(c));
            }
        }
    }
}

fn literal_ovars(l: &Literal, out: &mut BTreeSet<OVar>) {
    let mut v = Vec::new();
    l.vars_into(&mut v);
    out.extend(v);
}

/// Object variables the formula depends on syntactically: variables of terms,
/// assignment targets, ODE variables and constraints, and renaming tags.
pub fn free_ovars_mu(f: &MuFormula) -> BTreeSet<OVar> {
    fn rec(f: &MuFormula, out: &mut BTreeSet<OVar>) {
        match f {
            MuFormula::Lit(l) => literal_ovars(l, out),
            MuFormula::Var(x) => {
                for (a, b) in &x.tags {
                    out.insert(a.clone());
                    out.insert(b.clone());
                }
            }
            MuFormula::Or(a, b) | MuFormula::And(a, b) => {
                rec(a, out);
                rec(b, out);
            }
            MuFormula::Diamond(a, g) | MuFormula::Box(a, g) => {
                action_ovars(a, out);
                rec(g, out);
            }
            MuFormula::Mu(_, g) | MuFormula::Nu(_, g) => rec(g, out),
        }
    }
    let mut out = BTreeSet::new();
    rec(f, &mut out);
    out
}

pub fn free_ovars_gl(f: &GlFormula) -> BTreeSet<OVar> {
    let mut out = BTreeSet::new();
    ovars_gl(f, &mut out);
    out
}

pub fn free_ovars_game(g: &Game) -> BTreeSet<OVar> {
    let mut out = BTreeSet::new();
    ovars_game(g, &mut out);
    out
}

fn ovars_gl(f: &GlFormula, out: &mut BTreeSet<OVar>) {
    match f {
        GlFormula::Lit(l) => literal_ovars(l, out),
        GlFormula::Var(x) => {
            for (a, b) in &x.tags {
                out.insert(a.clone());
                out.insert(b.clone());
            }
        }
        GlFormula::Not(g) => ovars_gl(g, out),
        GlFormula::Or(a, b) => {
            ovars_gl(a, out);
            ovars_gl(b, out);
        }
        GlFormula::Diamond(g, b) => {
            ovars_game(g, out);
            ovars_gl(b, out);
        }
    }
}

fn ovars_game(g: &Game, out: &mut BTreeSet<OVar>) {
    match g {
        Game::Act(a) => action_ovars(a, out),
        Game::Test(f) => ovars_gl(f, out),
        Game::Choice(a, b) | Game::Seq(a, b) => {
            ovars_game(a, out);
            ovars_game(b, out);
        }
        Game::Repeat(a) | Game::Dual(a) => ovars_game(a, out),
    }
}

/// Actions occurring in a formula, in first-occurrence order.
pub fn actions_mu(f: &MuFormula) -> Vec<Action> {
    fn rec(f: &MuFormula, out: &mut Vec<Action>) {
        match f {
            MuFormula::Lit(_) | MuFormula::Var(_) => {}
            MuFormula::Or(a, b) | MuFormula::And(a, b) => {
                rec(a, out);
                rec(b, out);
            }
            MuFormula::Diamond(a, g) | MuFormula::Box(a, g) => {
                if !out.contains(a) {
                    out.push(a.clone());
                }
                rec(g, out);
            }
            MuFormula::Mu(_, g) | MuFormula::Nu(_, g) => rec(g, out),
        }
    }
    let mut out = Vec::new();
    rec(f, &mut out);
    out
}

pub fn actions_game(g: &Game) -> Vec<Action> {
    fn rec_f(f: &GlFormula, out: &mut Vec<Action>) {
        match f {
            GlFormula::Lit(_) | GlFormula::Var(_) => {}
            GlFormula::Not(g) => rec_f(g, out),
            GlFormula::Or(a, b) => {
                rec_f(a, out);
                rec_f(b, out);
            }
            GlFormula::Diamond(g, b) => {
                rec_g(g, out);
                rec_f(b, out);
            }
        }
    }
    fn rec_g(g: &Game, out: &mut Vec<Action>) {
        match g {
            Game::Act(a) => {
                if !out.contains(a) {
                    out.push(a.clone());
                }
            }
            Game::Test(f) => rec_f(f, out),
            Game::Choice(a, b) | Game::Seq(a, b) => {
                rec_g(a, out);
                rec_g(b, out);
            }
            Game::Repeat(a) | Game::Dual(a) => rec_g(a, out),
        }
    }
    let mut out = Vec::new();
    rec_g(g, &mut out);
    out
}

pub fn actions_gl(f: &GlFormula) -> Vec<Action> {
    actions_game(&Game::test(f.clone()))
}

// ---- rank ----

pub fn rank_gl(f: &GlFormula) -> usize {
    match f {
        GlFormula::Lit(_) | GlFormula::Var(_) => 0,
        GlFormula::Not(g) => rank_gl(g) + 1,
        GlFormula::Or(a, b) => rank_gl(a) + rank_gl(b) + 1,
        GlFormula::Diamond(g, b) => rank_game(g) + rank_gl(b) + 1,
    }
}

pub fn rank_game(g: &Game) -> usize {
    match g {
        Game::Act(_) => 0,
        Game::Test(f) => rank_gl(f),
        Game::Choice(a, b) => rank_game(a).max(rank_game(b)) + 1,
        Game::Seq(a, b) => rank_game(a) + rank_game(b) + 2,
        Game::Dual(a) | Game::Repeat(a) => rank_game(a) + 2,
    }
}

// ---- definable constructs ----

/// Constructs that are abbreviations in the core syntax.
#[derive(Clone, Debug)]
pub enum Sugar {
    DemonicChoice(Game, Game),
    DemonicRepeat(Game),
    GlBox(Game, GlFormula),
    GlImp(GlFormula, GlFormula),
    GlIff(GlFormula, GlFormula),
    GlAnd(GlFormula, GlFormula),
    GlTrue,
    GlFalse,
    MuImp(MuFormula, MuFormula),
    MuIff(MuFormula, MuFormula),
    MuTrue,
    MuFalse,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Desugared {
    Game(Game),
    Gl(GlFormula),
    Mu(MuFormula),
}

pub fn desugar(s: Sugar) -> Desugared {
    match s {
        Sugar::DemonicChoice(a, b) => Desugared::Game(dchoice(a, b)),
        Sugar::DemonicRepeat(a) => Desugared::Game(drepeat(a)),
        Sugar::GlBox(g, f) => Desugared::Gl(gl_box(g, f)),
        Sugar::GlImp(a, b) => Desugared::Gl(gl_imp(a, b)),
        Sugar::GlIff(a, b) => Desugared::Gl(gl_iff(a, b)),
        Sugar::GlAnd(a, b) => Desugared::Gl(gl_and(a, b)),
        Sugar::GlTrue => Desugared::Gl(gl_true()),
        Sugar::GlFalse => Desugared::Gl(gl_false()),
        Sugar::MuImp(a, b) => Desugared::Mu(mu_imp(a, b)),
        Sugar::MuIff(a, b) => Desugared::Mu(mu_iff(a, b)),
        Sugar::MuTrue => Desugared::Mu(mu_true()),
        Sugar::MuFalse => Desugared::Mu(mu_false()),
    }
}

/// The literal whose excluded middle stands for truth.
pub fn truth_literal() -> Literal {
    Literal::eq(Term::cst("0"), Term::cst("0"))
}

pub fn dchoice(a: Game, b: Game) -> Game {
    Game::dual(Game::choice(Game::dual(a), Game::dual(b)))
}

pub fn drepeat(a: Game) -> Game {
    Game::dual(Game::repeat(Game::dual(a)))
}

pub fn gl_box(g: Game, f: GlFormula) -> GlFormula {
    GlFormula::dia(Game::dual(g), f)
}

pub fn gl_imp(a: GlFormula, b: GlFormula) -> GlFormula {
    GlFormula::or(GlFormula::not(a), b)
}

pub fn gl_and(a: GlFormula, b: GlFormula) -> GlFormula {
    GlFormula::not(GlFormula::or(GlFormula::not(a), GlFormula::not(b)))
}

pub fn gl_iff(a: GlFormula, b: GlFormula) -> GlFormula {
    gl_and(gl_imp(a.clone(), b.clone()), gl_imp(b, a))
}

pub fn gl_true() -> GlFormula {
    let p = truth_literal();
    GlFormula::or(GlFormula::Lit(p.clone()), GlFormula::Lit(p.negate()))
}

pub fn gl_false() -> GlFormula {
    GlFormula::not(gl_true())
}

pub fn mu_imp(a: MuFormula, b: MuFormula) -> MuFormula {
    MuFormula::or(bar(&a), b)
}

pub fn mu_iff(a: MuFormula, b: MuFormula) -> MuFormula {
    MuFormula::and(mu_imp(a.clone(), b.clone()), mu_imp(b, a))
}

pub fn mu_true() -> MuFormula {
    let p = truth_literal();
    MuFormula::or(MuFormula::Lit(p.clone()), MuFormula::Lit(p.negate()))
}

pub fn mu_false() -> MuFormula {
    bar(&mu_true())
}

/// Splits `a -> b` (encoded as `bar(a) | b`).
pub fn as_mu_imp(f: &MuFormula) -> Option<(MuFormula, MuFormula)> {
    match f {
        MuFormula::Or(a, b) => Some((bar(a), (**b).clone())),
        _ => None,
    }
}

/// Splits `a <-> b`.
pub fn as_mu_iff(f: &MuFormula) -> Option<(MuFormula, MuFormula)> {
    match f {
        MuFormula::And(l, r) => {
            let (a, b) = as_mu_imp(l)?;
            let (b2, a2) = as_mu_imp(r)?;
            (a == a2 && b == b2).then_some((a, b))
        }
        _ => None,
    }
}

pub fn as_gl_imp(f: &GlFormula) -> Option<(GlFormula, GlFormula)> {
    match f {
        GlFormula::Or(a, b) => Some((GlFormula::not((**a).clone()), (**b).clone())),
        _ => None,
    }
}

pub fn as_gl_and(f: &GlFormula) -> Option<(GlFormula, GlFormula)> {
    match f {
        GlFormula::Not(inner) => match &**inner {
            GlFormula::Or(a, b) => Some((GlFormula::not((**a).clone()), GlFormula::not((**b).clone()))),
            _ => None,
        },
        _ => None,
    }
}

pub fn as_gl_iff(f: &GlFormula) -> Option<(GlFormula, GlFormula)> {
    let (l, r) = as_gl_and(f)?;
    let (a, b) = as_gl_imp(&l)?;
    let (b2, a2) = as_gl_imp(&r)?;
    (a == a2 && b == b2).then_some((a, b))
}
