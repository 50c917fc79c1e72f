use super::lexer::{lex, Tok, Token};
use super::ParseError;
use crate::logic::{
    bar, dchoice, drepeat, gl_and, gl_false, gl_iff, gl_imp, gl_true, mu_false, mu_iff, mu_imp, mu_true,
};
use crate::syntax::*;

pub struct Parser {
    toks: Vec<Token>,
    i: usize,
    end: usize,
}

type R<T> = Result<T, ParseError>;

/// Formula-language specific constructors, so one precedence climber serves both logics.
pub trait Lang {
    type F;
    fn lit(l: Literal) -> Self::F;
    fn pvar(x: PVar) -> Self::F;
    fn or(a: Self::F, b: Self::F) -> Self::F;
    fn and(a: Self::F, b: Self::F) -> Self::F;
    fn not(a: Self::F) -> Self::F;
    fn imp(a: Self::F, b: Self::F) -> Self::F;
    fn iff(a: Self::F, b: Self::F) -> Self::F;
    fn tt() -> Self::F;
    fn ff() -> Self::F;
    fn modal(p: &mut Parser, diamond: bool) -> R<Self::F>;
    fn binder(p: &mut Parser, least: bool) -> R<Self::F>;
}

pub struct Mu;
pub struct Gl;

impl Lang for Mu {
    type F = MuFormula;
    fn lit(l: Literal) -> MuFormula {
        MuFormula::Lit(l)
    }
    fn pvar(x: PVar) -> MuFormula {
        MuFormula::Var(x)
    }
    fn or(a: MuFormula, b: MuFormula) -> MuFormula {
        MuFormula::or(a, b)
    }
    fn and(a: MuFormula, b: MuFormula) -> MuFormula {
        MuFormula::and(a, b)
    }
    fn not(a: MuFormula) -> MuFormula {
        bar(&a)
    }
    fn imp(a: MuFormula, b: MuFormula) -> MuFormula {
        mu_imp(a, b)
    }
    fn iff(a: MuFormula, b: MuFormula) -> MuFormula {
        mu_iff(a, b)
    }
    fn tt() -> MuFormula {
        mu_true()
    }
    fn ff() -> MuFormula {
        mu_false()
    }
    fn modal(p: &mut Parser, diamond: bool) -> R<MuFormula> {
        let a = p.action()?;
        p.expect(if diamond { ">" } else { "]" })?;
        let body = p.unary::<Mu>()?;
        Ok(if diamond { MuFormula::dia(a, body) } else { MuFormula::boxed(a, body) })
    }
    fn binder(p: &mut Parser, least: bool) -> R<MuFormula> {
        let x = p.pvar()?;
        p.expect(".")?;
        let body = p.unary::<Mu>()?;
        Ok(if least { MuFormula::mu(x, body) } else { MuFormula::nu(x, body) })
    }
}

impl Lang for Gl {
    type F = GlFormula;
    fn lit(l: Literal) -> GlFormula {
        GlFormula::Lit(l)
    }
    fn pvar(x: PVar) -> GlFormula {
        GlFormula::Var(x)
    }
    fn or(a: GlFormula, b: GlFormula) -> GlFormula {
        GlFormula::or(a, b)
    }
    fn and(a: GlFormula, b: GlFormula) -> GlFormula {
        gl_and(a, b)
    }
    fn not(a: GlFormula) -> GlFormula {
        GlFormula::not(a)
    }
    fn imp(a: GlFormula, b: GlFormula) -> GlFormula {
        gl_imp(a, b)
    }
    fn iff(a: GlFormula, b: GlFormula) -> GlFormula {
        gl_iff(a, b)
    }
    fn tt() -> GlFormula {
        gl_true()
    }
    fn ff() -> GlFormula {
        gl_false()
    }
    fn modal(p: &mut Parser, diamond: bool) -> R<GlFormula> {
        let g = p.game()?;
        p.expect(if diamond { ">" } else { "]" })?;
        let body = p.unary::<Gl>()?;
        Ok(GlFormula::dia(if diamond { g } else { Game::dual(g) }, body))
    }
    fn binder(p: &mut Parser, _least: bool) -> R<GlFormula> {
        Err(ParseError::at(p.pos(), "fixpoint binders are not part of game logic"))
    }
}

const TERM_FOLLOW: &[&str] = &["=", "!=", "<=", ">=", "+", "-", "*", "/", "("];

impl Parser {
    pub fn new(text: &str) -> R<Parser> {
        let toks = lex(text)?;
        Ok(Parser { toks, i: 0, end: text.len() })
    }

    pub fn whole<T>(mut self, f: impl FnOnce(&mut Parser) -> R<T>) -> R<T> {
        let v = f(&mut self)?;
        if self.i < self.toks.len() {
            return Err(ParseError::at(self.pos(), format!("unexpected {}", self.describe())));
        }
        Ok(v)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.i).map(|t| t.pos).unwrap_or(self.end)
    }

    fn describe(&self) -> String {
        match self.toks.get(self.i).map(|t| &t.tok) {
            Some(Tok::Ident(s)) | Some(Tok::Num(s)) => format!("'{}'", s),
            Some(Tok::Sym(s)) => format!("'{}'", s),
            None => "end of input".into(),
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|t| &t.tok)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.i + k).map(|t| &t.tok)
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Tok::Sym(t)) if *t == s)
    }

    fn sym_at(&self, k: usize, s: &str) -> bool {
        matches!(self.peek_at(k), Some(Tok::Sym(t)) if *t == s)
    }

    fn is_ident(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(t)) if t == s)
    }

    fn eat(&mut self, s: &str) -> bool {
        if self.is_sym(s) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> R<()> {
        if self.eat(s) {
            Ok(())
        } else {
            Err(ParseError::at(self.pos(), format!("expected '{}', found {}", s, self.describe())))
        }
    }

    fn ident(&mut self) -> R<String> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.i += 1;
                Ok(s)
            }
            _ => Err(ParseError::at(self.pos(), format!("expected identifier, found {}", self.describe()))),
        }
    }

    pub fn mu_formula(&mut self) -> R<MuFormula> {
        self.iff::<Mu>()
    }

    pub fn gl_formula(&mut self) -> R<GlFormula> {
        self.iff::<Gl>()
    }

    fn iff<L: Lang>(&mut self) -> R<L::F> {
        let a = self.imp::<L>()?;
        if self.eat("<->") {
            let b = self.iff::<L>()?;
            return Ok(L::iff(a, b));
        }
        Ok(a)
    }

    fn imp<L: Lang>(&mut self) -> R<L::F> {
        let a = self.or::<L>()?;
        if self.eat("->") {
            let b = self.imp::<L>()?;
            return Ok(L::imp(a, b));
        }
        Ok(a)
    }

    fn or<L: Lang>(&mut self) -> R<L::F> {
        let mut a = self.and::<L>()?;
        while self.eat("|") {
            let b = self.and::<L>()?;
            a = L::or(a, b);
        }
        Ok(a)
    }

    fn and<L: Lang>(&mut self) -> R<L::F> {
        let mut a = self.unary::<L>()?;
        while self.eat("&") {
            let b = self.unary::<L>()?;
            a = L::and(a, b);
        }
        Ok(a)
    }

    fn unary<L: Lang>(&mut self) -> R<L::F> {
        if self.eat("!") {
            let a = self.unary::<L>()?;
            return Ok(L::not(a));
        }
        if self.eat("<") {
            return L::modal(self, true);
        }
        if self.eat("[") {
            return L::modal(self, false);
        }
        if self.is_ident("mu") || self.is_ident("nu") {
            let least = self.is_ident("mu");
            self.i += 1;
            return L::binder(self, least);
        }
        if self.is_ident("true") || self.is_ident("false") {
            let t = self.is_ident("true");
            self.i += 1;
            return Ok(if t { L::tt() } else { L::ff() });
        }
        if self.is_sym("(") && !self.paren_is_term() {
            self.i += 1;
            let f = self.iff::<L>()?;
            self.expect(")")?;
            return Ok(f);
        }
        if self.is_sym("~") {
            return Ok(L::pvar(self.pvar()?));
        }
        if let Some(Tok::Ident(s)) = self.peek() {
            let upper = s.chars().next().is_some_and(|c| c.is_ascii_uppercase());
            let term_follows = TERM_FOLLOW.iter().any(|t| self.sym_at(1, t));
            if upper && !term_follows {
                return Ok(L::pvar(self.pvar()?));
            }
        }
        self.atom().map(L::lit)
    }

    /// Decides whether a parenthesis opens a term such as `(x + 1) = y`.
    fn paren_is_term(&self) -> bool {
        let mut depth = 0usize;
        let mut k = self.i;
        while k < self.toks.len() {
            match &self.toks[k].tok {
                Tok::Sym("(") => depth += 1,
                Tok::Sym(")") => {
                    depth -= 1;
                    if depth == 0 {
                        return matches!(
                            self.toks.get(k + 1).map(|t| &t.tok),
                            Some(Tok::Sym("=" | "!=" | "<=" | ">=" | "+" | "-" | "*" | "/"))
                        );
                    }
                }
                Tok::Sym("|" | "&" | "->" | "<->" | "<" | "[" | "!" | "~") => return false,
                Tok::Ident(s) if s == "mu" || s == "nu" || s == "true" || s == "false" => return false,
                _ => {}
            }
            k += 1;
        }
        false
    }

    fn atom(&mut self) -> R<Literal> {
        let pos = self.pos();
        let t = self.term()?;
        for (sym, pred) in [("=", None), ("!=", None), ("<=", Some("<=")), (">=", Some(">="))] {
            if self.eat(sym) {
                let u = self.term()?;
                return Ok(match pred {
                    None => Literal { positive: sym == "=", atom: Atom::Eq(t, u) },
                    Some(p) => Literal::pred(p, vec![t, u]),
                });
            }
        }
        match t {
            Term::Var(p) => Ok(Literal::pred(&p, Vec::new())),
            Term::App(p, args) if p.chars().next().is_some_and(|c| c.is_ascii_alphabetic()) => {
                Ok(Literal::pred(&p, args))
            }
            _ => Err(ParseError::at(pos, "expected a formula")),
        }
    }

    pub fn pvar(&mut self) -> R<PVar> {
        let barred = self.eat("~");
        let base = self.ident()?;
        let mut x = PVar { base, barred, tags: Vec::new() };
        while self.is_sym("@") {
            let (a, b) = self.tag()?;
            x.tags.push((a, b));
        }
        Ok(x)
    }

    fn tag(&mut self) -> R<(String, String)> {
        self.expect("@")?;
        self.expect("(")?;
        let a = self.ident()?;
        self.expect(",")?;
        let b = self.ident()?;
        self.expect(")")?;
        Ok((a, b))
    }

    // ---- terms ----

    pub fn term(&mut self) -> R<Term> {
        let mut a = self.product()?;
        loop {
            let op = if self.is_sym("+") {
                "+"
            } else if self.is_sym("-") {
                "-"
            } else {
                return Ok(a);
            };
            self.i += 1;
            let b = self.product()?;
            a = Term::app(op, vec![a, b]);
        }
    }

    fn starts_factor(&self, k: usize) -> bool {
        matches!(self.peek_at(k), Some(Tok::Ident(_)) | Some(Tok::Num(_)) | Some(Tok::Sym("(")) | Some(Tok::Sym("-")))
    }

    fn product(&mut self) -> R<Term> {
        let mut a = self.neg()?;
        loop {
            let op = if self.is_sym("*") && self.starts_factor(1) {
                "*"
            } else if self.is_sym("/") {
                "/"
            } else {
                return Ok(a);
            };
            self.i += 1;
            let b = self.neg()?;
            a = Term::app(op, vec![a, b]);
        }
    }

    fn neg(&mut self) -> R<Term> {
        if self.eat("-") {
            let a = self.neg()?;
            return Ok(Term::app("-", vec![a]));
        }
        self.primary_term()
    }

    fn primary_term(&mut self) -> R<Term> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.i += 1;
                Ok(Term::Const(n))
            }
            Some(Tok::Ident(s)) => {
                self.i += 1;
                if self.eat("(") {
                    let mut args = Vec::new();
                    if !self.eat(")") {
                        loop {
                            args.push(self.term()?);
                            if self.eat(")") {
                                break;
                            }
                            self.expect(",")?;
                        }
                    }
                    if args.is_empty() {
                        return Ok(Term::Const(s));
                    }
                    return Ok(Term::App(s, args));
                }
                Ok(Term::Var(s))
            }
            Some(Tok::Sym("(")) => {
                self.i += 1;
                let t = self.term()?;
                self.expect(")")?;
                Ok(t)
            }
            _ => Err(ParseError::at(self.pos(), format!("expected a term, found {}", self.describe()))),
        }
    }

    // ---- actions and games ----

    pub fn action(&mut self) -> R<Action> {
        if self.eat("{") {
            return self.ode();
        }
        let name = self.ident()?;
        if self.eat(":=") {
            if self.eat("*") {
                return Ok(Action::Random(name));
            }
            let t = self.term()?;
            return Ok(Action::Assign(name, t));
        }
        let mut tags = Vec::new();
        while self.is_sym("@") {
            tags.push(self.tag()?);
        }
        Ok(Action::Named { name, tags })
    }

    fn ode(&mut self) -> R<Action> {
        let mut eqs = Vec::new();
        loop {
            let x = self.ident()?;
            self.expect("'")?;
            self.expect("=")?;
            let t = self.term()?;
            eqs.push((x, t));
            if self.eat(",") {
                continue;
            }
            break;
        }
        let constraint = if self.eat("&") { Some(Box::new(self.mu_formula()?)) } else { None };
        self.expect("}")?;
        Ok(Action::Ode { eqs, constraint })
    }

    pub fn game(&mut self) -> R<Game> {
        let mut a = self.seq_game()?;
        loop {
            if self.is_ident("u") {
                self.i += 1;
                let b = self.seq_game()?;
                a = Game::choice(a, b);
            } else if self.is_ident("n") {
                self.i += 1;
                let b = self.seq_game()?;
                a = dchoice(a, b);
            } else {
                return Ok(a);
            }
        }
    }

    fn seq_game(&mut self) -> R<Game> {
        let mut a = self.postfix_game()?;
        while self.eat(";") {
            let b = self.postfix_game()?;
            a = Game::seq(a, b);
        }
        Ok(a)
    }

    fn postfix_game(&mut self) -> R<Game> {
        let mut g = self.primary_game()?;
        loop {
            if self.eat("*") {
                g = Game::repeat(g);
            } else if self.is_sym("^") {
                self.i += 1;
                let pos = self.pos();
                match self.ident()?.as_str() {
                    "d" => g = Game::dual(g),
                    "x" => g = drepeat(g),
                    other => return Err(ParseError::at(pos, format!("unknown game suffix ^{}", other))),
                }
            } else {
                return Ok(g);
            }
        }
    }

    fn primary_game(&mut self) -> R<Game> {
        if self.eat("?") {
            let f = self.gl_formula()?;
            return Ok(Game::test(f));
        }
        if self.eat("(") {
            let g = self.game()?;
            self.expect(")")?;
            return Ok(g);
        }
        Ok(Game::Act(self.action()?))
    }
}
