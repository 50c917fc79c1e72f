use std::collections::BTreeSet;

use crate::binding::{fresh_ovar, rename_bound_apart, CONTROL_PREFIX};
use crate::logic::{dchoice, drepeat, free_ovars_mu, gl_and, gl_false, gl_true};
use crate::semantics::{eval_gl, EvalError, FiniteStructure, StateSet, Valuation};
use crate::syntax::*;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FlatError {
    #[error("dictionary marks bound variable {0} as controlled")]
    Incompatible(String),
    #[error("variable {0} is bound more than once")]
    NotApart(String),
    #[error("no control variable for {0}")]
    NoControl(String),
    #[error("controlled variable {0} carries a renaming")]
    Tagged(PVar),
    #[error("structure does not interpret distinct constants 0 and 1")]
    NotAssignmentStructure,
    #[error("transition {0} touches a control variable")]
    ControlInFootprint(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Marks which pvars are translated as jumps back to their fixpoint (value 1).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TranslationDictionary {
    ones: BTreeSet<String>,
}

impl TranslationDictionary {
    pub fn zero() -> TranslationDictionary {
        TranslationDictionary::default()
    }

    pub fn get(&self, x: &PVar) -> u8 {
        self.ones.contains(&x.base) as u8
    }

    /// The dictionary with `x` (and its bar) set to 1.
    pub fn with_one(&self, x: &PVar) -> TranslationDictionary {
        let mut d = self.clone();
        d.ones.insert(x.base.clone());
        d
    }

    pub fn ones(&self) -> impl Iterator<Item = &String> {
        self.ones.iter()
    }

    /// Bound pvars of `f` must map to 0.
    pub fn check_compatible(&self, f: &MuFormula) -> Result<(), FlatError> {
        for b in bound_bases(f) {
            if self.ones.contains(&b) {
                return Err(FlatError::Incompatible(b));
            }
        }
        Ok(())
    }
}

/// Binder bases in order of occurrence, with repetitions.
fn bound_bases(f: &MuFormula) -> Vec<String> {
    fn rec(f: &MuFormula, out: &mut Vec<String>) {
        match f {
            MuFormula::Lit(_) | MuFormula::Var(_) => {}
            MuFormula::Or(a, b) | MuFormula::And(a, b) => {
                rec(a, out);
                rec(b, out);
            }
            MuFormula::Diamond(_, g) | MuFormula::Box(_, g) => rec(g, out),
            MuFormula::Mu(x, g) | MuFormula::Nu(x, g) => {
                out.push(x.base.clone());
                rec(g, out);
            }
        }
    }
    let mut out = Vec::new();
    rec(f, &mut out);
    out
}

/// One 0/1 flag variable per controlled pvar; exactly one flag is set at a time.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ControlEncoding {
    pub pvars: Vec<String>,
    pub vars: Vec<OVar>,
}

impl ControlEncoding {
    /// Flags for `pvars`, named away from `avoid`.
    pub fn new(pvars: Vec<String>, avoid: &BTreeSet<OVar>) -> ControlEncoding {
        let mut used = avoid.clone();
        let vars = pvars
            .iter()
            .map(|_| {
                let v = fresh_ovar(CONTROL_PREFIX, &used);
                used.insert(v.clone());
                v
            })
            .collect();
        ControlEncoding { pvars, vars }
    }

    fn position(&self, base: &str) -> Result<usize, FlatError> {
        self.pvars.iter().position(|p| p == base).ok_or_else(|| FlatError::NoControl(base.to_string()))
    }

    /// `c1 := 0; ...; cn := 0; ci := 1`.
    pub fn set_game(&self, base: &str) -> Result<Game, FlatError> {
        let i = self.position(base)?;
        let set = |v: &OVar, c: &str| Game::act(Action::assign(v, Term::cst(c)));
        let g = self.vars.iter().skip(1).fold(set(&self.vars[0], "0"), |g, v| Game::seq(g, set(v, "0")));
        Ok(Game::seq(g, set(&self.vars[i], "1")))
    }

    /// The flags read "continue with `base`".
    pub fn eq_formula(&self, base: &str) -> Result<GlFormula, FlatError> {
        let i = self.position(base)?;
        let lit = |j: usize| {
            let c = if j == i { "1" } else { "0" };
            GlFormula::Lit(Literal::eq(Term::var(&self.vars[j]), Term::cst(c)))
        };
        let mut f = lit(self.vars.len() - 1);
        for j in (0..self.vars.len() - 1).rev() {
            f = gl_and(lit(j), f);
        }
        Ok(f)
    }
}

fn fail_game(test: GlFormula) -> Game {
    Game::seq(Game::test(test), Game::dual(Game::test(gl_false())))
}

/// The game translation of `f` under dictionary `th`. Every pvar must be
/// bound at most once and the dictionary must be compatible with `f`.
pub fn flat_game(f: &MuFormula, th: &TranslationDictionary, enc: &ControlEncoding) -> Result<Game, FlatError> {
    th.check_compatible(f)?;
    let mut seen = BTreeSet::new();
    for b in bound_bases(f) {
        if !seen.insert(b.clone()) {
            return Err(FlatError::NotApart(b));
        }
    }
    rec(f, th, enc)
}

fn rec(f: &MuFormula, th: &TranslationDictionary, enc: &ControlEncoding) -> Result<Game, FlatError> {
    Ok(match f {
        MuFormula::Lit(l) => fail_game(GlFormula::Lit(l.clone())),
        MuFormula::Var(x) if th.get(x) == 0 => fail_game(GlFormula::Var(x.clone())),
        MuFormula::Var(x) => {
            if x.is_tagged() {
                return Err(FlatError::Tagged(x.clone()));
            }
            enc.set_game(&x.base)?
        }
        MuFormula::Or(a, b) => Game::choice(rec(a, th, enc)?, rec(b, th, enc)?),
        MuFormula::And(a, b) => dchoice(rec(a, th, enc)?, rec(b, th, enc)?),
        MuFormula::Diamond(a, g) => Game::seq(Game::act(a.clone()), rec(g, th, enc)?),
        MuFormula::Box(a, g) => Game::seq(Game::dual(Game::act(a.clone())), rec(g, th, enc)?),
        MuFormula::Mu(x, g) => {
            let eq = enc.eq_formula(&x.base)?;
            let body = rec(g, &th.with_one(x), enc)?;
            let lp = Game::repeat(Game::seq(Game::test(eq.clone()), body));
            Game::seq(enc.set_game(&x.base)?, Game::seq(lp, Game::test(GlFormula::not(eq))))
        }
        MuFormula::Nu(x, g) => {
            let eq = enc.eq_formula(&x.base)?;
            let body = rec(g, &th.with_one(x), enc)?;
            let lp = drepeat(Game::seq(Game::dual(Game::test(eq.clone())), body));
            Game::seq(enc.set_game(&x.base)?, Game::seq(lp, Game::dual(Game::test(GlFormula::not(eq)))))
        }
    })
}

/// `<f^0> true` after renaming bound variables apart, with control flags
/// named away from `avoid` and from the formula's own object variables.
pub fn flat_with(f: &MuFormula, avoid: &BTreeSet<OVar>) -> Result<(GlFormula, ControlEncoding), FlatError> {
    let apart = rename_bound_apart(f, &BTreeSet::new());
    let mut used = avoid.clone();
    used.extend(free_ovars_mu(&apart));
    let enc = ControlEncoding::new(bound_bases(&apart), &used);
    let g = flat_game(&apart, &TranslationDictionary::zero(), &enc)?;
    Ok((GlFormula::dia(g, gl_true()), enc))
}

pub fn flat(f: &MuFormula) -> Result<GlFormula, FlatError> {
    flat_with(f, &BTreeSet::new()).map(|(g, _)| g)
}

/// Evaluates the translation of `f` on `s` extended by the control flags.
/// The valuation is lifted as cylinders. Returns the extended structure and
/// the denotation over it.
pub fn eval_flat_extended(
    s: &FiniteStructure,
    om: &Valuation,
    f: &MuFormula,
) -> Result<(FiniteStructure, StateSet), FlatError> {
    let origin = vec![0; s.support.len()];
    match (s.eval_term(&origin, &Term::cst("0")), s.eval_term(&origin, &Term::cst("1"))) {
        (Ok(a), Ok(b)) if a != b => {}
        _ => return Err(FlatError::NotAssignmentStructure),
    }
    let mut avoid: BTreeSet<OVar> = s.support.iter().cloned().collect();
    avoid.extend(s.footprint_vars());
    let (g, enc) = flat_with(f, &avoid)?;
    for (name, t) in &s.transitions {
        if t.footprint.iter().any(|v| enc.vars.contains(v)) {
            return Err(FlatError::ControlInFootprint(name.clone()));
        }
    }
    let ext = s.extend_support(&enc.vars);
    let mut lifted = Valuation::new();
    for (k, d) in &om.sets {
        lifted.sets.insert(k.clone(), s.cylindrify(&ext, d)?);
    }
    let big = eval_gl(&ext, &lifted, &g)?;
    Ok((ext, big))
}

/// Denotation of the translation of `f`, read off at control flags all 0.
pub fn eval_flat(s: &FiniteStructure, om: &Valuation, f: &MuFormula) -> Result<StateSet, FlatError> {
    let (ext, big) = eval_flat_extended(s, om, f)?;
    let n = s.num_states()?;
    let k = ext.num_states()? / n;
    Ok(StateSet::from_fn(n, |i| big.contains(i * k)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::eval_mu;
    use crate::surface::{parse_mu, parse_structure, print_game};

    const TOGGLE: &str = r#"{"domain": ["0", "1"], "support": ["x"],
        "transitions": {"tog": {"footprint": ["x"], "pairs": [[{"x": "0"}, {"x": "1"}], [{"x": "1"}, {"x": "0"}]]}}}"#;

    #[test]
    fn literal_and_controlled_variable() {
        let enc = ControlEncoding::new(vec!["X".into()], &BTreeSet::new());
        let th = TranslationDictionary::zero();
        let p = flat_game(&parse_mu("p").unwrap(), &th, &enc).unwrap();
        assert_eq!(print_game(&p), "?p; (?!(0 = 0 | 0 != 0))^d");
        let x = flat_game(&parse_mu("X").unwrap(), &th.with_one(&PVar::new("X")), &enc).unwrap();
        assert_eq!(print_game(&x), "ctl0 := 0; ctl0 := 1");
    }

    #[test]
    fn incompatible_dictionary() {
        let enc = ControlEncoding::new(vec!["X".into()], &BTreeSet::new());
        let th = TranslationDictionary::zero().with_one(&PVar::new("X"));
        let f = parse_mu("mu X. (p | <a> X)").unwrap();
        assert!(matches!(flat_game(&f, &th, &enc), Err(FlatError::Incompatible(_))));
    }

    #[test]
    fn toggle_reachability() {
        let s = parse_structure(TOGGLE).unwrap();
        let f = parse_mu("mu X. (x = 1 | <tog> X)").unwrap();
        let d = eval_flat(&s, &Valuation::new(), &f).unwrap();
        assert!(d.is_full());
        assert_eq!(d, eval_mu(&s, &Valuation::new(), &f).unwrap());
        let g = parse_mu("nu X. (x = 1 & [tog] X)").unwrap();
        assert!(eval_flat(&s, &Valuation::new(), &g).unwrap().is_empty());
    }
}
