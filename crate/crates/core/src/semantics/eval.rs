use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use super::fixpoint::{gfp, lfp};
use super::stateset::StateSet;
use super::structure::FiniteStructure;
use super::EvalError;
use crate::syntax::*;

/// Values of propositional variables, keyed by base name. Barred and renamed
/// variants are derived on lookup.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Valuation {
    pub sets: BTreeMap<String, StateSet>,
}

impl Valuation {
    pub fn new() -> Valuation {
        Valuation::default()
    }

    pub fn with(mut self, x: &str, d: StateSet) -> Valuation {
        self.sets.insert(x.to_string(), d);
        self
    }

    /// Sets the value of `x`, storing the complement when `x` is barred.
    pub fn set(&mut self, x: &PVar, d: StateSet) {
        let d = if x.barred { d.complement() } else { d };
        self.sets.insert(x.base.clone(), d);
    }
}

/// Evaluation context with a per-action transition cache.
pub struct Evaluator<'a> {
    pub structure: &'a FiniteStructure,
    n: usize,
    cache: HashMap<Action, Rc<Vec<Vec<usize>>>>,
}

impl<'a> Evaluator<'a> {
    pub fn new(structure: &'a FiniteStructure) -> Result<Evaluator<'a>, EvalError> {
        let n = structure.num_states()?;
        Ok(Evaluator { structure, n, cache: HashMap::new() })
    }

    pub fn num_states(&self) -> usize {
        self.n
    }

    fn succ(&mut self, a: &Action) -> Result<Rc<Vec<Vec<usize>>>, EvalError> {
        if let Some(r) = self.cache.get(a) {
            return Ok(r.clone());
        }
        let r = Rc::new(self.structure.transition(a)?);
        self.cache.insert(a.clone(), r.clone());
        Ok(r)
    }

    pub fn diamond(&mut self, a: &Action, d: &StateSet) -> Result<StateSet, EvalError> {
        let succ = self.succ(a)?;
        Ok(StateSet::from_fn(self.n, |i| succ[i].iter().any(|&j| d.contains(j))))
    }

    pub fn boxed(&mut self, a: &Action, d: &StateSet) -> Result<StateSet, EvalError> {
        let succ = self.succ(a)?;
        Ok(StateSet::from_fn(self.n, |i| succ[i].iter().all(|&j| d.contains(j))))
    }

    pub fn lookup(&self, om: &Valuation, x: &PVar) -> Result<StateSet, EvalError> {
        let mut d = om.sets.get(&x.base).cloned().ok_or_else(|| EvalError::UnboundPVar(x.base.clone()))?;
        for (a, b) in &x.tags {
            d = d.map(&self.structure.swap_perm(a, b)?);
        }
        Ok(if x.barred { d.complement() } else { d })
    }

    pub fn mu(&mut self, om: &Valuation, f: &MuFormula) -> Result<StateSet, EvalError> {
        match f {
            MuFormula::Lit(l) => self.structure.literal_set(l),
            MuFormula::Var(x) => self.lookup(om, x),
            MuFormula::Or(a, b) => Ok(self.mu(om, a)?.union(&self.mu(om, b)?)),
            MuFormula::And(a, b) => Ok(self.mu(om, a)?.intersection(&self.mu(om, b)?)),
            MuFormula::Diamond(a, g) => {
                let d = self.mu(om, g)?;
                self.diamond(a, &d)
            }
            MuFormula::Box(a, g) => {
                let d = self.mu(om, g)?;
                self.boxed(a, &d)
            }
            MuFormula::Mu(x, g) | MuFormula::Nu(x, g) => {
                let n = self.n;
                let mut env = om.clone();
                let step = |d: &StateSet| {
                    env.set(x, d.clone());
                    self.mu(&env, g)
                };
                match f {
                    MuFormula::Mu(..) => lfp(n, step),
                    _ => gfp(n, step),
                }
            }
        }
    }

    pub fn gl(&mut self, om: &Valuation, f: &GlFormula) -> Result<StateSet, EvalError> {
        match f {
            GlFormula::Lit(l) => self.structure.literal_set(l),
            GlFormula::Var(x) => self.lookup(om, x),
            GlFormula::Not(g) => Ok(self.gl(om, g)?.complement()),
            GlFormula::Or(a, b) => Ok(self.gl(om, a)?.union(&self.gl(om, b)?)),
            GlFormula::Diamond(g, b) => {
                let d = self.gl(om, b)?;
                self.game(om, g, &d)
            }
        }
    }

    pub fn game(&mut self, om: &Valuation, g: &Game, d: &StateSet) -> Result<StateSet, EvalError> {
        match g {
            Game::Act(a) => self.diamond(a, d),
            Game::Test(f) => Ok(self.gl(om, f)?.intersection(d)),
            Game::Choice(a, b) => Ok(self.game(om, a, d)?.union(&self.game(om, b, d)?)),
            Game::Seq(a, b) => {
                let mid = self.game(om, b, d)?;
                self.game(om, a, &mid)
            }
            Game::Repeat(a) => {
                let n = self.n;
                lfp(n, |z| Ok(d.union(&self.game(om, a, z)?)))
            }
            Game::Dual(a) => Ok(self.game(om, a, &d.complement())?.complement()),
        }
    }
}

pub fn eval_mu(s: &FiniteStructure, om: &Valuation, f: &MuFormula) -> Result<StateSet, EvalError> {
    Evaluator::new(s)?.mu(om, f)
}

pub fn eval_gl(s: &FiniteStructure, om: &Valuation, f: &GlFormula) -> Result<StateSet, EvalError> {
    Evaluator::new(s)?.gl(om, f)
}

pub fn eval_game(s: &FiniteStructure, om: &Valuation, g: &Game, d: &StateSet) -> Result<StateSet, EvalError> {
    Evaluator::new(s)?.game(om, g, d)
}

pub fn is_valid_on(s: &FiniteStructure, om: &Valuation, f: &MuFormula) -> Result<bool, EvalError> {
    Ok(eval_mu(s, om, f)?.is_full())
}

pub fn is_valid_on_gl(s: &FiniteStructure, om: &Valuation, f: &GlFormula) -> Result<bool, EvalError> {
    Ok(eval_gl(s, om, f)?.is_full())
}
