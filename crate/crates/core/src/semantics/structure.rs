use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use super::stateset::StateSet;
use super::EvalError;
use crate::logic::Signature;
use crate::syntax::*;

/// Size limits on finite structures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    pub max_domain: usize,
    pub max_support: usize,
    pub max_states: usize,
}

impl Default for Caps {
    fn default() -> Caps {
        Caps { max_domain: 4, max_support: 8, max_states: 1 << 20 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Function {
    pub arity: usize,
    pub table: HashMap<Vec<usize>, usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Predicate {
    pub arity: usize,
    pub tuples: HashSet<Vec<usize>>,
}

/// A transition relation on the values of its footprint variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transition {
    pub footprint: Vec<OVar>,
    pub pairs: Vec<(Vec<usize>, Vec<usize>)>,
}

/// A finite first-order structure over a finite support of object variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteStructure {
    pub domain: Vec<String>,
    pub constants: BTreeMap<String, usize>,
    pub functions: BTreeMap<String, Function>,
    pub predicates: BTreeMap<String, Predicate>,
    pub support: Vec<OVar>,
    pub transitions: BTreeMap<String, Transition>,
    pub caps: Caps,
}

/// A state, given by the domain index of each support variable in order.
pub type State = Vec<usize>;

impl FiniteStructure {
    /// A structure with the given domain, numerals as constants, and nothing else.
    pub fn new(domain: Vec<String>, support: Vec<OVar>) -> FiniteStructure {
        let constants = domain.iter().enumerate().map(|(i, d)| (d.clone(), i)).collect();
        FiniteStructure {
            domain,
            constants,
            functions: BTreeMap::new(),
            predicates: BTreeMap::new(),
            support,
            transitions: BTreeMap::new(),
            caps: Caps::default(),
        }
    }

    pub fn element(&self, name: &str) -> Option<usize> {
        self.domain.iter().position(|d| d == name)
    }

    pub fn var_index(&self, x: &str) -> Option<usize> {
        self.support.iter().position(|v| v == x)
    }

    /// Number of states, after checking the caps.
    pub fn num_states(&self) -> Result<usize, EvalError> {
        let d = self.domain.len();
        if d == 0 {
            return Err(EvalError::Cap("empty domain".into()));
        }
        if d > self.caps.max_domain {
            return Err(EvalError::Cap(format!("domain size {} exceeds {}", d, self.caps.max_domain)));
        }
        if self.support.len() > self.caps.max_support {
            return Err(EvalError::Cap(format!(
                "support size {} exceeds {}",
                self.support.len(),
                self.caps.max_support
            )));
        }
        let mut n: usize = 1;
        for _ in &self.support {
            n = n.saturating_mul(d);
            if n > self.caps.max_states {
                return Err(EvalError::Cap(format!("state space exceeds {}", self.caps.max_states)));
            }
        }
        Ok(n)
    }

    /// All states in lexicographic order, first support variable most significant.
    pub fn enumerate_states(&self) -> Result<Vec<State>, EvalError> {
        let n = self.num_states()?;
        Ok((0..n).map(|i| self.state(i)).collect())
    }

    pub fn state(&self, mut idx: usize) -> State {
        let d = self.domain.len();
        let mut s = vec![0; self.support.len()];
        for k in (0..s.len()).rev() {
            s[k] = idx % d;
            idx /= d;
        }
        s
    }

    pub fn index(&self, s: &[usize]) -> usize {
        let d = self.domain.len();
        s.iter().fold(0, |acc, &v| acc * d + v)
    }

    pub fn state_names(&self, s: &[usize]) -> BTreeMap<String, String> {
        self.support.iter().zip(s).map(|(x, &v)| (x.clone(), self.domain[v].clone())).collect()
    }

    pub fn eval_term(&self, s: &[usize], t: &Term) -> Result<usize, EvalError> {
        match t {
            Term::Var(x) => {
                let i = self.var_index(x).ok_or_else(|| EvalError::UnsupportedVariable(x.clone()))?;
                Ok(s[i])
            }
            Term::Const(c) => self
                .constants
                .get(c)
                .copied()
                .or_else(|| self.element(c))
                .ok_or_else(|| EvalError::UnknownSymbol(c.clone())),
            Term::App(f, args) => {
                let func = self.functions.get(f).ok_or_else(|| EvalError::UnknownSymbol(f.clone()))?;
                if func.arity != args.len() {
                    return Err(EvalError::Arity(f.clone()));
                }
                let vals = args.iter().map(|a| self.eval_term(s, a)).collect::<Result<Vec<_>, _>>()?;
                func.table.get(&vals).copied().ok_or_else(|| EvalError::PartialFunction(f.clone()))
            }
        }
    }

    pub fn eval_literal(&self, s: &[usize], l: &Literal) -> Result<bool, EvalError> {
        let v = match &l.atom {
            Atom::Eq(a, b) => self.eval_term(s, a)? == self.eval_term(s, b)?,
            Atom::Pred(p, args) => {
                let pred = self.predicates.get(p).ok_or_else(|| EvalError::UnknownSymbol(p.clone()))?;
                if pred.arity != args.len() {
                    return Err(EvalError::Arity(p.clone()));
                }
                let vals = args.iter().map(|a| self.eval_term(s, a)).collect::<Result<Vec<_>, _>>()?;
                pred.tuples.contains(&vals)
            }
        };
        Ok(v == l.positive)
    }

    pub fn literal_set(&self, l: &Literal) -> Result<StateSet, EvalError> {
        let n = self.num_states()?;
        let mut out = StateSet::empty(n);
        for i in 0..n {
            if self.eval_literal(&self.state(i), l)? {
                out.insert(i);
            }
        }
        Ok(out)
    }

    /// Index permutation realizing the swap of `x` and `y` on states.
    pub fn swap_perm(&self, x: &str, y: &str) -> Result<Vec<usize>, EvalError> {
        let n = self.num_states()?;
        if x == y {
            return Ok((0..n).collect());
        }
        match (self.var_index(x), self.var_index(y)) {
            (Some(i), Some(j)) => Ok((0..n)
                .map(|k| {
                    let mut s = self.state(k);
                    s.swap(i, j);
                    self.index(&s)
                })
                .collect()),
            (None, None) => Ok((0..n).collect()),
            (None, _) => Err(EvalError::UnsupportedVariable(x.to_string())),
            (_, None) => Err(EvalError::UnsupportedVariable(y.to_string())),
        }
    }

    /// Successor lists of an action's interpretation.
    pub fn transition(&self, a: &Action) -> Result<Vec<Vec<usize>>, EvalError> {
        let n = self.num_states()?;
        match a {
            Action::Assign(x, t) => {
                let i = self.var_index(x).ok_or_else(|| EvalError::UnsupportedVariable(x.clone()))?;
                (0..n)
                    .map(|k| {
                        let mut s = self.state(k);
                        s[i] = self.eval_term(&s, t)?;
                        Ok(vec![self.index(&s)])
                    })
                    .collect()
            }
            Action::Random(x) => {
                let i = self.var_index(x).ok_or_else(|| EvalError::UnsupportedVariable(x.clone()))?;
                Ok((0..n)
                    .map(|k| {
                        let mut s = self.state(k);
                        (0..self.domain.len())
                            .map(|v| {
                                s[i] = v;
                                self.index(&s)
                            })
                            .collect()
                    })
                    .collect())
            }
            Action::Ode { .. } => Err(EvalError::Ode),
            Action::Named { name, tags } => {
                let tr = self.transitions.get(name).ok_or_else(|| EvalError::UnknownAction(name.clone()))?;
                let pos = tr
                    .footprint
                    .iter()
                    .map(|x| self.var_index(x).ok_or_else(|| EvalError::UnsupportedVariable(x.clone())))
                    .collect::<Result<Vec<_>, _>>()?;
                let mut succ = vec![Vec::new(); n];
                for (k, out) in succ.iter_mut().enumerate() {
                    let s = self.state(k);
                    for (pre, post) in &tr.pairs {
                        if pos.iter().zip(pre).all(|(&p, &v)| s[p] == v) {
                            let mut t = s.clone();
                            for (&p, &v) in pos.iter().zip(post) {
                                t[p] = v;
                            }
                            let j = self.index(&t);
                            if !out.contains(&j) {
                                out.push(j);
                            }
                        }
                    }
                }
                // A renamed action relates the swapped states.
                for (x, y) in tags {
                    let perm = self.swap_perm(x, y)?;
                    let mut next = vec![Vec::new(); n];
                    for (k, out) in succ.iter().enumerate() {
                        next[perm[k]] = out.iter().map(|&j| perm[j]).collect();
                    }
                    succ = next;
                }
                Ok(succ)
            }
        }
    }

    /// Footprint of a possibly renamed named action.
    pub fn footprint(&self, name: &str, tags: &[Swap]) -> Option<Vec<OVar>> {
        self.signature().footprint(name, tags)
    }

    pub fn signature(&self) -> Signature {
        Signature {
            constants: self.constants.keys().cloned().collect(),
            functions: self.functions.iter().map(|(k, f)| (k.clone(), f.arity)).collect(),
            predicates: self.predicates.iter().map(|(k, p)| (k.clone(), p.arity)).collect(),
            actions: self.transitions.iter().map(|(k, t)| (k.clone(), t.footprint.clone())).collect(),
        }
    }

    /// The same structure with extra support variables appended.
    pub fn extend_support(&self, vars: &[OVar]) -> FiniteStructure {
        let mut s = self.clone();
        for v in vars {
            if !s.support.contains(v) {
                s.support.push(v.clone());
            }
        }
        s
    }

    /// Cylinder over `set` in a structure whose support extends this one's.
    pub fn cylindrify(&self, ext: &FiniteStructure, set: &StateSet) -> Result<StateSet, EvalError> {
        let n = ext.num_states()?;
        let pos: Vec<usize> = self
            .support
            .iter()
            .map(|x| ext.var_index(x).ok_or_else(|| EvalError::UnsupportedVariable(x.clone())))
            .collect::<Result<_, _>>()?;
        Ok(StateSet::from_fn(n, |k| {
            let s = ext.state(k);
            let r: Vec<usize> = pos.iter().map(|&p| s[p]).collect();
            set.contains(self.index(&r))
        }))
    }

    /// Variables mentioned by any transition footprint.
    pub fn footprint_vars(&self) -> BTreeSet<OVar> {
        self.transitions.values().flat_map(|t| t.footprint.iter().cloned()).collect()
    }
}
