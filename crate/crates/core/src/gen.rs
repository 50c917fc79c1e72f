//! Seeded random structures, valuations, formulas and games for property checks.

use std::collections::{BTreeMap, HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::semantics::{FiniteStructure, Function, Predicate, StateSet, Transition, Valuation};
use crate::syntax::*;

pub use rand::SeedableRng;
pub type GenRng = ChaCha8Rng;

pub fn rng(seed: u64) -> GenRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Which constructs the formula generators may use.
#[derive(Clone, Debug)]
pub struct GenConfig {
    pub ovars: Vec<OVar>,
    pub actions: Vec<String>,
    pub free_pvars: Vec<String>,
    pub bound_pvars: Vec<String>,
    pub assignments: bool,
    pub randoms: bool,
    pub tags: bool,
    pub max_depth: usize,
}

impl GenConfig {
    /// Named actions, free pvars, fixpoints and renaming tags over `x, y`.
    pub fn standard(max_depth: usize) -> GenConfig {
        GenConfig {
            ovars: vec!["x".into(), "y".into()],
            actions: vec!["a".into(), "b".into()],
            free_pvars: vec!["P".into(), "Q".into()],
            bound_pvars: vec!["X".into(), "Y".into(), "Z".into()],
            assignments: true,
            randoms: true,
            tags: true,
            max_depth,
        }
    }

    pub fn closed(mut self) -> GenConfig {
        self.free_pvars.clear();
        self
    }

    pub fn without_tags(mut self) -> GenConfig {
        self.tags = false;
        self
    }
}

/// A random structure over domain `0..d` with `2 <= d <= max_domain`,
/// support a nonempty prefix of `ovars`, unary `p`, nullary `q`, unary `f`
/// and the named actions of `actions`.
pub fn structure(r: &mut GenRng, max_domain: usize, ovars: &[OVar], actions: &[String]) -> FiniteStructure {
    let k = r.gen_range(1..=ovars.len());
    let acts: Vec<(String, Option<Vec<OVar>>)> = actions.iter().map(|a| (a.clone(), None)).collect();
    structure_with(r, max_domain, &ovars[..k], &acts)
}

/// Like [`structure`] but with the whole of `support` and, where given,
/// fixed footprints. Footprint variables outside `support` are added to it.
pub fn structure_with(
    r: &mut GenRng,
    max_domain: usize,
    support: &[OVar],
    actions: &[(String, Option<Vec<OVar>>)],
) -> FiniteStructure {
    let d = r.gen_range(2..=max_domain.max(2));
    let mut vars: Vec<OVar> = support.to_vec();
    for (_, fp) in actions {
        for v in fp.iter().flatten() {
            if !vars.contains(v) {
                vars.push(v.clone());
            }
        }
    }
    if vars.is_empty() {
        vars.push("x".into());
    }
    let k = vars.len();
    let domain: Vec<String> = (0..d).map(|i| i.to_string()).collect();
    let mut s = FiniteStructure::new(domain, vars);
    let p: HashSet<Vec<usize>> = (0..d).filter(|_| r.gen_bool(0.5)).map(|v| vec![v]).collect();
    s.predicates.insert("p".into(), Predicate { arity: 1, tuples: p });
    let q: HashSet<Vec<usize>> = if r.gen_bool(0.5) { [vec![]].into() } else { HashSet::new() };
    s.predicates.insert("q".into(), Predicate { arity: 0, tuples: q });
    let table: HashMap<Vec<usize>, usize> = (0..d).map(|v| (vec![v], r.gen_range(0..d))).collect();
    s.functions.insert("f".into(), Function { arity: 1, table });
    for (a, fixed) in actions {
        let fp = match fixed {
            Some(fp) if !fp.is_empty() => fp.clone(),
            _ => {
                let mut fp: Vec<OVar> = s.support.iter().filter(|_| r.gen_bool(0.6)).cloned().collect();
                if fp.is_empty() {
                    fp.push(s.support[r.gen_range(0..k)].clone());
                }
                fp
            }
        };
        let m = fp.len() as u32;
        let mut pairs = Vec::new();
        for pre in 0..d.pow(m) {
            for _ in 0..r.gen_range(0..=2) {
                let post = r.gen_range(0..d.pow(m));
                let pair = (digits(pre, d, fp.len()), digits(post, d, fp.len()));
                if !pairs.contains(&pair) {
                    pairs.push(pair);
                }
            }
        }
        s.transitions.insert(a.clone(), Transition { footprint: fp, pairs });
    }
    s
}

fn digits(mut v: usize, d: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for k in (0..len).rev() {
        out[k] = v % d;
        v /= d;
    }
    out
}

pub fn state_set(r: &mut GenRng, n: usize) -> StateSet {
    let idx: Vec<usize> = (0..n).filter(|_| r.gen_bool(0.5)).collect();
    StateSet::from_indices(n, idx)
}

/// Random values for the given pvar bases.
pub fn valuation(r: &mut GenRng, s: &FiniteStructure, pvars: &[String]) -> Valuation {
    let n = s.num_states().expect("structure within caps");
    let mut om = Valuation::new();
    for x in pvars {
        om.sets.insert(x.clone(), state_set(r, n));
    }
    om
}

/// Formula generator bound to a configuration and the support of a structure.
pub struct Gen<'a> {
    pub r: &'a mut GenRng,
    pub cfg: GenConfig,
    /// Fixed bar status per bound base, so binders stay well formed.
    bars: BTreeMap<String, bool>,
}

impl<'a> Gen<'a> {
    pub fn new(r: &'a mut GenRng, cfg: GenConfig) -> Gen<'a> {
        let bars = cfg.bound_pvars.iter().map(|b| (b.clone(), r.gen_bool(0.25))).collect();
        Gen { r, cfg, bars }
    }

    /// Restricts object variables to those of `s`.
    pub fn for_structure(r: &'a mut GenRng, mut cfg: GenConfig, s: &FiniteStructure) -> Gen<'a> {
        cfg.ovars.retain(|v| s.support.contains(v));
        cfg.actions.retain(|a| s.transitions.contains_key(a));
        Gen::new(r, cfg)
    }

    fn ovar(&mut self) -> OVar {
        self.cfg.ovars.choose(self.r).expect("some object variable").clone()
    }

    pub fn term(&mut self, depth: usize) -> Term {
        match self.r.gen_range(0..if depth > 0 { 4 } else { 3 }) {
            0 | 1 => Term::var(&self.ovar()),
            2 => Term::cst(if self.r.gen_bool(0.5) { "0" } else { "1" }),
            _ => Term::app("f", vec![self.term(depth - 1)]),
        }
    }

    pub fn literal(&mut self) -> Literal {
        let l = match self.r.gen_range(0..4) {
            0 | 1 => Literal::eq(self.term(1), self.term(1)),
            2 => Literal::pred("p", vec![self.term(1)]),
            _ => Literal::pred("q", vec![]),
        };
        if self.r.gen_bool(0.3) {
            l.negate()
        } else {
            l
        }
    }

    fn tags(&mut self) -> Vec<Swap> {
        if self.cfg.tags && self.cfg.ovars.len() >= 2 && self.r.gen_bool(0.2) {
            vec![(self.cfg.ovars[0].clone(), self.cfg.ovars[1].clone())]
        } else {
            Vec::new()
        }
    }

    pub fn action(&mut self) -> Action {
        loop {
            match self.r.gen_range(0..4) {
                0 | 1 if !self.cfg.actions.is_empty() => {
                    let name = self.cfg.actions.choose(self.r).unwrap().clone();
                    let tags = self.tags();
                    return Action::Named { name, tags };
                }
                2 if self.cfg.assignments => {
                    let x = self.ovar();
                    return Action::Assign(x, self.term(1));
                }
                3 if self.cfg.randoms => return Action::Random(self.ovar()),
                _ => {}
            }
        }
    }

    fn free_pvar(&mut self) -> Option<PVar> {
        let base = self.cfg.free_pvars.choose(self.r)?.clone();
        Some(PVar { base, barred: self.r.gen_bool(0.5), tags: self.tags() })
    }

    /// A well-formed formula; `scope` lists bound variables usable as leaves.
    pub fn mu(&mut self, depth: usize, scope: &mut Vec<PVar>) -> MuFormula {
        let leaf = depth == 0 || self.r.gen_bool(0.2);
        if leaf {
            let pick = self.r.gen_range(0..3);
            if pick == 0 && !scope.is_empty() {
                let x = scope.choose(self.r).unwrap().clone();
                return MuFormula::Var(PVar { tags: self.tags(), ..x });
            }
            if pick == 1 {
                if let Some(x) = self.free_pvar() {
                    return MuFormula::Var(x);
                }
            }
            return MuFormula::Lit(self.literal());
        }
        match self.r.gen_range(0..6) {
            0 => MuFormula::or(self.mu(depth - 1, scope), self.mu(depth - 1, scope)),
            1 => MuFormula::and(self.mu(depth - 1, scope), self.mu(depth - 1, scope)),
            2 => {
                let a = self.action();
                MuFormula::dia(a, self.mu(depth - 1, scope))
            }
            3 => {
                let a = self.action();
                MuFormula::boxed(a, self.mu(depth - 1, scope))
            }
            k if !self.cfg.bound_pvars.is_empty() => {
                let base = self.cfg.bound_pvars.choose(self.r).unwrap().clone();
                let x = PVar { barred: self.bars[&base], ..PVar::new(base) };
                scope.push(x.clone());
                let body = self.mu(depth - 1, scope);
                scope.pop();
                if k == 4 {
                    MuFormula::mu(x, body)
                } else {
                    MuFormula::nu(x, body)
                }
            }
            _ => MuFormula::Lit(self.literal()),
        }
    }

    pub fn mu_formula(&mut self) -> MuFormula {
        let d = self.cfg.max_depth;
        self.mu(d, &mut Vec::new())
    }

    pub fn gl(&mut self, depth: usize) -> GlFormula {
        if depth == 0 || self.r.gen_bool(0.2) {
            if self.r.gen_bool(0.3) {
                if let Some(x) = self.free_pvar() {
                    return GlFormula::Var(x);
                }
            }
            return GlFormula::Lit(self.literal());
        }
        match self.r.gen_range(0..5) {
            0 => GlFormula::not(self.gl(depth - 1)),
            1 => GlFormula::or(self.gl(depth - 1), self.gl(depth - 1)),
            _ => {
                let g = self.game(depth - 1);
                GlFormula::dia(g, self.gl(depth - 1))
            }
        }
    }

    pub fn game(&mut self, depth: usize) -> Game {
        if depth == 0 || self.r.gen_bool(0.25) {
            return if self.r.gen_bool(0.8) { Game::act(self.action()) } else { Game::test(self.gl(0)) };
        }
        match self.r.gen_range(0..6) {
            0 => Game::choice(self.game(depth - 1), self.game(depth - 1)),
            1 => Game::seq(self.game(depth - 1), self.game(depth - 1)),
            2 => Game::repeat(self.game(depth - 1)),
            3 => Game::dual(self.game(depth - 1)),
            4 => Game::test(self.gl(depth - 1)),
            _ => Game::act(self.action()),
        }
    }

    pub fn gl_formula(&mut self) -> GlFormula {
        let d = self.cfg.max_depth;
        self.gl(d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{well_formed_gl, well_formed_mu};

    #[test]
    fn generated_formulas_are_well_formed() {
        let mut r = rng(7);
        let s = structure(&mut r, 3, &["x".into(), "y".into()], &["a".into(), "b".into()]);
        let mut r2 = rng(8);
        let mut g = Gen::for_structure(&mut r2, GenConfig::standard(5), &s);
        for _ in 0..200 {
            well_formed_mu(&g.mu_formula(), Some(&s.signature())).unwrap();
            well_formed_gl(&g.gl_formula(), Some(&s.signature())).unwrap();
        }
    }
}
