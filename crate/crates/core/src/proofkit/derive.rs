//! Script builder and expansion of derived rules into primitive steps.

use std::collections::BTreeMap;

use super::check::check_proof;
use super::transform::subst_proof;
use super::{Ax, Calculus, Just, ProofLine, ProofScript, Theory};
use crate::logic::*;
use crate::syntax::*;

pub(crate) fn f_imp(a: &Formula, b: &Formula) -> Formula {
    match (a, b) {
        (Formula::Mu(a), Formula::Mu(b)) => Formula::Mu(mu_imp(a.clone(), b.clone())),
        (Formula::Gl(a), Formula::Gl(b)) => Formula::Gl(gl_imp(a.clone(), b.clone())),
        _ => panic!("mixed calculi"),
    }
}

/// Appends lines with consecutive numbers and remembers their formulas.
#[derive(Clone, Debug)]
pub struct Builder {
    script: ProofScript,
    formulas: BTreeMap<usize, Formula>,
}

impl Builder {
    pub fn new(calculus: Calculus) -> Builder {
        Builder::from_script(ProofScript::new(calculus))
    }

    pub fn from_script(script: ProofScript) -> Builder {
        let formulas = script.lines.iter().map(|l| (l.number, l.formula.clone())).collect();
        Builder { script, formulas }
    }

    pub fn footprint(&mut self, action: &str, vars: Vec<OVar>) {
        self.script.footprints.insert(action.to_string(), vars);
    }

    pub fn calculus(&self) -> Calculus {
        self.script.calculus
    }

    pub fn script(&self) -> &ProofScript {
        &self.script
    }

    pub fn into_script(self) -> ProofScript {
        self.script
    }

    pub fn formula(&self, n: usize) -> Option<&Formula> {
        self.formulas.get(&n)
    }

    pub fn last(&self) -> Option<usize> {
        self.script.lines.last().map(|l| l.number)
    }

    pub fn push(&mut self, formula: Formula, just: Just) -> usize {
        let number = self.last().map_or(1, |n| n + 1);
        self.formulas.insert(number, formula.clone());
        self.script.lines.push(ProofLine { number, formula, just });
        number
    }

    /// Appends all lines of `other`, returning the old-to-new line map.
    pub fn append(&mut self, other: &ProofScript) -> BTreeMap<usize, usize> {
        let mut map = BTreeMap::new();
        for (k, v) in &other.footprints {
            self.script.footprints.entry(k.clone()).or_insert_with(|| v.clone());
        }
        for l in &other.lines {
            let just = l.just.renumber(|i| map.get(&i).copied().unwrap_or(0));
            let n = self.push(l.formula.clone(), just);
            map.insert(l.number, n);
        }
        map
    }

    pub fn mp(&mut self, imp: usize, ante: usize, concl: Formula) -> usize {
        self.push(concl, Just::Mp(imp, ante))
    }

    /// Derives `concl` from premise lines by one tautology and a chain of modus ponens.
    pub fn combine(&mut self, prems: &[usize], concl: Formula) -> usize {
        let forms: Vec<Formula> = prems.iter().map(|&p| self.formulas[&p].clone()).collect();
        let mut chain = vec![concl];
        for p in forms.iter().rev() {
            let next = f_imp(p, chain.last().unwrap());
            chain.push(next);
        }
        let mut cur = self.push(chain.pop().unwrap(), Just::Taut);
        for &p in prems {
            cur = self.mp(cur, p, chain.pop().unwrap());
        }
        cur
    }
}

/// Instances of the derived axioms and rules.
#[derive(Clone, Debug, PartialEq)]
pub enum DerivedRule {
    /// `<g1 ∩ g2> phi <-> <g1> phi & <g2> phi`.
    Intersection { g1: Game, g2: Game, phi: GlFormula },
    /// `<(g1; g2)^d> phi <-> <g1^d; g2^d> phi`.
    SeqDual { g1: Game, g2: Game, phi: GlFormula },
    /// From line `psi -> phi`, `mu X. psi -> mu X. phi`.
    MonoMu { premise: usize, x: PVar },
    /// From line `psi -> phi`, `nu X. psi -> nu X. phi`.
    MonoNu { premise: usize, x: PVar },
    /// From line `psi -> phi`, `[a] psi -> [a] phi`.
    BoxMono { premise: usize, action: Action },
    /// From lines `<g1> psi <-> <g2> psi` for `psi = <g2*> rho` and for
    /// `psi = <g1*> rho`, `<g1*> rho <-> <g2*> rho`.
    ReplaceInLoop { g1: Game, g2: Game, rho: GlFormula, at_g2: usize, at_g1: usize },
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum DeriveError {
    #[error("rule needs the {0:?} calculus")]
    Calculus(Calculus),
    #[error("line {0} does not exist or has the wrong shape: {1}")]
    Premise(usize, String),
    #[error("substitution into the premise derivation failed: {0}")]
    Subst(String),
    #[error("expanded fragment does not check: {0}")]
    Check(String),
}

fn need(b: &Builder, c: Calculus) -> Result<(), DeriveError> {
    if b.calculus() == c {
        Ok(())
    } else {
        Err(DeriveError::Calculus(c))
    }
}

fn mu_premise(b: &Builder, n: usize) -> Result<(MuFormula, MuFormula), DeriveError> {
    match b.formula(n) {
        Some(Formula::Mu(m)) => as_mu_imp(m).ok_or_else(|| DeriveError::Premise(n, "expected an implication".into())),
        _ => Err(DeriveError::Premise(n, "expected a mu-calculus line".into())),
    }
}

fn gl_dia(g: &Game, f: &GlFormula) -> GlFormula {
    GlFormula::dia(g.clone(), f.clone())
}

/// Expands `rule` onto the end of `b` and returns the line of its conclusion.
/// The whole script is re-checked against `theory`.
pub fn expand_derived(b: &mut Builder, rule: &DerivedRule, theory: &Theory) -> Result<usize, DeriveError> {
    let line = expand(b, rule)?;
    let v = check_proof(b.script(), theory);
    if v.ok() {
        Ok(line)
    } else {
        Err(DeriveError::Check(v.to_string()))
    }
}

fn expand(b: &mut Builder, rule: &DerivedRule) -> Result<usize, DeriveError> {
    let gl = |f: GlFormula| Formula::Gl(f);
    let mu = |f: MuFormula| Formula::Mu(f);
    match rule {
        DerivedRule::Intersection { g1, g2, phi } => {
            need(b, Calculus::Gl)?;
            let np = GlFormula::not(phi.clone());
            let (d1, d2) = (Game::dual(g1.clone()), Game::dual(g2.clone()));
            let ch = Game::choice(d1.clone(), d2.clone());
            let lhs = gl_dia(&dchoice(g1.clone(), g2.clone()), phi);
            let l1 = b.push(gl(gl_iff(lhs.clone(), GlFormula::not(gl_dia(&ch, &np)))), Just::Axiom(Ax::Dual));
            let l2 = b.push(
                gl(gl_iff(gl_dia(&ch, &np), GlFormula::or(gl_dia(&d1, &np), gl_dia(&d2, &np)))),
                Just::Axiom(Ax::Choice),
            );
            let l3 = b.push(gl(gl_iff(gl_dia(&d1, &np), GlFormula::not(gl_dia(g1, phi)))), Just::Axiom(Ax::Dual));
            let l4 = b.push(gl(gl_iff(gl_dia(&d2, &np), GlFormula::not(gl_dia(g2, phi)))), Just::Axiom(Ax::Dual));
            Ok(b.combine(&[l1, l2, l3, l4], gl(gl_iff(lhs, gl_and(gl_dia(g1, phi), gl_dia(g2, phi))))))
        }
        DerivedRule::SeqDual { g1, g2, phi } => {
            need(b, Calculus::Gl)?;
            let np = GlFormula::not(phi.clone());
            let (d1, d2) = (Game::dual(g1.clone()), Game::dual(g2.clone()));
            let s = Game::seq(g1.clone(), g2.clone());
            let sd = Game::seq(d1.clone(), d2.clone());
            let lhs = gl_dia(&Game::dual(s.clone()), phi);
            let rhs = gl_dia(&sd, phi);
            let inner = gl_dia(&d2, phi);
            let l1 = b.push(gl(gl_iff(lhs.clone(), GlFormula::not(gl_dia(&s, &np)))), Just::Axiom(Ax::Dual));
            let l2 = b.push(gl(gl_iff(gl_dia(&s, &np), gl_dia(g1, &gl_dia(g2, &np)))), Just::Axiom(Ax::Comp));
            let l3 = b.push(gl(gl_iff(rhs.clone(), gl_dia(&d1, &inner))), Just::Axiom(Ax::Comp));
            let l4 = b.push(
                gl(gl_iff(gl_dia(&d1, &inner), GlFormula::not(gl_dia(g1, &GlFormula::not(inner.clone()))))),
                Just::Axiom(Ax::Dual),
            );
            let l5 = b.push(gl(gl_iff(inner.clone(), GlFormula::not(gl_dia(g2, &np)))), Just::Axiom(Ax::Dual));
            let (ni, g2np) = (GlFormula::not(inner), gl_dia(g2, &np));
            let l6 = b.combine(&[l5], gl(gl_imp(ni.clone(), g2np.clone())));
            let l7 = b.combine(&[l5], gl(gl_imp(g2np.clone(), ni.clone())));
            let l8 = b.push(gl(gl_imp(gl_dia(g1, &ni), gl_dia(g1, &g2np))), Just::M(l6));
            let l9 = b.push(gl(gl_imp(gl_dia(g1, &g2np), gl_dia(g1, &ni))), Just::M(l7));
            Ok(b.combine(&[l1, l2, l3, l4, l8, l9], gl(gl_iff(lhs, rhs))))
        }
        DerivedRule::MonoMu { premise, x } => {
            need(b, Calculus::Mu)?;
            let (psi, phi) = mu_premise(b, *premise)?;
            let m = MuFormula::mu(x.clone(), phi.clone());
            let sub = subst_proof(b.script(), &Theory::default(), x, &m).map_err(|e| DeriveError::Subst(e.to_string()))?;
            let map = b.append(&sub);
            let p = map[premise];
            let (psi_m, phi_m) = mu_premise(b, p)?;
            let unfold = b.push(mu(mu_iff(m.clone(), phi_m)), Just::Axiom(Ax::Mu));
            let step = b.combine(&[p, unfold], mu(mu_imp(psi_m, m.clone())));
            Ok(b.push(mu(mu_imp(MuFormula::mu(x.clone(), psi), m)), Just::FpMu(step)))
        }
        DerivedRule::MonoNu { premise, x } => {
            need(b, Calculus::Mu)?;
            let (psi, phi) = mu_premise(b, *premise)?;
            let contra = b.combine(&[*premise], mu(mu_imp(bar(&phi), bar(&psi))));
            let inner = expand(b, &DerivedRule::MonoMu { premise: contra, x: x.bar() })?;
            let goal = mu_imp(MuFormula::nu(x.clone(), psi), MuFormula::nu(x.clone(), phi));
            Ok(b.combine(&[inner], mu(goal)))
        }
        DerivedRule::BoxMono { premise, action } => {
            need(b, Calculus::Mu)?;
            let (psi, phi) = mu_premise(b, *premise)?;
            let contra = b.combine(&[*premise], mu(mu_imp(bar(&phi), bar(&psi))));
            let dia = b.push(
                mu(mu_imp(MuFormula::dia(action.clone(), bar(&phi)), MuFormula::dia(action.clone(), bar(&psi)))),
                Just::Ma(contra),
            );
            let goal = mu_imp(MuFormula::boxed(action.clone(), psi), MuFormula::boxed(action.clone(), phi));
            Ok(b.combine(&[dia], mu(goal)))
        }
        DerivedRule::ReplaceInLoop { g1, g2, rho, at_g2, at_g1 } => {
            need(b, Calculus::Gl)?;
            let (s1, s2) = (Game::repeat(g1.clone()), Game::repeat(g2.clone()));
            let (r1, r2) = (gl_dia(&s1, rho), gl_dia(&s2, rho));
            for (n, psi) in [(*at_g2, &r2), (*at_g1, &r1)] {
                let want = gl(gl_iff(gl_dia(g1, psi), gl_dia(g2, psi)));
                if b.formula(n) != Some(&want) {
                    return Err(DeriveError::Premise(n, "expected <g1> psi <-> <g2> psi".into()));
                }
            }
            // One direction: from <gi> <gj*> rho -> <gj> <gj*> rho conclude <gi*> rho -> <gj*> rho.
            let dir = |b: &mut Builder, gi: &Game, gj: &Game, si: &Game, sj: &Game, prem: usize| {
                let rj = gl_dia(sj, rho);
                let unfold = b.push(gl(gl_iff(rj.clone(), GlFormula::or(rho.clone(), gl_dia(gj, &rj)))), Just::Axiom(Ax::Star));
                let pre = b.combine(&[prem, unfold], gl(gl_imp(GlFormula::or(rho.clone(), gl_dia(gi, &rj)), rj.clone())));
                b.push(gl(gl_imp(gl_dia(si, rho), rj)), Just::FpStar(pre))
            };
            let f = dir(b, g1, g2, &s1, &s2, *at_g2);
            let k = dir(b, g2, g1, &s2, &s1, *at_g1);
            Ok(b.combine(&[f, k], gl(gl_iff(r1, r2))))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{parse_game, parse_gl, parse_mu};

    fn checks(b: &Builder) {
        let v = check_proof(b.script(), &Theory::default());
        assert!(v.ok(), "{}\n{}", v, super::super::print_proof(b.script()));
    }

    #[test]
    fn intersection() {
        let mut b = Builder::new(Calculus::Gl);
        let rule = DerivedRule::Intersection {
            g1: parse_game("a").unwrap(),
            g2: parse_game("b; c").unwrap(),
            phi: parse_gl("p(x)").unwrap(),
        };
        expand_derived(&mut b, &rule, &Theory::default()).unwrap();
        checks(&b);
    }

    #[test]
    fn seq_dual() {
        let mut b = Builder::new(Calculus::Gl);
        let rule = DerivedRule::SeqDual {
            g1: parse_game("a*").unwrap(),
            g2: parse_game("?q").unwrap(),
            phi: parse_gl("<b> p(x)").unwrap(),
        };
        expand_derived(&mut b, &rule, &Theory::default()).unwrap();
        checks(&b);
    }

    #[test]
    fn fixpoint_and_box_monotonicity() {
        for rule in ["mu", "nu", "box"] {
            let mut b = Builder::new(Calculus::Mu);
            let prem = b.push(Formula::Mu(parse_mu("<a> X -> <a> X | q").unwrap()), Just::Taut);
            let x = PVar::new("X");
            let r = match rule {
                "mu" => DerivedRule::MonoMu { premise: prem, x },
                "nu" => DerivedRule::MonoNu { premise: prem, x },
                _ => DerivedRule::BoxMono { premise: prem, action: Action::named("b") },
            };
            let last = expand_derived(&mut b, &r, &Theory::default()).unwrap();
            assert_eq!(Some(last), b.last());
            checks(&b);
        }
    }

    #[test]
    fn replace_in_loop() {
        let mut b = Builder::new(Calculus::Gl);
        let (g1, g2) = (parse_game("a; b").unwrap(), parse_game("a; b").unwrap());
        let rho = parse_gl("p(x)").unwrap();
        let r2 = gl_dia(&Game::repeat(g2.clone()), &rho);
        let r1 = gl_dia(&Game::repeat(g1.clone()), &rho);
        let at_g2 = b.push(Formula::Gl(gl_iff(gl_dia(&g1, &r2), gl_dia(&g2, &r2))), Just::Taut);
        let at_g1 = b.push(Formula::Gl(gl_iff(gl_dia(&g1, &r1), gl_dia(&g2, &r1))), Just::Taut);
        let rule = DerivedRule::ReplaceInLoop { g1, g2, rho, at_g2, at_g1 };
        expand_derived(&mut b, &rule, &Theory::default()).unwrap();
        checks(&b);
    }

    #[test]
    fn wrong_calculus() {
        let mut b = Builder::new(Calculus::Mu);
        let rule = DerivedRule::Intersection {
            g1: parse_game("a").unwrap(),
            g2: parse_game("b").unwrap(),
            phi: parse_gl("q").unwrap(),
        };
        assert_eq!(expand(&mut b, &rule), Err(DeriveError::Calculus(Calculus::Gl)));
    }
}
