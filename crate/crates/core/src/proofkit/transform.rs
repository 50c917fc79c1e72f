//! Proof transformations: substitution of a pvar through a derivation, and
//! the translation of game-logic derivations into mu-calculus derivations.

use super::check::check_proof;
use super::derive::Builder;
use super::{Ax, Calculus, Just, ProofLine, ProofScript, Theory};
use crate::binding::{free_for, subst_pvar};
use crate::logic::*;
use crate::syntax::*;
use crate::translate::sharp;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum TransformError {
    #[error("expected a {0:?} script")]
    Calculus(Calculus),
    #[error("line {0}: {1}")]
    Line(usize, String),
    #[error("result does not check:\n{0}")]
    Recheck(String),
}

fn recheck(script: ProofScript, theory: &Theory) -> Result<ProofScript, TransformError> {
    let v = check_proof(&script, theory);
    if v.ok() {
        Ok(script)
    } else {
        Err(TransformError::Recheck(v.to_string()))
    }
}

/// Replaces `x` by `psi` on every line. Justifications carry over unchanged.
pub fn subst_proof(script: &ProofScript, theory: &Theory, x: &PVar, psi: &MuFormula) -> Result<ProofScript, TransformError> {
    if script.calculus != Calculus::Mu {
        return Err(TransformError::Calculus(Calculus::Mu));
    }
    let mut out = ProofScript { lines: Vec::new(), ..script.clone() };
    for l in &script.lines {
        let Formula::Mu(f) = &l.formula else {
            return Err(TransformError::Line(l.number, "not a mu-calculus formula".into()));
        };
        if !free_for(x, psi, f) {
            return Err(TransformError::Line(l.number, format!("{} is not free for the substituted formula", x)));
        }
        if matches!(l.just, Just::Hyp(_)) && free_pvar_bases_mu(f).contains(&x.base) {
            return Err(TransformError::Line(l.number, format!("hypothesis mentions {}", x.base)));
        }
        let g = subst_pvar(f, x, psi).map_err(|e| TransformError::Line(l.number, e.to_string()))?;
        out.lines.push(ProofLine { number: l.number, formula: Formula::Mu(g), just: l.just });
    }
    recheck(out, theory)
}

pub fn translate_theory_sharp(theory: &Theory) -> Theory {
    let formulas = theory
        .formulas
        .iter()
        .map(|f| match f {
            Formula::Gl(g) => Formula::Mu(sharp(g)),
            other => other.clone(),
        })
        .collect();
    Theory { name: theory.name.clone(), formulas }
}

fn gl_parts(f: &Formula, n: usize) -> Result<(GlFormula, GlFormula), TransformError> {
    match f {
        Formula::Gl(g) => as_gl_imp(g).ok_or_else(|| TransformError::Line(n, "expected an implication".into())),
        _ => Err(TransformError::Line(n, "not a game-logic formula".into())),
    }
}

fn mu(f: MuFormula) -> Formula {
    Formula::Mu(f)
}

fn sh_dia(g: &Game, f: &GlFormula) -> MuFormula {
    sharp(&GlFormula::dia(g.clone(), f.clone()))
}

/// Given a line proving `psi# -> phi#`, derives `(<g> psi)# -> (<g> phi)#`.
fn mono(b: &mut Builder, g: &Game, psi: &GlFormula, phi: &GlFormula, prem: usize) -> usize {
    let target = mu(mu_imp(sh_dia(g, psi), sh_dia(g, phi)));
    match g {
        Game::Act(_) => b.push(target, Just::Ma(prem)),
        Game::Test(_) => b.combine(&[prem], target),
        Game::Choice(l, r) => {
            let m1 = mono(b, l, psi, phi, prem);
            let m2 = mono(b, r, psi, phi, prem);
            b.combine(&[m1, m2], target)
        }
        Game::Seq(l, r) => {
            let inner = mono(b, r, psi, phi, prem);
            let (p2, f2) = (GlFormula::dia((**r).clone(), psi.clone()), GlFormula::dia((**r).clone(), phi.clone()));
            let outer = mono(b, l, &p2, &f2, inner);
            b.push(target, Just::Rename(outer))
        }
        Game::Dual(a) => {
            let (np, nf) = (GlFormula::not(psi.clone()), GlFormula::not(phi.clone()));
            let contra = b.combine(&[prem], mu(mu_imp(sharp(&nf), sharp(&np))));
            let m = mono(b, a, &nf, &np, contra);
            b.combine(&[m], target)
        }
        Game::Repeat(a) => {
            let (lhs, rhs) = (sh_dia(g, psi), sh_dia(g, phi));
            let MuFormula::Mu(x, body) = &lhs else { unreachable!("repetition translates to a least fixpoint") };
            let unfolded = sharp(&GlFormula::or(phi.clone(), GlFormula::dia((**a).clone(), GlFormula::dia(g.clone(), phi.clone()))));
            let unfold = b.push(mu(mu_iff(rhs.clone(), unfolded)), Just::Axiom(Ax::Mu));
            let step = sharp(&GlFormula::dia((**a).clone(), GlFormula::dia(g.clone(), phi.clone())));
            let pre = b.combine(&[prem, unfold], mu(mu_imp(MuFormula::or(sharp(psi), step), rhs.clone())));
            debug_assert!(matches!(**body, MuFormula::Or(..)) && !x.barred);
            b.push(target, Just::FpMu(pre))
        }
    }
}

/// Translates a checking game-logic derivation into a mu-calculus
/// derivation of the translated conclusion. Hypotheses refer to the
/// translated theory.
pub fn translate_proof_sharp(script: &ProofScript, theory: &Theory) -> Result<ProofScript, TransformError> {
    if script.calculus != Calculus::Gl {
        return Err(TransformError::Calculus(Calculus::Gl));
    }
    let v = check_proof(script, theory);
    if !v.ok() {
        return Err(TransformError::Line(v.first_failure().unwrap_or(0), v.to_string()));
    }
    let mut b = Builder::new(Calculus::Mu);
    for (k, fp) in &script.footprints {
        b.footprint(k, fp.clone());
    }
    let mut at = std::collections::BTreeMap::new();
    for l in &script.lines {
        let Formula::Gl(g) = &l.formula else { unreachable!("checked game-logic script") };
        let target = sharp(g);
        let m = |i: usize| at[&i];
        let n = match l.just {
            Just::Taut | Just::Axiom(Ax::Test | Ax::Choice | Ax::Comp | Ax::Dual) => b.push(mu(target.clone()), Just::Taut),
            Just::Axiom(Ax::Star) => b.push(mu(target.clone()), Just::Axiom(Ax::Mu)),
            Just::Eq | Just::Axiom(_) | Just::Hyp(_) => b.push(mu(target.clone()), l.just),
            Just::Mp(i, j) => b.push(mu(target.clone()), Just::Mp(m(i), m(j))),
            Just::Rename(i) => b.push(mu(target.clone()), Just::Rename(m(i))),
            Just::FpStar(i) => b.push(mu(target.clone()), Just::FpMu(m(i))),
            Just::M(i) => {
                let (psi, phi) = gl_parts(&script.lines.iter().find(|p| p.number == i).unwrap().formula, i)?;
                let (lhs, _) = gl_parts(&l.formula, l.number)?;
                let GlFormula::Diamond(game, _) = lhs else {
                    return Err(TransformError::Line(l.number, "expected a modal implication".into()));
                };
                mono(&mut b, &game, &psi, &phi, m(i))
            }
            Just::Ma(_) | Just::FpMu(_) => unreachable!("rejected by the game-logic checker"),
        };
        let n = if b.formula(n) == Some(&mu(target.clone())) { n } else { b.push(mu(target), Just::Rename(n)) };
        at.insert(l.number, n);
    }
    recheck(b.into_script(), &translate_theory_sharp(theory))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proofkit::{parse_proof, print_proof};
    use crate::surface::parse_mu;

    fn gl_script(src: &str) -> ProofScript {
        parse_proof(src).unwrap()
    }

    #[test]
    fn choice_monotonicity_translates() {
        let s = gl_script("logic gl\n1. p -> p | q ; taut\n2. <a u b> p -> <a u b> (p | q) ; M 1\n");
        let out = translate_proof_sharp(&s, &Theory::default()).unwrap();
        let want = parse_mu("(<a> p | <b> p) -> (<a> (p | q) | <b> (p | q))").unwrap();
        assert_eq!(out.conclusion(), Some(&Formula::Mu(want)), "{}", print_proof(&out));
    }

    #[test]
    fn monotonicity_through_every_game_former() {
        let s = gl_script(
            "logic gl\n1. p -> p | q ; taut\n2. <((a; ?q)* u b^d)^d; c> p -> <((a; ?q)* u b^d)^d; c> (p | q) ; M 1\n",
        );
        let out = translate_proof_sharp(&s, &Theory::default()).unwrap();
        assert!(check_proof(&out, &Theory::default()).ok());
    }

    #[test]
    fn star_axiom_becomes_unfolding() {
        let s = gl_script("logic gl\n1. <a*> p <-> p | <a> <a*> p ; ax.star\n");
        let out = translate_proof_sharp(&s, &Theory::default()).unwrap();
        assert_eq!(out.lines[0].just, Just::Axiom(Ax::Mu));
    }

    #[test]
    fn fixpoint_rule_translates() {
        let s = gl_script(
            "logic gl\n1. <a*> q <-> q | <a> <a*> q ; ax.star\n\
             2. (<a*> q <-> q | <a> <a*> q) -> (q | <a> <a*> q -> <a*> q) ; taut\n\
             3. q | <a> <a*> q -> <a*> q ; mp 2 1\n4. <a*> q -> <a*> q ; FPstar 3\n",
        );
        assert!(check_proof(&s, &Theory::default()).ok());
        let out = translate_proof_sharp(&s, &Theory::default()).unwrap();
        assert_eq!(out.lines.last().unwrap().just, Just::FpMu(3));
    }

    #[test]
    fn substitution_of_false() {
        let s = parse_proof("logic mu\n1. X -> X | q ; taut\n2. <a> X -> <a> (X | q) ; Ma 1\n").unwrap();
        let out = subst_proof(&s, &Theory::default(), &PVar::new("X"), &mu_false()).unwrap();
        assert_eq!(out.lines.len(), 2);
        let same = subst_proof(&s, &Theory::default(), &PVar::new("Z"), &mu_false()).unwrap();
        assert_eq!(same, s);
    }

    #[test]
    fn substitution_under_other_binder() {
        let s = parse_proof("logic mu\n1. mu Y. (X | <a> Y) <-> X | <a> mu Y. (X | <a> Y) ; ax.mu\n").unwrap();
        let out = subst_proof(&s, &Theory::default(), &PVar::new("X"), &parse_mu("p(x)").unwrap()).unwrap();
        assert_eq!(out.lines[0].just, Just::Axiom(Ax::Mu));
        let capture = subst_proof(&s, &Theory::default(), &PVar::new("X"), &parse_mu("Y").unwrap());
        assert!(matches!(capture, Err(TransformError::Line(1, _))));
    }
}
