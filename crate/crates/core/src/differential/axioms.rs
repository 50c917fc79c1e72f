//! Syntactic instances of the differential-equation axioms.

use std::collections::BTreeSet;

use super::poly::{PolyError, PolyVec};
use crate::binding::{fresh_name, fresh_ovar};
use crate::logic::{all_pvar_bases_mu, bar, free_ovars_mu, mu_iff, mu_imp};
use crate::syntax::*;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum AxiomError {
    #[error("expected a differential equation")]
    NotOde,
    #[error("the differential equation has an evolution domain constraint; rewrite it first")]
    Constrained,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

fn le(a: Term, b: Term) -> MuFormula {
    MuFormula::Lit(Literal::pred("<=", vec![a, b]))
}

fn positive(v: &str) -> MuFormula {
    MuFormula::Lit(Literal::pred("<=", vec![Term::var(v), Term::cst("0")]).negate())
}

fn exists(v: &str, f: MuFormula) -> MuFormula {
    MuFormula::dia(Action::random(v), f)
}

fn exists_all(vs: &[String], f: MuFormula) -> MuFormula {
    vs.iter().rev().fold(f, |acc, v| exists(v, acc))
}

fn assign_all(xs: &[String], ts: &[Term], f: MuFormula) -> MuFormula {
    xs.iter().zip(ts).rev().fold(f, |acc, (x, t)| MuFormula::dia(Action::Assign(x.clone(), t.clone()), acc))
}

fn mul(a: Term, b: Term) -> Term {
    Term::app("*", vec![a, b])
}

fn sub(a: Term, b: Term) -> Term {
    Term::app("-", vec![a, b])
}

/// Sum of squares, the squared Euclidean norm.
fn sq(ts: Vec<Term>) -> Term {
    ts.into_iter().map(|t| mul(t.clone(), t)).reduce(|a, b| Term::app("+", vec![a, b])).unwrap_or_else(|| Term::cst("0"))
}

fn vars(ts: &[String]) -> Vec<Term> {
    ts.iter().map(|v| Term::var(v)).collect()
}

fn ovars_of(f: &MuFormula, eqs: &[(OVar, Term)]) -> BTreeSet<String> {
    let mut s = free_ovars_mu(f);
    for (x, t) in eqs {
        s.insert(x.clone());
        s.extend(t.vars());
    }
    s
}

/// A name based on `base`, unused so far; taken as is when possible.
fn pick(base: &str, avoid: &mut BTreeSet<String>) -> String {
    let v = if avoid.contains(base) { fresh_ovar(base, avoid) } else { base.to_string() };
    avoid.insert(v.clone());
    v
}

fn pick_vec(base: &str, n: usize, avoid: &mut BTreeSet<String>) -> Vec<String> {
    if n == 1 {
        vec![pick(base, avoid)]
    } else {
        (1..=n).map(|i| pick(&format!("{}{}", base, i), avoid)).collect()
    }
}

/// The nabla equivalence for `<x' = theta> phi`: the reachable endpoint `y` is
/// characterized by a greatest fixpoint over halvings of the time `t` within
/// the ball of radius `M`. Norm bounds are compared in squared form.
pub fn nabla_instance(ode: &Action, phi: &MuFormula) -> Result<MuFormula, AxiomError> {
    let Action::Ode { eqs, constraint } = ode else { return Err(AxiomError::NotOde) };
    if constraint.is_some() {
        return Err(AxiomError::Constrained);
    }
    let field = PolyVec::from_eqs(eqs)?;
    let hat = field.theta_hat().terms();
    let n = eqs.len();
    let xs: Vec<String> = eqs.iter().map(|(x, _)| x.clone()).collect();
    let theta: Vec<Term> = eqs.iter().map(|(_, t)| t.clone()).collect();
    let mut avoid = ovars_of(phi, eqs);
    let ys = pick_vec("y", n, &mut avoid);
    let t = pick("t", &mut avoid);
    let m = pick("M", &mut avoid);
    let zs = pick_vec("z", n, &mut avoid);
    let us = pick_vec("u", n, &mut avoid);
    let x_pvar = PVar::new(fresh_name_pvar(phi));

    let at_z = |ts: &[Term]| -> Vec<Term> {
        ts.iter().map(|t| xs.iter().zip(&zs).fold(t.clone(), |acc, (x, z)| acc.subst(x, &Term::var(z)))).collect()
    };
    let (tv, mm) = (Term::var(&t), mul(Term::var(&m), Term::var(&m)));
    let diff: Vec<Term> = ys.iter().zip(&xs).map(|(y, x)| sub(Term::var(y), Term::var(x))).collect();
    let in_ball = |v: &[String]| le(sq(vars(v)), mm.clone());

    let c1 = MuFormula::and(in_ball(&xs), in_ball(&ys));
    let c2 = exists_all(&zs, MuFormula::and(in_ball(&zs), le(sq(diff.clone()), mul(mul(tv.clone(), tv.clone()), sq(at_z(&theta))))));
    let taylor: Vec<Term> = diff.iter().zip(&theta).map(|(d, th)| sub(d.clone(), mul(tv.clone(), th.clone()))).collect();
    let t4 = mul(mul(tv.clone(), tv.clone()), mul(tv.clone(), tv.clone()));
    let c3 = exists_all(&zs, MuFormula::and(in_ball(&zs), le(mul(Term::cst("4"), sq(taylor)), mul(t4, sq(at_z(&hat))))));
    let half = Action::Assign(t.clone(), Term::app("/", vec![tv.clone(), Term::cst("2")]));
    let x_here = MuFormula::Var(x_pvar.clone());
    let c4 = exists_all(
        &us,
        MuFormula::dia(
            half,
            MuFormula::and(assign_all(&ys, &vars(&us), x_here.clone()), assign_all(&xs, &vars(&us), x_here)),
        ),
    );
    let rho = MuFormula::and(MuFormula::and(c1, c2), MuFormula::and(c3, c4));
    let reach = exists(&t, MuFormula::and(positive(&t), exists(&m, MuFormula::and(positive(&m), MuFormula::nu(x_pvar, rho)))));
    let rhs = exists_all(&ys, MuFormula::and(assign_all(&xs, &vars(&ys), phi.clone()), reach));
    Ok(mu_iff(MuFormula::dia(ode.clone(), phi.clone()), rhs))
}

fn fresh_name_pvar(phi: &MuFormula) -> String {
    let used = all_pvar_bases_mu(phi);
    if used.contains("X") {
        fresh_name("X", &used)
    } else {
        "X".to_string()
    }
}

/// Removes evolution domain constraints by following the flow forward and
/// checking the constraint on the way back.
pub fn tba_rewrite(f: &MuFormula) -> MuFormula {
    let mut avoid = all_ovars(f);
    tba(f, &mut avoid)
}

fn all_ovars(f: &MuFormula) -> BTreeSet<String> {
    let mut s = free_ovars_mu(f);
    for a in crate::logic::actions_mu(f) {
        s.extend(a.targets());
        if let Action::Ode { eqs, .. } = a {
            s.extend(eqs.iter().flat_map(|(_, t)| t.vars()));
        }
    }
    s
}

fn tba(f: &MuFormula, avoid: &mut BTreeSet<String>) -> MuFormula {
    match f {
        MuFormula::Lit(_) | MuFormula::Var(_) => f.clone(),
        MuFormula::Or(a, b) => MuFormula::or(tba(a, avoid), tba(b, avoid)),
        MuFormula::And(a, b) => MuFormula::and(tba(a, avoid), tba(b, avoid)),
        MuFormula::Mu(x, g) => MuFormula::mu(x.clone(), tba(g, avoid)),
        MuFormula::Nu(x, g) => MuFormula::nu(x.clone(), tba(g, avoid)),
        MuFormula::Diamond(Action::Ode { eqs, constraint: Some(psi) }, g) => {
            let (psi, g) = (tba(psi, avoid), tba(g, avoid));
            there_and_back(eqs, &psi, g, avoid)
        }
        MuFormula::Box(Action::Ode { eqs, constraint: Some(psi) }, g) => {
            let (psi, g) = (tba(psi, avoid), tba(g, avoid));
            bar(&there_and_back(eqs, &psi, bar(&g), avoid))
        }
        MuFormula::Diamond(a, g) => MuFormula::dia(a.clone(), tba(g, avoid)),
        MuFormula::Box(a, g) => MuFormula::boxed(a.clone(), tba(g, avoid)),
    }
}

fn there_and_back(eqs: &[(OVar, Term)], psi: &MuFormula, phi: MuFormula, avoid: &mut BTreeSet<String>) -> MuFormula {
    let t = pick("t", avoid);
    let mut fwd = eqs.to_vec();
    fwd.push((t.clone(), Term::cst("1")));
    let mut bwd: Vec<(OVar, Term)> = eqs.iter().map(|(x, th)| (x.clone(), Term::app("-", vec![th.clone()]))).collect();
    bwd.push((t.clone(), Term::app("-", vec![Term::cst("1")])));
    let nonneg = MuFormula::Lit(Literal::pred(">=", vec![Term::var(&t), Term::cst("0")]));
    let back = MuFormula::boxed(Action::Ode { eqs: bwd, constraint: None }, mu_imp(nonneg, psi.clone()));
    MuFormula::dia(
        Action::Assign(t, Term::cst("0")),
        MuFormula::dia(Action::Ode { eqs: fwd, constraint: None }, MuFormula::and(phi, back)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{free_pvars_mu, well_formed_mu};
    use crate::surface::{parse_mu, print_mu};

    fn ode(src: &str) -> (Action, MuFormula) {
        match parse_mu(src).unwrap() {
            MuFormula::Diamond(a, g) => (a, *g),
            _ => panic!("not a diamond"),
        }
    }

    #[test]
    fn nabla_for_constant_field() {
        let (a, phi) = ode("<{x' = 1}> x = 5");
        let f = nabla_instance(&a, &phi).unwrap();
        well_formed_mu(&f, None).unwrap();
        assert!(free_pvars_mu(&f).is_empty());
        let text = print_mu(&f);
        assert!(text.contains("4 * ((y - x - t * 1) * (y - x - t * 1)) <= t * t * (t * t) * (0 * 0)"), "{}", text);
        let ov = free_ovars_mu(&f);
        for v in ["x", "y", "t", "M", "z", "u"] {
            assert!(ov.contains(v) || text.contains(&format!("{} := *", v)), "{} missing", v);
        }
        assert_eq!(parse_mu(&text).unwrap(), f);
    }

    #[test]
    fn nabla_avoids_formula_variables() {
        let (a, phi) = ode("<{x' = y, y' = -x}> (t = 0 & M = 1 & ~X)");
        let f = nabla_instance(&a, &phi).unwrap();
        let text = print_mu(&f);
        assert!(text.contains("nu X0."), "{}", text);
        assert!(text.contains("t0 := *") && text.contains("M0 := *") && text.contains("y1 := *"), "{}", text);
    }

    #[test]
    fn nabla_rejects_constraints() {
        let (a, phi) = ode("<{x' = 1 & x <= 5}> x = 5");
        assert_eq!(nabla_instance(&a, &phi), Err(AxiomError::Constrained));
    }

    #[test]
    fn there_and_back_again() {
        let f = parse_mu("<{x' = 1 & x <= 5}> x = 5").unwrap();
        let g = tba_rewrite(&f);
        let text = print_mu(&g);
        assert_eq!(text, "<t := 0> <{x' = 1, t' = 1}> (x = 5 & [{x' = -1, t' = -1}] (!t >= 0 | x <= 5))");
        assert_eq!(parse_mu(&text).unwrap(), g);
    }

    #[test]
    fn nested_rewrites_use_distinct_clocks() {
        let f = parse_mu("[{x' = 1 & x <= 5}] <{x' = x & x >= 0}> x = 5").unwrap();
        let g = tba_rewrite(&f);
        let text = print_mu(&g);
        assert!(text.contains("t0 := 0") && text.contains("t := 0"), "{}", text);
        assert!(crate::logic::actions_mu(&g).iter().all(|a| !matches!(a, Action::Ode { constraint: Some(_), .. })));
    }
}
