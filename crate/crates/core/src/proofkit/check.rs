//! Line-by-line checking of proof scripts.

use std::collections::HashMap;

use super::taut::is_taut;
use super::{Ax, Calculus, Just, ProofScript, Theory};
use crate::binding::{alpha_eq, free_for, rename_ovar_gl, rename_ovar_mu, subst_pvar, CONTROL_PREFIX};
use crate::logic::*;
use crate::syntax::*;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    /// The line number as written in the script.
    pub number: usize,
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Verdict {
    pub diagnostics: Vec<Diagnostic>,
}

impl Verdict {
    pub fn ok(&self) -> bool {
        self.diagnostics.is_empty()
    }

    pub fn first_failure(&self) -> Option<usize> {
        self.diagnostics.first().map(|d| d.number)
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for d in &self.diagnostics {
            writeln!(f, "line {}: {}", d.number, d.message)?;
        }
        Ok(())
    }
}

type R = Result<(), String>;

/// Checks every line; failures are reported per line and do not stop the check.
pub fn check_proof(script: &ProofScript, theory: &Theory) -> Verdict {
    let sig = script.signature();
    let mut seen: HashMap<usize, &Formula> = HashMap::new();
    let mut last = 0;
    let mut v = Verdict::default();
    for line in &script.lines {
        let r = if line.number <= last {
            Err(format!("line numbers must increase (after {})", last))
        } else {
            check_line(script.calculus, &line.formula, &line.just, &seen, theory, &sig)
        };
        if let Err(message) = r {
            v.diagnostics.push(Diagnostic { number: line.number, message });
        }
        last = last.max(line.number);
        seen.insert(line.number, &line.formula);
    }
    v
}

fn check_line(
    calc: Calculus,
    f: &Formula,
    just: &Just,
    seen: &HashMap<usize, &Formula>,
    theory: &Theory,
    sig: &Signature,
) -> R {
    match (calc, f) {
        (Calculus::Mu, Formula::Mu(m)) => well_formed_mu(m, None).map_err(|e| e.to_string())?,
        (Calculus::Gl, Formula::Gl(g)) => {
            well_formed_gl(g, None).map_err(|e| e.to_string())?;
            if !free_pvars_gl(g).is_empty() {
                return Err("game-logic proofs may not mention propositional variables".into());
            }
        }
        _ => return Err("formula is not in the language of the calculus".into()),
    }
    let prem = |k: usize| -> Result<&Formula, String> {
        seen.get(&k).copied().ok_or_else(|| format!("reference to line {} which does not precede this line", k))
    };
    match *just {
        Just::Taut => match is_taut(f) {
            Ok(true) => Ok(()),
            Ok(false) => Err("taut: not a propositional tautology".into()),
            Err(e) => Err(format!("taut: {}", e)),
        },
        Just::Eq => eq_axiom(f),
        Just::Axiom(ax) => axiom(calc, ax, f, sig),
        Just::Hyp(k) => match theory.formulas.get(k.wrapping_sub(1)) {
            Some(h) if same(h, f) => Ok(()),
            Some(_) => Err(format!("hyp {}: formula differs from hypothesis {}", k, k)),
            None => Err(format!("hyp {}: theory has {} hypotheses", k, theory.formulas.len())),
        },
        Just::Mp(i, j) => {
            let (a, b) = (prem(i)?, prem(j)?);
            let fits = |imp_line: &Formula, ante: &Formula| {
                imp(imp_line).is_some_and(|(l, r)| same(&l, ante) && same(&r, f))
            };
            if fits(a, b) || fits(b, a) {
                Ok(())
            } else {
                Err(format!("mp {} {}: premises do not have the shapes A -> B and A with B this line", i, j))
            }
        }
        Just::Ma(i) | Just::M(i) => {
            if matches!(just, Just::Ma(_)) != (calc == Calculus::Mu) {
                return Err("rule not available in this calculus (use Ma in mu, M in gl)".into());
            }
            let (pl, pr) = imp(prem(i)?).ok_or_else(|| format!("premise {} is not an implication", i))?;
            let (cl, cr) = imp(f).ok_or("conclusion is not an implication")?;
            let ok = match (&cl, &cr) {
                (Formula::Mu(MuFormula::Diamond(a, x)), Formula::Mu(MuFormula::Diamond(b, y))) => {
                    a == b && same(&Formula::Mu((**x).clone()), &pl) && same(&Formula::Mu((**y).clone()), &pr)
                }
                (Formula::Gl(GlFormula::Diamond(a, x)), Formula::Gl(GlFormula::Diamond(b, y))) => {
                    a == b && same(&Formula::Gl((**x).clone()), &pl) && same(&Formula::Gl((**y).clone()), &pr)
                }
                _ => false,
            };
            ok.then_some(()).ok_or_else(|| "monotonicity: conclusion must be <g> A -> <g> B for premise A -> B".into())
        }
        Just::FpMu(i) => {
            let (Formula::Mu(m), Formula::Mu(p)) = (f, prem(i)?) else {
                return Err("FPmu is a mu-calculus rule".into());
            };
            let (l, phi) = as_mu_imp(m).ok_or("FPmu: conclusion is not an implication")?;
            let MuFormula::Mu(x, psi) = &l else {
                return Err("FPmu: conclusion must be mu X. psi -> phi".into());
            };
            if !free_for(x, &phi, psi) {
                return Err(format!("FPmu: side condition violated, {} is not free for phi in psi", x));
            }
            let inst = subst_pvar(psi, x, &phi).map_err(|e| format!("FPmu: {}", e))?;
            if alpha_eq(p, &mu_imp(inst, phi)) {
                Ok(())
            } else {
                Err(format!("FPmu: premise {} must be psi[phi/{}] -> phi", i, x))
            }
        }
        Just::FpStar(i) => {
            let (Formula::Gl(g), Formula::Gl(p)) = (f, prem(i)?) else {
                return Err("FPstar is a game-logic rule".into());
            };
            let (l, phi) = as_gl_imp(g).ok_or("FPstar: conclusion is not an implication")?;
            let GlFormula::Diamond(gm, psi) = &l else {
                return Err("FPstar: conclusion must be <g*> psi -> phi".into());
            };
            let Game::Repeat(inner) = &**gm else {
                return Err("FPstar: conclusion must be <g*> psi -> phi".into());
            };
            let want = gl_imp(GlFormula::or((**psi).clone(), GlFormula::dia((**inner).clone(), phi.clone())), phi);
            if *p == want {
                Ok(())
            } else {
                Err(format!("FPstar: premise {} must be psi | <g> phi -> phi", i))
            }
        }
        Just::Rename(i) => {
            if same(prem(i)?, f) {
                Ok(())
            } else {
                Err(format!("rename {}: formulas differ beyond renaming of bound variables", i))
            }
        }
    }
}

fn same(a: &Formula, b: &Formula) -> bool {
    match (a, b) {
        (Formula::Mu(x), Formula::Mu(y)) => alpha_eq(x, y),
        (Formula::Gl(x), Formula::Gl(y)) => x == y,
        _ => false,
    }
}

fn imp(f: &Formula) -> Option<(Formula, Formula)> {
    match f {
        Formula::Mu(m) => as_mu_imp(m).map(|(a, b)| (Formula::Mu(a), Formula::Mu(b))),
        Formula::Gl(g) => as_gl_imp(g).map(|(a, b)| (Formula::Gl(a), Formula::Gl(b))),
    }
}

fn iff(f: &Formula) -> Option<(Formula, Formula)> {
    match f {
        Formula::Mu(MuFormula::And(l, r)) => {
            let (a, b) = as_mu_imp(l)?;
            let (b2, a2) = as_mu_imp(r)?;
            (alpha_eq(&a, &a2) && alpha_eq(&b, &b2)).then_some((Formula::Mu(a), Formula::Mu(b)))
        }
        Formula::Mu(_) => None,
        Formula::Gl(g) => as_gl_iff(g).map(|(a, b)| (Formula::Gl(a), Formula::Gl(b))),
    }
}

/// Tries `check` on both orientations of an equivalence.
fn either_way(f: &Formula, name: &str, check: impl Fn(&Formula, &Formula) -> Option<R>) -> R {
    let (l, r) = iff(f).ok_or_else(|| format!("{}: not an equivalence", name))?;
    match check(&l, &r).or_else(|| check(&r, &l)) {
        Some(res) => res,
        None => Err(format!("{}: not an instance of the schema", name)),
    }
}

// ---- equality ----

fn diff_term(a: &Term, b: &Term, s: &Term, t: &Term) -> bool {
    if a == s && b == t {
        return true;
    }
    match (a, b) {
        (Term::App(f, xs), Term::App(g, ys)) if f == g && xs.len() == ys.len() => diff_args(xs, ys, s, t),
        _ => false,
    }
}

fn diff_args(xs: &[Term], ys: &[Term], s: &Term, t: &Term) -> bool {
    let d: Vec<usize> = (0..xs.len()).filter(|&k| xs[k] != ys[k]).collect();
    d.len() == 1 && diff_term(&xs[d[0]], &ys[d[0]], s, t)
}

fn diff_atom(a: &Atom, b: &Atom, s: &Term, t: &Term) -> bool {
    match (a, b) {
        (Atom::Eq(a1, a2), Atom::Eq(b1, b2)) => diff_args(&[a1.clone(), a2.clone()], &[b1.clone(), b2.clone()], s, t),
        (Atom::Pred(p, xs), Atom::Pred(q, ys)) => p == q && xs.len() == ys.len() && diff_args(xs, ys, s, t),
        _ => false,
    }
}

fn as_lit(f: &Formula) -> Option<&Literal> {
    match f {
        Formula::Mu(MuFormula::Lit(l)) | Formula::Gl(GlFormula::Lit(l)) => Some(l),
        _ => None,
    }
}

fn eq_axiom(f: &Formula) -> R {
    if let Some(Literal { positive: true, atom: Atom::Eq(a, b) }) = as_lit(f) {
        return if a == b { Ok(()) } else { Err("eq: reflexivity needs identical sides".into()) };
    }
    let bad = || Err("eq: expected t = t, s = t -> (A <-> B) or s = t -> u = v with one occurrence replaced".into());
    let Some((ante, cons)) = imp(f) else { return bad() };
    let Some(Literal { positive: true, atom: Atom::Eq(s, t) }) = as_lit(&ante) else { return bad() };
    if let Some(Literal { positive: true, atom: Atom::Eq(u, v) }) = as_lit(&cons) {
        if diff_term(u, v, s, t) {
            return Ok(());
        }
    }
    if let Some((a, b)) = iff(&cons) {
        if let (Some(la), Some(lb)) = (as_lit(&a), as_lit(&b)) {
            if la.positive == lb.positive && diff_atom(&la.atom, &lb.atom, s, t) {
                return Ok(());
            }
        }
    }
    bad()
}

// ---- object-variable dependence and term substitution ----

fn touches(a: &Action, x: &str, sig: &Signature) -> bool {
    match a {
        Action::Named { name, tags } => sig.footprint(name, tags).is_none_or(|fp| fp.iter().any(|v| v == x)),
        _ => false,
    }
}

/// Conservative: true unless the truth of `f` provably ignores `x`.
pub(crate) fn depends_mu(f: &MuFormula, x: &str, sig: &Signature) -> bool {
    free_ovars_mu(f).contains(x) || !free_pvars_mu(f).is_empty() || actions_mu(f).iter().any(|a| touches(a, x, sig))
}

pub(crate) fn depends_gl(f: &GlFormula, x: &str, sig: &Signature) -> bool {
    free_ovars_gl(f).contains(x) || !free_pvars_gl(f).is_empty() || actions_gl(f).iter().any(|a| touches(a, x, sig))
}

/// The action with `x` replaced by `t`, and whether `x` is still free after it.
/// `None` if the replacement cannot be pushed through.
fn subst_action(a: &Action, x: &str, t: &Term, body_depends: bool, sig: &Signature) -> Option<(Action, bool)> {
    let captures = |z: &str| t.mentions(z) && body_depends;
    match a {
        Action::Assign(z, s) => {
            if z != x && captures(z) {
                return None;
            }
            Some((Action::Assign(z.clone(), s.subst(x, t)), z != x))
        }
        Action::Random(z) => {
            if z != x && captures(z) {
                return None;
            }
            Some((a.clone(), z != x))
        }
        Action::Named { name, tags } => {
            let fp = sig.footprint(name, tags)?;
            if fp.iter().any(|v| v == x || captures(v)) {
                return None;
            }
            Some((a.clone(), true))
        }
        Action::Ode { .. } => None,
    }
}

/// `f[t/x]`, where defined without renaming.
pub(crate) fn term_subst_mu(f: &MuFormula, x: &str, t: &Term, sig: &Signature) -> Option<MuFormula> {
    if !depends_mu(f, x, sig) {
        return Some(f.clone());
    }
    Some(match f {
        MuFormula::Lit(l) => MuFormula::Lit(l.subst(x, t)),
        MuFormula::Var(_) | MuFormula::Mu(..) | MuFormula::Nu(..) => return None,
        MuFormula::Or(a, b) => MuFormula::or(term_subst_mu(a, x, t, sig)?, term_subst_mu(b, x, t, sig)?),
        MuFormula::And(a, b) => MuFormula::and(term_subst_mu(a, x, t, sig)?, term_subst_mu(b, x, t, sig)?),
        MuFormula::Diamond(a, g) | MuFormula::Box(a, g) => {
            let (a2, free) = subst_action(a, x, t, depends_mu(g, x, sig), sig)?;
            let body = if free { term_subst_mu(g, x, t, sig)? } else { (**g).clone() };
            match f {
                MuFormula::Diamond(..) => MuFormula::dia(a2, body),
                _ => MuFormula::boxed(a2, body),
            }
        }
    })
}

pub(crate) fn term_subst_gl(f: &GlFormula, x: &str, t: &Term, sig: &Signature) -> Option<GlFormula> {
    if !depends_gl(f, x, sig) {
        return Some(f.clone());
    }
    Some(match f {
        GlFormula::Lit(l) => GlFormula::Lit(l.subst(x, t)),
        GlFormula::Var(_) => return None,
        GlFormula::Not(g) => GlFormula::Not(Box::new(term_subst_gl(g, x, t, sig)?)),
        GlFormula::Or(a, b) => GlFormula::or(term_subst_gl(a, x, t, sig)?, term_subst_gl(b, x, t, sig)?),
        GlFormula::Diamond(g, b) => match &**g {
            Game::Act(a) => {
                let (a2, free) = subst_action(a, x, t, depends_gl(b, x, sig), sig)?;
                let body = if free { term_subst_gl(b, x, t, sig)? } else { (**b).clone() };
                GlFormula::dia(Game::Act(a2), body)
            }
            Game::Test(c) => GlFormula::dia(Game::test(term_subst_gl(c, x, t, sig)?), term_subst_gl(b, x, t, sig)?),
            _ => return None,
        },
    })
}

fn terms_mu(f: &MuFormula, out: &mut Vec<Term>) {
    match f {
        MuFormula::Lit(l) => out.extend(l.atom.terms().into_iter().cloned()),
        MuFormula::Var(_) => {}
        MuFormula::Or(a, b) | MuFormula::And(a, b) => {
            terms_mu(a, out);
            terms_mu(b, out);
        }
        MuFormula::Diamond(a, g) | MuFormula::Box(a, g) => {
            terms_action(a, out);
            terms_mu(g, out);
        }
        MuFormula::Mu(_, g) | MuFormula::Nu(_, g) => terms_mu(g, out),
    }
}

fn terms_action(a: &Action, out: &mut Vec<Term>) {
    match a {
        Action::Assign(_, t) => out.push(t.clone()),
        Action::Ode { eqs, .. } => out.extend(eqs.iter().map(|(_, t)| t.clone())),
        _ => {}
    }
}

fn terms_gl(f: &GlFormula, out: &mut Vec<Term>) {
    match f {
        GlFormula::Lit(l) => out.extend(l.atom.terms().into_iter().cloned()),
        GlFormula::Var(_) => {}
        GlFormula::Not(g) => terms_gl(g, out),
        GlFormula::Or(a, b) => {
            terms_gl(a, out);
            terms_gl(b, out);
        }
        GlFormula::Diamond(g, b) => {
            terms_game(g, out);
            terms_gl(b, out);
        }
    }
}

fn terms_game(g: &Game, out: &mut Vec<Term>) {
    match g {
        Game::Act(a) => terms_action(a, out),
        Game::Test(f) => terms_gl(f, out),
        Game::Choice(a, b) | Game::Seq(a, b) => {
            terms_game(a, out);
            terms_game(b, out);
        }
        Game::Repeat(a) | Game::Dual(a) => terms_game(a, out),
    }
}

fn match_term(p: &Term, i: &Term, x: &str) -> Option<Term> {
    match (p, i) {
        (Term::Var(v), _) if v == x => Some(i.clone()),
        (Term::App(f, ps), Term::App(g, is)) if f == g && ps.len() == is.len() => {
            ps.iter().zip(is).find_map(|(p, i)| match_term(p, i, x))
        }
        _ => None,
    }
}

/// The term an instance substitutes for `x`, read off the first occurrence.
fn infer_theta(pattern: &[Term], inst: &[Term], x: &str) -> Term {
    pattern.iter().zip(inst).find_map(|(p, i)| match_term(p, i, x)).unwrap_or_else(|| Term::var(x))
}

// ---- axioms ----

fn axiom(calc: Calculus, ax: Ax, f: &Formula, sig: &Signature) -> R {
    let name = ax.token();
    let gl_only = matches!(ax, Ax::Test | Ax::Choice | Ax::Comp | Ax::Star | Ax::Dual);
    if (ax == Ax::Mu && calc != Calculus::Mu) || (gl_only && calc != Calculus::Gl) {
        return Err(format!("{} is not an axiom of this calculus", name));
    }
    match ax {
        Ax::Mu => either_way(f, name, |l, r| {
            let (Formula::Mu(MuFormula::Mu(x, phi)), Formula::Mu(r)) = (l, r) else { return None };
            let Formula::Mu(lm) = l else { return None };
            if !free_for(x, lm, phi) {
                return Some(Err(format!("{}: side condition violated, {} is not free for mu {}. phi in phi", name, x, x)));
            }
            let unfolded = subst_pvar(phi, x, lm).ok()?;
            alpha_eq(&unfolded, r).then_some(Ok(()))
        }),
        Ax::ExI => {
            let (l, r) = imp(f).ok_or_else(|| format!("{}: not an implication", name))?;
            let not_inst = || Err(format!("{}: expected phi[t/x] -> <x := *> phi", name));
            match (&l, &r) {
                (Formula::Mu(l), Formula::Mu(MuFormula::Diamond(Action::Random(x), phi))) => {
                    let (mut ps, mut is) = (Vec::new(), Vec::new());
                    terms_mu(phi, &mut ps);
                    terms_mu(l, &mut is);
                    let t = infer_theta(&ps, &is, x);
                    match term_subst_mu(phi, x, &t, sig) {
                        Some(s) if alpha_eq(&s, l) => Ok(()),
                        Some(_) => not_inst(),
                        None => Err(format!("{}: substituting for {} is not admissible in phi", name, x)),
                    }
                }
                (Formula::Gl(l), Formula::Gl(GlFormula::Diamond(g, phi))) => {
                    let Game::Act(Action::Random(x)) = &**g else { return not_inst() };
                    let (mut ps, mut is) = (Vec::new(), Vec::new());
                    terms_gl(phi, &mut ps);
                    terms_gl(l, &mut is);
                    let t = infer_theta(&ps, &is, x);
                    match term_subst_gl(phi, x, &t, sig) {
                        Some(s) if s == *l => Ok(()),
                        Some(_) => not_inst(),
                        None => Err(format!("{}: substituting for {} is not admissible in phi", name, x)),
                    }
                }
                _ => not_inst(),
            }
        }
        Ax::V => {
            let (l, r) = imp(f).ok_or_else(|| format!("{}: not an implication", name))?;
            let (x, dep) = match (&l, &r) {
                (Formula::Mu(MuFormula::Diamond(Action::Random(x), psi)), Formula::Mu(r)) if alpha_eq(psi, r) => {
                    (x, depends_mu(psi, x, sig))
                }
                (Formula::Gl(GlFormula::Diamond(g, psi)), Formula::Gl(r)) if **psi == *r => match &**g {
                    Game::Act(Action::Random(x)) => (x, depends_gl(psi, x, sig)),
                    _ => return Err(format!("{}: expected <x := *> psi -> psi", name)),
                },
                _ => return Err(format!("{}: expected <x := *> psi -> psi", name)),
            };
            if dep {
                Err(format!("{}: side condition violated, {} may be free in psi", name, x))
            } else {
                Ok(())
            }
        }
        Ax::Assign => either_way(f, name, |l, r| match (l, r) {
            (Formula::Mu(MuFormula::Diamond(Action::Assign(x, t), phi)), Formula::Mu(rhs)) => {
                let MuFormula::Diamond(Action::Random(y), body) = rhs else { return None };
                let MuFormula::And(eq, psi) = &**body else { return None };
                let want = MuFormula::Lit(Literal::eq(Term::var(y), t.clone()));
                if **eq != want || !alpha_eq(psi, &rename_ovar_mu(phi, x, y)) {
                    return None;
                }
                let fresh = y != x && !t.mentions(y) && !depends_mu(phi, y, sig);
                Some(fresh.then_some(()).ok_or_else(|| format!("{}: side condition violated, {} occurs in phi or theta", name, y)))
            }
            (Formula::Gl(GlFormula::Diamond(g, phi)), Formula::Gl(rhs)) => {
                let Game::Act(Action::Assign(x, t)) = &**g else { return None };
                let GlFormula::Diamond(g2, body) = rhs else { return None };
                let Game::Act(Action::Random(y)) = &**g2 else { return None };
                let (eq, psi) = as_gl_and(body)?;
                let want = GlFormula::Lit(Literal::eq(Term::var(y), t.clone()));
                if eq != want || psi != rename_ovar_gl(phi, x, y) {
                    return None;
                }
                let fresh = y != x && !t.mentions(y) && !depends_gl(phi, y, sig);
                Some(fresh.then_some(()).ok_or_else(|| format!("{}: side condition violated, {} occurs in phi or theta", name, y)))
            }
            _ => None,
        }),
        Ax::Test | Ax::Choice | Ax::Comp | Ax::Star | Ax::Dual => either_way(f, name, |l, r| {
            let (Formula::Gl(GlFormula::Diamond(g, phi)), Formula::Gl(r)) = (l, r) else { return None };
            let phi = (**phi).clone();
            let want = match (ax, &**g) {
                (Ax::Test, Game::Test(psi)) => gl_and((**psi).clone(), phi),
                (Ax::Choice, Game::Choice(a, b)) => {
                    GlFormula::or(GlFormula::dia((**a).clone(), phi.clone()), GlFormula::dia((**b).clone(), phi))
                }
                (Ax::Comp, Game::Seq(a, b)) => GlFormula::dia((**a).clone(), GlFormula::dia((**b).clone(), phi)),
                (Ax::Star, Game::Repeat(a)) => {
                    GlFormula::or(phi.clone(), GlFormula::dia((**a).clone(), GlFormula::dia((**g).clone(), phi)))
                }
                (Ax::Dual, Game::Dual(a)) => GlFormula::not(GlFormula::dia((**a).clone(), GlFormula::not(phi))),
                _ => return None,
            };
            (want == *r).then_some(Ok(()))
        }),
        Ax::Ctl => either_way(f, name, |l, r| {
            let (vars, body) = control_chain(r)?;
            if !same(&body, l) {
                return None;
            }
            let dep = vars.iter().any(|c| match l {
                Formula::Mu(m) => depends_mu(m, c, sig),
                Formula::Gl(g) => depends_gl(g, c, sig),
            });
            Some((!dep).then_some(()).ok_or_else(|| format!("{}: formula depends on a control variable", name)))
        }),
    }
}

fn control_assign(a: &Action) -> Option<OVar> {
    match a {
        Action::Assign(c, Term::Const(k)) if c.starts_with(CONTROL_PREFIX) && (k == "0" || k == "1") => Some(c.clone()),
        _ => None,
    }
}

fn control_game(g: &Game, out: &mut Vec<OVar>) -> Option<()> {
    match g {
        Game::Act(a) => out.push(control_assign(a)?),
        Game::Seq(a, b) => {
            control_game(a, out)?;
            control_game(b, out)?;
        }
        _ => return None,
    }
    Some(())
}

/// Splits `<c1 := k1> ... <cn := kn> body` (or the game form) into the
/// assigned control variables and the body.
fn control_chain(f: &Formula) -> Option<(Vec<OVar>, Formula)> {
    let mut vars = Vec::new();
    match f {
        Formula::Mu(m) => {
            let mut cur = m;
            while let MuFormula::Diamond(a, g) = cur {
                match control_assign(a) {
                    Some(c) => vars.push(c),
                    None => break,
                }
                cur = g;
            }
            (!vars.is_empty()).then(|| (vars, Formula::Mu(cur.clone())))
        }
        Formula::Gl(GlFormula::Diamond(g, body)) => {
            control_game(g, &mut vars)?;
            Some((vars, Formula::Gl((**body).clone())))
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proofkit::parse_proof;

    fn run(src: &str) -> Verdict {
        check_proof(&parse_proof(src).unwrap(), &Theory::default())
    }

    fn accepts(src: &str) {
        let v = run(src);
        assert!(v.ok(), "{}", v);
    }

    fn rejects_at(src: &str, line: usize, needle: &str) {
        let v = run(src);
        assert_eq!(v.first_failure(), Some(line), "{}", v);
        assert!(v.diagnostics[0].message.contains(needle), "{}", v);
    }

    #[test]
    fn unfolding() {
        accepts("logic mu\n1. mu X. (p | <a> X) <-> p | <a> mu X. (p | <a> X) ; ax.mu\n");
        accepts("logic mu\n1. p | <a> mu X. (p | <a> X) <-> mu X. (p | <a> X) ; ax.mu\n");
        rejects_at("logic mu\n1. mu X. (p | <a> X) <-> p | <a> X ; ax.mu\n", 1, "ax.mu");
    }

    #[test]
    fn fixpoint_rule_side_condition() {
        rejects_at(
            "logic mu\n1. Y -> Y ; taut\n2. mu X. mu Y. (X | <a> Y) -> Y ; FPmu 1\n",
            2,
            "side condition",
        );
    }

    #[test]
    fn gl_monotonicity() {
        accepts("logic gl\n1. p -> p | q ; taut\n2. <a*> p -> <a*> (p | q) ; M 1\n");
        rejects_at("logic gl\n1. p -> p | q ; taut\n2. <a*> p -> <a> (p | q) ; M 1\n", 2, "monotonicity");
        rejects_at("logic gl\n1. X -> X ; taut\n", 1, "propositional variables");
    }

    #[test]
    fn references_point_backward() {
        rejects_at("logic mu\n1. p -> p ; mp 1 2\n2. p ; taut\n", 1, "does not precede");
        rejects_at("logic mu\n2. p | !p ; taut\n1. p | !p ; taut\n", 1, "increase");
    }

    #[test]
    fn equality() {
        accepts("logic mu\n1. x = x ; eq\n2. x = y -> (p(f(x)) <-> p(f(y))) ; eq\n3. x = y -> f(x) = f(y) ; eq\n");
        rejects_at("logic mu\n1. x = y -> (p(f(x), x) <-> p(f(y), y)) ; eq\n", 1, "eq");
    }

    #[test]
    fn object_variable_axioms() {
        accepts("logic mu\n1. p(f(y)) -> <x := *> p(x) ; ax.exI\n");
        accepts("logic mu\n1. <y := 1> p(f(z)) -> <x := *> <y := 1> p(x) ; ax.exI\n");
        rejects_at("logic mu\n1. <y := 1> p(y) -> <x := *> <y := 1> p(x) ; ax.exI\n", 1, "ax.exI");
        accepts("logic mu\n1. <x := *> p(y) -> p(y) ; ax.V\n");
        rejects_at("logic mu\n1. <x := *> <a> p(y) -> <a> p(y) ; ax.V\n", 1, "side condition");
        accepts("logic mu\nfootprint a: y\n1. <x := *> <a> p(y) -> <a> p(y) ; ax.V\n");
        accepts("logic mu\n1. <x := f(x)> p(x) <-> <y := *> (y = f(x) & p(y)) ; ax.assign\n");
        rejects_at("logic mu\n1. <x := f(y)> p(x) <-> <y := *> (y = f(y) & p(y)) ; ax.assign\n", 1, "side condition");
    }

    #[test]
    fn game_axioms() {
        accepts("logic gl\n1. <?q> p <-> q & p ; ax.test\n");
        accepts("logic gl\n1. <a u b> p <-> <a> p | <b> p ; ax.choice\n");
        accepts("logic gl\n1. <a; b> p <-> <a> <b> p ; ax.comp\n");
        accepts("logic gl\n1. <a*> p <-> p | <a> <a*> p ; ax.star\n");
        accepts("logic gl\n1. <a^d> p <-> !<a> !p ; ax.dual\n");
        rejects_at("logic gl\n1. <a^d> p <-> !<a> p ; ax.dual\n", 1, "ax.dual");
        rejects_at("logic mu\n1. p <-> p ; ax.star\n", 1, "not an axiom");
    }

    #[test]
    fn control_flags() {
        accepts("logic mu\n1. p(x) <-> <ctl0 := 0> <ctl1 := 1> p(x) ; ax.ctl\n");
        rejects_at("logic mu\n1. p(ctl0) <-> <ctl0 := 1> p(ctl0) ; ax.ctl\n", 1, "control");
        accepts("logic gl\n1. <ctl0 := 0; ctl0 := 1> p(x) <-> p(x) ; ax.ctl\n");
    }

    #[test]
    fn diagnostics_continue_after_failure() {
        let v = run("logic mu\n1. p ; taut\n2. q ; taut\n3. p | !p ; taut\n");
        assert_eq!(v.diagnostics.iter().map(|d| d.number).collect::<Vec<_>>(), vec![1, 2]);
    }
}
