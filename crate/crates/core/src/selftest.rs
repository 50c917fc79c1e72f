//! Seeded end-to-end checks of the library against its stated properties.
//!
//! Each check draws its own instances from the seed, so results are
//! reproducible and independent of the order in which checks run.

use std::collections::BTreeSet;
use std::fmt;
use std::time::{Duration, Instant};

use rand::Rng;

use crate::binding::{alpha_eq, free_for, subst_pvar, subst_pvar_gl};
use crate::corpus::{self, FIELDS};
use crate::differential::files::{parse_field, parse_triples};
use crate::differential::{rk4_trajectory, Ball, NumConfig, PolyVec, Region};
use crate::gen::{self, Gen, GenConfig, GenRng};
use crate::logic::*;
use crate::proofkit::{check_proof, subst_proof, translate_proof_sharp, Calculus, ProofScript};
use crate::semantics::{eval_game, EvalError, eval_gl, eval_mu, is_valid_on, is_valid_on_gl, FiniteStructure, Valuation};
use crate::surface::{parse_mu, parse_structure, print_gl, print_mu};
use crate::syntax::*;
use crate::translate::{eliminate_assignments, eval_flat, FlatError, sharp, sharp_avoiding};

#[derive(Clone, Copy, Debug)]
pub struct Config {
    pub seed: u64,
    /// Instances for the randomized checks; the flat and reduction checks
    /// use three fifths and two fifths of it.
    pub count: usize,
}

impl Default for Config {
    fn default() -> Config {
        Config { seed: 0, count: 500 }
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub budget: Duration,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} [{}] {}: {} ({:.2}s, budget {}s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.elapsed.as_secs_f64(),
            self.budget.as_secs()
        )
    }
}

pub const CHECKS: [(u8, &str, u64); 9] = [
    (1, "negation is complement", 30),
    (2, "monotonicity", 30),
    (3, "sharp and flat preserve denotations", 300),
    (4, "substitution lemmas", 10),
    (5, "proof corpus", 30),
    (6, "proof transformations re-check", 30),
    (7, "assignment elimination", 60),
    (8, "differential numerics", 60),
    (9, "natural-number fixpoint", 5),
];

pub fn run_all(cfg: Config) -> Vec<Outcome> {
    CHECKS.iter().map(|&(id, ..)| run(id, cfg).expect("known id")).collect()
}

/// Runs one check. Returns `None` for an unknown id.
pub fn run(id: u8, cfg: Config) -> Option<Outcome> {
    let &(_, name, budget) = CHECKS.iter().find(|c| c.0 == id)?;
    let seed = cfg.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(id as u64);
    let start = Instant::now();
    let res = match id {
        1 => negation(seed, cfg.count),
        2 => monotonicity(seed, cfg.count),
        3 => translations(seed, cfg.count, cfg.count * 3 / 5),
        4 => substitution(seed, cfg.count),
        5 => proof_corpus(seed),
        6 => transformations(),
        7 => reduction(seed, cfg.count * 2 / 5),
        8 => numerics(),
        _ => naturals(),
    };
    let elapsed = start.elapsed();
    let budget = Duration::from_secs(budget);
    let (passed, detail) = match res {
        Ok(d) if elapsed <= budget => (true, d),
        Ok(d) => (false, format!("{d}; over time budget")),
        Err(e) => (false, e),
    };
    Some(Outcome { id, name, passed, detail, elapsed, budget })
}

type Check = Result<String, String>;

fn pool(r: &mut GenRng, n: usize, max_domain: usize) -> Vec<FiniteStructure> {
    let vars: Vec<OVar> = vec!["x".into(), "y".into()];
    let acts: Vec<String> = vec!["a".into(), "b".into()];
    (0..n).map(|_| gen::structure(r, max_domain, &vars, &acts)).collect()
}

fn pvar_bases() -> Vec<String> {
    GenConfig::standard(0).free_pvars
}

fn negation(seed: u64, count: usize) -> Check {
    let mut r = gen::rng(seed);
    let structs = pool(&mut r, 20, 3);
    for i in 0..count {
        let s = &structs[i % structs.len()];
        let om = gen::valuation(&mut r, s, &pvar_bases());
        let f = Gen::for_structure(&mut r, GenConfig::standard(5), s).mu_formula();
        let d = eval_mu(s, &om, &f).map_err(|e| format!("{}: {e}", print_mu(&f)))?;
        let nd = eval_mu(s, &om, &bar(&f)).map_err(|e| format!("{}: {e}", print_mu(&f)))?;
        if nd != d.complement() {
            return Err(format!("instance {i}: bar of {} is not its complement", print_mu(&f)));
        }
    }
    Ok(format!("{count} formulas over 20 structures"))
}

fn mentions_bar(f: &MuFormula, x: &str) -> bool {
    free_pvars_mu(f).iter().any(|p| p.base == x && p.barred)
}

fn monotonicity(seed: u64, count: usize) -> Check {
    let mut r = gen::rng(seed);
    let structs = pool(&mut r, 20, 3);
    let x = PVar::new("P");
    let (mut formulas, mut games) = (0, 0);
    for i in 0..count {
        let s = &structs[i % structs.len()];
        let n = s.num_states().map_err(|e| e.to_string())?;
        let d2 = gen::state_set(&mut r, n);
        let d1 = d2.intersection(&gen::state_set(&mut r, n));
        let om = gen::valuation(&mut r, s, &pvar_bases());
        if i % 2 == 0 {
            let f = loop {
                let f = Gen::for_structure(&mut r, GenConfig::standard(4), s).mu_formula();
                if !mentions_bar(&f, &x.base) {
                    break f;
                }
            };
            let mut lo = om.clone();
            lo.set(&x, d1);
            let mut hi = om;
            hi.set(&x, d2);
            let a = eval_mu(s, &lo, &f).map_err(|e| e.to_string())?;
            let b = eval_mu(s, &hi, &f).map_err(|e| e.to_string())?;
            if !a.is_subset(&b) {
                return Err(format!("instance {i}: {} is not monotone in P", print_mu(&f)));
            }
            formulas += 1;
        } else {
            let g = Gen::for_structure(&mut r, GenConfig::standard(4), s).game(4);
            let a = eval_game(s, &om, &g, &d1).map_err(|e| e.to_string())?;
            let b = eval_game(s, &om, &g, &d2).map_err(|e| e.to_string())?;
            if !a.is_subset(&b) {
                let shown = print_gl(&GlFormula::dia(g, gl_true()));
                return Err(format!("instance {i}: game of {shown} is not monotone"));
            }
            games += 1;
        }
    }
    Ok(format!("{formulas} formula and {games} game instances"))
}

fn over_cap(e: &FlatError) -> bool {
    matches!(e, FlatError::Eval(EvalError::Cap(_)))
}

/// Instances whose translation would exceed the state-space caps are
/// redrawn and counted.
fn translations(seed: u64, count: usize, flat_count: usize) -> Check {
    let mut r = gen::rng(seed);
    let structs = pool(&mut r, 20, 3);
    let closed = GenConfig::standard(4).closed();
    let none = Valuation::new();
    let mut redrawn = 0;
    let mut i = 0;
    while i < count {
        let s = &structs[i % structs.len()];
        let f = Gen::for_structure(&mut r, closed.clone(), s).gl_formula();
        let want = eval_gl(s, &none, &f).map_err(|e| e.to_string())?;
        let got = eval_mu(s, &none, &sharp(&f)).map_err(|e| e.to_string())?;
        if want != got {
            return Err(format!("sharp instance {i}: {}", print_gl(&f)));
        }
        if i < flat_count {
            match eval_flat(s, &none, &sharp(&f)) {
                Ok(back) if back != want => return Err(format!("round trip instance {i}: {}", print_gl(&f))),
                Ok(_) => {}
                Err(e) if over_cap(&e) => {
                    redrawn += 1;
                    continue;
                }
                Err(e) => return Err(format!("round trip {}: {e}", print_gl(&f))),
            }
        }
        i += 1;
    }
    let cfg = GenConfig::standard(4).closed().without_tags();
    let mut i = 0;
    while i < flat_count {
        let s = &structs[i % structs.len()];
        let f = Gen::for_structure(&mut r, cfg.clone(), s).mu_formula();
        let want = eval_mu(s, &none, &f).map_err(|e| e.to_string())?;
        match eval_flat(s, &none, &f) {
            Ok(got) if got != want => return Err(format!("flat instance {i}: {}", print_mu(&f))),
            Ok(_) => i += 1,
            Err(e) if over_cap(&e) => redrawn += 1,
            Err(e) => return Err(format!("flat {}: {e}", print_mu(&f))),
        }
    }
    Ok(format!("{count} sharp, {flat_count} flat, {flat_count} round trips, {redrawn} redrawn over caps"))
}

fn gl_with_pvars(r: &mut GenRng, depth: usize) -> GlFormula {
    let mut cfg = GenConfig::standard(depth).without_tags();
    cfg.free_pvars = vec!["P".into(), "Q".into(), "R".into()];
    Gen::new(r, cfg).gl_formula()
}

fn mu_with_pvars(r: &mut GenRng, depth: usize) -> MuFormula {
    let mut cfg = GenConfig::standard(depth).without_tags();
    cfg.free_pvars = vec!["P".into(), "Q".into(), "R".into()];
    Gen::new(r, cfg).mu_formula()
}

fn pick_pvar(r: &mut GenRng) -> PVar {
    let base = ["P", "Q", "R"][r.gen_range(0..3)];
    PVar { barred: r.gen_bool(0.3), ..PVar::new(base) }
}

/// Draws until `f` succeeds, at most 50 times per instance.
fn draw<T>(r: &mut GenRng, mut f: impl FnMut(&mut GenRng) -> Option<T>) -> Result<T, String> {
    (0..50).find_map(|_| f(r)).ok_or_else(|| "no instance met the side conditions".to_string())
}

fn substitution(seed: u64, count: usize) -> Check {
    let mut r = gen::rng(seed);
    for i in 0..count {
        // sharp commutes with substitution, up to the names of bound variables
        let (lhs, rhs) = draw(&mut r, |r| {
            let f = gl_with_pvars(r, 3);
            let psi = gl_with_pvars(r, 2);
            let x = pick_pvar(r);
            let lhs = sharp(&subst_pvar_gl(&f, &x, &psi).ok()?);
            let mut avoid: BTreeSet<String> = binding_bases(&psi);
            avoid.insert(x.base.clone());
            let rhs = subst_pvar(&sharp_avoiding(&f, &avoid), &x, &sharp(&psi)).ok()?;
            Some((lhs, rhs))
        })?;
        if !alpha_eq(&lhs, &rhs) {
            return Err(format!("sharp instance {i}: {} vs {}", print_mu(&lhs), print_mu(&rhs)));
        }

        // bar commutes with substitution
        let (a, b) = draw(&mut r, |r| {
            let f = mu_with_pvars(r, 4);
            let psi = mu_with_pvars(r, 2);
            let x = pick_pvar(r);
            if !free_for(&x, &psi, &f) {
                return None;
            }
            Some((bar(&subst_pvar(&f, &x, &psi).ok()?), subst_pvar(&bar(&f), &x, &psi).ok()?))
        })?;
        if a != b {
            return Err(format!("bar instance {i}: {} vs {}", print_mu(&a), print_mu(&b)));
        }

        // composing substitutions
        let (a, b) = draw(&mut r, |r| {
            let f = mu_with_pvars(r, 3);
            let psi = mu_with_pvars(r, 2);
            let rho = mu_with_pvars(r, 2);
            let x = pick_pvar(r);
            let same = i % 2 == 0;
            let y = if same {
                if r.gen_bool(0.5) {
                    x.clone()
                } else {
                    x.bar()
                }
            } else {
                let y = pick_pvar(r);
                if y.base == x.base || free_pvar_bases_mu(&rho).contains(&x.base) {
                    return None;
                }
                y
            };
            let lhs = subst_pvar(&subst_pvar(&f, &x, &psi).ok()?, &y, &rho).ok()?;
            let inner = subst_pvar(&psi, &y, &rho).ok()?;
            let rhs = if same {
                subst_pvar(&f, &x, &inner).ok()?
            } else {
                subst_pvar(&subst_pvar(&f, &y, &rho).ok()?, &x, &inner).ok()?
            };
            Some((lhs, rhs))
        })?;
        if a != b {
            return Err(format!("composition instance {i}: {} vs {}", print_mu(&a), print_mu(&b)));
        }
    }
    Ok(format!("{count} instances of each identity"))
}

fn binding_bases(psi: &GlFormula) -> BTreeSet<String> {
    free_pvars_gl(psi).into_iter().map(|p| p.base).collect()
}

fn free_ovars(f: &Formula) -> BTreeSet<OVar> {
    match f {
        Formula::Mu(m) => free_ovars_mu(m),
        Formula::Gl(g) => free_ovars_gl(g),
    }
}

fn named_actions(f: &Formula) -> BTreeSet<String> {
    let acts = match f {
        Formula::Mu(m) => actions_mu(m),
        Formula::Gl(g) => actions_gl(g),
    };
    acts.into_iter()
        .filter_map(|a| match a {
            Action::Named { name, .. } => Some(name),
            _ => None,
        })
        .collect()
}

/// Is `f` true everywhere on `n` random structures interpreting its symbols
/// and the footprints declared by `script`?
pub fn valid_on_random(script: &ProofScript, f: &Formula, r: &mut GenRng, n: usize) -> Result<bool, String> {
    let support: Vec<OVar> = free_ovars(f).into_iter().collect();
    let actions: Vec<(String, Option<Vec<OVar>>)> =
        named_actions(f).into_iter().map(|a| (a.clone(), script.footprints.get(&a).cloned())).collect();
    let bases: Vec<String> = match f {
        Formula::Mu(m) => free_pvar_bases_mu(m).into_iter().collect(),
        Formula::Gl(_) => Vec::new(),
    };
    for _ in 0..n {
        let s = gen::structure_with(r, 3, &support, &actions);
        let om = gen::valuation(r, &s, &bases);
        let ok = match f {
            Formula::Mu(m) => is_valid_on(&s, &om, m),
            Formula::Gl(g) => is_valid_on_gl(&s, &om, g),
        }
        .map_err(|e| e.to_string())?;
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

fn proof_corpus(seed: u64) -> Check {
    let mut r = gen::rng(seed);
    let mut checked = 0;
    for e in corpus::PROOFS {
        let script = e.script().map_err(|err| format!("{}: {err}", e.name))?;
        let theory = e.theory().map_err(|err| format!("{}: {err}", e.name))?;
        let v = check_proof(&script, &theory);
        if !v.ok() {
            return Err(format!("{} does not check: {v}", e.name));
        }
        if theory.formulas.is_empty() {
            let concl = script.conclusion().ok_or_else(|| format!("{} is empty", e.name))?;
            if !valid_on_random(&script, concl, &mut r, 20)? {
                return Err(format!("conclusion of {} fails on a random structure", e.name));
            }
            checked += 1;
        }
    }
    for e in corpus::BROKEN {
        let want = e.expect_fail().ok_or_else(|| format!("{} documents no failing line", e.name))?;
        let got = match e.script() {
            Ok(s) => check_proof(&s, &e.theory().map_err(|err| err.to_string())?).first_failure(),
            Err(err) => Some(err.line),
        };
        if got != Some(want) {
            return Err(format!("{} fails at {got:?}, documented {want}", e.name));
        }
    }
    Ok(format!(
        "{} scripts check, {} broken fail where documented, {checked} conclusions valid on 20 structures",
        corpus::PROOFS.len(),
        corpus::BROKEN.len()
    ))
}

fn first_free_pvar(script: &ProofScript) -> Option<PVar> {
    script.lines.iter().find_map(|l| match &l.formula {
        Formula::Mu(m) => free_pvars_mu(m).into_iter().find(|p| !p.is_tagged()).map(|p| p.root()),
        Formula::Gl(_) => None,
    })
}

fn transformations() -> Check {
    let psi = parse_mu("q & <b> p(x)").map_err(|e| e.to_string())?;
    let (mut substituted, mut translated) = (0, 0);
    for e in corpus::PROOFS {
        let script = e.script().map_err(|err| err.to_string())?;
        let theory = e.theory().map_err(|err| err.to_string())?;
        let out = match script.calculus {
            Calculus::Mu => {
                let x = first_free_pvar(&script).unwrap_or_else(|| PVar::new("X"));
                substituted += 1;
                subst_proof(&script, &theory, &x, &psi).map_err(|err| format!("{}: {err}", e.name))?
            }
            Calculus::Gl => {
                translated += 1;
                translate_proof_sharp(&script, &theory).map_err(|err| format!("{}: {err}", e.name))?
            }
        };
        let th = match script.calculus {
            Calculus::Mu => theory,
            Calculus::Gl => crate::proofkit::translate_theory_sharp(&theory),
        };
        let v = check_proof(&out, &th);
        if !v.ok() {
            return Err(format!("transformed {} does not check: {v}", e.name));
        }
    }
    Ok(format!("{substituted} substituted and {translated} translated scripts re-check"))
}

fn has_assignment(f: &MuFormula) -> bool {
    actions_mu(f).iter().any(|a| matches!(a, Action::Assign(..)))
}

fn reduction(seed: u64, count: usize) -> Check {
    let mut r = gen::rng(seed);
    let structs = pool(&mut r, 20, 3);
    let mut with_assign = 0;
    for i in 0..count {
        let s = &structs[i % structs.len()];
        let om = gen::valuation(&mut r, s, &pvar_bases());
        let f = Gen::for_structure(&mut r, GenConfig::standard(4), s).mu_formula();
        with_assign += has_assignment(&f) as usize;
        let g = eliminate_assignments(&f).map_err(|e| format!("{}: {e}", print_mu(&f)))?;
        if has_assignment(&g) {
            return Err(format!("instance {i}: assignments remain in {}", print_mu(&g)));
        }
        let extra: Vec<OVar> = free_ovars_mu(&g).into_iter().filter(|v| !s.support.contains(v)).collect();
        let ext = s.extend_support(&extra);
        let mut lifted = Valuation::new();
        for (k, d) in &om.sets {
            lifted.sets.insert(k.clone(), s.cylindrify(&ext, d).map_err(|e| e.to_string())?);
        }
        let want = s.cylindrify(&ext, &eval_mu(s, &om, &f).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let got = eval_mu(&ext, &lifted, &g).map_err(|e| e.to_string())?;
        if want != got {
            return Err(format!("instance {i}: {} and {} differ", print_mu(&f), print_mu(&g)));
        }
    }
    Ok(format!("{count} formulas, {with_assign} with assignments"))
}

use std::f64::consts::E;

/// Forward-difference error of `theta_hat` at `x` with step `h` in the max norm.
pub fn fd_error(f: &PolyVec, x: &[f64], h: f64) -> f64 {
    let fx = f.eval(x);
    let moved: Vec<f64> = x.iter().zip(&fx).map(|(a, b)| a + h * b).collect();
    let fd: Vec<f64> = f.eval(&moved).iter().zip(&fx).map(|(a, b)| (a - b) / h).collect();
    let exact = f.theta_hat().eval(x);
    fd.iter().zip(&exact).fold(0.0, |m, (a, b)| m.max((a - b).abs()))
}

fn numerics() -> Check {
    let field = |name: &str| -> Result<(PolyVec, &corpus::FieldEntry), String> {
        let e = FIELDS.iter().find(|e| e.name == name).ok_or("missing field")?;
        Ok((parse_field(e.field).map_err(|err| err.to_string())?, e))
    };
    let num = |e: crate::differential::NumError| e.to_string();

    let (growth, _) = field("growth")?;
    let end = rk4_trajectory(&growth, &[1.0], 1.0, 0).map_err(num)?.samples[1][0];
    if (end - E).abs() > 1e-6 {
        return Err(format!("growth endpoint {end}"));
    }
    let (rot, _) = field("rotation")?;
    let back = rk4_trajectory(&rot, &[1.0, 0.0], std::f64::consts::TAU, 0).map_err(num)?.samples[1].clone();
    let drift = ((back[0] - 1.0).powi(2) + back[1].powi(2)).sqrt();
    if drift > 1e-5 {
        return Err(format!("rotation drifts by {drift}"));
    }

    let (mut refuted, mut kept) = (0, 0);
    let mut ratios = Vec::new();
    for e in FIELDS {
        let f = parse_field(e.field).map_err(|err| err.to_string())?;
        let region = Region::new(&f, Ball::new(e.radius).map_err(num)?, NumConfig::default()).map_err(num)?;
        let cert = rk4_trajectory(&f, e.start, e.duration, 6).map_err(num)?;
        if let Err((level, k)) = region.certify(&cert).map_err(num)? {
            return Err(format!("{} trajectory fails at level {level}, interval {k}", e.name));
        }
        if let Some(text) = e.triples {
            for t in parse_triples(text, f.dim()).map_err(|err| err.to_string())? {
                match (t.reachable, region.refutes(&t.triple).map_err(num)?) {
                    (true, true) => return Err(format!("{} refutes a reachable triple {:?}", e.name, t.triple)),
                    (false, false) => return Err(format!("{} keeps an unreachable triple {:?}", e.name, t.triple)),
                    (true, false) => kept += 1,
                    (false, true) => refuted += 1,
                }
            }
        }
        let x: Vec<f64> = (0..f.dim()).map(|i| 0.4 + 0.15 * i as f64).collect();
        let (coarse, fine) = (fd_error(&f, &x, 1e-2), fd_error(&f, &x, 1e-3));
        if coarse > 1e-12 {
            let ratio = coarse / fine;
            if !(5.0..=20.0).contains(&ratio) {
                return Err(format!("{} finite-difference error ratio {ratio}", e.name));
            }
            ratios.push(format!("{}={ratio:.2}", e.name));
        }
    }
    if ratios.is_empty() {
        return Err("no nonlinear field to compare finite differences with".into());
    }
    Ok(format!(
        "endpoint error {:.1e}, rotation drift {drift:.1e}, {} certified at depth 6, {refuted} refuted, {kept} kept, ratios {}",
        (end - E).abs(),
        FIELDS.len(),
        ratios.join(" ")
    ))
}

fn naturals() -> Check {
    let s = parse_structure(corpus::PREDECESSOR).map_err(|e| e.to_string())?;
    let f = parse_mu("mu X. (n = 0 | <n := n - 1> X)").map_err(|e| e.to_string())?;
    let om = Valuation::new();
    let d = eval_mu(&s, &om, &f).map_err(|e| e.to_string())?;
    if !d.is_full() {
        return Err(format!("denotation has {} of {} states", d.len(), d.universe()));
    }
    let dual = bar(&f);
    let nd = eval_mu(&s, &om, &dual).map_err(|e| e.to_string())?;
    if !nd.is_empty() || nd != d.complement() {
        return Err(format!("{} is not the empty complement", print_mu(&dual)));
    }
    Ok(format!("{} holds on all {} states, {} on none", print_mu(&f), d.len(), print_mu(&dual)))
}
