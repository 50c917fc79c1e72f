//! Numeric side of the fixpoint characterization of reachability:
//! norm estimates, the Taylor-bound set, dyadic certificates and an RK4 oracle.

use super::poly::PolyVec;

/// Norm on points of the state space.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Norm {
    #[default]
    Euclidean,
    Max,
}

impl Norm {
    pub fn of(self, v: &[f64]) -> f64 {
        match self {
            Norm::Euclidean => v.iter().map(|a| a * a).sum::<f64>().sqrt(),
            Norm::Max => v.iter().fold(0.0, |m, a| m.max(a.abs())),
        }
    }
}

/// Grid resolution, slack and tolerances of the numeric checks.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NumConfig {
    pub norm: Norm,
    pub grid: usize,
    pub slack: f64,
    pub rel_tol: f64,
    pub max_dim: usize,
}

impl Default for NumConfig {
    fn default() -> NumConfig {
        NumConfig { norm: Norm::Euclidean, grid: 101, slack: 1.05, rel_tol: 1e-9, max_dim: 3 }
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum NumError {
    #[error("dimension {0} exceeds the cap {1}")]
    DimensionCap(usize, usize),
    #[error("expected points of dimension {0}, got {1}")]
    Dimension(usize, usize),
    #[error("radius must be positive")]
    Radius,
    #[error("time must be nonnegative")]
    Time,
    #[error("certificate of depth {0} needs {1} samples, has {2}")]
    Shape(u32, usize, usize),
}

/// The closed ball of radius `m` around the origin.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Ball {
    pub m: f64,
}

impl Ball {
    pub fn new(m: f64) -> Result<Ball, NumError> {
        if m > 0.0 && m.is_finite() {
            Ok(Ball { m })
        } else {
            Err(NumError::Radius)
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReachTriple {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub t: f64,
}

/// Samples of a trajectory at times `k * t / 2^depth`.
#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryCert {
    pub depth: u32,
    pub t: f64,
    pub samples: Vec<Vec<f64>>,
}

impl TrajectoryCert {
    pub fn check_shape(&self) -> Result<(), NumError> {
        let want = (1usize << self.depth) + 1;
        if self.samples.len() != want {
            return Err(NumError::Shape(self.depth, want, self.samples.len()));
        }
        if self.t < 0.0 {
            return Err(NumError::Time);
        }
        Ok(())
    }
}

/// Largest norm of `f` on grid points of the ball, before slack.
pub fn grid_max(f: &PolyVec, k: Ball, cfg: &NumConfig) -> Result<f64, NumError> {
    let n = f.dim();
    if n > cfg.max_dim {
        return Err(NumError::DimensionCap(n, cfg.max_dim));
    }
    let g = cfg.grid.max(2);
    let coord = |i: usize| -k.m + 2.0 * k.m * i as f64 / (g - 1) as f64;
    let mut best: f64 = 0.0;
    let mut idx = vec![0usize; n];
    loop {
        let z: Vec<f64> = idx.iter().map(|&i| coord(i)).collect();
        if cfg.norm.of(&z) <= k.m * (1.0 + 1e-12) {
            best = best.max(cfg.norm.of(&f.eval(&z)));
        }
        let mut d = 0;
        while d < n && idx[d] == g - 1 {
            idx[d] = 0;
            d += 1;
        }
        if d == n {
            break;
        }
        idx[d] += 1;
    }
    Ok(best)
}

/// Over-approximation of the supremum norm of `f` on the ball: grid maximum
/// times the configured slack. A heuristic, not a validated bound.
pub fn norm_estimate(f: &PolyVec, k: Ball, cfg: &NumConfig) -> Result<f64, NumError> {
    Ok(grid_max(f, k, cfg)? * cfg.slack)
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(p, q)| p - q).collect()
}

fn axpy(a: f64, x: &[f64], y: &[f64]) -> Vec<f64> {
    x.iter().zip(y).map(|(p, q)| a * p + q).collect()
}

/// The Taylor-bound set for one field and ball, with its norms computed once.
#[derive(Clone, Debug)]
pub struct Region {
    pub field: PolyVec,
    pub ball: Ball,
    pub cfg: NumConfig,
    pub norm_f: f64,
    pub norm_hat: f64,
}

impl Region {
    pub fn new(field: &PolyVec, ball: Ball, cfg: NumConfig) -> Result<Region, NumError> {
        let norm_f = norm_estimate(field, ball, &cfg)?;
        let norm_hat = norm_estimate(&field.theta_hat(), ball, &cfg)?;
        Ok(Region { field: field.clone(), ball, cfg, norm_f, norm_hat })
    }

    fn dims(&self, p: &ReachTriple) -> Result<(), NumError> {
        let n = self.field.dim();
        for v in [&p.x, &p.y] {
            if v.len() != n {
                return Err(NumError::Dimension(n, v.len()));
            }
        }
        if p.t < 0.0 {
            return Err(NumError::Time);
        }
        Ok(())
    }

    /// The slack between each bound and the quantity it bounds:
    /// `(ball x, ball y, first order, second order)`, each nonnegative when satisfied.
    fn margins(&self, p: &ReachTriple) -> [(f64, f64); 4] {
        let nm = self.cfg.norm;
        let d = sub(&p.y, &p.x);
        let taylor = axpy(-p.t, &self.field.eval(&p.x), &d);
        [
            (nm.of(&p.x), self.ball.m),
            (nm.of(&p.y), self.ball.m),
            (nm.of(&d), p.t * self.norm_f),
            (nm.of(&taylor), p.t * p.t / 2.0 * self.norm_hat),
        ]
    }

    /// Membership in the numeric over-approximation of the bound set, with a
    /// relative tolerance on each inequality.
    pub fn member(&self, p: &ReachTriple) -> Result<bool, NumError> {
        self.dims(p)?;
        let tol = self.cfg.rel_tol;
        Ok(self.margins(p).iter().all(|&(lhs, rhs)| lhs <= rhs + tol * (1.0 + rhs.abs())))
    }

    /// True when the triple violates a bound strictly, so no trajectory inside
    /// the ball can connect its endpoints in the given time.
    pub fn refutes(&self, p: &ReachTriple) -> Result<bool, NumError> {
        self.dims(p)?;
        let tol = self.cfg.rel_tol;
        Ok(self.margins(p).iter().any(|&(lhs, rhs)| lhs > rhs + tol * (1.0 + rhs.abs())))
    }

    /// Checks every dyadic triple of the certificate, coarsest level first.
    /// On failure returns the level and index of the first failing triple.
    pub fn certify(&self, c: &TrajectoryCert) -> Result<Result<(), (u32, usize)>, NumError> {
        c.check_shape()?;
        for level in 0..=c.depth {
            let stride = 1usize << (c.depth - level);
            let dt = c.t / (1u64 << level) as f64;
            for k in 0..(1usize << level) {
                let p = ReachTriple { x: c.samples[k * stride].clone(), y: c.samples[(k + 1) * stride].clone(), t: dt };
                if !self.member(&p)? {
                    return Ok(Err((level, k)));
                }
            }
        }
        Ok(Ok(()))
    }
}

pub fn g_k_member(f: &PolyVec, k: Ball, p: &ReachTriple) -> Result<bool, NumError> {
    Region::new(f, k, NumConfig::default())?.member(p)
}

pub fn refute_reach(f: &PolyVec, k: Ball, p: &ReachTriple) -> Result<bool, NumError> {
    Region::new(f, k, NumConfig::default())?.refutes(p)
}

pub fn certify_trajectory(f: &PolyVec, k: Ball, c: &TrajectoryCert) -> Result<Result<(), (u32, usize)>, NumError> {
    Region::new(f, k, NumConfig::default())?.certify(c)
}

/// Largest RK4 step used between samples.
pub const RK4_MAX_STEP: f64 = 1e-3;

fn rk4_step(f: &PolyVec, x: &[f64], h: f64) -> Vec<f64> {
    let k1 = f.eval(x);
    let k2 = f.eval(&axpy(h / 2.0, &k1, x));
    let k3 = f.eval(&axpy(h / 2.0, &k2, x));
    let k4 = f.eval(&axpy(h, &k3, x));
    (0..x.len()).map(|i| x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])).collect()
}

/// Integrates `x' = f(x)` from `x0` for time `t`, sampling `2^depth + 1` points.
pub fn rk4_trajectory(f: &PolyVec, x0: &[f64], t: f64, depth: u32) -> Result<TrajectoryCert, NumError> {
    if x0.len() != f.dim() {
        return Err(NumError::Dimension(f.dim(), x0.len()));
    }
    if t < 0.0 {
        return Err(NumError::Time);
    }
    let intervals = 1usize << depth;
    let dt = t / intervals as f64;
    let sub_steps = ((dt / RK4_MAX_STEP).ceil() as usize).max(1);
    let h = dt / sub_steps as f64;
    let mut samples = vec![x0.to_vec()];
    let mut x = x0.to_vec();
    for _ in 0..intervals {
        for _ in 0..sub_steps {
            x = rk4_step(f, &x, h);
        }
        samples.push(x.clone());
    }
    Ok(TrajectoryCert { depth, t, samples })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::differential::poly::Poly;
    use num::BigRational;

    fn c(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn constant() -> PolyVec {
        PolyVec::new(vec!["x".into()], vec![Poly::constant(1, c(1))]).unwrap()
    }

    fn identity() -> PolyVec {
        PolyVec::new(vec!["x".into()], vec![Poly::var(1, 0)]).unwrap()
    }

    fn rotation() -> PolyVec {
        PolyVec::new(vec!["x".into(), "y".into()], vec![Poly::var(2, 1), Poly::var(2, 0).neg()]).unwrap()
    }

    fn triple(x: f64, y: f64, t: f64) -> ReachTriple {
        ReachTriple { x: vec![x], y: vec![y], t }
    }

    #[test]
    fn norm_estimates() {
        let cfg = NumConfig::default();
        let ball = |m| Ball::new(m).unwrap();
        assert!((norm_estimate(&constant(), ball(5.0), &cfg).unwrap() - 1.05).abs() < 1e-12);
        assert!((norm_estimate(&identity(), ball(2.0), &cfg).unwrap() - 2.1).abs() < 1e-9);
        let r = norm_estimate(&rotation(), ball(1.0), &cfg).unwrap();
        assert!(r <= 1.05 + 1e-12 && r > 1.0, "{}", r);
    }

    #[test]
    fn bound_set_membership() {
        let k = Ball::new(2.0).unwrap();
        assert!(g_k_member(&constant(), k, &triple(0.0, 1.0, 1.0)).unwrap());
        assert!(!g_k_member(&constant(), k, &triple(0.0, 3.0, 1.0)).unwrap());
        assert!(g_k_member(&rotation(), k, &ReachTriple { x: vec![0.5, 0.5], y: vec![0.5, 0.5], t: 0.0 }).unwrap());
        assert_eq!(g_k_member(&rotation(), k, &triple(0.0, 0.0, 0.0)), Err(NumError::Dimension(2, 1)));
    }

    #[test]
    fn certificates() {
        let k = Ball::new(2.0).unwrap();
        let samples: Vec<Vec<f64>> = (0..=64).map(|i| vec![i as f64 / 64.0]).collect();
        let mut cert = TrajectoryCert { depth: 6, t: 1.0, samples };
        assert_eq!(certify_trajectory(&constant(), k, &cert).unwrap(), Ok(()));
        *cert.samples.last_mut().unwrap() = vec![3.0];
        assert_eq!(certify_trajectory(&constant(), k, &cert).unwrap(), Err((0, 0)));
        let still = TrajectoryCert { depth: 3, t: 0.0, samples: vec![vec![0.3]; 9] };
        assert_eq!(certify_trajectory(&identity(), k, &still).unwrap(), Ok(()));
        let short = TrajectoryCert { depth: 3, t: 0.0, samples: vec![vec![0.3]; 8] };
        assert!(certify_trajectory(&identity(), k, &short).is_err());
    }

    #[test]
    fn rk4_matches_closed_forms() {
        let e = rk4_trajectory(&identity(), &[1.0], 1.0, 6).unwrap();
        assert!((e.samples[64][0] - std::f64::consts::E).abs() < 1e-6);
        let lin = rk4_trajectory(&constant(), &[0.0], 1.0, 6).unwrap();
        for (k, s) in lin.samples.iter().enumerate() {
            assert!((s[0] - k as f64 / 64.0).abs() < 1e-12);
        }
        let rot = rk4_trajectory(&rotation(), &[1.0, 0.0], 2.0 * std::f64::consts::PI, 6).unwrap();
        let end = &rot.samples[64];
        assert!((end[0] - 1.0).abs() < 1e-5 && end[1].abs() < 1e-5);
    }

    #[test]
    fn refutation() {
        let k = Ball::new(2.0).unwrap();
        assert!(refute_reach(&constant(), k, &triple(0.0, 3.0, 1.0)).unwrap());
        assert!(!refute_reach(&constant(), k, &triple(0.0, 1.0, 1.0)).unwrap());
        assert!(refute_reach(&identity(), Ball::new(3.0).unwrap(), &triple(1.0, 10.0, 1.0)).unwrap());
    }

    #[test]
    fn max_norm_is_configurable() {
        let cfg = NumConfig { norm: Norm::Max, ..NumConfig::default() };
        let r = grid_max(&rotation(), Ball::new(1.0).unwrap(), &cfg).unwrap();
        assert!((r - 1.0).abs() < 1e-12);
    }
}
