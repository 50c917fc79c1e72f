//! Polynomial vector fields with rational coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

use crate::syntax::Term;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("variable {0} is not a field variable")]
    UnknownVariable(String),
    #[error("{0} is not a polynomial operation")]
    NotPolynomial(String),
    #[error("division by a non-constant or zero polynomial")]
    Division,
    #[error("bad numeral {0}")]
    Numeral(String),
    #[error("dimension mismatch: {0} variables, {1} components")]
    Dimension(usize, usize),
}

/// Exponent vector to coefficient; zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly {
    pub terms: BTreeMap<Vec<u32>, BigRational>,
}

pub fn rational(s: &str) -> Result<BigRational, PolyError> {
    let bad = || PolyError::Numeral(s.to_string());
    let s = s.trim();
    if let Some((whole, frac)) = s.split_once('.') {
        let digits = format!("{}{}", whole, frac);
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        let d = num::pow(BigInt::from(10), frac.len());
        return Ok(BigRational::new(n, d));
    }
    s.parse::<BigRational>().map_err(|_| bad())
}

impl Poly {
    pub fn zero() -> Poly {
        Poly::default()
    }

    pub fn constant(n: usize, c: BigRational) -> Poly {
        let mut p = Poly::zero();
        p.add_term(vec![0; n], c);
        p
    }

    pub fn var(n: usize, i: usize) -> Poly {
        let mut e = vec![0; n];
        e[i] = 1;
        let mut p = Poly::zero();
        p.add_term(e, BigRational::one());
        p
    }

    pub fn add_term(&mut self, e: Vec<u32>, c: BigRational) {
        let sum = self.terms.remove(&e).unwrap_or_else(BigRational::zero) + c;
        if !sum.is_zero() {
            self.terms.insert(e, sum);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.iter().next().filter(|(e, _)| e.iter().all(|&k| k == 0)).map(|(_, c)| c.clone()),
            _ => None,
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut p = self.clone();
        for (e, c) in &o.terms {
            p.add_term(e.clone(), c.clone());
        }
        p
    }

    pub fn scale(&self, k: &BigRational) -> Poly {
        let mut p = Poly::zero();
        for (e, c) in &self.terms {
            p.add_term(e.clone(), c * k);
        }
        p
    }

    pub fn neg(&self) -> Poly {
        self.scale(&-BigRational::one())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut p = Poly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                p.add_term(e, c1 * c2);
            }
        }
        p
    }

    /// Formal partial derivative in variable `i`.
    pub fn derivative(&self, i: usize) -> Poly {
        let mut p = Poly::zero();
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut e2 = e.clone();
                e2[i] -= 1;
                p.add_term(e2, c * BigRational::from_integer(BigInt::from(e[i])));
            }
        }
        p
    }

    pub fn eval(&self, z: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                let m: f64 = e.iter().zip(z).map(|(&k, &v)| v.powi(k as i32)).product();
                c.to_f64().unwrap_or(f64::NAN) * m
            })
            .sum()
    }

    /// Reads a term built from numerals, field variables, `+`, `-`, `*` and
    /// division by constants.
    pub fn from_term(t: &Term, vars: &[String]) -> Result<Poly, PolyError> {
        let n = vars.len();
        Ok(match t {
            Term::Var(x) => Poly::var(n, vars.iter().position(|v| v == x).ok_or_else(|| PolyError::UnknownVariable(x.clone()))?),
            Term::Const(c) => Poly::constant(n, rational(c)?),
            Term::App(f, args) => {
                let ps = args.iter().map(|a| Poly::from_term(a, vars)).collect::<Result<Vec<_>, _>>()?;
                match (f.as_str(), ps.as_slice()) {
                    ("+", [a, b]) => a.add(b),
                    ("-", [a, b]) => a.add(&b.neg()),
                    ("-", [a]) => a.neg(),
                    ("*", [a, b]) => a.mul(b),
                    ("/", [a, b]) => match b.as_constant() {
                        Some(c) if !c.is_zero() => a.scale(&c.recip()),
                        _ => return Err(PolyError::Division),
                    },
                    _ => return Err(PolyError::NotPolynomial(f.clone())),
                }
            }
        })
    }

    pub fn to_term(&self, vars: &[String]) -> Term {
        let mut acc: Option<Term> = None;
        for (e, c) in self.terms.iter().rev() {
            let mono = e
                .iter()
                .enumerate()
                .flat_map(|(i, &k)| std::iter::repeat_n(Term::var(&vars[i]), k as usize))
                .reduce(|a, b| Term::app("*", vec![a, b]));
            let mag = c.abs();
            let body = match (mono, mag.is_one()) {
                (Some(m), true) => m,
                (Some(m), false) => Term::app("*", vec![numeral(&mag), m]),
                (None, _) => numeral(&mag),
            };
            acc = Some(match (acc, c.is_negative()) {
                (None, false) => body,
                (None, true) => Term::app("-", vec![body]),
                (Some(a), false) => Term::app("+", vec![a, body]),
                (Some(a), true) => Term::app("-", vec![a, body]),
            });
        }
        acc.unwrap_or_else(|| Term::cst("0"))
    }
}

fn numeral(c: &BigRational) -> Term {
    if c.is_integer() {
        Term::cst(&c.numer().to_string())
    } else {
        Term::app("/", vec![Term::cst(&c.numer().to_string()), Term::cst(&c.denom().to_string())])
    }
}

/// A polynomial vector field `x' = p(x)` over named variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyVec {
    pub vars: Vec<String>,
    pub comps: Vec<Poly>,
}

impl PolyVec {
    pub fn new(vars: Vec<String>, comps: Vec<Poly>) -> Result<PolyVec, PolyError> {
        if vars.len() != comps.len() {
            return Err(PolyError::Dimension(vars.len(), comps.len()));
        }
        Ok(PolyVec { vars, comps })
    }

    /// From the right-hand sides of an ODE system.
    pub fn from_eqs(eqs: &[(String, Term)]) -> Result<PolyVec, PolyError> {
        let vars: Vec<String> = eqs.iter().map(|(x, _)| x.clone()).collect();
        let comps = eqs.iter().map(|(_, t)| Poly::from_term(t, &vars)).collect::<Result<_, _>>()?;
        PolyVec::new(vars, comps)
    }

    pub fn dim(&self) -> usize {
        self.vars.len()
    }

    /// `(DF) F`: component `j` is the sum over `i` of `d_i p_j * p_i`.
    pub fn theta_hat(&self) -> PolyVec {
        let comps = self
            .comps
            .iter()
            .map(|pj| {
                (0..self.dim()).fold(Poly::zero(), |acc, i| acc.add(&pj.derivative(i).mul(&self.comps[i])))
            })
            .collect();
        PolyVec { vars: self.vars.clone(), comps }
    }

    pub fn eval(&self, z: &[f64]) -> Vec<f64> {
        self.comps.iter().map(|p| p.eval(z)).collect()
    }

    pub fn terms(&self) -> Vec<Term> {
        self.comps.iter().map(|p| p.to_term(&self.vars)).collect()
    }
}

impl fmt::Display for PolyVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .vars
            .iter()
            .zip(self.terms())
            .map(|(x, t)| format!("{}' = {}", x, crate::surface::print_term(&t)))
            .collect();
        write!(f, "{}", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{parse_term, print_term};

    fn field(vars: &[&str], rhs: &[&str]) -> PolyVec {
        let eqs: Vec<(String, Term)> = vars.iter().zip(rhs).map(|(x, t)| (x.to_string(), parse_term(t).unwrap())).collect();
        PolyVec::from_eqs(&eqs).unwrap()
    }

    fn hat(vars: &[&str], rhs: &[&str]) -> Vec<String> {
        field(vars, rhs).theta_hat().terms().iter().map(print_term).collect()
    }

    #[test]
    fn formal_derivative_term() {
        assert_eq!(hat(&["x"], &["1"]), vec!["0"]);
        assert_eq!(hat(&["x"], &["x"]), vec!["x"]);
        assert_eq!(hat(&["x", "y"], &["y", "-x"]), vec!["-x", "-y"]);
        assert_eq!(hat(&["x"], &["x * x"]), vec!["2 * (x * x * x)"]);
    }

    #[test]
    fn rationals_and_decimals() {
        assert_eq!(rational("0.25").unwrap(), BigRational::new(1.into(), 4.into()));
        assert_eq!(rational("-3/6").unwrap(), BigRational::new((-1).into(), 2.into()));
        let f = field(&["x"], &["x / 2 - 0.5"]);
        assert_eq!(f.eval(&[3.0]), vec![1.0]);
        assert_eq!(print_term(&f.comps[0].to_term(&f.vars)), "1 / 2 * x - 1 / 2");
    }

    #[test]
    fn rejects_non_polynomials() {
        let t = parse_term("f(x)").unwrap();
        assert!(matches!(Poly::from_term(&t, &["x".into()]), Err(PolyError::NotPolynomial(_))));
        let t = parse_term("1 / x").unwrap();
        assert_eq!(Poly::from_term(&t, &["x".into()]), Err(PolyError::Division));
        let t = parse_term("z").unwrap();
        assert!(matches!(Poly::from_term(&t, &["x".into()]), Err(PolyError::UnknownVariable(_))));
    }
}
