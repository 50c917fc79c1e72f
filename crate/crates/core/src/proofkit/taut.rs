//! Propositional tautology oracle.
//!
//! Maximal non-propositional subformulas become atoms. In the mu-calculus a
//! box or greatest fixpoint becomes the negation of the atom for its dual, so
//! that `bar` is propositional negation.

use std::collections::HashMap;

use crate::binding::alpha_normalize;
use crate::logic::bar;
use crate::syntax::*;

pub const MAX_TAUT_ATOMS: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{0} propositional atoms exceed the limit of {MAX_TAUT_ATOMS}")]
pub struct TautError(pub usize);

enum Prop {
    Atom(usize),
    Not(Box<Prop>),
    Or(Box<Prop>, Box<Prop>),
    And(Box<Prop>, Box<Prop>),
}

#[derive(PartialEq, Eq, Hash)]
enum Key {
    Atom(Atom),
    PVar(PVar),
    Mu(MuFormula),
    Gl(GlFormula),
}

#[derive(Default)]
struct Atoms {
    index: HashMap<Key, usize>,
}

impl Atoms {
    fn get(&mut self, k: Key) -> Prop {
        let n = self.index.len();
        Prop::Atom(*self.index.entry(k).or_insert(n))
    }
}

fn not(p: Prop) -> Prop {
    Prop::Not(Box::new(p))
}

fn literal(l: &Literal, atoms: &mut Atoms) -> Prop {
    let a = atoms.get(Key::Atom(l.atom.clone()));
    if l.positive {
        a
    } else {
        not(a)
    }
}

fn pvar(x: &PVar, atoms: &mut Atoms) -> Prop {
    let a = atoms.get(Key::PVar(PVar { barred: false, ..x.clone() }));
    if x.barred {
        not(a)
    } else {
        a
    }
}

fn abstract_mu(f: &MuFormula, atoms: &mut Atoms) -> Prop {
    match f {
        MuFormula::Lit(l) => literal(l, atoms),
        MuFormula::Var(x) => pvar(x, atoms),
        MuFormula::Or(a, b) => Prop::Or(Box::new(abstract_mu(a, atoms)), Box::new(abstract_mu(b, atoms))),
        MuFormula::And(a, b) => Prop::And(Box::new(abstract_mu(a, atoms)), Box::new(abstract_mu(b, atoms))),
        MuFormula::Diamond(..) | MuFormula::Mu(..) => atoms.get(Key::Mu(alpha_normalize(f))),
        MuFormula::Box(..) | MuFormula::Nu(..) => not(atoms.get(Key::Mu(alpha_normalize(&bar(f))))),
    }
}

fn abstract_gl(f: &GlFormula, atoms: &mut Atoms) -> Prop {
    match f {
        GlFormula::Lit(l) => literal(l, atoms),
        GlFormula::Var(x) => pvar(x, atoms),
        GlFormula::Not(g) => not(abstract_gl(g, atoms)),
        GlFormula::Or(a, b) => Prop::Or(Box::new(abstract_gl(a, atoms)), Box::new(abstract_gl(b, atoms))),
        GlFormula::Diamond(..) => atoms.get(Key::Gl(f.clone())),
    }
}

/// Evaluates on 64 assignments at once: bit `j` of the result is the value
/// under assignment `base + j`.
fn eval(p: &Prop, base: u64) -> u64 {
    const LOW: [u64; 6] = [
        0xAAAA_AAAA_AAAA_AAAA,
        0xCCCC_CCCC_CCCC_CCCC,
        0xF0F0_F0F0_F0F0_F0F0,
        0xFF00_FF00_FF00_FF00,
        0xFFFF_0000_FFFF_0000,
        0xFFFF_FFFF_0000_0000,
    ];
    match p {
        Prop::Atom(i) if *i < 6 => LOW[*i],
        Prop::Atom(i) => {
            if base >> i & 1 == 1 {
                !0
            } else {
                0
            }
        }
        Prop::Not(a) => !eval(a, base),
        Prop::Or(a, b) => eval(a, base) | eval(b, base),
        Prop::And(a, b) => eval(a, base) & eval(b, base),
    }
}

fn decide(p: &Prop, n: usize) -> Result<bool, TautError> {
    if n > MAX_TAUT_ATOMS {
        return Err(TautError(n));
    }
    let mask = if n >= 6 { !0 } else { (1u64 << (1 << n)) - 1 };
    let blocks = if n > 6 { 1u64 << (n - 6) } else { 1 };
    Ok((0..blocks).all(|b| eval(p, b << 6) & mask == mask))
}

pub fn is_taut_mu(f: &MuFormula) -> Result<bool, TautError> {
    let mut atoms = Atoms::default();
    let p = abstract_mu(f, &mut atoms);
    decide(&p, atoms.index.len())
}

pub fn is_taut_gl(f: &GlFormula) -> Result<bool, TautError> {
    let mut atoms = Atoms::default();
    let p = abstract_gl(f, &mut atoms);
    decide(&p, atoms.index.len())
}

pub fn is_taut(f: &Formula) -> Result<bool, TautError> {
    match f {
        Formula::Mu(m) => is_taut_mu(m),
        Formula::Gl(g) => is_taut_gl(g),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{parse_gl, parse_mu};

    fn mu(s: &str) -> bool {
        is_taut_mu(&parse_mu(s).unwrap()).unwrap()
    }

    #[test]
    fn examples() {
        assert!(mu("p | !p"));
        assert!(mu("<a> p -> <a> p"));
        assert!(!mu("<a> p | <a> q <-> <a> (p | q)"));
        assert!(mu("[a] p <-> !<a> !p"));
        assert!(mu("nu X. [a] X <-> !mu X. <a> X"));
        assert!(mu("mu X. (p | <a> X) -> mu Y. (p | <a> Y)"));
        assert!(!mu("p -> q"));
    }

    #[test]
    fn bit_parallel_agrees_with_naive() {
        // A chain over 8 atoms: (p0 -> p1) & ... & (p6 -> p7) -> (p0 -> p7).
        let names: Vec<String> = (0..8).map(|i| format!("p{}", i)).collect();
        let chain: Vec<String> = names.windows(2).map(|w| format!("({} -> {})", w[0], w[1])).collect();
        let f = format!("{} -> ({} -> {})", chain.join(" & "), names[0], names[7]);
        assert!(mu(&f));
        let g = format!("{} -> ({} -> {})", chain.join(" & "), names[7], names[0]);
        assert!(!mu(&g));
    }

    #[test]
    fn game_logic() {
        assert!(is_taut_gl(&parse_gl("<a> p -> <a> p | q").unwrap()).unwrap());
        assert!(!is_taut_gl(&parse_gl("<a> p -> <b> p").unwrap()).unwrap());
    }

    #[test]
    fn too_many_atoms() {
        let f = (0..25).map(|i| format!("p{}", i)).collect::<Vec<_>>().join(" | ");
        assert_eq!(is_taut_mu(&parse_mu(&f).unwrap()), Err(TautError(25)));
    }
}
