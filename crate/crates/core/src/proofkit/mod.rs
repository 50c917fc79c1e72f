//! Hilbert-style proof scripts for both calculi: checking, derived rules and
//! proof transformations.

mod check;
mod derive;
mod script;
mod taut;
mod transform;

use std::collections::BTreeMap;

use crate::logic::Signature;
use crate::syntax::*;

pub use check::{check_proof, Diagnostic, Verdict};
pub use derive::{expand_derived, Builder, DeriveError, DerivedRule};
pub use script::{parse_proof, parse_theory, print_formula, print_proof, print_theory, ScriptError};
pub use taut::{is_taut, is_taut_gl, is_taut_mu, TautError, MAX_TAUT_ATOMS};
pub use transform::{subst_proof, translate_proof_sharp, translate_theory_sharp, TransformError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Calculus {
    Mu,
    Gl,
}

/// Axiom schemata.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ax {
    Mu,
    ExI,
    V,
    Assign,
    Test,
    Choice,
    Comp,
    Star,
    Dual,
    /// Setting fresh control flags does not change a formula that ignores them.
    Ctl,
}

impl Ax {
    pub const ALL: [Ax; 10] =
        [Ax::Mu, Ax::ExI, Ax::V, Ax::Assign, Ax::Test, Ax::Choice, Ax::Comp, Ax::Star, Ax::Dual, Ax::Ctl];

    pub fn token(self) -> &'static str {
        match self {
            Ax::Mu => "ax.mu",
            Ax::ExI => "ax.exI",
            Ax::V => "ax.V",
            Ax::Assign => "ax.assign",
            Ax::Test => "ax.test",
            Ax::Choice => "ax.choice",
            Ax::Comp => "ax.comp",
            Ax::Star => "ax.star",
            Ax::Dual => "ax.dual",
            Ax::Ctl => "ax.ctl",
        }
    }
}

/// Justification of a proof line. Line references are line numbers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Just {
    Taut,
    Eq,
    Axiom(Ax),
    Hyp(usize),
    Mp(usize, usize),
    Ma(usize),
    M(usize),
    FpMu(usize),
    FpStar(usize),
    Rename(usize),
}

impl Just {
    pub fn premises(&self) -> Vec<usize> {
        match *self {
            Just::Mp(i, j) => vec![i, j],
            Just::Ma(i) | Just::M(i) | Just::FpMu(i) | Just::FpStar(i) | Just::Rename(i) => vec![i],
            _ => Vec::new(),
        }
    }

    pub(crate) fn renumber(&self, f: impl Fn(usize) -> usize) -> Just {
        match *self {
            Just::Mp(i, j) => Just::Mp(f(i), f(j)),
            Just::Ma(i) => Just::Ma(f(i)),
            Just::M(i) => Just::M(f(i)),
            Just::FpMu(i) => Just::FpMu(f(i)),
            Just::FpStar(i) => Just::FpStar(f(i)),
            Just::Rename(i) => Just::Rename(f(i)),
            other => other,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProofLine {
    pub number: usize,
    pub formula: Formula,
    pub just: Just,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProofScript {
    pub calculus: Calculus,
    /// Declared footprints of named actions; undeclared actions may touch any variable.
    pub footprints: BTreeMap<String, Vec<OVar>>,
    pub lines: Vec<ProofLine>,
}

impl ProofScript {
    pub fn new(calculus: Calculus) -> ProofScript {
        ProofScript { calculus, footprints: BTreeMap::new(), lines: Vec::new() }
    }

    pub fn conclusion(&self) -> Option<&Formula> {
        self.lines.last().map(|l| &l.formula)
    }

    pub fn signature(&self) -> Signature {
        Signature { actions: self.footprints.clone(), ..Signature::default() }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Theory {
    pub name: String,
    pub formulas: Vec<Formula>,
}
