//! Denotational semantics over finite structures.

mod eval;
pub mod fixpoint;
mod stateset;
mod structure;

pub use eval::{eval_game, eval_gl, eval_mu, is_valid_on, is_valid_on_gl, Evaluator, Valuation};
pub use fixpoint::{gfp, gfp_oracle, lfp, lfp_oracle, ORACLE_MAX_STATES};
pub use stateset::StateSet;
pub use structure::{Caps, FiniteStructure, Function, Predicate, State, Transition};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("fixpoint iteration did not stabilize monotonically")]
    NonMonotone,
    #[error("variable {0} is not in the support")]
    UnsupportedVariable(String),
    #[error("differential equations have no finite-structure semantics")]
    Ode,
    #[error("action {0} is not interpreted by the structure")]
    UnknownAction(String),
    #[error("symbol {0} is not interpreted by the structure")]
    UnknownSymbol(String),
    #[error("symbol {0} used with the wrong number of arguments")]
    Arity(String),
    #[error("function {0} is not total")]
    PartialFunction(String),
    #[error("propositional variable {0} has no value")]
    UnboundPVar(String),
    #[error("size cap exceeded: {0}")]
    Cap(String),
}
