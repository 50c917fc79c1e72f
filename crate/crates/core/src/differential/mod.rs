//! Differential equations: polynomial fields, the formal derivative term,
//! the axiom instances for ODE modalities, and numeric reachability certificates.

mod axioms;
pub mod files;
mod numeric;
mod poly;

pub use axioms::{nabla_instance, tba_rewrite, AxiomError};
pub use numeric::{
    certify_trajectory, g_k_member, grid_max, norm_estimate, refute_reach, rk4_trajectory, Ball, Norm, NumConfig,
    NumError, ReachTriple, Region, TrajectoryCert, RK4_MAX_STEP,
};
pub use poly::{rational, Poly, PolyError, PolyVec};
