//! Translations between game logic and the mu-calculus, and local reduction.

mod flat;
mod reduce;
mod sharp;

pub use flat::{
    eval_flat, eval_flat_extended, flat, flat_game, flat_with, ControlEncoding, FlatError, TranslationDictionary,
};
pub use reduce::{
    assign_to_random, assign_to_random_game, eliminate_assignments, eliminate_assignments_gl,
    eliminate_modalities, gl_eliminate_actions, random_to_ode, ReduceError,
};
pub use sharp::{sharp, sharp_avoiding, sharp_two_var};
