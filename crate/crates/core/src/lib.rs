//! First-order modal mu-calculus and game logic over finite structures.

pub mod binding;
pub mod corpus;
pub mod differential;
pub mod gen;
pub mod logic;
pub mod proofkit;
pub mod selftest;
pub mod semantics;
pub mod surface;
pub mod syntax;
pub mod translate;
