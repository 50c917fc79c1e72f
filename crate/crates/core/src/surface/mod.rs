//! Concrete syntax: parsing and printing of terms, formulas, games and documents.

mod documents;
mod lexer;
mod parser;
mod printer;

use crate::logic::{well_formed_gl, well_formed_mu, WellFormedError};
use crate::syntax::{Action, Game, GlFormula, MuFormula, Term};

pub use documents::{format_state, parse_structure, parse_valuation, DocumentError};
pub use printer::{print_action, print_game, print_gl, print_mu, print_term};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("parse error at offset {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

impl ParseError {
    pub(crate) fn at(pos: usize, msg: impl Into<String>) -> ParseError {
        ParseError { pos, msg: msg.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SurfaceError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    IllFormed(#[from] WellFormedError),
}

/// Parses without checking well-formedness.
pub fn parse_mu_raw(text: &str) -> Result<MuFormula, ParseError> {
    parser::Parser::new(text)?.whole(|p| p.mu_formula())
}

pub fn parse_mu(text: &str) -> Result<MuFormula, SurfaceError> {
    let f = parse_mu_raw(text)?;
    well_formed_mu(&f, None)?;
    Ok(f)
}

pub fn parse_gl(text: &str) -> Result<GlFormula, SurfaceError> {
    let f = parser::Parser::new(text)?.whole(|p| p.gl_formula())?;
    well_formed_gl(&f, None)?;
    Ok(f)
}

pub fn parse_game(text: &str) -> Result<Game, ParseError> {
    parser::Parser::new(text)?.whole(|p| p.game())
}

pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    parser::Parser::new(text)?.whole(|p| p.term())
}

pub fn parse_action(text: &str) -> Result<Action, ParseError> {
    parser::Parser::new(text)?.whole(|p| p.action())
}
