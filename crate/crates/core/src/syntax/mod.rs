//! Surface syntax: the `.kb` ontology format and the `.adl` action format.

mod adl;
mod kb;
mod lexer;

use thiserror::Error;

use crate::theory::DomainDescription;

pub use adl::{parse_adl, parse_ground_actions, parse_ground_literal, print_adl};
pub use kb::{parse_kb, print_kb};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{line}:{col}: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("{line}:{col}: `{name}` is reserved; identifiers may not start with `_`")]
    Reserved { line: usize, col: usize, name: String },
}

/// Combines a `.kb` text and an `.adl` text into one description.
pub fn load_description(kb_text: &str, adl_text: &str) -> Result<DomainDescription, LoadError> {
    let kb = parse_kb(kb_text).map_err(LoadError::Kb)?;
    let mut d = parse_adl(adl_text).map_err(LoadError::Adl)?;
    d.kb = kb;
    Ok(d)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LoadError {
    #[error("knowledge base: {0}")]
    Kb(ParseError),
    #[error("action description: {0}")]
    Adl(ParseError),
}
