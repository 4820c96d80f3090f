//! Finitely presented groups: words, presentations, coset enumeration,
//! element orders in finite quotients, abelianization.

mod abelian;
mod enumerate;
mod presentation;
mod word;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use abelian::{
    abelianization, relation_matrix, smith_normal_form, smith_normal_form_big, AbelianInvariants,
    SmithForm,
};
pub use enumerate::{
    enumerate_cosets, enumerate_cosets_with, permutation_order, CosetTable, Enumeration,
    EnumerationStats, Strategy, DEFAULT_MAX_COSETS,
};
pub use presentation::{parse_word, Presentation};
pub use word::{inverse_letter, letter, reduce, Letter, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FpError {
    #[error("generator index {index} out of range for {ngens} generators")]
    GeneratorOutOfRange { index: usize, ngens: usize },
    #[error("relators given but no generators")]
    NoGenerators,
    #[error("bad generator name {0:?}")]
    BadGeneratorName(String),
    #[error("duplicate generator {0:?}")]
    DuplicateGenerator(String),
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("coset limit must be at least 1")]
    ZeroLimit,
    #[error("parse error: {0}")]
    Parse(String),
}

/// A finite answer or no answer within the coset limit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Order {
    Finite(u64),
    Unknown,
}

impl Order {
    pub fn finite(self) -> Option<u64> {
        match self {
            Order::Finite(n) => Some(n),
            Order::Unknown => None,
        }
    }
}

impl std::fmt::Display for Order {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Order::Finite(n) => write!(f, "{n}"),
            Order::Unknown => f.write_str("unknown"),
        }
    }
}

/// Three-valued answer; `Unknown` means the enumeration ran out of room.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Truth {
    True,
    False,
    Unknown,
}

/// Coset table of the trivial subgroup, i.e. the regular representation.
pub fn regular_table(p: &Presentation, limit: usize) -> Result<Option<CosetTable>, FpError> {
    Ok(enumerate_cosets(p, &[], limit)?.into_table())
}

pub fn group_order(p: &Presentation, limit: usize) -> Result<Order, FpError> {
    Ok(match regular_table(p, limit)? {
        Some(t) => Order::Finite(t.rows() as u64),
        None => Order::Unknown,
    })
}

/// Order of `w` in the group, read off the regular permutation action.
pub fn element_order(p: &Presentation, w: &Word, limit: usize) -> Result<Order, FpError> {
    p.check_word(w)?;
    Ok(match regular_table(p, limit)? {
        Some(t) => Order::Finite(t.permutation_order(w)),
        None => Order::Unknown,
    })
}

pub fn is_identity_in_finite(p: &Presentation, w: &Word, limit: usize) -> Result<Truth, FpError> {
    p.check_word(w)?;
    Ok(match regular_table(p, limit)? {
        Some(t) if t.is_identity(w) => Truth::True,
        Some(_) => Truth::False,
        None => Truth::Unknown,
    })
}
