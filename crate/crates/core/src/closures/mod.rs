//! Normal closures of slopes: surgery classification, inclusion
//! certificates, element orders in fillings, descending chains, the trefoil
//! Magnus pairs, the torus-knot word problem and intersection witnesses.

mod certificate;
mod chains;
mod classify;
mod magnus;
mod witness;
mod wordproblem;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fpgroup::{FpError, DEFAULT_MAX_COSETS};
use crate::knotpres::{KnotError, Slope};
use crate::seifert::SeifertError;

pub use certificate::{
    fiber_order_in_filling, inclusion_certificate, meridian_order_in_filling, Certificate, CertificateInputs,
    Evidence, FillingStats, HomologyCheck, MeridianPower, Reason, Verdict,
};
pub use chains::{
    commutator_intersection_check, cyclic_chain, finite_chain_step, finite_finite_family, ChainQuotient,
    CommutatorReport, SampleCheck,
};
pub use classify::{classify_torus_surgery, closure_finitely_generated, SurgeryClass};
pub use magnus::{magnus_displayed_invariants, magnus_invariants, magnus_pair_report, magnus_slopes, CheckStatus, MagnusCheck, MagnusReport, MagnusSide};
pub use witness::{intersection_witness, FillingCheck, Witness, WitnessStep};
pub use wordproblem::{torus_word_problem, NormalForm};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClosureError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("no conjugator of length <= {budget} gives a nontrivial witness")]
    BudgetExhausted { budget: usize },
    #[error("{0} is not a torus knot")]
    NotTorus(String),
    #[error("integer overflow")]
    Overflow,
    #[error(transparent)]
    Knot(#[from] KnotError),
    #[error(transparent)]
    Seifert(#[from] SeifertError),
    #[error(transparent)]
    Fp(#[from] FpError),
}

/// Resource bounds shared by every enumeration an operation runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    pub max_cosets: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Self { max_cosets: DEFAULT_MAX_COSETS }
    }
}

impl Limits {
    pub fn new(max_cosets: usize) -> Self {
        Self { max_cosets }
    }
}

/// `pq*n - m`, checked.
pub(crate) fn slope_defect(p: i64, q: i64, r: Slope) -> Result<i64, ClosureError> {
    p.checked_mul(q)
        .and_then(|pq| pq.checked_mul(r.n()))
        .and_then(|x| x.checked_sub(r.m()))
        .ok_or(ClosureError::Overflow)
}
