//! Checks of linearizations on concrete instances: integer consistency by
//! enumeration, LP dominance over Glover–Woolsey, and witnesses of strict
//! dominance.

mod consistency;
mod dominance;
mod strict;

use thiserror::Error;

use crate::linearize::LinearizeError;
use crate::lp::LpError;

pub use consistency::{feasible_points, verify_integer_consistency, ConsistencyReport, XCheck, XStatus};
pub use dominance::{
    check_hypotheses, detect_case, verify_dominance, verify_dominance_unchecked, DominanceCase, DominanceReport,
    GwCheck, GwInequality,
};
pub use strict::{find_strict_dominance_witness, StrictOutcome, StrictWitness};

/// Default limit on `n` for enumerating binary points.
pub const DEFAULT_BRUTE_CAP: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("n = {n} exceeds the enumeration cap {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("hypotheses not met: {0}")]
    HypothesisMismatch(String),
    #[error(transparent)]
    Linearize(#[from] LinearizeError),
    #[error(transparent)]
    Lp(#[from] LpError),
}
