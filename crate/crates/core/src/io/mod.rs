//! File formats: instance and design JSON, MILP text.

mod json;
mod milp;

use thiserror::Error;

pub use json::{design_to_json, instance_to_json, instance_value, parse_design, parse_instance, ratio_value};
pub use milp::{write_milp, MilpFormat, APPROX_DIGITS};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid number {0}")]
    Number(String),
    #[error("unknown sense {0:?}")]
    Sense(String),
    #[error("duplicate {0}")]
    Duplicate(String),
    #[error("design names constraint {k}, but the instance has {constraints}")]
    UnknownConstraint { k: usize, constraints: usize },
}
