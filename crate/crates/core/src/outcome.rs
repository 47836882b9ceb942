use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::series::{Rat, SeriesComparison};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Error => "error",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub exponent: i64,
    pub lhs: Rat,
    pub rhs: Rat,
}

/// Outcome of checking one claimed equality (or congruence) of series.
/// `first_mismatch` is present exactly when `status` is `Fail`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationOutcome {
    pub status: Status,
    pub compared_order: i64,
    pub first_mismatch: Option<Mismatch>,
    pub message: String,
}

impl VerificationOutcome {
    pub fn pass(compared_order: i64, message: impl Into<String>) -> Self {
        VerificationOutcome {
            status: Status::Pass,
            compared_order,
            first_mismatch: None,
            message: message.into(),
        }
    }

    pub fn fail(compared_order: i64, mismatch: Mismatch, message: impl Into<String>) -> Self {
        VerificationOutcome {
            status: Status::Fail,
            compared_order,
            first_mismatch: Some(mismatch),
            message: message.into(),
        }
    }

    pub fn error(message: impl Into<String>) -> Self {
        VerificationOutcome {
            status: Status::Error,
            compared_order: -1,
            first_mismatch: None,
            message: message.into(),
        }
    }

    pub fn from_comparison(cmp: SeriesComparison) -> Self {
        match cmp.first_mismatch {
            None => Self::pass(cmp.compared_order, format!("equal through q^{}", cmp.compared_order)),
            Some((exponent, lhs, rhs)) => {
                let message = format!("coefficients of q^{exponent} differ: {lhs} vs {rhs}");
                Self::fail(cmp.compared_order, Mismatch { exponent, lhs, rhs }, message)
            }
        }
    }

    pub fn is_pass(&self) -> bool {
        self.status == Status::Pass
    }
}

impl From<Error> for VerificationOutcome {
    fn from(e: Error) -> Self {
        VerificationOutcome::error(e.to_string())
    }
}
