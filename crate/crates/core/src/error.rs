use thiserror::Error;

use crate::qproducts::SignedMonomial;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("not invertible at this truncation (no nonzero coefficient up to q^{order})")]
    NotInvertible { order: i64 },

    #[error("coefficient of q^{exponent} requested beyond truncation order {order}")]
    BeyondTruncation { exponent: i64, order: i64 },

    #[error("theta is identically zero: z = q^(base·m) with z = {z}, base = {base}")]
    VanishingTheta { z: SignedMonomial, base: i64 },

    #[error("non-generic parameters: {0}")]
    NonGeneric(String),

    #[error("Appell-Lerch window unstable: index {index} contributes at or below order {order}")]
    WindowUnstable { index: i64, order: i64 },

    #[error("residue {residue} out of range for modulus {modulus}")]
    ResidueOutOfRange { residue: i64, modulus: i64 },

    #[error("expected {expected} parts, got {got}")]
    WrongPartCount { expected: usize, got: usize },

    #[error("no parametrization for f_{0}")]
    UnsupportedEtaIndex(u32),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("could not reach order {target} (stalled at {reached})")]
    OrderNotReached { target: i64, reached: i64 },

    #[error("{0}")]
    Parse(#[from] crate::dsl::ParseError),

    #[error("registry: {0}")]
    Registry(String),
}
