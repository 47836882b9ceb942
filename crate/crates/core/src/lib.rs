//! Exact truncated q-series arithmetic for verifying mock theta function
//! identities: Laurent series with rational coefficients, q-products and
//! theta functions, Appell-Lerch sums, dissections, a `(p, k)`
//! parametrization prover, and an expression language with an identity
//! registry on top.

#![allow(clippy::should_implement_trait)]

pub mod appell_lerch;
pub mod dissection;
pub mod dsl;
pub mod engine;
pub mod error;
pub mod mock_theta;
pub mod outcome;
pub mod param;
pub mod qproducts;
pub mod registry;
pub mod series;

pub use appell_lerch::{appell_lerch_m, AppellLerchSpec};
pub use dissection::{dissect_extract, dissect_reconstruct};
pub use dsl::{eval, parse, Expr, ParseError};
pub use engine::{check_congruence, run_suite, verify, SuiteReport};
pub use error::{Error, Result};
pub use mock_theta::{mock_theta_coefficient, mock_theta_series, MockThetaSelector};
pub use outcome::{Mismatch, Status, VerificationOutcome};
pub use param::{prove_zero, ParamProofOutcome, ParamVector, PPolynomial};
pub use qproducts::{eta_f, pochhammer_finite, theta_j, EtaExpression, EtaMonomial, SignedMonomial};
pub use registry::{IdentityRecord, Registry, Tier};
pub use series::{rat, LaurentSeries, Rat};
