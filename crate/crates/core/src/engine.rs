//! Verification of registry records, congruence checks and suite reports.

use std::time::Instant;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::dsl::{eval, Expr};
use crate::error::{Error, Result};
use crate::mock_theta::{mock_theta_series, MockThetaSelector};
use crate::outcome::{Mismatch, Status, VerificationOutcome};
use crate::param::{prove_zero, series_zero_crosscheck, ParamProofOutcome};
use crate::registry::{IdentityRecord, Registry, Tier};
use crate::series::{LaurentSeries, Rat};

/// Evaluate both sides through `order` and compare them exactly, or modulo
/// `rec.modulus` for congruence records. Evaluation failures are reported
/// as `Status::Error`, never as a failed comparison.
pub fn verify(rec: &IdentityRecord, order: i64) -> VerificationOutcome {
    verify_exprs(&rec.lhs, &rec.rhs, order, rec.modulus)
}

pub fn verify_exprs(lhs: &Expr, rhs: &Expr, order: i64, modulus: Option<u64>) -> VerificationOutcome {
    let sides = eval(lhs, order).and_then(|l| Ok((l, eval(rhs, order)?)));
    let (l, r) = match sides {
        Ok(s) => s,
        Err(e) => return e.into(),
    };
    match modulus {
        None => VerificationOutcome::from_comparison(l.compare(&r)),
        Some(m) => compare_mod(&l, &r, m),
    }
}

fn compare_mod(l: &LaurentSeries, r: &LaurentSeries, modulus: u64) -> VerificationOutcome {
    let order = l.order().min(r.order());
    let lo = l.min_exp().min(r.min_exp());
    let m = BigInt::from(modulus);
    for n in lo..=order {
        let (a, b) = (l.coefficient(n).expect("in window"), r.coefficient(n).expect("in window"));
        if !a.is_integer() || !b.is_integer() {
            return VerificationOutcome::error(format!(
                "coefficient of q^{n} is not an integer ({a} vs {b}); congruences need integer series"
            ));
        }
        let d = (a.numer() - b.numer()) % &m;
        if !d.is_zero() {
            let message = format!("coefficients of q^{n} differ modulo {modulus}: {a} vs {b}");
            return VerificationOutcome::fail(order, Mismatch { exponent: n, lhs: a, rhs: b }, message);
        }
    }
    VerificationOutcome::pass(order, format!("congruent modulo {modulus} through q^{order}"))
}

/// Check `c(step·n + residue) ≡ 0 (mod modulus)` for `n < count`, where
/// `c` are the coefficients of the selected mock theta function. A failure
/// reports `n` as the mismatch exponent.
pub fn check_congruence(
    sel: MockThetaSelector,
    step: i64,
    residue: i64,
    modulus: i64,
    count: i64,
) -> VerificationOutcome {
    if step < 1 || count < 1 {
        return Error::InvalidArgument("step and count must be positive".into()).into();
    }
    if !(0..step).contains(&residue) {
        return Error::ResidueOutOfRange { residue, modulus: step }.into();
    }
    if modulus < 2 {
        return Error::InvalidArgument(format!("modulus must be at least 2, got {modulus}")).into();
    }
    let s = mock_theta_series(sel, step * (count - 1) + residue);
    let m = BigInt::from(modulus);
    let family = sel.family().to_ascii_lowercase();
    let mut witness = None;
    for n in 0..count {
        let idx = step * n + residue;
        let c = s.coefficient(idx).expect("computed through the last index");
        if !c.is_integer() {
            return VerificationOutcome::error(format!("{family}({idx}) = {c} is not an integer"));
        }
        if !(c.numer() % &m).is_zero() {
            let message = format!("{family}({idx}) = {c} is not divisible by {modulus}");
            return VerificationOutcome::fail(
                n,
                Mismatch { exponent: n, lhs: c, rhs: Rat::zero() },
                message,
            );
        }
        if witness.is_none() && !c.is_zero() {
            witness = Some(format!("{family}({idx}) = {c}"));
        }
    }
    let mut message = format!("{family}({step}n+{residue}) = 0 mod {modulus} for n < {count}");
    if let Some(w) = witness {
        message.push_str(&format!("; first nonzero {w}"));
    }
    VerificationOutcome::pass(count - 1, message)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MismatchEntry {
    pub exponent: i64,
    pub lhs: String,
    pub rhs: String,
}

/// One line of a suite report. Coefficients are written `"num/den"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReportEntry {
    pub id: String,
    pub tier: Tier,
    pub status: Status,
    pub compared_order: i64,
    pub first_mismatch: Option<MismatchEntry>,
    pub elapsed_ms: u64,
    pub message: String,
}

fn ratio_string(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

impl ReportEntry {
    pub fn new(id: &str, tier: Tier, outcome: VerificationOutcome, elapsed_ms: u64) -> Self {
        ReportEntry {
            id: id.to_string(),
            tier,
            status: outcome.status,
            compared_order: outcome.compared_order,
            first_mismatch: outcome.first_mismatch.map(|m| MismatchEntry {
                exponent: m.exponent,
                lhs: ratio_string(&m.lhs),
                rhs: ratio_string(&m.rhs),
            }),
            elapsed_ms,
            message: outcome.message,
        }
    }

    /// A background-tier failure: recorded, but not a suite failure.
    pub fn is_finding(&self) -> bool {
        self.tier == Tier::Background && self.status == Status::Fail
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct SuiteReport {
    pub entries: Vec<ReportEntry>,
}

impl SuiteReport {
    pub fn findings(&self) -> impl Iterator<Item = &ReportEntry> {
        self.entries.iter().filter(|e| e.is_finding())
    }

    /// 2 if anything errored, else 1 if a core or classical record failed, else 0.
    pub fn exit_code(&self) -> i32 {
        if self.entries.iter().any(|e| e.status == Status::Error) {
            2
        } else if self.entries.iter().any(|e| e.status == Status::Fail && !e.is_finding()) {
            1
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.entries).expect("report serializes")
    }

    /// The report with timings zeroed, for comparisons across runs.
    pub fn without_timings(&self) -> Self {
        let mut r = self.clone();
        for e in &mut r.entries {
            e.elapsed_ms = 0;
        }
        r
    }
}

/// Verify every record of the given tier (all tiers if `None`), in parallel.
/// `order` overrides the per-record order of equality records; congruence
/// records always use their own range. The report is sorted by id.
pub fn run_suite(registry: &Registry, tier: Option<Tier>, order: Option<i64>) -> SuiteReport {
    let recs: Vec<&IdentityRecord> = registry.by_tier(tier).collect();
    let mut entries: Vec<ReportEntry> = recs
        .par_iter()
        .map(|rec| {
            let n = match (rec.modulus, order) {
                (None, Some(n)) => n,
                _ => rec.order,
            };
            let start = Instant::now();
            let outcome = verify(rec, n);
            ReportEntry::new(&rec.id, rec.tier, outcome, start.elapsed().as_millis() as u64)
        })
        .collect();
    entries.sort_by(|a, b| a.id.cmp(&b.id));
    SuiteReport { entries }
}

/// Both routes to `e = 0`: the exact `(p, k)` reduction and series evaluation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamCheckReport {
    pub proof: Result<ParamProofOutcome>,
    pub series: VerificationOutcome,
}

impl ParamCheckReport {
    pub fn proved(&self) -> bool {
        matches!(self.proof, Ok(ParamProofOutcome::ProvedZero))
    }
}

pub fn param_check(e: &Expr, order: i64) -> ParamCheckReport {
    let Some(eta) = e.to_eta() else {
        let err = Error::InvalidArgument("expression is not a sum of eta quotients".into());
        return ParamCheckReport { proof: Err(err.clone()), series: err.into() };
    };
    let proof = prove_zero(&eta);
    let series = series_zero_crosscheck(&eta, order);
    ParamCheckReport { proof, series }
}
