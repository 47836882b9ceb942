//! Exact zero proofs for eta-quotient sums in `f1, f2, f3, f4, f6, f12`.
//!
//! Each `f_k` is a product of fractional powers of `2, p, 1-p, 1+p, 1+2p,
//! 2+p, k, q` in the level-12 `(p, k)` parametrization. An eta-sum whose
//! terms share the same `k`- and `q`-exponent is, after dividing by the
//! componentwise minimum, a polynomial in `p`; if the polynomial vanishes
//! identically, so does the sum.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::outcome::VerificationOutcome;
use crate::qproducts::{EtaExpression, EtaMonomial};
use crate::series::{rat, LaurentSeries, Rat};

/// Exponents over the bases `(2, p, 1-p, 1+p, 1+2p, 2+p, k, q)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParamVector {
    pub e2: Rat,
    pub ep: Rat,
    pub e1m: Rat,
    pub e1p: Rat,
    pub e12p: Rat,
    pub e2p: Rat,
    pub ek: Rat,
    pub eq: Rat,
}

/// Entries are in 24ths, laid out as `(2, p, 1-p, 1+p, 1+2p, 2+p, k, q)`.
const F_TABLE: [(u32, [i64; 8]); 6] = [
    (1, [-4, 1, 12, 4, 3, 3, 12, -1]),
    (2, [-8, 2, 6, 2, 6, 6, 12, -2]),
    (3, [-4, 3, 4, 12, 1, 1, 12, -3]),
    (4, [-16, 4, 3, 1, 3, 12, 12, -4]),
    (6, [-8, 6, 2, 6, 2, 2, 12, -6]),
    (12, [-16, 12, 1, 3, 1, 4, 12, -12]),
];

impl ParamVector {
    pub fn zero() -> Self {
        Self::from_array(std::array::from_fn(|_| Rat::zero()))
    }

    fn from_array(a: [Rat; 8]) -> Self {
        let [e2, ep, e1m, e1p, e12p, e2p, ek, eq] = a;
        ParamVector { e2, ep, e1m, e1p, e12p, e2p, ek, eq }
    }

    pub fn to_array(&self) -> [Rat; 8] {
        [
            self.e2.clone(),
            self.ep.clone(),
            self.e1m.clone(),
            self.e1p.clone(),
            self.e12p.clone(),
            self.e2p.clone(),
            self.ek.clone(),
            self.eq.clone(),
        ]
    }

    /// The vector of `f_k` itself.
    pub fn of_f(k: u32) -> Result<Self> {
        let (_, row) = F_TABLE.iter().find(|(j, _)| *j == k).ok_or(Error::UnsupportedEtaIndex(k))?;
        Ok(Self::from_array(row.map(|n| rat(n, 24))))
    }

    fn add_scaled(&self, other: &Self, by: i64) -> Self {
        let by = Rat::from_integer(by.into());
        let a = self.to_array();
        let b = other.to_array();
        Self::from_array(std::array::from_fn(|i| &a[i] + &b[i] * &by))
    }
}

/// `Σ_k e_k · vector(f_k)`, plus the term's own power of `q`.
pub fn param_vector_of_term(t: &EtaMonomial) -> Result<ParamVector> {
    let mut v = ParamVector::zero();
    for (&k, &e) in t.exps() {
        v = v.add_scaled(&ParamVector::of_f(k)?, e);
    }
    v.eq += Rat::from_integer(t.qpow.into());
    Ok(v)
}

/// Dense polynomial in `p` with exact rational coefficients, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PPolynomial {
    coeffs: Vec<Rat>,
}

impl PPolynomial {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        PPolynomial { coeffs }
    }

    pub fn constant(c: Rat) -> Self {
        Self::new(vec![c])
    }

    /// `a + b·p`
    pub fn linear(a: i64, b: i64) -> Self {
        Self::new(vec![Rat::from_integer(a.into()), Rat::from_integer(b.into())])
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = Rat::zero();
        Self::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&zero) + other.coeffs.get(i).unwrap_or(&zero))
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::default();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::constant(Rat::one()), |acc, _| acc.mul(self))
    }

    pub fn eval(&self, p: &Rat) -> Rat {
        self.coeffs.iter().rev().fold(Rat::zero(), |acc, c| acc * p + c)
    }
}

impl fmt::Display for PPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            match i {
                0 => write!(f, "{mag}")?,
                1 => write!(f, "{mag}*p")?,
                _ => write!(f, "{mag}*p^{i}")?,
            }
        }
        Ok(())
    }
}

/// A numeric evaluation of the reduced sum at one sample point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumericSample {
    pub p: Rat,
    /// Decimal rendering of the value, about 20 significant digits.
    pub value: String,
    pub within_tolerance: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParamProofOutcome {
    ProvedZero,
    NotZero { polynomial: PPolynomial },
    NonUniform { component: &'static str, values: Vec<Rat> },
    NonIntegral { term: usize, residual: Box<ParamVector>, samples: Vec<NumericSample> },
}

impl ParamProofOutcome {
    pub fn label(&self) -> &'static str {
        match self {
            Self::ProvedZero => "ProvedZero",
            Self::NotZero { .. } => "NotZero",
            Self::NonUniform { .. } => "NonUniform",
            Self::NonIntegral { .. } => "NonIntegral",
        }
    }
}

impl fmt::Display for ParamProofOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::ProvedZero => write!(f, "ProvedZero"),
            Self::NotZero { polynomial } => write!(f, "NotZero: residual polynomial {polynomial}"),
            Self::NonUniform { component, values } => {
                let vs: Vec<String> = values.iter().map(|v| v.to_string()).collect();
                write!(f, "NonUniform: {component}-exponents differ across terms: {}", vs.join(", "))
            }
            Self::NonIntegral { term, residual, samples } => {
                let r: Vec<String> = residual.to_array()[..6].iter().map(|v| v.to_string()).collect();
                writeln!(f, "NonIntegral: term {term} has residual exponents ({})", r.join(", "))?;
                for s in samples {
                    writeln!(
                        f,
                        "  p = {}: {} ({})",
                        s.p,
                        s.value,
                        if s.within_tolerance { "within 1e-150" } else { "NOT within 1e-150" }
                    )?;
                }
                Ok(())
            }
        }
    }
}

const BASES: [(i64, i64); 6] = [(2, 0), (0, 1), (1, -1), (1, 1), (1, 2), (2, 1)];

pub fn prove_zero(e: &EtaExpression) -> Result<ParamProofOutcome> {
    let terms: Vec<&EtaMonomial> = e.terms.iter().filter(|t| !t.coeff.is_zero()).collect();
    if terms.is_empty() {
        return Err(Error::InvalidArgument("prove_zero needs a nonempty expression".into()));
    }
    let vectors = terms.iter().map(|t| param_vector_of_term(t)).collect::<Result<Vec<_>>>()?;

    for (name, pick) in [("k", 6usize), ("q", 7usize)] {
        let values: Vec<Rat> = vectors.iter().map(|v| v.to_array()[pick].clone()).collect();
        if values.iter().any(|v| v != &values[0]) {
            return Ok(ParamProofOutcome::NonUniform { component: name, values });
        }
    }

    let arrays: Vec<[Rat; 8]> = vectors.iter().map(ParamVector::to_array).collect();
    let floor: [Rat; 8] = std::array::from_fn(|i| {
        arrays.iter().map(|a| a[i].clone()).min().expect("nonempty")
    });
    let residuals: Vec<[Rat; 8]> =
        arrays.iter().map(|a| std::array::from_fn(|i| &a[i] - &floor[i])).collect();

    if let Some(bad) = residuals.iter().position(|r| r[..6].iter().any(|x| !x.is_integer())) {
        let samples = numeric_samples(&terms, &residuals);
        let mut residual = ParamVector::from_array(residuals[bad].clone());
        residual.ek = Rat::zero();
        residual.eq = Rat::zero();
        return Ok(ParamProofOutcome::NonIntegral { term: bad, residual: Box::new(residual), samples });
    }

    let mut total = PPolynomial::default();
    for (t, r) in terms.iter().zip(&residuals) {
        let mut poly = PPolynomial::constant(t.coeff.clone());
        let two_pow = r[0].to_integer();
        poly = poly.mul(&PPolynomial::constant(Rat::from_integer(BigInt::from(2).pow(exp_u32(&two_pow)))));
        for (i, &(a, b)) in BASES.iter().enumerate().skip(1) {
            let n = exp_u32(&r[i].to_integer());
            if n > 0 {
                poly = poly.mul(&PPolynomial::linear(a, b).pow(n));
            }
        }
        total = total.add(&poly);
    }
    Ok(if total.is_zero() {
        ParamProofOutcome::ProvedZero
    } else {
        ParamProofOutcome::NotZero { polynomial: total }
    })
}

fn exp_u32(n: &BigInt) -> u32 {
    u32::try_from(n).expect("residual exponent fits in u32")
}

const DIGITS: u32 = 210;

fn scale() -> BigInt {
    BigInt::from(10).pow(DIGITS)
}

/// `≈ 10^DIGITS · (num/den)^(n/d)` for positive `num/den`.
fn frac_pow(num: &BigInt, den: &BigInt, e: &Rat) -> BigInt {
    let s = scale();
    let n = e.numer();
    let d = u32::try_from(e.denom()).expect("small denominator");
    let k = exp_u32(&n.abs());
    let (top, bottom) = if n.is_negative() { (den, num) } else { (num, den) };
    let x = s.pow(d) * top.pow(k) / bottom.pow(k);
    x.nth_root(d)
}

const SAMPLE_POINTS: [(i64, i64); 5] = [(1, 6), (1, 3), (1, 2), (2, 3), (5, 6)];

fn numeric_samples(terms: &[&EtaMonomial], residuals: &[[Rat; 8]]) -> Vec<NumericSample> {
    let s = scale();
    let tolerance = BigInt::from(10).pow(DIGITS - 150);
    SAMPLE_POINTS
        .iter()
        .map(|&(pn, pd)| {
            let p = rat(pn, pd);
            let mut total = Rat::zero();
            for (t, r) in terms.iter().zip(residuals) {
                let mut acc = s.clone();
                for (i, &(a, b)) in BASES.iter().enumerate() {
                    if r[i].is_zero() {
                        continue;
                    }
                    let base = Rat::from_integer(a.into()) + Rat::from_integer(b.into()) * &p;
                    acc = acc * frac_pow(base.numer(), base.denom(), &r[i]) / &s;
                }
                total += &t.coeff * Rat::from_integer(acc);
            }
            let scaled = total.to_integer();
            NumericSample {
                p,
                value: render_fixed(&scaled),
                within_tolerance: scaled.abs() < tolerance,
            }
        })
        .collect()
}

fn render_fixed(scaled: &BigInt) -> String {
    if scaled.is_zero() {
        return "0".into();
    }
    let digits = scaled.abs().to_string();
    let exp10 = digits.len() as i64 - 1 - DIGITS as i64;
    let mant: String = digits.chars().take(20).collect();
    let sign = if scaled.is_negative() { "-" } else { "" };
    format!("{sign}{}.{}e{exp10}", &mant[..1], &mant[1..])
}

/// Independent numeric route: evaluate the expression as a series.
pub fn series_zero_crosscheck(e: &EtaExpression, order: i64) -> VerificationOutcome {
    let s = e.eval(order);
    VerificationOutcome::from_comparison(s.compare(&LaurentSeries::zero(order)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::int_rat;

    fn mono(c: i64, qpow: i64, exps: &[(u32, i64)]) -> EtaMonomial {
        EtaMonomial::new(int_rat(c), qpow, exps.iter().copied())
    }

    #[test]
    fn table_rows_match_f1_and_f12() {
        let f1 = param_vector_of_term(&mono(1, 0, &[(1, 1)])).unwrap();
        assert_eq!(f1.eq, rat(-1, 24));
        assert_eq!(f1.ek, rat(1, 2));
        assert_eq!(f1.ep, rat(1, 24));
        assert_eq!(f1.e1m, rat(1, 2));
        assert_eq!(f1.e1p, rat(1, 6));
        assert_eq!(f1.e12p, rat(1, 8));
        assert_eq!(f1.e2p, rat(1, 8));
        assert_eq!(f1.e2, rat(-1, 6));
        let f12 = param_vector_of_term(&mono(1, 0, &[(12, 1)])).unwrap();
        assert_eq!(
            f12.to_array(),
            [rat(-2, 3), rat(1, 2), rat(1, 24), rat(1, 8), rat(1, 24), rat(1, 6), rat(1, 2), rat(-1, 2)]
        );
        let q = param_vector_of_term(&mono(1, 1, &[])).unwrap();
        let mut expect = ParamVector::zero();
        expect.eq = int_rat(1);
        assert_eq!(q, expect);
    }

    #[test]
    fn trivial_cancellation() {
        let e = EtaExpression::new(vec![mono(1, 0, &[(1, 1)]), mono(-1, 0, &[(1, 1)])]);
        assert_eq!(prove_zero(&e).unwrap(), ParamProofOutcome::ProvedZero);
    }

    #[test]
    fn single_term_is_not_zero() {
        let out = prove_zero(&EtaExpression::new(vec![mono(1, 0, &[(1, 1)])])).unwrap();
        assert!(matches!(out, ParamProofOutcome::NotZero { .. }));
    }

    #[test]
    fn rejects_unparametrized_index() {
        let e = EtaExpression::new(vec![mono(1, 0, &[(8, 1)])]);
        assert_eq!(prove_zero(&e), Err(Error::UnsupportedEtaIndex(8)));
    }

    #[test]
    fn non_uniform_weight_is_flagged() {
        // f1 and f1^2 carry different k-exponents
        let e = EtaExpression::new(vec![mono(1, 0, &[(1, 1)]), mono(-1, 0, &[(1, 2)])]);
        let out = prove_zero(&e).unwrap();
        assert!(matches!(out, ParamProofOutcome::NonUniform { component: "k", .. }));
    }

    #[test]
    fn non_integral_reports_samples() {
        // f1*f3 and f2^2 share k- and q-exponents; their 2-exponents differ by 1/3
        let e = EtaExpression::new(vec![mono(1, 0, &[(1, 1), (3, 1)]), mono(-1, 0, &[(2, 2)])]);
        match prove_zero(&e).unwrap() {
            ParamProofOutcome::NonIntegral { samples, .. } => {
                assert_eq!(samples.len(), 5);
                assert!(samples.iter().all(|s| !s.within_tolerance));
            }
            other => panic!("{other}"),
        }
    }

    #[test]
    fn crosscheck_reports_first_nonzero() {
        let out = series_zero_crosscheck(&EtaExpression::new(vec![mono(1, 0, &[(1, 1)])]), 5);
        let m = out.first_mismatch.unwrap();
        assert_eq!((m.exponent, m.lhs, m.rhs), (0, int_rat(1), int_rat(0)));
    }

    #[test]
    fn fractional_power_is_accurate() {
        // 2^(1/2) to 200 digits
        let r = frac_pow(&BigInt::from(2), &BigInt::one(), &rat(1, 2));
        let sq = &r * &r;
        let two = BigInt::from(2) * scale() * scale();
        assert!((two - sq).abs() < scale() * BigInt::from(10).pow(10));
    }

    #[test]
    fn polynomial_ops() {
        let a = PPolynomial::linear(1, -1).mul(&PPolynomial::linear(1, 1));
        assert_eq!(a, PPolynomial::new(vec![int_rat(1), int_rat(0), int_rat(-1)]));
        assert_eq!(a.to_string(), "-1*p^2 + 1");
        assert_eq!(a.eval(&rat(1, 2)), rat(3, 4));
        assert!(a.add(&PPolynomial::new(vec![int_rat(-1), int_rat(0), int_rat(1)])).is_zero());
    }
}
