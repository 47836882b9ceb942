//! The Appell-Lerch sum
//!
//! ```text
//! m(x, q, z) = -z / j(z;q) · Σ_r (-1)^r q^{r(r+1)/2} z^r / (1 - x z q^r)
//! ```
//!
//! at signed monomials `x`, `z`, with `q` replaced by `q^base`, plus the
//! instantiation checks for the change-of-`z` identity and the
//! decomposition of `m(x,q,-1)` into sums over `q^9`.
//!
//! Summand `r` has denominator `1 - ε·q^d` with `ε = sign(x)·sign(z)` and
//! `d = exp(x) + exp(z) + base·r`. For `d < 0` it is rewritten as
//! `-ε·q^{-d} / (1 - ε·q^{-d})` so every expansion is a geometric series in
//! a positive power of `q`; `d = 0` with `ε = -1` gives the constant `1/2`
//! and `d = 0` with `ε = +1` is a pole.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::outcome::VerificationOutcome;
use crate::qproducts::{eta_f, theta_j, theta_vanishes, SignedMonomial};
use crate::series::{reach_order, LaurentSeries, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AppellLerchSpec {
    pub x: SignedMonomial,
    pub base: i64,
    pub z: SignedMonomial,
}

impl AppellLerchSpec {
    pub fn new(x: SignedMonomial, base: i64, z: SignedMonomial) -> Result<Self> {
        let spec = AppellLerchSpec { x, base, z };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.base < 1 {
            return Err(Error::InvalidArgument(format!(
                "Appell-Lerch base must be positive, got {}",
                self.base
            )));
        }
        if theta_vanishes(self.z, self.base) {
            return Err(Error::VanishingTheta { z: self.z, base: self.base });
        }
        let xz = self.x.mul(self.z);
        if !xz.negative && xz.exp.rem_euclid(self.base) == 0 {
            return Err(Error::NonGeneric(format!(
                "x·z·q^(base·r) = 1 at r = {} for m({}, q^{}, {})",
                -xz.exp / self.base,
                self.x,
                self.base,
                self.z
            )));
        }
        Ok(())
    }

    fn ratio_sign(&self) -> i64 {
        self.x.sign() * self.z.sign()
    }

    fn denominator_exp(&self, r: i64) -> i64 {
        self.x.exp + self.z.exp + self.base * r
    }

    fn base_exp(&self, r: i64) -> i64 {
        self.base * r * (r + 1) / 2 + self.z.exp * r
    }

    /// Lowest exponent summand `r` contributes after normalization.
    fn lowest_exp(&self, r: i64) -> i64 {
        self.base_exp(r) + (-self.denominator_exp(r)).max(0)
    }

    /// Index bound past which the quadratic term alone pushes every summand
    /// above `order`.
    fn index_bound(&self, order: i64) -> i64 {
        // lowest_exp(r) >= (b/2) r^2 - (b/2 + |exp z|)|r|
        let b = self.base as f64;
        let lin = self.z.exp.abs() as f64 + b / 2.0;
        let w = order.max(0) as f64 + 1.0;
        ((lin + (lin * lin + 2.0 * b * w).sqrt()) / b).ceil() as i64 + 1
    }

    /// Summation window `lo..=hi` for the bilateral sum at `order`: starts at
    /// the analytic bound, grows until two consecutive indices on each side
    /// contribute nothing, then requires a third to be silent as well.
    pub fn window(&self, order: i64) -> Result<(i64, i64)> {
        let r0 = self.index_bound(order);
        let active = |r: i64| self.lowest_exp(r) <= order;
        let mut hi = r0;
        let mut quiet = 0;
        let mut r = r0 + 1;
        while quiet < 2 {
            if active(r) {
                hi = r;
                quiet = 0;
            } else {
                quiet += 1;
            }
            r += 1;
        }
        if active(r) {
            return Err(Error::WindowUnstable { index: r, order });
        }
        let mut lo = -r0;
        quiet = 0;
        r = -r0 - 1;
        while quiet < 2 {
            if active(r) {
                lo = r;
                quiet = 0;
            } else {
                quiet += 1;
            }
            r -= 1;
        }
        if active(r) {
            return Err(Error::WindowUnstable { index: r, order });
        }
        Ok((lo, hi))
    }

    /// `Σ_{r=lo}^{hi} (-1)^r q^{base·r(r+1)/2} z^r / (1 - x z q^{base·r})` to `order`.
    fn bilateral_sum_over(&self, lo: i64, hi: i64, order: i64) -> Result<LaurentSeries> {
        let eps = self.ratio_sign();
        let terms: Vec<i64> = (lo..=hi).filter(|&r| self.lowest_exp(r) <= order).collect();
        let Some(min_exp) = terms.iter().map(|&r| self.lowest_exp(r)).min() else {
            return Ok(LaurentSeries::zero(order));
        };
        // Everything is accumulated doubled so the d = 0 summand stays integral.
        let len = (order - min_exp + 1) as usize;
        let mut acc = vec![BigInt::zero(); len];
        for r in terms {
            let mut sign = if r.rem_euclid(2) == 0 { 1 } else { -1 };
            if self.z.negative && r.rem_euclid(2) != 0 {
                sign = -sign;
            }
            let d = self.denominator_exp(r);
            let t = self.base_exp(r);
            if d == 0 {
                if eps == 1 {
                    return Err(Error::NonGeneric(format!("pole at r = {r}")));
                }
                acc[(t - min_exp) as usize] += sign;
                continue;
            }
            let (start, step, lead) = if d > 0 { (t, d, sign) } else { (t - d, -d, -eps * sign) };
            let mut coef = 2 * lead;
            let mut e = start;
            while e <= order {
                acc[(e - min_exp) as usize] += coef;
                coef *= eps;
                e += step;
            }
        }
        let coeffs: Vec<Rat> = acc.into_iter().map(|c| Rat::new(c, BigInt::from(2))).collect();
        Ok(LaurentSeries::from_rats(min_exp, &coeffs, order))
    }

    pub fn bilateral_sum(&self, order: i64) -> Result<LaurentSeries> {
        let (lo, hi) = self.window(order)?;
        self.bilateral_sum_over(lo, hi, order)
    }
}

/// Expansion of `m(x, q^base, z)` to `order`.
pub fn appell_lerch_m(spec: &AppellLerchSpec, order: i64) -> Result<LaurentSeries> {
    spec.validate()?;
    reach_order(order, |w| {
        let sum = spec.bilateral_sum(w)?;
        let j = theta_j(spec.z, spec.base, w)?;
        let v = j.valuation().ok_or(Error::NotInvertible { order: w })?;
        let numer = spec.z.neg().to_series(w + 2 * v.abs() + spec.z.exp.abs());
        Ok(numer.div(&j)?.mul(&sum))
    })
}

fn monomial(m: SignedMonomial, order: i64) -> LaurentSeries {
    m.to_series(order)
}

fn product(target: i64, factors: impl Fn(i64) -> Result<Vec<(LaurentSeries, i64)>>) -> Result<LaurentSeries> {
    reach_order(target, |w| {
        let mut acc = LaurentSeries::one(w);
        for (s, e) in factors(w)? {
            acc = acc.mul(&s.pow(e)?);
        }
        Ok(acc)
    })
}

/// Both sides of
///
/// ```text
/// m(x,q,z1) - m(x,q,z0) = z0 f1^3 j(z1/z0) j(x z0 z1) / (j(z0) j(z1) j(x z0) j(x z1))
/// ```
///
/// with `q ↦ q^base`. A vanishing numerator theta makes the right side 0.
pub fn change_z_sides(
    x: SignedMonomial,
    base: i64,
    z1: SignedMonomial,
    z0: SignedMonomial,
    order: i64,
) -> Result<(LaurentSeries, LaurentSeries)> {
    let m1 = AppellLerchSpec::new(x, base, z1)?;
    let m0 = AppellLerchSpec::new(x, base, z0)?;
    for d in [z0, z1, x.mul(z0), x.mul(z1)] {
        if theta_vanishes(d, base) {
            return Err(Error::VanishingTheta { z: d, base });
        }
    }
    let lhs = appell_lerch_m(&m1, order)?.sub(&appell_lerch_m(&m0, order)?);
    let n1 = z1.div(z0);
    let n2 = x.mul(z0).mul(z1);
    let rhs = if theta_vanishes(n1, base) || theta_vanishes(n2, base) {
        LaurentSeries::zero(order)
    } else {
        product(order, |w| {
            Ok(vec![
                (monomial(z0, w + z0.exp.abs()), 1),
                (eta_f(base as u32, w), 3),
                (theta_j(n1, base, w)?, 1),
                (theta_j(n2, base, w)?, 1),
                (theta_j(z0, base, w)?, -1),
                (theta_j(z1, base, w)?, -1),
                (theta_j(x.mul(z0), base, w)?, -1),
                (theta_j(x.mul(z1), base, w)?, -1),
            ])
        })?
    };
    Ok((lhs, rhs))
}

pub fn change_z_identity_check(
    x: SignedMonomial,
    base: i64,
    z1: SignedMonomial,
    z0: SignedMonomial,
    order: i64,
) -> VerificationOutcome {
    match change_z_sides(x, base, z1, z0, order) {
        Ok((lhs, rhs)) => VerificationOutcome::from_comparison(lhs.compare(&rhs)),
        Err(e) => e.into(),
    }
}

/// Both sides of the decomposition of `m(x,q,-1)` over `q^9`:
///
/// ```text
/// m(x,q,-1) = m(x^3 q^3, q^9, -1) - (x/q) m(x^3, q^9, -1) + (x^2/q^3) m(x^3/q^3, q^9, -1)
///             + x f1 f3^2 f6 f9 j(x^2 q; q^2) / (2 q f2^2 f18^2 j(-x^3; q^3))
/// ```
///
/// with `q ↦ q^base`.
pub fn cube_decomposition_sides(
    x: SignedMonomial,
    base: i64,
    order: i64,
) -> Result<(LaurentSeries, LaurentSeries)> {
    let b = base;
    let minus_one = SignedMonomial::MINUS_ONE;
    let x3 = x.powi(3);
    let lhs = appell_lerch_m(&AppellLerchSpec::new(x, b, minus_one)?, order)?;
    let s1 = AppellLerchSpec::new(x3.mul(SignedMonomial::q_pow(3 * b)), 9 * b, minus_one)?;
    let s2 = AppellLerchSpec::new(x3, 9 * b, minus_one)?;
    let s3 = AppellLerchSpec::new(x3.div(SignedMonomial::q_pow(3 * b)), 9 * b, minus_one)?;
    let t1 = appell_lerch_m(&s1, order)?;
    let x_over_q = x.div(SignedMonomial::q_pow(b));
    let x2_over_q3 = x.powi(2).div(SignedMonomial::q_pow(3 * b));
    let t2 = reach_order(order, |w| {
        Ok(monomial(x_over_q, w + 2 * x_over_q.exp.abs()).mul(&appell_lerch_m(&s2, w)?))
    })?;
    let t3 = reach_order(order, |w| {
        Ok(monomial(x2_over_q3, w + 2 * x2_over_q3.exp.abs()).mul(&appell_lerch_m(&s3, w)?))
    })?;
    let theta_num = x.powi(2).mul(SignedMonomial::q_pow(b));
    let theta_den = x3.neg();
    let prefactor = x.div(SignedMonomial::q_pow(b));
    let half = Rat::new(BigInt::one(), BigInt::from(2));
    let corr = product(order, |w| {
        let f = |k: i64| eta_f((k * b) as u32, w);
        Ok(vec![
            (monomial(prefactor, w + 2 * prefactor.exp.abs()).scale(&half), 1),
            (f(1), 1),
            (f(3), 2),
            (f(6), 1),
            (f(9), 1),
            (theta_j(theta_num, 2 * b, w)?, 1),
            (f(2), -2),
            (f(18), -2),
            (theta_j(theta_den, 3 * b, w)?, -1),
        ])
    })?;
    let rhs = t1.sub(&t2).add(&t3).add(&corr);
    Ok((lhs, rhs))
}

pub fn cube_decomposition_check(x: SignedMonomial, base: i64, order: i64) -> VerificationOutcome {
    match cube_decomposition_sides(x, base, order) {
        Ok((lhs, rhs)) => VerificationOutcome::from_comparison(lhs.compare(&rhs)),
        Err(e) => e.into(),
    }
}
