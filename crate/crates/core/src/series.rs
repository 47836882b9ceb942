//! Exact truncated Laurent series over the rationals.
//!
//! A [`LaurentSeries`] stores the coefficients of `q^min_exp ..= q^order`
//! densely as big integers over one shared positive denominator. The order
//! `N` says the series is known modulo `q^(N+1)`; every operation computes
//! the largest order its result is fully determined to, so precision loss
//! shows up in the data instead of being silently papered over.
//!
//! Values are kept normalized: leading zero coefficients are stripped (an
//! all-zero window becomes the empty window `min_exp = order + 1`) and the
//! shared denominator is coprime to the numerators. Structural equality is
//! therefore equality of the represented truncated series.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar. Always in lowest terms with a positive denominator.
pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int_rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentSeries {
    min_exp: i64,
    order: i64,
    num: Vec<BigInt>,
    den: BigInt,
}

/// Result of comparing two series on the overlap of their determined windows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesComparison {
    pub compared_order: i64,
    /// `(exponent, left coefficient, right coefficient)` of the first disagreement.
    pub first_mismatch: Option<(i64, Rat, Rat)>,
}

impl SeriesComparison {
    pub fn is_equal(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

impl LaurentSeries {
    fn from_parts(min_exp: i64, order: i64, num: Vec<BigInt>, den: BigInt) -> Self {
        debug_assert_eq!(num.len() as i64, (order - min_exp + 1).max(0));
        let mut s = LaurentSeries { min_exp, order, num, den };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        match self.num.iter().position(|c| !c.is_zero()) {
            None => {
                self.num.clear();
                self.min_exp = self.order + 1;
                self.den = BigInt::one();
                return;
            }
            Some(0) => {}
            Some(k) => {
                self.num.drain(..k);
                self.min_exp += k as i64;
            }
        }
        if self.den.is_negative() {
            self.den = -&self.den;
            for c in &mut self.num {
                *c = -&*c;
            }
        }
        if self.den.is_one() {
            return;
        }
        let mut g = self.den.clone();
        for c in &self.num {
            if g.is_one() {
                return;
            }
            if !c.is_zero() {
                g = g.gcd(c);
            }
        }
        if !g.is_one() {
            self.den /= &g;
            for c in &mut self.num {
                *c /= &g;
            }
        }
    }

    /// The series known only to be `O(q^(order+1))`.
    pub fn zero(order: i64) -> Self {
        LaurentSeries { min_exp: order + 1, order, num: Vec::new(), den: BigInt::one() }
    }

    pub fn one(order: i64) -> Self {
        Self::monomial(Rat::one(), 0, order)
    }

    /// `c·q^exp`, truncated at `order`.
    pub fn monomial(c: Rat, exp: i64, order: i64) -> Self {
        if exp > order || c.is_zero() {
            return Self::zero(order);
        }
        let len = (order - exp + 1) as usize;
        let mut num = vec![BigInt::zero(); len];
        let (n, d) = c.into_raw();
        num[0] = n;
        Self::from_parts(exp, order, num, d)
    }

    /// The polynomial `Σ coeffs[i]·q^(min_exp+i)` truncated at `order`.
    /// Exponents past the supplied coefficients are exact zeros.
    pub fn from_rats(min_exp: i64, coeffs: &[Rat], order: i64) -> Self {
        if order < min_exp {
            return Self::zero(order);
        }
        let len = (order - min_exp + 1) as usize;
        let den = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let mut num = vec![BigInt::zero(); len];
        for (slot, c) in num.iter_mut().zip(coeffs) {
            *slot = c.numer() * (&den / c.denom());
        }
        Self::from_parts(min_exp, order, num, den)
    }

    pub fn from_ints(min_exp: i64, coeffs: &[i64], order: i64) -> Self {
        if order < min_exp {
            return Self::zero(order);
        }
        let len = (order - min_exp + 1) as usize;
        let mut num = vec![BigInt::zero(); len];
        for (slot, &c) in num.iter_mut().zip(coeffs) {
            *slot = BigInt::from(c);
        }
        Self::from_parts(min_exp, order, num, BigInt::one())
    }

    /// Lowest represented exponent. For a normalized nonzero series this is
    /// the valuation; for an all-zero window it is `order + 1`.
    pub fn min_exp(&self) -> i64 {
        self.min_exp
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn valuation(&self) -> Option<i64> {
        (!self.num.is_empty()).then_some(self.min_exp)
    }

    /// True when every determined coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    /// Common denominator of all coefficients.
    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    pub fn coefficient(&self, n: i64) -> Result<Rat> {
        if n > self.order {
            return Err(Error::BeyondTruncation { exponent: n, order: self.order });
        }
        Ok(self.coeff_at(n))
    }

    fn coeff_at(&self, n: i64) -> Rat {
        match self.raw_at(n) {
            Some(c) => Rat::new(c.clone(), self.den.clone()),
            None => Rat::zero(),
        }
    }

    fn raw_at(&self, n: i64) -> Option<&BigInt> {
        if n < self.min_exp || n > self.order {
            None
        } else {
            Some(&self.num[(n - self.min_exp) as usize])
        }
    }

    /// All coefficients of the window, `min_exp..=order`.
    pub fn coefficients(&self) -> impl Iterator<Item = (i64, Rat)> + '_ {
        self.num
            .iter()
            .enumerate()
            .map(move |(i, c)| (self.min_exp + i as i64, Rat::new(c.clone(), self.den.clone())))
    }

    /// Coefficients of `q^lo ..= q^hi`, zero-filled below the window.
    pub fn coefficient_range(&self, lo: i64, hi: i64) -> Result<Vec<Rat>> {
        if hi > self.order {
            return Err(Error::BeyondTruncation { exponent: hi, order: self.order });
        }
        Ok((lo..=hi).map(|n| self.coeff_at(n)).collect())
    }

    /// Drop everything above `order`. A larger `order` than the current one
    /// is a no-op: unknown coefficients cannot be recovered.
    pub fn truncate(&self, order: i64) -> Self {
        if order >= self.order {
            return self.clone();
        }
        if order < self.min_exp {
            return Self::zero(order);
        }
        let len = (order - self.min_exp + 1) as usize;
        Self::from_parts(self.min_exp, order, self.num[..len].to_vec(), self.den.clone())
    }

    /// Multiply by `q^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentSeries {
            min_exp: self.min_exp + k,
            order: self.order + k,
            num: self.num.clone(),
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(self.order);
        }
        let num = self.num.iter().map(|x| x * c.numer()).collect();
        Self::from_parts(self.min_exp, self.order, num, &self.den * c.denom())
    }

    pub fn neg(&self) -> Self {
        LaurentSeries {
            min_exp: self.min_exp,
            order: self.order,
            num: self.num.iter().map(|x| -x).collect(),
            den: self.den.clone(),
        }
    }

    /// Coefficientwise sum, known up to the smaller of the two orders.
    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, true)
    }

    fn combine(&self, other: &Self, negate_other: bool) -> Self {
        let order = self.order.min(other.order);
        let min_exp = self.min_exp.min(other.min_exp);
        if order < min_exp {
            return Self::zero(order);
        }
        let den = self.den.lcm(&other.den);
        let sa = &den / &self.den;
        let sb = &den / &other.den;
        let len = (order - min_exp + 1) as usize;
        let mut num = vec![BigInt::zero(); len];
        for (i, slot) in num.iter_mut().enumerate() {
            let n = min_exp + i as i64;
            if let Some(a) = self.raw_at(n) {
                *slot += if sa.is_one() { a.clone() } else { a * &sa };
            }
            if let Some(b) = other.raw_at(n) {
                let b = if sb.is_one() { b.clone() } else { b * &sb };
                if negate_other {
                    *slot -= b;
                } else {
                    *slot += b;
                }
            }
        }
        Self::from_parts(min_exp, order, num, den)
    }

    /// Cauchy product. The result is determined up to
    /// `min(a.order + b.min_exp, b.order + a.min_exp)`.
    pub fn mul(&self, other: &Self) -> Self {
        let min_exp = self.min_exp + other.min_exp;
        let order = (self.order + other.min_exp).min(other.order + self.min_exp);
        let len = self.num.len().min(other.num.len());
        if len == 0 {
            return Self::zero(order);
        }
        let num = convolve(&self.num[..len], &other.num[..len], len);
        Self::from_parts(min_exp, order, num, &self.den * &other.den)
    }

    /// Series quotient `self / divisor`, equal to `self · divisor⁻¹` including
    /// its order bookkeeping.
    pub fn div(&self, divisor: &Self) -> Result<Self> {
        let e = divisor.valuation().ok_or(Error::NotInvertible { order: divisor.order })?;
        let min_exp = self.min_exp - e;
        let order = (self.order - e).min(divisor.order - 2 * e + self.min_exp);
        let len = self.num.len().min(divisor.num.len());
        if len == 0 {
            return Ok(Self::zero(order));
        }
        let content = divisor.num.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        let content = if divisor.num[0].is_negative() { -content } else { content };
        let monic: Vec<BigInt> = if content.is_one() {
            divisor.num[..len].to_vec()
        } else {
            divisor.num[..len].iter().map(|c| c / &content).collect()
        };
        if !monic[0].is_one() {
            return Ok(self.div_rational(&monic, &content, divisor, min_exp, order, len));
        }
        let quotient = long_divide_unit(&self.num[..len], &monic, len);
        let num = if divisor.den.is_one() {
            quotient
        } else {
            quotient.into_iter().map(|c| c * &divisor.den).collect()
        };
        Ok(Self::from_parts(min_exp, order, num, &self.den * &content))
    }

    // Divisor whose primitive part does not lead with ±1: genuinely rational
    // coefficients, so fall back to per-coefficient rationals.
    fn div_rational(
        &self,
        monic: &[BigInt],
        content: &BigInt,
        divisor: &Self,
        min_exp: i64,
        order: i64,
        len: usize,
    ) -> Self {
        let lead = Rat::from_integer(monic[0].clone());
        let taps: Vec<(usize, Rat)> = monic
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| (j, Rat::from_integer(c.clone())))
            .collect();
        let mut out: Vec<Rat> = Vec::with_capacity(len);
        for n in 0..len {
            let mut x = Rat::from_integer(self.num[n].clone());
            for (j, c) in &taps {
                if *j > n {
                    break;
                }
                x -= c * &out[n - j];
            }
            out.push(x / &lead);
        }
        let scale = Rat::new(divisor.den.clone(), &self.den * content);
        let coeffs: Vec<Rat> = out.into_iter().map(|c| c * &scale).collect();
        Self::from_rats(min_exp, &coeffs, order)
    }

    /// Multiplicative inverse. With lowest term `c·q^e` and order `N`, the
    /// result starts at `q^-e` and is known to order `N - 2e`.
    pub fn invert(&self) -> Result<Self> {
        let e = self.valuation().ok_or(Error::NotInvertible { order: self.order })?;
        Self::one(self.order - e).div(self)
    }

    pub fn pow(&self, n: i64) -> Result<Self> {
        if n < 0 {
            return self.invert()?.pow(-n);
        }
        let mut result: Option<Self> = None;
        let mut base = self.clone();
        let mut e = n as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = Some(match result {
                    None => base.clone(),
                    Some(r) => r.mul(&base),
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        Ok(result.unwrap_or_else(|| Self::one(self.order.max(0))))
    }

    /// Substitute `q ↦ q^m`.
    ///
    /// # Panics
    /// If `m < 1`.
    pub fn substitute_power(&self, m: i64) -> Self {
        assert!(m >= 1, "substitute_power requires m >= 1, got {m}");
        let order = m * self.order + (m - 1);
        if self.num.is_empty() {
            return Self::zero(order);
        }
        let min_exp = m * self.min_exp;
        let len = (order - min_exp + 1) as usize;
        let mut num = vec![BigInt::zero(); len];
        for (i, c) in self.num.iter().enumerate() {
            num[i * m as usize] = c.clone();
        }
        LaurentSeries { min_exp, order, num, den: self.den.clone() }
    }

    /// Multiply by the exact binomial `1 + c·q^s`. Negative `s` lowers both
    /// the window and the order by `|s|`.
    pub fn mul_binomial(&self, c: i64, s: i64) -> Self {
        if s == 0 {
            return self.scale(&int_rat(1 + c));
        }
        if self.num.is_empty() {
            return Self::zero(self.order + s.min(0));
        }
        let c = BigInt::from(c);
        let mut num = self.num.clone();
        if s > 0 {
            let s = s as usize;
            for i in (s..num.len()).rev() {
                let t = &c * &num[i - s];
                num[i] += t;
            }
            Self::from_parts(self.min_exp, self.order, num, self.den.clone())
        } else {
            let t = (-s) as usize;
            for i in (0..num.len()).rev() {
                let mut v = &c * &num[i];
                if i >= t {
                    v += &num[i - t];
                }
                num[i] = v;
            }
            Self::from_parts(self.min_exp + s, self.order + s, num, self.den.clone())
        }
    }

    /// Divide by `1 + c·q^s` for `s > 0` (geometric expansion), `c = ±1`.
    ///
    /// # Panics
    /// If `s <= 0`.
    pub fn div_binomial(&self, c: i64, s: i64) -> Self {
        assert!(s > 0, "div_binomial requires a positive exponent");
        let s = s as usize;
        let mut num = self.num.clone();
        for i in s..num.len() {
            let (lo, hi) = num.split_at_mut(i);
            match c {
                1 => hi[0] -= &lo[i - s],
                -1 => hi[0] += &lo[i - s],
                _ => hi[0] -= &lo[i - s] * BigInt::from(c),
            }
        }
        Self::from_parts(self.min_exp, self.order, num, self.den.clone())
    }

    /// Compare on the overlap of the determined windows.
    pub fn compare(&self, other: &Self) -> SeriesComparison {
        let compared_order = self.order.min(other.order);
        let lo = self.min_exp.min(other.min_exp);
        let zero = BigInt::zero();
        for n in lo..=compared_order {
            let a = self.raw_at(n).unwrap_or(&zero);
            let b = other.raw_at(n).unwrap_or(&zero);
            if a * &other.den != b * &self.den {
                return SeriesComparison {
                    compared_order,
                    first_mismatch: Some((n, self.coeff_at(n), other.coeff_at(n))),
                };
            }
        }
        SeriesComparison { compared_order, first_mismatch: None }
    }
}

/// Run `f` at increasing working orders until its result is determined to
/// `target`, then truncate to exactly `target`. `f` must be monotone: a higher
/// working order never yields a lower result order.
pub fn reach_order(target: i64, f: impl Fn(i64) -> Result<LaurentSeries>) -> Result<LaurentSeries> {
    let mut working = target;
    let mut reached = i64::MIN;
    for _ in 0..12 {
        let s = f(working)?;
        if s.order() >= target {
            return Ok(s.truncate(target));
        }
        if s.order() <= reached {
            // no progress; push harder
            working += 2 * (target - s.order());
        } else {
            working += target - s.order();
        }
        reached = s.order();
    }
    Err(Error::OrderNotReached { target, reached })
}

/// `c[k] = Σ a[i]·b[k-i]` for `k < len`, iterating over the sparser operand.
fn convolve(a: &[BigInt], b: &[BigInt], len: usize) -> Vec<BigInt> {
    let nnz = |v: &[BigInt]| v.iter().filter(|c| !c.is_zero()).count();
    let (sparse, dense) = if nnz(a) <= nnz(b) { (a, b) } else { (b, a) };
    let mut out = vec![BigInt::zero(); len];
    for (i, x) in sparse.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        let tail = &mut out[i..];
        let src = &dense[..len - i];
        if x.is_one() {
            for (o, y) in tail.iter_mut().zip(src) {
                if !y.is_zero() {
                    *o += y;
                }
            }
        } else if (-x).is_one() {
            for (o, y) in tail.iter_mut().zip(src) {
                if !y.is_zero() {
                    *o -= y;
                }
            }
        } else {
            for (o, y) in tail.iter_mut().zip(src) {
                if !y.is_zero() {
                    *o += x * y;
                }
            }
        }
    }
    out
}

/// Integer long division by a series whose constant term is 1.
fn long_divide_unit(a: &[BigInt], b: &[BigInt], len: usize) -> Vec<BigInt> {
    let taps: Vec<(usize, &BigInt)> =
        b.iter().enumerate().skip(1).filter(|(_, c)| !c.is_zero()).collect();
    let mut out: Vec<BigInt> = Vec::with_capacity(len);
    for n in 0..len {
        let mut x = a[n].clone();
        for &(j, c) in &taps {
            if j > n {
                break;
            }
            let prev = &out[n - j];
            if prev.is_zero() {
                continue;
            }
            if c.is_one() {
                x -= prev;
            } else if (-c).is_one() {
                x += prev;
            } else {
                x -= c * prev;
            }
        }
        out.push(x);
    }
    out
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.coefficients() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let unit = mag.is_one();
            if !unit || n == 0 {
                write!(f, "{mag}")?;
            }
            match (n, unit) {
                (0, _) => {}
                (1, true) => write!(f, "q")?,
                (1, false) => write!(f, "*q")?,
                (_, true) => write!(f, "q^{n}")?,
                (_, false) => write!(f, "*q^{n}")?,
            }
        }
        if first {
            write!(f, "O(q^{})", self.order + 1)
        } else {
            write!(f, " + O(q^{})", self.order + 1)
        }
    }
}
