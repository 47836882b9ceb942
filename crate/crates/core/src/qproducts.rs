//! q-Pochhammer products, the functions `f_k = (q^k;q^k)_∞`, eta-quotient
//! expressions and the theta function `j(z;q)` at signed-monomial `z`.
//!
//! Every product here is a product of binomials `1 - ε·q^s`. Binomials with
//! `s < 0` are exact Laurent polynomials and are multiplied in last, after
//! the positive part has been expanded far enough to absorb the shift.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::series::{LaurentSeries, Rat};

/// `±q^exp`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedMonomial {
    pub negative: bool,
    pub exp: i64,
}

impl SignedMonomial {
    pub const ONE: SignedMonomial = SignedMonomial { negative: false, exp: 0 };
    pub const MINUS_ONE: SignedMonomial = SignedMonomial { negative: true, exp: 0 };

    pub fn new(sign: i64, exp: i64) -> Self {
        assert!(sign == 1 || sign == -1, "sign must be ±1");
        SignedMonomial { negative: sign < 0, exp }
    }

    pub fn q_pow(exp: i64) -> Self {
        SignedMonomial { negative: false, exp }
    }

    pub fn sign(self) -> i64 {
        if self.negative {
            -1
        } else {
            1
        }
    }

    pub fn mul(self, other: Self) -> Self {
        SignedMonomial { negative: self.negative ^ other.negative, exp: self.exp + other.exp }
    }

    pub fn div(self, other: Self) -> Self {
        SignedMonomial { negative: self.negative ^ other.negative, exp: self.exp - other.exp }
    }

    pub fn powi(self, n: i64) -> Self {
        SignedMonomial { negative: self.negative && n % 2 != 0, exp: self.exp * n }
    }

    pub fn neg(self) -> Self {
        SignedMonomial { negative: !self.negative, exp: self.exp }
    }

    pub fn to_series(self, order: i64) -> LaurentSeries {
        LaurentSeries::monomial(Rat::from_integer(self.sign().into()), self.exp, order)
    }
}

impl fmt::Display for SignedMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negative {
            write!(f, "-")?;
        }
        if self.exp == 1 {
            write!(f, "q")
        } else {
            write!(f, "q^{}", self.exp)
        }
    }
}

/// `∏_{j=0}^{count-1} (1 + coef·q^(start + step·j))`; `count = None` is the
/// infinite product.
#[derive(Clone, Copy, Debug)]
struct BinomialRun {
    coef: i64,
    start: i64,
    step: i64,
    count: Option<u64>,
}

impl BinomialRun {
    fn pochhammer(a: SignedMonomial, step: i64, count: Option<u64>) -> Self {
        BinomialRun { coef: -a.sign(), start: a.exp, step, count }
    }

    fn exponents(self) -> impl Iterator<Item = i64> {
        let limit = self.count.unwrap_or(u64::MAX);
        (0..limit).map(move |j| self.start + self.step * j as i64)
    }
}

fn expand(runs: &[BinomialRun], order: i64) -> LaurentSeries {
    // Exponents grow with j, so the nonpositive factors form a finite prefix.
    let mut shift = 0i64;
    let mut scalar = 1i64;
    let mut negatives = Vec::new();
    for run in runs {
        debug_assert!(run.step >= 1);
        for s in run.exponents().take_while(|&s| s <= 0) {
            if s == 0 {
                scalar *= 1 + run.coef;
            } else {
                shift -= s;
                negatives.push((run.coef, s));
            }
        }
    }
    if scalar == 0 {
        return LaurentSeries::zero(order);
    }
    let working = order + shift;
    let mut acc = LaurentSeries::one(working);
    for run in runs {
        for s in run.exponents().skip_while(|&s| s <= 0).take_while(|&s| s <= working) {
            acc = acc.mul_binomial(run.coef, s);
        }
    }
    for (c, s) in negatives {
        acc = acc.mul_binomial(c, s);
    }
    if scalar != 1 {
        acc = acc.scale(&Rat::from_integer(scalar.into()));
    }
    acc.truncate(order)
}

/// `(a; q^step)_n = ∏_{j=0}^{n-1} (1 - a·q^(step·j))`.
pub fn pochhammer_finite(a: SignedMonomial, step: i64, n: u64, order: i64) -> LaurentSeries {
    assert!(step >= 1, "pochhammer step must be positive");
    expand(&[BinomialRun::pochhammer(a, step, Some(n))], order)
}

/// Divide `s` by `(a; q^step)_n`, one binomial at a time. Requires every
/// factor exponent to be positive.
pub(crate) fn divide_by_pochhammer(
    mut s: LaurentSeries,
    a: SignedMonomial,
    step: i64,
    n: u64,
) -> LaurentSeries {
    let coef = -a.sign();
    for j in 0..n {
        let e = a.exp + step * j as i64;
        assert!(e > 0, "divide_by_pochhammer needs positive factor exponents");
        // factors beyond the window length cannot touch any known coefficient
        if e > s.order() - s.min_exp() {
            break;
        }
        s = s.div_binomial(coef, e);
    }
    s
}

/// `f_k = ∏_{j≥1} (1 - q^{kj})` truncated at `order`.
pub fn eta_f(k: u32, order: i64) -> LaurentSeries {
    assert!(k >= 1, "f_k needs k >= 1");
    let k = i64::from(k);
    expand(&[BinomialRun { coef: -1, start: k, step: k, count: None }], order)
}

/// `j(z; q^base) = (z, q^base/z, q^base; q^base)_∞`.
pub fn theta_j(z: SignedMonomial, base: i64, order: i64) -> Result<LaurentSeries> {
    if base < 1 {
        return Err(Error::InvalidArgument(format!("theta base must be positive, got {base}")));
    }
    if theta_vanishes(z, base) {
        return Err(Error::VanishingTheta { z, base });
    }
    let runs = [
        BinomialRun::pochhammer(z, base, None),
        BinomialRun::pochhammer(SignedMonomial::q_pow(base).div(z), base, None),
        BinomialRun { coef: -1, start: base, step: base, count: None },
    ];
    Ok(expand(&runs, order))
}

/// `j(z; q^base) ≡ 0` exactly when `z = +q^(base·m)`.
pub fn theta_vanishes(z: SignedMonomial, base: i64) -> bool {
    !z.negative && z.exp.rem_euclid(base) == 0
}

/// `coeff · q^qpow · ∏ f_k^{e_k}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaMonomial {
    pub coeff: Rat,
    pub qpow: i64,
    exps: BTreeMap<u32, i64>,
}

impl EtaMonomial {
    pub fn new(coeff: Rat, qpow: i64, exps: impl IntoIterator<Item = (u32, i64)>) -> Self {
        let mut m = EtaMonomial { coeff, qpow, exps: BTreeMap::new() };
        for (k, e) in exps {
            m.mul_f(k, e);
        }
        m
    }

    pub fn constant(c: Rat) -> Self {
        EtaMonomial { coeff: c, qpow: 0, exps: BTreeMap::new() }
    }

    /// Multiply in `f_k^e`, dropping the entry if the exponent cancels.
    pub fn mul_f(&mut self, k: u32, e: i64) {
        if e == 0 {
            return;
        }
        let slot = self.exps.entry(k).or_insert(0);
        *slot += e;
        if *slot == 0 {
            self.exps.remove(&k);
        }
    }

    pub fn exps(&self) -> &BTreeMap<u32, i64> {
        &self.exps
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.coeff *= &other.coeff;
        out.qpow += other.qpow;
        for (&k, &e) in &other.exps {
            out.mul_f(k, e);
        }
        out
    }

    pub fn recip(&self) -> Option<Self> {
        if self.coeff.is_zero() {
            return None;
        }
        Some(EtaMonomial {
            coeff: self.coeff.recip(),
            qpow: -self.qpow,
            exps: self.exps.iter().map(|(&k, &e)| (k, -e)).collect(),
        })
    }

    pub fn powi(&self, n: i64) -> Option<Self> {
        if n < 0 && self.coeff.is_zero() {
            return None;
        }
        let coeff = if n >= 0 {
            num_traits::pow(self.coeff.clone(), n as usize)
        } else {
            num_traits::pow(self.coeff.recip(), n.unsigned_abs() as usize)
        };
        Some(EtaMonomial {
            coeff,
            qpow: self.qpow * n,
            exps: self.exps.iter().map(|(&k, &e)| (k, e * n)).collect(),
        })
    }

    fn eval_with(&self, order: i64, table: &EtaTable) -> LaurentSeries {
        let working = order - self.qpow;
        if working < 0 || self.coeff.is_zero() {
            return LaurentSeries::zero(order);
        }
        let mut acc = LaurentSeries::one(working);
        for (&k, &e) in &self.exps {
            let f = table.get(k).truncate(working);
            for _ in 0..e.unsigned_abs() {
                acc = if e > 0 {
                    acc.mul(&f)
                } else {
                    acc.div(&f).expect("f_k has constant term 1")
                };
            }
        }
        acc.scale(&self.coeff).shift(self.qpow)
    }

    pub fn eval(&self, order: i64) -> LaurentSeries {
        let table = EtaTable::new(self.exps.keys().copied(), order - self.qpow);
        self.eval_with(order, &table)
    }
}

struct EtaTable {
    f: BTreeMap<u32, LaurentSeries>,
}

impl EtaTable {
    fn new(ks: impl IntoIterator<Item = u32>, order: i64) -> Self {
        let order = order.max(0);
        EtaTable { f: ks.into_iter().map(|k| (k, eta_f(k, order))).collect() }
    }

    fn get(&self, k: u32) -> &LaurentSeries {
        &self.f[&k]
    }
}

impl fmt::Display for EtaMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        let c = &self.coeff;
        let needs_coeff = !c.abs().is_one() || (self.qpow == 0 && self.exps.is_empty());
        if c.is_negative() {
            write!(f, "-")?;
        }
        if needs_coeff {
            parts.push(c.abs().to_string());
        }
        match self.qpow {
            0 => {}
            1 => parts.push("q".into()),
            n => parts.push(format!("q^{n}")),
        }
        let fk = |k: u32, e: i64| if e == 1 { format!("f{k}") } else { format!("f{k}^{e}") };
        parts.extend(self.exps.iter().filter(|(_, &e)| e > 0).map(|(&k, &e)| fk(k, e)));
        if parts.is_empty() {
            parts.push("1".into());
        }
        write!(f, "{}", parts.join("*"))?;
        let den: Vec<String> =
            self.exps.iter().filter(|(_, &e)| e < 0).map(|(&k, &e)| fk(k, -e)).collect();
        match den.len() {
            0 => Ok(()),
            1 => write!(f, "/{}", den[0]),
            _ => write!(f, "/({})", den.join("*")),
        }
    }
}

/// A sum of eta monomials. The empty sum is zero.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EtaExpression {
    pub terms: Vec<EtaMonomial>,
}

impl EtaExpression {
    pub fn new(terms: Vec<EtaMonomial>) -> Self {
        EtaExpression { terms }
    }

    pub fn eval(&self, order: i64) -> LaurentSeries {
        let working = self.terms.iter().map(|t| order - t.qpow).max().unwrap_or(0);
        let table = EtaTable::new(self.terms.iter().flat_map(|t| t.exps.keys().copied()), working);
        self.terms
            .iter()
            .fold(LaurentSeries::zero(order), |acc, t| acc.add(&t.eval_with(order, &table)))
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        EtaExpression { terms }
    }
}

impl fmt::Display for EtaExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            let s = t.to_string();
            match (i, s.strip_prefix('-')) {
                (0, _) => write!(f, "{s}")?,
                (_, Some(rest)) => write!(f, " - {rest}")?,
                (_, None) => write!(f, " + {s}")?,
            }
        }
        Ok(())
    }
}
