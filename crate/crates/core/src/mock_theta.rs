//! Direct summation of the defining q-series of the second order mock theta
//! functions `A(q)`, `B(q)` and `μ₂(q)`.
//!
//! These are the independent oracle the rest of the crate is checked
//! against, so each form is summed literally: finite Pochhammer numerator,
//! shift, then division by the finite Pochhammer denominator. The outer sum
//! stops at the first index whose shift exceeds the requested order; shifts
//! are strictly increasing in `n` for every form.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::qproducts::{divide_by_pochhammer, pochhammer_finite, SignedMonomial};
use crate::series::{LaurentSeries, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MockThetaSelector {
    /// `Σ (-q;q²)_n q^{(n+1)²} / (q;q²)²_{n+1}`
    A1,
    /// `Σ (-q²;q²)_n q^{n+1} / (q;q²)_{n+1}`
    A2,
    /// `Σ (-q²;q²)_n q^{n(n+1)} / (q;q²)²_{n+1}`
    B1,
    /// `Σ (-q;q²)_n q^n / (q;q²)_{n+1}`
    B2,
    /// The `B2` sum, with each denominator expanded as a polynomial and
    /// inverted as a whole instead of divided out factor by factor.
    B3,
    /// `Σ (-1)^n (q;q²)_n q^{n²} / (-q²;q²)²_n`
    Mu2,
}

impl MockThetaSelector {
    pub const ALL: [MockThetaSelector; 6] = [Self::A1, Self::A2, Self::B1, Self::B2, Self::B3, Self::Mu2];

    /// Exponent of the shift on outer term `n`.
    fn shift(self, n: i64) -> i64 {
        match self {
            Self::A1 => (n + 1) * (n + 1),
            Self::A2 => n + 1,
            Self::B1 => n * (n + 1),
            Self::B2 | Self::B3 => n,
            Self::Mu2 => n * n,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::A1 => "A1",
            Self::A2 => "A2",
            Self::B1 => "B1",
            Self::B2 => "B2",
            Self::B3 => "B3",
            Self::Mu2 => "MU2",
        }
    }

    /// The function this form defines: `A`, `B` or `MU2`.
    pub fn family(self) -> &'static str {
        match self {
            Self::A1 | Self::A2 => "A",
            Self::B1 | Self::B2 | Self::B3 => "B",
            Self::Mu2 => "MU2",
        }
    }
}

impl fmt::Display for MockThetaSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MockThetaSelector {
    type Err = Error;

    /// Accepts the form names, plus `A`, `B`, `MU2`/`MU` for each function's
    /// fastest form.
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_uppercase().as_str() {
            "A" | "A1" => Self::A1,
            "A2" => Self::A2,
            "B" | "B1" => Self::B1,
            "B2" => Self::B2,
            "B3" => Self::B3,
            "MU2" | "MU" => Self::Mu2,
            _ => return Err(Error::InvalidArgument(format!("unknown mock theta selector {s:?}"))),
        })
    }
}

fn minus_q(exp: i64) -> SignedMonomial {
    SignedMonomial::new(-1, exp)
}

fn q(exp: i64) -> SignedMonomial {
    SignedMonomial::q_pow(exp)
}

/// Outer term `n`, truncated at `order` (the caller guarantees the shift is
/// at most `order`).
fn term(sel: MockThetaSelector, n: i64, order: i64) -> LaurentSeries {
    let shift = sel.shift(n);
    let w = order - shift;
    let nu = n as u64;
    let body = match sel {
        MockThetaSelector::A1 => {
            let num = pochhammer_finite(minus_q(1), 2, nu, w);
            let once = divide_by_pochhammer(num, q(1), 2, nu + 1);
            divide_by_pochhammer(once, q(1), 2, nu + 1)
        }
        MockThetaSelector::A2 => {
            let num = pochhammer_finite(minus_q(2), 2, nu, w);
            divide_by_pochhammer(num, q(1), 2, nu + 1)
        }
        MockThetaSelector::B1 => {
            let num = pochhammer_finite(minus_q(2), 2, nu, w);
            let once = divide_by_pochhammer(num, q(1), 2, nu + 1);
            divide_by_pochhammer(once, q(1), 2, nu + 1)
        }
        MockThetaSelector::B2 => {
            let num = pochhammer_finite(minus_q(1), 2, nu, w);
            divide_by_pochhammer(num, q(1), 2, nu + 1)
        }
        MockThetaSelector::B3 => {
            let num = pochhammer_finite(minus_q(1), 2, nu, w);
            let den = pochhammer_finite(q(1), 2, nu + 1, w);
            num.mul(&den.invert().expect("constant term 1"))
        }
        MockThetaSelector::Mu2 => {
            let num = pochhammer_finite(q(1), 2, nu, w);
            let num = if n % 2 == 1 { num.neg() } else { num };
            let once = divide_by_pochhammer(num, minus_q(2), 2, nu);
            divide_by_pochhammer(once, minus_q(2), 2, nu)
        }
    };
    body.shift(shift)
}

pub fn mock_theta_series(sel: MockThetaSelector, order: i64) -> LaurentSeries {
    let order = order.max(0);
    let mut acc = LaurentSeries::zero(order);
    let mut n = 0;
    while sel.shift(n) <= order {
        acc = acc.add(&term(sel, n, order));
        n += 1;
    }
    acc
}

pub fn mock_theta_coefficient(sel: MockThetaSelector, n: i64) -> Rat {
    if n < 0 {
        return Rat::zero();
    }
    mock_theta_series(sel, n).coefficient(n).expect("computed to order n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::int_rat;

    #[test]
    fn leading_coefficients() {
        let b = mock_theta_series(MockThetaSelector::B3, 3);
        assert_eq!(b.coefficient_range(0, 3).unwrap(), [1, 2, 4, 6].map(int_rat).to_vec());
        assert_eq!(mock_theta_coefficient(MockThetaSelector::B3, 0), int_rat(1));
        assert_eq!(mock_theta_coefficient(MockThetaSelector::B1, 3), int_rat(6));

        let a = mock_theta_series(MockThetaSelector::A2, 1);
        assert_eq!(a.coefficient_range(0, 1).unwrap(), [0, 1].map(int_rat).to_vec());
        assert_eq!(mock_theta_coefficient(MockThetaSelector::A1, 0), int_rat(0));

        let mu = mock_theta_series(MockThetaSelector::Mu2, 1);
        assert_eq!(mu.coefficient_range(0, 1).unwrap(), [1, -1].map(int_rat).to_vec());
    }

    #[test]
    fn forms_agree_at_low_order() {
        for fam in [
            &[MockThetaSelector::A1, MockThetaSelector::A2][..],
            &[MockThetaSelector::B1, MockThetaSelector::B2, MockThetaSelector::B3][..],
        ] {
            let first = mock_theta_series(fam[0], 60);
            for &sel in &fam[1..] {
                assert_eq!(mock_theta_series(sel, 60), first, "{sel}");
            }
        }
    }

    #[test]
    fn selector_parsing() {
        assert_eq!("b".parse::<MockThetaSelector>().unwrap(), MockThetaSelector::B1);
        assert_eq!("MU2".parse::<MockThetaSelector>().unwrap(), MockThetaSelector::Mu2);
        assert!("C".parse::<MockThetaSelector>().is_err());
    }
}
