//! m-dissection: split a series by exponent residue mod `m` and compress
//! `q^m → q`, and the inverse reassembly.

use crate::error::{Error, Result};
use crate::series::{LaurentSeries, Rat};

/// `Σ_{e ≡ r (mod m)} c_e · q^{(e-r)/m}`, known to `floor((order - r)/m)`.
/// Residues are taken with floor division, so principal parts dissect too.
pub fn dissect_extract(s: &LaurentSeries, m: i64, r: i64) -> Result<LaurentSeries> {
    if m < 1 {
        return Err(Error::InvalidArgument(format!("dissection modulus must be positive, got {m}")));
    }
    if !(0..m).contains(&r) {
        return Err(Error::ResidueOutOfRange { residue: r, modulus: m });
    }
    let order = (s.order() - r).div_euclid(m);
    let lo = (s.min_exp() - r).div_euclid(m);
    if order < lo {
        return Ok(LaurentSeries::zero(order));
    }
    let coeffs: Vec<Rat> = (lo..=order)
        .map(|n| s.coefficient(n * m + r).expect("within order"))
        .collect();
    Ok(LaurentSeries::from_rats(lo, &coeffs, order))
}

/// `Σ_r q^r · parts[r](q^m)`.
pub fn dissect_reconstruct(parts: &[LaurentSeries], m: i64) -> Result<LaurentSeries> {
    if m < 1 {
        return Err(Error::InvalidArgument(format!("dissection modulus must be positive, got {m}")));
    }
    if parts.len() != m as usize {
        return Err(Error::WrongPartCount { expected: m as usize, got: parts.len() });
    }
    let order = parts
        .iter()
        .enumerate()
        .map(|(r, p)| m * p.order() + m - 1 + r as i64)
        .min()
        .expect("m >= 1");
    let mut acc = LaurentSeries::zero(order);
    for (r, p) in parts.iter().enumerate() {
        acc = acc.add(&p.substitute_power(m).shift(r as i64));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::int_rat;

    #[test]
    fn extract_examples() {
        let s = LaurentSeries::from_ints(0, &[1, 2, 3, 4, 5], 4);
        let e = dissect_extract(&s, 2, 1).unwrap();
        assert_eq!(e.order(), 1);
        assert_eq!(e.coefficient_range(0, 1).unwrap(), vec![int_rat(2), int_rat(4)]);
        assert_eq!(dissect_extract(&s, 1, 0).unwrap(), s);
        assert_eq!(
            dissect_extract(&s, 3, 3),
            Err(Error::ResidueOutOfRange { residue: 3, modulus: 3 })
        );
    }

    #[test]
    fn laurent_input_uses_floor_residues() {
        // q^-5 + q^-2 + q: residues mod 3 are all 1
        let s = LaurentSeries::from_ints(-5, &[1, 0, 0, 1, 0, 0, 1], 3);
        let e = dissect_extract(&s, 3, 1).unwrap();
        assert_eq!(e.min_exp(), -2);
        assert_eq!(e.coefficient_range(-2, 0).unwrap(), vec![int_rat(1); 3]);
        assert!(dissect_extract(&s, 3, 0).unwrap().is_zero());
    }

    #[test]
    fn reconstruct_roundtrip_and_length_check() {
        let s = LaurentSeries::from_ints(-3, &[1, -2, 0, 5, 7, 1, 1, 9, 4], 6);
        let parts: Vec<_> = (0..3).map(|r| dissect_extract(&s, 3, r).unwrap()).collect();
        assert_eq!(dissect_reconstruct(&parts, 3).unwrap(), s);
        assert_eq!(
            dissect_reconstruct(&parts[..2], 3),
            Err(Error::WrongPartCount { expected: 3, got: 2 })
        );
    }
}
