use super::Expr;
use crate::appell_lerch::{appell_lerch_m, AppellLerchSpec};
use crate::dissection::dissect_extract;
use crate::error::{Error, Result};
use crate::mock_theta::mock_theta_series;
use crate::qproducts::{pochhammer_finite, theta_j};
use crate::series::{reach_order, LaurentSeries};

/// Evaluate `e` exactly through `q^order`.
///
/// Each node asks its children for as many terms as it needs to deliver
/// `order`: extractions ask for `m` times more, and products or quotients
/// whose factors have poles retry with a deeper working order.
pub fn eval(e: &Expr, order: i64) -> Result<LaurentSeries> {
    if order < 0 {
        return Err(Error::InvalidArgument(format!("evaluation order must be nonnegative, got {order}")));
    }
    node(e, order)
}

/// Same contract as `eval`, for any `need`, including negative ones.
fn node(e: &Expr, need: i64) -> Result<LaurentSeries> {
    let s = raw(e, need)?;
    if s.order() < need {
        return Err(Error::OrderNotReached { target: need, reached: s.order() });
    }
    Ok(s.truncate(need))
}

fn raw(e: &Expr, need: i64) -> Result<LaurentSeries> {
    if let Some(eta) = e.to_eta() {
        return Ok(eta.eval(need));
    }
    match e {
        Expr::Add(a, b) => Ok(node(a, need)?.add(&node(b, need)?)),
        Expr::Sub(a, b) => Ok(node(a, need)?.sub(&node(b, need)?)),
        Expr::Neg(a) => Ok(node(a, need)?.neg()),
        Expr::Mul(a, b) => {
            let scaled = |(c, k): (crate::series::Rat, i64), x: &Expr| -> Result<LaurentSeries> {
                Ok(node(x, need - k)?.scale(&c).shift(k))
            };
            if let Some(m) = a.as_q_monomial() {
                return scaled(m, b);
            }
            if let Some(m) = b.as_q_monomial() {
                return scaled(m, a);
            }
            reach_order(need, |w| Ok(node(a, w)?.mul(&node(b, w)?)))
        }
        Expr::Div(a, b) => {
            if let Some((c, k)) = b.as_q_monomial() {
                if c == num_traits::Zero::zero() {
                    return Err(Error::NotInvertible { order: need });
                }
                return Ok(node(a, need + k)?.scale(&c.recip()).shift(-k));
            }
            reach_order(need, |w| {
                let d = nonzero(b, w)?;
                node(a, w)?.div(&d)
            })
        }
        Expr::Pow(a, n) => {
            if *n == 0 {
                return Ok(LaurentSeries::one(need));
            }
            reach_order(need, |w| node(a, w)?.pow(*n))
        }
        Expr::AL { x, base, z } => appell_lerch_m(&AppellLerchSpec::new(*x, *base, *z)?, need),
        Expr::J { z, base } => theta_j(*z, *base, need),
        Expr::P { a, step, n } => {
            if *step < 1 {
                return Err(Error::InvalidArgument(format!("pochhammer step must be positive, got {step}")));
            }
            Ok(pochhammer_finite(*a, *step, *n, need))
        }
        Expr::MT(sel) => Ok(mock_theta_series(*sel, need)),
        Expr::Extract { e, m, r } => {
            if *m < 1 {
                return Err(Error::InvalidArgument(format!("dissection modulus must be positive, got {m}")));
            }
            let inner = node(e, m * need + r)?;
            dissect_extract(&inner, *m, *r)
        }
        Expr::Subst { e, m } => {
            if *m < 1 {
                return Err(Error::InvalidArgument(format!("substitution power must be positive, got {m}")));
            }
            let inner = node(e, need.div_euclid(*m))?;
            Ok(inner.substitute_power(*m))
        }
        Expr::Num(_) | Expr::Q | Expr::F(_) => unreachable!("handled by the eta route"),
    }
}

/// Evaluate a divisor, deepening until some coefficient is nonzero.
fn nonzero(b: &Expr, w: i64) -> Result<LaurentSeries> {
    let mut order = w;
    for _ in 0..6 {
        let s = node(b, order)?;
        if !s.is_zero() {
            return Ok(s);
        }
        order = 2 * order.max(8) + 16;
    }
    Err(Error::NotInvertible { order })
}
