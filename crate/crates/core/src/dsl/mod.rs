//! The expression language used to write identities.
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := unary (("*" | "/") unary)*
//! unary  := "-" unary | factor
//! factor := atom ("^" int)?
//! atom   := int | "q" | "f" int | "(" expr ")" | call
//! call   := AL(mono, int, mono) | J(mono, int) | P(mono, int, int)
//!         | MT(selector) | EXTRACT(expr, int, int) | SUBST(expr, int)
//! mono   := "-"? "q" ("^" int)?
//! ```
//!
//! Exponents after `^` may carry a sign. A rational literal `n/d` is read as
//! the quotient of two integer literals. `q^0` stands for `1` inside
//! monomial arguments.

mod eval;
mod parser;

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::mock_theta::MockThetaSelector;
use crate::qproducts::{EtaExpression, EtaMonomial, SignedMonomial};
use crate::series::Rat;

pub use eval::eval;
pub use parser::{parse, ParseError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Num(Rat),
    Q,
    F(u32),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
    Neg(Box<Expr>),
    /// `m(x, q^base, z)`
    AL { x: SignedMonomial, base: i64, z: SignedMonomial },
    /// `j(z; q^base)`
    J { z: SignedMonomial, base: i64 },
    /// `(a; q^step)_n`
    P { a: SignedMonomial, step: i64, n: u64 },
    MT(MockThetaSelector),
    Extract { e: Box<Expr>, m: i64, r: i64 },
    Subst { e: Box<Expr>, m: i64 },
}

impl Expr {
    pub fn int(n: i64) -> Self {
        Expr::Num(Rat::from_integer(n.into()))
    }

    pub fn add(self, o: Expr) -> Self {
        Expr::Add(Box::new(self), Box::new(o))
    }

    pub fn sub(self, o: Expr) -> Self {
        Expr::Sub(Box::new(self), Box::new(o))
    }

    pub fn mul(self, o: Expr) -> Self {
        Expr::Mul(Box::new(self), Box::new(o))
    }

    pub fn div(self, o: Expr) -> Self {
        Expr::Div(Box::new(self), Box::new(o))
    }

    pub fn pow(self, n: i64) -> Self {
        Expr::Pow(Box::new(self), n)
    }

    pub fn neg(self) -> Self {
        Expr::Neg(Box::new(self))
    }

    /// Rewrite as a sum of eta monomials, if the expression is built from
    /// numbers, `q` and `f_k` alone. Division is allowed only by a single
    /// monomial, and expansion of products is capped at `MAX_TERMS` terms.
    pub fn to_eta(&self) -> Option<EtaExpression> {
        const MAX_TERMS: usize = 512;
        let one = |m: EtaMonomial| Some(EtaExpression::new(vec![m]));
        let product = |a: &EtaExpression, b: &EtaExpression| {
            if a.terms.len() * b.terms.len() > MAX_TERMS {
                return None;
            }
            let terms = a.terms.iter().flat_map(|x| b.terms.iter().map(move |y| x.mul(y))).collect();
            Some(EtaExpression::new(terms))
        };
        match self {
            Expr::Num(c) => one(EtaMonomial::constant(c.clone())),
            Expr::Q => one(EtaMonomial::new(Rat::one(), 1, [])),
            Expr::F(k) => one(EtaMonomial::new(Rat::one(), 0, [(*k, 1)])),
            Expr::Add(a, b) => Some(a.to_eta()?.concat(&b.to_eta()?)),
            Expr::Sub(a, b) => Some(a.to_eta()?.concat(&negate(&b.to_eta()?))),
            Expr::Neg(a) => Some(negate(&a.to_eta()?)),
            Expr::Mul(a, b) => product(&a.to_eta()?, &b.to_eta()?),
            Expr::Div(a, b) => {
                let d = b.to_eta()?;
                match d.terms.as_slice() {
                    [m] => product(&a.to_eta()?, &EtaExpression::new(vec![m.recip()?])),
                    _ => None,
                }
            }
            Expr::Pow(a, n) => {
                let base = a.to_eta()?;
                match base.terms.as_slice() {
                    [m] => one(m.powi(*n)?),
                    _ if *n >= 0 => (0..*n).try_fold(
                        EtaExpression::new(vec![EtaMonomial::constant(Rat::one())]),
                        |acc, _| product(&acc, &base),
                    ),
                    _ => None,
                }
            }
            _ => None,
        }
    }

    /// `c·q^k`, if the expression is a bare scaled power of `q`.
    pub(crate) fn as_q_monomial(&self) -> Option<(Rat, i64)> {
        match self {
            Expr::Num(_) | Expr::Q | Expr::Neg(_) | Expr::Pow(..) | Expr::Mul(..) | Expr::Div(..) => {
                let e = self.to_eta()?;
                match e.terms.as_slice() {
                    [m] if m.exps().is_empty() => Some((m.coeff.clone(), m.qpow)),
                    _ => None,
                }
            }
            _ => None,
        }
    }
}

fn negate(e: &EtaExpression) -> EtaExpression {
    let mut e = e.clone();
    for t in &mut e.terms {
        t.coeff = -t.coeff.clone();
    }
    e
}

impl From<&EtaExpression> for Expr {
    fn from(e: &EtaExpression) -> Self {
        let mono = |m: &EtaMonomial| {
            let mut acc: Option<Expr> = None;
            let mut push = |x: Expr| acc = Some(match acc.take() {
                None => x,
                Some(a) => a.mul(x),
            });
            let c = m.coeff.abs();
            if !c.is_one() || (m.qpow == 0 && m.exps().is_empty()) {
                push(Expr::Num(c));
            }
            if m.qpow != 0 {
                push(Expr::Q.pow(m.qpow));
            }
            for (&k, &e) in m.exps() {
                push(if e == 1 { Expr::F(k) } else { Expr::F(k).pow(e) });
            }
            (m.coeff.is_negative(), acc.expect("nonempty"))
        };
        let mut out: Option<Expr> = None;
        for t in e.terms.iter().filter(|t| !t.coeff.is_zero()) {
            let (neg, body) = mono(t);
            out = Some(match (out, neg) {
                (None, false) => body,
                (None, true) => body.neg(),
                (Some(a), false) => a.add(body),
                (Some(a), true) => a.sub(body),
            });
        }
        out.unwrap_or_else(|| Expr::int(0))
    }
}

const PREC_SUM: u8 = 1;
const PREC_PRODUCT: u8 = 2;
const PREC_UNARY: u8 = 3;
const PREC_ATOM: u8 = 5;

impl Expr {
    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => PREC_SUM,
            Expr::Mul(..) | Expr::Div(..) => PREC_PRODUCT,
            Expr::Neg(_) => PREC_UNARY,
            Expr::Pow(..) => 4,
            Expr::Num(c) if !c.is_integer() => PREC_PRODUCT,
            Expr::Num(c) if c.is_negative() => PREC_UNARY,
            _ => PREC_ATOM,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            write!(f, "(")?;
            self.write_at(f, 0)?;
            return write!(f, ")");
        }
        match self {
            Expr::Num(c) => {
                if c.is_integer() {
                    write!(f, "{}", c.numer())
                } else {
                    write!(f, "{}/{}", c.numer(), c.denom())
                }
            }
            Expr::Q => write!(f, "q"),
            Expr::F(k) => write!(f, "f{k}"),
            Expr::Add(a, b) => {
                a.write_at(f, PREC_SUM)?;
                write!(f, " + ")?;
                b.write_at(f, PREC_PRODUCT)
            }
            Expr::Sub(a, b) => {
                a.write_at(f, PREC_SUM)?;
                write!(f, " - ")?;
                b.write_at(f, PREC_PRODUCT)
            }
            Expr::Mul(a, b) => {
                a.write_at(f, PREC_PRODUCT)?;
                write!(f, "*")?;
                b.write_at(f, PREC_UNARY)
            }
            Expr::Div(a, b) => {
                a.write_at(f, PREC_PRODUCT)?;
                write!(f, "/")?;
                b.write_at(f, PREC_UNARY)
            }
            Expr::Pow(a, n) => {
                a.write_at(f, PREC_ATOM)?;
                write!(f, "^{n}")
            }
            Expr::Neg(a) => {
                write!(f, "-")?;
                a.write_at(f, PREC_UNARY)
            }
            Expr::AL { x, base, z } => write!(f, "AL({x}, {base}, {z})"),
            Expr::J { z, base } => write!(f, "J({z}, {base})"),
            Expr::P { a, step, n } => write!(f, "P({a}, {step}, {n})"),
            Expr::MT(sel) => write!(f, "MT({sel})"),
            Expr::Extract { e, m, r } => {
                write!(f, "EXTRACT(")?;
                e.write_at(f, 0)?;
                write!(f, ", {m}, {r})")
            }
            Expr::Subst { e, m } => {
                write!(f, "SUBST(")?;
                e.write_at(f, 0)?;
                write!(f, ", {m})")
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}
