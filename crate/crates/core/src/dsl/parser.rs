use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::Expr;
use crate::mock_theta::MockThetaSelector;
use crate::qproducts::SignedMonomial;
use crate::series::Rat;

/// Syntax error. Line and column are 1-based and point at the offending token.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    /// Sorted, deduplicated descriptions of what would have been accepted.
    pub expected: Vec<String>,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at line {}, column {}: expected ", self.line, self.column)?;
        match self.expected.as_slice() {
            [one] => write!(f, "{one}")?,
            many => write!(f, "one of {}", many.join(", "))?,
        }
        write!(f, ", found {}", self.found)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(n) => write!(f, "integer {n}"),
            Tok::Ident(s) => write!(f, "{s:?}"),
            Tok::Sym(c) => write!(f, "'{c}'"),
            Tok::End => write!(f, "end of input"),
        }
    }
}

struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let (mut line, mut column) = (1, 1);
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        let mut take = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next().expect("peeked");
            if c == '\n' {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
            c
        };
        if c.is_whitespace() {
            take(&mut chars);
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while chars.peek().is_some_and(|c| c.is_ascii_digit()) {
                s.push(take(&mut chars));
            }
            out.push(Token { tok: Tok::Int(s.parse().expect("digits")), line: l, column: col });
        } else if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while chars.peek().is_some_and(|c| c.is_ascii_alphanumeric() || *c == '_') {
                s.push(take(&mut chars));
            }
            out.push(Token { tok: Tok::Ident(s), line: l, column: col });
        } else if "+-*/^(),".contains(c) {
            take(&mut chars);
            out.push(Token { tok: Tok::Sym(c), line: l, column: col });
        } else {
            return Err(ParseError {
                line: l,
                column: col,
                expected: vec!["expression".into()],
                found: format!("unexpected character {c:?}"),
            });
        }
    }
    out.push(Token { tok: Tok::End, line, column });
    Ok(out)
}

const CALLS: [&str; 6] = ["AL", "J", "P", "MT", "EXTRACT", "SUBST"];

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, expected: &[&str]) -> PResult<T> {
        let t = &self.toks[self.pos];
        let mut expected: Vec<String> = expected.iter().map(|s| s.to_string()).collect();
        expected.sort();
        expected.dedup();
        Err(ParseError { line: t.line, column: t.column, expected, found: t.tok.to_string() })
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> PResult<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.error(&[&format!("'{c}'")])
        }
    }

    fn expr(&mut self) -> PResult<Expr> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> PResult<Expr> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(self.unary()?);
            } else if self.eat('/') {
                acc = acc.div(self.unary()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> PResult<Expr> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        let base = self.atom()?;
        if self.eat('^') {
            return Ok(base.pow(self.signed_int("integer exponent")?));
        }
        Ok(base)
    }

    fn atom(&mut self) -> PResult<Expr> {
        const ATOM: &[&str] = &["integer", "'q'", "'f<k>'", "'('", "AL", "EXTRACT", "J", "MT", "P", "SUBST"];
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Expr::Num(Rat::from_integer(n)))
            }
            Tok::Sym('(') => {
                self.bump();
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(s) if s == "q" => {
                self.bump();
                Ok(Expr::Q)
            }
            Tok::Ident(s) if CALLS.contains(&s.as_str()) => self.call(&s),
            Tok::Ident(s) => match eta_index(&s) {
                Some(k) if k >= 1 => {
                    self.bump();
                    Ok(Expr::F(k))
                }
                _ => self.error(ATOM),
            },
            _ => self.error(ATOM),
        }
    }

    fn call(&mut self, name: &str) -> PResult<Expr> {
        self.bump();
        self.expect('(')?;
        let e = match name {
            "AL" => {
                let x = self.monomial()?;
                self.expect(',')?;
                let base = self.positive("positive base")?;
                self.expect(',')?;
                let z = self.monomial()?;
                Expr::AL { x, base, z }
            }
            "J" => {
                let z = self.monomial()?;
                self.expect(',')?;
                let base = self.positive("positive base")?;
                Expr::J { z, base }
            }
            "P" => {
                let a = self.monomial()?;
                self.expect(',')?;
                let step = self.positive("positive step")?;
                self.expect(',')?;
                let n = self.signed_int("nonnegative length")?;
                if n < 0 {
                    self.pos -= 1;
                    return self.error(&["nonnegative length"]);
                }
                Expr::P { a, step, n: n as u64 }
            }
            "MT" => match self.peek().clone() {
                Tok::Ident(s) => match s.parse::<MockThetaSelector>() {
                    Ok(sel) => {
                        self.bump();
                        Expr::MT(sel)
                    }
                    Err(_) => return self.error(&["A1", "A2", "B1", "B2", "B3", "MU2"]),
                },
                _ => return self.error(&["A1", "A2", "B1", "B2", "B3", "MU2"]),
            },
            "EXTRACT" => {
                let e = self.expr()?;
                self.expect(',')?;
                let m = self.positive("positive modulus")?;
                self.expect(',')?;
                let r = self.signed_int("residue")?;
                if !(0..m).contains(&r) {
                    self.pos -= 1;
                    return self.error(&[&format!("residue in [0, {m})")]);
                }
                Expr::Extract { e: Box::new(e), m, r }
            }
            "SUBST" => {
                let e = self.expr()?;
                self.expect(',')?;
                let m = self.positive("positive power")?;
                Expr::Subst { e: Box::new(e), m }
            }
            _ => unreachable!("checked against CALLS"),
        };
        self.expect(')')?;
        Ok(e)
    }

    fn signed_int(&mut self, what: &str) -> PResult<i64> {
        let neg = self.eat('-');
        match self.peek().clone() {
            Tok::Int(n) => match n.to_i64() {
                Some(v) => {
                    self.bump();
                    Ok(if neg { -v } else { v })
                }
                None => self.error(&[&format!("{what} that fits in 64 bits")]),
            },
            _ => self.error(&[what]),
        }
    }

    fn positive(&mut self, what: &str) -> PResult<i64> {
        let v = self.signed_int(what)?;
        if v < 1 {
            self.pos -= 1;
            return self.error(&[what]);
        }
        Ok(v)
    }

    /// `-?q(^int)?`
    fn monomial(&mut self) -> PResult<SignedMonomial> {
        let negative = self.eat('-');
        match self.peek() {
            Tok::Ident(s) if s == "q" => {
                self.bump();
            }
            _ => return self.error(&["signed monomial like q^2 or -q^0"]),
        }
        let exp = if self.eat('^') { self.signed_int("integer exponent")? } else { 1 };
        Ok(SignedMonomial { negative, exp })
    }
}

fn eta_index(s: &str) -> Option<u32> {
    let digits = s.strip_prefix('f')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

pub fn parse(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return p.error(&["'+'", "'-'", "'*'", "'/'", "'^'", "end of input"]);
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::rat;

    #[test]
    fn eta_quotient() {
        let e = parse("f2^7*f3^2/(f1^6*f4*f6)").unwrap();
        let num = Expr::F(2).pow(7).mul(Expr::F(3).pow(2));
        let den = Expr::F(1).pow(6).mul(Expr::F(4)).mul(Expr::F(6));
        assert_eq!(e, num.div(den));
    }

    #[test]
    fn appell_lerch_call() {
        let e = parse("-(1/q)*AL(q^0, 4, q^3)").unwrap();
        let al = Expr::AL { x: SignedMonomial::q_pow(0), base: 4, z: SignedMonomial::q_pow(3) };
        assert_eq!(e, Expr::int(1).div(Expr::Q).neg().mul(al));
    }

    #[test]
    fn precedence_and_associativity() {
        let e = parse("1 - 2 - 3*q^2^0").unwrap_err();
        assert_eq!((e.line, e.column), (1, 14));
        let e = parse("1 - 2 - 3 * q ^ 2").unwrap();
        let want = Expr::int(1).sub(Expr::int(2)).sub(Expr::int(3).mul(Expr::Q.pow(2)));
        assert_eq!(e, want);
        assert_eq!(parse("-q^2").unwrap(), Expr::Q.pow(2).neg());
        assert_eq!(parse("q^-3").unwrap(), Expr::Q.pow(-3));
        assert_eq!(parse("8/6").unwrap(), Expr::int(8).div(Expr::int(6)));
        let _ = rat(1, 1);
    }

    #[test]
    fn syntax_errors_locate_and_list() {
        let e = parse("q^").unwrap_err();
        assert_eq!((e.line, e.column), (1, 3));
        assert_eq!(e.expected, vec!["integer exponent".to_string()]);
        assert_eq!(e.found, "end of input");

        let e = parse("f1 +\n  * f2").unwrap_err();
        assert_eq!((e.line, e.column), (2, 3));
        assert!(e.expected.contains(&"'q'".to_string()));

        assert!(parse("f0").is_err());
        assert!(parse("EXTRACT(f1, 3, 3)").is_err());
        assert!(parse("MT(C)").is_err());
        assert!(parse("AL(q, 0, q)").is_err());
        assert!(parse("f1 $ f2").is_err());
    }

    #[test]
    fn calls() {
        let e = parse("EXTRACT(MT(B3), 3, 0) + SUBST(J(-q, 2), 2) - P(q^-1, 2, 4)").unwrap();
        let printed = e.to_string();
        assert_eq!(printed, "EXTRACT(MT(B3), 3, 0) + SUBST(J(-q, 2), 2) - P(q^-1, 2, 4)");
    }
}
