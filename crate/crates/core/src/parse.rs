//! Expression front end.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | '+' unary | factor
//! factor := base ('^' '-'? int)?
//! base   := number | number 'i' | 'i' | 'z' | 'exp' '(' expr ')' | '(' expr ')'
//! ```
//!
//! Numbers are integers or decimals and are read exactly; `3/4` is the exact
//! quotient. Everything printed by [`Poly`], [`RatFunc`] and [`ExpPoly`]
//! parses back to an equal value.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::algebra::{GaussianRational, Poly, RatFunc};
use crate::error::{Error, Result};
use crate::expoly::ExpPoly;

/// A parsed expression in the narrowest type that holds it.
#[derive(Clone, Debug, PartialEq)]
pub enum Parsed {
    Poly(Poly),
    RatFunc(RatFunc),
    ExpPoly(ExpPoly),
}

impl Parsed {
    pub fn into_expoly(self) -> ExpPoly {
        match self {
            Parsed::Poly(p) => p.into(),
            Parsed::RatFunc(r) => r.into(),
            Parsed::ExpPoly(e) => e,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Parsed::Poly(_) => "poly",
            Parsed::RatFunc(_) => "ratfunc",
            Parsed::ExpPoly(_) => "expoly",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigRational),
    Z,
    I,
    Exp,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
    // the number was written with a leading digit and is glued to a following `i`
    glued_i: bool,
}

fn syntax(line: usize, col: usize, message: impl Into<String>) -> Error {
    Error::Syntax { line, col, message: message.into() }
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let ch = chars[i];
        let (l0, c0) = (line, col);
        let mut push = |tok: Tok| out.push(Token { tok, line: l0, col: c0, glued_i: false });
        match ch {
            '\n' => {
                line += 1;
                col = 1;
                i += 1;
                continue;
            }
            c if c.is_whitespace() => {}
            '+' => push(Tok::Plus),
            '-' => push(Tok::Minus),
            '*' => push(Tok::Star),
            '/' => push(Tok::Slash),
            '^' => push(Tok::Caret),
            '(' => push(Tok::LParen),
            ')' => push(Tok::RParen),
            'z' => push(Tok::Z),
            'i' => push(Tok::I),
            'e' if chars[i..].starts_with(&['e', 'x', 'p']) => {
                push(Tok::Exp);
                i += 3;
                col += 3;
                continue;
            }
            c if c.is_ascii_digit() || c == '.' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                let value = parse_decimal(&s).ok_or_else(|| syntax(l0, c0, format!("bad number '{s}'")))?;
                col += i - start;
                let glued_i = i < chars.len() && chars[i] == 'i';
                out.push(Token { tok: Tok::Num(value), line: l0, col: c0, glued_i });
                continue;
            }
            other => return Err(syntax(l0, c0, format!("unexpected character '{other}'"))),
        }
        i += 1;
        col += 1;
    }
    out.push(Token { tok: Tok::End, line, col, glued_i: false });
    Ok(out)
}

fn parse_decimal(s: &str) -> Option<BigRational> {
    let mut parts = s.split('.');
    let whole = parts.next()?;
    let frac = parts.next().unwrap_or("");
    if parts.next().is_some() || (whole.is_empty() && frac.is_empty()) {
        return None;
    }
    let digits = format!("{whole}{frac}");
    let n: BigInt = digits.parse().ok()?;
    let d = BigInt::from(10u32).pow(frac.len() as u32);
    Some(BigRational::new(n, d))
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        let t = self.next();
        if t.tok != want {
            return Err(syntax(t.line, t.col, format!("expected {what}")));
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<ExpPoly> {
        let mut acc = self.term()?;
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.next();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.next();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<ExpPoly> {
        let mut acc = self.unary()?;
        loop {
            match self.peek().tok {
                Tok::Star => {
                    self.next();
                    acc = &acc * &self.unary()?;
                }
                Tok::Slash => {
                    let at = self.next();
                    let rhs = self.unary()?;
                    let Some(r) = rhs.as_ratfunc() else {
                        return Err(syntax(at.line, at.col, "denominator must be a rational function of z"));
                    };
                    acc = acc.scale(&r.inv()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<ExpPoly> {
        match self.peek().tok {
            Tok::Minus => {
                self.next();
                Ok(-self.unary()?)
            }
            Tok::Plus => {
                self.next();
                self.unary()
            }
            _ => self.factor(),
        }
    }

    fn factor(&mut self) -> Result<ExpPoly> {
        let base = self.base()?;
        if self.peek().tok != Tok::Caret {
            return Ok(base);
        }
        let at = self.next();
        let neg = if self.peek().tok == Tok::Minus {
            self.next();
            true
        } else {
            false
        };
        let t = self.next();
        let Tok::Num(n) = t.tok else {
            return Err(syntax(t.line, t.col, "expected an integer exponent"));
        };
        if !n.is_integer() || n.to_integer() > BigInt::from(u16::MAX) {
            return Err(syntax(t.line, t.col, "exponent must be a small integer"));
        }
        let e: u32 = n.to_integer().try_into().expect("checked range");
        if neg {
            let Some(r) = base.as_ratfunc() else {
                return Err(syntax(at.line, at.col, "negative powers need a rational function base"));
            };
            return Ok(ExpPoly::from_ratfunc(r.pow(-(e as i64))?));
        }
        Ok(base.pow(e))
    }

    fn base(&mut self) -> Result<ExpPoly> {
        let t = self.next();
        match t.tok {
            Tok::Num(v) => {
                if t.glued_i {
                    self.next();
                    return Ok(ExpPoly::constant(GaussianRational::new(BigRational::zero(), v)));
                }
                Ok(ExpPoly::constant(GaussianRational::real(v)))
            }
            Tok::I => Ok(ExpPoly::constant(GaussianRational::i())),
            Tok::Z => Ok(ExpPoly::from_poly(Poly::z())),
            Tok::Exp => {
                self.expect(Tok::LParen, "'(' after exp")?;
                let arg = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                let q = arg
                    .as_ratfunc()
                    .and_then(|r| r.as_poly().cloned())
                    .ok_or(Error::NonPolynomialExponent)?;
                if !q.constant_term().is_zero() {
                    return Err(Error::NonzeroConstantExponent { exponent: q.to_string() });
                }
                ExpPoly::exp(q)
            }
            Tok::LParen => {
                let v = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(v)
            }
            Tok::End => Err(syntax(t.line, t.col, "unexpected end of input")),
            _ => Err(syntax(t.line, t.col, "expected a number, 'z', 'i', 'exp' or '('")),
        }
    }
}

/// Parse to the narrowest of `Poly`, `RatFunc`, `ExpPoly`.
pub fn parse(text: &str) -> Result<Parsed> {
    let v = parse_expoly(text)?;
    Ok(match v.as_ratfunc() {
        Some(r) => match r.as_poly() {
            Some(p) => Parsed::Poly(p.clone()),
            None => Parsed::RatFunc(r),
        },
        None => Parsed::ExpPoly(v),
    })
}

pub fn parse_expoly(text: &str) -> Result<ExpPoly> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let v = p.expr()?;
    let t = p.peek();
    if t.tok != Tok::End {
        return Err(syntax(t.line, t.col, "unexpected trailing input"));
    }
    Ok(v)
}

pub fn parse_ratfunc(text: &str) -> Result<RatFunc> {
    parse_expoly(text)?
        .as_ratfunc()
        .ok_or_else(|| Error::InvalidInput(format!("'{text}' is not a rational function of z")))
}

pub fn parse_poly(text: &str) -> Result<Poly> {
    parse_ratfunc(text)?
        .as_poly()
        .cloned()
        .ok_or_else(|| Error::InvalidInput(format!("'{text}' is not a polynomial in z")))
}

pub fn parse_constant(text: &str) -> Result<GaussianRational> {
    let p = parse_poly(text)?;
    if !p.is_constant() {
        return Err(Error::InvalidInput(format!("'{text}' is not a constant")));
    }
    Ok(p.constant_term())
}

/// A rational number written as `a`, `a/b` or a decimal.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let c = parse_constant(text)?;
    if !c.is_real() {
        return Err(Error::InvalidInput(format!("'{text}' is not real")));
    }
    Ok(c.re)
}

impl std::str::FromStr for Poly {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_poly(s)
    }
}

impl std::str::FromStr for RatFunc {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_ratfunc(s)
    }
}

impl std::str::FromStr for ExpPoly {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_expoly(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    #[test]
    fn spec_examples() {
        let v = parse("exp(z) + exp(-z)").unwrap();
        match v {
            Parsed::ExpPoly(e) => assert_eq!(e.len(), 2),
            other => panic!("{other:?}"),
        }
        let v = parse("(3/4)*z^2 + (1+2i)*z").unwrap();
        let want = Poly::new(vec![
            GaussianRational::zero(),
            GaussianRational::from_ints(1, 2),
            GaussianRational::ratio(3, 4),
        ]);
        assert_eq!(v, Parsed::Poly(want));
        assert!(matches!(parse("exp(z+1)"), Err(Error::NonzeroConstantExponent { .. })));
        assert_eq!(parse("exp(1/z)").unwrap_err(), Error::NonPolynomialExponent);
    }

    #[test]
    fn types_and_values() {
        assert!(matches!(parse("(z+1)/z").unwrap(), Parsed::RatFunc(_)));
        assert!(matches!(parse("(z^2-1)/(z-1)").unwrap(), Parsed::Poly(_)));
        assert_eq!(parse_poly("z/2").unwrap(), Poly::z().scale_rat(&rat(1, 2)));
        assert_eq!(parse_poly("1.25").unwrap(), Poly::constant(GaussianRational::ratio(5, 4)));
        assert_eq!(parse_constant("-3i").unwrap(), GaussianRational::from_ints(0, -3));
        assert_eq!(parse_ratfunc("z^-2").unwrap(), RatFunc::new(Poly::one(), Poly::from_ints(&[0, 0, 1])).unwrap());
        assert_eq!(parse_rational("7/8").unwrap(), rat(7, 8));
    }

    #[test]
    fn errors_have_positions() {
        match parse("z +\n  * 2") {
            Err(Error::Syntax { line, col, .. }) => assert_eq!((line, col), (2, 3)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("z $"), Err(Error::Syntax { line: 1, col: 3, .. })));
        assert!(matches!(parse("(z"), Err(Error::Syntax { .. })));
        assert!(matches!(parse("1/exp(z)"), Err(Error::Syntax { .. })));
        assert_eq!(parse("1/(z-z)").unwrap_err(), Error::DivisionByZero);
    }

    #[test]
    fn printed_forms_reparse() {
        for s in [
            "(1+2*i)*z^2 + 3/4*z - 1",
            "-1/2*i*z - i",
            "(z + 1)/(z)",
            "((z + 1)/(z))*exp(z^2) + (-1/2)*exp(-z) + (3)",
        ] {
            let e = parse_expoly(s).unwrap();
            assert_eq!(parse_expoly(&e.to_string()).unwrap(), e, "{s} -> {e}");
        }
    }
}
