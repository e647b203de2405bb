//! Textual syntax for polynomials and rational functions in `x`.
//!
//! Grammar: sums and differences of products and quotients of powers, with
//! integer literals, the variable `x`, parentheses, unary minus and
//! nonnegative integer exponents. Juxtaposition multiplies (`4x(1-x)`).

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::form::BinaryForm;
use crate::poly::ZPoly;
use crate::proj_line::{PrimeForm, ProjPoint};
use crate::{Error, Result};

/// `num / den` with integer polynomials, reduced: coprime, content of the
/// pair one, denominator leading coefficient positive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalFunction {
    pub num: ZPoly,
    pub den: ZPoly,
}

impl RationalFunction {
    fn poly(p: ZPoly) -> Self {
        RationalFunction { num: p, den: ZPoly::one() }
    }

    fn reduced(num: ZPoly, den: ZPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Parse("division by zero".into()));
        }
        if num.is_zero() {
            return Ok(Self::poly(ZPoly::zero()));
        }
        let g = num.gcd(&den).primitive_part();
        let mut num = num.div_exact(&g).expect("gcd divides");
        let mut den = den.div_exact(&g).expect("gcd divides");
        let mut c = {
            use num_integer::Integer;
            num.content().gcd(&den.content())
        };
        if den.leading().is_negative() {
            c = -c;
        }
        num = ZPoly::new(num.coeffs().iter().map(|a| a / &c).collect());
        den = ZPoly::new(den.coeffs().iter().map(|a| a / &c).collect());
        Ok(RationalFunction { num, den })
    }

    fn add(&self, o: &Self) -> Result<Self> {
        Self::reduced(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den)
    }

    fn sub(&self, o: &Self) -> Result<Self> {
        Self::reduced(&(&self.num * &o.den) - &(&o.num * &self.den), &self.den * &o.den)
    }

    fn mul(&self, o: &Self) -> Result<Self> {
        Self::reduced(&self.num * &o.num, &self.den * &o.den)
    }

    fn div(&self, o: &Self) -> Result<Self> {
        if o.num.is_zero() {
            return Err(Error::Parse("division by zero".into()));
        }
        Self::reduced(&self.num * &o.den, &self.den * &o.num)
    }

    fn pow(&self, e: u32) -> Result<Self> {
        Self::reduced(self.num.pow(e), self.den.pow(e))
    }

    /// `max(deg num, deg den)`.
    pub fn degree(&self) -> usize {
        self.num.deg().max(self.den.deg())
    }

    /// Homogenizes numerator and denominator to the common degree.
    pub fn to_forms(&self) -> (BinaryForm, BinaryForm) {
        let d = self.degree();
        (BinaryForm::homogenize(&self.num, d), BinaryForm::homogenize(&self.den, d))
    }
}

/// Parses a rational function of `x`.
pub fn parse_rational_function(s: &str) -> Result<RationalFunction> {
    let mut p = Parser { src: s, pos: 0 };
    let r = p.expr()?;
    p.skip_ws();
    if p.pos != s.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(r)
}

/// Parses a polynomial in `x` with integer coefficients.
pub fn parse_poly(s: &str) -> Result<ZPoly> {
    let r = parse_rational_function(s)?;
    if !r.den.is_constant() {
        return Err(Error::Parse(format!("{s:?} is not a polynomial")));
    }
    let d = r.den.leading();
    if !d.is_one() {
        return Err(Error::Parse(format!("{s:?} does not have integer coefficients")));
    }
    Ok(r.num)
}

/// Parses a prime divisor: a point (`inf`, `n`, `a/b`), or an irreducible
/// polynomial in `x` homogenized to its own degree.
pub fn parse_prime_form(s: &str) -> Result<PrimeForm> {
    if let Ok(p) = s.parse::<ProjPoint>() {
        return Ok(p.as_form());
    }
    let p = parse_poly(s)?;
    PrimeForm::new(BinaryForm::homogenize(&p, p.deg()))
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at offset {} in {:?}", self.pos, self.src))
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek_token(&mut self) -> Option<char> {
        self.skip_ws();
        self.peek()
    }

    fn expr(&mut self) -> Result<RationalFunction> {
        let mut acc = self.term()?;
        loop {
            match self.peek_token() {
                Some('+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?)?;
                }
                Some('-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RationalFunction> {
        let mut acc = self.unary()?;
        loop {
            match self.peek_token() {
                Some('*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.unary()?)?;
                }
                Some('/') => {
                    self.pos += 1;
                    acc = acc.div(&self.unary()?)?;
                }
                Some(c) if c == '(' || c == 'x' || c.is_ascii_digit() => {
                    acc = acc.mul(&self.power()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<RationalFunction> {
        match self.peek_token() {
            Some('-') => {
                self.pos += 1;
                let inner = self.unary()?;
                RationalFunction::poly(ZPoly::zero()).sub(&inner)
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RationalFunction> {
        let base = self.atom()?;
        if self.peek_token() == Some('^') {
            self.pos += 1;
            self.skip_ws();
            let digits = self.digits();
            if digits.is_empty() {
                return Err(self.err("expected exponent"));
            }
            let e: u32 = digits.parse().map_err(|_| self.err("exponent too large"))?;
            return base.pow(e);
        }
        Ok(base)
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.src[start..self.pos].to_string()
    }

    fn atom(&mut self) -> Result<RationalFunction> {
        match self.peek_token() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek_token() != Some(')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some('x') | Some('X') => {
                self.pos += 1;
                Ok(RationalFunction::poly(ZPoly::x()))
            }
            Some(c) if c.is_ascii_digit() => {
                let n: BigInt = self.digits().parse().expect("digits");
                Ok(RationalFunction::poly(ZPoly::constant(n)))
            }
            _ => Err(self.err("expected number, x or '('")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials() {
        assert_eq!(parse_poly("x^2-2").unwrap(), ZPoly::from_i64s(&[-2, 0, 1]));
        assert_eq!(parse_poly("(x^2-2)*(3-x^2)").unwrap(), ZPoly::from_i64s(&[-6, 0, 5, 0, -1]));
        assert_eq!(parse_poly("-(x^4+1)").unwrap(), ZPoly::from_i64s(&[-1, 0, 0, 0, -1]));
        assert_eq!(parse_poly("4x(1-x)").unwrap(), ZPoly::from_i64s(&[0, 4, -4]));
        assert!(parse_poly("x/2").is_err());
        assert!(parse_poly("1/x").is_err());
        assert!(parse_poly("x^").is_err());
        assert!(parse_poly("x)").is_err());
    }

    #[test]
    fn rational_functions() {
        let r = parse_rational_function("(x^2-1)^2/(4*x^2)").unwrap();
        assert_eq!(r.num, ZPoly::from_i64s(&[1, 0, -2, 0, 1]));
        assert_eq!(r.den, ZPoly::from_i64s(&[0, 0, 4]));
        let r = parse_rational_function("27*x^2*(1-x)/4").unwrap();
        assert_eq!(r.num, ZPoly::from_i64s(&[0, 0, 27, -27]));
        assert_eq!(r.den, ZPoly::from_i64s(&[4]));
        let r = parse_rational_function("(x^2 - 1)/(x - 1)").unwrap();
        assert_eq!(r.num, ZPoly::from_i64s(&[1, 1]));
        assert_eq!(r.den, ZPoly::one());
        let r = parse_rational_function("1/(1/x)").unwrap();
        assert_eq!(r.num, ZPoly::x());
        assert!(parse_rational_function("1/(x-x)").is_err());
        let (f, g) = parse_rational_function("1/x").unwrap().to_forms();
        assert_eq!((f.to_string(), g.to_string()), ("Y".into(), "X".into()));
    }

    #[test]
    fn prime_forms() {
        assert_eq!(parse_prime_form("inf").unwrap().to_string(), "Y");
        assert_eq!(parse_prime_form("0").unwrap().to_string(), "X");
        assert_eq!(parse_prime_form("-1").unwrap().to_string(), "X + Y");
        assert_eq!(parse_prime_form("x^2-2").unwrap().to_string(), "X^2 - 2*Y^2");
        assert_eq!(parse_prime_form("2/3").unwrap().to_string(), "3*X - 2*Y");
        assert!(parse_prime_form("x^2-1").is_err());
    }
}
