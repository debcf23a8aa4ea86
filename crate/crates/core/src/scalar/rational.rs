use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{Backend, Scalar, ScalarError};

/// Arbitrary-precision rational in canonical reduced form.
///
/// The denominator is always positive and coprime to the numerator, so
/// structural equality is value equality.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational(BigRational);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Applies `op` to two rationals. Only division can fail.
pub fn rat_arith(a: &Rational, b: &Rational, op: ArithOp) -> Result<Rational, ScalarError> {
    Ok(match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
        ArithOp::Div => a.checked_div(b)?,
    })
}

impl Rational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self, ScalarError> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Rational(BigRational::new(numer.into(), denom)))
    }

    pub fn from_integer(value: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(value.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn checked_div(&self, rhs: &Rational) -> Result<Rational, ScalarError> {
        if rhs.0.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Rational(&self.0 / &rhs.0))
    }

    pub fn recip(&self) -> Result<Rational, ScalarError> {
        if self.0.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Rational(self.0.recip()))
    }
}

impl From<i64> for Rational {
    fn from(value: i64) -> Self {
        Rational::from_integer(value)
    }
}

impl From<BigInt> for Rational {
    fn from(value: BigInt) -> Self {
        Rational::from_integer(value)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_err(text: &str, reason: &'static str) -> ScalarError {
    ScalarError::Parse {
        text: text.to_string(),
        reason,
    }
}

/// Digits without sign, no leading zeros (except "0" itself).
fn parse_digits(text: &str, full: &str) -> Result<BigInt, ScalarError> {
    if text.is_empty() {
        return Err(parse_err(full, "missing digits"));
    }
    if !text.bytes().all(|b| b.is_ascii_digit()) {
        return Err(parse_err(full, "unexpected character"));
    }
    if text.len() > 1 && text.starts_with('0') {
        return Err(parse_err(full, "leading zero"));
    }
    Ok(BigInt::parse_bytes(text.as_bytes(), 10).expect("validated decimal digits"))
}

impl FromStr for Rational {
    type Err = ScalarError;

    /// Accepts only the canonical form `p` or `p/q`: optional `-` on the
    /// numerator, `q > 1`, `gcd(p, q) = 1`, no `-0`, no whitespace.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let (negative, body) = match text.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, text),
        };
        let (num_text, den_text) = match body.split_once('/') {
            Some((n, d)) => (n, Some(d)),
            None => (body, None),
        };
        let mut numer = parse_digits(num_text, text)?;
        if negative {
            if numer.is_zero() {
                return Err(parse_err(text, "negative zero"));
            }
            numer = -numer;
        }
        let denom = match den_text {
            None => BigInt::one(),
            Some(d) => {
                let d = parse_digits(d, text)?;
                if d.is_zero() {
                    return Err(parse_err(text, "zero denominator"));
                }
                if d.is_one() {
                    return Err(parse_err(text, "unit denominator must be omitted"));
                }
                d
            }
        };
        let value = BigRational::new(numer.clone(), denom.clone());
        if value.numer() != &numer || value.denom() != &denom {
            return Err(parse_err(text, "not in lowest terms"));
        }
        Ok(Rational(value))
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl<'a> $trait<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl Scalar for Rational {
    type Context = ();

    fn zero(_: &()) -> Self {
        Rational::zero()
    }

    fn one(_: &()) -> Self {
        Rational::one()
    }

    fn from_i64(value: i64, _: &()) -> Self {
        Rational::from_integer(value)
    }

    fn from_rational(value: &Rational, _: &()) -> Result<Self, ScalarError> {
        Ok(value.clone())
    }

    fn backend(_: &()) -> Backend {
        Backend::Exact
    }

    fn parse_canonical(text: &str, _: &()) -> Result<Self, ScalarError> {
        text.parse()
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn is_one(&self) -> bool {
        self.0.is_one()
    }

    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn neg(&self) -> Self {
        -self
    }

    fn inv(&self) -> Result<Self, ScalarError> {
        self.recip()
    }

    fn add_product(&mut self, a: &Self, b: &Self) {
        if a.0.is_zero() || b.0.is_zero() {
            return;
        }
        // integer fast path avoids the gcd in BigRational's normalisation
        if self.0.is_integer() && a.0.is_integer() && b.0.is_integer() {
            let sum = self.0.numer() + a.0.numer() * b.0.numer();
            self.0 = BigRational::from_integer(sum);
        } else {
            self.0 = &self.0 + &a.0 * &b.0;
        }
    }
}

impl Rational {
    pub fn abs(&self) -> Rational {
        Rational(self.0.abs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn add_fractions() {
        assert_eq!(rat_arith(&q("1/2"), &q("1/3"), ArithOp::Add).unwrap(), q("5/6"));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(
            rat_arith(&q("3/4"), &Rational::zero(), ArithOp::Div),
            Err(ScalarError::DivisionByZero)
        );
        assert!(Rational::new(1, 0).is_err());
    }

    #[test]
    fn canonical_text() {
        assert_eq!(Rational::new(-14, 2).unwrap().to_string(), "-7");
        assert_eq!(Rational::new(6, -8).unwrap().to_string(), "-3/4");
        assert_eq!(Rational::zero().to_string(), "0");
    }

    #[test]
    fn rejects_noncanonical_text() {
        for bad in ["2/4", "3/1", "-0", "+3", "007", " 1", "1 ", "1/-2", "1/0", "", "-", "1/", "a"] {
            assert!(bad.parse::<Rational>().is_err(), "{bad:?} accepted");
        }
    }

    #[test]
    fn big_power_matches_repeated_addition() {
        // 155^9 built two ways: by multiplication through the type, and by
        // repeated addition on plain BigInts.
        let mut by_mul = Rational::one();
        for _ in 0..9 {
            by_mul = rat_arith(&by_mul, &Rational::from(155), ArithOp::Mul).unwrap();
        }
        let mut acc = BigInt::one();
        for _ in 0..9 {
            let mut next = BigInt::zero();
            for _ in 0..155 {
                next += &acc;
            }
            acc = next;
        }
        assert_eq!(by_mul, Rational::from_integer(acc.clone()));
        assert_eq!(acc.to_string().len(), 20);
        assert_eq!(rat_arith(&by_mul, &Rational::one(), ArithOp::Mul).unwrap(), by_mul);
        assert_eq!(by_mul.to_string(), acc.to_string());
    }
}
