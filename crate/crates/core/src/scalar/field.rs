use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::{Backend, Rational, Scalar, ScalarError};

/// 2^62 - 57, the largest prime below 2^62.
pub const DEFAULT_PRIME: u64 = 4_611_686_018_427_387_847;

/// Deterministic Miller-Rabin; the witness set is exact for all `u64`.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &WITNESSES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// A verified prime modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Modulus(u64);

impl Modulus {
    pub fn new(p: u64) -> Result<Self, ScalarError> {
        if is_prime(p) {
            Ok(Modulus(p))
        } else {
            Err(ScalarError::NotPrime(p))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

impl Default for Modulus {
    fn default() -> Self {
        Modulus(DEFAULT_PRIME)
    }
}

/// Residue modulo a prime; always in `[0, p)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    residue: u64,
    modulus: Modulus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    /// Inverse of the first operand; the second only has to share the modulus.
    Inv,
}

pub fn field_arith(a: &Fp, b: &Fp, op: FieldOp) -> Result<Fp, ScalarError> {
    if a.modulus != b.modulus {
        return Err(ScalarError::ModulusMismatch {
            left: a.modulus.0,
            right: b.modulus.0,
        });
    }
    Ok(match op {
        FieldOp::Add => Scalar::add(a, b),
        FieldOp::Sub => Scalar::sub(a, b),
        FieldOp::Mul => Scalar::mul(a, b),
        FieldOp::Inv => a.inv()?,
    })
}

impl Fp {
    pub fn new(value: u64, modulus: Modulus) -> Self {
        Fp {
            residue: value % modulus.0,
            modulus,
        }
    }

    pub fn from_signed(value: i64, modulus: Modulus) -> Self {
        let r = (value as i128).rem_euclid(modulus.0 as i128) as u64;
        Fp { residue: r, modulus }
    }

    pub fn from_bigint(value: &BigInt, modulus: Modulus) -> Self {
        let r = value.mod_floor(&BigInt::from(modulus.0));
        Fp {
            residue: r.to_u64().expect("residue below a u64 modulus"),
            modulus,
        }
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    pub fn modulus(&self) -> Modulus {
        self.modulus
    }

    pub fn pow(&self, exp: u64) -> Fp {
        Fp {
            residue: pow_mod(self.residue, exp, self.modulus.0),
            modulus: self.modulus,
        }
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.residue)
    }
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.residue, self.modulus.0)
    }
}

impl Scalar for Fp {
    type Context = Modulus;

    fn zero(ctx: &Modulus) -> Self {
        Fp::new(0, *ctx)
    }

    fn one(ctx: &Modulus) -> Self {
        Fp::new(1, *ctx)
    }

    fn from_i64(value: i64, ctx: &Modulus) -> Self {
        Fp::from_signed(value, *ctx)
    }

    fn from_rational(value: &Rational, ctx: &Modulus) -> Result<Self, ScalarError> {
        let den = Fp::from_bigint(value.denom(), *ctx);
        if den.residue == 0 {
            return Err(ScalarError::DenominatorDivisible { modulus: ctx.0 });
        }
        Ok(Fp::from_bigint(value.numer(), *ctx).mul(&den.inv()?))
    }

    fn backend(ctx: &Modulus) -> Backend {
        Backend::ModP(ctx.0)
    }

    fn parse_canonical(text: &str, ctx: &Modulus) -> Result<Self, ScalarError> {
        let err = |reason| ScalarError::Parse {
            text: text.to_string(),
            reason,
        };
        if text.is_empty() || !text.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err("expected a decimal residue"));
        }
        if text.len() > 1 && text.starts_with('0') {
            return Err(err("leading zero"));
        }
        let value: u64 = text.parse().map_err(|_| err("residue out of range"))?;
        if value >= ctx.0 {
            return Err(err("residue not reduced"));
        }
        Ok(Fp::new(value, *ctx))
    }

    fn is_zero(&self) -> bool {
        self.residue.is_zero()
    }

    fn is_one(&self) -> bool {
        self.residue == 1
    }

    fn add(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        let p = self.modulus.0;
        let s = self.residue as u128 + rhs.residue as u128;
        Fp {
            residue: (s % p as u128) as u64,
            modulus: self.modulus,
        }
    }

    fn sub(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        let p = self.modulus.0;
        let r = if self.residue >= rhs.residue {
            self.residue - rhs.residue
        } else {
            p - (rhs.residue - self.residue)
        };
        Fp {
            residue: r,
            modulus: self.modulus,
        }
    }

    fn mul(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        Fp {
            residue: mul_mod(self.residue, rhs.residue, self.modulus.0),
            modulus: self.modulus,
        }
    }

    fn neg(&self) -> Self {
        let r = if self.residue == 0 {
            0
        } else {
            self.modulus.0 - self.residue
        };
        Fp {
            residue: r,
            modulus: self.modulus,
        }
    }

    fn inv(&self) -> Result<Self, ScalarError> {
        if self.residue == 0 {
            return Err(ScalarError::ZeroInverse);
        }
        Ok(self.pow(self.modulus.0 - 2))
    }

    fn add_product(&mut self, a: &Self, b: &Self) {
        let p = self.modulus.0 as u128;
        let prod = a.residue as u128 * b.residue as u128 % p;
        self.residue = ((self.residue as u128 + prod) % p) as u64;
    }
}
