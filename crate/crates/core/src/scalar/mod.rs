//! Exact scalar backends shared by every other module.
//!
//! Two backends exist: [`Rational`] (arbitrary precision, canonical reduced
//! form) and [`Fp`] (residues modulo a runtime prime). Both implement the
//! [`Scalar`] trait, which is what the hypermatrix, product and elimination
//! code is generic over.

mod field;
mod rational;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use field::{field_arith, is_prime, FieldOp, Fp, Modulus, DEFAULT_PRIME};
pub use rational::{rat_arith, ArithOp, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u64, right: u64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("denominator divisible by modulus {modulus}; retry with another prime")]
    DenominatorDivisible { modulus: u64 },
    #[error("malformed scalar `{text}`: {reason}")]
    Parse { text: String, reason: &'static str },
}

/// Which arithmetic a hypermatrix (or a whole computation) lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind", content = "prime")]
pub enum Backend {
    Exact,
    ModP(u64),
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Backend::Exact => f.write_str("exact"),
            Backend::ModP(p) => write!(f, "modp {p}"),
        }
    }
}

/// Field element with exact arithmetic.
///
/// Elements carry enough context (the modulus, for prime fields) to create
/// zeros and ones of the same field; [`Scalar::Context`] is that context.
pub trait Scalar:
    Clone + PartialEq + Eq + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    type Context: Clone + PartialEq + Eq + fmt::Debug + Send + Sync + 'static;

    fn zero(ctx: &Self::Context) -> Self;
    fn one(ctx: &Self::Context) -> Self;
    fn from_i64(value: i64, ctx: &Self::Context) -> Self;
    /// Image of an exact rational in this field.
    fn from_rational(value: &Rational, ctx: &Self::Context) -> Result<Self, ScalarError>;
    fn backend(ctx: &Self::Context) -> Backend;
    /// Strict parse of the canonical text form.
    fn parse_canonical(text: &str, ctx: &Self::Context) -> Result<Self, ScalarError>;

    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Result<Self, ScalarError>;

    fn is_one(&self) -> bool;

    /// `self += a * b`
    fn add_product(&mut self, a: &Self, b: &Self) {
        *self = self.add(&a.mul(b));
    }
}
