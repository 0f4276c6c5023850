//! Exact ordered fields: the rationals and constructible-real quadratic towers.
//!
//! Everything downstream (group rings, relation modules, configurations,
//! Milnor symbols) is generic over [`Field`], so the same code runs over
//! `Q` and over towers `Q(√r₁, …, √r_k)`.

mod factor;
mod interval;
mod rational;
mod tower;

use core::fmt;

use num_bigint::BigInt;

pub use factor::{factorize, is_probable_prime, odd_exponent_primes, squarefree_decompose};
pub use rational::{QClass, Rational};
pub(crate) use tower::rational_to_f64;
pub use tower::{sqrt_positive_capped, TowerClass, TowerContext, TowerElement, DEFAULT_DEPTH_CAP};

/// Result of comparing an element with zero.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }

    pub fn times(self, other: Sign) -> Sign {
        match (self, other) {
            (Sign::Zero, _) | (_, Sign::Zero) => Sign::Zero,
            (a, b) if a == b => Sign::Positive,
            _ => Sign::Negative,
        }
    }
}

/// Which arithmetic backend a field type implements.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BackendKind {
    Rational,
    /// Real quadratically closed (on demand): every positive element gets a root.
    Tower,
}

impl BackendKind {
    pub fn name(self) -> &'static str {
        match self {
            BackendKind::Rational => "rational",
            BackendKind::Tower => "tower",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("square class of zero is undefined")]
    ZeroClass,
    #[error("elements live in incompatible tower contexts")]
    ContextMismatch,
    #[error("square root requires a positive argument, got {0}")]
    NotPositive(alloc::string::String),
    #[error("{0} is not a square in the rationals")]
    NotARationalSquare(alloc::string::String),
    #[error("tower depth cap {0} reached")]
    DepthCap(usize),
}

/// A square class `⟨x⟩ ∈ F^×/(F^×)²`, written multiplicatively.
pub trait SquareClass:
    Clone + Eq + Ord + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    fn identity() -> Self;
    fn minus_one() -> Self;
    fn product(&self, other: &Self) -> Self;
    fn is_identity(&self) -> bool;
}

/// Exact arithmetic in an ordered field.
///
/// Binary operations are fallible because tower elements from unrelated
/// contexts cannot be combined.
pub trait Field: Clone + Eq + Ord + fmt::Debug + fmt::Display + Send + Sync + 'static {
    type Class: SquareClass;
    /// Ambient state needed for square-root adjunction (unit for `Q`).
    type Context: Clone + fmt::Debug + Default + Send + Sync;

    const KIND: BackendKind;

    fn from_integer(n: BigInt) -> Self;

    fn from_ratio(num: i64, den: i64) -> Result<Self, FieldError> {
        Self::from_integer(BigInt::from(num)).try_div(&Self::from_integer(BigInt::from(den)))
    }

    fn is_zero(&self) -> bool;
    fn try_add(&self, other: &Self) -> Result<Self, FieldError>;
    fn try_mul(&self, other: &Self) -> Result<Self, FieldError>;
    fn negate(&self) -> Self;
    fn try_inv(&self) -> Result<Self, FieldError>;
    fn sign(&self) -> Sign;
    fn square_class(&self) -> Result<Self::Class, FieldError>;

    /// Non-negative square root inside the current field, if one exists.
    fn sqrt_in_field(&self) -> Option<Self>;

    /// Positive square root, extending the context when `self` is not already a square.
    fn sqrt_positive(&self, ctx: &Self::Context) -> Result<(Self, Self::Context), FieldError>;

    /// The context this element lives in.
    fn context(&self) -> Self::Context;

    /// Re-express `self` inside `ctx`, which must extend its own context.
    fn promote(&self, ctx: &Self::Context) -> Result<Self, FieldError>;

    /// Pick whichever of two contexts extends the other.
    fn join_context(a: &Self::Context, b: &Self::Context) -> Result<Self::Context, FieldError>;

    fn from_i64(n: i64) -> Self {
        Self::from_integer(BigInt::from(n))
    }

    fn one() -> Self {
        Self::from_i64(1)
    }

    fn zero() -> Self {
        Self::from_i64(0)
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn try_sub(&self, other: &Self) -> Result<Self, FieldError> {
        self.try_add(&other.negate())
    }

    fn try_div(&self, other: &Self) -> Result<Self, FieldError> {
        self.try_mul(&other.try_inv()?)
    }

    /// `1 − self`
    fn one_minus(&self) -> Result<Self, FieldError> {
        Self::one().try_sub(self)
    }

    fn is_positive(&self) -> bool {
        self.sign() == Sign::Positive
    }

    fn is_negative(&self) -> bool {
        self.sign() == Sign::Negative
    }

    fn abs(&self) -> Self {
        if self.is_negative() {
            self.negate()
        } else {
            self.clone()
        }
    }

    fn try_pow(&self, exp: i64) -> Result<Self, FieldError> {
        let base = if exp < 0 {
            self.try_inv()?
        } else {
            self.clone()
        };
        let mut acc = Self::one();
        let mut sq = base;
        let mut e = exp.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.try_mul(&sq)?;
            }
            e >>= 1;
            if e > 0 {
                sq = sq.try_mul(&sq)?;
            }
        }
        Ok(acc)
    }
}
