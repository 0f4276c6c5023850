use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, BigUint, Sign as BigSign};
use num_traits::{One, Signed, Zero};

use super::factor::odd_exponent_primes;
use super::{BackendKind, Field, FieldError, Sign, SquareClass};

/// Arbitrary-precision rational in lowest terms with positive denominator.
pub type Rational = num_rational::BigRational;

/// Square class of a nonzero rational: a sign bit and the primes of odd valuation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct QClass {
    negative: bool,
    primes: Vec<BigUint>,
}

impl QClass {
    pub fn new(negative: bool, mut primes: Vec<BigUint>) -> QClass {
        primes.sort();
        primes.dedup();
        QClass { negative, primes }
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn primes(&self) -> &[BigUint] {
        &self.primes
    }

    /// The squarefree integer representing this class.
    pub fn representative(&self) -> BigInt {
        let mag = self.primes.iter().fold(BigUint::one(), |acc, p| acc * p);
        let s = if self.negative {
            BigSign::Minus
        } else {
            BigSign::Plus
        };
        BigInt::from_biguint(s, mag)
    }
}

impl fmt::Display for QClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.representative())
    }
}

impl SquareClass for QClass {
    fn identity() -> Self {
        QClass::default()
    }

    fn minus_one() -> Self {
        QClass {
            negative: true,
            primes: Vec::new(),
        }
    }

    fn product(&self, other: &Self) -> Self {
        // symmetric difference of sorted prime lists
        let (a, b) = (&self.primes, &other.primes);
        let (mut i, mut j) = (0, 0);
        let mut primes = Vec::with_capacity(a.len() + b.len());
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                core::cmp::Ordering::Less => {
                    primes.push(a[i].clone());
                    i += 1;
                }
                core::cmp::Ordering::Greater => {
                    primes.push(b[j].clone());
                    j += 1;
                }
                core::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        primes.extend_from_slice(&a[i..]);
        primes.extend_from_slice(&b[j..]);
        QClass {
            negative: self.negative != other.negative,
            primes,
        }
    }

    fn is_identity(&self) -> bool {
        !self.negative && self.primes.is_empty()
    }
}

fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &r * &r == *n {
        Some(r)
    } else {
        None
    }
}

impl Field for Rational {
    type Class = QClass;
    type Context = ();

    const KIND: BackendKind = BackendKind::Rational;

    fn from_integer(n: BigInt) -> Self {
        Rational::from_integer(n)
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn try_add(&self, other: &Self) -> Result<Self, FieldError> {
        Ok(self + other)
    }

    fn try_mul(&self, other: &Self) -> Result<Self, FieldError> {
        Ok(self * other)
    }

    fn negate(&self) -> Self {
        -self
    }

    fn try_inv(&self) -> Result<Self, FieldError> {
        if Zero::is_zero(self) {
            Err(FieldError::DivisionByZero)
        } else {
            Ok(self.recip())
        }
    }

    fn sign(&self) -> Sign {
        match self.numer().sign() {
            BigSign::Minus => Sign::Negative,
            BigSign::NoSign => Sign::Zero,
            BigSign::Plus => Sign::Positive,
        }
    }

    fn square_class(&self) -> Result<QClass, FieldError> {
        if Zero::is_zero(self) {
            return Err(FieldError::ZeroClass);
        }
        let n = self.numer().magnitude() * self.denom().magnitude();
        Ok(QClass {
            negative: Signed::is_negative(self),
            primes: odd_exponent_primes(&n),
        })
    }

    fn sqrt_in_field(&self) -> Option<Self> {
        let n = exact_sqrt(self.numer())?;
        let d = exact_sqrt(self.denom())?;
        Some(Rational::new(n, d))
    }

    fn sqrt_positive(&self, _ctx: &()) -> Result<(Self, ()), FieldError> {
        if Field::sign(self) != Sign::Positive {
            return Err(FieldError::NotPositive(self.to_string()));
        }
        self.sqrt_in_field()
            .map(|r| (r, ()))
            .ok_or_else(|| FieldError::NotARationalSquare(self.to_string()))
    }

    fn context(&self) {}

    fn promote(&self, _ctx: &()) -> Result<Self, FieldError> {
        Ok(self.clone())
    }

    fn join_context(_a: &(), _b: &()) -> Result<(), FieldError> {
        Ok(())
    }

    fn is_one(&self) -> bool {
        One::is_one(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn square_class_of_eighteen_is_two() {
        let c = q(18, 1).square_class().unwrap();
        assert_eq!(c.representative(), BigInt::from(2));
        assert!(!c.is_negative());
        assert_eq!(
            q(-3, 12).square_class().unwrap().representative(),
            BigInt::from(-1)
        );
        assert_eq!(q(0, 1).square_class(), Err(FieldError::ZeroClass));
    }

    #[test]
    fn class_product_is_symmetric_difference() {
        let a = q(6, 1).square_class().unwrap();
        let b = q(-10, 1).square_class().unwrap();
        assert_eq!(a.product(&b), q(-60, 1).square_class().unwrap());
        assert!(a.product(&a).is_identity());
    }

    #[test]
    fn rational_roots() {
        assert_eq!(q(9, 4).sqrt_in_field(), Some(q(3, 2)));
        assert_eq!(q(2, 1).sqrt_in_field(), None);
        assert!(matches!(
            q(2, 1).sqrt_positive(&()),
            Err(FieldError::NotARationalSquare(_))
        ));
        assert!(matches!(
            q(-4, 1).sqrt_positive(&()),
            Err(FieldError::NotPositive(_))
        ));
        assert_eq!(q(0, 1).try_inv(), Err(FieldError::DivisionByZero));
    }
}
