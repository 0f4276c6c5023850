//! Dyadic interval enclosures `[lo/2^p, hi/2^p]` used for exact sign refinement.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::Rational;

#[derive(Clone, Debug)]
pub(crate) struct Dyadic {
    pub lo: BigInt,
    pub hi: BigInt,
    pub prec: u32,
}

fn floor_div_pow2(n: &BigInt, bits: u32) -> BigInt {
    // arithmetic shift rounds toward -inf for BigInt
    n >> bits
}

fn ceil_div_pow2(n: &BigInt, bits: u32) -> BigInt {
    -((-n) >> bits)
}

impl Dyadic {
    pub fn exact_rational(q: &Rational, prec: u32) -> Dyadic {
        let scaled = q.numer() << prec;
        let (fl, rem) = scaled.div_mod_floor(q.denom());
        let hi = if rem.is_zero() { fl.clone() } else { &fl + 1 };
        Dyadic { lo: fl, hi, prec }
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        debug_assert_eq!(self.prec, other.prec);
        Dyadic {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
            prec: self.prec,
        }
    }

    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        let p = self.prec;
        let c = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let mut lo = c[0].clone();
        let mut hi = c[0].clone();
        for v in &c[1..] {
            if *v < lo {
                lo = v.clone();
            }
            if *v > hi {
                hi = v.clone();
            }
        }
        Dyadic {
            lo: floor_div_pow2(&lo, p),
            hi: ceil_div_pow2(&hi, p),
            prec: p,
        }
    }

    /// Enclosure of the square root of a non-negative quantity.
    pub fn sqrt(&self) -> Dyadic {
        let p = self.prec;
        let lo = if self.lo.is_negative() {
            BigInt::zero()
        } else {
            (&self.lo << p).sqrt()
        };
        let hi_sq = &self.hi << p;
        let mut hi = if hi_sq.is_negative() {
            BigInt::zero()
        } else {
            hi_sq.sqrt()
        };
        if &hi * &hi < hi_sq {
            hi += 1;
        }
        Dyadic { lo, hi, prec: p }
    }

    pub fn excludes_zero(&self) -> bool {
        self.lo.is_positive() || self.hi.is_negative()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_two_enclosure() {
        let two = Dyadic::exact_rational(&Rational::from_integer(2.into()), 64);
        let r = two.sqrt();
        let sq_lo = &r.lo * &r.lo;
        let sq_hi = &r.hi * &r.hi;
        let target = BigInt::from(2) << 128u32;
        assert!(sq_lo <= target && target <= sq_hi);
        assert!(&r.hi - &r.lo <= BigInt::from(1));
    }

    #[test]
    fn rounding_is_outward() {
        let third = Rational::new(1.into(), 3.into());
        let d = Dyadic::exact_rational(&third, 10);
        assert_eq!(&d.hi - &d.lo, BigInt::from(1));
        let neg = Dyadic::exact_rational(&(-third), 10);
        assert_eq!(neg.lo, -d.hi.clone());
    }
}
