use alloc::string::ToString;
use core::fmt;

use crate::error::{Error, Result};
use crate::field::Field;

/// A point of `ℙ¹(F)` in normal form `(x : 1)` or `(1 : 0)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ProjPoint<F> {
    Finite(F),
    Infinity,
}

impl<F: Field> ProjPoint<F> {
    pub fn finite(x: F) -> Self {
        ProjPoint::Finite(x)
    }

    pub fn from_i64(n: i64) -> Self {
        ProjPoint::Finite(F::from_i64(n))
    }

    /// Normalize `(a : b)`.
    pub fn from_homogeneous(a: &F, b: &F) -> Result<Self> {
        if b.is_zero() {
            if a.is_zero() {
                return Err(Error::InvalidArgument(
                    "(0 : 0) is not a projective point".into(),
                ));
            }
            return Ok(ProjPoint::Infinity);
        }
        Ok(ProjPoint::Finite(a.try_div(b)?))
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, ProjPoint::Infinity)
    }

    pub fn as_finite(&self) -> Option<&F> {
        match self {
            ProjPoint::Finite(x) => Some(x),
            ProjPoint::Infinity => None,
        }
    }

    fn homogeneous(&self) -> (F, F) {
        match self {
            ProjPoint::Finite(x) => (x.clone(), F::one()),
            ProjPoint::Infinity => (F::one(), F::zero()),
        }
    }
}

impl<F: fmt::Display> fmt::Display for ProjPoint<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjPoint::Finite(x) => write!(f, "{x}"),
            ProjPoint::Infinity => f.write_str("inf"),
        }
    }
}

/// `(a b / c d)` with `ad − bc = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SL2Matrix<F> {
    a: F,
    b: F,
    c: F,
    d: F,
}

impl<F: Field> SL2Matrix<F> {
    pub fn new(a: F, b: F, c: F, d: F) -> Result<Self> {
        let det = a.try_mul(&d)?.try_sub(&b.try_mul(&c)?)?;
        if !det.is_one() {
            return Err(Error::InvalidArgument(alloc::format!(
                "determinant {det} is not 1"
            )));
        }
        Ok(SL2Matrix { a, b, c, d })
    }

    pub fn identity() -> Self {
        SL2Matrix {
            a: F::one(),
            b: F::zero(),
            c: F::zero(),
            d: F::one(),
        }
    }

    /// `ω = (0 −1 / 1 0)`.
    pub fn omega() -> Self {
        SL2Matrix {
            a: F::zero(),
            b: F::from_i64(-1),
            c: F::one(),
            d: F::zero(),
        }
    }

    /// `diag(s, s⁻¹)`.
    pub fn diagonal(s: &F) -> Result<Self> {
        Ok(SL2Matrix {
            a: s.clone(),
            b: F::zero(),
            c: F::zero(),
            d: s.try_inv()?,
        })
    }

    pub fn entries(&self) -> [&F; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self> {
        let dot = |p: &F, q: &F, r: &F, s: &F| -> Result<F> {
            Ok(p.try_mul(q)?.try_add(&r.try_mul(s)?)?)
        };
        Ok(SL2Matrix {
            a: dot(&self.a, &o.a, &self.b, &o.c)?,
            b: dot(&self.a, &o.b, &self.b, &o.d)?,
            c: dot(&self.c, &o.a, &self.d, &o.c)?,
            d: dot(&self.c, &o.b, &self.d, &o.d)?,
        })
    }

    pub fn inverse(&self) -> Self {
        SL2Matrix {
            a: self.d.clone(),
            b: self.b.negate(),
            c: self.c.negate(),
            d: self.a.clone(),
        }
    }

    /// Membership in the diagonal torus `T`.
    pub fn in_torus(&self) -> bool {
        self.b.is_zero() && self.c.is_zero()
    }

    /// Membership in the upper-triangular Borel `B`.
    pub fn in_borel(&self) -> bool {
        self.c.is_zero()
    }
}

/// `g·p = (a·x + b·y : c·x + d·y)`.
pub fn moebius_apply<F: Field>(g: &SL2Matrix<F>, p: &ProjPoint<F>) -> Result<ProjPoint<F>> {
    let (x, y) = p.homogeneous();
    let top = g.a.try_mul(&x)?.try_add(&g.b.try_mul(&y)?)?;
    let bottom = g.c.try_mul(&x)?.try_add(&g.d.try_mul(&y)?)?;
    ProjPoint::from_homogeneous(&top, &bottom)
}

/// `g ∈ SL₂(F)` with `g(p0) = ∞` and `g(p1) = 0`.
pub fn pair_witness<F: Field>(p0: &ProjPoint<F>, p1: &ProjPoint<F>) -> Result<SL2Matrix<F>> {
    if p0 == p1 {
        return Err(Error::InvalidArgument(alloc::format!(
            "pair witness needs distinct points, got {p0} twice"
        )));
    }
    let g = match (p0, p1) {
        (ProjPoint::Infinity, ProjPoint::Finite(q)) => SL2Matrix {
            a: F::one(),
            b: q.negate(),
            c: F::zero(),
            d: F::one(),
        },
        (ProjPoint::Finite(p), ProjPoint::Infinity) => SL2Matrix {
            a: F::zero(),
            b: F::from_i64(-1),
            c: F::one(),
            d: p.negate(),
        },
        (ProjPoint::Finite(p), ProjPoint::Finite(q)) => {
            let inv = q.try_sub(p)?.try_inv()?;
            SL2Matrix {
                a: inv.clone(),
                b: q.try_mul(&inv)?.negate(),
                c: F::one(),
                d: p.negate(),
            }
        }
        (ProjPoint::Infinity, ProjPoint::Infinity) => unreachable!(),
    };
    Ok(g)
}

/// `g ∈ SL₂(F)` with `g(p0) = 0`, `g(p1) = ∞`, `g(p2) = 1`, when one exists.
///
/// After moving `(p0, p1)` to `(0, ∞)` the third point sits at some `u`;
/// only `diag(s, s⁻¹)` with `s² = u⁻¹` finishes the job, so `u` must be a square
/// (the tower adjoins the root when `u > 0`).
pub fn triple_witness<F: Field>(
    p0: &ProjPoint<F>,
    p1: &ProjPoint<F>,
    p2: &ProjPoint<F>,
) -> Result<SL2Matrix<F>> {
    if p2 == p0 || p2 == p1 {
        return Err(Error::InvalidArgument(
            "triple witness needs distinct points".into(),
        ));
    }
    let g = pair_witness(p1, p0)?;
    let u = match moebius_apply(&g, p2)? {
        ProjPoint::Finite(u) => u,
        ProjPoint::Infinity => unreachable!(),
    };
    let target = u.try_inv()?;
    let root = match target.sqrt_in_field() {
        Some(r) => r,
        None if target.is_positive() => match target.sqrt_positive(&target.context()) {
            Ok((r, _)) => r,
            Err(_) => return Err(Error::NoSl2Witness(u.to_string())),
        },
        None => return Err(Error::NoSl2Witness(u.to_string())),
    };
    SL2Matrix::diagonal(&root)?.try_mul(&g)
}
