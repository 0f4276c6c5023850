//! Constructible reals as elements of a quadratic tower `Q(√r₁)(√r₂)…(√r_k)`.
//!
//! An element of a depth-`k` tower is a dense vector of `2^k` rationals; bit
//! `i` of the index says whether the monomial contains `√r_{i+1}`. The top bit
//! splits the vector as `A + B·√r_k` with `A, B` in the depth-`k−1` tower, and
//! all arithmetic recurses on that split.
//!
//! Elements are always stored trimmed to the shallowest prefix context that
//! holds them, so two equal numbers built in compatible contexts compare
//! equal and "promotion" only needs a compatibility check.

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::factor::squarefree_decompose;
use super::interval::Dyadic;
use super::{BackendKind, Field, FieldError, Rational, Sign, SquareClass};

/// Depth limit applied when a root forces a new adjunction.
pub const DEFAULT_DEPTH_CAP: usize = 8;

type Coeffs = Vec<Rational>;

/// An immutable chain of adjoined square roots.
///
/// Extending a context yields a new one that shares this one as its parent.
#[derive(Default)]
pub struct TowerContext {
    parent: Option<Arc<TowerContext>>,
    radicand: Option<TowerElement>,
    // padded[i] is radicand i+1 as a vector of length 2^i
    padded: Vec<Arc<Coeffs>>,
}

impl fmt::Debug for TowerContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.radicands().iter().map(|r| r.to_string()))
            .finish()
    }
}

impl TowerContext {
    pub fn root() -> Arc<TowerContext> {
        Arc::new(TowerContext::default())
    }

    pub fn depth(&self) -> usize {
        self.padded.len()
    }

    /// Radicands from the bottom of the tower up.
    pub fn radicands(&self) -> Vec<TowerElement> {
        let mut out = Vec::with_capacity(self.depth());
        let mut cur = Some(self);
        while let Some(c) = cur {
            if let Some(r) = &c.radicand {
                out.push(r.clone());
            }
            cur = c.parent.as_deref();
        }
        out.reverse();
        out
    }

    fn ancestor(self: &Arc<Self>, depth: usize) -> Arc<TowerContext> {
        let mut cur = self.clone();
        while cur.depth() > depth {
            cur = cur.parent.clone().expect("depth > 0 has a parent");
        }
        cur
    }

    fn same_as(a: &Arc<TowerContext>, b: &Arc<TowerContext>) -> bool {
        if Arc::ptr_eq(a, b) {
            return true;
        }
        a.depth() == b.depth()
            && a.padded
                .iter()
                .zip(b.padded.iter())
                .all(|(x, y)| Arc::ptr_eq(x, y) || x == y)
    }

    /// `a` is a prefix of (or equal to) `b`.
    fn is_prefix(a: &Arc<TowerContext>, b: &Arc<TowerContext>) -> bool {
        a.depth() <= b.depth() && TowerContext::same_as(a, &b.ancestor(a.depth()))
    }

    fn join(a: &Arc<TowerContext>, b: &Arc<TowerContext>) -> Result<Arc<TowerContext>, FieldError> {
        let (small, big) = if a.depth() <= b.depth() {
            (a, b)
        } else {
            (b, a)
        };
        if TowerContext::is_prefix(small, big) {
            Ok(big.clone())
        } else {
            Err(FieldError::ContextMismatch)
        }
    }

    /// Adjoin `√radicand`. The radicand must be positive and not already a square.
    pub fn extend(
        self: &Arc<Self>,
        radicand: &TowerElement,
        cap: usize,
    ) -> Result<Arc<TowerContext>, FieldError> {
        if !TowerContext::is_prefix(&radicand.ctx, self) {
            return Err(FieldError::ContextMismatch);
        }
        if radicand.sign() != Sign::Positive {
            return Err(FieldError::NotPositive(radicand.to_string()));
        }
        if self.depth() >= cap {
            return Err(FieldError::DepthCap(cap));
        }
        let padded = radicand.padded_to(self.depth());
        if sqrt_rec(&padded, &self.padded).is_some() {
            return Err(FieldError::NotPositive(alloc::format!(
                "{} is already a square",
                radicand
            )));
        }
        let mut levels = self.padded.clone();
        levels.push(Arc::new(padded));
        Ok(Arc::new(TowerContext {
            parent: Some(self.clone()),
            radicand: Some(radicand.clone()),
            padded: levels,
        }))
    }

    fn cmp_levels(&self, other: &TowerContext) -> Ordering {
        for (x, y) in self.padded.iter().zip(other.padded.iter()) {
            if Arc::ptr_eq(x, y) {
                continue;
            }
            match x.as_slice().cmp(y.as_slice()) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        self.depth().cmp(&other.depth())
    }
}

/// Square class in a real quadratically closed field: only the sign survives.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct TowerClass {
    negative: bool,
}

impl TowerClass {
    pub fn positive() -> TowerClass {
        TowerClass { negative: false }
    }

    pub fn negative() -> TowerClass {
        TowerClass { negative: true }
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }
}

impl fmt::Display for TowerClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.negative { "<-1>" } else { "<1>" })
    }
}

impl SquareClass for TowerClass {
    fn identity() -> Self {
        TowerClass::positive()
    }

    fn minus_one() -> Self {
        TowerClass::negative()
    }

    fn product(&self, other: &Self) -> Self {
        TowerClass {
            negative: self.negative != other.negative,
        }
    }

    fn is_identity(&self) -> bool {
        !self.negative
    }
}

/// An exact constructible real number.
#[derive(Clone)]
pub struct TowerElement {
    ctx: Arc<TowerContext>,
    coeffs: Coeffs,
}

// ---- coefficient-vector arithmetic -------------------------------------------------

fn qzero() -> Rational {
    <Rational as Zero>::zero()
}

fn is_zero_vec(x: &[Rational]) -> bool {
    x.iter().all(Zero::is_zero)
}

fn add_vec(x: &[Rational], y: &[Rational]) -> Coeffs {
    x.iter().zip(y).map(|(a, b)| a + b).collect()
}

fn sub_vec(x: &[Rational], y: &[Rational]) -> Coeffs {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}

fn scale_vec(x: &[Rational], s: &Rational) -> Coeffs {
    x.iter().map(|a| a * s).collect()
}

fn concat(lo: Coeffs, hi: Coeffs) -> Coeffs {
    let mut v = lo;
    v.extend(hi);
    v
}

fn mul_rec(x: &[Rational], y: &[Rational], rads: &[Arc<Coeffs>]) -> Coeffs {
    let n = x.len();
    if n == 1 {
        return alloc::vec![&x[0] * &y[0]];
    }
    let h = n / 2;
    let sub = &rads[..rads.len() - 1];
    let r = &rads[rads.len() - 1];
    let (a, b) = x.split_at(h);
    let (c, d) = y.split_at(h);
    let b_zero = is_zero_vec(b);
    let d_zero = is_zero_vec(d);
    if b_zero && d_zero {
        return concat(mul_rec(a, c, sub), alloc::vec![qzero(); h]);
    }
    if b_zero {
        return concat(mul_rec(a, c, sub), mul_rec(a, d, sub));
    }
    if d_zero {
        return concat(mul_rec(a, c, sub), mul_rec(b, c, sub));
    }
    let ac = mul_rec(a, c, sub);
    let bd = mul_rec(b, d, sub);
    let cross = mul_rec(&add_vec(a, b), &add_vec(c, d), sub);
    let lo = add_vec(&ac, &mul_rec(&bd, r, sub));
    let hi = sub_vec(&sub_vec(&cross, &ac), &bd);
    concat(lo, hi)
}

fn inv_rec(x: &[Rational], rads: &[Arc<Coeffs>]) -> Option<Coeffs> {
    let n = x.len();
    if n == 1 {
        return if Zero::is_zero(&x[0]) {
            None
        } else {
            Some(alloc::vec![x[0].recip()])
        };
    }
    let h = n / 2;
    let sub = &rads[..rads.len() - 1];
    let r = &rads[rads.len() - 1];
    let (a, b) = x.split_at(h);
    if is_zero_vec(b) {
        return inv_rec(a, sub).map(|ai| concat(ai, alloc::vec![qzero(); h]));
    }
    // (A + B√r)⁻¹ = (A − B√r)/(A² − B²r)
    let norm = sub_vec(&mul_rec(a, a, sub), &mul_rec(&mul_rec(b, b, sub), r, sub));
    let ni = inv_rec(&norm, sub)?;
    let lo = mul_rec(a, &ni, sub);
    let hi: Coeffs = mul_rec(b, &ni, sub).into_iter().map(|c| -c).collect();
    Some(concat(lo, hi))
}

fn exact_rational_sqrt(q: &Rational) -> Option<Rational> {
    if Signed::is_negative(q) {
        return None;
    }
    <Rational as Field>::sqrt_in_field(q)
}

/// Some square root of `x` in the tower described by `rads`, if one exists.
///
/// Writes the root as `a + b√r` and solves `a² + b²r = A`, `2ab = B` in the
/// subfield; the descent is complete for quadratic towers.
fn sqrt_rec(x: &[Rational], rads: &[Arc<Coeffs>]) -> Option<Coeffs> {
    let n = x.len();
    if n == 1 {
        return exact_rational_sqrt(&x[0]).map(|r| alloc::vec![r]);
    }
    if is_zero_vec(x) {
        return Some(alloc::vec![qzero(); n]);
    }
    let h = n / 2;
    let sub = &rads[..rads.len() - 1];
    let r = &rads[rads.len() - 1];
    let (a, b) = x.split_at(h);
    let zeros = || alloc::vec![qzero(); h];
    if is_zero_vec(b) {
        if let Some(root) = sqrt_rec(a, sub) {
            return Some(concat(root, zeros()));
        }
        let q = mul_rec(a, &inv_rec(r, sub)?, sub);
        return sqrt_rec(&q, sub).map(|root| concat(zeros(), root));
    }
    let norm = sub_vec(&mul_rec(a, a, sub), &mul_rec(&mul_rec(b, b, sub), r, sub));
    let nr = sqrt_rec(&norm, sub)?;
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    for cand in [add_vec(a, &nr), sub_vec(a, &nr)] {
        let t = scale_vec(&cand, &half);
        if let Some(root_a) = sqrt_rec(&t, sub) {
            if is_zero_vec(&root_a) {
                continue;
            }
            let inv2a = inv_rec(
                &scale_vec(&root_a, &Rational::from_integer(BigInt::from(2))),
                sub,
            )?;
            let root_b = mul_rec(b, &inv2a, sub);
            return Some(concat(root_a, root_b));
        }
    }
    None
}

fn interval_rec(x: &[Rational], rad_roots: &[Dyadic], prec: u32) -> Dyadic {
    if x.len() == 1 {
        return Dyadic::exact_rational(&x[0], prec);
    }
    let h = x.len() / 2;
    let (a, b) = x.split_at(h);
    let sub = &rad_roots[..rad_roots.len() - 1];
    let ia = interval_rec(a, sub, prec);
    if is_zero_vec(b) {
        return ia;
    }
    let ib = interval_rec(b, sub, prec);
    ia.add(&ib.mul(&rad_roots[rad_roots.len() - 1]))
}

fn radical_intervals(rads: &[Arc<Coeffs>], prec: u32) -> Vec<Dyadic> {
    let mut roots: Vec<Dyadic> = Vec::with_capacity(rads.len());
    for r in rads {
        let ir = interval_rec(r, &roots, prec);
        roots.push(ir.sqrt());
    }
    roots
}

fn norm_rec(x: &[Rational], rads: &[Arc<Coeffs>]) -> Rational {
    if x.len() == 1 {
        return x[0].clone();
    }
    let h = x.len() / 2;
    let sub = &rads[..rads.len() - 1];
    let r = &rads[rads.len() - 1];
    let (a, b) = x.split_at(h);
    let rel = sub_vec(&mul_rec(a, a, sub), &mul_rec(&mul_rec(b, b, sub), r, sub));
    norm_rec(&rel, sub)
}

// ---- elements ----------------------------------------------------------------------

impl TowerElement {
    fn build(ctx: Arc<TowerContext>, coeffs: Coeffs) -> TowerElement {
        debug_assert_eq!(coeffs.len(), 1 << ctx.depth());
        let top = coeffs.iter().rposition(|c| !Zero::is_zero(c)).unwrap_or(0);
        let depth = (usize::BITS - top.leading_zeros()) as usize;
        let mut coeffs = coeffs;
        coeffs.truncate(1 << depth);
        let ctx = if depth == ctx.depth() {
            ctx
        } else {
            ctx.ancestor(depth)
        };
        TowerElement { ctx, coeffs }
    }

    pub fn from_rational(q: Rational) -> TowerElement {
        TowerElement {
            ctx: TowerContext::root(),
            coeffs: alloc::vec![q],
        }
    }

    /// `√r_{index+1}` of `ctx` (indices count from the bottom, starting at 0).
    pub fn radical(ctx: &Arc<TowerContext>, index: usize) -> TowerElement {
        assert!(index < ctx.depth(), "radical index out of range");
        let c = ctx.ancestor(index + 1);
        let mut coeffs = alloc::vec![qzero(); 1 << (index + 1)];
        coeffs[1 << index] = <Rational as One>::one();
        TowerElement { ctx: c, coeffs }
    }

    /// Build from a raw coefficient vector over the monomials of `ctx`.
    pub fn from_coeffs(ctx: &Arc<TowerContext>, coeffs: Vec<Rational>) -> Option<TowerElement> {
        if coeffs.len() != 1 << ctx.depth() {
            return None;
        }
        Some(TowerElement::build(ctx.clone(), coeffs))
    }

    pub fn context_ref(&self) -> &Arc<TowerContext> {
        &self.ctx
    }

    /// Depth of the shallowest context holding this element.
    pub fn depth(&self) -> usize {
        self.ctx.depth()
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coeffs
    }

    /// The rational value, if the element has no radical part.
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.coeffs.len() == 1 {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    fn padded_to(&self, depth: usize) -> Coeffs {
        let mut v = self.coeffs.clone();
        v.resize(1 << depth, qzero());
        v
    }

    fn binary(
        &self,
        other: &Self,
        op: impl FnOnce(&[Rational], &[Rational], &[Arc<Coeffs>]) -> Option<Coeffs>,
    ) -> Result<TowerElement, FieldError> {
        let ctx = TowerContext::join(&self.ctx, &other.ctx)?;
        let d = ctx.depth();
        let out = op(&self.padded_to(d), &other.padded_to(d), &ctx.padded)
            .ok_or(FieldError::DivisionByZero)?;
        Ok(TowerElement::build(ctx, out))
    }

    /// `N_{K/Q}` of the element through every layer of the tower.
    pub fn absolute_norm(&self) -> Rational {
        norm_rec(&self.coeffs, &self.ctx.padded)
    }

    /// Absolute norm computed in the larger context `ctx`.
    pub fn absolute_norm_in(&self, ctx: &Arc<TowerContext>) -> Result<Rational, FieldError> {
        if !TowerContext::is_prefix(&self.ctx, ctx) {
            return Err(FieldError::ContextMismatch);
        }
        Ok(norm_rec(&self.padded_to(ctx.depth()), &ctx.padded))
    }

    /// Interval enclosure with `prec` fractional bits, as rational endpoints.
    pub fn enclosure(&self, prec: u32) -> (Rational, Rational) {
        let roots = radical_intervals(&self.ctx.padded, prec);
        let iv = interval_rec(&self.coeffs, &roots, prec);
        let den = BigInt::one() << prec;
        (Rational::new(iv.lo, den.clone()), Rational::new(iv.hi, den))
    }

    /// Floating-point approximation; only ever used to propose candidates that are then checked exactly.
    pub fn approx_f64(&self) -> f64 {
        let (lo, hi) = self.enclosure(96);
        let mid = (lo + hi) / Rational::from_integer(BigInt::from(2));
        rational_to_f64(&mid)
    }

    /// Greatest rational `c > 0` with `self / c` having coprime integer coefficients.
    fn content(&self) -> Rational {
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in self.coeffs.iter().filter(|c| !Zero::is_zero(*c)) {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        Rational::new(num, den)
    }
}

pub(crate) fn rational_to_f64(q: &Rational) -> f64 {
    // scale to keep both parts inside f64 range
    let nb = q.numer().bits() as i64;
    let db = q.denom().bits() as i64;
    let shift_n = (nb - 60).max(0) as u32;
    let shift_d = (db - 60).max(0) as u32;
    let n = (q.numer() >> shift_n).to_f64().unwrap_or(0.0);
    let d = (q.denom() >> shift_d).to_f64().unwrap_or(1.0);
    let e = shift_n as i32 - shift_d as i32;
    (n / d) * libm::pow(2.0, e as f64)
}

impl PartialEq for TowerElement {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && TowerContext::same_as(&self.ctx, &other.ctx)
    }
}

impl Eq for TowerElement {}

impl PartialOrd for TowerElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TowerElement {
    // structural order (depth, coefficients, context); not the field order
    fn cmp(&self, other: &Self) -> Ordering {
        self.depth()
            .cmp(&other.depth())
            .then_with(|| self.coeffs.cmp(&other.coeffs))
            .then_with(|| self.ctx.cmp_levels(&other.ctx))
    }
}

impl fmt::Debug for TowerElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TowerElement({})", self)
    }
}

fn radical_name(r: &TowerElement) -> String {
    alloc::format!("sqrt({})", r)
}

impl fmt::Display for TowerElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rads = self.ctx.radicands();
        let mut first = true;
        for (idx, c) in self.coeffs.iter().enumerate() {
            if Zero::is_zero(c) {
                continue;
            }
            let mut mono: Vec<String> = Vec::new();
            for (bit, r) in rads.iter().enumerate() {
                if idx >> bit & 1 == 1 {
                    mono.push(radical_name(r));
                }
            }
            let neg = Signed::is_negative(c);
            let mag = Signed::abs(c);
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            if mono.is_empty() {
                write!(f, "{}", mag)?;
            } else {
                if !One::is_one(&mag) {
                    write!(f, "{}*", mag)?;
                }
                f.write_str(&mono.join("*"))?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl From<Rational> for TowerElement {
    fn from(q: Rational) -> Self {
        TowerElement::from_rational(q)
    }
}

impl Field for TowerElement {
    type Class = TowerClass;
    type Context = Arc<TowerContext>;

    const KIND: BackendKind = BackendKind::Tower;

    fn from_integer(n: BigInt) -> Self {
        TowerElement::from_rational(Rational::from_integer(n))
    }

    fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && Zero::is_zero(&self.coeffs[0])
    }

    fn try_add(&self, other: &Self) -> Result<Self, FieldError> {
        self.binary(other, |x, y, _| Some(add_vec(x, y)))
    }

    fn try_mul(&self, other: &Self) -> Result<Self, FieldError> {
        self.binary(other, |x, y, rads| Some(mul_rec(x, y, rads)))
    }

    fn negate(&self) -> Self {
        TowerElement {
            ctx: self.ctx.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    fn try_inv(&self) -> Result<Self, FieldError> {
        let out = inv_rec(&self.coeffs, &self.ctx.padded).ok_or(FieldError::DivisionByZero)?;
        Ok(TowerElement::build(self.ctx.clone(), out))
    }

    fn try_div(&self, other: &Self) -> Result<Self, FieldError> {
        self.binary(other, |x, y, rads| {
            inv_rec(y, rads).map(|yi| mul_rec(x, &yi, rads))
        })
    }

    fn sign(&self) -> Sign {
        if self.is_zero() {
            return Sign::Zero;
        }
        if let Some(q) = self.as_rational() {
            return q.sign_of();
        }
        // nonzero, so refinement terminates
        let mut prec = 64u32;
        loop {
            let roots = radical_intervals(&self.ctx.padded, prec);
            let iv = interval_rec(&self.coeffs, &roots, prec);
            if iv.lo.is_positive() {
                return Sign::Positive;
            }
            if iv.hi.is_negative() {
                return Sign::Negative;
            }
            debug_assert!(!iv.excludes_zero());
            prec *= 2;
        }
    }

    fn square_class(&self) -> Result<TowerClass, FieldError> {
        match self.sign() {
            Sign::Zero => Err(FieldError::ZeroClass),
            Sign::Negative => Ok(TowerClass::negative()),
            Sign::Positive => Ok(TowerClass::positive()),
        }
    }

    fn sqrt_in_field(&self) -> Option<Self> {
        if self.sign() == Sign::Negative {
            return None;
        }
        let root = sqrt_rec(&self.coeffs, &self.ctx.padded)?;
        let root = TowerElement::build(self.ctx.clone(), root);
        Some(if root.sign() == Sign::Negative {
            root.negate()
        } else {
            root
        })
    }

    fn sqrt_positive(
        &self,
        ctx: &Arc<TowerContext>,
    ) -> Result<(Self, Arc<TowerContext>), FieldError> {
        sqrt_positive_capped(self, ctx, DEFAULT_DEPTH_CAP)
    }

    fn context(&self) -> Arc<TowerContext> {
        self.ctx.clone()
    }

    fn promote(&self, ctx: &Arc<TowerContext>) -> Result<Self, FieldError> {
        if TowerContext::is_prefix(&self.ctx, ctx) {
            Ok(self.clone())
        } else {
            Err(FieldError::ContextMismatch)
        }
    }

    fn join_context(
        a: &Arc<TowerContext>,
        b: &Arc<TowerContext>,
    ) -> Result<Arc<TowerContext>, FieldError> {
        TowerContext::join(a, b)
    }
}

trait RationalSign {
    fn sign_of(&self) -> Sign;
}

impl RationalSign for Rational {
    fn sign_of(&self) -> Sign {
        <Rational as Field>::sign(self)
    }
}

/// Positive square root of `x` inside (an extension of) `ctx`.
///
/// If `x` is already a square the context comes back unchanged; otherwise one
/// radicand is adjoined after dividing out the square part of its rational
/// content (so `√8` becomes `2·√2`).
pub fn sqrt_positive_capped(
    x: &TowerElement,
    ctx: &Arc<TowerContext>,
    cap: usize,
) -> Result<(TowerElement, Arc<TowerContext>), FieldError> {
    let ctx = TowerContext::join(&x.ctx, ctx)?;
    if x.sign() != Sign::Positive {
        return Err(FieldError::NotPositive(x.to_string()));
    }
    let d = ctx.depth();
    if let Some(root) = sqrt_rec(&x.padded_to(d), &ctx.padded) {
        let root = TowerElement::build(ctx.clone(), root);
        let root = if root.sign() == Sign::Negative {
            root.negate()
        } else {
            root
        };
        return Ok((root, ctx));
    }
    if d >= cap {
        return Err(FieldError::DepthCap(cap));
    }
    let content = x.content();
    let nd: BigUint = content.numer().magnitude() * content.denom().magnitude();
    let (_, t_nd) = squarefree_decompose(&nd);
    let t = Rational::new(BigInt::from(t_nd), content.denom().clone());
    let t_sq = &t * &t;
    let radicand = TowerElement::build(x.ctx.clone(), x.coeffs.iter().map(|c| c / &t_sq).collect());
    let ext = ctx.extend(&radicand, cap)?;
    let mut coeffs = alloc::vec![qzero(); 1 << (d + 1)];
    coeffs[1 << d] = t;
    Ok((TowerElement::build(ext.clone(), coeffs), ext))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(n: i64) -> TowerElement {
        TowerElement::from_integer(BigInt::from(n))
    }

    fn root_of(n: i64, ctx: &Arc<TowerContext>) -> (TowerElement, Arc<TowerContext>) {
        int(n).sqrt_positive(ctx).unwrap()
    }

    #[test]
    fn sqrt_two_squared_is_two() {
        let (r2, ctx) = root_of(2, &TowerContext::root());
        assert_eq!(ctx.depth(), 1);
        assert_eq!(r2.try_mul(&r2).unwrap(), int(2));
    }

    #[test]
    fn expand_sum_of_roots_squared() {
        let (r2, c) = root_of(2, &TowerContext::root());
        let (r3, c) = root_of(3, &c);
        let s = r2.try_add(&r3).unwrap();
        let sq = s.try_mul(&s).unwrap();
        let (r6, c2) = root_of(6, &c);
        // √6 is already √2·√3, no new radicand
        assert_eq!(c2.depth(), 2);
        let expected = int(5).try_add(&int(2).try_mul(&r6).unwrap()).unwrap();
        assert_eq!(sq, expected);
        assert_eq!(sq.coefficients()[0], Rational::from_integer(5.into()));
        assert_eq!(sq.coefficients()[3], Rational::from_integer(2.into()));
    }

    #[test]
    fn nested_radical_sign_zero() {
        let (r2, c) = root_of(2, &TowerContext::root());
        let (r3, c) = root_of(3, &c);
        let inner = int(5)
            .try_add(&int(2).try_mul(&r2.try_mul(&r3).unwrap()).unwrap())
            .unwrap();
        let (nested, c2) = inner.sqrt_positive(&c).unwrap();
        assert_eq!(c2.depth(), 2, "5+2√6 is a square once √2, √3 exist");
        let diff = r2.try_add(&r3).unwrap().try_sub(&nested).unwrap();
        assert_eq!(diff.sign(), Sign::Zero);
    }

    #[test]
    fn signs() {
        let (r2, _) = root_of(2, &TowerContext::root());
        assert_eq!(int(-1).sign(), Sign::Negative);
        assert_eq!(r2.try_sub(&int(1)).unwrap().sign(), Sign::Positive);
        assert_eq!(int(1).try_sub(&r2).unwrap().sign(), Sign::Negative);
        // 99/70 is a very close rational approximation of √2
        let close = r2
            .try_sub(&TowerElement::from_ratio(99, 70).unwrap())
            .unwrap();
        assert_eq!(close.sign(), Sign::Negative);
    }

    #[test]
    fn inverse_and_zero() {
        let (r2, c) = root_of(2, &TowerContext::root());
        let (r3, _) = root_of(3, &c);
        let x = int(1).try_add(&r2).unwrap().try_add(&r3).unwrap();
        let xi = x.try_inv().unwrap();
        assert_eq!(x.try_mul(&xi).unwrap(), int(1));
        assert_eq!(int(0).try_inv(), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn radicands_are_normalized() {
        let (r8, c) = root_of(8, &TowerContext::root());
        assert_eq!(c.radicands(), alloc::vec![int(2)]);
        assert_eq!(r8.coefficients()[1], Rational::from_integer(2.into()));
        let (half, c) = TowerElement::from_ratio(1, 2)
            .unwrap()
            .sqrt_positive(&TowerContext::root())
            .unwrap();
        assert_eq!(c.radicands(), alloc::vec![int(2)]);
        assert_eq!(
            half.try_mul(&half).unwrap(),
            TowerElement::from_ratio(1, 2).unwrap()
        );
    }

    #[test]
    fn square_roots_stay_in_context() {
        let (_, c) = root_of(2, &TowerContext::root());
        let (four, c2) = root_of(4, &c);
        assert_eq!(four, int(2));
        assert!(Arc::ptr_eq(&c, &c2));
        assert!(matches!(
            int(-2).sqrt_positive(&c),
            Err(FieldError::NotPositive(_))
        ));
    }

    #[test]
    fn unrelated_contexts_do_not_mix() {
        let (r2, _) = root_of(2, &TowerContext::root());
        let (r3, _) = root_of(3, &TowerContext::root());
        assert_eq!(r2.try_add(&r3), Err(FieldError::ContextMismatch));
    }

    #[test]
    fn depth_cap_is_enforced() {
        let mut ctx = TowerContext::root();
        for p in [2, 3, 5] {
            ctx = root_of(p, &ctx).1;
        }
        let err = sqrt_positive_capped(&int(7), &ctx, 3).unwrap_err();
        assert_eq!(err, FieldError::DepthCap(3));
    }

    #[test]
    fn display_round_shape() {
        let (r2, c) = root_of(2, &TowerContext::root());
        let (r3, _) = root_of(3, &c);
        let x = int(1)
            .try_sub(&r2.try_mul(&r3).unwrap().try_mul(&int(3)).unwrap())
            .unwrap();
        assert_eq!(alloc::format!("{}", x), "1 - 3*sqrt(2)*sqrt(3)");
    }

    #[test]
    fn norm_of_conjugate_pair() {
        let (r2, _) = root_of(2, &TowerContext::root());
        let x = int(1).try_add(&r2).unwrap();
        assert_eq!(x.absolute_norm(), Rational::from_integer((-1).into()));
    }
}
