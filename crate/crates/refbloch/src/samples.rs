//! Seeded random inputs.
//!
//! Every stream is a ChaCha8 generator keyed by the run seed, with the
//! stream number separating independent consumers.

use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use refbloch_core::configurations::SL2Matrix;
use refbloch_core::expr::Expr;
use refbloch_core::field::{Field, Rational, TowerContext, TowerElement};

pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Nonzero `p/q` with `|p| ≤ bound`, `1 ≤ q ≤ bound`.
pub fn rational(r: &mut impl Rng, bound: i64) -> Rational {
    loop {
        let p = r.gen_range(-bound..=bound);
        if p != 0 {
            return Rational::new(p.into(), r.gen_range(1..=bound).into());
        }
    }
}

/// A rational outside `{0, 1}`.
pub fn rational_generic(r: &mut impl Rng, bound: i64) -> Rational {
    loop {
        let x = rational(r, bound);
        if !x.is_one() {
            return x;
        }
    }
}

/// A positive rational other than 1.
pub fn rational_positive(r: &mut impl Rng, bound: i64) -> Rational {
    loop {
        let x = rational(r, bound).abs();
        if !x.is_one() {
            return x;
        }
    }
}

const SMALL_PRIMES: [i64; 6] = [2, 3, 5, 7, 11, 13];

/// A tower of the given depth: prime radicands, or `a + b·√prev` for nested levels.
pub fn tower_context(r: &mut impl Rng, depth: usize) -> Arc<TowerContext> {
    let mut ctx = TowerContext::root();
    let mut primes: Vec<i64> = SMALL_PRIMES.to_vec();
    while ctx.depth() < depth {
        let radicand = if ctx.depth() > 0 && r.gen_bool(0.3) {
            let top = TowerElement::radical(&ctx, ctx.depth() - 1);
            let shift = TowerElement::from_i64(r.gen_range(2..6));
            shift.try_add(&top).expect("shared context")
        } else {
            let i = r.gen_range(0..primes.len());
            TowerElement::from_i64(primes.swap_remove(i))
        };
        match ctx.extend(&radicand, refbloch_core::field::DEFAULT_DEPTH_CAP) {
            Ok(c) => ctx = c,
            Err(_) => continue,
        }
    }
    ctx
}

/// Nonzero element of `ctx` with small rational coordinates.
pub fn tower_element(r: &mut impl Rng, ctx: &Arc<TowerContext>) -> TowerElement {
    let n = 1usize << ctx.depth();
    loop {
        let coeffs: Vec<Rational> = (0..n)
            .map(|_| {
                if r.gen_bool(0.5) {
                    Rational::new(r.gen_range(-5i64..=5).into(), r.gen_range(1i64..=3).into())
                } else {
                    Rational::from_integer(0.into())
                }
            })
            .collect();
        if let Some(x) = TowerElement::from_coeffs(ctx, coeffs) {
            if !x.is_zero() {
                return x;
            }
        }
    }
}

/// Tower element outside `{0, 1}`.
pub fn tower_generic(r: &mut impl Rng, ctx: &Arc<TowerContext>) -> TowerElement {
    loop {
        let x = tower_element(r, ctx);
        if !x.is_one() {
            return x;
        }
    }
}

/// `F`-valued sample of a rational, for backend-generic checks.
pub fn lift<F: Field>(q: &Rational) -> F {
    let e = Expr::Mul(vec![
        Expr::Int(q.numer().clone()),
        Expr::inv(Expr::Int(q.denom().clone())),
    ]);
    e.evaluate(&mut F::one().context())
        .expect("rational literal")
}

/// Product of random elementary matrices with small integer entries.
pub fn sl2<F: Field>(r: &mut impl Rng) -> SL2Matrix<F> {
    let mut g = SL2Matrix::identity();
    for _ in 0..r.gen_range(1..5) {
        let t = F::from_i64(r.gen_range(-3..=3));
        let step = match r.gen_range(0..3) {
            0 => SL2Matrix::new(F::one(), t, F::zero(), F::one()),
            1 => SL2Matrix::new(F::one(), F::zero(), t, F::one()),
            _ => Ok(SL2Matrix::omega()),
        }
        .expect("unimodular");
        g = g.try_mul(&step).expect("exact arithmetic");
    }
    g
}

/// Random `SL₂(ℚ)` element including torus scalings.
pub fn sl2_rational(r: &mut impl Rng) -> SL2Matrix<Rational> {
    let s = rational(r, 5);
    let d = SL2Matrix::diagonal(&s).expect("nonzero");
    sl2::<Rational>(r).try_mul(&d).expect("exact arithmetic")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<u32> = (0..4).map(|_| rng(7, 1).gen()).collect();
        let b: Vec<u32> = (0..4).map(|_| rng(7, 1).gen()).collect();
        assert_eq!(a, b);
        assert_ne!(rng(7, 1).gen::<u64>(), rng(7, 2).gen::<u64>());
    }

    #[test]
    fn towers_reach_the_requested_depth() {
        let mut r = rng(1, 0);
        for d in 0..=4 {
            assert_eq!(tower_context(&mut r, d).depth(), d);
        }
    }
}
