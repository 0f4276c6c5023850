//! Integer factorization for rational square classes.
//!
//! Trial division by small primes, then Miller–Rabin and Brent's variant of
//! Pollard rho for whatever cofactor remains.

use alloc::vec::Vec;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

const TRIAL_BOUND: u32 = 5000;

fn small_primes() -> Vec<u32> {
    let n = TRIAL_BOUND as usize;
    let mut sieve = alloc::vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    (0..=n).filter(|&k| sieve[k]).map(|k| k as u32).collect()
}

const WITNESSES: [u32; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

/// Miller–Rabin with a fixed witness set (deterministic below 3.3·10²⁴).
pub fn is_probable_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if *n < two {
        return false;
    }
    for &p in WITNESSES.iter() {
        let p = BigUint::from(p);
        if *n == p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    let n_minus_one = n - 1u32;
    let mut d = n_minus_one.clone();
    let mut s = 0u32;
    while d.is_even() {
        d >>= 1;
        s += 1;
    }
    'witness: for &a in WITNESSES.iter() {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x.is_one() || x == n_minus_one {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_one {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn rho(n: &BigUint) -> BigUint {
    // n is odd, composite, and not a perfect power of a small prime
    let mut c = BigUint::one();
    loop {
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut r: u64 = 1;
        let mut q = BigUint::one();
        let mut g = BigUint::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        let m = 64u64;
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..m.min(r - k) {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                g = q.gcd(n);
                k += m;
            }
            r *= 2;
        }
        if g == *n {
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if g != *n {
            return g;
        }
        c += 1u32;
    }
}

fn split(n: BigUint, out: &mut Vec<BigUint>) {
    if n.is_one() {
        return;
    }
    if is_probable_prime(&n) {
        out.push(n);
        return;
    }
    let root = n.sqrt();
    if &root * &root == n {
        split(root.clone(), out);
        split(root, out);
        return;
    }
    let d = rho(&n);
    let other = &n / &d;
    split(d, out);
    split(other, out);
}

/// Prime factorization as sorted `(prime, exponent)` pairs.
pub fn factorize(n: &BigUint) -> Vec<(BigUint, u32)> {
    assert!(!n.is_zero(), "cannot factor zero");
    let mut rest = n.clone();
    let mut primes: Vec<BigUint> = Vec::new();
    for p in small_primes() {
        if rest.is_one() {
            break;
        }
        let pb = BigUint::from(p);
        if &pb * &pb > rest {
            break;
        }
        while (&rest % &pb).is_zero() {
            rest /= &pb;
            primes.push(pb.clone());
        }
    }
    if !rest.is_one() {
        if rest
            .to_u64()
            .is_some_and(|r| r <= (TRIAL_BOUND as u64) * (TRIAL_BOUND as u64))
        {
            // survived trial division below its square root
            primes.push(rest);
        } else {
            split(rest, &mut primes);
        }
    }
    primes.sort();
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

/// Sorted primes dividing `n` to an odd power.
pub fn odd_exponent_primes(n: &BigUint) -> Vec<BigUint> {
    factorize(n)
        .into_iter()
        .filter(|(_, e)| e % 2 == 1)
        .map(|(p, _)| p)
        .collect()
}

/// Write `n = s·t²` with `s` squarefree; returns `(s, t)`.
pub fn squarefree_decompose(n: &BigUint) -> (BigUint, BigUint) {
    let mut s = BigUint::one();
    let mut t = BigUint::one();
    for (p, e) in factorize(n) {
        if e % 2 == 1 {
            s *= &p;
        }
        t *= p.pow(e / 2);
    }
    (s, t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn small_factorizations() {
        assert_eq!(factorize(&big(18)), alloc::vec![(big(2), 1), (big(3), 2)]);
        assert_eq!(odd_exponent_primes(&big(18)), alloc::vec![big(2)]);
        assert_eq!(odd_exponent_primes(&big(1)), Vec::<BigUint>::new());
        assert_eq!(squarefree_decompose(&big(72)), (big(2), big(6)));
    }

    #[test]
    fn rho_splits_semiprimes() {
        let p = big(1_000_003);
        let q = big(998_244_353);
        let n = &p * &q;
        assert_eq!(factorize(&n), alloc::vec![(p.clone(), 1), (q.clone(), 1)]);
        let sq = &n * &p;
        assert_eq!(odd_exponent_primes(&sq), alloc::vec![q]);
    }

    #[test]
    fn primality() {
        assert!(is_probable_prime(&big(2)));
        assert!(is_probable_prime(&big(998_244_353)));
        assert!(!is_probable_prime(&big(561)));
        assert!(!is_probable_prime(&big(1)));
    }

    #[test]
    fn factor_product_reconstructs() {
        for n in 1u64..3000 {
            let f = factorize(&big(n));
            let back = f.iter().fold(BigUint::one(), |acc, (p, e)| acc * p.pow(*e));
            assert_eq!(back, big(n));
            assert!(f.iter().all(|(p, _)| is_probable_prime(p)));
        }
    }
}
