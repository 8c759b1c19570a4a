//! Elementary number theory on machine and big integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// `(g, x, y)` with `x*a + y*b = g = gcd(a, b) >= 0`.
pub fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factorization by trial division, ascending primes.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn prime_divisors(n: u64) -> Vec<u64> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

/// Prime factorization of a positive big integer. Only intended for
/// integers whose prime factors are small (indices and determinants).
pub fn factorize_big(n: &BigInt) -> Vec<(BigInt, u32)> {
    assert!(n.is_positive(), "factorize_big needs a positive integer");
    let mut n = n.clone();
    let mut out = Vec::new();
    let mut d = BigInt::from(2u32);
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            let mut e = 0;
            while (&n % &d).is_zero() {
                n /= &d;
                e += 1;
            }
            out.push((d.clone(), e));
        }
        d += 1u32;
    }
    if n > BigInt::one() {
        out.push((n, 1));
    }
    out
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// Sum of divisors, from the factorization.
pub fn sigma1(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .map(|(p, e)| (p.pow(e + 1) - 1) / (p - 1))
        .product()
}

pub fn sigma1_big(n: &BigInt) -> BigInt {
    factorize_big(n)
        .into_iter()
        .map(|(p, e)| (num_traits::pow(p.clone(), e as usize + 1) - 1u32) / (p - 1u32))
        .product()
}

/// Number of index-`n` sublattices of Z^2 with cyclic quotient:
/// `n * prod_{p | n} (1 + 1/p)`.
pub fn dedekind_psi(n: &BigInt) -> BigInt {
    let mut out = n.clone();
    for (p, _) in factorize_big(n) {
        out = out / &p * (&p + 1u32);
    }
    out
}

/// Exponent of `p` in `n` (`n != 0`).
pub fn valuation(n: &BigInt, p: u64) -> u64 {
    assert!(!n.is_zero(), "valuation of zero");
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    while (&n % &p).is_zero() {
        n /= &p;
        v += 1;
    }
    v
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    (2..=n).filter(|&k| is_prime(k)).collect()
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: i128, m: i128) -> Option<i128> {
    let (g, x, _) = ext_gcd(&BigInt::from(a.rem_euclid(m)), &BigInt::from(m));
    if g != BigInt::one() {
        return None;
    }
    let x: i128 = x.mod_floor(&BigInt::from(m)).try_into().ok()?;
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_matches_divisor_sum() {
        for n in 1..200u64 {
            assert_eq!(sigma1(n), divisors(n).iter().sum::<u64>(), "n = {n}");
            assert_eq!(BigInt::from(sigma1(n)), sigma1_big(&BigInt::from(n)));
        }
    }

    #[test]
    fn psi_small_values() {
        let psi: Vec<BigInt> = (1..=6u32).map(|n| dedekind_psi(&BigInt::from(n))).collect();
        let expected: Vec<BigInt> = [1, 3, 4, 6, 6, 12].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(psi, expected);
    }

    #[test]
    fn factorization_round_trips() {
        for n in 1..500u64 {
            let back: u64 = factorize(n).iter().map(|&(p, e)| p.pow(e)).product();
            assert_eq!(back, n);
            assert!(factorize(n).iter().all(|&(p, _)| is_prime(p)));
        }
    }

    #[test]
    fn inverse_mod() {
        assert_eq!(inv_mod(3, 8), Some(3));
        assert_eq!(inv_mod(2, 8), None);
        assert_eq!(inv_mod(-1, 7), Some(6));
    }
}
