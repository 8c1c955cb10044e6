//! Primality, next-prime search and distinct prime-factor counts.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &WITNESSES {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Exact primality. Beyond 64 bits uses trial division, so only desk-scale inputs are practical.
pub fn is_prime(n: &BigInt) -> bool {
    if let Some(v) = n.to_u64() {
        return is_prime_u64(v);
    }
    if n.is_negative() {
        return false;
    }
    let mut d = BigInt::from(2);
    while &d * &d <= *n {
        if n.is_multiple_of(&d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Least prime `p ≥ n`.
pub fn next_prime_at_least(n: &BigInt) -> BigInt {
    let mut k = if n < &BigInt::from(2) { BigInt::from(2) } else { n.clone() };
    while !is_prime(&k) {
        k += 1;
    }
    k
}

/// Distinct prime factors of `|n|` by trial division (`n ≠ 0`).
pub fn prime_factors(n: &BigInt) -> Vec<BigInt> {
    let mut n = n.abs();
    let mut out = Vec::new();
    if n.is_zero() {
        return out;
    }
    let mut d = BigInt::from(2);
    while &d * &d <= n {
        if n.is_multiple_of(&d) {
            out.push(d.clone());
            while n.is_multiple_of(&d) {
                n /= &d;
            }
        }
        d += if d == BigInt::from(2) { BigInt::one() } else { BigInt::from(2) };
    }
    if n > BigInt::one() {
        out.push(n);
    }
    out
}

/// ω(n): number of distinct prime factors.
pub fn omega(n: &BigInt) -> usize {
    prime_factors(n).len()
}

/// Small primes in increasing order, first `count` of them.
pub fn small_primes(count: usize) -> Vec<u64> {
    (2u64..).filter(|&k| is_prime_u64(k)).take(count).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(n: u64) -> bool {
        n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }

    #[test]
    fn agrees_with_trial_division() {
        for n in 0..5000u64 {
            assert_eq!(is_prime_u64(n), naive(n), "{n}");
        }
        assert!(is_prime_u64(18446744073709551557));
        assert!(!is_prime_u64(3215031751));
    }

    #[test]
    fn next_prime_examples() {
        assert_eq!(next_prime_at_least(&451.into()), 457.into());
        assert_eq!(next_prime_at_least(&37.into()), 37.into());
        assert_eq!(next_prime_at_least(&0.into()), 2.into());
    }

    #[test]
    fn omega_counts_distinct() {
        assert_eq!(omega(&12.into()), 2);
        assert_eq!(omega(&1.into()), 0);
        assert_eq!(omega(&(2 * 3 * 5 * 7 * 49).into()), 4);
    }
}
