//! Prime numbers below 2^64: deterministic primality and factorization.

use std::fmt;

use crate::error::{Error, Result};

/// A verified prime number.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Prime(u64);

impl Prime {
    pub fn new(n: u64) -> Result<Prime> {
        if is_prime(n) {
            Ok(Prime(n))
        } else {
            Err(Error::NotPrime(n))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }

    /// The smallest prime strictly greater than `n`.
    pub fn next_after(n: u64) -> Prime {
        let mut k = n.saturating_add(1).max(2);
        while !is_prime(k) {
            k += 1;
        }
        Prime(k)
    }
}

impl TryFrom<u64> for Prime {
    type Error = Error;
    fn try_from(n: u64) -> Result<Prime> {
        Prime::new(n)
    }
}

impl From<Prime> for u64 {
    fn from(p: Prime) -> u64 {
        p.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

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

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn pollard_rho(n: u64) -> u64 {
    if n % 2 == 0 {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

/// Prime factorization as sorted (prime, exponent) pairs.
pub fn factor(n: u64) -> Vec<(Prime, u32)> {
    let mut out: Vec<(u64, u32)> = Vec::new();
    let mut stack = Vec::new();
    let mut n = n;
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        let mut e = 0;
        while n > 1 && n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    }
    if n > 1 {
        stack.push(n);
    }
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime(m) {
            match out.iter_mut().find(|(p, _)| *p == m) {
                Some(entry) => entry.1 += 1,
                None => out.push((m, 1)),
            }
            continue;
        }
        let d = pollard_rho(m);
        stack.push(d);
        stack.push(m / d);
    }
    out.sort();
    out.into_iter().map(|(p, e)| (Prime(p), e)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }

    #[test]
    fn primality_matches_trial_division() {
        for n in 0..5000 {
            assert_eq!(is_prime(n), naive(n), "n = {n}");
        }
        assert!(is_prime(18446744073709551557));
        assert!(!is_prime(18446744073709551557 - 2));
        assert!(!is_prime(3215031751));
    }

    #[test]
    fn factorization_multiplies_back() {
        for n in [1u64, 2, 12, 97, 360, 1 << 40, 600851475143, 18446744073709551615] {
            let f = factor(n);
            let prod: u128 = f.iter().map(|(p, e)| (p.get() as u128).pow(*e)).product();
            assert_eq!(prod, n as u128);
            assert!(f.iter().all(|(p, _)| is_prime(p.get())));
        }
    }

    #[test]
    fn next_prime() {
        assert_eq!(Prime::next_after(0).get(), 2);
        assert_eq!(Prime::next_after(5).get(), 7);
        assert_eq!(Prime::next_after(90).get(), 97);
    }
}
