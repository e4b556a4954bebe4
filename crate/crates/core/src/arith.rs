//! Exact integer number theory: primality, sieving, modular inverses and the
//! CRT decomposition `k = a_k*qr + b_k*rp + c_k*pq (mod pqr)`.

use serde::Serialize;

use crate::error::{Error, Result};

/// Upper bound on `p*q*r`. Keeps every `a_k*q*r` style intermediate well
/// inside `i64`.
pub const PRODUCT_CAP: u64 = 1 << 40;

/// Inverse of `a` modulo `m`, returned in `[1, m)`.
pub fn mod_inverse(a: i64, m: i64) -> Result<i64> {
    if m < 2 {
        return Err(Error::InvalidModulus(m));
    }
    let a_red = a.rem_euclid(m);
    let (mut old_r, mut r) = (a_red, m);
    let (mut old_s, mut s) = (1i64, 0i64);
    while r != 0 {
        let quot = old_r / r;
        (old_r, r) = (r, old_r - quot * r);
        (old_s, s) = (s, old_s - quot * s);
    }
    if old_r != 1 {
        return Err(Error::NotInvertible { a, m });
    }
    Ok(old_s.rem_euclid(m))
}

/// Deterministic primality by trial division over `6j +- 1`.
///
/// Sufficient for every `n <= 2^40`: at most ~350k candidate divisors.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) || n.is_multiple_of(3) {
        return false;
    }
    let mut d = 5u64;
    while d * d <= n {
        if n.is_multiple_of(d) || n.is_multiple_of(d + 2) {
            return false;
        }
        d += 6;
    }
    true
}

/// All primes in `[lo, hi]`, ascending (sieve of Eratosthenes).
pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    if hi < 2 || lo > hi {
        return Vec::new();
    }
    let hi_us = hi as usize;
    let mut composite = vec![false; hi_us + 1];
    let mut i = 2usize;
    while i * i <= hi_us {
        if !composite[i] {
            let mut j = i * i;
            while j <= hi_us {
                composite[j] = true;
                j += i;
            }
        }
        i += 1;
    }
    (lo.max(2) as usize..=hi_us)
        .filter(|&n| !composite[n])
        .map(|n| n as u64)
        .collect()
}

/// A validated triple of odd primes `p < q < r`.
///
/// Construction accepts `q` and `r` in either order; the pair is stored
/// sorted since every quantity derived from it is symmetric in `q`, `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct TernaryTriple {
    p: u64,
    q: u64,
    r: u64,
}

impl TernaryTriple {
    pub fn new(p: u64, q: u64, r: u64) -> Result<Self> {
        for n in [p, q, r] {
            if !is_prime(n) {
                return Err(Error::NotPrime(n));
            }
            if n == 2 {
                return Err(Error::InvalidTriple("2 is not an odd prime".into()));
            }
        }
        if q == r {
            return Err(Error::InvalidTriple(format!("q = r = {q}")));
        }
        if p >= q || p >= r {
            return Err(Error::InvalidTriple(format!(
                "p = {p} must be smaller than q = {q} and r = {r}"
            )));
        }
        let product = p as u128 * q as u128 * r as u128;
        if product > PRODUCT_CAP as u128 {
            return Err(Error::ProductTooLarge(product));
        }
        let (q, r) = if q < r { (q, r) } else { (r, q) };
        Ok(TernaryTriple { p, q, r })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn r(&self) -> u64 {
        self.r
    }

    pub fn product(&self) -> u64 {
        self.p * self.q * self.r
    }

    /// Degree of `Phi_pqr`, i.e. `(p-1)(q-1)(r-1)`.
    pub fn degree(&self) -> u64 {
        (self.p - 1) * (self.q - 1) * (self.r - 1)
    }
}

impl std::fmt::Display for TernaryTriple {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.p, self.q, self.r)
    }
}

/// The residues `(a_k, b_k, c_k)` with `0 <= a_k < p`, `0 <= b_k < q`,
/// `0 <= c_k < r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ResidueVector {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

/// CRT residues of `k`; negative `k` uses the Euclidean remainder.
pub fn crt_residues(triple: &TernaryTriple, k: i64) -> ResidueVector {
    let (p, q, r) = (triple.p as i64, triple.q as i64, triple.r as i64);
    // The moduli are distinct primes, so the inverses always exist.
    let qr_inv = mod_inverse((q * r) % p, p).expect("qr invertible mod p");
    let rp_inv = mod_inverse((r * p) % q, q).expect("rp invertible mod q");
    let pq_inv = mod_inverse((p * q) % r, r).expect("pq invertible mod r");
    ResidueVector {
        a: mul_mod(k, qr_inv, p),
        b: mul_mod(k, rp_inv, q),
        c: mul_mod(k, pq_inv, r),
    }
}

/// `(x * y) mod m` in `[0, m)` for any sign of `x`. `0 <= y < m <= 2^40`.
#[inline]
pub(crate) fn mul_mod(x: i64, y: i64, m: i64) -> i64 {
    if m <= 1 << 31 {
        (x.rem_euclid(m) * y) % m
    } else {
        ((x.rem_euclid(m) as i128 * y as i128) % m as i128) as i64
    }
}
