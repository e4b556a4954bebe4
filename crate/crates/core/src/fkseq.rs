//! The sequence `F_k = a_k/p + b_k/q + c_k/r - k/(pqr)`.
//!
//! `F_k` is evaluated as the exact quotient
//! `(a_k*qr + b_k*rp + c_k*pq - k) / pqr`, which lies in `{0, 1, 2}` whenever
//! `-(qr + rp + pq) < k < pqr`. [`FkStream`] walks consecutive `k` without
//! any multiplication or division per step and is the engine behind
//! [`crate::coeffs::all_coefficients`].

use serde::Serialize;

use crate::arith::{mod_inverse, mul_mod, ResidueVector, TernaryTriple};
use crate::error::{Error, Result};

/// Everything derived from a triple that the lemmas and bounds need.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FkContext {
    triple: TernaryTriple,
    p: i64,
    q: i64,
    r: i64,
    pqr: i64,
    qr: i64,
    rp: i64,
    pq: i64,
    qr_inv_p: i64,
    rp_inv_q: i64,
    pq_inv_r: i64,
    /// `q' = q^-1 mod p`
    q_inv_p: i64,
    /// `r' = r^-1 mod p`
    r_inv_p: i64,
    /// `p_q' = p^-1 mod q`
    p_inv_q: i64,
    /// `p_r' = p^-1 mod r`
    p_inv_r: i64,
    big_m: i64,
    small_m: i64,
    alpha: i64,
    beta: i64,
    beta_star: i64,
    /// `F_1`; the per-step increment of the stream before wrap corrections.
    f_one: i64,
}

fn inv(a: i64, m: i64) -> i64 {
    mod_inverse(a, m).expect("distinct primes are mutually invertible")
}

impl FkContext {
    pub fn new(triple: TernaryTriple) -> Self {
        let (p, q, r) = (triple.p() as i64, triple.q() as i64, triple.r() as i64);
        let (qr, rp, pq) = (q * r, r * p, p * q);
        let qr_inv_p = inv(qr % p, p);
        let rp_inv_q = inv(rp % q, q);
        let pq_inv_r = inv(pq % r, r);
        let q_inv_p = inv(q % p, p);
        let r_inv_p = inv(r % p, p);
        let p_inv_q = inv(p % q, q);
        let p_inv_r = inv(p % r, r);
        let big_m = q_inv_p.max(r_inv_p);
        let small_m = q_inv_p.min(r_inv_p);
        let alpha = q_inv_p.min(r_inv_p).min(p - q_inv_p).min(p - r_inv_p);
        // alpha * beta * qr = 1 (mod p)
        let beta = inv(mul_mod(alpha, qr % p, p), p);
        let beta_star = beta.min(p - beta);

        let (alpha_mm, beta_mm) = if big_m + small_m >= p {
            (p - big_m, p - small_m)
        } else {
            (small_m, big_m)
        };
        assert_eq!(
            (alpha, beta),
            (alpha_mm, beta_mm),
            "alpha/beta disagree with the M/m characterization for {triple}"
        );

        let f_one = (qr_inv_p * qr + rp_inv_q * rp + pq_inv_r * pq - 1) / (p * q * r);
        FkContext {
            triple,
            p,
            q,
            r,
            pqr: p * q * r,
            qr,
            rp,
            pq,
            qr_inv_p,
            rp_inv_q,
            pq_inv_r,
            q_inv_p,
            r_inv_p,
            p_inv_q,
            p_inv_r,
            big_m,
            small_m,
            alpha,
            beta,
            beta_star,
            f_one,
        }
    }

    pub fn triple(&self) -> TernaryTriple {
        self.triple
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn r(&self) -> i64 {
        self.r
    }

    pub fn pqr(&self) -> i64 {
        self.pqr
    }

    pub fn degree(&self) -> i64 {
        (self.p - 1) * (self.q - 1) * (self.r - 1)
    }

    pub fn q_inv_p(&self) -> i64 {
        self.q_inv_p
    }

    pub fn r_inv_p(&self) -> i64 {
        self.r_inv_p
    }

    pub fn p_inv_q(&self) -> i64 {
        self.p_inv_q
    }

    pub fn p_inv_r(&self) -> i64 {
        self.p_inv_r
    }

    /// `M = max{q', r'}`
    pub fn big_m(&self) -> i64 {
        self.big_m
    }

    /// `m = min{q', r'}`
    pub fn small_m(&self) -> i64 {
        self.small_m
    }

    pub fn alpha(&self) -> i64 {
        self.alpha
    }

    pub fn beta(&self) -> i64 {
        self.beta
    }

    pub fn beta_star(&self) -> i64 {
        self.beta_star
    }

    /// Exclusive bounds `(lo, hi)` of the window where `F_k` is in `{0, 1, 2}`.
    pub fn window(&self) -> (i64, i64) {
        (-(self.qr + self.rp + self.pq), self.pqr)
    }

    pub fn in_window(&self, k: i64) -> bool {
        let (lo, hi) = self.window();
        lo < k && k < hi
    }

    pub(crate) fn check_window(&self, k: i64) -> Result<()> {
        if self.in_window(k) {
            Ok(())
        } else {
            let (lo, hi) = self.window();
            Err(Error::OutOfWindow { k, lo, hi })
        }
    }

    pub fn residues(&self, k: i64) -> ResidueVector {
        ResidueVector {
            a: mul_mod(k, self.qr_inv_p, self.p),
            b: mul_mod(k, self.rp_inv_q, self.q),
            c: mul_mod(k, self.pq_inv_r, self.r),
        }
    }

    /// `F_k` without the window check. Outside the window the exact value
    /// may be negative or exceed 2.
    #[inline]
    pub(crate) fn fk_raw(&self, k: i64) -> i64 {
        let v = self.residues(k);
        let s = v.a * self.qr + v.b * self.rp + v.c * self.pq - k;
        debug_assert_eq!(s.rem_euclid(self.pqr), 0, "CRT sum not divisible by pqr");
        s.div_euclid(self.pqr)
    }

    /// `F_k` for `k` inside the legal window.
    pub fn fk(&self, k: i64) -> Result<u8> {
        self.check_window(k)?;
        let f = self.fk_raw(k);
        debug_assert!((0..=2).contains(&f));
        Ok(f as u8)
    }

    /// Consecutive values `F_lo, ..., F_hi`, computed incrementally.
    pub fn fk_range(&self, lo: i64, hi: i64) -> Result<Vec<u8>> {
        if lo > hi {
            return Ok(Vec::new());
        }
        self.check_window(lo)?;
        self.check_window(hi)?;
        Ok(self
            .stream_from(lo)
            .take((hi - lo + 1) as usize)
            .map(|pt| pt.f as u8)
            .collect())
    }

    /// An unbounded stream of `(k, residues, F_k)` starting at `start`.
    pub fn stream_from(&self, start: i64) -> FkStream {
        let v = self.residues(start);
        FkStream {
            k: start,
            a: v.a,
            b: v.b,
            c: v.c,
            f: self.fk_raw(start),
            p: self.p,
            q: self.q,
            r: self.r,
            step_a: self.qr_inv_p,
            step_b: self.rp_inv_q,
            step_c: self.pq_inv_r,
            f_one: self.f_one,
        }
    }

    /// `F_k - F_{k-q}` by the residue case split on `a_k` and `c_k`.
    pub fn fk_diff_q(&self, k: i64) -> Result<i64> {
        self.check_window(k)?;
        self.check_window(k - self.q)?;
        let v = self.residues(k);
        Ok(shift_case(v.a, self.r_inv_p, v.c, self.p_inv_r))
    }

    /// `F_k - F_{k-r}` by the residue case split on `a_k` and `b_k`.
    pub fn fk_diff_r(&self, k: i64) -> Result<i64> {
        self.check_window(k)?;
        self.check_window(k - self.r)?;
        let v = self.residues(k);
        Ok(shift_case(v.a, self.q_inv_p, v.b, self.p_inv_q))
    }

    /// `F_k - F_{k-q} - F_{k-r} + F_{k-q-r}` as a function of `a_k` alone.
    pub fn fk_double_diff(&self, k: i64) -> Result<i64> {
        self.check_window(k)?;
        self.check_window(k - self.q - self.r)?;
        Ok(self.double_diff_for_residue(self.residues(k).a))
    }

    /// The five-branch table keyed by `a_k`.
    pub fn double_diff_for_residue(&self, a: i64) -> i64 {
        let (big, small, p) = (self.big_m, self.small_m, self.p);
        if a < big + small - p {
            0
        } else if a < small {
            -1
        } else if a < big {
            0
        } else if a < big + small {
            1
        } else {
            0
        }
    }

    /// `F_k + F_{k-p-q} + F_{k-q-r} + F_{k-r-p} = F_{k-p} + F_{k-q} + F_{k-r} + F_{k-p-q-r}`.
    pub fn check_octuple_identity(&self, k: i64) -> Result<bool> {
        let (p, q, r) = (self.p, self.q, self.r);
        self.check_window(k)?;
        self.check_window(k - p - q - r)?;
        let f = |j| self.fk_raw(j);
        let lhs = f(k) + f(k - p - q) + f(k - q - r) + f(k - r - p);
        let rhs = f(k - p) + f(k - q) + f(k - r) + f(k - p - q - r);
        Ok(lhs == rhs)
    }

    /// `F_k = 0 => a_k <= floor(k/qr)` and `F_k = 2 => a_k >= ceil((k+pq+rp)/qr)`.
    pub fn check_lemma_02(&self, k: i64) -> Result<bool> {
        let f = self.fk(k)?;
        let a = self.residues(k).a;
        Ok(match f {
            0 => a <= k.div_euclid(self.qr),
            2 => a >= -(-(k + self.pq + self.rp)).div_euclid(self.qr),
            _ => true,
        })
    }
}

#[inline]
fn shift_case(a: i64, a_threshold: i64, other: i64, other_threshold: i64) -> i64 {
    match (a < a_threshold, other < other_threshold) {
        (true, true) => -1,
        (false, false) => 1,
        _ => 0,
    }
}

/// A point of the stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FkPoint {
    pub k: i64,
    pub residues: ResidueVector,
    pub f: i64,
}

/// Iterates `F_k` for consecutive `k`.
///
/// Each residue advances by its fixed step with one conditional subtract.
/// Since `S_k = a_k*qr + b_k*rp + c_k*pq - k` changes by `F_1*pqr` minus
/// `pqr` per wrapped residue, `F_{k+1} = F_k + F_1 - wraps`.
#[derive(Debug, Clone)]
pub struct FkStream {
    k: i64,
    a: i64,
    b: i64,
    c: i64,
    f: i64,
    p: i64,
    q: i64,
    r: i64,
    step_a: i64,
    step_b: i64,
    step_c: i64,
    f_one: i64,
}

impl FkStream {
    #[inline]
    pub fn current(&self) -> FkPoint {
        FkPoint {
            k: self.k,
            residues: ResidueVector {
                a: self.a,
                b: self.b,
                c: self.c,
            },
            f: self.f,
        }
    }

    /// `F_k = 0` at the current position.
    #[inline]
    pub fn is_zero(&self) -> bool {
        self.f == 0
    }

    #[inline]
    pub fn advance(&mut self) {
        let a = self.a + self.step_a;
        let b = self.b + self.step_b;
        let c = self.c + self.step_c;
        let wa = (a >= self.p) as i64;
        let wb = (b >= self.q) as i64;
        let wc = (c >= self.r) as i64;
        self.a = a - (self.p & -wa);
        self.b = b - (self.q & -wb);
        self.c = c - (self.r & -wc);
        self.f += self.f_one - wa - wb - wc;
        self.k += 1;
    }
}

impl Iterator for FkStream {
    type Item = FkPoint;

    #[inline]
    fn next(&mut self) -> Option<FkPoint> {
        let pt = self.current();
        self.advance();
        Some(pt)
    }
}
