//! Coefficients of `Phi_pqr`, three ways.
//!
//! * [`oracle_coefficients`] expands
//!   `(1-x^p)(1-x^q)(1-x^r) / ((1-x)(1-x^qr)(1-x^rp)(1-x^pq))` as a truncated
//!   power series and never touches `F_k`.
//! * [`coefficient_at`] evaluates one coefficient as a sum over a window of
//!   `p` values of `k`, counting zeros among `F_k, F_{k-q}, F_{k-r}, F_{k-q-r}`.
//! * [`all_coefficients`] turns that window sum into a running sum:
//!   with `g(k) = [F_k=0] - [F_{k-q}=0] - [F_{k-r}=0] + [F_{k-q-r}=0]`,
//!   `a(n) = a(n-1) + g(n) - g(n-p)`.

use serde::Serialize;

use crate::arith::TernaryTriple;
use crate::error::{Error, Result};
use crate::fkseq::FkContext;

/// Largest degree any full-vector routine will allocate for.
pub const DEGREE_LIMIT: u64 = 100_000_000;

/// Dense coefficients `a(0), ..., a(deg)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoefficientVector {
    triple: TernaryTriple,
    coeffs: Vec<i32>,
}

impl CoefficientVector {
    #[cfg(test)]
    pub(crate) fn from_parts(triple: TernaryTriple, coeffs: Vec<i32>) -> Self {
        CoefficientVector { triple, coeffs }
    }

    pub fn triple(&self) -> TernaryTriple {
        self.triple
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn as_slice(&self) -> &[i32] {
        &self.coeffs
    }

    /// `a(n)`, zero outside `[0, deg]`.
    pub fn get(&self, n: i64) -> i32 {
        usize::try_from(n)
            .ok()
            .and_then(|i| self.coeffs.get(i).copied())
            .unwrap_or(0)
    }

    pub fn is_palindrome(&self) -> bool {
        self.coeffs.iter().eq(self.coeffs.iter().rev())
    }

    /// `Phi(1)`, which is 1 for any index with two or more distinct primes.
    pub fn value_at_one(&self) -> i64 {
        self.coeffs.iter().map(|&c| c as i64).sum()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.first() == Some(&1) && self.coeffs.last() == Some(&1)
    }
}

fn check_degree(triple: &TernaryTriple) -> Result<usize> {
    let deg = triple.degree();
    if deg > DEGREE_LIMIT {
        return Err(Error::DegreeTooLarge {
            deg,
            limit: DEGREE_LIMIT,
        });
    }
    Ok(deg as usize)
}

/// Coefficients from the formal-series identity, independent of `F_k`.
///
/// The numerator `(1-x^p)(1-x^q)(1-x^r)` has eight signed terms (the
/// `1-x^pqr` factor vanishes below the truncation degree). Dividing a
/// truncated series by `1-x^d` is a running sum at stride `d`; the passes run
/// for `d = 1, qr, rp, pq` in that order.
pub fn oracle_coefficients(triple: &TernaryTriple) -> Result<CoefficientVector> {
    let deg = check_degree(triple)?;
    let (p, q, r) = (
        triple.p() as usize,
        triple.q() as usize,
        triple.r() as usize,
    );
    let mut buf = vec![0i64; deg + 1];
    for mask in 0..8u32 {
        let exp = [p, q, r]
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, &e)| e)
            .sum::<usize>();
        if exp <= deg {
            buf[exp] += if mask.count_ones() % 2 == 0 { 1 } else { -1 };
        }
    }
    for stride in [1, q * r, r * p, p * q] {
        running_sum(&mut buf, stride);
    }
    let coeffs = buf
        .into_iter()
        .map(|c| i32::try_from(c).expect("coefficient exceeds i32"))
        .collect();
    Ok(CoefficientVector {
        triple: *triple,
        coeffs,
    })
}

/// In-place division by `1 - x^stride` of a truncated series.
fn running_sum(buf: &mut [i64], stride: usize) {
    if stride == 1 {
        let mut acc = 0;
        for x in buf.iter_mut() {
            acc += *x;
            *x = acc;
        }
        return;
    }
    let mut n = stride;
    while n < buf.len() {
        let (done, rest) = buf.split_at_mut(n);
        let src = &done[n - stride..];
        for (dst, &s) in rest.iter_mut().zip(src) {
            *dst += s;
        }
        n += stride;
    }
}

fn check_index(ctx: &FkContext, n: i64) -> Result<()> {
    let deg = ctx.degree();
    if (0..=deg).contains(&n) {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange { n, max: deg })
    }
}

/// Count of `d` among the values.
fn count(d: i64, vals: &[i64]) -> i64 {
    vals.iter().filter(|&&v| v == d).count() as i64
}

/// `a(n) = sum_{k=n-p+1}^{n} (N_0(F_k, F_{k-q-r}) - N_0(F_{k-q}, F_{k-r}))`.
pub fn coefficient_at(ctx: &FkContext, n: i64) -> Result<i32> {
    check_index(ctx, n)?;
    let (q, r) = (ctx.q(), ctx.r());
    let sum: i64 = (n - ctx.p() + 1..=n)
        .map(|k| {
            let outer = [ctx.fk_raw(k), ctx.fk_raw(k - q - r)];
            let inner = [ctx.fk_raw(k - q), ctx.fk_raw(k - r)];
            count(0, &outer) - count(0, &inner)
        })
        .sum();
    Ok(sum as i32)
}

/// The three window-sum forms of a single coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CoefficientForms {
    pub via_n0: i32,
    pub via_n2: i32,
    pub via_half_n1: i32,
}

impl CoefficientForms {
    pub fn agree(&self) -> bool {
        self.via_n0 == self.via_n2 && self.via_n2 == self.via_half_n1
    }
}

/// Counts zeros, twos and ones over the same window in one pass.
pub fn coefficient_at_variants(ctx: &FkContext, n: i64) -> Result<CoefficientForms> {
    check_index(ctx, n)?;
    let (q, r) = (ctx.q(), ctx.r());
    let (mut n0, mut n2, mut n1) = (0i64, 0i64, 0i64);
    for k in n - ctx.p() + 1..=n {
        let outer = [ctx.fk_raw(k), ctx.fk_raw(k - q - r)];
        let inner = [ctx.fk_raw(k - q), ctx.fk_raw(k - r)];
        n0 += count(0, &outer) - count(0, &inner);
        n2 += count(2, &outer) - count(2, &inner);
        n1 += count(1, &inner) - count(1, &outer);
    }
    if n1 % 2 != 0 {
        return Err(Error::OddN1Sum(n));
    }
    Ok(CoefficientForms {
        via_n0: n0 as i32,
        via_n2: n2 as i32,
        via_half_n1: (n1 / 2) as i32,
    })
}

/// Full coefficient vector in `O(deg)` time and `O(q + r)` extra memory.
///
/// A single `F` stream feeds a ring of zero indicators `z(j) = [F_j = 0]`
/// long enough to look back `q + r` steps, so
/// `g(k) = z(k) - z(k-q) - z(k-r) + z(k-q-r)` costs three lookups. A second
/// ring holds the last `p` values of `g`.
pub fn all_coefficients(ctx: &FkContext) -> Result<CoefficientVector> {
    let triple = ctx.triple();
    let deg = check_degree(&triple)?;
    let (p, q, r) = (ctx.p() as usize, ctx.q() as usize, ctx.r() as usize);
    let zlen = (q + r + 1).next_power_of_two();
    let zmask = zlen - 1;
    // z(j) = 0 for j < 0: F_j = 0 forces j = a*qr + b*rp + c*pq >= 0.
    let mut zring = vec![0i32; zlen];
    let mut gring = vec![0i32; p];
    let mut slot = 0usize;
    let mut stream = ctx.stream_from(0);
    let mut coeffs = vec![0i32; deg + 1];
    let mut acc = 0i32;
    for (k, out) in coeffs.iter_mut().enumerate() {
        let z = stream.is_zero() as i32;
        zring[k & zmask] = z;
        let g = z - zring[k.wrapping_sub(q) & zmask] - zring[k.wrapping_sub(r) & zmask]
            + zring[k.wrapping_sub(q + r) & zmask];
        acc += g - gring[slot];
        gring[slot] = g;
        slot += 1;
        if slot == p {
            slot = 0;
        }
        *out = acc;
        stream.advance();
    }
    Ok(CoefficientVector { triple, coeffs })
}

/// Extreme values of a coefficient vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ExtremaSummary {
    /// `A_+`
    pub a_plus: i32,
    /// `A_-`
    pub a_minus: i32,
    /// `A = max{A_+, -A_-}`
    pub height: i32,
    /// Largest `|a(n) - a(n-1)|`, counting the zero neighbours at `-1` and `deg+1`.
    pub max_jump: i32,
}

pub fn extrema(v: &CoefficientVector) -> ExtremaSummary {
    let c = v.as_slice();
    let a_plus = c.iter().copied().max().unwrap_or(0);
    let a_minus = c.iter().copied().min().unwrap_or(0);
    let interior = c.windows(2).map(|w| (w[1] - w[0]).abs()).max().unwrap_or(0);
    let edges = c
        .first()
        .map_or(0, |x| x.abs())
        .max(c.last().map_or(0, |x| x.abs()));
    ExtremaSummary {
        a_plus,
        a_minus,
        height: a_plus.max(-a_minus),
        max_jump: interior.max(edges),
    }
}

/// Ones, zeros and twos among the eight shifted `F` values around `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct JumpDecomposition {
    /// ones among `F_n, F_{n-p-q}, F_{n-q-r}, F_{n-r-p}`
    pub n_plus: u8,
    /// ones among `F_{n-p}, F_{n-q}, F_{n-r}, F_{n-p-q-r}`
    pub n_minus: u8,
    /// the same difference through zero counts
    pub diff_via_n0: i32,
    /// the same difference through two counts
    pub diff_via_n2: i32,
}

impl JumpDecomposition {
    /// `a(n) - a(n-1) = (N_- - N_+) / 2`
    pub fn difference(&self) -> i32 {
        (self.n_minus as i32 - self.n_plus as i32) / 2
    }
}

/// Decomposes `a(n) - a(n-1)` for `0 <= n <= deg + 1`.
pub fn jump_decomposition(ctx: &FkContext, n: i64) -> Result<JumpDecomposition> {
    let deg = ctx.degree();
    if !(0..=deg + 1).contains(&n) {
        return Err(Error::IndexOutOfRange { n, max: deg + 1 });
    }
    let (p, q, r) = (ctx.p(), ctx.q(), ctx.r());
    let f = |k| ctx.fk_raw(k);
    let plus = [f(n), f(n - p - q), f(n - q - r), f(n - r - p)];
    let minus = [f(n - p), f(n - q), f(n - r), f(n - p - q - r)];
    let n_plus = count(1, &plus);
    let n_minus = count(1, &minus);
    let diff_via_n0 = (count(0, &plus) - count(0, &minus)) as i32;
    let diff_via_n2 = (count(2, &plus) - count(2, &minus)) as i32;
    let twice = n_minus - n_plus;
    if twice % 2 != 0 || twice / 2 != diff_via_n0 as i64 || diff_via_n0 != diff_via_n2 {
        return Err(Error::ParityViolation {
            n,
            detail: format!("N- - N+ = {twice}, N0 form = {diff_via_n0}, N2 form = {diff_via_n2}"),
        });
    }
    Ok(JumpDecomposition {
        n_plus: n_plus as u8,
        n_minus: n_minus as u8,
        diff_via_n0,
        diff_via_n2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triple(p: u64, q: u64, r: u64) -> TernaryTriple {
        TernaryTriple::new(p, q, r).unwrap()
    }

    /// Schoolbook long division of
    /// `(x^pqr - 1)(x^p - 1)(x^q - 1)(x^r - 1)` by
    /// `(x - 1)(x^qr - 1)(x^rp - 1)(x^pq - 1)`.
    fn long_division(t: &TernaryTriple) -> Vec<i64> {
        fn mul(a: &[i64], b: &[i64]) -> Vec<i64> {
            let mut out = vec![0; a.len() + b.len() - 1];
            for (i, &x) in a.iter().enumerate() {
                if x != 0 {
                    for (j, &y) in b.iter().enumerate() {
                        out[i + j] += x * y;
                    }
                }
            }
            out
        }
        fn binom(d: usize) -> Vec<i64> {
            let mut v = vec![0; d + 1];
            v[0] = -1;
            v[d] = 1;
            v
        }
        let (p, q, r) = (t.p() as usize, t.q() as usize, t.r() as usize);
        let num = [p * q * r, p, q, r]
            .iter()
            .fold(vec![1], |acc, &d| mul(&acc, &binom(d)));
        let den = [1, q * r, r * p, p * q]
            .iter()
            .fold(vec![1], |acc, &d| mul(&acc, &binom(d)));
        let mut rem = num;
        let dl = den.len() - 1;
        let mut quot = vec![0i64; rem.len() - dl];
        for i in (0..quot.len()).rev() {
            let c = rem[i + dl] / den[dl];
            quot[i] = c;
            for (j, &d) in den.iter().enumerate() {
                rem[i + j] -= c * d;
            }
        }
        assert!(rem.iter().all(|&x| x == 0), "division not exact");
        quot
    }

    #[test]
    fn oracle_matches_long_division() {
        for (p, q, r) in [(3, 5, 7), (3, 5, 11), (3, 7, 11), (5, 7, 11)] {
            let t = triple(p, q, r);
            let expected = long_division(&t);
            let got: Vec<i64> = oracle_coefficients(&t)
                .unwrap()
                .as_slice()
                .iter()
                .map(|&c| c as i64)
                .collect();
            assert_eq!(got, expected, "{t}");
        }
    }

    #[test]
    fn phi_105_reference() {
        let v = oracle_coefficients(&triple(3, 5, 7)).unwrap();
        assert_eq!(v.degree(), 48);
        assert_eq!(&v.as_slice()[..10], &[1, 1, 1, 0, 0, -1, -1, -2, -1, -1]);
        assert_eq!(v.get(48), 1);
        assert_eq!(v.get(49), 0);
        assert_eq!(v.get(-1), 0);
        assert_eq!(v.value_at_one(), 1);
        assert!(v.is_palindrome() && v.is_monic());
    }

    #[test]
    fn point_queries() {
        let ctx = FkContext::new(triple(3, 5, 7));
        assert_eq!(coefficient_at(&ctx, 0), Ok(1));
        assert_eq!(coefficient_at(&ctx, 7), Ok(-2));
        assert_eq!(
            coefficient_at(&ctx, 49),
            Err(Error::IndexOutOfRange { n: 49, max: 48 })
        );
        assert_eq!(
            coefficient_at(&ctx, -1),
            Err(Error::IndexOutOfRange { n: -1, max: 48 })
        );
        let oracle = oracle_coefficients(&ctx.triple()).unwrap();
        for n in 0..=48 {
            assert_eq!(coefficient_at(&ctx, n).unwrap(), oracle.get(n));
        }
        let f = coefficient_at_variants(&ctx, 7).unwrap();
        assert_eq!((f.via_n0, f.via_n2, f.via_half_n1), (-2, -2, -2));
        let f = coefficient_at_variants(&ctx, 0).unwrap();
        assert_eq!((f.via_n0, f.via_n2, f.via_half_n1), (1, 1, 1));
    }

    #[test]
    fn variants_random_n() {
        use rand::{Rng, SeedableRng};
        let ctx = FkContext::new(triple(5, 7, 11));
        let oracle = oracle_coefficients(&ctx.triple()).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let n = rng.gen_range(0..=ctx.degree());
            let f = coefficient_at_variants(&ctx, n).unwrap();
            assert!(f.agree());
            assert_eq!(f.via_n0, oracle.get(n));
        }
    }

    #[test]
    fn sliding_window_matches_oracle() {
        for (p, q, r) in [(3, 5, 7), (5, 7, 11), (7, 11, 13), (11, 13, 101)] {
            let t = triple(p, q, r);
            let ctx = FkContext::new(t);
            let fast = all_coefficients(&ctx).unwrap();
            assert_eq!(fast, oracle_coefficients(&t).unwrap(), "{t}");
            for n in (0..=ctx.degree()).step_by(37) {
                assert_eq!(fast.get(n), coefficient_at(&ctx, n).unwrap());
            }
        }
    }

    #[test]
    fn degree_cap() {
        // (p-1)(q-1)(r-1) > 1e8 while pqr stays below 2^40
        let t = triple(101, 1009, 1013);
        assert!(matches!(
            oracle_coefficients(&t),
            Err(Error::DegreeTooLarge { .. })
        ));
        assert!(matches!(
            all_coefficients(&FkContext::new(t)),
            Err(Error::DegreeTooLarge { .. })
        ));
    }

    #[test]
    fn extrema_examples() {
        let e = extrema(&oracle_coefficients(&triple(3, 5, 7)).unwrap());
        assert_eq!((e.a_plus, e.a_minus, e.height, e.max_jump), (1, -2, 2, 1));
        let e = extrema(&oracle_coefficients(&triple(5, 7, 11)).unwrap());
        assert_eq!((e.a_plus, e.a_minus, e.height), (2, -3, 3));
    }

    #[test]
    fn jump_examples() {
        let ctx = FkContext::new(triple(3, 5, 7));
        let v = oracle_coefficients(&ctx.triple()).unwrap();
        assert_eq!(jump_decomposition(&ctx, 7).unwrap().difference(), -1);
        for n in 0..=ctx.degree() + 1 {
            let j = jump_decomposition(&ctx, n).unwrap();
            assert_eq!(j.difference(), v.get(n) - v.get(n - 1), "n = {n}");
            if v.get(n) == v.get(n - 1) {
                assert_eq!(j.n_plus, j.n_minus);
            }
        }
        assert!(jump_decomposition(&ctx, 50).is_err());
    }
}
