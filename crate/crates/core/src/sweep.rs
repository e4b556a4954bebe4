//! Per-triple analysis rows and the triple enumeration behind sweeps.

use std::time::Instant;

use serde::Serialize;

use crate::arith::{primes_in, TernaryTriple, PRODUCT_CAP};
use crate::bounds::{corollary_s_class, BoundReport};
use crate::coeffs::{all_coefficients, extrema};
use crate::error::{Error, Result};
use crate::exec::{map_ordered, Execution};
use crate::fkseq::FkContext;

/// All triples `p < q < r` of odd primes with `pqr <= pqr_max` (and
/// `p <= p_max` when given), sorted by `(p, q, r)`.
pub fn enumerate_triples(pqr_max: u64, p_max: Option<u64>) -> Result<Vec<TernaryTriple>> {
    if pqr_max > PRODUCT_CAP {
        return Err(Error::ProductTooLarge(pqr_max as u128));
    }
    let primes = primes_in(3, pqr_max / 15);
    let mut out = Vec::new();
    for (i, &p) in primes.iter().enumerate() {
        if p_max.is_some_and(|m| p > m) || p * (p + 2) * (p + 4) > pqr_max {
            break;
        }
        for (j, &q) in primes.iter().enumerate().skip(i + 1) {
            if p * q * (q + 2) > pqr_max {
                break;
            }
            for &r in &primes[j + 1..] {
                if p * q * r > pqr_max {
                    break;
                }
                out.push(TernaryTriple::new(p, q, r)?);
            }
        }
    }
    Ok(out)
}

/// One row of sweep output. Field names are the CSV header.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub p: u64,
    pub q: u64,
    pub r: u64,
    pub deg: u64,
    pub alpha: i64,
    pub beta: i64,
    pub beta_star: i64,
    pub a_plus: i64,
    pub a_minus: i64,
    pub a: i64,
    pub max_jump: i64,
    pub bound_new: i64,
    pub bound_bachman: i64,
    pub bound_beiter: i64,
    pub bound_bang: i64,
    pub tight_flag: bool,
    pub corollary_s_guarantee: Option<i64>,
    /// Only filled when timing is requested, so that default output is
    /// reproducible byte for byte.
    pub elapsed_ms: Option<f64>,
}

/// Computes the full coefficient vector of one triple and summarises it.
pub fn analyze_triple(triple: TernaryTriple, timed: bool) -> Result<SweepRow> {
    let start = Instant::now();
    let ctx = FkContext::new(triple);
    let coeffs = all_coefficients(&ctx)?;
    let ext = extrema(&coeffs);
    let report = BoundReport::new(&ctx).with_extrema(&ext);
    report.check()?;
    let guarantee = if triple.p() > 3 {
        corollary_s_class(&ctx)?
    } else {
        None
    };
    let elapsed = start.elapsed();
    Ok(SweepRow {
        p: triple.p(),
        q: triple.q(),
        r: triple.r(),
        deg: triple.degree(),
        alpha: report.alpha,
        beta: report.beta,
        beta_star: report.beta_star,
        a_plus: ext.a_plus as i64,
        a_minus: ext.a_minus as i64,
        a: ext.height as i64,
        max_jump: ext.max_jump as i64,
        bound_new: report.bound_new,
        bound_bachman: report.bound_bachman,
        bound_beiter: report.bound_beiter,
        bound_bang: report.bound_bang,
        tight_flag: report.tight,
        corollary_s_guarantee: guarantee,
        elapsed_ms: timed.then_some(elapsed.as_secs_f64() * 1e3),
    })
}

/// Analyzes every triple; rows come back in input order.
pub fn sweep(triples: &[TernaryTriple], exec: Execution, timed: bool) -> Result<Vec<SweepRow>> {
    map_ordered(triples, exec, |&t| analyze_triple(t, timed))
        .into_iter()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn keys(ts: &[TernaryTriple]) -> Vec<(u64, u64, u64)> {
        ts.iter().map(|t| (t.p(), t.q(), t.r())).collect()
    }

    #[test]
    fn enumeration_small_limits() {
        assert_eq!(
            keys(&enumerate_triples(105, None).unwrap()),
            vec![(3, 5, 7)]
        );
        assert!(enumerate_triples(104, None).unwrap().is_empty());
        let ts = enumerate_triples(1500, None).unwrap();
        // brute force over all prime triples below the limit
        let ps = primes_in(3, 100);
        let mut brute = Vec::new();
        for &p in &ps {
            for &q in &ps {
                for &r in &ps {
                    if p < q && q < r && p * q * r <= 1500 {
                        brute.push((p, q, r));
                    }
                }
            }
        }
        brute.sort_unstable();
        assert_eq!(keys(&ts), brute);
        assert!(keys(&ts).contains(&(5, 7, 11)));
        assert!(keys(&ts).contains(&(3, 5, 23)));
        assert!(enumerate_triples(1500, Some(3))
            .unwrap()
            .iter()
            .all(|t| t.p() == 3));
    }

    #[test]
    fn row_for_105() {
        let row = analyze_triple(TernaryTriple::new(3, 5, 7).unwrap(), false).unwrap();
        assert_eq!(
            (row.deg, row.a_plus, row.a_minus, row.a, row.max_jump),
            (48, 1, -2, 2, 1)
        );
        assert_eq!(
            (
                row.bound_new,
                row.bound_bachman,
                row.bound_beiter,
                row.bound_bang
            ),
            (2, 2, 3, 2)
        );
        assert!(row.tight_flag);
        assert_eq!(row.corollary_s_guarantee, None);
        assert_eq!(row.elapsed_ms, None);
    }

    #[test]
    fn sweep_is_order_stable() {
        let ts = enumerate_triples(20_000, None).unwrap();
        let seq = sweep(&ts, Execution::Sequential, false).unwrap();
        let par = sweep(&ts, Execution::Parallel, false).unwrap();
        assert_eq!(seq, par);
    }
}
