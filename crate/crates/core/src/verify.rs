//! Runs every identity and bound over a triple (or many) and tallies the
//! outcomes per check, keeping the first counterexample of each.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::TernaryTriple;
use crate::bounds::{
    bound_theorem_a, bound_theorem_m, case_counts, corollary_s_class, BoundReport,
};
use crate::coeffs::{
    all_coefficients, coefficient_at_variants, extrema, jump_decomposition, oracle_coefficients,
    CoefficientVector,
};
use crate::exec::{map_ordered, Execution};
use crate::fkseq::FkContext;

/// Check names, in report order.
pub const CHECKS: [&str; 18] = [
    "fk_values",
    "fk_stream",
    "lemma_02",
    "lemma_diff_q",
    "lemma_diff_r",
    "lemma_double_diff",
    "lemma_octuple",
    "oracle_equivalence",
    "coefficient_invariants",
    "lemma_n_forms",
    "theorem_m",
    "theorem_a",
    "bound_chain",
    "jump_one",
    "jump_decomposition",
    "case_counts",
    "corollary_s",
    "context",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Every `k` in the window and every `n` in `[0, deg]` instead of samples.
    pub exhaustive: bool,
    /// Sample size per sampled check when not exhaustive.
    pub samples: usize,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            exhaustive: false,
            samples: 2000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CheckTally {
    pub passed: u64,
    pub failed: u64,
    pub first_failure: Option<String>,
}

impl CheckTally {
    fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(detail());
            }
        }
    }

    fn merge(&mut self, other: &CheckTally) {
        self.passed += other.passed;
        self.failed += other.failed;
        if self.first_failure.is_none() {
            self.first_failure.clone_from(&other.first_failure);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub triples: u64,
    pub checks: Vec<(&'static str, CheckTally)>,
}

impl Default for VerificationReport {
    fn default() -> Self {
        VerificationReport {
            triples: 0,
            checks: CHECKS.iter().map(|&n| (n, CheckTally::default())).collect(),
        }
    }
}

impl VerificationReport {
    pub fn tally(&self, name: &str) -> &CheckTally {
        &self
            .checks
            .iter()
            .find(|(n, _)| *n == name)
            .expect("known check")
            .1
    }

    fn tally_mut(&mut self, name: &str) -> &mut CheckTally {
        &mut self
            .checks
            .iter_mut()
            .find(|(n, _)| *n == name)
            .expect("known check")
            .1
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|(_, t)| t.failed == 0)
    }

    pub fn failures(&self) -> u64 {
        self.checks.iter().map(|(_, t)| t.failed).sum()
    }

    pub fn merge(&mut self, other: &VerificationReport) {
        self.triples += other.triples;
        for (name, t) in &other.checks {
            self.tally_mut(name).merge(t);
        }
    }
}

fn indices(lo: i64, hi: i64, opts: &VerifyOptions, rng: &mut ChaCha8Rng) -> Vec<i64> {
    if lo > hi {
        return Vec::new();
    }
    if opts.exhaustive || (hi - lo + 1) as usize <= opts.samples {
        (lo..=hi).collect()
    } else {
        (0..opts.samples).map(|_| rng.gen_range(lo..=hi)).collect()
    }
}

/// Compares streamed `F` values starting at `lo` with pointwise evaluation.
pub fn check_fk_sequence(ctx: &FkContext, lo: i64, values: &[u8], tally: &mut CheckTally) {
    for (i, &v) in values.iter().enumerate() {
        let k = lo + i as i64;
        let expected = ctx.fk_raw(k);
        tally.record(v as i64 == expected, || {
            format!(
                "{} k = {k}: streamed {v}, pointwise {expected}",
                ctx.triple()
            )
        });
    }
}

/// Entrywise comparison of a candidate vector with the oracle.
pub fn check_against_oracle(
    candidate: &CoefficientVector,
    oracle: &CoefficientVector,
    tally: &mut CheckTally,
) {
    let (a, b) = (candidate.as_slice(), oracle.as_slice());
    let mismatch = (0..a.len().max(b.len())).find(|&i| a.get(i) != b.get(i));
    tally.record(mismatch.is_none(), || {
        let i = mismatch.unwrap_or_default();
        format!(
            "{} n = {i}: window {:?}, oracle {:?}",
            oracle.triple(),
            a.get(i),
            b.get(i)
        )
    });
}

pub fn verify_triple(triple: TernaryTriple, opts: &VerifyOptions) -> VerificationReport {
    let mut rep = VerificationReport {
        triples: 1,
        ..Default::default()
    };
    let ctx = FkContext::new(triple);
    let seed = opts.seed ^ (triple.p() << 42) ^ (triple.q() << 21) ^ triple.r();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (p, q, r) = (ctx.p(), ctx.q(), ctx.r());
    let (wlo, whi) = ctx.window();
    let (lo, hi) = (wlo + 1, whi - 1);
    let tag = |k: i64| format!("{triple} k = {k}");

    {
        let t = rep.tally_mut("context");
        let prod = (ctx.alpha() * ctx.beta()) as i128 * (q * r) as i128;
        t.record(prod.rem_euclid(p as i128) == 1, || {
            format!("{triple}: alpha*beta*qr != 1 mod p")
        });
        t.record(
            1 <= ctx.alpha() && ctx.alpha() <= ctx.beta_star() && ctx.beta_star() <= (p - 1) / 2,
            || format!("{triple}: 1 <= alpha <= beta* <= (p-1)/2 fails"),
        );
    }

    // F_k and its lemmas
    let ks = indices(lo, hi, opts, &mut rng);
    for &k in &ks {
        let f = ctx.fk_raw(k);
        rep.tally_mut("fk_values")
            .record((0..=2).contains(&f), || format!("{} F = {f}", tag(k)));
        let ok = ctx.check_lemma_02(k).unwrap_or(false);
        rep.tally_mut("lemma_02").record(ok, || tag(k));
        if ctx.in_window(k - q) {
            let (case, direct) = (ctx.fk_diff_q(k).unwrap(), f - ctx.fk_raw(k - q));
            rep.tally_mut("lemma_diff_q").record(case == direct, || {
                format!("{}: case {case}, direct {direct}", tag(k))
            });
        }
        if ctx.in_window(k - r) {
            let (case, direct) = (ctx.fk_diff_r(k).unwrap(), f - ctx.fk_raw(k - r));
            rep.tally_mut("lemma_diff_r").record(case == direct, || {
                format!("{}: case {case}, direct {direct}", tag(k))
            });
        }
        if ctx.in_window(k - q - r) {
            let case = ctx.fk_double_diff(k).unwrap();
            let direct = f - ctx.fk_raw(k - q) - ctx.fk_raw(k - r) + ctx.fk_raw(k - q - r);
            rep.tally_mut("lemma_double_diff")
                .record(case == direct, || {
                    format!("{}: case {case}, direct {direct}", tag(k))
                });
        }
        if ctx.in_window(k - p - q - r) {
            let ok = ctx.check_octuple_identity(k).unwrap_or(false);
            rep.tally_mut("lemma_octuple").record(ok, || tag(k));
        }
    }
    if opts.exhaustive {
        let values = ctx.fk_range(lo, hi).expect("window bounds");
        check_fk_sequence(&ctx, lo, &values, rep.tally_mut("fk_stream"));
    } else {
        for _ in 0..8 {
            let start = rng.gen_range(lo..=hi);
            let end = (start + 255).min(hi);
            let values = ctx.fk_range(start, end).expect("window bounds");
            check_fk_sequence(&ctx, start, &values, rep.tally_mut("fk_stream"));
        }
    }

    // Coefficients
    let (window, oracle) = match (all_coefficients(&ctx), oracle_coefficients(&triple)) {
        (Ok(w), Ok(o)) => (w, o),
        (Err(e), _) | (_, Err(e)) => {
            rep.tally_mut("oracle_equivalence")
                .record(false, || format!("{triple}: {e}"));
            return rep;
        }
    };
    check_against_oracle(&window, &oracle, rep.tally_mut("oracle_equivalence"));
    let v = &oracle;
    let ext = extrema(v);
    {
        let t = rep.tally_mut("coefficient_invariants");
        t.record(v.is_monic(), || format!("{triple}: not monic"));
        t.record(v.is_palindrome(), || format!("{triple}: not palindromic"));
        t.record(v.value_at_one() == 1, || {
            format!("{triple}: Phi(1) = {}", v.value_at_one())
        });
        t.record((ext.height as i64) < p, || {
            format!("{triple}: A = {} >= p", ext.height)
        });
    }

    let deg = ctx.degree();
    for n in indices(0, deg, opts, &mut rng) {
        let forms = coefficient_at_variants(&ctx, n);
        let expected = v.get(n);
        rep.tally_mut("lemma_n_forms").record(
            matches!(forms, Ok(f) if f.agree() && f.via_n0 == expected),
            || format!("{triple} n = {n}: {forms:?}, oracle {expected}"),
        );
    }

    let report = BoundReport::new(&ctx).with_extrema(&ext);
    let (plus, minus) = bound_theorem_m(&ctx);
    let (ap, am, a) = (ext.a_plus as i64, ext.a_minus as i64, ext.height as i64);
    rep.tally_mut("theorem_m")
        .record(ap <= plus && -am <= minus, || {
            format!("{triple}: A+ = {ap} vs {plus}, -A- = {} vs {minus}", -am)
        });
    let new = bound_theorem_a(&ctx);
    rep.tally_mut("theorem_a")
        .record(a <= new, || format!("{triple}: A = {a} > {new}"));
    rep.tally_mut("bound_chain")
        .record(report.check().is_ok(), || format!("{:?}", report.check()));
    rep.tally_mut("jump_one").record(ext.max_jump <= 1, || {
        format!("{triple}: max jump {}", ext.max_jump)
    });

    for n in indices(0, deg + 1, opts, &mut rng) {
        let expected = v.get(n) - v.get(n - 1);
        let dec = jump_decomposition(&ctx, n);
        let ok = matches!(dec, Ok(d) if d.difference() == expected
            && !matches!((d.n_plus, d.n_minus), (0, 4) | (4, 0)));
        rep.tally_mut("jump_decomposition").record(ok, || {
            format!("{triple} n = {n}: {dec:?}, difference {expected}")
        });
    }

    for n in indices(0, deg, opts, &mut rng) {
        let cc = case_counts(&ctx, n);
        let ok = matches!(cc, Ok(c) if c.coefficient == v.get(n) as i64);
        rep.tally_mut("case_counts")
            .record(ok, || format!("{triple} n = {n}: {cc:?}"));
    }

    if p > 3 {
        match corollary_s_class(&ctx) {
            Ok(Some(g)) => rep
                .tally_mut("corollary_s")
                .record(a <= g, || format!("{triple}: A = {a} > {g}")),
            Ok(None) => {}
            Err(e) => rep
                .tally_mut("corollary_s")
                .record(false, || format!("{triple}: {e}")),
        }
    }
    rep
}

/// Verifies many triples; tallies merge in input order.
pub fn verify_many(
    triples: &[TernaryTriple],
    opts: &VerifyOptions,
    exec: Execution,
) -> VerificationReport {
    map_ordered(triples, exec, |&t| verify_triple(t, opts))
        .iter()
        .fold(VerificationReport::default(), |mut acc, r| {
            acc.merge(r);
            acc
        })
}
