use cyclo_core::bounds::{bound_bachman, bound_theorem_a, bound_theorem_m};
use cyclo_core::coeffs::{all_coefficients, coefficient_at, extrema, oracle_coefficients};
use cyclo_core::stats::{grid_average, stronger_count, stronger_count_expected, ResidueGrid};
use cyclo_core::sweep::{enumerate_triples, sweep};
use cyclo_core::verify::{verify_many, VerifyOptions};
use cyclo_core::{primes_in, Execution, FkContext, TernaryTriple};
use num_rational::Ratio;
use proptest::prelude::*;

fn small_triple() -> impl Strategy<Value = TernaryTriple> {
    proptest::sample::subsequence(primes_in(3, 120), 3)
        .prop_map(|v| TernaryTriple::new(v[0], v[1], v[2]).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn window_point_and_oracle_agree(t in small_triple()) {
        let ctx = FkContext::new(t);
        let oracle = oracle_coefficients(&t).unwrap();
        let window = all_coefficients(&ctx).unwrap();
        prop_assert_eq!(&window, &oracle);
        prop_assert!(oracle.is_palindrome() && oracle.is_monic());
        prop_assert_eq!(oracle.value_at_one(), 1);
        let step = (oracle.degree() / 97).max(1);
        for n in (0..=oracle.degree()).step_by(step) {
            prop_assert_eq!(coefficient_at(&ctx, n as i64).unwrap(), oracle.get(n as i64));
        }
    }

    #[test]
    fn heights_respect_bounds(t in small_triple()) {
        let ctx = FkContext::new(t);
        let ext = extrema(&all_coefficients(&ctx).unwrap());
        let (plus, minus) = bound_theorem_m(&ctx);
        prop_assert!(ext.a_plus as i64 <= plus);
        prop_assert!(-(ext.a_minus as i64) <= minus);
        prop_assert!(ext.height as i64 <= bound_theorem_a(&ctx));
        prop_assert!(bound_theorem_a(&ctx) <= bound_bachman(&ctx));
        prop_assert!(ext.max_jump <= 1);
    }
}

#[test]
fn sweep_is_the_same_either_way() {
    let triples = enumerate_triples(30_000, None).unwrap();
    assert!(triples.windows(2).all(|w| w[0] < w[1]));
    let seq = sweep(&triples, Execution::Sequential, false).unwrap();
    let par = sweep(&triples, Execution::Parallel, false).unwrap();
    assert_eq!(seq, par);
    assert!(seq
        .iter()
        .all(|r| r.a <= r.bound_new && r.bound_new <= r.bound_bachman));
}

#[test]
fn sampled_verification_is_reproducible() {
    let triples = enumerate_triples(5_000, None).unwrap();
    let opts = VerifyOptions {
        exhaustive: false,
        samples: 300,
        seed: 11,
    };
    let a = verify_many(&triples, &opts, Execution::Sequential);
    let b = verify_many(&triples, &opts, Execution::Parallel);
    assert!(
        a.all_passed(),
        "{:?}",
        a.checks.iter().find(|(_, t)| t.failed > 0)
    );
    assert_eq!(a, b);
}

#[test]
fn grids_for_small_primes() {
    for p in [5u64, 7, 11, 13, 17, 19, 23] {
        let grid = ResidueGrid::build(p, Execution::Parallel).unwrap();
        assert_eq!(grid, ResidueGrid::build(p, Execution::Sequential).unwrap());
        assert_eq!(grid.average(), grid_average(p).unwrap());
        assert!(grid.average() <= Ratio::new(p as i64 + 1, 2));
        assert_eq!(stronger_count(p).unwrap(), stronger_count_expected(p));
    }
}
