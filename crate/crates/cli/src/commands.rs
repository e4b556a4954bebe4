use std::fmt::Write as _;
use std::time::Instant;

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use cyclo_core::coeffs::{
    all_coefficients, coefficient_at, extrema, oracle_coefficients, CoefficientVector,
};
use cyclo_core::stats::{
    antidiagonal_sum, density_on, grid_entry, stronger_count, stronger_count_expected, ResidueGrid,
};
use cyclo_core::sweep::{enumerate_triples, sweep as run_sweep};
use cyclo_core::verify::{verify_many, VerifyOptions};
use cyclo_core::{Execution, FkContext, Rational, TernaryTriple};

use crate::args::{
    BenchArgs, ComputeArgs, Format, GridArgs, Method, RangeArgs, SweepArgs, VerifyArgs,
};
use crate::output::{emit, ratio_decimal, ratio_string, render_json, render_rows, write_atomic};
use crate::CliError;

/// Runs `f` inside a pool of `workers` threads. One worker means sequential.
pub fn with_workers<F>(workers: Option<usize>, f: F) -> Result<(), CliError>
where
    F: FnOnce(Execution) -> Result<(), CliError> + Send,
{
    if workers == Some(1) {
        return f(Execution::Sequential);
    }
    #[cfg(feature = "parallel")]
    {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(n) = workers {
            builder = builder.num_threads(n);
        }
        let pool = builder
            .build()
            .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
        pool.install(|| f(Execution::Parallel))
    }
    #[cfg(not(feature = "parallel"))]
    f(Execution::Sequential)
}

fn triple_from(values: &[u64]) -> Result<TernaryTriple, CliError> {
    match values {
        [p, q, r] => Ok(TernaryTriple::new(*p, *q, *r)?),
        _ => Err(CliError::Usage(format!(
            "expected three primes p q r, got {} values",
            values.len()
        ))),
    }
}

fn range_triples(range: &RangeArgs) -> Result<Vec<TernaryTriple>, CliError> {
    let pqr_max = range
        .pqr_max
        .ok_or_else(|| CliError::Usage("--pqr-max is required".into()))?;
    Ok(enumerate_triples(pqr_max, range.p_max)?)
}

#[derive(Serialize)]
struct CoefficientRow {
    n: i64,
    value: i32,
}

#[derive(Serialize)]
struct ComputeJson<'a> {
    p: u64,
    q: u64,
    r: u64,
    deg: usize,
    method: &'static str,
    a_plus: Option<i32>,
    a_minus: Option<i32>,
    height: Option<i32>,
    max_jump: Option<i32>,
    coefficients: &'a [CoefficientRow],
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Oracle => "oracle",
        Method::Fk => "fk",
        Method::Both => "both",
    }
}

fn full_vector(triple: &TernaryTriple, method: Method) -> Result<CoefficientVector, CliError> {
    let fk = || -> Result<CoefficientVector, CliError> {
        Ok(all_coefficients(&FkContext::new(*triple))?)
    };
    match method {
        Method::Oracle => Ok(oracle_coefficients(triple)?),
        Method::Fk => fk(),
        Method::Both => {
            let oracle = oracle_coefficients(triple)?;
            let window = fk()?;
            if let Some(n) =
                (0..=oracle.degree()).find(|&n| oracle.as_slice()[n] != window.as_slice()[n])
            {
                return Err(CliError::Verification(format!(
                    "{triple}: a({n}) is {} by the oracle but {} by F_k counting",
                    oracle.as_slice()[n],
                    window.as_slice()[n]
                )));
            }
            Ok(window)
        }
    }
}

fn single_coefficient(triple: &TernaryTriple, method: Method, n: i64) -> Result<i32, CliError> {
    let deg = triple.degree() as i64;
    if !(0..=deg).contains(&n) {
        return Err(CliError::Usage(format!("--at {n} is outside [0, {deg}]")));
    }
    let ctx = FkContext::new(*triple);
    match method {
        Method::Fk => Ok(coefficient_at(&ctx, n)?),
        Method::Oracle => Ok(oracle_coefficients(triple)?.get(n)),
        Method::Both => {
            let a = coefficient_at(&ctx, n)?;
            let b = oracle_coefficients(triple)?.get(n);
            if a != b {
                return Err(CliError::Verification(format!(
                    "{triple}: a({n}) is {b} by the oracle but {a} by F_k counting"
                )));
            }
            Ok(a)
        }
    }
}

pub fn compute(a: ComputeArgs) -> Result<(), CliError> {
    let triple = triple_from(&[a.triple.p, a.triple.q, a.triple.r])?;
    let (rows, summary) = match a.at {
        Some(n) => (
            vec![CoefficientRow {
                n,
                value: single_coefficient(&triple, a.method, n)?,
            }],
            None,
        ),
        None => {
            let v = full_vector(&triple, a.method)?;
            let rows = v
                .as_slice()
                .iter()
                .enumerate()
                .map(|(n, &value)| CoefficientRow { n: n as i64, value })
                .collect();
            (rows, Some(extrema(&v)))
        }
    };
    let bytes = match a.output.format {
        Format::Csv => render_rows(&rows, Format::Csv)?,
        Format::Json => render_json(&ComputeJson {
            p: triple.p(),
            q: triple.q(),
            r: triple.r(),
            deg: triple.degree() as usize,
            method: method_name(a.method),
            a_plus: summary.map(|s| s.a_plus),
            a_minus: summary.map(|s| s.a_minus),
            height: summary.map(|s| s.height),
            max_jump: summary.map(|s| s.max_jump),
            coefficients: &rows,
        })?,
    };
    emit(&a.output, &bytes)?;
    if let (Some(s), Format::Csv) = (summary, a.output.format) {
        eprintln!(
            "{triple}: A+ = {}, A- = {}, A = {}, max jump = {}",
            s.a_plus, s.a_minus, s.height, s.max_jump
        );
    }
    Ok(())
}

#[derive(Serialize)]
struct CheckRow<'a> {
    check: &'a str,
    passed: u64,
    failed: u64,
    first_failure: &'a str,
}

pub fn verify(a: VerifyArgs, exec: Execution) -> Result<(), CliError> {
    let triples = if a.sweep {
        if !a.triple.is_empty() {
            return Err(CliError::Usage(
                "give either p q r or --sweep, not both".into(),
            ));
        }
        range_triples(&a.range)?
    } else {
        vec![triple_from(&a.triple)?]
    };
    let opts = VerifyOptions {
        exhaustive: a.exhaustive,
        samples: a.samples,
        seed: a.seed,
    };
    let report = verify_many(&triples, &opts, exec);
    let bytes = match a.output.format {
        Format::Json => render_json(&report)?,
        Format::Csv => {
            let rows: Vec<CheckRow> = report
                .checks
                .iter()
                .map(|(name, t)| CheckRow {
                    check: name,
                    passed: t.passed,
                    failed: t.failed,
                    first_failure: t.first_failure.as_deref().unwrap_or(""),
                })
                .collect();
            render_rows(&rows, Format::Csv)?
        }
    };
    emit(&a.output, &bytes)?;
    if report.all_passed() {
        eprintln!("{} triple(s): all checks passed", report.triples);
        Ok(())
    } else {
        let first = report
            .checks
            .iter()
            .find_map(|(name, t)| t.first_failure.as_ref().map(|f| format!("{name}: {f}")))
            .unwrap_or_default();
        Err(CliError::Verification(format!(
            "{} failed check(s); first {first}",
            report.failures()
        )))
    }
}

pub fn sweep(a: SweepArgs, exec: Execution) -> Result<(), CliError> {
    let triples = range_triples(&a.range)?;
    let rows = run_sweep(&triples, exec, a.timings)?;
    emit(&a.output, &render_rows(&rows, a.output.format)?)?;
    if let Some(bad) = rows.iter().find(|r| r.a > r.bound_new) {
        return Err(CliError::Verification(format!(
            "({}, {}, {}): height {} exceeds bound {}",
            bad.p, bad.q, bad.r, bad.a, bad.bound_new
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct MetricRow {
    metric: &'static str,
    param: String,
    exact: String,
    decimal: f64,
}

impl MetricRow {
    fn new(metric: &'static str, param: String, value: Rational) -> Self {
        MetricRow {
            metric,
            param,
            exact: ratio_string(value),
            decimal: ratio_decimal(value),
        }
    }
}

#[derive(Serialize)]
struct DensityJson {
    c: String,
    c_decimal: f64,
    empirical_fraction: String,
    empirical_decimal: f64,
    closed_form_lower: String,
    closed_form_lower_decimal: f64,
}

#[derive(Serialize)]
struct AntidiagonalJson {
    k: i64,
    sum: i64,
    claimed: i64,
    discrepancy: i64,
}

#[derive(Serialize)]
struct GridJson {
    p: u64,
    cells: u64,
    average: String,
    average_decimal: f64,
    average_bound: String,
    stronger_count: u64,
    stronger_expected: u64,
    densities: Vec<DensityJson>,
    antidiagonals: Vec<AntidiagonalJson>,
}

fn default_thresholds() -> Vec<Rational> {
    vec![Ratio::new(1, 2), Ratio::new(2, 3), Ratio::new(3, 4)]
}

pub fn grid(a: GridArgs, exec: Execution) -> Result<(), CliError> {
    let p = a.p;
    let grid = ResidueGrid::build(p, exec)?;
    let thresholds = if a.thresholds.is_empty() {
        default_thresholds()
    } else {
        a.thresholds.clone()
    };
    let densities = thresholds
        .iter()
        .map(|&c| density_on(&grid, c))
        .collect::<Result<Vec<_>, _>>()?;
    let average = grid.average();
    let average_bound = Ratio::new(p as i64 + 1, 2);
    let pi = p as i64;
    let stronger = stronger_count(p)?;
    let expected = stronger_count_expected(p);
    let antidiagonals = (1..=(pi - 1) / 2)
        .map(|k| antidiagonal_sum(p, k))
        .collect::<Result<Vec<_>, _>>()?;
    let cells = (grid.side() * grid.side()) as u64;

    let bytes = match a.output.format {
        Format::Csv => {
            let int = |x: u64| Ratio::from_integer(x as i64);
            let mut rows = vec![
                MetricRow::new("cells", String::new(), int(cells)),
                MetricRow::new("average", String::new(), average),
                MetricRow::new("average_bound", String::new(), average_bound),
                MetricRow::new("stronger_count", String::new(), int(stronger)),
                MetricRow::new("stronger_expected", String::new(), int(expected)),
            ];
            for d in &densities {
                rows.push(MetricRow::new(
                    "density",
                    ratio_string(d.c),
                    d.empirical_fraction,
                ));
                rows.push(MetricRow::new(
                    "density_lower",
                    ratio_string(d.c),
                    d.closed_form_lower,
                ));
            }
            for r in &antidiagonals {
                rows.push(MetricRow::new(
                    "antidiagonal_sum",
                    r.k.to_string(),
                    Ratio::from_integer(r.sum),
                ));
                rows.push(MetricRow::new(
                    "antidiagonal_claimed",
                    r.k.to_string(),
                    Ratio::from_integer(r.claimed),
                ));
            }
            render_rows(&rows, Format::Csv)?
        }
        Format::Json => render_json(&GridJson {
            p,
            cells,
            average: ratio_string(average),
            average_decimal: ratio_decimal(average),
            average_bound: ratio_string(average_bound),
            stronger_count: stronger,
            stronger_expected: expected,
            densities: densities
                .iter()
                .map(|d| DensityJson {
                    c: ratio_string(d.c),
                    c_decimal: ratio_decimal(d.c),
                    empirical_fraction: ratio_string(d.empirical_fraction),
                    empirical_decimal: ratio_decimal(d.empirical_fraction),
                    closed_form_lower: ratio_string(d.closed_form_lower),
                    closed_form_lower_decimal: ratio_decimal(d.closed_form_lower),
                })
                .collect(),
            antidiagonals: antidiagonals
                .iter()
                .map(|r| AntidiagonalJson {
                    k: r.k,
                    sum: r.sum,
                    claimed: r.claimed,
                    discrepancy: r.discrepancy(),
                })
                .collect(),
        })?,
    };
    emit(&a.output, &bytes)?;

    if let Some(path) = &a.grid_csv {
        let mut text = String::from("i,j,alpha,beta,beta_star,bound\n");
        for (i, j, _) in grid.entries() {
            let e = grid_entry(pi, i as i64, j as i64);
            let _ = writeln!(
                text,
                "{i},{j},{},{},{},{}",
                e.alpha, e.beta, e.beta_star, e.bound
            );
        }
        write_atomic(path, text.as_bytes())?;
    }

    if stronger != expected {
        return Err(CliError::Verification(format!(
            "p = {p}: {stronger} cells beat Bachman's bound, expected {expected}"
        )));
    }
    if average > average_bound {
        return Err(CliError::Verification(format!(
            "p = {p}: grid average {} exceeds {}",
            ratio_string(average),
            ratio_string(average_bound)
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct BenchRow {
    p: u64,
    q: u64,
    r: u64,
    deg: u64,
    method: &'static str,
    seconds: f64,
    coeffs_per_sec: f64,
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed().as_secs_f64())
}

fn bench_triple(
    triple: TernaryTriple,
    point: bool,
    rows: &mut Vec<BenchRow>,
) -> Result<(), CliError> {
    let ctx = FkContext::new(triple);
    let deg = triple.degree();
    let mut push = |method, seconds: f64| {
        rows.push(BenchRow {
            p: triple.p(),
            q: triple.q(),
            r: triple.r(),
            deg,
            method,
            seconds,
            coeffs_per_sec: if seconds > 0.0 {
                (deg + 1) as f64 / seconds
            } else {
                f64::INFINITY
            },
        })
    };
    let (oracle, t_oracle) = timed(|| oracle_coefficients(&triple));
    let oracle = oracle?;
    let (window, t_window) = timed(|| all_coefficients(&ctx));
    let window = window?;
    if oracle != window {
        return Err(CliError::Verification(format!(
            "{triple}: window and oracle vectors differ"
        )));
    }
    push("oracle", t_oracle);
    push("fk_window", t_window);
    if point {
        let (values, t_point) = timed(|| {
            (0..=deg as i64)
                .map(|n| coefficient_at(&ctx, n))
                .collect::<Result<Vec<_>, _>>()
        });
        if values?.as_slice() != oracle.as_slice() {
            return Err(CliError::Verification(format!(
                "{triple}: point queries and oracle differ"
            )));
        }
        push("fk_point", t_point);
    }
    Ok(())
}

pub fn bench(a: BenchArgs) -> Result<(), CliError> {
    let triples = if a.triple.is_empty() {
        let mut all = range_triples(&a.range)?;
        if all.is_empty() {
            return Err(CliError::Usage("no triples in range".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
        all.shuffle(&mut rng);
        all.truncate(a.sample.max(1));
        all.sort();
        all
    } else {
        vec![triple_from(&a.triple)?]
    };
    let mut rows = Vec::new();
    for t in triples {
        bench_triple(t, !a.no_point, &mut rows)?;
    }
    emit(&a.output, &render_rows(&rows, a.output.format)?)
}
