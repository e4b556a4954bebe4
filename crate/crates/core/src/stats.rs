//! Statistics over the `(p-1) x (p-1)` grid of inverse residue classes.
//!
//! Entry `(i, j)` is the height bound `min{2a + b*, p - b*}` for any triple
//! with `q^-1 = i` and `r^-1 = j (mod p)`. Averages and densities are exact
//! rationals; floats appear only when formatting.

use num_rational::Ratio;
use serde::Serialize;

use crate::arith::is_prime;
use crate::error::{Error, Result};
use crate::exec::{map_range, Execution};

pub type Rational = Ratio<i64>;

/// `(alpha, beta, beta*, bound)` for inverse residues `i`, `j` in `[1, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GridEntry {
    pub alpha: i64,
    pub beta: i64,
    pub beta_star: i64,
    pub bound: i64,
}

pub fn grid_entry(p: i64, i: i64, j: i64) -> GridEntry {
    let (small, big) = (i.min(j), i.max(j));
    let alpha = small.min(p - big);
    let beta = if big + small <= p { big } else { p - small };
    let beta_star = beta.min(p - beta);
    GridEntry {
        alpha,
        beta,
        beta_star,
        bound: (2 * alpha + beta_star).min(p - beta_star),
    }
}

fn check_odd_prime(p: u64) -> Result<()> {
    if p < 3 || !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueGrid {
    p: u64,
    values: Vec<u32>,
}

impl ResidueGrid {
    pub fn new(p: u64) -> Result<Self> {
        Self::build(p, Execution::default())
    }

    /// Builds the grid row by row, in parallel when `exec` allows.
    pub fn build(p: u64, exec: Execution) -> Result<Self> {
        check_odd_prime(p)?;
        let side = (p - 1) as usize;
        let pi = p as i64;
        let rows = map_range(side, exec, |row| {
            (0..side)
                .map(|col| grid_entry(pi, row as i64 + 1, col as i64 + 1).bound as u32)
                .collect::<Vec<_>>()
        });
        Ok(ResidueGrid {
            p,
            values: rows.concat(),
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn side(&self) -> usize {
        (self.p - 1) as usize
    }

    /// Entry for inverse residues `i`, `j` in `[1, p)`.
    pub fn get(&self, i: u64, j: u64) -> u32 {
        assert!((1..self.p).contains(&i) && (1..self.p).contains(&j));
        self.values[(i as usize - 1) * self.side() + j as usize - 1]
    }

    /// Iterates `(i, j, value)` in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (u64, u64, u32)> + '_ {
        let side = self.side();
        self.values
            .iter()
            .enumerate()
            .map(move |(idx, &v)| ((idx / side) as u64 + 1, (idx % side) as u64 + 1, v))
    }

    pub fn average(&self) -> Rational {
        let total: i64 = self.values.iter().map(|&v| v as i64).sum();
        Rational::new(total, self.values.len() as i64)
    }

    /// Fraction of cells with `value < c*p`.
    pub fn fraction_below(&self, c: Rational) -> Rational {
        let p = self.p as i64;
        let hits = self
            .values
            .iter()
            .filter(|&&v| Rational::from_integer(v as i64) < c * p)
            .count();
        Rational::new(hits as i64, self.values.len() as i64)
    }
}

/// Average of the grid; always at most `(p+1)/2`.
pub fn grid_average(p: u64) -> Result<Rational> {
    Ok(ResidueGrid::new(p)?.average())
}

/// The antidiagonal sum next to the value it is claimed to equal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AntidiagonalReport {
    pub k: i64,
    pub sum: i64,
    /// `(p+1)k/2`
    pub claimed: i64,
}

impl AntidiagonalReport {
    pub fn discrepancy(&self) -> i64 {
        self.sum - self.claimed
    }
}

/// `sum_{i=1}^{k} a(i, i + (p-1)/2 - k)` for `0 <= k <= (p-1)/2`.
pub fn antidiagonal_sum(p: u64, k: i64) -> Result<AntidiagonalReport> {
    check_odd_prime(p)?;
    let p = p as i64;
    let half = (p - 1) / 2;
    if !(0..=half).contains(&k) {
        return Err(Error::IndexOutOfRange { n: k, max: half });
    }
    let sum = (1..=k).map(|i| grid_entry(p, i, i + half - k).bound).sum();
    Ok(AntidiagonalReport {
        k,
        sum,
        claimed: (p + 1) * k / 2,
    })
}

/// Area of `{0 < x < y < 1/2, min{2x + y, 1 - y} < c}`.
pub fn closed_form_s(c: Rational) -> Result<Rational> {
    if c <= Rational::from_integer(0) {
        return Err(Error::NonPositiveThreshold);
    }
    let half = Rational::new(1, 2);
    let three_quarters = Rational::new(3, 4);
    Ok(if c < half {
        c * c / 6
    } else if c < three_quarters {
        let t = Rational::from_integer(3) - c * 4;
        Rational::new(1, 8) - t * t / 12
    } else {
        Rational::new(1, 8)
    })
}

/// Lower bound `8 S(c)` on the density of heights with `A/p < c`.
pub fn density_lower_bound(c: Rational) -> Result<Rational> {
    Ok(closed_form_s(c)? * 8)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DensitySummary {
    pub p: u64,
    pub c: Rational,
    pub empirical_fraction: Rational,
    pub closed_form_lower: Rational,
}

pub fn grid_density(p: u64, c: Rational) -> Result<DensitySummary> {
    let grid = ResidueGrid::new(p)?;
    density_on(&grid, c)
}

/// Density summary on an already built grid.
pub fn density_on(grid: &ResidueGrid, c: Rational) -> Result<DensitySummary> {
    let closed_form_lower = density_lower_bound(c)?;
    Ok(DensitySummary {
        p: grid.p(),
        c,
        empirical_fraction: grid.fraction_below(c),
        closed_form_lower,
    })
}

/// Cells where `alpha + beta* < (p-1)/2`, i.e. where the new bound is
/// strictly below Bachman's.
pub fn stronger_count(p: u64) -> Result<u64> {
    check_odd_prime(p)?;
    let pi = p as i64;
    let mut n = 0;
    for i in 1..pi {
        for j in 1..pi {
            let e = grid_entry(pi, i, j);
            if 2 * (e.alpha + e.beta_star) < pi - 1 {
                n += 1;
            }
        }
    }
    Ok(n)
}

/// `(p-3)(p-5)/2`
pub fn stronger_count_expected(p: u64) -> u64 {
    (p - 3) * p.saturating_sub(5) / 2
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn small_grids() {
        let g = ResidueGrid::new(3).unwrap();
        assert_eq!(g.side(), 2);
        assert!(g.entries().all(|(_, _, v)| v == 2));
        assert_eq!(
            grid_entry(3, 1, 2),
            GridEntry {
                alpha: 1,
                beta: 2,
                beta_star: 1,
                bound: 2
            }
        );
        assert_eq!(g.average(), r(2, 1));
        assert!(ResidueGrid::new(9).is_err());
        assert!(ResidueGrid::new(2).is_err());
    }

    #[test]
    fn grid_symmetries() {
        for p in crate::arith::primes_in(3, 101) {
            let g = ResidueGrid::new(p).unwrap();
            for (i, j, v) in g.entries() {
                assert_eq!(v, g.get(j, i));
                assert_eq!(v, g.get(p - i, p - j));
                assert!(1 <= v && (v as u64) < p);
            }
        }
    }

    #[test]
    fn grid_matches_context() {
        use crate::arith::TernaryTriple;
        use crate::bounds::bound_theorem_a;
        use crate::fkseq::FkContext;
        let ps = crate::arith::primes_in(3, 120);
        for (i, &p) in ps.iter().enumerate().take(6) {
            for (j, &q) in ps.iter().enumerate().skip(i + 1) {
                for &rr in &ps[j + 1..] {
                    let ctx = FkContext::new(TernaryTriple::new(p, q, rr).unwrap());
                    let e = grid_entry(p as i64, ctx.q_inv_p(), ctx.r_inv_p());
                    assert_eq!(
                        (e.alpha, e.beta, e.beta_star),
                        (ctx.alpha(), ctx.beta(), ctx.beta_star())
                    );
                    assert_eq!(e.bound, bound_theorem_a(&ctx));
                }
            }
        }
    }

    #[test]
    fn averages() {
        assert_eq!(grid_average(3).unwrap(), r(2, 1));
        assert!(grid_average(5).unwrap() <= r(3, 1));
        assert!(grid_average(199).unwrap() <= r(100, 1));
    }

    #[test]
    fn antidiagonal() {
        assert_eq!(antidiagonal_sum(7, 0).unwrap().sum, 0);
        assert_eq!(
            antidiagonal_sum(7, 1).unwrap(),
            AntidiagonalReport {
                k: 1,
                sum: 4,
                claimed: 4
            }
        );
        // frozen from a direct enumeration of the p = 11 grid
        let sums: Vec<i64> = (0..=5)
            .map(|k| antidiagonal_sum(11, k).unwrap().sum)
            .collect();
        assert_eq!(sums, vec![0, 6, 12, 18, 24, 30]);
        assert!(antidiagonal_sum(11, 6).is_err());
    }

    #[test]
    fn closed_forms() {
        assert_eq!(closed_form_s(r(2, 3)).unwrap(), r(25, 216));
        assert_eq!(density_lower_bound(r(2, 3)).unwrap(), r(25, 27));
        assert_eq!(closed_form_s(r(1, 2)).unwrap(), r(1, 24));
        assert_eq!(density_lower_bound(r(1, 2)).unwrap(), r(1, 3));
        assert_eq!(density_lower_bound(r(3, 4)).unwrap(), r(1, 1));
        assert_eq!(density_lower_bound(r(5, 1)).unwrap(), r(1, 1));
        assert_eq!(closed_form_s(r(0, 1)), Err(Error::NonPositiveThreshold));
        assert_eq!(closed_form_s(r(-1, 2)), Err(Error::NonPositiveThreshold));
        // both branches meet at the joints
        assert_eq!(r(1, 2) * r(1, 2) / 6, r(1, 24));
        let left_of_3_4 = {
            let t = r(3, 1) - r(3, 4) * 4;
            r(1, 8) - t * t / 12
        };
        assert_eq!(left_of_3_4, r(1, 8));
    }

    #[test]
    fn densities() {
        let d = grid_density(7, r(1, 1)).unwrap();
        assert_eq!(d.empirical_fraction, r(1, 1));
        let d = grid_density(199, r(2, 3)).unwrap();
        let (x, lim) = (d.empirical_fraction, r(25, 27));
        assert!(x - lim <= r(5, 100) && lim - x <= r(5, 100));
        assert!(grid_density(7, r(0, 1)).is_err());
    }

    #[test]
    fn stronger_counts() {
        assert_eq!(stronger_count(3).unwrap(), 0);
        assert_eq!(stronger_count(5).unwrap(), 0);
        assert_eq!(stronger_count(7).unwrap(), 4);
        assert_eq!(stronger_count(13).unwrap(), 40);
        assert_eq!(stronger_count_expected(13), 40);
        assert_eq!(stronger_count_expected(3), 0);
    }

    #[test]
    fn sequential_and_parallel_grids_agree() {
        let a = ResidueGrid::build(97, Execution::Sequential).unwrap();
        let b = ResidueGrid::build(97, Execution::Parallel).unwrap();
        assert_eq!(a, b);
    }
}
