//! Height bounds in terms of `alpha`, `beta`, `beta*`, the classical bounds
//! they are compared against, and the window case analysis behind them.

use serde::Serialize;

use crate::arith::TernaryTriple;
use crate::coeffs::ExtremaSummary;
use crate::error::{Error, Result};
use crate::fkseq::FkContext;

/// `(A_+ bound, -A_- bound) = (min{2a+b, p-b}, min{p+2a-b, b})`.
pub fn bound_theorem_m(ctx: &FkContext) -> (i64, i64) {
    let (p, a, b) = (ctx.p(), ctx.alpha(), ctx.beta());
    ((2 * a + b).min(p - b), (p + 2 * a - b).min(b))
}

/// `min{2a + b*, p - b*}`
pub fn bound_theorem_a(ctx: &FkContext) -> i64 {
    let (p, a, bs) = (ctx.p(), ctx.alpha(), ctx.beta_star());
    (2 * a + bs).min(p - bs)
}

/// Bachman's bound `min{(p-1)/2 + a, p - b*}`.
pub fn bound_bachman(ctx: &FkContext) -> i64 {
    let (p, a, bs) = (ctx.p(), ctx.alpha(), ctx.beta_star());
    ((p - 1) / 2 + a).min(p - bs)
}

/// `(Bang, Beiter) = (p - 1, p - floor(p/4))`.
pub fn classic_bounds(p: u64) -> (u64, u64) {
    (p - 1, p - p / 4)
}

/// All bounds for one triple, optionally with the exact extremes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub triple: TernaryTriple,
    pub alpha: i64,
    pub beta: i64,
    pub beta_star: i64,
    pub bound_a_plus: i64,
    pub bound_a_minus: i64,
    pub bound_new: i64,
    pub bound_bachman: i64,
    pub bound_beiter: i64,
    pub bound_bang: i64,
    pub exact_a_plus: Option<i64>,
    pub exact_a_minus: Option<i64>,
    pub exact_a: Option<i64>,
    pub tight: bool,
}

impl BoundReport {
    pub fn new(ctx: &FkContext) -> Self {
        let (plus, minus) = bound_theorem_m(ctx);
        let (bang, beiter) = classic_bounds(ctx.p() as u64);
        BoundReport {
            triple: ctx.triple(),
            alpha: ctx.alpha(),
            beta: ctx.beta(),
            beta_star: ctx.beta_star(),
            bound_a_plus: plus,
            bound_a_minus: minus,
            bound_new: bound_theorem_a(ctx),
            bound_bachman: bound_bachman(ctx),
            bound_beiter: beiter as i64,
            bound_bang: bang as i64,
            exact_a_plus: None,
            exact_a_minus: None,
            exact_a: None,
            tight: false,
        }
    }

    pub fn with_extrema(mut self, e: &ExtremaSummary) -> Self {
        self.exact_a_plus = Some(e.a_plus as i64);
        self.exact_a_minus = Some(e.a_minus as i64);
        self.exact_a = Some(e.height as i64);
        self.tight = e.height as i64 == self.bound_new;
        self
    }

    /// Checks the asserted chain
    /// `A <= bound_new <= bound_bachman <= bound_bang` together with the
    /// one-sided bounds. Beiter's value only has to sit below Bang's for
    /// `p >= 5`; at `p = 3` it is reported as is.
    pub fn check(&self) -> Result<()> {
        let fail = |what: String| Err(Error::BoundViolation(format!("{}: {what}", self.triple)));
        if self.bound_new > self.bound_bachman {
            return fail(format!(
                "bound_new {} > bachman {}",
                self.bound_new, self.bound_bachman
            ));
        }
        if self.bound_bachman > self.bound_bang {
            return fail(format!(
                "bachman {} > bang {}",
                self.bound_bachman, self.bound_bang
            ));
        }
        if self.triple.p() >= 5 && self.bound_beiter > self.bound_bang {
            return fail(format!(
                "beiter {} > bang {}",
                self.bound_beiter, self.bound_bang
            ));
        }
        if let Some(a) = self.exact_a_plus {
            if a > self.bound_a_plus {
                return fail(format!("A+ = {a} > {}", self.bound_a_plus));
            }
        }
        if let Some(a) = self.exact_a_minus {
            if -a > self.bound_a_minus {
                return fail(format!("-A- = {} > {}", -a, self.bound_a_minus));
            }
        }
        if let Some(a) = self.exact_a {
            if a > self.bound_new {
                return fail(format!("A = {a} > {}", self.bound_new));
            }
        }
        Ok(())
    }
}

/// Rows of the case table for `(F_k, F_{k-q}, F_{k-r}, F_{k-q-r})`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CaseLabel {
    Case1,
    Case2,
    Case3a,
    Case3b,
    Case4,
    None,
}

impl CaseLabel {
    /// Contribution of the tuple to `a(n)`.
    pub fn contribution(self) -> i64 {
        match self {
            CaseLabel::Case1 | CaseLabel::Case3a | CaseLabel::Case3b => 1,
            CaseLabel::Case2 | CaseLabel::Case4 => -1,
            CaseLabel::None => 0,
        }
    }
}

pub fn classify_tuple(t: [u8; 4]) -> CaseLabel {
    match t {
        [0, 0, 1, 0] | [0, 1, 0, 0] | [0, 1, 1, 1] | [1, 1, 1, 0] => CaseLabel::Case1,
        [0, 0, 0, 1] | [1, 0, 0, 0] | [1, 0, 1, 1] | [1, 1, 0, 1] => CaseLabel::Case2,
        [0, 1, 1, 2] => CaseLabel::Case3a,
        [2, 1, 1, 0] => CaseLabel::Case3b,
        [1, 0, 2, 1] | [1, 2, 0, 1] => CaseLabel::Case4,
        _ => CaseLabel::None,
    }
}

fn case_tuple(ctx: &FkContext, k: i64) -> [u8; 4] {
    let (q, r) = (ctx.q(), ctx.r());
    [k, k - q, k - r, k - q - r].map(|j| ctx.fk_raw(j) as u8)
}

pub fn classify_case(ctx: &FkContext, k: i64) -> Result<CaseLabel> {
    ctx.check_window(k)?;
    ctx.check_window(k - ctx.q() - ctx.r())?;
    Ok(classify_tuple(case_tuple(ctx, k)))
}

/// Case occurrences over `k = n-p+1, ..., n`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct CaseCounts {
    pub c1: i64,
    pub c2: i64,
    pub c3a: i64,
    pub c3b: i64,
    pub c4: i64,
    /// `floor(n/qr) + 1`
    pub gamma: i64,
    /// `a(n)` from the zero-count window sum over the same tuples
    pub coefficient: i64,
}

impl CaseCounts {
    pub fn reconstructed(&self) -> i64 {
        self.c1 + self.c3a + self.c3b - self.c2 - self.c4
    }
}

/// Counts the cases in the window ending at `n` and checks every count bound.
pub fn case_counts(ctx: &FkContext, n: i64) -> Result<CaseCounts> {
    let deg = ctx.degree();
    if !(0..=deg).contains(&n) {
        return Err(Error::IndexOutOfRange { n, max: deg });
    }
    let mut cc = CaseCounts {
        gamma: n.div_euclid(ctx.q() * ctx.r()) + 1,
        ..Default::default()
    };
    let violation = |msg: String| {
        Err(Error::BoundViolation(format!(
            "{} n = {n}: {msg}",
            ctx.triple()
        )))
    };
    for k in n - ctx.p() + 1..=n {
        let t = case_tuple(ctx, k);
        let outer = (t[0] == 0) as i64 + (t[3] == 0) as i64;
        let inner = (t[1] == 0) as i64 + (t[2] == 0) as i64;
        let label = classify_tuple(t);
        if label.contribution() != outer - inner {
            return violation(format!(
                "tuple {t:?} labelled {label:?} but N0 difference is {}",
                outer - inner
            ));
        }
        let dd = t[0] as i64 - t[1] as i64 - t[2] as i64 + t[3] as i64;
        if dd.abs() > 1 {
            return violation(format!("tuple {t:?} has double difference {dd}"));
        }
        cc.coefficient += outer - inner;
        match label {
            CaseLabel::Case1 => cc.c1 += 1,
            CaseLabel::Case2 => cc.c2 += 1,
            CaseLabel::Case3a => cc.c3a += 1,
            CaseLabel::Case3b => cc.c3b += 1,
            CaseLabel::Case4 => cc.c4 += 1,
            CaseLabel::None => {}
        }
    }

    let (p, a, b) = (ctx.p(), ctx.alpha(), ctx.beta());
    let msum = ctx.big_m() + ctx.small_m();
    let c3_cap = (a + b).min(p - a - b);
    let c4_cap = (b - a).min(p + a - b);
    if cc.c1 > a || cc.c2 > a {
        return violation(format!("C1 = {}, C2 = {} exceed alpha = {a}", cc.c1, cc.c2));
    }
    if cc.c3a + cc.c3b > c3_cap {
        return violation(format!("C3 = {} exceeds {c3_cap}", cc.c3a + cc.c3b));
    }
    if cc.c4 > c4_cap {
        return violation(format!("C4 = {} exceeds {c4_cap}", cc.c4));
    }
    if msum <= p && cc.c3a != 0 {
        return violation(format!("C3a = {} with M + m <= p", cc.c3a));
    }
    if msum >= p && cc.c3b != 0 {
        return violation(format!("C3b = {} with M + m >= p", cc.c3b));
    }
    if cc.coefficient != cc.reconstructed() {
        return violation(format!(
            "a(n) = {} but cases give {}",
            cc.coefficient,
            cc.reconstructed()
        ));
    }
    if cc.coefficient > cc.c1 + cc.c3a + cc.c3b || -cc.coefficient > cc.c2 + cc.c4 {
        return violation(format!("a(n) = {} outside case bounds", cc.coefficient));
    }
    Ok(cc)
}

/// `+-1, +-a, +-b, +-c, +-d (mod p)` for `p = 2a+1 = 3b+-1 = 4c+-1 = 6d+-1`.
pub fn small_height_residues(p: u64) -> Result<Vec<u64>> {
    if p <= 3 {
        return Err(Error::RequiresPGreaterThan3(p));
    }
    let nearest = |m: u64| {
        if (p + 1).is_multiple_of(m) {
            (p + 1) / m
        } else {
            (p - 1) / m
        }
    };
    let bases = [1, (p - 1) / 2, nearest(3), nearest(4), nearest(6)];
    let mut out: Vec<u64> = bases.iter().flat_map(|&x| [x % p, p - x % p]).collect();
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// The guaranteed height for triples whose `q` and `r` residues both lie in
/// [`small_height_residues`]: 3 when both are `+-1 (mod p)`, 18 otherwise.
/// `None` when the hypothesis does not apply.
pub fn corollary_s_class(ctx: &FkContext) -> Result<Option<i64>> {
    let p = ctx.p() as u64;
    let allowed = small_height_residues(p)?;
    let (qm, rm) = (ctx.q() as u64 % p, ctx.r() as u64 % p);
    if !(allowed.contains(&qm) && allowed.contains(&rm)) {
        return Ok(None);
    }
    let unit = |x: u64| x == 1 || x == p - 1;
    let guarantee = if unit(qm) && unit(rm) { 3 } else { 18 };
    let implied = 2 * ctx.alpha() + ctx.beta_star();
    if implied > guarantee || bound_theorem_a(ctx) > guarantee {
        return Err(Error::BoundViolation(format!(
            "{}: 2*alpha + beta* = {implied} exceeds guarantee {guarantee}",
            ctx.triple()
        )));
    }
    Ok(Some(guarantee))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::{extrema, oracle_coefficients};

    fn ctx(p: u64, q: u64, r: u64) -> FkContext {
        FkContext::new(TernaryTriple::new(p, q, r).unwrap())
    }

    #[test]
    fn bound_examples() {
        let c = ctx(3, 5, 7);
        assert_eq!(bound_theorem_m(&c), (1, 2));
        assert_eq!(bound_theorem_a(&c), 2);
        assert_eq!(bound_bachman(&c), 2);
        let c = ctx(5, 7, 11);
        assert_eq!(bound_theorem_m(&c), (2, 3));
        assert_eq!(bound_theorem_a(&c), 3);
        assert_eq!(bound_bachman(&c), 3);
        assert_eq!(classic_bounds(3), (2, 3));
        assert_eq!(classic_bounds(5), (4, 4));
        assert_eq!(classic_bounds(7), (6, 6));
    }

    #[test]
    fn theorem_a_is_max_of_theorem_m() {
        let ps = crate::arith::primes_in(3, 60);
        for (i, &p) in ps.iter().enumerate() {
            for (j, &q) in ps.iter().enumerate().skip(i + 1) {
                for &r in &ps[j + 1..] {
                    let c = ctx(p, q, r);
                    let (plus, minus) = bound_theorem_m(&c);
                    assert!(plus >= 1 && minus >= 1);
                    assert_eq!(plus.max(minus), bound_theorem_a(&c), "{}", c.triple());
                    assert!(bound_theorem_a(&c) <= bound_bachman(&c));
                    let (a, bs, p) = (c.alpha(), c.beta_star(), c.p());
                    if 2 * (a + bs) < p - 1 {
                        assert!(bound_theorem_a(&c) < bound_bachman(&c));
                    } else {
                        assert_eq!(bound_theorem_a(&c), bound_bachman(&c));
                    }
                }
            }
        }
    }

    #[test]
    fn report_with_exact_values() {
        let c = ctx(3, 5, 7);
        let e = extrema(&oracle_coefficients(&c.triple()).unwrap());
        let rep = BoundReport::new(&c).with_extrema(&e);
        assert!(rep.tight);
        assert_eq!(rep.exact_a, Some(2));
        assert_eq!(rep.bound_beiter, 3);
        assert!(rep.check().is_ok());

        let mut broken = rep.clone();
        broken.exact_a_plus = Some(5);
        assert!(matches!(broken.check(), Err(Error::BoundViolation(_))));
    }

    #[test]
    fn tuple_table() {
        assert_eq!(classify_tuple([0, 1, 1, 2]), CaseLabel::Case3a);
        assert_eq!(classify_tuple([1, 1, 1, 1]), CaseLabel::None);
        assert_eq!(classify_tuple([1, 0, 0, 0]), CaseLabel::Case2);
        assert_eq!(classify_tuple([2, 1, 1, 0]), CaseLabel::Case3b);
        assert_eq!(classify_tuple([1, 2, 0, 1]), CaseLabel::Case4);
        // Labelled tuples carry the N0 difference in the table's last column.
        for code in 0..81u32 {
            let t = [code % 3, code / 3 % 3, code / 9 % 3, code / 27].map(|x| x as u8);
            let diff =
                (t[0] == 0) as i64 + (t[3] == 0) as i64 - (t[1] == 0) as i64 - (t[2] == 0) as i64;
            let label = classify_tuple(t);
            if label != CaseLabel::None {
                assert_eq!(label.contribution(), diff, "{t:?}");
            }
        }
    }

    #[test]
    fn case_counts_exhaustive() {
        for (p, q, r) in [(3, 5, 7), (3, 5, 11), (5, 7, 11)] {
            let c = ctx(p, q, r);
            let v = oracle_coefficients(&c.triple()).unwrap();
            for n in 0..=c.degree() {
                let cc = case_counts(&c, n).unwrap();
                assert_eq!(cc.coefficient, v.get(n) as i64);
            }
        }
        let c = ctx(3, 5, 7);
        let cc = case_counts(&c, 7).unwrap();
        assert!(cc.c2 + cc.c4 >= 2);
        assert!(case_counts(&c, 49).is_err());
    }

    #[test]
    fn classify_window() {
        let c = ctx(3, 5, 7);
        assert!(classify_case(&c, -70).is_err());
        assert!(classify_case(&c, 7).is_ok());
    }

    #[test]
    fn small_height_classes() {
        assert_eq!(
            small_height_residues(3),
            Err(Error::RequiresPGreaterThan3(3))
        );
        assert_eq!(small_height_residues(7).unwrap(), vec![1, 2, 3, 4, 5, 6]);
        // p = 13: a = 6, b = 4, c = 3, d = 2
        assert_eq!(
            small_height_residues(13).unwrap(),
            vec![1, 2, 3, 4, 6, 7, 9, 10, 11, 12]
        );

        // q = 11 = 1 (mod 5), r = 19 = 4 (mod 5)
        assert_eq!(corollary_s_class(&ctx(5, 11, 19)), Ok(Some(3)));
        // q = 17 = 3 (mod 7), r = 19 = 5 (mod 7)
        assert_eq!(corollary_s_class(&ctx(7, 17, 19)), Ok(Some(18)));
        assert_eq!(corollary_s_class(&ctx(7, 17, 31)), Ok(Some(18)));
        // q = 31 = 5 (mod 13) is outside the class
        assert_eq!(corollary_s_class(&ctx(13, 31, 53)), Ok(None));
        assert_eq!(
            corollary_s_class(&ctx(3, 5, 7)),
            Err(Error::RequiresPGreaterThan3(3))
        );
    }
}
