//! Exact right-sided permutation tests and Holm's step-down adjustment.
//!
//! The null distribution is obtained by scanning all `n!` rearrangements of
//! the score vector in lexicographic order of index arrays. Rearrangements
//! whose statistic ties with the observed one count toward the right tail.

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kendall::{
    dense_ranks, pairs, score, score_permuted, serialize_rational, Rational, TieStructure,
    MAX_EXHAUSTIVE_N,
};
use crate::permutation::{factorial, next_permutation, DistanceMeasure};

/// How statistics are compared against the observed value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum Arithmetic {
    /// Exact rationals; equal statistics always tie.
    #[default]
    Exact,
    /// Each tau as the `f64` quotient `(n_c - n_d) / C(n, 2)` and differences
    /// by `f64` subtraction, as a naive floating-point implementation would.
    /// Algebraically equal differences may then fail to tie, which lowers
    /// some p-values of difference tests.
    ReferenceFloat,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TestResult {
    #[serde(serialize_with = "serialize_rational")]
    pub statistic: Rational,
    /// Rearrangements with a statistic at least as large as the observed one.
    pub tail_count: u64,
    /// Rearrangements with exactly the observed statistic.
    pub m_at_stat: u64,
    /// `n!`.
    pub permutations: u64,
    #[serde(serialize_with = "serialize_rational")]
    pub right_p: Rational,
    /// The p-value equals the floor implied by the ties of `x`, which happens
    /// exactly when tau reaches its ceiling for that measure. Always `false`
    /// for difference tests.
    pub is_min_p_given_measure: bool,
}

impl TestResult {
    pub fn right_p_f64(&self) -> f64 {
        self.right_p.to_f64().unwrap_or(f64::NAN)
    }
}

fn check_inputs(vectors: &[&[f64]], y: &[f64]) -> Result<()> {
    for x in vectors {
        if x.len() != y.len() {
            return Err(Error::Input(format!(
                "length mismatch: {} vs {}",
                x.len(),
                y.len()
            )));
        }
    }
    if y.len() < 2 {
        return Err(Error::Input(format!(
            "need at least 2 observations, got {}",
            y.len()
        )));
    }
    if y.len() > MAX_EXHAUSTIVE_N {
        return Err(Error::Size {
            what: "exact permutation test",
            size: y.len(),
            min: 2,
            max: MAX_EXHAUSTIVE_N,
        });
    }
    for v in vectors.iter().copied().chain(std::iter::once(y)) {
        if let Some(bad) = v.iter().find(|v| !v.is_finite()) {
            return Err(Error::Input(format!("non-finite value {bad}")));
        }
    }
    Ok(())
}

/// `prod t_i! / n!`: the smallest right p-value any score can reach against
/// a predictor with these ties.
pub fn pvalue_floor(ties: &TieStructure) -> Rational {
    let n = ties.n();
    Rational::new(ties.permutation_multiplicity() as i64, factorial(n) as i64)
}

/// Smallest attainable right p-value for `measure` over all orders of its
/// alphabet, assuming distinct scores: 1/180 for `d`, 1/90 for `p`, 1/6 for
/// `c` with three constituents.
pub fn pvalue_lower_bound(measure: &DistanceMeasure) -> Result<Rational> {
    let orders = measure.canonical().alphabet().orders()?;
    let values = measure.values(&orders)?;
    Ok(pvalue_floor(&TieStructure::of(&values)?))
}

/// Exact right p-value of `tau_a(x, y)` over every rearrangement of `y`.
pub fn exact_right_pvalue(x: &[f64], y: &[f64]) -> Result<TestResult> {
    check_inputs(&[x], y)?;
    let n = y.len();
    let xr = dense_ranks(x);
    let yr = dense_ranks(y);
    let observed = score(&xr, &yr);
    let (tail, equal) = scan(n, |perm| score_permuted(&xr, &yr, perm).cmp(&observed));
    let permutations = factorial(n) as u64;
    let right_p = Rational::new(tail as i64, permutations as i64);
    let ties = TieStructure::of(x)?;
    Ok(TestResult {
        statistic: Rational::new(observed, pairs(n)),
        tail_count: tail,
        m_at_stat: equal,
        permutations,
        right_p,
        is_min_p_given_measure: right_p == pvalue_floor(&ties),
    })
}

/// Exact right p-value of `tau_a(x1, y) - tau_a(x2, y)`.
pub fn exact_diff_right_pvalue(x1: &[f64], x2: &[f64], y: &[f64]) -> Result<TestResult> {
    exact_diff_right_pvalue_with(x1, x2, y, Arithmetic::Exact)
}

pub fn exact_diff_right_pvalue_with(
    x1: &[f64],
    x2: &[f64],
    y: &[f64],
    arithmetic: Arithmetic,
) -> Result<TestResult> {
    check_inputs(&[x1, x2], y)?;
    let n = y.len();
    let a = dense_ranks(x1);
    let b = dense_ranks(x2);
    let yr = dense_ranks(y);
    let observed = score(&a, &yr) - score(&b, &yr);
    let (tail, equal) = match arithmetic {
        Arithmetic::Exact => scan(n, |perm| {
            (score_permuted(&a, &yr, perm) - score_permuted(&b, &yr, perm)).cmp(&observed)
        }),
        Arithmetic::ReferenceFloat => {
            let total = pairs(n) as f64;
            let float_diff = |sa: i64, sb: i64| sa as f64 / total - sb as f64 / total;
            let observed_f = float_diff(score(&a, &yr), score(&b, &yr));
            scan(n, |perm| {
                let v = float_diff(score_permuted(&a, &yr, perm), score_permuted(&b, &yr, perm));
                v.partial_cmp(&observed_f).expect("finite")
            })
        }
    };
    let permutations = factorial(n) as u64;
    Ok(TestResult {
        statistic: Rational::new(observed, pairs(n)),
        tail_count: tail,
        m_at_stat: equal,
        permutations,
        right_p: Rational::new(tail as i64, permutations as i64),
        is_min_p_given_measure: false,
    })
}

/// Counts rearrangements comparing `>=` and `==` to the observed statistic.
fn scan(n: usize, mut cmp: impl FnMut(&[usize]) -> std::cmp::Ordering) -> (u64, u64) {
    let mut perm: Vec<usize> = (0..n).collect();
    let (mut tail, mut equal) = (0u64, 0u64);
    loop {
        match cmp(&perm) {
            std::cmp::Ordering::Greater => tail += 1,
            std::cmp::Ordering::Equal => {
                tail += 1;
                equal += 1;
            }
            std::cmp::Ordering::Less => {}
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    (tail, equal)
}

/// Holm's step-down adjustment of a family of p-values, returned in input
/// order.
pub fn holm_adjust(pvalues: &[f64]) -> Result<Vec<f64>> {
    if pvalues.is_empty() {
        return Err(Error::Input("no p-values to adjust".into()));
    }
    if let Some(p) = pvalues.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(Error::Input(format!("p-value {p} outside [0, 1]")));
    }
    let m = pvalues.len();
    let mut idx: Vec<usize> = (0..m).collect();
    idx.sort_by(|&a, &b| pvalues[a].total_cmp(&pvalues[b]));
    let mut adjusted = vec![0.0; m];
    let mut running = 0.0f64;
    for (rank, &i) in idx.iter().enumerate() {
        let candidate = ((m - rank) as f64 * pvalues[i]).min(1.0);
        running = running.max(candidate);
        adjusted[i] = running;
    }
    Ok(adjusted)
}

/// Applies [`holm_adjust`] within each group of indices; indices outside
/// every group are left unadjusted.
pub fn holm_adjust_groups(pvalues: &[f64], groups: &[Vec<usize>]) -> Result<Vec<f64>> {
    let mut out = pvalues.to_vec();
    let mut seen = vec![false; pvalues.len()];
    for group in groups {
        for &i in group {
            if i >= pvalues.len() {
                return Err(Error::Input(format!(
                    "Holm group index {i} out of range for {} p-values",
                    pvalues.len()
                )));
            }
            if seen[i] {
                return Err(Error::Input(format!(
                    "index {i} appears in more than one Holm group"
                )));
            }
            seen[i] = true;
        }
        if group.is_empty() {
            continue;
        }
        let family: Vec<f64> = group.iter().map(|&i| pvalues[i]).collect();
        for (&i, adj) in group.iter().zip(holm_adjust(&family)?) {
            out[i] = adj;
        }
    }
    Ok(out)
}
