//! Kendall's tau-a with exact pair accounting.
//!
//! tau-a is `(n_c - n_d) / C(n, 2)` with no adjustment for ties: a pair tied
//! in either variable counts towards neither `n_c` nor `n_d` but stays in the
//! denominator. Values are kept as exact rationals.

use std::cmp::Ordering;

use num_rational::Ratio;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::permutation::{next_permutation, MeasureKind};

pub type Rational = Ratio<i64>;

/// Largest sample for which all `n!` rearrangements are scanned.
pub const MAX_EXHAUSTIVE_N: usize = 8;

pub fn to_f64(r: Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub(crate) fn pairs(n: usize) -> i64 {
    (n * n.saturating_sub(1) / 2) as i64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PairCounts {
    pub concordant: u64,
    pub discordant: u64,
    /// Pairs tied in at least one variable.
    pub neither: u64,
    pub n: usize,
}

impl PairCounts {
    pub fn total(&self) -> u64 {
        self.concordant + self.discordant + self.neither
    }
}

/// Sizes of the groups of equal values of one variable, in ascending value
/// order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TieStructure {
    groups: Vec<usize>,
}

impl TieStructure {
    pub fn new(groups: Vec<usize>) -> Result<Self> {
        if groups.contains(&0) {
            return Err(Error::Input("tie groups must be non-empty".into()));
        }
        Ok(Self { groups })
    }

    pub fn of(values: &[f64]) -> Result<Self> {
        check_finite(values)?;
        let mut sorted = values.to_vec();
        sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        let mut groups = Vec::new();
        let mut i = 0;
        while i < sorted.len() {
            let mut j = i + 1;
            while j < sorted.len() && sorted[j] == sorted[i] {
                j += 1;
            }
            groups.push(j - i);
            i = j;
        }
        Ok(Self { groups })
    }

    /// All values distinct.
    pub fn distinct_of(n: usize) -> Self {
        Self { groups: vec![1; n] }
    }

    pub fn groups(&self) -> &[usize] {
        &self.groups
    }

    pub fn n(&self) -> usize {
        self.groups.iter().sum()
    }

    /// Number of distinct values.
    pub fn distinct(&self) -> usize {
        self.groups.len()
    }

    /// `sum C(t_i, 2)`: pairs that are tied in this variable.
    pub fn tied_pairs(&self) -> u64 {
        self.groups.iter().map(|&t| (t * (t - 1) / 2) as u64).sum()
    }

    /// `prod t_i!`: rearrangements that leave the sequence unchanged.
    pub fn permutation_multiplicity(&self) -> u128 {
        self.groups
            .iter()
            .map(|&t| (1..=t as u128).product::<u128>())
            .product()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TauResult {
    #[serde(serialize_with = "serialize_rational")]
    pub tau: Rational,
    pub counts: PairCounts,
    pub tie_x: TieStructure,
    pub tie_y: TieStructure,
}

impl TauResult {
    pub fn tau_f64(&self) -> f64 {
        to_f64(self.tau)
    }
}

pub(crate) fn serialize_rational<S: serde::Serializer>(
    r: &Rational,
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    serializer.collect_str(&format_args!("{}/{}", r.numer(), r.denom()))
}

fn check_finite(values: &[f64]) -> Result<()> {
    if let Some(v) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::Input(format!("non-finite value {v}")));
    }
    Ok(())
}

fn check_pair(x: &[f64], y: &[f64]) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::Input(format!(
            "length mismatch: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 2 {
        return Err(Error::Input(format!(
            "need at least 2 observations, got {}",
            x.len()
        )));
    }
    check_finite(x)?;
    check_finite(y)
}

/// Dense ranks (0-based); equal values share a rank. Order-preserving, so
/// tau computed on ranks equals tau on the values.
pub(crate) fn dense_ranks(values: &[f64]) -> Vec<i32> {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    sorted.dedup();
    values
        .iter()
        .map(|v| {
            sorted
                .binary_search_by(|s| s.partial_cmp(v).expect("finite"))
                .expect("present") as i32
        })
        .collect()
}

/// `n_c - n_d` for already-ranked data.
#[inline]
pub(crate) fn score(x: &[i32], y: &[i32]) -> i64 {
    let mut s = 0i64;
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            s += ((x[i] - x[j]).signum() * (y[i] - y[j]).signum()) as i64;
        }
    }
    s
}

/// `n_c - n_d` where `y` is read through the index permutation `perm`.
#[inline]
pub(crate) fn score_permuted(x: &[i32], y: &[i32], perm: &[usize]) -> i64 {
    let mut s = 0i64;
    for i in 0..x.len() {
        let yi = y[perm[i]];
        for j in i + 1..x.len() {
            s += ((x[i] - x[j]).signum() * (yi - y[perm[j]]).signum()) as i64;
        }
    }
    s
}

/// Kendall's tau-a with full pair accounting.
pub fn tau_a(x: &[f64], y: &[f64]) -> Result<TauResult> {
    check_pair(x, y)?;
    let n = x.len();
    let mut counts = PairCounts {
        concordant: 0,
        discordant: 0,
        neither: 0,
        n,
    };
    for i in 0..n {
        for j in i + 1..n {
            let a = x[i].partial_cmp(&x[j]).expect("finite");
            let b = y[i].partial_cmp(&y[j]).expect("finite");
            match (a, b) {
                (Ordering::Equal, _) | (_, Ordering::Equal) => counts.neither += 1,
                _ if a == b => counts.concordant += 1,
                _ => counts.discordant += 1,
            }
        }
    }
    let tau = Rational::new(
        counts.concordant as i64 - counts.discordant as i64,
        pairs(n),
    );
    Ok(TauResult {
        tau,
        counts,
        tie_x: TieStructure::of(x)?,
        tie_y: TieStructure::of(y)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TauRange {
    #[serde(serialize_with = "serialize_rational")]
    pub lo: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub hi: Rational,
}

impl TauRange {
    pub fn contains(&self, tau: Rational) -> bool {
        self.lo <= tau && tau <= self.hi
    }
}

/// Range of tau-a allowed by the tie structures of both variables:
/// `|tau| <= 1 - n_0 / C(n, 2)` with `n_0 >= max(sum C(t_i, 2), sum C(u_i, 2))`.
pub fn tau_range_given_ties(
    tie_x: &TieStructure,
    tie_y: &TieStructure,
    n: usize,
) -> Result<TauRange> {
    if tie_x.n() != n || tie_y.n() != n {
        return Err(Error::Input(format!(
            "tie structures cover {} and {} observations, expected {n}",
            tie_x.n(),
            tie_y.n()
        )));
    }
    if n < 2 {
        return Err(Error::Input("need at least 2 observations".into()));
    }
    let n0 = tie_x.tied_pairs().max(tie_y.tied_pairs()) as i64;
    let total = pairs(n);
    let hi = Rational::new(total - n0, total);
    Ok(TauRange { lo: -hi, hi })
}

/// Upper bound of tau-a for `x` against any score without ties.
pub fn measure_ceiling(tie_x: &TieStructure) -> Rational {
    let n = tie_x.n();
    let total = pairs(n);
    Rational::new(total - tie_x.tied_pairs() as i64, total)
}

/// Whether no choice of score values could give a higher correlation with
/// the measure in `x`: tau reaches the ceiling implied by the measure's ties.
pub fn is_max_given_measure(result: &TauResult) -> bool {
    result.tau == measure_ceiling(&result.tie_x)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MaxGivenSample {
    #[serde(serialize_with = "serialize_rational")]
    pub max: Rational,
    pub achieved: bool,
}

fn check_exhaustive(n: usize) -> Result<()> {
    if n > MAX_EXHAUSTIVE_N {
        return Err(Error::Size {
            what: "exhaustive permutation scan",
            size: n,
            min: 2,
            max: MAX_EXHAUSTIVE_N,
        });
    }
    Ok(())
}

/// Largest tau-a over every rearrangement of `y`, and whether the observed
/// pairing attains it.
pub fn max_given_sample(x: &[f64], y: &[f64]) -> Result<MaxGivenSample> {
    check_pair(x, y)?;
    check_exhaustive(x.len())?;
    let xr = dense_ranks(x);
    let yr = dense_ranks(y);
    let observed = score(&xr, &yr);
    let mut perm: Vec<usize> = (0..x.len()).collect();
    let mut best = i64::MIN;
    loop {
        best = best.max(score_permuted(&xr, &yr, &perm));
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(MaxGivenSample {
        max: Rational::new(best, pairs(x.len())),
        achieved: observed == best,
    })
}

/// Largest `tau(x1, y) - tau(x2, y)` over every rearrangement of `y`.
pub fn max_diff_given_sample(x1: &[f64], x2: &[f64], y: &[f64]) -> Result<MaxGivenSample> {
    check_pair(x1, y)?;
    check_pair(x2, y)?;
    check_exhaustive(y.len())?;
    let a = dense_ranks(x1);
    let b = dense_ranks(x2);
    let yr = dense_ranks(y);
    let observed = score(&a, &yr) - score(&b, &yr);
    let mut perm: Vec<usize> = (0..y.len()).collect();
    let mut best = i64::MIN;
    loop {
        best = best.max(score_permuted(&a, &yr, &perm) - score_permuted(&b, &yr, &perm));
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(MaxGivenSample {
        max: Rational::new(best, pairs(y.len())),
        achieved: observed == best,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Dominance {
    /// `tau(d, y)` is certainly larger than `tau(m, y)`.
    Exceeds(MeasureKind),
    /// `tau(d, y)` is certainly smaller than `tau(m, y)`.
    FallsBelow(MeasureKind),
}

impl std::fmt::Display for Dominance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Dominance::Exceeds(m) => write!(f, "d>{}", m.symbol()),
            Dominance::FallsBelow(m) => write!(f, "d<{}", m.symbol()),
        }
    }
}

/// Dominances of `d` over `p` and `c` that follow from the value of
/// `tau(d, y)` alone: once it lies beyond the ceiling of another measure,
/// that measure cannot match it whatever `y` is. For the six orders of
/// S/O/V the ceilings are 4/5 for `p` and 1/3 for `c`.
pub fn dominance_check(d: &TauResult, p: &TauResult, c: &TauResult) -> Vec<Dominance> {
    let mut out = Vec::new();
    for (kind, other) in [
        (MeasureKind::HeadToEnd, p),
        (MeasureKind::CanonicalIndicator, c),
    ] {
        let ceiling = measure_ceiling(&other.tie_x);
        if d.tau > ceiling {
            out.push(Dominance::Exceeds(kind));
        } else if d.tau < -ceiling {
            out.push(Dominance::FallsBelow(kind));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const D: [f64; 6] = [0.0, 1.0, 1.0, 2.0, 2.0, 3.0];
    const P: [f64; 6] = [0.0, 0.0, 1.0, 1.0, 2.0, 2.0];
    const C: [f64; 6] = [0.0, 1.0, 1.0, 1.0, 1.0, 1.0];
    const MALAYALAM_COST: [f64; 6] = [-1.05, -0.80, -0.36, -0.30, 0.14, 0.36];

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn self_correlation_with_ties_is_not_one() {
        let v = [1.0, 1.0, 2.0, 2.0, 3.0, 3.0];
        let t = tau_a(&v, &v).unwrap();
        assert_eq!(t.tau, r(4, 5));
        assert_eq!(t.counts.neither, 3);
    }

    #[test]
    fn correlogram_of_measures() {
        assert_eq!(tau_a(&D, &P).unwrap().tau, r(2, 3));
        assert_eq!(tau_a(&D, &C).unwrap().tau, r(1, 3));
        assert_eq!(tau_a(&P, &C).unwrap().tau, r(4, 15));
    }

    #[test]
    fn malayalam_and_korean() {
        assert_eq!(tau_a(&D, &MALAYALAM_COST).unwrap().tau, r(13, 15));
        assert_eq!(
            tau_a(&D, &[1.0, 2.0, 3.0, 3.0, 4.0, 4.0]).unwrap().tau,
            r(11, 15)
        );
    }

    #[test]
    fn constant_variable_gives_zero() {
        let t = tau_a(&D, &[2.0; 6]).unwrap();
        assert_eq!(t.tau, r(0, 1));
        assert_eq!((t.counts.concordant, t.counts.discordant), (0, 0));
    }

    #[test]
    fn input_errors() {
        assert!(matches!(tau_a(&[1.0, 2.0], &[1.0]), Err(Error::Input(_))));
        assert!(matches!(tau_a(&[1.0], &[1.0]), Err(Error::Input(_))));
        assert!(matches!(
            tau_a(&[1.0, f64::NAN], &[1.0, 2.0]),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn ranges_per_measure() {
        let distinct = TieStructure::distinct_of(6);
        for (x, hi) in [(&D, r(13, 15)), (&P, r(4, 5)), (&C, r(1, 3))] {
            let range = tau_range_given_ties(&TieStructure::of(x).unwrap(), &distinct, 6).unwrap();
            assert_eq!(range, TauRange { lo: -hi, hi });
        }
        assert_eq!(TieStructure::of(&D).unwrap().groups(), &[1, 2, 2, 1]);
        assert!(tau_range_given_ties(&TieStructure::of(&D).unwrap(), &distinct, 5).is_err());
        assert!(TieStructure::new(vec![2, 0]).is_err());
    }

    #[test]
    fn max_given_measure_flags() {
        assert!(is_max_given_measure(&tau_a(&D, &MALAYALAM_COST).unwrap()));
        assert!(!is_max_given_measure(
            &tau_a(&D, &[1.0, 2.0, 3.0, 3.0, 4.0, 4.0]).unwrap()
        ));
        assert!(is_max_given_measure(&tau_a(&C, &MALAYALAM_COST).unwrap()));
    }

    #[test]
    fn max_given_sample_cases() {
        let m = max_given_sample(&D, &[1.0, 1.0, 2.0, 2.0, 3.0, 3.0]).unwrap();
        assert_eq!(
            m,
            MaxGivenSample {
                max: r(2, 3),
                achieved: true
            }
        );
        let m = max_given_sample(&D, &[1.0; 6]).unwrap();
        assert_eq!(
            m,
            MaxGivenSample {
                max: r(0, 1),
                achieved: true
            }
        );
        let m = max_given_sample(&D, &[6.0, 5.0, 4.0, 3.0, 2.0, 1.0]).unwrap();
        assert_eq!(
            m,
            MaxGivenSample {
                max: r(13, 15),
                achieved: false
            }
        );
        assert!(matches!(
            max_given_sample(&[0.0; 9], &[0.0; 9]),
            Err(Error::Size { .. })
        ));
    }

    #[test]
    fn dominance_thresholds() {
        let y_for = |target: Rational| -> Vec<f64> {
            // search rearrangements of 0..6 for one with tau(d, y) == target
            let mut perm: Vec<usize> = (0..6).collect();
            loop {
                let y: Vec<f64> = perm.iter().map(|&v| v as f64).collect();
                if tau_a(&D, &y).unwrap().tau == target {
                    return y;
                }
                assert!(next_permutation(&mut perm), "no vector for {target}");
            }
        };
        let check = |y: &[f64]| {
            dominance_check(
                &tau_a(&D, y).unwrap(),
                &tau_a(&P, y).unwrap(),
                &tau_a(&C, y).unwrap(),
            )
        };
        assert_eq!(
            check(&MALAYALAM_COST),
            vec![
                Dominance::Exceeds(MeasureKind::HeadToEnd),
                Dominance::Exceeds(MeasureKind::CanonicalIndicator)
            ]
        );
        let y = y_for(r(7, 15));
        assert_eq!(
            check(&y),
            vec![Dominance::Exceeds(MeasureKind::CanonicalIndicator)]
        );
        let y = y_for(r(3, 15));
        assert!(check(&y).is_empty());
        let y = y_for(r(-13, 15));
        assert_eq!(
            check(&y),
            vec![
                Dominance::FallsBelow(MeasureKind::HeadToEnd),
                Dominance::FallsBelow(MeasureKind::CanonicalIndicator)
            ]
        );
    }

    fn naive_counts(x: &[f64], y: &[f64]) -> (u64, u64, u64) {
        let (mut c, mut d, mut z) = (0, 0, 0);
        for i in 0..x.len() {
            for j in 0..x.len() {
                if i >= j {
                    continue;
                }
                let prod = (x[i] - x[j]) * (y[i] - y[j]);
                if prod > 0.0 {
                    c += 1;
                } else if prod < 0.0 {
                    d += 1;
                } else {
                    z += 1;
                }
            }
        }
        (c, d, z)
    }

    fn tied_vec(len: std::ops::Range<usize>) -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(0i32..4, len).prop_map(|v| v.into_iter().map(f64::from).collect())
    }

    fn tied_pair() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
        (2usize..9).prop_flat_map(|n| (tied_vec(n..n + 1), tied_vec(n..n + 1)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn matches_naive_pair_classifier((x, y) in tied_pair()) {
            let t = tau_a(&x, &y).unwrap();
            let (c, d, z) = naive_counts(&x, &y);
            prop_assert_eq!((t.counts.concordant, t.counts.discordant, t.counts.neither), (c, d, z));
            prop_assert_eq!(t.counts.total(), pairs(x.len()) as u64);
        }

        #[test]
        fn symmetric_and_antisymmetric((x, y) in tied_pair()) {
            let t = tau_a(&x, &y).unwrap().tau;
            prop_assert_eq!(tau_a(&y, &x).unwrap().tau, t);
            let neg: Vec<f64> = y.iter().map(|v| -v).collect();
            prop_assert_eq!(tau_a(&x, &neg).unwrap().tau, -t);
            prop_assert!(t >= r(-1, 1) && t <= r(1, 1));
        }

        #[test]
        fn invariant_under_increasing_transform((x, y) in tied_pair()) {
            let g: Vec<f64> = y.iter().map(|v| (v * 0.5).exp() + 3.0).collect();
            prop_assert_eq!(tau_a(&x, &g).unwrap().tau, tau_a(&x, &y).unwrap().tau);
        }

        #[test]
        fn within_tie_range((x, y) in tied_pair()) {
            let t = tau_a(&x, &y).unwrap();
            let range = tau_range_given_ties(&t.tie_x, &t.tie_y, x.len()).unwrap();
            prop_assert!(range.contains(t.tau));
            prop_assert_eq!(range.lo, -range.hi);
        }
    }
}
