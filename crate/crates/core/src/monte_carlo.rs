//! Global test across conditions.
//!
//! The statistic `S` is the sum of tau-a between a distance measure and each
//! condition's cost scores. Its right p-value is estimated by randomizing:
//! every condition's scores are shuffled independently and `S'` recomputed,
//! and `p = #{S' >= S} / T`.
//!
//! Randomizations are processed in fixed chunks of [`CHUNK`]; chunk `i` draws
//! from ChaCha8 stream `i` of the seeded key. The tail count is a sum over
//! chunks, so the estimate does not depend on how many workers run them.

use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::dataset::{to_cost, Condition};
use crate::error::{Error, Result};
use crate::kendall::{dense_ranks, pairs, score, serialize_rational, tau_a, Rational};
use crate::permutation::{DistanceMeasure, Order};

/// Randomizations per RNG stream.
pub const CHUNK: u64 = 1 << 14;

/// Conditions of one analysis, with scores already turned into costs.
#[derive(Debug, Clone)]
pub struct ConditionSet {
    orders: Vec<Order>,
    conditions: Vec<Condition>,
}

impl ConditionSet {
    pub fn new(conditions: Vec<Condition>) -> Result<Self> {
        let Some(first) = conditions.first() else {
            return Err(Error::Input("condition set is empty".into()));
        };
        let alphabet = first.alphabet().clone();
        if let Some(c) = conditions.iter().find(|c| c.alphabet() != &alphabet) {
            return Err(Error::Input(format!(
                "{} uses alphabet {}, expected {alphabet}",
                c.label(),
                c.alphabet()
            )));
        }
        let orders = alphabet.orders()?;
        let conditions = conditions.iter().map(to_cost).collect();
        Ok(Self { orders, conditions })
    }

    pub fn conditions(&self) -> &[Condition] {
        &self.conditions
    }

    pub fn len(&self) -> usize {
        self.conditions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.conditions.is_empty()
    }

    pub fn orders(&self) -> &[Order] {
        &self.orders
    }

    /// Union of two sets over the same alphabet.
    pub fn concat(&self, other: &ConditionSet) -> Result<ConditionSet> {
        let mut all = self.conditions.clone();
        all.extend(other.conditions.iter().cloned());
        ConditionSet::new(all)
    }

    fn cost_ranks(&self) -> Result<Vec<Vec<i32>>> {
        self.conditions
            .iter()
            .map(|c| c.vector(&self.orders).map(|v| dense_ranks(&v)))
            .collect()
    }

    fn measure_ranks(&self, measure: &DistanceMeasure) -> Result<Vec<i32>> {
        Ok(dense_ranks(&measure.values(&self.orders)?))
    }
}

/// `S`: sum over conditions of `tau_a(measure, cost scores)`.
pub fn global_s(set: &ConditionSet, measure: &DistanceMeasure) -> Result<Rational> {
    if set.is_empty() {
        return Err(Error::Input("condition set is empty".into()));
    }
    let x = measure.values(&set.orders)?;
    let mut total = Rational::from_integer(0);
    for c in &set.conditions {
        total += tau_a(&x, &c.vector(&set.orders)?)?.tau;
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MonteCarloConfig {
    pub trials: u64,
    pub seed: u64,
    /// Worker threads; `None` uses the global pool.
    #[serde(skip)]
    pub workers: Option<usize>,
}

impl MonteCarloConfig {
    pub fn new(trials: u64, seed: u64) -> Self {
        Self {
            trials,
            seed,
            workers: None,
        }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = Some(workers);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GlobalResult {
    #[serde(serialize_with = "serialize_rational")]
    pub statistic: Rational,
    /// Randomizations with `S' >= S`.
    pub tail_count: u64,
    pub trials: u64,
    pub seed: u64,
    /// `tail_count / trials`.
    pub p_estimate: f64,
}

impl GlobalResult {
    pub fn statistic_f64(&self) -> f64 {
        self.statistic.to_f64().unwrap_or(f64::NAN)
    }

    pub fn min_nonzero_p(&self) -> f64 {
        1.0 / self.trials as f64
    }

    /// A zero tail count is only known to be below `1/T`.
    pub fn is_below_resolution(&self) -> bool {
        self.tail_count == 0
    }
}

/// Monte Carlo right p-value of `S` for one measure.
pub fn monte_carlo_right_pvalue(
    set: &ConditionSet,
    measure: &DistanceMeasure,
    config: MonteCarloConfig,
) -> Result<GlobalResult> {
    let predictors = vec![(set.measure_ranks(measure)?, 1)];
    run(set, &predictors, config)
}

/// Monte Carlo right p-value of `S(m1) - S(m2)`; both sums are taken on the
/// same shuffled scores within a randomization.
pub fn monte_carlo_diff_pvalue(
    set: &ConditionSet,
    m1: &DistanceMeasure,
    m2: &DistanceMeasure,
    config: MonteCarloConfig,
) -> Result<GlobalResult> {
    let predictors = vec![(set.measure_ranks(m1)?, 1), (set.measure_ranks(m2)?, -1)];
    run(set, &predictors, config)
}

/// Weighted sum of `n_c - n_d` over predictors and conditions.
fn statistic(predictors: &[(Vec<i32>, i64)], scores: &[Vec<i32>]) -> i64 {
    scores
        .iter()
        .map(|y| predictors.iter().map(|(x, w)| w * score(x, y)).sum::<i64>())
        .sum()
}

fn run(
    set: &ConditionSet,
    predictors: &[(Vec<i32>, i64)],
    config: MonteCarloConfig,
) -> Result<GlobalResult> {
    if config.trials == 0 {
        return Err(Error::Input(
            "number of randomizations must be at least 1".into(),
        ));
    }
    if set.is_empty() {
        return Err(Error::Input("condition set is empty".into()));
    }
    let scores = set.cost_ranks()?;
    let observed = statistic(predictors, &scores);
    let chunks = config.trials.div_ceil(CHUNK);

    let count_chunk = |chunk: u64| -> u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(chunk);
        let start = chunk * CHUNK;
        let end = (start + CHUNK).min(config.trials);
        let mut shuffled = scores.clone();
        let mut tail = 0;
        for _ in start..end {
            for y in shuffled.iter_mut() {
                y.shuffle(&mut rng);
            }
            if statistic(predictors, &shuffled) >= observed {
                tail += 1;
            }
        }
        tail
    };

    let tail_count = match config.workers {
        Some(workers) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(workers.max(1))
                .build()
                .map_err(|e| Error::Input(format!("cannot start worker pool: {e}")))?;
            pool.install(|| (0..chunks).into_par_iter().map(count_chunk).sum())
        }
        None => (0..chunks).into_par_iter().map(count_chunk).sum(),
    };

    let n = set.orders.len();
    Ok(GlobalResult {
        statistic: Rational::new(observed, pairs(n)),
        tail_count,
        trials: config.trials,
        seed: config.seed,
        p_estimate: tail_count as f64 / config.trials as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{bundled_paper_data, Direction, Modality, ScoreKind};
    use crate::permutation::{Alphabet, Constituent};
    use crate::significance::exact_right_pvalue;
    use std::sync::Arc;

    fn measures() -> [DistanceMeasure; 3] {
        DistanceMeasure::standard(&Order::parse("SOV").unwrap(), Constituent('V')).unwrap()
    }

    fn language(name: &str) -> ConditionSet {
        ConditionSet::new(
            bundled_paper_data()
                .into_iter()
                .filter(|c| c.language == name)
                .collect(),
        )
        .unwrap()
    }

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn s_over_bundled_conditions() {
        let [d, p, c] = measures();
        let korean = language("Korean");
        assert_eq!(global_s(&korean, &d).unwrap(), r(33, 15));
        assert_eq!(global_s(&korean, &p).unwrap(), r(12, 5));
        assert_eq!(global_s(&korean, &c).unwrap(), r(1, 1));
        let malayalam = language("Malayalam");
        assert_eq!(global_s(&malayalam, &d).unwrap(), r(13 + 10, 15));
    }

    #[test]
    fn single_condition_s_is_its_tau() {
        let [d, ..] = measures();
        let set = ConditionSet::new(vec![bundled_paper_data()[3].clone()]).unwrap();
        assert_eq!(global_s(&set, &d).unwrap(), r(13, 15));
    }

    #[test]
    fn s_is_additive() {
        let [d, p, _] = measures();
        let a = language("Korean");
        let b = language("Sinhalese");
        let both = a.concat(&b).unwrap();
        for m in [&d, &p] {
            assert_eq!(
                global_s(&both, m).unwrap(),
                global_s(&a, m).unwrap() + global_s(&b, m).unwrap()
            );
        }
    }

    #[test]
    fn errors() {
        assert!(ConditionSet::new(Vec::new()).is_err());
        let [d, ..] = measures();
        let set = language("Korean");
        assert!(monte_carlo_right_pvalue(&set, &d, MonteCarloConfig::new(0, 1)).is_err());
        let abc = Arc::new(Alphabet::new("ABC".chars()).unwrap());
        let foreign =
            DistanceMeasure::standard(&abc.order("ABC").unwrap(), Constituent('C')).unwrap();
        assert!(global_s(&set, &foreign[0]).is_err());
    }

    #[test]
    fn constant_scores_always_reach_the_tail() {
        let orders = Arc::new(Alphabet::sov()).orders().unwrap();
        let flat = Condition::new(
            "Flat",
            None,
            ScoreKind::ErrorRank,
            Modality::Written,
            Direction::Cost,
            orders.into_iter().map(|o| (o, 1.0)).collect(),
        )
        .unwrap();
        let set = ConditionSet::new(vec![flat]).unwrap();
        let [d, ..] = measures();
        let res = monte_carlo_right_pvalue(&set, &d, MonteCarloConfig::new(1, 7)).unwrap();
        assert_eq!((res.tail_count, res.p_estimate), (1, 1.0));
    }

    #[test]
    fn identical_measures_give_p_one() {
        let [d, ..] = measures();
        let res = monte_carlo_diff_pvalue(
            &language("Sinhalese"),
            &d,
            &d,
            MonteCarloConfig::new(5000, 3),
        )
        .unwrap();
        assert_eq!(res.statistic, r(0, 1));
        assert_eq!(res.p_estimate, 1.0);
    }

    #[test]
    fn deterministic_across_workers() {
        let [d, p, _] = measures();
        let set = language("Sinhalese");
        let cfg = MonteCarloConfig::new(3 * CHUNK + 17, 42);
        let one = monte_carlo_diff_pvalue(&set, &d, &p, cfg.with_workers(1)).unwrap();
        let four = monte_carlo_diff_pvalue(&set, &d, &p, cfg.with_workers(4)).unwrap();
        let default = monte_carlo_diff_pvalue(&set, &d, &p, cfg).unwrap();
        assert_eq!(one, four);
        assert_eq!(one, default);
        let other_seed =
            monte_carlo_diff_pvalue(&set, &d, &p, MonteCarloConfig::new(3 * CHUNK + 17, 43))
                .unwrap();
        assert_ne!(one.tail_count, other_seed.tail_count);
    }

    #[test]
    fn single_condition_tracks_exact_test() {
        let [d, ..] = measures();
        let orders = Arc::new(Alphabet::sov()).orders().unwrap();
        for cond in bundled_paper_data() {
            let set = ConditionSet::new(vec![cond]).unwrap();
            let y = set.conditions()[0].vector(&orders).unwrap();
            let exact = exact_right_pvalue(&d.values(&orders).unwrap(), &y)
                .unwrap()
                .right_p_f64();
            let trials = 200_000u64;
            let res =
                monte_carlo_right_pvalue(&set, &d, MonteCarloConfig::new(trials, 11)).unwrap();
            let se = (exact * (1.0 - exact) / trials as f64).sqrt();
            assert!(
                (res.p_estimate - exact).abs() <= 4.0 * se + 1e-12,
                "{}: {} vs {}",
                set.conditions()[0].label(),
                res.p_estimate,
                exact
            );
        }
    }
}
