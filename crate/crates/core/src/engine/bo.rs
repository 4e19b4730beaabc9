use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use web_time::Instant;

use super::record::{BetaEntry, RunRecord};
use crate::acquisition::{beta_schedule, optimize_acquisition, AcquisitionKind, AcquisitionSpec, LocalSearchConfig, ModelAcquisition};
use crate::benchmarks::Problem;
use crate::combinatorics::{build_dictionary, cardinality_bound, Dictionary, DictionaryStrategy, Point, SearchSpace};
use crate::error::{Error, Result};
use crate::surrogate::{fit_gp, FitConfig, GpModel, TrainingSet};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BoConfig {
    pub dictionary: DictionaryStrategy,
    /// Dictionary size.
    pub m: usize,
    pub n_init: usize,
    /// Total number of evaluations, initial design included.
    pub budget: usize,
    pub acquisition: AcquisitionKind,
    pub local_search: LocalSearchConfig,
    pub fit: FitConfig,
    pub seed: u64,
    /// Confidence parameter of the UCB schedule.
    pub delta: f64,
}

impl Default for BoConfig {
    fn default() -> Self {
        Self {
            dictionary: DictionaryStrategy::DiverseRandom,
            m: 128,
            n_init: 10,
            budget: 100,
            acquisition: AcquisitionKind::ExpectedImprovement,
            local_search: LocalSearchConfig::default(),
            fit: FitConfig::default(),
            seed: 0,
            delta: 0.1,
        }
    }
}

impl BoConfig {
    pub fn validate(&self) -> Result<()> {
        if self.m == 0 {
            return Err(Error::InvalidParameter("m must be at least 1".into()));
        }
        if self.n_init < 2 {
            return Err(Error::InvalidParameter("n_init must be at least 2".into()));
        }
        if self.budget < self.n_init {
            return Err(Error::InvalidParameter(format!("budget {} is below n_init {}", self.budget, self.n_init)));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::InvalidParameter(format!("delta must lie in (0, 1), got {}", self.delta)));
        }
        self.local_search.validate()
    }
}

/// SplitMix64 finaliser.
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Seed derived from `(seed, index)`.
pub fn sub_seed(seed: u64, index: u64) -> u64 {
    splitmix64(seed ^ splitmix64(index))
}

/// Bound on the number of distinct embeddings: the coherence bound for
/// binary dictionaries, otherwise `min(|Z|, (d+1)^m)`.
pub fn embedded_cardinality_bound(dict: &Dictionary, space: &SearchSpace) -> BigUint {
    if dict.is_binary() {
        if let Ok(b) = cardinality_bound(dict) {
            return b;
        }
    }
    let trivial = BigUint::from(dict.d() + 1).pow(dict.m() as u32);
    trivial.min(space.num_configurations())
}

/// What the loop looked like at one model-based iteration.
pub struct IterationState<'a> {
    /// 1-based index of the evaluation being proposed.
    pub iteration: usize,
    pub dictionary: &'a Dictionary,
    pub train: &'a TrainingSet,
}

/// [`run_bodi_observed`] without an observer.
pub fn run_bodi(problem: &dyn Problem, config: &BoConfig) -> Result<RunRecord> {
    run_bodi_observed(problem, config, |_| {})
}

/// The BODi loop: a random initial design, then per iteration a fresh
/// dictionary, re-embedding of all data, a GP fitted from scratch and one
/// acquisition maximisation. A failed fit falls back to a random point.
pub fn run_bodi_observed<F>(problem: &dyn Problem, config: &BoConfig, mut observer: F) -> Result<RunRecord>
where
    F: FnMut(&IterationState<'_>),
{
    config.validate()?;
    let space = problem.space();
    let start = Instant::now();
    let mut rec = RunRecord::new("bodi", problem, config.seed);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut points: Vec<Point> = Vec::with_capacity(config.budget);
    let mut values: Vec<f64> = Vec::with_capacity(config.budget);

    for _ in 0..config.n_init {
        let p = space.sample(&mut rng);
        let v = problem.evaluate(&p)?;
        rec.push(p.clone(), v, start.elapsed().as_secs_f64(), None);
        points.push(p);
        values.push(v);
    }

    for iteration in config.n_init + 1..=config.budget {
        let dict_seed = sub_seed(config.seed, iteration as u64);
        let mut acq_rng = ChaCha8Rng::seed_from_u64(sub_seed(dict_seed, 2));
        let dictionary = build_dictionary(config.dictionary, space, config.m, dict_seed)?;
        let train = TrainingSet::embed(space, &dictionary, points.clone(), values.clone())?;
        observer(&IterationState { iteration, dictionary: &dictionary, train: &train });

        let model = fit_gp(&train, &config.fit, sub_seed(dict_seed, 1))
            .and_then(|fit| GpModel::new(fit.params, &train));
        let next = match model {
            Ok(model) => {
                let spec = match config.acquisition {
                    AcquisitionKind::ExpectedImprovement => {
                        let best = train.standardized_targets().iter().copied().fold(f64::INFINITY, f64::min);
                        AcquisitionSpec::expected_improvement(best)
                    }
                    AcquisitionKind::Ucb => {
                        let t = (iteration - config.n_init) as u64;
                        let bound = embedded_cardinality_bound(&dictionary, space);
                        let beta = beta_schedule(&bound, t, config.delta)?;
                        rec.beta.push(BetaEntry { iteration, t, cardinality_bound: bound.to_string(), beta });
                        AcquisitionSpec::ucb(beta)?
                    }
                };
                let eval = ModelAcquisition::new(&model, &dictionary, space, spec);
                let incumbent = rec.best().map(|r| r.point.clone());
                optimize_acquisition(&eval, space, incumbent.as_ref(), &config.local_search, &mut acq_rng).point
            }
            Err(e) => {
                rec.log(format!("surrogate unavailable ({e}); evaluating a random point"));
                space.sample(&mut acq_rng)
            }
        };
        let v = problem.evaluate(&next)?;
        rec.push(next.clone(), v, start.elapsed().as_secs_f64(), Some(dict_seed));
        points.push(next);
        values.push(v);
    }
    Ok(rec)
}
