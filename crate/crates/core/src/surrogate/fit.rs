use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::gp::{log_marginal_likelihood_cached, PairCache, TrainingSet};
use super::kernel::GpHyperparams;
use crate::error::{Error, Result};
use crate::optim::{minimize_box, MinimizeOptions};

/// Box constraints on the hyperparameters (natural scale).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HyperparamBounds {
    pub lengthscale: (f64, f64),
    pub signal_variance: (f64, f64),
    pub noise_variance: (f64, f64),
}

impl Default for HyperparamBounds {
    fn default() -> Self {
        Self { lengthscale: (1e-3, 1e3), signal_variance: (1e-3, 1e3), noise_variance: (1e-6, 1.0) }
    }
}

impl HyperparamBounds {
    fn log_box(&self, dims: usize) -> (Vec<f64>, Vec<f64>) {
        let mut lo = vec![self.lengthscale.0.ln(); dims];
        let mut hi = vec![self.lengthscale.1.ln(); dims];
        lo.push(self.signal_variance.0.ln());
        hi.push(self.signal_variance.1.ln());
        lo.push(self.noise_variance.0.ln());
        hi.push(self.noise_variance.1.ln());
        (lo, hi)
    }

    pub fn clamp(&self, p: &GpHyperparams) -> GpHyperparams {
        GpHyperparams {
            lengthscales: p.lengthscales.iter().map(|l| l.clamp(self.lengthscale.0, self.lengthscale.1)).collect(),
            signal_variance: p.signal_variance.clamp(self.signal_variance.0, self.signal_variance.1),
            noise_variance: p.noise_variance.clamp(self.noise_variance.0, self.noise_variance.1),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FitConfig {
    /// Random starts in addition to the default start.
    pub num_restarts: usize,
    /// Quasi-Newton iterations per start.
    pub max_iters: usize,
    pub bounds: HyperparamBounds,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self { num_restarts: 8, max_iters: 100, bounds: HyperparamBounds::default() }
    }
}

#[derive(Clone, Debug)]
pub struct FitResult {
    pub params: GpHyperparams,
    /// Log marginal likelihood at `params`; NaN for the degenerate default.
    pub log_marginal_likelihood: f64,
    pub failed_starts: usize,
    pub degenerate: bool,
}

/// Maximises the log marginal likelihood over log-hyperparameters from one
/// default start and `num_restarts` random starts, returning the best.
///
/// With fewer than two points or constant targets the bounded default
/// parameters are returned without optimisation.
pub fn fit_gp(train: &TrainingSet, config: &FitConfig, seed: u64) -> Result<FitResult> {
    let dims = train.layout().total();
    let bounds = &config.bounds;
    let default = bounds.clamp(&GpHyperparams::default_for(dims));
    if train.len() < 2 || train.is_degenerate() {
        return Ok(FitResult { params: default, log_marginal_likelihood: f64::NAN, failed_starts: 0, degenerate: true });
    }

    let (lo, hi) = bounds.log_box(dims);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let centre = (dims as f64).sqrt().ln();
    let mut starts = vec![default.to_log_vector()];
    for _ in 0..config.num_restarts {
        let mut theta: Vec<f64> = (0..dims).map(|_| centre + rng.gen_range(-1.0..2.0)).collect();
        theta.push(rng.gen_range(0.3f64.ln()..3f64.ln()));
        theta.push(rng.gen_range(1e-5f64.ln()..1e-1f64.ln()));
        for ((t, &l), &h) in theta.iter_mut().zip(&lo).zip(&hi) {
            *t = t.clamp(l, h);
        }
        starts.push(theta);
    }

    let opts = MinimizeOptions { max_iters: config.max_iters, ..Default::default() };
    let cache = PairCache::new(train);
    let objective = |theta: &[f64]| {
        let p = GpHyperparams::from_log_vector(theta);
        log_marginal_likelihood_cached(&p, train, &cache).ok().map(|(v, g)| (-v, g.into_iter().map(|x| -x).collect()))
    };

    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut failed = 0;
    for start in &starts {
        match minimize_box(objective, start, &lo, &hi, &opts) {
            // strict comparison keeps the earliest start on ties
            Some(r) if best.as_ref().map_or(true, |(v, _)| -r.value > *v) => best = Some((-r.value, r.x)),
            Some(_) => {}
            None => failed += 1,
        }
    }
    match best {
        Some((value, theta)) => Ok(FitResult {
            params: GpHyperparams::from_log_vector(&theta),
            log_marginal_likelihood: value,
            failed_starts: failed,
            degenerate: false,
        }),
        None => Err(Error::FitFailed(format!("all {} starts failed to factorise the kernel matrix", starts.len()))),
    }
}
