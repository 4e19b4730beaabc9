use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::bo::sub_seed;
use crate::benchmarks::Problem;
use crate::combinatorics::{build_dictionary, DictionaryStrategy, Point};
use crate::error::{Error, Result};
use crate::surrogate::{featurize, fit_gp, FitConfig, GpHyperparams, GpModel, TrainingSet};

const Z95: f64 = 1.959_963_984_540_054;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticRow {
    pub truth: f64,
    pub mean: f64,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticReport {
    pub dictionary: DictionaryStrategy,
    pub m: usize,
    pub seed: u64,
    /// Test RMSE in standardised target units.
    pub rmse: f64,
    /// Mean negative log predictive density of the standardised test targets.
    pub nlpd: f64,
    /// Fraction of test targets inside the 95% predictive interval.
    pub coverage_95: f64,
    pub lengthscales_below_10: usize,
    pub params: GpHyperparams,
    /// Per test point, on the raw objective scale.
    pub rows: Vec<DiagnosticRow>,
}

/// Fits a GP on `train` and scores its predictions on `test`.
pub fn diagnostics_on(
    problem: &dyn Problem,
    train: &[Point],
    test: &[Point],
    dictionary: DictionaryStrategy,
    m: usize,
    seed: u64,
    fit: &FitConfig,
) -> Result<DiagnosticReport> {
    if train.len() < 2 {
        return Err(Error::InvalidParameter("need at least 2 training points".into()));
    }
    if test.is_empty() {
        return Err(Error::InvalidParameter("need at least 1 test point".into()));
    }
    let space = problem.space();
    let y: Vec<f64> = train.iter().map(|p| problem.evaluate(p)).collect::<Result<_>>()?;
    let dict = build_dictionary(dictionary, space, m, sub_seed(seed, 0))?;
    let set = TrainingSet::embed(space, &dict, train.to_vec(), y)?;
    let params = fit_gp(&set, fit, sub_seed(seed, 1))?.params;
    let model = GpModel::new(params.clone(), &set)?;

    let (mut se, mut nlpd, mut covered) = (0.0, 0.0, 0usize);
    let mut rows = Vec::with_capacity(test.len());
    for p in test {
        let truth = problem.evaluate(p)?;
        let post = model.predict(&featurize(&dict, space, p));
        let ys = set.standardize(truth);
        let var = post.variance + params.noise_variance;
        let r = ys - post.mean;
        se += r * r;
        nlpd += 0.5 * (2.0 * std::f64::consts::PI * var).ln() + r * r / (2.0 * var);
        let half = Z95 * var.sqrt();
        if r.abs() <= half {
            covered += 1;
        }
        let scale = set.target_std();
        rows.push(DiagnosticRow {
            truth,
            mean: post.mean_raw(),
            lower: post.mean_raw() - half * scale,
            upper: post.mean_raw() + half * scale,
        });
    }
    let n = test.len() as f64;
    Ok(DiagnosticReport {
        dictionary,
        m,
        seed,
        rmse: (se / n).sqrt(),
        nlpd: nlpd / n,
        coverage_95: covered as f64 / n,
        lengthscales_below_10: params.lengthscales.iter().filter(|l| **l < 10.0).count(),
        params,
        rows,
    })
}

/// Draws `n_train + n_test` uniform points, fits on the first `n_train` and
/// reports predictive quality on the rest.
pub fn model_diagnostics(
    problem: &dyn Problem,
    n_train: usize,
    n_test: usize,
    dictionary: DictionaryStrategy,
    m: usize,
    seed: u64,
    fit: &FitConfig,
) -> Result<DiagnosticReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts: Vec<Point> = (0..n_train + n_test).map(|_| problem.space().sample(&mut rng)).collect();
    let (train, test) = pts.split_at(n_train);
    diagnostics_on(problem, train, test, dictionary, m, seed, fit)
}
