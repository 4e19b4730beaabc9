use nalgebra::{DMatrix, DVector};

use super::kernel::{kernel_value, m52_lengthscale_factor, m52_unit, FeatureLayout, GpHyperparams};
use crate::combinatorics::{Dictionary, Point, SearchSpace};
use crate::error::{Error, Result};

/// Jitter levels tried in turn when factorising the kernel matrix.
pub const JITTER_LADDER: [f64; 3] = [1e-8, 1e-6, 1e-4];

const LN_2PI: f64 = 1.837_877_066_409_345_5;

/// Feature vector of a point: `φ_A(z)` followed by the continuous part
/// min-max scaled to `[0, 1]`.
pub fn featurize(dict: &Dictionary, space: &SearchSpace, point: &Point) -> Vec<f64> {
    let mut out = vec![0.0; dict.m() + space.continuous_dim()];
    dict.embed_into(&point.discrete, &mut out[..dict.m()]);
    if let Some(x) = &point.continuous {
        out[dict.m()..].copy_from_slice(&space.normalize_continuous(x));
    }
    out
}

pub fn layout_for(dict: &Dictionary, space: &SearchSpace) -> FeatureLayout {
    FeatureLayout { discrete: dict.m(), continuous: space.continuous_dim() }
}

/// Observed data in feature space, with targets standardised to zero mean
/// and unit variance.
#[derive(Clone, Debug)]
pub struct TrainingSet {
    inputs: Vec<Point>,
    features: Vec<f64>,
    layout: FeatureLayout,
    targets: Vec<f64>,
    standardized: Vec<f64>,
    target_mean: f64,
    target_std: f64,
    degenerate: bool,
}

impl TrainingSet {
    pub fn new(inputs: Vec<Point>, features: Vec<Vec<f64>>, layout: FeatureLayout, targets: Vec<f64>) -> Result<Self> {
        if features.len() != targets.len() {
            return Err(Error::Dimension { expected: features.len(), got: targets.len() });
        }
        if !inputs.is_empty() && inputs.len() != targets.len() {
            return Err(Error::Dimension { expected: targets.len(), got: inputs.len() });
        }
        if let Some(row) = features.iter().find(|r| r.len() != layout.total()) {
            return Err(Error::Dimension { expected: layout.total(), got: row.len() });
        }
        if targets.iter().any(|y| !y.is_finite()) {
            return Err(Error::InvalidParameter("training targets must be finite".into()));
        }
        let n = targets.len();
        let target_mean = if n == 0 { 0.0 } else { targets.iter().sum::<f64>() / n as f64 };
        let var = if n < 2 {
            0.0
        } else {
            targets.iter().map(|y| (y - target_mean).powi(2)).sum::<f64>() / (n - 1) as f64
        };
        let degenerate = !(var > 0.0);
        let target_std = if degenerate { 1.0 } else { var.sqrt() };
        let standardized = targets.iter().map(|y| (y - target_mean) / target_std).collect();
        Ok(Self {
            inputs,
            features: features.concat(),
            layout,
            targets,
            standardized,
            target_mean,
            target_std,
            degenerate,
        })
    }

    /// Embeds `points` with `dict` (plus scaled continuous parts).
    pub fn embed(space: &SearchSpace, dict: &Dictionary, points: Vec<Point>, targets: Vec<f64>) -> Result<Self> {
        for p in &points {
            space.validate(p)?;
        }
        let features = points.iter().map(|p| featurize(dict, space, p)).collect();
        Self::new(points, features, layout_for(dict, space), targets)
    }

    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    pub fn layout(&self) -> FeatureLayout {
        self.layout
    }

    pub fn inputs(&self) -> &[Point] {
        &self.inputs
    }

    pub fn feature_row(&self, i: usize) -> &[f64] {
        let d = self.layout.total();
        &self.features[i * d..(i + 1) * d]
    }

    pub fn features(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.features.chunks_exact(self.layout.total().max(1))
    }

    pub fn targets(&self) -> &[f64] {
        &self.targets
    }

    pub fn standardized_targets(&self) -> &[f64] {
        &self.standardized
    }

    pub fn target_mean(&self) -> f64 {
        self.target_mean
    }

    pub fn target_std(&self) -> f64 {
        self.target_std
    }

    /// True when fewer than two targets or all targets are equal.
    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    pub fn standardize(&self, y: f64) -> f64 {
        (y - self.target_mean) / self.target_std
    }
}

fn factorize(kf: &DMatrix<f64>, noise: f64) -> Result<(nalgebra::Cholesky<f64, nalgebra::Dyn>, f64)> {
    for &jitter in &JITTER_LADDER {
        let mut k = kf.clone();
        for i in 0..k.nrows() {
            k[(i, i)] += noise + jitter;
        }
        if let Some(chol) = k.cholesky() {
            return Ok((chol, jitter));
        }
    }
    Err(Error::IllConditioned { jitter: JITTER_LADDER[JITTER_LADDER.len() - 1] })
}

/// Inverse of a lower-triangular matrix by forward substitution, one column
/// at a time against contiguous rows of `L`.
fn lower_inverse(l: &DMatrix<f64>) -> DMatrix<f64> {
    let n = l.nrows();
    let rows = l.transpose();
    let rows = rows.as_slice();
    let mut inv = DMatrix::zeros(n, n);
    for (j, col) in inv.as_mut_slice().chunks_exact_mut(n).enumerate() {
        col[j] = 1.0 / rows[j * n + j];
        for i in j + 1..n {
            let row = &rows[i * n + j..i * n + i];
            let s: f64 = row.iter().zip(&col[j..i]).map(|(a, b)| a * b).sum();
            col[i] = -s / rows[i * n + i];
        }
    }
    inv
}

fn check_params(params: &GpHyperparams, train: &TrainingSet) -> Result<()> {
    params.validate(train.layout.total())?;
    if train.is_empty() {
        return Err(Error::InvalidParameter("training set is empty".into()));
    }
    Ok(())
}

/// Noise-free kernel matrix over the training features.
pub fn kernel_matrix(params: &GpHyperparams, train: &TrainingSet) -> Result<DMatrix<f64>> {
    check_params(params, train)?;
    let inv_l2: Vec<f64> = params.lengthscales.iter().map(|l| 1.0 / (l * l)).collect();
    let n = train.len();
    let mut kf = DMatrix::zeros(n, n);
    for a in 0..n {
        kf[(a, a)] = params.signal_variance;
        for b in 0..a {
            let k = kernel_value(train.feature_row(a), train.feature_row(b), &inv_l2, train.layout, params.signal_variance);
            kf[(a, b)] = k;
            kf[(b, a)] = k;
        }
    }
    Ok(kf)
}

/// Squared feature differences of every training pair, one
/// `pairs × block_dim` matrix per kernel block. Built once per fit so each
/// likelihood evaluation reduces to matrix-vector products.
pub struct PairCache {
    n: usize,
    blocks: Vec<(std::ops::Range<usize>, PairDeltas)>,
}

/// Row-major `pairs × width` squared differences. Integer-valued embeddings
/// fit exactly in `f32`, which halves the memory traffic of each pass.
enum PairDeltas {
    Single(Vec<f32>, usize),
    Double(Vec<f64>, usize),
}

impl PairDeltas {
    fn build(train: &TrainingSet, blk: std::ops::Range<usize>) -> Self {
        let n = train.len();
        let width = blk.len();
        let mut values = Vec::with_capacity(n * n.saturating_sub(1) / 2 * width);
        for a in 0..n {
            let xa = &train.feature_row(a)[blk.clone()];
            for b in 0..a {
                let xb = &train.feature_row(b)[blk.clone()];
                values.extend(xa.iter().zip(xb).map(|(u, v)| (u - v) * (u - v)));
            }
        }
        if values.iter().all(|&v| (v as f32) as f64 == v) {
            PairDeltas::Single(values.into_iter().map(|v| v as f32).collect(), width)
        } else {
            PairDeltas::Double(values, width)
        }
    }

    /// `r²_p = Σ_k Δ_pk w_k` for every pair.
    fn weighted(&self, w: &[f64]) -> Vec<f64> {
        // four partial sums let the reduction vectorise
        fn dot<T: Copy + Into<f64>>(row: &[T], w: &[f64]) -> f64 {
            let mut acc = [0.0; 4];
            let (rc, rt) = row.split_at(row.len() / 4 * 4);
            let (wc, wt) = w.split_at(rc.len());
            for (r, x) in rc.chunks_exact(4).zip(wc.chunks_exact(4)) {
                for j in 0..4 {
                    acc[j] += r[j].into() * x[j];
                }
            }
            let tail: f64 = rt.iter().zip(wt).map(|(&d, &x)| d.into() * x).sum();
            (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
        }
        match self {
            PairDeltas::Single(v, width) => v.chunks_exact(*width).map(|row| dot(row, w)).collect(),
            PairDeltas::Double(v, width) => v.chunks_exact(*width).map(|row| dot(row, w)).collect(),
        }
    }

    /// `g_k = Σ_p c_p Δ_pk`.
    fn transpose_weighted(&self, coeff: &[f64]) -> Vec<f64> {
        fn go<T: Copy + Into<f64>>(v: &[T], width: usize, coeff: &[f64]) -> Vec<f64> {
            let mut g = vec![0.0; width];
            for (row, &c) in v.chunks_exact(width).zip(coeff) {
                for (gk, &d) in g.iter_mut().zip(row) {
                    *gk += c * d.into();
                }
            }
            g
        }
        match self {
            PairDeltas::Single(v, width) => go(v, *width, coeff),
            PairDeltas::Double(v, width) => go(v, *width, coeff),
        }
    }
}

impl PairCache {
    pub fn new(train: &TrainingSet) -> Self {
        let blocks = train.layout.blocks().map(|blk| (blk.clone(), PairDeltas::build(train, blk))).collect();
        Self { n: train.len(), blocks }
    }
}

/// Log marginal likelihood of the standardised targets,
/// `−½ yᵀK⁻¹y − ½ log|K| − (n/2) log 2π` with `K = K_f + (σ² + jitter) I`,
/// and its gradient with respect to `[ln ℓ…, ln s², ln σ²]`.
pub fn log_marginal_likelihood(params: &GpHyperparams, train: &TrainingSet) -> Result<(f64, Vec<f64>)> {
    log_marginal_likelihood_cached(params, train, &PairCache::new(train))
}

/// [`log_marginal_likelihood`] with a prebuilt [`PairCache`] for `train`.
pub fn log_marginal_likelihood_cached(params: &GpHyperparams, train: &TrainingSet, cache: &PairCache) -> Result<(f64, Vec<f64>)> {
    check_params(params, train)?;
    let n = train.len();
    debug_assert_eq!(cache.n, n);
    let dims = train.layout.total();
    let s2 = params.signal_variance;
    let inv_l2: Vec<f64> = params.lengthscales.iter().map(|l| 1.0 / (l * l)).collect();

    // per-pair scaled squared distance of each block, and its unit factor
    let r2: Vec<Vec<f64>> = cache.blocks.iter().map(|(blk, delta)| delta.weighted(&inv_l2[blk.clone()])).collect();
    let units: Vec<Vec<f64>> = r2.iter().map(|v| v.iter().map(|&x| m52_unit(x)).collect()).collect();

    let mut kf = DMatrix::zeros(n, n);
    let mut p = 0;
    for a in 0..n {
        kf[(a, a)] = s2;
        for b in 0..a {
            let k = s2 * units.iter().map(|u| u[p]).product::<f64>();
            kf[(a, b)] = k;
            kf[(b, a)] = k;
            p += 1;
        }
    }

    let (chol, _) = factorize(&kf, params.noise_variance)?;
    let y = DVector::from_column_slice(train.standardized_targets());
    let alpha = chol.solve(&y);
    // K⁻¹ = L⁻ᵀL⁻¹; the product runs through the blocked matrix multiply
    let linv = lower_inverse(&chol.l());
    let kinv = linv.transpose() * &linv;
    let log_det: f64 = 2.0 * chol.l_dirty().diagonal().iter().map(|v| v.ln()).sum::<f64>();
    let value = -0.5 * y.dot(&alpha) - 0.5 * log_det - 0.5 * n as f64 * LN_2PI;

    // W = ααᵀ − K⁻¹; each off-diagonal pair appears twice, times the ½ in front
    let pairs = n * n.saturating_sub(1) / 2;
    let mut w_pairs = Vec::with_capacity(pairs);
    let mut grad_s2 = 0.0;
    let mut trace_w = 0.0;
    for a in 0..n {
        let w_aa = alpha[a] * alpha[a] - kinv[(a, a)];
        trace_w += w_aa;
        grad_s2 += 0.5 * w_aa * s2;
        for b in 0..a {
            let w = alpha[a] * alpha[b] - kinv[(a, b)];
            grad_s2 += w * kf[(a, b)];
            w_pairs.push(w);
        }
    }

    let mut grad = vec![0.0; dims + 2];
    for (bi, (blk, delta)) in cache.blocks.iter().enumerate() {
        let coeff: Vec<f64> = (0..pairs)
            .map(|p| {
                let others: f64 = units.iter().enumerate().filter(|(o, _)| *o != bi).map(|(_, u)| u[p]).product();
                w_pairs[p] * s2 * others * m52_lengthscale_factor(r2[bi][p])
            })
            .collect();
        let g = delta.transpose_weighted(&coeff);
        for (k, i) in blk.clone().enumerate() {
            grad[i] = g[k] * inv_l2[i];
        }
    }
    grad[dims] = grad_s2;
    grad[dims + 1] = 0.5 * params.noise_variance * trace_w;
    Ok((value, grad))
}

/// Predictive mean and variance of the latent function, in standardised
/// units; the `*_raw` accessors undo the target standardisation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Posterior {
    pub mean: f64,
    pub variance: f64,
    pub target_mean: f64,
    pub target_std: f64,
}

impl Posterior {
    pub fn std_dev(&self) -> f64 {
        self.variance.sqrt()
    }

    pub fn mean_raw(&self) -> f64 {
        self.mean * self.target_std + self.target_mean
    }

    pub fn variance_raw(&self) -> f64 {
        self.variance * self.target_std * self.target_std
    }
}

/// A GP conditioned on a training set, with the Cholesky factor cached.
#[derive(Clone, Debug)]
pub struct GpModel {
    params: GpHyperparams,
    layout: FeatureLayout,
    features: Vec<f64>,
    n: usize,
    // lower factor, column-major
    chol_l: DMatrix<f64>,
    alpha: Vec<f64>,
    inv_l2: Vec<f64>,
    target_mean: f64,
    target_std: f64,
    jitter: f64,
}

impl GpModel {
    pub fn new(params: GpHyperparams, train: &TrainingSet) -> Result<Self> {
        let kf = kernel_matrix(&params, train)?;
        let (chol, jitter) = factorize(&kf, params.noise_variance)?;
        let y = DVector::from_column_slice(train.standardized_targets());
        let alpha = chol.solve(&y).as_slice().to_vec();
        let inv_l2 = params.lengthscales.iter().map(|l| 1.0 / (l * l)).collect();
        Ok(Self {
            layout: train.layout,
            features: train.features.clone(),
            n: train.len(),
            chol_l: chol.unpack(),
            alpha,
            inv_l2,
            target_mean: train.target_mean,
            target_std: train.target_std,
            jitter,
            params,
        })
    }

    pub fn params(&self) -> &GpHyperparams {
        &self.params
    }

    pub fn layout(&self) -> FeatureLayout {
        self.layout
    }

    pub fn jitter(&self) -> f64 {
        self.jitter
    }

    pub fn target_mean(&self) -> f64 {
        self.target_mean
    }

    pub fn target_std(&self) -> f64 {
        self.target_std
    }

    pub fn posterior(&self, query: &[f64]) -> Result<Posterior> {
        if query.len() != self.layout.total() {
            return Err(Error::Dimension { expected: self.layout.total(), got: query.len() });
        }
        Ok(self.predict(query))
    }

    /// Unchecked [`GpModel::posterior`].
    pub fn predict(&self, query: &[f64]) -> Posterior {
        let dims = self.layout.total();
        let s2 = self.params.signal_variance;
        let mut v: Vec<f64> = self
            .features
            .chunks_exact(dims.max(1))
            .take(self.n)
            .map(|row| kernel_value(query, row, &self.inv_l2, self.layout, s2))
            .collect();
        let mean: f64 = v.iter().zip(&self.alpha).map(|(k, a)| k * a).sum();

        // forward substitution L w = k, column by column
        let l = self.chol_l.as_slice();
        let n = self.n;
        for j in 0..n {
            let col = &l[j * n..(j + 1) * n];
            let wj = v[j] / col[j];
            v[j] = wj;
            for i in j + 1..n {
                v[i] -= col[i] * wj;
            }
        }
        let reduction: f64 = v.iter().map(|w| w * w).sum();
        let variance = (s2 - reduction).clamp(0.0, s2 + self.params.noise_variance);
        Posterior { mean, variance, target_mean: self.target_mean, target_std: self.target_std }
    }
}

/// Posterior at `query` for a GP with `params` conditioned on `train`.
pub fn posterior(params: &GpHyperparams, train: &TrainingSet, query: &[f64]) -> Result<Posterior> {
    GpModel::new(params.clone(), train)?.posterior(query)
}
