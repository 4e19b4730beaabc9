use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const SQRT5: f64 = 2.236_067_977_499_79;

/// Kernel hyperparameters: one ARD lengthscale per feature, a signal
/// variance and the observation-noise variance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GpHyperparams {
    pub lengthscales: Vec<f64>,
    pub signal_variance: f64,
    pub noise_variance: f64,
}

impl GpHyperparams {
    /// `ℓ = √D`, `s² = 1`, `σ² = 1e-3`.
    pub fn default_for(num_features: usize) -> Self {
        Self {
            lengthscales: vec![(num_features.max(1) as f64).sqrt(); num_features],
            signal_variance: 1.0,
            noise_variance: 1e-3,
        }
    }

    pub fn validate(&self, num_features: usize) -> Result<()> {
        if self.lengthscales.len() != num_features {
            return Err(Error::Dimension { expected: num_features, got: self.lengthscales.len() });
        }
        if let Some(l) = self.lengthscales.iter().find(|l| !(**l > 0.0 && l.is_finite())) {
            return Err(Error::InvalidParameter(format!("lengthscale {l} must be positive")));
        }
        if !(self.signal_variance > 0.0) || !(self.noise_variance >= 0.0) {
            return Err(Error::InvalidParameter("variances must be positive (noise non-negative)".into()));
        }
        Ok(())
    }

    /// Packs `[ln ℓ…, ln s², ln σ²]`.
    pub fn to_log_vector(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.lengthscales.iter().map(|l| l.ln()).collect();
        v.push(self.signal_variance.ln());
        v.push(self.noise_variance.ln());
        v
    }

    pub fn from_log_vector(v: &[f64]) -> Self {
        let n = v.len() - 2;
        Self {
            lengthscales: v[..n].iter().map(|x| x.exp()).collect(),
            signal_variance: v[n].exp(),
            noise_variance: v[n + 1].exp(),
        }
    }
}

/// How the feature vector splits into kernel factors: the embedding block
/// followed by an optional block of normalised continuous inputs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureLayout {
    pub discrete: usize,
    pub continuous: usize,
}

impl FeatureLayout {
    pub fn discrete_only(dims: usize) -> Self {
        Self { discrete: dims, continuous: 0 }
    }

    pub fn total(&self) -> usize {
        self.discrete + self.continuous
    }

    pub(crate) fn blocks(&self) -> impl Iterator<Item = std::ops::Range<usize>> {
        let d = self.discrete;
        let t = self.total();
        [0..d, d..t].into_iter().filter(|r| !r.is_empty())
    }
}

/// Unit-variance Matérn-5/2 profile `(1 + √5 r + 5r²/3) e^{−√5 r}`.
#[inline]
pub(crate) fn m52_unit(r2: f64) -> f64 {
    let r = r2.max(0.0).sqrt();
    (1.0 + SQRT5 * r + 5.0 * r2 / 3.0) * (-SQRT5 * r).exp()
}

/// `−2 · d m52_unit / d(r²) = (5/3)(1 + √5 r) e^{−√5 r}`; the derivative of the
/// profile with respect to `ln ℓ_i` is this factor times `δ_i² / ℓ_i²`.
#[inline]
pub(crate) fn m52_lengthscale_factor(r2: f64) -> f64 {
    let r = r2.max(0.0).sqrt();
    5.0 / 3.0 * (1.0 + SQRT5 * r) * (-SQRT5 * r).exp()
}

#[inline]
pub(crate) fn scaled_sq_dist(u: &[f64], v: &[f64], inv_l2: &[f64]) -> f64 {
    u.iter()
        .zip(v)
        .zip(inv_l2)
        .map(|((a, b), w)| {
            let d = a - b;
            d * d * w
        })
        .sum()
}

fn check(u: &[f64], v: &[f64], params: &GpHyperparams) -> Result<()> {
    if u.len() != v.len() {
        return Err(Error::Dimension { expected: u.len(), got: v.len() });
    }
    params.validate(u.len())
}

/// Matérn-5/2 with ARD: `s² (1 + √5 r + 5r²/3) e^{−√5 r}`, `r² = Σ (u_i − v_i)² / ℓ_i²`.
pub fn matern52_ard(u: &[f64], v: &[f64], params: &GpHyperparams) -> Result<f64> {
    check(u, v, params)?;
    let inv_l2: Vec<f64> = params.lengthscales.iter().map(|l| 1.0 / (l * l)).collect();
    Ok(params.signal_variance * m52_unit(scaled_sq_dist(u, v, &inv_l2)))
}

/// Product kernel for mixed inputs: one shared `s²` times a unit Matérn-5/2
/// on the embedding block and another on the continuous block.
pub fn mixed_kernel(u: &[f64], v: &[f64], layout: FeatureLayout, params: &GpHyperparams) -> Result<f64> {
    if u.len() != layout.total() {
        return Err(Error::Dimension { expected: layout.total(), got: u.len() });
    }
    check(u, v, params)?;
    let inv_l2: Vec<f64> = params.lengthscales.iter().map(|l| 1.0 / (l * l)).collect();
    Ok(kernel_value(u, v, &inv_l2, layout, params.signal_variance))
}

#[inline]
pub(crate) fn kernel_value(u: &[f64], v: &[f64], inv_l2: &[f64], layout: FeatureLayout, s2: f64) -> f64 {
    let mut k = s2;
    for b in layout.blocks() {
        k *= m52_unit(scaled_sq_dist(&u[b.clone()], &v[b.clone()], &inv_l2[b]));
    }
    k
}
