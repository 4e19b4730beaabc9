use num_bigint::BigUint;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A product of finite categorical variables, optionally paired with a
/// continuous box. Binary variables are categorical with cardinality 2.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchSpace {
    cardinalities: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    continuous_bounds: Option<Vec<(f64, f64)>>,
}

impl SearchSpace {
    pub fn new(cardinalities: Vec<usize>, continuous_bounds: Option<Vec<(f64, f64)>>) -> Result<Self> {
        if cardinalities.is_empty() {
            return Err(Error::InvalidParameter("search space needs at least one discrete variable".into()));
        }
        if let Some(j) = cardinalities.iter().position(|&t| t < 2) {
            return Err(Error::InvalidParameter(format!(
                "variable {j} has cardinality {} (must be >= 2)",
                cardinalities[j]
            )));
        }
        let continuous_bounds = match continuous_bounds {
            Some(b) if b.is_empty() => None,
            other => other,
        };
        if let Some(bounds) = &continuous_bounds {
            for (j, &(lo, hi)) in bounds.iter().enumerate() {
                if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                    return Err(Error::InvalidParameter(format!(
                        "continuous variable {j} has invalid bounds ({lo}, {hi})"
                    )));
                }
            }
        }
        Ok(Self { cardinalities, continuous_bounds })
    }

    pub fn binary(d: usize) -> Result<Self> {
        Self::new(vec![2; d], None)
    }

    pub fn categorical(cardinalities: Vec<usize>) -> Result<Self> {
        Self::new(cardinalities, None)
    }

    pub fn mixed(cardinalities: Vec<usize>, bounds: Vec<(f64, f64)>) -> Result<Self> {
        Self::new(cardinalities, Some(bounds))
    }

    /// Number of discrete variables.
    pub fn dim(&self) -> usize {
        self.cardinalities.len()
    }

    pub fn cardinalities(&self) -> &[usize] {
        &self.cardinalities
    }

    pub fn continuous_bounds(&self) -> &[(f64, f64)] {
        self.continuous_bounds.as_deref().unwrap_or(&[])
    }

    pub fn continuous_dim(&self) -> usize {
        self.continuous_bounds().len()
    }

    pub fn is_mixed(&self) -> bool {
        self.continuous_bounds.is_some()
    }

    pub fn is_binary(&self) -> bool {
        self.cardinalities.iter().all(|&t| t == 2)
    }

    pub fn max_cardinality(&self) -> usize {
        self.cardinalities.iter().copied().max().unwrap_or(0)
    }

    /// |Z|, the number of discrete configurations.
    pub fn num_configurations(&self) -> BigUint {
        self.cardinalities.iter().fold(BigUint::from(1u32), |acc, &t| acc * BigUint::from(t))
    }

    pub fn validate_discrete(&self, z: &[usize]) -> Result<()> {
        if z.len() != self.dim() {
            return Err(Error::Dimension { expected: self.dim(), got: z.len() });
        }
        if let Some(j) = z.iter().zip(&self.cardinalities).position(|(&v, &t)| v >= t) {
            return Err(Error::Domain(format!(
                "category {} of variable {j} is outside [0, {})",
                z[j], self.cardinalities[j]
            )));
        }
        Ok(())
    }

    pub fn validate(&self, point: &Point) -> Result<()> {
        self.validate_discrete(&point.discrete)?;
        match (&point.continuous, self.is_mixed()) {
            (None, false) => Ok(()),
            (Some(_), false) => Err(Error::Domain("continuous values given for a purely discrete space".into())),
            (None, true) => Err(Error::Domain("mixed space requires continuous values".into())),
            (Some(x), true) => {
                let bounds = self.continuous_bounds();
                if x.len() != bounds.len() {
                    return Err(Error::Dimension { expected: bounds.len(), got: x.len() });
                }
                for (j, (&v, &(lo, hi))) in x.iter().zip(bounds).enumerate() {
                    if !(lo..=hi).contains(&v) {
                        return Err(Error::Domain(format!(
                            "continuous variable {j} = {v} outside [{lo}, {hi}]"
                        )));
                    }
                }
                Ok(())
            }
        }
    }

    pub fn sample_discrete<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<usize> {
        self.cardinalities.iter().map(|&t| rng.gen_range(0..t)).collect()
    }

    pub fn sample_continuous<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<Vec<f64>> {
        self.continuous_bounds
            .as_ref()
            .map(|b| b.iter().map(|&(lo, hi)| rng.gen_range(lo..=hi)).collect())
    }

    /// Uniform draw over the whole space.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        let discrete = self.sample_discrete(rng);
        let continuous = self.sample_continuous(rng);
        Point { discrete, continuous }
    }

    /// Min-max scaling of continuous values into [0, 1].
    pub fn normalize_continuous(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(self.continuous_bounds())
            .map(|(&v, &(lo, hi))| (v - lo) / (hi - lo))
            .collect()
    }

    pub fn clamp_continuous(&self, x: &mut [f64]) {
        for (v, &(lo, hi)) in x.iter_mut().zip(self.continuous_bounds()) {
            *v = v.clamp(lo, hi);
        }
    }
}

/// A point of a [`SearchSpace`]: category indices plus the continuous part
/// for mixed spaces.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub discrete: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub continuous: Option<Vec<f64>>,
}

impl Point {
    pub fn discrete(z: Vec<usize>) -> Self {
        Self { discrete: z, continuous: None }
    }

    pub fn mixed(z: Vec<usize>, x: Vec<f64>) -> Self {
        Self { discrete: z, continuous: Some(x) }
    }

    pub fn continuous_part(&self) -> &[f64] {
        self.continuous.as_deref().unwrap_or(&[])
    }
}

/// Number of positions where `a` and `b` disagree.
pub fn hamming_distance(a: &[usize], b: &[usize]) -> Result<usize> {
    if a.len() != b.len() {
        return Err(Error::Dimension { expected: a.len(), got: b.len() });
    }
    Ok(hamming(a, b))
}

#[inline]
pub(crate) fn hamming(a: &[usize], b: &[usize]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}
