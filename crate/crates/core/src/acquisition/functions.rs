use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::surrogate::Posterior;

const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AcquisitionKind {
    ExpectedImprovement,
    Ucb,
}

impl AcquisitionKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::ExpectedImprovement => "expected_improvement",
            Self::Ucb => "ucb",
        }
    }
}

impl std::str::FromStr for AcquisitionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ei" | "expected_improvement" => Ok(Self::ExpectedImprovement),
            "ucb" => Ok(Self::Ucb),
            other => Err(Error::InvalidParameter(format!("unknown acquisition '{other}'"))),
        }
    }
}

/// A fully specified acquisition for one iteration. Both kinds are scored so
/// that larger is better for a minimisation problem.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AcquisitionSpec {
    pub kind: AcquisitionKind,
    /// Best observed target in standardised units (EI incumbent).
    pub best_observed: f64,
    pub beta: f64,
}

impl AcquisitionSpec {
    pub fn expected_improvement(best_observed: f64) -> Self {
        Self { kind: AcquisitionKind::ExpectedImprovement, best_observed, beta: 0.0 }
    }

    pub fn ucb(beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidParameter(format!("beta must be positive, got {beta}")));
        }
        Ok(Self { kind: AcquisitionKind::Ucb, best_observed: f64::NAN, beta })
    }

    /// EI directly; UCB on the negated posterior, `−μ + √β σ`.
    pub fn score(&self, post: &Posterior) -> f64 {
        match self.kind {
            AcquisitionKind::ExpectedImprovement => expected_improvement(post, self.best_observed),
            AcquisitionKind::Ucb => -post.mean + self.beta.sqrt() * post.std_dev(),
        }
    }
}

pub fn normal_pdf(x: f64) -> f64 {
    INV_SQRT_2PI * (-0.5 * x * x).exp()
}

pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// Closed-form EI for minimisation from a mean and standard deviation.
pub fn ei(mean: f64, sd: f64, best: f64) -> f64 {
    let g = best - mean;
    if !(sd > 0.0) {
        return g.max(0.0);
    }
    let u = g / sd;
    (g * normal_cdf(u) + sd * normal_pdf(u)).max(0.0)
}

/// `E[max(best − f, 0)]` under the posterior of `f`.
pub fn expected_improvement(post: &Posterior, best: f64) -> f64 {
    ei(post.mean, post.std_dev(), best)
}

/// `μ + √β σ`.
pub fn ucb_value(post: &Posterior, beta: f64) -> f64 {
    post.mean + beta.max(0.0).sqrt() * post.std_dev()
}

pub(crate) fn ln_biguint(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 64 {
        return (n.iter_u64_digits().next().unwrap_or(0) as f64).ln();
    }
    let shift = bits - 64;
    let top = (n >> shift).iter_u64_digits().next().unwrap_or(0) as f64;
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `β_t = 2 ln(|S| t² π² / 6δ)`, evaluated in log space.
pub fn beta_schedule(cardinality_bound: &BigUint, t: u64, delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!("delta must lie in (0, 1), got {delta}")));
    }
    if t == 0 {
        return Err(Error::InvalidParameter("iteration index starts at 1".into()));
    }
    if cardinality_bound.bits() == 0 {
        return Err(Error::InvalidParameter("cardinality bound must be at least 1".into()));
    }
    let pi2_6 = std::f64::consts::PI.powi(2) / 6.0;
    Ok(2.0 * (ln_biguint(cardinality_bound) + 2.0 * (t as f64).ln() + pi2_6.ln() - delta.ln()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    // the schedule without the δ < 1 restriction, for boundary arithmetic
    fn beta_unchecked(ln_card: f64, t: u64, delta: f64) -> f64 {
        let pi2_6 = std::f64::consts::PI.powi(2) / 6.0;
        2.0 * (ln_card + 2.0 * (t as f64).ln() + pi2_6.ln() - delta.ln())
    }

    fn post(mean: f64, variance: f64) -> Posterior {
        Posterior { mean, variance, target_mean: 0.0, target_std: 1.0 }
    }

    #[test]
    fn ei_limits() {
        assert_eq!(expected_improvement(&post(0.3, 0.0), 0.3), 0.0);
        assert_eq!(expected_improvement(&post(-0.7, 0.0), 0.3), 1.0);
        assert!((expected_improvement(&post(0.0, 1.0), 0.0) - 0.398_942_280_401_432_7).abs() < 1e-12);
    }

    #[test]
    fn ei_matches_monte_carlo() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let (mean, sd, best) = (0.4, 1.3, -0.2);
        let n = 200_000;
        let samples: Vec<f64> = (0..n)
            .map(|_| {
                let e: f64 = StandardNormal.sample(&mut rng);
                (best - (mean + sd * e)).max(0.0)
            })
            .collect();
        let m = samples.iter().sum::<f64>() / n as f64;
        let var = samples.iter().map(|s| (s - m).powi(2)).sum::<f64>() / (n - 1) as f64;
        let se = (var / n as f64).sqrt();
        assert!((ei(mean, sd, best) - m).abs() < 3.0 * se);
    }

    #[test]
    fn ucb_examples() {
        assert_eq!(ucb_value(&post(1.5, 0.0), 9.0), 1.5);
        assert_eq!(ucb_value(&post(1.5, 4.0), 0.0), 1.5);
        assert_eq!(ucb_value(&post(0.0, 4.0), 4.0), 4.0);
        let spec = AcquisitionSpec::ucb(4.0).unwrap();
        assert_eq!(spec.score(&post(1.0, 4.0)), 3.0);
        assert!(AcquisitionSpec::ucb(0.0).is_err());
    }

    #[test]
    fn beta_examples() {
        let pi2_6 = std::f64::consts::PI.powi(2) / 6.0;
        assert!(beta_unchecked(0.0, 1, pi2_6).abs() < 1e-15);
        let b = beta_schedule(&BigUint::from(6u32), 1, 0.5).unwrap();
        assert!((b - 2.0 * (2.0 * std::f64::consts::PI.powi(2)).ln()).abs() < 1e-12);
        assert!((b - 5.965_213_904_517_49).abs() < 1e-12);
        assert!(beta_schedule(&BigUint::from(6u32), 1, 1.0).is_err());
        assert!(beta_schedule(&BigUint::from(0u32), 1, 0.5).is_err());
    }

    #[test]
    fn ln_of_huge_integers() {
        let n = BigUint::from(3u32).pow(500);
        assert!((ln_biguint(&n) - 500.0 * 3f64.ln()).abs() < 1e-9);
        assert_eq!(ln_biguint(&BigUint::from(1u32)), 0.0);
    }

    proptest! {
        #[test]
        fn ei_monotone_in_sigma(mean in -3.0f64..3.0, best in -3.0f64..3.0, s1 in 0.0f64..3.0, ds in 0.0f64..3.0) {
            prop_assert!(ei(mean, s1 + ds, best) >= ei(mean, s1, best) - 1e-12);
            prop_assert!(ei(mean, s1, best) >= 0.0);
        }

        #[test]
        fn beta_monotone(a in 1u64..1_000_000, b in 1u64..1_000_000, t in 1u64..500, dt in 0u64..500) {
            let (lo, hi) = (BigUint::from(a.min(b)), BigUint::from(a.max(b)));
            prop_assert!(beta_schedule(&hi, t, 0.1).unwrap() >= beta_schedule(&lo, t, 0.1).unwrap());
            prop_assert!(beta_schedule(&lo, t + dt, 0.1).unwrap() >= beta_schedule(&lo, t, 0.1).unwrap());
        }
    }
}
