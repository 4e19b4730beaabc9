//! Quantities describing the embedded search space of a binary dictionary:
//! coherence, the cardinality bound built on it, and brute-force oracles.

use std::collections::HashSet;

use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::dictionary::Dictionary;
use super::space::hamming;
use crate::error::{Error, Result};

pub const MAX_ENUMERATION_DIM: usize = 24;
pub const MAX_GAUSSIAN_DIM: usize = 20;

fn require_binary(dict: &Dictionary) -> Result<()> {
    if dict.is_binary() {
        Ok(())
    } else {
        Err(Error::UnsupportedSpace("operation is defined for binary dictionaries only".into()))
    }
}

/// `μ_A = max_{i≠j} max(h(a_i, a_j), h(¬a_i, a_j))`.
///
/// Uses `h(¬a, b) = d − h(a, b)`, so each unordered pair is visited once.
pub fn coherence_mu(dict: &Dictionary) -> Result<usize> {
    require_binary(dict)?;
    if dict.m() < 2 {
        return Err(Error::UndefinedCoherence(dict.m()));
    }
    let d = dict.d();
    let mut mu = 0;
    for i in 0..dict.m() {
        for j in i + 1..dict.m() {
            let h = hamming(dict.row(i), dict.row(j));
            mu = mu.max(h.max(d - h));
        }
    }
    Ok(mu)
}

/// `[(μ+1)(d+1−μ)]^⌊m/2⌋ · (d+1)^(m mod 2)`, and `d + 1` when `m = 1`.
pub fn cardinality_bound(dict: &Dictionary) -> Result<BigUint> {
    require_binary(dict)?;
    let d = dict.d();
    if dict.m() == 1 {
        return Ok(BigUint::from(d + 1));
    }
    let mu = coherence_mu(dict)?;
    let pair = BigUint::from((mu + 1) * (d + 1 - mu));
    let odd = BigUint::from(d + 1).pow((dict.m() % 2) as u32);
    Ok(pair.pow((dict.m() / 2) as u32) * odd)
}

/// Exact `|S_A|`: the number of distinct embeddings over all `2^d` inputs.
pub fn enumerate_embedded_cardinality(dict: &Dictionary) -> Result<u64> {
    require_binary(dict)?;
    let d = dict.d();
    if d > MAX_ENUMERATION_DIM {
        return Err(Error::EnumerationTooLarge { d, limit: MAX_ENUMERATION_DIM });
    }
    let mut seen: HashSet<Vec<u8>> = HashSet::new();
    let mut z = vec![0usize; d];
    for code in 0u64..(1u64 << d) {
        for (j, v) in z.iter_mut().enumerate() {
            *v = ((code >> j) & 1) as usize;
        }
        let key: Vec<u8> = dict.rows().map(|row| hamming(row, &z) as u8).collect();
        seen.insert(key);
    }
    Ok(seen.len() as u64)
}

/// Number of distinct values of `aᵀ z̄` over `z̄ ∈ {±1}^d` for a given
/// projection vector. Values closer than `1e-9 · ‖a‖₁` count as equal.
pub fn projection_cardinality(a: &[f64]) -> Result<usize> {
    let d = a.len();
    if d > MAX_GAUSSIAN_DIM {
        return Err(Error::EnumerationTooLarge { d, limit: MAX_GAUSSIAN_DIM });
    }
    let scale: f64 = a.iter().map(|v| v.abs()).sum();
    let tol = 1e-9 * scale.max(f64::MIN_POSITIVE);
    let mut values: Vec<f64> = (0u64..(1u64 << d))
        .map(|code| {
            a.iter()
                .enumerate()
                .map(|(j, &aj)| if (code >> j) & 1 == 1 { aj } else { -aj })
                .sum()
        })
        .collect();
    values.sort_by(f64::total_cmp);
    let mut count = 1;
    for w in values.windows(2) {
        if w[1] - w[0] > tol {
            count += 1;
        }
    }
    Ok(count)
}

/// Cardinality of the one-dimensional Gaussian projection `a ~ N(0, I_d)`;
/// almost surely `2^d`.
pub fn gaussian_projection_cardinality(d: usize, seed: u64) -> Result<usize> {
    if d == 0 {
        return Err(Error::InvalidParameter("dimension must be >= 1".into()));
    }
    if d > MAX_GAUSSIAN_DIM {
        return Err(Error::EnumerationTooLarge { d, limit: MAX_GAUSSIAN_DIM });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a: Vec<f64> = (0..d).map(|_| StandardNormal.sample(&mut rng)).collect();
    projection_cardinality(&a)
}

/// `exp(−2·h(z, z'))` on binary vectors.
pub fn hamming_exponential_kernel(z: &[usize], w: &[usize]) -> f64 {
    (-2.0 * hamming(z, w) as f64).exp()
}

/// `exp(−‖z̄ − w̄‖² / 2)` on the ±1 encodings; equal to
/// [`hamming_exponential_kernel`] on binary inputs.
pub fn pm_one_rbf_kernel(z: &[usize], w: &[usize]) -> f64 {
    let sq: f64 = z
        .iter()
        .zip(w)
        .map(|(&a, &b)| {
            let diff = (2.0 * a as f64 - 1.0) - (2.0 * b as f64 - 1.0);
            diff * diff
        })
        .sum();
    (-sq / 2.0).exp()
}
