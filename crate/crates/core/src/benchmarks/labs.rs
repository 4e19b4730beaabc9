use serde::{Deserialize, Serialize};

use super::Problem;
use crate::combinatorics::{Point, SearchSpace};
use crate::error::{Error, Result};

/// Best known merit factor for `n = 50` (energy 153) under the
/// conventional `n²/(2E)` normalisation.
pub const LABS_N50_BEST_MERIT: f64 = 8.170;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MeritConvention {
    /// `n² / E`.
    PaperFormula,
    /// `n² / (2E)`, the normalisation used in the LABS literature.
    #[default]
    Conventional,
}

impl MeritConvention {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::PaperFormula => "paper_formula",
            Self::Conventional => "conventional",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabsSpec {
    pub n: usize,
    pub merit_convention: MeritConvention,
}

/// `E(x) = Σ_{k=1}^{n−1} C_k²` with `C_k = Σ_{i=1}^{n−k} x_i x_{i+k}`.
pub fn labs_energy(seq: &[i8]) -> Result<u64> {
    if let Some(v) = seq.iter().find(|v| **v != 1 && **v != -1) {
        return Err(Error::Domain(format!("LABS entries must be ±1, got {v}")));
    }
    let n = seq.len();
    let mut e = 0u64;
    for k in 1..n {
        let c: i64 = (0..n - k).map(|i| (seq[i] * seq[i + k]) as i64).sum();
        e += (c * c) as u64;
    }
    Ok(e)
}

pub fn labs_merit(seq: &[i8], convention: MeritConvention) -> Result<f64> {
    if seq.len() < 2 {
        return Err(Error::Domain("LABS needs n ≥ 2".into()));
    }
    let e = labs_energy(seq)? as f64;
    let n2 = (seq.len() * seq.len()) as f64;
    Ok(match convention {
        MeritConvention::PaperFormula => n2 / e,
        MeritConvention::Conventional => n2 / (2.0 * e),
    })
}

/// Maps bits to a ±1 sequence, `1 ↦ +1`, `0 ↦ −1`.
pub fn bits_to_sequence(z: &[usize]) -> Vec<i8> {
    z.iter().map(|&b| if b == 1 { 1 } else { -1 }).collect()
}

/// LABS as a minimisation problem over `{0,1}^n`: the objective is the
/// negated merit factor.
#[derive(Clone, Debug)]
pub struct Labs {
    spec: LabsSpec,
    space: SearchSpace,
}

impl Labs {
    pub fn new(n: usize, merit_convention: MeritConvention) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter("LABS needs n ≥ 2".into()));
        }
        Ok(Self { spec: LabsSpec { n, merit_convention }, space: SearchSpace::binary(n)? })
    }

    pub fn spec(&self) -> LabsSpec {
        self.spec
    }
}

impl Problem for Labs {
    fn name(&self) -> String {
        format!("labs:{}", self.spec.n)
    }

    fn space(&self) -> &SearchSpace {
        &self.space
    }

    fn evaluate(&self, point: &Point) -> Result<f64> {
        self.space.validate(point)?;
        Ok(-labs_merit(&bits_to_sequence(&point.discrete), self.spec.merit_convention)?)
    }

    fn report(&self, value: f64) -> f64 {
        -value
    }

    fn maximize(&self) -> bool {
        true
    }

    fn metadata(&self) -> serde_json::Value {
        serde_json::json!({
            "objective": "merit_factor",
            "merit_convention": self.spec.merit_convention.as_str(),
            "encoding": "bit 1 -> +1, bit 0 -> -1",
        })
    }
}
