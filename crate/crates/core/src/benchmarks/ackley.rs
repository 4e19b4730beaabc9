use super::Problem;
use crate::combinatorics::{Point, SearchSpace};
use crate::error::{Error, Result};

/// Ackley on `v = (z, x)` with `z ∈ {0,1}^{d_b}` and `x ∈ [−1,1]^{d_c}`.
/// Global minimum 0 at `v = 0`.
pub fn ackley_mixed(z: &[usize], x: &[f64]) -> Result<f64> {
    if let Some(b) = z.iter().find(|b| **b > 1) {
        return Err(Error::Domain(format!("binary entry {b} is not 0 or 1")));
    }
    if let Some(v) = x.iter().find(|v| !(-1.0..=1.0).contains(*v)) {
        return Err(Error::Domain(format!("continuous entry {v} outside [-1, 1]")));
    }
    let n = (z.len() + x.len()) as f64;
    if n == 0.0 {
        return Err(Error::InvalidDimension(0));
    }
    let v = z.iter().map(|&b| b as f64).chain(x.iter().copied());
    let (sq, cos) = v.fold((0.0, 0.0), |(s, c), t| (s + t * t, c + (2.0 * std::f64::consts::PI * t).cos()));
    Ok(-20.0 * (-0.2 * (sq / n).sqrt()).exp() - (cos / n).exp() + 20.0 + std::f64::consts::E)
}

#[derive(Clone, Debug)]
pub struct AckleyMixed {
    binary: usize,
    continuous: usize,
    space: SearchSpace,
}

impl AckleyMixed {
    pub fn new(binary: usize, continuous: usize) -> Result<Self> {
        if binary == 0 {
            return Err(Error::InvalidParameter("mixed Ackley needs at least one binary variable".into()));
        }
        let space = SearchSpace::new(vec![2; binary], (continuous > 0).then(|| vec![(-1.0, 1.0); continuous]))?;
        Ok(Self { binary, continuous, space })
    }
}

impl Problem for AckleyMixed {
    fn name(&self) -> String {
        format!("ackley-mixed:{}:{}", self.binary, self.continuous)
    }

    fn space(&self) -> &SearchSpace {
        &self.space
    }

    fn evaluate(&self, point: &Point) -> Result<f64> {
        self.space.validate(point)?;
        ackley_mixed(&point.discrete, point.continuous_part())
    }

    fn optimum(&self) -> Option<f64> {
        Some(0.0)
    }

    fn metadata(&self) -> serde_json::Value {
        serde_json::json!({
            "objective": "ackley",
            "binary_values": [0, 1],
            "continuous_bounds": [-1.0, 1.0],
        })
    }
}
