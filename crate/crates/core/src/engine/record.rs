use serde::{Deserialize, Serialize};

use crate::benchmarks::Problem;
use crate::combinatorics::Point;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRow {
    /// 1-based evaluation index.
    pub iteration: usize,
    pub point: Point,
    /// Minimised objective.
    pub value: f64,
    pub best_so_far: f64,
    pub elapsed_s: f64,
    /// Seed of the dictionary that proposed the point; `None` for random
    /// evaluations.
    pub dict_seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunEvent {
    pub iteration: usize,
    pub message: String,
}

/// `β_t` used at a UCB iteration together with the bound it was computed from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BetaEntry {
    pub iteration: usize,
    pub t: u64,
    pub cardinality_bound: String,
    pub beta: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub method: String,
    pub problem: String,
    pub seed: u64,
    pub rows: Vec<RunRow>,
    pub events: Vec<RunEvent>,
    pub beta: Vec<BetaEntry>,
    pub optimum: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub best_point: Point,
    pub best_value: f64,
    /// `best_value` on the problem's natural scale.
    pub best_reported: f64,
    pub total_time_s: f64,
    pub cumulative_regret: Option<f64>,
}

impl RunRecord {
    pub fn new(method: &str, problem: &dyn Problem, seed: u64) -> Self {
        Self {
            method: method.into(),
            problem: problem.name(),
            seed,
            rows: Vec::new(),
            events: Vec::new(),
            beta: Vec::new(),
            optimum: problem.optimum(),
        }
    }

    pub fn push(&mut self, point: Point, value: f64, elapsed_s: f64, dict_seed: Option<u64>) {
        let best_so_far = self.rows.last().map_or(value, |r| r.best_so_far.min(value));
        self.rows.push(RunRow { iteration: self.rows.len() + 1, point, value, best_so_far, elapsed_s, dict_seed });
    }

    pub fn log(&mut self, message: impl Into<String>) {
        let message = message.into();
        log::warn!("{} seed {} iteration {}: {message}", self.method, self.seed, self.rows.len() + 1);
        self.events.push(RunEvent { iteration: self.rows.len() + 1, message });
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// First row attaining the minimum value.
    pub fn best(&self) -> Option<&RunRow> {
        self.rows.iter().fold(None, |b: Option<&RunRow>, r| match b {
            Some(b) if b.value <= r.value => Some(b),
            _ => Some(r),
        })
    }

    pub fn best_value(&self) -> f64 {
        self.best().map_or(f64::INFINITY, |r| r.value)
    }

    pub fn best_so_far_trace(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.best_so_far).collect()
    }

    pub fn values(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.value).collect()
    }

    /// `r_t = f(z_t) − f(z*)` when the optimum is known.
    pub fn regret_trace(&self) -> Option<Vec<f64>> {
        let opt = self.optimum?;
        Some(self.rows.iter().map(|r| r.value - opt).collect())
    }

    pub fn cumulative_regret(&self) -> Option<f64> {
        self.regret_trace().map(|r| r.iter().sum())
    }

    pub fn summary(&self, problem: &dyn Problem) -> Option<RunSummary> {
        let best = self.best()?;
        Some(RunSummary {
            best_point: best.point.clone(),
            best_value: best.value,
            best_reported: problem.report(best.value),
            total_time_s: self.rows.last().map_or(0.0, |r| r.elapsed_s),
            cumulative_regret: self.cumulative_regret(),
        })
    }

    /// Checks that `best_so_far` is the running minimum and iterations are
    /// consecutive.
    pub fn check_consistency(&self) -> Result<()> {
        let mut running = f64::INFINITY;
        for (i, r) in self.rows.iter().enumerate() {
            running = running.min(r.value);
            if r.iteration != i + 1 || r.best_so_far != running {
                return Err(Error::InvalidParameter(format!("record row {} is inconsistent", i + 1)));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchmarks::AckleyMixed;

    #[test]
    fn running_min_and_regret() {
        let p = AckleyMixed::new(2, 0).unwrap();
        let mut rec = RunRecord::new("random", &p, 0);
        for (i, v) in [3.0, 1.0, 2.0, 0.5].into_iter().enumerate() {
            rec.push(Point::discrete(vec![i % 2, 0]), v, 0.0, None);
        }
        assert_eq!(rec.best_so_far_trace(), vec![3.0, 1.0, 1.0, 0.5]);
        assert_eq!(rec.best().unwrap().iteration, 4);
        assert_eq!(rec.cumulative_regret(), Some(6.5));
        rec.check_consistency().unwrap();
        rec.rows[2].best_so_far = 2.0;
        assert!(rec.check_consistency().is_err());
    }
}
