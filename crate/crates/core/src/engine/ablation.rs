use serde::{Deserialize, Serialize};

use super::bo::{run_bodi, BoConfig};
use super::record::RunRecord;
use crate::benchmarks::Problem;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AblationEntry {
    pub m: usize,
    /// Per-evaluation median of best-so-far across seeds.
    pub median_trace: Vec<f64>,
    pub final_best: Vec<f64>,
    pub records: Vec<RunRecord>,
}

impl AblationEntry {
    pub fn median_final(&self) -> f64 {
        median(&self.final_best)
    }
}

/// Median of a non-empty slice (mean of the two middle values for even length).
pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        return f64::NAN;
    }
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Runs BODi for every dictionary size in `m_values` over the shared `seeds`.
pub fn dictionary_ablation(problem: &dyn Problem, m_values: &[usize], base: &BoConfig, seeds: &[u64]) -> Result<Vec<AblationEntry>> {
    if m_values.is_empty() || seeds.is_empty() {
        return Err(Error::InvalidParameter("ablation needs at least one m value and one seed".into()));
    }
    m_values
        .iter()
        .map(|&m| {
            let records: Vec<RunRecord> =
                seeds.iter().map(|&seed| run_bodi(problem, &BoConfig { m, seed, ..base.clone() })).collect::<Result<_>>()?;
            let traces: Vec<Vec<f64>> = records.iter().map(|r| r.best_so_far_trace()).collect();
            let median_trace =
                (0..base.budget).map(|i| median(&traces.iter().map(|t| t[i]).collect::<Vec<_>>())).collect();
            let final_best = records.iter().map(|r| r.best_value()).collect();
            Ok(AblationEntry { m, median_trace, final_best, records })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::acquisition::LocalSearchConfig;
    use crate::benchmarks::{Labs, MeritConvention};
    use crate::surrogate::FitConfig;

    #[test]
    fn medians() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
    }

    #[test]
    fn single_cell_matches_run_bodi_and_shape() {
        let p = Labs::new(8, MeritConvention::Conventional).unwrap();
        let base = BoConfig {
            n_init: 4,
            budget: 7,
            local_search: LocalSearchConfig { num_random_candidates: 50, num_restarts: 2, ..Default::default() },
            fit: FitConfig { num_restarts: 1, max_iters: 20, ..Default::default() },
            ..Default::default()
        };
        let t = dictionary_ablation(&p, &[8], &base, &[5]).unwrap();
        let direct = run_bodi(&p, &BoConfig { m: 8, seed: 5, ..base.clone() }).unwrap();
        assert_eq!(t[0].records[0].values(), direct.values());
        assert_eq!(t[0].median_trace, direct.best_so_far_trace());
        let t2 = dictionary_ablation(&p, &[4, 8], &base, &[0, 1]).unwrap();
        assert_eq!(t2.len(), 2);
        assert!(t2.iter().all(|e| e.median_trace.len() == 7));
    }
}
