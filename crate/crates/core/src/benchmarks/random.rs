use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use web_time::Instant;

use super::Problem;
use crate::engine::RunRecord;
use crate::error::{Error, Result};

/// Uniform i.i.d. sampling over the problem's space.
pub fn random_search(problem: &dyn Problem, budget: usize, seed: u64) -> Result<RunRecord> {
    if budget == 0 {
        return Err(Error::InvalidParameter("budget must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = Instant::now();
    let mut rec = RunRecord::new("random", problem, seed);
    for _ in 0..budget {
        let p = problem.space().sample(&mut rng);
        let v = problem.evaluate(&p)?;
        rec.push(p, v, start.elapsed().as_secs_f64(), None);
    }
    Ok(rec)
}
