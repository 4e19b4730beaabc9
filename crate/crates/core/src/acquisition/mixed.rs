use rand::Rng;

use super::local_search::{climb, generate_initial_candidates, local_search_discrete, AcquisitionEvaluator, LocalSearchConfig};
use crate::combinatorics::{Point, SearchSpace};
use crate::optim::{minimize_box, MinimizeOptions};

#[derive(Clone, Debug, PartialEq)]
pub struct AcquisitionOptimum {
    pub point: Point,
    pub value: f64,
}

const FD_REL_STEP: f64 = 1e-6;

/// Central-difference gradient of `x ↦ eval(z, x)`, one-sided where a step
/// would leave the box.
fn fd_gradient<E: AcquisitionEvaluator + ?Sized>(eval: &E, z: &[usize], x: &[f64], bounds: &[(f64, f64)]) -> Vec<f64> {
    let mut probe = Point::mixed(z.to_vec(), x.to_vec());
    (0..x.len())
        .map(|i| {
            let h = FD_REL_STEP * x[i].abs().max(1.0);
            let (lo, hi) = bounds[i];
            let up = (x[i] + h).min(hi);
            let down = (x[i] - h).max(lo);
            probe.continuous.as_mut().unwrap()[i] = up;
            let fu = eval.score(&probe);
            probe.continuous.as_mut().unwrap()[i] = down;
            let fd = eval.score(&probe);
            probe.continuous.as_mut().unwrap()[i] = x[i];
            if up > down {
                (fu - fd) / (up - down)
            } else {
                0.0
            }
        })
        .collect()
}

/// Maximises the acquisition over the continuous block with `z` frozen.
pub fn optimize_continuous<E: AcquisitionEvaluator + ?Sized>(
    eval: &E,
    space: &SearchSpace,
    z: &[usize],
    x0: &[f64],
    max_iters: usize,
) -> (Vec<f64>, f64) {
    let bounds = space.continuous_bounds();
    let lower: Vec<f64> = bounds.iter().map(|b| b.0).collect();
    let upper: Vec<f64> = bounds.iter().map(|b| b.1).collect();
    let objective = |x: &[f64]| {
        let v = eval.score(&Point::mixed(z.to_vec(), x.to_vec()));
        if !v.is_finite() {
            return None;
        }
        let g = fd_gradient(eval, z, x, bounds);
        Some((-v, g.into_iter().map(|v| -v).collect()))
    };
    let opts = MinimizeOptions { max_iters, ftol: 1e-12, gtol: 1e-9, ..Default::default() };
    match minimize_box(objective, x0, &lower, &upper, &opts) {
        Some(r) => (r.x, -r.value),
        None => (x0.to_vec(), f64::NEG_INFINITY),
    }
}

/// Alternates discrete hill climbing (continuous part frozen) with
/// quasi-Newton ascent on the continuous part (discrete part frozen) from one
/// start, until neither block improves or `rounds` elapse.
pub fn alternate<E: AcquisitionEvaluator + ?Sized>(eval: &E, space: &SearchSpace, start: &Point, cfg: &LocalSearchConfig) -> AcquisitionOptimum {
    let mut point = start.clone();
    let mut value = eval.score(&point);
    for _ in 0..cfg.mixed_rounds {
        let before = value;
        let d = climb(eval, space, &point, cfg.max_iters);
        if d.value > value {
            point = d.point;
            value = d.value;
        }
        let (x, v) = optimize_continuous(eval, space, &point.discrete, point.continuous_part(), cfg.max_iters);
        if v > value {
            point.continuous = Some(x);
            value = v;
        }
        if !(value > before) {
            break;
        }
    }
    AcquisitionOptimum { point, value }
}

/// Maximises the acquisition over the whole space. Discrete spaces use
/// multi-start local search; mixed spaces run [`alternate`] from the best
/// `continuous_restarts` candidates.
pub fn optimize_acquisition<E, R>(
    eval: &E,
    space: &SearchSpace,
    incumbent: Option<&Point>,
    cfg: &LocalSearchConfig,
    rng: &mut R,
) -> AcquisitionOptimum
where
    E: AcquisitionEvaluator + ?Sized,
    R: Rng + ?Sized,
{
    let starts = generate_initial_candidates(eval, space, incumbent, cfg, rng);
    if !space.is_mixed() {
        let r = local_search_discrete(eval, space, &starts, cfg.max_iters);
        return AcquisitionOptimum { point: r.point, value: r.value };
    }
    optimize_mixed(eval, space, &starts, cfg)
}

/// Mixed-space optimiser over prepared starts; with no continuous dimensions
/// this is exactly [`local_search_discrete`].
pub fn optimize_mixed<E: AcquisitionEvaluator + ?Sized>(
    eval: &E,
    space: &SearchSpace,
    starts: &[Point],
    cfg: &LocalSearchConfig,
) -> AcquisitionOptimum {
    if !space.is_mixed() {
        let r = local_search_discrete(eval, space, starts, cfg.max_iters);
        return AcquisitionOptimum { point: r.point, value: r.value };
    }
    let mut best: Option<AcquisitionOptimum> = None;
    for s in starts.iter().take(cfg.continuous_restarts.max(1)) {
        let r = alternate(eval, space, s, cfg);
        if best.as_ref().map_or(true, |b| r.value > b.value) {
            best = Some(r);
        }
    }
    best.expect("at least one start")
}
