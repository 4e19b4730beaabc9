use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::functions::AcquisitionSpec;
use crate::combinatorics::{Dictionary, Point, SearchSpace};
use crate::surrogate::{featurize, GpModel};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LocalSearchConfig {
    /// Number of local-search trajectories.
    pub num_restarts: usize,
    pub num_random_candidates: usize,
    pub num_spray_neighbors: usize,
    /// Move limit `n_ls` per trajectory.
    pub max_iters: usize,
    /// Alternating discrete/continuous rounds for mixed spaces.
    pub mixed_rounds: usize,
    /// Trajectories that get the continuous block in mixed spaces.
    pub continuous_restarts: usize,
}

impl Default for LocalSearchConfig {
    fn default() -> Self {
        Self {
            num_restarts: 20,
            num_random_candidates: 2000,
            num_spray_neighbors: 100,
            max_iters: 100,
            mixed_rounds: 4,
            continuous_restarts: 5,
        }
    }
}

impl LocalSearchConfig {
    pub fn validate(&self) -> crate::Result<()> {
        let fields = [
            ("num_restarts", self.num_restarts),
            ("num_random_candidates", self.num_random_candidates),
            ("max_iters", self.max_iters),
            ("mixed_rounds", self.mixed_rounds),
            ("continuous_restarts", self.continuous_restarts),
        ];
        match fields.iter().find(|(_, v)| *v == 0) {
            Some((name, _)) => Err(crate::Error::InvalidParameter(format!("local_search.{name} must be positive"))),
            None => Ok(()),
        }
    }
}

/// Something that scores points; larger is better.
pub trait AcquisitionEvaluator {
    fn score(&self, point: &Point) -> f64;

    /// Scores of every one-Hamming neighbour of `point`, ordered by
    /// coordinate and then by target category (skipping the current one).
    fn score_neighbors(&self, space: &SearchSpace, point: &Point) -> Vec<f64> {
        let mut out = Vec::new();
        let mut probe = point.clone();
        for (j, &tau) in space.cardinalities().iter().enumerate() {
            let current = point.discrete[j];
            for c in (0..tau).filter(|&c| c != current) {
                probe.discrete[j] = c;
                out.push(self.score(&probe));
            }
            probe.discrete[j] = current;
        }
        out
    }
}

impl<F: Fn(&Point) -> f64> AcquisitionEvaluator for F {
    fn score(&self, point: &Point) -> f64 {
        self(point)
    }
}

/// Acquisition over a fitted GP in the embedding of one dictionary.
pub struct ModelAcquisition<'a> {
    pub model: &'a GpModel,
    pub dictionary: &'a Dictionary,
    pub space: &'a SearchSpace,
    pub spec: AcquisitionSpec,
}

impl<'a> ModelAcquisition<'a> {
    pub fn new(model: &'a GpModel, dictionary: &'a Dictionary, space: &'a SearchSpace, spec: AcquisitionSpec) -> Self {
        Self { model, dictionary, space, spec }
    }

    fn score_features(&self, features: &[f64]) -> f64 {
        let v = self.spec.score(&self.model.predict(features));
        if v.is_nan() {
            f64::NEG_INFINITY
        } else {
            v
        }
    }
}

impl AcquisitionEvaluator for ModelAcquisition<'_> {
    fn score(&self, point: &Point) -> f64 {
        self.score_features(&featurize(self.dictionary, self.space, point))
    }

    // Each neighbour differs in one coordinate, so its embedding is the
    // base embedding with an O(m) correction.
    fn score_neighbors(&self, space: &SearchSpace, point: &Point) -> Vec<f64> {
        let base = featurize(self.dictionary, self.space, point);
        let mut scratch = base.clone();
        let m = self.dictionary.m();
        let mut out = Vec::new();
        for (j, &tau) in space.cardinalities().iter().enumerate() {
            let current = point.discrete[j];
            for c in (0..tau).filter(|&c| c != current) {
                scratch[..m].copy_from_slice(&base[..m]);
                self.dictionary.update_embedding(&mut scratch[..m], j, current, c);
                out.push(self.score_features(&scratch));
            }
        }
        out
    }
}

fn finite_or_min(v: f64) -> f64 {
    if v.is_nan() {
        f64::NEG_INFINITY
    } else {
        v
    }
}

/// A random perturbation of `z` in 1 to 3 coordinates (fewer if `d < 3`).
pub fn spray_point<R: Rng + ?Sized>(space: &SearchSpace, incumbent: &Point, rng: &mut R) -> Point {
    let d = space.dim();
    let k = rng.gen_range(1..=3.min(d));
    let mut p = incumbent.clone();
    for j in sample(rng, d, k).into_iter() {
        let tau = space.cardinalities()[j];
        let shift = rng.gen_range(1..tau);
        p.discrete[j] = (p.discrete[j] + shift) % tau;
    }
    p
}

/// Pools uniform random points with spray neighbours of the incumbent and
/// returns the `num_restarts` best by acquisition value (stable on ties).
pub fn generate_initial_candidates<E, R>(
    eval: &E,
    space: &SearchSpace,
    incumbent: Option<&Point>,
    cfg: &LocalSearchConfig,
    rng: &mut R,
) -> Vec<Point>
where
    E: AcquisitionEvaluator + ?Sized,
    R: Rng + ?Sized,
{
    let mut pool: Vec<Point> = (0..cfg.num_random_candidates).map(|_| space.sample(rng)).collect();
    if let Some(inc) = incumbent {
        pool.extend((0..cfg.num_spray_neighbors).map(|_| spray_point(space, inc, rng)));
    }
    let scores: Vec<f64> = pool.iter().map(|p| finite_or_min(eval.score(p))).collect();
    let mut order: Vec<usize> = (0..pool.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));
    order.truncate(cfg.num_restarts);
    order.into_iter().map(|i| pool[i].clone()).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct LocalSearchResult {
    pub point: Point,
    pub value: f64,
    /// Moves taken by the winning trajectory.
    pub moves: usize,
    /// Whether the winning trajectory stopped at a local optimum rather than
    /// at the move limit.
    pub converged: bool,
}

/// Best-improvement hill climbing over one-Hamming neighbourhoods.
pub fn climb<E: AcquisitionEvaluator + ?Sized>(eval: &E, space: &SearchSpace, start: &Point, n_ls: usize) -> LocalSearchResult {
    let mut point = start.clone();
    let mut value = finite_or_min(eval.score(&point));
    let mut moves = 0;
    while moves < n_ls {
        let scores = eval.score_neighbors(space, &point);
        let mut best: Option<(usize, f64)> = None;
        for (k, &s) in scores.iter().enumerate() {
            let s = finite_or_min(s);
            if s > best.map_or(value, |(_, b)| b) {
                best = Some((k, s));
            }
        }
        let Some((k, s)) = best else {
            return LocalSearchResult { point, value, moves, converged: true };
        };
        apply_neighbor(space, &mut point, k);
        value = s;
        moves += 1;
    }
    // the final point might still be a local optimum
    let converged = eval.score_neighbors(space, &point).iter().all(|&s| finite_or_min(s) <= value);
    LocalSearchResult { point, value, moves, converged }
}

/// Moves `point` to its `k`-th neighbour in [`AcquisitionEvaluator::score_neighbors`] order.
pub(crate) fn apply_neighbor(space: &SearchSpace, point: &mut Point, mut k: usize) {
    for (j, &tau) in space.cardinalities().iter().enumerate() {
        if k < tau - 1 {
            let current = point.discrete[j];
            point.discrete[j] = if k < current { k } else { k + 1 };
            return;
        }
        k -= tau - 1;
    }
    panic!("neighbour index out of range");
}

/// Runs [`climb`] from every start and returns the best trajectory end
/// (earliest start on ties).
pub fn local_search_discrete<E: AcquisitionEvaluator + ?Sized>(
    eval: &E,
    space: &SearchSpace,
    starts: &[Point],
    n_ls: usize,
) -> LocalSearchResult {
    assert!(!starts.is_empty(), "local search needs at least one start");
    let mut best: Option<LocalSearchResult> = None;
    for s in starts {
        let r = climb(eval, space, s, n_ls);
        if best.as_ref().map_or(true, |b| r.value > b.value) {
            best = Some(r);
        }
    }
    best.unwrap()
}
