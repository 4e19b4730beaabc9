//! Box-constrained limited-memory quasi-Newton minimiser.
//!
//! Variables sitting on a bound with the gradient pushing outward are frozen
//! for the step; the two-loop recursion runs on the remaining free
//! coordinates and the trial point is projected back into the box.

use std::collections::VecDeque;

#[derive(Clone, Debug)]
pub struct MinimizeOptions {
    pub max_iters: usize,
    pub memory: usize,
    /// Relative objective decrease below which the run stops.
    pub ftol: f64,
    /// Infinity norm of the projected gradient below which the run stops.
    pub gtol: f64,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        Self { max_iters: 100, memory: 10, ftol: 1e-9, gtol: 1e-6 }
    }
}

#[derive(Clone, Debug)]
pub struct MinimizeResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub evaluations: usize,
}

fn project(x: &mut [f64], lower: &[f64], upper: &[f64]) {
    for ((v, &lo), &hi) in x.iter_mut().zip(lower).zip(upper) {
        *v = v.clamp(lo, hi);
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn free_mask(x: &[f64], g: &[f64], lower: &[f64], upper: &[f64]) -> Vec<bool> {
    x.iter()
        .zip(g)
        .zip(lower.iter().zip(upper))
        .map(|((&xi, &gi), (&lo, &hi))| !((xi <= lo && gi > 0.0) || (xi >= hi && gi < 0.0)))
        .collect()
}

/// Minimises `f` over the box `[lower, upper]`.
///
/// `f` returns the value and gradient, or `None` where the objective is not
/// defined; such points are treated as infinitely bad by the line search.
/// Returns `None` only if `f` fails at the (projected) starting point.
pub fn minimize_box<F>(
    mut f: F,
    x0: &[f64],
    lower: &[f64],
    upper: &[f64],
    opts: &MinimizeOptions,
) -> Option<MinimizeResult>
where
    F: FnMut(&[f64]) -> Option<(f64, Vec<f64>)>,
{
    let n = x0.len();
    let mut x = x0.to_vec();
    project(&mut x, lower, upper);
    let (mut fx, mut g) = f(&x)?;
    if !fx.is_finite() {
        return None;
    }
    let mut evaluations = 1;
    let mut history: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::with_capacity(opts.memory);
    let mut iterations = 0;

    while iterations < opts.max_iters {
        let free = free_mask(&x, &g, lower, upper);
        let pg_norm = g.iter().zip(&free).filter(|(_, &f)| f).map(|(v, _)| v.abs()).fold(0.0, f64::max);
        if pg_norm < opts.gtol {
            break;
        }

        // two-loop recursion restricted to the free set
        let mut q: Vec<f64> = g.iter().zip(&free).map(|(&v, &f)| if f { v } else { 0.0 }).collect();
        let mut alphas = Vec::with_capacity(history.len());
        for (s, y, rho) in history.iter().rev() {
            let a = rho * dot(s, &q);
            for i in 0..n {
                if free[i] {
                    q[i] -= a * y[i];
                }
            }
            alphas.push(a);
        }
        if let Some((s, y, _)) = history.back() {
            let gamma = dot(s, y) / dot(y, y);
            if gamma.is_finite() && gamma > 0.0 {
                q.iter_mut().for_each(|v| *v *= gamma);
            }
        }
        for ((s, y, rho), a) in history.iter().zip(alphas.iter().rev()) {
            let b = rho * dot(y, &q);
            for i in 0..n {
                if free[i] {
                    q[i] += s[i] * (a - b);
                }
            }
        }
        let mut dir: Vec<f64> = q.iter().map(|v| -v).collect();
        if dot(&dir, &g) >= 0.0 {
            dir = g.iter().zip(&free).map(|(&v, &f)| if f { -v } else { 0.0 }).collect();
            history.clear();
        }

        let mut step = if history.is_empty() {
            let dmax = dir.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
            (1.0 / dmax).min(1.0)
        } else {
            1.0
        };
        let mut accepted = None;
        for _ in 0..40 {
            let mut trial: Vec<f64> = x.iter().zip(&dir).map(|(xi, di)| xi + step * di).collect();
            project(&mut trial, lower, upper);
            let moved: Vec<f64> = trial.iter().zip(&x).map(|(a, b)| a - b).collect();
            if moved.iter().all(|v| *v == 0.0) {
                break;
            }
            evaluations += 1;
            if let Some((ft, gt)) = f(&trial) {
                if ft.is_finite() && ft <= fx + 1e-4 * dot(&g, &moved) {
                    accepted = Some((trial, ft, gt, moved));
                    break;
                }
            }
            step *= 0.5;
        }
        let Some((xn, fn_, gn, s)) = accepted else {
            break;
        };
        iterations += 1;
        let y: Vec<f64> = gn.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-12 {
            if history.len() == opts.memory {
                history.pop_front();
            }
            history.push_back((s, y, 1.0 / sy));
        }
        let decrease = fx - fn_;
        x = xn;
        g = gn;
        fx = fn_;
        if decrease <= opts.ftol * fx.abs().max(1.0) {
            break;
        }
    }

    Some(MinimizeResult { x, value: fx, iterations, evaluations })
}
