//! One-dimensional outer search: a global grid pass (the outer objectives
//! are observed to be single-peaked but carry no concavity proof, so the
//! grid guards against multimodality) followed by golden-section
//! refinement around the best bracket.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Configuration of the outer one-dimensional search over an SINR cap or
/// floor. Bounds default to problem-derived envelopes when absent.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OuterSearchConfig {
    #[serde(default = "default_grid_points")]
    pub grid_points: usize,
    #[serde(default)]
    pub gamma_lo: Option<f64>,
    #[serde(default)]
    pub gamma_hi: Option<f64>,
    #[serde(default = "default_refine_iters")]
    pub refine_iters: usize,
    #[serde(default = "default_log_spaced")]
    pub log_spaced: bool,
}

fn default_grid_points() -> usize {
    100
}
fn default_refine_iters() -> usize {
    40
}
fn default_log_spaced() -> bool {
    true
}

impl Default for OuterSearchConfig {
    fn default() -> Self {
        Self {
            grid_points: default_grid_points(),
            gamma_lo: None,
            gamma_hi: None,
            refine_iters: default_refine_iters(),
            log_spaced: default_log_spaced(),
        }
    }
}

/// `n` points on `[lo, hi]`, inclusive, logarithmically spaced when
/// requested and `lo > 0`.
pub(crate) fn grid(lo: f64, hi: f64, n: usize, log_spaced: bool) -> Vec<f64> {
    assert!(n >= 2 && hi > lo);
    let use_log = log_spaced && lo > 0.0;
    (0..n)
        .map(|i| {
            let f = i as f64 / (n - 1) as f64;
            if use_log {
                (lo.ln() + f * (hi.ln() - lo.ln())).exp()
            } else {
                lo + f * (hi - lo)
            }
        })
        .collect()
}

pub(crate) struct SearchOutcome<T> {
    pub gamma: f64,
    pub value: f64,
    pub payload: T,
    pub at_boundary: bool,
}

/// Maximizes `eval` over the grid, then golden-section refines inside the
/// bracket around the best grid point. Infeasible evaluations (`None`) are
/// skipped on the grid and treated as −∞ during refinement. Returns `None`
/// when every grid point is infeasible.
pub(crate) fn maximize<T: Send, F>(
    points: &[f64],
    log_spaced: bool,
    refine_iters: usize,
    eval: F,
) -> Option<SearchOutcome<T>>
where
    F: Fn(f64) -> Option<(f64, T)> + Sync,
{
    let grid_results: Vec<Option<(f64, T)>> = points.par_iter().map(|&g| eval(g)).collect();

    let mut best: Option<SearchOutcome<T>> = None;
    let mut best_idx = 0usize;
    for (i, res) in grid_results.into_iter().enumerate() {
        if let Some((value, payload)) = res {
            if best.as_ref().map_or(true, |b| value > b.value) {
                best = Some(SearchOutcome { gamma: points[i], value, payload, at_boundary: false });
                best_idx = i;
            }
        }
    }
    let mut best = best?;
    best.at_boundary = best_idx == 0 || best_idx == points.len() - 1;

    // Golden-section refinement in the grid's own coordinate.
    let use_log = log_spaced && points[0] > 0.0;
    let to_u = |x: f64| if use_log { x.ln() } else { x };
    let from_u = |u: f64| if use_log { u.exp() } else { u };
    let mut a = to_u(points[best_idx.saturating_sub(1)]);
    let mut b = to_u(points[(best_idx + 1).min(points.len() - 1)]);
    if b <= a {
        return Some(best);
    }
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let track = |u: f64, best: &mut SearchOutcome<T>| -> f64 {
        let gamma = from_u(u);
        match eval(gamma) {
            Some((value, payload)) => {
                if value > best.value {
                    best.value = value;
                    best.gamma = gamma;
                    best.payload = payload;
                }
                value
            }
            None => f64::NEG_INFINITY,
        }
    };
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = track(c, &mut best);
    let mut fd = track(d, &mut best);
    for _ in 0..refine_iters {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = track(c, &mut best);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = track(d, &mut best);
        }
    }
    Some(best)
}
