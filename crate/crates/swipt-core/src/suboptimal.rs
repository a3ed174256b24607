//! Low-complexity beamforming designs. All four place the energy beams in
//! the null space of the IR channel (they double as artificial noise that
//! never disturbs the IR). Design I additionally zero-forces the
//! information beam into the null space of every ER channel (needs
//! `K < M`); design II aligns it with the IR channel and searches the
//! information power split.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{self, LinalgError};
use crate::metrics;
use crate::model::{
    covariances_to_beams, tol, BeamformingSolution, C64, CMatrix, CVector, CovariancePair,
    HermitianMatrix, Method, ModelError, SystemModel,
};
use crate::sdr::{self, SolveStatus};

#[derive(Debug, Error)]
pub enum SubError {
    #[error("null-space design needs fewer ERs than antennas (K = {k} >= M = {m})")]
    NullSpaceUnavailable { k: usize, m: usize },
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("no feasible information-beam power exists")]
    EmptyFeasibleSet,
    #[error("information beam needs {needed:.3e} W but the budget is {budget:.3e} W")]
    PowerDeficit { needed: f64, budget: f64 },
    #[error("conic solver reported {0}")]
    Solver(String),
    #[error("structural invariant failed: {0}")]
    Structure(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Power-split search configuration for the design-II solvers.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PowerSearchConfig {
    #[serde(default = "default_power_grid")]
    pub grid_points: usize,
    /// Bisection stops at this fraction of the power budget.
    #[serde(default = "default_bisection_tol")]
    pub bisection_tol_rel: f64,
}

fn default_power_grid() -> usize {
    2000
}
fn default_bisection_tol() -> f64 {
    1e-9
}

impl Default for PowerSearchConfig {
    fn default() -> Self {
        Self { grid_points: default_power_grid(), bisection_tol_rel: default_bisection_tol() }
    }
}

/// Orthonormal complement of the IR channel and the ER channel outer
/// products projected into it.
fn ir_complement(model: &SystemModel) -> Result<(CMatrix, Vec<HermitianMatrix>), SubError> {
    let x_tilde = linalg::orth_complement_of_vector(&model.h)?.columns;
    let g_tilde = (0..model.k)
        .map(|k| {
            HermitianMatrix::from_matrix(
                x_tilde.adjoint() * model.g_outer(k).entries() * &x_tilde,
            )
            .map_err(SubError::from)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((x_tilde, g_tilde))
}

/// Null space of the stacked ER channels plus the IR channel's footprint
/// in it: the zero-forcing information direction and its gain.
fn er_null_space(model: &SystemModel) -> Result<(f64, CVector), SubError> {
    if model.k >= model.m {
        return Err(SubError::NullSpaceUnavailable { k: model.k, m: model.m });
    }
    let g_stack = CMatrix::from_fn(model.k, model.m, |r, c| model.g[r][c].conj());
    let v_tilde = linalg::null_space(&g_stack, None)
        .map_err(|_| SubError::NullSpaceUnavailable { k: model.k, m: model.m })?
        .columns;
    // Projection of h onto the ER null space.
    let h_proj = &v_tilde * (v_tilde.adjoint() * &model.h);
    let gain = h_proj.norm_squared();
    let dir = if gain > 0.0 {
        h_proj.map(|x| x / C64::new(gain.sqrt(), 0.0))
    } else {
        CVector::zeros(model.m)
    };
    Ok((gain, dir))
}

fn structural_check(model: &SystemModel, sol: &BeamformingSolution, zf_info: bool) -> Result<(), SubError> {
    let v_norm = sol.v0.norm();
    if zf_info && v_norm > 0.0 {
        for k in 0..model.k {
            let leak = model.g[k].dotc(&sol.v0).norm();
            if leak > 1e-8 * v_norm * model.g[k].norm() {
                return Err(SubError::Structure(format!(
                    "information beam leaks into ER {k}: |v0^H g| = {leak:.3e}"
                )));
            }
        }
    }
    for (i, w) in sol.w.iter().enumerate() {
        let spill = model.h.dotc(w).norm();
        if spill > 1e-8 * w.norm() * model.h.norm() {
            return Err(SubError::Structure(format!(
                "energy beam {i} disturbs the IR: |w^H h| = {spill:.3e}"
            )));
        }
    }
    Ok(())
}

struct Sub1Parts {
    solution: BeamformingSolution,
    rate: f64,
}

fn p1_sub1_parts(model: &SystemModel) -> Result<Sub1Parts, SubError> {
    let (zf_gain, zf_dir) = er_null_space(model)?;
    let (x_tilde, g_tilde) = ir_complement(model)?;

    // Minimum-power energy beams in the IR complement.
    let sub = sdr::solve_p1_sub1_sdp(model, &g_tilde);
    match sub.status {
        SolveStatus::Optimal => {}
        SolveStatus::Infeasible => {
            return Err(SubError::Infeasible(
                "energy targets unreachable in the IR channel's complement".into(),
            ))
        }
        s => return Err(SubError::Solver(format!("{s:?} on the energy sub-problem"))),
    }
    let q_tilde = CovariancePair {
        s: HermitianMatrix::zeros(g_tilde[0].dim()),
        q: sub.primal.q.clone(),
        t: None,
    };
    let reduced = covariances_to_beams(&q_tilde, tol::RANK_TOL, Method::Sub1)?;
    let w: Vec<CVector> = reduced.w.iter().map(|wt| &x_tilde * wt).collect();
    let used: f64 = w.iter().map(|wi| wi.norm_squared()).sum();
    let p0 = model.p_bar - used;
    if p0 <= 0.0 {
        return Err(SubError::Infeasible(format!(
            "energy beams need {used:.3e} W of the {:.3e} W budget",
            model.p_bar
        )));
    }
    let v0 = zf_dir.map(|x| x * C64::new(p0.sqrt(), 0.0));
    let solution = BeamformingSolution { v0, w, method: Method::Sub1 };
    structural_check(model, &solution, true)?;
    let report = metrics::evaluate(model, &solution);
    let violations = metrics::check_constraints(model, &solution, metrics::ProblemKind::P1);
    if !violations.is_empty() {
        return Err(SubError::Structure(format!("{violations:?}")));
    }
    // Zero leakage and interference-free IR: the rate reduces to the
    // zero-forcing channel capacity.
    debug_assert!(
        (report.secrecy_rate - (1.0 + p0 * zf_gain / model.sigma0_sq).log2()).abs() <= 1e-6,
        "zero-forcing rate identity broke"
    );
    Ok(Sub1Parts { solution, rate: report.secrecy_rate })
}

/// Design I for the secrecy-rate problem: zero-forced information beam,
/// minimum-power energy beams in the IR complement, all residual power on
/// information.
pub fn p1_sub1(model: &SystemModel) -> Result<(f64, BeamformingSolution), SubError> {
    let parts = p1_sub1_parts(model)?;
    Ok((parts.rate, parts.solution))
}

/// Design II for the secrecy-rate problem: information beam along the IR
/// channel, energy beams reusing design I's shape rescaled to the residual
/// power, and a dense grid over the information power.
pub fn p1_sub2(
    model: &SystemModel,
    cfg: &PowerSearchConfig,
) -> Result<(f64, BeamformingSolution), SubError> {
    let parts = p1_sub1_parts(model)?;
    let w_star = &parts.solution.w;
    let used: f64 = w_star.iter().map(|w| w.norm_squared()).sum();

    let h_norm_sq = model.h.norm_squared();
    let a: Vec<f64> =
        (0..model.k).map(|k| model.g[k].dotc(&model.h).norm_sqr() / h_norm_sq).collect();
    let b: Vec<f64> = (0..model.k)
        .map(|k| {
            if used > 0.0 {
                w_star.iter().map(|w| model.g[k].dotc(w).norm_sqr()).sum::<f64>() / used
            } else {
                0.0
            }
        })
        .collect();

    let n = cfg.grid_points.max(2);
    let mut best: Option<(f64, f64)> = None; // (raw rate, p_hat)
    for j in 1..=n {
        let p_hat = j as f64 / n as f64 * model.p_bar;
        let residual = model.p_bar - p_hat;
        let feasible = (0..model.k)
            .all(|k| model.zeta * (p_hat * a[k] + residual * b[k]) >= model.e_bar[k] * (1.0 - 1e-12));
        if !feasible {
            continue;
        }
        let rate = (0..model.k)
            .map(|k| {
                (1.0 + p_hat * h_norm_sq / model.sigma0_sq).log2()
                    - (1.0 + p_hat * a[k] / (residual * b[k] + model.sigma_sq[k])).log2()
            })
            .fold(f64::INFINITY, f64::min);
        if best.map_or(true, |(r, _)| rate > r) {
            best = Some((rate, p_hat));
        }
    }
    let (_, p_hat) = best.ok_or(SubError::EmptyFeasibleSet)?;

    let solution = sub2_beams(model, w_star, used, p_hat, Method::Sub2);
    structural_check(model, &solution, false)?;
    let report = metrics::evaluate(model, &solution);
    let violations = metrics::check_constraints(model, &solution, metrics::ProblemKind::P1);
    if !violations.is_empty() {
        return Err(SubError::Structure(format!("{violations:?}")));
    }
    Ok((report.secrecy_rate, solution))
}

fn sub2_beams(
    model: &SystemModel,
    w_star: &[CVector],
    used: f64,
    p_hat: f64,
    method: Method,
) -> BeamformingSolution {
    let v0 = model.h.map(|x| x * C64::new((p_hat / model.h.norm_squared()).sqrt(), 0.0));
    let w = if used > 0.0 && model.p_bar - p_hat > 0.0 {
        let scale = ((model.p_bar - p_hat) / used).sqrt();
        w_star.iter().map(|wi| wi.map(|x| x * C64::new(scale, 0.0))).collect()
    } else {
        Vec::new()
    };
    BeamformingSolution { v0, w, method }
}

/// Design I for the energy problem: zero-forced information beam at the
/// minimum power that meets the rate floor, one energy beam along the top
/// eigenvector of the weighted projected ER covariance.
pub fn p2_sub1(model: &SystemModel) -> Result<(f64, BeamformingSolution), SubError> {
    let (zf_gain, zf_dir) = er_null_space(model)?;
    let (x_tilde, g_tilde) = ir_complement(model)?;

    let needed = if model.r_bar0 > 0.0 {
        if zf_gain <= 0.0 {
            return Err(SubError::PowerDeficit { needed: f64::INFINITY, budget: model.p_bar });
        }
        (2f64.powf(model.r_bar0) - 1.0) * model.sigma0_sq / zf_gain
    } else {
        0.0
    };
    if needed > model.p_bar {
        return Err(SubError::PowerDeficit { needed, budget: model.p_bar });
    }

    let mut acc = HermitianMatrix::zeros(g_tilde[0].dim());
    for k in 0..model.k {
        acc = acc.add(&g_tilde[k].scale(model.mu[k] * model.zeta));
    }
    let (_psi, eta) = linalg::max_eigpair(&acc);
    let residual = model.p_bar - needed;
    let v0 = zf_dir.map(|x| x * C64::new(needed.sqrt(), 0.0));
    let w = if residual > 0.0 {
        vec![(&x_tilde * eta).map(|x| x * C64::new(residual.sqrt(), 0.0))]
    } else {
        Vec::new()
    };
    let solution = BeamformingSolution { v0, w, method: Method::Sub1 };
    structural_check(model, &solution, true)?;
    let report = metrics::evaluate(model, &solution);
    if report.secrecy_rate < model.r_bar0 - 1e-5 {
        return Err(SubError::Structure(format!(
            "rate floor missed: {} < {}",
            report.secrecy_rate, model.r_bar0
        )));
    }
    Ok((report.weighted_energy, solution))
}

/// Design II for the energy problem: information beam along the IR
/// channel, one energy beam along the projected top eigenvector, and the
/// information power at whichever end of the feasible set the energy
/// slope prefers (grid bracketing plus bisection at the boundaries).
pub fn p2_sub2(
    model: &SystemModel,
    cfg: &PowerSearchConfig,
) -> Result<(f64, BeamformingSolution), SubError> {
    let (x_tilde, g_tilde) = ir_complement(model)?;
    let mut acc = HermitianMatrix::zeros(g_tilde[0].dim());
    for k in 0..model.k {
        acc = acc.add(&g_tilde[k].scale(model.mu[k] * model.zeta));
    }
    let (_psi, eta) = linalg::max_eigpair(&acc);
    let w_dir = &x_tilde * eta;

    let h_norm_sq = model.h.norm_squared();
    let a: Vec<f64> =
        (0..model.k).map(|k| model.g[k].dotc(&model.h).norm_sqr() / h_norm_sq).collect();
    let b: Vec<f64> = (0..model.k).map(|k| model.g[k].dotc(&w_dir).norm_sqr()).collect();

    let rate = |p_hat: f64| -> f64 {
        (0..model.k)
            .map(|k| {
                (1.0 + p_hat * h_norm_sq / model.sigma0_sq).log2()
                    - (1.0
                        + p_hat * a[k] / ((model.p_bar - p_hat) * b[k] + model.sigma_sq[k]))
                        .log2()
            })
            .fold(f64::INFINITY, f64::min)
    };
    let feasible = |p_hat: f64| -> bool { p_hat > 0.0 && rate(p_hat) >= model.r_bar0 };

    let n = cfg.grid_points.max(2);
    let grid: Vec<f64> = (1..=n).map(|j| j as f64 / n as f64 * model.p_bar).collect();
    let flags: Vec<bool> = grid.iter().map(|&p| feasible(p)).collect();
    let first = flags.iter().position(|&f| f).ok_or(SubError::EmptyFeasibleSet)?;
    let last = flags.iter().rposition(|&f| f).unwrap();

    let btol = cfg.bisection_tol_rel * model.p_bar;
    let bisect = |mut bad: f64, mut good: f64| -> f64 {
        while (good - bad).abs() > btol {
            let mid = 0.5 * (good + bad);
            if feasible(mid) {
                good = mid;
            } else {
                bad = mid;
            }
        }
        good
    };
    let p_min = {
        let below = if first == 0 { 0.0 } else { grid[first - 1] };
        bisect(below, grid[first])
    };
    let p_max = if last == n - 1 { model.p_bar } else { bisect(grid[last + 1], grid[last]) };

    // The objective is affine in the information power; pick the end the
    // slope favors (ties go to the upper end).
    let info_coupling: f64 = (0..model.k).map(|k| model.mu[k] * a[k]).sum();
    let an_coupling: f64 = (0..model.k).map(|k| model.mu[k] * b[k]).sum();
    let p_hat = if info_coupling >= an_coupling { p_max } else { p_min };

    let v0 = model.h.map(|x| x * C64::new((p_hat / h_norm_sq).sqrt(), 0.0));
    let residual = model.p_bar - p_hat;
    let w = if residual > 0.0 {
        vec![w_dir.map(|x| x * C64::new(residual.sqrt(), 0.0))]
    } else {
        Vec::new()
    };
    let solution = BeamformingSolution { v0, w, method: Method::Sub2 };
    structural_check(model, &solution, false)?;
    let report = metrics::evaluate(model, &solution);
    if report.secrecy_rate < model.r_bar0 - 1e-5 {
        return Err(SubError::Structure(format!(
            "rate floor missed: {} < {}",
            report.secrecy_rate, model.r_bar0
        )));
    }
    Ok((report.weighted_energy, solution))
}
