//! Optimal weighted sum-energy maximization under a secrecy-rate floor
//! (P2): an inner convex SDP maximizes the delivered energy at a fixed IR
//! SINR floor `γ_0` (the rate floor fixes the matching eavesdropper cap
//! `γ_e = (1+γ_0)/2^{r̄_0} − 1`), and the outer search maximizes that
//! energy over `γ_0`.

use crate::linalg;
use crate::metrics;
use crate::model::{
    covariances_to_beams, tol, BeamformingSolution, CVector, CovariancePair, HermitianMatrix,
    Method, SystemModel,
};
use crate::p1::{self, SolverError};
use crate::sdr::{self, SolveStatus};
use crate::search::{self, OuterSearchConfig};

/// Output of the optimal P2 solver.
#[derive(Debug, Clone)]
pub struct P2Solution {
    /// Weighted sum-energy of the returned beams (W).
    pub energy: f64,
    pub solution: BeamformingSolution,
    pub covariances: CovariancePair,
    /// IR SINR floor at which the outer search settled.
    pub gamma_0_star: f64,
    pub at_boundary: bool,
    pub reconstructed: bool,
}

/// P2 is feasible iff the rate floor is attainable with no energy duty,
/// i.e. the unconstrained secrecy-rate optimum reaches `r̄_0`.
pub fn p2_feasible(model: &SystemModel) -> Result<bool, SolverError> {
    if model.r_bar0 <= 0.0 {
        return Ok(true);
    }
    let noet = p1::solve_p1_noet(model, &OuterSearchConfig::default())?;
    Ok(noet.secrecy_rate >= model.r_bar0 - 1e-6)
}

/// Closed-form energy beamforming with no information duty: all power on
/// the top eigenvector of `Σ_k μ_k ζ g_k g_k^H`, delivering `ψ P̄`.
pub fn e_max_noit(model: &SystemModel) -> (f64, BeamformingSolution) {
    let mut acc = HermitianMatrix::zeros(model.m);
    for k in 0..model.k {
        acc = acc.add(&model.g_outer(k).scale(model.mu[k] * model.zeta));
    }
    let (psi, eta) = linalg::max_eigpair(&acc);
    let beam = eta.map(|x| x * crate::model::C64::new(model.p_bar.sqrt(), 0.0));
    (
        psi * model.p_bar,
        BeamformingSolution { v0: CVector::zeros(model.m), w: vec![beam], method: Method::NoIt },
    )
}

struct InnerSolution {
    energy: f64,
    cov: CovariancePair,
    reconstructed: bool,
}

fn weighted_energy(model: &SystemModel, cov: &CovariancePair) -> f64 {
    (0..model.k)
        .map(|k| {
            let gk = model.g_outer(k);
            model.mu[k]
                * model.zeta
                * (gk.trace_product(&cov.s) + gk.trace_product(&cov.q))
        })
        .sum()
}

fn g2_inner(model: &SystemModel, gamma_0: f64, nosc: bool) -> Result<InnerSolution, SolverError> {
    let res = if nosc {
        sdr::solve_p21_sdr_nosc(model, gamma_0)
    } else {
        sdr::solve_p21_sdr(model, gamma_0)
    };
    match res.status {
        SolveStatus::Optimal => {}
        SolveStatus::Infeasible => {
            return Err(SolverError::Infeasible(format!("inner problem at gamma_0 = {gamma_0}")))
        }
        s => return Err(SolverError::NumericalTrouble(format!("{s:?} at gamma_0 = {gamma_0}"))),
    }
    let mut s = res.primal.s.clone();
    let mut q = res.primal.q.clone();
    let mut reconstructed = false;
    if sdr::numerical_rank(&s, tol::RANK_TOL) > 1 {
        match sdr::reconstruct_rank_one(&s, &q, &model.h) {
            Ok((sb, qb)) => {
                s = sb;
                q = qb;
                reconstructed = true;
            }
            Err(sdr::SdrError::DegenerateInput { .. }) => {
                // Only possible at a zero SINR floor: drop the information
                // beam, keep the energy unchanged.
                q = q.add(&s);
                s = HermitianMatrix::zeros(model.m);
                reconstructed = true;
            }
        }
    }
    let cov = CovariancePair { s, q, t: None };
    Ok(InnerSolution { energy: weighted_energy(model, &cov), cov, reconstructed })
}

/// Optimal weighted sum-energy at IR SINR floor `gamma_0`, with the
/// attaining covariance pair (rank-one information covariance).
pub fn g2(model: &SystemModel, gamma_0: f64) -> Result<(f64, CovariancePair), SolverError> {
    let inner = g2_inner(model, gamma_0, false)?;
    Ok((inner.energy, inner.cov))
}

/// Solves P2 by outer search over the IR SINR floor
/// `γ_0 ∈ [2^{r̄_0} − 1, P̄·‖h‖²/σ_0²]` with inner solves of the
/// energy-maximization SDP, then beam extraction and verification.
pub fn solve_p2(model: &SystemModel, cfg: &OuterSearchConfig) -> Result<P2Solution, SolverError> {
    if !p2_feasible(model)? {
        return Err(SolverError::Infeasible(format!(
            "rate floor {} bps/Hz is unattainable",
            model.r_bar0
        )));
    }
    let lo = cfg.gamma_lo.unwrap_or_else(|| (2f64.powf(model.r_bar0) - 1.0).max(0.0));
    let hi = cfg
        .gamma_hi
        .unwrap_or_else(|| model.p_bar * model.h.norm_squared() / model.sigma0_sq);
    if !(hi > lo) {
        return Err(SolverError::Infeasible(format!(
            "SINR floor {lo} is outside the achievable range (max {hi})"
        )));
    }
    let points = search::grid(lo, hi, cfg.grid_points.max(2), cfg.log_spaced);
    let outcome = search::maximize(&points, cfg.log_spaced && lo > 0.0, cfg.refine_iters, |g| {
        g2_inner(model, g, false).ok().map(|inner| (inner.energy, inner))
    })
    .ok_or(SolverError::AllGridInfeasible)?;

    let inner = outcome.payload;
    let mut solution = covariances_to_beams(&inner.cov, tol::RANK_TOL, Method::P2Optimal)?;
    solution.method = Method::P2Optimal;
    let violations = metrics::check_constraints(model, &solution, metrics::ProblemKind::P2);
    if !violations.is_empty() {
        return Err(SolverError::Verification(format!("{violations:?}")));
    }
    let report = metrics::evaluate(model, &solution);
    Ok(P2Solution {
        energy: report.weighted_energy,
        solution,
        covariances: inner.cov,
        gamma_0_star: outcome.gamma,
        at_boundary: outcome.at_boundary,
        reconstructed: inner.reconstructed,
    })
}

/// No-secrecy baseline: maximize the weighted sum-energy under a plain
/// rate floor `r̃_0` (no eavesdropper caps). A single inner solve at
/// `γ_0 = 2^{r̃_0} − 1`; the rate constraint binds directly.
pub fn solve_p2_nosc(
    model: &SystemModel,
    r_tilde0: f64,
) -> Result<(f64, BeamformingSolution), SolverError> {
    let gamma_0 = (2f64.powf(r_tilde0) - 1.0).max(0.0);
    let max_sinr = model.p_bar * model.h.norm_squared() / model.sigma0_sq;
    if gamma_0 > max_sinr {
        return Err(SolverError::Infeasible(format!(
            "rate floor {r_tilde0} bps/Hz needs SINR {gamma_0} > achievable {max_sinr}"
        )));
    }
    let inner = g2_inner(model, gamma_0, true)?;
    let mut solution = covariances_to_beams(&inner.cov, tol::RANK_TOL, Method::NoSc)?;
    solution.method = Method::NoSc;
    let report = metrics::evaluate(model, &solution);
    if (1.0 + report.sinr0).log2() < r_tilde0 - 1e-5 {
        return Err(SolverError::Verification(format!(
            "rate floor missed: {} < {r_tilde0}",
            (1.0 + report.sinr0).log2()
        )));
    }
    Ok((report.weighted_energy, solution))
}
