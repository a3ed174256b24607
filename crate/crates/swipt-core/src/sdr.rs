//! The semidefinite programs behind the optimal designs: feasibility and
//! inner problems for both design objectives, dual extraction, and the
//! closed-form rank-one reconstruction of the information covariance.
//!
//! # Internal scaling
//!
//! Channel gains in physical units span many orders of magnitude (the IR
//! sits far from the transmitter), which is hostile to interior-point
//! conditioning. Every builder therefore rescales to per-receiver units
//! first: each channel is normalized to unit norm while its noise power,
//! energy target and weight absorb the gain (`σ² → σ²/‖g‖²`,
//! `Ē → Ē/‖g‖²`, `μ → μ·‖g‖²`). SINRs, harvested energies and transmit
//! covariances are invariant under this change, so primal results come
//! back in physical units untouched. Dual multipliers refer to the scaled
//! problem; their signs, activity patterns, and the identity between the
//! normalization multiplier and the optimal objective are scale-invariant.

use std::sync::atomic::{AtomicU64, Ordering};

use thiserror::Error;

use crate::model::{tol, CovariancePair, CVector, DualCertificate, HermitianMatrix, SystemModel};
use crate::sdp::{Cmp, ConicSdp, LinExpr, SdpOutcome, SdpSettings, Sense};

pub use crate::sdp::SolveStatus;

/// Residual ceiling accepted from the conic backend on an `Optimal` status.
pub const SOLVER_TOL: f64 = 1e-8;

/// Scale-aware activity threshold for dual multipliers.
pub fn dual_activity_tol(lambda: f64) -> f64 {
    1e-6 * lambda.abs().max(1.0)
}

#[derive(Debug, Error)]
pub enum SdrError {
    #[error("no information component along the IR channel (h^H S h = {value:.3e})")]
    DegenerateInput { value: f64 },
}

/// Result of one conic solve: primal covariances, multipliers when the
/// problem carries them, the objective, and the backend residual.
#[derive(Debug, Clone)]
pub struct SdrSolveResult {
    pub status: SolveStatus,
    pub primal: CovariancePair,
    pub duals: Option<DualCertificate>,
    pub objective: f64,
    pub residuals: f64,
}

impl SdrSolveResult {
    pub fn is_optimal(&self) -> bool {
        self.status == SolveStatus::Optimal
    }
}

/// Per-receiver scaled copy of the model (see module doc).
struct Scaled {
    m: usize,
    k: usize,
    h_mat: HermitianMatrix,
    g_mat: Vec<HermitianMatrix>,
    sigma0_sq: f64,
    sigma_sq: Vec<f64>,
    e_bar: Vec<f64>,
    mu: Vec<f64>,
    zeta: f64,
    p_bar: f64,
}

fn scaled(model: &SystemModel) -> Scaled {
    let ch = model.h.norm_squared();
    let h_unit = model.h.map(|x| x / ch.sqrt());
    let mut g_mat = Vec::with_capacity(model.k);
    let mut sigma_sq = Vec::with_capacity(model.k);
    let mut e_bar = Vec::with_capacity(model.k);
    let mut mu = Vec::with_capacity(model.k);
    for k in 0..model.k {
        let cg = model.g[k].norm_squared();
        let g_unit = model.g[k].map(|x| x / cg.sqrt());
        g_mat.push(HermitianMatrix::from_outer(&g_unit));
        sigma_sq.push(model.sigma_sq[k] / cg);
        e_bar.push(model.e_bar[k] / cg);
        mu.push(model.mu[k] * cg);
    }
    Scaled {
        m: model.m,
        k: model.k,
        h_mat: HermitianMatrix::from_outer(&h_unit),
        g_mat,
        sigma0_sq: model.sigma0_sq / ch,
        sigma_sq,
        e_bar,
        mu,
        zeta: model.zeta,
        p_bar: model.p_bar,
    }
}

static DUMP_COUNTER: AtomicU64 = AtomicU64::new(0);

/// Writes the problem to `$SWIPT_SDP_DUMP/<seq>-<name>.txt` when the
/// environment variable is set (best effort; failures are ignored).
fn maybe_dump(name: &str, sdp: &ConicSdp) {
    if let Ok(dir) = std::env::var("SWIPT_SDP_DUMP") {
        let seq = DUMP_COUNTER.fetch_add(1, Ordering::Relaxed);
        let path = std::path::Path::new(&dir).join(format!("{seq:06}-{name}.txt"));
        let _ = std::fs::write(path, sdp.dump_text());
    }
}

fn run(name: &str, sdp: &ConicSdp) -> SdpOutcome {
    maybe_dump(name, sdp);
    sdp.solve(&SdpSettings::default())
}

/// Feasibility of the energy targets alone: is there `Q ⪰ 0` with
/// `ζ·Tr(G_k Q) ≥ Ē_k` for all ERs and `Tr(Q) ≤ P̄`? On success the primal
/// holds a feasible energy covariance (`S = 0`).
pub fn solve_p1_noit(model: &SystemModel) -> SdrSolveResult {
    let sc = scaled(model);
    let mut sdp = ConicSdp::new(Sense::Maximize);
    let q = sdp.hermitian_var(sc.m);
    for k in 0..sc.k {
        sdp.add_constraint(
            LinExpr::new().trace(q, &sc.g_mat[k].scale(sc.zeta)),
            Cmp::Ge,
            sc.e_bar[k],
        );
    }
    sdp.add_constraint(
        LinExpr::new().trace(q, &HermitianMatrix::identity(sc.m)),
        Cmp::Le,
        sc.p_bar,
    );
    let out = run("p1-noit", &sdp);
    SdrSolveResult {
        status: out.status,
        primal: CovariancePair {
            s: HermitianMatrix::zeros(sc.m),
            q: out.mat_values.first().cloned().unwrap_or_else(|| HermitianMatrix::zeros(sc.m)),
            t: None,
        },
        duals: None,
        objective: 0.0,
        residuals: out.max_residual,
    }
}

/// Charnes-Cooper form of the inner secrecy-SINR problem: maximize
/// `Tr(H S)` over `(S, Q, t)` subject to the normalized-denominator
/// equality, per-ER SINR caps at `gamma_e`, per-ER energy floors, and the
/// power budget. With `nosc = true` the SINR caps are dropped (the
/// no-secrecy baseline; `gamma_e` is then ignored).
///
/// Multipliers: `lambda` for the equality (equal to the optimal objective
/// by strong duality), `beta[k]` for the caps, `alpha[k]` for the energy
/// floors, `theta` for the power budget.
fn solve_cc_inner(model: &SystemModel, gamma_e: f64, nosc: bool) -> SdrSolveResult {
    if !nosc {
        assert!(gamma_e > 0.0, "eavesdropper SINR cap must be positive");
    }
    let sc = scaled(model);
    let mut sdp = ConicSdp::new(Sense::Maximize);
    let s = sdp.hermitian_var(sc.m);
    let q = sdp.hermitian_var(sc.m);
    let t = sdp.scalar_var();
    sdp.set_objective(LinExpr::new().trace(s, &sc.h_mat));

    let norm_row = sdp.add_constraint(
        LinExpr::new().trace(q, &sc.h_mat).scalar(t, sc.sigma0_sq),
        Cmp::Eq,
        1.0,
    );
    let mut cap_rows: Vec<Option<usize>> = Vec::new();
    if !nosc {
        for k in 0..sc.k {
            // An ER's SINR can never exceed P * |g|^2 / sigma^2; caps at or
            // beyond that envelope are redundant and would only poison the
            // conditioning, so they are dropped exactly.
            let envelope = sc.p_bar / sc.sigma_sq[k];
            if gamma_e >= envelope {
                cap_rows.push(None);
                continue;
            }
            cap_rows.push(Some(sdp.add_constraint(
                LinExpr::new()
                    .trace(s, &sc.g_mat[k])
                    .trace(q, &sc.g_mat[k].scale(-gamma_e))
                    .scalar(t, -gamma_e * sc.sigma_sq[k]),
                Cmp::Le,
                0.0,
            )));
        }
    }
    let mut energy_rows = Vec::new();
    for k in 0..sc.k {
        energy_rows.push(sdp.add_constraint(
            LinExpr::new()
                .trace(s, &sc.g_mat[k].scale(sc.zeta))
                .trace(q, &sc.g_mat[k].scale(sc.zeta))
                .scalar(t, -sc.e_bar[k]),
            Cmp::Ge,
            0.0,
        ));
    }
    let power_row = sdp.add_constraint(
        LinExpr::new()
            .trace(s, &HermitianMatrix::identity(sc.m))
            .trace(q, &HermitianMatrix::identity(sc.m))
            .scalar(t, -sc.p_bar),
        Cmp::Le,
        0.0,
    );

    let out = run(if nosc { "p1-nosc-inner" } else { "p11-sdr-eqv" }, &sdp);
    let duals = if out.status == SolveStatus::Optimal {
        Some(DualCertificate {
            lambda: out.duals[norm_row],
            beta: cap_rows.iter().map(|r| r.map_or(0.0, |r| out.duals[r])).collect(),
            alpha: energy_rows.iter().map(|&r| out.duals[r]).collect(),
            theta: out.duals[power_row],
        })
    } else {
        None
    };
    SdrSolveResult {
        status: out.status,
        primal: CovariancePair {
            s: out.mat_values.first().cloned().unwrap_or_else(|| HermitianMatrix::zeros(sc.m)),
            q: out.mat_values.get(1).cloned().unwrap_or_else(|| HermitianMatrix::zeros(sc.m)),
            t: out.scalar_values.first().copied(),
        },
        duals,
        objective: out.objective,
        residuals: out.max_residual,
    }
}

/// Inner secrecy-SINR problem with ER caps at `gamma_e` (see
/// [`solve_cc_inner`]); the returned objective is the optimal IR SINR under
/// those caps.
pub fn solve_p11_sdr_eqv(model: &SystemModel, gamma_e: f64) -> SdrSolveResult {
    solve_cc_inner(model, gamma_e, false)
}

/// No-secrecy inner problem: the ER SINR caps removed, energy floors and
/// power budget kept.
pub fn solve_p11_sdr_eqv_nosc(model: &SystemModel) -> SdrSolveResult {
    solve_cc_inner(model, 0.0, true)
}

/// Weighted sum-energy maximization at a fixed IR SINR floor `gamma_0`:
/// maximize `Σ_k μ_k ζ (Tr(G_k S) + Tr(G_k Q))` subject to the IR SINR
/// floor, per-ER SINR caps at `γ_e = (1+γ_0)/2^{r̄_0} − 1` (dropped when
/// `nosc`), and the power budget. A zero cap is encoded as the equality
/// `Tr(G_k S) = 0`.
///
/// Multipliers: `lambda` for the SINR floor, `beta[k]` for the caps,
/// `theta` for the power budget; `alpha` is unused (empty).
fn solve_p21(model: &SystemModel, gamma_0: f64, nosc: bool) -> SdrSolveResult {
    let sc = scaled(model);
    let gamma_e = (1.0 + gamma_0) / 2f64.powf(model.r_bar0) - 1.0;
    if !nosc && gamma_e < -1e-12 * (1.0 + gamma_0) {
        // The rate floor is unreachable even with zero leakage.
        return SdrSolveResult {
            status: SolveStatus::Infeasible,
            primal: CovariancePair {
                s: HermitianMatrix::zeros(sc.m),
                q: HermitianMatrix::zeros(sc.m),
                t: None,
            },
            duals: None,
            objective: f64::NAN,
            residuals: 0.0,
        };
    }
    let gamma_e = gamma_e.max(0.0);

    let mut sdp = ConicSdp::new(Sense::Maximize);
    let s = sdp.hermitian_var(sc.m);
    let q = sdp.hermitian_var(sc.m);
    let mut objective = LinExpr::new();
    for k in 0..sc.k {
        let coeff = sc.g_mat[k].scale(sc.mu[k] * sc.zeta);
        objective = objective.trace(s, &coeff).trace(q, &coeff);
    }
    sdp.set_objective(objective);

    let sinr_row = sdp.add_constraint(
        LinExpr::new().trace(s, &sc.h_mat).trace(q, &sc.h_mat.scale(-gamma_0)),
        Cmp::Ge,
        gamma_0 * sc.sigma0_sq,
    );
    let mut cap_rows: Vec<Option<usize>> = Vec::new();
    if !nosc {
        for k in 0..sc.k {
            if gamma_e >= sc.p_bar / sc.sigma_sq[k] {
                // Redundant cap (above the ER's SINR envelope).
                cap_rows.push(None);
            } else if gamma_e > 0.0 {
                cap_rows.push(Some(sdp.add_constraint(
                    LinExpr::new()
                        .trace(s, &sc.g_mat[k])
                        .trace(q, &sc.g_mat[k].scale(-gamma_e)),
                    Cmp::Le,
                    gamma_e * sc.sigma_sq[k],
                )));
            } else {
                cap_rows.push(Some(sdp.add_constraint(
                    LinExpr::new().trace(s, &sc.g_mat[k]),
                    Cmp::Eq,
                    0.0,
                )));
            }
        }
    }
    let power_row = sdp.add_constraint(
        LinExpr::new()
            .trace(s, &HermitianMatrix::identity(sc.m))
            .trace(q, &HermitianMatrix::identity(sc.m)),
        Cmp::Le,
        sc.p_bar,
    );

    let out = run(if nosc { "p2-nosc" } else { "p21-sdr" }, &sdp);
    let duals = if out.status == SolveStatus::Optimal {
        Some(DualCertificate {
            lambda: out.duals[sinr_row],
            beta: cap_rows.iter().map(|r| r.map_or(0.0, |r| out.duals[r])).collect(),
            alpha: Vec::new(),
            theta: out.duals[power_row],
        })
    } else {
        None
    };
    SdrSolveResult {
        status: out.status,
        primal: CovariancePair {
            s: out.mat_values.first().cloned().unwrap_or_else(|| HermitianMatrix::zeros(sc.m)),
            q: out.mat_values.get(1).cloned().unwrap_or_else(|| HermitianMatrix::zeros(sc.m)),
            t: None,
        },
        duals,
        objective: out.objective,
        residuals: out.max_residual,
    }
}

/// Weighted sum-energy maximization at IR SINR floor `gamma_0`, with
/// secrecy caps derived from the model's rate target (see [`solve_p21`]).
pub fn solve_p21_sdr(model: &SystemModel, gamma_0: f64) -> SdrSolveResult {
    solve_p21(model, gamma_0, false)
}

/// No-secrecy variant: plain rate floor without eavesdropper caps.
pub fn solve_p21_sdr_nosc(model: &SystemModel, gamma_0: f64) -> SdrSolveResult {
    solve_p21(model, gamma_0, true)
}

/// Secondary problem used to recover a rank-one information covariance for
/// the energy-maximization design: maximize the IR SINR (Charnes-Cooper
/// form) subject to the same caps and budget plus a floor `e_star` on the
/// weighted sum-energy. Its optimum is at least the SINR floor that
/// produced `e_star`, and any optimizer attains `e_star`.
///
/// Multipliers: `lambda` for the equality, `beta[k]` for the caps,
/// `alpha[0]` for the energy floor, `theta` for the power budget.
pub fn solve_p21_sdr_new(model: &SystemModel, gamma_e: f64, e_star: f64) -> SdrSolveResult {
    assert!(gamma_e >= 0.0, "eavesdropper SINR cap must be nonnegative");
    let sc = scaled(model);
    let mut sdp = ConicSdp::new(Sense::Maximize);
    let s = sdp.hermitian_var(sc.m);
    let q = sdp.hermitian_var(sc.m);
    let t = sdp.scalar_var();
    sdp.set_objective(LinExpr::new().trace(s, &sc.h_mat));

    let norm_row = sdp.add_constraint(
        LinExpr::new().trace(q, &sc.h_mat).scalar(t, sc.sigma0_sq),
        Cmp::Eq,
        1.0,
    );
    let mut cap_rows: Vec<Option<usize>> = Vec::new();
    for k in 0..sc.k {
        if gamma_e >= sc.p_bar / sc.sigma_sq[k] {
            // Redundant cap (above the ER's SINR envelope); see solve_cc_inner.
            cap_rows.push(None);
        } else if gamma_e > 0.0 {
            cap_rows.push(Some(sdp.add_constraint(
                LinExpr::new()
                    .trace(s, &sc.g_mat[k])
                    .trace(q, &sc.g_mat[k].scale(-gamma_e))
                    .scalar(t, -gamma_e * sc.sigma_sq[k]),
                Cmp::Le,
                0.0,
            )));
        } else {
            cap_rows.push(Some(sdp.add_constraint(
                LinExpr::new().trace(s, &sc.g_mat[k]),
                Cmp::Eq,
                0.0,
            )));
        }
    }
    let mut energy = LinExpr::new().scalar(t, -e_star);
    for k in 0..sc.k {
        let coeff = sc.g_mat[k].scale(sc.mu[k] * sc.zeta);
        energy = energy.trace(s, &coeff).trace(q, &coeff);
    }
    let energy_row = sdp.add_constraint(energy, Cmp::Ge, 0.0);
    let power_row = sdp.add_constraint(
        LinExpr::new()
            .trace(s, &HermitianMatrix::identity(sc.m))
            .trace(q, &HermitianMatrix::identity(sc.m))
            .scalar(t, -sc.p_bar),
        Cmp::Le,
        0.0,
    );

    let out = run("p21-sdr-new", &sdp);
    let duals = if out.status == SolveStatus::Optimal {
        Some(DualCertificate {
            lambda: out.duals[norm_row],
            beta: cap_rows.iter().map(|r| r.map_or(0.0, |r| out.duals[r])).collect(),
            alpha: vec![out.duals[energy_row]],
            theta: out.duals[power_row],
        })
    } else {
        None
    };
    SdrSolveResult {
        status: out.status,
        primal: CovariancePair {
            s: out.mat_values.first().cloned().unwrap_or_else(|| HermitianMatrix::zeros(sc.m)),
            q: out.mat_values.get(1).cloned().unwrap_or_else(|| HermitianMatrix::zeros(sc.m)),
            t: out.scalar_values.first().copied(),
        },
        duals,
        objective: out.objective,
        residuals: out.max_residual,
    }
}

/// Minimum-power energy beamforming in the IR channel's orthogonal
/// complement: minimize `Tr(Q̃)` subject to `ζ·Tr(G̃_k Q̃) ≥ Ē_k` with
/// `G̃_k = X̃^H G_k X̃` precomputed by the caller.
pub fn solve_p1_sub1_sdp(model: &SystemModel, g_tilde: &[HermitianMatrix]) -> SdrSolveResult {
    assert_eq!(g_tilde.len(), model.k);
    let dim = g_tilde[0].dim();
    let mut sdp = ConicSdp::new(Sense::Minimize);
    let q = sdp.hermitian_var(dim);
    sdp.set_objective(LinExpr::new().trace(q, &HermitianMatrix::identity(dim)));
    for k in 0..model.k {
        // Same per-receiver scaling as everywhere else.
        let cg = model.g[k].norm_squared();
        sdp.add_constraint(
            LinExpr::new().trace(q, &g_tilde[k].scale(model.zeta / cg)),
            Cmp::Ge,
            model.e_bar[k] / cg,
        );
    }
    let out = run("p1-sub1-sdp", &sdp);
    SdrSolveResult {
        status: out.status,
        primal: CovariancePair {
            s: HermitianMatrix::zeros(dim),
            q: out.mat_values.first().cloned().unwrap_or_else(|| HermitianMatrix::zeros(dim)),
            t: None,
        },
        duals: None,
        objective: out.objective,
        residuals: out.max_residual,
    }
}

/// Largest common per-ER energy target that stays feasible under the power
/// budget: maximize `e` over `Q ⪰ 0`, `Tr(Q) ≤ P̄`, `ζ·Tr(G_k Q) ≥ e`.
/// Used to size energy sweeps for region experiments.
pub fn solve_max_common_energy(model: &SystemModel) -> SdrSolveResult {
    let sc = scaled(model);
    let cg: Vec<f64> = model.g.iter().map(|g| g.norm_squared()).collect();
    let unit = sc.zeta * cg.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut sdp = ConicSdp::new(Sense::Maximize);
    let q = sdp.hermitian_var(sc.m);
    let e = sdp.scalar_var();
    sdp.set_objective(LinExpr::new().scalar(e, 1.0));
    for k in 0..sc.k {
        sdp.add_constraint(
            LinExpr::new()
                .trace(q, &sc.g_mat[k].scale(sc.zeta * cg[k] / unit))
                .scalar(e, -1.0),
            Cmp::Ge,
            0.0,
        );
    }
    sdp.add_constraint(
        LinExpr::new().trace(q, &HermitianMatrix::identity(sc.m)),
        Cmp::Le,
        sc.p_bar,
    );
    let out = run("max-common-energy", &sdp);
    SdrSolveResult {
        status: out.status,
        primal: CovariancePair {
            s: HermitianMatrix::zeros(sc.m),
            q: out.mat_values.first().cloned().unwrap_or_else(|| HermitianMatrix::zeros(sc.m)),
            t: None,
        },
        duals: None,
        objective: out.objective * unit,
        residuals: out.max_residual,
    }
}

/// Closed-form rank-one reconstruction of the information covariance:
/// `S̄ = S h h^H S / (h^H S h)`, `Q̄ = Q + (S − S̄)`.
///
/// Writing `S̄ = S^{1/2} P S^{1/2}` with `P` the orthogonal projector onto
/// `S^{1/2} h` shows `0 ⪯ S̄ ⪯ S`, so the construction preserves the
/// received information power `Tr(H S̄) = Tr(H S)` exactly, never increases
/// any `Tr(G_k S̄)`, keeps every `Tr(G_k (S̄+Q̄))` and the total trace
/// unchanged, and yields `rank(S̄) = 1`.
///
/// Fails with [`SdrError::DegenerateInput`] when `h^H S h` vanishes
/// relative to `Tr(S)` (no information component to keep).
pub fn reconstruct_rank_one(
    s: &HermitianMatrix,
    q: &HermitianMatrix,
    h: &CVector,
) -> Result<(HermitianMatrix, HermitianMatrix), SdrError> {
    let sh = s.entries() * h;
    let denom = s.quad_form(h);
    if denom <= tol::PSD_TOL * s.trace().max(f64::MIN_POSITIVE) {
        return Err(SdrError::DegenerateInput { value: denom });
    }
    let s_bar = HermitianMatrix::from_scaled_outer(&sh, 1.0 / denom);
    let q_bar = q.add(&s.sub(&s_bar));
    Ok((s_bar, q_bar))
}

/// Numerical rank: count of eigenvalues above `rank_tol` relative to the
/// largest one (zero for PSD-negligible matrices).
pub fn numerical_rank(a: &HermitianMatrix, rank_tol: f64) -> usize {
    let vals = a.eigenvalues();
    let lead = vals[0];
    if lead <= 0.0 {
        return 0;
    }
    vals.iter().filter(|&&v| v > rank_tol * lead).count()
}

/// Structural diagnostics on an optimal solve with duals: how many ER SINR
/// caps are active, whether that count certifies a unique rank-one optimum,
/// positivity of the normalization and power multipliers, and the rank of
/// the energy covariance against its structural bound `min(K, M)`.
#[derive(Debug, Clone)]
pub struct RankOneReport {
    pub duals_available: bool,
    /// Count of ERs whose SINR-cap multiplier exceeds the activity threshold.
    pub active_sinr_count: usize,
    /// `active_sinr_count ≥ min(M−1, K)`: sufficient for a unique rank-one
    /// information covariance.
    pub unique_rank_one_sufficient: bool,
    pub lambda: f64,
    pub theta: f64,
    pub lambda_positive: bool,
    pub theta_positive: bool,
    pub s_rank: usize,
    pub q_rank: usize,
    pub q_rank_bound: usize,
    pub q_rank_within_bound: bool,
}

pub fn rank_one_diagnostics(
    result: &SdrSolveResult,
    model: &SystemModel,
    _gamma_e: f64,
) -> RankOneReport {
    let (lambda, theta, active) = match &result.duals {
        Some(d) => {
            let act = dual_activity_tol(d.lambda);
            (d.lambda, d.theta, d.beta.iter().filter(|&&b| b > act).count())
        }
        None => (f64::NAN, f64::NAN, 0),
    };
    let s_rank = numerical_rank(&result.primal.s, tol::RANK_TOL);
    let q_rank = numerical_rank(&result.primal.q, tol::RANK_TOL);
    let bound = model.k.min(model.m);
    RankOneReport {
        duals_available: result.duals.is_some(),
        active_sinr_count: active,
        unique_rank_one_sufficient: active >= (model.m - 1).min(model.k),
        lambda,
        theta,
        lambda_positive: lambda > 0.0,
        theta_positive: theta > 0.0,
        s_rank,
        q_rank,
        q_rank_bound: bound,
        q_rank_within_bound: q_rank <= bound,
    }
}
