//! Ground-truth evaluation of beamforming solutions, constraint checking,
//! and a brute-force oracle for desk-scale instances.
//!
//! Everything here works directly on beam vectors: the received SINRs are
//! `SINR_0 = |v_0^H h|² / (Σ_i |w_i^H h|² + σ_0²)` at the IR and the
//! analogous expression with `g_k` at each ER; the secrecy rate is the IR
//! rate minus the best eavesdropper rate; the harvested energy at an ER is
//! `ζ (|v_0^H g_k|² + Σ_i |w_i^H g_k|²)`. Covariance-form counterparts are
//! provided so semidefinite-relaxation results can be bridged exactly.

use thiserror::Error;

use crate::model::{
    tol, BeamformingSolution, C64, CVector, CovariancePair, Method, SystemModel,
};

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("oracle supports M = 2, K <= 2 only (got M = {m}, K = {k})")]
    UnsupportedSize { m: usize, k: usize },
    #[error("no feasible point at this grid resolution")]
    NoFeasiblePoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProblemKind {
    P1,
    P2,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConstraintKind {
    SumPower,
    EnergyTarget(usize),
    RateTarget,
}

/// A violated constraint and by how much (positive = amount of violation).
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub constraint: ConstraintKind,
    pub magnitude: f64,
}

/// Everything measurable about one solution on one model.
#[derive(Debug, Clone)]
pub struct MetricsReport {
    pub sinr0: f64,
    pub sinr: Vec<f64>,
    /// Secrecy rate clamped at zero (a transmitter achieving a negative
    /// secrecy rate transmits nothing).
    pub secrecy_rate: f64,
    /// Unclamped min-difference rate, for diagnostics.
    pub raw_secrecy_rate: f64,
    pub energy: Vec<f64>,
    pub weighted_energy: f64,
    pub sum_power: f64,
    pub violations: Vec<Violation>,
}

/// Evaluates a solution against the model (violations left empty; use
/// [`check_constraints`] or [`evaluate_checked`] to fill them).
pub fn evaluate(model: &SystemModel, sol: &BeamformingSolution) -> MetricsReport {
    assert_eq!(sol.dim(), model.m, "solution dimension does not match model");
    let power = |beam: &CVector, ch: &CVector| -> f64 { ch.dotc(beam).norm_sqr() };

    let info_at_ir = power(&sol.v0, &model.h);
    let noise_at_ir: f64 =
        sol.w.iter().map(|w| power(w, &model.h)).sum::<f64>() + model.sigma0_sq;
    let sinr0 = info_at_ir / noise_at_ir;

    let mut sinr = Vec::with_capacity(model.k);
    let mut energy = Vec::with_capacity(model.k);
    for k in 0..model.k {
        let info = power(&sol.v0, &model.g[k]);
        let an: f64 = sol.w.iter().map(|w| power(w, &model.g[k])).sum();
        sinr.push(info / (an + model.sigma_sq[k]));
        energy.push(model.zeta * (info + an));
    }
    let raw = sinr
        .iter()
        .map(|&sk| (1.0 + sinr0).log2() - (1.0 + sk).log2())
        .fold(f64::INFINITY, f64::min);
    let weighted_energy = energy.iter().zip(&model.mu).map(|(e, mu)| e * mu).sum();

    MetricsReport {
        sinr0,
        sinr,
        secrecy_rate: raw.max(0.0),
        raw_secrecy_rate: raw,
        energy,
        weighted_energy,
        sum_power: sol.sum_power(),
        violations: Vec::new(),
    }
}

/// Covariance-form metrics: the same quantities computed from `(S, Q)`
/// traces instead of beams. For rank-consistent pairs these agree with
/// [`evaluate`] to high accuracy; the bridge is how every relaxation
/// result gets verified.
pub fn evaluate_covariances(model: &SystemModel, cov: &CovariancePair) -> MetricsReport {
    assert_eq!(cov.dim(), model.m);
    let h = model.h_outer();
    let sinr0 =
        h.trace_product(&cov.s) / (h.trace_product(&cov.q) + model.sigma0_sq);
    let mut sinr = Vec::with_capacity(model.k);
    let mut energy = Vec::with_capacity(model.k);
    for k in 0..model.k {
        let gk = model.g_outer(k);
        let info = gk.trace_product(&cov.s);
        let an = gk.trace_product(&cov.q);
        sinr.push(info / (an + model.sigma_sq[k]));
        energy.push(model.zeta * (info + an));
    }
    let raw = sinr
        .iter()
        .map(|&sk| (1.0 + sinr0).log2() - (1.0 + sk).log2())
        .fold(f64::INFINITY, f64::min);
    let weighted_energy = energy.iter().zip(&model.mu).map(|(e, mu)| e * mu).sum();
    MetricsReport {
        sinr0,
        sinr,
        secrecy_rate: raw.max(0.0),
        raw_secrecy_rate: raw,
        energy,
        weighted_energy,
        sum_power: cov.sum_trace(),
        violations: Vec::new(),
    }
}

/// Lists each violated constraint of the given problem with its magnitude:
/// the power budget always, the per-ER energy floors for `P1`, the rate
/// floor for `P2`.
pub fn check_constraints(
    model: &SystemModel,
    sol: &BeamformingSolution,
    problem: ProblemKind,
) -> Vec<Violation> {
    let report = evaluate(model, sol);
    let mut v = Vec::new();
    if report.sum_power > model.p_bar * (1.0 + tol::FEAS_TOL) {
        v.push(Violation {
            constraint: ConstraintKind::SumPower,
            magnitude: report.sum_power - model.p_bar,
        });
    }
    match problem {
        ProblemKind::P1 => {
            for k in 0..model.k {
                if report.energy[k] < model.e_bar[k] * (1.0 - tol::FEAS_TOL) {
                    v.push(Violation {
                        constraint: ConstraintKind::EnergyTarget(k),
                        magnitude: model.e_bar[k] - report.energy[k],
                    });
                }
            }
        }
        ProblemKind::P2 => {
            if report.secrecy_rate < model.r_bar0 - 1e-5 {
                v.push(Violation {
                    constraint: ConstraintKind::RateTarget,
                    magnitude: model.r_bar0 - report.secrecy_rate,
                });
            }
        }
    }
    v
}

/// [`evaluate`] with the violation list filled in.
pub fn evaluate_checked(
    model: &SystemModel,
    sol: &BeamformingSolution,
    problem: ProblemKind,
) -> MetricsReport {
    let mut report = evaluate(model, sol);
    report.violations = check_constraints(model, sol, problem);
    report
}

/// A unit direction on the complex projective line with its received
/// powers against the model's channels.
struct Dir {
    v: CVector,
    at_h: f64,
    at_g: Vec<f64>,
}

fn directions(model: &SystemModel, resolution: usize) -> Vec<Dir> {
    let mut dirs = Vec::with_capacity(resolution * resolution);
    for i in 0..resolution {
        let a = i as f64 / (resolution - 1) as f64 * std::f64::consts::FRAC_PI_2;
        for j in 0..resolution {
            let phi = j as f64 / resolution as f64 * std::f64::consts::TAU;
            let v = CVector::from_vec(vec![
                C64::new(a.cos(), 0.0),
                C64::from_polar(a.sin(), phi),
            ]);
            let at_h = model.h.dotc(&v).norm_sqr();
            let at_g = model.g.iter().map(|g| g.dotc(&v).norm_sqr()).collect();
            dirs.push(Dir { v, at_h, at_g });
        }
    }
    dirs
}

/// Orthogonal complement direction of a unit 2-vector `(c, s·e^{iφ})`.
fn complement(v: &CVector) -> CVector {
    CVector::from_vec(vec![-v[1].conj(), v[0].conj()])
}

/// Exhaustive grid search over beams and power splits for `M = 2`,
/// `K ≤ 2`: the independent verification path for both solvers. The grid
/// covers the information-beam direction (two real angles), one energy
/// beam direction for `K = 1` (an orthogonal pair for `K = 2`), and the
/// power simplex at `resolution` points per axis. Returns the best
/// feasible objective: the clamped secrecy rate for `P1`, the weighted
/// sum-energy for `P2`.
pub fn brute_force_oracle(
    model: &SystemModel,
    problem: ProblemKind,
    resolution: usize,
) -> Result<(f64, BeamformingSolution), OracleError> {
    if model.m != 2 || model.k > 2 {
        return Err(OracleError::UnsupportedSize { m: model.m, k: model.k });
    }
    assert!(resolution >= 4);
    match model.k {
        1 => oracle_k1(model, problem, resolution),
        _ => oracle_k2(model, problem, resolution),
    }
}

/// Candidate pruning for K = 1 keeps the search exhaustive up to grid
/// granularity: for the information beam, the objective and constraints
/// improve with `|v^H h|²` at any fixed leakage level, so only the best
/// `at_h` per leakage bin can ever win; for the energy beam, more power on
/// the ER and less on the IR is always preferable, leaving the 2-D Pareto
/// front.
fn oracle_k1(
    model: &SystemModel,
    problem: ProblemKind,
    resolution: usize,
) -> Result<(f64, BeamformingSolution), OracleError> {
    let dirs = directions(model, resolution);

    // Information-beam candidates: bin on leakage, keep max gain per bin.
    let max_leak = dirs.iter().map(|d| d.at_g[0]).fold(0.0f64, f64::max);
    let n_bins = 2 * resolution;
    let mut v_cands: Vec<Option<usize>> = vec![None; n_bins + 1];
    for (i, d) in dirs.iter().enumerate() {
        let bin = if max_leak > 0.0 {
            ((d.at_g[0] / max_leak * n_bins as f64) as usize).min(n_bins)
        } else {
            0
        };
        if v_cands[bin].map_or(true, |best| d.at_h > dirs[best].at_h) {
            v_cands[bin] = Some(i);
        }
    }
    let v_cands: Vec<usize> = v_cands.into_iter().flatten().collect();

    // Energy-beam candidates: Pareto front of (at_h down, at_g up).
    let mut order: Vec<usize> = (0..dirs.len()).collect();
    order.sort_by(|&a, &b| {
        dirs[a]
            .at_h
            .partial_cmp(&dirs[b].at_h)
            .unwrap()
            .then(dirs[b].at_g[0].partial_cmp(&dirs[a].at_g[0]).unwrap())
    });
    let mut w_cands = Vec::new();
    let mut best_g = f64::NEG_INFINITY;
    for i in order {
        if dirs[i].at_g[0] > best_g {
            best_g = dirs[i].at_g[0];
            w_cands.push(i);
        }
    }

    let fracs: Vec<f64> =
        (0..resolution).map(|i| i as f64 / (resolution - 1) as f64).collect();
    let mut best: Option<(f64, usize, usize, f64, f64)> = None;
    for &vi in &v_cands {
        let v = &dirs[vi];
        for &wi in &w_cands {
            let w = &dirs[wi];
            for &fv in &fracs {
                let p0 = fv * model.p_bar;
                for &fw in &fracs {
                    let p1 = fw * (model.p_bar - p0);
                    let sinr0 = p0 * v.at_h / (p1 * w.at_h + model.sigma0_sq);
                    let sinr1 = p0 * v.at_g[0] / (p1 * w.at_g[0] + model.sigma_sq[0]);
                    let e = model.zeta * (p0 * v.at_g[0] + p1 * w.at_g[0]);
                    let rate =
                        (((1.0 + sinr0) / (1.0 + sinr1)).log2()).max(0.0);
                    let objective = match problem {
                        ProblemKind::P1 => {
                            if e < model.e_bar[0] * (1.0 - 1e-9) {
                                continue;
                            }
                            rate
                        }
                        ProblemKind::P2 => {
                            if rate < model.r_bar0 * (1.0 - 1e-9) - 1e-12 {
                                continue;
                            }
                            model.mu[0] * e
                        }
                    };
                    if best.map_or(true, |(b, ..)| objective > b) {
                        best = Some((objective, vi, wi, p0, p1));
                    }
                }
            }
        }
    }
    let (objective, vi, wi, p0, p1) = best.ok_or(OracleError::NoFeasiblePoint)?;
    Ok((objective, assemble(model, &dirs[vi].v, &[(&dirs[wi].v, p1)], p0)))
}

fn oracle_k2(
    model: &SystemModel,
    problem: ProblemKind,
    resolution: usize,
) -> Result<(f64, BeamformingSolution), OracleError> {
    let dirs = directions(model, resolution);
    let fracs: Vec<f64> =
        (0..resolution).map(|i| i as f64 / (resolution - 1) as f64).collect();

    // Precompute complements and their received powers.
    struct Pair {
        u: CVector,
        u_perp: CVector,
        at_h: [f64; 2],
        at_g: [[f64; 2]; 2],
    }
    let pairs: Vec<Pair> = dirs
        .iter()
        .map(|d| {
            let perp = complement(&d.v);
            let ph = model.h.dotc(&perp).norm_sqr();
            let pg0 = model.g[0].dotc(&perp).norm_sqr();
            let pg1 = model.g[1].dotc(&perp).norm_sqr();
            Pair {
                u: d.v.clone(),
                u_perp: perp,
                at_h: [d.at_h, ph],
                at_g: [[d.at_g[0], pg0], [d.at_g[1], pg1]],
            }
        })
        .collect();

    let mut best: Option<(f64, usize, usize, f64, f64, f64)> = None;
    for (vi, v) in dirs.iter().enumerate() {
        for (wi, w) in pairs.iter().enumerate() {
            for &f0 in &fracs {
                let p0 = f0 * model.p_bar;
                for &f1 in &fracs {
                    let p1 = f1 * (model.p_bar - p0);
                    for &f2 in &fracs {
                        let p2 = f2 * (model.p_bar - p0 - p1);
                        let noise_ir =
                            p1 * w.at_h[0] + p2 * w.at_h[1] + model.sigma0_sq;
                        let sinr0 = p0 * v.at_h / noise_ir;
                        let mut worst = f64::INFINITY;
                        let mut energies = [0.0f64; 2];
                        for k in 0..2 {
                            let an = p1 * w.at_g[k][0] + p2 * w.at_g[k][1];
                            let info = p0 * v.at_g[k];
                            let sk = info / (an + model.sigma_sq[k]);
                            worst =
                                worst.min(((1.0 + sinr0) / (1.0 + sk)).log2());
                            energies[k] = model.zeta * (info + an);
                        }
                        let rate = worst.max(0.0);
                        let objective = match problem {
                            ProblemKind::P1 => {
                                if (0..2).any(|k| {
                                    energies[k] < model.e_bar[k] * (1.0 - 1e-9)
                                }) {
                                    continue;
                                }
                                rate
                            }
                            ProblemKind::P2 => {
                                if rate < model.r_bar0 * (1.0 - 1e-9) - 1e-12 {
                                    continue;
                                }
                                model.mu[0] * energies[0] + model.mu[1] * energies[1]
                            }
                        };
                        if best.map_or(true, |(b, ..)| objective > b) {
                            best = Some((objective, vi, wi, p0, p1, p2));
                        }
                    }
                }
            }
        }
    }
    let (objective, vi, wi, p0, p1, p2) = best.ok_or(OracleError::NoFeasiblePoint)?;
    let pair = &pairs[wi];
    Ok((
        objective,
        assemble(model, &dirs[vi].v, &[(&pair.u, p1), (&pair.u_perp, p2)], p0),
    ))
}

fn assemble(
    _model: &SystemModel,
    v_dir: &CVector,
    w_dirs: &[(&CVector, f64)],
    p0: f64,
) -> BeamformingSolution {
    let v0 = v_dir.map(|x| x * C64::new(p0.sqrt(), 0.0));
    let w = w_dirs
        .iter()
        .filter(|(_, p)| *p > 0.0)
        .map(|(dir, p)| dir.map(|x| x * C64::new(p.sqrt(), 0.0)))
        .collect();
    BeamformingSolution { v0, w, method: Method::P1Optimal }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances;
    use approx::assert_relative_eq;

    fn orthogonal_solution() -> (SystemModel, BeamformingSolution) {
        let model = instances::orthogonal_m2k1(1.0, 1.0, 2.0, 1.0);
        let sol = BeamformingSolution {
            v0: CVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)]),
            w: vec![CVector::from_vec(vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)])],
            method: Method::P1Optimal,
        };
        (model, sol)
    }

    #[test]
    fn evaluate_direct_substitution() {
        let (model, sol) = orthogonal_solution();
        let r = evaluate(&model, &sol);
        assert_relative_eq!(r.sinr0, 1.0);
        assert_relative_eq!(r.sinr[0], 0.0);
        assert_relative_eq!(r.secrecy_rate, 1.0);
        assert_relative_eq!(r.energy[0], 1.0);
        assert_relative_eq!(r.sum_power, 2.0);
    }

    #[test]
    fn evaluate_zero_information_beam() {
        let (model, mut sol) = orthogonal_solution();
        sol.v0 = CVector::zeros(2);
        let r = evaluate(&model, &sol);
        assert_relative_eq!(r.sinr0, 0.0);
        assert_relative_eq!(r.secrecy_rate, 0.0);
        assert_relative_eq!(r.energy[0], 1.0);
    }

    #[test]
    fn equal_sinrs_give_zero_rate() {
        // v0 aimed between both receivers with matched noise: SINRs equal.
        let h = CVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
        let g = CVector::from_vec(vec![
            C64::new(1.0 / 2f64.sqrt(), 0.0),
            C64::new(1.0 / 2f64.sqrt(), 0.0),
        ]);
        let model = SystemModel::new(h, vec![g], 1.0, vec![0.5], 2.0, 1.0).unwrap();
        let sol = BeamformingSolution {
            v0: CVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)]),
            w: vec![],
            method: Method::P1Optimal,
        };
        let r = evaluate(&model, &sol);
        assert_relative_eq!(r.sinr0, r.sinr[0], max_relative = 1e-12);
        assert_relative_eq!(r.secrecy_rate, 0.0);
    }

    #[test]
    fn constraint_checks() {
        let (model, sol) = orthogonal_solution();
        let model = model.with_uniform_e_bar(0.5).unwrap();
        assert!(check_constraints(&model, &sol, ProblemKind::P1).is_empty());

        // Doubling the power (amplitude * sqrt 2) violates the budget by P.
        let scaled = BeamformingSolution {
            v0: sol.v0.map(|x| x * C64::new(2f64.sqrt(), 0.0)),
            w: sol.w.iter().map(|w| w.map(|x| x * C64::new(2f64.sqrt(), 0.0))).collect(),
            method: sol.method,
        };
        let v = check_constraints(&model, &scaled, ProblemKind::P1);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].constraint, ConstraintKind::SumPower);
        assert_relative_eq!(v[0].magnitude, 2.0, max_relative = 1e-12);

        // Rate target bumped above the achieved rate by 0.25.
        let p2 = model.clone().with_r_bar0(1.25).unwrap();
        let v = check_constraints(&p2, &sol, ProblemKind::P2);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].constraint, ConstraintKind::RateTarget);
        assert_relative_eq!(v[0].magnitude, 0.25, max_relative = 1e-9);
    }

    #[test]
    fn covariance_bridge_matches_beams() {
        let (model, sol) = orthogonal_solution();
        let cov = crate::model::beams_to_covariances(&sol).unwrap();
        let a = evaluate(&model, &sol);
        let b = evaluate_covariances(&model, &cov);
        assert_relative_eq!(a.sinr0, b.sinr0, max_relative = 1e-8);
        assert_relative_eq!(a.energy[0], b.energy[0], max_relative = 1e-8);
        assert_relative_eq!(a.secrecy_rate, b.secrecy_rate, max_relative = 1e-8);
    }

    #[test]
    fn oracle_matches_closed_form_on_orthogonal_instance() {
        // P = 2, E = 1, zeta = 1: optimum splits power 1/1, rate 1.
        let model =
            instances::orthogonal_m2k1(1.0, 1.0, 2.0, 1.0).with_uniform_e_bar(1.0).unwrap();
        let (obj, sol) = brute_force_oracle(&model, ProblemKind::P1, 40).unwrap();
        assert_relative_eq!(obj, 1.0, max_relative = 0.02);
        assert!(check_constraints(&model, &sol, ProblemKind::P1).is_empty());
    }

    #[test]
    fn oracle_detects_infeasible_targets() {
        let model =
            instances::orthogonal_m2k1(1.0, 1.0, 1.0, 1.0).with_uniform_e_bar(2.0).unwrap();
        assert!(matches!(
            brute_force_oracle(&model, ProblemKind::P1, 30),
            Err(OracleError::NoFeasiblePoint)
        ));
    }

    #[test]
    fn oracle_rejects_large_systems() {
        let model = instances::rayleigh_reference_scene(0);
        assert!(matches!(
            brute_force_oracle(&model, ProblemKind::P1, 20),
            Err(OracleError::UnsupportedSize { .. })
        ));
    }

    #[test]
    fn oracle_two_er_smoke() {
        // Two orthogonal-ish ERs at desk scale; the oracle finds a feasible
        // point and respects the energy floors.
        let h = CVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(0.3, 0.2)]);
        let g1 = CVector::from_vec(vec![C64::new(0.1, 0.0), C64::new(1.0, 0.0)]);
        let g2 = CVector::from_vec(vec![C64::new(0.5, -0.4), C64::new(0.6, 0.3)]);
        let model = SystemModel::new(h, vec![g1, g2], 1.0, vec![1.0, 1.0], 2.0, 0.8)
            .unwrap()
            .with_uniform_e_bar(0.2)
            .unwrap();
        let (obj, sol) = brute_force_oracle(&model, ProblemKind::P1, 14).unwrap();
        assert!(obj >= 0.0);
        assert!(check_constraints(&model, &sol, ProblemKind::P1).is_empty());
    }
}
