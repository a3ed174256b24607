//! Channel ensembles: i.i.d. Rayleigh fading with per-link path loss, and a
//! far-field uniform linear array (ULA) with steering-vector channels.
//!
//! # Reproducibility
//!
//! Sampling is fully specified so that seeds are portable across
//! implementations:
//!
//! * RNG: `ChaCha8` seeded via `seed_from_u64(seed)` (the `rand_chacha`
//!   stream layout).
//! * Uniforms: `u = (next_u64() >> 11) / 2^53 ∈ [0, 1)`.
//! * Complex circularly-symmetric Gaussians of per-entry variance `ρ²` via
//!   Box-Muller: with `u1, u2` two consecutive uniforms,
//!   `r = sqrt(-2 ln(1 - u1))`, `re = ρ/√2 · r cos(2π u2)`,
//!   `im = ρ/√2 · r sin(2π u2)`.
//! * Draw order: all `M` entries of `h`, then `g_1`, …, `g_K`.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{tol, C64, CVector};

#[derive(Debug, Error)]
pub enum ChannelError {
    #[error("invalid channel config: {0}")]
    InvalidConfig(String),
    #[error("generated channels are linearly dependent (min/max singular value {ratio:.3e})")]
    LinearlyDependent { ratio: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelKind {
    Rayleigh,
    Ula,
}

/// Channel ensemble parameters. Powers are average per-antenna channel
/// powers in dB; for the ULA, `phi[0]` is the IR direction and `phi[1..]`
/// the ER directions, in radians.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChannelConfig {
    pub kind: ChannelKind,
    pub rho_h_sq_db: f64,
    pub rho_g_sq_db: Vec<f64>,
    #[serde(default)]
    pub phi: Vec<f64>,
    #[serde(default = "default_spacing")]
    pub spacing_over_lambda: f64,
    pub seed: u64,
}

fn default_spacing() -> f64 {
    0.5
}

/// Generated channel vectors plus any soft warnings recorded on the way.
#[derive(Debug, Clone)]
pub struct GeneratedChannels {
    pub h: CVector,
    pub g: Vec<CVector>,
    pub warnings: Vec<String>,
}

pub fn db_to_linear(x_db: f64) -> f64 {
    10f64.powf(x_db / 10.0)
}

pub fn dbm_to_watts(x_dbm: f64) -> f64 {
    10f64.powf((x_dbm - 30.0) / 10.0)
}

fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

/// One CSCG entry of variance `rho_sq` (real and imaginary parts each
/// `Normal(0, rho_sq/2)`), via Box-Muller as documented on this module.
fn cscg(rng: &mut ChaCha8Rng, rho_sq: f64) -> C64 {
    let u1 = uniform(rng);
    let u2 = uniform(rng);
    let r = (-2.0 * (1.0 - u1).ln()).sqrt();
    let s = (rho_sq / 2.0).sqrt();
    C64::new(s * r * (std::f64::consts::TAU * u2).cos(), s * r * (std::f64::consts::TAU * u2).sin())
}

fn steering(m: usize, rho: f64, theta: f64) -> CVector {
    CVector::from_iterator(m, (0..m).map(|n| C64::from_polar(rho, theta * n as f64)))
}

fn independence_ratio(h: &CVector, g: &[CVector], m: usize) -> f64 {
    let mut rows: Vec<&CVector> = Vec::with_capacity(g.len() + 1);
    rows.push(h);
    rows.extend(g.iter());
    crate::linalg::min_stacked_rank_ratio(&rows, m)
}

/// Draws the channel fields of a system model: `h` and `g[0..K]`.
///
/// Rayleigh draws are retried up to 100 times if the linear-independence
/// check fails (a zero-probability event in exact arithmetic); a ULA
/// configuration that fails the check is an immediate error.
pub fn generate(cfg: &ChannelConfig, m: usize, k: usize) -> Result<GeneratedChannels, ChannelError> {
    if cfg.rho_g_sq_db.len() != k {
        return Err(ChannelError::InvalidConfig(format!(
            "rho_g_sq_db has {} entries, expected K = {k}",
            cfg.rho_g_sq_db.len()
        )));
    }
    for (i, &db) in cfg.rho_g_sq_db.iter().enumerate() {
        if db <= cfg.rho_h_sq_db {
            return Err(ChannelError::InvalidConfig(format!(
                "rho_g_sq_db[{i}] = {db} dB must exceed rho_h_sq_db = {} dB \
                 (ERs are nearer than the IR)",
                cfg.rho_h_sq_db
            )));
        }
    }
    let rho_h = db_to_linear(cfg.rho_h_sq_db).sqrt();
    let rho_g: Vec<f64> = cfg.rho_g_sq_db.iter().map(|&db| db_to_linear(db).sqrt()).collect();

    match cfg.kind {
        ChannelKind::Ula => {
            if cfg.phi.len() != k + 1 {
                return Err(ChannelError::InvalidConfig(format!(
                    "phi has {} entries, expected K+1 = {}",
                    cfg.phi.len(),
                    k + 1
                )));
            }
            if !(cfg.spacing_over_lambda > 0.0) {
                return Err(ChannelError::InvalidConfig(
                    "spacing_over_lambda must be > 0".into(),
                ));
            }
            let theta: Vec<f64> = cfg
                .phi
                .iter()
                .map(|&phi| -std::f64::consts::TAU * cfg.spacing_over_lambda * phi.sin())
                .collect();
            let mut warnings = Vec::new();
            for a in 0..theta.len() {
                for b in (a + 1)..theta.len() {
                    if (theta[a] - theta[b]).abs() <= 1e-9 {
                        warnings.push(format!(
                            "steering angles {a} and {b} coincide within 1e-9; \
                             channels are linearly dependent"
                        ));
                    }
                }
            }
            let h = steering(m, rho_h, theta[0]);
            let g: Vec<CVector> =
                (0..k).map(|i| steering(m, rho_g[i], theta[i + 1])).collect();
            let ratio = independence_ratio(&h, &g, m);
            if ratio <= tol::RANK_TOL {
                return Err(ChannelError::LinearlyDependent { ratio });
            }
            Ok(GeneratedChannels { h, g, warnings })
        }
        ChannelKind::Rayleigh => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            for _attempt in 0..100 {
                let h = CVector::from_iterator(m, (0..m).map(|_| cscg(&mut rng, rho_h * rho_h)));
                let g: Vec<CVector> = (0..k)
                    .map(|i| {
                        CVector::from_iterator(
                            m,
                            (0..m).map(|_| cscg(&mut rng, rho_g[i] * rho_g[i])),
                        )
                    })
                    .collect();
                let ratio = independence_ratio(&h, &g, m);
                if ratio > tol::RANK_TOL {
                    return Ok(GeneratedChannels { h, g, warnings: Vec::new() });
                }
            }
            Err(ChannelError::LinearlyDependent { ratio: 0.0 })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn db_conversions() {
        assert_relative_eq!(dbm_to_watts(30.0), 1.0);
        assert_relative_eq!(dbm_to_watts(-50.0), 1e-8);
        assert_relative_eq!(db_to_linear(0.0), 1.0);
    }

    #[test]
    fn ula_broadside_is_constant_phase() {
        let cfg = ChannelConfig {
            kind: ChannelKind::Ula,
            rho_h_sq_db: -10.0,
            rho_g_sq_db: vec![0.0],
            phi: vec![0.0, std::f64::consts::FRAC_PI_4],
            spacing_over_lambda: 0.5,
            seed: 0,
        };
        let ch = generate(&cfg, 2, 1).unwrap();
        // phi = 0 gives theta = 0: every entry equals rho_h.
        let rho_h = db_to_linear(-10.0).sqrt();
        assert_relative_eq!((ch.h[0] - ch.h[1]).norm(), 0.0, epsilon = 1e-15);
        assert_relative_eq!(ch.h[0].re, rho_h, epsilon = 1e-15);
        assert_relative_eq!(ch.h[0].im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn ula_seven_er_scene_has_expected_channel_power() {
        let ch = generate(&crate::instances::ula_reference_config(), 9, 7).unwrap();
        assert_relative_eq!(ch.h.norm_squared(), 9e-7, max_relative = 1e-12);
        for gk in &ch.g {
            assert_relative_eq!(gk.norm_squared(), 9e-3, max_relative = 1e-12);
        }
        // Constant modulus entries.
        for e in ch.h.iter() {
            assert_relative_eq!(e.norm(), 1e-7f64.sqrt(), max_relative = 1e-12);
        }
        assert!(ch.warnings.is_empty());
    }

    #[test]
    fn ula_coincident_angles_error_with_warning() {
        let cfg = ChannelConfig {
            kind: ChannelKind::Ula,
            rho_h_sq_db: -10.0,
            rho_g_sq_db: vec![0.0],
            phi: vec![0.3, 0.3],
            spacing_over_lambda: 0.5,
            seed: 0,
        };
        assert!(matches!(generate(&cfg, 3, 1), Err(ChannelError::LinearlyDependent { .. })));
        // Mirrored bearing with identical sine also collapses the steering vector.
        let cfg2 = ChannelConfig {
            phi: vec![0.3, std::f64::consts::PI - 0.3],
            ..cfg
        };
        assert!(matches!(generate(&cfg2, 3, 1), Err(ChannelError::LinearlyDependent { .. })));
    }

    #[test]
    fn rayleigh_is_deterministic_per_seed() {
        let cfg = ChannelConfig {
            kind: ChannelKind::Rayleigh,
            rho_h_sq_db: -20.0,
            rho_g_sq_db: vec![-10.0, -10.0],
            phi: vec![],
            spacing_over_lambda: 0.5,
            seed: 42,
        };
        let a = generate(&cfg, 4, 2).unwrap();
        let b = generate(&cfg, 4, 2).unwrap();
        assert_eq!(a.h, b.h);
        assert_eq!(a.g, b.g);
        let c = generate(&ChannelConfig { seed: 43, ..cfg }, 4, 2).unwrap();
        assert_ne!(a.h, c.h);
    }

    #[test]
    fn rayleigh_sample_power_matches_configuration() {
        // Sample mean of |h_m|^2 over many draws approaches rho_h^2.
        let mut acc = 0.0;
        let draws = 25_000;
        let m = 4;
        for seed in 0..draws {
            let cfg = ChannelConfig {
                kind: ChannelKind::Rayleigh,
                rho_h_sq_db: -10.0,
                rho_g_sq_db: vec![0.0],
                phi: vec![],
                spacing_over_lambda: 0.5,
                seed,
            };
            let ch = generate(&cfg, m, 1).unwrap();
            acc += ch.h.norm_squared() / m as f64;
        }
        let mean = acc / draws as f64;
        assert_relative_eq!(mean, 0.1, max_relative = 0.02);
    }

    #[test]
    fn config_validation() {
        let cfg = ChannelConfig {
            kind: ChannelKind::Rayleigh,
            rho_h_sq_db: -10.0,
            rho_g_sq_db: vec![-20.0], // ER weaker than IR: rejected
            phi: vec![],
            spacing_over_lambda: 0.5,
            seed: 0,
        };
        assert!(matches!(generate(&cfg, 3, 1), Err(ChannelError::InvalidConfig(_))));
        let cfg2 = ChannelConfig { rho_g_sq_db: vec![0.0, 0.0], ..cfg };
        assert!(matches!(generate(&cfg2, 3, 1), Err(ChannelError::InvalidConfig(_))));
    }
}
