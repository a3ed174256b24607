//! Domain types shared by all solvers: the physical system model, Hermitian
//! covariance carriers, beamforming solutions, and dual certificates.
//!
//! Channels are stored as conjugated vectors, so the received amplitude at
//! the IR is `h^H x` with no extra conjugation layer. The global phase of a
//! beam is physically irrelevant; equality of solutions is defined on
//! covariances, not on the vectors themselves.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use thiserror::Error;

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Default numerical tolerances, one order above typical interior-point
/// solver accuracy.
pub mod tol {
    /// Most-negative eigenvalue relative to trace for PSD acceptance.
    pub const PSD_TOL: f64 = 1e-7;
    /// Second-to-first eigenvalue ratio below which a matrix counts as rank one.
    pub const RANK_TOL: f64 = 1e-6;
    /// Relative slack on feasibility checks (power, energy, rate).
    pub const FEAS_TOL: f64 = 1e-6;
    /// Decomposition reconstruction tolerance.
    pub const EIG_TOL: f64 = 1e-9;
    /// Relative asymmetry above which a matrix is rejected as non-Hermitian.
    pub const ASYM_TOL: f64 = 1e-6;
}

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("channels are numerically linearly dependent (min/max singular value {ratio:.3e})")]
    LinearlyDependentChannels { ratio: f64 },
    #[error("matrix is not Hermitian: relative asymmetry {asymmetry:.3e}")]
    NotHermitian { asymmetry: f64 },
    #[error("information covariance is not rank one (second/first eigenvalue {ratio:.3e})")]
    RankOneViolation { ratio: f64 },
}

/// Complex Hermitian matrix with enforced conjugate symmetry.
///
/// Carrier for transmit covariances `S`, `Q` and channel outer products
/// `H = h h^H`, `G_k = g_k g_k^H`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    dim: usize,
    entries: CMatrix,
    asymmetry: f64,
}

impl HermitianMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, entries: CMatrix::zeros(dim, dim), asymmetry: 0.0 }
    }

    pub fn identity(dim: usize) -> Self {
        Self { dim, entries: CMatrix::identity(dim, dim), asymmetry: 0.0 }
    }

    /// Symmetrizes the input as `(A + A^H)/2` and records the relative
    /// asymmetry `‖A − A^H‖_F / max(‖A‖_F, ε)`. Inputs with asymmetry above
    /// [`tol::ASYM_TOL`] are rejected.
    pub fn from_matrix(a: CMatrix) -> Result<Self, ModelError> {
        if a.nrows() != a.ncols() {
            return Err(ModelError::DimensionMismatch(format!(
                "{}x{} matrix is not square",
                a.nrows(),
                a.ncols()
            )));
        }
        let adj = a.adjoint();
        let asym_abs = (&a - &adj).norm();
        let scale = a.norm().max(f64::MIN_POSITIVE);
        let asymmetry = asym_abs / scale;
        if asymmetry > tol::ASYM_TOL {
            return Err(ModelError::NotHermitian { asymmetry });
        }
        let sym = (&a + &adj).map(|x| x * 0.5);
        Ok(Self { dim: sym.nrows(), entries: sym, asymmetry })
    }

    /// Rank-one outer product `v v^H` (exactly Hermitian by construction).
    pub fn from_outer(v: &CVector) -> Self {
        Self::from_scaled_outer(v, 1.0)
    }

    /// Scaled outer product `c · v v^H` for real `c ≥ 0`.
    pub fn from_scaled_outer(v: &CVector, c: f64) -> Self {
        let dim = v.len();
        let mut m = CMatrix::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = C64::new(c * v[i].norm_sqr(), 0.0);
            for j in (i + 1)..dim {
                let e = v[i] * v[j].conj() * c;
                m[(i, j)] = e;
                m[(j, i)] = e.conj();
            }
        }
        Self { dim, entries: m, asymmetry: 0.0 }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    /// Relative asymmetry of the argument this matrix was built from.
    pub fn asymmetry(&self) -> f64 {
        self.asymmetry
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.entries[(i, j)]
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.entries[(i, i)].re).sum()
    }

    /// `Re tr(A B)`; real-valued and symmetric for Hermitian `A`, `B`.
    pub fn trace_product(&self, other: &HermitianMatrix) -> f64 {
        assert_eq!(self.dim, other.dim, "trace_product dimension mismatch");
        let mut acc = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                acc += (self.entries[(i, j)] * other.entries[(j, i)]).re;
            }
        }
        acc
    }

    /// Quadratic form `v^H A v` (real for Hermitian `A`).
    pub fn quad_form(&self, v: &CVector) -> f64 {
        assert_eq!(self.dim, v.len(), "quad_form dimension mismatch");
        let av = &self.entries * v;
        v.dotc(&av).re
    }

    pub fn add(&self, other: &HermitianMatrix) -> HermitianMatrix {
        assert_eq!(self.dim, other.dim);
        HermitianMatrix { dim: self.dim, entries: &self.entries + &other.entries, asymmetry: 0.0 }
    }

    pub fn sub(&self, other: &HermitianMatrix) -> HermitianMatrix {
        assert_eq!(self.dim, other.dim);
        HermitianMatrix { dim: self.dim, entries: &self.entries - &other.entries, asymmetry: 0.0 }
    }

    pub fn scale(&self, c: f64) -> HermitianMatrix {
        HermitianMatrix {
            dim: self.dim,
            entries: self.entries.map(|x| x * c),
            asymmetry: self.asymmetry,
        }
    }

    /// Real eigenvalues in descending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> =
            self.entries.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| b.partial_cmp(a).unwrap());
        ev
    }

    pub fn min_eigenvalue(&self) -> f64 {
        *self.eigenvalues().last().unwrap()
    }

    /// PSD within [`tol::PSD_TOL`]: most-negative eigenvalue relative to trace.
    pub fn is_psd(&self) -> bool {
        let scale = self.trace().abs().max(f64::MIN_POSITIVE);
        self.min_eigenvalue() >= -tol::PSD_TOL * scale
    }
}

/// The physical downlink: `M` transmit antennas, one IR (conjugated channel
/// `h`), `K` ERs (channels `g[k]`), noise powers, power budget, harvesting
/// efficiency, energy weights, and the per-problem targets.
#[derive(Debug, Clone)]
pub struct SystemModel {
    pub m: usize,
    pub k: usize,
    pub h: CVector,
    pub g: Vec<CVector>,
    pub sigma0_sq: f64,
    pub sigma_sq: Vec<f64>,
    pub p_bar: f64,
    pub zeta: f64,
    pub mu: Vec<f64>,
    pub e_bar: Vec<f64>,
    pub r_bar0: f64,
}

impl SystemModel {
    /// Builds a model with unit energy weights, zero energy targets and a
    /// zero rate target; override with the `with_*` methods.
    pub fn new(
        h: CVector,
        g: Vec<CVector>,
        sigma0_sq: f64,
        sigma_sq: Vec<f64>,
        p_bar: f64,
        zeta: f64,
    ) -> Result<Self, ModelError> {
        let m = h.len();
        let k = g.len();
        if m < 2 {
            return Err(ModelError::InvalidParameter(format!("antenna count M = {m} < 2")));
        }
        if k < 1 {
            return Err(ModelError::InvalidParameter("at least one ER required".into()));
        }
        if g.iter().any(|gk| gk.len() != m) {
            return Err(ModelError::DimensionMismatch("ER channel length != M".into()));
        }
        if sigma_sq.len() != k {
            return Err(ModelError::DimensionMismatch("noise power count != K".into()));
        }
        if !(p_bar > 0.0) {
            return Err(ModelError::InvalidParameter(format!("p_bar = {p_bar} must be > 0")));
        }
        if !(zeta > 0.0 && zeta <= 1.0) {
            return Err(ModelError::InvalidParameter(format!("zeta = {zeta} outside (0, 1]")));
        }
        if !(sigma0_sq > 0.0) || sigma_sq.iter().any(|s| !(*s > 0.0)) {
            return Err(ModelError::InvalidParameter("noise powers must be > 0".into()));
        }
        let model = Self {
            m,
            k,
            h,
            g,
            sigma0_sq,
            sigma_sq,
            p_bar,
            zeta,
            mu: vec![1.0; k],
            e_bar: vec![0.0; k],
            r_bar0: 0.0,
        };
        model.check_linear_independence()?;
        Ok(model)
    }

    pub fn with_e_bar(mut self, e_bar: Vec<f64>) -> Result<Self, ModelError> {
        if e_bar.len() != self.k {
            return Err(ModelError::DimensionMismatch("energy target count != K".into()));
        }
        if e_bar.iter().any(|e| *e < 0.0) {
            return Err(ModelError::InvalidParameter("energy targets must be >= 0".into()));
        }
        self.e_bar = e_bar;
        Ok(self)
    }

    pub fn with_uniform_e_bar(self, e: f64) -> Result<Self, ModelError> {
        let k = self.k;
        self.with_e_bar(vec![e; k])
    }

    pub fn with_r_bar0(mut self, r_bar0: f64) -> Result<Self, ModelError> {
        if r_bar0 < 0.0 {
            return Err(ModelError::InvalidParameter("rate target must be >= 0".into()));
        }
        self.r_bar0 = r_bar0;
        Ok(self)
    }

    pub fn with_mu(mut self, mu: Vec<f64>) -> Result<Self, ModelError> {
        if mu.len() != self.k {
            return Err(ModelError::DimensionMismatch("weight count != K".into()));
        }
        if mu.iter().any(|m| *m < 0.0) {
            return Err(ModelError::InvalidParameter("weights must be >= 0".into()));
        }
        self.mu = mu;
        Ok(self)
    }

    pub fn h_outer(&self) -> HermitianMatrix {
        HermitianMatrix::from_outer(&self.h)
    }

    pub fn g_outer(&self, k: usize) -> HermitianMatrix {
        HermitianMatrix::from_outer(&self.g[k])
    }

    /// Sub-model keeping only the first `k_prime` ERs (activation studies).
    pub fn activate_first(&self, k_prime: usize) -> Result<SystemModel, ModelError> {
        if k_prime == 0 || k_prime > self.k {
            return Err(ModelError::InvalidParameter(format!(
                "k_prime = {k_prime} outside 1..={}",
                self.k
            )));
        }
        SystemModel::new(
            self.h.clone(),
            self.g[..k_prime].to_vec(),
            self.sigma0_sq,
            self.sigma_sq[..k_prime].to_vec(),
            self.p_bar,
            self.zeta,
        )?
        .with_mu(self.mu[..k_prime].to_vec())?
        .with_e_bar(self.e_bar[..k_prime].to_vec())?
        .with_r_bar0(self.r_bar0)
    }

    /// The channels `h, g_1, …, g_K` must be linearly independent: every
    /// stacked matrix formed by `min(M, K+1)` of them must have full rank,
    /// judged by the singular value ratio against [`tol::RANK_TOL`].
    fn check_linear_independence(&self) -> Result<(), ModelError> {
        let mut rows: Vec<&CVector> = Vec::with_capacity(self.k + 1);
        rows.push(&self.h);
        rows.extend(self.g.iter());
        let worst = crate::linalg::min_stacked_rank_ratio(&rows, self.m);
        if worst <= tol::RANK_TOL {
            return Err(ModelError::LinearlyDependentChannels { ratio: worst });
        }
        Ok(())
    }
}

/// Which design produced a solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Method {
    P1Optimal,
    P2Optimal,
    Sub1,
    Sub2,
    NoSc,
    NoIt,
    NoEt,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Method::P1Optimal => "p1-optimal",
            Method::P2Optimal => "p2-optimal",
            Method::Sub1 => "sub1",
            Method::Sub2 => "sub2",
            Method::NoSc => "nosc",
            Method::NoIt => "noit",
            Method::NoEt => "noet",
        };
        f.write_str(s)
    }
}

/// Information beam `v0` plus `d ≤ M` energy beams; the carried signals are
/// implicit (unit-variance Gaussian, never sampled).
#[derive(Debug, Clone)]
pub struct BeamformingSolution {
    pub v0: CVector,
    pub w: Vec<CVector>,
    pub method: Method,
}

impl BeamformingSolution {
    pub fn dim(&self) -> usize {
        self.v0.len()
    }

    pub fn sum_power(&self) -> f64 {
        self.v0.norm_squared() + self.w.iter().map(|w| w.norm_squared()).sum::<f64>()
    }
}

/// Covariance-form solution: information covariance `S`, energy covariance
/// `Q`, and the optional Charnes-Cooper auxiliary `t > 0`.
#[derive(Debug, Clone)]
pub struct CovariancePair {
    pub s: HermitianMatrix,
    pub q: HermitianMatrix,
    pub t: Option<f64>,
}

impl CovariancePair {
    pub fn dim(&self) -> usize {
        self.s.dim()
    }

    pub fn sum_trace(&self) -> f64 {
        self.s.trace() + self.q.trace()
    }
}

/// Dual multipliers of the inner SDP: `lambda` for the normalization
/// equality, `beta[k]` for the ER SINR caps, `alpha[k]` for the harvested
/// energy floors, `theta` for the sum-power budget.
#[derive(Debug, Clone)]
pub struct DualCertificate {
    pub lambda: f64,
    pub beta: Vec<f64>,
    pub alpha: Vec<f64>,
    pub theta: f64,
}

/// `S = v0 v0^H`, `Q = Σ_i w_i w_i^H`; `t` absent.
pub fn beams_to_covariances(sol: &BeamformingSolution) -> Result<CovariancePair, ModelError> {
    let m = sol.v0.len();
    if sol.w.iter().any(|w| w.len() != m) {
        return Err(ModelError::DimensionMismatch("energy beam length != M".into()));
    }
    let s = HermitianMatrix::from_outer(&sol.v0);
    let mut q = HermitianMatrix::zeros(m);
    for w in &sol.w {
        q = q.add(&HermitianMatrix::from_outer(w));
    }
    Ok(CovariancePair { s, q, t: None })
}

/// Recovers beams from covariances via eigendecompositions: `v0` from the
/// leading eigenpair of `S` (which must be rank one within `rank_tol`), and
/// one energy beam per eigenvalue of `Q` above `rank_tol · λ_max(Q)`.
///
/// Returns [`ModelError::RankOneViolation`] when `S` fails the rank test;
/// the caller must run rank-one reconstruction first.
pub fn covariances_to_beams(
    cov: &CovariancePair,
    rank_tol: f64,
    method: Method,
) -> Result<BeamformingSolution, ModelError> {
    let m = cov.dim();
    if cov.q.dim() != m {
        return Err(ModelError::DimensionMismatch("S and Q dimensions differ".into()));
    }
    let (s_vals, s_vecs) = crate::linalg::hermitian_evd(&cov.s);
    let lead = s_vals[0];
    let v0 = if lead <= 0.0 {
        CVector::zeros(m)
    } else {
        if s_vals.len() > 1 && s_vals[1] > rank_tol * lead {
            return Err(ModelError::RankOneViolation { ratio: s_vals[1] / lead });
        }
        s_vecs.column(0).map(|x| x * C64::new(lead.sqrt(), 0.0)).into_owned()
    };

    let (q_vals, q_vecs) = crate::linalg::hermitian_evd(&cov.q);
    let q_lead = q_vals[0];
    let mut w = Vec::new();
    if q_lead > 0.0 {
        for (i, &lam) in q_vals.iter().enumerate() {
            if lam > rank_tol * q_lead {
                w.push(q_vecs.column(i).map(|x| x * C64::new(lam.sqrt(), 0.0)).into_owned());
            }
        }
    }
    Ok(BeamformingSolution { v0, w, method })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn cv(entries: &[(f64, f64)]) -> CVector {
        CVector::from_iterator(entries.len(), entries.iter().map(|&(re, im)| C64::new(re, im)))
    }

    #[test]
    fn beams_to_covariances_axis_vectors() {
        let sol = BeamformingSolution {
            v0: cv(&[(1.0, 0.0), (0.0, 0.0)]),
            w: vec![cv(&[(0.0, 0.0), (2.0, 0.0)])],
            method: Method::P1Optimal,
        };
        let cov = beams_to_covariances(&sol).unwrap();
        assert_relative_eq!(cov.s.entry(0, 0).re, 1.0);
        assert_relative_eq!(cov.s.entry(1, 1).re, 0.0);
        assert_relative_eq!(cov.q.entry(1, 1).re, 4.0);
        assert_relative_eq!(cov.q.entry(0, 0).re, 0.0);
        assert!(cov.t.is_none());
    }

    #[test]
    fn beams_to_covariances_zero_case() {
        let sol = BeamformingSolution {
            v0: CVector::zeros(2),
            w: vec![],
            method: Method::NoIt,
        };
        let cov = beams_to_covariances(&sol).unwrap();
        assert_eq!(cov.s.trace(), 0.0);
        assert_eq!(cov.q.trace(), 0.0);
    }

    #[test]
    fn beams_to_covariances_orthogonal_unit_pair() {
        let isq = 1.0 / 2f64.sqrt();
        let sol = BeamformingSolution {
            v0: cv(&[(isq, 0.0), (0.0, isq)]),
            w: vec![cv(&[(isq, 0.0), (0.0, -isq)])],
            method: Method::P1Optimal,
        };
        let cov = beams_to_covariances(&sol).unwrap();
        assert_relative_eq!(cov.s.trace(), 1.0, epsilon = 1e-12);
        assert_relative_eq!(cov.q.trace(), 1.0, epsilon = 1e-12);
        // Orthogonal beams: the covariances annihilate each other.
        assert_relative_eq!(cov.s.trace_product(&cov.q), 0.0, epsilon = 1e-12);
        // Hand-computed outer product entries.
        assert_relative_eq!(cov.s.entry(0, 1).im, -0.5, epsilon = 1e-12);
        assert_relative_eq!(cov.q.entry(0, 1).im, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn covariances_to_beams_diagonal() {
        let s = HermitianMatrix::from_matrix(CMatrix::from_diagonal(&cv(&[(4.0, 0.0), (0.0, 0.0)])))
            .unwrap();
        let q = HermitianMatrix::zeros(2);
        let sol = covariances_to_beams(
            &CovariancePair { s, q, t: None },
            tol::RANK_TOL,
            Method::P1Optimal,
        )
        .unwrap();
        assert_relative_eq!(sol.v0[0].norm(), 2.0, epsilon = 1e-12);
        assert_relative_eq!(sol.v0[1].norm(), 0.0, epsilon = 1e-12);
        assert!(sol.w.is_empty());
    }

    #[test]
    fn covariances_to_beams_rejects_rank_two() {
        let s = HermitianMatrix::identity(2);
        let q = HermitianMatrix::zeros(2);
        let err = covariances_to_beams(
            &CovariancePair { s, q, t: None },
            tol::RANK_TOL,
            Method::P1Optimal,
        )
        .unwrap_err();
        assert!(matches!(err, ModelError::RankOneViolation { .. }));
    }

    #[test]
    fn hermitian_symmetrizes_and_rejects() {
        let slightly = CMatrix::from_row_slice(2, 2, &[
            C64::new(1.0, 0.0),
            C64::new(0.5, 1e-9),
            C64::new(0.5, -1e-9 + 1e-10),
            C64::new(2.0, 0.0),
        ]);
        let h = HermitianMatrix::from_matrix(slightly).unwrap();
        assert!(h.asymmetry() > 0.0);
        assert_eq!(h.entry(0, 1).conj(), h.entry(1, 0));

        let badly = CMatrix::from_row_slice(2, 2, &[
            C64::new(1.0, 0.0),
            C64::new(0.5, 0.0),
            C64::new(0.9, 0.0),
            C64::new(2.0, 0.0),
        ]);
        assert!(matches!(
            HermitianMatrix::from_matrix(badly),
            Err(ModelError::NotHermitian { .. })
        ));
    }

    #[test]
    fn model_rejects_dependent_channels() {
        let h = cv(&[(1.0, 0.0), (0.0, 0.0)]);
        let g = cv(&[(2.0, 0.0), (0.0, 0.0)]); // parallel to h
        let err = SystemModel::new(h, vec![g], 1.0, vec![1.0], 1.0, 1.0).unwrap_err();
        assert!(matches!(err, ModelError::LinearlyDependentChannels { .. }));
    }

    #[test]
    fn model_validates_parameters() {
        let h = cv(&[(1.0, 0.0), (0.0, 0.0)]);
        let g = cv(&[(0.0, 0.0), (1.0, 0.0)]);
        assert!(SystemModel::new(h.clone(), vec![g.clone()], 1.0, vec![1.0], 0.0, 1.0).is_err());
        assert!(SystemModel::new(h.clone(), vec![g.clone()], 1.0, vec![1.0], 1.0, 1.5).is_err());
        assert!(SystemModel::new(h.clone(), vec![g.clone()], 0.0, vec![1.0], 1.0, 1.0).is_err());
        let m = SystemModel::new(h, vec![g], 1.0, vec![1.0], 1.0, 1.0).unwrap();
        assert!(m.clone().with_uniform_e_bar(-1.0).is_err());
        assert!(m.with_r_bar0(2.0).unwrap().r_bar0 == 2.0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn covariance_round_trip_preserves_covariances(
            re in proptest::collection::vec(-1.0f64..1.0, 3),
            im in proptest::collection::vec(-1.0f64..1.0, 3),
            wre in proptest::collection::vec(-1.0f64..1.0, 3),
            wim in proptest::collection::vec(-1.0f64..1.0, 3),
        ) {
            let v0 = CVector::from_iterator(3, re.iter().zip(&im).map(|(&r, &i)| C64::new(r, i)));
            let w = CVector::from_iterator(3, wre.iter().zip(&wim).map(|(&r, &i)| C64::new(r, i)));
            prop_assume!(v0.norm() > 1e-3 && w.norm() > 1e-3);
            let sol = BeamformingSolution { v0, w: vec![w], method: Method::P1Optimal };
            let cov = beams_to_covariances(&sol).unwrap();
            let back = covariances_to_beams(&cov, tol::RANK_TOL, Method::P1Optimal).unwrap();
            let cov2 = beams_to_covariances(&back).unwrap();
            // Equality is defined on covariances (global beam phase is free).
            let ds = (cov.s.entries() - cov2.s.entries()).norm();
            let dq = (cov.q.entries() - cov2.q.entries()).norm();
            prop_assert!(ds <= 1e-8 * cov.s.trace().max(1e-12));
            prop_assert!(dq <= 1e-8 * cov.q.trace().max(1e-12));
        }
    }
}
