//! Transmit beamforming designs for secrecy SWIPT (simultaneous wireless
//! information and power transfer) in a MISO downlink with one information
//! receiver (IR) and `K` energy receivers (ERs, treated as potential
//! eavesdroppers).
//!
//! Two design problems are covered, each with an optimal semidefinite
//! relaxation (SDR) based solver and two low-complexity null-space designs:
//!
//! * **P1** — maximize the IR's secrecy rate subject to per-ER harvested
//!   energy floors and a transmit sum-power budget ([`p1`]).
//! * **P2** — maximize the weighted sum-energy harvested by the ERs subject
//!   to a secrecy-rate floor and the power budget ([`p2`]).
//!
//! Both optimal solvers reduce to a one-dimensional search over an SINR cap
//! (the Charnes-Cooper transform turns the inner fractional program into a
//! convex SDP), followed by a closed-form rank-one reconstruction of the
//! information covariance. The SDPs are solved through a small conic
//! modeling layer ([`sdp`]) over a real PSD-cone interior-point backend;
//! complex Hermitian variables pass through a real embedding.
//!
//! [`metrics`] recomputes every reported quantity directly from the beam
//! vectors and hosts a brute-force oracle for desk-scale cross-checking.

// Linked for the conic backend's LAPACK/BLAS symbols (system OpenBLAS).
extern crate openblas_src;

pub mod channel;
pub mod instances;
pub mod linalg;
pub mod metrics;
pub mod model;
pub mod p1;
pub mod p2;
pub mod sdp;
pub mod sdr;
pub mod search;
pub mod suboptimal;

pub use model::{
    beams_to_covariances, covariances_to_beams, BeamformingSolution, CovariancePair,
    DualCertificate, HermitianMatrix, Method, ModelError, SystemModel, C64, CMatrix, CVector,
};
