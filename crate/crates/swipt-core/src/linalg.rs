//! Hermitian/complex linear-algebra kernel: eigendecomposition, null
//! spaces, orthogonal complements, and the complex-to-real embedding used
//! by the SDP layer.
//!
//! All eigenvectors follow a deterministic phase convention (first
//! significant component made real positive) so repeated runs produce
//! identical output files.

use nalgebra::DMatrix;
use thiserror::Error;

use crate::model::{C64, CMatrix, CVector, HermitianMatrix};

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("matrix has full column rank; null space is empty")]
    EmptyNullSpace,
    #[error("zero vector has no orthogonal complement basis")]
    ZeroVector,
}

/// Orthonormal basis of the numerical null space of a matrix, together with
/// the singular-value cutoff that defined it.
#[derive(Debug, Clone)]
pub struct NullSpaceBasis {
    pub columns: CMatrix,
    pub tol: f64,
}

impl NullSpaceBasis {
    pub fn rank(&self) -> usize {
        self.columns.ncols()
    }
}

fn canonical_phase(col: &mut nalgebra::DVectorViewMut<C64>) {
    let max_abs = col.iter().map(|x| x.norm()).fold(0.0f64, f64::max);
    if max_abs == 0.0 {
        return;
    }
    let pivot = col.iter().copied().find(|x| x.norm() > 1e-9 * max_abs);
    if let Some(p) = pivot {
        let phase = p.conj() / C64::new(p.norm(), 0.0);
        for x in col.iter_mut() {
            *x *= phase;
        }
    }
}

/// Eigendecomposition of a Hermitian matrix: real eigenvalues in descending
/// order with matching orthonormal eigenvector columns, `A = U diag(λ) U^H`.
pub fn hermitian_evd(a: &HermitianMatrix) -> (Vec<f64>, CMatrix) {
    let se = a.entries().clone().symmetric_eigen();
    let n = a.dim();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| se.eigenvalues[j].partial_cmp(&se.eigenvalues[i]).unwrap());
    let vals: Vec<f64> = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let mut vecs = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vecs.set_column(dst, &se.eigenvectors.column(src));
        canonical_phase(&mut vecs.column_mut(dst));
    }
    (vals, vecs)
}

/// Maximum eigenvalue and its unit-norm eigenvector.
pub fn max_eigpair(a: &HermitianMatrix) -> (f64, CVector) {
    let (vals, vecs) = hermitian_evd(a);
    (vals[0], vecs.column(0).into_owned())
}

/// Orthonormal basis of the numerical null space of `a` (`K×M`). The
/// singular-value cutoff defaults to `max(K, M) · ε · σ_max`.
///
/// The rank comes from a thin SVD; the basis itself is the eigenspace of
/// the row-space complement projector `I − V̄ V̄^H`, whose spectrum splits
/// cleanly at `{0, 1}`.
pub fn null_space(a: &CMatrix, cutoff: Option<f64>) -> Result<NullSpaceBasis, LinalgError> {
    let m = a.ncols();
    let svd = a.clone().svd(false, true);
    let sv = &svd.singular_values;
    let smax = sv.max();
    let tol = cutoff
        .unwrap_or_else(|| a.nrows().max(m) as f64 * f64::EPSILON * smax.max(f64::MIN_POSITIVE));
    let rank = sv.iter().filter(|&&s| s > tol).count();
    if rank >= m {
        return Err(LinalgError::EmptyNullSpace);
    }
    let v_t = svd.v_t.expect("SVD with compute_v");
    let mut row_basis = CMatrix::zeros(m, rank);
    let mut dst = 0;
    for i in 0..sv.len() {
        if sv[i] > tol {
            row_basis.set_column(dst, &v_t.row(i).adjoint().column(0));
            dst += 1;
        }
    }
    let projector = HermitianMatrix::from_matrix(
        CMatrix::identity(m, m) - &row_basis * row_basis.adjoint(),
    )
    .expect("complement projector is Hermitian");
    let (vals, vecs) = hermitian_evd(&projector);
    let mut columns = CMatrix::zeros(m, m - rank);
    for i in 0..(m - rank) {
        debug_assert!(vals[i] > 0.5, "projector eigenvalue {} not near 1", vals[i]);
        columns.set_column(i, &vecs.column(i));
    }
    Ok(NullSpaceBasis { columns, tol })
}

/// Orthonormal basis `X̃` of the orthogonal complement of a nonzero vector:
/// `M − 1` columns with `h^H X̃ = 0` and `X̃ X̃^H = I − h h^H / ‖h‖²`.
pub fn orth_complement_of_vector(h: &CVector) -> Result<NullSpaceBasis, LinalgError> {
    if h.norm() == 0.0 {
        return Err(LinalgError::ZeroVector);
    }
    let m = h.len();
    let (_, vecs) = hermitian_evd(&HermitianMatrix::from_outer(h));
    // Leading eigenvector spans h; the remaining M-1 span its complement.
    let mut columns = CMatrix::zeros(m, m - 1);
    for i in 1..m {
        columns.set_column(i - 1, &vecs.column(i));
    }
    Ok(NullSpaceBasis { columns, tol: f64::EPSILON * h.norm() })
}

/// Worst-case min/max singular value ratio over every stacked matrix formed
/// by `min(m, rows.len())` of the given row vectors. Used to judge the
/// linear-independence assumption on the channel set.
pub(crate) fn min_stacked_rank_ratio(rows: &[&CVector], m: usize) -> f64 {
    use itertools::Itertools;
    let n = rows.len();
    let take = n.min(m);
    let mut worst = f64::INFINITY;
    for combo in (0..n).combinations(take) {
        let mut stack = CMatrix::zeros(take, m);
        for (r, &idx) in combo.iter().enumerate() {
            for c in 0..m {
                stack[(r, c)] = rows[idx][c];
            }
        }
        let sv = stack.svd(false, false).singular_values;
        let smax = sv.max();
        if !(smax > 0.0) {
            return 0.0;
        }
        worst = worst.min(sv.min() / smax);
    }
    worst
}

/// Real embedding of a complex matrix: `[[Re A, −Im A], [Im A, Re A]]`.
///
/// The map is a ring homomorphism (`embed(A)·embed(B) = embed(A·B)`), and
/// for Hermitian `A` the image is symmetric with doubled trace and each
/// eigenvalue of `A` appearing twice, so `A ⪰ 0` iff `embed(A) ⪰ 0`.
pub fn complex_to_real_embedding(a: &CMatrix) -> DMatrix<f64> {
    let (r, c) = (a.nrows(), a.ncols());
    let mut out = DMatrix::zeros(2 * r, 2 * c);
    for i in 0..r {
        for j in 0..c {
            let x = a[(i, j)];
            out[(i, j)] = x.re;
            out[(i, j + c)] = -x.im;
            out[(i + r, j)] = x.im;
            out[(i + r, j + c)] = x.re;
        }
    }
    out
}

/// Real symmetric embedding of a Hermitian matrix (see
/// [`complex_to_real_embedding`]); PSD iff the input is PSD.
pub fn complex_to_real_psd_embedding(a: &HermitianMatrix) -> DMatrix<f64> {
    complex_to_real_embedding(a.entries())
}
