//! Small conic modeling layer: real linear objectives and constraints over
//! complex Hermitian PSD matrix variables and nonnegative scalar variables,
//! lowered to a real symmetric-cone interior-point backend (Clarabel).
//!
//! A Hermitian variable of dimension `d` is parameterized by `d²` reals
//! (diagonal, then upper-triangle real parts, then upper-triangle imaginary
//! parts, both column-major). Its PSD membership is imposed on the real
//! embedding `[[Re X, −Im X], [Im X, Re X]]` through one scaled-triangle
//! PSD cone of dimension `2d`; scalar trace terms `Re tr(C X)` stay linear
//! in the parameters, so the whole problem is a standard real conic SDP.
//!
//! # Dual convention
//!
//! `duals[i]` is the multiplier of constraint `i` as written. For a
//! `Maximize` objective `f`, the Lagrangian `f + Σ_i duals[i] · slack_i`
//! is stationary at the optimum, where `slack` is `rhs − lhs` for `Le`
//! rows, `lhs − rhs` for `Ge` rows, and `rhs − lhs` for `Eq` rows (whose
//! multiplier is free); inequality multipliers are nonnegative. This is
//! the usual concave-programming sign convention, so multipliers can be
//! read off against textbook Lagrangians directly.

use clarabel::algebra::CscMatrix;
use clarabel::solver::{DefaultSettings, DefaultSolver, IPSolver, SolverStatus, SupportedConeT};
use std::fmt::Write as _;

use crate::model::{C64, HermitianMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatVar(usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScalarVar(usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cmp {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    Unbounded,
    NumericalTrouble,
}

/// Real linear functional over the declared variables:
/// `Σ_j Re tr(C_j X_j) + Σ_s c_s x_s`.
#[derive(Debug, Clone, Default)]
pub struct LinExpr {
    mat_terms: Vec<(MatVar, HermitianMatrix)>,
    scalar_terms: Vec<(ScalarVar, f64)>,
}

impl LinExpr {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `Re tr(coeff · X_var)`.
    pub fn trace(mut self, var: MatVar, coeff: &HermitianMatrix) -> Self {
        self.mat_terms.push((var, coeff.clone()));
        self
    }

    /// Adds `coeff · x_var`.
    pub fn scalar(mut self, var: ScalarVar, coeff: f64) -> Self {
        self.scalar_terms.push((var, coeff));
        self
    }
}

#[derive(Debug, Clone)]
pub struct SdpSettings {
    pub verbose: bool,
    pub max_iter: u32,
}

impl Default for SdpSettings {
    fn default() -> Self {
        Self { verbose: false, max_iter: 200 }
    }
}

#[derive(Debug, Clone)]
pub struct SdpOutcome {
    pub status: SolveStatus,
    /// Objective value in the declared sense (NaN unless `Optimal`).
    pub objective: f64,
    pub mat_values: Vec<HermitianMatrix>,
    pub scalar_values: Vec<f64>,
    /// One multiplier per constraint, in declaration order (see module doc).
    pub duals: Vec<f64>,
    /// Max of the backend's primal and dual residuals.
    pub max_residual: f64,
}

/// A conic SDP under construction.
pub struct ConicSdp {
    mat_dims: Vec<usize>,
    n_scalars: usize,
    sense: Sense,
    objective: LinExpr,
    constraints: Vec<(LinExpr, Cmp, f64)>,
}

impl ConicSdp {
    pub fn new(sense: Sense) -> Self {
        Self {
            mat_dims: Vec::new(),
            n_scalars: 0,
            sense,
            objective: LinExpr::new(),
            constraints: Vec::new(),
        }
    }

    /// Declares a Hermitian PSD matrix variable of the given dimension.
    pub fn hermitian_var(&mut self, dim: usize) -> MatVar {
        assert!(dim >= 1);
        self.mat_dims.push(dim);
        MatVar(self.mat_dims.len() - 1)
    }

    /// Declares a nonnegative scalar variable.
    pub fn scalar_var(&mut self) -> ScalarVar {
        self.n_scalars += 1;
        ScalarVar(self.n_scalars - 1)
    }

    pub fn set_objective(&mut self, expr: LinExpr) {
        self.objective = expr;
    }

    /// Adds `expr cmp rhs`; returns the constraint index used in `duals`.
    pub fn add_constraint(&mut self, expr: LinExpr, cmp: Cmp, rhs: f64) -> usize {
        self.constraints.push((expr, cmp, rhs));
        self.constraints.len() - 1
    }

    fn n_params(&self) -> usize {
        self.mat_dims.iter().map(|d| d * d).sum::<usize>() + self.n_scalars
    }

    fn mat_offset(&self, var: usize) -> usize {
        self.mat_dims[..var].iter().map(|d| d * d).sum()
    }

    fn scalar_offset(&self, var: usize) -> usize {
        self.mat_dims.iter().map(|d| d * d).sum::<usize>() + var
    }

    /// Column-major upper-triangle position of `(p, q)` with `p < q`.
    fn upos(p: usize, q: usize) -> usize {
        q * (q - 1) / 2 + p
    }

    /// Dense coefficient row of a linear expression over all parameters.
    fn expr_coeffs(&self, expr: &LinExpr) -> Vec<f64> {
        let mut row = vec![0.0; self.n_params()];
        for (var, c) in &expr.mat_terms {
            let d = self.mat_dims[var.0];
            assert_eq!(c.dim(), d, "trace coefficient dimension mismatch");
            let off = self.mat_offset(var.0);
            let t = d * (d - 1) / 2;
            for p in 0..d {
                row[off + p] += c.entry(p, p).re;
                for q in (p + 1)..d {
                    let e = c.entry(p, q);
                    row[off + d + Self::upos(p, q)] += 2.0 * e.re;
                    row[off + d + t + Self::upos(p, q)] += 2.0 * e.im;
                }
            }
        }
        for (var, coeff) in &expr.scalar_terms {
            row[self.scalar_offset(var.0)] += coeff;
        }
        row
    }

    fn decode_mat(&self, var: usize, x: &[f64]) -> HermitianMatrix {
        let d = self.mat_dims[var];
        let off = self.mat_offset(var);
        let t = d * (d - 1) / 2;
        let mut m = crate::model::CMatrix::zeros(d, d);
        for p in 0..d {
            m[(p, p)] = C64::new(x[off + p], 0.0);
            for q in (p + 1)..d {
                let re = x[off + d + Self::upos(p, q)];
                let im = x[off + d + t + Self::upos(p, q)];
                m[(p, q)] = C64::new(re, im);
                m[(q, p)] = C64::new(re, -im);
            }
        }
        HermitianMatrix::from_matrix(m).expect("decoded matrix is Hermitian by construction")
    }

    /// Rows of the PSD-cone block of one matrix variable: each scaled-triangle
    /// entry of the real embedding as a (param, coefficient) pair.
    fn psd_block_rows(&self, var: usize) -> Vec<(usize, f64)> {
        let d = self.mat_dims[var];
        let off = self.mat_offset(var);
        let t = d * (d - 1) / 2;
        let n = 2 * d;
        let sqrt2 = std::f64::consts::SQRT_2;
        let mut rows = Vec::with_capacity(n * (n + 1) / 2);
        for c in 0..n {
            for r in 0..=c {
                let scale = if r == c { 1.0 } else { sqrt2 };
                // Entry (r, c) of [[Re X, -Im X], [Im X, Re X]].
                let (param, sign) = if c < d {
                    // top-left: Re X[r][c]
                    if r == c {
                        (off + r, 1.0)
                    } else {
                        (off + d + Self::upos(r, c), 1.0)
                    }
                } else if r < d {
                    // top-right: -Im X[r][c-d]
                    let cc = c - d;
                    if r < cc {
                        (off + d + t + Self::upos(r, cc), -1.0)
                    } else if r == cc {
                        (usize::MAX, 0.0) // diagonal of Im X is zero
                    } else {
                        (off + d + t + Self::upos(cc, r), 1.0)
                    }
                } else {
                    // bottom-right: Re X[r-d][c-d]
                    let (rr, cc) = (r - d, c - d);
                    if rr == cc {
                        (off + rr, 1.0)
                    } else {
                        (off + d + Self::upos(rr, cc), 1.0)
                    }
                };
                if sign == 0.0 {
                    rows.push((usize::MAX, 0.0));
                } else {
                    rows.push((param, sign * scale));
                }
            }
        }
        rows
    }

    pub fn solve(&self, settings: &SdpSettings) -> SdpOutcome {
        let n = self.n_params();

        // Partition user constraints: equalities first (zero cone), then
        // inequalities (nonnegative cone), then scalar-variable bounds,
        // then the PSD blocks.
        let eq_idx: Vec<usize> = (0..self.constraints.len())
            .filter(|&i| self.constraints[i].1 == Cmp::Eq)
            .collect();
        let ineq_idx: Vec<usize> = (0..self.constraints.len())
            .filter(|&i| self.constraints[i].1 != Cmp::Eq)
            .collect();

        let mut triplets: Vec<(usize, usize, f64)> = Vec::new();
        let mut b: Vec<f64> = Vec::new();
        let mut row = 0usize;
        let mut row_of_constraint = vec![0usize; self.constraints.len()];

        for &i in eq_idx.iter().chain(ineq_idx.iter()) {
            let (expr, cmp, rhs) = &self.constraints[i];
            let coeffs = self.expr_coeffs(expr);
            let flip = if *cmp == Cmp::Ge { -1.0 } else { 1.0 };
            for (col, &v) in coeffs.iter().enumerate() {
                if v != 0.0 {
                    triplets.push((row, col, flip * v));
                }
            }
            b.push(flip * rhs);
            row_of_constraint[i] = row;
            row += 1;
        }
        for s in 0..self.n_scalars {
            triplets.push((row, self.scalar_offset(s), -1.0));
            b.push(0.0);
            row += 1;
        }
        for var in 0..self.mat_dims.len() {
            for (param, coeff) in self.psd_block_rows(var) {
                if param != usize::MAX {
                    triplets.push((row, param, -coeff));
                }
                b.push(0.0);
                row += 1;
            }
        }
        let m_rows = row;

        let mut cones: Vec<SupportedConeT<f64>> = Vec::new();
        if !eq_idx.is_empty() {
            cones.push(SupportedConeT::ZeroConeT(eq_idx.len()));
        }
        let nonneg = ineq_idx.len() + self.n_scalars;
        if nonneg > 0 {
            cones.push(SupportedConeT::NonnegativeConeT(nonneg));
        }
        for &d in &self.mat_dims {
            cones.push(SupportedConeT::PSDTriangleConeT(2 * d));
        }

        // CSC assembly.
        triplets.sort_by_key(|&(r, c, _)| (c, r));
        let mut colptr = vec![0usize; n + 1];
        for &(_, c, _) in &triplets {
            colptr[c + 1] += 1;
        }
        for c in 0..n {
            colptr[c + 1] += colptr[c];
        }
        let rowval: Vec<usize> = triplets.iter().map(|&(r, _, _)| r).collect();
        let nzval: Vec<f64> = triplets.iter().map(|&(_, _, v)| v).collect();
        let a = CscMatrix::new(m_rows, n, colptr, rowval, nzval);

        let obj_coeffs = self.expr_coeffs(&self.objective);
        let q: Vec<f64> = match self.sense {
            Sense::Minimize => obj_coeffs.clone(),
            Sense::Maximize => obj_coeffs.iter().map(|v| -v).collect(),
        };
        let p = CscMatrix::zeros((n, n));

        let clarabel_settings = DefaultSettings {
            verbose: settings.verbose,
            max_iter: settings.max_iter,
            ..DefaultSettings::default()
        };
        let mut solver = match DefaultSolver::new(&p, &q, &a, &b, &cones, clarabel_settings) {
            Ok(s) => s,
            Err(_) => {
                return SdpOutcome {
                    status: SolveStatus::NumericalTrouble,
                    objective: f64::NAN,
                    mat_values: Vec::new(),
                    scalar_values: Vec::new(),
                    duals: Vec::new(),
                    max_residual: f64::NAN,
                }
            }
        };
        solver.solve();
        let sol = &solver.solution;

        let status = match sol.status {
            SolverStatus::Solved => SolveStatus::Optimal,
            SolverStatus::PrimalInfeasible | SolverStatus::AlmostPrimalInfeasible => {
                SolveStatus::Infeasible
            }
            SolverStatus::DualInfeasible | SolverStatus::AlmostDualInfeasible => {
                SolveStatus::Unbounded
            }
            _ => SolveStatus::NumericalTrouble,
        };

        let mat_values: Vec<HermitianMatrix> =
            (0..self.mat_dims.len()).map(|v| self.decode_mat(v, &sol.x)).collect();
        let scalar_values: Vec<f64> =
            (0..self.n_scalars).map(|s| sol.x[self.scalar_offset(s)]).collect();
        let objective = if status == SolveStatus::Optimal {
            obj_coeffs.iter().zip(&sol.x).map(|(c, x)| c * x).sum()
        } else {
            f64::NAN
        };
        let duals: Vec<f64> = (0..self.constraints.len())
            .map(|i| {
                let z = sol.z[row_of_constraint[i]];
                match self.constraints[i].1 {
                    // Ge rows were negated; with the max-sense convention the
                    // multiplier of the constraint as written is z itself for
                    // every orientation (see module doc).
                    _ => z,
                }
            })
            .collect();

        SdpOutcome {
            status,
            objective,
            mat_values,
            scalar_values,
            duals,
            max_residual: sol.r_prim.max(sol.r_dual),
        }
    }

    /// Plain-text dump of the full problem for external cross-checking.
    ///
    /// Format (`conic-sdp v1`): header lines with the sense and variable
    /// dimensions, then the objective and each constraint as one block.
    /// Every Hermitian coefficient matrix is printed dense, row-major, one
    /// row per line, entries as `re+imj`. Constraint blocks end with the
    /// comparator and right-hand side. Hermitian variables live in the PSD
    /// cone (imposed via the real embedding), scalar variables in the
    /// nonnegative cone.
    pub fn dump_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "conic-sdp v1").unwrap();
        writeln!(
            out,
            "sense: {}",
            match self.sense {
                Sense::Minimize => "minimize",
                Sense::Maximize => "maximize",
            }
        )
        .unwrap();
        writeln!(out, "hermitian-vars: {:?}", self.mat_dims).unwrap();
        writeln!(out, "nonneg-scalar-vars: {}", self.n_scalars).unwrap();
        let dump_expr = |out: &mut String, expr: &LinExpr| {
            for (var, c) in &expr.mat_terms {
                writeln!(out, "  trace-coeff var {} dim {}", var.0, c.dim()).unwrap();
                for r in 0..c.dim() {
                    let line: Vec<String> = (0..c.dim())
                        .map(|cc| {
                            let e = c.entry(r, cc);
                            format!("{:+e}{:+e}j", e.re, e.im)
                        })
                        .collect();
                    writeln!(out, "    {}", line.join(" ")).unwrap();
                }
            }
            for (var, coeff) in &expr.scalar_terms {
                writeln!(out, "  scalar-coeff var {} {:+e}", var.0, coeff).unwrap();
            }
        };
        writeln!(out, "objective:").unwrap();
        dump_expr(&mut out, &self.objective);
        for (i, (expr, cmp, rhs)) in self.constraints.iter().enumerate() {
            let op = match cmp {
                Cmp::Le => "<=",
                Cmp::Ge => ">=",
                Cmp::Eq => "==",
            };
            writeln!(out, "constraint {i}: {op} {rhs:+e}").unwrap();
            dump_expr(&mut out, expr);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{CMatrix, CVector};
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn herm(rows: &[&[(f64, f64)]]) -> HermitianMatrix {
        let d = rows.len();
        let m = CMatrix::from_fn(d, d, |i, j| c(rows[i][j].0, rows[i][j].1));
        HermitianMatrix::from_matrix(m).unwrap()
    }

    #[test]
    fn pins_diagonal_entry() {
        let mut sdp = ConicSdp::new(Sense::Minimize);
        let x = sdp.hermitian_var(2);
        sdp.set_objective(LinExpr::new().trace(x, &HermitianMatrix::identity(2)));
        let e11 = herm(&[&[(1.0, 0.0), (0.0, 0.0)], &[(0.0, 0.0), (0.0, 0.0)]]);
        let con = sdp.add_constraint(LinExpr::new().trace(x, &e11), Cmp::Eq, 1.0);
        let out = sdp.solve(&SdpSettings::default());
        assert_eq!(out.status, SolveStatus::Optimal);
        assert_relative_eq!(out.objective, 1.0, epsilon = 1e-7);
        assert_relative_eq!(out.mat_values[0].entry(0, 0).re, 1.0, epsilon = 1e-6);
        assert!(out.mat_values[0].entry(1, 1).re.abs() <= 1e-6);
        // Multiplier of the pinning equality equals the objective sensitivity.
        assert_relative_eq!(out.duals[con].abs(), 1.0, epsilon = 1e-6);
        assert!(out.max_residual <= 1e-7);
    }

    #[test]
    fn off_diagonal_real_part_constraint() {
        // min tr(X) s.t. Re X12 >= 1, X PSD: optimum X = [[1,1],[1,1]].
        let mut sdp = ConicSdp::new(Sense::Minimize);
        let x = sdp.hermitian_var(2);
        sdp.set_objective(LinExpr::new().trace(x, &HermitianMatrix::identity(2)));
        let half = herm(&[&[(0.0, 0.0), (0.5, 0.0)], &[(0.5, 0.0), (0.0, 0.0)]]);
        sdp.add_constraint(LinExpr::new().trace(x, &half), Cmp::Ge, 1.0);
        let out = sdp.solve(&SdpSettings::default());
        assert_eq!(out.status, SolveStatus::Optimal);
        assert_relative_eq!(out.objective, 2.0, epsilon = 1e-6);
        assert_relative_eq!(out.mat_values[0].entry(0, 1).re, 1.0, epsilon = 1e-5);
    }

    #[test]
    fn off_diagonal_imaginary_part_constraint() {
        // min tr(X) s.t. -Im X12 >= 1: optimum has X12 = -i, trace 2.
        let mut sdp = ConicSdp::new(Sense::Minimize);
        let x = sdp.hermitian_var(2);
        sdp.set_objective(LinExpr::new().trace(x, &HermitianMatrix::identity(2)));
        let coeff = herm(&[&[(0.0, 0.0), (0.0, -0.5)], &[(0.0, 0.5), (0.0, 0.0)]]);
        sdp.add_constraint(LinExpr::new().trace(x, &coeff), Cmp::Ge, 1.0);
        let out = sdp.solve(&SdpSettings::default());
        assert_eq!(out.status, SolveStatus::Optimal);
        assert_relative_eq!(out.objective, 2.0, epsilon = 1e-6);
        let x12 = out.mat_values[0].entry(0, 1);
        assert_relative_eq!(x12.im, -1.0, epsilon = 1e-5);
        assert!(out.mat_values[0].min_eigenvalue() >= -1e-7);
    }

    #[test]
    fn maximize_with_power_budget_and_duals() {
        // max tr(CX) s.t. tr(X) <= 2: optimum 4 at X = 2 e1 e1^H, with the
        // budget multiplier equal to the top eigenvalue of C.
        let mut sdp = ConicSdp::new(Sense::Maximize);
        let x = sdp.hermitian_var(2);
        let cmat = herm(&[&[(2.0, 0.0), (0.0, 0.0)], &[(0.0, 0.0), (1.0, 0.0)]]);
        sdp.set_objective(LinExpr::new().trace(x, &cmat));
        let budget = sdp.add_constraint(
            LinExpr::new().trace(x, &HermitianMatrix::identity(2)),
            Cmp::Le,
            2.0,
        );
        let out = sdp.solve(&SdpSettings::default());
        assert_eq!(out.status, SolveStatus::Optimal);
        assert_relative_eq!(out.objective, 4.0, epsilon = 1e-6);
        assert_relative_eq!(out.duals[budget], 2.0, epsilon = 1e-5);
    }

    #[test]
    fn scalar_variables_and_statuses() {
        // Respects nonnegativity and mixed scalar constraints.
        let mut sdp = ConicSdp::new(Sense::Maximize);
        let t = sdp.scalar_var();
        sdp.set_objective(LinExpr::new().scalar(t, 1.0));
        let cap = sdp.add_constraint(LinExpr::new().scalar(t, 1.0), Cmp::Le, 3.0);
        let out = sdp.solve(&SdpSettings::default());
        assert_eq!(out.status, SolveStatus::Optimal);
        assert_relative_eq!(out.objective, 3.0, epsilon = 1e-7);
        assert_relative_eq!(out.scalar_values[0], 3.0, epsilon = 1e-6);
        assert_relative_eq!(out.duals[cap], 1.0, epsilon = 1e-6);

        // Infeasible: t >= 1 and t <= 0.
        let mut bad = ConicSdp::new(Sense::Maximize);
        let t = bad.scalar_var();
        bad.set_objective(LinExpr::new().scalar(t, 1.0));
        bad.add_constraint(LinExpr::new().scalar(t, 1.0), Cmp::Ge, 1.0);
        bad.add_constraint(LinExpr::new().scalar(t, 1.0), Cmp::Le, 0.0);
        assert_eq!(bad.solve(&SdpSettings::default()).status, SolveStatus::Infeasible);

        // Unbounded: max t with no cap.
        let mut unb = ConicSdp::new(Sense::Maximize);
        let t = unb.scalar_var();
        unb.set_objective(LinExpr::new().scalar(t, 1.0));
        assert_eq!(unb.solve(&SdpSettings::default()).status, SolveStatus::Unbounded);
    }

    #[test]
    fn rank_one_data_round_trips_through_solver() {
        // Pin every entry of a 2x2 Hermitian variable to a target matrix by
        // trace constraints and confirm the decoded solution matches,
        // exercising both triangle packings (re/im) end to end.
        let v = CVector::from_vec(vec![c(0.8, 0.3), c(-0.4, 0.6)]);
        let target = HermitianMatrix::from_outer(&v);
        let mut sdp = ConicSdp::new(Sense::Minimize);
        let x = sdp.hermitian_var(2);
        sdp.set_objective(LinExpr::new().trace(x, &HermitianMatrix::identity(2)));
        let e11 = herm(&[&[(1.0, 0.0), (0.0, 0.0)], &[(0.0, 0.0), (0.0, 0.0)]]);
        let e22 = herm(&[&[(0.0, 0.0), (0.0, 0.0)], &[(0.0, 0.0), (1.0, 0.0)]]);
        let re12 = herm(&[&[(0.0, 0.0), (0.5, 0.0)], &[(0.5, 0.0), (0.0, 0.0)]]);
        let im12 = herm(&[&[(0.0, 0.0), (0.0, -0.5)], &[(0.0, 0.5), (0.0, 0.0)]]);
        sdp.add_constraint(LinExpr::new().trace(x, &e11), Cmp::Eq, target.entry(0, 0).re);
        sdp.add_constraint(LinExpr::new().trace(x, &e22), Cmp::Eq, target.entry(1, 1).re);
        sdp.add_constraint(LinExpr::new().trace(x, &re12), Cmp::Eq, target.entry(0, 1).re);
        sdp.add_constraint(LinExpr::new().trace(x, &im12), Cmp::Eq, -target.entry(0, 1).im);
        let out = sdp.solve(&SdpSettings::default());
        assert_eq!(out.status, SolveStatus::Optimal);
        let err = (out.mat_values[0].entries() - target.entries()).norm();
        assert!(err <= 1e-5, "decoded solution off by {err:.2e}");
    }

    #[test]
    fn dump_text_is_complete() {
        let mut sdp = ConicSdp::new(Sense::Maximize);
        let x = sdp.hermitian_var(2);
        let t = sdp.scalar_var();
        sdp.set_objective(LinExpr::new().trace(x, &HermitianMatrix::identity(2)).scalar(t, 2.0));
        sdp.add_constraint(LinExpr::new().scalar(t, 1.0), Cmp::Le, 1.0);
        let text = sdp.dump_text();
        assert!(text.starts_with("conic-sdp v1"));
        assert!(text.contains("sense: maximize"));
        assert!(text.contains("hermitian-vars: [2]"));
        assert!(text.contains("constraint 0: <= +1e0"));
        assert!(text.contains("trace-coeff var 0 dim 2"));
    }
}
