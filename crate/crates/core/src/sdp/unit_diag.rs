//! `max tr(C X)  s.t.  diag(X) = 1, X ⪰ 0` over complex Hermitian `X`.
//!
//! Primal-dual path-following interior point method with the
//! HKM search direction and a Mehrotra-style centering heuristic. Iterates
//! stay primal feasible (`X ≻ 0`, unit diagonal) and dual feasible
//! (`Z = Diag(y) − C ≻ 0`, checked by Cholesky), so `Σ y` is a certified
//! upper bound on the optimum and `Σ y − tr(C X)` a certified gap.

use nalgebra::{Cholesky, DMatrix};
use num_complex::Complex64;
use serde::Serialize;

use super::hermitian::{CMatrix, HermitianMatrix};
use crate::error::{Error, Result};

pub const DEFAULT_SDP_TOL: f64 = 1e-7;
pub const DEFAULT_SDP_MAX_ITERS: usize = 200;

/// Fraction of the distance to the cone boundary taken per step.
const STEP_FRACTION: f64 = 0.98;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SdpOptions {
    pub tol: f64,
    pub max_iters: usize,
    /// Keep one [`IterationRecord`] per iteration.
    pub record_trace: bool,
}

impl Default for SdpOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_SDP_TOL,
            max_iters: DEFAULT_SDP_MAX_ITERS,
            record_trace: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IterationRecord {
    pub iteration: usize,
    pub objective: f64,
    pub gap: f64,
}

#[derive(Debug, Clone)]
pub struct SdpSolution {
    pub x_opt: HermitianMatrix,
    /// `tr(C X)` at the returned primal point.
    pub objective: f64,
    /// Certified upper bound `Σ y` from the last dual-feasible point.
    pub dual_bound: f64,
    /// `dual_bound − objective`, non-negative.
    pub duality_gap_estimate: f64,
    pub iterations: usize,
    pub converged: bool,
    pub trace: Vec<IterationRecord>,
}

/// Solves the unit-diagonal SDP to `gap ≤ tol·(1 + |objective|)`.
///
/// Non-convergence within `max_iters` is reported through
/// [`SdpSolution::converged`], not as an error.
pub fn solve_unit_diag_sdp(c: &HermitianMatrix, tol: f64, max_iters: usize) -> Result<SdpSolution> {
    solve_unit_diag_sdp_with(
        c,
        &SdpOptions {
            tol,
            max_iters,
            record_trace: false,
        },
    )
}

pub fn solve_unit_diag_sdp_with(c: &HermitianMatrix, opts: &SdpOptions) -> Result<SdpSolution> {
    let n = c.order();
    if n == 0 {
        return Err(Error::InvalidArgument("empty cost matrix".into()));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {}",
            opts.tol
        )));
    }
    let scale = c.frobenius_norm();
    if !scale.is_finite() {
        return Err(Error::NonFinite {
            field: "cost matrix",
        });
    }
    if n == 1 || scale == 0.0 {
        // Feasible set is {I} (n = 1), or the objective is constant.
        let obj = if n == 1 { c.get(0, 0).re } else { 0.0 };
        return Ok(SdpSolution {
            x_opt: HermitianMatrix::identity(n),
            objective: obj,
            dual_bound: obj,
            duality_gap_estimate: 0.0,
            iterations: 0,
            converged: true,
            trace: Vec::new(),
        });
    }

    let cost = c.as_matrix().map(|z| z / scale);
    let mut x = CMatrix::identity(n, n);
    let mut y: Vec<f64> = (0..n)
        .map(|i| (0..n).map(|j| cost[(i, j)].norm()).sum::<f64>() + 1.0)
        .collect();

    let mut trace = Vec::new();
    let mut converged = false;
    let mut iterations = 0;
    // Last certified state.
    let mut best = (x.clone(), objective(&cost, &x), y.iter().sum::<f64>());

    loop {
        let z = dual_slack(&cost, &y);
        let Some(z_chol) = Cholesky::new(z.clone()) else {
            break;
        };
        let obj = objective(&cost, &x);
        let dual = y.iter().sum::<f64>();
        let gap = (dual - obj).max(0.0);
        best = (x.clone(), obj, dual);
        if opts.record_trace {
            trace.push(IterationRecord {
                iteration: iterations,
                objective: obj * scale,
                gap: gap * scale,
            });
        }
        // Tolerance in both the normalized and the caller's units.
        if gap <= opts.tol * (1.0 + obj.abs())
            && gap * scale <= opts.tol * (1.0 + (obj * scale).abs())
        {
            converged = true;
            break;
        }
        if iterations >= opts.max_iters {
            break;
        }
        let Some(x_chol) = Cholesky::new(x.clone()) else {
            break;
        };
        let z_inv = z_chol.inverse();
        // Schur complement Re(Z⁻¹ ∘ conj(X)).
        let schur = DMatrix::<f64>::from_fn(n, n, |i, j| (z_inv[(i, j)] * x[(i, j)].conj()).re);
        let Some(schur_chol) = Cholesky::new(schur) else {
            break;
        };
        let z_inv_diag: Vec<f64> = (0..n).map(|i| z_inv[(i, i)].re).collect();
        let x_lower = x_chol.l();
        let z_lower = z_chol.l();

        let direction = |mu: f64| -> (CMatrix, Vec<f64>) {
            let rhs = nalgebra::DVector::from_fn(n, |i, _| mu * z_inv_diag[i] - 1.0);
            let dy = schur_chol.solve(&rhs);
            let dy: Vec<f64> = dy.iter().copied().collect();
            // ΔX = μ Z⁻¹ − X − Z⁻¹ Diag(Δy) X
            let mut scaled_x = x.clone();
            for (i, d) in dy.iter().enumerate() {
                scaled_x.row_mut(i).scale_mut(*d);
            }
            let mut dx = z_inv.map(|v| v * mu) - &x - &z_inv * scaled_x;
            hermitize(&mut dx);
            (dx, dy)
        };

        let mu = gap / n as f64;
        let (dx_aff, dy_aff) = direction(0.0);
        let ap = max_step(&x_lower, &dx_aff);
        let ad = max_step(&z_lower, &diag_matrix(&dy_aff));
        let x_aff = &x + dx_aff.map(|v| v * ap);
        let z_aff = &z + diag_matrix(&dy_aff).map(|v| v * ad);
        let mu_aff = (x_aff * z_aff).trace().re / n as f64;
        let sigma = (mu_aff / mu).clamp(0.0, 1.0).powi(3);

        let (dx, dy) = direction(sigma * mu);
        let ap = max_step(&x_lower, &dx);
        let ad = max_step(&z_lower, &diag_matrix(&dy));
        x += dx.map(|v| v * ap);
        for i in 0..n {
            x[(i, i)] = Complex64::new(1.0, 0.0);
        }
        for (yi, d) in y.iter_mut().zip(&dy) {
            *yi += ad * d;
        }
        iterations += 1;
    }

    let (x, obj, dual) = best;
    Ok(SdpSolution {
        x_opt: HermitianMatrix::new(x)?,
        objective: obj * scale,
        dual_bound: dual * scale,
        duality_gap_estimate: ((dual - obj) * scale).max(0.0),
        iterations,
        converged,
        trace,
    })
}

fn objective(cost: &CMatrix, x: &CMatrix) -> f64 {
    cost.iter()
        .zip(x.iter())
        .map(|(a, b)| (a * b.conj()).re)
        .sum()
}

fn dual_slack(cost: &CMatrix, y: &[f64]) -> CMatrix {
    let mut z = -cost.clone();
    for (i, yi) in y.iter().enumerate() {
        z[(i, i)] += Complex64::new(*yi, 0.0);
    }
    hermitize(&mut z);
    z
}

fn diag_matrix(d: &[f64]) -> CMatrix {
    let n = d.len();
    CMatrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::new(d[i], 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

fn hermitize(m: &mut CMatrix) {
    let n = m.nrows();
    for i in 0..n {
        m[(i, i)].im = 0.0;
        for j in i + 1..n {
            let avg = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
            m[(i, j)] = avg;
            m[(j, i)] = avg.conj();
        }
    }
}

/// Largest `α ≤ 1` (damped) keeping `L L^H + α D` positive definite.
fn max_step(lower: &DMatrix<Complex64>, d: &CMatrix) -> f64 {
    let Some(a) = lower.solve_lower_triangular(d) else {
        return 0.0;
    };
    let Some(w) = lower.solve_lower_triangular(&a.adjoint()) else {
        return 0.0;
    };
    let mut w = w;
    hermitize(&mut w);
    let min = w
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    if min >= 0.0 {
        1.0
    } else {
        (STEP_FRACTION * (-1.0 / min)).min(1.0)
    }
}
