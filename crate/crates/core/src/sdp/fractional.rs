//! Dinkelbach iteration for
//! `max (a·tr(N V)) / (b·tr(M V) + c)` over the unit-diagonal PSD set.

use super::hermitian::HermitianMatrix;
use super::unit_diag::{solve_unit_diag_sdp_with, IterationRecord, SdpOptions};
use crate::error::{Error, Result};

pub const DEFAULT_DINKELBACH_TOL: f64 = 1e-6;
pub const DEFAULT_DINKELBACH_MAX_ITERS: usize = 50;

/// PSD tolerance applied to the input matrices, relative to their norm.
const PSD_INPUT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FractionalOptions {
    pub tol: f64,
    pub max_iters: usize,
    pub sdp: SdpOptions,
}

impl Default for FractionalOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_DINKELBACH_TOL,
            max_iters: DEFAULT_DINKELBACH_MAX_ITERS,
            sdp: SdpOptions::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct FractionalSolution {
    pub v_opt: HermitianMatrix,
    /// Ratio attained at `v_opt`.
    pub ratio_opt: f64,
    /// Certified upper bound on the relaxed optimum.
    pub upper_bound: f64,
    /// Dinkelbach parameters, nondecreasing; the last entry is `ratio_opt`.
    pub lambda_trace: Vec<f64>,
    pub inner_solves: usize,
    /// Stopping rule met and every inner solve converged.
    pub converged: bool,
    /// Concatenated inner solver traces when requested.
    pub sdp_trace: Vec<IterationRecord>,
}

pub fn solve_fractional_sdp(
    num: &HermitianMatrix,
    den: &HermitianMatrix,
    num_scale: f64,
    den_scale: f64,
    den_offset: f64,
    tol: f64,
) -> Result<FractionalSolution> {
    solve_fractional_sdp_with(
        num,
        den,
        num_scale,
        den_scale,
        den_offset,
        &FractionalOptions {
            tol,
            ..FractionalOptions::default()
        },
    )
}

/// Each step solves `max tr((a N − λ b M) V)` and updates `λ` to the ratio
/// at the maximizer, stopping once `F − λG ≤ tol·G`.
///
/// Any `λ` with inner dual bound `U(λ) = max_V F − λG` certifies
/// `F/G ≤ λ + max(U, 0)/c`, since `G ≥ c` on the feasible set.
pub fn solve_fractional_sdp_with(
    num: &HermitianMatrix,
    den: &HermitianMatrix,
    num_scale: f64,
    den_scale: f64,
    den_offset: f64,
    opts: &FractionalOptions,
) -> Result<FractionalSolution> {
    let n = num.order();
    if den.order() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: den.order(),
        });
    }
    if !(den_offset > 0.0) {
        return Err(Error::NonPositive {
            field: "den_offset",
            value: den_offset,
        });
    }
    for (field, v) in [("num_scale", num_scale), ("den_scale", den_scale)] {
        if !(v >= 0.0) {
            return Err(Error::Negative { field, value: v });
        }
    }
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {}",
            opts.tol
        )));
    }
    num.check_psd(PSD_INPUT_TOL)?;
    den.check_psd(PSD_INPUT_TOL)?;

    let num_norm = num.frobenius_norm();
    let den_norm = den.frobenius_norm();
    let eval = |v: &HermitianMatrix| -> (f64, f64) {
        let tn = num.trace_product(v);
        let td = den.trace_product(v);
        debug_assert!(tn >= -1e-9 * num_norm * n as f64, "tr(N V) = {tn}");
        debug_assert!(td >= -1e-9 * den_norm * n as f64, "tr(M V) = {td}");
        (
            num_scale * tn.max(0.0),
            den_scale * td.max(0.0) + den_offset,
        )
    };

    let mut v = HermitianMatrix::identity(n);
    let (f, g) = eval(&v);
    let mut lambda = f / g;
    let mut lambda_trace = vec![lambda];
    let mut upper_bound = f64::INFINITY;
    let mut inner_solves = 0;
    let mut inner_ok = true;
    let mut stopped = false;
    let mut sdp_trace = Vec::new();

    while inner_solves < opts.max_iters {
        let cost = num.combine(num_scale, den, -lambda * den_scale)?;
        let sol = solve_unit_diag_sdp_with(&cost, &opts.sdp)?;
        inner_solves += 1;
        inner_ok &= sol.converged;
        sdp_trace.extend(sol.trace.iter().copied());

        let certified = lambda + (sol.dual_bound - lambda * den_offset).max(0.0) / den_offset;
        upper_bound = upper_bound.min(certified);

        let (f_new, g_new) = eval(&sol.x_opt);
        let q = f_new - lambda * g_new;
        let ratio = f_new / g_new;
        if ratio > lambda {
            v = sol.x_opt;
            lambda = ratio;
            lambda_trace.push(lambda);
        }
        // q > tol·G implies ratio > λ, so λ strictly increases until here.
        if q <= opts.tol * g_new {
            stopped = true;
            break;
        }
    }

    let (f, g) = eval(&v);
    let ratio_opt = f / g;
    Ok(FractionalSolution {
        v_opt: v,
        ratio_opt,
        upper_bound,
        lambda_trace,
        inner_solves,
        converged: stopped && inner_ok,
        sdp_trace,
    })
}
