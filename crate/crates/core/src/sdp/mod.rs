//! Semidefinite machinery for the relaxed phase problem: a unit-diagonal
//! SDP solver, Dinkelbach iteration for the fractional objective, and
//! randomized rank-one extraction.

mod fractional;
mod hermitian;
mod rounding;
mod unit_diag;

pub use fractional::{
    solve_fractional_sdp, solve_fractional_sdp_with, FractionalOptions, FractionalSolution,
    DEFAULT_DINKELBACH_MAX_ITERS, DEFAULT_DINKELBACH_TOL,
};
pub use hermitian::{CMatrix, HermitianMatrix};
pub use rounding::{extract_rank_one, DEFAULT_DRAWS};
pub use unit_diag::{
    solve_unit_diag_sdp, solve_unit_diag_sdp_with, IterationRecord, SdpOptions, SdpSolution,
    DEFAULT_SDP_MAX_ITERS, DEFAULT_SDP_TOL,
};
