//! Baselines, a brute-force phase oracle and the figure sweeps.

mod baselines;
mod oracle;
mod sweep;

pub use baselines::{baseline_identity, baseline_random_mean, random_phase_sjnrs};
pub use oracle::{oracle_exhaustive, oracle_exhaustive_instance, OracleResult, ORACLE_BUDGET};
pub use sweep::{
    figure_spec, run_sweep, write_csv, Figure, Method, SweepRow, SweepSpec, SweepVariable,
    CSV_HEADER, DEFAULT_RANDOM_SAMPLES,
};
