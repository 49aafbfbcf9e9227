use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optimizer::{alternate, derive_seed, SolverSettings};
use crate::scenario::Scenario;

use super::baselines::{baseline_identity, baseline_random_mean};

pub const DEFAULT_RANDOM_SAMPLES: usize = 100;
pub const CSV_HEADER: [&str; 7] = [
    "variable",
    "K",
    "method",
    "sjnr_db",
    "sdp_bound_db",
    "runtime_ms",
    "seed",
];

const STREAM_SWEEP: u64 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    /// LEO altitude above the user, m.
    LeoDistance,
    /// RIS altitude above the user, m.
    RisDistance,
    /// Total element count of a square RIS.
    NumElements,
}

impl SweepVariable {
    pub fn name(self) -> &'static str {
        match self {
            Self::LeoDistance => "leo_distance",
            Self::RisDistance => "ris_distance",
            Self::NumElements => "num_elements",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Optimized,
    Identity,
    RandomMean,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Optimized, Method::Identity, Method::RandomMean];

    pub fn name(self) -> &'static str {
        match self {
            Self::Optimized => "optimized",
            Self::Identity => "identity",
            Self::RandomMean => "random_mean",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    Fig2,
    Fig3,
    Fig4,
}

impl FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig2" => Ok(Self::Fig2),
            "fig3" => Ok(Self::Fig3),
            "fig4" => Ok(Self::Fig4),
            other => Err(Error::InvalidArgument(format!("unknown figure `{other}`"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    /// Strictly increasing values of the swept variable. For
    /// [`SweepVariable::NumElements`] each value must be a perfect square.
    pub grid: Vec<f64>,
    /// RIS shapes `(rows, cols)`; ignored when sweeping the element count.
    pub ris_sizes: Vec<(usize, usize)>,
    pub base: Scenario<f64>,
    pub seed: u64,
    pub settings: SolverSettings,
    pub random_samples: usize,
    /// Record wall-clock time per row; otherwise `runtime_ms` is 0 so the
    /// output is reproducible.
    pub timing: bool,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.grid.is_empty() {
            return Err(Error::InvalidArgument("sweep grid is empty".into()));
        }
        if self.grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidArgument(
                "sweep grid must be strictly increasing".into(),
            ));
        }
        if self.variable != SweepVariable::NumElements && self.ris_sizes.is_empty() {
            return Err(Error::InvalidArgument("no RIS sizes given".into()));
        }
        if self.variable == SweepVariable::NumElements {
            for &g in &self.grid {
                square_side(g)?;
            }
        }
        Ok(())
    }

    /// Scenarios in emission order.
    fn points(&self) -> Result<Vec<(f64, Scenario<f64>)>> {
        let mut out = Vec::new();
        for &g in &self.grid {
            match self.variable {
                SweepVariable::NumElements => {
                    let side = square_side(g)?;
                    let mut s = self.base.clone();
                    s.k_rows = side;
                    s.k_cols = side;
                    out.push((g, s));
                }
                var => {
                    for &(rows, cols) in &self.ris_sizes {
                        let mut s = self.base.clone();
                        s.k_rows = rows;
                        s.k_cols = cols;
                        if var == SweepVariable::LeoDistance {
                            s.pos_tx.z = g;
                        } else {
                            s.pos_ris.z = g;
                        }
                        out.push((g, s));
                    }
                }
            }
        }
        Ok(out)
    }
}

fn square_side(k: f64) -> Result<usize> {
    let side = k.sqrt().round() as usize;
    if side == 0 || (side * side) as f64 != k {
        return Err(Error::InvalidArgument(format!(
            "{k} is not a positive perfect square"
        )));
    }
    Ok(side)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub variable: SweepVariable,
    pub value: f64,
    #[serde(rename = "K")]
    pub k: usize,
    pub method: Method,
    pub sjnr_db: f64,
    /// Relaxation bound, optimized rows only.
    pub sdp_bound_db: Option<f64>,
    pub runtime_ms: u64,
    pub seed: u64,
    /// False when an optimized row hit an iteration limit.
    pub converged: bool,
}

/// Grids and RIS sizes of the three reference figures, in SI units.
pub fn figure_spec(figure: Figure, base: Scenario<f64>, seed: u64) -> SweepSpec {
    let sizes = vec![(3, 3), (5, 5), (10, 10)];
    let (variable, grid, ris_sizes) = match figure {
        Figure::Fig2 => (
            SweepVariable::LeoDistance,
            (3..=12).map(|i| i as f64 * 100e3).collect(),
            sizes,
        ),
        Figure::Fig3 => (
            SweepVariable::RisDistance,
            (1..=10).map(|i| i as f64 * 10.0).collect(),
            sizes,
        ),
        Figure::Fig4 => (
            SweepVariable::NumElements,
            (2..=10).map(|s| (s * s) as f64).collect(),
            vec![],
        ),
    };
    SweepSpec {
        variable,
        grid,
        ris_sizes,
        base,
        seed,
        settings: SolverSettings {
            seed,
            ..SolverSettings::default()
        },
        random_samples: DEFAULT_RANDOM_SAMPLES,
        timing: false,
    }
}

fn run_point(
    spec: &SweepSpec,
    index: usize,
    value: f64,
    scenario: &Scenario<f64>,
) -> Result<Vec<SweepRow>> {
    let seed = derive_seed(spec.seed, STREAM_SWEEP, index as u64);
    let k = scenario.num_elements();
    Method::ALL
        .iter()
        .map(|&method| {
            let start = Instant::now();
            let (sjnr_db, sdp_bound_db, converged) = match method {
                Method::Optimized => {
                    let settings = SolverSettings {
                        seed,
                        ..spec.settings
                    };
                    let r = alternate(scenario, &settings)?;
                    (
                        r.sjnr.sjnr_db,
                        Some(r.sdp_bound_db),
                        r.converged && r.solver_converged,
                    )
                }
                Method::Identity => (baseline_identity(scenario)?.sjnr_db, None, true),
                Method::RandomMean => (
                    baseline_random_mean(scenario, spec.random_samples, seed)?.sjnr_db,
                    None,
                    true,
                ),
            };
            let runtime_ms = if spec.timing {
                start.elapsed().as_millis() as u64
            } else {
                0
            };
            Ok(SweepRow {
                variable: spec.variable,
                value,
                k,
                method,
                sjnr_db,
                sdp_bound_db,
                runtime_ms,
                seed,
                converged,
            })
        })
        .collect()
}

/// Runs every (grid value, RIS size) point in parallel and returns rows in
/// grid-major, size-minor, method order.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let points = spec.points()?;
    let rows: Vec<Result<Vec<SweepRow>>> = points
        .par_iter()
        .enumerate()
        .map(|(i, (value, scenario))| run_point(spec, i, *value, scenario))
        .collect();
    let mut out = Vec::with_capacity(points.len() * Method::ALL.len());
    for r in rows {
        out.extend(r?);
    }
    Ok(out)
}

/// Writes rows as CSV with dB values to four decimals.
pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io(e.into());
    w.write_record(CSV_HEADER).map_err(io)?;
    for r in rows {
        w.write_record([
            format!("{}", r.value),
            r.k.to_string(),
            r.method.to_string(),
            format!("{:.4}", r.sjnr_db),
            r.sdp_bound_db
                .map(|b| format!("{b:.4}"))
                .unwrap_or_default(),
            r.runtime_ms.to_string(),
            r.seed.to_string(),
        ])
        .map_err(io)?;
    }
    w.flush()?;
    Ok(())
}
