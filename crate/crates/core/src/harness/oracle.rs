use serde::Serialize;

use crate::channel::PhaseConfig;
use crate::error::{Error, Result};
use crate::link::SjnrReport;
use crate::optimizer::Instance;
use crate::scenario::Scenario;

/// Largest number of phase combinations the oracle will enumerate.
pub const ORACLE_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, Serialize)]
pub struct OracleResult {
    pub report: SjnrReport<f64>,
    pub phases: PhaseConfig<f64>,
    pub evaluations: u64,
}

/// Exact maximum of the SJNR over phases on the grid `{2πm / levels}`.
pub fn oracle_exhaustive(scenario: &Scenario<f64>, levels: usize) -> Result<OracleResult> {
    oracle_exhaustive_instance(&Instance::from_scenario(scenario)?, levels)
}

pub fn oracle_exhaustive_instance(inst: &Instance, levels: usize) -> Result<OracleResult> {
    if levels == 0 {
        return Err(Error::NonPositive {
            field: "levels",
            value: 0.0,
        });
    }
    let k = inst.num_elements();
    let required = (levels as f64).powi(k as i32);
    if required > ORACLE_BUDGET as f64 {
        return Err(Error::BudgetExceeded {
            required,
            budget: ORACLE_BUDGET,
        });
    }
    let step = std::f64::consts::TAU / levels as f64;
    let mut digits = vec![0usize; k];
    let mut best: Option<(SjnrReport<f64>, Vec<usize>)> = None;
    let mut evaluations = 0u64;
    loop {
        let phases = PhaseConfig::new(digits.iter().map(|&m| m as f64 * step));
        let report = inst.evaluate(&phases, inst.p_tx_max)?;
        evaluations += 1;
        if best
            .as_ref()
            .is_none_or(|(b, _)| report.sjnr_linear > b.sjnr_linear)
        {
            best = Some((report, digits.clone()));
        }
        // odometer increment
        let mut i = 0;
        while i < k {
            digits[i] += 1;
            if digits[i] < levels {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
        if i == k {
            break;
        }
    }
    let (report, digits) = best.expect("at least one evaluation");
    Ok(OracleResult {
        report,
        phases: PhaseConfig::new(digits.iter().map(|&m| m as f64 * step)),
        evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::baseline_identity;
    use crate::scenario::default_scenario;

    fn small(k_rows: usize, k_cols: usize) -> Scenario<f64> {
        let mut s = default_scenario::<f64>();
        s.k_rows = k_rows;
        s.k_cols = k_cols;
        s
    }

    #[test]
    fn single_level_is_identity() {
        let s = default_scenario::<f64>();
        let o = oracle_exhaustive(&s, 1).unwrap();
        assert_eq!(o.evaluations, 1);
        assert_eq!(o.report, baseline_identity(&s).unwrap());
    }

    #[test]
    fn counts_combinations() {
        let o = oracle_exhaustive(&small(1, 2), 8).unwrap();
        assert_eq!(o.evaluations, 64);
        let o = oracle_exhaustive(&small(1, 3), 5).unwrap();
        assert_eq!(o.evaluations, 125);
    }

    #[test]
    fn respects_budget() {
        assert!(matches!(
            oracle_exhaustive(&small(3, 3), 8),
            Err(Error::BudgetExceeded { .. })
        ));
        assert!(oracle_exhaustive(&small(1, 2), 1000).is_ok());
        assert!(oracle_exhaustive(&small(1, 1), 0).is_err());
    }
}
