use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::channel::PhaseConfig;
use crate::error::{Error, Result};
use crate::link::SjnrReport;
use crate::optimizer::{random_phases, Instance};
use crate::scenario::Scenario;

/// SJNR at `θ = 0` and full transmit power.
pub fn baseline_identity(scenario: &Scenario<f64>) -> Result<SjnrReport<f64>> {
    let inst = Instance::from_scenario(scenario)?;
    inst.evaluate(&PhaseConfig::identity(inst.num_elements()), inst.p_tx_max)
}

/// Linear SJNR at `n_samples` i.i.d. uniform phase draws.
pub fn random_phase_sjnrs(
    scenario: &Scenario<f64>,
    n_samples: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    if n_samples == 0 {
        return Err(Error::NonPositive {
            field: "n_samples",
            value: 0.0,
        });
    }
    let inst = Instance::from_scenario(scenario)?;
    let k = inst.num_elements();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n_samples)
        .map(|_| {
            Ok(inst
                .evaluate(&random_phases(k, &mut rng), inst.p_tx_max)?
                .sjnr_linear)
        })
        .collect()
}

/// Mean linear SJNR over random phases.
///
/// The mean is over the ratio, not over the powers: `jam_w` and `noise_w`
/// are those of the identity configuration and `signal_w` is scaled so the
/// report stays self-consistent.
pub fn baseline_random_mean(
    scenario: &Scenario<f64>,
    n_samples: usize,
    seed: u64,
) -> Result<SjnrReport<f64>> {
    let samples = random_phase_sjnrs(scenario, n_samples, seed)?;
    let mean = samples.iter().sum::<f64>() / samples.len() as f64;
    let id = baseline_identity(scenario)?;
    Ok(SjnrReport::from_powers(
        mean * (id.jam_w + id.noise_w),
        id.jam_w,
        id.noise_w,
    ))
}
