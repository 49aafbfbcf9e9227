//! Joint transmit-power / RIS-phase optimization by alternating between a
//! closed-form power update and a semidefinite-relaxation phase update.
//!
//! The phase subproblem is lifted to `υ = [e^{jθ_1}, …, e^{jθ_K}, 1]`: for
//! each source `χ` (transmitter or jammer),
//! `g_χ^H U_χ υ = h_χ_ue + h_ris_ue^H Θ h_χ_ris`, with
//! `U_χ = diag([conj(h_ris_ue); h_χ_ue])` and `g_χ = [conj(h_χ_ris); 1]`.
//! Then `|g_χ^H U_χ υ|² = tr(D_χ V)` with `D_χ = U_χ^H g_χ g_χ^H U_χ` and
//! `V = υυ^H`, and dropping rank(V) = 1 leaves a fractional SDP.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{build_channel_set, ChannelSet, PhaseConfig};
use crate::error::{Error, Result};
use crate::link::{effective_gains, sjnr, EffectiveGains, SjnrReport};
use crate::num::linear_to_db;
use crate::scenario::Scenario;
use crate::sdp::{
    extract_rank_one, solve_fractional_sdp_with, FractionalOptions, FractionalSolution,
    HermitianMatrix, IterationRecord, SdpOptions, DEFAULT_DINKELBACH_MAX_ITERS,
    DEFAULT_DINKELBACH_TOL, DEFAULT_DRAWS, DEFAULT_SDP_MAX_ITERS, DEFAULT_SDP_TOL,
};

/// Relative SJNR change that ends the alternation.
pub const DEFAULT_EPSILON: f64 = 1e-3;
pub const DEFAULT_MAX_OUTER: usize = 20;

/// Channels plus the power budget: everything the optimizer needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub channels: ChannelSet<f64>,
    pub p_tx_max: f64,
    pub p_jam: f64,
    pub noise_power: f64,
}

impl Instance {
    pub fn from_scenario(scenario: &Scenario<f64>) -> Result<Self> {
        scenario.validate()?;
        Ok(Self {
            channels: build_channel_set(scenario)?,
            p_tx_max: scenario.p_tx_max,
            p_jam: scenario.p_jam,
            noise_power: scenario.noise_power,
        })
    }

    pub fn num_elements(&self) -> usize {
        self.channels.num_elements()
    }

    pub fn evaluate(&self, phases: &PhaseConfig<f64>, p_tx: f64) -> Result<SjnrReport<f64>> {
        let gains = effective_gains(&self.channels, phases)?;
        sjnr(&gains, p_tx, self.p_jam, self.noise_power)
    }
}

/// Lifted phase subproblem of order `K + 1`.
#[derive(Debug, Clone)]
pub struct LiftedProblem {
    pub d_tx: HermitianMatrix,
    pub d_jam: HermitianMatrix,
    /// `U_tx^H g_tx`, so that `D_tx = b_tx b_tx^H`.
    pub b_tx: Vec<Complex64>,
    pub b_jam: Vec<Complex64>,
    pub p_tx: f64,
    pub p_jam: f64,
    pub noise_power: f64,
}

impl LiftedProblem {
    pub fn order(&self) -> usize {
        self.b_tx.len()
    }

    pub fn num_elements(&self) -> usize {
        self.order() - 1
    }

    pub fn with_power(mut self, p_tx: f64) -> Self {
        self.p_tx = p_tx;
        self
    }

    /// SJNR at a lifted vector `υ`, identical to evaluating the channel model
    /// at `θ_k = arg(υ_k / υ_{K+1})` when `υ` is unit modulus.
    pub fn sjnr_of(&self, upsilon: &[Complex64]) -> f64 {
        let tx = inner(&self.b_tx, upsilon).norm_sqr();
        let jam = inner(&self.b_jam, upsilon).norm_sqr();
        self.p_tx * tx / (self.p_jam * jam + self.noise_power)
    }
}

/// `b^H υ`
fn inner(b: &[Complex64], upsilon: &[Complex64]) -> Complex64 {
    b.iter().zip(upsilon).map(|(b, u)| b.conj() * u).sum()
}

/// `υ = [e^{jθ_1}, …, e^{jθ_K}, 1]`.
pub fn upsilon(phases: &PhaseConfig<f64>) -> Vec<Complex64> {
    let mut v = phases.phasors();
    v.push(Complex64::new(1.0, 0.0));
    v
}

/// Reads `θ_k = arg(υ_k / υ_{K+1})` back out of a lifted vector.
pub fn phases_from_upsilon(upsilon: &[Complex64]) -> PhaseConfig<f64> {
    let k = upsilon.len() - 1;
    let slot = upsilon[k].arg();
    PhaseConfig::new(upsilon[..k].iter().map(|z| z.arg() - slot))
}

fn lift_source(
    h_ris_ue: &[Complex64],
    h_sat_ris: &[Complex64],
    h_direct: Complex64,
) -> Vec<Complex64> {
    let u_diag: Vec<Complex64> = h_ris_ue
        .iter()
        .map(|h| h.conj())
        .chain(std::iter::once(h_direct))
        .collect();
    let g: Vec<Complex64> = h_sat_ris
        .iter()
        .map(|h| h.conj())
        .chain(std::iter::once(Complex64::new(1.0, 0.0)))
        .collect();
    // U^H g
    u_diag.iter().zip(&g).map(|(u, g)| u.conj() * g).collect()
}

/// Builds the lifted problem at the scenario's maximum transmit power.
pub fn lift(channels: &ChannelSet<f64>, scenario: &Scenario<f64>) -> Result<LiftedProblem> {
    lift_parts(
        channels,
        scenario.p_tx_max,
        scenario.p_jam,
        scenario.noise_power,
    )
}

pub fn lift_instance(instance: &Instance) -> Result<LiftedProblem> {
    lift_parts(
        &instance.channels,
        instance.p_tx_max,
        instance.p_jam,
        instance.noise_power,
    )
}

fn lift_parts(
    channels: &ChannelSet<f64>,
    p_tx: f64,
    p_jam: f64,
    noise_power: f64,
) -> Result<LiftedProblem> {
    channels.check_dimensions()?;
    let ue = &channels.h_ris_ue.entries;
    let b_tx = lift_source(ue, &channels.h_tx_ris.entries, channels.h_tx_ue);
    let b_jam = lift_source(ue, &channels.h_jam_ris.entries, channels.h_jam_ue);
    Ok(LiftedProblem {
        d_tx: HermitianMatrix::from_outer(&b_tx),
        d_jam: HermitianMatrix::from_outer(&b_jam),
        b_tx,
        b_jam,
        p_tx,
        p_jam,
        noise_power,
    })
}

/// Power update for fixed phases. The objective `p Γ / (P_J Δ + σ²)` is
/// nondecreasing in `p`, so the budget is always spent in full.
pub fn optimize_power(_gains: &EffectiveGains<f64>, p_max: f64) -> f64 {
    p_max
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverSettings {
    /// Relative SJNR change below which the alternation stops.
    pub epsilon: f64,
    pub max_outer: usize,
    pub seed: u64,
    /// Extra runs from seeded random initial phases.
    pub restarts: usize,
    /// Gaussian randomization draws per phase update.
    pub n_draws: usize,
    pub sdp_tol: f64,
    pub sdp_max_iters: usize,
    pub dinkelbach_tol: f64,
    pub dinkelbach_max_iters: usize,
    #[serde(skip)]
    pub record_sdp_trace: bool,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            epsilon: DEFAULT_EPSILON,
            max_outer: DEFAULT_MAX_OUTER,
            seed: 0,
            restarts: 0,
            n_draws: DEFAULT_DRAWS,
            sdp_tol: DEFAULT_SDP_TOL,
            sdp_max_iters: DEFAULT_SDP_MAX_ITERS,
            dinkelbach_tol: DEFAULT_DINKELBACH_TOL,
            dinkelbach_max_iters: DEFAULT_DINKELBACH_MAX_ITERS,
            record_sdp_trace: false,
        }
    }
}

impl SolverSettings {
    fn fractional_options(&self) -> FractionalOptions {
        FractionalOptions {
            tol: self.dinkelbach_tol,
            max_iters: self.dinkelbach_max_iters,
            sdp: SdpOptions {
                tol: self.sdp_tol,
                max_iters: self.sdp_max_iters,
                record_trace: self.record_sdp_trace,
            },
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0) {
            return Err(Error::NonPositive {
                field: "epsilon",
                value: self.epsilon,
            });
        }
        if self.max_outer == 0 {
            return Err(Error::NonPositive {
                field: "max_outer",
                value: 0.0,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct PhaseSolution {
    pub phases: PhaseConfig<f64>,
    /// Exact SJNR of `phases`.
    pub sjnr_linear: f64,
    /// Certified upper bound on the relaxed optimum.
    pub sdp_bound: f64,
    /// Ratio attained by the relaxed solution.
    pub relaxed_ratio: f64,
    pub solver_converged: bool,
    pub inner_solves: usize,
    pub sdp_trace: Vec<IterationRecord>,
}

fn relax(lifted: &LiftedProblem, settings: &SolverSettings) -> Result<FractionalSolution> {
    solve_fractional_sdp_with(
        &lifted.d_tx,
        &lifted.d_jam,
        lifted.p_tx,
        lifted.p_jam,
        lifted.noise_power,
        &settings.fractional_options(),
    )
}

fn round(
    lifted: &LiftedProblem,
    relaxed: &FractionalSolution,
    n_draws: usize,
    seed: u64,
) -> PhaseSolution {
    let (best, score) = extract_rank_one(&relaxed.v_opt, n_draws, seed, |u| lifted.sjnr_of(u));
    PhaseSolution {
        phases: phases_from_upsilon(&best),
        sjnr_linear: score,
        sdp_bound: relaxed.upper_bound,
        relaxed_ratio: relaxed.ratio_opt,
        solver_converged: relaxed.converged,
        inner_solves: relaxed.inner_solves,
        sdp_trace: relaxed.sdp_trace.clone(),
    }
}

/// Phase update for fixed power: solve the relaxed fractional SDP, then
/// extract unit-modulus phases scored by the exact SJNR.
pub fn optimize_phases(
    lifted: &LiftedProblem,
    settings: &SolverSettings,
    seed: u64,
) -> Result<PhaseSolution> {
    let relaxed = relax(lifted, settings)?;
    Ok(round(lifted, &relaxed, settings.n_draws, seed))
}

/// SplitMix64 finalizer over `(seed, stream, index)`.
pub fn derive_seed(seed: u64, stream: u64, index: u64) -> u64 {
    let mut z = seed
        .wrapping_add(stream.wrapping_mul(0xD1B5_4A32_D192_ED03))
        .wrapping_add(index.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

const STREAM_INIT: u64 = 1;
const STREAM_ROUNDING: u64 = 2;

/// Uniform i.i.d. phases in `[0, 2π)`.
pub fn random_phases<R: Rng>(k: usize, rng: &mut R) -> PhaseConfig<f64> {
    PhaseConfig::new((0..k).map(|_| rng.random_range(0.0..std::f64::consts::TAU)))
}

#[derive(Debug, Clone, Serialize)]
pub struct OptResult {
    pub phases: PhaseConfig<f64>,
    pub p_tx: f64,
    /// SJNR at the initial point followed by one entry per outer iteration.
    pub sjnr_trace: Vec<SjnrReport<f64>>,
    pub sjnr: SjnrReport<f64>,
    /// Certified upper bound on the relaxed optimum at the final power.
    pub sdp_bound: f64,
    pub sdp_bound_db: f64,
    pub outer_iterations: usize,
    /// Stopping rule met within `max_outer`.
    pub converged: bool,
    /// Every relaxed solve met its tolerances.
    pub solver_converged: bool,
    pub seed: u64,
    /// Index of the winning run (0 starts from identity phases).
    pub best_run: usize,
    pub settings: SolverSettings,
    pub degenerate_aoa: Vec<String>,
    #[serde(skip)]
    pub sdp_trace: Vec<IterationRecord>,
}

/// Alternating optimization for a scenario.
pub fn alternate(scenario: &Scenario<f64>, settings: &SolverSettings) -> Result<OptResult> {
    alternate_instance(&Instance::from_scenario(scenario)?, settings)
}

/// Runs the alternation from identity phases and, when
/// `settings.restarts > 0`, from seeded random phases; returns the best.
pub fn alternate_instance(instance: &Instance, settings: &SolverSettings) -> Result<OptResult> {
    settings.validate()?;
    let runs: Vec<Result<OptResult>> = (0..=settings.restarts)
        .into_par_iter()
        .map(|run| run_alternation(instance, settings, run))
        .collect();
    let mut best: Option<OptResult> = None;
    for r in runs {
        let r = r?;
        if best
            .as_ref()
            .is_none_or(|b| r.sjnr.sjnr_linear > b.sjnr.sjnr_linear)
        {
            best = Some(r);
        }
    }
    Ok(best.expect("at least one run"))
}

fn run_alternation(
    instance: &Instance,
    settings: &SolverSettings,
    run: usize,
) -> Result<OptResult> {
    let k = instance.num_elements();
    let mut phases = if run == 0 {
        PhaseConfig::identity(k)
    } else {
        let mut rng =
            ChaCha8Rng::seed_from_u64(derive_seed(settings.seed, STREAM_INIT, run as u64));
        random_phases(k, &mut rng)
    };
    let mut p_tx = instance.p_tx_max;
    let mut trace = vec![instance.evaluate(&phases, p_tx)?];
    let base = lift_instance(instance)?;
    // The relaxation depends on the phases only through the power.
    let mut cached: Option<(f64, FractionalSolution)> = None;
    let mut converged = false;
    let mut solver_converged = true;
    let mut sdp_bound = f64::NAN;
    let mut sdp_trace = Vec::new();

    for outer in 1..=settings.max_outer {
        let gains = effective_gains(&instance.channels, &phases)?;
        p_tx = optimize_power(&gains, instance.p_tx_max);
        let lifted = base.clone().with_power(p_tx);
        let relaxed = match cached.take() {
            Some((p, sol)) if p == p_tx => sol,
            _ => {
                let sol = relax(&lifted, settings)?;
                sdp_trace.extend(sol.sdp_trace.iter().copied());
                sol
            }
        };
        let seed = derive_seed(
            settings.seed,
            STREAM_ROUNDING,
            (run as u64) << 32 | outer as u64,
        );
        let candidate = round(&lifted, &relaxed, settings.n_draws, seed);
        solver_converged &= candidate.solver_converged;
        sdp_bound = candidate.sdp_bound;
        cached = Some((p_tx, relaxed));

        let current = instance.evaluate(&phases, p_tx)?;
        let proposed = instance.evaluate(&candidate.phases, p_tx)?;
        let report = if proposed.sjnr_linear >= current.sjnr_linear {
            phases = candidate.phases;
            proposed
        } else {
            current
        };
        let previous = trace.last().expect("trace starts non-empty").sjnr_linear;
        trace.push(report);
        let change = (report.sjnr_linear - previous).abs();
        if change < settings.epsilon * previous || (previous == 0.0 && change == 0.0) {
            converged = true;
            break;
        }
    }

    let sjnr = *trace.last().expect("non-empty");
    Ok(OptResult {
        phases,
        p_tx,
        outer_iterations: trace.len() - 1,
        sjnr,
        sjnr_trace: trace,
        sdp_bound,
        sdp_bound_db: linear_to_db(sdp_bound),
        converged,
        solver_converged,
        seed: settings.seed,
        best_run: run,
        settings: *settings,
        degenerate_aoa: instance.channels.degenerate_aoa.clone(),
        sdp_trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{cascade_channel, ChannelVector};
    use crate::scenario::default_scenario;
    use rand::Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_instance(seed: u64, k: usize, p_jam: f64) -> Instance {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cv = |rng: &mut ChaCha8Rng, scale: f64| ChannelVector {
            entries: (0..k)
                .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)) * scale)
                .collect(),
        };
        let h_tx_ris = cv(&mut rng, 0.7);
        let h_jam_ris = cv(&mut rng, 0.7);
        let h_ris_ue = cv(&mut rng, 0.7);
        Instance {
            channels: ChannelSet {
                h_tx_ue: c(rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5)),
                h_jam_ue: c(rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5)),
                h_tx_ris,
                h_jam_ris,
                h_ris_ue,
                degenerate_aoa: vec![],
            },
            p_tx_max: 1.0,
            p_jam,
            noise_power: 0.1,
        }
    }

    #[test]
    fn lifting_reproduces_channel_sum() {
        let s = default_scenario::<f64>();
        let cs = build_channel_set(&s).unwrap();
        let lifted = lift(&cs, &s).unwrap();
        let id = PhaseConfig::identity(9);
        let u = upsilon(&id);
        for (b, direct, sat) in [
            (&lifted.b_tx, cs.h_tx_ue, &cs.h_tx_ris),
            (&lifted.b_jam, cs.h_jam_ue, &cs.h_jam_ris),
        ] {
            let via_lift = inner(b, &u);
            let via_channel = direct + cascade_channel(&cs.h_ris_ue, &id, sat).unwrap();
            assert!((via_lift - via_channel).norm() <= 1e-12 * via_channel.norm());
        }
    }

    #[test]
    fn lifting_at_random_phases() {
        let inst = random_instance(3, 5, 1.0);
        let lifted = lift_instance(&inst).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let phases = random_phases(5, &mut rng);
        let u = upsilon(&phases);
        let report = inst.evaluate(&phases, 1.0).unwrap();
        assert!((lifted.sjnr_of(&u) - report.sjnr_linear).abs() <= 1e-12 * report.sjnr_linear);
        let v = HermitianMatrix::from_outer(&u);
        assert!((lifted.d_tx.trace_product(&v) - inner(&lifted.b_tx, &u).norm_sqr()).abs() < 1e-12);
    }

    #[test]
    fn single_element_phasor_addition() {
        let one = ChannelVector {
            entries: vec![c(1.0, 0.0)],
        };
        let cs = ChannelSet {
            h_tx_ue: c(1.0, 0.0),
            h_jam_ue: c(0.0, 0.0),
            h_tx_ris: one.clone(),
            h_jam_ris: ChannelVector::zeros(1),
            h_ris_ue: one,
            degenerate_aoa: vec![],
        };
        let inst = Instance {
            channels: cs,
            p_tx_max: 1.0,
            p_jam: 0.0,
            noise_power: 1.0,
        };
        let lifted = lift_instance(&inst).unwrap();
        for theta in [0.0, 1.0, 2.5, 4.0] {
            let u = upsilon(&PhaseConfig::new([theta]));
            let v = HermitianMatrix::from_outer(&u);
            let expected = (c(1.0, 0.0) + Complex64::from_polar(1.0, theta)).norm_sqr();
            assert!((lifted.d_tx.trace_product(&v) - expected).abs() < 1e-12);
        }
        let sol = optimize_phases(&lifted, &SolverSettings::default(), 0).unwrap();
        assert!((sol.sjnr_linear - 4.0).abs() < 1e-6);
        let t = sol.phases.thetas()[0];
        assert!(t.min(std::f64::consts::TAU - t) < 1e-3);
    }

    #[test]
    fn lifted_matrices_are_gram() {
        let inst = random_instance(9, 4, 1.0);
        let lifted = lift_instance(&inst).unwrap();
        assert_eq!(lifted.order(), 5);
        let norm: f64 = lifted.b_tx.iter().map(|z| z.norm_sqr()).sum();
        assert!((lifted.d_tx.trace() - norm).abs() < 1e-12);
        assert!(lifted.d_jam.trace() >= 0.0);
    }

    #[test]
    fn power_is_always_budget() {
        let g = EffectiveGains {
            gamma_tx: 0.0,
            delta_jam: 3.0,
        };
        assert_eq!(optimize_power(&g, 100.0), 100.0);
        assert_eq!(optimize_power(&g, 1.0), 1.0);
    }

    #[test]
    fn no_jammer_reaches_coherent_bound() {
        let inst = random_instance(21, 6, 0.0);
        let lifted = lift_instance(&inst).unwrap();
        let sol = optimize_phases(&lifted, &SolverSettings::default(), 3).unwrap();
        let (tx, _) = inst.channels.element_products();
        let amp = inst.channels.h_tx_ue.norm() + tx.iter().map(|z| z.norm()).sum::<f64>();
        let bound = amp * amp / inst.noise_power;
        assert!((sol.sjnr_linear - bound).abs() <= 1e-6 * bound);
    }

    #[test]
    fn single_element_matches_grid() {
        for seed in 0..5 {
            let inst = random_instance(100 + seed, 1, 2.0);
            let lifted = lift_instance(&inst).unwrap();
            let sol = optimize_phases(&lifted, &SolverSettings::default(), seed).unwrap();
            let steps = 62_832;
            let best = (0..steps)
                .map(|i| {
                    let t = std::f64::consts::TAU * i as f64 / steps as f64;
                    inst.evaluate(&PhaseConfig::new([t]), 1.0)
                        .unwrap()
                        .sjnr_linear
                })
                .fold(f64::NEG_INFINITY, f64::max);
            assert!(
                sol.sjnr_linear >= best * (1.0 - 1e-6),
                "{} < {}",
                sol.sjnr_linear,
                best
            );
            assert!(sol.sjnr_linear <= sol.sdp_bound * (1.0 + 1e-6));
        }
    }

    #[test]
    fn alternation_is_monotone_and_deterministic() {
        let inst = random_instance(77, 5, 1.5);
        let settings = SolverSettings {
            seed: 11,
            restarts: 2,
            ..SolverSettings::default()
        };
        let a = alternate_instance(&inst, &settings).unwrap();
        assert!(a
            .sjnr_trace
            .windows(2)
            .all(|w| w[1].sjnr_linear >= w[0].sjnr_linear * (1.0 - 1e-9)));
        assert!(a.converged);
        assert_eq!(a.outer_iterations, a.sjnr_trace.len() - 1);
        assert!(a.sjnr.sjnr_linear <= a.sdp_bound * (1.0 + 1e-6));
        let b = alternate_instance(&inst, &settings).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn disabled_ris_converges_immediately() {
        let mut s = default_scenario::<f64>();
        s.ris_enabled = false;
        let r = alternate(&s, &SolverSettings::default()).unwrap();
        assert_eq!(r.outer_iterations, 1);
        assert!(r.converged);
        assert!((r.sjnr.sjnr_linear - 0.2523).abs() < 1e-3);
    }

    #[test]
    fn upsilon_round_trip_pins_slot() {
        let phases = PhaseConfig::new([0.5, 1.5, 6.0]);
        let mut u = upsilon(&phases);
        assert_eq!(u[3], c(1.0, 0.0));
        let rot = Complex64::from_polar(1.0, 0.7);
        u.iter_mut().for_each(|z| *z *= rot);
        let back = phases_from_upsilon(&u);
        for (a, b) in back.thetas().iter().zip(phases.thetas()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn settings_reject_zero_epsilon() {
        let inst = random_instance(1, 2, 1.0);
        let settings = SolverSettings {
            epsilon: 0.0,
            ..SolverSettings::default()
        };
        assert!(alternate_instance(&inst, &settings).is_err());
    }
}
