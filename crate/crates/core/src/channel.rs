//! Line-of-sight channel synthesis: direct links, RIS steering vectors,
//! RIS link vectors and the reflected cascade.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::{wrap_phase, Real};
use crate::scenario::{aoa_angles, distance, AoaAngles, Position3D, Scenario};

/// Unit phasor `e^{-j 2π dist / λ}`.
///
/// The whole-cycle part of `dist / λ` is dropped before scaling so the phase
/// stays accurate at satellite ranges.
fn propagation_phasor<T: Real>(dist: T, wavelength: T) -> Complex<T> {
    let cycles = (dist / wavelength).fract();
    Complex::from_polar(T::one(), -T::TAU() * cycles)
}

/// Direct LoS gain `sqrt(ρ d^{-α_d}) e^{-j2πd/λ}` between two nodes.
pub fn direct_channel<T: Real>(
    scenario: &Scenario<T>,
    from: &Position3D<T>,
    to: &Position3D<T>,
) -> Result<Complex<T>> {
    let dist = distance(from, to);
    if !(dist > T::zero()) {
        return Err(Error::ZeroDistance);
    }
    let amplitude = (scenario.rho * dist.powf(-scenario.alpha_direct)).sqrt();
    Ok(propagation_phasor(dist, scenario.wavelength) * amplitude)
}

/// Unit-modulus array response of the `k_rows × k_cols` planar RIS.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SteeringVector<T = f64> {
    pub entries: Vec<Complex<T>>,
}

/// Row-major Kronecker product of the row response (driven by `a_x`) and
/// the column response (driven by `a_z`). Entry `m·k_cols + n` carries the
/// phase `-2π d (m a_x + n a_z) / λ`.
pub fn steering_vector<T: Real>(
    angles: &AoaAngles<T>,
    k_rows: usize,
    k_cols: usize,
    element_spacing: T,
    wavelength: T,
) -> SteeringVector<T> {
    let step = -T::TAU() * element_spacing / wavelength;
    let (a_x, a_z) = (angles.a_x(), angles.a_z());
    let rows: Vec<Complex<T>> = (0..k_rows)
        .map(|m| Complex::from_polar(T::one(), step * T::lit(m as f64) * a_x))
        .collect();
    let cols: Vec<Complex<T>> = (0..k_cols)
        .map(|n| Complex::from_polar(T::one(), step * T::lit(n as f64) * a_z))
        .collect();
    let entries = rows
        .iter()
        .flat_map(|r| cols.iter().map(move |c| r * c))
        .collect();
    SteeringVector { entries }
}

/// RIS-side channel vector: a steering vector scaled by the link's path
/// amplitude and bulk propagation phase.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelVector<T = f64> {
    pub entries: Vec<Complex<T>>,
}

impl<T: Real> ChannelVector<T> {
    pub fn zeros(len: usize) -> Self {
        Self {
            entries: vec![Complex::new(T::zero(), T::zero()); len],
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Channel between a node and the RIS, `sqrt(ρ d^{-α_r}) e^{-j2πd/λ} g`,
/// with `g` the steering vector for the AoA from `node`.
///
/// Used for both satellite→RIS links and, with the UE position, the
/// RIS→UE link.
pub fn ris_link_channel<T: Real>(
    scenario: &Scenario<T>,
    node: &Position3D<T>,
) -> Result<ChannelVector<T>> {
    Ok(ris_link_channel_with_angles(scenario, node)?.0)
}

fn ris_link_channel_with_angles<T: Real>(
    scenario: &Scenario<T>,
    node: &Position3D<T>,
) -> Result<(ChannelVector<T>, AoaAngles<T>)> {
    let dist = distance(node, &scenario.pos_ris);
    let angles = aoa_angles(node, &scenario.pos_ris)?;
    let amplitude = (scenario.rho * dist.powf(-scenario.alpha_ris)).sqrt();
    let bulk = propagation_phasor(dist, scenario.wavelength) * amplitude;
    let g = steering_vector(
        &angles,
        scenario.k_rows,
        scenario.k_cols,
        scenario.element_spacing,
        scenario.wavelength,
    );
    let entries = g.entries.into_iter().map(|e| e * bulk).collect();
    Ok((ChannelVector { entries }, angles))
}

/// RIS phase shifts `θ_k ∈ [0, 2π)`, defining `Θ = diag(e^{jθ_k})`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(
    from = "RawPhases<T>",
    bound(deserialize = "T: Real + Deserialize<'de>")
)]
pub struct PhaseConfig<T = f64> {
    thetas: Vec<T>,
}

impl<T: Real> PhaseConfig<T> {
    /// Wraps every angle into `[0, 2π)`.
    pub fn new(thetas: impl IntoIterator<Item = T>) -> Self {
        Self {
            thetas: thetas.into_iter().map(wrap_phase).collect(),
        }
    }

    /// All-zero phases, `Θ = I`.
    pub fn identity(k: usize) -> Self {
        Self {
            thetas: vec![T::zero(); k],
        }
    }

    /// Phases of the given reflection coefficients.
    pub fn from_phasors(phasors: &[Complex<T>]) -> Self {
        Self::new(phasors.iter().map(|p| p.arg()))
    }

    pub fn thetas(&self) -> &[T] {
        &self.thetas
    }

    pub fn len(&self) -> usize {
        self.thetas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.thetas.is_empty()
    }

    /// Diagonal of `Θ`.
    pub fn phasors(&self) -> Vec<Complex<T>> {
        self.thetas
            .iter()
            .map(|&t| Complex::from_polar(T::one(), t))
            .collect()
    }
}

#[derive(Deserialize)]
struct RawPhases<T> {
    thetas: Vec<T>,
}

impl<T: Real> From<RawPhases<T>> for PhaseConfig<T> {
    fn from(raw: RawPhases<T>) -> Self {
        Self::new(raw.thetas)
    }
}

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// Reflected gain `h_ris_ue^H Θ h_sat_ris = Σ_k conj(h_ris_ue[k]) e^{jθ_k} h_sat_ris[k]`.
pub fn cascade_channel<T: Real>(
    h_ris_ue: &ChannelVector<T>,
    phases: &PhaseConfig<T>,
    h_sat_ris: &ChannelVector<T>,
) -> Result<Complex<T>> {
    let k = h_ris_ue.len();
    check_len(k, phases.len())?;
    check_len(k, h_sat_ris.len())?;
    Ok(h_ris_ue
        .entries
        .iter()
        .zip(phases.thetas())
        .zip(&h_sat_ris.entries)
        .fold(Complex::new(T::zero(), T::zero()), |acc, ((u, &t), s)| {
            acc + u.conj() * Complex::from_polar(T::one(), t) * s
        }))
}

/// Every channel coefficient of a scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelSet<T = f64> {
    pub h_tx_ue: Complex<T>,
    pub h_jam_ue: Complex<T>,
    pub h_tx_ris: ChannelVector<T>,
    pub h_jam_ris: ChannelVector<T>,
    pub h_ris_ue: ChannelVector<T>,
    /// Links on which the vertical-incidence AoA convention was applied.
    #[serde(default)]
    pub degenerate_aoa: Vec<String>,
}

impl<T: Real> ChannelSet<T> {
    /// Number of RIS elements.
    pub fn num_elements(&self) -> usize {
        self.h_ris_ue.len()
    }

    pub fn check_dimensions(&self) -> Result<()> {
        let k = self.h_ris_ue.len();
        check_len(k, self.h_tx_ris.len())?;
        check_len(k, self.h_jam_ris.len())
    }

    /// Per-element reflected coefficients `conj(h_ris_ue[k]) h_sat_ris[k]`
    /// for the transmitter and the jammer.
    pub fn element_products(&self) -> (Vec<Complex<T>>, Vec<Complex<T>>) {
        let prod = |sat: &ChannelVector<T>| {
            self.h_ris_ue
                .entries
                .iter()
                .zip(&sat.entries)
                .map(|(u, s)| u.conj() * s)
                .collect()
        };
        (prod(&self.h_tx_ris), prod(&self.h_jam_ris))
    }
}

/// Synthesizes all direct and RIS channels for a scenario.
pub fn build_channel_set<T: Real>(scenario: &Scenario<T>) -> Result<ChannelSet<T>> {
    let h_tx_ue = direct_channel(scenario, &scenario.pos_tx, &scenario.pos_ue)?;
    let h_jam_ue = direct_channel(scenario, &scenario.pos_jam, &scenario.pos_ue)?;
    let k = scenario.num_elements();
    if !scenario.ris_enabled {
        return Ok(ChannelSet {
            h_tx_ue,
            h_jam_ue,
            h_tx_ris: ChannelVector::zeros(k),
            h_jam_ris: ChannelVector::zeros(k),
            h_ris_ue: ChannelVector::zeros(k),
            degenerate_aoa: Vec::new(),
        });
    }
    let mut degenerate_aoa = Vec::new();
    let mut link = |name: &str, node: &Position3D<T>| -> Result<ChannelVector<T>> {
        let (h, angles) = ris_link_channel_with_angles(scenario, node)?;
        if angles.degenerate {
            degenerate_aoa.push(name.to_owned());
        }
        Ok(h)
    };
    let h_tx_ris = link("tx_ris", &scenario.pos_tx)?;
    let h_jam_ris = link("jam_ris", &scenario.pos_jam)?;
    let h_ris_ue = link("ris_ue", &scenario.pos_ue)?;
    Ok(ChannelSet {
        h_tx_ue,
        h_jam_ue,
        h_tx_ris,
        h_jam_ris,
        h_ris_ue,
        degenerate_aoa,
    })
}
