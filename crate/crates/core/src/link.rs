//! Effective channel gains and the signal-to-jamming-plus-noise ratio.

use serde::{Deserialize, Serialize};

use crate::channel::{cascade_channel, ChannelSet, PhaseConfig};
use crate::error::{Error, Result};
use crate::num::{linear_to_db, Real};

/// Total (direct + reflected) power gains seen by the user.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectiveGains<T = f64> {
    /// `|h_tx_ue + h_tx_ris_ue|²`
    pub gamma_tx: T,
    /// `|h_jam_ue + h_jam_ris_ue|²`
    pub delta_jam: T,
}

/// Received power breakdown and SJNR.
///
/// Symbols are unit power, so only the transmit powers and σ² enter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SjnrReport<T = f64> {
    pub sjnr_linear: T,
    pub sjnr_db: T,
    pub signal_w: T,
    pub jam_w: T,
    pub noise_w: T,
}

impl<T: Real> SjnrReport<T> {
    /// Builds a report from powers; `noise_w` must be positive.
    pub fn from_powers(signal_w: T, jam_w: T, noise_w: T) -> Self {
        let sjnr_linear = signal_w / (jam_w + noise_w);
        Self {
            sjnr_linear,
            sjnr_db: linear_to_db(sjnr_linear),
            signal_w,
            jam_w,
            noise_w,
        }
    }
}

pub fn effective_gains<T: Real>(
    channels: &ChannelSet<T>,
    phases: &PhaseConfig<T>,
) -> Result<EffectiveGains<T>> {
    channels.check_dimensions()?;
    let tx = cascade_channel(&channels.h_ris_ue, phases, &channels.h_tx_ris)?;
    let jam = cascade_channel(&channels.h_ris_ue, phases, &channels.h_jam_ris)?;
    Ok(EffectiveGains {
        gamma_tx: (channels.h_tx_ue + tx).norm_sqr(),
        delta_jam: (channels.h_jam_ue + jam).norm_sqr(),
    })
}

/// `γ = p_tx Γ / (p_jam Δ + σ²)`.
pub fn sjnr<T: Real>(
    gains: &EffectiveGains<T>,
    p_tx: T,
    p_jam: T,
    noise_power: T,
) -> Result<SjnrReport<T>> {
    if !(noise_power > T::zero()) {
        return Err(Error::NonPositive {
            field: "noise_power",
            value: noise_power.to_f64().unwrap_or(f64::NAN),
        });
    }
    if !(p_tx >= T::zero()) {
        return Err(Error::Negative {
            field: "p_tx",
            value: p_tx.to_f64().unwrap_or(f64::NAN),
        });
    }
    if !(p_jam >= T::zero()) {
        return Err(Error::Negative {
            field: "p_jam",
            value: p_jam.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(SjnrReport::from_powers(
        p_tx * gains.gamma_tx,
        p_jam * gains.delta_jam,
        noise_power,
    ))
}
