#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use risjam::channel::{ChannelSet, ChannelVector};
use risjam::optimizer::Instance;
use risjam::scenario::{default_scenario, Position3D, Scenario};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn cn(rng: &mut ChaCha8Rng, scale: f64) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)) * scale
}

/// Channels of order one, where the reflected paths matter as much as the
/// direct ones.
pub fn synthetic_instance(rng: &mut ChaCha8Rng, k: usize) -> Instance {
    let vec = |rng: &mut ChaCha8Rng| ChannelVector {
        entries: (0..k).map(|_| cn(rng, 0.8)).collect(),
    };
    let h_tx_ris = vec(rng);
    let h_jam_ris = vec(rng);
    let h_ris_ue = vec(rng);
    Instance {
        channels: ChannelSet {
            h_tx_ue: cn(rng, 0.5),
            h_jam_ue: cn(rng, 0.5),
            h_tx_ris,
            h_jam_ris,
            h_ris_ue,
            degenerate_aoa: vec![],
        },
        p_tx_max: rng.random_range(0.5..2.0),
        p_jam: rng.random_range(0.5..2.0),
        noise_power: rng.random_range(0.05..0.5),
    }
}

/// Random but physically sensible geometry around the reference scenario.
pub fn random_scenario(rng: &mut ChaCha8Rng, k_rows: usize, k_cols: usize) -> Scenario {
    let mut s = default_scenario::<f64>();
    s.pos_ue = Position3D::new(
        rng.random_range(-20.0..20.0),
        rng.random_range(-20.0..20.0),
        0.0,
    );
    s.pos_ris = Position3D::new(
        rng.random_range(-50.0..50.0),
        rng.random_range(-50.0..50.0),
        rng.random_range(10.0..100.0),
    );
    s.pos_tx = Position3D::new(
        rng.random_range(-2e5..2e5),
        rng.random_range(-2e5..2e5),
        rng.random_range(3e5..1.2e6),
    );
    s.pos_jam = Position3D::new(
        rng.random_range(-1e6..1e6),
        rng.random_range(-1e6..1e6),
        35_786e3,
    );
    s.p_tx_max = 10f64.powf(rng.random_range(1.0..3.0));
    s.p_jam = 10f64.powf(rng.random_range(2.0..4.0));
    s.k_rows = k_rows;
    s.k_cols = k_cols;
    s
}

/// `p Γ / (P_J Δ + σ²)` written out from the channel coefficients.
pub fn sjnr_by_hand(inst: &Instance, thetas: &[f64], p_tx: f64) -> f64 {
    let ch = &inst.channels;
    let mut tx = ch.h_tx_ue;
    let mut jam = ch.h_jam_ue;
    for (k, &t) in thetas.iter().enumerate() {
        let r = ch.h_ris_ue.entries[k].conj() * Complex64::from_polar(1.0, t);
        tx += r * ch.h_tx_ris.entries[k];
        jam += r * ch.h_jam_ris.entries[k];
    }
    p_tx * tx.norm_sqr() / (inst.p_jam * jam.norm_sqr() + inst.noise_power)
}

pub fn db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// Best SJNR on a uniform grid over one phase.
pub fn grid_search_k1(inst: &Instance, step: f64) -> (f64, f64) {
    let steps = (std::f64::consts::TAU / step).ceil() as usize;
    (0..steps)
        .map(|i| {
            let t = i as f64 * step;
            (sjnr_by_hand(inst, &[t], inst.p_tx_max), t)
        })
        .fold(
            (f64::NEG_INFINITY, 0.0),
            |a, b| if b.0 > a.0 { b } else { a },
        )
}
