//! Simulation and optimization of a RIS-assisted LEO downlink under GEO
//! jamming.
//!
//! The physical layers ([`scenario`], [`channel`], [`link`]) are generic over
//! the floating point type; the aliases below fix them to `f64`, which is
//! what the optimizer and the harness use.

// `!(x > 0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod error;
pub mod harness;
pub mod link;
pub mod num;
pub mod optimizer;
pub mod scenario;
pub mod sdp;

pub use error::{Error, Result};
pub use num::Real;

pub type Position3D = scenario::Position3D<f64>;
pub type Scenario = scenario::Scenario<f64>;
pub type AoaAngles = scenario::AoaAngles<f64>;
pub type ChannelSet = channel::ChannelSet<f64>;
pub type ChannelVector = channel::ChannelVector<f64>;
pub type SteeringVector = channel::SteeringVector<f64>;
pub type PhaseConfig = channel::PhaseConfig<f64>;
pub type ComplexGain = num_complex::Complex64;
pub type EffectiveGains = link::EffectiveGains<f64>;
pub type SjnrReport = link::SjnrReport<f64>;

pub type Scenario32 = scenario::Scenario<f32>;
pub type ChannelSet32 = channel::ChannelSet<f32>;
pub type SjnrReport32 = link::SjnrReport<f32>;
