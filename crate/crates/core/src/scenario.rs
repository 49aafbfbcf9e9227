//! Physical scenario: node positions, powers, RIS geometry and the
//! geometric quantities derived from them.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::{db_to_linear, Real};

/// Horizontal offsets below this (meters) use the vertical-incidence convention.
pub const HORIZONTAL_DEGENERACY_M: f64 = 1e-9;

/// Cartesian position in meters. The ground plane is `z = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Position3D<T = f64> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Real> Position3D<T> {
    pub fn new(x: T, y: T, z: T) -> Self {
        Self { x, y, z }
    }

    pub fn origin() -> Self {
        Self::new(T::zero(), T::zero(), T::zero())
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

/// Euclidean distance between two points.
pub fn distance<T: Real>(a: &Position3D<T>, b: &Position3D<T>) -> T {
    let dx = a.x - b.x;
    let dy = a.y - b.y;
    let dz = a.z - b.z;
    (dx * dx + dy * dy + dz * dz).sqrt()
}

/// Angle-of-arrival trigonometry at the RIS for a plane wave from `sat`.
///
/// `sin_vert` is `sin φ`, while `sin_horiz`/`cos_horiz` are `sin ϕ`/`cos ϕ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AoaAngles<T = f64> {
    pub sin_vert: T,
    pub sin_horiz: T,
    pub cos_horiz: T,
    /// Set when the horizontal offset vanished and the fixed convention
    /// `cos_horiz = 1, sin_horiz = 0` was applied.
    pub degenerate: bool,
}

impl<T: Real> AoaAngles<T> {
    /// Projection on the array row axis, `sin φ cos ϕ`.
    pub fn a_x(&self) -> T {
        self.sin_vert * self.cos_horiz
    }

    /// Projection on the array column axis, `sin φ sin ϕ`.
    pub fn a_z(&self) -> T {
        self.sin_vert * self.sin_horiz
    }
}

/// Computes the AoA trigonometry from `sat` towards `ris`.
///
/// `sin φ = |Δz| / d`, `sin ϕ = |Δx| / ρ_h`, `cos ϕ = |Δy| / ρ_h` with
/// `ρ_h` the horizontal offset. When `ρ_h` is below
/// [`HORIZONTAL_DEGENERACY_M`] the horizontal angle is undefined and
/// `cos ϕ = 1, sin ϕ = 0` is used.
pub fn aoa_angles<T: Real>(sat: &Position3D<T>, ris: &Position3D<T>) -> Result<AoaAngles<T>> {
    let dist = distance(sat, ris);
    if !(dist > T::zero()) {
        return Err(Error::ZeroDistance);
    }
    let dx = ris.x - sat.x;
    let dy = ris.y - sat.y;
    let dz = ris.z - sat.z;
    let sin_vert = (dz.abs() / dist).min(T::one());
    let horiz = (dx * dx + dy * dy).sqrt();
    if horiz < T::lit(HORIZONTAL_DEGENERACY_M) {
        return Ok(AoaAngles {
            sin_vert,
            sin_horiz: T::zero(),
            cos_horiz: T::one(),
            degenerate: true,
        });
    }
    Ok(AoaAngles {
        sin_vert,
        sin_horiz: dx.abs() / horiz,
        cos_horiz: dy.abs() / horiz,
        degenerate: false,
    })
}

/// Thermal noise power in watts from a noise density (dBm/Hz), a bandwidth
/// and a receiver noise figure.
pub fn noise_power_from<T: Real>(
    bandwidth_hz: T,
    noise_density_dbm_per_hz: T,
    noise_figure_db: T,
) -> Result<T> {
    if !(bandwidth_hz > T::zero()) {
        return Err(Error::NonPositive {
            field: "bandwidth_hz",
            value: bandwidth_hz.to_f64().unwrap_or(f64::NAN),
        });
    }
    let dbm = noise_density_dbm_per_hz + T::lit(10.0) * bandwidth_hz.log10() + noise_figure_db;
    Ok(db_to_linear(dbm - T::lit(30.0)))
}

/// Every parameter of a run, in linear SI units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario<T = f64> {
    pub pos_tx: Position3D<T>,
    pub pos_jam: Position3D<T>,
    pub pos_ris: Position3D<T>,
    pub pos_ue: Position3D<T>,
    /// Maximum LEO transmit power, W.
    pub p_tx_max: T,
    /// GEO jammer power, W.
    pub p_jam: T,
    /// Receiver noise power σ², W.
    pub noise_power: T,
    pub k_rows: usize,
    pub k_cols: usize,
    /// Carrier wavelength, m.
    pub wavelength: T,
    /// RIS element spacing, m.
    pub element_spacing: T,
    /// Linear path gain at the 1 m reference distance.
    pub rho: T,
    pub alpha_direct: T,
    pub alpha_ris: T,
    /// When false every RIS channel is zero and only the direct paths remain.
    #[serde(default = "enabled")]
    pub ris_enabled: bool,
}

fn enabled() -> bool {
    true
}

/// Default carrier wavelength (2 GHz).
pub const DEFAULT_WAVELENGTH_M: f64 = 0.15;
pub const DEFAULT_BANDWIDTH_HZ: f64 = 1e6;
pub const DEFAULT_NOISE_DENSITY_DBM_HZ: f64 = -174.0;
pub const DEFAULT_NOISE_FIGURE_DB: f64 = 1.0;
pub const DEFAULT_P_TX_DBW: f64 = 20.0;
pub const DEFAULT_P_JAM_DBW: f64 = 30.0;
pub const DEFAULT_RHO_DB: f64 = -55.0;
pub const DEFAULT_LEO_ALTITUDE_M: f64 = 500e3;
pub const DEFAULT_GEO_ALTITUDE_M: f64 = 35_786e3;
pub const DEFAULT_RIS_ALTITUDE_M: f64 = 50.0;

/// The reference scenario: collinear LEO / GEO / RIS / UE stack over the
/// origin with a 3×3 RIS.
pub fn default_scenario<T: Real>() -> Scenario<T> {
    let z = T::zero();
    let wavelength = T::lit(DEFAULT_WAVELENGTH_M);
    Scenario {
        pos_tx: Position3D::new(z, z, T::lit(DEFAULT_LEO_ALTITUDE_M)),
        pos_jam: Position3D::new(z, z, T::lit(DEFAULT_GEO_ALTITUDE_M)),
        pos_ris: Position3D::new(z, z, T::lit(DEFAULT_RIS_ALTITUDE_M)),
        pos_ue: Position3D::origin(),
        p_tx_max: db_to_linear(T::lit(DEFAULT_P_TX_DBW)),
        p_jam: db_to_linear(T::lit(DEFAULT_P_JAM_DBW)),
        noise_power: noise_power_from(
            T::lit(DEFAULT_BANDWIDTH_HZ),
            T::lit(DEFAULT_NOISE_DENSITY_DBM_HZ),
            T::lit(DEFAULT_NOISE_FIGURE_DB),
        )
        .expect("default bandwidth is positive"),
        k_rows: 3,
        k_cols: 3,
        wavelength,
        element_spacing: wavelength / T::lit(2.0),
        rho: db_to_linear(T::lit(DEFAULT_RHO_DB)),
        alpha_direct: T::lit(2.0),
        alpha_ris: T::lit(2.0),
        ris_enabled: true,
    }
}

impl<T: Real> Default for Scenario<T> {
    fn default() -> Self {
        default_scenario()
    }
}

fn check_positive<T: Real>(field: &'static str, v: T) -> Result<()> {
    if !v.is_finite() {
        return Err(Error::NonFinite { field });
    }
    if v <= T::zero() {
        return Err(Error::NonPositive {
            field,
            value: v.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(())
}

impl<T: Real> Scenario<T> {
    /// Number of RIS elements `K = k_rows · k_cols`.
    pub fn num_elements(&self) -> usize {
        self.k_rows * self.k_cols
    }

    pub fn validate(&self) -> Result<()> {
        check_positive("p_tx_max", self.p_tx_max)?;
        if !self.p_jam.is_finite() {
            return Err(Error::NonFinite { field: "p_jam" });
        }
        if self.p_jam < T::zero() {
            return Err(Error::Negative {
                field: "p_jam",
                value: self.p_jam.to_f64().unwrap_or(f64::NAN),
            });
        }
        check_positive("noise_power", self.noise_power)?;
        check_positive("wavelength", self.wavelength)?;
        check_positive("element_spacing", self.element_spacing)?;
        check_positive("rho", self.rho)?;
        for (field, a) in [
            ("alpha_direct", self.alpha_direct),
            ("alpha_ris", self.alpha_ris),
        ] {
            if !a.is_finite() {
                return Err(Error::NonFinite { field });
            }
        }
        if self.k_rows == 0 {
            return Err(Error::NonPositive {
                field: "k_rows",
                value: 0.0,
            });
        }
        if self.k_cols == 0 {
            return Err(Error::NonPositive {
                field: "k_cols",
                value: 0.0,
            });
        }
        let named = [
            ("pos_tx", &self.pos_tx),
            ("pos_jam", &self.pos_jam),
            ("pos_ris", &self.pos_ris),
            ("pos_ue", &self.pos_ue),
        ];
        for (field, p) in named {
            if !p.is_finite() {
                return Err(Error::NonFinite { field });
            }
        }
        if self.pos_ue.z != T::zero() {
            return Err(Error::UserOffGround(
                self.pos_ue.z.to_f64().unwrap_or(f64::NAN),
            ));
        }
        for i in 0..named.len() {
            for j in i + 1..named.len() {
                if distance(named[i].1, named[j].1) <= T::zero() {
                    return Err(Error::CoincidentPositions {
                        a: named[i].0,
                        b: named[j].0,
                    });
                }
            }
        }
        Ok(())
    }
}

/// JSON configuration with dB-valued power fields. Absent fields take the
/// reference-scenario values.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub p_tx_dbw: Option<f64>,
    pub p_jam_dbw: Option<f64>,
    pub rho_db: Option<f64>,
    pub noise_density_dbm_hz: Option<f64>,
    pub noise_figure_db: Option<f64>,
    pub bandwidth_hz: Option<f64>,
    pub pos_tx_m: Option<[f64; 3]>,
    pub pos_jam_m: Option<[f64; 3]>,
    pub pos_ris_m: Option<[f64; 3]>,
    pub pos_ue_m: Option<[f64; 3]>,
    pub k_rows: Option<usize>,
    pub k_cols: Option<usize>,
    pub wavelength_m: Option<f64>,
    /// Defaults to half the wavelength.
    pub element_spacing_m: Option<f64>,
    pub alpha_direct: Option<f64>,
    pub alpha_ris: Option<f64>,
    pub ris_enabled: Option<bool>,
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    /// Converts to linear units and validates.
    pub fn into_scenario(self) -> Result<Scenario<f64>> {
        let base = default_scenario::<f64>();
        let pos =
            |p: Option<[f64; 3]>, d: Position3D| p.map_or(d, |[x, y, z]| Position3D::new(x, y, z));
        let bandwidth = self.bandwidth_hz.unwrap_or(DEFAULT_BANDWIDTH_HZ);
        let noise_power = noise_power_from(
            bandwidth,
            self.noise_density_dbm_hz
                .unwrap_or(DEFAULT_NOISE_DENSITY_DBM_HZ),
            self.noise_figure_db.unwrap_or(DEFAULT_NOISE_FIGURE_DB),
        )?;
        let wavelength = self.wavelength_m.unwrap_or(base.wavelength);
        let scenario = Scenario {
            pos_tx: pos(self.pos_tx_m, base.pos_tx),
            pos_jam: pos(self.pos_jam_m, base.pos_jam),
            pos_ris: pos(self.pos_ris_m, base.pos_ris),
            pos_ue: pos(self.pos_ue_m, base.pos_ue),
            p_tx_max: db_to_linear(self.p_tx_dbw.unwrap_or(DEFAULT_P_TX_DBW)),
            p_jam: db_to_linear(self.p_jam_dbw.unwrap_or(DEFAULT_P_JAM_DBW)),
            noise_power,
            k_rows: self.k_rows.unwrap_or(base.k_rows),
            k_cols: self.k_cols.unwrap_or(base.k_cols),
            wavelength,
            element_spacing: self.element_spacing_m.unwrap_or(wavelength / 2.0),
            rho: db_to_linear(self.rho_db.unwrap_or(DEFAULT_RHO_DB)),
            alpha_direct: self.alpha_direct.unwrap_or(base.alpha_direct),
            alpha_ris: self.alpha_ris.unwrap_or(base.alpha_ris),
            ris_enabled: self.ris_enabled.unwrap_or(true),
        };
        scenario.validate()?;
        Ok(scenario)
    }
}

/// Reads and validates a scenario from a JSON config file.
pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario<f64>> {
    ScenarioConfig::load(path)?.into_scenario()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(x: f64, y: f64, z: f64) -> Position3D {
        Position3D::new(x, y, z)
    }

    #[test]
    fn distance_examples() {
        assert_eq!(distance(&p(0., 0., 0.), &p(0., 0., 0.)), 0.0);
        assert_eq!(distance(&p(0., 0., 0.), &p(0., 0., 5e5)), 5e5);
        assert_eq!(distance(&p(3., 4., 0.), &p(0., 0., 0.)), 5.0);
    }

    #[test]
    fn aoa_vertical_is_degenerate() {
        let a = aoa_angles(&p(0., 0., 500_050.), &p(0., 0., 50.)).unwrap();
        assert_eq!(a.sin_vert, 1.0);
        assert_eq!(a.cos_horiz, 1.0);
        assert_eq!(a.sin_horiz, 0.0);
        assert!(a.degenerate);
    }

    #[test]
    fn aoa_horizontal_arrival() {
        let a = aoa_angles(&p(100., 0., 50.), &p(0., 0., 50.)).unwrap();
        assert_eq!(a.sin_vert, 0.0);
        assert_eq!(a.cos_horiz, 0.0);
        assert_eq!(a.sin_horiz, 1.0);
        assert!(!a.degenerate);
    }

    #[test]
    fn aoa_cos_uses_y_offset() {
        let a = aoa_angles(&p(0., 100., 100.), &p(0., 0., 0.)).unwrap();
        assert!((a.sin_vert - 100.0 / 20000f64.sqrt()).abs() < 1e-15);
        assert!((a.sin_vert - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert_eq!(a.cos_horiz, 1.0);
        assert_eq!(a.sin_horiz, 0.0);
    }

    #[test]
    fn aoa_coincident_is_error() {
        assert!(matches!(
            aoa_angles(&p(1., 2., 3.), &p(1., 2., 3.)),
            Err(Error::ZeroDistance)
        ));
    }

    #[test]
    fn noise_power_examples() {
        let n = noise_power_from(1e6, -174.0, 1.0).unwrap();
        // -174 + 60 + 1 - 30 = -143 dBW
        assert!((n - 10f64.powf(-14.3)).abs() / n < 1e-12);
        assert!((n - 5.0119e-15).abs() / n < 1e-4);
        let n = noise_power_from::<f64>(1.0, -30.0, 0.0).unwrap();
        assert!((n - 1e-6).abs() < 1e-18);
        let n = noise_power_from::<f64>(1e6, -174.0, 0.0).unwrap();
        assert!((n - 3.9811e-15).abs() / n < 1e-4);
        assert!(noise_power_from(0.0, -174.0, 1.0).is_err());
        assert!(noise_power_from(-1.0, -174.0, 1.0).is_err());
    }

    #[test]
    fn default_values() {
        let s = default_scenario::<f64>();
        assert!((s.p_tx_max - 100.0).abs() < 1e-12);
        assert!((s.p_jam - 1000.0).abs() < 1e-9);
        assert!((s.rho - 3.1623e-6).abs() / s.rho < 1e-4);
        assert_eq!(s.pos_jam.z, 35_786_000.0);
        assert_eq!(s.pos_tx.z, 500_000.0);
        assert_eq!(s.pos_ris.z, 50.0);
        assert_eq!(s.element_spacing, s.wavelength / 2.0);
        assert_eq!(s.num_elements(), 9);
        s.validate().unwrap();
    }

    #[test]
    fn validation_rejects_bad_parameters() {
        let base = default_scenario::<f64>();
        let mut s = base.clone();
        s.p_tx_max = 0.0;
        assert!(matches!(
            s.validate(),
            Err(Error::NonPositive {
                field: "p_tx_max",
                ..
            })
        ));
        let mut s = base.clone();
        s.p_jam = -1.0;
        assert!(matches!(
            s.validate(),
            Err(Error::Negative { field: "p_jam", .. })
        ));
        let mut s = base.clone();
        s.p_jam = 0.0;
        s.validate().unwrap();
        let mut s = base.clone();
        s.noise_power = -3.0;
        assert!(matches!(
            s.validate(),
            Err(Error::NonPositive {
                field: "noise_power",
                ..
            })
        ));
        let mut s = base.clone();
        s.wavelength = 0.0;
        assert!(s.validate().is_err());
        let mut s = base.clone();
        s.element_spacing = -0.1;
        assert!(s.validate().is_err());
        let mut s = base.clone();
        s.rho = 0.0;
        assert!(s.validate().is_err());
        let mut s = base.clone();
        s.k_cols = 0;
        assert!(s.validate().is_err());
        let mut s = base.clone();
        s.pos_ris = s.pos_ue;
        assert!(matches!(
            s.validate(),
            Err(Error::CoincidentPositions {
                a: "pos_ris",
                b: "pos_ue"
            })
        ));
        let mut s = base.clone();
        s.pos_ue.z = 1.0;
        assert!(matches!(s.validate(), Err(Error::UserOffGround(_))));
        let mut s = base;
        s.pos_tx.x = f64::NAN;
        assert!(matches!(
            s.validate(),
            Err(Error::NonFinite { field: "pos_tx" })
        ));
    }

    #[test]
    fn config_defaults_match_reference() {
        let s = ScenarioConfig::from_json("{}")
            .unwrap()
            .into_scenario()
            .unwrap();
        assert_eq!(s, default_scenario::<f64>());
    }

    #[test]
    fn config_overrides() {
        let cfg = r#"{"p_tx_dbw": 10, "k_rows": 5, "k_cols": 4, "wavelength_m": 0.1,
                      "pos_ris_m": [1, 2, 30], "ris_enabled": false}"#;
        let s = ScenarioConfig::from_json(cfg)
            .unwrap()
            .into_scenario()
            .unwrap();
        assert!((s.p_tx_max - 10.0).abs() < 1e-12);
        assert_eq!(s.num_elements(), 20);
        assert_eq!(s.element_spacing, 0.05);
        assert_eq!(s.pos_ris, p(1., 2., 30.));
        assert!(!s.ris_enabled);
    }

    #[test]
    fn config_rejects_invalid() {
        assert!(ScenarioConfig::from_json(r#"{"bandwidth_hz": 0}"#)
            .unwrap()
            .into_scenario()
            .is_err());
        assert!(ScenarioConfig::from_json(r#"{"k_rows": 0}"#)
            .unwrap()
            .into_scenario()
            .is_err());
        assert!(ScenarioConfig::from_json(r#"{"unknown_field": 1}"#).is_err());
    }

    #[test]
    fn f32_scenario_is_valid() {
        let s = default_scenario::<f32>();
        s.validate().unwrap();
        assert!((s.p_tx_max - 100.0).abs() < 1e-4);
    }

    fn coord() -> impl Strategy<Value = f64> {
        -1e6..1e6f64
    }

    fn point() -> impl Strategy<Value = Position3D> {
        (coord(), coord(), coord()).prop_map(|(x, y, z)| p(x, y, z))
    }

    proptest! {
        #[test]
        fn distance_is_a_metric(a in point(), b in point(), c in point()) {
            let ab = distance(&a, &b);
            prop_assert_eq!(ab, distance(&b, &a));
            prop_assert!(ab >= 0.0);
            let ac = distance(&a, &c);
            let cb = distance(&c, &b);
            prop_assert!(ab <= (ac + cb) * (1.0 + 1e-12));
        }

        #[test]
        fn aoa_is_on_unit_circle(sat in point(), ris in point(), flat in any::<bool>()) {
            let sat = if flat { p(ris.x, ris.y, sat.z) } else { sat };
            prop_assume!(distance(&sat, &ris) > 0.0);
            let a = aoa_angles(&sat, &ris).unwrap();
            prop_assert!((a.sin_horiz.powi(2) + a.cos_horiz.powi(2) - 1.0).abs() <= 1e-12);
            prop_assert!((0.0..=1.0).contains(&a.sin_vert));
        }

        #[test]
        fn noise_power_is_increasing(bw in 1.0..1e9f64, n0 in -200.0..-100.0f64, nf in 0.0..20.0f64) {
            let base = noise_power_from(bw, n0, nf).unwrap();
            prop_assert!(noise_power_from(bw * 1.01, n0, nf).unwrap() > base);
            prop_assert!(noise_power_from(bw, n0 + 0.01, nf).unwrap() > base);
            prop_assert!(noise_power_from(bw, n0, nf + 0.01).unwrap() > base);
        }
    }
}
