//! Physical parameters of the heated disk and the quantities derived from them.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Stefan-Boltzmann constant (CODATA 2018), W·m⁻²·K⁻⁴.
pub const STEFAN_BOLTZMANN: f64 = 5.670_374_419e-8;

/// Aspect ratio h/R above which the depth-averaged reduction is flagged.
pub const THIN_PLATE_LIMIT: f64 = 0.05;

fn default_sigma() -> f64 {
    STEFAN_BOLTZMANN
}

/// Geometry, material and loading of the disk. All values in SI units.
///
/// The serialized form uses the short keys `r`, `h`, `k`, `emissivity`,
/// `sigma`, `q0`, `a`, `t_ambient`; `sigma` may be omitted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiskParams {
    /// Disk radius R [m].
    #[serde(rename = "r")]
    pub radius: f64,
    /// Thickness h [m].
    #[serde(rename = "h")]
    pub thickness: f64,
    /// Thermal conductivity k [W/(m·K)].
    #[serde(rename = "k")]
    pub conductivity: f64,
    /// Hemispherical (gray) emissivity of the upper surface.
    pub emissivity: f64,
    /// Stefan-Boltzmann constant [W/(m²·K⁴)].
    #[serde(default = "default_sigma")]
    pub sigma: f64,
    /// Volumetric source density inside the heated core [W/m³].
    pub q0: f64,
    /// Radius of the heated core [m].
    #[serde(rename = "a")]
    pub source_radius: f64,
    /// Ambient (surroundings) temperature [K].
    pub t_ambient: f64,
}

impl DiskParams {
    /// The ceramic disk used to check the thin-plate reduction.
    pub fn reference_disk() -> Self {
        Self {
            radius: 0.1,
            thickness: 0.001,
            conductivity: 10.0,
            emissivity: 0.8,
            sigma: STEFAN_BOLTZMANN,
            q0: 1e9,
            source_radius: 0.001,
            t_ambient: 300.0,
        }
    }

    pub fn with_q0(self, q0: f64) -> Self {
        Self { q0, ..self }
    }

    /// Checks every physical invariant, naming the first offending field.
    ///
    /// A thick disk (h/R above [`THIN_PLATE_LIMIT`]) is accepted but logged.
    pub fn validate(self) -> Result<Self> {
        fn positive(field: &'static str, v: f64) -> Result<()> {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::param(
                    field,
                    format!("must be positive and finite, got {v}"),
                ))
            }
        }
        positive("r", self.radius)?;
        positive("h", self.thickness)?;
        positive("k", self.conductivity)?;
        positive("sigma", self.sigma)?;
        positive("t_ambient", self.t_ambient)?;
        positive("a", self.source_radius)?;
        if !(self.q0.is_finite() && self.q0 >= 0.0) {
            return Err(Error::param(
                "q0",
                format!("must be non-negative, got {}", self.q0),
            ));
        }
        if !(self.emissivity > 0.0 && self.emissivity <= 1.0) {
            return Err(Error::param(
                "emissivity",
                format!("must lie in (0, 1], got {}", self.emissivity),
            ));
        }
        if self.source_radius > self.radius {
            return Err(Error::param(
                "a",
                format!(
                    "source radius exceeds disk radius ({} > {})",
                    self.source_radius, self.radius
                ),
            ));
        }
        if let Some(msg) = self.thin_plate_warning() {
            log::warn!("{msg}");
        }
        Ok(self)
    }

    pub fn aspect_ratio(&self) -> f64 {
        self.thickness / self.radius
    }

    pub fn is_thin_plate(&self) -> bool {
        self.aspect_ratio() <= THIN_PLATE_LIMIT
    }

    pub fn thin_plate_warning(&self) -> Option<String> {
        (!self.is_thin_plate()).then(|| {
            format!(
                "h/R = {:.4} exceeds {THIN_PLATE_LIMIT}; the depth-averaged model may be inaccurate",
                self.aspect_ratio()
            )
        })
    }

    /// Radiative coupling εσ/(kh) [m⁻²·K⁻³].
    pub fn alpha(&self) -> f64 {
        self.emissivity * self.sigma / (self.conductivity * self.thickness)
    }

    pub fn source(&self) -> SourceProfile {
        SourceProfile {
            q0: self.q0,
            a: self.source_radius,
        }
    }

    pub fn derive(&self) -> DerivedParams {
        let area = PI * self.radius * self.radius;
        let p_in = PI * self.source_radius * self.source_radius * self.thickness * self.q0;
        DerivedParams {
            alpha: self.alpha(),
            p_in,
            area,
            t_iso: isothermal_temperature(self),
        }
    }
}

/// Flux excess a²hQ₀/(σεR²) = P_in/(εσA) radiated above ambient [K⁴].
fn radiated_excess(p: &DiskParams) -> f64 {
    let ratio = p.source_radius / p.radius;
    ratio * ratio * p.thickness * p.q0 / (p.sigma * p.emissivity)
}

/// Uniform temperature that radiates the full input power.
pub fn isothermal_temperature(p: &DiskParams) -> f64 {
    (p.t_ambient.powi(4) + radiated_excess(p)).powf(0.25)
}

/// `isothermal_temperature(p) - t_ambient`, evaluated without cancellation.
pub fn isothermal_rise(p: &DiskParams) -> f64 {
    let ta = p.t_ambient;
    let t_iso = isothermal_temperature(p);
    radiated_excess(p) / ((t_iso + ta) * (t_iso * t_iso + ta * ta))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedParams {
    /// εσ/(kh) [m⁻²·K⁻³].
    pub alpha: f64,
    /// πa²hQ₀ [W].
    pub p_in: f64,
    /// πR² [m²].
    pub area: f64,
    pub t_iso: f64,
}

/// Step source: `q0` on the closed core r ≤ a, zero outside.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceProfile {
    pub q0: f64,
    pub a: f64,
}

impl SourceProfile {
    pub fn at(&self, r: f64) -> Result<f64> {
        if r.is_nan() || r < 0.0 {
            return Err(Error::param(
                "r",
                format!("radius must be non-negative, got {r}"),
            ));
        }
        Ok(if r <= self.a { self.q0 } else { 0.0 })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_disk_is_accepted_and_thin() {
        let p = DiskParams::reference_disk().validate().unwrap();
        assert!(p.is_thin_plate());
        assert!(p.thin_plate_warning().is_none());
    }

    #[test]
    fn rejects_source_larger_than_disk() {
        let p = DiskParams {
            source_radius: 0.2,
            ..DiskParams::reference_disk()
        };
        let err = p.validate().unwrap_err().to_string();
        assert!(err.contains("source radius exceeds disk radius"), "{err}");
        assert!(err.contains("`a`"));
    }

    #[test]
    fn rejects_bad_emissivity_and_dimensions() {
        for eps in [0.0, -0.1, 1.5, f64::NAN] {
            let p = DiskParams {
                emissivity: eps,
                ..DiskParams::reference_disk()
            };
            assert!(matches!(
                p.validate(),
                Err(Error::InvalidParam {
                    field: "emissivity",
                    ..
                })
            ));
        }
        let p = DiskParams {
            thickness: 0.0,
            ..DiskParams::reference_disk()
        };
        assert!(matches!(
            p.validate(),
            Err(Error::InvalidParam { field: "h", .. })
        ));
        let p = DiskParams {
            q0: -1.0,
            ..DiskParams::reference_disk()
        };
        assert!(matches!(
            p.validate(),
            Err(Error::InvalidParam { field: "q0", .. })
        ));
        let p = DiskParams {
            emissivity: 1.0,
            ..DiskParams::reference_disk()
        };
        assert!(p.validate().is_ok());
    }

    #[test]
    fn thick_disk_is_accepted_with_warning() {
        let p = DiskParams {
            thickness: 0.05,
            ..DiskParams::reference_disk()
        }
        .validate()
        .unwrap();
        assert!(!p.is_thin_plate());
        assert!(p.thin_plate_warning().is_some());
    }

    #[test]
    fn derived_reference_values() {
        // Independent evaluation in long hand.
        let sigma = 5.670374419e-8;
        let alpha = 0.8 * sigma / (10.0 * 0.001);
        let p_in = std::f64::consts::PI * 1e-6 * 1e-3 * 1e9;
        let t_iso = (300.0f64.powi(4) + 1e-6 * 1e-3 * 1e9 / (sigma * 0.8 * 0.01))
            .sqrt()
            .sqrt();
        let d = DiskParams::reference_disk().derive();
        assert!((d.alpha - alpha).abs() < 1e-18);
        assert!((d.alpha - 4.5363e-6).abs() < 1e-10);
        assert!((d.p_in - p_in).abs() < 1e-12);
        assert!((d.p_in - std::f64::consts::PI).abs() < 1e-12);
        assert!((d.t_iso - t_iso).abs() < 1e-10);
        assert!((d.t_iso - 318.6).abs() < 0.05, "t_iso = {}", d.t_iso);
    }

    #[test]
    fn zero_power_and_full_source_cases() {
        let p = DiskParams::reference_disk().with_q0(0.0);
        assert_eq!(p.derive().t_iso, 300.0);
        assert_eq!(isothermal_rise(&p), 0.0);

        let p = DiskParams {
            source_radius: 0.1,
            ..DiskParams::reference_disk()
        };
        let expect = (300.0f64.powi(4) + p.thickness * p.q0 / (p.sigma * p.emissivity)).powf(0.25);
        assert!((p.derive().t_iso - expect).abs() < 1e-9 * expect);
    }

    #[test]
    fn isothermal_rise_matches_difference() {
        let p = DiskParams::reference_disk();
        let rise = isothermal_rise(&p);
        assert!((rise - (p.derive().t_iso - 300.0)).abs() < 1e-10);
    }

    #[test]
    fn source_step_convention() {
        let s = DiskParams::reference_disk().source();
        assert_eq!(s.at(0.0).unwrap(), 1e9);
        assert_eq!(s.at(0.001).unwrap(), 1e9);
        assert_eq!(s.at(0.001 * 1.0001).unwrap(), 0.0);
        assert!(s.at(-1e-9).is_err());
    }

    #[test]
    fn config_keys_and_default_sigma() {
        let json =
            r#"{"r":0.1,"h":0.001,"k":10,"emissivity":0.8,"q0":1e9,"a":0.001,"t_ambient":300}"#;
        let p: DiskParams = serde_json::from_str(json).unwrap();
        assert_eq!(p, DiskParams::reference_disk());
        let bad = r#"{"r":0.1,"h":0.001,"k":10,"emissivity":0.8,"q0":1e9,"a":0.001,"t_ambient":300,"rho":1}"#;
        assert!(serde_json::from_str::<DiskParams>(bad).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn derive_scales_linearly_in_q0(q0 in 1e3f64..1e10, lambda in 0.01f64..100.0) {
                let p = DiskParams::reference_disk().with_q0(q0);
                let scaled = p.with_q0(q0 * lambda);
                let (d, ds) = (p.derive(), scaled.derive());
                prop_assert!((ds.p_in - lambda * d.p_in).abs() <= 1e-12 * ds.p_in);
                let ta4 = p.t_ambient.powi(4);
                let excess = d.t_iso.powi(4) - ta4;
                let excess_s = ds.t_iso.powi(4) - ta4;
                prop_assert!((excess_s - lambda * excess).abs() <= 1e-9 * (excess_s + ta4));
            }

            #[test]
            fn t_iso_monotone(q0 in 0.0f64..1e9, dq in 0.0f64..1e9, a in 1e-4f64..0.05, da in 0.0f64..0.05) {
                let base = DiskParams { source_radius: a, ..DiskParams::reference_disk().with_q0(q0) };
                let more_q = base.with_q0(q0 + dq);
                let more_a = DiskParams { source_radius: a + da, ..base };
                prop_assert!(more_q.derive().t_iso >= base.derive().t_iso);
                prop_assert!(more_a.derive().t_iso >= base.derive().t_iso);
                prop_assert!(base.derive().t_iso >= base.t_ambient);
            }
        }
    }
}
