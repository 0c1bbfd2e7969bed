//! Area-weighted statistics of a radial temperature field and the
//! variance-based estimate of the mean temperature.
//!
//! Averages use the solver's own annulus areas as quadrature weights, so the
//! discrete power balance carries over to ⟨T⁴⟩ = T_iso⁴ up to the Newton
//! residual.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{isothermal_rise, DiskParams};
use crate::solver1d::{RadiationLaw, TemperatureField1D};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldStats {
    /// Area-averaged temperature [K].
    pub t_bar: f64,
    /// ⟨T⁴⟩ [K⁴].
    pub mean_t4: f64,
    /// Area variance of θ = T − Tₐ [K²].
    pub variance: f64,
    /// T(0) − Tₐ, taken at the cell touching the axis [K].
    pub dt_max: f64,
    pub t_iso: f64,
    /// t_iso − 3/(2Tₐ)·variance [K].
    pub t_bar_anal: f64,
    /// |⟨T⁴⟩ − t_iso⁴| / t_iso⁴.
    pub identity_residual: f64,
    /// |t_bar − t_bar_anal| [K].
    pub relation_error: f64,
    /// variance / Tₐ².
    pub normalized_variance: f64,
}

/// Σ Aᵢ f(Tᵢ) / Σ Aᵢ over the field's annuli.
pub fn area_mean(field: &TemperatureField1D, f: impl Fn(f64) -> f64) -> Result<f64> {
    let areas = field.grid.areas();
    if field.values.is_empty() || areas.len() != field.values.len() {
        return Err(Error::Grid("empty or mismatched field".into()));
    }
    let total: f64 = areas.iter().sum();
    let weighted: f64 = areas
        .iter()
        .zip(&field.values)
        .map(|(a, &t)| a * f(t))
        .sum();
    Ok(weighted / total)
}

pub fn compute_stats(field: &TemperatureField1D, params: &DiskParams) -> Result<FieldStats> {
    let ta = params.t_ambient;
    let t_iso = params.derive().t_iso;
    let theta_iso = isothermal_rise(params);

    let mean_theta = area_mean(field, |t| t - ta)?;
    // Two-pass form in the θ frame; equals ⟨θ²⟩ − ⟨θ⟩².
    let variance = area_mean(field, |t| {
        let d = t - ta - mean_theta;
        d * d
    })?;
    let mean_excess = area_mean(field, |t| RadiationLaw::StefanBoltzmann.excess(t, ta).0)?;
    let iso_excess = RadiationLaw::StefanBoltzmann.excess(t_iso, ta).0;
    let t_iso4 = t_iso.powi(4);

    let correction = 1.5 / ta * variance;
    Ok(FieldStats {
        t_bar: ta + mean_theta,
        mean_t4: area_mean(field, |t| t.powi(4))?,
        variance,
        dt_max: field.center_value() - ta,
        t_iso,
        t_bar_anal: t_iso - correction,
        identity_residual: (mean_excess - iso_excess).abs() / t_iso4,
        relation_error: (mean_theta - (theta_iso - correction)).abs(),
        normalized_variance: variance / (ta * ta),
    })
}

/// Variance of a two-valued field occupying area fractions `p` and `1 − p`.
pub fn two_point_variance(theta_in: f64, theta_out: f64, area_fraction_in: f64) -> f64 {
    let p = area_fraction_in;
    debug_assert!((0.0..=1.0).contains(&p));
    let mean = p * theta_in + (1.0 - p) * theta_out;
    p * (theta_in - mean).powi(2) + (1.0 - p) * (theta_out - mean).powi(2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::RadialGrid;
    use crate::solver1d::{solve_reduced, SolverSettings};

    fn grid(n: usize) -> RadialGrid {
        RadialGrid::build(&DiskParams::reference_disk(), n).unwrap()
    }

    #[test]
    fn constant_field_means() {
        let f = TemperatureField1D::uniform(grid(100), 412.5);
        assert!((area_mean(&f, |t| t).unwrap() - 412.5).abs() < 1e-12);
        assert!((area_mean(&f, |t| t.powi(4)).unwrap() / 412.5f64.powi(4) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn linear_field_mean_converges_to_two_thirds() {
        let c = 1000.0;
        let exact = 2.0 * c * 0.1 / 3.0;
        let err = |n: usize| {
            let g = RadialGrid::from_faces((0..=n).map(|i| 0.1 * i as f64 / n as f64).collect(), 0)
                .unwrap();
            let values = g.centers().iter().map(|r| c * r).collect();
            let f = TemperatureField1D { grid: g, values };
            (area_mean(&f, |t| t).unwrap() - exact).abs()
        };
        let (e1, e2) = (err(50), err(100));
        assert!(e1 < 1e-3 * exact);
        let order = (e1 / e2).log2();
        assert!((order - 2.0).abs() < 0.1, "order {order}");
    }

    #[test]
    fn empty_field_is_an_error() {
        let g = grid(10);
        let f = TemperatureField1D {
            grid: g,
            values: vec![],
        };
        assert!(area_mean(&f, |t| t).is_err());
    }

    #[test]
    fn isothermal_field_has_no_variance() {
        let p = DiskParams::reference_disk();
        let t_iso = p.derive().t_iso;
        let s = compute_stats(&TemperatureField1D::uniform(grid(200), t_iso), &p).unwrap();
        assert!(s.variance < 1e-20);
        assert!((s.t_bar - t_iso).abs() < 1e-10);
        assert!((s.t_bar_anal - t_iso).abs() < 1e-10);
        assert!(s.identity_residual < 1e-14);
    }

    #[test]
    fn correction_arithmetic() {
        // A two-level field with variance 100 K² about Tₐ = 300 K.
        let p = DiskParams::reference_disk();
        let g = RadialGrid::from_faces(vec![0.0, 0.1 / 2f64.sqrt(), 0.1], 1).unwrap();
        let f = TemperatureField1D {
            grid: g,
            values: vec![320.0, 300.0],
        };
        let s = compute_stats(&f, &p).unwrap();
        assert!((s.variance - 100.0).abs() < 1e-9);
        assert!((s.t_iso - s.t_bar_anal - 0.5).abs() < 1e-11);
        assert!((s.normalized_variance - 100.0 / 90000.0).abs() < 1e-15);
        assert!((s.dt_max - 20.0).abs() < 1e-12);
    }

    #[test]
    fn two_point_examples() {
        assert!((two_point_variance(3.0, -3.0, 0.5) - 9.0).abs() < 1e-12);
        assert_eq!(two_point_variance(7.0, 2.0, 1.0), 0.0);
        assert!((two_point_variance(10.0, 0.0, 0.25) - 18.75).abs() < 1e-12);
    }

    #[test]
    fn reference_disk_identity_and_relation() {
        let p = DiskParams::reference_disk();
        let (f, rep) = solve_reduced(&p, &SolverSettings::default()).unwrap();
        assert!(rep.converged);
        let s = compute_stats(&f, &p).unwrap();
        assert!(s.identity_residual <= 1e-8, "{}", s.identity_residual);
        assert!(s.t_bar < s.t_iso);
        assert!(s.relation_error < 0.1 * (s.t_iso - s.t_bar), "{s:?}");
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn two_point_shift_invariant(a in -50.0f64..50.0, b in -50.0f64..50.0, p in 0.0f64..=1.0, c in -100.0f64..100.0) {
                let v = two_point_variance(a, b, p);
                let shifted = two_point_variance(a + c, b + c, p);
                prop_assert!(v >= 0.0);
                prop_assert!((v - shifted).abs() <= 1e-9 * (1.0 + v));
            }

            #[test]
            fn jensen_holds_for_arbitrary_fields(values in proptest::collection::vec(250.0f64..900.0, 12)) {
                let g = grid(12);
                let f = TemperatureField1D { grid: g, values };
                let mean = area_mean(&f, |t| t).unwrap();
                let mean4 = area_mean(&f, |t| t.powi(4)).unwrap();
                prop_assert!(mean <= mean4.powf(0.25) * (1.0 + 1e-14));
            }
        }
    }
}
