//! Studies built on the solvers: the Q₀ sweep of the variance relation, the
//! radial-vs-axisymmetric comparison and the grid-convergence check.

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::model::DiskParams;
use crate::solver1d::{solve_reduced, RadiationLaw, SolveReport, SolverSettings};
use crate::solver2d::{extract_midplane, solve_full, Solver2dSettings};
use crate::stats::compute_stats;

pub const DEFAULT_SWEEP_POINTS: usize = 25;
pub const DEFAULT_SWEEP_Q0_MIN: f64 = 1e6;
pub const DEFAULT_SWEEP_Q0_MAX: f64 = 1e9;
pub const MIN_CONVERGENCE_BASE: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepSpec {
    pub q0_min: f64,
    pub q0_max: f64,
    pub n_points: usize,
    pub log_spacing: bool,
    pub base: DiskParams,
    pub n_cells: usize,
}

impl SweepSpec {
    /// 25 log-spaced points over [10⁶, 10⁹] W/m³ on the given disk.
    pub fn default_for(base: DiskParams) -> Self {
        Self {
            q0_min: DEFAULT_SWEEP_Q0_MIN,
            q0_max: DEFAULT_SWEEP_Q0_MAX,
            n_points: DEFAULT_SWEEP_POINTS,
            log_spacing: true,
            base,
            n_cells: crate::solver1d::DEFAULT_CELLS,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = (self.q0_min, self.q0_max);
        if !(lo.is_finite() && hi.is_finite() && lo >= 0.0) {
            return Err(Error::Sweep(format!("bad q0 range [{lo}, {hi}]")));
        }
        if lo > hi {
            return Err(Error::Sweep(format!("q0_min {lo} exceeds q0_max {hi}")));
        }
        if self.log_spacing && lo <= 0.0 {
            return Err(Error::Sweep("log spacing needs q0_min > 0".into()));
        }
        if self.n_points == 0 || (self.n_points == 1 && lo != hi) {
            return Err(Error::Sweep(format!(
                "n_points = {} (a single point needs q0_min = q0_max)",
                self.n_points
            )));
        }
        self.base.validate()?;
        Ok(())
    }

    /// Sweep abscissae in increasing order, endpoints exact.
    pub fn q0_values(&self) -> Vec<f64> {
        let n = self.n_points;
        if n == 1 {
            return vec![self.q0_min];
        }
        (0..n)
            .map(|i| {
                if i == 0 {
                    return self.q0_min;
                }
                if i == n - 1 {
                    return self.q0_max;
                }
                let s = i as f64 / (n - 1) as f64;
                if self.log_spacing {
                    self.q0_min * (self.q0_max / self.q0_min).powf(s)
                } else {
                    self.q0_min + s * (self.q0_max - self.q0_min)
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub q0: f64,
    pub dt_max: f64,
    pub variance: f64,
    pub normalized_variance: f64,
    pub t_iso: f64,
    pub t_bar_num: f64,
    pub t_bar_anal: f64,
    pub abs_error: f64,
    pub converged: bool,
}

impl SweepRow {
    fn failed(q0: f64) -> Self {
        Self {
            q0,
            dt_max: f64::NAN,
            variance: f64::NAN,
            normalized_variance: f64::NAN,
            t_iso: f64::NAN,
            t_bar_num: f64::NAN,
            t_bar_anal: f64::NAN,
            abs_error: f64::NAN,
            converged: false,
        }
    }
}

fn sweep_point(base: &DiskParams, q0: f64, settings: &SolverSettings) -> SweepRow {
    let params = base.with_q0(q0);
    let solved = solve_reduced(&params, settings)
        .and_then(|(field, rep)| Ok((compute_stats(&field, &params)?, rep)));
    match solved {
        Ok((s, rep)) if rep.converged => SweepRow {
            q0,
            dt_max: s.dt_max,
            variance: s.variance,
            normalized_variance: s.normalized_variance,
            t_iso: s.t_iso,
            t_bar_num: s.t_bar,
            t_bar_anal: s.t_bar_anal,
            abs_error: s.relation_error,
            converged: true,
        },
        Ok((_, rep)) => {
            log::warn!("q0 = {q0:e}: not converged ({rep:?})");
            SweepRow::failed(q0)
        }
        Err(e) => {
            log::warn!("q0 = {q0:e}: {e}");
            SweepRow::failed(q0)
        }
    }
}

/// Solves every q0 independently (in parallel) and returns rows in the
/// order given. Failed points are kept with `converged = false`.
pub fn run_sweep_points(
    base: &DiskParams,
    q0_values: &[f64],
    settings: &SolverSettings,
) -> Result<Vec<SweepRow>> {
    let base = base.validate()?;
    let rows: Vec<SweepRow> = q0_values
        .par_iter()
        .map(|&q0| sweep_point(&base, q0, settings))
        .collect();
    if rows.iter().all(|r| !r.converged) {
        return Err(Error::SweepFailed);
    }
    Ok(rows)
}

/// `settings.n_cells` is replaced by `spec.n_cells`.
pub fn run_sweep(spec: &SweepSpec, settings: &SolverSettings) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let settings = SolverSettings {
        n_cells: spec.n_cells,
        ..*settings
    };
    run_sweep_points(&spec.base, &spec.q0_values(), &settings)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThinPlateComparison {
    /// Radial-model temperature at the axis cell [K].
    pub peak_1d: f64,
    /// Mid-plane temperature of the axisymmetric model at the axis cell [K].
    pub peak_2d_midplane: f64,
    /// |peak_1d − peak_2d| / (peak_1d − Tₐ).
    pub peak_rise_rel_deviation: f64,
    /// |peak_1d − peak_2d| / peak_1d.
    pub peak_abs_rel_deviation: f64,
    /// Max over mid-plane cells of |T_2d − T_1d| with T_1d interpolated [K].
    pub profile_max_deviation: f64,
    /// Largest top-to-bottom temperature difference of the 2-D field [K].
    pub through_thickness_variation: f64,
    pub report_1d: SolveReport,
    pub report_2d: SolveReport,
}

pub fn validate_thin_plate(
    params: &DiskParams,
    settings_1d: &SolverSettings,
    settings_2d: &Solver2dSettings,
) -> Result<ThinPlateComparison> {
    let params = params.validate()?;
    let (radial, report_1d) = solve_reduced(&params, settings_1d)?;
    require_converged(&report_1d)?;
    let (full, report_2d) = solve_full(&params, settings_2d)?;
    require_converged(&report_2d)?;
    let mid = extract_midplane(&full);

    let peak_1d = radial.center_value();
    let peak_2d = mid.center_value();
    let diff = (peak_1d - peak_2d).abs();
    let rise = peak_1d - params.t_ambient;
    let peak_rise_rel_deviation = if diff == 0.0 { 0.0 } else { diff / rise };
    let profile_max_deviation = mid
        .grid
        .centers()
        .iter()
        .zip(&mid.values)
        .map(|(&r, &t)| (t - radial.interpolate(r)).abs())
        .fold(0.0, f64::max);

    Ok(ThinPlateComparison {
        peak_1d,
        peak_2d_midplane: peak_2d,
        peak_rise_rel_deviation,
        peak_abs_rel_deviation: diff / peak_1d,
        profile_max_deviation,
        through_thickness_variation: full.max_through_thickness_variation(),
        report_1d,
        report_2d,
    })
}

fn require_converged(rep: &SolveReport) -> Result<()> {
    if rep.converged {
        Ok(())
    } else {
        Err(Error::NotConverged {
            iterations: rep.iterations,
            residual: rep.residual_norm,
        })
    }
}

/// Richardson observed order, or `Exact` when the peak does not change with
/// resolution beyond round-off.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ObservedOrder {
    Order(f64),
    Exact,
}

impl ObservedOrder {
    pub fn within(&self, lo: f64, hi: f64) -> bool {
        match *self {
            ObservedOrder::Exact => true,
            ObservedOrder::Order(p) => p >= lo && p <= hi,
        }
    }
}

impl Serialize for ObservedOrder {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ObservedOrder::Order(p) => s.serialize_f64(*p),
            ObservedOrder::Exact => s.serialize_str("exact"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceStudy {
    pub n_cells: [usize; 3],
    /// Axis-cell temperatures at the three resolutions [K].
    pub peaks: [f64; 3],
    pub observed_order: ObservedOrder,
}

/// Changes below this fraction of the peak count as round-off.
const EXACT_THRESHOLD: f64 = 1e-10;

pub fn convergence_study(
    params: &DiskParams,
    n_base: usize,
    settings: &SolverSettings,
) -> Result<ConvergenceStudy> {
    if n_base < MIN_CONVERGENCE_BASE {
        return Err(Error::Grid(format!(
            "n_base = {n_base}, need at least {MIN_CONVERGENCE_BASE}"
        )));
    }
    let params = params.validate()?;
    let n_cells = [n_base, 2 * n_base, 4 * n_base];
    let mut peaks = [0.0; 3];
    for (peak, &n) in peaks.iter_mut().zip(&n_cells) {
        let (field, rep) = solve_reduced(
            &params,
            &SolverSettings {
                n_cells: n,
                ..*settings
            },
        )?;
        require_converged(&rep)?;
        *peak = field.center_value();
    }
    let coarse = (peaks[0] - peaks[1]).abs();
    let fine = (peaks[1] - peaks[2]).abs();
    let observed_order = if coarse.max(fine) <= EXACT_THRESHOLD * peaks[2].abs() {
        ObservedOrder::Exact
    } else {
        ObservedOrder::Order((coarse / fine).log2())
    };
    Ok(ConvergenceStudy {
        n_cells,
        peaks,
        observed_order,
    })
}

/// Convergence study of the linearised-loss (linear) problem.
pub fn convergence_study_linear(
    params: &DiskParams,
    n_base: usize,
    settings: &SolverSettings,
) -> Result<ConvergenceStudy> {
    let settings = SolverSettings {
        law: RadiationLaw::Linearized,
        ..*settings
    };
    convergence_study(params, n_base, &settings)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_points_are_ordered_with_exact_ends() {
        let spec = SweepSpec::default_for(DiskParams::reference_disk());
        let q = spec.q0_values();
        assert_eq!(q.len(), 25);
        assert_eq!(q[0], 1e6);
        assert_eq!(q[24], 1e9);
        assert!(q.windows(2).all(|w| w[1] > w[0]));
        assert!((q[8] / 1e7 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sweep_spec_validation() {
        let good = SweepSpec::default_for(DiskParams::reference_disk());
        assert!(good.validate().is_ok());
        let single = SweepSpec {
            n_points: 1,
            q0_max: 1e6,
            ..good
        };
        assert!(single.validate().is_ok());
        assert_eq!(single.q0_values(), vec![1e6]);
        assert!(SweepSpec {
            n_points: 1,
            ..good
        }
        .validate()
        .is_err());
        assert!(SweepSpec {
            q0_min: 2e9,
            ..good
        }
        .validate()
        .is_err());
        assert!(SweepSpec {
            q0_min: 0.0,
            ..good
        }
        .validate()
        .is_err());
        let linear = SweepSpec {
            q0_min: 0.0,
            log_spacing: false,
            n_points: 3,
            ..good
        };
        assert!(linear.validate().is_ok());
        assert_eq!(linear.q0_values(), vec![0.0, 5e8, 1e9]);
    }

    #[test]
    fn zero_source_row_is_exact() {
        let rows = run_sweep_points(
            &DiskParams::reference_disk(),
            &[0.0, 1e6],
            &SolverSettings::with_cells(400),
        )
        .unwrap();
        assert_eq!(rows[0].dt_max, 0.0);
        assert_eq!(rows[0].abs_error, 0.0);
        assert!(rows[1].dt_max > 0.0);
    }

    #[test]
    fn failed_points_are_kept() {
        let settings = SolverSettings {
            max_iter: 1,
            ..SolverSettings::with_cells(200)
        };
        let rows = run_sweep_points(&DiskParams::reference_disk(), &[0.0, 1e9], &settings).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows[0].converged);
        assert!(!rows[1].converged);
        assert!(rows[1].abs_error.is_nan());
        assert!(matches!(
            run_sweep_points(&DiskParams::reference_disk(), &[1e9], &settings),
            Err(Error::SweepFailed)
        ));
    }

    #[test]
    fn small_sweep_is_monotone() {
        let spec = SweepSpec {
            n_points: 6,
            n_cells: 500,
            ..SweepSpec::default_for(DiskParams::reference_disk())
        };
        let rows = run_sweep(&spec, &SolverSettings::default()).unwrap();
        for w in rows.windows(2) {
            assert!(w[1].dt_max > w[0].dt_max);
            assert!(w[1].variance > w[0].variance);
            assert!(w[1].t_iso > w[0].t_iso);
        }
        assert!(rows.iter().all(|r| r.t_bar_num <= r.t_iso));
    }

    #[test]
    fn third_order_remainder_scaling() {
        let rows = run_sweep_points(
            &DiskParams::reference_disk(),
            &[1e6, 2e6],
            &SolverSettings::default(),
        )
        .unwrap();
        let ratio = rows[1].abs_error / rows[0].abs_error;
        assert!((4.0..=16.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn thin_plate_comparison_zero_source() {
        let p = DiskParams::reference_disk().with_q0(0.0);
        let s2 = Solver2dSettings {
            nr: 100,
            nz: 4,
            ..Default::default()
        };
        let c = validate_thin_plate(&p, &SolverSettings::with_cells(100), &s2).unwrap();
        assert_eq!(c.peak_1d, 300.0);
        assert_eq!(c.peak_2d_midplane, 300.0);
        assert_eq!(c.peak_rise_rel_deviation, 0.0);
        assert_eq!(c.profile_max_deviation, 0.0);
    }

    #[test]
    fn thick_disk_deviates_more() {
        let s1 = SolverSettings::with_cells(800);
        let s2 = Solver2dSettings {
            nr: 400,
            nz: 8,
            ..Default::default()
        };
        let thin = validate_thin_plate(&DiskParams::reference_disk(), &s1, &s2).unwrap();
        let thick_params = DiskParams {
            thickness: 0.05,
            ..DiskParams::reference_disk()
        };
        let thick = validate_thin_plate(&thick_params, &s1, &s2).unwrap();
        assert!(thin.peak_rise_rel_deviation < 0.01);
        assert!(thick.peak_rise_rel_deviation > thin.peak_rise_rel_deviation);
    }

    #[test]
    fn uniform_source_reports_exact() {
        let p = DiskParams {
            source_radius: 0.1,
            ..DiskParams::reference_disk()
        };
        let study = convergence_study(&p, 60, &SolverSettings::default()).unwrap();
        assert_eq!(study.observed_order, ObservedOrder::Exact);
        assert_eq!(
            serde_json::to_string(&study.observed_order).unwrap(),
            "\"exact\""
        );
    }

    #[test]
    fn convergence_rejects_small_base() {
        assert!(convergence_study(
            &DiskParams::reference_disk(),
            10,
            &SolverSettings::default()
        )
        .is_err());
    }

    #[test]
    fn linearized_problem_is_second_order() {
        let study = convergence_study_linear(
            &DiskParams::reference_disk(),
            250,
            &SolverSettings::default(),
        )
        .unwrap();
        assert!(study.observed_order.within(1.8, 2.2), "{study:?}");
    }
}
