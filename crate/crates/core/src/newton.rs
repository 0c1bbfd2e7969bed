//! Damped Newton iteration shared by the radial and axisymmetric solvers.

use crate::error::Result;
use crate::solver1d::SolveReport;

pub const MAX_HALVINGS: usize = 30;
const ROUNDOFF_ULPS: f64 = 2.0;

pub(crate) trait NewtonSystem {
    type Jacobian;

    fn residual(&self, t: &[f64]) -> Vec<f64>;
    fn jacobian(&self, t: &[f64]) -> Self::Jacobian;
    /// maxᵢ Σⱼ |Jᵢⱼ·Tⱼ|, the magnitude against which round-off is measured.
    fn row_magnitude(&self, jac: &Self::Jacobian, t: &[f64]) -> f64;
    /// Solves J·δ = rhs.
    fn solve(&self, jac: Self::Jacobian, rhs: &[f64]) -> Result<Vec<f64>>;
}

pub fn max_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Newton with step halving whenever the max-norm residual fails to drop or
/// a trial state leaves T > 0. Stops unconverged after `max_iter` steps or
/// when no halving of a step helps.
///
/// The applied tolerance is `tol` raised to a round-off floor of a few ulps
/// of the Jacobian row magnitudes; on fine grids `tol` alone is unreachable
/// in f64.
pub(crate) fn damped_newton<S: NewtonSystem>(
    system: &S,
    mut t: Vec<f64>,
    tol: f64,
    max_iter: usize,
) -> Result<(Vec<f64>, SolveReport)> {
    let mut res = system.residual(&t);
    let mut norm = max_norm(&res);
    let mut report = SolveReport {
        converged: false,
        iterations: 0,
        residual_norm: norm,
        damping_events: 0,
        tolerance: tol,
    };

    loop {
        let jac = system.jacobian(&t);
        let floor = ROUNDOFF_ULPS * f64::EPSILON * system.row_magnitude(&jac, &t);
        report.tolerance = tol.max(floor);
        if norm <= report.tolerance {
            report.converged = true;
            break;
        }
        if report.iterations >= max_iter {
            break;
        }
        let rhs: Vec<f64> = res.iter().map(|r| -r).collect();
        let step = system.solve(jac, &rhs)?;
        report.iterations += 1;

        let mut lambda = 1.0;
        let mut accepted = None;
        for halving in 0..=MAX_HALVINGS {
            if halving > 0 {
                lambda *= 0.5;
                report.damping_events += 1;
            }
            let trial: Vec<f64> = t.iter().zip(&step).map(|(x, d)| x + lambda * d).collect();
            if trial.iter().any(|&x| x.is_nan() || x <= 0.0) {
                continue;
            }
            let trial_res = system.residual(&trial);
            let trial_norm = max_norm(&trial_res);
            if trial_norm < norm {
                accepted = Some((trial, trial_res, trial_norm));
                break;
            }
        }
        let Some((trial, trial_res, trial_norm)) = accepted else {
            log::debug!(
                "newton stalled at residual {norm:e} after {} steps",
                report.iterations
            );
            break;
        };
        t = trial;
        res = trial_res;
        norm = trial_norm;
        report.residual_norm = norm;
    }
    Ok((t, report))
}
