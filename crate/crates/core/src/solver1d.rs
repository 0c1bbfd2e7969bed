//! Depth-averaged radial problem
//!
//! ```text
//! (1/r) d/dr (r dT/dr) − α (T⁴ − Tₐ⁴) + Q(r)/k = 0,   T'(0) = T'(R) = 0
//! ```
//!
//! discretised by cell-centred finite volumes and solved with damped Newton.
//! Residuals carry the units of the equation above (K·m⁻²).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::RadialGrid;
use crate::linalg::Tridiagonal;
use crate::model::DiskParams;
pub use crate::newton::max_norm;
use crate::newton::{damped_newton, NewtonSystem};

pub const DEFAULT_CELLS: usize = 2000;
pub const DEFAULT_MAX_ITER: usize = 50;
/// Default tolerance as a fraction of α·Tₐ⁴.
pub const DEFAULT_REL_TOL: f64 = 1e-8;

/// Surface loss law. `Linearized` replaces T⁴ − Tₐ⁴ by 4Tₐ³(T − Tₐ) and
/// turns the problem into a linear one.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RadiationLaw {
    #[default]
    StefanBoltzmann,
    Linearized,
}

impl RadiationLaw {
    /// Radiated excess per unit emissive power, with its T-derivative.
    pub(crate) fn excess(self, t: f64, ta: f64) -> (f64, f64) {
        match self {
            // (T − Tₐ)(T + Tₐ)(T² + Tₐ²) keeps precision when T ≈ Tₐ.
            RadiationLaw::StefanBoltzmann => {
                ((t - ta) * (t + ta) * (t * t + ta * ta), 4.0 * t * t * t)
            }
            RadiationLaw::Linearized => {
                let slope = 4.0 * ta * ta * ta;
                (slope * (t - ta), slope)
            }
        }
    }
}

pub fn default_tolerance(params: &DiskParams) -> f64 {
    DEFAULT_REL_TOL * params.alpha() * params.t_ambient.powi(4)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolverSettings {
    pub n_cells: usize,
    /// Max-norm residual tolerance; `None` selects [`default_tolerance`].
    pub tol: Option<f64>,
    pub max_iter: usize,
    pub law: RadiationLaw,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            n_cells: DEFAULT_CELLS,
            tol: None,
            max_iter: DEFAULT_MAX_ITER,
            law: RadiationLaw::StefanBoltzmann,
        }
    }
}

impl SolverSettings {
    pub fn with_cells(n_cells: usize) -> Self {
        Self {
            n_cells,
            ..Self::default()
        }
    }

    pub fn tolerance(&self, params: &DiskParams) -> f64 {
        self.tol.unwrap_or_else(|| default_tolerance(params))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolveReport {
    pub converged: bool,
    /// Newton steps taken.
    pub iterations: usize,
    pub residual_norm: f64,
    pub damping_events: usize,
    /// Tolerance actually applied: the requested one, raised to the
    /// round-off floor on very fine grids.
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TemperatureField1D {
    pub grid: RadialGrid,
    /// Cell-centre temperatures [K].
    pub values: Vec<f64>,
}

impl TemperatureField1D {
    pub fn uniform(grid: RadialGrid, t: f64) -> Self {
        let values = vec![t; grid.n_cells()];
        Self { grid, values }
    }

    /// Temperature of the cell touching the axis.
    pub fn center_value(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Piecewise-linear interpolation between cell centres, constant beyond
    /// the first and last centre.
    pub fn interpolate(&self, r: f64) -> f64 {
        let c = self.grid.centers();
        let n = c.len();
        if r <= c[0] {
            return self.values[0];
        }
        if r >= c[n - 1] {
            return self.values[n - 1];
        }
        let j = c.partition_point(|&x| x <= r);
        let (r0, r1) = (c[j - 1], c[j]);
        let w = (r - r0) / (r1 - r0);
        self.values[j - 1] * (1.0 - w) + self.values[j] * w
    }

    fn check_positive(&self) -> Result<()> {
        match self.values.iter().position(|&t| t.is_nan() || t <= 0.0) {
            Some(cell) => Err(Error::NonPositiveTemperature {
                cell,
                value: self.values[cell],
            }),
            None => Ok(()),
        }
    }
}

/// Discrete operator on a fixed grid.
struct Discretization<'a> {
    grid: &'a RadialGrid,
    alpha: f64,
    t_ambient: f64,
    source_over_k: f64,
    law: RadiationLaw,
    /// r₊/(c_{i+1} − c_i) for the interior face right of cell i.
    face_coeff: Vec<f64>,
    /// (r₊² − r₋²)/2, equal to r_i·Δr_i.
    volume: Vec<f64>,
}

impl<'a> Discretization<'a> {
    fn new(grid: &'a RadialGrid, params: &DiskParams, law: RadiationLaw) -> Self {
        let f = grid.faces();
        let c = grid.centers();
        let face_coeff = (0..grid.n_cells().saturating_sub(1))
            .map(|i| f[i + 1] / (c[i + 1] - c[i]))
            .collect();
        let volume = f
            .windows(2)
            .map(|w| 0.5 * (w[1] * w[1] - w[0] * w[0]))
            .collect();
        Self {
            grid,
            alpha: params.alpha(),
            t_ambient: params.t_ambient,
            source_over_k: params.q0 / params.conductivity,
            law,
            face_coeff,
            volume,
        }
    }
}

impl NewtonSystem for Discretization<'_> {
    type Jacobian = Tridiagonal;

    fn residual(&self, t: &[f64]) -> Vec<f64> {
        let n = t.len();
        let ns = self.grid.n_source_cells();
        (0..n)
            .map(|i| {
                // The axis face has r = 0 and the rim face is adiabatic.
                let right = if i + 1 < n {
                    self.face_coeff[i] * (t[i + 1] - t[i])
                } else {
                    0.0
                };
                let left = if i > 0 {
                    self.face_coeff[i - 1] * (t[i] - t[i - 1])
                } else {
                    0.0
                };
                let (excess, _) = self.law.excess(t[i], self.t_ambient);
                let src = if i < ns { self.source_over_k } else { 0.0 };
                (right - left) / self.volume[i] - self.alpha * excess + src
            })
            .collect()
    }

    #[allow(clippy::needless_range_loop)]
    fn jacobian(&self, t: &[f64]) -> Tridiagonal {
        let n = t.len();
        let mut jac = Tridiagonal::zeros(n);
        for i in 0..n {
            let v = self.volume[i];
            let mut diag = 0.0;
            if i + 1 < n {
                jac.upper[i] = self.face_coeff[i] / v;
                diag -= self.face_coeff[i] / v;
            }
            if i > 0 {
                jac.lower[i] = self.face_coeff[i - 1] / v;
                diag -= self.face_coeff[i - 1] / v;
            }
            let (_, slope) = self.law.excess(t[i], self.t_ambient);
            jac.diag[i] = diag - self.alpha * slope;
        }
        jac
    }

    fn row_magnitude(&self, jac: &Tridiagonal, t: &[f64]) -> f64 {
        let n = t.len();
        (0..n)
            .map(|i| {
                let mut s = (jac.diag[i] * t[i]).abs();
                if i > 0 {
                    s += (jac.lower[i] * t[i - 1]).abs();
                }
                if i + 1 < n {
                    s += (jac.upper[i] * t[i + 1]).abs();
                }
                s
            })
            .fold(0.0, f64::max)
    }

    fn solve(&self, jac: Tridiagonal, rhs: &[f64]) -> Result<Vec<f64>> {
        jac.solve(rhs)
    }
}

pub fn residual(field: &TemperatureField1D, params: &DiskParams) -> Result<Vec<f64>> {
    residual_with(field, params, RadiationLaw::StefanBoltzmann)
}

pub fn residual_with(
    field: &TemperatureField1D,
    params: &DiskParams,
    law: RadiationLaw,
) -> Result<Vec<f64>> {
    field.check_positive()?;
    Ok(Discretization::new(&field.grid, params, law).residual(&field.values))
}

/// Analytic Jacobian of [`residual`].
pub fn jacobian(field: &TemperatureField1D, params: &DiskParams) -> Result<Tridiagonal> {
    jacobian_with(field, params, RadiationLaw::StefanBoltzmann)
}

pub fn jacobian_with(
    field: &TemperatureField1D,
    params: &DiskParams,
    law: RadiationLaw,
) -> Result<Tridiagonal> {
    field.check_positive()?;
    Ok(Discretization::new(&field.grid, params, law).jacobian(&field.values))
}

/// Builds the default grid for `settings.n_cells` and solves on it.
pub fn solve_reduced(
    params: &DiskParams,
    settings: &SolverSettings,
) -> Result<(TemperatureField1D, SolveReport)> {
    let grid = RadialGrid::build(params, settings.n_cells)?;
    solve_on_grid(params, grid, settings)
}

/// Damped Newton from T ≡ Tₐ. A report with `converged = false` is returned
/// (not an error) when the iteration budget runs out or the residual stalls.
pub fn solve_on_grid(
    params: &DiskParams,
    grid: RadialGrid,
    settings: &SolverSettings,
) -> Result<(TemperatureField1D, SolveReport)> {
    let tol = settings.tolerance(params);
    let disc = Discretization::new(&grid, params, settings.law);
    let initial = vec![params.t_ambient; grid.n_cells()];
    let (t, report) = damped_newton(&disc, initial, tol, settings.max_iter)?;
    Ok((TemperatureField1D { grid, values: t }, report))
}
