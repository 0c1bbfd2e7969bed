//! Axisymmetric (r, z) conduction in the full disk thickness, radiating from
//! the top face only. Used to check the depth-averaged radial model.
//!
//! Unknowns are ordered column by column (`i * nz + j`, `j = 0` at the
//! bottom), so the Newton matrix is banded with half-width `nz`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::RadialGrid;
use crate::linalg::BandMatrix;
use crate::model::DiskParams;
use crate::newton::{damped_newton, NewtonSystem};
use crate::solver1d::{default_tolerance, RadiationLaw, SolveReport, TemperatureField1D};

pub const DEFAULT_NR: usize = 800;
pub const DEFAULT_NZ: usize = 10;
pub const MIN_NZ: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Solver2dSettings {
    pub nr: usize,
    pub nz: usize,
    pub tol: Option<f64>,
    pub max_iter: usize,
}

impl Default for Solver2dSettings {
    fn default() -> Self {
        Self {
            nr: DEFAULT_NR,
            nz: DEFAULT_NZ,
            tol: None,
            max_iter: crate::solver1d::DEFAULT_MAX_ITER,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mesh2D {
    pub radial: RadialGrid,
    pub nz: usize,
    pub thickness: f64,
}

impl Mesh2D {
    pub fn build(params: &DiskParams, nr: usize, nz: usize) -> Result<Self> {
        if nz < MIN_NZ {
            return Err(Error::Grid(format!("nz = {nz}, need at least {MIN_NZ}")));
        }
        Ok(Self {
            radial: RadialGrid::build(params, nr)?,
            nz,
            thickness: params.thickness,
        })
    }

    pub fn nr(&self) -> usize {
        self.radial.n_cells()
    }

    pub fn dz(&self) -> f64 {
        self.thickness / self.nz as f64
    }

    pub fn z_center(&self, j: usize) -> f64 {
        (j as f64 + 0.5) * self.dz()
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.nz + j
    }

    pub fn volume(&self, i: usize) -> f64 {
        self.radial.areas()[i] * self.dz()
    }

    pub fn total_volume(&self) -> f64 {
        (0..self.nr())
            .map(|i| self.volume(i) * self.nz as f64)
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TemperatureField2D {
    pub mesh: Mesh2D,
    /// T at cell centres, indexed by [`Mesh2D::index`].
    pub values: Vec<f64>,
}

impl TemperatureField2D {
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[self.mesh.index(i, j)]
    }

    pub fn column(&self, i: usize) -> &[f64] {
        let nz = self.mesh.nz;
        &self.values[i * nz..(i + 1) * nz]
    }

    /// Largest top-to-bottom temperature difference over all columns.
    pub fn max_through_thickness_variation(&self) -> f64 {
        (0..self.mesh.nr())
            .map(|i| {
                let c = self.column(i);
                (c[c.len() - 1] - c[0]).abs()
            })
            .fold(0.0, f64::max)
    }

    pub fn top_layer(&self) -> Vec<f64> {
        (0..self.mesh.nr())
            .map(|i| self.at(i, self.mesh.nz - 1))
            .collect()
    }
}

/// Radial profile at z = h/2: the middle layer for odd `nz`, the mean of the
/// two straddling layers for even `nz`.
pub fn extract_midplane(field: &TemperatureField2D) -> TemperatureField1D {
    let nz = field.mesh.nz;
    let values = (0..field.mesh.nr())
        .map(|i| {
            let c = field.column(i);
            if nz % 2 == 1 {
                c[nz / 2]
            } else {
                0.5 * (c[nz / 2 - 1] + c[nz / 2])
            }
        })
        .collect();
    TemperatureField1D {
        grid: field.mesh.radial.clone(),
        values,
    }
}

/// Finite-volume operator divided by k·V, so residuals share the units of
/// the radial model (K·m⁻²).
struct Axisymmetric<'a> {
    mesh: &'a Mesh2D,
    /// r₊/(c_{i+1} − c_i) / ((r₊² − r₋²)/2) for the face right of cell i,
    /// seen from cell i and from cell i+1 respectively.
    radial_out: Vec<f64>,
    radial_in: Vec<f64>,
    inv_dz2: f64,
    /// εσ/(k·Δz): top-face loss per unit cell volume.
    top_loss: f64,
    source_over_k: f64,
    t_ambient: f64,
}

impl<'a> Axisymmetric<'a> {
    fn new(mesh: &'a Mesh2D, params: &DiskParams) -> Self {
        let f = mesh.radial.faces();
        let c = mesh.radial.centers();
        let half_vol: Vec<f64> = f
            .windows(2)
            .map(|w| 0.5 * (w[1] * w[1] - w[0] * w[0]))
            .collect();
        let nr = mesh.nr();
        let coeff: Vec<f64> = (0..nr - 1).map(|i| f[i + 1] / (c[i + 1] - c[i])).collect();
        let radial_out = (0..nr - 1).map(|i| coeff[i] / half_vol[i]).collect();
        let radial_in = (0..nr - 1).map(|i| coeff[i] / half_vol[i + 1]).collect();
        let dz = mesh.dz();
        Self {
            mesh,
            radial_out,
            radial_in,
            inv_dz2: 1.0 / (dz * dz),
            top_loss: params.emissivity * params.sigma / (params.conductivity * dz),
            source_over_k: params.q0 / params.conductivity,
            t_ambient: params.t_ambient,
        }
    }

    /// Visits every coupling (row, col, coefficient) of the conduction
    /// stencil, excluding diagonals.
    fn for_each_link(&self, mut visit: impl FnMut(usize, usize, f64)) {
        let (nr, nz) = (self.mesh.nr(), self.mesh.nz);
        for i in 0..nr {
            for j in 0..nz {
                let k = self.mesh.index(i, j);
                if i + 1 < nr {
                    visit(k, k + nz, self.radial_out[i]);
                }
                if i > 0 {
                    visit(k, k - nz, self.radial_in[i - 1]);
                }
                if j + 1 < nz {
                    visit(k, k + 1, self.inv_dz2);
                }
                if j > 0 {
                    visit(k, k - 1, self.inv_dz2);
                }
            }
        }
    }
}

impl NewtonSystem for Axisymmetric<'_> {
    type Jacobian = BandMatrix;

    fn residual(&self, t: &[f64]) -> Vec<f64> {
        let (nz, ns) = (self.mesh.nz, self.mesh.radial.n_source_cells());
        let mut res: Vec<f64> = (0..t.len())
            .map(|k| {
                let i = k / nz;
                let j = k % nz;
                let src = if i < ns { self.source_over_k } else { 0.0 };
                let loss = if j + 1 == nz {
                    self.top_loss * RadiationLaw::StefanBoltzmann.excess(t[k], self.t_ambient).0
                } else {
                    0.0
                };
                src - loss
            })
            .collect();
        self.for_each_link(|row, col, c| res[row] += c * (t[col] - t[row]));
        res
    }

    fn jacobian(&self, t: &[f64]) -> BandMatrix {
        let nz = self.mesh.nz;
        let mut jac = BandMatrix::zeros(t.len(), nz);
        self.for_each_link(|row, col, c| {
            jac.add(row, col, c);
            jac.add(row, row, -c);
        });
        for i in 0..self.mesh.nr() {
            let k = self.mesh.index(i, nz - 1);
            let slope = RadiationLaw::StefanBoltzmann.excess(t[k], self.t_ambient).1;
            jac.add(k, k, -self.top_loss * slope);
        }
        jac
    }

    fn row_magnitude(&self, jac: &BandMatrix, t: &[f64]) -> f64 {
        let (n, bw) = (jac.dim(), jac.bandwidth());
        (0..n)
            .map(|i| {
                (i.saturating_sub(bw)..=(i + bw).min(n - 1))
                    .map(|j| (jac.get(i, j) * t[j]).abs())
                    .sum::<f64>()
            })
            .fold(0.0, f64::max)
    }

    fn solve(&self, jac: BandMatrix, rhs: &[f64]) -> Result<Vec<f64>> {
        jac.solve(rhs)
    }
}

/// Residual of the axisymmetric operator, one entry per cell.
pub fn residual_2d(field: &TemperatureField2D, params: &DiskParams) -> Result<Vec<f64>> {
    if let Some(k) = field.values.iter().position(|&t| t.is_nan() || t <= 0.0) {
        return Err(Error::NonPositiveTemperature {
            cell: k,
            value: field.values[k],
        });
    }
    Ok(Axisymmetric::new(&field.mesh, params).residual(&field.values))
}

/// Damped Newton from T ≡ Tₐ with a banded direct solve per step.
pub fn solve_full(
    params: &DiskParams,
    settings: &Solver2dSettings,
) -> Result<(TemperatureField2D, SolveReport)> {
    let mesh = Mesh2D::build(params, settings.nr, settings.nz)?;
    let tol = settings.tol.unwrap_or_else(|| default_tolerance(params));
    let system = Axisymmetric::new(&mesh, params);
    let initial = vec![params.t_ambient; mesh.nr() * mesh.nz];
    let (values, report) = damped_newton(&system, initial, tol, settings.max_iter)?;
    Ok((TemperatureField2D { mesh, values }, report))
}
