//! Steady radiative-conductive disk: radial and axisymmetric solvers plus the
//! area statistics relating the mean temperature to the temperature variance.

pub mod cli;
pub mod error;
pub mod experiments;
pub mod grid;
pub mod linalg;
pub mod model;
mod newton;
pub mod output;
pub mod solver1d;
pub mod solver2d;
pub mod stats;

pub use error::{Error, Result};
pub use grid::RadialGrid;
pub use model::{DerivedParams, DiskParams, SourceProfile};
pub use solver1d::{solve_reduced, RadiationLaw, SolveReport, SolverSettings, TemperatureField1D};
pub use solver2d::{extract_midplane, solve_full, Solver2dSettings, TemperatureField2D};
pub use stats::{area_mean, compute_stats, two_point_variance, FieldStats};
