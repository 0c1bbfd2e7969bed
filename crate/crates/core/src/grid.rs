//! Cell-centred radial finite-volume grid with a face on the source edge.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::model::DiskParams;

pub const MIN_CELLS: usize = 8;
const MIN_SEGMENT_CELLS: usize = 2;

#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    faces: Vec<f64>,
    centers: Vec<f64>,
    areas: Vec<f64>,
    /// Cells `0..n_source` lie inside the heated core.
    n_source: usize,
}

impl RadialGrid {
    /// Uniform spacing on `[0, a]` and on `[a, R]`, cell counts proportional
    /// to segment length.
    pub fn build(params: &DiskParams, n_cells: usize) -> Result<Self> {
        if n_cells < MIN_CELLS {
            return Err(Error::Grid(format!(
                "n_cells = {n_cells}, need at least {MIN_CELLS}"
            )));
        }
        let (a, r) = (params.source_radius, params.radius);
        if !(a > 0.0 && a <= r) {
            return Err(Error::Grid(format!("source radius {a} not in (0, {r}]")));
        }
        if a == r {
            let faces = segment(0.0, r, n_cells);
            return Self::from_faces(faces, n_cells);
        }
        let n_in = ((n_cells as f64 * a / r).round() as usize).max(MIN_SEGMENT_CELLS);
        if n_in + MIN_SEGMENT_CELLS > n_cells {
            return Err(Error::Grid(format!(
                "n_cells = {n_cells} cannot hold both the core and the annulus"
            )));
        }
        let mut faces = segment(0.0, a, n_in);
        faces.extend(segment(a, r, n_cells - n_in).into_iter().skip(1));
        Self::from_faces(faces, n_in)
    }

    /// Builds a grid from explicit faces; `n_source` cells are heated.
    pub fn from_faces(faces: Vec<f64>, n_source: usize) -> Result<Self> {
        if faces.len() < 2 || faces[0] != 0.0 {
            return Err(Error::Grid("faces must start at r = 0".into()));
        }
        if faces.windows(2).any(|w| w[1].is_nan() || w[1] <= w[0]) {
            return Err(Error::Grid("faces must be strictly increasing".into()));
        }
        if n_source > faces.len() - 1 {
            return Err(Error::Grid("source cell count exceeds grid".into()));
        }
        let centers = faces.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
        let areas = faces
            .windows(2)
            .map(|w| PI * (w[1] * w[1] - w[0] * w[0]))
            .collect();
        Ok(Self {
            faces,
            centers,
            areas,
            n_source,
        })
    }

    /// Splits every cell in two; the source face stays a face.
    pub fn refined(&self) -> Self {
        let mut faces = Vec::with_capacity(2 * self.faces.len() - 1);
        for w in self.faces.windows(2) {
            faces.push(w[0]);
            faces.push(0.5 * (w[0] + w[1]));
        }
        faces.push(*self.faces.last().unwrap());
        Self::from_faces(faces, 2 * self.n_source).expect("refinement preserves ordering")
    }

    pub fn n_cells(&self) -> usize {
        self.centers.len()
    }

    pub fn faces(&self) -> &[f64] {
        &self.faces
    }

    pub fn centers(&self) -> &[f64] {
        &self.centers
    }

    /// Annulus areas π(r²₊ − r²₋).
    pub fn areas(&self) -> &[f64] {
        &self.areas
    }

    pub fn n_source_cells(&self) -> usize {
        self.n_source
    }

    pub fn radius(&self) -> f64 {
        *self.faces.last().unwrap()
    }

    /// Radius of the face bounding the heated cells.
    pub fn source_edge(&self) -> f64 {
        self.faces[self.n_source]
    }

    pub fn width(&self, i: usize) -> f64 {
        self.faces[i + 1] - self.faces[i]
    }

    pub fn total_area(&self) -> f64 {
        self.areas.iter().sum()
    }
}

fn segment(from: f64, to: f64, n: usize) -> Vec<f64> {
    let step = (to - from) / n as f64;
    let mut v: Vec<f64> = (0..n).map(|i| from + i as f64 * step).collect();
    v.push(to);
    v
}
