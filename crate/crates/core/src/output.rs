//! CSV and JSON writers. Numbers are written with 17 significant digits in
//! Rust's locale-independent formatting; nothing time-dependent is emitted,
//! so identical inputs give byte-identical files.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::experiments::SweepRow;
use crate::solver1d::TemperatureField1D;
use crate::solver2d::TemperatureField2D;

pub const PROFILE_HEADER: &str = "r_m,T_K";
pub const FIELD2D_HEADER: &str = "r_m,z_m,T_K";
pub const SWEEP_HEADER: &str = "q0_W_per_m3,dT_max_K,variance_K2,normalized_variance,t_iso_K,t_bar_num_K,t_bar_anal_K,abs_error_K,converged";

/// Provenance block embedded in every output file.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Metadata {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    /// Effective parameters after config and command-line overrides.
    pub parameters: Value,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Metadata {
    pub fn new(command: &str, parameters: Value) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_owned(),
            parameters,
            notes: Vec::new(),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    fn csv_preamble(&self) -> Result<String> {
        let mut s = format!("# {} {} {}\n", self.tool, self.version, self.command);
        s += &format!(
            "# parameters: {}\n",
            serde_json::to_string(&self.parameters)?
        );
        for n in &self.notes {
            s += &format!("# note: {n}\n");
        }
        Ok(s)
    }
}

pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        // NaN / inf marks a failed point
        format!("{x}")
    }
}

pub fn profile_csv(field: &TemperatureField1D, meta: &Metadata) -> Result<String> {
    let mut s = meta.csv_preamble()?;
    s += PROFILE_HEADER;
    s.push('\n');
    for (r, t) in field.grid.centers().iter().zip(&field.values) {
        s += &format!("{},{}\n", fmt_f64(*r), fmt_f64(*t));
    }
    Ok(s)
}

pub fn field2d_csv(field: &TemperatureField2D, meta: &Metadata) -> Result<String> {
    let mut s = meta.csv_preamble()?;
    s += FIELD2D_HEADER;
    s.push('\n');
    let centers = field.mesh.radial.centers();
    for (i, r) in centers.iter().enumerate() {
        for j in 0..field.mesh.nz {
            let z = field.mesh.z_center(j);
            s += &format!(
                "{},{},{}\n",
                fmt_f64(*r),
                fmt_f64(z),
                fmt_f64(field.at(i, j))
            );
        }
    }
    Ok(s)
}

pub fn sweep_csv(rows: &[SweepRow], meta: &Metadata) -> Result<String> {
    let mut s = meta.csv_preamble()?;
    s += SWEEP_HEADER;
    s.push('\n');
    for r in rows {
        let cols = [
            r.q0,
            r.dt_max,
            r.variance,
            r.normalized_variance,
            r.t_iso,
            r.t_bar_num,
            r.t_bar_anal,
            r.abs_error,
        ];
        let nums: Vec<String> = cols.iter().map(|&x| fmt_f64(x)).collect();
        s += &format!("{},{}\n", nums.join(","), r.converged);
    }
    Ok(s)
}

/// `{"metadata": …, <payload fields>}` pretty-printed. NaN values become
/// `null`.
pub fn json_document<T: Serialize>(payload: &T, meta: &Metadata) -> Result<String> {
    let mut doc = serde_json::Map::new();
    doc.insert("metadata".into(), serde_json::to_value(meta)?);
    match serde_json::to_value(payload)? {
        Value::Object(fields) => doc.extend(fields),
        other => {
            doc.insert("data".into(), other);
        }
    }
    let mut s = serde_json::to_string_pretty(&Value::Object(doc))?;
    s.push('\n');
    Ok(s)
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    let io_err = |source| Error::Io {
        path: path.to_owned(),
        source,
    };
    let mut f = fs::File::create(path).map_err(io_err)?;
    f.write_all(contents.as_bytes()).map_err(io_err)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::RadialGrid;
    use crate::model::DiskParams;
    use crate::stats::FieldStats;

    fn meta() -> Metadata {
        Metadata::new("solve", serde_json::json!({"q0": 1e9}))
    }

    #[test]
    fn float_format_round_trips() {
        for x in [0.1, 318.607_575_936_375_6, 1e-300, 5.670374419e-8] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
            assert!(!s.contains(' '));
        }
        assert_eq!(fmt_f64(f64::NAN), "NaN");
    }

    #[test]
    fn profile_has_header_after_metadata() {
        let g = RadialGrid::build(&DiskParams::reference_disk(), 10).unwrap();
        let f = TemperatureField1D::uniform(g, 300.0);
        let csv = profile_csv(&f, &meta()).unwrap();
        let body: Vec<&str> = csv.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(body[0], PROFILE_HEADER);
        assert_eq!(body.len(), 11);
        assert!(csv.lines().next().unwrap().starts_with("# thermovar"));
    }

    #[test]
    fn stats_json_has_exact_field_names() {
        let stats = FieldStats {
            t_bar: 1.0,
            mean_t4: 2.0,
            variance: 3.0,
            dt_max: 4.0,
            t_iso: 5.0,
            t_bar_anal: 6.0,
            identity_residual: 7.0,
            relation_error: 8.0,
            normalized_variance: 9.0,
        };
        let doc: Value = serde_json::from_str(&json_document(&stats, &meta()).unwrap()).unwrap();
        let obj = doc.as_object().unwrap();
        for key in [
            "t_bar",
            "mean_t4",
            "variance",
            "dt_max",
            "t_iso",
            "t_bar_anal",
            "identity_residual",
            "relation_error",
            "normalized_variance",
            "metadata",
        ] {
            assert!(obj.contains_key(key), "{key}");
        }
        assert_eq!(obj.len(), 10);
    }
}
