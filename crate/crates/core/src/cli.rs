//! Command-line front end: `solve`, `validate`, `sweep`, `convergence`.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 numerical
//! failure or a failed acceptance check.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::Error;
use crate::experiments::{
    convergence_study, run_sweep, validate_thin_plate, SweepSpec, DEFAULT_SWEEP_POINTS,
    DEFAULT_SWEEP_Q0_MAX, DEFAULT_SWEEP_Q0_MIN,
};
use crate::model::DiskParams;
use crate::output::{self, Metadata};
use crate::solver1d::{
    solve_reduced, RadiationLaw, SolverSettings, DEFAULT_CELLS, DEFAULT_MAX_ITER,
};
use crate::solver2d::{Solver2dSettings, DEFAULT_NR, DEFAULT_NZ, MIN_NZ};
use crate::stats::compute_stats;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;

/// Acceptance threshold on the relative peak-rise deviation.
pub const THIN_PLATE_MAX_DEVIATION: f64 = 0.01;
pub const ORDER_RANGE: (f64, f64) = (1.8, 2.2);

#[derive(Debug, Parser)]
#[command(
    name = "thermovar",
    version,
    about = "Radiative-conductive disk solver"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve the radial model; writes profile.csv and stats.json.
    Solve(RunArgs),
    /// Compare the radial model with the axisymmetric one; writes validation.json.
    Validate(RunArgs),
    /// Sweep the source density; writes sweep.csv.
    Sweep(RunArgs),
    /// Richardson grid-convergence study; writes convergence.json.
    Convergence(RunArgs),
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// JSON run configuration (defaults to the reference ceramic disk).
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Source density override [W/m³].
    #[arg(long)]
    pub q0: Option<f64>,
    /// Radial cell count override.
    #[arg(long = "n-cells")]
    pub n_cells: Option<usize>,
    /// Newton residual tolerance override.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Output formats.
    #[arg(long, value_delimiter = ',')]
    pub format: Option<Vec<Format>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub disk: DiskParams,
    #[serde(default)]
    pub solver: SolverSection,
    #[serde(default)]
    pub solver2d: Solver2dSection,
    #[serde(default)]
    pub sweep: SweepSection,
    #[serde(default)]
    pub convergence: ConvergenceSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverSection {
    pub n_cells: usize,
    pub tol: Option<f64>,
    pub max_iter: usize,
}

impl Default for SolverSection {
    fn default() -> Self {
        Self {
            n_cells: DEFAULT_CELLS,
            tol: None,
            max_iter: DEFAULT_MAX_ITER,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Solver2dSection {
    pub nr: usize,
    pub nz: usize,
}

impl Default for Solver2dSection {
    fn default() -> Self {
        Self {
            nr: DEFAULT_NR,
            nz: DEFAULT_NZ,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepSection {
    pub q0_min: f64,
    pub q0_max: f64,
    pub n_points: usize,
    pub log_spacing: bool,
    /// Falls back to `solver.n_cells`.
    pub n_cells: Option<usize>,
}

impl Default for SweepSection {
    fn default() -> Self {
        Self {
            q0_min: DEFAULT_SWEEP_Q0_MIN,
            q0_max: DEFAULT_SWEEP_Q0_MAX,
            n_points: DEFAULT_SWEEP_POINTS,
            log_spacing: true,
            n_cells: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConvergenceSection {
    pub n_base: usize,
    /// Use the linearised loss 4Tₐ³(T − Tₐ) instead of T⁴ − Tₐ⁴.
    pub linearized: bool,
}

impl Default for ConvergenceSection {
    fn default() -> Self {
        Self {
            n_base: 250,
            linearized: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    pub directory: PathBuf,
    pub formats: Vec<Format>,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            directory: PathBuf::from("out"),
            formats: vec![Format::Csv, Format::Json],
        }
    }
}

impl RunConfig {
    pub fn with_disk(disk: DiskParams) -> Self {
        Self {
            disk,
            solver: SolverSection::default(),
            solver2d: Solver2dSection::default(),
            sweep: SweepSection::default(),
            convergence: ConvergenceSection::default(),
            output: OutputSection::default(),
        }
    }

    pub fn load(path: &Path) -> Result<Self, Error> {
        let text = fs::read_to_string(path).map_err(|e| Error::Config {
            path: path.to_owned(),
            reason: e.to_string(),
        })?;
        serde_json::from_str(&text).map_err(|e| Error::Config {
            path: path.to_owned(),
            reason: e.to_string(),
        })
    }

    /// Command-line flags applied over the file values.
    pub fn apply(&mut self, args: &RunArgs) {
        if let Some(dir) = &args.out {
            self.output.directory = dir.clone();
        }
        if let Some(q0) = args.q0 {
            self.disk.q0 = q0;
        }
        if let Some(n) = args.n_cells {
            self.solver.n_cells = n;
            self.sweep.n_cells = Some(n);
        }
        if let Some(tol) = args.tol {
            self.solver.tol = Some(tol);
        }
        if let Some(formats) = &args.format {
            self.output.formats = formats.clone();
        }
    }

    pub fn solver_settings(&self) -> SolverSettings {
        SolverSettings {
            n_cells: self.solver.n_cells,
            tol: self.solver.tol,
            max_iter: self.solver.max_iter,
            law: RadiationLaw::StefanBoltzmann,
        }
    }

    pub fn solver2d_settings(&self) -> Solver2dSettings {
        Solver2dSettings {
            nr: self.solver2d.nr,
            nz: self.solver2d.nz,
            tol: self.solver.tol,
            max_iter: self.solver.max_iter,
        }
    }

    pub fn sweep_spec(&self) -> SweepSpec {
        SweepSpec {
            q0_min: self.sweep.q0_min,
            q0_max: self.sweep.q0_max,
            n_points: self.sweep.n_points,
            log_spacing: self.sweep.log_spacing,
            base: self.disk,
            n_cells: self.sweep.n_cells.unwrap_or(self.solver.n_cells),
        }
    }

    fn wants(&self, f: Format) -> bool {
        self.output.formats.contains(&f)
    }
}

/// Terminal outcome of a subcommand, mapped onto the exit code.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Numerical(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NonPositiveTemperature { .. }
            | Error::Singular { .. }
            | Error::NotConverged { .. }
            | Error::SweepFailed => Failure::Numerical(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type CmdResult = Result<(), Failure>;

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match &cli.command {
        Command::Solve(a) => prepare(a).and_then(|c| cmd_solve(&c)),
        Command::Validate(a) => prepare(a).and_then(|c| cmd_validate(&c)),
        Command::Sweep(a) => prepare(a).and_then(|c| cmd_sweep(&c)),
        Command::Convergence(a) => prepare(a).and_then(|c| cmd_convergence(&c)),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("numerical failure: {msg}");
            EXIT_NUMERICAL
        }
    }
}

fn prepare(args: &RunArgs) -> Result<RunConfig, Failure> {
    let mut config = match &args.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::with_disk(DiskParams::reference_disk()),
    };
    config.apply(args);
    config.disk = config.disk.validate()?;
    if config.output.formats.is_empty() {
        return Err(Failure::Usage("no output format selected".into()));
    }
    let dir = &config.output.directory;
    fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.clone(),
        source,
    })?;
    Ok(config)
}

fn write(config: &RunConfig, name: &str, contents: &str) -> Result<(), Failure> {
    let path = config.output.directory.join(name);
    output::write_file(&path, contents)?;
    log::info!("wrote {}", path.display());
    Ok(())
}

fn cmd_solve(config: &RunConfig) -> CmdResult {
    let params = config.disk;
    let settings = config.solver_settings();
    let (field, report) = solve_reduced(&params, &settings)?;
    let stats = compute_stats(&field, &params)?;
    let meta = Metadata::new(
        "solve",
        json!({ "disk": params, "solver": settings, "report": report }),
    );
    if config.wants(Format::Csv) {
        write(config, "profile.csv", &output::profile_csv(&field, &meta)?)?;
    }
    if config.wants(Format::Json) {
        write(config, "stats.json", &output::json_document(&stats, &meta)?)?;
    }
    println!(
        "t_iso = {:.6} K, t_bar = {:.6} K, variance = {:.6e} K^2, identity_residual = {:.3e}",
        stats.t_iso, stats.t_bar, stats.variance, stats.identity_residual
    );
    if !report.converged {
        return Err(Failure::Numerical(format!(
            "Newton did not converge: {} iterations, residual {:e}",
            report.iterations, report.residual_norm
        )));
    }
    Ok(())
}

fn cmd_validate(config: &RunConfig) -> CmdResult {
    let s2 = config.solver2d_settings();
    if s2.nz < MIN_NZ {
        return Err(Failure::Usage(format!(
            "solver2d.nz = {}, need at least {MIN_NZ}",
            s2.nz
        )));
    }
    let s1 = config.solver_settings();
    let cmp = validate_thin_plate(&config.disk, &s1, &s2)?;
    let meta = Metadata::new(
        "validate",
        json!({ "disk": config.disk, "solver": s1, "solver2d": s2 }),
    );
    write(
        config,
        "validation.json",
        &output::json_document(&cmp, &meta)?,
    )?;
    println!(
        "peak 1d = {:.6} K, peak 2d mid-plane = {:.6} K, peak-rise deviation = {:.4}%",
        cmp.peak_1d,
        cmp.peak_2d_midplane,
        100.0 * cmp.peak_rise_rel_deviation
    );
    if cmp.peak_rise_rel_deviation >= THIN_PLATE_MAX_DEVIATION {
        return Err(Failure::Numerical(format!(
            "peak-rise deviation {:.4}% is not below {}%",
            100.0 * cmp.peak_rise_rel_deviation,
            100.0 * THIN_PLATE_MAX_DEVIATION
        )));
    }
    Ok(())
}

fn cmd_sweep(config: &RunConfig) -> CmdResult {
    let spec = config.sweep_spec();
    spec.validate()?;
    let settings = config.solver_settings();
    let rows = run_sweep(&spec, &settings)?;
    let mut meta = Metadata::new("sweep", json!({ "sweep": spec, "solver": settings }));
    let d = SweepSection::default();
    let s = &config.sweep;
    if (s.q0_min, s.q0_max, s.n_points, s.log_spacing)
        == (d.q0_min, d.q0_max, d.n_points, d.log_spacing)
    {
        meta = meta.with_note(
            "default sweep grid: 25 log-spaced q0 values in [1e6, 1e9] W/m^3 (tool choice)",
        );
    }
    if config.wants(Format::Csv) {
        write(config, "sweep.csv", &output::sweep_csv(&rows, &meta)?)?;
    }
    if config.wants(Format::Json) {
        write(
            config,
            "sweep.json",
            &output::json_document(&json!({ "rows": rows }), &meta)?,
        )?;
    }
    let failed = rows.iter().filter(|r| !r.converged).count();
    println!("{} points, {} failed", rows.len(), failed);
    if failed > 0 {
        return Err(Failure::Numerical(format!(
            "{failed} sweep points did not converge"
        )));
    }
    Ok(())
}

fn cmd_convergence(config: &RunConfig) -> CmdResult {
    let mut settings = config.solver_settings();
    if config.convergence.linearized {
        settings.law = RadiationLaw::Linearized;
    }
    let n_base = config.convergence.n_base;
    let study = convergence_study(&config.disk, n_base, &settings)?;
    let meta = Metadata::new(
        "convergence",
        json!({ "disk": config.disk, "solver": settings, "n_base": n_base }),
    );
    write(
        config,
        "convergence.json",
        &output::json_document(&study, &meta)?,
    )?;
    println!(
        "peaks {:?} K, observed order {}",
        study.peaks,
        serde_json::to_string(&study.observed_order).unwrap_or_default()
    );
    let (lo, hi) = ORDER_RANGE;
    if !study.observed_order.within(lo, hi) {
        return Err(Failure::Numerical(format!(
            "observed order outside [{lo}, {hi}]"
        )));
    }
    Ok(())
}
