//! The `hqc` batch runner.
//!
//! Parameters come from flags, then from an optional TOML config file, then
//! from built-in defaults. Every parameter is validated before any
//! computation starts.

mod output;

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::curves::{arc_chord_constant, modulus_of_continuity, JordanCurve};
use crate::hmap::{
    df_norm_field, field_rows, min_jacobian, poisson_extend_modes, qc_constants, tangent_arg_field,
    BoundaryFunction, HarmonicMap,
};
use crate::holo::{
    bergman_norm, bloch_alpha_norm, boundary_holder_constant, c_alpha, hardy_norm, BoundarySamples,
    DiskGrid, HoloFn,
};
use crate::verify::suite::{Suite, SuiteDefaults};

pub use output::{field_csv, verdicts_csv};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid parameter `{name}`: {msg}")]
    Parameter { name: &'static str, msg: String },
    #[error("config {path}: {msg}")]
    Config { path: String, msg: String },
    #[error("{path}: {msg}")]
    Input { path: String, msg: String },
    #[error("{0}")]
    Failed(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

fn param(name: &'static str, msg: impl Into<String>) -> CliError {
    CliError::Parameter { name, msg: msg.into() }
}

fn failed(e: impl std::fmt::Display) -> CliError {
    CliError::Failed(e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Parameters shared by every subcommand.
#[derive(Debug, Clone, Default, Args)]
pub struct Overrides {
    /// TOML file with default parameters
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Hölder / Bloch exponent in (0, 1)
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Integrability exponent for Hardy and Bergman norms
    #[arg(long)]
    pub p: Option<f64>,
    /// Quasiconformality constant
    #[arg(long = "K", alias = "k")]
    pub k: Option<f64>,
    /// Fourier modes kept from boundary data
    #[arg(long)]
    pub modes: Option<usize>,
    /// Radial nodes of the disk grid
    #[arg(long)]
    pub grid_radial: Option<usize>,
    /// Angular nodes of the disk grid
    #[arg(long)]
    pub grid_angular: Option<usize>,
    /// Random point pairs for Hölder scans
    #[arg(long)]
    pub n_pairs: Option<usize>,
    /// Seed for random pairs
    #[arg(long)]
    pub seed: Option<u64>,
    /// Half-width in radians of the arc skipped around boundary singularities
    #[arg(long)]
    pub exclusion_arc: Option<f64>,
    /// Boundary data file
    #[arg(long = "input")]
    pub input_path: Option<PathBuf>,
    /// Directory for output files
    #[arg(long = "output")]
    pub output_path: Option<PathBuf>,
    /// Format of standard output
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Parser)]
#[command(name = "hqc", version, about = "Harmonic and quasiconformal maps of the unit disk")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List built-in functions, maps, curves and suites
    Gallery {
        #[command(flatten)]
        common: Overrides,
    },
    /// Poisson-extend boundary samples to a harmonic map
    Extend {
        #[command(flatten)]
        common: Overrides,
    },
    /// Field dumps and norm estimates for a map
    Analyze {
        #[command(flatten)]
        common: Overrides,
        /// Gallery harmonic map
        #[arg(long, conflicts_with = "g")]
        map: Option<String>,
        /// Coefficient file of the holomorphic part
        #[arg(long)]
        g: Option<PathBuf>,
        /// Coefficient file of the co-analytic part
        #[arg(long, requires = "g")]
        h: Option<PathBuf>,
        /// Image curve: a gallery name or a file of `x y` lines
        #[arg(long)]
        target: Option<String>,
    },
    /// Run a verification suite
    Verify {
        #[command(flatten)]
        common: Overrides,
        /// Built-in suite name
        #[arg(long, conflicts_with = "manifest")]
        suite: Option<String>,
        /// Manifest file
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
    /// Merge JSON outputs of earlier runs into one summary
    Report {
        #[command(flatten)]
        common: Overrides,
        /// Files or directories to aggregate
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
    },
}

/// Contents of a `--config` file: any subset of the shared parameters.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub alpha: Option<f64>,
    pub p: Option<f64>,
    #[serde(alias = "k", rename = "K")]
    pub k: Option<f64>,
    pub modes: Option<usize>,
    pub grid_radial: Option<usize>,
    pub grid_angular: Option<usize>,
    pub n_pairs: Option<usize>,
    pub seed: Option<u64>,
    pub exclusion_arc: Option<f64>,
    pub input_path: Option<PathBuf>,
    pub output_path: Option<PathBuf>,
    pub format: Option<Format>,
}

impl ConfigFile {
    pub fn parse(text: &str, path: &Path) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config {
            path: path.display().to_string(),
            msg: describe_toml_error(text, &e),
        })
    }
}

fn describe_toml_error(text: &str, e: &toml::de::Error) -> String {
    let msg = e.message().to_string();
    match e.span() {
        Some(span) => {
            let line = text[..span.start.min(text.len())].matches('\n').count() + 1;
            format!("line {line}: {msg}")
        }
        None => msg,
    }
}

/// Fully resolved parameters of one run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub alpha: f64,
    pub p: f64,
    #[serde(rename = "K")]
    pub k: f64,
    pub modes: usize,
    pub grid_radial: usize,
    pub grid_angular: usize,
    pub n_pairs: usize,
    pub seed: u64,
    pub exclusion_arc: f64,
    pub input_path: Option<PathBuf>,
    pub output_path: Option<PathBuf>,
    pub format: Format,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            alpha: 0.5,
            p: 2.0,
            k: 2.0,
            modes: 512,
            grid_radial: 64,
            grid_angular: 512,
            n_pairs: 10_000,
            seed: 1,
            exclusion_arc: 1e-3,
            input_path: None,
            output_path: None,
            format: Format::Json,
        }
    }
}

impl ExperimentConfig {
    /// Flags over config file over defaults.
    pub fn resolve(flags: &Overrides) -> Result<Self, CliError> {
        let file = match &flags.config {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|source| CliError::Io {
                    path: path.display().to_string(),
                    source,
                })?;
                ConfigFile::parse(&text, path)?
            }
            None => ConfigFile::default(),
        };
        let d = Self::default();
        let cfg = Self {
            alpha: flags.alpha.or(file.alpha).unwrap_or(d.alpha),
            p: flags.p.or(file.p).unwrap_or(d.p),
            k: flags.k.or(file.k).unwrap_or(d.k),
            modes: flags.modes.or(file.modes).unwrap_or(d.modes),
            grid_radial: flags.grid_radial.or(file.grid_radial).unwrap_or(d.grid_radial),
            grid_angular: flags.grid_angular.or(file.grid_angular).unwrap_or(d.grid_angular),
            n_pairs: flags.n_pairs.or(file.n_pairs).unwrap_or(d.n_pairs),
            seed: flags.seed.or(file.seed).unwrap_or(d.seed),
            exclusion_arc: flags.exclusion_arc.or(file.exclusion_arc).unwrap_or(d.exclusion_arc),
            input_path: flags.input_path.clone().or(file.input_path),
            output_path: flags.output_path.clone().or(file.output_path),
            format: flags.format.or(file.format).unwrap_or(d.format),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(param("alpha", format!("{} must lie in (0, 1)", self.alpha)));
        }
        if !(self.p > 0.0 && self.p.is_finite()) {
            return Err(param("p", format!("{} must be positive", self.p)));
        }
        if !(self.k >= 1.0 && self.k.is_finite()) {
            return Err(param("K", format!("{} must be at least 1", self.k)));
        }
        if self.modes == 0 {
            return Err(param("modes", "must be positive"));
        }
        if self.grid_angular < 64 {
            return Err(param("grid_angular", format!("{} must be at least 64", self.grid_angular)));
        }
        if let Err(e) = DiskGrid::new(self.grid_radial, self.grid_angular) {
            return Err(param("grid_radial", e.to_string()));
        }
        if self.n_pairs == 0 {
            return Err(param("n_pairs", "must be positive"));
        }
        if !(self.exclusion_arc >= 0.0 && self.exclusion_arc < std::f64::consts::PI) {
            return Err(param("exclusion_arc", format!("{} must lie in [0, π)", self.exclusion_arc)));
        }
        Ok(())
    }

    pub fn grid(&self) -> DiskGrid {
        DiskGrid::new(self.grid_radial, self.grid_angular)
            .expect("validated")
            .with_seed(self.seed)
    }

    fn suite_defaults(&self) -> SuiteDefaults {
        SuiteDefaults {
            seed: self.seed,
            grid_radial: self.grid_radial,
            grid_angular: self.grid_angular,
            n_pairs: self.n_pairs,
            exclusion: self.exclusion_arc,
            modes: self.modes,
        }
    }
}

/// Outcome of a run: what to print and whether every verdict passed.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub stdout: String,
    pub success: bool,
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn output_dir(cfg: &ExperimentConfig) -> Result<Option<PathBuf>, CliError> {
    match &cfg.output_path {
        None => Ok(None),
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|source| CliError::Io {
                path: dir.display().to_string(),
                source,
            })?;
            Ok(Some(dir.clone()))
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

pub fn run(cli: Cli) -> Result<RunOutcome, CliError> {
    match cli.command {
        Command::Gallery { common } => gallery(&ExperimentConfig::resolve(&common)?),
        Command::Extend { common } => extend(&ExperimentConfig::resolve(&common)?),
        Command::Analyze { common, map, g, h, target } => {
            let cfg = ExperimentConfig::resolve(&common)?;
            analyze(&cfg, map.as_deref(), g.as_deref(), h.as_deref(), target.as_deref())
        }
        Command::Verify { common, suite, manifest } => {
            verify(&ExperimentConfig::resolve(&common)?, suite.as_deref(), manifest.as_deref())
        }
        Command::Report { common, inputs } => report(&ExperimentConfig::resolve(&common)?, &inputs),
    }
}

#[derive(Serialize)]
struct GalleryEntry {
    name: &'static str,
    formula: &'static str,
}

#[derive(Serialize)]
struct Gallery {
    holomorphic: Vec<GalleryEntry>,
    harmonic: Vec<GalleryEntry>,
    curves: Vec<GalleryEntry>,
    quasiconformal: Vec<GalleryEntry>,
    suites: Vec<&'static str>,
}

fn gallery_listing() -> Gallery {
    let e = |name, formula| GalleryEntry { name, formula };
    Gallery {
        holomorphic: vec![
            e("z", "f(z) = z"),
            e("z2", "f(z) = z^2"),
            e("z3", "f(z) = z^3"),
            e("mobius", "f(z) = (z + 0.5) / (1 + 0.5 z)"),
            e("f0", "f(z) = 2z + (1 - z) log(1 - z)"),
            e("one", "f(z) = 1"),
            e("one-plus-z", "f(z) = 1 + z"),
        ],
        harmonic: vec![
            e("identity", "f(z) = z"),
            e("affine", "f(z) = z + 0.3 conj(z)"),
            e("f0", "f(z) = 2z + (1 - z) log(1 - z)"),
            e("mobius", "f(z) = (z + 0.5) / (1 + 0.5 z)"),
            e("rotation", "f(z) = e^{0.7i} z"),
            e("z2", "f(z) = z^2"),
        ],
        curves: vec![
            e("circle", "|z| = 1"),
            e("ellipse", "(x / 1.3)^2 + (y / 0.7)^2 = 1"),
            e("rounded-square", "side 2, corner radius 0.5"),
            e("f0-image", "f0(e^{it})"),
            e("square", "vertices ±1 ± i"),
            e("l-shape", "L-shaped hexagon, arms 3 x 0.5"),
            e("stadium", "two half-circles joined by segments"),
        ],
        quasiconformal: vec![e("stretch", "f(z) = z |z|^{1/K - 1}")],
        suites: Suite::BUILTIN_NAMES.to_vec(),
    }
}

fn gallery(cfg: &ExperimentConfig) -> Result<RunOutcome, CliError> {
    let g = gallery_listing();
    let text = match cfg.format {
        Format::Json => to_json(&g),
        Format::Csv => {
            let mut s = String::from("kind,name,formula\n");
            for (kind, list) in [
                ("holomorphic", &g.holomorphic),
                ("harmonic", &g.harmonic),
                ("curve", &g.curves),
                ("quasiconformal", &g.quasiconformal),
            ] {
                for entry in list {
                    s.push_str(&format!("{kind},{},\"{}\"\n", entry.name, entry.formula));
                }
            }
            for suite in &g.suites {
                s.push_str(&format!("suite,{suite},\n"));
            }
            s
        }
    };
    if let Some(dir) = output_dir(cfg)? {
        let name = if cfg.format == Format::Json { "gallery.json" } else { "gallery.csv" };
        write_file(&dir.join(name), &text)?;
    }
    Ok(RunOutcome { stdout: text, success: true })
}

#[derive(Serialize)]
struct ExtendSummary {
    input: String,
    samples: usize,
    modes: usize,
    k_hat: f64,
    #[serde(rename = "K_hat")]
    big_k_hat: f64,
    min_jacobian: f64,
}

fn extend(cfg: &ExperimentConfig) -> Result<RunOutcome, CliError> {
    let input = cfg
        .input_path
        .as_ref()
        .ok_or_else(|| param("input_path", "extend needs a boundary data file (--input)"))?;
    let bf = BoundaryFunction::read(input).map_err(|e| CliError::Input {
        path: input.display().to_string(),
        msg: e.to_string(),
    })?;
    let map = poisson_extend_modes(&bf, cfg.modes);
    let grid = cfg.grid().with_max_radius(0.99);
    let qc = qc_constants(&map, &grid).map_err(failed)?;
    let (jmin, _) = min_jacobian(&map, &grid).map_err(failed)?;
    let rows = field_rows(&map, &grid).map_err(failed)?;
    let summary = ExtendSummary {
        input: input.display().to_string(),
        samples: bf.len(),
        modes: cfg.modes,
        k_hat: qc.k_hat,
        big_k_hat: qc.big_k_hat,
        min_jacobian: jmin,
    };
    let g = map.g.to_series(cfg.modes + 1);
    let h = map.h.to_series(cfg.modes + 1);
    if let Some(dir) = output_dir(cfg)? {
        write_file(&dir.join("g.txt"), &HoloFn::coefficients_text(&g))?;
        write_file(&dir.join("h.txt"), &HoloFn::coefficients_text(&h))?;
        write_file(&dir.join("field.csv"), &field_csv(&rows))?;
        write_file(&dir.join("extend.json"), &to_json(&summary))?;
    }
    let stdout = match cfg.format {
        Format::Json => to_json(&summary),
        Format::Csv => HoloFn::coefficients_text(&g),
    };
    Ok(RunOutcome { stdout, success: true })
}

fn default_target(map_name: &str) -> Option<&'static str> {
    match map_name {
        "identity" | "mobius" | "rotation" => Some("circle"),
        "affine" => Some("ellipse"),
        "f0" => Some("f0-image"),
        _ => None,
    }
}

fn load_target(spec: &str) -> Result<JordanCurve, CliError> {
    if let Ok(c) = JordanCurve::builtin(spec) {
        return Ok(c);
    }
    let path = Path::new(spec);
    if !path.exists() {
        return Err(param("target", format!("`{spec}` is neither a gallery curve nor a file")));
    }
    JordanCurve::read(path).map_err(|e| CliError::Input {
        path: spec.to_string(),
        msg: e.to_string(),
    })
}

fn read_coefficients(path: &Path) -> Result<HoloFn, CliError> {
    HoloFn::read_coefficients(path).map_err(|e| CliError::Input {
        path: path.display().to_string(),
        msg: e.to_string(),
    })
}

/// Norm estimates written by `analyze`.
#[derive(Debug, Clone, Serialize)]
pub struct AnalyzeSummary {
    pub map: String,
    pub alpha: f64,
    pub p: f64,
    #[serde(rename = "X")]
    pub x: f64,
    #[serde(rename = "Y")]
    pub y: f64,
    #[serde(rename = "Y_h")]
    pub y_h: f64,
    #[serde(rename = "C")]
    pub c: f64,
    pub hardy_g: f64,
    pub hardy_h: f64,
    pub bergman_df: f64,
    pub k_hat: Option<f64>,
    #[serde(rename = "K_hat")]
    pub big_k_hat: Option<f64>,
    /// Why the dilatation is missing, e.g. a critical point of `g` on the grid.
    pub qc_error: Option<String>,
    pub min_jacobian: f64,
    pub target: Option<TargetSummary>,
    pub u_boundary_error: Option<f64>,
    pub u_error: Option<String>,
    pub grid: crate::holo::GridMeta,
}

#[derive(Debug, Clone, Serialize)]
pub struct TargetSummary {
    pub length: f64,
    #[serde(rename = "B")]
    pub b: f64,
    pub omega: Vec<crate::curves::ContinuityEntry>,
}

const TARGET_NODES: usize = 4096;

fn analyze(
    cfg: &ExperimentConfig,
    map_name: Option<&str>,
    g_path: Option<&Path>,
    h_path: Option<&Path>,
    target: Option<&str>,
) -> Result<RunOutcome, CliError> {
    let (label, map) = match (map_name, g_path) {
        (Some(name), _) => {
            let m = HarmonicMap::builtin(name).ok_or_else(|| {
                param("map", format!("unknown map `{name}`; see `hqc gallery`"))
            })?;
            (name.to_string(), m)
        }
        (None, Some(g)) => {
            let gf = read_coefficients(g)?;
            let hf = match h_path {
                Some(h) => read_coefficients(h)?,
                None => HoloFn::zero(),
            };
            (g.display().to_string(), HarmonicMap::new(gf, hf))
        }
        (None, None) => return Err(param("map", "analyze needs --map or --g")),
    };
    let target_spec = target.map(str::to_string).or_else(|| map_name.and_then(default_target).map(str::to_string));
    let curve = target_spec.as_deref().map(load_target).transpose()?;

    let grid = cfg.grid();
    let field_grid = grid.clone().punctured();
    let mut rows = field_rows(&map, &field_grid).map_err(failed)?;
    let (u_boundary_error, u_error) = match &curve {
        Some(c) => match tangent_arg_field(&map, &grid, c, TARGET_NODES) {
            Ok(u) => {
                for (row, v) in rows.iter_mut().zip(&u.values) {
                    row.u = Some(*v);
                }
                (Some(u.boundary_error), None)
            }
            Err(e) => (None, Some(e.to_string())),
        },
        None => (None, Some("no target curve".to_string())),
    };
    let target_summary = match &curve {
        Some(c) => {
            let param = c.resample_arclength(TARGET_NODES).map_err(failed)?;
            let half = 0.5 * param.total_length;
            let deltas: Vec<f64> = [1e-3, 1e-2, 1e-1, 1.0].into_iter().filter(|d| *d <= half).collect();
            Some(TargetSummary {
                length: param.total_length,
                b: arc_chord_constant(&param).map_err(failed)?.b,
                omega: modulus_of_continuity(&param, &deltas).map_err(failed)?,
            })
        }
        None => None,
    };

    let samples = BoundarySamples::of_fn(&map.g, 1024, cfg.exclusion_arc).map_err(failed)?;
    let x = boundary_holder_constant(&samples, cfg.alpha).map_err(failed)?.value;
    let y = bloch_alpha_norm(&map.g, cfg.alpha, &grid).map_err(failed)?.value;
    let y_h = bloch_alpha_norm(&map.h, cfg.alpha, &grid).map_err(failed)?.value;
    let n_theta = cfg.grid_angular;
    let hardy_g = hardy_norm(&map.g, cfg.p, 1.0, n_theta).map_err(failed)?.value;
    let hardy_h = hardy_norm(&map.h, cfg.p, 1.0, n_theta).map_err(failed)?.value;
    let bergman_df = bergman_norm(df_norm_field(&map), cfg.p, &grid).map_err(failed)?;
    let (k_hat, big_k_hat, qc_error) = match qc_constants(&map, &grid) {
        Ok(qc) => (Some(qc.k_hat), Some(qc.big_k_hat), None),
        Err(e) => (None, None, Some(e.to_string())),
    };
    let (jmin, _) = min_jacobian(&map, &grid).map_err(failed)?;

    let summary = AnalyzeSummary {
        map: label,
        alpha: cfg.alpha,
        p: cfg.p,
        x,
        y,
        y_h,
        c: c_alpha(cfg.alpha).map_err(failed)?,
        hardy_g,
        hardy_h,
        bergman_df,
        k_hat,
        big_k_hat,
        qc_error,
        min_jacobian: jmin,
        target: target_summary,
        u_boundary_error,
        u_error,
        grid: grid.meta(),
    };
    let csv = output::summary_csv(&summary);
    if let Some(dir) = output_dir(cfg)? {
        write_file(&dir.join("field.csv"), &field_csv(&rows))?;
        write_file(&dir.join("summary.json"), &to_json(&summary))?;
        write_file(&dir.join("summary.csv"), &csv)?;
    }
    let stdout = match cfg.format {
        Format::Json => to_json(&summary),
        Format::Csv => csv,
    };
    Ok(RunOutcome { stdout, success: true })
}

fn verify(cfg: &ExperimentConfig, suite: Option<&str>, manifest: Option<&Path>) -> Result<RunOutcome, CliError> {
    let defaults = cfg.suite_defaults();
    let parsed = match (suite, manifest.or(cfg.input_path.as_deref())) {
        (Some(name), _) => Suite::builtin(name, &defaults)
            .ok_or_else(|| param("suite", format!("unknown suite `{name}` (known: {})", Suite::BUILTIN_NAMES.join(", "))))?
            .map_err(failed)?,
        (None, Some(path)) => {
            let text = fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.display().to_string(),
                source,
            })?;
            Suite::parse(&text, &defaults).map_err(|e| CliError::Input {
                path: path.display().to_string(),
                msg: e.to_string(),
            })?
        }
        (None, None) => return Err(param("suite", "verify needs --suite or --manifest")),
    };
    let verdicts = parsed.run().map_err(failed)?;
    let success = verdicts.iter().all(|v| v.pass);
    let json = to_json(&verdicts);
    let csv = verdicts_csv(&verdicts);
    if let Some(dir) = output_dir(cfg)? {
        write_file(&dir.join("verdicts.json"), &json)?;
        write_file(&dir.join("verdicts.csv"), &csv)?;
    }
    let stdout = match cfg.format {
        Format::Json => json,
        Format::Csv => csv,
    };
    Ok(RunOutcome { stdout, success })
}

#[derive(Serialize)]
struct Source {
    path: String,
    content: serde_json::Value,
}

#[derive(Serialize)]
struct VerdictTally {
    total: usize,
    passed: usize,
    failed: Vec<String>,
}

#[derive(Serialize)]
struct Report {
    sources: Vec<Source>,
    verdicts: VerdictTally,
}

fn collect_json(paths: &[PathBuf]) -> Result<Vec<PathBuf>, CliError> {
    let mut out = Vec::new();
    for p in paths {
        if p.is_dir() {
            let entries = fs::read_dir(p).map_err(|source| CliError::Io {
                path: p.display().to_string(),
                source,
            })?;
            let mut files: Vec<PathBuf> = entries
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|f| f.extension().is_some_and(|x| x == "json"))
                .collect();
            files.sort();
            out.extend(files);
        } else if p.exists() {
            out.push(p.clone());
        } else {
            return Err(param("inputs", format!("{} does not exist", p.display())));
        }
    }
    Ok(out)
}

fn report(cfg: &ExperimentConfig, inputs: &[PathBuf]) -> Result<RunOutcome, CliError> {
    let mut sources = Vec::new();
    let mut tally = VerdictTally { total: 0, passed: 0, failed: Vec::new() };
    for path in collect_json(inputs)? {
        let text = fs::read_to_string(&path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let content: serde_json::Value = serde_json::from_str(&text).map_err(|e| CliError::Input {
            path: path.display().to_string(),
            msg: format!("line {}: {e}", e.line()),
        })?;
        if let Some(items) = content.as_array() {
            for v in items {
                if let Some(pass) = v.get("pass").and_then(|p| p.as_bool()) {
                    tally.total += 1;
                    if pass {
                        tally.passed += 1;
                    } else {
                        tally.failed.push(v.get("name").and_then(|n| n.as_str()).unwrap_or("").to_string());
                    }
                }
            }
        }
        sources.push(Source {
            path: path.display().to_string(),
            content,
        });
    }
    let text = to_json(&Report { sources, verdicts: tally });
    if let Some(out) = &cfg.output_path {
        if let Some(parent) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
            fs::create_dir_all(parent).map_err(|source| CliError::Io {
                path: parent.display().to_string(),
                source,
            })?;
        }
        write_file(out, &text)?;
    }
    Ok(RunOutcome { stdout: text, success: true })
}

/// Caps the global worker pool at `HQC_THREADS` when that is set.
pub fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("HQC_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| param("HQC_THREADS", format!("`{value}` is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(failed)
}

/// Parses arguments, runs, prints, and returns the process exit code:
/// 0 on success, 1 when a verdict failed, 2 on any error.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return 2;
    }
    match run(cli) {
        Ok(out) => {
            print!("{}", out.stdout);
            if out.success {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_flags_over_config_over_defaults() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.toml");
        fs::write(&path, "alpha = 0.25\nseed = 9\nK = 3.0\n").unwrap();
        let flags = Overrides {
            config: Some(path),
            seed: Some(4),
            ..Default::default()
        };
        let cfg = ExperimentConfig::resolve(&flags).unwrap();
        assert_eq!((cfg.alpha, cfg.seed, cfg.k, cfg.modes), (0.25, 4, 3.0, 512));
    }

    #[test]
    fn config_errors_name_the_line() {
        let err = ConfigFile::parse("alpha = 0.5\ncolour = 1\n", Path::new("x.toml")).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 2") && msg.contains("colour"), "{msg}");
    }

    #[test]
    fn violations_name_the_parameter() {
        let flags = Overrides {
            alpha: Some(1.5),
            ..Default::default()
        };
        let msg = ExperimentConfig::resolve(&flags).unwrap_err().to_string();
        assert!(msg.contains("`alpha`"), "{msg}");
        let flags = Overrides {
            grid_radial: Some(3),
            ..Default::default()
        };
        assert!(ExperimentConfig::resolve(&flags).unwrap_err().to_string().contains("grid_radial"));
    }
}
