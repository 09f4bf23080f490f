//! Command implementations behind the `chsh-atlas` binary.
//!
//! Every command renders its output to a `String`; `main` decides where it
//! goes and maps [`CliError`] onto the process exit code.

use std::fmt;
use std::path::Path;

use chsh_atlas::atlas::{scan, sample_triples, AtlasGrid, GridSpec, GRID_COLUMNS};
use chsh_atlas::families::{reference_curves, uniform_entropy_grid};
use chsh_atlas::measures::{fidelity, optimal_settings, quantity_triple};
use chsh_atlas::sampling::{Generator, SamplerConfig};
use chsh_atlas::DensityMatrix;
use serde::Serialize;

pub mod statefile;

/// Failure classes, each with a fixed exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad or contradictory flags, unreadable or malformed input (exit 2).
    Usage(String),
    /// Input parsed but is not a density matrix (exit 3).
    InvalidState(chsh_atlas::Error),
    /// Numerical or I/O failure while running (exit 1).
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::InvalidState(_) => 3,
            CliError::Runtime(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::InvalidState(e) => write!(f, "invalid state: {e}"),
            CliError::Runtime(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<chsh_atlas::Error> for CliError {
    fn from(e: chsh_atlas::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Number formatting shared by all CSV outputs: at most 9 significant
/// digits, plain decimal notation, `.` separator.
pub fn format_sig(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.8e}").parse().expect("formatted float parses");
    if rounded == 0.0 {
        "0".to_string()
    } else {
        format!("{rounded}")
    }
}

fn csv_row(fields: &[String]) -> String {
    let mut line = fields.join(",");
    line.push('\n');
    line
}

#[derive(Debug, Serialize)]
pub struct AnalyzeReport {
    pub s: f64,
    pub c: f64,
    pub m: f64,
    pub fidelity: f64,
    pub violates: bool,
    pub bell_max: f64,
}

#[derive(Debug, Serialize)]
pub struct SettingsReport {
    pub a: [f64; 3],
    pub a_prime: [f64; 3],
    pub b: [f64; 3],
    pub b_prime: [f64; 3],
    pub value: f64,
}

pub fn analyze_state(rho: &DensityMatrix) -> CliResult<AnalyzeReport> {
    let t = quantity_triple(rho)?;
    Ok(AnalyzeReport {
        s: t.s,
        c: t.c,
        m: t.m,
        fidelity: fidelity(rho)?,
        violates: t.violates_chsh(),
        bell_max: 2.0 * t.m.max(0.0).sqrt(),
    })
}

pub fn settings_for_state(rho: &DensityMatrix) -> CliResult<SettingsReport> {
    let (s, value) = optimal_settings(rho)?;
    Ok(SettingsReport {
        a: s.a,
        a_prime: s.a_prime,
        b: s.b,
        b_prime: s.b_prime,
        value,
    })
}

fn to_json<T: Serialize>(value: &T) -> CliResult<String> {
    let mut out = serde_json::to_string_pretty(value).map_err(|e| CliError::Runtime(e.to_string()))?;
    out.push('\n');
    Ok(out)
}

pub fn cmd_analyze(path: &Path) -> CliResult<String> {
    let rho = statefile::load(path)?;
    to_json(&analyze_state(&rho)?)
}

pub fn cmd_settings(path: &Path) -> CliResult<String> {
    let rho = statefile::load(path)?;
    to_json(&settings_for_state(&rho)?)
}

/// Sampler configuration from raw flag values; `--epsilon` is only accepted
/// together with the boundary generator.
pub fn sampler_config(
    generator: &str,
    count: u64,
    seed: u64,
    epsilon: Option<f64>,
) -> CliResult<SamplerConfig> {
    let generator: Generator = generator
        .parse()
        .map_err(|e: chsh_atlas::Error| CliError::Usage(e.to_string()))?;
    let mut config = SamplerConfig::new(generator, count, seed);
    if let Some(eps) = epsilon {
        if generator != Generator::Boundary {
            return Err(CliError::Usage(format!(
                "--epsilon only applies to --gen boundary, not --gen {generator}"
            )));
        }
        config = config.with_epsilon(eps);
    }
    config.check().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(config)
}

/// Parses `SxC`, e.g. `100x100`.
pub fn parse_grid(text: &str) -> CliResult<GridSpec> {
    let bad = || CliError::Usage(format!("--grid expects SxC with integers, got '{text}'"));
    let (s, c) = text.split_once(['x', 'X']).ok_or_else(bad)?;
    let s: usize = s.trim().parse().map_err(|_| bad())?;
    let c: usize = c.trim().parse().map_err(|_| bad())?;
    GridSpec::new(s, c).map_err(|e| CliError::Usage(e.to_string()))
}

pub fn cmd_sample(config: &SamplerConfig) -> CliResult<String> {
    let triples = sample_triples(config)?;
    let mut out = String::with_capacity(32 * triples.len() + 8);
    out.push_str("s,c,m\n");
    for t in &triples {
        out.push_str(&csv_row(&[format_sig(t.s), format_sig(t.c), format_sig(t.m)]));
    }
    Ok(out)
}

pub fn render_grid(grid: &AtlasGrid) -> String {
    let mut out = csv_row(&GRID_COLUMNS.map(String::from));
    let opt = |x: Option<f64>| x.map(format_sig).unwrap_or_default();
    for row in grid.export_grid() {
        out.push_str(&csv_row(&[
            format_sig(row.s_center),
            format_sig(row.c_center),
            row.class.label().to_string(),
            row.n.to_string(),
            row.n_violating.to_string(),
            opt(row.min_m),
            opt(row.max_m),
        ]));
    }
    out
}

pub fn scan_summary(grid: &AtlasGrid) -> String {
    let s = grid.summary();
    format!(
        "cells: V={} NV={} MIXED={} EMPTY={} (binned {}, dropped with C=0: {})",
        s.v,
        s.nv,
        s.mixed,
        s.empty,
        grid.accepted(),
        grid.discarded()
    )
}

/// Returns the grid CSV and the one-line summary.
pub fn cmd_scan(config: &SamplerConfig, spec: GridSpec) -> CliResult<(String, String)> {
    let grid = scan(config, spec)?;
    Ok((render_grid(&grid), scan_summary(&grid)))
}

pub fn cmd_curves(points: usize) -> CliResult<String> {
    if points < 2 {
        return Err(CliError::Usage("--points must be at least 2".into()));
    }
    let rows = reference_curves(&uniform_entropy_grid(points))?;
    let mut out = String::from("s,m_werner,m_mems,m_mvb,c_werner,c_mvb\n");
    for p in rows {
        out.push_str(&csv_row(
            &[p.s, p.m_werner, p.m_mems, p.m_mvb, p.c_werner, p.c_mvb].map(format_sig),
        ));
    }
    Ok(out)
}
