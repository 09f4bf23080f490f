//! Binned map of the entropy–concurrence plane.
//!
//! Each cell records how many sampled states landed in it and how many of
//! those violate a CHSH inequality (`m > 1`, strict, no tolerance band). A cell
//! is `V` when all of its states violate, `NV` when none do, and `Mixed` when
//! both kinds are present. States with `C = 0` are not part of the plane and
//! are dropped.

use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::measures::quantity_triple;
use crate::qstate::QuantityTriple;
use crate::sampling::{Sampler, SamplerConfig};

const CHUNK: u64 = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GridSpec {
    pub s_bins: usize,
    pub c_bins: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            s_bins: 100,
            c_bins: 100,
        }
    }
}

impl GridSpec {
    pub fn new(s_bins: usize, c_bins: usize) -> Result<Self> {
        if s_bins < 2 || c_bins < 2 {
            return Err(Error::InvalidConfig(format!(
                "grid {s_bins}x{c_bins} needs at least 2 bins per axis"
            )));
        }
        Ok(GridSpec { s_bins, c_bins })
    }

    pub fn s_width(&self) -> f64 {
        1.0 / self.s_bins as f64
    }

    pub fn c_width(&self) -> f64 {
        1.0 / self.c_bins as f64
    }

    pub fn s_center(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * self.s_width()
    }

    pub fn c_center(&self, j: usize) -> f64 {
        (j as f64 + 0.5) * self.c_width()
    }

    /// Half-open bins, last bin closed; values slightly outside `[0, 1]` are
    /// clamped in.
    fn bin(value: f64, bins: usize) -> usize {
        let x = value.clamp(0.0, 1.0);
        ((x * bins as f64) as usize).min(bins - 1)
    }

    pub fn cell_of(&self, s: f64, c: f64) -> (usize, usize) {
        (Self::bin(s, self.s_bins), Self::bin(c, self.c_bins))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CellClass {
    V,
    Nv,
    Mixed,
    Empty,
}

impl CellClass {
    pub fn label(self) -> &'static str {
        match self {
            CellClass::V => "V",
            CellClass::Nv => "NV",
            CellClass::Mixed => "MIXED",
            CellClass::Empty => "EMPTY",
        }
    }
}

impl fmt::Display for CellClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CellRecord {
    pub n: u64,
    pub n_violating: u64,
    pub min_m: f64,
    pub max_m: f64,
}

impl Default for CellRecord {
    fn default() -> Self {
        CellRecord {
            n: 0,
            n_violating: 0,
            min_m: f64::INFINITY,
            max_m: f64::NEG_INFINITY,
        }
    }
}

impl CellRecord {
    pub fn class(&self) -> CellClass {
        match (self.n, self.n_violating) {
            (0, _) => CellClass::Empty,
            (n, v) if v == n => CellClass::V,
            (_, 0) => CellClass::Nv,
            _ => CellClass::Mixed,
        }
    }

    fn add(&mut self, m: f64) {
        self.n += 1;
        if m > 1.0 {
            self.n_violating += 1;
        }
        self.min_m = self.min_m.min(m);
        self.max_m = self.max_m.max(m);
    }

    fn merge(&mut self, other: &CellRecord) {
        self.n += other.n;
        self.n_violating += other.n_violating;
        self.min_m = self.min_m.min(other.min_m);
        self.max_m = self.max_m.max(other.max_m);
    }
}

/// Cell counts by class.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ClassSummary {
    pub v: usize,
    pub nv: usize,
    pub mixed: usize,
    pub empty: usize,
}

/// One exported grid row.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridRow {
    pub s_center: f64,
    pub c_center: f64,
    pub class: CellClass,
    pub n: u64,
    pub n_violating: u64,
    /// `None` for empty cells.
    pub min_m: Option<f64>,
    pub max_m: Option<f64>,
}

pub const GRID_COLUMNS: [&str; 7] = [
    "s_center",
    "c_center",
    "class",
    "n",
    "n_violating",
    "min_m",
    "max_m",
];

/// 2-D histogram over `s ∈ [0, 1]`, `c ∈ (0, 1]`, stored s-major.
#[derive(Clone, Debug, PartialEq)]
pub struct AtlasGrid {
    spec: GridSpec,
    cells: Vec<CellRecord>,
    accepted: u64,
    discarded: u64,
}

impl AtlasGrid {
    pub fn new(spec: GridSpec) -> Self {
        AtlasGrid {
            spec,
            cells: vec![CellRecord::default(); spec.s_bins * spec.c_bins],
            accepted: 0,
            discarded: 0,
        }
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    /// States binned so far.
    pub fn accepted(&self) -> u64 {
        self.accepted
    }

    /// States dropped for having zero concurrence.
    pub fn discarded(&self) -> u64 {
        self.discarded
    }

    pub fn cell(&self, i: usize, j: usize) -> &CellRecord {
        &self.cells[i * self.spec.c_bins + j]
    }

    /// Cells as `((s_index, c_index), record)`.
    pub fn cells(&self) -> impl Iterator<Item = ((usize, usize), &CellRecord)> {
        let cb = self.spec.c_bins;
        self.cells.iter().enumerate().map(move |(k, r)| ((k / cb, k % cb), r))
    }

    pub fn accumulate(&mut self, t: &QuantityTriple) {
        if t.c.is_nan() || t.c <= 0.0 {
            self.discarded += 1;
            return;
        }
        let (i, j) = self.spec.cell_of(t.s, t.c);
        self.cells[i * self.spec.c_bins + j].add(t.m);
        self.accepted += 1;
    }

    /// Cell-wise union; associative and commutative.
    pub fn merge(&mut self, other: &AtlasGrid) {
        assert_eq!(self.spec, other.spec, "cannot merge grids of different shape");
        for (a, b) in self.cells.iter_mut().zip(&other.cells) {
            a.merge(b);
        }
        self.accepted += other.accepted;
        self.discarded += other.discarded;
    }

    pub fn summary(&self) -> ClassSummary {
        let mut out = ClassSummary::default();
        for c in &self.cells {
            match c.class() {
                CellClass::V => out.v += 1,
                CellClass::Nv => out.nv += 1,
                CellClass::Mixed => out.mixed += 1,
                CellClass::Empty => out.empty += 1,
            }
        }
        out
    }

    /// One row per cell, s-major then c.
    pub fn export_grid(&self) -> Vec<GridRow> {
        self.cells()
            .map(|((i, j), r)| {
                let filled = r.n > 0;
                GridRow {
                    s_center: self.spec.s_center(i),
                    c_center: self.spec.c_center(j),
                    class: r.class(),
                    n: r.n,
                    n_violating: r.n_violating,
                    min_m: filled.then_some(r.min_m),
                    max_m: filled.then_some(r.max_m),
                }
            })
            .collect()
    }
}

/// Draws `config.count` states and bins their `(S_L, C, m)`.
///
/// Work is split into fixed index chunks, each filling its own grid; the
/// grids are then merged. The result does not depend on the thread count.
pub fn scan(config: &SamplerConfig, spec: GridSpec) -> Result<AtlasGrid> {
    let sampler = Sampler::new(*config)?;
    let chunks = config.count.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut grid = AtlasGrid::new(spec);
            let end = ((k + 1) * CHUNK).min(config.count);
            for i in k * CHUNK..end {
                let sample = sampler.draw(i)?;
                grid.accumulate(&quantity_triple(&sample.state)?);
            }
            Ok(grid)
        })
        .try_reduce(|| AtlasGrid::new(spec), |mut a, b| {
            a.merge(&b);
            Ok(a)
        })
}

/// Triples for `config.count` states, in sample order.
pub fn sample_triples(config: &SamplerConfig) -> Result<Vec<QuantityTriple>> {
    let sampler = Sampler::new(*config)?;
    (0..config.count)
        .into_par_iter()
        .map(|i| quantity_triple(&sampler.draw(i)?.state))
        .collect()
}
