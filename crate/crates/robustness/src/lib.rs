//! Infidelity and leakage landscapes over (ε₁, ε₂) grids, and the area of the
//! region where each stays below a threshold.

use cpx_pulse::{actual_populations, CompositeSequence, DeviationPair};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::{self, Write};
use thiserror::Error;

/// Contour levels used for region areas.
pub const THRESHOLDS: [f64; 3] = [0.001, 0.01, 0.05];

/// Half-width of the reference box |ε₁|, |ε₂| ≤ 0.2 in which areas are measured.
pub const REFERENCE_HALF_WIDTH: f64 = 0.2;

pub const MIN_RESOLUTION: usize = 11;

#[derive(Debug, Error, PartialEq)]
pub enum RobustnessError {
    #[error("invalid grid: {0}")]
    BadGrid(String),
    #[error("landscapes were computed on different grids")]
    GridMismatch,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanGrid {
    pub eps1_range: [f64; 2],
    pub eps2_range: [f64; 2],
    /// Points per axis, endpoints included.
    pub resolution: usize,
}

impl Default for ScanGrid {
    fn default() -> Self {
        ScanGrid {
            eps1_range: [-0.5, 0.5],
            eps2_range: [-0.5, 0.5],
            resolution: 201,
        }
    }
}

impl ScanGrid {
    pub fn square(min: f64, max: f64, resolution: usize) -> Result<Self, RobustnessError> {
        let g = ScanGrid {
            eps1_range: [min, max],
            eps2_range: [min, max],
            resolution,
        };
        g.validate()?;
        Ok(g)
    }

    /// The reference box [−0.2, 0.2]² itself.
    pub fn reference_box(resolution: usize) -> Result<Self, RobustnessError> {
        Self::square(-REFERENCE_HALF_WIDTH, REFERENCE_HALF_WIDTH, resolution)
    }

    pub fn validate(&self) -> Result<(), RobustnessError> {
        if self.resolution < MIN_RESOLUTION {
            return Err(RobustnessError::BadGrid(format!(
                "resolution {} below minimum {MIN_RESOLUTION}",
                self.resolution
            )));
        }
        for (name, [lo, hi]) in [("eps1", self.eps1_range), ("eps2", self.eps2_range)] {
            if !lo.is_finite() || !hi.is_finite() || lo >= hi {
                return Err(RobustnessError::BadGrid(format!(
                    "{name} range [{lo}, {hi}] must be finite and increasing"
                )));
            }
        }
        Ok(())
    }

    fn axis(range: [f64; 2], n: usize) -> Vec<f64> {
        let [lo, hi] = range;
        (0..n)
            .map(|k| {
                if k + 1 == n {
                    hi
                } else {
                    lo + (hi - lo) * k as f64 / (n - 1) as f64
                }
            })
            .collect()
    }

    pub fn eps1_values(&self) -> Vec<f64> {
        Self::axis(self.eps1_range, self.resolution)
    }

    pub fn eps2_values(&self) -> Vec<f64> {
        Self::axis(self.eps2_range, self.resolution)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionArea {
    pub threshold: f64,
    /// Fraction of reference-box nodes with ℱ_r ≤ threshold.
    pub infidelity: f64,
    /// Fraction of reference-box nodes with P_e ≤ threshold.
    pub leakage: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LandscapeResult {
    pub grid: ScanGrid,
    /// ℱ_r = |P_r − sin²θ|, indexed `[eps1][eps2]`.
    pub infidelity: Vec<Vec<f64>>,
    /// P_e, indexed `[eps1][eps2]`.
    pub leakage: Vec<Vec<f64>>,
    pub region_areas: Vec<RegionArea>,
    /// Number of grid nodes inside the reference box.
    pub box_nodes: usize,
}

/// Evaluates `f` at every node, rows over ε₁ and columns over ε₂, in parallel.
pub fn map_grid<T, F>(grid: &ScanGrid, f: F) -> Result<Vec<Vec<T>>, RobustnessError>
where
    T: Send,
    F: Fn(DeviationPair) -> T + Sync,
{
    grid.validate()?;
    let e1 = grid.eps1_values();
    let e2 = grid.eps2_values();
    Ok(e1
        .par_iter()
        .map(|&a| e2.iter().map(|&b| f(DeviationPair::new(a, b))).collect())
        .collect())
}

fn in_box(x: f64) -> bool {
    x.abs() <= REFERENCE_HALF_WIDTH + 1e-12
}

/// Fraction of nodes inside the reference box where `keep(value)` holds,
/// with the number of such box nodes.
pub fn box_fraction(
    grid: &ScanGrid,
    values: &[Vec<f64>],
    keep: impl Fn(f64) -> bool,
) -> (f64, usize) {
    let e1 = grid.eps1_values();
    let e2 = grid.eps2_values();
    let (mut total, mut hit) = (0usize, 0usize);
    for (i, a) in e1.iter().enumerate() {
        if !in_box(*a) {
            continue;
        }
        for (j, b) in e2.iter().enumerate() {
            if in_box(*b) {
                total += 1;
                if keep(values[i][j]) {
                    hit += 1;
                }
            }
        }
    }
    if total == 0 {
        (0.0, 0)
    } else {
        (hit as f64 / total as f64, total)
    }
}

pub fn scan(seq: &CompositeSequence, grid: &ScanGrid) -> Result<LandscapeResult, RobustnessError> {
    let target = seq.target_population();
    let values = map_grid(grid, |d| {
        let (pr, pe) = actual_populations(seq, d);
        ((pr - target).abs(), pe)
    })?;
    let infidelity: Vec<Vec<f64>> = values
        .iter()
        .map(|row| row.iter().map(|v| v.0).collect())
        .collect();
    let leakage: Vec<Vec<f64>> = values
        .iter()
        .map(|row| row.iter().map(|v| v.1).collect())
        .collect();
    let mut box_nodes = 0;
    let region_areas = THRESHOLDS
        .iter()
        .map(|&t| {
            let (fi, n) = box_fraction(grid, &infidelity, |v| v <= t);
            let (fl, _) = box_fraction(grid, &leakage, |v| v <= t);
            box_nodes = n;
            RegionArea {
                threshold: t,
                infidelity: fi,
                leakage: fl,
            }
        })
        .collect();
    Ok(LandscapeResult {
        grid: *grid,
        infidelity,
        leakage,
        region_areas,
        box_nodes,
    })
}

impl LandscapeResult {
    pub fn area(&self, threshold: f64) -> Option<RegionArea> {
        self.region_areas
            .iter()
            .copied()
            .find(|r| r.threshold == threshold)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AreaDifference {
    pub threshold: f64,
    pub a: RegionArea,
    pub b: RegionArea,
    /// b − a for ℱ_r.
    pub infidelity_diff: f64,
    /// b − a for P_e.
    pub leakage_diff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub rows: Vec<AreaDifference>,
    /// b's ℱ_r region is at least as large as a's at the requested threshold.
    pub infidelity_not_smaller: bool,
    /// b's P_e region is at least as large as a's at the requested threshold.
    pub leakage_not_smaller: bool,
}

/// Area differences b − a at every threshold, and the ordering verdict at `threshold`.
pub fn compare(
    a: &LandscapeResult,
    b: &LandscapeResult,
    threshold: f64,
) -> Result<Comparison, RobustnessError> {
    if a.grid != b.grid {
        return Err(RobustnessError::GridMismatch);
    }
    let rows: Vec<AreaDifference> = a
        .region_areas
        .iter()
        .zip(&b.region_areas)
        .map(|(x, y)| AreaDifference {
            threshold: x.threshold,
            a: *x,
            b: *y,
            infidelity_diff: y.infidelity - x.infidelity,
            leakage_diff: y.leakage - x.leakage,
        })
        .collect();
    let at = rows.iter().find(|r| r.threshold == threshold);
    let (inf, leak) = match at {
        Some(r) => (r.infidelity_diff >= 0.0, r.leakage_diff >= 0.0),
        None => {
            let fa = box_fraction(&a.grid, &a.infidelity, |v| v <= threshold).0;
            let fb = box_fraction(&b.grid, &b.infidelity, |v| v <= threshold).0;
            let la = box_fraction(&a.grid, &a.leakage, |v| v <= threshold).0;
            let lb = box_fraction(&b.grid, &b.leakage, |v| v <= threshold).0;
            (fb >= fa, lb >= la)
        }
    };
    Ok(Comparison {
        rows,
        infidelity_not_smaller: inf,
        leakage_not_smaller: leak,
    })
}

/// Writes a matrix as CSV: `#` metadata lines, a header row of ε₂ values, then
/// one row per ε₁ value. Numbers use 17 significant digits.
pub fn write_matrix_csv<W: Write>(
    mut w: W,
    metadata: &[(&str, String)],
    grid: &ScanGrid,
    values: &[Vec<f64>],
) -> io::Result<()> {
    for (k, v) in metadata {
        writeln!(w, "# {k}: {v}")?;
    }
    let mut header = String::from("eps1\\eps2");
    for b in grid.eps2_values() {
        header.push(',');
        header.push_str(&fmt17(b));
    }
    writeln!(w, "{header}")?;
    for (a, row) in grid.eps1_values().iter().zip(values) {
        let mut line = fmt17(*a);
        for v in row {
            line.push(',');
            line.push_str(&fmt17(*v));
        }
        writeln!(w, "{line}")?;
    }
    Ok(())
}

/// 17 significant digits, enough to round-trip any f64.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}
