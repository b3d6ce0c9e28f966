//! Summary artifacts of simulations: pattern classification with a blob
//! count, and bifurcation sweeps over a cross-diffusion coefficient.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{CrossParam, ModelParams};
use crate::pde::{simulate, Field, Grid, SimConfig};

/// Default relative amplitude above which a field counts as patterned.
pub const DEFAULT_REL_THRESHOLD: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Homogeneous,
    Patterned,
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Classification::Homogeneous => write!(f, "homogeneous"),
            Classification::Patterned => write!(f, "patterned"),
        }
    }
}

/// Scalar summary of one field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PatternMetrics {
    /// `max - min` of the field.
    pub amplitude: f64,
    pub mean: f64,
    /// Connected components (8-connectivity) of the half-prominence
    /// superlevel set; 0 when homogeneous.
    pub spot_count: usize,
    pub classification: Classification,
}

/// One row of a bifurcation diagram.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRecord {
    pub param_value: f64,
    pub u1_min: f64,
    pub u1_max: f64,
    pub metrics: PatternMetrics,
}

/// Count connected components of `values > threshold` with 8-connectivity.
fn count_components(f: &Field, threshold: f64) -> usize {
    let (nx, ny) = (f.grid.nx, f.grid.ny);
    let mut seen = vec![false; nx * ny];
    let mut count = 0;
    let mut stack = Vec::new();
    for start in 0..nx * ny {
        if seen[start] || f.values[start] <= threshold {
            continue;
        }
        count += 1;
        seen[start] = true;
        stack.push(start);
        while let Some(idx) = stack.pop() {
            let (ix, iy) = (idx % nx, idx / nx);
            for dy in -1isize..=1 {
                for dx in -1isize..=1 {
                    if dx == 0 && dy == 0 {
                        continue;
                    }
                    let (jx, jy) = (ix as isize + dx, iy as isize + dy);
                    if jx < 0 || jy < 0 || jx >= nx as isize || jy >= ny as isize {
                        continue;
                    }
                    let j = jy as usize * nx + jx as usize;
                    if !seen[j] && f.values[j] > threshold {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
        }
    }
    count
}

/// Amplitude, mean, classification, and (when patterned) the number of blobs
/// above the half-prominence level `mean + 0.5 (max - mean)`.
pub fn pattern_metrics(f: &Field, rel_threshold: f64) -> PatternMetrics {
    let (min, max, mean) = (f.min(), f.max(), f.mean());
    let amplitude = max - min;
    let classification = if amplitude > rel_threshold * mean {
        Classification::Patterned
    } else {
        Classification::Homogeneous
    };
    let spot_count = match classification {
        Classification::Patterned => count_components(f, mean + 0.5 * (max - mean)),
        Classification::Homogeneous => 0,
    };
    PatternMetrics { amplitude, mean, spot_count, classification }
}

/// Run one full simulation per swept value (same seed for every run) and
/// record the final-state `u1` extrema and metrics. Entries run in parallel;
/// records come back in input order.
pub fn bifurcation_sweep(
    p: &ModelParams,
    grid: Grid,
    cfg: &SimConfig,
    which: CrossParam,
    values: &[f64],
    rel_threshold: f64,
) -> Result<Vec<SweepRecord>> {
    if !values.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::Domain("sweep values must be strictly increasing".into()));
    }
    values
        .par_iter()
        .map(|&v| {
            let pv = p.with_cross(which, v)?;
            let result = simulate(&pv, grid, cfg).map_err(|err| match err {
                Error::BlowUp { step, value, .. } => {
                    Error::BlowUp { step, value, context: format!(" at {which} = {v}") }
                }
                other => other,
            })?;
            let u1 = &result.final_fields[0];
            Ok(SweepRecord {
                param_value: v,
                u1_min: u1.min(),
                u1_max: u1.max(),
                metrics: pattern_metrics(u1, rel_threshold),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pde::Scheme;

    #[test]
    fn constant_field_is_homogeneous() {
        let g = Grid::new(10, 10, 1.0).unwrap();
        let m = pattern_metrics(&Field::constant(g, 0.5), DEFAULT_REL_THRESHOLD);
        assert_eq!(m.amplitude, 0.0);
        assert_eq!(m.classification, Classification::Homogeneous);
        assert_eq!(m.spot_count, 0);
    }

    /// Synthetic construction: two disjoint Gaussian bumps on a flat
    /// background count as two spots.
    #[test]
    fn two_gaussian_bumps_count_as_two_spots() {
        let g = Grid::new(64, 64, 1.0).unwrap();
        let bump = |x: f64, y: f64, cx: f64, cy: f64| {
            let r2 = (x - cx).powi(2) + (y - cy).powi(2);
            (-r2 / 18.0).exp()
        };
        let f = Field::from_fn(g, |x, y| 0.1 + bump(x, y, 16.0, 16.0) + bump(x, y, 48.0, 44.0));
        let m = pattern_metrics(&f, DEFAULT_REL_THRESHOLD);
        assert_eq!(m.classification, Classification::Patterned);
        assert_eq!(m.spot_count, 2);
    }

    #[test]
    fn component_counter_handles_diagonal_touching() {
        let g = Grid::new(5, 5, 1.0).unwrap();
        let mut f = Field::constant(g, 0.0);
        // two blobs touching only diagonally: 8-connectivity joins them
        f.set(1, 1, 1.0);
        f.set(2, 2, 1.0);
        f.set(4, 0, 1.0);
        assert_eq!(count_components(&f, 0.5), 2);
    }

    #[test]
    fn single_value_sweep_matches_direct_composition() {
        let p = ModelParams::reference(0.1);
        let g = Grid::new(16, 16, 1.0).unwrap();
        let cfg = SimConfig {
            dt: 0.005,
            steps: 200,
            snapshot_every: 200,
            seed: 5,
            perturb_amplitude: 0.05,
            scheme: Scheme::Explicit,
            picard_tol: 1e-10,
            picard_max_iters: 50,
            reaction_enabled: true,
        };
        let records =
            bifurcation_sweep(&p, g, &cfg, CrossParam::K32, &[1.2], DEFAULT_REL_THRESHOLD).unwrap();
        assert_eq!(records.len(), 1);
        let pv = p.with_cross(CrossParam::K32, 1.2).unwrap();
        let direct = simulate(&pv, g, &cfg).unwrap();
        let u1 = &direct.final_fields[0];
        assert_eq!(records[0].u1_min, u1.min());
        assert_eq!(records[0].u1_max, u1.max());
        assert_eq!(records[0].metrics, pattern_metrics(u1, DEFAULT_REL_THRESHOLD));
    }

    #[test]
    fn sweep_rejects_unsorted_values() {
        let p = ModelParams::reference(0.1);
        let g = Grid::new(16, 16, 1.0).unwrap();
        let cfg = SimConfig {
            dt: 0.005,
            steps: 10,
            snapshot_every: 10,
            seed: 5,
            perturb_amplitude: 0.05,
            scheme: Scheme::Explicit,
            picard_tol: 1e-10,
            picard_max_iters: 50,
            reaction_enabled: true,
        };
        let r = bifurcation_sweep(&p, g, &cfg, CrossParam::K32, &[2.0, 1.0], 0.01);
        assert!(r.is_err());
    }
}
