//! Time stepping for the full system `u_t = Lap[K(u)] + F(u)`: seeded random
//! initial data around the equilibrium, explicit and Picard semi-implicit
//! steps, and a snapshotting driver.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::grid::{Field, Grid};
use super::stencil::nine_point_laplacian;
use crate::error::{Error, Result};
use crate::model::{ModelParams, SpeciesState};

/// Densities never drop below this floor; undershoots are clamped and
/// counted.
pub const DENSITY_FLOOR: f64 = 1e-6;

const BLOW_UP_GUARD: f64 = 1e6;

/// Time-advancing scheme for one step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// Forward Euler on the whole right-hand side.
    Explicit,
    /// Backward Euler solved by fixed-point (Picard) iteration on the
    /// right-hand side.
    SemiImplicit,
}

/// Everything a simulation run needs besides the model and the grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub dt: f64,
    pub steps: usize,
    pub snapshot_every: usize,
    pub seed: u64,
    pub perturb_amplitude: f64,
    pub scheme: Scheme,
    pub picard_tol: f64,
    pub picard_max_iters: usize,
    /// Set false to time-step the pure diffusion problem `u_t = Lap[K(u)]`.
    /// The predation terms carry no rate coefficient, so conservation checks
    /// cannot disable the reaction by zeroing rates alone.
    pub reaction_enabled: bool,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) {
            return Err(Error::Domain(format!("dt must be positive, got {}", self.dt)));
        }
        if self.steps == 0 || self.snapshot_every == 0 {
            return Err(Error::Domain("steps and snapshot_every must be positive".into()));
        }
        if self.snapshot_every > self.steps {
            return Err(Error::Domain(format!(
                "snapshot_every ({}) must not exceed steps ({})",
                self.snapshot_every, self.steps
            )));
        }
        if !(self.perturb_amplitude >= 0.0) {
            return Err(Error::Domain("perturb_amplitude must be nonnegative".into()));
        }
        if !(self.picard_tol > 0.0) || self.picard_max_iters == 0 {
            return Err(Error::Domain("picard_tol must be positive, picard_max_iters nonzero".into()));
        }
        Ok(())
    }
}

/// Per-step diagnostics.
#[derive(Debug, Clone, Copy, Default)]
pub struct StepDiag {
    /// Sites clamped to the density floor this step.
    pub clamps: usize,
    /// True when the Picard iteration hit its iteration cap without
    /// converging (always false for the explicit scheme).
    pub picard_failed: bool,
}

/// Accumulated diagnostics over a run.
#[derive(Debug, Clone, Copy, Default)]
pub struct SimDiagnostics {
    pub clamps: usize,
    pub picard_failures: usize,
}

/// Output of [`simulate`].
#[derive(Debug, Clone)]
pub struct SimResult {
    /// `(step index, fields)` every `snapshot_every` steps (the final step is
    /// always included).
    pub snapshots: Vec<(usize, [Field; 3])>,
    pub final_fields: [Field; 3],
    pub diagnostics: SimDiagnostics,
}

/// Equilibrium plus uniform noise in `[-amplitude, amplitude]`, drawn
/// per site and species from a seeded generator. Traversal order is
/// species-major, then row-major over sites, so a fixed seed reproduces the
/// fields bit for bit.
pub fn initial_condition(
    p: &ModelParams,
    grid: Grid,
    seed: u64,
    amplitude: f64,
) -> Result<[Field; 3]> {
    if !(amplitude >= 0.0) || !amplitude.is_finite() {
        return Err(Error::Domain(format!("amplitude must be nonnegative, got {amplitude}")));
    }
    let ubar = p.positive_equilibrium()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fields: [Field; 3] = std::array::from_fn(|_| Field::constant(grid, 0.0));
    for (s, base) in [ubar.u1, ubar.u2, ubar.u3].into_iter().enumerate() {
        for v in fields[s].values.iter_mut() {
            let eta = (2.0 * rng.gen::<f64>() - 1.0) * amplitude;
            *v = (base + eta).max(DENSITY_FLOOR);
        }
    }
    Ok(fields)
}

/// One application of `Lap[K(u)] + F(u)` at every site (`F` optional).
fn rhs(fields: &[Field; 3], p: &ModelParams, with_reaction: bool) -> [Field; 3] {
    let grid = fields[0].grid;
    let mut flux: [Field; 3] = std::array::from_fn(|_| Field::constant(grid, 0.0));
    for i in 0..grid.len() {
        let u = SpeciesState::new(fields[0].values[i], fields[1].values[i], fields[2].values[i]);
        let k = p.diffusion_flux(&u);
        flux[0].values[i] = k[0];
        flux[1].values[i] = k[1];
        flux[2].values[i] = k[2];
    }
    let mut out: [Field; 3] = std::array::from_fn(|s| nine_point_laplacian(&flux[s]));
    if with_reaction {
        for i in 0..grid.len() {
            let u =
                SpeciesState::new(fields[0].values[i], fields[1].values[i], fields[2].values[i]);
            let f = p.reaction(&u);
            out[0].values[i] += f[0];
            out[1].values[i] += f[1];
            out[2].values[i] += f[2];
        }
    }
    out
}

fn clamp_and_guard(fields: &mut [Field; 3], step_index: usize) -> Result<usize> {
    let mut clamps = 0;
    for f in fields.iter_mut() {
        for v in f.values.iter_mut() {
            if !v.is_finite() || v.abs() > BLOW_UP_GUARD {
                return Err(Error::BlowUp { step: step_index, value: *v, context: String::new() });
            }
            if *v < DENSITY_FLOOR {
                *v = DENSITY_FLOOR;
                clamps += 1;
            }
        }
    }
    Ok(clamps)
}

fn max_norm_diff(a: &[Field; 3], b: &[Field; 3]) -> f64 {
    let mut worst = 0.0f64;
    for s in 0..3 {
        for (x, y) in a[s].values.iter().zip(&b[s].values) {
            worst = worst.max((x - y).abs());
        }
    }
    worst
}

/// Advance one time step. `step_index` only labels diagnostics and errors.
pub fn step(
    fields: &[Field; 3],
    p: &ModelParams,
    cfg: &SimConfig,
    step_index: usize,
) -> Result<([Field; 3], StepDiag)> {
    let dt = cfg.dt;
    let mut diag = StepDiag::default();
    let mut next: [Field; 3];
    match cfg.scheme {
        Scheme::Explicit => {
            let r = rhs(fields, p, cfg.reaction_enabled);
            next = fields.clone();
            for s in 0..3 {
                for (v, dv) in next[s].values.iter_mut().zip(&r[s].values) {
                    *v += dt * dv;
                }
            }
        }
        Scheme::SemiImplicit => {
            // u^{n+1} = u^n + dt * RHS(u*), iterated on u*
            let mut iterate = fields.clone();
            let mut converged = false;
            for _ in 0..cfg.picard_max_iters {
                let r = rhs(&iterate, p, cfg.reaction_enabled);
                let mut candidate = fields.clone();
                for s in 0..3 {
                    for (v, dv) in candidate[s].values.iter_mut().zip(&r[s].values) {
                        *v += dt * dv;
                    }
                }
                let delta = max_norm_diff(&candidate, &iterate);
                iterate = candidate;
                if delta < cfg.picard_tol {
                    converged = true;
                    break;
                }
            }
            diag.picard_failed = !converged;
            next = iterate;
        }
    }
    diag.clamps = clamp_and_guard(&mut next, step_index)?;
    Ok((next, diag))
}

/// Seeded initial condition followed by `cfg.steps` time steps, with
/// snapshots every `cfg.snapshot_every` steps.
pub fn simulate(p: &ModelParams, grid: Grid, cfg: &SimConfig) -> Result<SimResult> {
    cfg.validate()?;
    let mut fields = initial_condition(p, grid, cfg.seed, cfg.perturb_amplitude)?;
    let mut snapshots = Vec::new();
    let mut diagnostics = SimDiagnostics::default();
    for n in 1..=cfg.steps {
        let (next, diag) = step(&fields, p, cfg, n)?;
        fields = next;
        diagnostics.clamps += diag.clamps;
        diagnostics.picard_failures += diag.picard_failed as usize;
        if n % cfg.snapshot_every == 0 || n == cfg.steps {
            snapshots.push((n, fields.clone()));
        }
    }
    Ok(SimResult { final_fields: fields, snapshots, diagnostics })
}
