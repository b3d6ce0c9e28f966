//! Numerical laboratory for a two-prey one-predator reaction-diffusion system
//! with cross-diffusion.
//!
//! The kinetic system couples two logistically growing prey `u1`, `u2` with a
//! predator `u3`:
//!
//! ```text
//! u1' = a u1 (1 - u1) - u1 u3
//! u2' = b u2 (1 - u2) - u2 u3
//! u3' = -c u3^2 + (d u1 + e u2) u3
//! ```
//!
//! The spatial system adds nonlinear (cross-)diffusion through the flux
//! `K(u) = ((k11 + k13 u3) u1, (k22 + k23 u3) u2, (k31 u1 + k32 u2 + k33) u3)`
//! on a rectangle with no-flux boundaries. The interior equilibrium is globally
//! stable for the kinetics and stays stable under self-diffusion alone, but
//! large predator cross-diffusion (`k31` or `k32`) destabilizes it and produces
//! stationary spot patterns.
//!
//! Modules:
//! - [`model`]: parameters, equilibrium, reaction/diffusion terms, Jacobians,
//!   Lyapunov diagnostics.
//! - [`ode`]: fixed-step RK4 integration of the kinetics and Lyapunov descent
//!   verification.
//! - [`stability`]: linearization per wavenumber, Routh-Hurwitz classification,
//!   dispersion curves, instability thresholds.
//! - [`pde`]: nine-point no-flux finite differences for the full 2D system.
//! - [`analysis`]: pattern metrics and bifurcation sweeps.
//! - [`io`]: CSV / PGM / plain-text writers for all artifacts.

pub mod analysis;
pub mod error;
pub mod io;
pub mod mat3;
pub mod model;
pub mod ode;
pub mod pde;
pub mod stability;

pub use error::{Error, Result};
pub use model::{ModelParams, SpeciesState};
