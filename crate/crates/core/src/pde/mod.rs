//! Finite-difference simulation of the full reaction-diffusion system on a
//! rectangle with no-flux boundaries: the nine-point Laplacian acts on the
//! nonlinear flux `K(u)` per species.

mod grid;
mod sim;
mod stencil;

pub use grid::{Field, Grid};
pub use sim::{
    initial_condition, simulate, step, Scheme, SimConfig, SimDiagnostics, SimResult, StepDiag,
    DENSITY_FLOOR,
};
pub use stencil::nine_point_laplacian;
