use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// The existence condition `a b c > max{e(b - a), d(a - b)}` for the
    /// interior equilibrium does not hold.
    #[error("existence condition abc > max{{e(b-a), d(a-b)}} violated")]
    ConditionViolated,

    /// A value left the mathematical domain of an operation (non-positive
    /// density under a logarithm, invalid parameter, bad grid).
    #[error("domain error: {0}")]
    Domain(String),

    /// The ODE integrator produced a non-finite component; the step size is
    /// too large for the requested trajectory.
    #[error("non-finite state at t = {t}; step size {dt} too large")]
    StepSize { t: f64, dt: f64 },

    /// A PDE field value exceeded the blow-up guard or became non-finite.
    /// `context` names the sweep value responsible, when there is one.
    #[error("field blow-up at step {step} (value {value}){context}")]
    BlowUp { step: usize, value: f64, context: String },

    /// A bisection bracket whose endpoints do not straddle a stability
    /// transition.
    #[error("bracket error: {0}")]
    Bracket(String),
}

pub type Result<T> = std::result::Result<T, Error>;
