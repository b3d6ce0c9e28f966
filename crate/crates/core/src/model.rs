//! Model definition: kinetic rates, diffusion coefficients, the interior
//! equilibrium, reaction and diffusion terms with their Jacobians, and the
//! Lyapunov diagnostics that certify global stability of the kinetics.

use crate::error::{Error, Result};
use crate::mat3::Mat3;

/// Kinetic rates `a, b, c, d, e` and the 3x3 diffusion-coefficient table
/// `k[i][j]` (zero-based; `k[0][0]` is k11 and so on).
///
/// `k[0][1]` and `k[1][0]` are identically zero: the model has no direct
/// prey-prey diffusion coupling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub k: Mat3,
}

/// Population densities `(u1, u2, u3)` at a point, or the spatially uniform
/// state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeciesState {
    pub u1: f64,
    pub u2: f64,
    pub u3: f64,
}

impl SpeciesState {
    pub fn new(u1: f64, u2: f64, u3: f64) -> Self {
        Self { u1, u2, u3 }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.u1, self.u2, self.u3]
    }

    pub fn from_array(v: [f64; 3]) -> Self {
        Self::new(v[0], v[1], v[2])
    }

    /// Max-norm distance to another state.
    pub fn dist_inf(&self, other: &Self) -> f64 {
        (self.u1 - other.u1)
            .abs()
            .max((self.u2 - other.u2).abs())
            .max((self.u3 - other.u3).abs())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.u1 >= 0.0 && self.u2 >= 0.0 && self.u3 >= 0.0
    }

    pub fn is_positive(&self) -> bool {
        self.u1 > 0.0 && self.u2 > 0.0 && self.u3 > 0.0
    }
}

impl ModelParams {
    /// Validated constructor. Rejects non-positive rates, non-positive
    /// self-diffusion, negative cross-diffusion, and nonzero `k12`/`k21`.
    pub fn new(a: f64, b: f64, c: f64, d: f64, e: f64, k: Mat3) -> Result<Self> {
        for (name, v) in [("a", a), ("b", b), ("c", c), ("d", d), ("e", e)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Domain(format!("rate {name} must be positive, got {v}")));
            }
        }
        for i in 0..3 {
            if !(k[i][i] > 0.0) || !k[i][i].is_finite() {
                return Err(Error::Domain(format!(
                    "self-diffusion k{}{} must be positive, got {}",
                    i + 1,
                    i + 1,
                    k[i][i]
                )));
            }
        }
        for (i, j) in [(0, 2), (1, 2), (2, 0), (2, 1)] {
            if !(k[i][j] >= 0.0) || !k[i][j].is_finite() {
                return Err(Error::Domain(format!(
                    "cross-diffusion k{}{} must be nonnegative, got {}",
                    i + 1,
                    j + 1,
                    k[i][j]
                )));
            }
        }
        if k[0][1] != 0.0 || k[1][0] != 0.0 {
            return Err(Error::Domain(
                "k12 and k21 must be zero: the model has no prey-prey diffusion coupling".into(),
            ));
        }
        Ok(Self { a, b, c, d, e, k })
    }

    /// The reference parameter set used by the bundled presets:
    /// `a = b = 1`, `c = d = e = 0.1`, every fixed diffusion coefficient 0.1,
    /// and `k32` free.
    pub fn reference(k32: f64) -> Self {
        let k = [[0.1, 0.0, 0.1], [0.0, 0.1, 0.1], [0.1, k32, 0.1]];
        Self::new(1.0, 1.0, 0.1, 0.1, 0.1, k).expect("reference parameters are valid")
    }

    /// Copy with one cross-diffusion coefficient replaced.
    pub fn with_cross(&self, which: CrossParam, value: f64) -> Result<Self> {
        let mut k = self.k;
        match which {
            CrossParam::K31 => k[2][0] = value,
            CrossParam::K32 => k[2][1] = value,
        }
        Self::new(self.a, self.b, self.c, self.d, self.e, k)
    }

    /// Existence condition for the interior equilibrium:
    /// `a b c > max{e(b - a), d(a - b)}`.
    pub fn check_existence(&self) -> bool {
        self.a * self.b * self.c > (self.e * (self.b - self.a)).max(self.d * (self.a - self.b))
    }

    /// Closed-form interior equilibrium. All three components are strictly
    /// positive whenever the existence condition holds.
    pub fn positive_equilibrium(&self) -> Result<SpeciesState> {
        if !self.check_existence() {
            return Err(Error::ConditionViolated);
        }
        let Self { a, b, c, d, e, .. } = *self;
        let den = a * b * c + b * d + a * e;
        Ok(SpeciesState::new(
            (a * b * c + a * e - b * e) / den,
            (a * b * c + b * d - a * d) / den,
            a * b * (d + e) / den,
        ))
    }

    /// Reaction term `F(u)`.
    pub fn reaction(&self, u: &SpeciesState) -> [f64; 3] {
        let Self { a, b, c, d, e, .. } = *self;
        [
            a * u.u1 * (1.0 - u.u1) - u.u1 * u.u3,
            b * u.u2 * (1.0 - u.u2) - u.u2 * u.u3,
            -c * u.u3 * u.u3 + (d * u.u1 + e * u.u2) * u.u3,
        ]
    }

    /// Jacobian of the reaction term at an arbitrary state. At the
    /// equilibrium this reduces to
    /// `[[-a u1, 0, -u1], [0, -b u2, -u2], [d u3, e u3, -c u3]]`.
    pub fn reaction_jacobian(&self, u: &SpeciesState) -> Mat3 {
        let Self { a, b, c, d, e, .. } = *self;
        [
            [a * (1.0 - 2.0 * u.u1) - u.u3, 0.0, -u.u1],
            [0.0, b * (1.0 - 2.0 * u.u2) - u.u3, -u.u2],
            [d * u.u3, e * u.u3, -2.0 * c * u.u3 + d * u.u1 + e * u.u2],
        ]
    }

    /// Diffusion flux `K(u)`; the Laplacian acts on this vector in the PDE.
    pub fn diffusion_flux(&self, u: &SpeciesState) -> [f64; 3] {
        let k = &self.k;
        [
            (k[0][0] + k[0][2] * u.u3) * u.u1,
            (k[1][1] + k[1][2] * u.u3) * u.u2,
            (k[2][0] * u.u1 + k[2][1] * u.u2 + k[2][2]) * u.u3,
        ]
    }

    /// Jacobian of the diffusion flux at an arbitrary state. At the
    /// equilibrium this is the matrix whose rows are
    /// `[k11 + k13 u3, 0, k13 u1]`, `[0, k22 + k23 u3, k23 u2]`,
    /// `[k31 u3, k32 u3, k33 + k31 u1 + k32 u2]`.
    pub fn diffusion_jacobian(&self, u: &SpeciesState) -> Mat3 {
        let k = &self.k;
        [
            [k[0][0] + k[0][2] * u.u3, 0.0, k[0][2] * u.u1],
            [0.0, k[1][1] + k[1][2] * u.u3, k[1][2] * u.u2],
            [
                k[2][0] * u.u3,
                k[2][1] * u.u3,
                k[2][2] + k[2][0] * u.u1 + k[2][1] * u.u2,
            ],
        ]
    }
}

fn require_positive(u: &SpeciesState, what: &str) -> Result<()> {
    if u.is_positive() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "{what} requires strictly positive densities, got ({}, {}, {})",
            u.u1, u.u2, u.u3
        )))
    }
}

/// Lyapunov function
/// `V(u) = d(u1 - ub1 - ub1 ln(u1/ub1)) + e(...) + (u3 - ub3 - ub3 ln(u3/ub3))`.
///
/// Nonnegative, and zero exactly at `u = ubar`.
pub fn lyapunov_value(p: &ModelParams, ubar: &SpeciesState, u: &SpeciesState) -> Result<f64> {
    require_positive(u, "lyapunov_value")?;
    require_positive(ubar, "lyapunov_value")?;
    let term = |x: f64, xb: f64| x - xb - xb * (x / xb).ln();
    Ok(p.d * term(u.u1, ubar.u1) + p.e * term(u.u2, ubar.u2) + term(u.u3, ubar.u3))
}

/// Time derivative of `V` along the kinetics, in the closed form
/// `-ad(u1-ub1)^2 - be(u2-ub2)^2 - c(u3-ub3)^2`.
///
/// Equals `grad V . F(u)` when `ubar` is the interior equilibrium.
pub fn lyapunov_derivative(p: &ModelParams, ubar: &SpeciesState, u: &SpeciesState) -> Result<f64> {
    require_positive(u, "lyapunov_derivative")?;
    require_positive(ubar, "lyapunov_derivative")?;
    let (d1, d2, d3) = (u.u1 - ubar.u1, u.u2 - ubar.u2, u.u3 - ubar.u3);
    Ok(-p.a * p.d * d1 * d1 - p.b * p.e * d2 * d2 - p.c * d3 * d3)
}

/// Which cross-diffusion coefficient a sweep or threshold search varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrossParam {
    K31,
    K32,
}

impl std::fmt::Display for CrossParam {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CrossParam::K31 => write!(f, "k31"),
            CrossParam::K32 => write!(f, "k32"),
        }
    }
}
