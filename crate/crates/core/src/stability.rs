//! Linearized stability of the interior equilibrium per wavenumber: the
//! characteristic cubic of `-mu K_u(ubar) + G_u(ubar)`, Routh-Hurwitz
//! classification, the determinant cubic in `mu`, unstable wavenumber
//! intervals, instability thresholds in the cross-diffusion coefficients,
//! and dispersion curves.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::mat3::{self, Mat3};
use crate::model::{CrossParam, ModelParams};

/// Coefficients of the characteristic cubic
/// `rho(lambda) = lambda^3 + a2 lambda^2 + a1 lambda + a0` at one wavenumber.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicCoeffs {
    pub a2: f64,
    pub a1: f64,
    pub a0: f64,
}

/// The constant term of the characteristic cubic as a polynomial in the
/// wavenumber: `a0(mu) = c3 mu^3 + c2 mu^2 + c1 mu + c0 = det(mu K - G)`.
///
/// Instability at a wavenumber is equivalent to `a0(mu) < 0` there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetCubic {
    pub c3: f64,
    pub c2: f64,
    pub c1: f64,
    pub c0: f64,
}

impl DetCubic {
    pub fn eval(&self, mu: f64) -> f64 {
        ((self.c3 * mu + self.c2) * mu + self.c1) * mu + self.c0
    }
}

impl std::fmt::Display for DetCubic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "a0(mu) = {:+e} mu^3 {:+e} mu^2 {:+e} mu {:+e}",
            self.c3, self.c2, self.c1, self.c0
        )
    }
}

impl std::fmt::Display for CubicCoeffs {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "rho(lambda) = lambda^3 {:+e} lambda^2 {:+e} lambda {:+e}",
            self.a2, self.a1, self.a0
        )
    }
}

/// Open interval of wavenumbers on which `a0(mu) < 0`, i.e. the linearization
/// has a positive real eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnstableInterval {
    pub mu_lo: f64,
    pub mu_hi: f64,
}

impl UnstableInterval {
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.mu_lo + self.mu_hi)
    }

    pub fn contains(&self, mu: f64) -> bool {
        self.mu_lo < mu && mu < self.mu_hi
    }
}

/// What the abscissa of a dispersion curve ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepKind {
    Wavenumber,
    Parameter(CrossParam),
}

/// Growth rate `max Re(lambda)` sampled along a wavenumber or parameter sweep.
#[derive(Debug, Clone)]
pub struct DispersionCurve {
    pub kind: SweepKind,
    /// `(x, re_lambda_max)` pairs with strictly increasing `x`.
    pub points: Vec<(f64, f64)>,
}

/// Which wavenumbers an instability search ranges over: every `mu >= 0`, or
/// only the Neumann eigenvalues admitted by a fixed rectangle.
#[derive(Debug, Clone)]
pub enum MuDomain {
    Continuous,
    Lattice(Vec<f64>),
}

const ROOT_REL_TOL: f64 = 1e-8;

/// The linearization `-mu K_u(ubar) + G_u(ubar)` at wavenumber `mu`.
pub fn stability_matrix(p: &ModelParams, mu: f64) -> Result<Mat3> {
    let ubar = p.positive_equilibrium()?;
    let ku = p.diffusion_jacobian(&ubar);
    let gu = p.reaction_jacobian(&ubar);
    Ok(mat3::lin_comb(-mu, &ku, 1.0, &gu))
}

/// Characteristic-cubic coefficients, computed from the matrix itself
/// (negated trace, principal-minor sum, negated determinant) rather than any
/// expanded closed form.
pub fn char_coeffs(p: &ModelParams, mu: f64) -> Result<CubicCoeffs> {
    let m = stability_matrix(p, mu)?;
    Ok(CubicCoeffs {
        a2: -mat3::trace(&m),
        a1: mat3::principal_minor_sum(&m),
        a0: -mat3::det(&m),
    })
}

/// Routh-Hurwitz test for a monic cubic: all roots have negative real parts
/// iff `a2 > 0`, `a0 > 0`, and `a2 a1 - a0 > 0`.
pub fn routh_hurwitz_stable(c: &CubicCoeffs) -> bool {
    c.a2 > 0.0 && c.a0 > 0.0 && c.a2 * c.a1 - c.a0 > 0.0
}

/// Roots of `lambda^3 + a2 lambda^2 + a1 lambda + a0`, by reduction to a
/// depressed cubic (trigonometric form for three real roots, Cardano with a
/// cancellation-safe branch otherwise) followed by one Newton polish of the
/// real roots.
pub fn cubic_roots(c: &CubicCoeffs) -> [Complex64; 3] {
    let CubicCoeffs { a2, a1, a0 } = *c;
    let shift = a2 / 3.0;
    let p = a1 - a2 * a2 / 3.0;
    let q = 2.0 * a2.powi(3) / 27.0 - a2 * a1 / 3.0 + a0;

    let scale = 1.0 + a2.abs().max(a1.abs()).max(a0.abs());
    let mut roots: [Complex64; 3];
    let disc = -4.0 * p * p * p - 27.0 * q * q;
    if p.abs() < 1e-14 * scale && q.abs() < 1e-14 * scale * scale {
        // triple root (to working precision)
        let r = Complex64::new(-shift, 0.0);
        roots = [r, r, r];
    } else if disc > 0.0 {
        // three distinct real roots
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (2.0 * p) * (-3.0 / p).sqrt()).clamp(-1.0, 1.0);
        let phi = arg.acos();
        roots = std::array::from_fn(|k| {
            let t = m * ((phi - 2.0 * std::f64::consts::PI * k as f64) / 3.0).cos();
            Complex64::new(t - shift, 0.0)
        });
    } else {
        // one real root and a complex-conjugate pair
        let s = (q * q / 4.0 + p * p * p / 27.0).max(0.0).sqrt();
        let u = if q >= 0.0 { -q / 2.0 - s } else { -q / 2.0 + s }.cbrt();
        let v = if u != 0.0 { -p / (3.0 * u) } else { 0.0 };
        let t_real = u + v;
        let re = -t_real / 2.0;
        let im = 3f64.sqrt() / 2.0 * (u - v).abs();
        roots = [
            Complex64::new(t_real - shift, 0.0),
            Complex64::new(re - shift, im),
            Complex64::new(re - shift, -im),
        ];
    }

    // Newton polish of the real roots against the original cubic.
    for r in roots.iter_mut() {
        if r.im == 0.0 {
            let mut x = r.re;
            for _ in 0..2 {
                let f = ((x + a2) * x + a1) * x + a0;
                let df = (3.0 * x + 2.0 * a2) * x + a1;
                if df.abs() > 1e-300 {
                    let step = f / df;
                    if step.abs() <= 1e-3 * (1.0 + x.abs()) {
                        x -= step;
                    }
                }
            }
            *r = Complex64::new(x, 0.0);
        }
    }
    roots
}

/// Largest real part among the eigenvalues of the linearization at `mu`.
pub fn max_real_eigenvalue(p: &ModelParams, mu: f64) -> Result<f64> {
    let c = char_coeffs(p, mu)?;
    let roots = cubic_roots(&c);
    Ok(roots.iter().map(|r| r.re).fold(f64::NEG_INFINITY, f64::max))
}

/// Exact coefficients of `mu -> det(mu K_u(ubar) - G_u(ubar))`, extracted by
/// evaluating the determinant at four nodes and taking Newton divided
/// differences (exact for a cubic up to round-off).
pub fn det_cubic(p: &ModelParams) -> Result<DetCubic> {
    let ubar = p.positive_equilibrium()?;
    let ku = p.diffusion_jacobian(&ubar);
    let gu = p.reaction_jacobian(&ubar);
    let f = |mu: f64| mat3::det(&mat3::lin_comb(mu, &ku, -1.0, &gu));
    let (f0, f1, f2, f3) = (f(0.0), f(1.0), f(2.0), f(3.0));
    let d1 = f1 - f0;
    let d2 = (f2 - 2.0 * f1 + f0) / 2.0;
    let d3 = (f3 - 3.0 * f2 + 3.0 * f1 - f0) / 6.0;
    Ok(DetCubic {
        c3: d3,
        c2: d2 - 3.0 * d3,
        c1: d1 - d2 + 2.0 * d3,
        c0: f0,
    })
}

/// The open wavenumber interval on which `a0(mu) < 0`, when the determinant
/// cubic has two simple positive roots enclosing a negative dip; `None` in
/// the stable regime or when the candidate roots are too close to separate.
pub fn unstable_mu_interval(p: &ModelParams) -> Result<Option<UnstableInterval>> {
    let cubic = det_cubic(p)?;
    if cubic.c3.abs() < 1e-300 {
        return Ok(None);
    }
    let monic = CubicCoeffs {
        a2: cubic.c2 / cubic.c3,
        a1: cubic.c1 / cubic.c3,
        a0: cubic.c0 / cubic.c3,
    };
    let mut real_roots: Vec<f64> = cubic_roots(&monic)
        .iter()
        .filter(|r| r.im == 0.0)
        .map(|r| r.re)
        .collect();
    // polish against the det cubic itself
    for r in real_roots.iter_mut() {
        for _ in 0..3 {
            let f = cubic.eval(*r);
            let df = (3.0 * cubic.c3 * *r + 2.0 * cubic.c2) * *r + cubic.c1;
            if df.abs() > 1e-300 {
                *r -= f / df;
            }
        }
    }
    real_roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let positive: Vec<f64> = real_roots.iter().copied().filter(|&r| r > 0.0).collect();
    if positive.len() < 2 {
        return Ok(None);
    }
    let (lo, hi) = (positive[0], positive[1]);
    if (hi - lo).abs() < ROOT_REL_TOL * (1.0 + hi.abs()) {
        return Ok(None); // effectively a double root
    }
    if cubic.eval(0.5 * (lo + hi)) < 0.0 {
        Ok(Some(UnstableInterval { mu_lo: lo, mu_hi: hi }))
    } else {
        Ok(None)
    }
}

fn is_unstable(p: &ModelParams, domain: &MuDomain) -> Result<bool> {
    match domain {
        MuDomain::Continuous => Ok(unstable_mu_interval(p)?.is_some()),
        MuDomain::Lattice(mus) => {
            for &mu in mus {
                if max_real_eigenvalue(p, mu)? > 0.0 {
                    return Ok(true);
                }
            }
            Ok(false)
        }
    }
}

/// Bisection for the critical cross-diffusion coefficient at which an
/// unstable wavenumber first appears. The bracket must be stable at `lo` and
/// unstable at `hi`; monotonicity is assumed between the probes.
pub fn turing_threshold(
    p: &ModelParams,
    which: CrossParam,
    lo: f64,
    hi: f64,
    tol: f64,
    domain: &MuDomain,
) -> Result<f64> {
    if !(lo < hi) || !(tol > 0.0) {
        return Err(Error::Domain(format!("bad bracket/tolerance: lo={lo}, hi={hi}, tol={tol}")));
    }
    let probe = |v: f64| -> Result<bool> { is_unstable(&p.with_cross(which, v)?, domain) };
    let (at_lo, at_hi) = (probe(lo)?, probe(hi)?);
    if at_lo || !at_hi {
        return Err(Error::Bracket(format!(
            "{which} in [{lo}, {hi}]: lo {}, hi {} (need stable at lo, unstable at hi)",
            if at_lo { "unstable" } else { "stable" },
            if at_hi { "unstable" } else { "stable" },
        )));
    }
    let (mut lo, mut hi) = (lo, hi);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if probe(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Growth rate maximized over `mu_set`, for each value of the swept
/// cross-diffusion coefficient.
pub fn dispersion_vs_parameter(
    p: &ModelParams,
    which: CrossParam,
    values: &[f64],
    mu_set: &[f64],
) -> Result<DispersionCurve> {
    if mu_set.is_empty() {
        return Err(Error::Domain("mu_set must be nonempty".into()));
    }
    if !values.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::Domain("swept values must be strictly increasing".into()));
    }
    let mut points = Vec::with_capacity(values.len());
    for &v in values {
        let pv = p.with_cross(which, v)?;
        let mut worst = f64::NEG_INFINITY;
        for &mu in mu_set {
            worst = worst.max(max_real_eigenvalue(&pv, mu)?);
        }
        points.push((v, worst));
    }
    Ok(DispersionCurve { kind: SweepKind::Parameter(which), points })
}

/// Growth rate as a function of wavenumber at fixed parameters.
pub fn dispersion_vs_wavenumber(p: &ModelParams, mu_set: &[f64]) -> Result<DispersionCurve> {
    if !mu_set.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::Domain("mu_set must be strictly increasing".into()));
    }
    let mut points = Vec::with_capacity(mu_set.len());
    for &mu in mu_set {
        points.push((mu, max_real_eigenvalue(p, mu)?));
    }
    Ok(DispersionCurve { kind: SweepKind::Wavenumber, points })
}

/// Neumann Laplacian eigenvalues `mu = pi^2 ((m/Lx)^2 + (n/Ly)^2)` for
/// `m = 0..m_max`, `n = 0..n_max`, sorted and deduplicated. Always contains
/// `mu = 0`.
pub fn admissible_wavenumbers(lx: f64, ly: f64, m_max: usize, n_max: usize) -> Result<Vec<f64>> {
    if !(lx > 0.0) || !(ly > 0.0) {
        return Err(Error::Domain(format!("domain lengths must be positive, got {lx} x {ly}")));
    }
    let pi2 = std::f64::consts::PI * std::f64::consts::PI;
    let mut mus = Vec::with_capacity((m_max + 1) * (n_max + 1));
    for m in 0..=m_max {
        for n in 0..=n_max {
            let rm = m as f64 / lx;
            let rn = n as f64 / ly;
            mus.push(pi2 * (rm * rm + rn * rn));
        }
    }
    mus.sort_by(|a, b| a.partial_cmp(b).unwrap());
    mus.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * (1.0 + b.abs()));
    Ok(mus)
}
