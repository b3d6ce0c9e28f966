//! Randomized property suites for the linear-stability module: stability
//! across all wavenumbers without predator cross-diffusion, agreement of the
//! three independent instability criteria, and the root structure of the
//! determinant cubic in the unstable regime.

use crossdiff_core::mat3::Mat3;
use crossdiff_core::stability::{
    char_coeffs, cubic_roots, det_cubic, max_real_eigenvalue, routh_hurwitz_stable,
    unstable_mu_interval, CubicCoeffs,
};
use crossdiff_core::ModelParams;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random rates satisfying the equilibrium existence condition.
fn random_rates(rng: &mut ChaCha8Rng) -> (f64, f64, f64, f64, f64) {
    loop {
        let a: f64 = rng.gen_range(0.2..2.0);
        let b: f64 = rng.gen_range(0.2..2.0);
        let c: f64 = rng.gen_range(0.05..1.0);
        let d: f64 = rng.gen_range(0.05..1.0);
        let e: f64 = rng.gen_range(0.05..1.0);
        if a * b * c > (e * (b - a)).max(d * (a - b)) {
            return (a, b, c, d, e);
        }
    }
}

fn mu_grid(n: usize, hi: f64) -> Vec<f64> {
    (0..n).map(|i| hi * i as f64 / (n - 1) as f64).collect()
}

#[test]
fn self_diffusion_only_never_destabilizes() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let grid = mu_grid(2000, 1e3);
    for _ in 0..50 {
        let (a, b, c, d, e) = random_rates(&mut rng);
        let k: Mat3 = [
            [rng.gen_range(0.05..1.0), 0.0, 0.0],
            [0.0, rng.gen_range(0.05..1.0), 0.0],
            [0.0, 0.0, rng.gen_range(0.05..1.0)],
        ];
        let p = ModelParams::new(a, b, c, d, e, k).unwrap();
        for &mu in &grid {
            let cc = char_coeffs(&p, mu).unwrap();
            // all four Routh-Hurwitz quantities strictly positive
            assert!(cc.a2 > 0.0 && cc.a1 > 0.0 && cc.a0 > 0.0, "mu = {mu}, {p:?}");
            assert!(cc.a2 * cc.a1 - cc.a0 > 0.0, "mu = {mu}, {p:?}");
        }
    }
}

#[test]
fn prey_cross_diffusion_alone_never_destabilizes() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    let grid = mu_grid(2000, 1e3);
    for _ in 0..50 {
        let (a, b, c, d, e) = random_rates(&mut rng);
        // k31 = k32 = 0, random positive k13 and k23
        let k: Mat3 = [
            [rng.gen_range(0.05..1.0), 0.0, rng.gen_range(0.0..5.0) + 1e-3],
            [0.0, rng.gen_range(0.05..1.0), rng.gen_range(0.0..5.0) + 1e-3],
            [0.0, 0.0, rng.gen_range(0.05..1.0)],
        ];
        let p = ModelParams::new(a, b, c, d, e, k).unwrap();
        for &mu in &grid {
            assert!(routh_hurwitz_stable(&char_coeffs(&p, mu).unwrap()), "mu = {mu}, {p:?}");
        }
        assert!(unstable_mu_interval(&p).unwrap().is_none(), "{p:?}");
    }
}

fn random_full_params(rng: &mut ChaCha8Rng) -> ModelParams {
    let (a, b, c, d, e) = random_rates(rng);
    let k: Mat3 = [
        [rng.gen_range(0.05..1.0), 0.0, rng.gen_range(0.0..5.0)],
        [0.0, rng.gen_range(0.05..1.0), rng.gen_range(0.0..5.0)],
        [rng.gen_range(0.0..5.0), rng.gen_range(0.0..5.0), rng.gen_range(0.05..1.0)],
    ];
    ModelParams::new(a, b, c, d, e, k).unwrap()
}

/// Parameters close to the reference set with a large predator
/// cross-diffusion coefficient; this family reliably straddles the
/// instability onset, unlike uniform draws over the whole box.
fn near_onset_params(rng: &mut ChaCha8Rng) -> ModelParams {
    loop {
        let a: f64 = rng.gen_range(0.8..1.2);
        let b: f64 = rng.gen_range(0.8..1.2);
        let c: f64 = rng.gen_range(0.08..0.15);
        let d: f64 = rng.gen_range(0.08..0.15);
        let e: f64 = rng.gen_range(0.08..0.15);
        let k: Mat3 = [
            [rng.gen_range(0.05..0.15), 0.0, rng.gen_range(0.0..0.2)],
            [0.0, rng.gen_range(0.05..0.15), rng.gen_range(0.0..0.2)],
            [rng.gen_range(0.0..0.2), rng.gen_range(1.5..4.0), rng.gen_range(0.05..0.15)],
        ];
        if a * b * c > (e * (b - a)).max(d * (a - b)) {
            return ModelParams::new(a, b, c, d, e, k).unwrap();
        }
    }
}

/// The three instability criteria must agree in sign on random draws:
/// Routh-Hurwitz, the max real eigenvalue from the cubic solver, and the
/// determinant sign rule `a0(mu) < 0`. Half the draws come from the
/// near-onset family so that both classifications actually occur.
#[test]
fn eigenvalue_routh_hurwitz_and_determinant_criteria_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let mut unstable_seen = 0usize;
    let mut stable_seen = 0usize;
    for i in 0..1000 {
        let (p, mu) = if i % 2 == 0 {
            (random_full_params(&mut rng), rng.gen_range(0.0..50.0))
        } else {
            (near_onset_params(&mut rng), rng.gen_range(0.0..3.0))
        };
        let max_re = max_real_eigenvalue(&p, mu).unwrap();
        if max_re.abs() < 1e-10 {
            continue; // too close to marginal to classify reliably
        }
        let cc = char_coeffs(&p, mu).unwrap();
        let rh = routh_hurwitz_stable(&cc);
        assert_eq!(rh, max_re < 0.0, "mu = {mu}, max Re = {max_re}, {p:?}");
        if cc.a0 < 0.0 {
            // negative product of roots forces a positive real root
            assert!(max_re > 0.0, "mu = {mu}, a0 = {}, {p:?}", cc.a0);
        }
        if max_re > 0.0 {
            unstable_seen += 1;
        } else {
            stable_seen += 1;
        }
    }
    // the draw ranges must actually exercise both outcomes
    assert!(unstable_seen > 50, "only {unstable_seen} unstable draws");
    assert!(stable_seen > 50, "only {stable_seen} stable draws");
}

/// Whenever an unstable wavenumber interval exists, the determinant cubic has
/// exactly three real roots: one negative and two positive.
#[test]
fn unstable_interval_implies_one_negative_two_positive_roots() {
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    let mut present = 0usize;
    for i in 0..500 {
        let p = if i % 2 == 0 { random_full_params(&mut rng) } else { near_onset_params(&mut rng) };
        let Some(interval) = unstable_mu_interval(&p).unwrap() else { continue };
        present += 1;
        let cubic = det_cubic(&p).unwrap();
        assert!(cubic.c3 > 0.0, "{p:?}");
        let monic = CubicCoeffs {
            a2: cubic.c2 / cubic.c3,
            a1: cubic.c1 / cubic.c3,
            a0: cubic.c0 / cubic.c3,
        };
        let roots = cubic_roots(&monic);
        assert!(roots.iter().all(|r| r.im == 0.0), "complex roots with interval {interval:?}");
        let negatives = roots.iter().filter(|r| r.re < 0.0).count();
        let positives = roots.iter().filter(|r| r.re > 0.0).count();
        assert_eq!((negatives, positives), (1, 2), "roots {roots:?}, {p:?}");
        assert!(interval.mu_lo > 0.0 && interval.mu_lo < interval.mu_hi);
        // growth rate is positive inside the interval
        assert!(max_real_eigenvalue(&p, interval.midpoint()).unwrap() > 0.0);
    }
    assert!(present > 30, "only {present} draws produced an unstable interval");
}
