//! Property tests for the hand-rolled cubic solver: residuals vanish at every
//! returned root, and cubics built from known real roots are recovered.

use crossdiff_core::stability::{cubic_roots, CubicCoeffs};
use num_complex::Complex64;
use proptest::prelude::*;

fn residual(c: &CubicCoeffs, z: Complex64) -> f64 {
    (z.powu(3) + c.a2 * z.powu(2) + c.a1 * z + c.a0).norm()
}

proptest! {
    #[test]
    fn roots_annihilate_the_cubic(
        a2 in -50.0f64..50.0,
        a1 in -50.0f64..50.0,
        a0 in -50.0f64..50.0,
    ) {
        let c = CubicCoeffs { a2, a1, a0 };
        let scale = 1.0 + a2.abs().max(a1.abs()).max(a0.abs());
        for z in cubic_roots(&c) {
            let tol = 1e-7 * scale * (1.0 + z.norm().powi(3));
            prop_assert!(residual(&c, z) <= tol, "residual {} at {z}", residual(&c, z));
        }
    }

    #[test]
    fn known_real_roots_are_recovered(
        r1 in -10.0f64..10.0,
        r2 in -10.0f64..10.0,
        r3 in -10.0f64..10.0,
    ) {
        // (x - r1)(x - r2)(x - r3), skipping near-degenerate spacings where
        // root identification is ill-conditioned
        let mut want = [r1, r2, r3];
        want.sort_by(|a, b| a.partial_cmp(b).unwrap());
        prop_assume!(want.windows(2).all(|w| w[1] - w[0] > 0.1));
        let c = CubicCoeffs {
            a2: -(r1 + r2 + r3),
            a1: r1 * r2 + r1 * r3 + r2 * r3,
            a0: -(r1 * r2 * r3),
        };
        let mut got: Vec<f64> = cubic_roots(&c).iter().map(|z| z.re).collect();
        got.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (g, w) in got.iter().zip(&want) {
            prop_assert!((g - w).abs() < 1e-6 * (1.0 + w.abs()), "{got:?} vs {want:?}");
        }
    }
}
