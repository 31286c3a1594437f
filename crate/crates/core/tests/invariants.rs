//! Property tests for the structural invariants of the toolkit.

mod common;

use std::f64::consts::{PI, TAU};

use bernstein_core::{
    bernstein_constant, bracket, dilate, make_generator, orthonormalize, tensorize,
    FiniteSissFunction, Generator, GeneratorSpec, LatticeSpec, SearchOpts,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn shannon() -> Generator {
    make_generator(&GeneratorSpec::Shannon).unwrap()
}

fn bspline(order: u32) -> Generator {
    make_generator(&GeneratorSpec::Bspline { order }).unwrap()
}

fn gaussian(sigma: f64) -> Generator {
    make_generator(&GeneratorSpec::Gaussian { sigma }).unwrap()
}

fn on_bspline2() -> Generator {
    orthonormalize(&bspline(2)).unwrap()
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn dilation_composes(a in 0.3f64..3.0, b in 0.3f64..3.0, w in -20.0f64..20.0) {
        for gen in [bspline(3), gaussian(1.0)] {
            let once = dilate(&dilate(&gen, a).unwrap(), b).unwrap();
            let direct = dilate(&gen, a * b).unwrap();
            let lhs = once.phihat_sq(w);
            let rhs = direct.phihat_sq(w);
            // Absolute floor: deep in the Gaussian tail the exponential
            // amplifies the rounding of a·b·ω beyond any relative target.
            prop_assert!(
                rel_close(lhs, rhs, 1e-12) || (lhs - rhs).abs() < 1e-13,
                "{lhs} vs {rhs}"
            );
        }
    }

    #[test]
    fn tensor_is_pointwise_product(w1 in -15.0f64..15.0, w2 in -15.0f64..15.0) {
        let axes = [shannon(), bspline(2)];
        let tensor = tensorize(axes.to_vec()).unwrap();
        let product = axes[0].phihat_sq(w1) * axes[1].phihat_sq(w2);
        prop_assert!(rel_close(tensor.phihat_sq_nd(&[w1, w2]), product, 1e-13));
    }

    #[test]
    fn periodization_is_periodic(w in 0.0f64..20.0, step in 0.4f64..2.5) {
        let lat = LatticeSpec::new(step).unwrap();
        let delta = lat.frequency_period();
        // Exact route (unit lattice) at full precision.
        let a = bracket(&bspline(2), 1, w, LatticeSpec::unit(), 1e-12).unwrap().value;
        let b = bracket(&bspline(2), 1, w + TAU, LatticeSpec::unit(), 1e-12).unwrap().value;
        prop_assert!(rel_close(a, b, 1e-12), "{a} vs {b}");
        // Super-exponential generic route on arbitrary lattices.
        let a = bracket(&gaussian(0.8), 1, w, lat, 1e-12).unwrap().value;
        let b = bracket(&gaussian(0.8), 1, w + delta, lat, 1e-12).unwrap().value;
        prop_assert!(rel_close(a, b, 1e-11) || (a - b).abs() < 1e-13, "{a} vs {b}");
        // Polynomial-envelope generic route: the certified tail only reaches
        // coarser absolute targets, so compare at that level.
        let a = bracket(&bspline(2), 1, w, lat, 1e-6).unwrap();
        let b = bracket(&bspline(2), 1, w + delta, lat, 1e-6).unwrap();
        prop_assert!(
            (a.value - b.value).abs() <= 1e-9 * a.value.abs().max(1.0),
            "{} vs {}",
            a.value,
            b.value
        );
    }

    #[test]
    fn periodization_is_symmetric(w in 0.0f64..6.28, k in 0u32..3) {
        for gen in [shannon(), bspline(4), gaussian(1.3)] {
            let lat = LatticeSpec::unit();
            let a = bracket(&gen, k, w, lat, 1e-11).unwrap();
            let b = bracket(&gen, k, TAU - w, lat, 1e-11).unwrap();
            let tol = 1e-12 * a.value.abs().max(b.value.abs())
                + a.tail_bound
                + b.tail_bound
                + 1e-300;
            prop_assert!((a.value - b.value).abs() <= tol, "{} vs {}", a.value, b.value);
        }
    }

    #[test]
    fn tighter_tolerance_stays_inside_bracket(w in 0.0f64..6.28, k in 0u32..3) {
        for gen in [gaussian(0.7), orthonormalize(&gaussian(1.0)).unwrap()] {
            let coarse = bracket(&gen, k, w, LatticeSpec::unit(), 1e-7).unwrap();
            let fine = bracket(&gen, k, w, LatticeSpec::unit(), 1e-9).unwrap();
            prop_assert!(fine.value + 1e-14 >= coarse.value);
            prop_assert!(fine.value <= coarse.value + coarse.tail_bound + 1e-14);
        }
    }

    #[test]
    fn norms_are_shift_invariant(shift in -7i64..7, seed in 0u64..500) {
        let gen = on_bspline2();
        let f = FiniteSissFunction::random(seed, 3, LatticeSpec::unit(), &gen).unwrap();
        let shifted = FiniteSissFunction::new(
            f.gamma_min() + shift,
            f.coeffs().to_vec(),
            LatticeSpec::unit(),
            gen,
        )
        .unwrap();
        let (n0, n1) = (f.norm_sq().unwrap(), shifted.norm_sq().unwrap());
        prop_assert!(rel_close(n0, n1, 1e-12));
        let (d0, d1) = (
            f.derivative_norm_sq(1).unwrap(),
            shifted.derivative_norm_sq(1).unwrap(),
        );
        prop_assert!(rel_close(d0, d1, 1e-12));
    }

    #[test]
    fn ratio_is_scale_invariant(re in -3.0f64..3.0, im in -3.0f64..3.0, seed in 0u64..500) {
        prop_assume!(re * re + im * im > 1e-4);
        let gen = shannon();
        let f = FiniteSissFunction::random(seed, 3, LatticeSpec::unit(), &gen).unwrap();
        let alpha = Complex64::new(re, im);
        let scaled = FiniteSissFunction::new(
            f.gamma_min(),
            f.coeffs().iter().map(|c| c * alpha).collect(),
            LatticeSpec::unit(),
            gen,
        )
        .unwrap();
        let (r0, r1) = (f.ratio(1).unwrap(), scaled.ratio(1).unwrap());
        prop_assert!(rel_close(r0, r1, 1e-12), "{r0} vs {r1}");
    }

    #[test]
    fn parseval_fast_path_matches_quadrature(seed in 0u64..1000) {
        let gen = shannon();
        let f = FiniteSissFunction::random(seed, 5, LatticeSpec::unit(), &gen).unwrap();
        let direct: f64 = f.coeffs().iter().map(|c| c.norm_sqr()).sum();
        let quad = f.norm_sq_quadrature().unwrap();
        prop_assert!(rel_close(direct, quad, 1e-10), "{direct} vs {quad}");
    }
}

/// Deterministic low-discrepancy probe of the sample-domination invariant:
/// the computed constant dominates the Rayleigh weight everywhere.
#[test]
fn constant_dominates_sampled_ratios() {
    let cases: [(Generator, u32, usize); 3] = [
        (shannon(), 2, 100_000),
        (on_bspline2(), 1, 2_000),
        (orthonormalize(&gaussian(1.0)).unwrap(), 1, 500),
    ];
    for (gen, k, samples) in cases {
        let lat = LatticeSpec::unit();
        let b = bernstein_constant(&gen, k, lat, SearchOpts::default()).unwrap();
        let golden = 0.618_033_988_749_894_9f64;
        for j in 0..samples {
            let w = TAU * ((j as f64 * golden) % 1.0);
            let num = bracket(&gen, k, w, lat, 1e-12).unwrap();
            let den = bracket(&gen, 0, w, lat, 1e-12).unwrap();
            if den.value <= den.tail_bound {
                continue;
            }
            let ratio = num.value / den.value;
            assert!(
                b.value + 1e-9 >= ratio - num.tail_bound / den.value,
                "constant {} undercuts sampled ratio {ratio} at omega = {w}",
                b.value
            );
        }
    }
}

/// The constant of the dilated Shannon space stays the classical bandlimited
/// one under Monte-Carlo probing (arbitrates the scaled-lattice convention).
#[test]
fn scaled_shannon_ratio_never_exceeds_quarter_band() {
    let dilated = dilate(&shannon(), 2.0).unwrap();
    let bound = PI * PI / 4.0;
    for seed in 0..40u64 {
        let f = FiniteSissFunction::random(seed, 6, LatticeSpec::unit(), &dilated).unwrap();
        let r = f.ratio(1).unwrap();
        assert!(
            r <= bound * (1.0 + 1e-9),
            "seed {seed}: ratio {r} exceeds {bound}"
        );
    }
}
