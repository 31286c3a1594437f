//! Frozen expected values cross-checked against brute-force oracles.

mod common;

use std::f64::consts::{PI, TAU};

use bernstein_core::{
    bernstein_constant, extremal_ratio, make_generator, orthonormalize, verify_inequality,
    FiniteSissFunction, GeneratorSpec, LatticeSpec, SearchOpts,
};
use common::{brute_bracket, brute_bracket_with, bspline_q, slow_mean};
use num_complex::Complex64;

fn on_bspline(order: u32) -> bernstein_core::Generator {
    orthonormalize(&make_generator(&GeneratorSpec::Bspline { order }).unwrap()).unwrap()
}

#[test]
fn bspline2_weighted_periodization_vs_partial_sums() {
    // Closed route says G₁(π) = 4 exactly; a raw partial sum with a million
    // terms reproduces it to its own 1/L accuracy.
    let g = make_generator(&GeneratorSpec::Bspline { order: 2 }).unwrap();
    let v = bernstein_core::bracket(&g, 1, PI, LatticeSpec::unit(), 1e-12).unwrap();
    assert!((v.value - 4.0).abs() < 1e-12);

    let brute = brute_bracket_with(|u| bspline_q(2, u), 1, PI, TAU, 1_000_000);
    assert!((brute - 4.0).abs() < 1e-5, "brute sum {brute}");
    assert!((brute - v.value).abs() < 1e-5);
}

#[test]
fn orthonormalized_bspline2_gram_series() {
    // Raw series of sinc⁴ terms divided by 1 − (2/3)sin²(ω/2) sums to 1.
    for w in [0.4, 1.1, PI, 4.9] {
        let s2 = (w / 2.0).sin().powi(2);
        let brute = brute_bracket_with(|u| bspline_q(2, u), 0, w, TAU, 20_000)
            / (1.0 - (2.0 / 3.0) * s2);
        assert!((brute - 1.0).abs() < 1e-12, "omega {w}: {brute}");

        let v = bernstein_core::bracket(&on_bspline(2), 0, w, LatticeSpec::unit(), 1e-12)
            .unwrap();
        assert!((v.value - 1.0).abs() < 1e-12);
    }
}

#[test]
fn cubic_spline_ratio_at_pi_series_identities() {
    // Σ 1/(2l+1)⁶ and Σ 1/(2l+1)⁸ give G₁(π)/G₀(π) = (8/15)/(17/315) = 168/17.
    let num = brute_bracket_with(|u| bspline_q(4, u), 1, PI, TAU, 100_000);
    let den = brute_bracket_with(|u| bspline_q(4, u), 0, PI, TAU, 100_000);
    let expected = 168.0 / 17.0;
    assert!((num / den - expected).abs() < 1e-9, "brute ratio {}", num / den);
    assert!((num - 8.0 / 15.0).abs() < 1e-10);
    assert!((den - 17.0 / 315.0).abs() < 1e-12);

    let b = bernstein_constant(&on_bspline(4), 1, LatticeSpec::unit(), SearchOpts::default())
        .unwrap();
    assert!((b.value - expected).abs() < 1e-9);
}

#[test]
fn shannon_gram_partition_vs_series() {
    let g = make_generator(&GeneratorSpec::Shannon).unwrap();
    for w in [0.0, 0.9, PI, 5.1] {
        assert_eq!(brute_bracket(&g, 0, w, TAU, 4), 1.0);
    }
}

#[test]
fn difference_pair_norm_vs_slow_quadrature() {
    // Independent route: the closed-form weight 4 sin²(ω/2)/(1 − (2/3)sin²(ω/2))
    // integrated against |1 − e^{−iω}|² = 2 − 2 cos ω at a fixed resolution.
    let oracle = slow_mean(
        |w| {
            let s2 = (w / 2.0).sin().powi(2);
            (2.0 - 2.0 * w.cos()) * 4.0 * s2 / (1.0 - (2.0 / 3.0) * s2)
        },
        1 << 20,
    );
    let expected = 36.0 * 3f64.sqrt() - 48.0;
    assert!((oracle - expected).abs() < 1e-10, "oracle {oracle}");

    let f = FiniteSissFunction::new(
        0,
        vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)],
        LatticeSpec::unit(),
        on_bspline(2),
    )
    .unwrap();
    let v = f.derivative_norm_sq(1).unwrap();
    assert!((v - expected).abs() < 1e-8, "impl {v}");
}

#[test]
fn shannon_extremal_ratio_regression() {
    // Convergence toward π²; the value at order 1024 is frozen as a
    // regression number.
    let g = make_generator(&GeneratorSpec::Shannon).unwrap();
    let r = extremal_ratio(&g, 1, LatticeSpec::unit(), 1024, PI).unwrap();
    let b = PI * PI;
    assert!(r <= b * (1.0 + 1e-9));
    assert!((b - r) / b < 0.05, "gap {}", (b - r) / b);
    let frozen = REGRESSION_SHANNON_EXTREMAL_1024;
    assert!(
        ((r - frozen) / frozen).abs() < 1e-7,
        "regression drift: {r} vs {frozen}"
    );
}

#[test]
fn verify_max_ratio_regressions() {
    let sh = make_generator(&GeneratorSpec::Shannon).unwrap();
    let rep = verify_inequality(&sh, 1, LatticeSpec::unit(), 1000, 8, 42).unwrap();
    assert!(rep.pass);
    assert!(
        ((rep.max_ratio - REGRESSION_SHANNON_VERIFY_MAX) / REGRESSION_SHANNON_VERIFY_MAX).abs()
            < 1e-7,
        "max_ratio {} drifted",
        rep.max_ratio
    );

    let rep2 = verify_inequality(&on_bspline(2), 1, LatticeSpec::unit(), 1000, 8, 42).unwrap();
    assert!(rep2.pass);
    assert!(rep2.max_ratio <= 12.0 * (1.0 + 1e-9));
    assert!(
        ((rep2.max_ratio - REGRESSION_ONSPLINE2_VERIFY_MAX) / REGRESSION_ONSPLINE2_VERIFY_MAX)
            .abs()
            < 1e-7,
        "max_ratio {} drifted",
        rep2.max_ratio
    );
}

// Frozen after the first run of `print_regression_values`.
const REGRESSION_SHANNON_EXTREMAL_1024: f64 = 9.83639595744093675;
const REGRESSION_SHANNON_VERIFY_MAX: f64 = 5.74754704404978867;
const REGRESSION_ONSPLINE2_VERIFY_MAX: f64 = 7.87951307441773441;

#[test]
#[ignore = "prints the values frozen in the regression constants"]
fn print_regression_values() {
    let g = make_generator(&GeneratorSpec::Shannon).unwrap();
    let r = extremal_ratio(&g, 1, LatticeSpec::unit(), 1024, PI).unwrap();
    println!("shannon extremal n=1024: {r:.17e}");
    let rep = verify_inequality(&g, 1, LatticeSpec::unit(), 1000, 8, 42).unwrap();
    println!("shannon verify max_ratio: {:.17e}", rep.max_ratio);
    let rep2 = verify_inequality(&on_bspline(2), 1, LatticeSpec::unit(), 1000, 8, 42).unwrap();
    println!("onspline2 verify max_ratio: {:.17e}", rep2.max_ratio);
}

/// Independent grid search for the linear-spline constant: raw truncated
/// series on a dense grid locates the argmax, then a deep partial sum at the
/// located point confirms the value 12. Expensive; run explicitly with
/// `cargo test -- --ignored`.
#[test]
#[ignore = "long-running independent oracle"]
fn linear_spline_grid_search_oracle() {
    let ratio_brute = |w: f64, l: i64| -> f64 {
        let num = brute_bracket_with(|u| bspline_q(2, u), 1, w, TAU, l);
        let den = brute_bracket_with(|u| bspline_q(2, u), 0, w, TAU, l);
        num / den
    };
    let grid = 1 << 16;
    let mut best = (0.0f64, f64::NEG_INFINITY);
    for j in 0..grid {
        let w = TAU * j as f64 / grid as f64;
        let r = ratio_brute(w, 10_000);
        if r > best.1 {
            best = (w, r);
        }
    }
    assert!(
        (best.0 - PI).abs() < 1e-3,
        "argmax {} away from pi",
        best.0
    );
    let deep = ratio_brute(PI, 10_000_000);
    assert!((deep - 12.0).abs() < 2e-6, "deep ratio {deep}");
}
