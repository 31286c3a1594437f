//! Brute-force oracles shared by the integration tests. These never touch the
//! truncation, closed-form, or doubling machinery they are used to check:
//! plain partial sums, plain fixed-resolution quadrature.

use bernstein_core::Generator;

/// Direct partial sum of `Σ_{|l| <= l_max} |ω + Δl|^{2k} q(ω + Δl)` with a
/// caller-supplied evaluator.
pub fn brute_bracket_with(
    q: impl Fn(f64) -> f64,
    k: u32,
    omega: f64,
    delta: f64,
    l_max: i64,
) -> f64 {
    let mut sum = 0.0;
    for l in -l_max..=l_max {
        let u = omega + delta * l as f64;
        sum += u.powi(2 * k as i32) * q(u);
    }
    sum
}

/// Direct partial sum against a generator's evaluator.
pub fn brute_bracket(gen: &Generator, k: u32, omega: f64, delta: f64, l_max: i64) -> f64 {
    brute_bracket_with(|u| gen.phihat_sq(u), k, omega, delta, l_max)
}

/// `(sin(u/2)/(u/2))^(2m)` written out independently of the crate.
pub fn bspline_q(m: u32, u: f64) -> f64 {
    let x = u / 2.0;
    let s = if x.abs() < 1e-8 { 1.0 } else { x.sin() / x };
    s.powi(2 * m as i32)
}

/// Fixed-resolution midpoint mean over `[0, 2π)`; no adaptivity.
pub fn slow_mean(f: impl Fn(f64) -> f64, nodes: usize) -> f64 {
    let h = std::f64::consts::TAU / nodes as f64;
    let mut sum = 0.0;
    for j in 0..nodes {
        sum += f((j as f64 + 0.5) * h);
    }
    sum / nodes as f64
}
