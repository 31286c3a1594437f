//! Weighted periodizations `G_k(ω) = Σ_ℓ |ω + 2πℓ/h|^{2k} |φ̂(ω + 2πℓ/h)|²`
//! with certified truncation tails.
//!
//! `G₀` is the Gram function of the lattice translates; `G_k/G₀` is the
//! Rayleigh weight whose essential supremum is the sharp Bernstein constant.
//! Truncation is controlled by a tail bound derived from the generator's
//! envelope by integral comparison, so every reported value brackets the true
//! sum: it lies in `[value, value + tail_bound]`.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::fmath;
use crate::generators::{EnvelopeMode, Generator, SpectralEnvelope};
use crate::sum::Accumulator;

/// Half-width cap for truncated lattice sums.
const TERM_CAP: i64 = 10_000_000;
/// Largest accepted derivative order (guards the `powi` exponents).
const MAX_ORDER: u32 = 1_000_000;

/// Shift lattice `{hγ : γ ∈ Z}`; the frequency period is `2π/h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeSpec {
    step: f64,
}

impl LatticeSpec {
    pub fn new(step: f64) -> Result<Self> {
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::InvalidInput(format!(
                "lattice step must be positive and finite, got {step}"
            )));
        }
        Ok(Self { step })
    }

    /// The integer lattice (h = 1).
    pub fn unit() -> Self {
        Self { step: 1.0 }
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    /// Period of the frequency-domain lattice, `2π/h`.
    pub fn frequency_period(&self) -> f64 {
        TAU / self.step
    }
}

/// A truncated periodization value together with the certified bound on the
/// omitted tail: the true sum lies in `[value, value + tail_bound]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodizationValue {
    pub value: f64,
    pub tail_bound: f64,
    /// Truncation half-width L (0 when a closed form was used).
    pub terms_used: u32,
}

/// Result of probing `|G₀ − 1|` on a grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrthonormalityReport {
    pub max_deviation: f64,
    pub pass: bool,
}

/// Evaluates `G_k(ω)` over the lattice with frequency step `Δ = 2π/h`.
///
/// The truncation half-width is the smallest one whose envelope-derived tail
/// bound is below `tail_tol` (interpreted relative to `max(1, value)` when
/// the absolute target is out of reach); generators with a closed-form
/// periodization short-circuit with a zero tail.
pub fn bracket(
    gen: &Generator,
    k: u32,
    omega: f64,
    lattice: LatticeSpec,
    tail_tol: f64,
) -> Result<PeriodizationValue> {
    if gen.dimension() != 1 {
        return Err(Error::InvalidInput(
            "bracket expects a one-dimensional generator; use bracket_nd".into(),
        ));
    }
    if !(tail_tol.is_finite() && tail_tol > 0.0) {
        return Err(Error::InvalidInput(format!(
            "tail tolerance must be positive and finite, got {tail_tol}"
        )));
    }
    if k > MAX_ORDER {
        return Err(Error::InvalidInput(format!(
            "derivative order {k} exceeds the supported maximum {MAX_ORDER}"
        )));
    }
    if !omega.is_finite() {
        return Err(Error::InvalidInput("omega must be finite".into()));
    }
    let delta = lattice.frequency_period();
    let w = fmath::rem_euclid(omega, delta);
    let env = gen.envelope(0);
    check_finiteness(env, k)?;

    if let Some(v) = gen.exact_bracket(k, w, delta) {
        return Ok(PeriodizationValue {
            value: if v > 0.0 { v } else { 0.0 },
            tail_bound: 0.0,
            terms_used: 0,
        });
    }

    let term = |l: i64| -> Result<f64> {
        let u = w + delta * l as f64;
        Ok(fmath::powi(u, 2 * k as i32) * gen.try_phihat_sq(u)?)
    };

    if let Some(r) = env.support_radius {
        // Everything beyond the support radius is exactly zero.
        let l = fmath::ceil((r + w) / delta) as i64;
        let mut acc = Accumulator::new();
        for i in -l..=l {
            acc.add(term(i)?);
        }
        return Ok(PeriodizationValue {
            value: acc.value(),
            tail_bound: 0.0,
            terms_used: l as u32,
        });
    }

    let l_start = monotone_start(env, k, delta, w).max(1);

    // First try the absolute target: binary search for the minimal half-width.
    if tail_after(env, k, delta, w, TERM_CAP) <= tail_tol {
        let mut lo = l_start;
        let mut hi = TERM_CAP;
        if tail_after(env, k, delta, w, lo) <= tail_tol {
            hi = lo;
        }
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if tail_after(env, k, delta, w, mid) <= tail_tol {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        let l = hi;
        let mut acc = Accumulator::new();
        for i in -l..=l {
            acc.add(term(i)?);
        }
        return Ok(PeriodizationValue {
            value: acc.value(),
            tail_bound: tail_after(env, k, delta, w, l),
            terms_used: l as u32,
        });
    }

    // Absolute target unreachable under the cap: grow the sum and accept a
    // tail below tail_tol · max(1, value).
    let mut l = l_start;
    let mut acc = Accumulator::new();
    for i in -l..=l {
        acc.add(term(i)?);
    }
    loop {
        let tail = tail_after(env, k, delta, w, l);
        let value = acc.value();
        if tail <= tail_tol * if value > 1.0 { value } else { 1.0 } {
            return Ok(PeriodizationValue {
                value,
                tail_bound: tail,
                terms_used: l as u32,
            });
        }
        if l >= TERM_CAP {
            return Err(Error::Convergence(format!(
                "periodization tail bound {tail:.3e} still above tolerance {tail_tol:.3e} at the half-width cap {TERM_CAP}"
            )));
        }
        let next = (2 * l).min(TERM_CAP);
        for i in (l + 1)..=next {
            acc.add(term(i)?);
            acc.add(term(-i)?);
        }
        l = next;
    }
}

/// Rejects weights whose lattice sum provably diverges under the declared
/// envelope: a polynomial envelope needs `2p − 2k > 1` unless the transform
/// is compactly supported.
fn check_finiteness(env: &SpectralEnvelope, k: u32) -> Result<()> {
    if env.support_radius.is_some() {
        return Ok(());
    }
    match env.mode {
        EnvelopeMode::Polynomial => {
            let margin = 2.0 * env.exponent - 2.0 * k as f64;
            if margin <= 1.0 {
                Err(Error::DivergentSeries(format!(
                    "finiteness requires 2p - 2k > 1 for a polynomial envelope, but p = {} and k = {k} give 2p - 2k = {margin}",
                    env.exponent
                )))
            } else {
                Ok(())
            }
        }
        EnvelopeMode::SuperExponential => Ok(()),
    }
}

/// Half-width from which the super-exponential tail majorant is decreasing.
fn monotone_start(env: &SpectralEnvelope, k: u32, delta: f64, w: f64) -> i64 {
    match env.mode {
        EnvelopeMode::Polynomial => 1,
        EnvelopeMode::SuperExponential => {
            let a_min = k as f64 / env.exponent;
            fmath::ceil((a_min + w) / delta) as i64
        }
    }
}

/// Certified bound on `Σ_{|ℓ| > L} |ω+Δℓ|^{2k} |φ̂(ω+Δℓ)|²` for reduced
/// `ω ∈ [0, Δ)`, by comparing each one-sided lattice sum with an integral of
/// a decreasing majorant of the envelope.
fn tail_after(env: &SpectralEnvelope, k: u32, delta: f64, w: f64, l: i64) -> f64 {
    let a_plus = w + delta * (l + 1) as f64;
    let a_minus = delta * (l + 1) as f64 - w;
    tail_side(env, k, delta, a_plus) + tail_side(env, k, delta, a_minus)
}

fn tail_side(env: &SpectralEnvelope, k: u32, delta: f64, a: f64) -> f64 {
    let c2 = env.amplitude * env.amplitude;
    match env.mode {
        EnvelopeMode::Polynomial => {
            // u^{2k} (1+u)^{-2p} ≤ (1+u)^{2k-2p}, decreasing since 2p-2k > 1.
            let e = 2.0 * k as f64 - 2.0 * env.exponent;
            let point = c2 * fmath::powf(1.0 + a, e);
            let integral = c2 * fmath::powf(1.0 + a, e + 1.0) / (-e - 1.0);
            point + integral / delta
        }
        EnvelopeMode::SuperExponential => {
            // w(u) = C² u^{2k} e^{-2pu}, decreasing for u ≥ k/p (guaranteed by
            // monotone_start); ∫_A^∞ u^n e^{-βu} du has a finite closed form.
            let beta = 2.0 * env.exponent;
            let n = 2 * k;
            let point = c2 * fmath::powi(a, n as i32) * fmath::exp(-beta * a);
            let mut series = 0.0;
            let mut coef = 1.0 / beta; // j = n term before the A^n factor
            series += coef * fmath::powi(a, n as i32);
            let mut j = n;
            let mut power = fmath::powi(a, n as i32);
            while j > 0 {
                coef *= j as f64 / beta;
                power /= a;
                series += coef * power;
                j -= 1;
            }
            let integral = c2 * fmath::exp(-beta * a) * series;
            point + integral / delta
        }
    }
}

/// Multi-index periodization for tensor generators: the lattice sum
/// factorizes into a product of per-axis sums, and the tail brackets multiply.
pub fn bracket_nd(
    gen: &Generator,
    k: &[u32],
    omega: &[f64],
    tail_tol: f64,
) -> Result<PeriodizationValue> {
    let d = gen.dimension();
    if k.len() != d || omega.len() != d {
        return Err(Error::InvalidInput(format!(
            "expected {d} derivative orders and frequencies, got {} and {}",
            k.len(),
            omega.len()
        )));
    }
    if d == 1 {
        return bracket(gen, k[0], omega[0], LatticeSpec::unit(), tail_tol);
    }
    let axes = gen.axes().ok_or_else(|| {
        Error::UnsupportedGenerator(
            "multidimensional periodization requires a tensor generator".into(),
        )
    })?;
    let mut parts = Vec::with_capacity(d);
    for ((axis, &ks), &ws) in axes.iter().zip(k).zip(omega) {
        parts.push(bracket(axis, ks, ws, LatticeSpec::unit(), tail_tol)?);
    }
    let value: f64 = parts.iter().map(|p| p.value).product();
    let upper: f64 = parts.iter().map(|p| p.value + p.tail_bound).product();
    let tail = (upper - value).max(0.0);
    let terms = parts.iter().map(|p| p.terms_used).max().unwrap_or(0);
    Ok(PeriodizationValue {
        value,
        tail_bound: tail,
        terms_used: terms,
    })
}

/// Probes `|G₀ − 1|` on a uniform grid over one period of the integer
/// lattice. Tensor generators are checked per axis and the deviations are
/// combined conservatively.
pub fn check_orthonormal(
    gen: &Generator,
    grid_size: usize,
    tol: f64,
) -> Result<OrthonormalityReport> {
    if grid_size < 2 {
        return Err(Error::InvalidInput(format!(
            "orthonormality grid must have at least 2 points, got {grid_size}"
        )));
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidInput(format!(
            "tolerance must be positive and finite, got {tol}"
        )));
    }
    let tail_tol = (tol / 100.0).min(1e-12);
    let max_deviation = if let Some(axes) = gen.axes() {
        let mut bound = 1.0;
        for axis in axes {
            let dev = axis_deviation(axis, grid_size, tail_tol)?;
            bound *= 1.0 + dev;
        }
        bound - 1.0
    } else {
        axis_deviation(gen, grid_size, tail_tol)?
    };
    Ok(OrthonormalityReport {
        max_deviation,
        pass: max_deviation <= tol,
    })
}

fn axis_deviation(gen: &Generator, grid_size: usize, tail_tol: f64) -> Result<f64> {
    let mut max_dev = 0.0f64;
    for i in 0..grid_size {
        let w = TAU * i as f64 / grid_size as f64;
        let g0 = bracket(gen, 0, w, LatticeSpec::unit(), tail_tol)?;
        let dev = fmath::abs(g0.value - 1.0).max(fmath::abs(g0.value + g0.tail_bound - 1.0));
        if dev > max_dev {
            max_dev = dev;
        }
    }
    Ok(max_dev)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{make_generator, orthonormalize, tensorize, GeneratorSpec};
    use core::f64::consts::PI;

    fn gen(spec: GeneratorSpec) -> Generator {
        make_generator(&spec).unwrap()
    }

    #[test]
    fn shannon_single_band_term() {
        let g = gen(GeneratorSpec::Shannon);
        let v = bracket(&g, 1, PI / 2.0, LatticeSpec::unit(), 1e-12).unwrap();
        assert_eq!(v.tail_bound, 0.0);
        assert!((v.value - (PI / 2.0) * (PI / 2.0)).abs() < 1e-14);
    }

    #[test]
    fn orthonormalized_bspline_gram_is_one() {
        let on = orthonormalize(&gen(GeneratorSpec::Bspline { order: 2 })).unwrap();
        for w in [0.0, 0.3, 1.0, PI, 5.5] {
            let v = bracket(&on, 0, w, LatticeSpec::unit(), 1e-12).unwrap();
            assert!((v.value - 1.0).abs() < 1e-12, "G0 at {w}: {}", v.value);
        }
    }

    #[test]
    fn bspline_weighted_sum_collapses() {
        // Σ_ℓ 1/(ω/2 + πℓ)² = 1/sin²(ω/2) turns G₁ for order 2 into 4 sin²(ω/2).
        let g = gen(GeneratorSpec::Bspline { order: 2 });
        let v = bracket(&g, 1, PI, LatticeSpec::unit(), 1e-12).unwrap();
        assert_eq!(v.tail_bound, 0.0);
        assert!((v.value - 4.0).abs() < 1e-12, "got {}", v.value);
    }

    #[test]
    fn haar_first_derivative_diverges() {
        let g = gen(GeneratorSpec::Bspline { order: 1 });
        match bracket(&g, 1, 0.7, LatticeSpec::unit(), 1e-12) {
            Err(Error::DivergentSeries(msg)) => {
                assert!(msg.contains("2p - 2k"), "message: {msg}");
            }
            other => panic!("expected divergence, got {other:?}"),
        }
    }

    #[test]
    fn gaussian_gram_periodization() {
        let g = gen(GeneratorSpec::Gaussian { sigma: 1.0 });
        let v = bracket(&g, 0, 0.0, LatticeSpec::unit(), 1e-12).unwrap();
        let expected = TAU * (1.0 + 2.0 * (-4.0 * PI * PI).exp());
        assert!((v.value - expected).abs() < 1e-10);
        assert!(v.tail_bound <= 1e-12);
        assert!(v.terms_used >= 1);
    }

    #[test]
    fn bracketing_invariant_on_gaussian() {
        let g = gen(GeneratorSpec::Gaussian { sigma: 0.6 });
        for k in 0..3u32 {
            for &w in &[0.0, 0.9, 2.2, 5.9] {
                let coarse = bracket(&g, k, w, LatticeSpec::unit(), 1e-8).unwrap();
                let fine = bracket(&g, k, w, LatticeSpec::unit(), 1e-10).unwrap();
                assert!(fine.value + 1e-15 >= coarse.value);
                assert!(fine.value <= coarse.value + coarse.tail_bound + 1e-15);
            }
        }
    }

    #[test]
    fn periodicity_and_symmetry() {
        let g = gen(GeneratorSpec::Bspline { order: 3 });
        let lat = LatticeSpec::unit();
        for &w in &[0.1, 1.3, 2.9] {
            let a = bracket(&g, 1, w, lat, 1e-12).unwrap().value;
            let b = bracket(&g, 1, w + TAU, lat, 1e-12).unwrap().value;
            let c = bracket(&g, 1, TAU - w, lat, 1e-12).unwrap().value;
            assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
            assert!((a - c).abs() <= 1e-12 * a.abs().max(1.0));
        }
    }

    #[test]
    fn nd_products() {
        let sh = gen(GeneratorSpec::Shannon);
        let two = tensorize(vec![sh.clone(), sh.clone()]).unwrap();
        let v = bracket_nd(&two, &[1, 1], &[PI / 2.0, PI / 2.0], 1e-12).unwrap();
        let quarter_pi_sq = (PI / 2.0) * (PI / 2.0);
        assert!((v.value - quarter_pi_sq * quarter_pi_sq).abs() < 1e-12);

        let any = bracket_nd(&two, &[0, 0], &[1.0, 2.0], 1e-12).unwrap();
        assert!((any.value - 1.0).abs() < 1e-14);

        let on2 = orthonormalize(&gen(GeneratorSpec::Bspline { order: 2 })).unwrap();
        let mixed = tensorize(vec![sh, on2]).unwrap();
        let v = bracket_nd(&mixed, &[1, 1], &[PI, PI], 1e-12).unwrap();
        assert!((v.value - PI * PI * 12.0).abs() < 1e-9, "got {}", v.value);
    }

    #[test]
    fn nd_shape_validation() {
        let sh = gen(GeneratorSpec::Shannon);
        let two = tensorize(vec![sh.clone(), sh]).unwrap();
        assert!(bracket_nd(&two, &[1], &[0.0, 0.0], 1e-12).is_err());
        assert!(bracket(&two, 1, 0.0, LatticeSpec::unit(), 1e-12).is_err());
    }

    #[test]
    fn orthonormality_reports() {
        let sh = gen(GeneratorSpec::Shannon);
        let rep = check_orthonormal(&sh, 1024, 1e-10).unwrap();
        assert!(rep.pass);
        assert_eq!(rep.max_deviation, 0.0);

        let b2 = gen(GeneratorSpec::Bspline { order: 2 });
        let rep = check_orthonormal(&b2, 1024, 1e-10).unwrap();
        assert!(!rep.pass);
        assert!((rep.max_deviation - 2.0 / 3.0).abs() < 1e-12);

        let on_gauss = orthonormalize(&gen(GeneratorSpec::Gaussian { sigma: 1.0 })).unwrap();
        let rep = check_orthonormal(&on_gauss, 1024, 1e-8).unwrap();
        assert!(rep.pass, "deviation {}", rep.max_deviation);

        assert!(check_orthonormal(&sh, 1, 1e-8).is_err());
    }

    #[test]
    fn lattice_validation() {
        assert!(LatticeSpec::new(0.0).is_err());
        assert!(LatticeSpec::new(-1.0).is_err());
        assert!(LatticeSpec::new(f64::NAN).is_err());
        assert_eq!(LatticeSpec::new(2.0).unwrap().frequency_period(), PI);
    }
}
