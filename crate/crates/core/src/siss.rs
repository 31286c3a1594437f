//! Concrete functions `f = Σ_γ c_γ φ(· − hγ)` with finitely many
//! coefficients, their L² norms, and Monte-Carlo verification of the
//! Bernstein inequality.
//!
//! Everything is computed in the frequency domain. Writing the symbol
//! `m_f(θ) = Σ_γ c_γ e^{−iγθ}`, the transform factors as
//! `f̂(ω) = m_f(hω) φ̂(ω)` and the norms become periodic integrals
//!
//! ```text
//! ‖f‖₂²       = (1/2π) ∫₀^{2π/h} |m_f(hω)|² G₀(ω) dω
//! ‖f^{(k)}‖₂² = (1/2π) ∫₀^{2π/h} |m_f(hω)|² G_k(ω) dω
//! ```
//!
//! so no time-domain sampling of φ is ever needed.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::constants::{bernstein_constant, SearchOpts};
use crate::error::{Error, Result};
use crate::fmath;
use crate::generators::Generator;
use crate::periodization::{bracket, LatticeSpec};
use crate::quadrature::periodic_integral_try;
use crate::sum::Accumulator;

/// Tail tolerance used for the periodization factor inside norm integrands.
const NORM_TAIL_TOL: f64 = 1e-12;
/// Relative tolerance of the norm quadratures.
const NORM_REL_TOL: f64 = 1e-10;
/// Relative pass slack of the inequality check.
const PASS_SLACK: f64 = 1e-9;

/// A finitely supported coefficient sequence on a shift lattice, tied to its
/// generator.
#[derive(Debug, Clone)]
pub struct FiniteSissFunction {
    gamma_min: i64,
    coeffs: Vec<Complex64>,
    lattice: LatticeSpec,
    generator: Generator,
}

/// Outcome of a randomized inequality check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerificationReport {
    pub trials: u32,
    /// The computed Bernstein constant (squared form).
    pub constant: f64,
    pub max_ratio: f64,
    /// Trial index attaining `max_ratio`; its function is reproducible as
    /// `FiniteSissFunction::random(seed + index, …)`.
    pub argmax_seed_index: u32,
    /// `constant − max_ratio`.
    pub margin: f64,
    pub pass: bool,
}

impl FiniteSissFunction {
    /// Wraps coefficients `c_γ` for `γ = gamma_min, …, gamma_min + len − 1`.
    pub fn new(
        gamma_min: i64,
        coeffs: Vec<Complex64>,
        lattice: LatticeSpec,
        generator: Generator,
    ) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidInput(
                "coefficient sequence must not be empty".into(),
            ));
        }
        if generator.dimension() != 1 {
            return Err(Error::InvalidInput(
                "functions are built over one-dimensional generators".into(),
            ));
        }
        if coeffs
            .iter()
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::InvalidInput("coefficients must be finite".into()));
        }
        Ok(Self {
            gamma_min,
            coeffs,
            lattice,
            generator,
        })
    }

    /// Deterministic random coefficients on `γ ∈ [−n, n]`: a ChaCha8 stream
    /// seeded with `seed`; real and imaginary parts are i.i.d. uniform on
    /// `[−√3, √3)`, which has zero mean and unit variance.
    pub fn random(seed: u64, n: u32, lattice: LatticeSpec, generator: &Generator) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut draw = move || {
            let u = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
            (2.0 * u - 1.0) * fmath::sqrt(3.0)
        };
        let width = 2 * n as usize + 1;
        let mut coeffs = Vec::with_capacity(width);
        for _ in 0..width {
            let re = draw();
            let im = draw();
            coeffs.push(Complex64::new(re, im));
        }
        Self::new(-(n as i64), coeffs, lattice, generator.clone())
    }

    pub fn gamma_min(&self) -> i64 {
        self.gamma_min
    }

    pub fn gamma_max(&self) -> i64 {
        self.gamma_min + self.coeffs.len() as i64 - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn lattice(&self) -> LatticeSpec {
        self.lattice
    }

    pub fn generator(&self) -> &Generator {
        &self.generator
    }

    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.re == 0.0 && c.im == 0.0)
    }

    /// The 2π-periodic symbol `m_f(θ) = Σ_γ c_γ e^{−iγθ}`.
    pub fn symbol_eval(&self, theta: f64) -> Complex64 {
        let mut sum = Complex64::new(0.0, 0.0);
        for (i, c) in self.coeffs.iter().enumerate() {
            let gamma = (self.gamma_min + i as i64) as f64;
            let phase = -gamma * theta;
            sum += c * Complex64::new(fmath::cos(phase), fmath::sin(phase));
        }
        sum
    }

    /// `‖f‖₂²`. Orthonormal generators on the integer lattice take the
    /// Parseval fast path `Σ_γ |c_γ|²`; everything else goes through the
    /// quadrature path.
    pub fn norm_sq(&self) -> Result<f64> {
        if self.generator.is_orthonormal() && self.lattice.step() == 1.0 {
            let mut acc = Accumulator::new();
            for c in &self.coeffs {
                acc.add(c.norm_sqr());
            }
            return Ok(acc.value());
        }
        self.norm_sq_quadrature()
    }

    /// `‖f‖₂²` via the frequency-domain quadrature, regardless of fast paths.
    pub fn norm_sq_quadrature(&self) -> Result<f64> {
        self.weighted_norm_sq(0)
    }

    /// `‖f^{(k)}‖₂²`; `k = 0` reduces to [`FiniteSissFunction::norm_sq`].
    pub fn derivative_norm_sq(&self, k: u32) -> Result<f64> {
        if k == 0 {
            return self.norm_sq();
        }
        self.weighted_norm_sq(k)
    }

    fn weighted_norm_sq(&self, k: u32) -> Result<f64> {
        let h = self.lattice.step();
        let period = self.lattice.frequency_period();
        let min_nodes = (16 * self.coeffs.len()).max(1024);
        let integrand = |w: f64| -> Result<f64> {
            let g = bracket(&self.generator, k, w, self.lattice, NORM_TAIL_TOL)?;
            let m = self.symbol_eval(h * w).norm_sqr();
            Ok(m * (g.value + 0.5 * g.tail_bound))
        };
        let q = periodic_integral_try(integrand, period, min_nodes, NORM_REL_TOL)?;
        Ok(q.value / TAU)
    }

    /// Rayleigh quotient `‖f^{(k)}‖₂² / ‖f‖₂²`.
    pub fn ratio(&self, k: u32) -> Result<f64> {
        if self.is_zero() {
            return Err(Error::InvalidInput(
                "the ratio is undefined for the zero function".into(),
            ));
        }
        Ok(self.derivative_norm_sq(k)? / self.norm_sq()?)
    }
}

/// Fourier coefficients `ĝ(τ) = (1/2π) ∫₀^{2π} e^{−iτθ} G_k(θ/h) dθ` of the
/// periodized weight, for `τ = 0, …, max_tau` (negative τ follow by
/// conjugation since `G_k` is real).
///
/// Computed once per (generator, k), these turn each trial's norm into a
/// finite autocorrelation sum, which is what makes thousand-trial
/// verification cheap.
fn gram_fourier(
    gen: &Generator,
    k: u32,
    lattice: LatticeSpec,
    max_tau: usize,
) -> Result<Vec<Complex64>> {
    let h = lattice.step();
    let mut nodes = (4 * (max_tau + 1)).max(1024);
    let mut prev: Option<Vec<Complex64>> = None;
    loop {
        let mut acc_re = alloc::vec![Accumulator::new(); max_tau + 1];
        let mut acc_im = alloc::vec![Accumulator::new(); max_tau + 1];
        let step = TAU / nodes as f64;
        for j in 0..nodes {
            let theta = (j as f64 + 0.5) * step;
            let g = bracket(gen, k, theta / h, lattice, NORM_TAIL_TOL)?;
            let weight = g.value + 0.5 * g.tail_bound;
            let base = Complex64::new(fmath::cos(theta), -fmath::sin(theta));
            let mut phase = Complex64::new(1.0, 0.0);
            for t in 0..=max_tau {
                acc_re[t].add(weight * phase.re);
                acc_im[t].add(weight * phase.im);
                phase *= base;
            }
        }
        let cur: Vec<Complex64> = acc_re
            .iter()
            .zip(&acc_im)
            .map(|(r, i)| Complex64::new(r.value() / nodes as f64, i.value() / nodes as f64))
            .collect();
        if let Some(p) = prev {
            let scale = fmath::sqrt(cur[0].norm_sqr()).max(1e-300);
            let diff = cur
                .iter()
                .zip(&p)
                .map(|(a, b)| fmath::sqrt((a - b).norm_sqr()))
                .fold(0.0f64, f64::max);
            if diff <= 1e-11 * scale {
                return Ok(cur);
            }
        }
        if nodes >= (1 << 22) {
            return Err(Error::Convergence(
                "Fourier coefficients of the periodized weight did not converge".into(),
            ));
        }
        prev = Some(cur);
        nodes *= 2;
    }
}

/// Autocorrelation `A_τ = Σ_γ c_{γ+τ} conj(c_γ)` for `τ = 0, …, len − 1`.
fn autocorrelation(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len();
    let mut out = Vec::with_capacity(n);
    for tau in 0..n {
        let mut sum = Complex64::new(0.0, 0.0);
        for g in 0..n - tau {
            sum += coeffs[g + tau] * coeffs[g].conj();
        }
        out.push(sum);
    }
    out
}

/// `Σ_τ A_τ ĝ(τ)` over all integer τ, using Hermitian symmetry of both factors.
fn pair(auto: &[Complex64], ghat: &[Complex64]) -> f64 {
    let mut acc = Accumulator::new();
    acc.add(auto[0].re * ghat[0].re);
    for tau in 1..auto.len() {
        let prod = auto[tau] * ghat[tau];
        acc.add(2.0 * prod.re);
    }
    acc.value()
}

/// Draws `trials` random functions of the given support, evaluates their
/// Rayleigh quotients, and checks them against the computed constant.
/// Trial `i` uses seed `seed + i`, so any reported worst case is reproducible
/// in isolation. Ties keep the lowest trial index.
pub fn verify_inequality(
    gen: &Generator,
    k: u32,
    lattice: LatticeSpec,
    trials: u32,
    support: u32,
    seed: u64,
) -> Result<VerificationReport> {
    let constant = bernstein_constant(gen, k, lattice, SearchOpts::default())?;
    let threshold = constant.value * (1.0 + PASS_SLACK) + constant.tail_bound;
    if trials == 0 {
        return Ok(VerificationReport {
            trials: 0,
            constant: constant.value,
            max_ratio: 0.0,
            argmax_seed_index: 0,
            margin: constant.value,
            pass: true,
        });
    }
    let max_tau = 2 * support as usize;
    let ghat_k = gram_fourier(gen, k, lattice, max_tau)?;
    let ghat_0 = gram_fourier(gen, 0, lattice, max_tau)?;
    let mut max_ratio = f64::NEG_INFINITY;
    let mut argmax_index = 0u32;
    for t in 0..trials {
        let f = FiniteSissFunction::random(seed.wrapping_add(t as u64), support, lattice, gen)?;
        let auto = autocorrelation(f.coeffs());
        let num = pair(&auto, &ghat_k);
        let den = pair(&auto, &ghat_0);
        if den <= 0.0 {
            return Err(Error::Convergence(format!(
                "norm of trial {t} evaluated non-positive ({den:.3e})"
            )));
        }
        let ratio = num / den;
        if ratio > max_ratio {
            max_ratio = ratio;
            argmax_index = t;
        }
    }
    Ok(VerificationReport {
        trials,
        constant: constant.value,
        max_ratio,
        argmax_seed_index: argmax_index,
        margin: constant.value - max_ratio,
        pass: max_ratio <= threshold,
    })
}
