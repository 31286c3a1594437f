//! Generator functions for shift-invariant spaces.
//!
//! A generator φ enters every computation through the squared magnitude of
//! its Fourier transform, `|φ̂(ω)|²`, together with a declared decay envelope
//! that certifies truncation of all lattice sums. The Fourier convention is
//! fixed crate-wide as `φ̂(ω) = ∫ φ(x) e^{−iωx} dx` with
//! `‖f‖₂² = (1/2π) ‖f̂‖₂²`; under it the integer shifts of φ are orthonormal
//! exactly when the Gram function `G₀(ω) = Σ_ℓ |φ̂(ω+2πℓ)|²` is identically 1.
//!
//! Built-in generators:
//!
//! * `shannon` — `|φ̂|² = 1` on the band `(−π, π]`, `0` outside. The band is
//!   half-open so the translated copies tile the line exactly and `G₀ ≡ 1`
//!   holds pointwise, not just almost everywhere.
//! * `bspline` of order `m` — the m-fold convolution of the unit-interval
//!   indicator, `|φ̂(ω)|² = (sin(ω/2)/(ω/2))^{2m}`; order 1 is the Haar
//!   generator.
//! * `gaussian` of width σ — `|φ̂(ω)|² = 2πσ² e^{−σ²ω²}`.
//!
//! Composite generators are built by dilation, orthonormalization (lazy
//! division by `G₀`), tensor products, and tabulated samples.

use alloc::boxed::Box;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{E, PI, TAU};

use crate::error::{Error, Result};
use crate::fmath;
use crate::periodization::{self, LatticeSpec};

/// Grid used when orthonormalization probes the Gram function for a lower bound.
const ORTHO_CHECK_GRID: usize = 4096;
/// Riesz-basis floor: orthonormalization rejects generators whose Gram
/// function dips below this value anywhere on the check grid.
const RIESZ_FLOOR: f64 = 1e-8;
/// Tail tolerance used when an orthonormalized evaluator computes G₀ lazily.
const ORTHO_EVAL_TAIL_TOL: f64 = 1e-13;

/// Decay law asserted for `|φ̂|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnvelopeMode {
    /// `|φ̂(ω)| ≤ C (1 + |ω|)^{−p}`
    Polynomial,
    /// `|φ̂(ω)| ≤ C e^{−p|ω|}`
    SuperExponential,
}

/// A pointwise bound on `|φ̂|` used to certify truncation tails.
///
/// `support_radius`, when present, additionally asserts `φ̂(ω) = 0` for
/// `|ω| > R`; lattice sums over such generators truncate with a zero tail.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralEnvelope {
    pub mode: EnvelopeMode,
    pub amplitude: f64,
    pub exponent: f64,
    pub support_radius: Option<f64>,
}

impl SpectralEnvelope {
    pub fn polynomial(amplitude: f64, exponent: f64) -> Self {
        Self {
            mode: EnvelopeMode::Polynomial,
            amplitude,
            exponent,
            support_radius: None,
        }
    }

    pub fn super_exponential(amplitude: f64, exponent: f64) -> Self {
        Self {
            mode: EnvelopeMode::SuperExponential,
            amplitude,
            exponent,
            support_radius: None,
        }
    }

    pub fn with_support_radius(mut self, radius: f64) -> Self {
        self.support_radius = Some(radius);
        self
    }

    /// The asserted bound on `|φ̂(ω)|`.
    pub fn magnitude_bound(&self, omega: f64) -> f64 {
        let w = fmath::abs(omega);
        if let Some(r) = self.support_radius {
            if w > r {
                return 0.0;
            }
        }
        match self.mode {
            EnvelopeMode::Polynomial => {
                self.amplitude * fmath::powf(1.0 + w, -self.exponent)
            }
            EnvelopeMode::SuperExponential => {
                self.amplitude * fmath::exp(-self.exponent * w)
            }
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.amplitude.is_finite() && self.amplitude > 0.0) {
            return Err(Error::InvalidInput(format!(
                "envelope amplitude must be positive and finite, got {}",
                self.amplitude
            )));
        }
        if !(self.exponent.is_finite() && self.exponent > 0.0) {
            return Err(Error::InvalidInput(format!(
                "envelope exponent must be positive and finite, got {}",
                self.exponent
            )));
        }
        if let Some(r) = self.support_radius {
            if !(r.is_finite() && r > 0.0) {
                return Err(Error::InvalidInput(format!(
                    "envelope support radius must be positive and finite, got {r}"
                )));
            }
        }
        Ok(())
    }
}

/// Declarative description of a generator; `make_generator` turns it into an
/// evaluator. Specs are finite trees, so nesting is acyclic by construction.
#[derive(Debug, Clone, PartialEq)]
pub enum GeneratorSpec {
    Shannon,
    Bspline {
        order: u32,
    },
    Gaussian {
        sigma: f64,
    },
    Dilated {
        a: f64,
        inner: Box<GeneratorSpec>,
    },
    Orthonormalized {
        inner: Box<GeneratorSpec>,
    },
    Tensor {
        axes: Vec<GeneratorSpec>,
    },
    /// Samples of `|φ̂|²` on a strictly increasing ω grid with a declared
    /// envelope that takes over beyond the sampled range.
    Tabulated {
        samples: Vec<(f64, f64)>,
        envelope: SpectralEnvelope,
    },
}

#[derive(Debug, Clone)]
enum Kind {
    Shannon,
    Bspline {
        order: u32,
        /// `gram_tables[j-1]` holds the even coefficients of
        /// `S_j(c) = Σ_ℓ (ω + 2πℓ)^{−2j}` as a polynomial in `c = cot(ω/2)`.
        gram_tables: Vec<Vec<f64>>,
    },
    Gaussian {
        sigma: f64,
    },
    Dilated {
        a: f64,
        inner: Box<Generator>,
    },
    Orthonormalized {
        inner: Box<Generator>,
    },
    Tensor {
        axes: Vec<Generator>,
    },
    Tabulated {
        omegas: Vec<f64>,
        values: Vec<f64>,
    },
}

/// An immutable evaluator for `|φ̂(ω)|²` with its decay envelope.
///
/// Generators are pure values: evaluation never mutates shared state, so a
/// `Generator` may be used concurrently from any number of threads.
#[derive(Debug, Clone)]
pub struct Generator {
    kind: Kind,
    envelopes: Vec<SpectralEnvelope>,
    orthonormal: bool,
}

impl Generator {
    /// Number of axes (1 for every non-tensor generator).
    pub fn dimension(&self) -> usize {
        match &self.kind {
            Kind::Tensor { axes } => axes.len(),
            _ => 1,
        }
    }

    /// Whether this generator claims `G₀ ≡ 1` on the integer lattice.
    pub fn is_orthonormal(&self) -> bool {
        self.orthonormal
    }

    /// Decay envelope for the given axis.
    pub fn envelope(&self, axis: usize) -> &SpectralEnvelope {
        &self.envelopes[axis]
    }

    /// Per-axis factors of a tensor generator.
    pub fn axes(&self) -> Option<&[Generator]> {
        match &self.kind {
            Kind::Tensor { axes } => Some(axes),
            _ => None,
        }
    }

    /// `|φ̂(ω)|²` for one-dimensional generators.
    ///
    /// Returns NaN if a lazily orthonormalized evaluator fails to converge;
    /// the fallible paths inside the crate use [`Generator::try_phihat_sq`].
    pub fn phihat_sq(&self, omega: f64) -> f64 {
        self.try_phihat_sq(omega).unwrap_or(f64::NAN)
    }

    /// Product evaluator `|φ̂(ω₁,…,ω_d)|²`.
    pub fn phihat_sq_nd(&self, omega: &[f64]) -> f64 {
        assert_eq!(
            omega.len(),
            self.dimension(),
            "omega has {} components but the generator has dimension {}",
            omega.len(),
            self.dimension()
        );
        match &self.kind {
            Kind::Tensor { axes } => axes
                .iter()
                .zip(omega)
                .map(|(g, &w)| g.phihat_sq(w))
                .product(),
            _ => self.phihat_sq(omega[0]),
        }
    }

    pub(crate) fn try_phihat_sq(&self, omega: f64) -> Result<f64> {
        match &self.kind {
            Kind::Shannon => Ok(if omega > -PI && omega <= PI { 1.0 } else { 0.0 }),
            Kind::Bspline { order, .. } => {
                Ok(fmath::powi(sinc_half(omega), 2 * *order as i32))
            }
            Kind::Gaussian { sigma } => {
                Ok(TAU * sigma * sigma * fmath::exp(-sigma * sigma * omega * omega))
            }
            Kind::Dilated { a, inner } => Ok(a * a * inner.try_phihat_sq(a * omega)?),
            Kind::Orthonormalized { inner } => {
                let q = inner.try_phihat_sq(omega)?;
                let g0 = periodization::bracket(
                    inner,
                    0,
                    fmath::rem_euclid(omega, TAU),
                    LatticeSpec::unit(),
                    ORTHO_EVAL_TAIL_TOL,
                )?;
                Ok(q / g0.value)
            }
            Kind::Tensor { .. } => Err(Error::UnsupportedGenerator(
                "scalar evaluation of a tensor generator; use phihat_sq_nd".into(),
            )),
            Kind::Tabulated { omegas, values } => Ok(eval_table(omegas, values, &self.envelopes[0], omega)),
        }
    }

    /// Closed-form periodization `Σ_ℓ |ω+Δℓ|^{2k} |φ̂(ω+Δℓ)|²` where one is
    /// known; `delta` is the frequency-lattice step. `None` falls back to
    /// envelope-certified truncation.
    pub(crate) fn exact_bracket(&self, k: u32, omega: f64, delta: f64) -> Option<f64> {
        match &self.kind {
            Kind::Bspline { order, gram_tables } => {
                if delta == TAU && k < *order {
                    Some(bspline_gram(*order, gram_tables, k, omega))
                } else {
                    None
                }
            }
            Kind::Dilated { a, inner } => {
                let v = inner.exact_bracket(k, a * omega, a * delta)?;
                Some(fmath::powi(*a, 2 - 2 * k as i32) * v)
            }
            Kind::Orthonormalized { inner } => {
                // All lattice points share the same residue mod 2π only when
                // the lattice step is a whole number of 2π periods.
                let periods = delta / TAU;
                if periods < 1.0 || periods != fmath::floor(periods) {
                    return None;
                }
                let num = inner.exact_bracket(k, omega, delta)?;
                let den = inner.exact_bracket(0, fmath::rem_euclid(omega, TAU), TAU)?;
                Some(num / den)
            }
            _ => None,
        }
    }
}

/// `sin(u/2) / (u/2)` with the removable singularity filled in.
fn sinc_half(u: f64) -> f64 {
    let x = u / 2.0;
    if fmath::abs(x) < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        fmath::sin(x) / x
    }
}

fn eval_table(omegas: &[f64], values: &[f64], envelope: &SpectralEnvelope, omega: f64) -> f64 {
    // Tables sampled only on ω ≥ 0 are treated as even in ω.
    let w = if omega < omegas[0] && omegas[0] >= 0.0 {
        fmath::abs(omega)
    } else {
        omega
    };
    if w < omegas[0] || w > omegas[omegas.len() - 1] {
        let b = envelope.magnitude_bound(w);
        return b * b;
    }
    let idx = omegas.partition_point(|&x| x <= w);
    if idx == 0 {
        return values[0];
    }
    if idx >= omegas.len() {
        return values[values.len() - 1];
    }
    let (x0, x1) = (omegas[idx - 1], omegas[idx]);
    let (y0, y1) = (values[idx - 1], values[idx]);
    let t = (w - x0) / (x1 - x0);
    y0 + t * (y1 - y0)
}

/// Even coefficients of the cotangent polynomials `S_j(c) = Σ_ℓ (ω+2πℓ)^{−2j}`
/// for `j = 1..=order`, generated by `S_{j+1} = S_j'' / (2j(2j+1))` where the
/// ω-derivative acts on polynomials in `c = cot(ω/2)` through
/// `dc/dω = −(1+c²)/2`.
fn bspline_gram_tables(order: u32) -> Vec<Vec<f64>> {
    let mut tables = Vec::with_capacity(order as usize);
    // S_1 = (1 + c²)/4
    let mut s = vec![0.25, 0.0, 0.25];
    tables.push(even_coeffs(&s));
    for j in 1..order {
        let d1 = poly_deriv(&s);
        let d2 = poly_deriv(&d1);
        let one_c2 = [1.0, 0.0, 1.0];
        let sq = poly_mul(&one_c2, &one_c2);
        let c_one_c2 = [0.0, 1.0, 0.0, 1.0];
        let mut next = poly_scale(&poly_mul(&sq, &d2), 0.25);
        poly_add_into(&mut next, &poly_scale(&poly_mul(&c_one_c2, &d1), 0.5));
        let jf = j as f64;
        s = poly_scale(&next, 1.0 / (2.0 * jf * (2.0 * jf + 1.0)));
        tables.push(even_coeffs(&s));
    }
    tables
}

fn even_coeffs(p: &[f64]) -> Vec<f64> {
    p.iter().step_by(2).copied().collect()
}

fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0.0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

fn poly_deriv(p: &[f64]) -> Vec<f64> {
    if p.len() <= 1 {
        return vec![0.0];
    }
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| c * i as f64)
        .collect()
}

fn poly_scale(p: &[f64], s: f64) -> Vec<f64> {
    p.iter().map(|&c| c * s).collect()
}

fn poly_add_into(a: &mut Vec<f64>, b: &[f64]) {
    if b.len() > a.len() {
        a.resize(b.len(), 0.0);
    }
    for (ai, &bi) in a.iter_mut().zip(b) {
        *ai += bi;
    }
}

/// `G_k(ω) = Σ_ℓ |ω+2πℓ|^{2k} (sin/(·))^{2m}` evaluated through
/// `(2 sin(ω/2))^{2m} S_{m−k}(cot(ω/2))`, rewritten so every term carries a
/// nonnegative power of `sin(ω/2)`; stable for all ω including the lattice
/// points where the cotangent blows up.
fn bspline_gram(order: u32, tables: &[Vec<f64>], k: u32, omega: f64) -> f64 {
    let j = (order - k) as usize;
    let coeffs = &tables[j - 1];
    let s2 = {
        let s = fmath::sin(omega / 2.0);
        s * s
    };
    let c2 = {
        let c = fmath::cos(omega / 2.0);
        c * c
    };
    let mut total = 0.0;
    for (i, &a) in coeffs.iter().enumerate() {
        let term = a
            * fmath::powi(s2, order as i32 - i as i32)
            * fmath::powi(c2, i as i32);
        total += term;
    }
    fmath::powi(4.0, order as i32) * total
}

/// Builds the evaluator described by `spec`, validating parameters.
pub fn make_generator(spec: &GeneratorSpec) -> Result<Generator> {
    match spec {
        GeneratorSpec::Shannon => Ok(Generator {
            kind: Kind::Shannon,
            envelopes: vec![SpectralEnvelope::polynomial(1.0 + PI, 1.0).with_support_radius(PI)],
            orthonormal: true,
        }),
        GeneratorSpec::Bspline { order } => {
            if *order < 1 {
                return Err(Error::InvalidInput("bspline order must be >= 1".into()));
            }
            Ok(Generator {
                kind: Kind::Bspline {
                    order: *order,
                    gram_tables: bspline_gram_tables(*order),
                },
                envelopes: vec![SpectralEnvelope::polynomial(
                    fmath::powi(3.0, *order as i32),
                    *order as f64,
                )],
                // Haar shifts are orthonormal: G₀ = 4 sin²(ω/2) · S₁ ≡ 1.
                orthonormal: *order == 1,
            })
        }
        GeneratorSpec::Gaussian { sigma } => {
            if !(sigma.is_finite() && *sigma > 0.0) {
                return Err(Error::InvalidInput(format!(
                    "gaussian width must be positive and finite, got {sigma}"
                )));
            }
            Ok(Generator {
                kind: Kind::Gaussian { sigma: *sigma },
                envelopes: vec![SpectralEnvelope::super_exponential(
                    sigma * fmath::sqrt(TAU * E),
                    *sigma,
                )],
                orthonormal: false,
            })
        }
        GeneratorSpec::Dilated { a, inner } => {
            let g = make_generator(inner)?;
            dilate(&g, *a)
        }
        GeneratorSpec::Orthonormalized { inner } => {
            let g = make_generator(inner)?;
            orthonormalize(&g)
        }
        GeneratorSpec::Tensor { axes } => {
            let gens = axes.iter().map(make_generator).collect::<Result<Vec<_>>>()?;
            tensorize(gens)
        }
        GeneratorSpec::Tabulated { samples, envelope } => {
            envelope.validate()?;
            if samples.len() < 2 {
                return Err(Error::InvalidInput(
                    "tabulated generator needs at least two samples".into(),
                ));
            }
            let mut omegas = Vec::with_capacity(samples.len());
            let mut values = Vec::with_capacity(samples.len());
            for (i, &(w, q)) in samples.iter().enumerate() {
                if !w.is_finite() || !q.is_finite() || q < 0.0 {
                    return Err(Error::InvalidInput(format!(
                        "tabulated sample {i} is not a finite nonnegative pair"
                    )));
                }
                if let Some(&prev) = omegas.last() {
                    if w <= prev {
                        return Err(Error::InvalidInput(format!(
                            "tabulated omegas must be strictly increasing (row {i})"
                        )));
                    }
                }
                // Declared envelope must dominate the samples; beyond them it
                // is trusted (documented trust boundary).
                let bound = envelope.magnitude_bound(w);
                if fmath::sqrt(q) > bound * (1.0 + 1e-9) {
                    return Err(Error::InvalidInput(format!(
                        "tabulated sample {i} (omega = {w}) exceeds the declared envelope"
                    )));
                }
                omegas.push(w);
                values.push(q);
            }
            Ok(Generator {
                kind: Kind::Tabulated { omegas, values },
                envelopes: vec![envelope.clone()],
                orthonormal: false,
            })
        }
    }
}

/// `ψ(x) = φ(x/a)`, whose evaluator is `|ψ̂(ω)|² = a² |φ̂(aω)|²`.
pub fn dilate(gen: &Generator, a: f64) -> Result<Generator> {
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::InvalidInput(format!(
            "dilation factor must be positive and finite, got {a}"
        )));
    }
    if gen.dimension() != 1 {
        return Err(Error::UnsupportedGenerator(
            "dilation is defined for one-dimensional generators".into(),
        ));
    }
    if a == 1.0 {
        return Ok(gen.clone());
    }
    let env = gen.envelope(0);
    let amplitude = match env.mode {
        EnvelopeMode::Polynomial => {
            // (1 + a|ω|)^{-p} ≤ (1+|ω|)^{-p} for a ≥ 1 and
            // (1 + a|ω|)^{-p} ≤ a^{-p} (1+|ω|)^{-p} for a < 1.
            if a >= 1.0 {
                env.amplitude * a
            } else {
                env.amplitude * fmath::powf(a, 1.0 - env.exponent)
            }
        }
        EnvelopeMode::SuperExponential => env.amplitude * a,
    };
    let exponent = match env.mode {
        EnvelopeMode::Polynomial => env.exponent,
        EnvelopeMode::SuperExponential => env.exponent * a,
    };
    let envelope = SpectralEnvelope {
        mode: env.mode,
        amplitude,
        exponent,
        support_radius: env.support_radius.map(|r| r / a),
    };
    Ok(Generator {
        kind: Kind::Dilated {
            a,
            inner: Box::new(gen.clone()),
        },
        envelopes: vec![envelope],
        orthonormal: false,
    })
}

/// Divides the evaluator by the Gram function, producing a generator whose
/// integer shifts are orthonormal. The division happens lazily at every
/// evaluation, so no interpolation error is introduced.
///
/// The Riesz lower bound is probed on a 4096-point grid; the grid minimum is
/// trusted as the floor when rescaling the envelope (same trust boundary as
/// tabulated generators).
pub fn orthonormalize(gen: &Generator) -> Result<Generator> {
    if gen.is_orthonormal() {
        return Ok(gen.clone());
    }
    if let Kind::Tensor { axes } = &gen.kind {
        let on_axes = axes.iter().map(orthonormalize).collect::<Result<Vec<_>>>()?;
        return tensorize(on_axes);
    }
    let mut floor = f64::INFINITY;
    for i in 0..ORTHO_CHECK_GRID {
        let w = TAU * i as f64 / ORTHO_CHECK_GRID as f64;
        let g0 = periodization::bracket(gen, 0, w, LatticeSpec::unit(), 1e-12)?;
        if g0.value < floor {
            floor = g0.value;
        }
    }
    if !(floor > RIESZ_FLOOR) {
        return Err(Error::DegenerateGenerator(format!(
            "Gram function minimum {floor:.3e} on the check grid is below the Riesz threshold {RIESZ_FLOOR:.0e}"
        )));
    }
    let env = gen.envelope(0);
    let envelope = SpectralEnvelope {
        mode: env.mode,
        amplitude: env.amplitude / fmath::sqrt(floor),
        exponent: env.exponent,
        support_radius: env.support_radius,
    };
    Ok(Generator {
        kind: Kind::Orthonormalized {
            inner: Box::new(gen.clone()),
        },
        envelopes: vec![envelope],
        orthonormal: true,
    })
}

/// Tensor product of one-dimensional generators; the evaluator is the product
/// of the per-axis evaluators. A singleton list returns its element.
pub fn tensorize(gens: Vec<Generator>) -> Result<Generator> {
    if gens.is_empty() {
        return Err(Error::InvalidInput("tensor product of an empty list".into()));
    }
    for (i, g) in gens.iter().enumerate() {
        if g.dimension() != 1 {
            return Err(Error::UnsupportedGenerator(format!(
                "tensor axis {i} is not one-dimensional"
            )));
        }
    }
    if gens.len() == 1 {
        return Ok(gens.into_iter().next().unwrap());
    }
    let envelopes = gens.iter().map(|g| g.envelope(0).clone()).collect();
    let orthonormal = gens.iter().all(Generator::is_orthonormal);
    Ok(Generator {
        kind: Kind::Tensor { axes: gens },
        envelopes,
        orthonormal,
    })
}
