//! Sharp Bernstein constants for shift-invariant subspaces of L₂.
//!
//! Given a generator φ (described by `|φ̂|²` and a decay envelope), the space
//! `W = span{φ(· − hγ)}` satisfies the inequality
//! `‖f^{(k)}‖₂² ≤ B ‖f‖₂²` for every `f ∈ W`, with the sharp constant
//!
//! ```text
//! B = ess sup_ω  G_k(ω) / G₀(ω),
//! G_k(ω) = Σ_ℓ |ω + 2πℓ/h|^{2k} |φ̂(ω + 2πℓ/h)|²,
//! ```
//!
//! which reduces to `sup_ω G_k(ω)` when the translates are orthonormal
//! (`G₀ ≡ 1`). This crate computes `B` (also on scaled lattices and for
//! tensor-product generators in several variables), evaluates the norms of
//! explicitly given functions in `W`, verifies the inequality on seeded
//! random functions, and demonstrates sharpness with the Fejér-kernel
//! extremal sequence.
//!
//! The crate is `no_std`-compatible (`alloc` required): disable default
//! features and enable `libm`.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod constants;
pub mod error;
pub mod extremal;
pub mod generators;
pub mod periodization;
pub mod quadrature;
pub mod siss;

mod fmath;
mod sum;

pub use constants::{
    bernstein_constant, bernstein_constant_nd, bernstein_constant_scaled, BernsteinConstant,
    SearchOpts,
};
pub use error::{Error, Result};
pub use extremal::{extremal_ratio, fejer, sharpness_trace, FejerTrace};
pub use generators::{
    dilate, make_generator, orthonormalize, tensorize, EnvelopeMode, Generator, GeneratorSpec,
    SpectralEnvelope,
};
pub use periodization::{
    bracket, bracket_nd, check_orthonormal, LatticeSpec, OrthonormalityReport, PeriodizationValue,
};
pub use quadrature::{periodic_integral, periodic_integral_nd, QuadratureResult};
pub use siss::{verify_inequality, FiniteSissFunction, VerificationReport};

/// Re-export of the complex scalar used for coefficients and symbols.
pub use num_complex::Complex64;
