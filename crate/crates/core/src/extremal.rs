//! Fejér-kernel extremal sequence: the sharpness witness for the computed
//! constants.
//!
//! The spectral weights `m_n = √Φ_n`, recentered at the supremum location
//! ω*, produce functions whose Rayleigh quotient
//! `∫ Φ_n(ω−ω*) G_k dω / ∫ Φ_n(ω−ω*) G₀ dω` climbs to the Bernstein constant
//! as the order grows, demonstrating that the constant cannot be improved.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use crate::constants::{bernstein_constant, SearchOpts};
use crate::error::{Error, Result};
use crate::fmath;
use crate::generators::Generator;
use crate::periodization::{bracket, LatticeSpec};
use crate::quadrature::periodic_integral_try;

/// Tail tolerance for periodization factors inside ratio integrands.
const RATIO_TAIL_TOL: f64 = 1e-12;
/// Relative tolerance of the ratio quadratures.
const RATIO_REL_TOL: f64 = 1e-10;

/// Ratios of the extremal sequence at increasing Fejér orders, with their
/// gaps to the constant.
#[derive(Debug, Clone, PartialEq)]
pub struct FejerTrace {
    pub orders: Vec<u32>,
    pub ratios: Vec<f64>,
    /// `constant − ratio` per order.
    pub gaps: Vec<f64>,
    pub constant: f64,
    /// Kernel center per axis (the computed argmax).
    pub center: Vec<f64>,
}

/// The Fejér kernel `Φ_n(ω) = (1/(n+1)) (sin((n+1)ω/2) / sin(ω/2))²`, with
/// the removable singularity at `ω ∈ 2πZ` evaluated as `n + 1`. Its mean over
/// a period is 1.
pub fn fejer(n: u32, omega: f64) -> f64 {
    // Reduce to (−π, π]; the shift by a multiple of 2π leaves both sine
    // factors' squares unchanged and keeps huge (n+1)ω arguments accurate.
    let mut d = fmath::rem_euclid(omega, TAU);
    if d > PI {
        d -= TAU;
    }
    let s = fmath::sin(d / 2.0);
    if s == 0.0 {
        return (n + 1) as f64;
    }
    let t = fmath::sin((n as f64 + 1.0) * d / 2.0);
    (t * t) / ((n as f64 + 1.0) * (s * s))
}

/// Rayleigh quotient of the order-`n` extremal function centered at `center`
/// (in ω units of the lattice's frequency period).
pub fn extremal_ratio(
    gen: &Generator,
    k: u32,
    lattice: LatticeSpec,
    n: u32,
    center: f64,
) -> Result<f64> {
    if gen.dimension() != 1 {
        return Err(Error::InvalidInput(
            "extremal_ratio expects a one-dimensional generator".into(),
        ));
    }
    let h = lattice.step();
    // Integrate in θ = hω, where the kernel is 2π-periodic for every lattice.
    let theta_center = fmath::rem_euclid(h * center, TAU);
    let min_nodes = (16 * (n as usize + 1)).max(1024);
    let weighted = |order: u32| -> Result<f64> {
        let integrand = |theta: f64| -> Result<f64> {
            let g = bracket(gen, order, theta / h, lattice, RATIO_TAIL_TOL)?;
            Ok(fejer(n, theta - theta_center) * (g.value + 0.5 * g.tail_bound))
        };
        Ok(periodic_integral_try(integrand, TAU, min_nodes, RATIO_REL_TOL)?.value)
    };
    let num = weighted(k)?;
    let den = weighted(0)?;
    if den <= 0.0 {
        return Err(Error::Convergence(format!(
            "extremal denominator evaluated non-positive ({den:.3e})"
        )));
    }
    Ok(num / den)
}

/// Runs the extremal sequence over the given strictly increasing orders,
/// centered at the computed argmax. Tensor generators use the product kernel,
/// so the ratio factorizes axis by axis.
pub fn sharpness_trace(
    gen: &Generator,
    k: &[u32],
    lattice: LatticeSpec,
    orders: &[u32],
) -> Result<FejerTrace> {
    if orders.is_empty() {
        return Err(Error::InvalidInput("orders must not be empty".into()));
    }
    if orders.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput(
            "orders must be strictly increasing".into(),
        ));
    }
    let d = gen.dimension();
    if k.len() != d {
        return Err(Error::InvalidInput(format!(
            "expected {d} derivative orders, got {}",
            k.len()
        )));
    }
    if d > 1 && lattice.step() != 1.0 {
        return Err(Error::InvalidInput(
            "tensor sharpness traces run on the integer lattice".into(),
        ));
    }

    let axes: Vec<&Generator> = match gen.axes() {
        Some(axes) => axes.iter().collect(),
        None => alloc::vec![gen],
    };
    let mut centers = Vec::with_capacity(d);
    let mut constant = 1.0f64;
    for (axis, &ks) in axes.iter().zip(k) {
        let b = bernstein_constant(axis, ks, lattice, SearchOpts::default())?;
        constant *= b.value;
        centers.push(b.argmax[0]);
    }

    let mut ratios = Vec::with_capacity(orders.len());
    for &n in orders {
        let mut r = 1.0f64;
        for ((axis, &ks), &center) in axes.iter().zip(k).zip(&centers) {
            r *= extremal_ratio(axis, ks, lattice, n, center)?;
        }
        ratios.push(r);
    }
    let gaps = ratios.iter().map(|r| constant - r).collect();
    Ok(FejerTrace {
        orders: orders.to_vec(),
        ratios,
        gaps,
        constant,
        center: centers,
    })
}
