//! Sharp Bernstein constants: the essential supremum of the Rayleigh weight
//! `G_k(ω)/G₀(ω)` over one frequency period.
//!
//! For orthonormal generators `G₀ ≡ 1` and the constant reduces to
//! `sup_ω G_k(ω)`; the ratio form also covers scaled lattices and generators
//! whose translates are merely a Riesz system. Points where `G₀` vanishes
//! contribute nothing (there `G_k` vanishes too) and are skipped.
//!
//! The search scans a uniform grid over the period, refines the best cell by
//! golden-section search, and doubles the grid (at most twice) when the
//! refined value beats the grid maximum by more than a relative 1e-6,
//! guarding against spikes between grid points.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fmath;
use crate::generators::{dilate, Generator};
use crate::periodization::{bracket, LatticeSpec};

/// Relative excess of the refined maximum over the grid maximum that triggers
/// a grid doubling.
const SPIKE_GUARD: f64 = 1e-6;
/// Maximum number of grid doublings.
const MAX_DOUBLINGS: u32 = 2;

/// Search controls for [`bernstein_constant`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOpts {
    pub grid_size: usize,
    /// Width in ω below which golden-section refinement stops.
    pub refine_tol: f64,
    /// Tail tolerance handed to the periodization sums.
    pub tail_tol: f64,
}

impl Default for SearchOpts {
    fn default() -> Self {
        Self {
            grid_size: 4096,
            refine_tol: 1e-10,
            tail_tol: 1e-12,
        }
    }
}

/// The computed constant `B` in `‖f^{(k)}‖₂² ≤ B ‖f‖₂²`, with the location of
/// the supremum and numerical-quality metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct BernsteinConstant {
    /// Constant in squared form (it multiplies `‖f‖₂²`).
    pub value: f64,
    /// Location of the supremum, one coordinate per axis, inside `[0, 2π/h)`.
    pub argmax: Vec<f64>,
    /// Width of the numerator/denominator truncation bracket at the argmax.
    pub tail_bound: f64,
    /// Grid size actually used (after any doublings).
    pub grid_size: usize,
    pub refined: bool,
}

fn ratio_at(
    gen: &Generator,
    k: u32,
    lattice: LatticeSpec,
    tail_tol: f64,
    omega: f64,
) -> Result<(f64, f64)> {
    let num = bracket(gen, k, omega, lattice, tail_tol)?;
    let den = bracket(gen, 0, omega, lattice, tail_tol)?;
    if den.value <= den.tail_bound {
        // ω is (numerically) outside the essential support of the space.
        return Ok((0.0, 0.0));
    }
    let ratio = num.value / den.value;
    let hi = (num.value + num.tail_bound) / den.value;
    let lo = num.value / (den.value + den.tail_bound);
    Ok((ratio, (hi - lo).max(0.0)))
}

/// Golden-section maximization on `[a, b]` that tracks the best sampled point
/// (endpoints included), so the result never falls below the incoming grid
/// maximum even for maxima at kinks or jumps.
fn golden_max(
    mut f: impl FnMut(f64) -> Result<f64>,
    a0: f64,
    b0: f64,
    xtol: f64,
    mut best: (f64, f64),
) -> Result<(f64, f64)> {
    const INV_PHI2: f64 = 0.381_966_011_250_105_1; // (3 − √5)/2
    let mut a = a0;
    let mut b = b0;
    let mut eval = |x: f64, best: &mut (f64, f64)| -> Result<f64> {
        let v = f(x)?;
        if v > best.1 {
            *best = (x, v);
        }
        Ok(v)
    };
    eval(a, &mut best)?;
    eval(b, &mut best)?;
    let mut x1 = a + INV_PHI2 * (b - a);
    let mut x2 = b - INV_PHI2 * (b - a);
    let mut f1 = eval(x1, &mut best)?;
    let mut f2 = eval(x2, &mut best)?;
    while b - a > xtol {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = a + INV_PHI2 * (b - a);
            f1 = eval(x1, &mut best)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = b - INV_PHI2 * (b - a);
            f2 = eval(x2, &mut best)?;
        }
    }
    Ok(best)
}

/// Computes the sharp constant for a one-dimensional generator on the given
/// shift lattice.
pub fn bernstein_constant(
    gen: &Generator,
    k: u32,
    lattice: LatticeSpec,
    opts: SearchOpts,
) -> Result<BernsteinConstant> {
    if gen.dimension() != 1 {
        return Err(Error::InvalidInput(
            "bernstein_constant expects a one-dimensional generator; use bernstein_constant_nd"
                .into(),
        ));
    }
    if opts.grid_size < 16 {
        return Err(Error::InvalidInput(format!(
            "grid size must be at least 16, got {}",
            opts.grid_size
        )));
    }
    if !(opts.refine_tol.is_finite() && opts.refine_tol > 0.0) {
        return Err(Error::InvalidInput(format!(
            "refine tolerance must be positive and finite, got {}",
            opts.refine_tol
        )));
    }
    let delta = lattice.frequency_period();
    let mut grid = opts.grid_size;
    let mut doublings = 0;
    loop {
        // Grid scan; ties keep the lowest ω so the reduction is deterministic.
        let mut grid_best = (0.0f64, f64::NEG_INFINITY);
        for j in 0..grid {
            let w = delta * j as f64 / grid as f64;
            let (r, _) = ratio_at(gen, k, lattice, opts.tail_tol, w)?;
            if r > grid_best.1 {
                grid_best = (w, r);
            }
        }
        let cell = delta / grid as f64;
        let refined = golden_max(
            |w| ratio_at(gen, k, lattice, opts.tail_tol, w).map(|(r, _)| r),
            grid_best.0 - cell,
            grid_best.0 + cell,
            opts.refine_tol,
            grid_best,
        )?;
        if refined.1 > grid_best.1 * (1.0 + SPIKE_GUARD) && doublings < MAX_DOUBLINGS {
            doublings += 1;
            grid *= 2;
            continue;
        }
        let argmax = fmath::rem_euclid(refined.0, delta);
        let (_, tail) = ratio_at(gen, k, lattice, opts.tail_tol, refined.0)?;
        return Ok(BernsteinConstant {
            value: refined.1,
            argmax: vec![argmax],
            tail_bound: tail,
            grid_size: grid,
            refined: true,
        });
    }
}

/// Constant for the space spanned by `φ((x − γ)/a)`, γ on the integer
/// lattice: the dilation is composed into the generator and the integer
/// lattice search is reused.
pub fn bernstein_constant_scaled(
    gen: &Generator,
    k: u32,
    a: f64,
    opts: SearchOpts,
) -> Result<BernsteinConstant> {
    let dilated = dilate(gen, a)?;
    bernstein_constant(&dilated, k, LatticeSpec::unit(), opts)
}

/// Tensor constant: the lattice sum factorizes into per-axis sums, so the
/// supremum of the product is the product of the per-axis suprema.
pub fn bernstein_constant_nd(
    gen: &Generator,
    k: &[u32],
    opts: SearchOpts,
) -> Result<BernsteinConstant> {
    let d = gen.dimension();
    if k.len() != d {
        return Err(Error::InvalidInput(format!(
            "expected {d} derivative orders, got {}",
            k.len()
        )));
    }
    if d == 1 {
        return bernstein_constant(gen, k[0], LatticeSpec::unit(), opts);
    }
    let axes = gen.axes().ok_or_else(|| {
        Error::UnsupportedGenerator(
            "multidimensional constants require a tensor generator".into(),
        )
    })?;
    let mut value = 1.0f64;
    let mut upper = 1.0f64;
    let mut argmax = Vec::with_capacity(d);
    let mut grid_size = 0usize;
    for (axis, &ks) in axes.iter().zip(k) {
        let b = bernstein_constant(axis, ks, LatticeSpec::unit(), opts)?;
        value *= b.value;
        upper *= b.value + b.tail_bound;
        argmax.push(b.argmax[0]);
        grid_size = grid_size.max(b.grid_size);
    }
    Ok(BernsteinConstant {
        value,
        argmax,
        tail_bound: (upper - value).max(0.0),
        grid_size,
        refined: true,
    })
}
