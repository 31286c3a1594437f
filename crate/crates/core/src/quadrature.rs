//! Periodic quadrature over one frequency period (and small tensor products
//! of periods) with a-posteriori error control.
//!
//! A uniform rule with nodes at cell midpoints is spectrally accurate for
//! smooth periodic integrands and second-order for integrands whose kinks or
//! jumps sit on cell edges, which is where the band edges of the built-in
//! generators land. Node counts double until two successive values agree to
//! the requested relative tolerance; summation is compensated and sequential,
//! so results are reproducible bit-for-bit.

use alloc::format;
use alloc::vec;

use crate::error::{Error, Result};
use crate::fmath;
use crate::sum::Accumulator;

/// Node cap for one-dimensional integrals.
const NODE_CAP: usize = 1 << 22;
/// Cap on the total number of tensor-rule evaluations.
const ND_EVAL_CAP: usize = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    /// Last successive difference of the doubling loop.
    pub error_estimate: f64,
    pub nodes_used: u64,
}

/// Integrates `f` over `[0, period)`.
pub fn periodic_integral(
    mut f: impl FnMut(f64) -> f64,
    period: f64,
    min_nodes: usize,
    rel_tol: f64,
) -> Result<QuadratureResult> {
    periodic_integral_try(|x| Ok(f(x)), period, min_nodes, rel_tol)
}

pub(crate) fn periodic_integral_try(
    mut f: impl FnMut(f64) -> Result<f64>,
    period: f64,
    min_nodes: usize,
    rel_tol: f64,
) -> Result<QuadratureResult> {
    if !(period.is_finite() && period > 0.0) {
        return Err(Error::InvalidInput(format!(
            "period must be positive and finite, got {period}"
        )));
    }
    if !(rel_tol.is_finite() && rel_tol > 0.0) {
        return Err(Error::InvalidInput(format!(
            "relative tolerance must be positive and finite, got {rel_tol}"
        )));
    }
    // Power-of-two node counts keep dyadic break points of the integrand on
    // cell edges, where the midpoint rule stays second order.
    let mut nodes = min_nodes.max(4).next_power_of_two().min(NODE_CAP);
    let mut prev = midpoint_sum(&mut f, period, nodes)?;
    loop {
        if nodes * 2 > NODE_CAP {
            return Err(Error::Convergence(format!(
                "quadrature did not converge below rel_tol = {rel_tol:.3e} within {NODE_CAP} nodes; last values {prev:.17e} at {nodes} nodes"
            )));
        }
        nodes *= 2;
        let cur = midpoint_sum(&mut f, period, nodes)?;
        let diff = fmath::abs(cur - prev);
        if diff <= rel_tol * fmath::abs(cur).max(fmath::abs(prev)) {
            return Ok(QuadratureResult {
                value: cur,
                error_estimate: diff,
                nodes_used: nodes as u64,
            });
        }
        prev = cur;
    }
}

fn midpoint_sum(f: &mut impl FnMut(f64) -> Result<f64>, period: f64, nodes: usize) -> Result<f64> {
    let h = period / nodes as f64;
    let mut acc = Accumulator::new();
    for j in 0..nodes {
        let x = (j as f64 + 0.5) * h;
        let v = f(x)?;
        if !v.is_finite() {
            return Err(Error::InvalidInput(format!(
                "integrand is not finite at omega = {x}"
            )));
        }
        acc.add(v);
    }
    Ok(acc.value() * h)
}

/// Tensor-product midpoint rule over `[0, periods[0]) × …`, doubling every
/// axis until successive values agree. Practical cap at three dimensions.
pub fn periodic_integral_nd(
    mut f: impl FnMut(&[f64]) -> f64,
    periods: &[f64],
    min_nodes: &[usize],
    rel_tol: f64,
) -> Result<QuadratureResult> {
    let d = periods.len();
    if d == 0 || d > 3 {
        return Err(Error::InvalidInput(format!(
            "tensor quadrature supports dimensions 1..=3, got {d}"
        )));
    }
    if min_nodes.len() != d {
        return Err(Error::InvalidInput(format!(
            "expected {d} per-axis node counts, got {}",
            min_nodes.len()
        )));
    }
    for &p in periods {
        if !(p.is_finite() && p > 0.0) {
            return Err(Error::InvalidInput(format!(
                "period must be positive and finite, got {p}"
            )));
        }
    }
    if !(rel_tol.is_finite() && rel_tol > 0.0) {
        return Err(Error::InvalidInput(format!(
            "relative tolerance must be positive and finite, got {rel_tol}"
        )));
    }
    let mut nodes: alloc::vec::Vec<usize> =
        min_nodes.iter().map(|&m| m.max(4).next_power_of_two()).collect();
    let mut prev = tensor_midpoint_sum(&mut f, periods, &nodes)?;
    loop {
        let total: usize = nodes.iter().map(|&m| m * 2).product();
        if total > ND_EVAL_CAP {
            return Err(Error::Convergence(format!(
                "tensor quadrature did not converge below rel_tol = {rel_tol:.3e} within {ND_EVAL_CAP} evaluations; last value {prev:.17e}"
            )));
        }
        for m in nodes.iter_mut() {
            *m *= 2;
        }
        let cur = tensor_midpoint_sum(&mut f, periods, &nodes)?;
        let diff = fmath::abs(cur - prev);
        if diff <= rel_tol * fmath::abs(cur).max(fmath::abs(prev)) {
            let used: usize = nodes.iter().product();
            return Ok(QuadratureResult {
                value: cur,
                error_estimate: diff,
                nodes_used: used as u64,
            });
        }
        prev = cur;
    }
}

fn tensor_midpoint_sum(
    f: &mut impl FnMut(&[f64]) -> f64,
    periods: &[f64],
    nodes: &[usize],
) -> Result<f64> {
    let d = periods.len();
    let steps: alloc::vec::Vec<f64> = periods
        .iter()
        .zip(nodes)
        .map(|(&p, &m)| p / m as f64)
        .collect();
    let weight: f64 = steps.iter().product();
    let mut point = vec![0.0f64; d];
    let mut index = vec![0usize; d];
    let mut acc = Accumulator::new();
    loop {
        for (axis, ix) in index.iter().enumerate() {
            point[axis] = (*ix as f64 + 0.5) * steps[axis];
        }
        let v = f(&point);
        if !v.is_finite() {
            return Err(Error::InvalidInput(format!(
                "integrand is not finite at {point:?}"
            )));
        }
        acc.add(v);
        // odometer increment
        let mut axis = 0;
        loop {
            index[axis] += 1;
            if index[axis] < nodes[axis] {
                break;
            }
            index[axis] = 0;
            axis += 1;
            if axis == d {
                return Ok(acc.value() * weight);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extremal::fejer;
    use core::f64::consts::TAU;

    #[test]
    fn constant_integrand_is_exact() {
        let r = periodic_integral(|_| 2.5, TAU, 16, 1e-12).unwrap();
        assert!((r.value - 2.5 * TAU).abs() < 1e-12);
    }

    #[test]
    fn low_degree_trig_polynomial() {
        let r = periodic_integral(|w| 2.0 + 2.0 * w.cos(), TAU, 64, 1e-13).unwrap();
        assert!((r.value / TAU - 2.0).abs() < 1e-13);
    }

    #[test]
    fn fejer_mean_is_one() {
        let r = periodic_integral(|w| fejer(7, w), TAU, 1024, 1e-13).unwrap();
        assert!((r.value / TAU - 1.0).abs() < 1e-12);
    }

    #[test]
    fn trig_exactness_against_coefficient_sum() {
        // M-node midpoint rules integrate trig polynomials of degree < M exactly.
        let coeffs = [(0, 1.7), (1, 0.3), (2, -0.8), (5, 0.11), (9, -0.4)];
        let f = |w: f64| -> f64 {
            coeffs
                .iter()
                .map(|&(r, c): &(i32, f64)| c * (r as f64 * w).cos())
                .sum()
        };
        let r = periodic_integral(f, TAU, 32, 1e-13).unwrap();
        assert!((r.value / TAU - 1.7).abs() < 1e-13);
    }

    #[test]
    fn input_validation() {
        assert!(periodic_integral(|_| 1.0, 0.0, 16, 1e-10).is_err());
        assert!(periodic_integral(|_| 1.0, TAU, 16, 0.0).is_err());
        assert!(periodic_integral(|_| f64::NAN, TAU, 16, 1e-10).is_err());
    }

    #[test]
    fn nd_constant_and_separable() {
        let r = periodic_integral_nd(|_| 3.0, &[TAU, TAU], &[8, 8], 1e-12).unwrap();
        assert!((r.value - 3.0 * TAU * TAU).abs() < 1e-9);

        let g = |w: &[f64]| (2.0 + w[0].cos()) * (1.0 + 0.5 * (2.0 * w[1]).sin());
        let two_d = periodic_integral_nd(g, &[TAU, TAU], &[16, 16], 1e-12)
            .unwrap()
            .value;
        let a = periodic_integral(|w| 2.0 + w.cos(), TAU, 16, 1e-13).unwrap().value;
        let b = periodic_integral(|w| 1.0 + 0.5 * (2.0 * w).sin(), TAU, 16, 1e-13)
            .unwrap()
            .value;
        assert!((two_d - a * b).abs() <= 1e-12 * (a * b).abs());
    }

    #[test]
    fn nd_fejer_product_mean() {
        let r = periodic_integral_nd(
            |w| fejer(3, w[0]) * fejer(3, w[1]),
            &[TAU, TAU],
            &[64, 64],
            1e-12,
        )
        .unwrap();
        assert!((r.value / (TAU * TAU) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn nd_dimension_cap() {
        assert!(periodic_integral_nd(|_| 1.0, &[TAU; 4], &[4; 4], 1e-8).is_err());
        assert!(periodic_integral_nd(|_| 1.0, &[], &[], 1e-8).is_err());
    }
}
