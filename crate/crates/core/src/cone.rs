//! The discrete cone of nonnegative, nondecreasing grid functions.
//!
//! [`project_cone`] is the metric projection in the node-mass inner product
//! `<x, y>_m = sum_i m_i x_i y_i` with `m_i = w_i`, the discrete `L^2(B)`
//! metric. It runs weighted pool-adjacent-violators and then clamps at zero.
//!
//! Clamping after the isotonic fit is exact. Let `y` be the weighted isotonic
//! fit of `v` and `x = max(y, 0)`. `x` is feasible. The isotonic fit is
//! piecewise constant on blocks, each block value being the weighted mean of
//! `v` over the block, and the KKT conditions for the lower-bounded problem
//! hold block by block: blocks with positive mean keep their value and their
//! multipliers, blocks with nonpositive mean sit on the bound `x = 0` with a
//! nonnegative bound multiplier `-mean * mass`, and since `y` is nondecreasing
//! the clamped blocks form a prefix, so the ordering multipliers between a
//! clamped prefix and the rest can be taken as zero.

use crate::error::{Error, Result};
use crate::functionals::norm_p_pow;
use crate::grid::RadialFn;

/// Evidence that a grid function lies in the cone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeCertificate {
    pub min_value: f64,
    pub min_forward_difference: f64,
}

impl ConeCertificate {
    pub fn of(values: &[f64]) -> Self {
        let min_value = values.iter().copied().fold(f64::INFINITY, f64::min);
        let min_forward_difference = values
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min);
        Self {
            min_value,
            min_forward_difference,
        }
    }

    /// Exact membership: both minima nonnegative.
    pub fn holds(&self) -> bool {
        self.min_value >= 0.0 && self.min_forward_difference >= 0.0
    }
}

/// Weighted isotonic (nondecreasing) least-squares fit followed by a clamp at
/// zero. Masses must be positive.
pub fn project_monotone_nonneg(values: &[f64], masses: &[f64]) -> Result<Vec<f64>> {
    if values.len() != masses.len() {
        return Err(Error::GridMismatch(format!(
            "{} values but {} masses",
            values.len(),
            masses.len()
        )));
    }
    if values.iter().chain(masses).any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteInput("projection input"));
    }
    if masses.iter().any(|&m| m <= 0.0) {
        return Err(Error::Inadmissible("projection masses must be positive".into()));
    }

    // Blocks as (mean, mass, length). A singleton keeps its value bit for bit.
    let mut blocks: Vec<(f64, f64, usize)> = Vec::with_capacity(values.len());
    for (&v, &m) in values.iter().zip(masses) {
        let mut cur = (v, m, 1usize);
        while let Some(&(pm, pw, pl)) = blocks.last() {
            if pm > cur.0 {
                let w = pw + cur.1;
                cur = ((pw * pm + cur.1 * cur.0) / w, w, pl + cur.2);
                blocks.pop();
            } else {
                break;
            }
        }
        blocks.push(cur);
    }

    let mut out = Vec::with_capacity(values.len());
    for (mean, _, len) in blocks {
        let v = if mean < 0.0 { 0.0 } else { mean };
        out.extend(std::iter::repeat_n(v, len));
    }
    Ok(out)
}

/// Projection onto the cone in the node-mass metric.
pub fn project_cone(v: &RadialFn) -> Result<(RadialFn, ConeCertificate)> {
    let x = project_monotone_nonneg(v.values(), v.grid().weights())?;
    let cert = ConeCertificate::of(&x);
    debug_assert!(cert.holds());
    Ok((RadialFn::new(v.grid().clone(), x)?, cert))
}

/// True iff every value is `>= -tol` and every forward difference is `>= -tol`.
pub fn is_member(u: &RadialFn, tol: f64) -> bool {
    let c = ConeCertificate::of(u.values());
    c.min_value >= -tol && c.min_forward_difference >= -tol
}

/// Rescale onto the unit sphere `||u||^p = 1`.
pub fn normalize_sphere(u: &RadialFn, p: f64) -> Result<RadialFn> {
    let norm = norm_p_pow(u, p)?.powf(1.0 / p);
    if norm == 0.0 {
        return Err(Error::ZeroFunction);
    }
    Ok(u.scaled(1.0 / norm))
}
