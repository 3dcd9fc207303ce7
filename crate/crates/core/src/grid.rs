//! Uniform radial grids on `[0, 1]` and functions sampled on them.
//!
//! Integrals over the unit ball of a radial integrand `g(|x|)` reduce to
//! `|S^{N-1}| int_0^1 g(r) r^{N-1} dr`. The grid folds the factor
//! `|S^{N-1}| r^{N-1}` into its node weights: `w_i` is the exact integral of the
//! hat function at node `i` against that measure, so `sum_i w_i g_i` integrates
//! the piecewise-linear interpolant of `g` exactly. The weights sum to the
//! volume of the ball.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quadrature::{sphere_area, GaussLegendre};

#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    dim: usize,
    n: usize,
    sphere: f64,
    weights: Vec<f64>,
    cells: Vec<f64>,
}

impl RadialGrid {
    /// Grid with `n` intervals for the ball in `R^dim`.
    pub fn new(dim: usize, n: usize) -> Result<Arc<Self>> {
        if n < 1 || dim < 1 {
            return Err(Error::Inadmissible(format!(
                "grid needs n >= 1 and dim >= 1 (n = {n}, dim = {dim})"
            )));
        }
        let sphere = sphere_area(dim);
        let rule = GaussLegendre::new(dim / 2 + 1);
        let h = 1.0 / n as f64;
        let mut weights = vec![0.0; n + 1];
        let mut cells = vec![0.0; n];
        for k in 0..n {
            let (a, b) = (k as f64 * h, (k + 1) as f64 * h);
            let (mut left, mut right) = (0.0, 0.0);
            for (r, w) in rule.mapped(a, b) {
                let m = w * r.powi(dim as i32 - 1);
                left += m * (b - r) / h;
                right += m * (r - a) / h;
            }
            weights[k] += sphere * left;
            weights[k + 1] += sphere * right;
            cells[k] = sphere * (left + right);
        }
        Ok(Arc::new(Self {
            dim,
            n,
            sphere,
            weights,
            cells,
        }))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of intervals.
    pub fn intervals(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.n + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn h(&self) -> f64 {
        1.0 / self.n as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        i as f64 / self.n as f64
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.n).map(move |i| self.node(i))
    }

    /// Quadrature weights `w_i` (node masses).
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `|S^{N-1}| int_{r_k}^{r_{k+1}} r^{N-1} dr` for each interval.
    pub fn cell_measures(&self) -> &[f64] {
        &self.cells
    }

    pub fn sphere_area(&self) -> f64 {
        self.sphere
    }

    /// Volume of the unit ball, `|S^{N-1}| / N`.
    pub fn ball_volume(&self) -> f64 {
        self.sphere / self.dim as f64
    }
}

/// A radial function sampled at the nodes of a [`RadialGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct RadialFn {
    grid: Arc<RadialGrid>,
    values: Vec<f64>,
}

impl RadialFn {
    pub fn new(grid: Arc<RadialGrid>, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} values for a grid with {} nodes",
                values.len(),
                grid.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteInput("radial function samples"));
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn<F: FnMut(f64) -> f64>(grid: Arc<RadialGrid>, mut g: F) -> Result<Self> {
        let values = grid.nodes().map(&mut g).collect();
        Self::new(grid, values)
    }

    pub fn constant(grid: Arc<RadialGrid>, c: f64) -> Result<Self> {
        Self::from_fn(grid, |_| c)
    }

    /// Callers guarantee finiteness and matching length.
    pub(crate) fn from_raw(grid: Arc<RadialGrid>, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self { grid, values }
    }

    pub fn grid(&self) -> &Arc<RadialGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self::from_raw(self.grid.clone(), self.values.iter().map(|v| c * v).collect())
    }

    /// Forward-difference slopes `(u_{k+1} - u_k) / h`, one per interval.
    pub fn slopes(&self) -> Vec<f64> {
        let n = self.grid.intervals() as f64;
        self.values.windows(2).map(|w| (w[1] - w[0]) * n).collect()
    }

    pub fn max_abs_diff(&self, other: &RadialFn) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Piecewise-linear interpolant at an arbitrary radius in `[0, 1]`.
    pub fn interpolate(&self, r: f64) -> f64 {
        let n = self.grid.intervals();
        let x = (r.clamp(0.0, 1.0)) * n as f64;
        let k = (x.floor() as usize).min(n - 1);
        let t = x - k as f64;
        (1.0 - t) * self.values[k] + t * self.values[k + 1]
    }
}

/// `sum_i w_i g_i`: the integral over the ball of a node-sampled radial integrand.
pub fn quad(grid: &RadialGrid, g: &[f64]) -> Result<f64> {
    if g.len() != grid.len() {
        return Err(Error::GridMismatch(format!(
            "{} samples for a grid with {} nodes",
            g.len(),
            grid.len()
        )));
    }
    if g.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteInput("quadrature integrand"));
    }
    Ok(grid.weights.iter().zip(g).map(|(w, v)| w * v).sum())
}
