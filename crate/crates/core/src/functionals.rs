//! Discrete energies on a radial grid and their exact gradients.
//!
//! With slopes `Du_k = (u_{k+1} - u_k) / h` and cell measures `c_k`, the
//! discrete Sobolev energy is
//!
//! ```text
//! ||u||^p = sum_k c_k |Du_k|^p + sum_i w_i |u_i|^p
//! ```
//!
//! and `I(u) = sum_i w_i a(r_i) F(u_i)`. Gradients are taken of these sums with
//! respect to the node values, so optimizers see exactly what is evaluated.
//! For `p < 2` the factor `|Du|^{p-2}` in gradients is regularized as
//! `(Du^2 + 1e-24)^{(p-2)/2}`; function values are never regularized.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::{quad, RadialFn, RadialGrid};
use crate::linalg::SymTridiagonal;
use crate::problem::ProblemSpec;

/// Slope regularization used in gradients for `p < 2`.
pub const EPS_REG: f64 = 1e-12;

fn check_finite(u: &RadialFn) -> Result<()> {
    if u.values().iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFiniteInput("radial function samples"))
    }
}

fn check_nonnegative(u: &RadialFn) -> Result<()> {
    check_finite(u)?;
    match u.values().iter().position(|&v| v < 0.0) {
        Some(i) => Err(Error::NegativeInput(i)),
        None => Ok(()),
    }
}

/// `|s|^{p-2} s`.
#[inline]
pub fn duality(s: f64, p: f64) -> f64 {
    if s == 0.0 {
        0.0
    } else {
        s.abs().powf(p - 2.0) * s
    }
}

#[inline]
fn duality_reg(s: f64, p: f64) -> f64 {
    if p < 2.0 {
        (s * s + EPS_REG * EPS_REG).powf(0.5 * (p - 2.0)) * s
    } else {
        duality(s, p)
    }
}

/// `||u||^p`, the `p`-th power of the discrete `W^{1,p}(B)` norm.
pub fn norm_p_pow(u: &RadialFn, p: f64) -> Result<f64> {
    check_finite(u)?;
    let grid = u.grid();
    let grad: f64 = grid
        .cell_measures()
        .iter()
        .zip(u.slopes())
        .map(|(c, s)| c * s.abs().powf(p))
        .sum();
    let mass: f64 = grid
        .weights()
        .iter()
        .zip(u.values())
        .map(|(w, v)| w * v.abs().powf(p))
        .sum();
    Ok(grad + mass)
}

/// `||u|| = (int_B |grad u|^p + |u|^p)^{1/p}`.
pub fn sobolev_norm_p(u: &RadialFn, p: f64) -> Result<f64> {
    Ok(norm_p_pow(u, p)?.powf(1.0 / p))
}

/// Gradient of `||u||^p` with respect to the node values.
pub fn grad_norm_p(u: &RadialFn, p: f64) -> Result<RadialFn> {
    check_finite(u)?;
    let grid = u.grid();
    let n = grid.intervals() as f64;
    let mut g: Vec<f64> = grid
        .weights()
        .iter()
        .zip(u.values())
        .map(|(w, &v)| p * w * duality_reg(v, p))
        .collect();
    for (k, (c, s)) in grid.cell_measures().iter().zip(u.slopes()).enumerate() {
        let flux = p * c * duality_reg(s, p) * n;
        g[k] -= flux;
        g[k + 1] += flux;
    }
    Ok(RadialFn::from_raw(grid.clone(), g))
}

/// A problem instance bound to its grid, with the weight tabulated at the nodes.
#[derive(Debug, Clone)]
pub struct RadialProblem {
    spec: ProblemSpec,
    grid: Arc<RadialGrid>,
    a: Vec<f64>,
}

impl RadialProblem {
    /// Validates the spec and builds its grid.
    pub fn new(spec: ProblemSpec) -> Result<Self> {
        spec.validate()?;
        let grid = RadialGrid::new(spec.dim, spec.grid_n)?;
        let a = grid.nodes().map(|r| spec.weight.eval(r)).collect();
        Ok(Self { spec, grid, a })
    }

    pub fn spec(&self) -> &ProblemSpec {
        &self.spec
    }

    pub fn grid(&self) -> &Arc<RadialGrid> {
        &self.grid
    }

    pub fn p(&self) -> f64 {
        self.spec.p
    }

    /// `a(r_i)` at every node.
    pub fn weight_at_nodes(&self) -> &[f64] {
        &self.a
    }

    pub fn function<F: FnMut(f64) -> f64>(&self, g: F) -> Result<RadialFn> {
        RadialFn::from_fn(self.grid.clone(), g)
    }

    fn check_grid(&self, u: &RadialFn) -> Result<()> {
        if Arc::ptr_eq(u.grid(), &self.grid) || u.grid().as_ref() == self.grid.as_ref() {
            Ok(())
        } else {
            Err(Error::GridMismatch(
                "function does not live on the problem grid".into(),
            ))
        }
    }

    pub fn norm_p_pow(&self, u: &RadialFn) -> Result<f64> {
        self.check_grid(u)?;
        norm_p_pow(u, self.spec.p)
    }

    pub fn sobolev_norm(&self, u: &RadialFn) -> Result<f64> {
        Ok(self.norm_p_pow(u)?.powf(1.0 / self.spec.p))
    }

    /// `I(u) = int_B a(|x|) F(u)`.
    pub fn functional_i(&self, u: &RadialFn) -> Result<f64> {
        self.check_grid(u)?;
        check_nonnegative(u)?;
        let f = self.spec.nonlin;
        let g: Vec<f64> = self
            .a
            .iter()
            .zip(u.values())
            .map(|(a, &v)| a * f.primitive(v))
            .collect();
        quad(&self.grid, &g)
    }

    /// `J(u) = ||u||^p / p - I(u)`.
    pub fn functional_j(&self, u: &RadialFn) -> Result<f64> {
        Ok(self.norm_p_pow(u)? / self.spec.p - self.functional_i(u)?)
    }

    /// `int_B a(|x|) f(u) u`.
    pub fn nonlinear_pairing(&self, u: &RadialFn) -> Result<f64> {
        self.check_grid(u)?;
        check_nonnegative(u)?;
        let f = self.spec.nonlin;
        let g: Vec<f64> = self
            .a
            .iter()
            .zip(u.values())
            .map(|(a, &v)| a * f.f(v) * v)
            .collect();
        quad(&self.grid, &g)
    }

    /// `J` in the form it takes on the Nehari set:
    /// `(1/p) int a f(u) u - int a F(u)`.
    pub fn functional_j_nehari(&self, u: &RadialFn) -> Result<f64> {
        Ok(self.nonlinear_pairing(u)? / self.spec.p - self.functional_i(u)?)
    }

    /// Multiplier `lambda = 1 / int_B a f(u) u`.
    pub fn lambda_of(&self, u: &RadialFn) -> Result<f64> {
        let den = self.nonlinear_pairing(u)?;
        if den <= 1e-300 {
            return Err(Error::DegenerateDenominator(den));
        }
        Ok(1.0 / den)
    }

    /// `sigma(t) = t^p ||u||^p - int_B a f(tu) tu`.
    pub fn sigma(&self, u: &RadialFn, t: f64) -> Result<f64> {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::NonFiniteInput("sigma scaling parameter"));
        }
        let tu = u.scaled(t);
        Ok(self.norm_p_pow(&tu)? - self.nonlinear_pairing(&tu)?)
    }

    /// `(||u||^p, int a u^{q+1})`: for the power nonlinearity
    /// `sigma(t) = t^p A - t^{q+1} B`.
    pub fn sigma_coefficients(&self, u: &RadialFn) -> Result<(f64, f64)> {
        Ok((self.norm_p_pow(u)?, self.nonlinear_pairing(u)?))
    }

    /// Relative Nehari residual `|‖u‖^p - int a f(u) u| / ‖u‖^p`.
    pub fn nehari_residual(&self, u: &RadialFn) -> Result<f64> {
        let (a, b) = self.sigma_coefficients(u)?;
        if a == 0.0 {
            return Err(Error::ZeroFunction);
        }
        Ok((a - b).abs() / a)
    }

    /// Gradient of `I`: entry `i` is `w_i a(r_i) f(u_i)`.
    pub fn grad_i(&self, u: &RadialFn) -> Result<RadialFn> {
        self.check_grid(u)?;
        check_nonnegative(u)?;
        let f = self.spec.nonlin;
        let g = self
            .grid
            .weights()
            .iter()
            .zip(&self.a)
            .zip(u.values())
            .map(|((w, a), &v)| w * a * f.f(v))
            .collect();
        Ok(RadialFn::from_raw(self.grid.clone(), g))
    }

    /// Gradient of `||u||^p`.
    pub fn grad_norm_p(&self, u: &RadialFn) -> Result<RadialFn> {
        self.check_grid(u)?;
        grad_norm_p(u, self.spec.p)
    }

    /// Gradient of `J`, i.e. `grad ||u||^p / p - grad I`.
    pub fn grad_j(&self, u: &RadialFn) -> Result<RadialFn> {
        let gn = self.grad_norm_p(u)?;
        let gi = self.grad_i(u)?;
        let p = self.spec.p;
        let g = gn
            .values()
            .iter()
            .zip(gi.values())
            .map(|(a, b)| a / p - b)
            .collect();
        Ok(RadialFn::from_raw(self.grid.clone(), g))
    }

    /// Hessian of `||u||^p / p` as a tridiagonal matrix, with slopes and values
    /// floored at `floor` inside the degenerate or singular powers. Used as a
    /// metric for descent directions.
    pub(crate) fn sobolev_metric(&self, u: &RadialFn, floor: f64) -> SymTridiagonal {
        let p = self.spec.p;
        let grid = &self.grid;
        let n = grid.intervals() as f64;
        let mut m = SymTridiagonal::zeros(grid.len());
        let fl2 = floor * floor;
        for (i, (w, &v)) in grid.weights().iter().zip(u.values()).enumerate() {
            m.diag[i] = (p - 1.0) * w * (v * v + fl2).powf(0.5 * (p - 2.0));
        }
        for (k, (c, s)) in grid.cell_measures().iter().zip(u.slopes()).enumerate() {
            let stiff = (p - 1.0) * c * n * n * (s * s + fl2).powf(0.5 * (p - 2.0));
            m.diag[k] += stiff;
            m.diag[k + 1] += stiff;
            m.off[k] = -stiff;
        }
        m
    }
}
