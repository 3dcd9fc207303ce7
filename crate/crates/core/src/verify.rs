//! Post-hoc checks for candidate solutions.
//!
//! The weak residual tests the piecewise-linear interpolant `u_h` of the
//! samples against every hat function `v_j` of its grid, boundary hats
//! included:
//!
//! ```text
//! R_j = int_B |u_h'|^{p-2} u_h' v_j' + |u_h|^{p-2} u_h v_j - lambda a f(u_h) v_j
//! ```
//!
//! The stiffness term is exact (the slope is constant per cell); the other two
//! are integrated with an 8-point Gauss rule per cell instead of the lumped
//! node weights used by the solvers, so a discrete stationary point still has
//! a residual of the size of the discretization error. Each `R_j` is divided
//! by `||v_j|| max(1, ||u||^{p-1})`.
//!
//! # Comparison function
//!
//! For `phi(r) = e^r` one has `phi' = phi`, so for `psi >= 0` with `psi(1) = 0`
//!
//! ```text
//! int_0^1 (phi'^{p-1} psi' + phi^{p-1} psi) r^{N-1} dr
//!   = int_0^1 e^{(p-1)r} (psi' + psi) r^{N-1} dr
//!   = int_0^1 e^{(p-1)r} r^{N-2} (1 - N + (2 - p) r) psi dr
//! ```
//!
//! after integrating `psi'` by parts (the boundary terms vanish because
//! `psi(1) = 0` and `r^{N-1} = 0` at the origin). For `N >= 3` and `p > 1` the
//! factor `1 - N + (2 - p) r` is negative on `[0, 1]`, so `phi` is a strict
//! subsolution of `-Delta_p phi + phi^{p-1} = 0`, and so is `kappa phi` for
//! any `kappa > 0`.

use crate::error::{Error, Result};
use crate::functionals::{duality, norm_p_pow};
use crate::grid::{quad, RadialFn, RadialGrid};
use crate::problem::ProblemSpec;
use crate::quadrature::GaussLegendre;

/// Nodes whose radius lies in this window enter `min_interior_slope`.
pub const INTERIOR: (f64, f64) = (0.05, 0.95);

const RULE_POINTS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct VerifyReport {
    pub weak_residual_max: f64,
    pub min_value: f64,
    /// Smallest slope over cells with both ends in [`INTERIOR`].
    pub min_interior_slope: f64,
    /// `|lambda int a f(u) u - ||u||^p| / ||u||^p`.
    pub lambda_consistency: f64,
    /// `min_i (u_i - kappa e^{r_i})` with `kappa = u(1) / e`.
    pub subsolution_margin: f64,
    /// `||u||_inf / ||u||`.
    pub sup_norm_ratio: f64,
}

fn check_dim(u: &RadialFn, spec: &ProblemSpec) -> Result<()> {
    if u.grid().dim() != spec.dim {
        return Err(Error::GridMismatch(format!(
            "profile lives in dimension {}, problem in {}",
            u.grid().dim(),
            spec.dim
        )));
    }
    Ok(())
}

/// Normalized residuals against the hats of height `basis_scale`. The grid is
/// the one `u` lives on; `spec` supplies `p`, the weight and the nonlinearity.
pub fn hat_residuals(u: &RadialFn, lambda: f64, spec: &ProblemSpec, basis_scale: f64) -> Result<Vec<f64>> {
    if !(lambda.is_finite() && basis_scale.is_finite()) {
        return Err(Error::NonFiniteInput("residual parameters"));
    }
    if basis_scale == 0.0 {
        return Err(Error::ZeroFunction);
    }
    check_dim(u, spec)?;
    let grid = u.grid();
    let (p, n, h) = (spec.p, grid.intervals(), grid.h());
    let sphere = grid.sphere_area();
    let dim = grid.dim() as i32;
    let rule = GaussLegendre::new(RULE_POINTS);
    let vals = u.values();
    let slopes = u.slopes();

    let mut residual = vec![0.0; n + 1];
    let mut norm_pow = vec![0.0; n + 1];
    for k in 0..n {
        let (a, b) = (grid.node(k), grid.node(k + 1));
        let flux = grid.cell_measures()[k] * duality(slopes[k], p) * basis_scale / h;
        residual[k] -= flux;
        residual[k + 1] += flux;
        let stiff = grid.cell_measures()[k] * (basis_scale / h).abs().powf(p);
        norm_pow[k] += stiff;
        norm_pow[k + 1] += stiff;
        for (r, w) in rule.mapped(a, b) {
            let left = (b - r) / h;
            let right = (r - a) / h;
            let uh = vals[k] * left + vals[k + 1] * right;
            let m = sphere * w * r.powi(dim - 1);
            let g = duality(uh, p) - lambda * spec.weight.eval(r) * spec.nonlin.f(uh);
            residual[k] += m * g * left * basis_scale;
            residual[k + 1] += m * g * right * basis_scale;
            norm_pow[k] += m * (basis_scale * left).abs().powf(p);
            norm_pow[k + 1] += m * (basis_scale * right).abs().powf(p);
        }
    }
    let scale = norm_p_pow(u, p)?.powf((p - 1.0) / p).max(1.0);
    let out: Vec<f64> = residual
        .iter()
        .zip(&norm_pow)
        .map(|(r, np)| r.abs() / (np.powf(1.0 / p) * scale))
        .collect();
    if out.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteInput("weak residual"));
    }
    Ok(out)
}

/// Largest normalized residual over the unit hat basis.
pub fn weak_residual(u: &RadialFn, lambda: f64, spec: &ProblemSpec) -> Result<f64> {
    Ok(hat_residuals(u, lambda, spec, 1.0)?
        .into_iter()
        .fold(0.0, f64::max))
}

/// `e^{(p-1)r} r^{N-2} (1 - N + (2 - p) r)`.
pub fn comparison_integrand(dim: usize, p: f64, r: f64) -> f64 {
    let n = dim as f64;
    ((p - 1.0) * r).exp() * r.powi(dim as i32 - 2) * (1.0 - n + (2.0 - p) * r)
}

/// Weak residual of `e^r` against the hat at node `j < n`, in the integrated form.
pub fn comparison_residual(grid: &RadialGrid, p: f64, j: usize) -> f64 {
    hat_integral(grid, j, |r, psi, _| comparison_integrand(grid.dim(), p, r) * psi)
}

/// The same residual straight from the weak form, without integrating by parts.
pub fn comparison_residual_direct(grid: &RadialGrid, p: f64, j: usize) -> f64 {
    hat_integral(grid, j, |r, psi, dpsi| {
        ((p - 1.0) * r).exp() * (dpsi + psi) * r.powi(grid.dim() as i32 - 1)
    })
}

fn hat_integral<F: Fn(f64, f64, f64) -> f64>(grid: &RadialGrid, j: usize, g: F) -> f64 {
    let rule = GaussLegendre::new(RULE_POINTS);
    let h = grid.h();
    let rj = grid.node(j);
    let mut total = 0.0;
    if j > 0 {
        total += rule.integrate(rj - h, rj, |r| g(r, (r - (rj - h)) / h, 1.0 / h));
    }
    if j < grid.intervals() {
        total += rule.integrate(rj, rj + h, |r| g(r, (rj + h - r) / h, -1.0 / h));
    }
    total
}

/// Margin `min_i (u_i - kappa e^{r_i})` over `kappa = u(1) / e`, after checking
/// that `e^r` is a strict subsolution against every hat vanishing at `r = 1`.
pub fn subsolution_check(u: &RadialFn, spec: &ProblemSpec) -> Result<f64> {
    check_dim(u, spec)?;
    let grid = u.grid();
    let n = grid.intervals();
    let un = u.values()[n];
    if un <= 0.0 {
        return Err(Error::ZeroBoundaryValue(un));
    }
    for j in 0..n {
        let res = comparison_residual(grid, spec.p, j);
        if !(res < 0.0) {
            return Err(Error::NotSubsolution(res));
        }
    }
    Ok(u
        .values()
        .iter()
        .zip(grid.nodes())
        .map(|(v, r)| v - un * (r - 1.0).exp())
        .fold(f64::INFINITY, f64::min))
}

/// `<|x|^{p-2} x - |y|^{p-2} y, x - y>` with the Euclidean norm.
pub fn simon_gap(x: &[f64], y: &[f64], p: f64) -> f64 {
    let nx = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    let ny = y.iter().map(|v| v * v).sum::<f64>().sqrt();
    let sx = if nx == 0.0 { 0.0 } else { nx.powf(p - 2.0) };
    let sy = if ny == 0.0 { 0.0 } else { ny.powf(p - 2.0) };
    x.iter()
        .zip(y)
        .map(|(a, b)| (sx * a - sy * b) * (a - b))
        .sum()
}

pub fn min_interior_slope(u: &RadialFn) -> f64 {
    let grid = u.grid();
    u.slopes()
        .iter()
        .enumerate()
        .filter(|(k, _)| grid.node(*k) >= INTERIOR.0 && grid.node(k + 1) <= INTERIOR.1)
        .map(|(_, s)| *s)
        .fold(f64::INFINITY, f64::min)
}

/// `|lambda int a f(u) u - ||u||^p| / ||u||^p`, with the node-weight quadrature.
pub fn lambda_consistency(u: &RadialFn, lambda: f64, spec: &ProblemSpec) -> Result<f64> {
    check_dim(u, spec)?;
    let grid = u.grid();
    let g: Vec<f64> = grid
        .nodes()
        .zip(u.values())
        .map(|(r, &v)| spec.weight.eval(r) * spec.nonlin.f(v) * v)
        .collect();
    let pairing = quad(grid, &g)?;
    let norm = norm_p_pow(u, spec.p)?;
    if norm == 0.0 {
        return Err(Error::ZeroFunction);
    }
    Ok((lambda * pairing - norm).abs() / norm)
}

/// All checks at once.
pub fn verify(u: &RadialFn, lambda: f64, spec: &ProblemSpec) -> Result<VerifyReport> {
    let norm = norm_p_pow(u, spec.p)?.powf(1.0 / spec.p);
    Ok(VerifyReport {
        weak_residual_max: weak_residual(u, lambda, spec)?,
        min_value: u.values().iter().copied().fold(f64::INFINITY, f64::min),
        min_interior_slope: min_interior_slope(u),
        lambda_consistency: lambda_consistency(u, lambda, spec)?,
        subsolution_margin: subsolution_check(u, spec)?,
        sup_norm_ratio: u.sup_norm() / norm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{NonlinSpec, WeightSpec};

    fn constant_spec(n: usize) -> ProblemSpec {
        ProblemSpec::new(3, 2.0, WeightSpec::Constant { c: 1.0 }, NonlinSpec::Power { q: 3.0 })
            .allow_constant_weight(true)
            .with_grid(n)
    }

    #[test]
    fn constant_solution_has_zero_residual() {
        let spec = constant_spec(64);
        let grid = RadialGrid::new(3, 64).unwrap();
        let one = RadialFn::constant(grid, 1.0).unwrap();
        assert!(weak_residual(&one, 1.0, &spec).unwrap() <= 1e-12);
        // about 0.1 h^{3/2} after normalization by the hat norm
        assert!(weak_residual(&one, 1.1, &spec).unwrap() > 1e-4);
    }

    #[test]
    fn scaled_basis_gives_same_residuals() {
        let spec = ProblemSpec::new(3, 3.0, WeightSpec::Power { alpha: 2.0 }, NonlinSpec::Power { q: 3.0 });
        let grid = RadialGrid::new(3, 40).unwrap();
        let u = RadialFn::from_fn(grid, |r| 1.0 + r * r).unwrap();
        let a = hat_residuals(&u, 0.7, &spec, 1.0).unwrap();
        let b = hat_residuals(&u, 0.7, &spec, 2.0).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() <= 1e-12 * x.abs().max(1e-300));
        }
    }

    #[test]
    fn exponential_self_comparison() {
        let spec = constant_spec(50);
        let grid = RadialGrid::new(3, 50).unwrap();
        let u = RadialFn::from_fn(grid, f64::exp).unwrap();
        let margin = subsolution_check(&u, &spec).unwrap();
        assert!(margin.abs() < 1e-14);
    }

    #[test]
    fn zero_boundary_value_rejected() {
        let spec = constant_spec(8);
        let grid = RadialGrid::new(3, 8).unwrap();
        let u = RadialFn::constant(grid, 0.0).unwrap();
        assert!(matches!(subsolution_check(&u, &spec), Err(Error::ZeroBoundaryValue(_))));
    }

    #[test]
    fn comparison_integral_at_midpoint_hat() {
        // N = 3, p = 2: integrand e^r r (-2)
        let grid = RadialGrid::new(3, 4).unwrap();
        let integrated = comparison_residual(&grid, 2.0, 2);
        assert!(integrated < 0.0);
        let g = |r: f64| r.exp() * r * -2.0 * (1.0 - (r - 0.5).abs() / 0.25);
        let gl = GaussLegendre::new(20);
        let manual = gl.integrate(0.25, 0.5, g) + gl.integrate(0.5, 0.75, g);
        assert!((integrated - manual).abs() < 1e-12);
    }

    #[test]
    fn comparison_forms_agree() {
        for (dim, p) in [(3, 2.0), (3, 1.5), (4, 3.0), (5, 1.2)] {
            let grid = RadialGrid::new(dim, 16).unwrap();
            for j in 0..16 {
                let a = comparison_residual(&grid, p, j);
                let b = comparison_residual_direct(&grid, p, j);
                assert!(a < 0.0);
                assert!((a - b).abs() <= 1e-10 * a.abs(), "dim {dim} p {p} j {j}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn simon_gap_examples() {
        assert_eq!(simon_gap(&[1.0, 0.0], &[0.0, 0.0], 2.0), 1.0);
        assert_eq!(simon_gap(&[0.3, -2.0], &[0.3, -2.0], 3.0), 0.0);
        let (x, y) = ([0.4, 1.5, -0.2], [-1.0, 0.25, 0.5]);
        let d2: f64 = x.iter().zip(&y).map(|(a, b)| (a - b) * (a - b)).sum();
        assert!((simon_gap(&x, &y, 2.0) - d2).abs() < 1e-15);
        assert_eq!(simon_gap(&x, &y, 1.5), simon_gap(&y, &x, 1.5));
    }
}
