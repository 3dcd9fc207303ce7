//! Projected descent on the unit sphere of the cone.
//!
//! Both solvers minimize a functional that is invariant under positive scaling
//! (`-I(u/||u||)` and `J(t0(u) u)`). Each iteration preconditions the gradient
//! by the Hessian of `||u||^p / p` (a tridiagonal Sobolev metric), takes a step,
//! projects onto the cone, renormalizes, and backtracks until an Armijo decrease
//! holds.

use crate::cone::{normalize_sphere, project_cone};
use crate::error::{Error, Result, Unconverged};
use crate::functionals::RadialProblem;
use crate::grid::RadialFn;

const ARMIJO: f64 = 1e-4;
const GROWTH: f64 = 1.5;
const MAX_STEP: f64 = 16.0;
const MIN_STEP: f64 = 1e-14;
/// Relative-improvement test must hold this many iterations in a row.
const QUIET_ITERATIONS: usize = 5;

pub(crate) trait SphereObjective {
    fn problem(&self) -> &RadialProblem;

    /// Value to minimize at a cone point on the unit sphere.
    fn value(&self, u: &RadialFn) -> Result<f64>;

    /// Gradient at `u` together with the factor that turns the metric-scaled
    /// gradient into a Newton-sized step.
    fn gradient(&self, u: &RadialFn) -> Result<(Vec<f64>, f64)>;
}

#[derive(Debug, Clone)]
pub(crate) struct DescentOutcome {
    pub u: RadialFn,
    pub iterations: usize,
    pub history: Vec<f64>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Feasible point on the sphere.
pub(crate) fn retract(u: &RadialFn, p: f64) -> Result<RadialFn> {
    let (x, _) = project_cone(u)?;
    normalize_sphere(&x, p)
}

/// Metric-preconditioned descent direction at `u`.
pub(crate) fn direction<O: SphereObjective>(obj: &O, u: &RadialFn) -> Result<(Vec<f64>, Vec<f64>)> {
    let (g, scale) = obj.gradient(u)?;
    let floor = 1e-3 * u.sup_norm().max(f64::MIN_POSITIVE);
    let metric = obj.problem().sobolev_metric(u, floor);
    let mut d = metric
        .solve(&g)
        .ok_or(Error::NonFiniteInput("singular Sobolev metric"))?;
    for v in &mut d {
        *v *= -scale;
    }
    if d.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteInput("descent direction"));
    }
    Ok((g, d))
}

fn step(u: &RadialFn, d: &[f64], s: f64, p: f64) -> Result<RadialFn> {
    let moved: Vec<f64> = u.values().iter().zip(d).map(|(a, b)| a + s * b).collect();
    retract(&RadialFn::new(u.grid().clone(), moved)?, p)
}

pub(crate) fn minimize_on_sphere<O: SphereObjective>(obj: &O, u0: &RadialFn) -> Result<DescentOutcome> {
    let spec = obj.problem().spec();
    let (p, tol, max_iter) = (spec.p, spec.tol, spec.max_iter);

    let mut u = retract(u0, p)?;
    let mut value = obj.value(&u)?;
    let mut history = vec![value];
    let mut s: f64 = 1.0;
    let mut quiet = 0usize;

    for iteration in 1..=max_iter {
        let (g, d) = direction(obj, &u)?;

        let mut accepted = None;
        while s >= MIN_STEP {
            let cand = step(&u, &d, s, p)?;
            let v = obj.value(&cand)?;
            let diff: Vec<f64> = cand.values().iter().zip(u.values()).map(|(a, b)| a - b).collect();
            let predicted = -dot(&g, &diff);
            let resolution = 64.0 * f64::EPSILON * value.abs();
            let ok = v.is_finite()
                && if predicted > resolution {
                    v <= value - ARMIJO * predicted
                } else {
                    v <= value
                };
            if ok {
                accepted = Some((cand, v));
                break;
            }
            s *= 0.5;
        }

        let Some((cand, v)) = accepted else {
            // No decrease is resolvable in floating point. Accept convergence
            // only if the full preconditioned step is already negligible.
            let full = step(&u, &d, 1.0, p)?;
            if full.max_abs_diff(&u) < tol {
                return Ok(DescentOutcome {
                    u,
                    iterations: iteration,
                    history,
                });
            }
            return Err(Error::NotConverged(Box::new(Unconverged {
                u,
                objective: value,
                iterations: iteration,
            })));
        };

        let step_inf = cand.max_abs_diff(&u);
        let rel = (value - v) / value.abs().max(f64::MIN_POSITIVE);
        quiet = if rel < tol { quiet + 1 } else { 0 };
        u = cand;
        value = v;
        history.push(value);
        s = (s * GROWTH).min(MAX_STEP);

        if quiet >= QUIET_ITERATIONS && step_inf < tol {
            return Ok(DescentOutcome {
                u,
                iterations: iteration,
                history,
            });
        }
    }

    Err(Error::NotConverged(Box::new(Unconverged {
        u,
        objective: value,
        iterations: max_iter,
    })))
}
