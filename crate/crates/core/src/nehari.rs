//! Fixed-multiplier mode: minimize `J` over the Nehari set intersected with
//! the cone.
//!
//! Every nonzero cone function `u` has a unique `t0(u) > 0` with `t0(u) u` on
//! the Nehari set, the positive root of `sigma(t) = t^p ||u||^p - int a f(tu) tu`.
//! The solver therefore minimizes the scale-invariant `E(u) = J(t0(u) u)` over
//! the unit sphere of the cone. Because `d/dt J(tu) = sigma(t) / t` vanishes at
//! `t0`, the gradient of `E` is `t0 * grad J(t0 u)`.

use crate::descent::{direction, minimize_on_sphere, retract, SphereObjective};
use crate::error::{Error, Result, Unconverged};
use crate::functionals::RadialProblem;
use crate::grid::RadialFn;
use crate::problem::{Mode, NonlinSpec, ProblemSpec};

#[derive(Debug, Clone)]
pub struct NehariResult {
    /// Minimizer, already scaled onto the Nehari set.
    pub u: RadialFn,
    /// `c0 = J(u)`.
    pub c0: f64,
    pub t0_last: f64,
    pub iterations: usize,
    pub converged: bool,
    /// `E` along the accepted iterates.
    pub history: Vec<f64>,
}

fn coefficients(problem: &RadialProblem, u: &RadialFn) -> Result<(f64, f64)> {
    let (a, b) = problem.sigma_coefficients(u)?;
    if a == 0.0 || b == 0.0 {
        return Err(Error::ZeroFunction);
    }
    Ok((a, b))
}

/// `t0 = (||u||^p / int a u^{q+1})^{1/(q+1-p)}` for `f(s) = s^q`.
pub fn t0_closed_form(problem: &RadialProblem, u: &RadialFn) -> Result<f64> {
    let (a, b) = coefficients(problem, u)?;
    let NonlinSpec::Power { q } = problem.spec().nonlin;
    Ok((a / b).powf(1.0 / (q + 1.0 - problem.p())))
}

/// Root of `sigma` by bracketing and bisection, evaluating `sigma` from the
/// quadrature at every trial point.
pub fn t0_bisection(problem: &RadialProblem, u: &RadialFn) -> Result<f64> {
    coefficients(problem, u)?;
    let sigma = |t: f64| problem.sigma(u, t);
    let (mut lo, mut hi);
    if sigma(1.0)? > 0.0 {
        lo = 1.0;
        hi = 2.0;
        while sigma(hi)? > 0.0 {
            lo = hi;
            hi *= 2.0;
            if hi > 1e30 {
                return Err(Error::BracketFailure);
            }
        }
    } else {
        hi = 1.0;
        lo = 0.5;
        while sigma(lo)? <= 0.0 {
            hi = lo;
            lo *= 0.5;
            if lo < 1e-30 {
                return Err(Error::BracketFailure);
            }
        }
    }
    // sigma(lo) > 0 >= sigma(hi)
    while hi - lo > 1e-15 * hi {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sigma(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Scaling onto the Nehari set: closed form, cross-checked by bisection.
pub fn t0_map(problem: &RadialProblem, u: &RadialFn) -> Result<f64> {
    let closed = t0_closed_form(problem, u)?;
    let bisected = t0_bisection(problem, u)?;
    if (closed - bisected).abs() > 1e-12 * closed.max(1.0) {
        return Err(Error::RootMismatch { closed, bisected });
    }
    Ok(closed)
}

/// `E(u) = J(t0(u) u)`.
pub fn nehari_energy(problem: &RadialProblem, u: &RadialFn) -> Result<f64> {
    let t0 = t0_closed_form(problem, u)?;
    problem.functional_j(&u.scaled(t0))
}

/// `grad E(u) = t0 grad J(t0 u)`.
pub fn nehari_energy_gradient(problem: &RadialProblem, u: &RadialFn) -> Result<Vec<f64>> {
    let t0 = t0_closed_form(problem, u)?;
    let g = problem.grad_j(&u.scaled(t0))?;
    Ok(g.values().iter().map(|v| t0 * v).collect())
}

struct NehariEnergy<'a> {
    problem: &'a RadialProblem,
}

impl SphereObjective for NehariEnergy<'_> {
    fn problem(&self) -> &RadialProblem {
        self.problem
    }

    fn value(&self, u: &RadialFn) -> Result<f64> {
        nehari_energy(self.problem, u)
    }

    fn gradient(&self, u: &RadialFn) -> Result<(Vec<f64>, f64)> {
        let t0 = t0_closed_form(self.problem, u)?;
        let g = self.problem.grad_j(&u.scaled(t0))?;
        let g = g.values().iter().map(|v| t0 * v).collect();
        Ok((g, t0.powf(-self.problem.p())))
    }
}

/// Relative error between the envelope gradient of `E` and a finite difference
/// of `E`, along the preconditioned descent direction at `u`.
pub fn envelope_gradient_error(problem: &RadialProblem, u: &RadialFn) -> Result<f64> {
    let obj = NehariEnergy { problem };
    let u = retract(u, problem.p())?;
    let (g, d) = direction(&obj, &u)?;
    let analytic: f64 = g.iter().zip(&d).map(|(a, b)| a * b).sum();
    let dmax = d.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if dmax == 0.0 {
        return Ok(0.0);
    }
    let h = 1e-5 * u.sup_norm() / dmax;
    let shifted = |s: f64| -> Result<Option<f64>> {
        let vals: Vec<f64> = u.values().iter().zip(&d).map(|(a, b)| a + s * b).collect();
        if vals.iter().any(|&v| v < 0.0) {
            return Ok(None);
        }
        nehari_energy(problem, &RadialFn::new(u.grid().clone(), vals)?).map(Some)
    };
    let e0 = nehari_energy(problem, &u)?;
    let fd = match (shifted(h)?, shifted(-h)?) {
        (Some(ep), Some(em)) => (ep - em) / (2.0 * h),
        (Some(ep), None) => (ep - e0) / h,
        _ => return Err(Error::NegativeInput(0)),
    };
    let scale = analytic.abs().max(fd.abs()).max(1e-6 * e0.abs());
    Ok((fd - analytic).abs() / scale)
}

pub fn default_initial_guess(problem: &RadialProblem) -> Result<RadialFn> {
    problem.function(|r| 1.0 + r)
}

pub fn solve_fixed(spec: &ProblemSpec) -> Result<NehariResult> {
    let problem = RadialProblem::new(spec.clone())?;
    let u0 = default_initial_guess(&problem)?;
    solve_fixed_from(&problem, &u0)
}

pub fn solve_fixed_from(problem: &RadialProblem, u0: &RadialFn) -> Result<NehariResult> {
    if problem.spec().mode != Mode::Fixed {
        return Err(Error::Inadmissible("solve_fixed requires Fixed mode".into()));
    }
    let check = envelope_gradient_error(problem, u0)?;
    if check > 1e-4 {
        return Err(Error::GradientInconsistency(check));
    }

    let obj = NehariEnergy { problem };
    let out = minimize_on_sphere(&obj, u0).map_err(|e| match e {
        Error::NotConverged(b) => match t0_closed_form(problem, &b.u) {
            Ok(t0) => Error::NotConverged(Box::new(Unconverged {
                u: b.u.scaled(t0),
                ..*b
            })),
            Err(e) => e,
        },
        e => e,
    })?;
    let t0 = t0_map(problem, &out.u)?;
    let u = out.u.scaled(t0);
    let c0 = problem.functional_j(&u)?;
    Ok(NehariResult {
        u,
        c0,
        t0_last: t0,
        iterations: out.iterations,
        converged: true,
        history: out.history,
    })
}
