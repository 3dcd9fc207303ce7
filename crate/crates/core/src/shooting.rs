//! Shooting oracle for the radial ODE.
//!
//! With the flux `w = r^{N-1} |u'|^{p-2} u'`, radial solutions solve the
//! first-order system
//!
//! ```text
//! u' = sign(w) (|w| r^{1-N})^{1/(p-1)}
//! w' = r^{N-1} (|u|^{p-2} u - lambda a(r) f(u))
//! ```
//!
//! with `u(0) = d`, `w(0) = 0`. The Neumann condition is `w(1) = 0`; the
//! initial height `d` is found by root finding on the terminal flux. This path
//! shares nothing with the variational discretization except the problem data.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::functionals::{duality, RadialProblem};
use crate::grid::{RadialFn, RadialGrid};
use crate::quadrature::GaussLegendre;

/// Default tolerance on `|w(1)|`.
pub const SHOOT_TOL: f64 = 1e-10;
const MAX_ROOT_ITER: usize = 200;
const BLOW_UP: f64 = 1e6;
/// Below this radius cells are subdivided, see [`substeps`].
const REFINE_RADIUS: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootState {
    pub r: f64,
    pub u: f64,
    pub w: f64,
}

/// States at the grid nodes `r_i = i / n`.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub states: Vec<ShootState>,
}

impl Trajectory {
    pub fn terminal_flux(&self) -> f64 {
        self.states.last().map_or(0.0, |s| s.w)
    }

    pub fn terminal_value(&self) -> f64 {
        self.states.last().map_or(0.0, |s| s.u)
    }

    /// Slope recovered from the flux, `u' = sign(w) (|w| r^{1-N})^{1/(p-1)}`.
    pub fn slope(&self, i: usize, dim: usize, p: f64) -> f64 {
        let s = self.states[i];
        if s.r == 0.0 {
            0.0
        } else {
            inverse_duality(s.w * s.r.powi(1 - dim as i32), p)
        }
    }
}

#[derive(Debug, Clone)]
pub struct ShootResult {
    /// Initial height `u(0)`.
    pub d: f64,
    /// `w(1)`, zero for an exact Neumann solution.
    pub terminal_flux: f64,
    pub profile: RadialFn,
    pub rootfind_iterations: usize,
    pub trajectory: Trajectory,
}

/// `sign(s) |s|^{1/(p-1)}`, the inverse of `s -> |s|^{p-2} s`. Exactly zero at zero.
#[inline]
fn inverse_duality(s: f64, p: f64) -> f64 {
    if s == 0.0 {
        0.0
    } else {
        s.signum() * s.abs().powf(1.0 / (p - 1.0))
    }
}

struct Rhs<'a> {
    problem: &'a RadialProblem,
    lambda: f64,
}

impl Rhs<'_> {
    fn eval(&self, r: f64, u: f64, w: f64) -> (f64, f64) {
        let spec = self.problem.spec();
        let dim = spec.dim as i32;
        let du = inverse_duality(w * r.powi(1 - dim), spec.p);
        let source = duality(u, spec.p) - self.lambda * spec.weight.eval(r) * spec.nonlin.f(u);
        (du, r.powi(dim - 1) * source)
    }

    /// State at a small radius from the expansion around the origin: the flux
    /// integrates the source with `u` frozen at `d`, and `u` integrates the
    /// resulting slope.
    fn series_start(&self, d: f64, r: f64) -> ShootState {
        let spec = self.problem.spec();
        let dim = spec.dim;
        let flux = |s: f64| {
            duality(d, spec.p) * s.powi(dim as i32) / dim as f64
                - self.lambda * spec.nonlin.f(d) * spec.weight.radial_moment(dim, s)
        };
        let rule = GaussLegendre::new(8);
        let rise = rule.integrate(0.0, r, |s| {
            inverse_duality(flux(s) * s.powi(1 - dim as i32), spec.p)
        });
        ShootState {
            r,
            u: d + rise,
            w: flux(r),
        }
    }

    fn rk4(&self, s: ShootState, h: f64) -> ShootState {
        let (k1u, k1w) = self.eval(s.r, s.u, s.w);
        let (k2u, k2w) = self.eval(s.r + 0.5 * h, s.u + 0.5 * h * k1u, s.w + 0.5 * h * k1w);
        let (k3u, k3w) = self.eval(s.r + 0.5 * h, s.u + 0.5 * h * k2u, s.w + 0.5 * h * k2w);
        let (k4u, k4w) = self.eval(s.r + h, s.u + h * k3u, s.w + h * k3w);
        ShootState {
            r: s.r + h,
            u: s.u + h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u),
            w: s.w + h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w),
        }
    }
}

/// RK4 substeps for a grid cell starting at radius `a`. The coefficient
/// `r^{1-N}` makes the local error of a step of length `delta` at radius `r`
/// scale like `delta^5 r^{-3}`; steps of length `h min(1, r / r0)` keep the
/// accumulated error at `O(h^4 / r0^2)`.
fn substeps(a: f64) -> usize {
    (REFINE_RADIUS / a).ceil().max(1.0) as usize
}

/// Integrate from the origin to `r = 1` with classical RK4 at step `1 / n`
/// (subdivided near the origin), starting from the series expansion at
/// `r = 1 / (4n)`. Results are recorded at the grid nodes.
pub fn integrate_ivp(problem: &RadialProblem, lambda: f64, d: f64) -> Result<Trajectory> {
    if !(d.is_finite() && lambda.is_finite()) {
        return Err(Error::NonFiniteInput("shooting parameters"));
    }
    if d <= 0.0 || lambda <= 0.0 {
        return Err(Error::Inadmissible(format!(
            "shooting needs d > 0 and lambda > 0 (d = {d}, lambda = {lambda})"
        )));
    }
    let rhs = Rhs { problem, lambda };
    let n = problem.grid().intervals();
    let h = 1.0 / n as f64;
    let r_start = 0.25 * h;

    let mut states = Vec::with_capacity(n + 1);
    states.push(ShootState { r: 0.0, u: d, w: 0.0 });
    let mut s = rhs.series_start(d, r_start);
    for i in 1..=n {
        let m = substeps(s.r);
        let dr = (i as f64 * h - s.r) / m as f64;
        for _ in 0..m {
            s = rhs.rk4(s, dr);
        }
        // Pin the node radius so rounding in r does not drift.
        s.r = i as f64 * h;
        if !(s.u.is_finite() && s.w.is_finite()) || s.u.abs() > BLOW_UP {
            return Err(Error::BlowUp(s.r));
        }
        states.push(s);
    }
    Ok(Trajectory { states })
}

/// `w(1)` as a function of the initial height.
pub fn terminal_flux(problem: &RadialProblem, lambda: f64, d: f64) -> Result<f64> {
    Ok(integrate_ivp(problem, lambda, d)?.terminal_flux())
}

/// Illinois false position on `d`, guarded by bisection, until `|w(1)| <= SHOOT_TOL`.
pub fn shoot(problem: &RadialProblem, lambda: f64, bracket: (f64, f64)) -> Result<ShootResult> {
    let (mut lo, mut hi) = bracket;
    if !(lo < hi) {
        return Err(Error::NoSignChange { lo, hi });
    }
    let mut f_lo = terminal_flux(problem, lambda, lo)?;
    let mut f_hi = terminal_flux(problem, lambda, hi)?;
    if f_lo == 0.0 {
        return finish(problem, lambda, lo, 0);
    }
    if f_hi == 0.0 {
        return finish(problem, lambda, hi, 0);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::NoSignChange { lo, hi });
    }

    let mut side = 0i8;
    let mut best_f = if f_lo.abs() < f_hi.abs() { f_lo } else { f_hi };
    for it in 1..=MAX_ROOT_ITER {
        let mut d = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
        // Fall back to bisection when the secant point hugs an endpoint.
        let width = hi - lo;
        if !(d > lo + 1e-3 * width && d < hi - 1e-3 * width) || it % 8 == 0 {
            d = 0.5 * (lo + hi);
        }
        let f = terminal_flux(problem, lambda, d)?;
        if f.abs() < best_f.abs() {
            best_f = f;
        }
        if f.abs() <= SHOOT_TOL {
            return finish(problem, lambda, d, it);
        }
        if f.signum() == f_lo.signum() {
            lo = d;
            f_lo = f;
            if side == -1 {
                f_hi *= 0.5;
            }
            side = -1;
        } else {
            hi = d;
            f_hi = f;
            if side == 1 {
                f_lo *= 0.5;
            }
            side = 1;
        }
        if hi - lo <= 4.0 * f64::EPSILON * hi {
            break;
        }
    }
    Err(Error::ShootNotConverged(best_f))
}

fn finish(problem: &RadialProblem, lambda: f64, d: f64, iterations: usize) -> Result<ShootResult> {
    let trajectory = integrate_ivp(problem, lambda, d)?;
    let values = trajectory.states.iter().map(|s| s.u).collect();
    let profile = RadialFn::new(problem.grid().clone(), values)?;
    Ok(ShootResult {
        d,
        terminal_flux: trajectory.terminal_flux(),
        profile,
        rootfind_iterations: iterations,
        trajectory,
    })
}

/// Sign changes of `w(1)` over `samples` log-spaced heights in `[d_min, d_max]`.
/// Heights whose trajectories blow up are skipped.
pub fn scan_brackets(
    problem: &RadialProblem,
    lambda: f64,
    d_min: f64,
    d_max: f64,
    samples: usize,
) -> Vec<(f64, f64)> {
    let samples = samples.max(2);
    let ratio = (d_max / d_min).ln() / (samples - 1) as f64;
    let mut out = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for k in 0..samples {
        let d = d_min * (ratio * k as f64).exp();
        match terminal_flux(problem, lambda, d) {
            Ok(f) => {
                if let Some((pd, pf)) = prev {
                    if pf.signum() != f.signum() || f == 0.0 {
                        out.push((pd, d));
                    }
                }
                prev = Some((d, f));
            }
            Err(_) => prev = None,
        }
    }
    out
}

/// Resample a profile onto a grid of the same dimension by linear interpolation.
pub fn resample(profile: &RadialFn, grid: &Arc<RadialGrid>) -> Result<RadialFn> {
    RadialFn::from_fn(grid.clone(), |r| profile.interpolate(r))
}
