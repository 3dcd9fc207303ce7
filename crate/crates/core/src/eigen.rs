//! Nonlinear eigenvalue mode: maximize `I(u)` over cone functions with
//! `||u||^p = 1`; the multiplier comes out as `lambda = 1 / int_B a f(u) u`.

use crate::descent::{minimize_on_sphere, SphereObjective};
use crate::error::{Error, Result, Unconverged};
use crate::functionals::RadialProblem;
use crate::grid::RadialFn;
use crate::problem::{Mode, ProblemSpec};

#[derive(Debug, Clone)]
pub struct EigenResult {
    /// Maximizer, in the cone and on the unit sphere.
    pub u: RadialFn,
    pub lambda: f64,
    /// The supremum `S = I(u)`.
    pub objective: f64,
    pub iterations: usize,
    pub converged: bool,
    /// `I` along the accepted iterates.
    pub history: Vec<f64>,
}

/// `R(u) = I(u / ||u||)`, minimized as `-R`.
struct Ratio<'a> {
    problem: &'a RadialProblem,
}

impl SphereObjective for Ratio<'_> {
    fn problem(&self) -> &RadialProblem {
        self.problem
    }

    fn value(&self, u: &RadialFn) -> Result<f64> {
        Ok(-ratio(self.problem, u)?)
    }

    fn gradient(&self, u: &RadialFn) -> Result<(Vec<f64>, f64)> {
        let g = ratio_gradient(self.problem, u)?;
        let scale = self.problem.lambda_of(&normalized(self.problem, u)?)?;
        Ok((g.into_iter().map(|v| -v).collect(), scale))
    }
}

fn normalized(problem: &RadialProblem, u: &RadialFn) -> Result<RadialFn> {
    crate::cone::normalize_sphere(u, problem.p())
}

/// `I(u / ||u||)`.
pub fn ratio(problem: &RadialProblem, u: &RadialFn) -> Result<f64> {
    problem.functional_i(&normalized(problem, u)?)
}

/// Gradient of `u -> I(u / ||u||)`:
/// `(grad I(v) - <grad I(v), v> grad ||v||^p / p) / ||u||` with `v = u / ||u||`.
pub fn ratio_gradient(problem: &RadialProblem, u: &RadialFn) -> Result<Vec<f64>> {
    let p = problem.p();
    let nu = problem.sobolev_norm(u)?;
    if nu == 0.0 {
        return Err(Error::ZeroFunction);
    }
    let v = u.scaled(1.0 / nu);
    let gi = problem.grad_i(&v)?;
    let gn = problem.grad_norm_p(&v)?;
    let pairing: f64 = gi.values().iter().zip(v.values()).map(|(a, b)| a * b).sum();
    Ok(gi
        .values()
        .iter()
        .zip(gn.values())
        .map(|(a, b)| (a - pairing * b / p) / nu)
        .collect())
}

/// Default starting profile `1 + r`.
pub fn default_initial_guess(problem: &RadialProblem) -> Result<RadialFn> {
    problem.function(|r| 1.0 + r)
}

pub fn solve_eigen(spec: &ProblemSpec) -> Result<EigenResult> {
    let problem = RadialProblem::new(spec.clone())?;
    let u0 = default_initial_guess(&problem)?;
    solve_eigen_from(&problem, &u0)
}

/// Projected ascent from a caller-supplied starting profile.
pub fn solve_eigen_from(problem: &RadialProblem, u0: &RadialFn) -> Result<EigenResult> {
    if problem.spec().mode != Mode::Eigen {
        return Err(Error::Inadmissible("solve_eigen requires Eigen mode".into()));
    }
    let obj = Ratio { problem };
    let out = minimize_on_sphere(&obj, u0).map_err(|e| match e {
        Error::NotConverged(b) => Error::NotConverged(Box::new(Unconverged {
            objective: -b.objective,
            ..*b
        })),
        e => e,
    })?;
    let lambda = problem.lambda_of(&out.u)?;
    let objective = problem.functional_i(&out.u)?;
    Ok(EigenResult {
        u: out.u,
        lambda,
        objective,
        iterations: out.iterations,
        converged: true,
        history: out.history.into_iter().map(|v| -v).collect(),
    })
}
