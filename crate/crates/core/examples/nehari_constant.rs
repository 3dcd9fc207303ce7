//! With a constant weight the problem has the constant solution. Starting from a
//! non-constant guess, the Nehari minimization finds it along with its energy.

use std::f64::consts::PI;

use radial_plap::functionals::RadialProblem;
use radial_plap::nehari::solve_fixed_from;
use radial_plap::{NonlinSpec, ProblemSpec, WeightSpec};

fn main() -> radial_plap::Result<()> {
    let spec = ProblemSpec::new(3, 2.0, WeightSpec::Constant { c: 1.0 }, NonlinSpec::Power { q: 3.0 })
        .allow_constant_weight(true)
        .with_grid(513);
    let problem = RadialProblem::new(spec)?;
    let u0 = problem.function(|r| 0.5 + r * r)?;
    let res = solve_fixed_from(&problem, &u0)?;
    let dev = res.u.values().iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max);
    println!("max |u - 1| = {dev:.2e}");
    // |B|/4 for the unit ball in R^3
    println!("c0 = {:.12}, pi/3 = {:.12}", res.c0, PI / 3.0);
    Ok(())
}
