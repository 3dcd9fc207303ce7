//! Independent check of the variational solution: shoot on the initial height
//! `u(0) = d` until the flux at the boundary vanishes, then compare profiles.

use radial_plap::functionals::RadialProblem;
use radial_plap::nehari::solve_fixed;
use radial_plap::shooting::{scan_brackets, shoot, terminal_flux};
use radial_plap::{NonlinSpec, ProblemSpec, WeightSpec};

fn main() -> radial_plap::Result<()> {
    let spec = ProblemSpec::new(3, 2.0, WeightSpec::Power { alpha: 2.0 }, NonlinSpec::Power { q: 3.0 }).with_grid(1025);
    let problem = RadialProblem::new(spec.clone())?;

    for d in [0.5, 1.0, 1.2, 1.5, 2.0] {
        println!("w(1; d = {d}) = {:+.6}", terminal_flux(&problem, 1.0, d)?);
    }
    let brackets = scan_brackets(&problem, 1.0, 1e-3, 10.0, 200);
    println!("sign changes in [1e-3, 10]: {brackets:?}");

    let shot = shoot(&problem, 1.0, brackets[0])?;
    let var = solve_fixed(&spec)?;
    println!(
        "d = {:.10}, w(1) = {:.1e}, |u_shoot - u_nehari|_inf = {:.2e}",
        shot.d,
        shot.terminal_flux,
        shot.profile.max_abs_diff(&var.u)
    );
    Ok(())
}
