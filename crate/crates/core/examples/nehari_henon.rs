//! Fixed-lambda problem by Nehari minimization, printing the ground-state energy
//! and a few profile values for several weights.

use radial_plap::functionals::RadialProblem;
use radial_plap::nehari::solve_fixed;
use radial_plap::{NonlinSpec, ProblemSpec, WeightSpec};

fn main() -> radial_plap::Result<()> {
    for weight in [
        WeightSpec::Power { alpha: 2.0 },
        WeightSpec::Affine { beta: 1.0 },
        WeightSpec::Exp { beta: 0.5 },
    ] {
        let spec = ProblemSpec::new(3, 3.0, weight, NonlinSpec::Power { q: 3.0 }).with_grid(512);
        let res = solve_fixed(&spec)?;
        let problem = RadialProblem::new(spec)?;
        println!("{weight:?}");
        println!(
            "  c0 = {:.8}, nehari residual {:.1e}, {} iterations",
            res.c0,
            problem.nehari_residual(&res.u)?,
            res.iterations
        );
        for r in [0.0, 0.25, 0.5, 0.75, 1.0] {
            println!("  u({r:.2}) = {:.6}", res.u.interpolate(r));
        }
    }
    Ok(())
}
