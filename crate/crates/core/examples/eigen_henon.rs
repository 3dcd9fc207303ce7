//! Nonlinear eigenvalue problem for the Henon weight `a(r) = r^2`, `f(s) = s^3`:
//! maximize `I` on the unit sphere of the cone and read off the multiplier.

use radial_plap::eigen::solve_eigen;
use radial_plap::verify::weak_residual;
use radial_plap::{Mode, NonlinSpec, ProblemSpec, WeightSpec};

fn main() -> radial_plap::Result<()> {
    for p in [1.5, 2.0, 3.0] {
        let spec = ProblemSpec::new(3, p, WeightSpec::Power { alpha: 2.0 }, NonlinSpec::Power { q: 3.0 })
            .with_mode(Mode::Eigen)
            .with_grid(512);
        let res = solve_eigen(&spec)?;
        let v = res.u.values();
        println!(
            "p = {p}: lambda = {:.6}, S = {:.6}, u(0) = {:.4}, u(1) = {:.4}, {} iterations, residual {:.1e}",
            res.lambda,
            res.objective,
            v[0],
            v[v.len() - 1],
            res.iterations,
            weak_residual(&res.u, res.lambda, &spec)?
        );
    }
    Ok(())
}
