//! Post-hoc checks on a computed solution: weak residual against hat functions,
//! positivity, interior slope, and the comparison with `u(1) e^{r-1}`.

use radial_plap::nehari::solve_fixed;
use radial_plap::verify::{simon_gap, verify};
use radial_plap::{NonlinSpec, ProblemSpec, RadialFn, WeightSpec};

fn main() -> radial_plap::Result<()> {
    for n in [257, 513, 1025] {
        let spec = ProblemSpec::new(3, 2.0, WeightSpec::Power { alpha: 2.0 }, NonlinSpec::Power { q: 3.0 }).with_grid(n);
        let u = solve_fixed(&spec)?.u;
        let report = verify(&u, 1.0, &spec)?;
        println!("n = {n}: {}", serde_json::to_string(&report).expect("serializable"));
    }

    // a perturbed profile is no longer a solution
    let spec = ProblemSpec::new(3, 2.0, WeightSpec::Power { alpha: 2.0 }, NonlinSpec::Power { q: 3.0 }).with_grid(513);
    let u = solve_fixed(&spec)?.u;
    let bumped = RadialFn::from_fn(u.grid().clone(), |r| u.interpolate(r) + 0.01 * r)?;
    println!("perturbed residual: {:.2e}", verify(&bumped, 1.0, &spec)?.weak_residual_max);

    let (x, y) = ([1.0, 0.0, 0.0], [0.0, 0.5, 0.0]);
    for p in [1.5, 2.0, 3.0] {
        println!("simon gap p = {p}: {:.6}", simon_gap(&x, &y, p));
    }
    Ok(())
}
