//! Projection onto nonnegative nondecreasing node vectors (weighted pool adjacent
//! violators followed by a clamp at zero).

use radial_plap::cone::{is_member, project_cone, project_monotone_nonneg};
use radial_plap::{RadialFn, RadialGrid};

fn main() -> radial_plap::Result<()> {
    for v in [vec![0.0, 1.0, 2.0], vec![3.0, 1.0, 2.0], vec![-1.0, 0.5], vec![2.0, -3.0, 1.0, 0.0]] {
        let x = project_monotone_nonneg(&v, &vec![1.0; v.len()])?;
        println!("{v:?} -> {x:?}");
    }

    let grid = RadialGrid::new(3, 8)?;
    let v = RadialFn::from_fn(grid, |r| (6.0 * r).sin() + r)?;
    let (x, cert) = project_cone(&v)?;
    println!("input:     {:.3?}", v.values());
    println!("projected: {:.3?}", x.values());
    println!("certificate holds: {}, member: {}", cert.holds(), is_member(&x, 0.0));
    Ok(())
}
