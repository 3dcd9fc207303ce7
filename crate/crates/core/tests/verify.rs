use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use radial_plap::eigen::solve_eigen;
use radial_plap::nehari::solve_fixed;
use radial_plap::verify::{lambda_consistency, simon_gap, subsolution_check, verify, weak_residual};
use radial_plap::{Mode, NonlinSpec, ProblemSpec, RadialFn, WeightSpec};

fn henon(p: f64, n: usize) -> ProblemSpec {
    ProblemSpec::new(3, p, WeightSpec::Power { alpha: 2.0 }, NonlinSpec::Power { q: 3.0 }).with_grid(n)
}

#[test]
fn perturbation_increases_the_residual() {
    let spec = henon(2.0, 257);
    let sol = solve_fixed(&spec).unwrap();
    let base = weak_residual(&sol.u, 1.0, &spec).unwrap();
    let bumped = RadialFn::from_fn(sol.u.grid().clone(), |r| sol.u.interpolate(r) + 0.01 * r).unwrap();
    assert!(weak_residual(&bumped, 1.0, &spec).unwrap() > base);
}

#[test]
fn residual_decreases_under_refinement() {
    for p in [2.0, 3.0] {
        let r = |n: usize| {
            let spec = henon(p, n);
            weak_residual(&solve_fixed(&spec).unwrap().u, 1.0, &spec).unwrap()
        };
        let (coarse, fine) = (r(513), r(1025));
        assert!(fine <= 1e-3);
        assert!(coarse / fine >= 1.8, "p = {p}: {coarse} -> {fine}");
    }
}

#[test]
fn solver_outputs_dominate_the_comparison_function() {
    for p in [1.5, 2.0, 3.0] {
        let spec = henon(p, 256);
        let fixed = solve_fixed(&spec).unwrap();
        assert!(subsolution_check(&fixed.u, &spec).unwrap() >= 0.0);
        let spec = spec.with_mode(Mode::Eigen);
        let eig = solve_eigen(&spec).unwrap();
        assert!(subsolution_check(&eig.u, &spec).unwrap() >= 0.0);
        let report = verify(&eig.u, eig.lambda, &spec).unwrap();
        assert!(report.lambda_consistency <= 1e-10);
        assert!(report.weak_residual_max >= 0.0);
        assert!(report.min_value > 0.0 && report.min_interior_slope > 0.0);
        for v in [
            report.weak_residual_max,
            report.min_value,
            report.min_interior_slope,
            report.lambda_consistency,
            report.subsolution_margin,
            report.sup_norm_ratio,
        ] {
            assert!(v.is_finite());
        }
    }
}

#[test]
fn lambda_consistency_detects_a_wrong_multiplier() {
    let spec = henon(2.0, 128).with_mode(Mode::Eigen);
    let eig = solve_eigen(&spec).unwrap();
    assert!(lambda_consistency(&eig.u, eig.lambda, &spec).unwrap() <= 1e-10);
    assert!(lambda_consistency(&eig.u, 1.01 * eig.lambda, &spec).unwrap() > 1e-3);
}

fn sample_ball(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    loop {
        let x: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        if x.iter().map(|v| v * v).sum::<f64>() <= 1.0 {
            return x;
        }
    }
}

#[test]
fn simon_gap_sampling() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for p in [1.5, 2.0, 3.0] {
        let mut inf_ratio = f64::INFINITY;
        for _ in 0..10_000 {
            let x = sample_ball(&mut rng, 3);
            let y = sample_ball(&mut rng, 3);
            let gap = simon_gap(&x, &y, p);
            let dist = x.iter().zip(&y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
            assert!(gap > 0.0);
            assert_eq!(gap, simon_gap(&y, &x, p));
            if p == 2.0 {
                assert!((gap - dist * dist).abs() <= 1e-14);
            }
            inf_ratio = inf_ratio.min(gap / dist.powf(p));
        }
        if p == 3.0 {
            assert!(inf_ratio >= 0.2, "{inf_ratio}");
        }
    }
    assert_eq!(simon_gap(&[0.5, 0.5], &[0.5, 0.5], 1.5), 0.0);
}
