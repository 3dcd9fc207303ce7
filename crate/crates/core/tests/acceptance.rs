//! One line per acceptance criterion; exits nonzero if any fails.

use std::f64::consts::PI;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use radial_plap::cone::{is_member, project_cone, project_monotone_nonneg};
use radial_plap::eigen::solve_eigen;
use radial_plap::functionals::RadialProblem;
use radial_plap::nehari::{solve_fixed, solve_fixed_from, t0_bisection, t0_closed_form, t0_map};
use radial_plap::shooting::{integrate_ivp, scan_brackets, shoot};
use radial_plap::verify::{min_interior_slope, simon_gap, weak_residual};
use radial_plap::{Mode, NonlinSpec, ProblemSpec, RadialFn, RadialGrid, WeightSpec};

mod common;

type Check = Result<String, String>;

fn ensure(ok: bool, detail: String) -> Check {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn henon(p: f64, n: usize) -> ProblemSpec {
    ProblemSpec::new(3, p, WeightSpec::Power { alpha: 2.0 }, NonlinSpec::Power { q: 3.0 }).with_grid(n)
}

fn constant_recovery() -> Check {
    let start = Instant::now();
    let spec = ProblemSpec::new(3, 2.0, WeightSpec::Constant { c: 1.0 }, NonlinSpec::Power { q: 3.0 })
        .allow_constant_weight(true)
        .with_grid(513);
    let pr = RadialProblem::new(spec).map_err(|e| e.to_string())?;
    let u0 = pr.function(|r| 0.5 + r * r).map_err(|e| e.to_string())?;
    let res = solve_fixed_from(&pr, &u0).map_err(|e| e.to_string())?;
    let secs = start.elapsed().as_secs_f64();
    let dist = res.u.values().iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max);
    let gap = (res.c0 - PI / 3.0).abs();
    ensure(
        res.converged && dist <= 1e-4 && gap <= 1e-3 && secs < 10.0,
        format!("|u-1|_inf = {dist:.2e}, |c0-pi/3| = {gap:.2e}, {secs:.2} s"),
    )
}

fn cross_validation() -> Check {
    let mut details = Vec::new();
    let mut ok = true;
    for (p, tol) in [(2.0, 5e-3), (3.0, 1e-2)] {
        let start = Instant::now();
        let spec = henon(p, 1025);
        let pr = RadialProblem::new(spec.clone()).map_err(|e| e.to_string())?;
        let var = solve_fixed(&spec).map_err(|e| e.to_string())?;
        let brackets = scan_brackets(&pr, 1.0, 1e-3, 10.0, 200);
        let mut dist = f64::INFINITY;
        for b in brackets {
            if let Ok(shot) = shoot(&pr, 1.0, b) {
                if is_member(&shot.profile, 0.0) {
                    dist = dist.min(shot.profile.max_abs_diff(&var.u));
                }
            }
        }
        let secs = start.elapsed().as_secs_f64();
        ok &= var.converged && dist <= tol && secs < 60.0;
        details.push(format!("p={p}: dist {dist:.2e} (tol {tol:.0e}), {secs:.2} s"));
    }
    ensure(ok, details.join("; "))
}

fn residual_convergence() -> Check {
    let mut details = Vec::new();
    let mut ok = true;
    for p in [2.0, 3.0] {
        let r = |n| -> Result<f64, String> {
            let spec = henon(p, n);
            let u = solve_fixed(&spec).map_err(|e| e.to_string())?.u;
            weak_residual(&u, 1.0, &spec).map_err(|e| e.to_string())
        };
        let (coarse, fine) = (r(513)?, r(1025)?);
        ok &= fine <= 1e-3 && coarse / fine >= 1.8;
        details.push(format!("p={p}: {fine:.2e} at n=1025, factor {:.2}", coarse / fine));
    }
    ensure(ok, details.join("; "))
}

fn eigen_identities() -> Check {
    let mut worst: f64 = 0.0;
    for (p, weight) in [
        (2.0, WeightSpec::Power { alpha: 2.0 }),
        (3.0, WeightSpec::Power { alpha: 2.0 }),
        (1.5, WeightSpec::Affine { beta: 1.0 }),
        (2.0, WeightSpec::Exp { beta: 0.5 }),
    ] {
        let spec = ProblemSpec::new(3, p, weight, NonlinSpec::Power { q: 3.0 })
            .with_grid(513)
            .with_mode(Mode::Eigen);
        let pr = RadialProblem::new(spec.clone()).map_err(|e| e.to_string())?;
        let res = solve_eigen(&spec).map_err(|e| e.to_string())?;
        let sphere = (pr.norm_p_pow(&res.u).map_err(|e| e.to_string())? - 1.0).abs();
        let lam = (res.lambda * pr.nonlinear_pairing(&res.u).map_err(|e| e.to_string())? - 1.0).abs();
        worst = worst.max(sphere).max(lam);
    }
    ensure(worst <= 1e-10, format!("max deviation {worst:.2e} over 4 runs"))
}

/// Converged fixed-mode runs over non-constant weights and several exponents.
fn fixed_runs() -> Vec<(ProblemSpec, Result<radial_plap::nehari::NehariResult, String>)> {
    let mut out = Vec::new();
    for p in [1.5, 2.0, 3.0] {
        for weight in [
            WeightSpec::Power { alpha: 2.0 },
            WeightSpec::Affine { beta: 1.0 },
            WeightSpec::Exp { beta: 0.5 },
        ] {
            let spec = ProblemSpec::new(3, p, weight, NonlinSpec::Power { q: 3.0 }).with_grid(257);
            let res = solve_fixed(&spec).map_err(|e| e.to_string());
            out.push((spec, res));
        }
    }
    out
}

fn energy_bound() -> Check {
    let mut worst = f64::INFINITY;
    let mut count = 0;
    for (spec, res) in fixed_runs() {
        let res = res?;
        if !res.converged {
            continue;
        }
        let pr = RadialProblem::new(spec.clone()).map_err(|e| e.to_string())?;
        let norm = pr.norm_p_pow(&res.u).map_err(|e| e.to_string())?;
        let bound = (1.0 / spec.p - 1.0 / spec.nonlin.gamma()) * norm;
        worst = worst.min(res.c0 - bound);
        count += 1;
    }
    ensure(count > 0 && worst >= -1e-12, format!("min J - bound = {worst:.3e} over {count} runs"))
}

fn nehari_map() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(18);
    let mut agree: f64 = 0.0;
    let mut homog: f64 = 0.0;
    let specs = [henon(2.0, 64), henon(3.0, 64), henon(1.5, 64)];
    for k in 0..100 {
        let pr = RadialProblem::new(specs[k % 3].clone()).map_err(|e| e.to_string())?;
        let mut acc = rng.gen_range(0.0..1.0);
        let u = pr
            .function(|_| {
                acc += rng.gen_range(0.0..0.3);
                acc
            })
            .map_err(|e| e.to_string())?;
        let t = t0_map(&pr, &u).map_err(|e| e.to_string())?;
        let closed = t0_closed_form(&pr, &u).map_err(|e| e.to_string())?;
        let bisected = t0_bisection(&pr, &u).map_err(|e| e.to_string())?;
        agree = agree.max((closed - bisected).abs() / closed);
        let c = rng.gen_range(0.1..10.0);
        let tc = t0_map(&pr, &u.scaled(c)).map_err(|e| e.to_string())?;
        homog = homog.max((tc - t / c).abs() / (t / c));
    }
    ensure(
        agree <= 1e-10 && homog <= 1e-10,
        format!("closed vs bisection {agree:.2e}, homogeneity {homog:.2e} (relative, 100 functions)"),
    )
}

fn cone_projection() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    'outer: for n in (1..=6usize).cycle() {
        for pattern in 0..(1u32 << n) {
            let v: Vec<f64> = (0..n)
                .map(|i| {
                    let mag = rng.gen_range(0.0..3.0);
                    if pattern & (1 << i) != 0 { -mag } else { mag }
                })
                .collect();
            let m: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..2.0)).collect();
            let fast = project_monotone_nonneg(&v, &m).map_err(|e| e.to_string())?;
            let slow = common::brute_force(&v, &m);
            worst = fast.iter().zip(&slow).map(|(a, b)| (a - b).abs()).fold(worst, f64::max);
            cases += 1;
            if cases == 1000 {
                break 'outer;
            }
        }
    }
    let grid = RadialGrid::new(3, 200).map_err(|e| e.to_string())?;
    let mut idempotent = true;
    for _ in 0..100 {
        let v = RadialFn::from_fn(grid.clone(), |r| r + rng.gen_range(-1.0..1.0)).map_err(|e| e.to_string())?;
        let (x, _) = project_cone(&v).map_err(|e| e.to_string())?;
        let (y, _) = project_cone(&x).map_err(|e| e.to_string())?;
        idempotent &= x.values() == y.values();
    }
    ensure(
        worst <= 1e-9 && idempotent,
        format!("max deviation {worst:.2e} over {cases} cases, idempotent: {idempotent}"),
    )
}

fn monotone_positive() -> Check {
    let mut count = 0;
    let mut min_value = f64::INFINITY;
    let mut min_slope = f64::INFINITY;
    let mut members = true;
    let mut record = |u: &RadialFn| {
        min_value = min_value.min(u.values().iter().copied().fold(f64::INFINITY, f64::min));
        min_slope = min_slope.min(min_interior_slope(u));
        members &= is_member(u, 0.0);
        count += 1;
    };
    for (spec, res) in fixed_runs() {
        let res = res?;
        if res.converged {
            record(&res.u);
        }
        let eig = solve_eigen(&spec.with_mode(Mode::Eigen)).map_err(|e| e.to_string())?;
        if eig.converged {
            record(&eig.u);
        }
    }
    ensure(
        count > 0 && min_value > 0.0 && min_slope > 0.0 && members,
        format!("{count} runs: min u = {min_value:.3e}, min interior slope = {min_slope:.3e}, cone members: {members}"),
    )
}

fn simon() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut positive = true;
    let mut identity: f64 = 0.0;
    for p in [1.5, 2.0, 3.0] {
        for _ in 0..10_000 {
            let x: Vec<f64> = (0..3).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let y: Vec<f64> = (0..3).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let gap = simon_gap(&x, &y, p);
            positive &= gap > 0.0;
            if p == 2.0 {
                let d2: f64 = x.iter().zip(&y).map(|(a, b)| (a - b) * (a - b)).sum();
                identity = identity.max((gap - d2).abs() / d2);
            }
        }
    }
    ensure(
        positive && identity <= 1e-12,
        format!("positive on 3x10^4 pairs: {positive}, p=2 identity error {identity:.2e}"),
    )
}

fn shooting_self_convergence() -> Check {
    let mut min_order = f64::INFINITY;
    for (weight, d) in [
        (WeightSpec::Power { alpha: 2.0 }, 1.2),
        (WeightSpec::Affine { beta: 1.0 }, 1.0),
        (WeightSpec::Exp { beta: 0.5 }, 0.8),
    ] {
        let mut values = Vec::new();
        for n in [64, 128, 256, 512] {
            let pr = RadialProblem::new(
                ProblemSpec::new(3, 2.0, weight, NonlinSpec::Power { q: 3.0 }).with_grid(n),
            )
            .map_err(|e| e.to_string())?;
            values.push(integrate_ivp(&pr, 1.0, d).map_err(|e| e.to_string())?.terminal_value());
        }
        for k in 0..2 {
            let order = ((values[k] - values[k + 1]) / (values[k + 1] - values[k + 2])).abs().log2();
            min_order = min_order.min(order);
        }
    }
    let mut drift: f64 = 0.0;
    for p in [1.5, 2.0, 3.0] {
        let pr = RadialProblem::new(
            ProblemSpec::new(3, p, WeightSpec::Constant { c: 1.0 }, NonlinSpec::Power { q: 3.0 })
                .allow_constant_weight(true)
                .with_grid(1024),
        )
        .map_err(|e| e.to_string())?;
        let traj = integrate_ivp(&pr, 1.0, 1.0).map_err(|e| e.to_string())?;
        drift = traj.states.iter().map(|s| (s.u - 1.0).abs().max(s.w.abs())).fold(drift, f64::max);
    }
    ensure(
        min_order >= 3.5 && drift <= 1e-12,
        format!("min Richardson order {min_order:.2}, constant drift {drift:.2e}"),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("1 constant-solution recovery", constant_recovery),
        ("2 variational/shooting cross-validation", cross_validation),
        ("3 weak-residual convergence", residual_convergence),
        ("4 eigen constraint identities", eigen_identities),
        ("5 energy lower bound", energy_bound),
        ("6 Nehari scaling map", nehari_map),
        ("7 cone projection optimality", cone_projection),
        ("8 monotonicity and positivity", monotone_positive),
        ("9 Simon gap", simon),
        ("10 shooting self-convergence", shooting_self_convergence),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(d) => println!("[PASS] {name}: {d}"),
            Err(d) => {
                failed += 1;
                println!("[FAIL] {name}: {d}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
