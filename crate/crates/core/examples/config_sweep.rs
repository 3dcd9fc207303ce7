//! Drives the command-line layer from code: a JSON config with a sweep over
//! exponents and modes, run concurrently, with one report per entry.

use radial_plap::cli::{execute_all, exit_code, RunConfig};

fn main() -> radial_plap::Result<()> {
    let config = RunConfig::from_json(
        r#"{
            "n": 256,
            "weight": {"kind": "power", "alpha": 2.0},
            "sweep": [
                {"p": 1.5},
                {"p": 2.0},
                {"p": 3.0},
                {"p": 2.0, "mode": "eigen"},
                {"p": 2.0, "mode": "shoot"}
            ]
        }"#,
    )?;
    for (cfg, result) in config.expand()?.iter().zip(execute_all(&config)?) {
        let code = exit_code(&result);
        match result {
            Ok(o) => println!(
                "{:?} p = {}: objective {:.6}, lambda {:.6}, residual {:.1e}, exit {code}",
                cfg.mode, cfg.p, o.report.objective, o.report.lambda, o.report.weak_residual_max
            ),
            Err(e) => println!("{:?} p = {}: {e}, exit {code}", cfg.mode, cfg.p),
        }
    }
    Ok(())
}
