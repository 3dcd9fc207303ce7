//! Command-line front end: a JSON configuration (optionally overridden by
//! flags) in, a JSON report and a CSV profile out.
//!
//! Exit codes: `0` converged, `2` not converged, `1` invalid input or any other
//! failure.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::cone::is_member;
use crate::eigen::solve_eigen;
use crate::error::{Error, Result};
use crate::functionals::RadialProblem;
use crate::grid::{RadialFn, RadialGrid};
use crate::nehari::solve_fixed;
use crate::problem::{Mode, NonlinSpec, ProblemSpec, WeightSpec};
use crate::shooting::{scan_brackets, shoot, ShootResult};
use crate::verify;

/// Log-spaced heights probed when searching the shooting bracket for roots.
const SCAN_SAMPLES: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum RunMode {
    Eigen,
    Fixed,
    Shoot,
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WeightKind {
    Power,
    Affine,
    Exp,
    Constant,
}

fn default_p() -> f64 {
    2.0
}
fn default_dim() -> usize {
    3
}
fn default_n() -> usize {
    512
}
fn default_mode() -> RunMode {
    RunMode::Fixed
}
fn default_weight() -> WeightSpec {
    WeightSpec::Power { alpha: 2.0 }
}
fn default_nonlin() -> NonlinSpec {
    NonlinSpec::Power { q: 3.0 }
}
fn default_tol() -> f64 {
    1e-8
}
fn default_max_iter() -> usize {
    20_000
}
fn default_bracket() -> (f64, f64) {
    (1e-3, 10.0)
}

/// One run. Missing keys take the defaults below; `sweep` entries are deep-merged
/// over the remaining keys, one run per entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_p")]
    pub p: f64,
    #[serde(default = "default_dim")]
    pub dim: usize,
    /// Grid intervals.
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default = "default_mode")]
    pub mode: RunMode,
    #[serde(default = "default_weight")]
    pub weight: WeightSpec,
    #[serde(default = "default_nonlin")]
    pub nonlinearity: NonlinSpec,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
    #[serde(default)]
    pub allow_constant_weight: bool,
    #[serde(default = "default_bracket")]
    pub shoot_bracket: (f64, f64),
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub emit_profile: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sweep: Vec<Value>,
    /// Multiplier for `shoot` and `verify` (default 1).
    #[serde(default)]
    pub lambda: Option<f64>,
    /// CSV profile (`r,u` columns) to check in `verify` mode instead of solving.
    #[serde(default)]
    pub profile: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        serde_json::from_value(json!({})).expect("all keys have defaults")
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Inadmissible(format!("config: {e}")))
    }

    pub fn problem_spec(&self) -> ProblemSpec {
        let mode = match self.mode {
            RunMode::Eigen => Mode::Eigen,
            _ => Mode::Fixed,
        };
        ProblemSpec::new(self.dim, self.p, self.weight, self.nonlinearity)
            .with_mode(mode)
            .with_grid(self.n)
            .with_tol(self.tol)
            .with_max_iter(self.max_iter)
            .allow_constant_weight(self.allow_constant_weight)
    }

    pub fn validate(&self) -> Result<()> {
        self.problem_spec().validate()?;
        let (lo, hi) = self.shoot_bracket;
        if !(lo > 0.0 && hi > lo && hi.is_finite()) {
            return Err(Error::Inadmissible(format!(
                "shoot_bracket must satisfy 0 < lo < hi, got [{lo}, {hi}]"
            )));
        }
        if let Some(l) = self.lambda {
            if !(l > 0.0 && l.is_finite()) {
                return Err(Error::Inadmissible(format!("lambda must be positive, got {l}")));
            }
        }
        if self.emit_profile && self.output.is_none() {
            return Err(Error::Inadmissible("emit_profile needs an output path".into()));
        }
        if self.profile.is_some() && self.mode != RunMode::Verify {
            return Err(Error::Inadmissible("profile is only read in verify mode".into()));
        }
        Ok(())
    }

    /// The runs described by this config: itself, or one per sweep entry.
    pub fn expand(&self) -> Result<Vec<RunConfig>> {
        if self.sweep.is_empty() {
            return Ok(vec![self.clone()]);
        }
        let mut base = serde_json::to_value(RunConfig {
            sweep: Vec::new(),
            ..self.clone()
        })
        .map_err(|e| Error::Inadmissible(e.to_string()))?;
        if let Value::Object(m) = &mut base {
            m.remove("sweep");
        }
        self.sweep
            .iter()
            .enumerate()
            .map(|(k, patch)| {
                let mut v = base.clone();
                merge(&mut v, patch);
                let mut cfg: RunConfig = serde_json::from_value(v)
                    .map_err(|e| Error::Inadmissible(format!("sweep entry {k}: {e}")))?;
                if !cfg.sweep.is_empty() {
                    return Err(Error::Inadmissible(format!("sweep entry {k} is itself a sweep")));
                }
                let own_output = patch.get("output").is_some();
                if let (false, Some(out)) = (own_output, &cfg.output) {
                    cfg.output = Some(numbered(out, k));
                }
                Ok(cfg)
            })
            .collect()
    }
}

fn numbered(path: &Path, k: usize) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let ext = path.extension().map(|s| s.to_string_lossy().into_owned());
    let name = match ext {
        Some(e) => format!("{stem}.{k}.{e}"),
        None => format!("{stem}.{k}"),
    };
    path.with_file_name(name)
}

/// Recursive merge: objects merge key by key, anything else is replaced.
pub fn merge(base: &mut Value, patch: &Value) {
    match (base, patch) {
        (Value::Object(b), Value::Object(p)) => {
            for (k, v) in p {
                merge(b.entry(k.clone()).or_insert(Value::Null), v);
            }
        }
        (b, p) => *b = p.clone(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub mode: RunMode,
    pub p: f64,
    pub dim: usize,
    pub n: usize,
    /// `S` in eigen mode, `c0` in fixed mode, the energy at the given multiplier
    /// in verify mode, the initial height `u(0)` in shoot mode.
    pub objective: f64,
    pub lambda: f64,
    pub c0: Option<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub weak_residual_max: f64,
    pub min_value: f64,
    pub min_interior_slope: f64,
    pub nehari_residual: Option<f64>,
    pub wall_time_ms: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subsolution_margin: Option<f64>,
    /// Sup distance to the shooting solution with the same multiplier.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shoot_distance: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    pub r: Vec<f64>,
    pub u: Vec<f64>,
    pub slope: Vec<f64>,
}

impl Profile {
    /// Node slopes average the two adjacent cell slopes.
    pub fn from_fn(u: &RadialFn) -> Self {
        let s = u.slopes();
        let slope = (0..u.values().len())
            .map(|i| match (i.checked_sub(1).map(|k| s[k]), s.get(i)) {
                (Some(a), Some(b)) => 0.5 * (a + b),
                (Some(a), None) => a,
                (None, Some(b)) => *b,
                (None, None) => 0.0,
            })
            .collect();
        Self {
            r: u.grid().nodes().collect(),
            u: u.values().to_vec(),
            slope,
        }
    }

    /// Slopes recovered from the shooting flux.
    fn from_shot(shot: &ShootResult, dim: usize, p: f64) -> Self {
        let states = &shot.trajectory.states;
        Self {
            r: states.iter().map(|s| s.r).collect(),
            u: states.iter().map(|s| s.u).collect(),
            slope: (0..states.len()).map(|i| shot.trajectory.slope(i, dim, p)).collect(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("r,u,slope\n");
        for ((r, u), s) in self.r.iter().zip(&self.u).zip(&self.slope) {
            let _ = writeln!(out, "{r:e},{u:e},{s:e}");
        }
        out
    }

    /// Reads `r` and `u` columns by header name; the radii must be `i / n`.
    pub fn read_csv(text: &str, dim: usize) -> Result<RadialFn> {
        let bad = |m: String| Error::Inadmissible(format!("profile: {m}"));
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header: Vec<&str> = lines
            .next()
            .ok_or_else(|| bad("empty file".into()))?
            .split(',')
            .map(str::trim)
            .collect();
        let col = |name: &str| {
            header
                .iter()
                .position(|h| *h == name)
                .ok_or_else(|| bad(format!("missing column {name}")))
        };
        let (ir, iu) = (col("r")?, col("u")?);
        let mut rs = Vec::new();
        let mut us = Vec::new();
        for (k, line) in lines.enumerate() {
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            let get = |i: usize| -> Result<f64> {
                fields
                    .get(i)
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| bad(format!("row {} is malformed", k + 1)))
            };
            rs.push(get(ir)?);
            us.push(get(iu)?);
        }
        if rs.len() < 2 {
            return Err(bad("needs at least two rows".into()));
        }
        let n = rs.len() - 1;
        for (i, r) in rs.iter().enumerate() {
            if (r - i as f64 / n as f64).abs() > 1e-9 {
                return Err(Error::GridMismatch(format!(
                    "profile radius {r} at row {i} is not {i}/{n}"
                )));
            }
        }
        RadialFn::new(RadialGrid::new(dim, n)?, us)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub report: Report,
    pub profile: Profile,
}

struct Diagnostics {
    weak_residual_max: f64,
    min_value: f64,
    min_interior_slope: f64,
    subsolution_margin: Option<f64>,
}

fn diagnose(u: &RadialFn, lambda: f64, spec: &ProblemSpec) -> Result<Diagnostics> {
    Ok(Diagnostics {
        weak_residual_max: verify::weak_residual(u, lambda, spec)?,
        min_value: u.values().iter().copied().fold(f64::INFINITY, f64::min),
        min_interior_slope: verify::min_interior_slope(u),
        subsolution_margin: verify::subsolution_check(u, spec).ok(),
    })
}

/// Shoots every sign change of `w(1)` inside the bracket and keeps the first
/// root whose profile lies in the cone.
pub fn shoot_in_cone(problem: &RadialProblem, lambda: f64, bracket: (f64, f64)) -> Result<ShootResult> {
    let brackets = scan_brackets(problem, lambda, bracket.0, bracket.1, SCAN_SAMPLES);
    if brackets.is_empty() {
        return Err(Error::NoSignChange {
            lo: bracket.0,
            hi: bracket.1,
        });
    }
    let mut last = None;
    for b in brackets {
        match shoot(problem, lambda, b) {
            Ok(s) if is_member(&s.profile, 0.0) => return Ok(s),
            Ok(_) => {}
            Err(e) => last = Some(e),
        }
    }
    Err(last.unwrap_or(Error::Inadmissible(
        "no shooting root in the bracket is nonnegative and nondecreasing".into(),
    )))
}

fn energy(problem: &RadialProblem, u: &RadialFn, lambda: f64) -> Result<f64> {
    Ok(problem.norm_p_pow(u)? / problem.p() - lambda * problem.functional_i(u)?)
}

/// Runs a single configuration (sweeps are not expanded).
pub fn execute(config: &RunConfig) -> Result<RunOutcome> {
    config.validate()?;
    let start = Instant::now();
    let spec = config.problem_spec();
    let mk = |objective, lambda, c0, iterations, converged, d: &Diagnostics, nehari, shoot_distance| Report {
        mode: config.mode,
        p: config.p,
        dim: config.dim,
        n: config.n,
        objective,
        lambda,
        c0,
        iterations,
        converged,
        weak_residual_max: d.weak_residual_max,
        min_value: d.min_value,
        min_interior_slope: d.min_interior_slope,
        nehari_residual: nehari,
        wall_time_ms: 0.0,
        subsolution_margin: d.subsolution_margin,
        shoot_distance,
    };

    let (mut report, profile) = match config.mode {
        RunMode::Eigen => {
            let problem = RadialProblem::new(spec.clone())?;
            let (u, iterations, converged) = match solve_eigen(&spec) {
                Ok(r) => (r.u, r.iterations, true),
                Err(Error::NotConverged(b)) => (b.u, b.iterations, false),
                Err(e) => return Err(e),
            };
            let lambda = problem.lambda_of(&u)?;
            let objective = problem.functional_i(&u)?;
            let d = diagnose(&u, lambda, &spec)?;
            let r = mk(objective, lambda, None, iterations, converged, &d, None, None);
            (r, Profile::from_fn(&u))
        }
        RunMode::Fixed => {
            let problem = RadialProblem::new(spec.clone())?;
            let (u, iterations, converged) = match solve_fixed(&spec) {
                Ok(r) => (r.u, r.iterations, true),
                Err(Error::NotConverged(b)) => (b.u, b.iterations, false),
                Err(e) => return Err(e),
            };
            let c0 = problem.functional_j(&u)?;
            let d = diagnose(&u, 1.0, &spec)?;
            let nehari = problem.nehari_residual(&u)?;
            let r = mk(c0, 1.0, Some(c0), iterations, converged, &d, Some(nehari), None);
            (r, Profile::from_fn(&u))
        }
        RunMode::Shoot => {
            let problem = RadialProblem::new(spec.clone())?;
            let lambda = config.lambda.unwrap_or(1.0);
            let shot = shoot_in_cone(&problem, lambda, config.shoot_bracket)?;
            let d = diagnose(&shot.profile, lambda, &spec)?;
            let consistency = verify::lambda_consistency(&shot.profile, lambda, &spec)?;
            let r = mk(shot.d, lambda, None, shot.rootfind_iterations, true, &d, Some(consistency), None);
            (r, Profile::from_shot(&shot, config.dim, config.p))
        }
        RunMode::Verify => {
            let lambda = config.lambda.unwrap_or(1.0);
            let (u, iterations, converged, spec) = match &config.profile {
                Some(path) => {
                    let text = fs::read_to_string(path)
                        .map_err(|e| Error::Inadmissible(format!("{}: {e}", path.display())))?;
                    let u = Profile::read_csv(&text, config.dim)?;
                    let spec = spec.clone().with_grid(u.grid().intervals());
                    (u, 0, true, spec)
                }
                None => match solve_fixed(&spec) {
                    Ok(r) => (r.u, r.iterations, true, spec.clone()),
                    Err(Error::NotConverged(b)) => (b.u, b.iterations, false, spec.clone()),
                    Err(e) => return Err(e),
                },
            };
            let problem = RadialProblem::new(spec.clone())?;
            let d = diagnose(&u, lambda, &spec)?;
            let consistency = verify::lambda_consistency(&u, lambda, &spec)?;
            let shot = shoot_in_cone(&problem, lambda, config.shoot_bracket)?;
            let distance = shot.profile.max_abs_diff(&u);
            let j = energy(&problem, &u, lambda)?;
            let mut r = mk(j, lambda, Some(j), iterations, converged, &d, Some(consistency), Some(distance));
            r.n = spec.grid_n;
            (r, Profile::from_fn(&u))
        }
    };
    report.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(RunOutcome { report, profile })
}

/// Runs all entries of a config, concurrently when it is a sweep. Results keep
/// the order of the sweep list.
pub fn execute_all(config: &RunConfig) -> Result<Vec<Result<RunOutcome>>> {
    let runs = config.expand()?;
    if runs.len() == 1 {
        return Ok(vec![execute(&runs[0])]);
    }
    Ok(std::thread::scope(|scope| {
        let handles: Vec<_> = runs.iter().map(|c| scope.spawn(move || execute(c))).collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|_| Err(Error::Inadmissible("run panicked".into()))))
            .collect()
    }))
}

pub fn exit_code(result: &Result<RunOutcome>) -> i32 {
    match result {
        Ok(o) if o.report.converged => 0,
        Ok(_) => 2,
        Err(Error::NotConverged(_) | Error::ShootNotConverged(_)) => 2,
        Err(_) => 1,
    }
}

/// Writes the report (and profile, if requested) next to `config.output`.
pub fn write_outputs(config: &RunConfig, outcome: &RunOutcome) -> Result<()> {
    let io = |p: &Path, e: std::io::Error| Error::Inadmissible(format!("{}: {e}", p.display()));
    if let Some(path) = &config.output {
        let text = serde_json::to_string_pretty(&outcome.report).expect("report serializes");
        fs::write(path, text + "\n").map_err(|e| io(path, e))?;
        if config.emit_profile {
            let csv = path.with_extension("csv");
            fs::write(&csv, outcome.profile.to_csv()).map_err(|e| io(&csv, e))?;
        }
    }
    Ok(())
}

#[derive(Debug, Parser)]
#[command(
    name = "radial-plap",
    version,
    about = "Radial monotone solutions of the Neumann p-Laplace problem on the unit ball",
    allow_negative_numbers = true
)]
pub struct Args {
    /// JSON configuration; flags override its keys.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub dim: Option<usize>,
    /// Grid intervals.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, value_enum)]
    pub mode: Option<RunMode>,
    #[arg(long, value_enum)]
    pub weight_kind: Option<WeightKind>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    /// Value of the constant weight.
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub max_iter: Option<usize>,
    #[arg(long)]
    pub allow_constant_weight: bool,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub emit_profile: bool,
    /// Multiplier for shoot and verify modes.
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Profile CSV to verify.
    #[arg(long)]
    pub profile: Option<PathBuf>,
}

impl Args {
    /// The configuration file (if any) with the flags merged over it.
    pub fn to_config(&self) -> Result<RunConfig> {
        let mut value = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| Error::Inadmissible(format!("{}: {e}", path.display())))?;
                serde_json::from_str(&text).map_err(|e| Error::Inadmissible(format!("config: {e}")))?
            }
            None => json!({}),
        };
        merge(&mut value, &self.overrides());
        complete_kinds(&mut value);
        serde_json::from_value(value).map_err(|e| Error::Inadmissible(format!("config: {e}")))
    }

    fn overrides(&self) -> Value {
        let mut m = Map::new();
        let mut put = |k: &str, v: Value| {
            m.insert(k.to_string(), v);
        };
        if let Some(v) = self.p {
            put("p", json!(v));
        }
        if let Some(v) = self.dim {
            put("dim", json!(v));
        }
        if let Some(v) = self.n {
            put("n", json!(v));
        }
        if let Some(v) = self.mode {
            put("mode", json!(v));
        }
        if let Some(v) = self.tol {
            put("tol", json!(v));
        }
        if let Some(v) = self.max_iter {
            put("max_iter", json!(v));
        }
        if self.allow_constant_weight {
            put("allow_constant_weight", json!(true));
        }
        if let Some(v) = &self.output {
            put("output", json!(v));
        }
        if self.emit_profile {
            put("emit_profile", json!(true));
        }
        if let Some(v) = self.lambda {
            put("lambda", json!(v));
        }
        if let Some(v) = &self.profile {
            put("profile", json!(v));
        }

        let mut weight = Map::new();
        if let Some(k) = self.weight_kind {
            let kind = match k {
                WeightKind::Power => "power",
                WeightKind::Affine => "affine",
                WeightKind::Exp => "exp",
                WeightKind::Constant => "constant",
            };
            weight.insert("kind".into(), json!(kind));
        }
        for (key, v) in [("alpha", self.alpha), ("beta", self.beta), ("c", self.c)] {
            if let Some(v) = v {
                weight.insert(key.into(), json!(v));
            }
        }
        if !weight.is_empty() {
            put("weight", Value::Object(weight));
        }
        if let Some(q) = self.q {
            put("nonlinearity", json!({ "kind": "power", "q": q }));
        }
        Value::Object(m)
    }
}

/// Fills in a missing `kind` so that flags like `--alpha` work without a config.
fn complete_kinds(value: &mut Value) {
    if let Some(Value::Object(w)) = value.get_mut("weight") {
        w.entry("kind").or_insert_with(|| json!("power"));
    }
}

fn report_error(e: &Error) {
    eprintln!("radial-plap: error: {e}");
}

/// Entry point behind the binary. Never panics on bad input; returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let config = match args.to_config() {
        Ok(c) => c,
        Err(e) => {
            report_error(&e);
            return 1;
        }
    };
    let runs = match config.expand() {
        Ok(r) => r,
        Err(e) => {
            report_error(&e);
            return 1;
        }
    };
    let results = match execute_all(&config) {
        Ok(r) => r,
        Err(e) => {
            report_error(&e);
            return 1;
        }
    };

    let mut code = 0;
    let mut printed = Vec::new();
    for (cfg, result) in runs.iter().zip(&results) {
        let c = exit_code(result);
        match result {
            Ok(outcome) => {
                if !outcome.report.converged {
                    eprintln!("radial-plap: solver did not converge in {} iterations", outcome.report.iterations);
                }
                if cfg.output.is_some() {
                    if let Err(e) = write_outputs(cfg, outcome) {
                        report_error(&e);
                        code = 1;
                    }
                } else {
                    printed.push(&outcome.report);
                }
            }
            Err(e) => report_error(e),
        }
        code = match (code, c) {
            (1, _) | (_, 1) => 1,
            (2, _) | (_, 2) => 2,
            _ => 0,
        };
    }
    if !printed.is_empty() {
        let text = if printed.len() == 1 && results.len() == 1 {
            serde_json::to_string_pretty(printed[0])
        } else {
            serde_json::to_string_pretty(&printed)
        };
        let mut out = std::io::stdout().lock();
        if std::io::Write::write_all(&mut out, (text.expect("report serializes") + "\n").as_bytes()).is_err() {
            code = code.max(1);
        }
    }
    code
}
