//! Problem instances: dimension, exponent, radial weight, nonlinearity.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;

/// Radial coefficient `a(r)` in front of the nonlinearity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum WeightSpec {
    /// `a(r) = r^alpha` (the Henon weight).
    Power { alpha: f64 },
    /// `a(r) = 1 + beta r`.
    Affine { beta: f64 },
    /// `a(r) = exp(beta r)`.
    Exp { beta: f64 },
    /// `a(r) = c`. Not radially increasing, only admitted behind an explicit flag.
    Constant { c: f64 },
}

impl WeightSpec {
    pub fn eval(&self, r: f64) -> f64 {
        match *self {
            WeightSpec::Power { alpha } => {
                if alpha == 0.0 {
                    1.0
                } else {
                    r.powf(alpha)
                }
            }
            WeightSpec::Affine { beta } => 1.0 + beta * r,
            WeightSpec::Exp { beta } => (beta * r).exp(),
            WeightSpec::Constant { c } => c,
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(
            *self,
            WeightSpec::Constant { .. } | WeightSpec::Power { alpha: 0.0 }
        )
    }

    /// `int_0^r s^{dim-1} a(s) ds`.
    pub fn radial_moment(&self, dim: usize, r: f64) -> f64 {
        let n = dim as f64;
        match *self {
            WeightSpec::Power { alpha } => r.powf(n + alpha) / (n + alpha),
            WeightSpec::Affine { beta } => r.powf(n) / n + beta * r.powf(n + 1.0) / (n + 1.0),
            WeightSpec::Constant { c } => c * r.powi(dim as i32) / n,
            WeightSpec::Exp { .. } => {
                GaussLegendre::new(12).integrate(0.0, r, |s| s.powi(dim as i32 - 1) * self.eval(s))
            }
        }
    }

    fn check(&self, allow_constant: bool) -> Result<()> {
        let (name, value, positive) = match *self {
            WeightSpec::Power { alpha } => ("alpha", alpha, false),
            WeightSpec::Affine { beta } => ("beta", beta, true),
            WeightSpec::Exp { beta } => ("beta", beta, true),
            WeightSpec::Constant { c } => ("c", c, true),
        };
        if !value.is_finite() || value < 0.0 || (positive && value == 0.0) {
            return Err(Error::Inadmissible(format!(
                "weight parameter {name} = {value} is out of range"
            )));
        }
        if self.is_constant() && !allow_constant {
            return Err(Error::Inadmissible(
                "weight assumption violated: a must be non-constant and radially increasing; \
                 pass allow_constant_weight to override"
                    .into(),
            ));
        }
        Ok(())
    }
}

/// Nonlinearity `f`. Only pure powers `f(s) = s^q` are supported.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum NonlinSpec {
    Power { q: f64 },
}

impl NonlinSpec {
    pub fn exponent(&self) -> f64 {
        match *self {
            NonlinSpec::Power { q } => q,
        }
    }

    /// `f(s)`, extended as an odd function to negative arguments.
    #[inline]
    pub fn f(&self, s: f64) -> f64 {
        let q = self.exponent();
        if s >= 0.0 {
            s.powf(q)
        } else {
            -(-s).powf(q)
        }
    }

    /// `F(s) = int_0^s f` for `s >= 0`.
    #[inline]
    pub fn primitive(&self, s: f64) -> f64 {
        let q = self.exponent();
        s.powf(q + 1.0) / (q + 1.0)
    }

    /// The exponent `gamma` with `f(t) t >= gamma F(t)`; equality holds for powers.
    pub fn gamma(&self) -> f64 {
        self.exponent() + 1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// The multiplier is an unknown fixed by the normalization `||u||^p = 1`.
    Eigen,
    /// The multiplier is fixed to one.
    Fixed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub dim: usize,
    pub p: f64,
    pub weight: WeightSpec,
    pub nonlin: NonlinSpec,
    pub mode: Mode,
    /// Number of grid intervals on `[0, 1]`.
    pub grid_n: usize,
    pub tol: f64,
    pub max_iter: usize,
    pub allow_constant_weight: bool,
}

impl ProblemSpec {
    pub fn new(dim: usize, p: f64, weight: WeightSpec, nonlin: NonlinSpec) -> Self {
        Self {
            dim,
            p,
            weight,
            nonlin,
            mode: Mode::Fixed,
            grid_n: 512,
            tol: 1e-8,
            max_iter: 20_000,
            allow_constant_weight: false,
        }
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_grid(mut self, n: usize) -> Self {
        self.grid_n = n;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn allow_constant_weight(mut self, allow: bool) -> Self {
        self.allow_constant_weight = allow;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim < 3 {
            return Err(Error::Inadmissible(format!(
                "dimension N = {} must be at least 3",
                self.dim
            )));
        }
        if !(self.p.is_finite() && self.p > 1.0) {
            return Err(Error::Inadmissible(format!(
                "exponent p = {} must satisfy 1 < p < inf",
                self.p
            )));
        }
        if self.grid_n < 3 {
            return Err(Error::Inadmissible(format!(
                "grid needs at least 3 intervals, got {}",
                self.grid_n
            )));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(Error::Inadmissible(format!("tol = {} must be positive", self.tol)));
        }
        if self.max_iter == 0 {
            return Err(Error::Inadmissible("max_iter must be positive".into()));
        }
        self.weight.check(self.allow_constant_weight)?;
        let q = self.nonlin.exponent();
        if !(q.is_finite() && q > self.p - 1.0) {
            return Err(Error::Inadmissible(format!(
                "growth assumption violated: f(s) = s^q needs q > p - 1 so that f(t)/t^(p-1) \
                 is strictly increasing (q = {q}, p = {})",
                self.p
            )));
        }
        Ok(())
    }
}
