//! Radially symmetric, nonnegative, nondecreasing solutions of the Neumann
//! problem
//!
//! ```text
//! -Delta_p u + |u|^{p-2} u = lambda a(|x|) f(u)   in the unit ball B of R^N
//! ```
//!
//! with a radially increasing weight `a` and a superlinear power `f(s) = s^q`
//! (`q > p - 1`).
//!
//! Two variational solvers work on a uniform radial grid:
//!
//! - [`eigen`] maximizes `I(u) = int_B a F(u)` over the cone of nonnegative
//!   nondecreasing functions on the unit sphere `||u|| = 1` of `W^{1,p}`, and
//!   recovers the multiplier `lambda = 1 / int_B a f(u) u`;
//! - [`nehari`] fixes `lambda = 1` and minimizes
//!   `J(u) = ||u||^p / p - I(u)` over the Nehari set intersected with the cone.
//!
//! [`shooting`] integrates the radial ODE independently and root-finds the
//! initial height, and [`verify`] checks any candidate (weak residual,
//! monotonicity, comparison with `e^{|x|}`). [`cli`] wraps everything behind a
//! JSON configuration.
//!
//! ```
//! use radial_plap::problem::{NonlinSpec, ProblemSpec, WeightSpec};
//!
//! let spec = ProblemSpec::new(3, 2.0, WeightSpec::Power { alpha: 2.0 }, NonlinSpec::Power { q: 3.0 })
//!     .with_grid(128);
//! let sol = radial_plap::nehari::solve_fixed(&spec).unwrap();
//! assert!(radial_plap::cone::is_member(&sol.u, 0.0));
//! assert!(sol.c0 > 0.0);
//! ```
//!
//! The `examples/` directory has one program per capability.

pub mod cli;
pub mod cone;
mod descent;
pub mod eigen;
pub mod error;
pub mod functionals;
pub mod grid;
pub mod linalg;
pub mod nehari;
pub mod problem;
pub mod quadrature;
pub mod shooting;
pub mod verify;

pub use error::{Error, Result};
pub use grid::{RadialFn, RadialGrid};
pub use problem::{Mode, NonlinSpec, ProblemSpec, WeightSpec};
