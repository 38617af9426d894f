//! Solvers for the antilinear ODE `u' = f conj(u) + g` and for the
//! antidiagonal conjugate systems it decouples.
//!
//! * [`antilinear`]: the scalar equation, via realification and RK4.
//! * [`picard`]: truncated Picard series for the kernels `C_f`, `S_f`.
//! * [`antidiagonal`]: `U' = [[0, f], [conj f, 0]] U (+ G)` and the transforms
//!   of general 2x2 systems into that form.
//! * [`reductions`]: Schrödinger, Helmholtz, Zakharov–Shabat and
//!   Kubelka–Munk problems recast as antidiagonal systems.
//! * [`numerics`]: grids, quadrature and the reference integrator.
//! * [`expr`]: the coefficient expression language.

pub mod antidiagonal;
pub mod antilinear;
pub mod error;
pub mod expr;
pub mod numerics;
pub mod picard;
pub mod reductions;
pub mod verify;

pub use error::{Error, ExprError, Result};
pub use num_complex::Complex64;
