//! Grids, tabulated coefficients, cumulative quadrature and the reference
//! RK4 integrator for general 2x2 complex linear systems.

mod coefficient;
mod convergence;
mod derivative;
mod grid;
mod linear;
mod quadrature;
pub mod rk4;
mod trajectory;

pub use coefficient::{CoefficientFunction, DerivativeMode};
pub use convergence::{convergence_order, ConvergenceReport, ObservedOrder};
pub use derivative::differentiate_samples;
pub use grid::Grid;
pub use linear::{
    det, fundamental_matrix, integrate_linear_system, integrate_tabulated, mat_mul, mat_vec, Mat2,
    Vec2,
};
pub use quadrature::{cumulative_integral, cumulative_samples, simpson_pieces};
pub use trajectory::Trajectory;
pub(crate) use trajectory::check_finite;
