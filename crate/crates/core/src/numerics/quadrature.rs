use num_complex::Complex64;

use super::{CoefficientFunction, Grid, Trajectory};
use crate::error::Result;

/// `F(x_j) ≈ ∫₀^{x_j} f` at every refined node of `grid`.
///
/// Full nodes accumulate composite Simpson over consecutive refined triples;
/// each half-step node adds the integral of the triple's quadratic
/// interpolant over the first half-step. `F(0) = 0` exactly.
pub fn cumulative_integral(f: &CoefficientFunction, grid: &Grid) -> Result<Trajectory> {
    let samples = f.sample(grid)?;
    Trajectory::scalar(*grid, cumulative_samples(&samples, grid.step()))
}

/// [`cumulative_integral`] on values already tabulated on the refined nodes.
pub fn cumulative_samples(samples: &[Complex64], h: f64) -> Vec<Complex64> {
    debug_assert!(samples.len() % 2 == 1);
    let mut out = Vec::with_capacity(samples.len());
    let mut acc = Complex64::new(0.0, 0.0);
    out.push(acc);
    for triple in samples.windows(3).step_by(2) {
        let (f0, f1, f2) = (triple[0], triple[1], triple[2]);
        out.push(acc + (f0 * 5.0 + f1 * 8.0 - f2) * h / 24.0);
        acc += (f0 + f1 * 4.0 + f2) * h / 6.0;
        out.push(acc);
    }
    out
}

/// Individual Simpson contributions over each full step.
pub fn simpson_pieces(samples: &[Complex64], h: f64) -> Vec<Complex64> {
    samples
        .windows(3)
        .step_by(2)
        .map(|t| (t[0] + t[1] * 4.0 + t[2]) * h / 6.0)
        .collect()
}
