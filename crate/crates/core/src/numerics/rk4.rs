//! Fixed-step classical Runge–Kutta driver whose stage points are the refined
//! grid nodes, so coefficients are tabulated once and looked up.

use num_complex::Complex64;

use super::Grid;
use crate::error::{Error, Result};

/// Minimal vector-space interface the driver needs.
pub trait State: Copy {
    /// `self + a * other`
    fn axpy(self, a: f64, other: Self) -> Self;
    fn scale(self, a: f64) -> Self;
    fn is_finite(&self) -> bool;
}

impl State for [f64; 2] {
    fn axpy(self, a: f64, o: Self) -> Self {
        [self[0] + a * o[0], self[1] + a * o[1]]
    }
    fn scale(self, a: f64) -> Self {
        [a * self[0], a * self[1]]
    }
    fn is_finite(&self) -> bool {
        self[0].is_finite() && self[1].is_finite()
    }
}

impl State for [Complex64; 2] {
    fn axpy(self, a: f64, o: Self) -> Self {
        [self[0] + o[0] * a, self[1] + o[1] * a]
    }
    fn scale(self, a: f64) -> Self {
        [self[0] * a, self[1] * a]
    }
    fn is_finite(&self) -> bool {
        self.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

/// Integrates `y' = rhs(j, y)` where `j` is the refined node index of the
/// evaluation point. Returns the state at every refined node; half-step values
/// come from cubic Hermite interpolation, which keeps fourth-order accuracy.
pub fn integrate<S: State>(
    grid: &Grid,
    y0: S,
    what: &str,
    rhs: impl Fn(usize, &S) -> S,
) -> Result<Vec<S>> {
    let h = grid.step();
    let mut out = Vec::with_capacity(grid.refined_len());
    out.push(y0);
    let mut y = y0;
    let mut k1 = rhs(0, &y);
    for m in 0..grid.steps() {
        let (j0, jm, j1) = (2 * m, 2 * m + 1, 2 * m + 2);
        let k2 = rhs(jm, &y.axpy(h / 2.0, k1));
        let k3 = rhs(jm, &y.axpy(h / 2.0, k2));
        let k4 = rhs(j1, &y.axpy(h, k3));
        let next = y
            .axpy(h / 6.0, k1)
            .axpy(h / 3.0, k2)
            .axpy(h / 3.0, k3)
            .axpy(h / 6.0, k4);
        if !next.is_finite() {
            return Err(Error::NonFinite {
                what: what.to_string(),
                node: j1,
                x: grid.refined_x(j1),
            });
        }
        let k1_next = rhs(j1, &next);
        // cubic Hermite: y(x + h/2) ≈ (y0 + y1)/2 + h/8 (y0' - y1')
        let mid = y
            .scale(0.5)
            .axpy(0.5, next)
            .axpy(h / 8.0, k1)
            .axpy(-h / 8.0, k1_next);
        debug_assert!(out.len() == j0 + 1);
        out.push(mid);
        out.push(next);
        y = next;
        k1 = k1_next;
    }
    Ok(out)
}
