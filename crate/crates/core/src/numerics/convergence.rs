use std::fmt;

use super::Grid;
use crate::error::Result;

/// Observed order of a refinement study.
#[derive(Debug, Clone, PartialEq)]
pub enum ObservedOrder {
    /// Every error was exactly zero.
    Exact,
    /// `log2(e_k / e_{k+1})` for consecutive halvings of the step.
    Orders(Vec<f64>),
}

impl ObservedOrder {
    pub fn from_errors(errors: &[f64]) -> Self {
        if errors.iter().all(|&e| e == 0.0) {
            return ObservedOrder::Exact;
        }
        ObservedOrder::Orders(errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect())
    }

    /// Smallest observed order; infinite when exact.
    pub fn min(&self) -> f64 {
        match self {
            ObservedOrder::Exact => f64::INFINITY,
            ObservedOrder::Orders(o) => o.iter().copied().fold(f64::INFINITY, f64::min),
        }
    }
}

impl fmt::Display for ObservedOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ObservedOrder::Exact => f.write_str("exact"),
            ObservedOrder::Orders(o) => {
                let parts: Vec<String> = o.iter().map(|v| format!("{v:.3}")).collect();
                f.write_str(&parts.join(", "))
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct ConvergenceReport {
    pub steps: Vec<f64>,
    pub errors: Vec<f64>,
    pub order: ObservedOrder,
}

/// Runs `error_at` on `base`, then on successive halvings (`levels` grids in
/// total), and reports the observed order. `error_at` measures the distance to
/// a reference solution on the given grid.
pub fn convergence_order(
    base: Grid,
    levels: usize,
    mut error_at: impl FnMut(&Grid) -> Result<f64>,
) -> Result<ConvergenceReport> {
    let mut grid = base;
    let mut steps = Vec::with_capacity(levels);
    let mut errors = Vec::with_capacity(levels);
    for _ in 0..levels {
        steps.push(grid.step());
        errors.push(error_at(&grid)?);
        grid = grid.refine();
    }
    let order = ObservedOrder::from_errors(&errors);
    Ok(ConvergenceReport {
        steps,
        errors,
        order,
    })
}
