use crate::error::{Error, Result};

/// Uniform partition of `[0, x0]` into `n` steps, plus the half-step
/// refinement used for integrator stage points and cumulative integrals.
///
/// Refined node `j` sits at `j * h / 2`; even refined nodes are the full grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    x0: f64,
    n: usize,
}

impl Grid {
    pub fn new(x0: f64, n: usize) -> Result<Self> {
        if !(x0.is_finite() && x0 > 0.0) {
            return Err(Error::InvalidInput(format!(
                "interval end must be finite and positive, got {x0}"
            )));
        }
        if n == 0 {
            return Err(Error::InvalidInput("number of steps must be positive".into()));
        }
        Ok(Grid { x0, n })
    }

    /// Grid on `[0, x0]` whose step is as close as possible to `h`.
    pub fn with_step(x0: f64, h: f64) -> Result<Self> {
        if !(h.is_finite() && h > 0.0) {
            return Err(Error::InvalidInput(format!("step must be positive, got {h}")));
        }
        Grid::new(x0, ((x0 / h).round() as usize).max(1))
    }

    pub fn x0(&self) -> f64 {
        self.x0
    }

    pub fn steps(&self) -> usize {
        self.n
    }

    pub fn step(&self) -> f64 {
        self.x0 / self.n as f64
    }

    pub fn node_count(&self) -> usize {
        self.n + 1
    }

    pub fn refined_len(&self) -> usize {
        2 * self.n + 1
    }

    /// Position of refined node `j`, exact at both ends.
    pub fn refined_x(&self, j: usize) -> f64 {
        debug_assert!(j <= 2 * self.n);
        self.x0 * j as f64 / (2 * self.n) as f64
    }

    /// Position of full node `k`.
    pub fn node_x(&self, k: usize) -> f64 {
        self.refined_x(2 * k)
    }

    pub fn refined_nodes(&self) -> Vec<f64> {
        (0..self.refined_len()).map(|j| self.refined_x(j)).collect()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.node_count()).map(|k| self.node_x(k)).collect()
    }

    /// Same interval with the step halved.
    pub fn refine(&self) -> Grid {
        Grid {
            x0: self.x0,
            n: 2 * self.n,
        }
    }

    /// Index of the refined node at `x`, if `x` lies on one (to rounding).
    pub fn refined_index(&self, x: f64) -> Option<usize> {
        let t = x / self.x0 * (2 * self.n) as f64;
        let j = t.round();
        if j < 0.0 || j > (2 * self.n) as f64 {
            return None;
        }
        ((t - j).abs() <= 1e-9).then_some(j as usize)
    }
}
