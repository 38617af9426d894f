use num_complex::Complex64;

use super::Grid;
use crate::error::{Error, Result};

/// Samples of a one- or two-component complex function at every refined
/// node of a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    grid: Grid,
    components: Vec<Vec<Complex64>>,
}

impl Trajectory {
    /// Validates the sample count and finiteness of every component.
    pub fn new(grid: Grid, components: Vec<Vec<Complex64>>) -> Result<Self> {
        if components.is_empty() || components.len() > 2 {
            return Err(Error::InvalidInput(format!(
                "a trajectory has 1 or 2 components, got {}",
                components.len()
            )));
        }
        for (c, samples) in components.iter().enumerate() {
            if samples.len() != grid.refined_len() {
                return Err(Error::InvalidInput(format!(
                    "component {c} has {} samples, expected {}",
                    samples.len(),
                    grid.refined_len()
                )));
            }
            check_finite(&grid, samples, &format!("trajectory component {}", c + 1))?;
        }
        Ok(Trajectory { grid, components })
    }

    pub fn scalar(grid: Grid, samples: Vec<Complex64>) -> Result<Self> {
        Trajectory::new(grid, vec![samples])
    }

    pub fn pair(grid: Grid, first: Vec<Complex64>, second: Vec<Complex64>) -> Result<Self> {
        Trajectory::new(grid, vec![first, second])
    }

    /// Constant trajectory.
    pub fn constant(grid: Grid, values: &[Complex64]) -> Result<Self> {
        Trajectory::new(
            grid,
            values.iter().map(|&v| vec![v; grid.refined_len()]).collect(),
        )
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn n_components(&self) -> usize {
        self.components.len()
    }

    pub fn component(&self, c: usize) -> &[Complex64] {
        &self.components[c]
    }

    pub fn into_components(self) -> Vec<Vec<Complex64>> {
        self.components
    }

    /// Value of component `c` at refined node `j`.
    pub fn at(&self, j: usize, c: usize) -> Complex64 {
        self.components[c][j]
    }

    /// All components at refined node `j`.
    pub fn state(&self, j: usize) -> Vec<Complex64> {
        self.components.iter().map(|s| s[j]).collect()
    }

    /// All components at `x0`.
    pub fn last(&self) -> Vec<Complex64> {
        self.state(self.grid.refined_len() - 1)
    }

    /// `(x, state)` at each full-grid node, half-steps skipped.
    pub fn full_nodes(&self) -> impl Iterator<Item = (f64, Vec<Complex64>)> + '_ {
        (0..self.grid.node_count()).map(move |k| (self.grid.node_x(k), self.state(2 * k)))
    }

    /// Largest pointwise distance to `other` over all refined nodes and components.
    pub fn max_abs_diff(&self, other: &Trajectory) -> f64 {
        assert_eq!(self.components.len(), other.components.len());
        self.components
            .iter()
            .zip(&other.components)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(u, v)| (u - v).norm()))
            .fold(0.0, f64::max)
    }

    /// Sup-norm over refined nodes and components.
    pub fn sup_norm(&self) -> f64 {
        self.components
            .iter()
            .flat_map(|s| s.iter().map(|z| z.norm()))
            .fold(0.0, f64::max)
    }
}

pub(crate) fn check_finite(grid: &Grid, samples: &[Complex64], what: &str) -> Result<()> {
    match samples.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
        None => Ok(()),
        Some(node) => Err(Error::NonFinite {
            what: what.to_string(),
            node,
            x: grid.refined_x(node),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_count_enforced() {
        let g = Grid::new(1.0, 2).unwrap();
        assert!(Trajectory::scalar(g, vec![Complex64::new(0.0, 0.0); 4]).is_err());
        assert!(Trajectory::scalar(g, vec![Complex64::new(0.0, 0.0); 5]).is_ok());
        assert!(Trajectory::new(g, vec![]).is_err());
    }

    #[test]
    fn non_finite_reports_node() {
        let g = Grid::new(1.0, 2).unwrap();
        let mut s = vec![Complex64::new(1.0, 0.0); 5];
        s[3] = Complex64::new(f64::NAN, 0.0);
        match Trajectory::scalar(g, s) {
            Err(Error::NonFinite { node, x, .. }) => {
                assert_eq!(node, 3);
                assert_eq!(x, 0.75);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn full_nodes_skip_half_steps() {
        let g = Grid::new(1.0, 2).unwrap();
        let t = Trajectory::constant(g, &[Complex64::new(1.0, 2.0)]).unwrap();
        let rows: Vec<_> = t.full_nodes().collect();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[1].0, 0.5);
    }
}
