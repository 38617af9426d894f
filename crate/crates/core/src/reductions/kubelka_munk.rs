use num_complex::Complex64;

use super::{p_inverse, p_matrix, real_to_complex, require_real, scalar, Context, InverseRecipe, ReducedProblem};
use crate::antidiagonal::AntidiagonalProblem;
use crate::error::{Error, Result};
use crate::numerics::{cumulative_samples, integrate_linear_system, mat_vec, CoefficientFunction, Grid, Trajectory};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `F' = [[-(K+S), S], [-S, K+S]] F` for the fluxes `F = (F₊, F₋)`.
#[derive(Debug, Clone)]
pub struct KubelkaMunkInput {
    pub k: CoefficientFunction,
    pub s: CoefficientFunction,
    pub f0: [f64; 2],
    pub grid: Grid,
}

impl KubelkaMunkInput {
    pub fn oracle(&self) -> Result<Trajectory> {
        let (k, s) = (self.k.clone(), self.s.clone());
        integrate_linear_system(
            move |x| {
                let (k, s) = (k.eval(x), s.eval(x));
                [[-(k + s), s], [-s, k + s]]
            },
            None,
            [Complex64::new(self.f0[0], 0.0), Complex64::new(self.f0[1], 0.0)],
            &self.grid,
        )
    }
}

/// Reduced coefficient `c2 = -i(K+S) exp(-2i ∫S)`, `W(0) = P F(0)`, inverse
/// `V = diag(e^{i∫S}, e^{-i∫S}) W`, `F = P⁻¹ V`.
pub fn reduce_kubelka_munk(input: &KubelkaMunkInput) -> Result<ReducedProblem> {
    let grid = input.grid;
    if !input.f0.iter().all(|v| v.is_finite()) {
        return Err(Error::InvalidInput("initial fluxes must be finite".into()));
    }
    let k = require_real(&input.k.sample(&grid)?, &grid, "absorption K", "")?;
    let s = require_real(&input.s.sample(&grid)?, &grid, "scattering S", "")?;
    for (values, name) in [(&k, "absorption K"), (&s, "scattering S")] {
        if let Some(j) = values.iter().position(|v| *v < 0.0) {
            return Err(Error::InvalidInput(format!(
                "{name} must be non-negative, but is {} at x = {}",
                values[j],
                grid.refined_x(j)
            )));
        }
    }
    let big_s = cumulative_samples(&real_to_complex(&s), grid.step());
    let c2: Vec<Complex64> = k
        .iter()
        .zip(&s)
        .zip(&big_s)
        .map(|((k, s), sig)| -I * (k + s) * (-2.0 * I * sig).exp())
        .collect();
    let m1 = big_s.iter().map(|sig| (I * sig).exp()).collect();
    let m2 = big_s.iter().map(|sig| (-I * sig).exp()).collect();
    let w0 = mat_vec(&p_matrix(), &[Complex64::new(input.f0[0], 0.0), Complex64::new(input.f0[1], 0.0)]);
    Ok(ReducedProblem {
        reduced: AntidiagonalProblem::homogeneous(
            CoefficientFunction::tabulated(&scalar(grid, c2)?).named("c2"),
            w0,
            grid,
        ),
        inverse: InverseRecipe {
            multipliers: (scalar(grid, m1)?, scalar(grid, m2)?),
            p_inverse: Some(p_inverse()),
            component_map: None,
        },
        context: Context::KubelkaMunk,
        derivative_mode: Default::default(),
        consistency: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reductions::{solve_reduced, SolveOptions};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn grid() -> Grid {
        Grid::new(1.0, 1000).unwrap()
    }

    fn solve(input: &KubelkaMunkInput) -> Trajectory {
        solve_reduced(&reduce_kubelka_munk(input).unwrap(), SolveOptions::default())
            .unwrap()
            .physical
    }

    #[test]
    fn pure_absorption() {
        let input = KubelkaMunkInput {
            k: CoefficientFunction::constant(c(0.8)),
            s: CoefficientFunction::zero(),
            f0: [1.0, 2.0],
            grid: grid(),
        };
        let f = solve(&input);
        for (j, x) in grid().refined_nodes().into_iter().enumerate() {
            assert!((f.at(j, 0) - c((-0.8 * x).exp())).norm() < 1e-10);
            assert!((f.at(j, 1) - c(2.0 * (0.8 * x).exp())).norm() < 1e-10);
        }
    }

    #[test]
    fn pure_scattering_is_nilpotent() {
        let input = KubelkaMunkInput {
            k: CoefficientFunction::zero(),
            s: CoefficientFunction::constant(c(0.5)),
            f0: [1.0, 0.0],
            grid: grid(),
        };
        let end = solve(&input).last();
        assert!((end[0] - c(0.5)).norm() < 1e-10);
        assert!((end[1] - c(-0.5)).norm() < 1e-10);
    }

    #[test]
    fn variable_coefficients_match_oracle() {
        let input = KubelkaMunkInput {
            k: CoefficientFunction::real(|x| 0.1 + 0.05 * x),
            s: CoefficientFunction::real(|x| 0.3 * (-x).exp()),
            f0: [1.0, 0.4],
            grid: grid(),
        };
        assert!(solve(&input).max_abs_diff(&input.oracle().unwrap()) < 1e-7);
    }

    #[test]
    fn negative_scattering_is_rejected() {
        let input = KubelkaMunkInput {
            k: CoefficientFunction::zero(),
            s: CoefficientFunction::constant(c(-0.1)),
            f0: [1.0, 0.0],
            grid: grid(),
        };
        assert!(reduce_kubelka_munk(&input).unwrap_err().to_string().contains("non-negative"));
    }
}
