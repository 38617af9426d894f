use num_complex::Complex64;

use super::{
    p_inverse, real_to_complex, require_positive, require_real, scalar, ConsistencyCheck, Context,
    InverseRecipe, ReducedProblem,
};
use crate::antidiagonal::AntidiagonalProblem;
use crate::error::Result;
use crate::numerics::{
    cumulative_samples, integrate_linear_system, CoefficientFunction, DerivativeMode, Grid,
    Trajectory,
};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `u'' + a(x) u = 0`, `u(0) = u0`, `u'(0) = u1`, with `a > 0`.
#[derive(Debug, Clone)]
pub struct SchrodingerInput {
    pub a: CoefficientFunction,
    pub u0: Complex64,
    pub u1: Complex64,
    pub grid: Grid,
    pub derivative_mode: DerivativeMode,
}

impl SchrodingerInput {
    pub fn new(a: CoefficientFunction, u0: Complex64, u1: Complex64, grid: Grid) -> Self {
        SchrodingerInput {
            a,
            u0,
            u1,
            grid,
            derivative_mode: DerivativeMode::Analytic,
        }
    }

    /// `(u, u')` by direct RK4 on the first-order system.
    pub fn oracle(&self) -> Result<Trajectory> {
        let a = self.a.clone();
        integrate_linear_system(
            move |x| {
                let zero = Complex64::new(0.0, 0.0);
                [[zero, Complex64::new(1.0, 0.0)], [-a.eval(x), zero]]
            },
            None,
            [self.u0, self.u1],
            &self.grid,
        )
    }
}

/// Reduced coefficient `c0 = (i a'/(4a)) exp(-2i ∫√a)`, with
/// `W(0) = (1/√2)(i u0 + u1/√a(0), u0 + i u1/√a(0))` and inverse
/// `V = diag(e^{∫b0}, e^{∫conj b0}) W`, `U = P⁻¹ V`, `b0 = i√a − a'/(4a)`.
pub fn reduce_schrodinger(input: &SchrodingerInput) -> Result<ReducedProblem> {
    let grid = input.grid;
    let a = require_real(&input.a.sample(&grid)?, &grid, "potential a", "")?;
    require_positive(&a, &grid, "potential a")?;
    let da = require_real(
        &input.a.sample_derivative(&grid, input.derivative_mode)?,
        &grid,
        "derivative of a",
        "",
    )?;
    let step = grid.step();

    let sqrt_a: Vec<f64> = a.iter().map(|v| v.sqrt()).collect();
    let phase = cumulative_samples(&real_to_complex(&sqrt_a), step);
    let ratio: Vec<f64> = a.iter().zip(&da).map(|(a, d)| d / (4.0 * a)).collect();
    let c0: Vec<Complex64> = ratio
        .iter()
        .zip(&phase)
        .map(|(r, ph)| I * *r * (-2.0 * I * ph).exp())
        .collect();
    let b0: Vec<Complex64> = sqrt_a
        .iter()
        .zip(&ratio)
        .map(|(s, r)| Complex64::new(-r, *s))
        .collect();
    let big_b = cumulative_samples(&b0, step);
    let m1: Vec<Complex64> = big_b.iter().map(|z| z.exp()).collect();
    let m2: Vec<Complex64> = big_b.iter().map(|z| z.conj().exp()).collect();

    let s = std::f64::consts::FRAC_1_SQRT_2;
    let scaled = input.u1 / sqrt_a[0];
    let w0 = [(I * input.u0 + scaled) * s, (input.u0 + I * scaled) * s];

    let ones = vec![Complex64::new(1.0, 0.0); sqrt_a.len()];
    let f = CoefficientFunction::tabulated(&scalar(grid, c0)?).named("c0");
    Ok(ReducedProblem {
        reduced: AntidiagonalProblem::homogeneous(f, w0, grid),
        inverse: InverseRecipe {
            multipliers: (scalar(grid, m1)?, scalar(grid, m2)?),
            p_inverse: Some(p_inverse()),
            component_map: Some((scalar(grid, ones)?, scalar(grid, real_to_complex(&sqrt_a))?)),
        },
        context: Context::Schrodinger,
        derivative_mode: input.derivative_mode,
        consistency: Some(ConsistencyCheck {
            scale: sqrt_a.iter().map(|s| Complex64::new(1.0 / s, 0.0)).collect(),
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::antidiagonal::Method;
    use crate::error::Error;
    use crate::reductions::{solve_reduced, SolveOptions};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn grid() -> Grid {
        Grid::new(1.0, 1000).unwrap()
    }

    fn solve(input: &SchrodingerInput) -> crate::reductions::ReducedSolution {
        solve_reduced(&reduce_schrodinger(input).unwrap(), SolveOptions::default()).unwrap()
    }

    #[test]
    fn unit_potential_gives_cosine() {
        let input = SchrodingerInput::new(CoefficientFunction::constant(c(1.0)), c(1.0), c(0.0), grid());
        let rp = reduce_schrodinger(&input).unwrap();
        assert!(rp.reduced.f.sample(&input.grid).unwrap().iter().all(|z| *z == c(0.0)));
        let sol = solve(&input);
        for (j, x) in grid().refined_nodes().into_iter().enumerate() {
            assert!((sol.physical.at(j, 0) - c(x.cos())).norm() < 1e-12);
            assert!((sol.physical.at(j, 1) - c(-x.sin())).norm() < 1e-12);
        }
        assert!(sol.metadata.consistency_residual.unwrap() < 1e-10);
        assert!(sol.metadata.warnings.is_empty());
    }

    #[test]
    fn constant_potential_gives_sine() {
        let input = SchrodingerInput::new(CoefficientFunction::constant(c(4.0)), c(0.0), c(1.0), grid());
        let sol = solve(&input);
        for (j, x) in grid().refined_nodes().into_iter().enumerate() {
            assert!((sol.physical.at(j, 0) - c((2.0 * x).sin() / 2.0)).norm() < 1e-8);
        }
    }

    #[test]
    fn variable_potential_matches_oracle() {
        let a = CoefficientFunction::real(|x| (1.0 + x) * (1.0 + x)).with_derivative(|x| c(2.0 * (1.0 + x)));
        let input = SchrodingerInput::new(a, c(1.0), Complex64::new(0.5, -0.25), grid());
        let oracle = input.oracle().unwrap();
        for method in [Method::Integrator, Method::Series { max_order: 40, tol: 1e-16 }] {
            let sol = solve_reduced(&reduce_schrodinger(&input).unwrap(), SolveOptions { method, emit_intermediates: true })
                .unwrap();
            assert!(sol.physical.max_abs_diff(&oracle) < 1e-7, "{method:?}");
            assert!(sol.metadata.consistency_residual.unwrap() < 1e-6);
            let inter = sol.intermediates.unwrap();
            assert_eq!(inter.u.at(0, 0), sol.physical.at(0, 0));
            assert_eq!(inter.w.at(0, 0), inter.v.at(0, 0));
        }
    }

    #[test]
    fn finite_difference_mode_is_recorded() {
        let a = CoefficientFunction::real(|x| 2.0 + x.sin());
        let mut input = SchrodingerInput::new(a, c(1.0), c(0.0), grid());
        assert!(matches!(reduce_schrodinger(&input), Err(Error::InvalidInput(_))));
        input.derivative_mode = DerivativeMode::FiniteDifference;
        let sol = solve(&input);
        assert_eq!(sol.metadata.derivative_mode, DerivativeMode::FiniteDifference);
        assert!(sol.metadata.warnings.iter().any(|w| w.contains("finite differences")));
        assert!(sol.physical.max_abs_diff(&input.oracle().unwrap()) < 1e-6);
    }

    #[test]
    fn rejects_non_positive_or_complex_potential() {
        let neg = SchrodingerInput::new(CoefficientFunction::real(|x| x - 0.5).with_derivative(|_| c(1.0)), c(1.0), c(0.0), grid());
        let err = reduce_schrodinger(&neg).unwrap_err();
        assert!(err.to_string().contains("positive"), "{err}");
        let complex = SchrodingerInput::new(CoefficientFunction::constant(Complex64::new(1.0, 1.0)), c(1.0), c(0.0), grid());
        assert!(reduce_schrodinger(&complex).unwrap_err().to_string().contains("real-valued"));
    }
}
