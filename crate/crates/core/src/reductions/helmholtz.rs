use num_complex::Complex64;

use super::{
    p_inverse, real_to_complex, require_positive, require_real, scalar, ConsistencyCheck, Context,
    InverseRecipe, ReducedProblem,
};
use crate::antidiagonal::{AntidiagonalProblem, Forcing};
use crate::error::{Error, Result};
use crate::numerics::{
    cumulative_samples, integrate_linear_system, CoefficientFunction, DerivativeMode, Grid,
    Trajectory,
};

const I: Complex64 = Complex64::new(0.0, 1.0);
const SPLIT_HINT: &str =
    "; the equation has real coefficients, so solve the real and imaginary parts separately";

/// `(α u')' + β u = f`, `u(0) = u0`, `u'(0) = u1`, with `α, β > 0` and
/// real `f`, `u0`, `u1`.
#[derive(Debug, Clone)]
pub struct HelmholtzInput {
    pub alpha: CoefficientFunction,
    pub beta: CoefficientFunction,
    pub source: CoefficientFunction,
    pub u0: Complex64,
    pub u1: Complex64,
    pub grid: Grid,
    pub derivative_mode: DerivativeMode,
}

impl HelmholtzInput {
    pub fn new(
        alpha: CoefficientFunction,
        beta: CoefficientFunction,
        source: CoefficientFunction,
        u0: f64,
        u1: f64,
        grid: Grid,
    ) -> Self {
        HelmholtzInput {
            alpha,
            beta,
            source,
            u0: Complex64::new(u0, 0.0),
            u1: Complex64::new(u1, 0.0),
            grid,
            derivative_mode: DerivativeMode::Analytic,
        }
    }

    /// `(u, u')` by direct RK4 on the state `(u, α u')`.
    pub fn oracle(&self) -> Result<Trajectory> {
        let (alpha, beta, source) = (self.alpha.clone(), self.beta.clone(), self.source.clone());
        let zero = Complex64::new(0.0, 0.0);
        let forcing = move |x: f64| [zero, source.eval(x)];
        let flux = integrate_linear_system(
            |x| [[zero, 1.0 / alpha.eval(x)], [-beta.eval(x), zero]],
            Some(&forcing),
            [self.u0, self.alpha.eval(0.0) * self.u1],
            &self.grid,
        )?;
        let alphas = self.alpha.sample(&self.grid)?;
        let [u, y]: [Vec<Complex64>; 2] = flux.into_components().try_into().expect("two components");
        let du = y.iter().zip(&alphas).map(|(y, a)| y / a).collect();
        Trajectory::pair(self.grid, u, du)
    }
}

/// Reduced coefficient `c1 = i k exp(-2i ∫√(β/α))` with `k = (αβ)'/(4αβ)`,
/// forcing `g1 = f/√2 · exp(-∫b1)`, `g2 = i conj(g1)`, and inverse
/// `V = diag(e^{∫b1}, e^{∫conj b1}) W`, `U = P⁻¹ V`, `b1 = i√(β/α) + k`.
pub fn reduce_helmholtz(input: &HelmholtzInput) -> Result<ReducedProblem> {
    let grid = input.grid;
    for (value, name) in [(input.u0, "u0"), (input.u1, "u1")] {
        if value.im != 0.0 {
            return Err(Error::InvalidInput(format!(
                "initial value {name} = {value} must be real{SPLIT_HINT}"
            )));
        }
    }
    let alpha = require_real(&input.alpha.sample(&grid)?, &grid, "alpha", "")?;
    let beta = require_real(&input.beta.sample(&grid)?, &grid, "beta", "")?;
    require_positive(&alpha, &grid, "alpha")?;
    require_positive(&beta, &grid, "beta")?;
    let source = require_real(&input.source.sample(&grid)?, &grid, "source", SPLIT_HINT)?;
    let d_alpha = require_real(
        &input.alpha.sample_derivative(&grid, input.derivative_mode)?,
        &grid,
        "derivative of alpha",
        "",
    )?;
    let d_beta = require_real(
        &input.beta.sample_derivative(&grid, input.derivative_mode)?,
        &grid,
        "derivative of beta",
        "",
    )?;
    let step = grid.step();
    let n = alpha.len();

    let k: Vec<f64> = (0..n)
        .map(|j| (d_alpha[j] * beta[j] + alpha[j] * d_beta[j]) / (4.0 * alpha[j] * beta[j]))
        .collect();
    let speed: Vec<f64> = (0..n).map(|j| (beta[j] / alpha[j]).sqrt()).collect();
    let phase = cumulative_samples(&real_to_complex(&speed), step);
    let b1: Vec<Complex64> = (0..n).map(|j| Complex64::new(k[j], speed[j])).collect();
    let big_b = cumulative_samples(&b1, step);

    let c1: Vec<Complex64> = (0..n).map(|j| I * k[j] * (-2.0 * I * phase[j]).exp()).collect();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let g1: Vec<Complex64> = (0..n).map(|j| source[j] * s * (-big_b[j]).exp()).collect();
    let g2: Vec<Complex64> = (0..n).map(|j| I * source[j] * s * (-big_b[j].conj()).exp()).collect();
    let m1: Vec<Complex64> = big_b.iter().map(|z| z.exp()).collect();
    let m2: Vec<Complex64> = big_b.iter().map(|z| z.conj().exp()).collect();

    let root = (alpha[0] * beta[0]).sqrt();
    let w1 = (I * root * input.u0 + alpha[0] * input.u1) * s;
    let w2 = (root * input.u0 + I * alpha[0] * input.u1) * s;

    let tab = |v: Vec<Complex64>, name: &str| -> Result<CoefficientFunction> {
        Ok(CoefficientFunction::tabulated(&scalar(grid, v)?).named(name))
    };
    let inv_root: Vec<Complex64> = (0..n)
        .map(|j| Complex64::new(1.0 / (alpha[j] * beta[j]).sqrt(), 0.0))
        .collect();
    let inv_alpha: Vec<Complex64> = alpha.iter().map(|a| Complex64::new(1.0 / a, 0.0)).collect();
    Ok(ReducedProblem {
        reduced: AntidiagonalProblem::forced(
            tab(c1, "c1")?,
            Forcing {
                g1: tab(g1, "g1")?,
                g2: tab(g2, "g2")?,
            },
            [w1, w2],
            grid,
        ),
        inverse: InverseRecipe {
            multipliers: (scalar(grid, m1)?, scalar(grid, m2)?),
            p_inverse: Some(p_inverse()),
            component_map: Some((scalar(grid, inv_root)?, scalar(grid, inv_alpha)?)),
        },
        context: Context::Helmholtz,
        derivative_mode: input.derivative_mode,
        consistency: Some(ConsistencyCheck {
            scale: real_to_complex(&alpha),
        }),
    })
}
