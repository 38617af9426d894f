use num_complex::Complex64;

use super::{scalar, Context, InverseRecipe, ReducedProblem};
use crate::antidiagonal::{fundamental_pair_sampled, AntidiagonalProblem, Method};
use crate::error::Result;
use crate::numerics::{integrate_linear_system, CoefficientFunction, Grid, Mat2, Trajectory, Vec2};

/// `v' = [[-iξ, q], [conj q, iξ]] v`, `v(0) = v0`.
#[derive(Debug, Clone)]
pub struct ZakharovShabatInput {
    pub q: CoefficientFunction,
    pub xi: f64,
    pub v0: Vec2,
    pub grid: Grid,
}

impl ZakharovShabatInput {
    pub fn oracle(&self) -> Result<Trajectory> {
        let (q, xi) = (self.q.clone(), self.xi);
        integrate_linear_system(
            move |x| {
                let qx = q.eval(x);
                [[Complex64::new(0.0, -xi), qx], [qx.conj(), Complex64::new(0.0, xi)]]
            },
            None,
            self.v0,
            &self.grid,
        )
    }
}

fn phase(xi: f64, x: f64) -> Complex64 {
    Complex64::new(0.0, xi * x).exp()
}

/// Reduced coefficient `q e^{2iξx}`, `W(0) = v0`, inverse
/// `v = diag(e^{-iξx}, e^{iξx}) W`.
pub fn reduce_zakharov_shabat(input: &ZakharovShabatInput) -> Result<ReducedProblem> {
    let grid = input.grid;
    let xs = grid.refined_nodes();
    let q = input.q.sample(&grid)?;
    let f: Vec<Complex64> = q.iter().zip(&xs).map(|(q, &x)| q * phase(2.0 * input.xi, x)).collect();
    let m1 = xs.iter().map(|&x| phase(-input.xi, x)).collect();
    let m2 = xs.iter().map(|&x| phase(input.xi, x)).collect();
    Ok(ReducedProblem {
        reduced: AntidiagonalProblem::homogeneous(
            CoefficientFunction::tabulated(&scalar(grid, f)?).named("q e^{2i xi x}"),
            input.v0,
            grid,
        ),
        inverse: InverseRecipe {
            multipliers: (scalar(grid, m1)?, scalar(grid, m2)?),
            p_inverse: None,
            component_map: None,
        },
        context: Context::ZakharovShabat,
        derivative_mode: Default::default(),
        consistency: None,
    })
}

/// Fundamental matrix of the system at the right end of the grid.
pub fn zakharov_shabat_transfer_matrix(q: &CoefficientFunction, xi: f64, grid: &Grid, method: Method) -> Result<Mat2> {
    let input = ZakharovShabatInput {
        q: q.clone(),
        xi,
        v0: [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        grid: *grid,
    };
    let rp = reduce_zakharov_shabat(&input)?;
    let fs = rp.reduced.f.sample(grid)?;
    let pair = fundamental_pair_sampled(&fs, grid, method)?;
    let last = grid.refined_len() - 1;
    let w = pair.matrix(last);
    let (m1, m2) = (rp.inverse.multipliers.0.at(last, 0), rp.inverse.multipliers.1.at(last, 0));
    Ok([[m1 * w[0][0], m1 * w[0][1]], [m2 * w[1][0], m2 * w[1][1]]])
}
