//! The scalar antilinear ODE `u' = ±f conj(u) + g`.
//!
//! The right-hand side conjugates `u`, so it is real-linear but not
//! complex-linear. Solves go through the realified system for
//! `u = p + i q`:
//!
//! ```text
//! p' = s (fr p + fi q) + gr
//! q' = s (fi p - fr q) + gi
//! ```
//!
//! with `s = ±1`, integrated by fixed-step RK4 on the refined grid.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{rk4, CoefficientFunction, Grid, Trajectory};

/// Sign in front of `f conj(u)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// `u' = f conj(u) + g`, `u(0) = u0` on `grid`.
#[derive(Debug, Clone)]
pub struct AntilinearProblem {
    pub f: CoefficientFunction,
    pub g: Option<CoefficientFunction>,
    pub u0: Complex64,
    pub grid: Grid,
}

impl AntilinearProblem {
    pub fn homogeneous(f: CoefficientFunction, u0: Complex64, grid: Grid) -> Self {
        AntilinearProblem {
            f,
            g: None,
            u0,
            grid,
        }
    }

    pub fn forced(f: CoefficientFunction, g: CoefficientFunction, u0: Complex64, grid: Grid) -> Self {
        AntilinearProblem {
            f,
            g: Some(g),
            u0,
            grid,
        }
    }
}

/// Solves `u' = sign·f conj(u) + g`.
pub fn solve_antilinear(problem: &AntilinearProblem, sign: Sign) -> Result<Trajectory> {
    let fs = problem.f.sample(&problem.grid)?;
    let gs = problem
        .g
        .as_ref()
        .map(|g| g.sample(&problem.grid))
        .transpose()?;
    solve_sampled(&fs, gs.as_deref(), problem.u0, sign, &problem.grid)
}

/// [`solve_antilinear`] with `f` (and `g`) already tabulated on the refined nodes.
pub fn solve_sampled(
    fs: &[Complex64],
    gs: Option<&[Complex64]>,
    u0: Complex64,
    sign: Sign,
    grid: &Grid,
) -> Result<Trajectory> {
    if !(u0.re.is_finite() && u0.im.is_finite()) {
        return Err(Error::InvalidInput(format!("initial value {u0} is not finite")));
    }
    let s = sign.value();
    let states = rk4::integrate(grid, [u0.re, u0.im], "antilinear solution", |j, &[p, q]| {
        let (fr, fi) = (fs[j].re, fs[j].im);
        let (gr, gi) = gs.map_or((0.0, 0.0), |g| (g[j].re, g[j].im));
        [s * (fr * p + fi * q) + gr, s * (fi * p - fr * q) + gi]
    })?;
    Trajectory::scalar(
        *grid,
        states.into_iter().map(|[p, q]| Complex64::new(p, q)).collect(),
    )
}

/// Closed-form solution of `u' = f conj(u)` for constant `f ≠ 0`.
///
/// With `θ = arg f` and `e^{-iθ/2} u0 = a0 + i b0`, the substitution
/// `u = e^{iθ/2} w` splits `w` into a growing real part and a decaying
/// imaginary part: `u(x) = e^{iθ/2} (a0 e^{|f|x} + i b0 e^{-|f|x})`.
pub fn solve_constant_closed_form(f: Complex64, u0: Complex64, x: f64) -> Result<Complex64> {
    if f == Complex64::new(0.0, 0.0) {
        return Err(Error::Precondition("closed form needs f != 0".into()));
    }
    let (modulus, theta) = f.to_polar();
    let half_turn = Complex64::from_polar(1.0, theta / 2.0);
    let w0 = u0 * half_turn.conj();
    let w = Complex64::new(w0.re * (modulus * x).exp(), w0.im * (-modulus * x).exp());
    Ok(half_turn * w)
}

/// Solutions of `Z' = ±f conj(Z)` sharing one initial value.
#[derive(Debug, Clone)]
pub struct ZPair {
    pub z_plus: Trajectory,
    pub z_minus: Trajectory,
}

/// `Z± ' = ±f conj(Z±)`, `Z±(0) = 1`.
pub fn solve_z_pair(f: &CoefficientFunction, grid: &Grid) -> Result<ZPair> {
    let fs = f.sample(grid)?;
    z_pair_sampled(&fs, None, Complex64::new(1.0, 0.0), grid)
}

/// `Z± ' = ±f conj(Z±) + g1`, `Z±(0) = u1⁰`.
pub fn solve_forced_z_pair(
    f: &CoefficientFunction,
    g1: &CoefficientFunction,
    u1_0: Complex64,
    grid: &Grid,
) -> Result<ZPair> {
    let fs = f.sample(grid)?;
    let gs = g1.sample(grid)?;
    z_pair_sampled(&fs, Some(&gs), u1_0, grid)
}

pub(crate) fn z_pair_sampled(
    fs: &[Complex64],
    gs: Option<&[Complex64]>,
    z0: Complex64,
    grid: &Grid,
) -> Result<ZPair> {
    Ok(ZPair {
        z_plus: solve_sampled(fs, gs, z0, Sign::Plus, grid)?,
        z_minus: solve_sampled(fs, gs, z0, Sign::Minus, grid)?,
    })
}
