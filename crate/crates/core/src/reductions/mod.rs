//! Reductions of four physical models to an antidiagonal conjugate system,
//! with the exact inverse transforms back to the physical unknowns.
//!
//! Every pipeline has the same shape: a change of variables `W = D(x)·M·U`
//! with `M` constant (the matrix `P` below, or the identity) and `D` diagonal,
//! chosen so that `W' = [[0, c], [conj c, 0]] W (+ G)`. Solving for `W` and
//! undoing the substitution gives the physical solution.
//!
//! ```text
//! P = (1/√2) [[i, 1], [1, i]]        P⁻¹ = (1/√2) [[-i, 1], [1, -i]]
//! ```

mod helmholtz;
mod kubelka_munk;
mod schrodinger;
mod zakharov_shabat;

use std::fmt;

use num_complex::Complex64;

pub use helmholtz::{reduce_helmholtz, HelmholtzInput};
pub use kubelka_munk::{reduce_kubelka_munk, KubelkaMunkInput};
pub use schrodinger::{reduce_schrodinger, SchrodingerInput};
pub use zakharov_shabat::{reduce_zakharov_shabat, zakharov_shabat_transfer_matrix, ZakharovShabatInput};

use crate::antidiagonal::{self, AntidiagonalProblem, Method, SeriesSummary};
use crate::error::{Error, Result};
use crate::numerics::{differentiate_samples, DerivativeMode, Grid, Mat2, Trajectory, Vec2};

/// Consistency residual above which a warning is attached.
pub const CONSISTENCY_WARNING: f64 = 1e-6;

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

pub(crate) fn p_matrix() -> Mat2 {
    let s = FRAC_1_SQRT_2;
    [
        [Complex64::new(0.0, s), Complex64::new(s, 0.0)],
        [Complex64::new(s, 0.0), Complex64::new(0.0, s)],
    ]
}

pub(crate) fn p_inverse() -> Mat2 {
    let s = FRAC_1_SQRT_2;
    [
        [Complex64::new(0.0, -s), Complex64::new(s, 0.0)],
        [Complex64::new(s, 0.0), Complex64::new(0.0, -s)],
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Context {
    Schrodinger,
    Helmholtz,
    ZakharovShabat,
    KubelkaMunk,
}

impl Context {
    pub const ALL: [Context; 4] = [
        Context::Schrodinger,
        Context::Helmholtz,
        Context::ZakharovShabat,
        Context::KubelkaMunk,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Context::Schrodinger => "schrodinger",
            Context::Helmholtz => "helmholtz",
            Context::ZakharovShabat => "zakharov_shabat",
            Context::KubelkaMunk => "kubelka_munk",
        }
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// How to map the reduced solution `W` back to physical variables:
/// `V = diag(m1, m2) W`, then `U = P⁻¹ V` (if requested), then
/// `physical = diag(s1, s2) U` (if a component map is given).
#[derive(Debug, Clone)]
pub struct InverseRecipe {
    pub multipliers: (Trajectory, Trajectory),
    pub p_inverse: Option<Mat2>,
    pub component_map: Option<(Trajectory, Trajectory)>,
}

/// Internal check `U2 ≈ scale · du/dx`, with `u` the first physical component.
#[derive(Debug, Clone)]
pub(crate) struct ConsistencyCheck {
    pub scale: Vec<Complex64>,
}

#[derive(Debug, Clone)]
pub struct ReducedProblem {
    pub reduced: AntidiagonalProblem,
    pub inverse: InverseRecipe,
    pub context: Context,
    pub derivative_mode: DerivativeMode,
    pub(crate) consistency: Option<ConsistencyCheck>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub method: Method,
    pub emit_intermediates: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            method: Method::Integrator,
            emit_intermediates: false,
        }
    }
}

/// Trajectories of every stage of the inverse chain.
#[derive(Debug, Clone)]
pub struct Intermediates {
    pub w: Trajectory,
    pub v: Trajectory,
    pub u: Trajectory,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReductionMetadata {
    pub context: Context,
    pub derivative_mode: DerivativeMode,
    pub max_det_drift: Option<f64>,
    pub compatibility_residual: Option<f64>,
    pub consistency_residual: Option<f64>,
    pub series: Option<SeriesSummary>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct ReducedSolution {
    /// Physical unknowns: `(u, u')` for Schrödinger and Helmholtz,
    /// `(v1, v2)` for Zakharov–Shabat, `(F₊, F₋)` for Kubelka–Munk.
    pub physical: Trajectory,
    pub intermediates: Option<Intermediates>,
    pub metadata: ReductionMetadata,
}

/// Solves the reduced system and maps the result back node by node.
pub fn solve_reduced(rp: &ReducedProblem, options: SolveOptions) -> Result<ReducedSolution> {
    let solution = antidiagonal::solve(&rp.reduced, options.method)?;
    let w = solution.trajectory;
    let grid = *w.grid();
    let (m1, m2) = (&rp.inverse.multipliers.0, &rp.inverse.multipliers.1);
    let v = map_pointwise(&w, |j, s| [m1.at(j, 0) * s[0], m2.at(j, 0) * s[1]])?;
    let u = match &rp.inverse.p_inverse {
        Some(m) => map_pointwise(&v, |_, s| crate::numerics::mat_vec(m, &s))?,
        None => v.clone(),
    };
    let physical = match &rp.inverse.component_map {
        Some((s1, s2)) => map_pointwise(&u, |j, s| [s1.at(j, 0) * s[0], s2.at(j, 0) * s[1]])?,
        None => u.clone(),
    };

    let mut warnings = solution.diagnostics.warnings;
    let consistency_residual = rp.consistency.as_ref().map(|check| {
        let du = differentiate_samples(physical.component(0), grid.step() / 2.0);
        u.component(1)
            .iter()
            .zip(&du)
            .zip(&check.scale)
            .map(|((u2, d), s)| (u2 - s * d).norm())
            .fold(0.0, f64::max)
    });
    if let Some(r) = consistency_residual {
        if r > CONSISTENCY_WARNING {
            warnings.push(format!(
                "consistency residual {r:e} exceeds {CONSISTENCY_WARNING:e}"
            ));
        }
    }
    if rp.derivative_mode == DerivativeMode::FiniteDifference {
        warnings.push("coefficient derivatives taken by finite differences".into());
    }

    Ok(ReducedSolution {
        physical,
        intermediates: options.emit_intermediates.then_some(Intermediates { w, v, u }),
        metadata: ReductionMetadata {
            context: rp.context,
            derivative_mode: rp.derivative_mode,
            max_det_drift: solution.diagnostics.max_det_drift,
            compatibility_residual: solution.diagnostics.compatibility_residual,
            consistency_residual,
            series: solution.diagnostics.series,
            warnings,
        },
    })
}

fn map_pointwise(t: &Trajectory, f: impl Fn(usize, Vec2) -> Vec2) -> Result<Trajectory> {
    let n = t.grid().refined_len();
    let (mut a, mut b) = (Vec::with_capacity(n), Vec::with_capacity(n));
    for j in 0..n {
        let [x, y] = f(j, [t.at(j, 0), t.at(j, 1)]);
        a.push(x);
        b.push(y);
    }
    Trajectory::pair(*t.grid(), a, b)
}

/// Rejects samples that are not real within rounding.
pub(crate) fn require_real(samples: &[Complex64], grid: &Grid, what: &str, guidance: &str) -> Result<Vec<f64>> {
    for (j, z) in samples.iter().enumerate() {
        if z.im.abs() > 1e-12 * (1.0 + z.re.abs()) {
            return Err(Error::InvalidInput(format!(
                "{what} must be real-valued, but is {z} at x = {}{guidance}",
                grid.refined_x(j)
            )));
        }
    }
    Ok(samples.iter().map(|z| z.re).collect())
}

/// Rejects samples that are not strictly positive.
pub(crate) fn require_positive(samples: &[f64], grid: &Grid, what: &str) -> Result<()> {
    match samples.iter().position(|v| v.is_nan() || *v <= 0.0) {
        None => Ok(()),
        Some(j) => Err(Error::InvalidInput(format!(
            "{what} must be positive, but is {} at x = {}",
            samples[j],
            grid.refined_x(j)
        ))),
    }
}

pub(crate) fn scalar(grid: Grid, samples: Vec<Complex64>) -> Result<Trajectory> {
    Trajectory::scalar(grid, samples)
}

pub(crate) fn real_to_complex(v: &[f64]) -> Vec<Complex64> {
    v.iter().map(|&x| Complex64::new(x, 0.0)).collect()
}
