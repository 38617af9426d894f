//! Antidiagonal conjugate systems `U' = [[0, f], [conj f, 0]] U (+ G)` and
//! the transforms that bring a general 2x2 system into that form.
//!
//! The homogeneous fundamental matrix is `[[C_f, S_f], [conj S_f, conj C_f]]`
//! with `C_f = (Z₊ + Z₋)/2`, `S_f = (Z₊ − Z₋)/2`, where `Z±' = ±f conj(Z±)`,
//! `Z±(0) = 1`. Forced systems decouple the same way when
//! `g2 = i conj(g1)` and `u2⁰ = i conj(u1⁰)`.

use num_complex::Complex64;

use crate::antilinear::z_pair_sampled;
use crate::error::{Error, Result};
use crate::numerics::{
    check_finite, cumulative_samples, integrate_tabulated, CoefficientFunction, Grid, Mat2,
    Trajectory, Vec2,
};
use crate::picard::{kernels_sampled, SeriesKernels, Truncation};

/// `||C_f|² − |S_f|² − 1|` above which a pair is flagged.
pub const DET_DRIFT_WARNING: f64 = 1e-5;

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Pointwise tolerance for the structural conditions: `1e-12 (1 + scale)`.
pub fn condition_tolerance(scale: f64) -> f64 {
    1e-12 * (1.0 + scale)
}

/// Route to the fundamental pair.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Method {
    /// RK4 on the decoupled `Z±` problems.
    #[default]
    Integrator,
    /// Truncated Picard series.
    Series { max_order: usize, tol: f64 },
}

#[derive(Debug, Clone)]
pub struct Forcing {
    pub g1: CoefficientFunction,
    pub g2: CoefficientFunction,
}

impl Forcing {
    /// `(g1, i conj g1)`, the compatible forcing generated by `g1`.
    pub fn compatible(g1: CoefficientFunction) -> Self {
        let inner = g1.clone();
        let g2 = CoefficientFunction::new(move |x| I * inner.eval(x).conj()).named("i conj(g1)");
        Forcing { g1, g2 }
    }
}

#[derive(Debug, Clone)]
pub struct AntidiagonalProblem {
    pub f: CoefficientFunction,
    pub forcing: Option<Forcing>,
    pub u0: Vec2,
    pub grid: Grid,
}

impl AntidiagonalProblem {
    pub fn homogeneous(f: CoefficientFunction, u0: Vec2, grid: Grid) -> Self {
        AntidiagonalProblem {
            f,
            forcing: None,
            u0,
            grid,
        }
    }

    pub fn forced(f: CoefficientFunction, forcing: Forcing, u0: Vec2, grid: Grid) -> Self {
        AntidiagonalProblem {
            f,
            forcing: Some(forcing),
            u0,
            grid,
        }
    }

    /// Direct RK4 integration of the 2x2 system, independent of the
    /// `Z±` machinery.
    pub fn oracle(&self) -> Result<Trajectory> {
        let fs = self.f.sample(&self.grid)?;
        let ms: Vec<Mat2> = fs.iter().map(|&f| [[ZERO, f], [f.conj(), ZERO]]).collect();
        let gs = match &self.forcing {
            None => None,
            Some(forcing) => {
                let g1 = forcing.g1.sample(&self.grid)?;
                let g2 = forcing.g2.sample(&self.grid)?;
                Some(g1.into_iter().zip(g2).map(|(a, b)| [a, b]).collect::<Vec<Vec2>>())
            }
        };
        integrate_tabulated(&ms, gs.as_deref(), self.u0, &self.grid)
    }
}

/// Summary of a truncated series evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesSummary {
    pub order: usize,
    pub truncation: Truncation,
    pub last_term_norm: f64,
    pub tail_bound: f64,
    pub l1_norm: f64,
    pub slow_convergence: bool,
}

impl From<&SeriesKernels> for SeriesSummary {
    fn from(k: &SeriesKernels) -> Self {
        SeriesSummary {
            order: k.order,
            truncation: k.truncation,
            last_term_norm: k.last_term_norm,
            tail_bound: k.tail_bound,
            l1_norm: k.l1_norm,
            slow_convergence: k.slow_convergence,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Diagnostics {
    /// `max ||C_f|² − |S_f|² − 1|`, homogeneous solves only.
    pub max_det_drift: Option<f64>,
    /// Largest deviation from `g2 = i conj g1`, `u2⁰ = i conj u1⁰`.
    pub compatibility_residual: Option<f64>,
    pub series: Option<SeriesSummary>,
    pub warnings: Vec<String>,
}

/// Entries of `[[C_f, S_f], [conj S_f, conj C_f]]`.
#[derive(Debug, Clone)]
pub struct FundamentalPair {
    pub c_f: Trajectory,
    pub s_f: Trajectory,
    pub diagnostics: Diagnostics,
}

impl FundamentalPair {
    pub fn matrix(&self, j: usize) -> Mat2 {
        let (c, s) = (self.c_f.at(j, 0), self.s_f.at(j, 0));
        [[c, s], [s.conj(), c.conj()]]
    }

    /// `U(x_j) = Φ(x_j) U0` at every refined node.
    pub fn apply(&self, u0: Vec2) -> Result<Trajectory> {
        let (c, s) = (self.c_f.component(0), self.s_f.component(0));
        let first = c.iter().zip(s).map(|(c, s)| c * u0[0] + s * u0[1]).collect();
        let second = c
            .iter()
            .zip(s)
            .map(|(c, s)| s.conj() * u0[0] + c.conj() * u0[1])
            .collect();
        Trajectory::pair(*self.c_f.grid(), first, second)
    }
}

pub fn fundamental_pair(f: &CoefficientFunction, grid: &Grid, method: Method) -> Result<FundamentalPair> {
    let fs = f.sample(grid)?;
    fundamental_pair_sampled(&fs, grid, method)
}

pub(crate) fn fundamental_pair_sampled(fs: &[Complex64], grid: &Grid, method: Method) -> Result<FundamentalPair> {
    let mut diagnostics = Diagnostics::default();
    let (c_f, s_f) = match method {
        Method::Integrator => {
            let z = z_pair_sampled(fs, None, Complex64::new(1.0, 0.0), grid)?;
            let (zp, zm) = (z.z_plus.component(0), z.z_minus.component(0));
            let c = zp.iter().zip(zm).map(|(a, b)| (a + b) / 2.0).collect();
            let s = zp.iter().zip(zm).map(|(a, b)| (a - b) / 2.0).collect();
            (Trajectory::scalar(*grid, c)?, Trajectory::scalar(*grid, s)?)
        }
        Method::Series { max_order, tol } => {
            let ones = vec![Complex64::new(1.0, 0.0); grid.refined_len()];
            let k = kernels_sampled(fs, &ones, grid, max_order, tol)?;
            diagnostics.series = Some(SeriesSummary::from(&k));
            if k.slow_convergence {
                diagnostics.warnings.push(format!(
                    "series route converges slowly: integral of |f| is {:.3}",
                    k.l1_norm
                ));
            }
            (k.c_f, k.s_f)
        }
    };
    let drift = c_f
        .component(0)
        .iter()
        .zip(s_f.component(0))
        .map(|(c, s)| (c.norm_sqr() - s.norm_sqr() - 1.0).abs())
        .fold(0.0, f64::max);
    diagnostics.max_det_drift = Some(drift);
    if drift > DET_DRIFT_WARNING {
        diagnostics
            .warnings
            .push(format!("determinant drift {drift:e} exceeds {DET_DRIFT_WARNING:e}"));
    }
    Ok(FundamentalPair { c_f, s_f, diagnostics })
}

/// A solve together with its diagnostics.
#[derive(Debug, Clone)]
pub struct AntidiagonalSolution {
    pub trajectory: Trajectory,
    pub diagnostics: Diagnostics,
}

/// Dispatches to the homogeneous or forced route.
pub fn solve(problem: &AntidiagonalProblem, method: Method) -> Result<AntidiagonalSolution> {
    match &problem.forcing {
        None => {
            let pair = fundamental_pair(&problem.f, &problem.grid, method)?;
            Ok(AntidiagonalSolution {
                trajectory: pair.apply(problem.u0)?,
                diagnostics: pair.diagnostics,
            })
        }
        Some(forcing) => solve_forced(problem, forcing, method),
    }
}

pub fn solve_homogeneous(problem: &AntidiagonalProblem, method: Method) -> Result<Trajectory> {
    if problem.forcing.is_some() {
        return Err(Error::Precondition(
            "solve_homogeneous called on a forced problem; use solve_nonhomogeneous".into(),
        ));
    }
    Ok(solve(problem, method)?.trajectory)
}

/// Forced solve through the decoupled `Z±` problems. Refuses forcing that
/// violates `g2 = i conj(g1)`, `u2⁰ = i conj(u1⁰)`.
pub fn solve_nonhomogeneous(problem: &AntidiagonalProblem, method: Method) -> Result<Trajectory> {
    let Some(forcing) = &problem.forcing else {
        return Err(Error::Precondition(
            "solve_nonhomogeneous called without forcing; use solve_homogeneous".into(),
        ));
    };
    Ok(solve_forced(problem, forcing, method)?.trajectory)
}

/// Largest pointwise deviation from the compatibility condition and the
/// tolerance it is judged against.
pub fn compatibility_residual(problem: &AntidiagonalProblem) -> Result<(f64, f64)> {
    let Some(forcing) = &problem.forcing else {
        return Ok((0.0, condition_tolerance(0.0)));
    };
    let g1 = forcing.g1.sample(&problem.grid)?;
    let g2 = forcing.g2.sample(&problem.grid)?;
    Ok(compatibility_of(&g1, &g2, problem.u0))
}

fn compatibility_of(g1: &[Complex64], g2: &[Complex64], u0: Vec2) -> (f64, f64) {
    let mut deviation = (u0[1] - I * u0[0].conj()).norm();
    let mut scale = u0[0].norm().max(u0[1].norm());
    for (a, b) in g1.iter().zip(g2) {
        deviation = deviation.max((b - I * a.conj()).norm());
        scale = scale.max(a.norm()).max(b.norm());
    }
    (deviation, condition_tolerance(scale))
}

fn solve_forced(problem: &AntidiagonalProblem, forcing: &Forcing, method: Method) -> Result<AntidiagonalSolution> {
    let grid = &problem.grid;
    let fs = problem.f.sample(grid)?;
    let g1 = forcing.g1.sample(grid)?;
    let g2 = forcing.g2.sample(grid)?;
    let (deviation, tol) = compatibility_of(&g1, &g2, problem.u0);
    if deviation.is_nan() || deviation > tol {
        return Err(Error::Compatibility { max_deviation: deviation });
    }
    let mut diagnostics = Diagnostics {
        compatibility_residual: Some(deviation),
        ..Diagnostics::default()
    };
    let u1_0 = problem.u0[0];
    // U1 = C_{f,h1} + i S_{f,conj h1}
    let u1: Vec<Complex64> = match method {
        Method::Integrator => {
            let z = z_pair_sampled(&fs, Some(&g1), u1_0, grid)?;
            let (zp, zm) = (z.z_plus.component(0), z.z_minus.component(0));
            zp.iter()
                .zip(zm)
                .map(|(a, b)| (a + b) / 2.0 + I * (a - b) / 2.0)
                .collect()
        }
        Method::Series { max_order, tol } => {
            let h1: Vec<Complex64> = cumulative_samples(&g1, grid.step())
                .into_iter()
                .map(|v| v + u1_0)
                .collect();
            let h1_conj: Vec<Complex64> = h1.iter().map(|z| z.conj()).collect();
            let ck = kernels_sampled(&fs, &h1, grid, max_order, tol)?;
            let sk = kernels_sampled(&fs, &h1_conj, grid, max_order, tol)?;
            let summary = SeriesSummary::from(&ck);
            if summary.slow_convergence {
                diagnostics.warnings.push(format!(
                    "series route converges slowly: integral of |f| is {:.3}",
                    summary.l1_norm
                ));
            }
            diagnostics.series = Some(summary);
            ck.c_f
                .component(0)
                .iter()
                .zip(sk.s_f.component(0))
                .map(|(c, s)| c + I * s)
                .collect()
        }
    };
    let u2 = u1.iter().map(|z| I * z.conj()).collect();
    Ok(AntidiagonalSolution {
        trajectory: Trajectory::pair(*grid, u1, u2)?,
        diagnostics,
    })
}

/// `U' = [[p, r], [s, q]] U`, `U(0) = u0`.
#[derive(Debug, Clone)]
pub struct GeneralSystem {
    pub p: CoefficientFunction,
    pub q: CoefficientFunction,
    pub r: CoefficientFunction,
    pub s: CoefficientFunction,
    pub u0: Vec2,
    pub grid: Grid,
}

struct Sampled {
    p: Vec<Complex64>,
    q: Vec<Complex64>,
    r: Vec<Complex64>,
    s: Vec<Complex64>,
}

impl GeneralSystem {
    fn sampled(&self) -> Result<Sampled> {
        Ok(Sampled {
            p: self.p.sample(&self.grid)?,
            q: self.q.sample(&self.grid)?,
            r: self.r.sample(&self.grid)?,
            s: self.s.sample(&self.grid)?,
        })
    }

    /// Direct RK4 integration of the system.
    pub fn oracle(&self) -> Result<Trajectory> {
        let c = self.sampled()?;
        let ms: Vec<Mat2> = (0..c.p.len())
            .map(|j| [[c.p[j], c.r[j]], [c.s[j], c.q[j]]])
            .collect();
        integrate_tabulated(&ms, None, self.u0, &self.grid)
    }
}

fn max_coefficient(c: &Sampled) -> f64 {
    [&c.p, &c.q, &c.r, &c.s]
        .iter()
        .flat_map(|v| v.iter().map(|z| z.norm()))
        .fold(0.0, f64::max)
}

/// Result of the exponential multiplier transform `V = diag(e^{-∫p}, e^{-∫q}) U`.
#[derive(Debug, Clone)]
pub struct DiagonalRemoval {
    /// `p ≡ q ≡ 0`, off-diagonals `r e^{-∫(p-q)}` and `s e^{∫(p-q)}`.
    pub transformed: GeneralSystem,
    /// `(e^{-∫p}, e^{-∫q})`.
    pub back_multipliers: (Trajectory, Trajectory),
}

impl DiagonalRemoval {
    /// `U = diag(e^{∫p}, e^{∫q}) V`.
    pub fn back_transform(&self, v: &Trajectory) -> Result<Trajectory> {
        if v.n_components() != 2 || v.grid() != self.back_multipliers.0.grid() {
            return Err(Error::InvalidInput(
                "back-transform needs a 2-component trajectory on the system grid".into(),
            ));
        }
        let (mp, mq) = (&self.back_multipliers.0, &self.back_multipliers.1);
        let first = v.component(0).iter().zip(mp.component(0)).map(|(a, m)| a / m).collect();
        let second = v.component(1).iter().zip(mq.component(0)).map(|(a, m)| a / m).collect();
        Trajectory::pair(*v.grid(), first, second)
    }
}

pub fn remove_diagonal(sys: &GeneralSystem) -> Result<DiagonalRemoval> {
    let c = sys.sampled()?;
    let step = sys.grid.step();
    let big_p = cumulative_samples(&c.p, step);
    let big_q = cumulative_samples(&c.q, step);
    let mut r = Vec::with_capacity(c.p.len());
    let mut s = Vec::with_capacity(c.p.len());
    for j in 0..c.p.len() {
        let d = big_p[j] - big_q[j];
        r.push(c.r[j] * (-d).exp());
        s.push(c.s[j] * d.exp());
    }
    check_finite(&sys.grid, &r, "transformed upper off-diagonal")?;
    check_finite(&sys.grid, &s, "transformed lower off-diagonal")?;
    let mp: Vec<Complex64> = big_p.iter().map(|z| (-z).exp()).collect();
    let mq: Vec<Complex64> = big_q.iter().map(|z| (-z).exp()).collect();
    let grid = sys.grid;
    let tab = |samples: Vec<Complex64>, name: &str| -> Result<CoefficientFunction> {
        Ok(CoefficientFunction::tabulated(&Trajectory::scalar(grid, samples)?).named(name))
    };
    Ok(DiagonalRemoval {
        transformed: GeneralSystem {
            p: CoefficientFunction::zero(),
            q: CoefficientFunction::zero(),
            r: tab(r, "transformed r")?,
            s: tab(s, "transformed s")?,
            u0: sys.u0,
            grid,
        },
        back_multipliers: (Trajectory::scalar(grid, mp)?, Trajectory::scalar(grid, mq)?),
    })
}

#[derive(Debug, Clone)]
pub struct StrongCondition {
    pub holds: bool,
    pub max_deviation: f64,
    /// Common off-diagonal of the transformed system, when the condition holds.
    pub c1: Option<Trajectory>,
}

/// Equal transformed off-diagonals: `r e^{-∫(p-q)} = s e^{∫(p-q)}`.
/// `tol` defaults to [`condition_tolerance`] of the largest coefficient.
pub fn check_strong_condition(sys: &GeneralSystem, tol: Option<f64>) -> Result<StrongCondition> {
    let c = sys.sampled()?;
    let tol = tol.unwrap_or_else(|| condition_tolerance(max_coefficient(&c)));
    let removal = remove_diagonal(sys)?;
    let r = removal.transformed.r.sample(&sys.grid)?;
    let s = removal.transformed.s.sample(&sys.grid)?;
    let max_deviation = r.iter().zip(&s).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    let holds = max_deviation <= tol;
    Ok(StrongCondition {
        holds,
        max_deviation,
        c1: if holds { Some(Trajectory::scalar(sys.grid, r)?) } else { None },
    })
}

/// `V = [cosh(∫c1) I + sinh(∫c1) Swap] U0`, mapped back to `U`.
pub fn solve_strong_explicit(sys: &GeneralSystem, c1: &Trajectory) -> Result<Trajectory> {
    if c1.n_components() != 1 || *c1.grid() != sys.grid {
        return Err(Error::InvalidInput("c1 must be a scalar trajectory on the system grid".into()));
    }
    let condition = check_strong_condition(sys, None)?;
    if !condition.holds {
        return Err(Error::Precondition(format!(
            "strong condition fails (max deviation {:e})",
            condition.max_deviation
        )));
    }
    let big_c = cumulative_samples(c1.component(0), sys.grid.step());
    let [a, b] = sys.u0;
    let first = big_c.iter().map(|z| z.cosh() * a + z.sinh() * b).collect();
    let second = big_c.iter().map(|z| z.sinh() * a + z.cosh() * b).collect();
    let v = Trajectory::pair(sys.grid, first, second)?;
    remove_diagonal(sys)?.back_transform(&v)
}

#[derive(Debug, Clone)]
pub struct WeakCondition {
    pub holds: bool,
    pub max_deviation: f64,
    /// Antidiagonal form with `f = r e^{-∫(p-q)}`, when the condition holds.
    pub antilinear_form: Option<AntidiagonalProblem>,
}

/// `s = conj(r) exp(-2 Re ∫(p-q))`.
pub fn check_weak_condition(sys: &GeneralSystem, tol: Option<f64>) -> Result<WeakCondition> {
    let c = sys.sampled()?;
    let tol = tol.unwrap_or_else(|| condition_tolerance(max_coefficient(&c)));
    let step = sys.grid.step();
    let big_p = cumulative_samples(&c.p, step);
    let big_q = cumulative_samples(&c.q, step);
    let max_deviation = (0..c.p.len())
        .map(|j| {
            let d = big_p[j] - big_q[j];
            (c.s[j] - c.r[j].conj() * (-2.0 * d.re).exp()).norm()
        })
        .fold(0.0, f64::max);
    let holds = max_deviation <= tol;
    let antilinear_form = if holds {
        let removal = remove_diagonal(sys)?;
        Some(AntidiagonalProblem::homogeneous(removal.transformed.r, sys.u0, sys.grid))
    } else {
        None
    };
    Ok(WeakCondition {
        holds,
        max_deviation,
        antilinear_form,
    })
}
