//! Truncated Picard series for the kernels `C_f`, `S_f` and their forced
//! variants `C_{f,h}`, `S_{f,h}`.
//!
//! The depth-`k` term is a `k`-fold iterated integral whose factors alternate
//! `f, conj f, f, …` from the outside in. Writing `T_{k+1} = ∫₀ˣ f conj(T_k)`
//! produces exactly that alternation, so the series is built one cumulative
//! Simpson pass per depth:
//!
//! * `C_{f,h}` = even-depth terms of the chain started at `T₀ = h`,
//! * `S_{f,h}` = odd-depth terms of the chain started at `T₀ = conj h`.
//!
//! With `h ≡ 1` both chains coincide and give `C_f`, `S_f`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{
    check_finite, cumulative_samples, differentiate_samples, CoefficientFunction, Grid, Trajectory,
};

/// `∫|f|` above which the series route is flagged as slowly convergent.
pub const SLOW_CONVERGENCE_L1: f64 = 3.0;

/// Which criterion ended the series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Truncation {
    MaxOrder,
    Tolerance,
}

#[derive(Debug, Clone)]
pub struct SeriesKernels {
    pub c_f: Trajectory,
    pub s_f: Trajectory,
    /// Deepest nesting included.
    pub order: usize,
    /// Sup-norm of the depth-`order` term.
    pub last_term_norm: f64,
    pub truncation: Truncation,
    /// Sup-norm of each included term, depths `1..=order`.
    pub term_norms: Vec<f64>,
    /// `∫₀^{x0} |f|`.
    pub l1_norm: f64,
    pub slow_convergence: bool,
    /// `sup|h| · Σ_{k>order} L^k / k!` with `L = ∫|f|`.
    pub tail_bound: f64,
}

/// `C_f`, `S_f` truncated at depth `max_order` or at the first term with
/// sup-norm below `tol`.
pub fn series_kernels(
    f: &CoefficientFunction,
    grid: &Grid,
    max_order: usize,
    tol: f64,
) -> Result<SeriesKernels> {
    let fs = f.sample(grid)?;
    let ones = vec![Complex64::new(1.0, 0.0); grid.refined_len()];
    kernels_sampled(&fs, &ones, grid, max_order, tol)
}

/// `C_{f,h}`, `S_{f,h}` with `C_{f,h}(0) = h(0)` and `S_{f,h}(0) = 0`.
pub fn forced_series_kernels(
    f: &CoefficientFunction,
    h: &CoefficientFunction,
    grid: &Grid,
    max_order: usize,
    tol: f64,
) -> Result<SeriesKernels> {
    let fs = f.sample(grid)?;
    let hs = h.sample(grid)?;
    kernels_sampled(&fs, &hs, grid, max_order, tol)
}

pub(crate) fn kernels_sampled(
    fs: &[Complex64],
    hs: &[Complex64],
    grid: &Grid,
    max_order: usize,
    tol: f64,
) -> Result<SeriesKernels> {
    if max_order == 0 {
        return Err(Error::InvalidInput("series order must be at least 1".into()));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidInput(format!("series tolerance must be positive, got {tol}")));
    }
    let step = grid.step();
    let shared = hs.iter().all(|z| z.im == 0.0);
    let mut c_chain = hs.to_vec();
    let mut s_chain: Vec<Complex64> = hs.iter().map(|z| z.conj()).collect();
    let mut c_sum = hs.to_vec();
    let mut s_sum = vec![Complex64::new(0.0, 0.0); hs.len()];
    let mut term_norms = Vec::new();
    let mut truncation = Truncation::MaxOrder;

    for depth in 1..=max_order {
        c_chain = chain_step(fs, &c_chain, step);
        s_chain = if shared { c_chain.clone() } else { chain_step(fs, &s_chain, step) };
        let (term, sum) = if depth % 2 == 0 {
            (&c_chain, &mut c_sum)
        } else {
            (&s_chain, &mut s_sum)
        };
        check_finite(grid, term, &format!("series term of depth {depth}"))?;
        for (acc, t) in sum.iter_mut().zip(term) {
            *acc += t;
        }
        let norm = sup(term);
        term_norms.push(norm);
        if norm < tol {
            truncation = Truncation::Tolerance;
            break;
        }
    }

    let order = term_norms.len();
    let l1_norm = l1(fs, step);
    Ok(SeriesKernels {
        c_f: Trajectory::scalar(*grid, c_sum)?,
        s_f: Trajectory::scalar(*grid, s_sum)?,
        order,
        last_term_norm: term_norms[order - 1],
        truncation,
        term_norms,
        l1_norm,
        slow_convergence: l1_norm > SLOW_CONVERGENCE_L1,
        tail_bound: sup(hs) * exp_tail(l1_norm, order),
    })
}

/// `∫₀ˣ f conj(prev)` on the refined grid.
fn chain_step(fs: &[Complex64], prev: &[Complex64], step: f64) -> Vec<Complex64> {
    let integrand: Vec<Complex64> = fs.iter().zip(prev).map(|(f, t)| f * t.conj()).collect();
    cumulative_samples(&integrand, step)
}

fn sup(samples: &[Complex64]) -> f64 {
    samples.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn l1(fs: &[Complex64], step: f64) -> f64 {
    let moduli: Vec<Complex64> = fs.iter().map(|z| Complex64::new(z.norm(), 0.0)).collect();
    cumulative_samples(&moduli, step).last().map_or(0.0, |z| z.re)
}

/// `Σ_{k>n} L^k / k!`.
fn exp_tail(l: f64, n: usize) -> f64 {
    let mut term = 1.0;
    for k in 1..=n {
        term *= l / k as f64;
    }
    let mut tail = 0.0;
    let mut k = n;
    loop {
        k += 1;
        term *= l / k as f64;
        tail += term;
        if term <= tail * f64::EPSILON || !term.is_finite() {
            return tail;
        }
    }
}

/// Sup-norm residuals of the intertwining relations `C_f' = f conj(S_f)` and
/// `S_f' = f conj(C_f)`, with derivatives by fourth-order differences.
pub fn intertwining_residuals(f: &CoefficientFunction, kernels: &SeriesKernels) -> Result<(f64, f64)> {
    let grid = *kernels.c_f.grid();
    let fs = f.sample(&grid)?;
    let dx = grid.step() / 2.0;
    let dc = differentiate_samples(kernels.c_f.component(0), dx);
    let ds = differentiate_samples(kernels.s_f.component(0), dx);
    let (c, s) = (kernels.c_f.component(0), kernels.s_f.component(0));
    let mut rc: f64 = 0.0;
    let mut rs: f64 = 0.0;
    for j in 0..fs.len() {
        rc = rc.max((dc[j] - fs[j] * s[j].conj()).norm());
        rs = rs.max((ds[j] - fs[j] * c[j].conj()).norm());
    }
    Ok((rc, rs))
}

/// Builds the unconjugated series `1 + ∫f + ∫f∫f + …` to depth `order`,
/// splits it by parity and returns the sup-norm distances to `sinh(∫f)` and
/// `cosh(∫f)`.
pub fn scalar_identity_residuals(f: &CoefficientFunction, grid: &Grid, order: usize) -> Result<(f64, f64)> {
    let fs = f.sample(grid)?;
    let step = grid.step();
    let big_f = cumulative_samples(&fs, step);
    let mut term = vec![Complex64::new(1.0, 0.0); fs.len()];
    let mut odd = vec![Complex64::new(0.0, 0.0); fs.len()];
    let mut even = term.clone();
    for depth in 1..=order {
        let integrand: Vec<Complex64> = fs.iter().zip(&term).map(|(a, b)| a * b).collect();
        term = cumulative_samples(&integrand, step);
        let sum = if depth % 2 == 0 { &mut even } else { &mut odd };
        for (acc, t) in sum.iter_mut().zip(&term) {
            *acc += t;
        }
    }
    let residual = |sum: &[Complex64], exact: fn(Complex64) -> Complex64| {
        sum.iter()
            .zip(&big_f)
            .map(|(s, x)| (s - exact(*x)).norm())
            .fold(0.0, f64::max)
    };
    Ok((residual(&odd, |z| z.sinh()), residual(&even, |z| z.cosh())))
}
