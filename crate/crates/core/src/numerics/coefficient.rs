use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use super::trajectory::check_finite;
use super::{Grid, Trajectory};
use crate::error::{Error, Result};
use crate::expr::{self, Expr};

type RealToComplex = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

#[derive(Clone)]
enum Source {
    Analytic(RealToComplex),
    /// Samples on the refined nodes of a grid. Looked up exactly on that grid,
    /// quadratically interpolated elsewhere.
    Tabulated { grid: Grid, samples: Arc<[Complex64]> },
}

/// How derivatives of material coefficients are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DerivativeMode {
    /// User-supplied analytic derivative (required by default).
    #[default]
    Analytic,
    /// Centered difference with step `h/2`, opt-in only.
    FiniteDifference,
}

/// A complex-valued function of one real variable, optionally carrying its
/// analytic derivative.
#[derive(Clone)]
pub struct CoefficientFunction {
    name: String,
    value: Source,
    derivative: Option<RealToComplex>,
}

impl fmt::Debug for CoefficientFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.value {
            Source::Analytic(_) => "analytic",
            Source::Tabulated { .. } => "tabulated",
        };
        f.debug_struct("CoefficientFunction")
            .field("name", &self.name)
            .field("kind", &kind)
            .field("has_derivative", &self.derivative.is_some())
            .finish()
    }
}

impl CoefficientFunction {
    pub fn new(f: impl Fn(f64) -> Complex64 + Send + Sync + 'static) -> Self {
        CoefficientFunction {
            name: "coefficient".into(),
            value: Source::Analytic(Arc::new(f)),
            derivative: None,
        }
    }

    /// Real-valued function.
    pub fn real(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        CoefficientFunction::new(move |x| Complex64::new(f(x), 0.0))
    }

    pub fn constant(c: Complex64) -> Self {
        CoefficientFunction::new(move |_| c).with_derivative(|_| Complex64::new(0.0, 0.0))
    }

    pub fn zero() -> Self {
        CoefficientFunction::constant(Complex64::new(0.0, 0.0))
    }

    /// Wraps a parsed expression. Points where it is not finite evaluate to NaN
    /// and are reported when the function is sampled.
    pub fn from_expr(e: Expr) -> Self {
        let label = e.to_string();
        CoefficientFunction::new(move |x| {
            expr::evaluate(&e, x).unwrap_or(Complex64::new(f64::NAN, f64::NAN))
        })
        .named(label)
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(CoefficientFunction::from_expr(expr::parse(text)?).named(text))
    }

    /// Samples already computed on the refined nodes of `t.grid()`.
    pub fn tabulated(t: &Trajectory) -> Self {
        assert_eq!(t.n_components(), 1, "tabulated coefficients are scalar");
        CoefficientFunction {
            name: "tabulated".into(),
            value: Source::Tabulated {
                grid: *t.grid(),
                samples: t.component(0).into(),
            },
            derivative: None,
        }
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_derivative(mut self, d: impl Fn(f64) -> Complex64 + Send + Sync + 'static) -> Self {
        self.derivative = Some(Arc::new(d));
        self
    }

    pub fn with_derivative_expr(self, e: Expr) -> Self {
        self.with_derivative(move |x| {
            expr::evaluate(&e, x).unwrap_or(Complex64::new(f64::NAN, f64::NAN))
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn has_derivative(&self) -> bool {
        self.derivative.is_some()
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        match &self.value {
            Source::Analytic(f) => f(x),
            Source::Tabulated { grid, samples } => lookup(grid, samples, x),
        }
    }

    /// Values at every refined node of `grid`; fails on the first non-finite one.
    pub fn sample(&self, grid: &Grid) -> Result<Vec<Complex64>> {
        let samples = match &self.value {
            Source::Tabulated { grid: g, samples } if g == grid => samples.to_vec(),
            _ => grid.refined_nodes().into_iter().map(|x| self.eval(x)).collect(),
        };
        check_finite(grid, &samples, &format!("coefficient `{}`", self.name))?;
        Ok(samples)
    }

    /// Derivative samples at every refined node.
    pub fn sample_derivative(&self, grid: &Grid, mode: DerivativeMode) -> Result<Vec<Complex64>> {
        let samples: Vec<Complex64> = match (mode, &self.derivative) {
            (DerivativeMode::Analytic, Some(d)) => {
                grid.refined_nodes().into_iter().map(|x| d(x)).collect()
            }
            (DerivativeMode::Analytic, None) => {
                return Err(Error::InvalidInput(format!(
                    "coefficient `{}` needs an analytic derivative \
                     (or opt in to finite differences)",
                    self.name
                )))
            }
            (DerivativeMode::FiniteDifference, _) => {
                let half = grid.step() / 2.0;
                grid.refined_nodes()
                    .into_iter()
                    .map(|x| (self.eval(x + half) - self.eval(x - half)) / grid.step())
                    .collect()
            }
        };
        check_finite(grid, &samples, &format!("derivative of `{}`", self.name))?;
        Ok(samples)
    }
}

// Exact on refined nodes, quadratic through the enclosing refined triple otherwise.
fn lookup(grid: &Grid, samples: &[Complex64], x: f64) -> Complex64 {
    if let Some(j) = grid.refined_index(x) {
        return samples[j];
    }
    let last = grid.refined_len() - 1;
    let dx = grid.step() / 2.0;
    let t = x / dx;
    if !(t.is_finite()) || t < 0.0 || t > last as f64 {
        return Complex64::new(f64::NAN, f64::NAN);
    }
    let j0 = (t.floor() as usize).min(last.saturating_sub(2));
    let s = t - j0 as f64;
    let (f0, f1, f2) = (samples[j0], samples[j0 + 1], samples[j0 + 2]);
    f0 * ((s - 1.0) * (s - 2.0) / 2.0) - f1 * (s * (s - 2.0)) + f2 * (s * (s - 1.0) / 2.0)
}
