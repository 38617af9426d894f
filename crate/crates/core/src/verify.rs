//! Self-checks of the structural invariants, grouped into suites.
//!
//! Each check reports the measured quantity next to its threshold so a
//! failing run says by how much it missed.

use std::fmt;

use num_complex::Complex64;

use crate::antidiagonal::{
    check_strong_condition, fundamental_pair, solve_nonhomogeneous, solve_strong_explicit, AntidiagonalProblem,
    Forcing, GeneralSystem, Method,
};
use crate::antilinear::{solve_antilinear, solve_constant_closed_form, AntilinearProblem, Sign};
use crate::error::Result;
use crate::numerics::{
    convergence_order, cumulative_integral, integrate_linear_system, CoefficientFunction, Grid, Trajectory,
};
use crate::picard::{forced_series_kernels, intertwining_residuals, scalar_identity_residuals, series_kernels};
use crate::reductions::{
    reduce_helmholtz, reduce_kubelka_munk, reduce_schrodinger, reduce_zakharov_shabat, solve_reduced,
    HelmholtzInput, KubelkaMunkInput, SchrodingerInput, SolveOptions, ZakharovShabatInput,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Numerics,
    Antilinear,
    Picard,
    Antidiagonal,
    Reductions,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Numerics,
        Suite::Antilinear,
        Suite::Picard,
        Suite::Antidiagonal,
        Suite::Reductions,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Numerics => "numerics",
            Suite::Antilinear => "antilinear",
            Suite::Picard => "picard",
            Suite::Antidiagonal => "antidiagonal",
            Suite::Reductions => "reductions",
        }
    }

    pub fn from_name(name: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|s| s.name() == name)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub suite: Suite,
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub passed: bool,
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:<13} {:<48} {:.3e} (limit {:.1e})",
            if self.passed { "PASS" } else { "FAIL" },
            self.suite.name(),
            self.name,
            self.value,
            self.threshold
        )
    }
}

struct Recorder {
    suite: Suite,
    results: Vec<CheckResult>,
}

impl Recorder {
    /// Passes when `value <= threshold`; errors count as failures.
    fn at_most(&mut self, name: &str, threshold: f64, value: Result<f64>) {
        let value = value.unwrap_or(f64::INFINITY);
        self.results.push(CheckResult {
            suite: self.suite,
            name: name.to_string(),
            value,
            threshold,
            passed: value <= threshold,
        });
    }

    /// Passes when `value >= threshold`.
    fn at_least(&mut self, name: &str, threshold: f64, value: Result<f64>) {
        let value = value.unwrap_or(f64::NEG_INFINITY);
        self.results.push(CheckResult {
            suite: self.suite,
            name: name.to_string(),
            value,
            threshold,
            passed: value >= threshold,
        });
    }
}

pub fn run_suite(suite: Suite) -> Vec<CheckResult> {
    let mut r = Recorder {
        suite,
        results: Vec::new(),
    };
    match suite {
        Suite::Numerics => numerics(&mut r),
        Suite::Antilinear => antilinear(&mut r),
        Suite::Picard => picard(&mut r),
        Suite::Antidiagonal => antidiagonal(&mut r),
        Suite::Reductions => reductions(&mut r),
    }
    r.results
}

pub fn run_all() -> Vec<CheckResult> {
    Suite::ALL.into_iter().flat_map(run_suite).collect()
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn unit_grid() -> Grid {
    Grid::new(1.0, 1000).expect("valid grid")
}

fn family() -> Vec<CoefficientFunction> {
    vec![
        CoefficientFunction::constant(c(0.6, -0.8)),
        CoefficientFunction::new(|x| c(1.0 - x * x, 0.5 * x)),
        CoefficientFunction::new(|x| c(1.0, 1.0) * x.sin()),
        CoefficientFunction::new(|x| c(0.0, 3.0 * x).exp() * (1.0 + x)),
        CoefficientFunction::new(|x| c((2.0 * x).cos() + x, (x * x).sin())),
    ]
}

fn deviation(t: &Trajectory, exact: impl Fn(f64) -> Complex64) -> f64 {
    t.grid()
        .refined_nodes()
        .into_iter()
        .enumerate()
        .map(|(j, x)| (t.at(j, 0) - exact(x)).norm())
        .fold(0.0, f64::max)
}

fn numerics(r: &mut Recorder) {
    r.at_most(
        "simpson exact on cubics",
        1e-13,
        cumulative_integral(&CoefficientFunction::real(|x| x * x * x - x), &unit_grid())
            .map(|t| deviation(&t, |x| c(x.powi(4) / 4.0 - x * x / 2.0, 0.0))),
    );
    let one = c(1.0, 0.0);
    let zero = c(0.0, 0.0);
    r.at_least(
        "rk4 observed order",
        3.8,
        convergence_order(Grid::new(1.0, 10).expect("valid grid"), 3, |g| {
            let t = integrate_linear_system(|x| [[c(x.cos(), 0.0), zero], [zero, -one]], None, [one, one], g)?;
            Ok((t.last()[0] - c(1f64.sin().exp(), 0.0)).norm())
        })
        .map(|rep| rep.order.min()),
    );
}

fn antilinear(r: &mut Recorder) {
    let g = unit_grid();
    let f = CoefficientFunction::new(|x| c((2.0 * x).cos(), 0.5 * x - 0.2));
    let solve = |f: &CoefficientFunction, u0, sign| solve_antilinear(&AntilinearProblem::homogeneous(f.clone(), u0, g), sign);

    r.at_most(
        "real-linearity",
        1e-12,
        (|| {
            let (a0, b0, alpha, beta) = (c(0.3, -1.2), c(-0.7, 0.4), 1.7, -0.6);
            let combined = solve(&f, a0 * alpha + b0 * beta, Sign::Plus)?;
            let (sa, sb) = (solve(&f, a0, Sign::Plus)?, solve(&f, b0, Sign::Plus)?);
            let scale = combined.sup_norm().max(1.0);
            Ok((0..g.refined_len())
                .map(|j| (combined.at(j, 0) - sa.at(j, 0) * alpha - sb.at(j, 0) * beta).norm())
                .fold(0.0, f64::max)
                / scale)
        })(),
    );
    r.at_most(
        "rotation symmetry",
        1e-12,
        (|| {
            let w0 = c(0.8, 0.1);
            let minus = solve(&f, w0, Sign::Minus)?;
            let plus = solve(&f, c(0.0, 1.0) * w0, Sign::Plus)?;
            Ok((0..g.refined_len())
                .map(|j| (minus.at(j, 0) + c(0.0, 1.0) * plus.at(j, 0)).norm())
                .fold(0.0, f64::max))
        })(),
    );
    r.at_most(
        "constant coefficient vs closed form",
        1e-8,
        (|| {
            let (fc, u0) = (c(0.3, -0.8), c(0.6, 1.1));
            let t = solve(&CoefficientFunction::constant(fc), u0, Sign::Plus)?;
            let mut worst: f64 = 0.0;
            for (j, x) in g.refined_nodes().into_iter().enumerate() {
                worst = worst.max((t.at(j, 0) - solve_constant_closed_form(fc, u0, x)?).norm());
            }
            Ok(worst)
        })(),
    );
    r.at_most(
        "conjugate-coefficient symmetry",
        1e-12,
        (|| {
            let u0 = c(0.2, -1.0);
            let u = solve(&f, u0, Sign::Plus)?;
            let fc = CoefficientFunction::new(|x| c((2.0 * x).cos(), 0.5 * x - 0.2).conj());
            let w = solve(&fc, u0.conj(), Sign::Plus)?;
            Ok((0..g.refined_len())
                .map(|j| (w.at(j, 0) - u.at(j, 0).conj()).norm())
                .fold(0.0, f64::max))
        })(),
    );
}

fn picard(r: &mut Recorder) {
    let g = unit_grid();
    r.at_most(
        "term bound ratio",
        1.0 + 1e-9,
        (|| {
            let mut worst: f64 = 0.0;
            for f in family() {
                let k = series_kernels(&f, &g, 15, 1e-300)?;
                let mut bound = 1.0;
                for (i, norm) in k.term_norms.iter().enumerate() {
                    bound *= k.l1_norm / (i + 1) as f64;
                    if bound > 1e-290 {
                        worst = worst.max(norm / bound);
                    }
                }
            }
            Ok(worst)
        })(),
    );
    r.at_most(
        "scalar sinh/cosh identities",
        1e-9,
        (|| {
            let (a, b) = scalar_identity_residuals(&CoefficientFunction::real(f64::sin), &g, 12)?;
            Ok(a.max(b))
        })(),
    );
    let slow = CoefficientFunction::new(|x| c(0.5 * x.cos(), 0.3 - 0.2 * x));
    r.at_most(
        "intertwining residual",
        1e-9,
        series_kernels(&slow, &g, 15, 1e-300)
            .and_then(|k| intertwining_residuals(&slow, &k))
            .map(|(a, b)| a.max(b)),
    );
    r.at_most(
        "series vs integrator kernels",
        1e-8,
        (|| {
            let k = series_kernels(&slow, &g, 15, 1e-300)?;
            let p = fundamental_pair(&slow, &g, Method::Integrator)?;
            Ok(k.c_f.max_abs_diff(&p.c_f).max(k.s_f.max_abs_diff(&p.s_f)))
        })(),
    );
    r.at_most(
        "forced conjugation identities",
        1e-12,
        (|| {
            let f = |x: f64| c(x.sin() + 0.2, 0.5 * x);
            let h = |x: f64| c(x.exp(), 1.0 - x * x);
            let lhs = forced_series_kernels(
                &CoefficientFunction::new(move |x| f(x).conj()),
                &CoefficientFunction::new(h),
                &g,
                12,
                1e-300,
            )?;
            let rhs = forced_series_kernels(
                &CoefficientFunction::new(f),
                &CoefficientFunction::new(move |x| h(x).conj()),
                &g,
                12,
                1e-300,
            )?;
            Ok((0..g.refined_len())
                .map(|j| {
                    (lhs.s_f.at(j, 0) - rhs.s_f.at(j, 0).conj())
                        .norm()
                        .max((lhs.c_f.at(j, 0) - rhs.c_f.at(j, 0).conj()).norm())
                })
                .fold(0.0, f64::max))
        })(),
    );
}

fn antidiagonal(r: &mut Recorder) {
    let g = unit_grid();
    r.at_most(
        "determinant invariant",
        1e-7,
        family().iter().try_fold(0.0f64, |worst, f| {
            let p = fundamental_pair(f, &g, Method::Integrator)?;
            Ok(worst.max(p.diagnostics.max_det_drift.unwrap_or(f64::INFINITY)))
        }),
    );
    r.at_most(
        "homogeneous vs oracle",
        1e-7,
        family().iter().try_fold(0.0f64, |worst, f| {
            let problem = AntidiagonalProblem::homogeneous(f.clone(), [c(0.3, -1.0), c(2.0, 0.5)], g);
            let u = crate::antidiagonal::solve(&problem, Method::Integrator)?.trajectory;
            Ok(worst.max(u.max_abs_diff(&problem.oracle()?)))
        }),
    );
    r.at_most(
        "forced symmetry U2 = i conj U1",
        1e-10,
        (|| {
            let u1 = c(0.4, -0.3);
            let problem = AntidiagonalProblem::forced(
                CoefficientFunction::new(|x| c(x.sin(), 1.0 - x)),
                Forcing::compatible(CoefficientFunction::new(|x| c(x.cos(), 0.5 * x))),
                [u1, c(0.0, 1.0) * u1.conj()],
                g,
            );
            let u = solve_nonhomogeneous(&problem, Method::Integrator)?;
            Ok((0..g.refined_len())
                .map(|j| (u.at(j, 1) - c(0.0, 1.0) * u.at(j, 0).conj()).norm())
                .fold(0.0, f64::max))
        })(),
    );
    r.at_most(
        "strong-condition explicit vs oracle",
        1e-7,
        (|| {
            let sys = GeneralSystem {
                p: CoefficientFunction::constant(c(1.0, 0.0)),
                q: CoefficientFunction::zero(),
                r: CoefficientFunction::constant(c(1.0, 0.0)),
                s: CoefficientFunction::real(|x| (-2.0 * x).exp()),
                u0: [c(1.0, 0.0), c(1.0, 0.0)],
                grid: g,
            };
            let strong = check_strong_condition(&sys, None)?;
            let c1 = strong
                .c1
                .ok_or_else(|| crate::Error::Precondition("strong condition fails".into()))?;
            Ok(solve_strong_explicit(&sys, &c1)?.max_abs_diff(&sys.oracle()?))
        })(),
    );
}

fn reductions(r: &mut Recorder) {
    let g = unit_grid();
    let opts = SolveOptions::default();
    r.at_most(
        "schrodinger a = 4 vs sin(2x)/2",
        1e-8,
        (|| {
            let input = SchrodingerInput::new(CoefficientFunction::constant(c(4.0, 0.0)), c(0.0, 0.0), c(1.0, 0.0), g);
            let sol = solve_reduced(&reduce_schrodinger(&input)?, opts)?;
            Ok(deviation(&sol.physical, |x| c((2.0 * x).sin() / 2.0, 0.0)))
        })(),
    );
    r.at_most(
        "schrodinger variable a vs oracle",
        1e-6,
        (|| {
            let a = CoefficientFunction::real(|x| (1.0 + x) * (1.0 + x)).with_derivative(|x| c(2.0 * (1.0 + x), 0.0));
            let input = SchrodingerInput::new(a, c(1.0, 0.0), c(0.5, 0.0), g);
            let sol = solve_reduced(&reduce_schrodinger(&input)?, opts)?;
            Ok(sol.physical.max_abs_diff(&input.oracle()?))
        })(),
    );
    r.at_most(
        "helmholtz forced vs 1 - cos x",
        1e-8,
        (|| {
            let one = CoefficientFunction::constant(c(1.0, 0.0));
            let input = HelmholtzInput::new(one.clone(), one.clone(), one, 0.0, 0.0, g);
            let sol = solve_reduced(&reduce_helmholtz(&input)?, opts)?;
            Ok(deviation(&sol.physical, |x| c(1.0 - x.cos(), 0.0)))
        })(),
    );
    r.at_most(
        "helmholtz variable medium vs oracle",
        1e-6,
        (|| {
            let input = HelmholtzInput::new(
                CoefficientFunction::real(|x| 1.0 + x * x / 4.0).with_derivative(|x| c(x / 2.0, 0.0)),
                CoefficientFunction::real(|x| 1.0 + x / 2.0).with_derivative(|_| c(0.5, 0.0)),
                CoefficientFunction::real(f64::sin),
                0.3,
                -0.7,
                g,
            );
            let sol = solve_reduced(&reduce_helmholtz(&input)?, opts)?;
            Ok(sol.physical.max_abs_diff(&input.oracle()?))
        })(),
    );
    r.at_most(
        "zakharov-shabat vs oracle",
        1e-6,
        (|| {
            let input = ZakharovShabatInput {
                q: CoefficientFunction::new(|x| c(1.0 / (2.0 * x - 1.0).cosh(), 0.3 * x)),
                xi: 1.5,
                v0: [c(1.0, 0.0), c(0.0, 1.0)],
                grid: g,
            };
            let sol = solve_reduced(&reduce_zakharov_shabat(&input)?, opts)?;
            Ok(sol.physical.max_abs_diff(&input.oracle()?))
        })(),
    );
    r.at_most(
        "kubelka-munk nilpotent case",
        1e-10,
        (|| {
            let input = KubelkaMunkInput {
                k: CoefficientFunction::zero(),
                s: CoefficientFunction::constant(c(0.5, 0.0)),
                f0: [1.0, 0.0],
                grid: g,
            };
            let end = solve_reduced(&reduce_kubelka_munk(&input)?, opts)?.physical.last();
            Ok((end[0] - c(0.5, 0.0)).norm().max((end[1] + c(0.5, 0.0)).norm()))
        })(),
    );
    r.at_most(
        "kubelka-munk variable vs oracle",
        1e-6,
        (|| {
            let input = KubelkaMunkInput {
                k: CoefficientFunction::real(|x| 0.1 + 0.05 * x),
                s: CoefficientFunction::real(|x| 0.3 * (-x).exp()),
                f0: [1.0, 0.4],
                grid: g,
            };
            let sol = solve_reduced(&reduce_kubelka_munk(&input)?, opts)?;
            Ok(sol.physical.max_abs_diff(&input.oracle()?))
        })(),
    );
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_passes() {
        let results = run_all();
        let failed: Vec<String> = results.iter().filter(|r| !r.passed).map(|r| r.to_string()).collect();
        assert!(failed.is_empty(), "{failed:#?}");
        for suite in Suite::ALL {
            assert!(results.iter().any(|r| r.suite == suite));
        }
    }

    #[test]
    fn suite_names_round_trip() {
        for suite in Suite::ALL {
            assert_eq!(Suite::from_name(suite.name()), Some(suite));
        }
        assert_eq!(Suite::from_name("bogus"), None);
    }
}
