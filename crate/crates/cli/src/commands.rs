//! Turns a resolved [`RunConfig`] into solver calls and output text.

use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context as _};
use antilinear::antidiagonal::{self, AntidiagonalProblem, Diagnostics, Forcing, Method};
use antilinear::antilinear::{solve_antilinear, AntilinearProblem, Sign};
use antilinear::expr;
use antilinear::numerics::{CoefficientFunction, DerivativeMode, Grid, Trajectory};
use antilinear::picard::{forced_series_kernels, series_kernels};
use antilinear::reductions::{
    reduce_helmholtz, reduce_kubelka_munk, reduce_schrodinger, reduce_zakharov_shabat, solve_reduced,
    HelmholtzInput, KubelkaMunkInput, ReducedProblem, SchrodingerInput, SolveOptions, ZakharovShabatInput,
};
use antilinear::verify::{run_all, run_suite, Suite};
use antilinear::{Complex64, Error};
use rayon::prelude::*;

use crate::config::{
    CommandName, ContextName, DerivativeName, MethodName, RunConfig, SignName, DEFAULT_ORDER, DEFAULT_TOL,
};
use crate::output::{format_csv, format_tagged_csv, parse_csv, plot_script};
use crate::Failure;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Everything a successful run produces; nothing is written until the whole
/// report exists.
#[derive(Debug, Default)]
pub struct Report {
    pub files: Vec<(PathBuf, String)>,
    pub stdout: String,
    pub notes: Vec<String>,
    /// Set when the run completed but reports a failed check.
    pub failed_checks: bool,
}

type Outcome<T> = std::result::Result<T, Failure>;

fn input(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Input(e.into())
}

fn input_msg(msg: String) -> Failure {
    Failure::Input(anyhow!(msg))
}

/// Parse and validation errors are input errors; everything raised while
/// solving is a solver failure.
fn solver(e: Error) -> Failure {
    match e {
        Error::Expr(_) | Error::InvalidInput(_) => Failure::Input(e.into()),
        _ => Failure::Solver(e.into()),
    }
}

fn required<'a>(value: &'a Option<String>, key: &str) -> Outcome<&'a str> {
    value.as_deref().ok_or_else(|| input_msg(format!("missing required option --{key}")))
}

/// Parses a coefficient. Constant expressions carry their (zero) derivative;
/// `derivative` supplies one for the rest.
fn coefficient(text: &str, key: &str, derivative: Option<&str>) -> Outcome<CoefficientFunction> {
    let parsed = expr::parse(text).with_context(|| format!("--{key} `{text}`")).map_err(input)?;
    let constant = parsed.is_constant();
    let mut f = CoefficientFunction::from_expr(parsed).named(key);
    if let Some(d) = derivative {
        let de = expr::parse(d).with_context(|| format!("derivative of --{key} `{d}`")).map_err(input)?;
        f = f.with_derivative_expr(de);
    } else if constant {
        f = f.with_derivative(|_| Complex64::new(0.0, 0.0));
    }
    Ok(f)
}

fn optional_coefficient(value: &Option<String>, key: &str) -> Outcome<Option<CoefficientFunction>> {
    value.as_deref().map(|t| coefficient(t, key, None)).transpose()
}

fn value(text: &str, key: &str) -> Outcome<Complex64> {
    expr::parse_constant(text).with_context(|| format!("--{key} `{text}`")).map_err(input)
}

fn value_or(field: &Option<String>, key: &str, default: Complex64) -> Outcome<Complex64> {
    field.as_deref().map_or(Ok(default), |t| value(t, key))
}

fn real_value(text: &str, key: &str) -> Outcome<f64> {
    let v = value(text, key)?;
    if v.im != 0.0 {
        return Err(input_msg(format!("--{key} must be real, got {v}")));
    }
    Ok(v.re)
}

fn grid(cfg: &RunConfig) -> Outcome<Grid> {
    let (x0, n) = (cfg.x0().map_err(input)?, cfg.steps().map_err(input)?);
    Grid::new(x0, n).map_err(solver)
}

fn method(cfg: &RunConfig) -> Outcome<Method> {
    let series_opts = cfg.order.is_some() || cfg.tol.is_some();
    match cfg.method.unwrap_or(MethodName::Integrator) {
        MethodName::Integrator if series_opts => {
            Err(input_msg("--order and --tol apply only with --method series".into()))
        }
        MethodName::Integrator => Ok(Method::Integrator),
        MethodName::Series => Ok(Method::Series {
            max_order: cfg.order.unwrap_or(DEFAULT_ORDER),
            tol: cfg.tol.unwrap_or(DEFAULT_TOL),
        }),
    }
}

fn derivative_mode(cfg: &RunConfig) -> DerivativeMode {
    match cfg.derivative_mode {
        Some(DerivativeName::FiniteDifference) => DerivativeMode::FiniteDifference,
        _ => DerivativeMode::Analytic,
    }
}

fn notes_from(diag: &Diagnostics) -> Vec<String> {
    let mut notes: Vec<String> = diag.warnings.iter().map(|w| format!("warning: {w}")).collect();
    if let Some(s) = &diag.series {
        notes.push(format!(
            "series: order {} ({:?}), last term {:.3e}, tail bound {:.3e}, integral |f| {:.6}",
            s.order, s.truncation, s.last_term_norm, s.tail_bound, s.l1_norm
        ));
    }
    notes
}

pub fn execute(cfg: &RunConfig) -> Outcome<Report> {
    let command = cfg
        .command
        .ok_or_else(|| input_msg("no command given (pass it as the first argument or as \"command\" in the config)".into()))?;
    let mut report = match command {
        CommandName::SolveAntilinear => solve_antilinear_cmd(cfg)?,
        CommandName::SolveSystem => solve_system_cmd(cfg)?,
        CommandName::Reduce => reduce_cmd(cfg)?,
        CommandName::Series => series_cmd(cfg)?,
        CommandName::Verify => return verify_cmd(cfg),
        CommandName::SweepXi => sweep_cmd(cfg)?,
    };
    attach_plot(cfg, &mut report)?;
    Ok(report)
}

/// Routes the main CSV to `--output` or standard output.
fn primary(cfg: &RunConfig, csv: String) -> Report {
    match &cfg.output {
        Some(path) => Report { files: vec![(path.clone(), csv)], ..Default::default() },
        None => Report { stdout: csv, ..Default::default() },
    }
}

fn attach_plot(cfg: &RunConfig, report: &mut Report) -> Outcome<()> {
    let Some(plot) = &cfg.plot else { return Ok(()) };
    let Some((csv_path, csv)) = report.files.first() else {
        return Err(input_msg("--plot needs --output, since the script refers to the CSV file".into()));
    };
    let (cols, _) = parse_csv(csv).map_err(Failure::Solver)?;
    let script = plot_script(&csv_path.to_string_lossy(), &cols).map_err(Failure::Solver)?;
    report.files.push((plot.clone(), script));
    Ok(())
}

fn csv(t: &Trajectory) -> Outcome<String> {
    format_csv(t).map_err(Failure::Solver)
}

fn solve_antilinear_cmd(cfg: &RunConfig) -> Outcome<Report> {
    cfg.check_keys(&["f", "g", "u0", "sign"]).map_err(input)?;
    let f = coefficient(required(&cfg.f, "f")?, "f", None)?;
    let g = optional_coefficient(&cfg.g, "g")?;
    let u0 = value(required(&cfg.u0, "u0")?, "u0")?;
    let sign = match cfg.sign.unwrap_or(SignName::Plus) {
        SignName::Plus => Sign::Plus,
        SignName::Minus => Sign::Minus,
    };
    let grid = grid(cfg)?;
    let problem = AntilinearProblem { f, g, u0, grid };
    let t = solve_antilinear(&problem, sign).map_err(solver)?;
    Ok(primary(cfg, csv(&t)?))
}

fn solve_system_cmd(cfg: &RunConfig) -> Outcome<Report> {
    cfg.check_keys(&["f", "g1", "g2", "u1-0", "u2-0", "method", "order", "tol"]).map_err(input)?;
    let f = coefficient(required(&cfg.f, "f")?, "f", None)?;
    let g1 = optional_coefficient(&cfg.g1, "g1")?;
    let g2 = optional_coefficient(&cfg.g2, "g2")?;
    let forcing = match (g1, g2) {
        (None, None) => None,
        (Some(g1), None) => Some(Forcing::compatible(g1)),
        (g1, Some(g2)) => Some(Forcing { g1: g1.unwrap_or_else(CoefficientFunction::zero), g2 }),
    };
    let u1 = value(required(&cfg.u1_0, "u1-0")?, "u1-0")?;
    let u2 = match (&cfg.u2_0, &forcing) {
        (Some(t), _) => value(t, "u2-0")?,
        (None, Some(_)) => I * u1.conj(),
        (None, None) => return Err(input_msg("missing required option --u2-0".into())),
    };
    let method = method(cfg)?;
    let grid = grid(cfg)?;
    let problem = AntidiagonalProblem { f, forcing, u0: [u1, u2], grid };
    let solution = antidiagonal::solve(&problem, method).map_err(solver)?;
    let mut report = primary(cfg, csv(&solution.trajectory)?);
    report.notes = notes_from(&solution.diagnostics);
    Ok(report)
}

fn series_cmd(cfg: &RunConfig) -> Outcome<Report> {
    cfg.check_keys(&["f", "h", "order", "tol"]).map_err(input)?;
    let f = coefficient(required(&cfg.f, "f")?, "f", None)?;
    let h = optional_coefficient(&cfg.h, "h")?;
    let (order, tol) = (cfg.order.unwrap_or(DEFAULT_ORDER), cfg.tol.unwrap_or(DEFAULT_TOL));
    let grid = grid(cfg)?;
    let k = match &h {
        Some(h) => forced_series_kernels(&f, h, &grid, order, tol),
        None => series_kernels(&f, &grid, order, tol),
    }
    .map_err(solver)?;
    let pair = Trajectory::pair(grid, k.c_f.component(0).to_vec(), k.s_f.component(0).to_vec()).map_err(solver)?;
    let mut report = primary(cfg, csv(&pair)?);
    report.notes.push(format!(
        "series: columns u1 = C, u2 = S; order {} ({:?}), last term {:.3e}, tail bound {:.3e}, integral |f| {:.6}",
        k.order, k.truncation, k.last_term_norm, k.tail_bound, k.l1_norm
    ));
    if k.slow_convergence {
        report.notes.push(format!(
            "warning: integral |f| = {:.3} is large; the series converges slowly, consider --method integrator",
            k.l1_norm
        ));
    }
    Ok(report)
}

fn reduce_cmd(cfg: &RunConfig) -> Outcome<Report> {
    let context = cfg.context.ok_or_else(|| input_msg("reduce needs --context".into()))?;
    const SOLVE: [&str; 5] = ["context", "method", "order", "tol", "emit-intermediates"];
    let keys = |extra: &[&'static str]| -> Vec<&'static str> { SOLVE.iter().chain(extra).copied().collect() };
    let grid = grid(cfg)?;
    let mode = derivative_mode(cfg);
    let problem: ReducedProblem = match context {
        ContextName::Schrodinger => {
            cfg.check_keys(&keys(&["a", "da", "u0", "u1", "derivative-mode"])).map_err(input)?;
            let a = coefficient(required(&cfg.a, "a")?, "a", cfg.da.as_deref())?;
            let mut input = SchrodingerInput::new(
                a,
                value(required(&cfg.u0, "u0")?, "u0")?,
                value(required(&cfg.u1, "u1")?, "u1")?,
                grid,
            );
            input.derivative_mode = mode;
            reduce_schrodinger(&input)
        }
        ContextName::Helmholtz => {
            cfg.check_keys(&keys(&["alpha", "dalpha", "beta", "dbeta", "source", "u0", "u1", "derivative-mode"]))
                .map_err(input)?;
            let input = HelmholtzInput {
                alpha: coefficient(required(&cfg.alpha, "alpha")?, "alpha", cfg.dalpha.as_deref())?,
                beta: coefficient(required(&cfg.beta, "beta")?, "beta", cfg.dbeta.as_deref())?,
                source: optional_coefficient(&cfg.source, "source")?.unwrap_or_else(CoefficientFunction::zero),
                u0: value(required(&cfg.u0, "u0")?, "u0")?,
                u1: value(required(&cfg.u1, "u1")?, "u1")?,
                grid,
                derivative_mode: mode,
            };
            reduce_helmholtz(&input)
        }
        ContextName::ZakharovShabat => {
            cfg.check_keys(&keys(&["q", "xi", "v1-0", "v2-0"])).map_err(input)?;
            let input = zakharov_shabat_input(cfg, required(&cfg.q, "q")?, required_xi(cfg)?, grid)?;
            reduce_zakharov_shabat(&input)
        }
        ContextName::KubelkaMunk => {
            cfg.check_keys(&keys(&["K", "S", "Fp0", "Fm0"])).map_err(input)?;
            let input = KubelkaMunkInput {
                k: coefficient(required(&cfg.k, "K")?, "K", None)?,
                s: coefficient(required(&cfg.s, "S")?, "S", None)?,
                f0: [
                    real_value(required(&cfg.fp0, "Fp0")?, "Fp0")?,
                    real_value(required(&cfg.fm0, "Fm0")?, "Fm0")?,
                ],
                grid,
            };
            reduce_kubelka_munk(&input)
        }
    }
    .map_err(solver)?;

    let emit = cfg.emit_intermediates.unwrap_or(false);
    let options = SolveOptions { method: method(cfg)?, emit_intermediates: emit };
    let solution = solve_reduced(&problem, options).map_err(solver)?;
    let mut report = primary(cfg, csv(&solution.physical)?);
    if let Some(stages) = &solution.intermediates {
        let Some(out) = &cfg.output else {
            return Err(input_msg("--emit-intermediates needs --output to name the extra files".into()));
        };
        for (tag, t) in [("w", &stages.w), ("v", &stages.v), ("u", &stages.u)] {
            report.files.push((sibling(out, tag), csv(t)?));
        }
    }
    let meta = &solution.metadata;
    report.notes = meta.warnings.iter().map(|w| format!("warning: {w}")).collect();
    if let Some(r) = meta.consistency_residual {
        report.notes.push(format!("consistency residual {r:.3e}"));
    }
    Ok(report)
}

fn required_xi(cfg: &RunConfig) -> Outcome<f64> {
    cfg.xi.ok_or_else(|| input_msg("missing required option --xi".into()))
}

fn zakharov_shabat_input(cfg: &RunConfig, q: &str, xi: f64, grid: Grid) -> Outcome<ZakharovShabatInput> {
    if !xi.is_finite() {
        return Err(input_msg(format!("xi must be finite, got {xi}")));
    }
    Ok(ZakharovShabatInput {
        q: coefficient(q, "q", None)?,
        xi,
        v0: [
            value_or(&cfg.v1_0, "v1-0", Complex64::new(1.0, 0.0))?,
            value_or(&cfg.v2_0, "v2-0", Complex64::new(0.0, 0.0))?,
        ],
        grid,
    })
}

/// `out.csv` with tag `w` becomes `out.w.csv`.
fn sibling(out: &Path, tag: &str) -> PathBuf {
    let stem = out.file_stem().unwrap_or_default().to_string_lossy();
    let name = match out.extension() {
        Some(ext) => format!("{stem}.{tag}.{}", ext.to_string_lossy()),
        None => format!("{stem}.{tag}"),
    };
    out.with_file_name(name)
}

/// Replaces every `{xi}` by the parenthesised value.
pub fn substitute_xi(template: &str, xi: f64) -> String {
    template.replace("{xi}", &format!("({xi:?})"))
}

fn sweep_cmd(cfg: &RunConfig) -> Outcome<Report> {
    cfg.check_keys(&["q", "xi-values", "v1-0", "v2-0", "method", "order", "tol"]).map_err(input)?;
    let template = required(&cfg.q, "q")?;
    let xis = cfg
        .xi_values
        .as_ref()
        .filter(|v| !v.is_empty())
        .ok_or_else(|| input_msg("missing required option --xi-values".into()))?;
    let grid = grid(cfg)?;
    let method = method(cfg)?;
    let inputs = xis
        .iter()
        .map(|&xi| zakharov_shabat_input(cfg, &substitute_xi(template, xi), xi, grid))
        .collect::<Outcome<Vec<_>>>()?;
    let runs = inputs
        .par_iter()
        .map(|input| {
            let reduced = reduce_zakharov_shabat(input)?;
            let options = SolveOptions { method, emit_intermediates: false };
            Ok((input.xi, solve_reduced(&reduced, options)?.physical))
        })
        .collect::<Result<Vec<(f64, Trajectory)>, Error>>()
        .map_err(solver)?;
    let mut report = primary(cfg, format_tagged_csv(&runs).map_err(Failure::Solver)?);
    if !template.contains("{xi}") {
        report.notes.push("warning: --q has no {xi} placeholder; every run uses the same potential".into());
    }
    Ok(report)
}

fn verify_cmd(cfg: &RunConfig) -> Outcome<Report> {
    cfg.check_keys(&["suite"]).map_err(input)?;
    if cfg.output.is_some() || cfg.plot.is_some() {
        return Err(input_msg("verify prints its table to standard output; drop --output/--plot".into()));
    }
    let name = cfg.suite.as_deref().unwrap_or("all");
    let results = if name == "all" {
        run_all()
    } else {
        let suite = Suite::from_name(name).ok_or_else(|| {
            let known: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
            input_msg(format!("unknown suite `{name}` (expected all, {})", known.join(", ")))
        })?;
        run_suite(suite)
    };
    let failed = results.iter().filter(|r| !r.passed).count();
    let mut stdout: String = results.iter().map(|r| format!("{r}\n")).collect();
    stdout.push_str(&format!("{} checks, {failed} failed\n", results.len()));
    Ok(Report { stdout, failed_checks: failed > 0, ..Default::default() })
}
