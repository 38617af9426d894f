//! Run configuration shared by command-line flags and JSON config files.
//!
//! Every key of the JSON file is the long flag name without the dashes, so
//! `--x0 2` and `{"x0": 2}` mean the same thing. Flags override file values.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context as _, Result};
use clap::{Args, ValueEnum};
use serde::Deserialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandName {
    SolveAntilinear,
    SolveSystem,
    Reduce,
    Series,
    Verify,
    SweepXi,
}

impl CommandName {
    pub fn as_str(self) -> &'static str {
        match self {
            CommandName::SolveAntilinear => "solve-antilinear",
            CommandName::SolveSystem => "solve-system",
            CommandName::Reduce => "reduce",
            CommandName::Series => "series",
            CommandName::Verify => "verify",
            CommandName::SweepXi => "sweep-xi",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ContextName {
    Schrodinger,
    Helmholtz,
    ZakharovShabat,
    KubelkaMunk,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodName {
    Integrator,
    Series,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignName {
    Plus,
    Minus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DerivativeName {
    Analytic,
    FiniteDifference,
}

macro_rules! run_config {
    ($( $(#[$meta:meta])* $field:ident : $ty:ty = $key:literal ),* $(,)?) => {
        /// Every field is optional so that files and flags can be layered.
        #[derive(Debug, Clone, Default, PartialEq, Args, Deserialize)]
        #[serde(deny_unknown_fields)]
        pub struct RunConfig {
            $(
                $(#[$meta])*
                #[serde(rename = $key, default)]
                pub $field: Option<$ty>,
            )*
        }

        impl RunConfig {
            /// Field-wise overlay: values present in `top` win.
            pub fn overlay(self, top: RunConfig) -> RunConfig {
                RunConfig { $( $field: top.$field.or(self.$field), )* }
            }

            /// Keys of the fields that are set.
            pub fn present_keys(&self) -> Vec<&'static str> {
                let mut keys = Vec::new();
                $( if self.$field.is_some() { keys.push($key); } )*
                keys
            }
        }
    };
}

run_config! {
    /// Command to run.
    #[arg(skip)]
    command: CommandName = "command",
    /// Reduction context for `reduce`.
    #[arg(long, value_enum)]
    context: ContextName = "context",

    /// Coefficient f(x) of the antilinear equation or the antidiagonal system.
    #[arg(long, allow_hyphen_values = true)]
    f: String = "f",
    /// Forcing g(x) of the antilinear equation.
    #[arg(long, allow_hyphen_values = true)]
    g: String = "g",
    /// First forcing component of the antidiagonal system.
    #[arg(long, allow_hyphen_values = true)]
    g1: String = "g1",
    /// Second forcing component; defaults to i conj(g1).
    #[arg(long, allow_hyphen_values = true)]
    g2: String = "g2",
    /// Function h(x) for the forced series kernels.
    #[arg(long, allow_hyphen_values = true)]
    h: String = "h",
    /// Initial value u(0) (antilinear, Schrödinger, Helmholtz).
    #[arg(long, allow_hyphen_values = true)]
    u0: String = "u0",
    /// Initial slope u'(0) (Schrödinger, Helmholtz).
    #[arg(long, allow_hyphen_values = true)]
    u1: String = "u1",
    /// First component of the initial state of the antidiagonal system.
    #[arg(long = "u1-0", allow_hyphen_values = true)]
    u1_0: String = "u1-0",
    /// Second component of the initial state; defaults to i conj(u1-0) when forced.
    #[arg(long = "u2-0", allow_hyphen_values = true)]
    u2_0: String = "u2-0",
    /// Sign of the antilinear term.
    #[arg(long, value_enum)]
    sign: SignName = "sign",

    /// Schrödinger potential a(x) > 0.
    #[arg(long, allow_hyphen_values = true)]
    a: String = "a",
    /// Derivative of a(x).
    #[arg(long, allow_hyphen_values = true)]
    da: String = "da",
    /// Helmholtz coefficient alpha(x) > 0.
    #[arg(long, allow_hyphen_values = true)]
    alpha: String = "alpha",
    /// Derivative of alpha(x).
    #[arg(long, allow_hyphen_values = true)]
    dalpha: String = "dalpha",
    /// Helmholtz coefficient beta(x) > 0.
    #[arg(long, allow_hyphen_values = true)]
    beta: String = "beta",
    /// Derivative of beta(x).
    #[arg(long, allow_hyphen_values = true)]
    dbeta: String = "dbeta",
    /// Helmholtz source term.
    #[arg(long, allow_hyphen_values = true)]
    source: String = "source",
    /// How material derivatives are obtained.
    #[arg(long = "derivative-mode", value_enum)]
    derivative_mode: DerivativeName = "derivative-mode",

    /// Zakharov–Shabat potential q(x); `{xi}` is replaced by each value in `sweep-xi`.
    #[arg(long, allow_hyphen_values = true)]
    q: String = "q",
    /// Spectral parameter.
    #[arg(long, allow_hyphen_values = true)]
    xi: f64 = "xi",
    /// Spectral parameters for `sweep-xi`.
    #[arg(long = "xi-values", value_delimiter = ',', allow_hyphen_values = true)]
    xi_values: Vec<f64> = "xi-values",
    /// First component of the Zakharov–Shabat initial state.
    #[arg(long = "v1-0", allow_hyphen_values = true)]
    v1_0: String = "v1-0",
    /// Second component of the Zakharov–Shabat initial state.
    #[arg(long = "v2-0", allow_hyphen_values = true)]
    v2_0: String = "v2-0",

    /// Kubelka–Munk absorption K(x) >= 0.
    #[arg(long = "K", allow_hyphen_values = true)]
    k: String = "K",
    /// Kubelka–Munk scattering S(x) >= 0.
    #[arg(long = "S", allow_hyphen_values = true)]
    s: String = "S",
    /// Forward flux at x = 0.
    #[arg(long = "Fp0", allow_hyphen_values = true)]
    fp0: String = "Fp0",
    /// Backward flux at x = 0.
    #[arg(long = "Fm0", allow_hyphen_values = true)]
    fm0: String = "Fm0",

    /// Interval end.
    #[arg(long)]
    x0: f64 = "x0",
    /// Number of uniform steps.
    #[arg(long)]
    steps: usize = "steps",
    /// Solution route for the antidiagonal system.
    #[arg(long, value_enum)]
    method: MethodName = "method",
    /// Maximum series depth.
    #[arg(long)]
    order: usize = "order",
    /// Series truncation tolerance.
    #[arg(long)]
    tol: f64 = "tol",
    /// Verification suite name or `all`.
    #[arg(long)]
    suite: String = "suite",

    /// CSV output path; standard output when absent.
    #[arg(long)]
    output: PathBuf = "output",
    /// Also write the plotting script to this path.
    #[arg(long)]
    plot: PathBuf = "plot",
    /// Write the intermediate W, V, U trajectories of `reduce` next to the output.
    #[arg(long = "emit-intermediates", num_args = 0..=1, default_missing_value = "true")]
    emit_intermediates: bool = "emit-intermediates",
}

pub fn load(path: &Path) -> Result<RunConfig> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read config {}", path.display()))?;
    parse_json(&text).with_context(|| format!("invalid config {}", path.display()))
}

pub fn parse_json(text: &str) -> Result<RunConfig> {
    Ok(serde_json::from_str(text)?)
}

pub const DEFAULT_X0: f64 = 1.0;
pub const DEFAULT_STEPS: usize = 1000;
pub const DEFAULT_ORDER: usize = 20;
pub const DEFAULT_TOL: f64 = 1e-14;

impl RunConfig {
    pub fn x0(&self) -> Result<f64> {
        let x0 = self.x0.unwrap_or(DEFAULT_X0);
        if !(x0 > 0.0 && x0.is_finite()) {
            bail!("x0 must be a positive finite number, got {x0}");
        }
        Ok(x0)
    }

    pub fn steps(&self) -> Result<usize> {
        let n = self.steps.unwrap_or(DEFAULT_STEPS);
        if n < 2 {
            bail!("steps must be at least 2, got {n}");
        }
        Ok(n)
    }

    /// Rejects keys that the selected command would silently ignore.
    pub fn check_keys(&self, allowed: &[&str]) -> Result<()> {
        const ALWAYS: [&str; 5] = ["command", "x0", "steps", "output", "plot"];
        let stray: Vec<&str> = self
            .present_keys()
            .into_iter()
            .filter(|k| !ALWAYS.contains(k) && !allowed.contains(k))
            .collect();
        if !stray.is_empty() {
            bail!("option(s) not used by this command: {}", stray.join(", "));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_keys_are_flag_names() {
        let cfg = parse_json(
            r#"{"command": "reduce", "context": "kubelka-munk", "K": "0", "S": "0.5",
                "Fp0": "1", "Fm0": "0", "x0": 1, "steps": 10, "xi-values": [0, 0.5],
                "emit-intermediates": true, "u1-0": "1"}"#,
        )
        .unwrap();
        assert_eq!(cfg.command, Some(CommandName::Reduce));
        assert_eq!(cfg.context, Some(ContextName::KubelkaMunk));
        assert_eq!(cfg.k.as_deref(), Some("0"));
        assert_eq!(cfg.xi_values, Some(vec![0.0, 0.5]));
        assert_eq!(cfg.emit_intermediates, Some(true));
        assert_eq!(cfg.u1_0.as_deref(), Some("1"));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(parse_json(r#"{"k": "1"}"#).is_err());
        assert!(parse_json(r#"{"steps": -1}"#).is_err());
    }

    #[test]
    fn overlay_prefers_top() {
        let base = RunConfig { x0: Some(2.0), steps: Some(10), ..Default::default() };
        let top = RunConfig { steps: Some(20), ..Default::default() };
        let merged = base.overlay(top);
        assert_eq!(merged.x0, Some(2.0));
        assert_eq!(merged.steps, Some(20));
    }

    #[test]
    fn grid_parameters_are_validated() {
        let bad = |cfg: RunConfig| cfg.x0().is_err() || cfg.steps().is_err();
        assert!(bad(RunConfig { x0: Some(0.0), ..Default::default() }));
        assert!(bad(RunConfig { x0: Some(f64::NAN), ..Default::default() }));
        assert!(bad(RunConfig { steps: Some(1), ..Default::default() }));
        assert!(!bad(RunConfig::default()));
    }

    #[test]
    fn stray_keys_are_reported() {
        let cfg = RunConfig { f: Some("1".into()), a: Some("4".into()), ..Default::default() };
        let err = cfg.check_keys(&["f"]).unwrap_err().to_string();
        assert!(err.contains('a'), "{err}");
        assert!(cfg.check_keys(&["f", "a"]).is_ok());
    }
}
