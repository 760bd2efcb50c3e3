//! Command-line flags and the `key=value` config file that supplies defaults.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::Failure;

#[derive(Parser, Debug)]
#[command(
    name = "lagmult",
    version,
    about = "Numerical checks of multiplier conditions for Laguerre expansions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Quadrule,
    Coeffs,
    Thm11,
    Thm12,
    Cor13,
    Cor14,
    Remark3,
    Thm31,
    Thm32,
    KernelNorms,
    MultLower,
    Fit,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Gauss-Laguerre nodes and weights.
    Quadrule(Flags),
    /// Transform coefficients of a built-in test function.
    Coeffs(Flags),
    /// Coefficient inequality for Δ₂Δ^a f̂ over the test families.
    Thm11(Flags),
    /// Multiplier block condition with weight (2γ+1)/p - (2α+1)/2.
    Thm12(Flags),
    /// Block condition at γ = α (variant a) or γ = αp/2 (variant b).
    Cor13(Flags),
    /// Single-coefficient lower bound on multiplier norms.
    Cor14(Flags),
    /// Block profiles of the alternating sequence (-1)^k k^-ε.
    Remark3(Flags),
    /// L¹ norm against the weighted difference sum of the coefficients.
    Thm31(Flags),
    /// Weighted difference sum against the L¹ norm.
    Thm32(Flags),
    /// L¹ norms of Cesàro kernels over a dyadic grid.
    KernelNorms(Flags),
    /// Empirical lower bounds on multiplier norms.
    MultLower(Flags),
    /// Log-log slope of a two-column CSV (n, value).
    Fit(Flags),
}

impl Command {
    pub fn split(self) -> (CommandKind, Flags) {
        match self {
            Command::Quadrule(f) => (CommandKind::Quadrule, f),
            Command::Coeffs(f) => (CommandKind::Coeffs, f),
            Command::Thm11(f) => (CommandKind::Thm11, f),
            Command::Thm12(f) => (CommandKind::Thm12, f),
            Command::Cor13(f) => (CommandKind::Cor13, f),
            Command::Cor14(f) => (CommandKind::Cor14, f),
            Command::Remark3(f) => (CommandKind::Remark3, f),
            Command::Thm31(f) => (CommandKind::Thm31, f),
            Command::Thm32(f) => (CommandKind::Thm32, f),
            Command::KernelNorms(f) => (CommandKind::KernelNorms, f),
            Command::MultLower(f) => (CommandKind::MultLower, f),
            Command::Fit(f) => (CommandKind::Fit, f),
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum VariantArg {
    A,
    B,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum MultiplierArg {
    Spike,
    Cesaro,
    Zero,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum FunctionArg {
    /// e^{-x}
    Exp,
    /// 1/(1+x)
    Rational,
    /// indicator of [0, 1]
    Step,
}

#[derive(Args, Debug, Clone, Default)]
pub struct Flags {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub n_max: Option<usize>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub tol: Option<f64>,
    /// Worker cap; output does not depend on it.
    #[arg(long)]
    pub threads: Option<usize>,
    /// Rule order for `quadrule`.
    #[arg(long)]
    pub order: Option<usize>,
    #[arg(long, value_enum)]
    pub variant: Option<VariantArg>,
    #[arg(long, value_enum)]
    pub multiplier: Option<MultiplierArg>,
    #[arg(long, value_enum)]
    pub function: Option<FunctionArg>,
    /// Input CSV for `fit`.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Output path; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// `key=value` lines supplying defaults for the flags above.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Fills unset flags from `key=value` text. Keys are flag names with or
/// without dashes; `#` starts a comment.
pub fn apply_config(flags: &mut Flags, text: &str) -> Result<(), Failure> {
    let mut seen = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Failure::usage(format!(
                "config line {}: expected key=value, got `{line}`",
                i + 1
            ))
        })?;
        let key = key.trim().trim_start_matches("--").replace('_', "-");
        seen.insert(key, value.trim().to_string());
    }
    for (key, value) in &seen {
        let bad = |what: &str| Failure::usage(format!("config key `{key}`: {what} `{value}`"));
        macro_rules! fill {
            ($field:ident) => {
                if flags.$field.is_none() {
                    flags.$field = Some(parse(value).map_err(|_| bad("cannot parse"))?);
                }
            };
        }
        macro_rules! fill_enum {
            ($field:ident) => {
                if flags.$field.is_none() {
                    flags.$field =
                        Some(ValueEnum::from_str(value, true).map_err(|_| bad("invalid value"))?);
                }
            };
        }
        match key.as_str() {
            "alpha" => fill!(alpha),
            "gamma" => fill!(gamma),
            "p" => fill!(p),
            "a" => fill!(a),
            "delta" => fill!(delta),
            "epsilon" => fill!(epsilon),
            "n-max" => fill!(n_max),
            "trials" => fill!(trials),
            "seed" => fill!(seed),
            "tol" => fill!(tol),
            "threads" => fill!(threads),
            "order" => fill!(order),
            "variant" => fill_enum!(variant),
            "multiplier" => fill_enum!(multiplier),
            "function" => fill_enum!(function),
            "format" => fill_enum!(format),
            "input" => fill!(input),
            "out" => fill!(out),
            _ => return Err(Failure::usage(format!("unknown config key `{key}`"))),
        }
    }
    Ok(())
}

fn parse<T: FromStr>(s: &str) -> Result<T, T::Err> {
    s.parse()
}
