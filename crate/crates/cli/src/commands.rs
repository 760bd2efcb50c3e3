//! Dispatch from validated flags to the harness and the writers.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use lagmult_core::harness::{
    counterexample_remark3, fit_exponent, kernel_norm_sweep, multiplier_lower_bound, verify_cor13,
    verify_cor14, verify_thm11, verify_thm12, verify_thm31, verify_thm32, AuxRow, ExponentFit,
    Family, MultiplierFamily, ProfilePair, Remark3Report, Variant, Verdict, VerificationReport,
};
use lagmult_core::norms::{dyadic_grid, BlockNormProfile, SpaceSpec};
use lagmult_core::quadrature::gauss_laguerre;
use lagmult_core::transform::{analyze_declared, DeclaredFn};
use lagmult_core::Exec;

use crate::args::{
    apply_config, CommandKind, Flags, Format, FunctionArg, MultiplierArg, VariantArg,
};
use crate::emit::{num, write_csv, write_json};
use crate::{Failure, EXIT_INCONCLUSIVE, EXIT_OK, EXIT_VIOLATED};

const DEFAULT_N_MAX: usize = 256;
const DEFAULT_REMARK3_N_MAX: usize = 4096;
const DEFAULT_TRIALS: usize = 8;
const DEFAULT_TOL: f64 = 1e-9;
/// Truncation tolerance of the fractional differences in `remark3`.
const DEFAULT_REMARK3_TOL: f64 = 1e-12;
const DEFAULT_COEFFS_N_MAX: usize = 16;

pub fn run(kind: CommandKind, mut flags: Flags) -> Result<u8, Failure> {
    if let Some(path) = flags.config.clone() {
        let text = fs::read_to_string(&path)
            .map_err(|e| Failure::usage(format!("--config {}: {e}", path.display())))?;
        apply_config(&mut flags, &text)?;
    }
    match flags.threads {
        Some(0) => Err(Failure::usage("--threads must be at least 1")),
        #[cfg(feature = "parallel")]
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| Failure::io(format!("thread pool: {e}")))?;
            pool.install(|| dispatch(kind, &flags))
        }
        _ => dispatch(kind, &flags),
    }
}

fn verdict_code(v: Verdict) -> u8 {
    match v {
        Verdict::Consistent => EXIT_OK,
        Verdict::Violated => EXIT_VIOLATED,
        Verdict::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

fn required<T: Copy>(v: Option<T>, flag: &str) -> Result<T, Failure> {
    v.ok_or_else(|| Failure::usage(format!("{flag} is required")))
}

struct Common<'a> {
    alpha: f64,
    gamma: f64,
    p: f64,
    n_max: usize,
    trials: usize,
    seed: u64,
    tol: f64,
    format: Format,
    out: Option<&'a Path>,
    exec: Exec,
}

impl<'a> Common<'a> {
    fn new(f: &'a Flags) -> Result<Self, Failure> {
        let tol = f.tol.unwrap_or(DEFAULT_TOL);
        if tol.is_nan() || tol <= 0.0 {
            return Err(Failure::usage(format!("--tol must be positive, got {tol}")));
        }
        let trials = f.trials.unwrap_or(DEFAULT_TRIALS);
        if trials == 0 {
            return Err(Failure::usage("--trials must be at least 1"));
        }
        Ok(Common {
            alpha: f.alpha.unwrap_or(0.0),
            gamma: f.gamma.unwrap_or(0.0),
            p: f.p.unwrap_or(1.0),
            n_max: f.n_max.unwrap_or(DEFAULT_N_MAX),
            trials,
            seed: f.seed.unwrap_or(0),
            tol,
            format: f.format.unwrap_or(Format::Csv),
            out: f.out.as_deref(),
            exec: Exec::default(),
        })
    }

    fn space(&self) -> Result<SpaceSpec, Failure> {
        Ok(SpaceSpec::new(self.p, self.gamma, self.alpha)?)
    }

    fn grid(&self) -> Vec<usize> {
        dyadic_grid(self.n_max)
    }
}

fn variant(f: &Flags) -> Variant {
    match f.variant.unwrap_or(VariantArg::A) {
        VariantArg::A => Variant::A,
        VariantArg::B => Variant::B,
    }
}

fn multiplier(f: &Flags, default: MultiplierArg) -> Result<MultiplierFamily, Failure> {
    Ok(match f.multiplier.unwrap_or(default) {
        MultiplierArg::Spike => MultiplierFamily::Spike,
        MultiplierArg::Zero => MultiplierFamily::Zero,
        MultiplierArg::Cesaro => MultiplierFamily::Cesaro {
            delta: required(f.delta, "--delta")?,
        },
    })
}

fn dispatch(kind: CommandKind, f: &Flags) -> Result<u8, Failure> {
    let c = Common::new(f)?;
    let a = f.a.unwrap_or(0.0);
    match kind {
        CommandKind::Quadrule => quadrule(&c, required(f.order, "--order")?),
        CommandKind::Coeffs => coeffs(&c, f),
        CommandKind::Thm11 => {
            let r = verify_thm11(
                &Family::standard(c.trials),
                &c.space()?,
                a,
                &c.grid(),
                c.seed,
                c.tol,
                c.exec,
            )?;
            emit_report(&r, c.format, c.out)
        }
        CommandKind::Thm12 => {
            let m = multiplier(f, MultiplierArg::Spike)?;
            let r = verify_thm12(
                m,
                &c.space()?,
                a,
                &c.grid(),
                c.trials,
                c.seed,
                c.tol,
                c.exec,
            )?;
            emit_report(&r, c.format, c.out)
        }
        CommandKind::Cor13 => {
            let m = multiplier(f, MultiplierArg::Spike)?;
            let r = verify_cor13(
                m,
                variant(f),
                c.p,
                c.alpha,
                &c.grid(),
                c.trials,
                c.seed,
                c.tol,
                c.exec,
            )?;
            emit_report(&r, c.format, c.out)
        }
        CommandKind::Cor14 => {
            let m = multiplier(f, MultiplierArg::Spike)?;
            let r = verify_cor14(
                m,
                variant(f),
                c.p,
                c.alpha,
                &c.grid(),
                c.trials,
                c.seed,
                c.tol,
                c.exec,
            )?;
            emit_report(&r, c.format, c.out)
        }
        CommandKind::Remark3 => remark3(&c, f),
        CommandKind::Thm31 => {
            let delta = required(f.delta, "--delta")?;
            let fams = Family::standard(c.trials);
            let r = verify_thm31(
                &fams,
                delta,
                c.alpha,
                c.gamma,
                &c.grid(),
                c.seed,
                c.tol,
                c.exec,
            )?;
            emit_report(&r, c.format, c.out)
        }
        CommandKind::Thm32 => {
            let fams = Family::standard(c.trials);
            let r = verify_thm32(
                &fams,
                c.alpha,
                c.gamma,
                &c.grid(),
                f.delta,
                c.seed,
                c.tol,
                c.exec,
            )?;
            emit_report(&r, c.format, c.out)
        }
        CommandKind::KernelNorms => kernel_norms(&c, required(f.delta, "--delta")?),
        CommandKind::MultLower => mult_lower(&c, f),
        CommandKind::Fit => fit(
            &c,
            f.input
                .as_ref()
                .ok_or_else(|| Failure::usage("--input is required"))?,
        ),
    }
}

/// Report as a `(n, lhs, rhs, ratio)` table or as one JSON object; the
/// exit code follows the verdict.
pub fn emit_report(
    r: &VerificationReport,
    format: Format,
    out: Option<&Path>,
) -> Result<u8, Failure> {
    match format {
        Format::Csv => {
            let rows: Vec<Vec<String>> = r
                .rows
                .iter()
                .map(|x| vec![x.n.to_string(), num(x.lhs), num(x.rhs), num(x.ratio)])
                .collect();
            write_csv(out, &["n", "lhs", "rhs", "ratio"], &rows)?;
        }
        Format::Json => write_json(out, r)?,
    }
    Ok(verdict_code(r.verdict))
}

#[derive(Serialize)]
struct QuadOut {
    alpha: f64,
    order: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    log_weights: Vec<f64>,
}

fn quadrule(c: &Common, order: usize) -> Result<u8, Failure> {
    let rule = gauss_laguerre(order, c.alpha)?;
    match c.format {
        Format::Csv => {
            let rows: Vec<Vec<String>> = (0..rule.order())
                .map(|i| {
                    vec![
                        i.to_string(),
                        num(rule.nodes[i]),
                        num(rule.weights[i]),
                        num(rule.log_weights[i]),
                    ]
                })
                .collect();
            write_csv(c.out, &["i", "node", "weight", "log_weight"], &rows)?;
        }
        Format::Json => write_json(
            c.out,
            &QuadOut {
                alpha: c.alpha,
                order,
                nodes: rule.nodes,
                weights: rule.weights,
                log_weights: rule.log_weights,
            },
        )?,
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct CoeffsOut {
    function: String,
    alpha: f64,
    coefficients: Vec<f64>,
}

fn coeffs(c: &Common, f: &Flags) -> Result<u8, Failure> {
    let which = f.function.unwrap_or(FunctionArg::Exp);
    let n_max = f.n_max.unwrap_or(DEFAULT_COEFFS_N_MAX);
    let func = match which {
        FunctionArg::Exp => DeclaredFn::new(|x| (-x).exp(), 1.0, 0.0, 1.0, 0.0)?,
        FunctionArg::Rational => DeclaredFn::new(|x| 1.0 / (1.0 + x), 1.0, 0.0, 0.0, 0.0)?,
        FunctionArg::Step => {
            DeclaredFn::new(|x| if x <= 1.0 { 1.0 } else { 0.0 }, 1.0, 0.0, 0.0, 0.0)?
                .with_breaks(vec![1.0])
        }
    };
    let values = analyze_declared(&func, c.alpha, n_max, c.tol)?;
    match c.format {
        Format::Csv => {
            let rows: Vec<Vec<String>> = values
                .iter()
                .enumerate()
                .map(|(k, v)| vec![k.to_string(), num(*v)])
                .collect();
            write_csv(c.out, &["k", "coefficient"], &rows)?;
        }
        Format::Json => write_json(
            c.out,
            &CoeffsOut {
                function: format!("{which:?}").to_lowercase(),
                alpha: c.alpha,
                coefficients: values,
            },
        )?,
    }
    Ok(EXIT_OK)
}

fn profile_rows(rows: &mut Vec<Vec<String>>, label: &str, q: Option<f64>, p: &BlockNormProfile) {
    let qs = q.map_or("inf".to_string(), |q| q.to_string());
    for (n, v) in p.n_values.iter().zip(&p.block_norms) {
        rows.push(vec![label.to_string(), qs.clone(), n.to_string(), num(*v)]);
    }
}

fn pair_rows(rows: &mut Vec<Vec<String>>, prefix: &str, pair: &ProfilePair) {
    profile_rows(rows, &format!("{prefix}plain"), pair.q, &pair.plain);
    profile_rows(rows, &format!("{prefix}smoothed"), pair.q, &pair.smoothed);
}

/// Path of the fits sidecar written next to a CSV output.
pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".fits.json");
    PathBuf::from(s)
}

fn remark3(c: &Common, f: &Flags) -> Result<u8, Failure> {
    let eps = required(f.epsilon, "--epsilon")?;
    let n_max = f.n_max.unwrap_or(DEFAULT_REMARK3_N_MAX);
    let tol = f.tol.unwrap_or(DEFAULT_REMARK3_TOL);
    let r: Remark3Report = counterexample_remark3(eps, c.alpha, c.p, n_max, tol, c.exec)?;
    match c.format {
        Format::Csv => {
            let mut rows = Vec::new();
            let distinct = if r.alternating[0].q.is_none() { 1 } else { 2 };
            for pair in &r.alternating[..distinct] {
                pair_rows(&mut rows, "alternating-", pair);
            }
            pair_rows(&mut rows, "constant-sign-", &r.constant_sign);
            write_csv(c.out, &["profile", "q", "n", "block_norm"], &rows)?;
            let fits = Remark3Fits::from(&r);
            match c.out {
                Some(out) => write_json(Some(&sidecar_path(out)), &fits)?,
                None => {
                    let text =
                        serde_json::to_string(&fits).map_err(|e| Failure::io(e.to_string()))?;
                    eprintln!("{text}");
                }
            }
        }
        Format::Json => write_json(c.out, &r)?,
    }
    Ok(verdict_code(r.verdict))
}

#[derive(Serialize)]
struct PairFits {
    q: Option<f64>,
    plain: Option<ExponentFit>,
    smoothed: Option<ExponentFit>,
}

/// Slopes of every profile without the profile data.
#[derive(Serialize)]
struct Remark3Fits {
    epsilon: f64,
    alpha: f64,
    p: f64,
    lambda: f64,
    illustrative: bool,
    claimed_plain_slope: f64,
    claimed_smoothed_slope: f64,
    derived_smoothed_slope: f64,
    alternating: Vec<PairFits>,
    constant_sign: PairFits,
    verdict: Verdict,
    notes: Vec<String>,
}

impl From<&Remark3Report> for Remark3Fits {
    fn from(r: &Remark3Report) -> Self {
        let fits = |p: &ProfilePair| PairFits {
            q: p.q,
            plain: p.plain_fit,
            smoothed: p.smoothed_fit,
        };
        Remark3Fits {
            epsilon: r.epsilon,
            alpha: r.alpha,
            p: r.p,
            lambda: r.lambda,
            illustrative: r.illustrative,
            claimed_plain_slope: r.claimed_plain_slope,
            claimed_smoothed_slope: r.claimed_smoothed_slope,
            derived_smoothed_slope: r.derived_smoothed_slope,
            alternating: r.alternating.iter().map(fits).collect(),
            constant_sign: fits(&r.constant_sign),
            verdict: r.verdict,
            notes: r.notes.clone(),
        }
    }
}

#[derive(Serialize)]
struct Series<T> {
    command: &'static str,
    rows: Vec<T>,
    fit: Option<ExponentFit>,
    notes: Vec<String>,
}

fn fit_of(rows: &[(usize, f64)], notes: &mut Vec<String>) -> Option<ExponentFit> {
    match fit_exponent(rows) {
        Ok(fit) => Some(fit),
        Err(e) => {
            notes.push(format!("no fit: {e}"));
            None
        }
    }
}

fn kernel_norms(c: &Common, delta: f64) -> Result<u8, Failure> {
    let rows = kernel_norm_sweep(delta, c.alpha, c.gamma, &c.grid(), c.tol, c.exec)?;
    let mut notes = vec![format!(
        "delta={delta}, alpha={}, gamma={}",
        c.alpha, c.gamma
    )];
    let pts: Vec<(usize, f64)> = rows.iter().map(|r| (r.n, r.value)).collect();
    let fit = fit_of(&pts, &mut notes);
    match c.format {
        Format::Csv => {
            let table: Vec<Vec<String>> = rows
                .iter()
                .map(|r| vec![r.n.to_string(), num(r.value)])
                .collect();
            write_csv(c.out, &["n", "kernel_l1_norm"], &table)?;
        }
        Format::Json => write_json(
            c.out,
            &Series::<AuxRow> {
                command: "kernel-norms",
                rows,
                fit,
                notes,
            },
        )?,
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct LowerRow {
    n: usize,
    lower_bound: f64,
    witness: String,
}

fn mult_lower(c: &Common, f: &Flags) -> Result<u8, Failure> {
    let family = multiplier(f, MultiplierArg::Cesaro)?;
    let space = c.space()?;
    let mut rows = Vec::new();
    for n in c.grid() {
        let m = family.sequence(n, c.alpha)?;
        let lb = multiplier_lower_bound(&m, &space, c.trials, 2 * n, c.seed, c.tol, c.exec)?;
        rows.push(LowerRow {
            n,
            lower_bound: lb.value,
            witness: lb.witness,
        });
    }
    let mut notes = vec![format!("multipliers: {}, test degree 2n", family.label())];
    let pts: Vec<(usize, f64)> = rows.iter().map(|r| (r.n, r.lower_bound)).collect();
    let fit = fit_of(&pts, &mut notes);
    match c.format {
        Format::Csv => {
            let table: Vec<Vec<String>> = rows
                .iter()
                .map(|r| vec![r.n.to_string(), num(r.lower_bound), r.witness.clone()])
                .collect();
            write_csv(c.out, &["n", "lower_bound", "witness"], &table)?;
        }
        Format::Json => write_json(
            c.out,
            &Series {
                command: "mult-lower",
                rows,
                fit,
                notes,
            },
        )?,
    }
    Ok(EXIT_OK)
}

/// Reads `(n, value)` pairs from a CSV with a header row.
fn read_points(path: &Path) -> Result<Vec<(usize, f64)>, Failure> {
    let mut reader = csv::Reader::from_path(path)
        .map_err(|e| Failure::usage(format!("--input {}: {e}", path.display())))?;
    let mut pts = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| Failure::usage(format!("--input {}: {e}", path.display())))?;
        let bad = || {
            Failure::usage(format!(
                "--input {}: row {} is not `n,value`",
                path.display(),
                i + 1
            ))
        };
        if rec.len() < 2 {
            return Err(bad());
        }
        let n: usize = rec[0].trim().parse().map_err(|_| bad())?;
        let v: f64 = rec[1].trim().parse().map_err(|_| bad())?;
        pts.push((n, v));
    }
    Ok(pts)
}

fn fit(c: &Common, input: &Path) -> Result<u8, Failure> {
    let fit = fit_exponent(&read_points(input)?)?;
    match c.format {
        Format::Csv => write_csv(
            c.out,
            &["slope", "intercept", "max_residual", "n_lo", "n_hi"],
            &[vec![
                num(fit.slope),
                num(fit.intercept),
                num(fit.max_residual),
                fit.n_range.0.to_string(),
                fit.n_range.1.to_string(),
            ]],
        )?,
        Format::Json => write_json(c.out, &fit)?,
    }
    Ok(EXIT_OK)
}
