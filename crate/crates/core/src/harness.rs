//! Theorem-level experiments: admissibility predicates, ratio tables over
//! test-function families, multiplier-norm lower bounds, the alternating
//! counterexample and log-log exponent fits.
//!
//! Constants in the inequalities are never fixed. A run tabulates
//! `lhs / rhs` over a grid of degrees and calls it violated only when the
//! ratio keeps growing geometrically across the top two octaves.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cesaro::{cesaro_multiplier, kernel_l1_norm, CesaroSpec};
use crate::differences::{delta2_frac_range, frac_diff_range, RealSequence};
use crate::error::{param, Error, Result};
use crate::exec::Exec;
use crate::norms::{
    block_profile, dyadic_grid, lp_norm, thm11_lhs, thm31_k, thm32_lhs, BlockNormProfile, SpaceSpec,
};
use crate::special::binom_coeffs;
use crate::transform::{apply_multiplier, synthesize};

/// Whether a parameter set satisfies a hypothesis, and through which branch.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Admissibility {
    pub admissible: bool,
    pub branch: String,
}

impl Admissibility {
    fn new(admissible: bool, branch: impl Into<String>) -> Self {
        Admissibility {
            admissible,
            branch: branch.into(),
        }
    }
}

/// Upper bound on `(γ+1)/p` for the coefficient inequality, with its branch label.
fn thm11_upper(p: f64, alpha: f64, a: f64) -> (f64, &'static str) {
    if alpha + a <= 0.5 {
        ((alpha + a) / p + 1.0, "alpha+a<=1/2")
    } else {
        (
            (alpha + a) / 2.0 + 1.0 + 0.5 * (1.0 / p - 0.5),
            "alpha+a>1/2",
        )
    }
}

fn base_conditions(p: f64, alpha: f64, a: f64) -> Option<String> {
    if !(1.0..2.0).contains(&p) {
        return Some(format!("p={p} outside [1,2)"));
    }
    if !(alpha > -1.0) || !(a > -1.0) || !(alpha + a > -1.0) {
        return Some("need alpha > -1, a > -1, alpha+a > -1".into());
    }
    None
}

/// Hypotheses of the coefficient inequality for `Δ₂Δ^a f̂`.
pub fn thm11_admissible(p: f64, gamma: f64, alpha: f64, a: f64) -> Admissibility {
    if let Some(why) = base_conditions(p, alpha, a) {
        return Admissibility::new(false, why);
    }
    let (upper, branch) = thm11_upper(p, alpha, a);
    Admissibility::new((gamma + 1.0) / p <= upper, branch)
}

/// Lower bound on `(γ+1)/p` for the block condition on multipliers.
fn thm12_lower(p: f64, alpha: f64) -> (f64, &'static str) {
    if p < 4.0 / 3.0 {
        ((alpha + 1.0) / 2.0 + 1.0 / (3.0 * p), "p<4/3")
    } else {
        ((alpha + 1.0) / 2.0 + 0.25, "4/3<=p<2")
    }
}

/// Hypotheses of the block condition for `Δ₂Δ^a m`.
pub fn thm12_admissible(p: f64, gamma: f64, alpha: f64, a: f64) -> Admissibility {
    if let Some(why) = base_conditions(p, alpha, a) {
        return Admissibility::new(false, why);
    }
    let (upper, b1) = thm11_upper(p, alpha, a);
    let (lower, b2) = thm12_lower(p, alpha);
    let s = (gamma + 1.0) / p;
    Admissibility::new(s <= upper && s > lower, format!("{b1}, {b2}"))
}

/// Least-squares line through `(ln n, ln value)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentFit {
    pub slope: f64,
    pub intercept: f64,
    pub max_residual: f64,
    pub n_range: (usize, usize),
}

pub const MIN_FIT_POINTS: usize = 4;

/// Fits `value ≈ e^intercept n^slope` on the points with `n >= n_hi / 8`.
pub fn fit_exponent(points: &[(usize, f64)]) -> Result<ExponentFit> {
    let n_hi = points.iter().map(|p| p.0).max().unwrap_or(0);
    let used: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.0 > 0 && p.0 * 8 >= n_hi)
        .map(|&(n, v)| (n as f64, v))
        .collect();
    if used.len() < MIN_FIT_POINTS {
        return Err(Error::InsufficientData(format!(
            "{} points in the top three octaves, need {MIN_FIT_POINTS}",
            used.len()
        )));
    }
    if let Some(bad) = used.iter().find(|p| !(p.1 > 0.0) || !p.1.is_finite()) {
        return Err(Error::Domain(format!(
            "cannot fit nonpositive value {} at n={}",
            bad.1, bad.0
        )));
    }
    let xs: Vec<f64> = used.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = used.iter().map(|p| p.1.ln()).collect();
    let len = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / len;
    let my = ys.iter().sum::<f64>() / len;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let max_residual = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).abs())
        .fold(0.0, f64::max);
    let n_lo = used.iter().map(|p| p.0 as usize).min().unwrap_or(0);
    Ok(ExponentFit {
        slope,
        intercept,
        max_residual,
        n_range: (n_lo, n_hi),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Consistent,
    Violated,
    Inconclusive,
}

/// Value at the largest grid point `<= target`.
fn at_or_below(rows: &[(usize, f64)], target: usize) -> Option<f64> {
    rows.iter()
        .filter(|r| r.0 <= target)
        .max_by_key(|r| r.0)
        .map(|r| r.1)
}

/// Violated iff `r(n/4) <= r(n/2) <= r(n)` and `r(n) >= 2 r(n/4) > 0` at the top `n`.
pub fn growth_verdict(rows: &[(usize, f64)]) -> Verdict {
    if rows.len() < 3 {
        return Verdict::Inconclusive;
    }
    let top = rows.iter().map(|r| r.0).max().unwrap_or(0);
    let (Some(r4), Some(r2), Some(r1)) = (
        at_or_below(rows, top / 4),
        at_or_below(rows, top / 2),
        at_or_below(rows, top),
    ) else {
        return Verdict::Inconclusive;
    };
    if r4 <= r2 && r2 <= r1 && r1 > 0.0 && r1 >= 2.0 * r4 {
        Verdict::Violated
    } else {
        Verdict::Consistent
    }
}

/// Parameters of a run; `q = None` with `p` set means `q = ∞`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub p: Option<f64>,
    pub q: Option<f64>,
    pub gamma: Option<f64>,
    pub alpha: Option<f64>,
    pub a: Option<f64>,
    pub delta: Option<f64>,
    pub epsilon: Option<f64>,
}

impl Params {
    fn space(space: &SpaceSpec) -> Self {
        Params {
            p: Some(space.p),
            q: space.q(),
            gamma: Some(space.gamma),
            alpha: Some(space.alpha),
            ..Default::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub n: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

/// `(n, value)` pairs such as kernel norms or block norms.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuxRow {
    pub n: usize,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub theorem: String,
    pub params: Params,
    pub admissible: bool,
    pub branch: String,
    pub rows: Vec<Row>,
    pub ratio_sup: f64,
    pub fit: Option<ExponentFit>,
    pub verdict: Verdict,
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub aux_label: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub aux_rows: Vec<AuxRow>,
}

impl VerificationReport {
    fn new(theorem: &str, params: Params, adm: Admissibility) -> Self {
        VerificationReport {
            theorem: theorem.into(),
            params,
            admissible: adm.admissible,
            branch: adm.branch,
            rows: Vec::new(),
            ratio_sup: 0.0,
            fit: None,
            verdict: Verdict::Inconclusive,
            notes: Vec::new(),
            aux_label: String::new(),
            aux_rows: Vec::new(),
        }
    }

    /// Fills `ratio_sup`, `fit` and `verdict` from the rows.
    fn conclude(&mut self) {
        let pts: Vec<(usize, f64)> = self.rows.iter().map(|r| (r.n, r.ratio)).collect();
        self.ratio_sup = pts.iter().map(|p| p.1).fold(0.0, f64::max);
        self.fit = fit_exponent(&pts).ok();
        self.verdict = if self.admissible {
            growth_verdict(&pts)
        } else {
            Verdict::Inconclusive
        };
        if !self.admissible {
            self.notes.push(format!(
                "parameters outside the hypotheses ({})",
                self.branch
            ));
        }
    }
}

/// Test-function families, given by their transform coefficients `f̂(0..=n)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Family {
    /// `f̂ = e_n`, i.e. `f = L_n^α`.
    SingleMode,
    /// `trials` draws of independent uniform `±1` coefficients.
    RandomSigns { trials: usize },
    /// `f̂(k) = (k+1)^{-s}`.
    PowerDecay { s: f64 },
    /// `f̂(k) = 1`.
    Dirichlet,
    /// `f̂(k) = A_{n-k}^{α+2} / A_n^{α+2}`, a smoothed peak at the origin.
    CesaroSpike,
}

impl Family {
    /// Single modes, random signs, three power decays and the Dirichlet profile.
    pub fn standard(trials: usize) -> Vec<Family> {
        vec![
            Family::SingleMode,
            Family::RandomSigns { trials },
            Family::PowerDecay { s: 0.6 },
            Family::PowerDecay { s: 1.0 },
            Family::PowerDecay { s: 2.0 },
            Family::Dirichlet,
        ]
    }

    pub fn label(&self) -> String {
        match self {
            Family::SingleMode => "single-mode".into(),
            Family::RandomSigns { .. } => "random-signs".into(),
            Family::PowerDecay { s } => format!("power-decay(s={s})"),
            Family::Dirichlet => "dirichlet".into(),
            Family::CesaroSpike => "cesaro-spike".into(),
        }
    }

    /// Members of degree `n`. Random draws use stream `(n, trial)` of `seed`.
    pub fn members(&self, n: usize, alpha: f64, seed: u64) -> Vec<Vec<f64>> {
        match *self {
            Family::SingleMode => {
                let mut e = vec![0.0; n + 1];
                e[n] = 1.0;
                vec![e]
            }
            Family::RandomSigns { trials } => (0..trials)
                .map(|t| {
                    let mut rng = seeded_rng(seed, n, t);
                    (0..=n)
                        .map(|_| if rng.random_bool(0.5) { 1.0 } else { -1.0 })
                        .collect()
                })
                .collect(),
            Family::PowerDecay { s } => vec![(0..=n).map(|k| ((k + 1) as f64).powf(-s)).collect()],
            Family::Dirichlet => vec![vec![1.0; n + 1]],
            Family::CesaroSpike => {
                let a = binom_coeffs(alpha + 2.0, n + 1);
                vec![(0..=n).map(|k| a[n - k] / a[n]).collect()]
            }
        }
    }
}

/// Reproducible generator for member `trial` at degree `n`.
pub fn seeded_rng(seed: u64, n: usize, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((n as u64) << 32) | trial as u64);
    rng
}

struct Task {
    n: usize,
    family: usize,
    fhat: Vec<f64>,
}

fn tasks(families: &[Family], n_grid: &[usize], alpha: f64, seed: u64) -> Vec<Task> {
    let mut out = Vec::new();
    for &n in n_grid {
        for (i, fam) in families.iter().enumerate() {
            out.extend(fam.members(n, alpha, seed).into_iter().map(|fhat| Task {
                n,
                family: i,
                fhat,
            }));
        }
    }
    out
}

/// Evaluates `(lhs, rhs)` on every task and keeps, per grid point, the
/// member with the largest ratio (first one on ties). Members with
/// `rhs = 0` are skipped.
fn max_ratio_rows(
    families: &[Family],
    n_grid: &[usize],
    alpha: f64,
    seed: u64,
    exec: Exec,
    eval: impl Fn(&[f64]) -> Result<(f64, f64)> + Sync + Send,
) -> Result<(Vec<Row>, Vec<String>)> {
    let work = tasks(families, n_grid, alpha, seed);
    let values = exec.try_map(&work, |t| eval(&t.fhat))?;
    let mut rows = Vec::with_capacity(n_grid.len());
    let mut witnesses = Vec::with_capacity(n_grid.len());
    for &n in n_grid {
        let mut best: Option<(Row, usize)> = None;
        for (t, &(lhs, rhs)) in work.iter().zip(&values).filter(|(t, _)| t.n == n) {
            if rhs == 0.0 {
                continue;
            }
            let row = Row {
                n,
                lhs,
                rhs,
                ratio: lhs / rhs,
            };
            if best.is_none_or(|(b, _)| row.ratio > b.ratio) {
                best = Some((row, t.family));
            }
        }
        if let Some((row, fam)) = best {
            rows.push(row);
            witnesses.push(format!("n={n}: {}", families[fam].label()));
        }
    }
    Ok((rows, witnesses))
}

fn family_note(families: &[Family]) -> String {
    let labels: Vec<String> = families.iter().map(Family::label).collect();
    format!("families: {}", labels.join(", "))
}

/// Ratio `Σ-side / ‖f‖_{p,γ}` of the coefficient inequality per degree.
pub fn verify_thm11(
    families: &[Family],
    space: &SpaceSpec,
    a: f64,
    n_grid: &[usize],
    seed: u64,
    tol: f64,
    exec: Exec,
) -> Result<VerificationReport> {
    let adm = thm11_admissible(space.p, space.gamma, space.alpha, a);
    let mut report = VerificationReport::new(
        "thm11",
        Params {
            a: Some(a),
            ..Params::space(space)
        },
        adm,
    );
    if report.admissible {
        let (rows, witnesses) =
            max_ratio_rows(families, n_grid, space.alpha, seed, exec, |fhat| {
                let f = synthesize(fhat, space.alpha)?;
                Ok((thm11_lhs(fhat, space, a, tol)?, lp_norm(&f, space, tol)?))
            })?;
        report.rows = rows;
        report.notes.push(family_note(families));
        report
            .notes
            .extend(witnesses.into_iter().map(|w| format!("argmax {w}")));
    }
    report.conclude();
    Ok(report)
}

/// Largest observed `‖m f‖ / ‖f‖` and the family that produced it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LowerBound {
    pub value: f64,
    pub witness: String,
}

/// Empirical lower bound on the multiplier norm of `m` on `space`.
///
/// Single modes contribute `|m_k|` for `k <= degree` directly; the other
/// families are evaluated at `degree` with `trials` random draws.
pub fn multiplier_lower_bound(
    m: &RealSequence,
    space: &SpaceSpec,
    trials: usize,
    degree: usize,
    seed: u64,
    tol: f64,
    exec: Exec,
) -> Result<LowerBound> {
    if trials == 0 {
        return Err(param("need at least one trial"));
    }
    let mut best = LowerBound {
        value: 0.0,
        witness: "none".into(),
    };
    for k in 0..=degree {
        let v = m.value(k).abs();
        if v > best.value {
            best = LowerBound {
                value: v,
                witness: format!("single-mode(k={k})"),
            };
        }
    }
    let families = [
        Family::RandomSigns { trials },
        Family::PowerDecay { s: 0.6 },
        Family::PowerDecay { s: 1.0 },
        Family::PowerDecay { s: 2.0 },
        Family::Dirichlet,
        Family::CesaroSpike,
    ];
    let work = tasks(&families, &[degree], space.alpha, seed);
    let ratios = exec.try_map(&work, |t| -> Result<f64> {
        let f = synthesize(&t.fhat, space.alpha)?;
        let below = lp_norm(&f, space, tol)?;
        if below == 0.0 {
            return Ok(0.0);
        }
        Ok(lp_norm(&apply_multiplier(m, &f), space, tol)? / below)
    })?;
    for (t, r) in work.iter().zip(ratios) {
        if r > best.value {
            best = LowerBound {
                value: r,
                witness: families[t.family].label(),
            };
        }
    }
    Ok(best)
}

/// Multiplier families indexed by their degree `n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum MultiplierFamily {
    /// `e_n`.
    Spike,
    /// Cesàro means `A_{n-k}^δ / A_n^δ`.
    Cesaro { delta: f64 },
    /// Identically zero.
    Zero,
}

impl MultiplierFamily {
    pub fn sequence(&self, n: usize, alpha: f64) -> Result<RealSequence> {
        Ok(match *self {
            MultiplierFamily::Spike => RealSequence::unit(n),
            MultiplierFamily::Cesaro { delta } => {
                cesaro_multiplier(&CesaroSpec::new(n, delta, alpha)?)
            }
            MultiplierFamily::Zero => RealSequence::finite(vec![0.0; n + 1]),
        })
    }

    pub fn label(&self) -> String {
        match self {
            MultiplierFamily::Spike => "spike".into(),
            MultiplierFamily::Cesaro { delta } => format!("cesaro(delta={delta})"),
            MultiplierFamily::Zero => "zero".into(),
        }
    }
}

/// The two Cohen-type variants: `γ = α` or `γ = αp/2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    A,
    B,
}

impl Variant {
    pub fn gamma(&self, p: f64, alpha: f64) -> f64 {
        match self {
            Variant::A => alpha,
            Variant::B => alpha * p / 2.0,
        }
    }

    /// Exponent of `(n+1)` in front of `|m_n|`.
    pub fn cohen_exponent(&self, p: f64, alpha: f64) -> f64 {
        match self {
            Variant::A => (2.0 * alpha + 2.0) * (1.0 / p - 0.5) - 0.5,
            Variant::B => 2.0 / p - 1.5,
        }
    }

    /// Order `a` of `Δ₂Δ^a` and block weight exponent in the block form.
    pub fn block_order_weight(&self, p: f64, alpha: f64) -> (f64, f64) {
        match self {
            Variant::A => {
                let lambda = (2.0 * alpha + 1.0) * (1.0 / p - 0.5);
                (lambda - 1.0, lambda)
            }
            Variant::B => (0.0, 1.0 / p - 0.5),
        }
    }
}

/// Hypotheses of the block form (`Δ₂Δ^{λ-1}` or `Δ₂`).
pub fn cor13_admissible(variant: Variant, p: f64, alpha: f64) -> Admissibility {
    if !(1.0..2.0).contains(&p) || !(alpha > -1.0) {
        return Admissibility::new(false, "need 1 <= p < 2, alpha > -1");
    }
    let h = 1.0 / p - 0.5;
    match variant {
        Variant::A => Admissibility::new(
            (1.0 / (3.0 * p)).max(0.25) < (alpha + 1.0) * h,
            "max(1/3p,1/4) < (alpha+1)(1/p-1/2)",
        ),
        Variant::B => Admissibility::new(
            p < 4.0 / 3.0 && (alpha - 1.0) * h >= -0.5,
            "p<4/3, (alpha-1)(1/p-1/2) >= -1/2",
        ),
    }
}

/// Hypotheses of the single-coefficient bound.
pub fn cor14_admissible(variant: Variant, p: f64, alpha: f64) -> Admissibility {
    let base = cor13_admissible(variant, p, alpha);
    match variant {
        Variant::A => {
            let p0 = (4.0 * alpha + 4.0) / (2.0 * alpha + 3.0);
            Admissibility::new(
                base.admissible && p < p0,
                format!("{}, p < (4alpha+4)/(2alpha+3)", base.branch),
            )
        }
        Variant::B => base,
    }
}

/// `(n+1)^e |m_n|` against the lower bound, as an upper estimate of the constant.
#[allow(clippy::too_many_arguments)]
pub fn cor14_row(
    m: &RealSequence,
    variant: Variant,
    space: &SpaceSpec,
    trials: usize,
    degree: usize,
    seed: u64,
    tol: f64,
    exec: Exec,
) -> Result<Row> {
    let n = m
        .support_len()
        .ok_or_else(|| param("single-coefficient bound needs a finite sequence"))?
        .max(1)
        - 1;
    let lhs =
        ((n + 1) as f64).powf(variant.cohen_exponent(space.p, space.alpha)) * m.value(n).abs();
    let rhs = multiplier_lower_bound(m, space, trials, degree, seed, tol, exec)?.value;
    let ratio = if lhs == 0.0 { 0.0 } else { lhs / rhs };
    Ok(Row { n, lhs, rhs, ratio })
}

/// Sweep of the single-coefficient bound; test functions have degree `2n`.
#[allow(clippy::too_many_arguments)]
pub fn verify_cor14(
    family: MultiplierFamily,
    variant: Variant,
    p: f64,
    alpha: f64,
    n_grid: &[usize],
    trials: usize,
    seed: u64,
    tol: f64,
    exec: Exec,
) -> Result<VerificationReport> {
    let adm = cor14_admissible(variant, p, alpha);
    let space = SpaceSpec::new(p, variant.gamma(p, alpha), alpha)?;
    let mut report = VerificationReport::new("cor14", Params::space(&space), adm);
    if let MultiplierFamily::Cesaro { delta } = family {
        report.params.delta = Some(delta);
    }
    report.notes.push(format!(
        "variant {variant:?}, multipliers: {}",
        family.label()
    ));
    if report.admissible {
        for &n in n_grid {
            let m = family.sequence(n, alpha)?;
            report.rows.push(cor14_row(
                &m,
                variant,
                &space,
                trials,
                2 * n,
                seed,
                tol,
                exec,
            )?);
        }
    }
    report.conclude();
    Ok(report)
}

/// Sup over dyadic blocks of `(k+1)^w Δ₂Δ^a m_k` for a finite `m`.
pub fn mdiff_block_profile(
    m: &RealSequence,
    a: f64,
    weight_exponent: f64,
    q: Option<f64>,
    n_max: usize,
    exec: Exec,
) -> Result<BlockNormProfile> {
    let len = 2 * n_max + 1;
    let d = delta2_frac_range(m, a, 0..len, 0.0, exec)?;
    let s = RealSequence::finite(d.iter().map(|e| e.value).collect());
    Ok(block_profile(&s, weight_exponent, q, n_max, exec))
}

/// Weight exponent `(2γ+1)/p - (2α+1)/2` of the multiplier block condition.
pub fn thm12_weight(space: &SpaceSpec) -> f64 {
    (2.0 * space.gamma + 1.0) / space.p - (2.0 * space.alpha + 1.0) / 2.0
}

/// Block condition on a multiplier sweep: `sup_n` block norm against the
/// empirical norm lower bound (test functions of degree `2n`).
#[allow(clippy::too_many_arguments)]
fn block_sweep(
    theorem: &str,
    family: MultiplierFamily,
    space: &SpaceSpec,
    a: f64,
    weight: f64,
    adm: Admissibility,
    n_grid: &[usize],
    trials: usize,
    seed: u64,
    tol: f64,
    exec: Exec,
) -> Result<VerificationReport> {
    let mut params = Params {
        a: Some(a),
        ..Params::space(space)
    };
    if let MultiplierFamily::Cesaro { delta } = family {
        params.delta = Some(delta);
    }
    let mut report = VerificationReport::new(theorem, params, adm);
    report.notes.push(format!(
        "multipliers: {}, block weight exponent {weight}",
        family.label()
    ));
    if report.admissible {
        for &n in n_grid {
            let m = family.sequence(n, space.alpha)?;
            let lhs = mdiff_block_profile(&m, a, weight, space.q(), n.max(1), exec)?.sup();
            let rhs = multiplier_lower_bound(&m, space, trials, 2 * n, seed, tol, exec)?.value;
            let ratio = if lhs == 0.0 { 0.0 } else { lhs / rhs };
            report.rows.push(Row { n, lhs, rhs, ratio });
        }
    }
    report.conclude();
    Ok(report)
}

/// Multiplier block condition with weight `(2γ+1)/p - (2α+1)/2`.
#[allow(clippy::too_many_arguments)]
pub fn verify_thm12(
    family: MultiplierFamily,
    space: &SpaceSpec,
    a: f64,
    n_grid: &[usize],
    trials: usize,
    seed: u64,
    tol: f64,
    exec: Exec,
) -> Result<VerificationReport> {
    let adm = thm12_admissible(space.p, space.gamma, space.alpha, a);
    block_sweep(
        "thm12",
        family,
        space,
        a,
        thm12_weight(space),
        adm,
        n_grid,
        trials,
        seed,
        tol,
        exec,
    )
}

/// The `γ = α` (`Δ₂Δ^{λ-1}`, weight `λ`) or `γ = αp/2` (`Δ₂`) block form.
#[allow(clippy::too_many_arguments)]
pub fn verify_cor13(
    family: MultiplierFamily,
    variant: Variant,
    p: f64,
    alpha: f64,
    n_grid: &[usize],
    trials: usize,
    seed: u64,
    tol: f64,
    exec: Exec,
) -> Result<VerificationReport> {
    let adm = cor13_admissible(variant, p, alpha);
    let space = SpaceSpec::new(p, variant.gamma(p, alpha), alpha)?;
    let (a, weight) = variant.block_order_weight(p, alpha);
    let mut report = block_sweep(
        "cor13", family, &space, a, weight, adm, n_grid, trials, seed, tol, exec,
    )?;
    report.notes.push(format!("variant {variant:?}"));
    Ok(report)
}

/// Both block profiles of one sequence for one `q`, with their fits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfilePair {
    /// `None` for `q = ∞`.
    pub q: Option<f64>,
    /// `(k+1) Δm_k`.
    pub plain: BlockNormProfile,
    /// `(k+1)^λ Δ₂Δ^{λ-1} m_k`.
    pub smoothed: BlockNormProfile,
    pub plain_fit: Option<ExponentFit>,
    pub smoothed_fit: Option<ExponentFit>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Remark3Report {
    pub epsilon: f64,
    pub alpha: f64,
    pub p: f64,
    pub lambda: f64,
    /// `λ <= 1`, outside the frame `λ > 1` of the comparison.
    pub illustrative: bool,
    pub n_max: usize,
    /// Slopes asserted for the two profiles: `1-ε` and `-ε`.
    pub claimed_plain_slope: f64,
    pub claimed_smoothed_slope: f64,
    /// Slope of the smoothed profile from `Δ₂Δ^{λ-1} m_k ~ 2^λ ε (-1)^k k^{-ε-1}`.
    pub derived_smoothed_slope: f64,
    /// `m_k = (-1)^k k^{-ε}`, first for the `q` of `p` then for `q = ∞`.
    pub alternating: Vec<ProfilePair>,
    /// `m_k = k^{-ε}` at `q = ∞`, up to `min(n_max, CONTRAST_N_MAX)`.
    pub constant_sign: ProfilePair,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

/// Smooth sequences need truncation lengths far beyond `k` at large `k`.
pub const CONTRAST_N_MAX: usize = 256;

/// Loosest truncation tolerance accepted for the contrast profiles.
pub const CONTRAST_TOL_CEILING: f64 = 1e-6;

/// Slack allowed between fitted and asserted slopes.
pub const SLOPE_SLACK: f64 = 0.1;

fn profile_pair(
    m: &RealSequence,
    lambda: f64,
    q: Option<f64>,
    n_max: usize,
    tol: f64,
    exec: Exec,
) -> Result<ProfilePair> {
    let len = 2 * n_max + 1;
    let plain_terms = frac_diff_range(m, 1.0, 0..len, 0.0, exec)?;
    let plain_seq = RealSequence::finite(plain_terms.iter().map(|e| e.value).collect());
    let smooth_terms = delta2_frac_range(m, lambda - 1.0, 0..len, tol, exec)?;
    let smooth_seq = RealSequence::finite(smooth_terms.iter().map(|e| e.value).collect());
    let plain = block_profile(&plain_seq, 1.0, q, n_max, exec);
    let smoothed = block_profile(&smooth_seq, lambda, q, n_max, exec);
    let fit = |p: &BlockNormProfile| {
        let pts: Vec<(usize, f64)> = p
            .n_values
            .iter()
            .copied()
            .zip(p.block_norms.iter().copied())
            .collect();
        fit_exponent(&pts).ok()
    };
    Ok(ProfilePair {
        q,
        plain_fit: fit(&plain),
        smoothed_fit: fit(&smoothed),
        plain,
        smoothed,
    })
}

/// Block profiles of `(-1)^k k^{-ε}` under plain first differences with
/// weight `(k+1)` and under `Δ₂Δ^{λ-1}` with weight `(k+1)^λ`,
/// `λ = (2α+1)(1/p-1/2)`.
pub fn counterexample_remark3(
    epsilon: f64,
    alpha: f64,
    p: f64,
    n_max: usize,
    tol: f64,
    exec: Exec,
) -> Result<Remark3Report> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(param(format!("epsilon must lie in (0,1), got {epsilon}")));
    }
    let space = SpaceSpec::new(p, alpha, alpha)?;
    let lambda = (2.0 * alpha + 1.0) * (1.0 / p - 0.5);
    if !(lambda - 1.0 > -1.0) {
        return Err(param(format!("lambda = {lambda} must be positive")));
    }
    let m = RealSequence::alternating_power(epsilon)?;
    let mut alternating = vec![profile_pair(&m, lambda, space.q(), n_max, tol, exec)?];
    if space.q().is_some() {
        alternating.push(profile_pair(&m, lambda, None, n_max, tol, exec)?);
    } else {
        alternating.push(alternating[0].clone());
    }
    let contrast = RealSequence::constant_sign_power(epsilon)?;
    let mut notes = Vec::new();
    let mut contrast_tol = tol;
    let constant_sign = loop {
        match profile_pair(
            &contrast,
            lambda,
            None,
            n_max.min(CONTRAST_N_MAX),
            contrast_tol,
            exec,
        ) {
            Err(Error::NonConvergence(_)) if contrast_tol < CONTRAST_TOL_CEILING => {
                contrast_tol *= 100.0
            }
            other => break other?,
        }
    };
    if contrast_tol != tol {
        notes.push(format!(
            "constant-sign contrast computed at tolerance {contrast_tol:e}"
        ));
    }

    let claimed_plain_slope = 1.0 - epsilon;
    let claimed_smoothed_slope = -epsilon;
    let derived_smoothed_slope = lambda - 1.0 - epsilon;
    let mut verdict = Verdict::Consistent;
    for pair in &alternating {
        let qs = pair.q.map_or("inf".to_string(), |q| q.to_string());
        match (pair.plain_fit, pair.smoothed_fit) {
            (Some(a), Some(b)) => {
                let ok_a = (a.slope - claimed_plain_slope).abs() <= SLOPE_SLACK;
                let ok_b = (b.slope - claimed_smoothed_slope).abs() <= SLOPE_SLACK;
                notes.push(format!(
                    "q={qs}: plain slope {:.4} (claimed {claimed_plain_slope}), smoothed slope {:.4} (claimed {claimed_smoothed_slope}, derived {derived_smoothed_slope})",
                    a.slope, b.slope
                ));
                if !(ok_a && ok_b) && verdict != Verdict::Inconclusive {
                    verdict = Verdict::Violated;
                }
            }
            _ => {
                notes.push(format!("q={qs}: too few blocks to fit"));
                verdict = Verdict::Inconclusive;
            }
        }
    }
    let illustrative = lambda <= 1.0;
    if illustrative {
        notes.push(format!("lambda = {lambda} <= 1: illustrative run"));
    }
    Ok(Remark3Report {
        epsilon,
        alpha,
        p,
        lambda,
        illustrative,
        n_max,
        claimed_plain_slope,
        claimed_smoothed_slope,
        derived_smoothed_slope,
        alternating,
        constant_sign,
        verdict,
        notes,
    })
}

/// `‖χ_n^δ‖_{L¹_{w(γ)}}` for each `n`.
pub fn kernel_norm_sweep(
    delta: f64,
    alpha: f64,
    gamma: f64,
    n_values: &[usize],
    tol: f64,
    exec: Exec,
) -> Result<Vec<AuxRow>> {
    exec.try_map(n_values, |&n| {
        let spec = CesaroSpec::new(n, delta, alpha)?;
        Ok(AuxRow {
            n,
            value: kernel_l1_norm(&spec, gamma, tol)?,
        })
    })
}

/// Smallest kernel degree used in the kernel-norm fit of a `thm31` run.
pub const KERNEL_N_MIN: usize = 32;

/// `‖f‖_{L¹_{w(γ)}} / K(f̂)` over truncated sequences, plus the kernel-norm
/// exponent fit against `α - γ`.
#[allow(clippy::too_many_arguments)]
pub fn verify_thm31(
    families: &[Family],
    delta: f64,
    alpha: f64,
    gamma: f64,
    n_grid: &[usize],
    seed: u64,
    tol: f64,
    exec: Exec,
) -> Result<VerificationReport> {
    let threshold = 2.0 * gamma - alpha + 0.5;
    let adm = Admissibility::new(
        threshold >= 0.0 && delta > threshold,
        "delta > 2gamma-alpha+1/2 >= 0",
    );
    let space = SpaceSpec::any_p(1.0, gamma, alpha)?;
    let params = Params {
        delta: Some(delta),
        ..Params::space(&space)
    };
    let mut report = VerificationReport::new("thm31", params, adm);
    let (rows, witnesses) = max_ratio_rows(families, n_grid, alpha, seed, exec, |fhat| {
        let k = thm31_k(
            &RealSequence::finite(fhat.to_vec()),
            delta,
            alpha,
            gamma,
            tol,
        )?;
        let f = synthesize(fhat, alpha)?;
        Ok((lp_norm(&f, &space, tol)?, k.value))
    })?;
    report.rows = rows;
    report.notes.push(family_note(families));
    report
        .notes
        .extend(witnesses.into_iter().map(|w| format!("argmax {w}")));
    report.conclude();

    let n_top = n_grid.iter().copied().max().unwrap_or(0);
    let kernel_ns: Vec<usize> = dyadic_grid(n_top)
        .into_iter()
        .filter(|&n| n >= KERNEL_N_MIN)
        .collect();
    report.aux_label = "kernel_l1_norm".into();
    report.aux_rows = kernel_norm_sweep(delta, alpha, gamma, &kernel_ns, tol, exec)?;
    let pts: Vec<(usize, f64)> = report.aux_rows.iter().map(|r| (r.n, r.value)).collect();
    match fit_exponent(&pts) {
        Ok(fit) => {
            report.notes.push(format!(
                "kernel norm slope {:.4} against allowed {}",
                fit.slope,
                alpha - gamma
            ));
            report.fit = Some(fit);
        }
        Err(e) => report.notes.push(format!("no kernel fit: {e}")),
    }
    Ok(report)
}

/// `Σ (k+1)^{γ-2/3} |Δ^{2γ-α+1/3} f̂(k)| / ‖f‖_{L¹_{w(γ)}}` over the families.
///
/// `paired_delta` is the Cesàro order of a companion sufficiency run; the
/// smoothness gap `(δ+1) - (2γ-α+1/3)` is noted (`7/6` plus the excess of
/// `δ` over its threshold).
#[allow(clippy::too_many_arguments)]
pub fn verify_thm32(
    families: &[Family],
    alpha: f64,
    gamma: f64,
    n_grid: &[usize],
    paired_delta: Option<f64>,
    seed: u64,
    tol: f64,
    exec: Exec,
) -> Result<VerificationReport> {
    let bound = (-1.0f64 / 3.0).max(alpha / 2.0 - 1.0 / 6.0);
    let adm = Admissibility::new(gamma > bound, "gamma > max(-1/3, alpha/2-1/6)");
    let space = SpaceSpec::any_p(1.0, gamma, alpha)?;
    let mut report = VerificationReport::new(
        "thm32",
        Params {
            delta: paired_delta,
            ..Params::space(&space)
        },
        adm,
    );
    if report.admissible {
        let (rows, witnesses) = max_ratio_rows(families, n_grid, alpha, seed, exec, |fhat| {
            let lhs = thm32_lhs(&RealSequence::finite(fhat.to_vec()), alpha, gamma, tol)?;
            let f = synthesize(fhat, alpha)?;
            Ok((lhs.value, lp_norm(&f, &space, tol)?))
        })?;
        report.rows = rows;
        report.notes.push(family_note(families));
        report
            .notes
            .extend(witnesses.into_iter().map(|w| format!("argmax {w}")));
        let threshold = 2.0 * gamma - alpha + 0.5;
        let order = 2.0 * gamma - alpha + 1.0 / 3.0;
        let gap = match paired_delta {
            Some(d) => d + 1.0 - order,
            None => threshold + 1.0 - order,
        };
        report.notes.push(format!(
            "smoothness gap (delta+1) - (2gamma-alpha+1/3) = {gap:.6}"
        ));
    }
    report.conclude();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::differences::frac_diff_range;
    use crate::norms::thm11_terms;
    use crate::special::gamma;
    use crate::transform::LaguerreExpansion;
    use proptest::prelude::{prop_assert, proptest, ProptestConfig};

    #[test]
    fn admissibility_examples() {
        let a = thm11_admissible(1.0, 0.0, 0.0, 0.0);
        assert!(a.admissible);
        assert_eq!(a.branch, "alpha+a<=1/2");
        assert!(!thm11_admissible(1.0, 0.5, 0.0, 0.0).admissible);
        let b = thm11_admissible(1.0, 1.0, 1.0, 0.0);
        assert!(!b.admissible);
        assert_eq!(b.branch, "alpha+a>1/2");
        assert!(!thm11_admissible(2.0, 0.0, 0.0, 0.0).admissible);
        assert!(!thm11_admissible(1.0, 0.0, 0.5, -1.6).admissible);

        assert!(thm12_admissible(1.0, 0.0, 0.0, 0.0).admissible);
        assert!(!thm12_admissible(1.5, 0.0, 0.0, 0.0).admissible);
        assert!(thm12_admissible(4.0 / 3.0, 0.0, 0.0, 0.0)
            .branch
            .ends_with("4/3<=p<2"));
        assert!(thm12_admissible(1.2, 0.0, 0.0, 0.0)
            .branch
            .ends_with("p<4/3"));
    }

    #[test]
    fn cor_admissibility() {
        assert!(cor14_admissible(Variant::A, 1.0, 0.0).admissible);
        // p0 = 4/3 at alpha = 0
        assert!(!cor14_admissible(Variant::A, 1.34, 0.0).admissible);
        assert!(cor14_admissible(Variant::B, 1.0, 0.0).admissible);
        assert!(!cor14_admissible(Variant::B, 1.5, 0.0).admissible);
    }

    #[test]
    fn fit_examples() {
        let pts: Vec<(usize, f64)> = [8usize, 16, 32, 64]
            .iter()
            .map(|&n| (n, 3.0 * (n * n) as f64))
            .collect();
        let f = fit_exponent(&pts).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-9);
        assert!((f.intercept - 3f64.ln()).abs() < 1e-9);
        assert!(f.max_residual < 1e-9);

        let pts: Vec<(usize, f64)> = [32usize, 64, 128, 256]
            .iter()
            .map(|&n| (n, (n as f64).sqrt() * (1.0 + 1.0 / n as f64)))
            .collect();
        let f = fit_exponent(&pts).unwrap();
        assert!((f.slope - 0.5).abs() < 0.02);
        assert_eq!(f.n_range, (32, 256));

        let pts: Vec<(usize, f64)> = (1..=8).map(|n| (n * 10, 7.5)).collect();
        assert!(fit_exponent(&pts).unwrap().slope.abs() < 1e-9);
    }

    #[test]
    fn fit_uses_top_octaves_only() {
        // n = 1..4 carry garbage that must be ignored
        let mut pts: Vec<(usize, f64)> = vec![(1, 1e6), (2, 1e-6), (4, 5.0)];
        pts.extend([32usize, 64, 128, 256].iter().map(|&n| (n, n as f64)));
        let f = fit_exponent(&pts).unwrap();
        assert!((f.slope - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fit_rejects_bad_input() {
        assert!(matches!(
            fit_exponent(&[(8, 1.0), (16, 1.0), (32, 1.0)]),
            Err(Error::InsufficientData(_))
        ));
        assert!(matches!(
            fit_exponent(&[(8, 1.0), (16, 0.0), (32, 1.0), (64, 1.0)]),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            fit_exponent(&[(8, 1.0), (16, -1.0), (32, 1.0), (64, 1.0)]),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn verdict_rule() {
        let grow: Vec<(usize, f64)> = [16usize, 32, 64, 128]
            .iter()
            .map(|&n| (n, n as f64))
            .collect();
        assert_eq!(growth_verdict(&grow), Verdict::Violated);
        let slow: Vec<(usize, f64)> = [16usize, 32, 64, 128]
            .iter()
            .map(|&n| (n, (n as f64).ln()))
            .collect();
        assert_eq!(growth_verdict(&slow), Verdict::Consistent);
        // one big bump is not sustained growth
        let bump = vec![(16, 1.0), (32, 10.0), (64, 3.0), (128, 4.0)];
        assert_eq!(growth_verdict(&bump), Verdict::Consistent);
        assert_eq!(growth_verdict(&[(1, 1.0), (2, 5.0)]), Verdict::Inconclusive);
        let zeros = vec![(1, 0.0), (2, 0.0), (4, 0.0)];
        assert_eq!(growth_verdict(&zeros), Verdict::Consistent);
    }

    #[test]
    fn random_family_is_reproducible_and_seed_dependent() {
        let fam = Family::RandomSigns { trials: 3 };
        let a = fam.members(16, 0.0, 7);
        assert_eq!(a, fam.members(16, 0.0, 7));
        assert_ne!(a, fam.members(16, 0.0, 8));
        assert_ne!(a[0], a[1]);
        assert!(a
            .iter()
            .all(|v| v.len() == 17 && v.iter().all(|x| x.abs() == 1.0)));
    }

    #[test]
    fn single_mode_term_is_the_coefficient_quantity() {
        for &(p, g) in &[(1.0, 0.0), (1.5, 0.3)] {
            let space = SpaceSpec::new(p, g, 0.0).unwrap();
            for n in [0usize, 5, 40] {
                let fhat = &Family::SingleMode.members(n, 0.0, 0)[0];
                let terms = thm11_terms(fhat, &space, 0.0).unwrap();
                let f = synthesize(fhat, 0.0).unwrap();
                let expect = f.coeffs[n].abs() * ((n + 1) as f64).powf((g + 1.0) / p - 0.5);
                assert_eq!(terms[n], expect);
            }
        }
    }

    #[test]
    fn thm11_single_modes_bounded() {
        let space = SpaceSpec::new(1.0, 0.0, 0.0).unwrap();
        let grid = dyadic_grid(256);
        let r = verify_thm11(
            &[Family::SingleMode],
            &space,
            0.0,
            &grid,
            7,
            1e-10,
            Exec::default(),
        )
        .unwrap();
        assert_eq!(r.rows.len(), grid.len());
        assert_eq!(r.verdict, Verdict::Consistent, "{:?}", r.rows);
        for row in &r.rows {
            assert_eq!(row.lhs, ((row.n + 1) as f64).sqrt());
        }
    }

    #[test]
    fn thm11_inadmissible_is_inconclusive() {
        let space = SpaceSpec::new(1.0, 0.5, 0.0).unwrap();
        let r = verify_thm11(
            &[Family::SingleMode],
            &space,
            0.0,
            &[1, 2, 4, 8],
            1,
            1e-10,
            Exec::default(),
        )
        .unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
        assert!(r.rows.is_empty());
        assert!(!r.notes.is_empty());
    }

    #[test]
    fn thm11_deterministic_across_execution() {
        let space = SpaceSpec::new(1.0, 0.0, 0.0).unwrap();
        let fams = Family::standard(5);
        let grid = [4usize, 8, 16, 32];
        let a = verify_thm11(&fams, &space, 0.5, &grid, 11, 1e-10, Exec::Sequential).unwrap();
        let b = verify_thm11(&fams, &space, 0.5, &grid, 11, 1e-10, Exec::Parallel).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn lower_bound_of_identity_is_one() {
        let space = SpaceSpec::new(1.0, 0.0, 0.0).unwrap();
        let m = RealSequence::finite(vec![1.0; 33]);
        let lb = multiplier_lower_bound(&m, &space, 4, 32, 3, 1e-10, Exec::default()).unwrap();
        assert!((lb.value - 1.0).abs() < 1e-9, "{lb:?}");
    }

    #[test]
    fn lower_bound_of_projection_in_l2() {
        let space = SpaceSpec::any_p(2.0, 0.0, 0.0).unwrap();
        let m = RealSequence::unit(12);
        let lb = multiplier_lower_bound(&m, &space, 4, 24, 3, 1e-12, Exec::default()).unwrap();
        assert!((lb.value - 1.0).abs() < 1e-9, "{lb:?}");
    }

    #[test]
    fn cesaro_lower_bound_grows() {
        let space = SpaceSpec::new(1.0, 0.0, 0.0).unwrap();
        let pts: Vec<(usize, f64)> = [16usize, 32, 64, 128]
            .iter()
            .map(|&n| {
                let m = cesaro_multiplier(&CesaroSpec::new(n, 0.3, 0.0).unwrap());
                (
                    n,
                    multiplier_lower_bound(&m, &space, 2, 2 * n, 5, 1e-9, Exec::default())
                        .unwrap()
                        .value,
                )
            })
            .collect();
        assert!(pts.windows(2).all(|w| w[1].1 > w[0].1), "{pts:?}");
        let slope = fit_exponent(&pts).unwrap().slope;
        assert!(slope > 0.1 && slope < 0.35, "slope {slope}");
    }

    #[test]
    fn cor14_spike_and_zero() {
        let r = verify_cor14(
            MultiplierFamily::Spike,
            Variant::A,
            1.0,
            0.0,
            &dyadic_grid(64),
            2,
            1,
            1e-9,
            Exec::default(),
        )
        .unwrap();
        assert!(r.admissible);
        assert_eq!(r.verdict, Verdict::Consistent, "{:?}", r.rows);
        for row in &r.rows {
            assert_eq!(row.lhs, ((row.n + 1) as f64).sqrt());
        }
        let z = verify_cor14(
            MultiplierFamily::Zero,
            Variant::A,
            1.0,
            0.0,
            &[1, 2, 4, 8],
            1,
            1,
            1e-9,
            Exec::default(),
        )
        .unwrap();
        assert_eq!(z.verdict, Verdict::Consistent);
        assert!(z.rows.iter().all(|r| r.ratio == 0.0));
    }

    #[test]
    fn cor14_cesaro_above_critical_bounded() {
        let r = verify_cor14(
            MultiplierFamily::Cesaro { delta: 0.75 },
            Variant::A,
            1.0,
            0.0,
            &dyadic_grid(64),
            2,
            1,
            1e-9,
            Exec::default(),
        )
        .unwrap();
        assert_eq!(r.verdict, Verdict::Consistent, "{:?}", r.rows);
    }

    #[test]
    fn cor13_matches_thm12_weight_at_gamma_alpha() {
        for &(p, alpha) in &[(1.0, 2.0), (1.2, 1.5), (1.5, 3.0)] {
            let space = SpaceSpec::new(p, alpha, alpha).unwrap();
            let (a, w_cor) = Variant::A.block_order_weight(p, alpha);
            let w_thm = thm12_weight(&space);
            assert!((w_cor - w_thm).abs() <= 1e-12 * w_cor.abs());
            let m = cesaro_multiplier(&CesaroSpec::new(40, 1.3, alpha).unwrap());
            let x = mdiff_block_profile(&m, a, w_cor, space.q(), 64, Exec::default()).unwrap();
            let y = mdiff_block_profile(&m, a, w_thm, space.q(), 64, Exec::default()).unwrap();
            for (u, v) in x.block_norms.iter().zip(&y.block_norms) {
                assert!((u - v).abs() <= 1e-12 * u.abs().max(1e-300), "{u} {v}");
            }
        }
    }

    #[test]
    fn embedding_factor_two() {
        for &lambda in &[1.25, 1.5, 2.0] {
            for case in 0..100u64 {
                let mut rng = seeded_rng(case, 0, 0);
                let len = 8 + rng.random_range(0..40usize);
                let m =
                    RealSequence::finite((0..len).map(|_| rng.random_range(-1.0..1.0)).collect());
                let n_max = 64;
                let lhs =
                    mdiff_block_profile(&m, lambda - 1.0, lambda, None, n_max, Exec::Sequential)
                        .unwrap()
                        .sup();
                let d =
                    frac_diff_range(&m, lambda, 0..2 * n_max + 1, 0.0, Exec::Sequential).unwrap();
                let s = RealSequence::finite(d.iter().map(|e| e.value).collect());
                let rhs = block_profile(&s, lambda, None, n_max, Exec::Sequential).sup();
                assert!(
                    lhs <= 2.0 * rhs * (1.0 + 1e-12),
                    "lambda {lambda} case {case}: {lhs} > 2*{rhs}"
                );
            }
        }
    }

    /// `Δ₂Δ^{λ-1}` of `(-1)^k k^{-ε}` at `k >= 1` from the Laplace form
    /// `(-1)^k / Γ(ε) ∫ t^{ε-1} e^{-kt} (1+e^{-t})^λ (1-e^{-t}) dt`.
    fn alternating_oracle(eps: f64, lambda: f64, k: usize) -> f64 {
        use crate::quadrature::{integrate_weighted, Envelope};
        let g = |t: f64| {
            if t == 0.0 {
                return 0.0;
            }
            t.powf(eps - 1.0)
                * (-(k as f64) * t).exp()
                * (1.0 + (-t).exp()).powf(lambda)
                * (-(-t).exp_m1())
        };
        let env = Envelope::new(k as f64)
            .with_power(eps - 1.0)
            .with_lower_power(eps);
        let v = integrate_weighted(g, &env, 1e-15).unwrap().value / gamma(eps);
        if k.is_multiple_of(2) {
            v
        } else {
            -v
        }
    }

    #[test]
    fn smoothed_profile_matches_laplace_oracle() {
        let m = RealSequence::alternating_power(0.5).unwrap();
        let d = delta2_frac_range(&m, 1.5, 1..600, 1e-13, Exec::default()).unwrap();
        for k in [1usize, 2, 7, 64, 599] {
            let got = d[k - 1].value;
            let want = alternating_oracle(0.5, 2.5, k);
            assert!(
                (got - want).abs() <= 1e-9 * want.abs() + 1e-12,
                "k {k}: {got} vs {want}"
            );
        }
    }

    #[test]
    fn remark3_profiles() {
        let r = counterexample_remark3(0.5, 2.0, 1.0, 1024, 1e-12, Exec::default()).unwrap();
        assert_eq!(r.lambda, 2.5);
        assert!(!r.illustrative);
        let pair = &r.alternating[0];
        let a = pair.plain_fit.unwrap().slope;
        assert!((a - 0.5).abs() < 0.1, "plain slope {a}");
        // the smoothed profile follows λ-1-ε rather than -ε
        let b = pair.smoothed_fit.unwrap().slope;
        assert!(
            (b - r.derived_smoothed_slope).abs() < 0.1,
            "smoothed slope {b}"
        );
        assert_eq!(r.verdict, Verdict::Violated);
        // constant-sign contrast stays bounded in both profiles
        let c = &r.constant_sign;
        assert!(c.plain_fit.unwrap().slope < 0.0);
        assert!(c.smoothed_fit.unwrap().slope < 0.0, "{:?}", c.smoothed_fit);
    }

    #[test]
    fn remark3_plain_slope_decreases_in_epsilon() {
        let slopes: Vec<f64> = [0.25, 0.5, 0.75]
            .iter()
            .map(|&e| {
                let r = counterexample_remark3(e, 2.0, 1.0, 512, 1e-12, Exec::default()).unwrap();
                r.alternating[0].plain_fit.unwrap().slope
            })
            .collect();
        assert!(slopes[0] > slopes[1] && slopes[1] > slopes[2], "{slopes:?}");
    }

    #[test]
    fn remark3_q_from_p_and_infinity() {
        let r = counterexample_remark3(0.5, 2.0, 1.5, 256, 1e-12, Exec::default()).unwrap();
        assert_eq!(r.alternating[0].q, Some(3.0));
        assert_eq!(r.alternating[1].q, None);
        assert!(r.illustrative);
    }

    #[test]
    fn thm31_constant_function() {
        let r = verify_thm31(
            &[Family::SingleMode],
            0.75,
            0.0,
            0.0,
            &[0],
            0,
            1e-10,
            Exec::default(),
        )
        .unwrap();
        // f ≡ 1: ‖1‖ = ∫ e^{-x/2} dx = 2 and K = 1
        let row = r.rows[0];
        assert!((row.lhs - 2.0).abs() < 1e-9);
        assert!((row.rhs - 1.0).abs() < 1e-12);
    }

    #[test]
    fn thm31_kernel_norms_bounded_above_critical() {
        let r = verify_thm31(
            &[Family::SingleMode, Family::PowerDecay { s: 1.0 }],
            0.75,
            0.0,
            0.0,
            &dyadic_grid(256),
            0,
            1e-9,
            Exec::default(),
        )
        .unwrap();
        assert!(r.admissible);
        assert_eq!(r.verdict, Verdict::Consistent, "{:?}", r.rows);
        let norms: Vec<f64> = r.aux_rows.iter().map(|a| a.value).collect();
        let hi = norms.iter().copied().fold(0.0, f64::max);
        let lo = norms.iter().copied().fold(f64::INFINITY, f64::min);
        assert!(hi / lo < 1.5, "{norms:?}");
    }

    #[test]
    fn thm32_examples() {
        let one = verify_thm32(
            &[Family::SingleMode],
            0.0,
            0.0,
            &[0],
            None,
            0,
            1e-10,
            Exec::default(),
        )
        .unwrap();
        assert!(one.rows[0].ratio.is_finite() && one.rows[0].ratio > 0.0);
        let modes = verify_thm32(
            &[Family::SingleMode],
            0.0,
            0.0,
            &dyadic_grid(128),
            Some(0.75),
            0,
            1e-10,
            Exec::default(),
        )
        .unwrap();
        assert_eq!(modes.verdict, Verdict::Consistent, "{:?}", modes.rows);
        assert!(modes.notes.iter().any(|n| n.contains("smoothness gap")));
        let bad = verify_thm32(
            &[Family::SingleMode],
            0.0,
            -0.4,
            &[1, 2, 4],
            None,
            0,
            1e-10,
            Exec::default(),
        )
        .unwrap();
        assert_eq!(bad.verdict, Verdict::Inconclusive);
        assert!(bad.notes.iter().any(|n| n.contains("outside")));
    }

    #[test]
    fn default_gap_is_seven_sixths() {
        let r = verify_thm32(
            &[Family::SingleMode],
            0.0,
            0.0,
            &[1, 2, 4],
            None,
            0,
            1e-10,
            Exec::default(),
        )
        .unwrap();
        assert!(
            r.notes.iter().any(|n| n.contains("1.166667")),
            "{:?}",
            r.notes
        );
    }

    #[test]
    fn zero_member_excluded() {
        let space = SpaceSpec::new(1.0, 0.0, 0.0).unwrap();
        let (rows, _) =
            max_ratio_rows(&[Family::Dirichlet], &[3], 0.0, 0, Exec::Sequential, |_| {
                Ok((1.0, 0.0))
            })
            .unwrap();
        assert!(rows.is_empty());
        let z = LaguerreExpansion::new(0.0, vec![0.0; 4]).unwrap();
        assert_eq!(lp_norm(&z, &space, 1e-10).unwrap(), 0.0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn fit_recovers_power(e in -2.0f64..2.0, c in 0.1f64..10.0) {
            let pts: Vec<(usize, f64)> = [16usize, 32, 64, 128].iter().map(|&n| (n, c * (n as f64).powf(e))).collect();
            let f = fit_exponent(&pts).unwrap();
            prop_assert!((f.slope - e).abs() < 1e-9);
        }
    }
}
