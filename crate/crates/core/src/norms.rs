//! Weighted function and sequence norms.
//!
//! * `‖f‖_{p,γ} = (∫ |f(x) e^{-x/2}|^p x^γ dx)^{1/p}`
//! * the weighted `ℓ^q` sum of `Δ₂Δ^a f̂` controlled by `‖f‖_{p,γ}`
//! * dyadic block norms `(Σ_{k=n}^{2n} |(k+1)^w s_k|^q / (k+1))^{1/q}`
//! * weighted `ℓ¹` sums of fractional differences.

use serde::{Deserialize, Serialize};

use crate::differences::{delta2_frac_range, FracDiffPlan, RealSequence};
use crate::error::{param, Error, Result};
use crate::exec::Exec;
use crate::quadrature::{integrate_weighted_graded, integrate_weighted_with_breaks, Envelope};
use crate::transform::{DeclaredFn, LaguerreExpansion};

/// Exponent `p`, weight `x^γ` and expansion index `α` of `L^p_{w(γ)}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpaceSpec {
    pub p: f64,
    pub gamma: f64,
    pub alpha: f64,
}

impl SpaceSpec {
    /// A space in the multiplier range `1 <= p < 2`.
    pub fn new(p: f64, gamma: f64, alpha: f64) -> Result<Self> {
        if !(1.0..2.0).contains(&p) {
            return Err(param(format!("p must lie in [1, 2), got {p}")));
        }
        Self::any_p(p, gamma, alpha)
    }

    /// Any `p >= 1`; only for evaluating norms.
    pub fn any_p(p: f64, gamma: f64, alpha: f64) -> Result<Self> {
        if !(p >= 1.0) || !p.is_finite() {
            return Err(param(format!("p must be finite and >= 1, got {p}")));
        }
        if !(gamma > -1.0) {
            return Err(param(format!("gamma must exceed -1, got {gamma}")));
        }
        if !(alpha > -1.0) {
            return Err(param(format!("alpha must exceed -1, got {alpha}")));
        }
        Ok(SpaceSpec { p, gamma, alpha })
    }

    /// Conjugate exponent; `None` stands for `q = ∞` at `p = 1`.
    pub fn q(&self) -> Option<f64> {
        if self.p == 1.0 {
            None
        } else {
            Some(self.p / (self.p - 1.0))
        }
    }
}

/// Something with a computable weighted norm.
#[derive(Clone, Copy, Debug)]
pub enum Func<'a> {
    Expansion(&'a LaguerreExpansion),
    Declared(&'a DeclaredFn),
}

impl<'a> From<&'a LaguerreExpansion> for Func<'a> {
    fn from(f: &'a LaguerreExpansion) -> Self {
        Func::Expansion(f)
    }
}

impl<'a> From<&'a DeclaredFn> for Func<'a> {
    fn from(f: &'a DeclaredFn) -> Self {
        Func::Declared(f)
    }
}

/// `‖f‖_{L^p_{w(γ)}}`; `tol` bounds the absolute error of the inner integral.
pub fn lp_norm<'a>(f: impl Into<Func<'a>>, space: &SpaceSpec, tol: f64) -> Result<f64> {
    let p = space.p;
    let gamma = space.gamma;
    let value = match f.into() {
        Func::Expansion(e) => {
            if e.is_zero() {
                return Ok(0.0);
            }
            let deg = e.degree() as f64;
            let g = |x: f64| {
                if x == 0.0 && gamma != 0.0 {
                    return if gamma > 0.0 { 0.0 } else { f64::NAN };
                }
                e.eval_scaled(x, -0.5 * x).abs().powf(p) * x.powf(gamma)
            };
            let env = Envelope::new(0.5 * p)
                .with_power(p * deg + gamma)
                .with_lower_power(gamma);
            integrate_abs_power(g, &env, tol, &e.sign_changes(), p)?
        }
        Func::Declared(d) => {
            let g = |x: f64| {
                if x == 0.0 {
                    return 0.0;
                }
                (d.eval(x) * (-0.5 * x).exp()).abs().powf(p) * x.powf(gamma)
            };
            let env = Envelope::new(p * (d.rate + 0.5))
                .with_power(p * d.power + gamma)
                .with_lower_power(gamma + p * d.lower_power);
            integrate_abs_power(g, &env, tol, &d.breaks, p)?
        }
    };
    Ok(value.max(0.0).powf(1.0 / p))
}

/// `|·|^p` is smooth across a sign change only for even integer `p`.
fn integrate_abs_power(
    g: impl Fn(f64) -> f64,
    env: &Envelope,
    tol: f64,
    breaks: &[f64],
    p: f64,
) -> Result<f64> {
    let r = if p.fract() == 0.0 {
        integrate_weighted_with_breaks(g, env, tol, breaks)?
    } else {
        integrate_weighted_graded(g, env, tol, breaks)?
    };
    Ok(r.value)
}

/// `(Σ |x_k|^q)^{1/q}`, or the max for `q = ∞`.
fn lq(terms: impl Iterator<Item = f64>, q: Option<f64>) -> f64 {
    match q {
        None => terms.fold(0.0, |m, v| m.max(v.abs())),
        Some(q) => terms.map(|v| v.abs().powf(q)).sum::<f64>().powf(1.0 / q),
    }
}

/// `(k+1)^{(γ+1)/p - 1/2} Δ₂Δ^a f̂(k)` for every `k` where it can be nonzero.
pub fn thm11_terms(fhat: &[f64], space: &SpaceSpec, a: f64) -> Result<Vec<f64>> {
    let w = (space.gamma + 1.0) / space.p - 0.5;
    let seq = RealSequence::finite(fhat.to_vec());
    let d = delta2_frac_range(&seq, a, 0..fhat.len(), 0.0, Exec::Sequential)?;
    Ok(d.iter()
        .enumerate()
        .map(|(k, s)| ((k + 1) as f64).powf(w) * s.value)
        .collect())
}

/// `(Σ_k |(k+1)^{(γ+1)/p - 1/2} Δ₂Δ^a f̂(k)|^q)^{1/q}`.
///
/// Finite support makes the sum exact, so `tol` is unused beyond validation.
pub fn thm11_lhs(fhat: &[f64], space: &SpaceSpec, a: f64, tol: f64) -> Result<f64> {
    if !(tol >= 0.0) {
        return Err(param("tolerance must be >= 0"));
    }
    Ok(lq(thm11_terms(fhat, space, a)?.into_iter(), space.q()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockNormProfile {
    pub n_values: Vec<usize>,
    pub block_norms: Vec<f64>,
}

impl BlockNormProfile {
    /// `sup_n` over the computed blocks (0 when empty).
    pub fn sup(&self) -> f64 {
        self.block_norms.iter().copied().fold(0.0, f64::max)
    }

    /// Running sup after each block.
    pub fn running_sup(&self) -> Vec<f64> {
        let mut cur = 0.0f64;
        self.block_norms
            .iter()
            .map(|&v| {
                cur = cur.max(v);
                cur
            })
            .collect()
    }
}

/// Block starts `1, 2, 4, ..., <= n_max`.
pub fn dyadic_grid(n_max: usize) -> Vec<usize> {
    std::iter::successors(Some(1usize), |&n| n.checked_mul(2))
        .take_while(|&n| n <= n_max)
        .collect()
}

/// One block value `(Σ_{k=n}^{2n} |(k+1)^w s_k|^q / (k+1))^{1/q}`.
pub fn block_norm(s: &RealSequence, weight_exponent: f64, q: Option<f64>, n: usize) -> f64 {
    let terms = (n..=2 * n).map(|k| {
        let kp = (k + 1) as f64;
        (kp.powf(weight_exponent) * s.value(k)).abs() * q.map_or(1.0, |q| kp.powf(-1.0 / q))
    });
    lq(terms, q)
}

/// Dyadic block profile with the conjugate exponent taken from `space`.
pub fn block_sup_norm(
    s: &RealSequence,
    weight_exponent: f64,
    space: &SpaceSpec,
    n_max: usize,
) -> BlockNormProfile {
    block_profile(s, weight_exponent, space.q(), n_max, Exec::default())
}

/// Dyadic block profile for an explicit `q` (`None` for `q = ∞`).
pub fn block_profile(
    s: &RealSequence,
    weight_exponent: f64,
    q: Option<f64>,
    n_max: usize,
    exec: Exec,
) -> BlockNormProfile {
    let n_values = dyadic_grid(n_max);
    let block_norms = exec.map(&n_values, |&n| block_norm(s, weight_exponent, q, n));
    BlockNormProfile {
        n_values,
        block_norms,
    }
}

/// A nonnegative series value with its certificate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesValue {
    pub value: f64,
    /// Bound (or, for infinite sequences, doubling estimate) of what was dropped.
    pub tail: f64,
    /// When false, `value` is only the partial sum reached, a lower bound.
    pub certified: bool,
    /// The parameter condition of the inequality this sum belongs to.
    pub admissible: bool,
}

const FIRST_CUTOFF: usize = 256;
const LAST_CUTOFF: usize = 1 << 16;

/// Plan for the inner differences at tolerance `inner`, loosened when the
/// declared tail cannot reach it within the term budget.
fn inner_plan(f: &RealSequence, order: f64, mut inner: f64, ceiling: f64) -> Result<FracDiffPlan> {
    loop {
        match FracDiffPlan::new(f, order, inner) {
            Err(Error::NonConvergence(_)) if inner < ceiling => inner *= 100.0,
            other => return other,
        }
    }
}

/// Outcome of summing up to successive cutoffs with one inner plan.
struct Attempt {
    value: f64,
    outer: f64,
    inner_err: f64,
}

fn sum_with_plan(f: &RealSequence, plan: &FracDiffPlan, w: f64, tol: f64, exec: Exec) -> Attempt {
    let mut terms: Vec<f64> = Vec::new();
    let mut inner_err = 0.0;
    let mut cutoff = FIRST_CUTOFF;
    loop {
        let start = terms.len();
        for (i, e) in plan.eval_range(f, start..cutoff, exec).iter().enumerate() {
            let kp = (start + i + 1) as f64;
            terms.push(kp.powf(w) * e.value.abs());
            inner_err += kp.powf(w) * e.tail_bound;
        }
        let value: f64 = terms.iter().sum();
        // Decay exponent of the upper envelope over the last octave.
        let half = cutoff / 2;
        let top = terms[half..].iter().copied().fold(0.0, f64::max);
        let prev = terms[half / 2..half].iter().copied().fold(0.0, f64::max);
        let exponent = if top == 0.0 {
            f64::NEG_INFINITY
        } else if prev > 0.0 {
            (top / prev).ln() / 2f64.ln()
        } else {
            f64::INFINITY
        };
        let outer = if top == 0.0 {
            0.0
        } else if exponent < -1.05 {
            top * cutoff as f64 / (-exponent - 1.0)
        } else {
            f64::INFINITY
        };
        let settled = outer + inner_err < tol || inner_err >= tol;
        let growing = exponent >= -1.0 && cutoff >= 4 * FIRST_CUTOFF;
        if settled || growing || cutoff >= LAST_CUTOFF {
            return Attempt {
                value,
                outer,
                inner_err,
            };
        }
        cutoff *= 2;
    }
}

/// `Σ_k (k+1)^w |Δ^order f_k|`, returned as `(value, tail, certified)`.
///
/// For infinite sequences the outer sum is cut at `K = 256, 512, ...`; the
/// dropped part is estimated from the decay of the last octave of terms and
/// combined with the truncation bounds of the inner differences. The inner
/// tolerance starts at `tol` and is tightened while it is what blocks the
/// certificate.
pub fn weighted_diff_l1(
    f: &RealSequence,
    order: f64,
    w: f64,
    tol: f64,
    exec: Exec,
) -> Result<(f64, f64, bool)> {
    if f.support_len().is_some() {
        let plan = FracDiffPlan::new(f, order, tol)?;
        let len = f.support_len().unwrap_or(0);
        let terms: Vec<f64> = plan
            .eval_range(f, 0..len, exec)
            .iter()
            .enumerate()
            .map(|(k, e)| ((k + 1) as f64).powf(w) * e.value.abs())
            .collect();
        return Ok((terms.iter().sum(), 0.0, true));
    }
    let mut inner = tol;
    loop {
        let plan = inner_plan(f, order, inner, tol)?;
        let a = sum_with_plan(f, &plan, w, tol, exec);
        let tail = a.outer + a.inner_err;
        if tail < tol {
            return Ok((a.value, tail, true));
        }
        if a.outer.is_infinite() || a.inner_err < tol / 2.0 || inner <= MIN_INNER_TOL {
            return Ok((a.value, tail, false));
        }
        inner /= 100.0;
    }
}

const MIN_INNER_TOL: f64 = 1e-14;

/// `K = Σ_k (k+1)^{δ+α-γ} |Δ^{δ+1} f_k|`; admissible when `δ > 2γ-α+1/2 >= 0`.
pub fn thm31_k(
    fseq: &RealSequence,
    delta: f64,
    alpha: f64,
    gamma: f64,
    tol: f64,
) -> Result<SeriesValue> {
    let threshold = 2.0 * gamma - alpha + 0.5;
    let admissible = threshold >= 0.0 && delta > threshold;
    let (value, tail, certified) = weighted_diff_l1(
        fseq,
        delta + 1.0,
        delta + alpha - gamma,
        tol,
        Exec::default(),
    )?;
    Ok(SeriesValue {
        value,
        tail,
        certified,
        admissible,
    })
}

/// `Σ_k (k+1)^{γ-2/3} |Δ^{2γ-α+1/3} f̂(k)|`; admissible when
/// `γ > max(-1/3, α/2 - 1/6)`.
pub fn thm32_lhs(fhat: &RealSequence, alpha: f64, gamma: f64, tol: f64) -> Result<SeriesValue> {
    let admissible = gamma > (-1.0f64 / 3.0).max(alpha / 2.0 - 1.0 / 6.0);
    let order = 2.0 * gamma - alpha + 1.0 / 3.0;
    let (value, tail, certified) =
        weighted_diff_l1(fhat, order, gamma - 2.0 / 3.0, tol, Exec::default())?;
    Ok(SeriesValue {
        value,
        tail,
        certified,
        admissible,
    })
}
