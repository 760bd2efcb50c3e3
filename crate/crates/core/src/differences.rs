//! Fractional differences of real sequences.
//!
//! `Δ^δ m_k = Σ_{j≥0} A_j^{-δ-1} m_{k+j}`, `Δ₂ m_k = m_k - m_{k+2}` and the
//! combination `Δ₂Δ^δ m_k = Δ^{δ+1} m_k + Δ^{δ+1} m_{k+1}`.
//!
//! Finite sequences give exact finite sums. Infinite (parametric) sequences
//! carry a tail descriptor, and every truncated sum comes with a tail bound
//! derived from it; when the descriptor cannot certify convergence the
//! operators return [`Error::Undeclarable`] instead of guessing.
//!
//! Coefficient tails use `|A_j^b| <= C j^b` for `j >= J > -b`, with
//! `C = max(|A_J^b| J^{-b}, 1/|Γ(b+1)|)`: `|A_j^b| j^{-b}` is monotone in `j`
//! beyond `-b` and tends to `1/|Γ(b+1)|`.

use std::fmt;
use std::ops::Range;
use std::sync::Arc;

use crate::error::{param, Error, Result};
use crate::exec::Exec;
use crate::special::{binom_coeffs, recip_gamma};

/// Decay declared for an infinite sequence.
///
/// Non-alternating: `|m_k| <= bound (k+1)^{-decay}`.
/// Alternating: `m_k = (-1)^k g_k` with `|g_k| <= bound (k+1)^{-decay}` and
/// `|g_k - g_{k+1}| <= bound (k+1)^{-decay-1}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailDescriptor {
    pub bound: f64,
    pub decay: f64,
    pub alternating: bool,
}

type Rule = Arc<dyn Fn(usize) -> f64 + Send + Sync>;

#[derive(Clone)]
pub struct ParametricSequence {
    label: String,
    rule: Rule,
    tail: TailDescriptor,
}

impl fmt::Debug for ParametricSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ParametricSequence")
            .field("label", &self.label)
            .field("tail", &self.tail)
            .finish()
    }
}

/// Indices used to spot-check a tail descriptor.
fn spot_indices() -> impl Iterator<Item = usize> {
    (0..32).map(|i| {
        if i < 8 {
            i
        } else {
            (1.6f64.powi(i as i32 - 4)).round() as usize
        }
    })
}

impl ParametricSequence {
    /// Wraps `rule` after checking the declared tail on 32 sample indices.
    pub fn new(
        label: impl Into<String>,
        rule: impl Fn(usize) -> f64 + Send + Sync + 'static,
        tail: TailDescriptor,
    ) -> Result<Self> {
        let label = label.into();
        if !(tail.bound >= 0.0) || !tail.decay.is_finite() {
            return Err(param(format!(
                "{label}: tail bound must be >= 0 and decay finite"
            )));
        }
        let slack = 1.0 + 1e-12;
        for k in spot_indices() {
            let v = rule(k);
            let kp = (k + 1) as f64;
            let env = tail.bound * kp.powf(-tail.decay) * slack;
            if tail.alternating {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                let g = sign * v;
                let g_next = -sign * rule(k + 1);
                if g.abs() > env
                    || (g - g_next).abs() > tail.bound * kp.powf(-tail.decay - 1.0) * slack
                {
                    return Err(param(format!(
                        "{label}: alternating tail descriptor violated at k = {k}"
                    )));
                }
            } else if v.abs() > env {
                return Err(param(format!(
                    "{label}: tail descriptor violated at k = {k}"
                )));
            }
        }
        Ok(ParametricSequence {
            label,
            rule: Arc::new(rule),
            tail,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn tail(&self) -> TailDescriptor {
        self.tail
    }

    pub fn value(&self, k: usize) -> f64 {
        (self.rule)(k)
    }
}

/// A real sequence `{m_k}_{k≥0}`: finitely supported, or given by a rule
/// with a machine-checkable tail.
#[derive(Clone, Debug)]
pub enum RealSequence {
    /// `values[k]` for `k < len`, zero beyond.
    Finite(Vec<f64>),
    Parametric(ParametricSequence),
}

impl RealSequence {
    pub fn finite(values: Vec<f64>) -> Self {
        RealSequence::Finite(values)
    }

    pub fn from_fn(len: usize, f: impl Fn(usize) -> f64) -> Self {
        RealSequence::Finite((0..len).map(f).collect())
    }

    /// Unit vector `e_n`.
    pub fn unit(n: usize) -> Self {
        let mut v = vec![0.0; n + 1];
        v[n] = 1.0;
        RealSequence::Finite(v)
    }

    /// `m_k = (k+1)^{-eps}`.
    pub fn power_decay(eps: f64) -> Result<Self> {
        ParametricSequence::new(
            format!("(k+1)^-{eps}"),
            move |k| ((k + 1) as f64).powf(-eps),
            TailDescriptor {
                bound: 1.0,
                decay: eps,
                alternating: false,
            },
        )
        .map(RealSequence::Parametric)
    }

    /// `m_k = k^{-eps}`, with `m_0 = 1`.
    pub fn constant_sign_power(eps: f64) -> Result<Self> {
        ParametricSequence::new(
            format!("k^-{eps}"),
            move |k| (k.max(1) as f64).powf(-eps),
            TailDescriptor {
                bound: 2f64.powf(eps),
                decay: eps,
                alternating: false,
            },
        )
        .map(RealSequence::Parametric)
    }

    /// `m_k = (-1)^k k^{-eps}`, with `m_0 = 1`.
    pub fn alternating_power(eps: f64) -> Result<Self> {
        if !(eps > 0.0) {
            return Err(param(format!(
                "alternating power sequence needs eps > 0, got {eps}"
            )));
        }
        ParametricSequence::new(
            format!("(-1)^k k^-{eps}"),
            move |k| {
                let g = (k.max(1) as f64).powf(-eps);
                if k % 2 == 0 {
                    g
                } else {
                    -g
                }
            },
            TailDescriptor {
                bound: 2f64.powf(eps + 1.0) * eps.max(1.0),
                decay: eps,
                alternating: true,
            },
        )
        .map(RealSequence::Parametric)
    }

    pub fn value(&self, k: usize) -> f64 {
        match self {
            RealSequence::Finite(v) => v.get(k).copied().unwrap_or(0.0),
            RealSequence::Parametric(p) => p.value(k),
        }
    }

    /// Length of the support for finite sequences.
    pub fn support_len(&self) -> Option<usize> {
        match self {
            RealSequence::Finite(v) => Some(v.len()),
            RealSequence::Parametric(_) => None,
        }
    }

    pub fn materialize(&self, len: usize) -> Vec<f64> {
        (0..len).map(|k| self.value(k)).collect()
    }

    /// `c · m`.
    pub fn scaled(&self, c: f64) -> RealSequence {
        match self {
            RealSequence::Finite(v) => RealSequence::Finite(v.iter().map(|x| c * x).collect()),
            RealSequence::Parametric(p) => {
                let rule = p.rule.clone();
                RealSequence::Parametric(ParametricSequence {
                    label: format!("{} * {c}", p.label),
                    rule: Arc::new(move |k| c * rule(k)),
                    tail: TailDescriptor {
                        bound: p.tail.bound * c.abs(),
                        ..p.tail
                    },
                })
            }
        }
    }
}

/// A truncated series value with its certified tail bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SumEstimate {
    pub value: f64,
    pub tail_bound: f64,
    /// Number of terms summed.
    pub terms: usize,
}

/// `C` with `|A_j^b| <= C j^b` for all `j >= big_j`, `big_j > -b`.
fn coeff_tail_const(b: f64, big_j: usize, a_at_j: f64) -> f64 {
    let jf = big_j as f64;
    (a_at_j.abs() * jf.powf(-b)).max(recip_gamma(b + 1.0).abs())
}

/// Precomputed coefficients and truncation point for `Δ^δ` applied to one
/// sequence at many indices.
#[derive(Clone, Debug)]
pub struct FracDiffPlan {
    delta: f64,
    coeffs: Vec<f64>,
    /// Terms `j = 0..=last` are summed.
    last: usize,
    tail_bound: f64,
    tail: Option<TailModel>,
}

/// Ingredients of the index-dependent tail bound.
#[derive(Clone, Copy, Debug)]
struct TailModel {
    bound: f64,
    decay: f64,
    s: f64,
    c: f64,
    c_next: f64,
    alternating: bool,
}

impl TailModel {
    /// Bound on the dropped terms `j > J` at index `k`, using
    /// `(k+j+1)^{-ε} <= (k+J)^{-ε}`; only useful when `s > 1`.
    fn at(&self, k: usize, big_j: usize) -> f64 {
        if self.s <= 1.0 {
            return f64::INFINITY;
        }
        let jf = big_j as f64;
        let kj = (k + big_j) as f64;
        let base = self.bound * kj.powf(-self.decay);
        if self.alternating {
            base * (self.c * jf.powf(1.0 - self.s) / ((self.s - 1.0) * kj)
                + self.c_next * jf.powf(-self.s) / self.s)
        } else {
            base * self.c * jf.powf(1.0 - self.s) / (self.s - 1.0)
        }
    }
}

const MIN_TERMS: usize = 64;
const MAX_TERMS: usize = 1 << 24;

fn is_nonneg_integer(x: f64) -> bool {
    x >= 0.0 && x.fract() == 0.0
}

impl FracDiffPlan {
    /// Chooses the truncation so that the tail bound is below `tol` at every
    /// index; the bound reported by [`FracDiffPlan::eval`] may be smaller.
    pub fn new(m: &RealSequence, delta: f64, tol: f64) -> Result<Self> {
        if !delta.is_finite() {
            return Err(param("difference order must be finite"));
        }
        let b = -delta - 1.0;
        if let Some(len) = m.support_len() {
            let last = len.saturating_sub(1);
            return Ok(FracDiffPlan {
                delta,
                coeffs: binom_coeffs(b, last + 1),
                last,
                tail_bound: 0.0,
                tail: None,
            });
        }
        let RealSequence::Parametric(p) = m else {
            unreachable!()
        };
        if !(delta > -1.0) {
            return Err(Error::Undeclarable(format!(
                "order {delta} <= -1 on an infinite sequence"
            )));
        }
        if is_nonneg_integer(delta) {
            let last = delta as usize;
            return Ok(FracDiffPlan {
                delta,
                coeffs: binom_coeffs(b, last + 1),
                last,
                tail_bound: 0.0,
                tail: None,
            });
        }
        if !(tol > 0.0) {
            return Err(param(format!("tolerance must be positive, got {tol}")));
        }
        let tail = p.tail();
        let s = delta + 1.0;
        let eps = tail.decay;
        if !(eps > 0.0) {
            return Err(Error::Undeclarable(format!(
                "{}: declared decay {eps} does not certify convergence of Δ^{delta}",
                p.label()
            )));
        }
        let exponent = if tail.alternating {
            s + eps
        } else {
            s + eps - 1.0
        };
        if !(exponent > 0.0) {
            return Err(Error::Undeclarable(format!(
                "{}: |A_j| m_(k+j) ~ j^(-{}) is not summable for order {delta}",
                p.label(),
                s + eps
            )));
        }
        let mut big_j = MIN_TERMS.max(s.ceil() as usize + 3);
        loop {
            // Keep J odd in the alternating case so the remainder pairs up.
            if tail.alternating && big_j.is_multiple_of(2) {
                big_j += 1;
            }
            let coeffs = binom_coeffs(b, big_j + 2);
            let c = coeff_tail_const(b, big_j, coeffs[big_j]);
            let c_next = coeff_tail_const(b - 1.0, big_j, coeffs[big_j] - coeffs[big_j - 1]);
            let model = TailModel {
                bound: tail.bound,
                decay: eps,
                s,
                c,
                c_next,
                alternating: tail.alternating,
            };
            let jf = big_j as f64;
            let uniform = if tail.alternating {
                tail.bound * (c + c_next) * jf.powf(-exponent) / exponent
            } else {
                tail.bound * c * jf.powf(-exponent) / exponent
            };
            let bound = uniform.min(model.at(0, big_j));
            if bound < tol {
                return Ok(FracDiffPlan {
                    delta,
                    coeffs,
                    last: big_j,
                    tail_bound: bound,
                    tail: Some(model),
                });
            }
            if big_j >= MAX_TERMS {
                return Err(Error::NonConvergence(format!(
                    "Δ^{delta} of {}: tail bound {bound:.3e} still above {tol:.3e} after {big_j} terms",
                    p.label()
                )));
            }
            big_j *= 2;
        }
    }

    pub fn order(&self) -> f64 {
        self.delta
    }

    /// `Δ^δ m_k` for every `k` in `ks`, reading `m` once into a buffer.
    pub fn eval_range(&self, m: &RealSequence, ks: Range<usize>, exec: Exec) -> Vec<SumEstimate> {
        if ks.is_empty() {
            return Vec::new();
        }
        let len = match m.support_len() {
            Some(len) => len,
            None => ks.end + self.last,
        };
        let values = m.materialize(len);
        exec.map_range(ks, |k| {
            if k >= len {
                return SumEstimate {
                    value: 0.0,
                    tail_bound: 0.0,
                    terms: 0,
                };
            }
            let last = (len - 1 - k).min(self.last);
            let value = self.coeffs[..=last]
                .iter()
                .zip(&values[k..=k + last])
                .map(|(a, v)| a * v)
                .sum();
            SumEstimate {
                value,
                tail_bound: self.tail_at(k),
                terms: last + 1,
            }
        })
    }

    fn tail_at(&self, k: usize) -> f64 {
        match self.tail {
            Some(model) => self.tail_bound.min(model.at(k, self.last)),
            None => self.tail_bound,
        }
    }

    pub fn eval(&self, m: &RealSequence, k: usize) -> SumEstimate {
        let mut value = 0.0;
        let last = match m {
            RealSequence::Finite(v) => {
                if k >= v.len() {
                    return SumEstimate {
                        value: 0.0,
                        tail_bound: 0.0,
                        terms: 0,
                    };
                }
                (v.len() - 1 - k).min(self.last)
            }
            RealSequence::Parametric(_) => self.last,
        };
        for j in 0..=last {
            value += self.coeffs[j] * m.value(k + j);
        }
        SumEstimate {
            value,
            tail_bound: self.tail_at(k),
            terms: last + 1,
        }
    }
}

/// `Δ^δ m_k`.
pub fn frac_diff(m: &RealSequence, delta: f64, k: usize, tol: f64) -> Result<SumEstimate> {
    Ok(FracDiffPlan::new(m, delta, tol)?.eval(m, k))
}

/// `Δ^δ m_k` for every `k` in `ks`.
pub fn frac_diff_range(
    m: &RealSequence,
    delta: f64,
    ks: Range<usize>,
    tol: f64,
    exec: Exec,
) -> Result<Vec<SumEstimate>> {
    let plan = FracDiffPlan::new(m, delta, tol)?;
    Ok(plan.eval_range(m, ks, exec))
}

/// `Δ₂ m_k = m_k - m_{k+2}`.
pub fn delta2(m: &RealSequence, k: usize) -> f64 {
    m.value(k) - m.value(k + 2)
}

/// `Δ₂Δ^a m_k = Δ^{a+1} m_k + Δ^{a+1} m_{k+1}`.
pub fn delta2_frac(m: &RealSequence, a: f64, k: usize, tol: f64) -> Result<SumEstimate> {
    let plan = FracDiffPlan::new(m, a + 1.0, tol / 2.0)?;
    Ok(combine(plan.eval(m, k), plan.eval(m, k + 1)))
}

fn combine(x: SumEstimate, y: SumEstimate) -> SumEstimate {
    SumEstimate {
        value: x.value + y.value,
        tail_bound: x.tail_bound + y.tail_bound,
        terms: x.terms.max(y.terms),
    }
}

/// `Δ₂Δ^a m_k` for every `k` in `ks`.
pub fn delta2_frac_range(
    m: &RealSequence,
    a: f64,
    ks: Range<usize>,
    tol: f64,
    exec: Exec,
) -> Result<Vec<SumEstimate>> {
    let plan = FracDiffPlan::new(m, a + 1.0, tol / 2.0)?;
    let (start, end) = (ks.start, ks.end);
    if start >= end {
        return Ok(Vec::new());
    }
    let single = plan.eval_range(m, start..end + 1, exec);
    Ok(single.windows(2).map(|w| combine(w[0], w[1])).collect())
}

/// Window length used by [`compose_check`] beyond the support.
pub const COMPOSE_WINDOW_PAD: usize = 64;

/// `|Δ^a(Δ^b m)_k - Δ^{a+b} m_k|` for a finitely supported `m`.
pub fn compose_check(m: &RealSequence, a: f64, b: f64, k: usize) -> Result<f64> {
    let len = m
        .support_len()
        .ok_or_else(|| param("compose_check needs a finitely supported sequence"))?;
    let window = len + COMPOSE_WINDOW_PAD;
    let inner_plan = FracDiffPlan::new(m, b, 0.0)?;
    let inner = RealSequence::Finite((0..window).map(|i| inner_plan.eval(m, i).value).collect());
    let outer = frac_diff(&inner, a, k, 0.0)?.value;
    let direct = frac_diff(m, a + b, k, 0.0)?.value;
    Ok((outer - direct).abs())
}
