//! Cesàro means of Laguerre expansions.
//!
//! The mean of order `δ` and degree `n` has multipliers
//! `m_k = A_{n-k}^δ / A_n^δ`, and its kernel collapses to one polynomial of
//! raised index:
//!
//! ```text
//! χ_n(x) = (A_n^δ Γ(α+1))^{-1} Σ_{k≤n} A_{n-k}^δ L_k^α(x)
//!        = (A_n^δ Γ(α+1))^{-1} L_n^{α+δ+1}(x)
//! ```

use serde::{Deserialize, Serialize};

use crate::differences::RealSequence;
use crate::error::{param, Result};
use crate::quadrature::{integrate_weighted_with_breaks, laguerre_roots, Envelope};
use crate::special::{binom_coeffs, gamma, laguerre_scaled, log_gamma, MAX_SCALED_DEGREE};
use crate::transform::LaguerreExpansion;
use crate::twofold::Twofold;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CesaroSpec {
    pub n: usize,
    pub delta: f64,
    pub alpha: f64,
}

impl CesaroSpec {
    pub fn new(n: usize, delta: f64, alpha: f64) -> Result<Self> {
        if !(delta >= 0.0) || !delta.is_finite() {
            return Err(param(format!(
                "Cesaro order must be finite and >= 0, got {delta}"
            )));
        }
        if !(alpha > -1.0) {
            return Err(param(format!("alpha must exceed -1, got {alpha}")));
        }
        if n > MAX_SCALED_DEGREE {
            return Err(param(format!(
                "degree {n} above the supported {MAX_SCALED_DEGREE}"
            )));
        }
        Ok(CesaroSpec { n, delta, alpha })
    }

    /// `ln(A_n^δ Γ(α+1))`.
    fn log_norm(&self) -> f64 {
        let n = self.n as f64;
        libm::lgamma(n + self.delta + 1.0) - libm::lgamma(n + 1.0) - libm::lgamma(self.delta + 1.0)
            + libm::lgamma(self.alpha + 1.0)
    }
}

/// `{A_{n-k}^δ / A_n^δ}_{k=0..=n}`.
pub fn cesaro_multiplier(spec: &CesaroSpec) -> RealSequence {
    let a = binom_coeffs(spec.delta, spec.n + 1);
    let top = a[spec.n];
    RealSequence::finite((0..=spec.n).map(|k| a[spec.n - k] / top).collect())
}

/// `χ_n(x)` through the closed form.
pub fn cesaro_kernel(spec: &CesaroSpec, x: f64) -> Result<f64> {
    cesaro_kernel_scaled(spec, x, 0.0)
}

/// `exp(log_factor) χ_n(x)`.
pub fn cesaro_kernel_scaled(spec: &CesaroSpec, x: f64, log_factor: f64) -> Result<f64> {
    laguerre_scaled(
        spec.alpha + spec.delta + 1.0,
        spec.n,
        x,
        log_factor - spec.log_norm(),
    )
}

/// The kernel as an expansion at index `α`, i.e. the summed form.
pub fn cesaro_kernel_expansion(spec: &CesaroSpec) -> Result<LaguerreExpansion> {
    let m = cesaro_multiplier(spec);
    let g = gamma(spec.alpha + 1.0);
    LaguerreExpansion::new(
        spec.alpha,
        m.materialize(spec.n + 1).iter().map(|v| v / g).collect(),
    )
}

/// `χ_n(x)` by summing `A_{n-k}^δ L_k^α(x)`.
///
/// Weights, recurrence and sum run in twofold precision: the terms can
/// exceed the result by many orders of magnitude.
pub fn cesaro_kernel_summed(spec: &CesaroSpec, x: f64) -> Result<f64> {
    let n = spec.n;
    let (alpha, delta) = (spec.alpha, spec.delta);
    let mut weights = Vec::with_capacity(n + 1);
    let mut a = Twofold::ONE;
    weights.push(a);
    for j in 1..=n {
        a = a * Twofold::sum(j as f64, delta) / Twofold::from(j as f64);
        weights.push(a);
    }
    let mut prev = Twofold::ZERO;
    let mut cur = Twofold::ONE;
    let mut total = weights[n];
    for k in 0..n {
        let kf = k as f64;
        let next = (Twofold::sum(2.0 * kf + 1.0, alpha) - Twofold::from(x)) * cur
            - Twofold::sum(kf, alpha) * prev;
        prev = cur;
        cur = next / Twofold::from(kf + 1.0);
        total = total + weights[n - k - 1] * cur;
    }
    Ok((total / weights[n]).to_f64() / gamma(alpha + 1.0))
}

/// `‖χ_n‖_{L¹_{w(γ)}} = ∫ |χ_n(x)| e^{-x/2} x^γ dx`, with panels split at
/// the roots of `L_n^{α+δ+1}`.
pub fn kernel_l1_norm(spec: &CesaroSpec, gamma_w: f64, tol: f64) -> Result<f64> {
    if !(gamma_w > -1.0) {
        return Err(param(format!("gamma must exceed -1, got {gamma_w}")));
    }
    let index = spec.alpha + spec.delta + 1.0;
    let roots = if spec.n == 0 {
        Vec::new()
    } else {
        laguerre_roots(spec.n, index)?
    };
    let log_norm = spec.log_norm();
    let g = |x: f64| {
        if x == 0.0 {
            return if gamma_w == 0.0 {
                (-log_norm).exp() * crate::special::binom_a(spec.n, index)
            } else {
                0.0
            };
        }
        let lf = -0.5 * x + gamma_w * x.ln() - log_norm;
        laguerre_scaled(index, spec.n, x, lf).map_or(f64::NAN, f64::abs)
    };
    let env = Envelope::new(0.5)
        .with_power(spec.n as f64 + gamma_w)
        .with_lower_power(gamma_w);
    Ok(integrate_weighted_with_breaks(g, &env, tol, &roots)?.value)
}

/// `(k+1)^{α-γ}`, the growth allowed for the kernel norms.
pub fn kernel_norm_rate(n: usize, alpha: f64, gamma_w: f64) -> f64 {
    ((n + 1) as f64).powf(alpha - gamma_w)
}

/// `χ_n(0) = A_n^{α+δ+1} / (A_n^δ Γ(α+1))`, from log-gamma values.
pub fn kernel_at_origin(spec: &CesaroSpec) -> Result<f64> {
    let n = spec.n as f64;
    let raised = spec.alpha + spec.delta + 1.0;
    let log_a = log_gamma(n + raised + 1.0)? - log_gamma(n + 1.0)? - log_gamma(raised + 1.0)?;
    Ok((log_a - spec.log_norm()).exp())
}
