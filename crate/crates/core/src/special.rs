//! Gamma-function ratios, generalized binomial coefficients and Laguerre
//! polynomials.
//!
//! Laguerre values are produced by the forward three-term recurrence
//!
//! ```text
//! (n+1) L_{n+1}(x) = (2n+1+alpha-x) L_n(x) - (n+alpha) L_{n-1}(x)
//! ```
//!
//! Plain evaluation ([`laguerre_batch`]) is capped at [`MAX_PLAIN_DEGREE`].
//! The scaled variants carry a running logarithmic scale so that the huge
//! polynomial values far out on the half line can be combined with the tiny
//! exponential weights without overflow.

use crate::error::{param, Error, Result};

/// Largest degree accepted by [`laguerre_batch`] and [`laguerre_normalized`].
pub const MAX_PLAIN_DEGREE: usize = 512;
/// Largest degree accepted by the log-scaled evaluators.
pub const MAX_SCALED_DEGREE: usize = 16384;

const RESCALE_AT: f64 = 1e200;

/// `ln Γ(x)` for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("log_gamma requires x > 0, got {x}")));
    }
    Ok(libm::lgamma(x))
}

/// `Γ(x)`; thin wrapper used for the normalizing constants `Γ(α+1)`.
pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

/// `1/Γ(x)`, returning exactly zero at the poles `x = 0, -1, -2, ...`.
pub fn recip_gamma(x: f64) -> f64 {
    if x <= 0.0 && x.fract() == 0.0 {
        0.0
    } else {
        1.0 / libm::tgamma(x)
    }
}

/// Generalized binomial coefficient `A_n^a = Γ(n+a+1) / (Γ(n+1) Γ(a+1))`.
///
/// Evaluated through the product `Π_{j=1}^{n} (j+a)/j`, which is exact in
/// sign and vanishes identically past a negative-integer order.
pub fn binom_a(n: usize, a: f64) -> f64 {
    let mut v = 1.0;
    for j in 1..=n {
        let jf = j as f64;
        v *= (jf + a) / jf;
    }
    v
}

/// Lazily extended table of `A_j^a`, `j = 0, 1, 2, ...`.
#[derive(Clone, Debug)]
pub struct BinomCoeffStream {
    a: f64,
    values: Vec<f64>,
}

impl BinomCoeffStream {
    pub fn new(a: f64) -> Self {
        BinomCoeffStream {
            a,
            values: vec![1.0],
        }
    }

    pub fn order(&self) -> f64 {
        self.a
    }

    /// Makes sure at least `len` coefficients are stored.
    pub fn extend_to(&mut self, len: usize) {
        while self.values.len() < len {
            let j = self.values.len();
            let prev = self.values[j - 1];
            let jf = j as f64;
            self.values.push(prev * (jf + self.a) / jf);
        }
    }

    pub fn get(&mut self, j: usize) -> f64 {
        self.extend_to(j + 1);
        self.values[j]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }
}

/// The first `len` coefficients `A_0^a, ..., A_{len-1}^a`.
pub fn binom_coeffs(a: f64, len: usize) -> Vec<f64> {
    let mut s = BinomCoeffStream::new(a);
    s.extend_to(len);
    s.values.truncate(len);
    s.values
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > -1.0) || !alpha.is_finite() {
        return Err(param(format!(
            "Laguerre parameter must satisfy alpha > -1, got {alpha}"
        )));
    }
    Ok(())
}

fn check_x(x: f64) -> Result<()> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!(
            "Laguerre argument must be finite and >= 0, got {x}"
        )));
    }
    Ok(())
}

/// `L_0^α(x), ..., L_{n_max}^α(x)` at a single point.
#[derive(Clone, Debug, PartialEq)]
pub struct LaguerreEval {
    pub alpha: f64,
    pub x: f64,
    pub values: Vec<f64>,
}

impl LaguerreEval {
    pub fn n_max(&self) -> usize {
        self.values.len() - 1
    }

    /// Relative defect of the three-term recurrence at degree `n >= 2`
    /// when `L_n` is recomputed from its two stored predecessors.
    pub fn recurrence_defect(&self, n: usize) -> f64 {
        assert!(n >= 2 && n < self.values.len());
        let m = (n - 1) as f64;
        let v = &self.values;
        let recomputed = ((2.0 * m + 1.0 + self.alpha - self.x) * v[n - 1]
            - (m + self.alpha) * v[n - 2])
            / (m + 1.0);
        let scale = v[n]
            .abs()
            .max(v[n - 1].abs())
            .max(v[n - 2].abs())
            .max(f64::MIN_POSITIVE);
        (recomputed - v[n]).abs() / scale
    }
}

/// All Laguerre values up to `n_max` at `x` by forward recurrence.
pub fn laguerre_batch(alpha: f64, n_max: usize, x: f64) -> Result<LaguerreEval> {
    check_alpha(alpha)?;
    check_x(x)?;
    if n_max > MAX_PLAIN_DEGREE {
        return Err(param(format!(
            "plain Laguerre evaluation is capped at degree {MAX_PLAIN_DEGREE}, got {n_max}"
        )));
    }
    let mut values = Vec::with_capacity(n_max + 1);
    values.push(1.0);
    if n_max >= 1 {
        values.push(1.0 + alpha - x);
    }
    for n in 1..n_max {
        let nf = n as f64;
        let next =
            ((2.0 * nf + 1.0 + alpha - x) * values[n] - (nf + alpha) * values[n - 1]) / (nf + 1.0);
        values.push(next);
    }
    Ok(LaguerreEval { alpha, x, values })
}

/// `R_n^α(x) = L_n^α(x) / A_n^α` for `n = 0..=n_max`.
pub fn laguerre_normalized(alpha: f64, n_max: usize, x: f64) -> Result<Vec<f64>> {
    let eval = laguerre_batch(alpha, n_max, x)?;
    let mut a_n = 1.0;
    Ok(eval
        .values
        .iter()
        .enumerate()
        .map(|(n, &l)| {
            if n > 0 {
                let nf = n as f64;
                a_n *= (nf + alpha) / nf;
            }
            l / a_n
        })
        .collect())
}

/// Runs the recurrence with a shared logarithmic scale and calls
/// `sink(n, mantissa, log_scale)` for every degree; the true value is
/// `mantissa * exp(log_scale)`.
pub(crate) fn scaled_recurrence(
    alpha: f64,
    n_max: usize,
    x: f64,
    mut sink: impl FnMut(usize, f64, f64),
) {
    let mut log_scale = 0.0;
    let mut prev = 1.0;
    sink(0, prev, log_scale);
    if n_max == 0 {
        return;
    }
    let mut cur = 1.0 + alpha - x;
    sink(1, cur, log_scale);
    for n in 1..n_max {
        let nf = n as f64;
        let next = ((2.0 * nf + 1.0 + alpha - x) * cur - (nf + alpha) * prev) / (nf + 1.0);
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE_AT {
            prev /= RESCALE_AT;
            cur /= RESCALE_AT;
            log_scale += RESCALE_AT.ln();
        }
        sink(n + 1, cur, log_scale);
    }
}

/// `exp(log_factor) * L_n^α(x)` for `n = 0..=n_max`, safe against
/// intermediate overflow. Entries whose magnitude falls below the smallest
/// double come out as zero.
pub fn laguerre_weighted(alpha: f64, n_max: usize, x: f64, log_factor: f64) -> Result<Vec<f64>> {
    check_alpha(alpha)?;
    check_x(x)?;
    if n_max > MAX_SCALED_DEGREE {
        return Err(param(format!(
            "scaled Laguerre evaluation is capped at degree {MAX_SCALED_DEGREE}"
        )));
    }
    let mut out = vec![0.0; n_max + 1];
    scaled_recurrence(alpha, n_max, x, |n, m, s| {
        out[n] = scaled_value(m, s + log_factor)
    });
    Ok(out)
}

/// Sign and `ln |L_n^α(x)|`; the logarithm is `-inf` at a root.
pub fn laguerre_log_abs(alpha: f64, n: usize, x: f64) -> Result<(f64, f64)> {
    check_alpha(alpha)?;
    check_x(x)?;
    if n > MAX_SCALED_DEGREE {
        return Err(param(format!(
            "scaled Laguerre evaluation is capped at degree {MAX_SCALED_DEGREE}"
        )));
    }
    let mut res = (1.0, 0.0);
    scaled_recurrence(alpha, n, x, |k, m, s| {
        if k == n {
            res = (m.signum(), m.abs().ln() + s);
        }
    });
    Ok(res)
}

/// `exp(log_factor) * L_n^α(x)` for a single degree, without allocating.
pub fn laguerre_scaled(alpha: f64, n: usize, x: f64, log_factor: f64) -> Result<f64> {
    let (sign, log_abs) = laguerre_log_abs(alpha, n, x)?;
    if log_abs == f64::NEG_INFINITY {
        return Ok(0.0);
    }
    Ok(sign * (log_abs + log_factor).exp())
}

/// `mantissa * exp(log_scale)` without forming `exp(log_scale)` on its own.
#[inline]
pub(crate) fn scaled_value(mantissa: f64, log_scale: f64) -> f64 {
    if mantissa == 0.0 {
        return 0.0;
    }
    mantissa.signum() * (mantissa.abs().ln() + log_scale).exp()
}

/// Log of the ℒ-normalization `sqrt(k! / Γ(k+α+1))`.
fn log_orthonormal_factor(k: usize, alpha: f64) -> f64 {
    -0.5 * (libm::lgamma(k as f64 + alpha + 1.0) - libm::lgamma(k as f64 + 1.0))
}

/// The orthonormal Laguerre function
/// `ℒ_k^α(t) = (A_k^α / Γ(α+1))^{1/2} R_k^α(t) e^{-t/2} t^{α/2}`.
///
/// The magnitude is assembled in log space and the sign of the polynomial
/// part is carried separately, so the result stays finite where `A_k^α`,
/// `L_k^α(t)` or `e^{-t/2}` alone would overflow or underflow.
pub fn script_l(k: usize, alpha: f64, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("script_l requires t > 0, got {t}")));
    }
    let (sign, log_abs) = laguerre_log_abs(alpha, k, t)?;
    if sign == 0.0 || log_abs == f64::NEG_INFINITY {
        return Ok(0.0);
    }
    let log_mag = log_abs + log_orthonormal_factor(k, alpha) - 0.5 * t + 0.5 * alpha * t.ln();
    Ok(sign * log_mag.exp())
}

/// `ℒ_0^α(t), ..., ℒ_{n_max}^α(t)` in one recurrence pass.
pub fn script_l_batch(alpha: f64, n_max: usize, t: f64) -> Result<Vec<f64>> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("script_l requires t > 0, got {t}")));
    }
    check_alpha(alpha)?;
    let base = -0.5 * t + 0.5 * alpha * t.ln();
    let mut out = vec![0.0; n_max + 1];
    scaled_recurrence(alpha, n_max, t, |k, m, s| {
        out[k] = scaled_value(m, s + base + log_orthonormal_factor(k, alpha));
    });
    Ok(out)
}
