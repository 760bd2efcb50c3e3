//! Fourier–Laguerre analysis and synthesis.
//!
//! Expansions are stored in the raw basis, `f = Σ c_k L_k^α`. The analysis
//! coefficients are `f̂_α(k) = ∫ f R_k^α x^α e^{-x} dx`, so for an expansion
//! at the same index `f̂_α(k) = Γ(α+1) c_k`. The `Γ(α+1)` factor only enters
//! at [`synthesize`].

use std::fmt;
use std::sync::Arc;

use crate::differences::RealSequence;
use crate::error::{param, Error, Result};
use crate::exec::Exec;
use crate::quadrature::{gauss_laguerre, integrate_weighted, Envelope, MAX_RULE_ORDER};
use crate::special::{
    binom_a, binom_coeffs, gamma, laguerre_weighted, log_gamma, scaled_recurrence, scaled_value,
};

#[derive(Clone, Debug, PartialEq)]
pub struct LaguerreExpansion {
    pub alpha: f64,
    pub coeffs: Vec<f64>,
}

impl LaguerreExpansion {
    pub fn new(alpha: f64, coeffs: Vec<f64>) -> Result<Self> {
        if !(alpha > -1.0) || !alpha.is_finite() {
            return Err(param(format!(
                "expansion index must satisfy alpha > -1, got {alpha}"
            )));
        }
        Ok(LaguerreExpansion { alpha, coeffs })
    }

    /// `c L_n^α`.
    pub fn single(alpha: f64, n: usize, c: f64) -> Result<Self> {
        let mut coeffs = vec![0.0; n + 1];
        coeffs[n] = c;
        Self::new(alpha, coeffs)
    }

    /// Largest `k` with `c_k != 0` (0 for the zero expansion).
    pub fn degree(&self) -> usize {
        self.coeffs.iter().rposition(|&c| c != 0.0).unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    /// `f(x)`.
    pub fn eval(&self, x: f64) -> f64 {
        self.eval_scaled(x, 0.0)
    }

    /// `exp(log_factor) f(x)`, free of intermediate overflow.
    pub fn eval_scaled(&self, x: f64, log_factor: f64) -> f64 {
        let n = self.degree();
        let mut total = 0.0;
        let mut segment = 0.0;
        let mut segment_scale = 0.0;
        scaled_recurrence(self.alpha, n, x, |k, m, s| {
            if s != segment_scale {
                total += scaled_value(segment, segment_scale + log_factor);
                segment = 0.0;
                segment_scale = s;
            }
            segment += self.coeffs[k] * m;
        });
        total + scaled_value(segment, segment_scale + log_factor)
    }

    /// Sign changes of `f` on `(0, ∞)`, bracketed on a square-root spaced
    /// grid of `32 (deg+1)` points up to the zero range of `L_n^α`, then on a
    /// geometric grid out to 8 times that, and refined by bisection. A final
    /// comparison with the sign at infinity catches a last zero further out.
    pub fn sign_changes(&self) -> Vec<f64> {
        let n = self.degree();
        if n == 0 {
            return Vec::new();
        }
        let hi = 4.0 * n as f64 + 2.0 * self.alpha.max(0.0) + 12.0;
        let pts = 32 * (n + 1);
        // e^{-x/2} keeps the recurrence in range below `hi`; further out the
        // polynomial is divided by x^n instead, which keeps its sign.
        let g = |x: f64| {
            if x <= hi {
                self.eval_scaled(x, -0.5 * x)
            } else {
                self.eval_scaled(x, -(n as f64) * x.ln())
            }
        };
        let mut xs: Vec<f64> = (0..=pts)
            .map(|i| hi * (i as f64 / pts as f64).powi(2))
            .collect();
        let ratio = 1.0 + 1.0 / (16.0 * ((n + 1) as f64).sqrt());
        let mut x = hi * ratio;
        while x < 8.0 * hi {
            xs.push(x);
            x *= ratio;
        }
        let mut roots = Vec::new();
        let mut g_prev = g(0.0);
        for w in xs.windows(2) {
            let gx = g(w[1]);
            if gx == 0.0 {
                roots.push(w[1]);
            } else if g_prev != 0.0 && gx.signum() != g_prev.signum() {
                roots.push(bisect(&g, w[0], w[1], g_prev));
            }
            g_prev = gx;
        }
        // L_n^α has leading coefficient (-1)^n / n!.
        let lead = self.coeffs[n];
        let at_infinity = if n.is_multiple_of(2) {
            lead.signum()
        } else {
            -lead.signum()
        };
        let mut lo = *xs.last().unwrap_or(&hi);
        if g_prev != 0.0 && lead != 0.0 && g_prev.signum() != at_infinity {
            let mut up = 2.0 * lo;
            while g(up).signum() == g_prev.signum() && up.is_finite() {
                lo = up;
                up *= 2.0;
            }
            if up.is_finite() {
                roots.push(bisect(&g, lo, up, g_prev));
            }
        }
        roots
    }
}

/// Zero of `g` in `[lo, up]` where `g(lo)` has the sign of `g_lo` and
/// `g(up)` the opposite one.
fn bisect(g: &impl Fn(f64) -> f64, mut lo: f64, mut up: f64, mut g_lo: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + up);
        if mid <= lo || mid >= up {
            break;
        }
        let gm = g(mid);
        if gm == 0.0 {
            return mid;
        }
        if gm.signum() == g_lo.signum() {
            lo = mid;
            g_lo = gm;
        } else {
            up = mid;
        }
    }
    0.5 * (lo + up)
}

/// A black-box function with declared bounds
/// `|f(x)| <= bound x^power e^{-rate x}` and `|f(x)| <= bound x^lower_power`
/// near 0.
#[derive(Clone)]
pub struct DeclaredFn {
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    pub bound: f64,
    pub power: f64,
    pub rate: f64,
    pub lower_power: f64,
    /// Known sign changes or kinks.
    pub breaks: Vec<f64>,
}

impl fmt::Debug for DeclaredFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DeclaredFn")
            .field("bound", &self.bound)
            .field("power", &self.power)
            .field("rate", &self.rate)
            .field("lower_power", &self.lower_power)
            .field("breaks", &self.breaks)
            .finish()
    }
}

impl DeclaredFn {
    /// The rate must exceed `-1/2` so that `f e^{-x/2}` decays; the bound is
    /// spot-checked on 32 points in `[1/2, 256]`.
    pub fn new(
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        bound: f64,
        power: f64,
        rate: f64,
        lower_power: f64,
    ) -> Result<Self> {
        if !(rate > -0.5) {
            return Err(Error::Undeclarable(format!(
                "declared rate {rate} does not place f e^(-x/2) in any weighted space"
            )));
        }
        for i in 0..32 {
            let x = 0.5 * 512f64.powf(i as f64 / 31.0);
            let env = bound * x.powf(power) * (-rate * x).exp();
            if f(x).abs() > env * (1.0 + 1e-9) {
                return Err(param(format!("declared bound violated at x = {x}")));
            }
        }
        Ok(DeclaredFn {
            f: Arc::new(f),
            bound,
            power,
            rate,
            lower_power,
            breaks: Vec::new(),
        })
    }

    pub fn with_breaks(mut self, breaks: Vec<f64>) -> Self {
        self.breaks = breaks;
        self
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.f)(x)
    }
}

/// Gauss–Laguerre order making every `f · R_n`, `n <= n_max`, exact.
fn exact_order(deg: usize, n_max: usize) -> usize {
    (deg + n_max).div_ceil(2) + 8
}

/// `f̂_α(0..=n_max)` for an expansion, by exact Gauss–Laguerre quadrature.
pub fn analyze(f: &LaguerreExpansion, alpha: f64, n_max: usize) -> Result<Vec<f64>> {
    analyze_with(f, alpha, n_max, Exec::default())
}

pub fn analyze_with(
    f: &LaguerreExpansion,
    alpha: f64,
    n_max: usize,
    exec: Exec,
) -> Result<Vec<f64>> {
    let order = exact_order(f.degree(), n_max);
    if order > MAX_RULE_ORDER {
        return Err(param(format!(
            "analysis needs a rule of order {order}, above the supported {MAX_RULE_ORDER}"
        )));
    }
    let rule = gauss_laguerre(order, alpha)?;
    // Fold sqrt(w_i) into both factors so neither overflows far out.
    let rows = exec.try_map_range(0..order, |i| -> Result<Vec<f64>> {
        let x = rule.nodes[i];
        let half_lw = 0.5 * rule.log_weights[i];
        let fv = f.eval_scaled(x, half_lw);
        let mut row = laguerre_weighted(alpha, n_max, x, half_lw)?;
        for v in row.iter_mut() {
            *v *= fv;
        }
        Ok(row)
    })?;
    let mut out = vec![0.0; n_max + 1];
    for row in rows {
        for (o, v) in out.iter_mut().zip(row) {
            *o += v;
        }
    }
    let mut a_n = 1.0;
    for (n, o) in out.iter_mut().enumerate() {
        if n > 0 {
            a_n *= (n as f64 + alpha) / n as f64;
        }
        *o /= a_n;
    }
    Ok(out)
}

/// `f̂_α(0..=n_max)` for a declared-decay function, one adaptive integral per
/// coefficient.
pub fn analyze_declared(f: &DeclaredFn, alpha: f64, n_max: usize, tol: f64) -> Result<Vec<f64>> {
    if !(alpha > -1.0) {
        return Err(param(format!("alpha must exceed -1, got {alpha}")));
    }
    (0..=n_max)
        .map(|n| {
            let log_a_n = log_gamma(n as f64 + alpha + 1.0)?
                - log_gamma(n as f64 + 1.0)?
                - log_gamma(alpha + 1.0)?;
            let g = |x: f64| {
                if x == 0.0 {
                    return 0.0;
                }
                let lf = -x + alpha * x.ln() - log_a_n;
                match laguerre_weighted(alpha, n, x, lf) {
                    Ok(v) => f.eval(x) * v[n],
                    Err(_) => f64::NAN,
                }
            };
            let env = Envelope::new(1.0 + f.rate)
                .with_power(f.power + n as f64 + alpha.max(0.0))
                .with_lower_power(f.lower_power + alpha);
            Ok(integrate_weighted(g, &env, tol)?.value)
        })
        .collect()
}

/// `g = Γ(α+1)^{-1} Σ m_k L_k^α`.
pub fn synthesize(m: &[f64], alpha: f64) -> Result<LaguerreExpansion> {
    let g = gamma(alpha + 1.0);
    LaguerreExpansion::new(alpha, m.iter().map(|v| v / g).collect())
}

/// `Σ m_k f̂_α(k) L_k^α` with the shared `Γ(α+1)^{-1}`: coefficientwise in
/// the raw basis.
pub fn apply_multiplier(m: &RealSequence, f: &LaguerreExpansion) -> LaguerreExpansion {
    LaguerreExpansion {
        alpha: f.alpha,
        coeffs: f
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c * m.value(k))
            .collect(),
    }
}

/// Both sides of `Δ^a f̂_α(k) = Γ(α+1)/Γ(α+a+1) f̂_{α+a}(k)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransferCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
    /// Size of the terms beyond `j_max` dropped from the left side.
    pub tail: f64,
    /// `a > -(2α+1)/4`, where the series converges absolutely for general `f`.
    pub in_region: bool,
}

/// Transfer identity at index `k`, truncating the difference at `j_max`.
pub fn transfer_identity_check(
    f: &LaguerreExpansion,
    alpha: f64,
    a: f64,
    k: usize,
    j_max: usize,
) -> Result<TransferCheck> {
    if !(alpha > -1.0 && a > -1.0 && alpha + a > -1.0) {
        return Err(param(format!(
            "transfer needs alpha, a, alpha + a > -1 (alpha = {alpha}, a = {a})"
        )));
    }
    let deg = f.degree();
    let here = analyze(f, alpha, deg)?;
    let raised = analyze(f, alpha + a, deg)?;
    let coeffs = binom_coeffs(-a - 1.0, deg + 1);
    let mut lhs = 0.0;
    let mut tail = 0.0;
    for j in 0..=deg.saturating_sub(k) {
        let term = coeffs[j] * here.get(k + j).copied().unwrap_or(0.0);
        if j <= j_max {
            lhs += term;
        } else {
            tail += term.abs();
        }
    }
    let rhs = (log_gamma(alpha + 1.0)? - log_gamma(alpha + a + 1.0)?).exp()
        * raised.get(k).copied().unwrap_or(0.0);
    Ok(TransferCheck {
        lhs,
        rhs,
        gap: (lhs - rhs).abs(),
        tail,
        in_region: a > -(2.0 * alpha + 1.0) / 4.0,
    })
}

/// `∫ f² x^α e^{-x}` from coefficients: `Σ_k c_k² Γ(k+α+1)/k!`.
pub fn parseval_mass(f: &LaguerreExpansion) -> f64 {
    let g = gamma(f.alpha + 1.0);
    f.coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| c * c * binom_a(k, f.alpha) * g)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::laguerre_batch;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_expansion(alpha: f64, len: usize, seed: u64) -> LaguerreExpansion {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        LaguerreExpansion::new(
            alpha,
            (0..len).map(|_| rng.random_range(-1.0..1.0)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn analyze_examples() {
        let l1 = LaguerreExpansion::single(0.0, 1, 1.0).unwrap();
        let c = analyze(&l1, 0.0, 4).unwrap();
        for (k, v) in c.iter().enumerate() {
            assert!(
                (v - if k == 1 { 1.0 } else { 0.0 }).abs() < 1e-13,
                "{k}: {v}"
            );
        }
        for &alpha in &[-0.5, 0.0, 1.3] {
            let one = LaguerreExpansion::new(alpha, vec![1.0]).unwrap();
            let c = analyze(&one, alpha, 3).unwrap();
            assert_relative_eq!(c[0], gamma(alpha + 1.0), max_relative = 1e-13);
            assert!(c[1..].iter().all(|v| v.abs() < 1e-13));
        }
        let l2 = LaguerreExpansion::single(0.5, 2, 1.0).unwrap();
        let c = analyze(&l2, 0.5, 5).unwrap();
        assert_relative_eq!(c[2], 0.886_226_925_452_758, max_relative = 1e-12);
        assert!(c.iter().enumerate().all(|(k, v)| k == 2 || v.abs() < 1e-13));
    }

    #[test]
    fn synthesize_examples_and_round_trip() {
        let f = synthesize(&[gamma(2.5)], 1.5).unwrap();
        assert_relative_eq!(f.eval(3.7), 1.0, max_relative = 1e-14);
        let l1 = synthesize(&[0.0, 1.0], 0.0).unwrap();
        assert_eq!(l1.eval(2.0), -1.0);
        for (seed, &alpha) in [-0.5, 0.0, 1.0, 2.5].iter().enumerate() {
            let mut rng = ChaCha8Rng::seed_from_u64(seed as u64);
            let m: Vec<f64> = (0..32).map(|_| rng.random_range(-1.0..1.0)).collect();
            let back = analyze(&synthesize(&m, alpha).unwrap(), alpha, 40).unwrap();
            for k in 0..32 {
                assert!(
                    (back[k] - m[k]).abs() <= 1e-9 * m[k].abs().max(1.0),
                    "alpha {alpha} k {k}"
                );
            }
            assert!(back[32..].iter().all(|v| v.abs() < 1e-9));
        }
    }

    #[test]
    fn parseval_against_composite_integration() {
        for (seed, &alpha) in [-0.5, 0.0, 1.0, 2.5].iter().enumerate() {
            let f = random_expansion(alpha, 20, 100 + seed as u64);
            let fhat = analyze(&f, alpha, 20).unwrap();
            let g = gamma(alpha + 1.0);
            let lhs: f64 = fhat
                .iter()
                .enumerate()
                .map(|(k, v)| binom_a(k, alpha) / g * v * v)
                .sum();
            let direct = integrate_weighted(
                |x| {
                    let v = f.eval_scaled(x, -0.5 * x);
                    v * v * x.powf(alpha)
                },
                &Envelope::new(1.0)
                    .with_power(40.0 + alpha)
                    .with_lower_power(alpha),
                1e-12,
            )
            .unwrap()
            .value;
            assert_relative_eq!(lhs, direct, max_relative = 1e-9);
            assert_relative_eq!(lhs, parseval_mass(&f), max_relative = 1e-10);
        }
    }

    #[test]
    fn eval_matches_plain_recurrence() {
        let f = random_expansion(0.7, 30, 3);
        for &x in &[0.0, 0.4, 5.0, 60.0] {
            let plain = laguerre_batch(0.7, 29, x).unwrap();
            let want: f64 = plain.values.iter().zip(&f.coeffs).map(|(l, c)| l * c).sum();
            assert!((f.eval(x) - want).abs() <= 1e-12 * want.abs().max(1.0));
        }
    }

    #[test]
    fn sign_changes_far_beyond_the_mode_range() {
        // 299 + (1 - x) vanishes only at 300
        let f = LaguerreExpansion::new(0.0, vec![299.0, 1.0]).unwrap();
        let r = f.sign_changes();
        assert_eq!(r.len(), 1);
        assert!((r[0] - 300.0).abs() < 1e-9, "{r:?}");
        // (x - 40)(x - 300)/2: one zero on the geometric grid, one past it
        let g = LaguerreExpansion::new(0.0, vec![5831.0, 168.0, 1.0]).unwrap();
        let r = g.sign_changes();
        assert_eq!(r.len(), 2, "{r:?}");
        assert!(
            (r[0] - 40.0).abs() < 1e-9 && (r[1] - 300.0).abs() < 1e-8,
            "{r:?}"
        );
    }

    #[test]
    fn sign_changes_of_single_mode_are_roots() {
        let f = LaguerreExpansion::single(0.0, 6, 1.0).unwrap();
        let roots = f.sign_changes();
        let want = crate::quadrature::laguerre_roots(6, 0.0).unwrap();
        assert_eq!(roots.len(), 6);
        for (r, w) in roots.iter().zip(&want) {
            assert!((r - w).abs() < 1e-9 * w.max(1.0));
        }
    }

    #[test]
    fn multiplier_examples() {
        let f = random_expansion(0.0, 12, 5);
        let ones = RealSequence::from_fn(12, |_| 1.0);
        assert_eq!(apply_multiplier(&ones, &f), f);
        let spike = RealSequence::unit(7);
        let fhat = analyze(&f, 0.0, 12).unwrap();
        let proj = apply_multiplier(&spike, &f);
        let want = synthesize(
            &RealSequence::unit(7)
                .materialize(8)
                .iter()
                .map(|v| v * fhat[7])
                .collect::<Vec<_>>(),
            0.0,
        )
        .unwrap();
        for x in [0.3, 2.0, 9.0] {
            assert!((proj.eval(x) - want.eval(x)).abs() < 1e-10);
        }
        let m1 = RealSequence::from_fn(12, |k| 1.0 / (k as f64 + 1.0));
        let m2 = RealSequence::from_fn(12, |k| (k as f64).cos());
        let m12 = RealSequence::from_fn(12, |k| m1.value(k) * m2.value(k));
        let lhs = apply_multiplier(&m1, &apply_multiplier(&m2, &f));
        let rhs = apply_multiplier(&m12, &f);
        for (a, b) in lhs.coeffs.iter().zip(&rhs.coeffs) {
            assert!((a - b).abs() <= 1e-15);
        }
    }

    #[test]
    fn analyze_is_linear() {
        let f = random_expansion(1.0, 10, 8);
        let g = random_expansion(1.0, 10, 9);
        let h = LaguerreExpansion::new(
            1.0,
            f.coeffs
                .iter()
                .zip(&g.coeffs)
                .map(|(a, b)| 2.0 * a - b)
                .collect(),
        )
        .unwrap();
        let (af, ag, ah) = (
            analyze(&f, 1.0, 12).unwrap(),
            analyze(&g, 1.0, 12).unwrap(),
            analyze(&h, 1.0, 12).unwrap(),
        );
        for k in 0..=12 {
            assert!((ah[k] - (2.0 * af[k] - ag[k])).abs() < 1e-12);
        }
    }

    #[test]
    fn transfer_examples() {
        let f = random_expansion(0.0, 9, 11);
        for k in 0..9 {
            let t0 = transfer_identity_check(&f, 0.0, 0.0, k, 10_000).unwrap();
            assert!(t0.gap < 1e-13);
            let t1 = transfer_identity_check(&f, 0.0, 1.0, k, 10_000).unwrap();
            let fhat = analyze(&f, 0.0, 9).unwrap();
            assert!((t1.lhs - (fhat[k] - fhat[k + 1])).abs() < 1e-13);
            assert!(t1.gap < 1e-8);
        }
        let l3 = LaguerreExpansion::single(0.0, 3, 1.0).unwrap();
        for k in 0..=3 {
            let t = transfer_identity_check(&l3, 0.0, 0.5, k, 10_000).unwrap();
            assert!(t.gap < 1e-6 && t.in_region);
        }
    }

    #[test]
    fn transfer_holds_pointwise_through_raised_index() {
        // Oracle: L_n^α = Σ_{j≤n} A_{n-j}^{-a-1} L_j^{α+a}, compared pointwise.
        let (alpha, a, n) = (0.0, 0.5, 5usize);
        let coeffs = binom_coeffs(-a - 1.0, n + 1);
        let raised =
            LaguerreExpansion::new(alpha + a, (0..=n).map(|j| coeffs[n - j]).collect()).unwrap();
        for x in [0.1, 1.0, 4.0, 11.0] {
            let direct = laguerre_batch(alpha, n, x).unwrap().values[n];
            assert!((raised.eval(x) - direct).abs() < 1e-12 * direct.abs().max(1.0));
        }
    }

    #[test]
    fn declared_exponential_has_geometric_coefficients() {
        // e^{-s x} = Σ (1-t)^{α+1} t^k L_k^α(x), t = s / (1 + s).
        let (s, alpha) = (0.5, 0.5);
        let t = s / (1.0 + s);
        let f = DeclaredFn::new(move |x| (-s * x).exp(), 1.0, 0.0, s, 0.0).unwrap();
        let c = analyze_declared(&f, alpha, 6, 1e-13).unwrap();
        for (k, v) in c.iter().enumerate() {
            let want = gamma(alpha + 1.0) * (1.0 - t).powf(alpha + 1.0) * t.powi(k as i32);
            assert!((v - want).abs() < 1e-11, "{k}: {v} vs {want}");
        }
        assert!(DeclaredFn::new(|x| x.exp(), 1.0, 0.0, -1.0, 0.0).is_err());
        assert!(DeclaredFn::new(|x| (-0.1 * x).exp(), 1.0, 0.0, 0.5, 0.0).is_err());
    }
}
