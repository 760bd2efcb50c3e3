use approx::assert_relative_eq;
use lagmult_core::differences::{frac_diff, RealSequence};
use lagmult_core::harness::kernel_norm_sweep;
use lagmult_core::quadrature::gauss_laguerre;
use lagmult_core::special::log_gamma;
use lagmult_core::transform::{analyze, apply_multiplier, synthesize, LaguerreExpansion};
use lagmult_core::Exec;

#[test]
fn synthesize_then_analyze_recovers_coefficients() {
    for alpha in [-0.5, 0.0, 1.5] {
        let fhat: Vec<f64> = (0..20)
            .map(|k| (-1f64).powi(k) / (k as f64 + 1.0))
            .collect();
        let f = synthesize(&fhat, alpha).unwrap();
        let back = analyze(&f, alpha, 19).unwrap();
        for (a, b) in fhat.iter().zip(&back) {
            assert_relative_eq!(a, b, epsilon = 1e-12, max_relative = 1e-10);
        }
    }
}

#[test]
fn quadrature_sees_orthogonality() {
    let alpha = 0.7;
    let rule = gauss_laguerre(30, alpha).unwrap();
    for (m, n) in [(3, 3), (3, 5), (10, 10), (0, 12)] {
        let lm = LaguerreExpansion::single(alpha, m, 1.0).unwrap();
        let ln = LaguerreExpansion::single(alpha, n, 1.0).unwrap();
        let got = rule.integrate(|x| lm.eval(x) * ln.eval(x));
        let want = if m == n {
            (log_gamma(n as f64 + alpha + 1.0).unwrap() - log_gamma(n as f64 + 1.0).unwrap()).exp()
        } else {
            0.0
        };
        assert!(
            (got - want).abs() < 1e-10 * want.max(1.0),
            "{m} {n}: {got} vs {want}"
        );
    }
}

#[test]
fn integer_order_difference_is_forward_difference() {
    let m = RealSequence::finite((0..12).map(|k| (k as f64).sqrt()).collect());
    for k in 0..11 {
        let d = frac_diff(&m, 1.0, k, 1e-14).unwrap();
        assert_relative_eq!(d.value, m.value(k) - m.value(k + 1), epsilon = 1e-14);
    }
}

#[test]
fn unit_multiplier_leaves_expansion_alone() {
    let f = synthesize(&[1.0, -2.0, 0.5, 3.0], 0.0).unwrap();
    let ones = RealSequence::finite(vec![1.0; 4]);
    assert_eq!(apply_multiplier(&ones, &f).coeffs, f.coeffs);
}

#[test]
fn kernel_sweep_is_policy_independent() {
    let ns = [4, 9, 17];
    let seq = kernel_norm_sweep(0.75, 0.0, 0.0, &ns, 1e-9, Exec::Sequential).unwrap();
    let par = kernel_norm_sweep(0.75, 0.0, 0.0, &ns, 1e-9, Exec::Parallel).unwrap();
    assert_eq!(seq, par);
    assert!(seq.iter().all(|r| r.value >= 1.0 - 1e-9));
}
