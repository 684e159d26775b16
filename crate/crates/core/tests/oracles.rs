//! Kernel, special-function and threshold values against frozen
//! high-precision references and against statrs as an independent
//! implementation of the incomplete gamma function.

// References are kept with every digit the generator printed.
#![allow(clippy::excessive_precision)]

use fracmax_core::kernels::{
    lambda_fn, lambda_fn_quadrature, lambda_infty, lambda_infty_quadrature, lambda_tilde, mu_threshold,
    mu_threshold_multiterm, mu_threshold_varorder, omega,
};
use fracmax_core::special::{gamma, upper_incomplete_gamma};
use fracmax_core::FractionalOrder;

fn order(a: f64) -> FractionalOrder {
    FractionalOrder::new(a).unwrap()
}

fn close(got: f64, want: f64, rel: f64) -> bool {
    (got - want).abs() <= rel * want.abs().max(1e-300)
}

#[test]
fn frozen_kernel_values() {
    let cases = [
        (lambda_infty(order(0.3), 2.0).unwrap(), 1.598_093_571_001_617_7),
        (omega(1.0, order(0.5), 1.0).unwrap(), 0.089_073_855_890_780_345),
        (lambda_fn(4.0, order(0.7), 3.0).unwrap(), 6.075_887_481_958_123_1),
        (lambda_tilde(1.0, order(0.5), 1.0).unwrap(), 0.278_805_585_280_661_98),
        (lambda_fn(1.0, order(0.5), 1.0).unwrap(), 0.861_527_706_796_296_37),
        (omega(2.0, order(0.4), 0.0).unwrap(), 0.757_858_283_255_199_04),
    ];
    for (k, (got, want)) in cases.iter().enumerate() {
        assert!(close(*got, *want, 1e-13), "case {k}: {got} vs {want}");
    }
}

#[test]
fn half_order_constants() {
    assert!(close(
        lambda_infty(order(0.5), 1.0).unwrap(),
        1.772_453_850_905_516,
        1e-15
    ));
    assert!(close(1.0 / gamma(1.5), std::f64::consts::FRAC_2_SQRT_PI, 1e-15));
    assert!(close(gamma(3.0) / gamma(2.5), 1.504_505_556_127_350_1, 1e-14));
}

#[test]
fn incomplete_gamma_matches_statrs() {
    for &a in &[0.1, 0.25, 0.5, 0.75, 0.9, 1.5, 3.0] {
        for &x in &[1e-4, 0.01, 0.3, 0.99, 1.0, 1.7, 5.0, 20.0] {
            let ours = upper_incomplete_gamma(a, x).unwrap();
            let theirs = statrs::function::gamma::gamma_ui(a, x);
            assert!(close(ours, theirs, 1e-12), "a={a} x={x}: {ours} vs {theirs}");
        }
    }
}

#[test]
fn kernels_match_statrs_closed_forms() {
    for &alpha in &[0.1, 0.3, 0.5, 0.7, 0.9] {
        for &mu in &[0.1_f64, 1.0, 5.0] {
            for &t in &[0.01, 0.2, 1.0, 3.0] {
                let x = mu * t;
                let tilde = mu.powf(alpha) * statrs::function::gamma::gamma_ui(1.0 - alpha, x);
                let om = t.powf(-alpha) * (-x).exp() - tilde;
                assert!(close(lambda_tilde(t, order(alpha), mu).unwrap(), tilde, 1e-11));
                let got = omega(t, order(alpha), mu).unwrap();
                assert!((got - om).abs() <= 1e-11 * (1.0 + t.powf(-alpha)), "{alpha} {mu} {t}");
            }
        }
    }
}

#[test]
fn quadrature_forms_agree_with_closed_forms() {
    for &alpha in &[0.2, 0.5, 0.8] {
        for &mu in &[0.5, 2.0, 10.0] {
            let o = order(alpha);
            assert!((lambda_infty(o, mu).unwrap() - lambda_infty_quadrature(o, mu).unwrap()).abs() < 1e-10);
            for &t in &[0.05, 0.5, 2.0] {
                let d = lambda_fn(t, o, mu).unwrap() - lambda_fn_quadrature(t, o, mu).unwrap();
                assert!(d.abs() < 1e-10 * (1.0 + t.powf(-alpha)));
            }
        }
    }
}

#[test]
fn thresholds() {
    assert!(close(
        mu_threshold(2.0, order(0.3)).unwrap(),
        10.079_368_399_158_985,
        1e-13
    ));
    assert!(close(mu_threshold(4.0, order(0.5)).unwrap(), 16.0, 1e-14));
    let m = mu_threshold_multiterm(2.0, 0.5, &[order(0.9), order(0.4)]).unwrap();
    assert!(close(m, 32.0, 1e-13));
    let r = mu_threshold_varorder(3.0, 1.0, 0.5).unwrap();
    assert!(close(r, 1.697_224_362_268_005_4, 1e-12));
    assert!((r + r.sqrt() - 3.0).abs() < 1e-10);
}
