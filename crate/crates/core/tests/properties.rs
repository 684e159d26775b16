use fracmax_core::caputo::{caputo_l1, l1_weights};
use fracmax_core::kernels::{lambda_fn, lambda_infty, lambda_tilde, omega};
use fracmax_core::verify::{generate_instance, BcKind, InstanceConfig, OperatorKind};
use fracmax_core::{FractionalOrder, TemporalMesh, TimeSamples};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn l1_weights_are_positive(alpha in 0.01..0.99f64, steps in 2usize..60, r in 1.0..4.0f64) {
        let mesh = TemporalMesh::graded(1.0, steps, r).unwrap();
        for n in 1..=steps {
            let w = l1_weights(mesh.nodes(), n, alpha);
            prop_assert!(w.iter().all(|&v| v > 0.0), "n = {n}: {w:?}");
        }
    }

    #[test]
    fn l1_is_linear(
        alpha in 0.05..0.95f64,
        a in -3.0..3.0f64,
        b in -3.0..3.0f64,
        p in prop::collection::vec(-1.0..1.0f64, 17),
        q in prop::collection::vec(-1.0..1.0f64, 17),
    ) {
        let mesh = TemporalMesh::graded(2.0, 16, 2.0).unwrap();
        let order = FractionalOrder::new(alpha).unwrap();
        let mix: Vec<f64> = p.iter().zip(&q).map(|(x, y)| a * x + b * y).collect();
        let sp = TimeSamples::new(mesh.clone(), p).unwrap();
        let sq = TimeSamples::new(mesh.clone(), q).unwrap();
        let sm = TimeSamples::new(mesh, mix).unwrap();
        for n in 1..=16 {
            let lhs = caputo_l1(&sm, order, n).unwrap();
            let rhs = a * caputo_l1(&sp, order, n).unwrap() + b * caputo_l1(&sq, order, n).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()) * 16.0);
        }
    }

    #[test]
    fn kernel_identity_and_bounds(alpha in 0.05..0.95f64, mu in 0.0..8.0f64, t in 1e-3..20.0f64) {
        let order = FractionalOrder::new(alpha).unwrap();
        let linf = lambda_infty(order, mu).unwrap();
        let lam = lambda_fn(t, order, mu).unwrap();
        let om = omega(t, order, mu).unwrap();
        let scale = 1.0 + t.powf(-alpha);
        prop_assert!((linf - lam - t.powf(-alpha) + om).abs() <= 1e-8 * scale);
        let tilde = lambda_tilde(t, order, mu).unwrap();
        prop_assert!((0.0..=linf).contains(&tilde));
        prop_assert!(omega(t * 1.5, order, mu).unwrap() < om);
    }

    #[test]
    fn generator_is_deterministic(seed in any::<u64>(), lambda in 0.0..5.0f64) {
        let mut cfg = InstanceConfig::new(seed, lambda, OperatorKind::Single { alpha: 0.5 }, BcKind::Robin);
        cfg.intervals = 8;
        cfg.steps = 8;
        let (p1, p2) = (generate_instance(&cfg).unwrap(), generate_instance(&cfg).unwrap());
        for &t in p1.mesh.nodes() {
            for &x in p1.grid.nodes() {
                let (c1, c2) = (&p1.coefficients, &p2.coefficients);
                prop_assert_eq!((c1.c)(x, t).to_bits(), (c2.c)(x, t).to_bits());
                prop_assert_eq!((c1.f)(x, t).to_bits(), (c2.f)(x, t).to_bits());
                prop_assert!((c1.c)(x, t) >= -lambda);
            }
        }
    }
}
