use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use uniexp::analysis::{abs_error_from_phase, sup_error};
use uniexp::unitary::{UnitaryBarycentric, UnitaryEval};

/// Sorted, well separated support nodes in [-1, 1] with matching weights.
fn barycentric() -> impl Strategy<Value = UnitaryBarycentric> {
    (1usize..8, 0.05f64..20.0).prop_flat_map(|(m, omega)| {
        (
            prop::collection::vec(0.05f64..1.0, m + 1),
            prop::collection::vec(-1.0f64..1.0, m),
            Just(omega),
        )
            .prop_map(|(gaps, weights, omega)| {
                let total: f64 = gaps.iter().sum();
                let mut acc = -1.0;
                let nodes: Vec<f64> = gaps[..gaps.len() - 1]
                    .iter()
                    .map(|g| {
                        acc += 2.0 * g / total;
                        acc
                    })
                    .collect();
                let weights = weights.into_iter().map(|w| if w.abs() < 1e-3 { 0.5 } else { w }).collect();
                UnitaryBarycentric::new(omega, nodes, weights).unwrap()
            })
    })
}

// Random weights give poorly conditioned quotients, so the rounding bounds
// here grow with the degree.
proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn unitary_on_the_imaginary_axis(r in barycentric()) {
        let tol = 5e-15 * (r.n() + 1) as f64;
        for k in 0..10_000 {
            let x = -1.0 + 2.0 * k as f64 / 9_999.0;
            let v = r.eval(x);
            prop_assert!((v.norm() - 1.0).abs() <= tol, "x={} |r|={}", x, v.norm());
        }
    }

    #[test]
    fn error_matches_phase_error(r in barycentric(), target in 0.1f64..20.0) {
        for k in 0..500 {
            let x = -1.0 + 2.0 * k as f64 / 499.0;
            let direct = (r.eval(x) - Complex64::cis(target * x)).norm();
            let via_phase = abs_error_from_phase(r.phase_error(x, target));
            prop_assert!((direct - via_phase).abs() <= 1e-13 * (r.n() + 1) as f64, "x={} {} vs {}", x, direct, via_phase);
        }
    }

    #[test]
    fn weight_scaling_leaves_values_unchanged(r in barycentric(), scale in prop::sample::select(vec![-3.0, -1e-3, 0.25, 7.0, 1e6])) {
        let scaled: Vec<f64> = r.rotated_weights().iter().map(|v| v * scale).collect();
        let s = UnitaryBarycentric::new(r.omega(), r.support_nodes().to_vec(), scaled).unwrap();
        for k in 0..200 {
            let x = -1.0 + 2.0 * k as f64 / 199.0;
            prop_assert!((r.eval(x) - s.eval(x)).norm() <= 1e-13 * (r.n() + 1) as f64);
        }
    }

    #[test]
    fn sup_error_never_exceeds_two(r in barycentric(), target in 0.1f64..40.0) {
        let (e, x) = sup_error(&r, target, 256).unwrap();
        prop_assert!((0.0..=2.0).contains(&e));
        prop_assert!((-1.0..=1.0).contains(&x));
    }

    #[test]
    fn phase_error_is_principal(r in barycentric(), target in 0.0f64..40.0, x in -1.0f64..1.0) {
        let d = r.phase_error(x, target);
        prop_assert!(d > -PI && d <= PI);
    }
}
