//! Property tests over the f64 instantiation of the geometric core.

use proptest::prelude::*;

use ushape_core::lattice::{
    gram_from_log_vectors, lagrange_reduce, tau_from_reduced_gram, Gram2, Unimodular,
};
use ushape_core::units::{galois_swap, LogVector};

/// Positive-definite Gram matrices with moderate conditioning.
fn arb_gram() -> impl Strategy<Value = Gram2<f64>> {
    (0.1f64..10.0, -0.999f64..0.999, 0.1f64..10.0).prop_map(|(a, c, b)| {
        // g12 = c * sqrt(g11 g22) keeps the matrix positive definite.
        let g12 = c * (a * b).sqrt();
        Gram2 {
            g11: a,
            g12,
            g22: b,
        }
    })
}

fn arb_unimodular() -> impl Strategy<Value = Unimodular> {
    (-4i64..=4, -4i64..=4, proptest::bool::ANY).prop_map(|(p, q, swap)| {
        // [[1, p], [0, 1]] * [[1, 0], [q, 1]], optionally row-swapped.
        let m = Unimodular {
            a: 1 + p * q,
            b: p,
            c: q,
            d: 1,
        };
        if swap {
            Unimodular {
                a: m.c,
                b: m.d,
                c: m.a,
                d: m.b,
            }
        } else {
            m
        }
    })
}

proptest! {
    #[test]
    fn reduction_satisfies_the_inequalities(g in arb_gram()) {
        let (r, t) = lagrange_reduce(&g).unwrap();
        prop_assert!(r.g11 <= r.g22 * (1.0 + 1e-12));
        prop_assert!(2.0 * r.g12.abs() <= r.g11 * (1.0 + 1e-12));
        prop_assert_eq!(t.det().abs(), 1);
        // Determinant preserved.
        prop_assert!((r.det() - g.det()).abs() <= 1e-9 * g.det());
        // Reduced basis angle: |sin theta| >= sqrt(3)/2.
        let cos = r.g12 / (r.g11 * r.g22).sqrt();
        let sin = (1.0 - cos * cos).sqrt();
        prop_assert!(sin >= 3f64.sqrt() / 2.0 - 1e-12);
    }

    #[test]
    fn shape_is_invariant_under_basis_change_and_scaling(
        g in arb_gram(),
        m in arb_unimodular(),
        scale in 0.01f64..100.0,
    ) {
        let (r1, _) = lagrange_reduce(&g).unwrap();
        let p1 = tau_from_reduced_gram(&r1, &1e-12, 53).unwrap();
        let (r2, _) = lagrange_reduce(&g.transformed(&m)).unwrap();
        let p2 = tau_from_reduced_gram(&r2, &1e-12, 53).unwrap();
        prop_assert!((p1.x - p2.x).abs() < 1e-9, "x: {} vs {}", p1.x, p2.x);
        prop_assert!((p1.y - p2.y).abs() < 1e-9 * p1.y.max(1.0));
        let (r3, _) = lagrange_reduce(&g.scaled(&scale)).unwrap();
        let p3 = tau_from_reduced_gram(&r3, &1e-12, 53).unwrap();
        prop_assert!((p1.x - p3.x).abs() < 1e-9);
        prop_assert!((p1.y - p3.y).abs() < 1e-9 * p1.y.max(1.0));
    }

    #[test]
    fn shape_point_lies_in_the_fundamental_domain(g in arb_gram()) {
        let (r, _) = lagrange_reduce(&g).unwrap();
        let p = tau_from_reduced_gram(&r, &1e-12, 53).unwrap();
        prop_assert!(p.x >= 0.0 && p.x <= 0.5);
        prop_assert!(p.y >= 3f64.sqrt() / 2.0 - 1e-12);
        prop_assert!(p.x * p.x + p.y * p.y >= 1.0 - 1e-12);
    }

    #[test]
    fn sum_zero_is_preserved_by_vector_arithmetic(
        a1 in -10.0f64..10.0, a2 in -10.0f64..10.0,
        b1 in -10.0f64..10.0, b2 in -10.0f64..10.0,
    ) {
        let u = LogVector::from_sum_zero(a1, a2);
        let v = LogVector::from_sum_zero(b1, b2);
        for w in [u.add(&v), u.sub(&v), u.neg(), galois_swap(&u)] {
            let sum = w.l1 + w.l2 + w.l3;
            let scale = w.l1.abs().max(w.l2.abs()).max(w.l3.abs()).max(1.0);
            prop_assert!(sum.abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn gram_of_independent_vectors_is_positive_definite(
        a1 in -10.0f64..10.0, a2 in -10.0f64..10.0,
        b1 in -10.0f64..10.0, b2 in -10.0f64..10.0,
    ) {
        let u = LogVector::from_sum_zero(a1, a2);
        let v = LogVector::from_sum_zero(b1, b2);
        if let Ok(g) = gram_from_log_vectors(&u, &v, &1e-9) {
            prop_assert!(g.g11 > 0.0 && g.g22 > 0.0 && g.det() > 0.0);
            // Hyperplane metric: det Gram = 3 * (regulator minor)^2.
            let minor = u.l1 * v.l2 - u.l2 * v.l1;
            prop_assert!((g.det() - 3.0 * minor * minor).abs() <= 1e-9 * g.det().max(1.0));
        }
    }
}
