use proptest::prelude::*;
use qgalois::coaction::kms_residual_with;
use qgalois::csalg::{frobenius_report, matrix_algebra, multimatrix, q_scalar};
use qgalois::examples::{crossed_product, TwoCocycle};
use qgalois::fqgroup::{function_algebra, FiniteGroup};
use qgalois::linalg::{vec_norm, CMat, CVec, C64};
use qgalois::morita::mkey_report;
use qgalois::Config;

fn complex_matrix(n: usize) -> impl Strategy<Value = CMat> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n * n)
        .prop_map(move |v| CMat::from_fn(n, n, |i, j| C64::new(v[i * n + j].0, v[i * n + j].1)))
}

/// `b b* + ε` with `ε` bounded away from zero.
fn positive_invertible(n: usize) -> impl Strategy<Value = CMat> {
    (complex_matrix(n), 0.1f64..1.0).prop_map(move |(b, eps)| &b * b.adjoint() + CMat::identity(n, n) * C64::new(eps, 0.0))
}

fn sized_positive() -> impl Strategy<Value = (usize, CMat)> {
    (1usize..=4).prop_flat_map(|n| positive_invertible(n).prop_map(move |c| (n, c)))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn twisted_trace_is_a_q_system_with_kms(input in sized_positive()) {
        let (n, c) = input;
        let cfg = Config::default();
        let a = matrix_algebra(n, &cfg).unwrap();
        let cinv = c.clone().try_inverse().unwrap();
        let tr_inv = cinv.trace();
        // φ(e_ij) = Tr(e_ij c) Tr(c⁻¹) = c_ji Tr(c⁻¹)
        let phi = CVec::from_fn(n * n, |k, _| c[(k % n, k / n)] * tr_inv);
        let (q, _) = q_scalar(&a, &phi, 1e-9).unwrap();
        prop_assert!((q.unwrap() - 1.0).abs() < 1e-8);
        // θ(e_ij) = c e_ij c⁻¹
        let theta = CMat::from_fn(n * n, n * n, |row, col| {
            let (p, q) = (row / n, row % n);
            let (i, j) = (col / n, col % n);
            c[(p, i)] * cinv[(j, q)]
        });
        prop_assert!(kms_residual_with(&a, &phi, &theta) < 1e-8);
    }

    #[test]
    fn q_system_scalar_survives_a_change_of_basis(t in complex_matrix(5), sizes in prop::sample::select(vec![vec![1, 2], vec![2, 1]])) {
        let cfg = Config::default();
        let a = multimatrix(&sizes, &cfg).unwrap();
        prop_assume!(t.determinant().norm() > 1e-2);
        let b = a.change_basis(&t, &cfg).unwrap();
        let mut bs = b.wedderburn().unwrap().block_sizes.clone();
        bs.sort();
        prop_assert_eq!(bs, vec![1, 2]);
        // the normalized regular trace is basis independent
        let tr = |x: &qgalois::csalg::CStarAlgebra| CVec::from_fn(x.dim(), |i, _| x.regular_trace(&x.basis(i)) / C64::new(x.dim() as f64, 0.0));
        let ra = frobenius_report(&a, &tr(&a), 1e-9).unwrap();
        let rb = frobenius_report(&b, &tr(&b), 1e-7).unwrap();
        prop_assert!((ra.q_scalar.unwrap() - rb.q_scalar.unwrap()).abs() < 1e-6);
    }

    #[test]
    fn coboundaries_give_commutative_twists(phases in prop::collection::vec(0.0f64..std::f64::consts::TAU, 9)) {
        // σ(g,h) = β(g)β(h)/β(gh) with β(e) = 1 is cohomologous to 1
        let cfg = Config::default();
        let z = FiniteGroup::cyclic(3);
        let g = FiniteGroup::product(&z, &z);
        let beta: Vec<C64> = phases.iter().enumerate().map(|(k, t)| if k == g.identity() { C64::new(1.0, 0.0) } else { C64::from_polar(1.0, *t) }).collect();
        let values: Vec<C64> = (0..81).map(|k| {
            let (x, y) = (k / 9, k % 9);
            beta[x] * beta[y] / beta[g.mul(x, y)]
        }).collect();
        let s = TwoCocycle::new(g, values, 1e-10).unwrap();
        let a = s.twisted_group_algebra(&cfg).unwrap();
        prop_assert_eq!(a.wedderburn().unwrap().block_sizes.clone(), vec![1; 9]);
        for i in 0..9 {
            for j in 0..9 {
                prop_assert!(vec_norm(&a.commutator(&a.basis(i), &a.basis(j))) < 1e-12);
            }
        }
    }

    #[test]
    fn morita_verdict_is_seed_independent(seed in any::<u64>()) {
        let cfg = Config { seed, ..Config::default() };
        let h = function_algebra(&FiniteGroup::cyclic(3), &cfg).unwrap();
        let r = mkey_report(&crossed_product(&h, &cfg).unwrap());
        prop_assert!(r.verdict);
        prop_assert!((r.lambda.unwrap() - 3.0).abs() < 1e-9);
    }
}
