use qgalois::coaction::{group_action_coaction, normalized_trace, regular_coaction, Side};
use qgalois::csalg::matrix_algebra;
use qgalois::examples::{
    crossed_product, heisenberg_cocycle, left_translations, projective_cocycle_algebra, TwoCocycle,
};
use qgalois::fqgroup::{dual_quantum_group, function_algebra, FiniteGroup, FiniteQuantumGroup};
use qgalois::linalg::{vec_norm, CMat};
use qgalois::morita::*;
use qgalois::{Config, Error};

fn cfg() -> Config {
    Config::default()
}

fn unit_object(h: &FiniteQuantumGroup) -> BiActionAlgebra {
    let l = regular_coaction(h, Side::Left, &cfg()).unwrap();
    let r = regular_coaction(h, Side::Right, &cfg()).unwrap();
    validate_biaction(l, r, &cfg()).unwrap()
}

#[test]
fn crossed_products_are_morita_galois_with_lambda_the_order() {
    for g in [FiniteGroup::cyclic(2), FiniteGroup::cyclic(3), FiniteGroup::symmetric3()] {
        let h = function_algebra(&g, &cfg()).unwrap();
        let b = crossed_product(&h, &cfg()).unwrap();
        let r = mkey_report(&b);
        assert!(r.verdict, "{:?}", r.failed_check);
        let n = g.order() as f64;
        assert!((r.lambda.unwrap() - n).abs() < 1e-9);
        assert!((r.lambda1.unwrap() - r.lambda2.unwrap()).abs() < 1e-9);
        assert_eq!((r.fixed_dim1, r.fixed_dim2), (g.order(), g.order()));
        assert_eq!((r.commutant_dim12, r.commutant_dim21), (1, 1));
        assert!(r.mkey_residual1.unwrap() < 1e-9 && r.mkey_residual2.unwrap() < 1e-9);
    }
}

#[test]
fn joint_state_of_crossed_product_is_the_trace() {
    // H ⋊ Ĥ is a full matrix algebra, whose unique tracial state is the normalized trace
    let h = function_algebra(&FiniteGroup::symmetric3(), &cfg()).unwrap();
    let b = crossed_product(&h, &cfg()).unwrap();
    let js = joint_canonical_state(&b).unwrap();
    assert!(js.trace_residual < 1e-10);
    assert!(vec_norm(&(&js.functional.coeffs - normalized_trace(b.algebra()))) < 1e-10);
}

#[test]
fn heisenberg_twist_of_order_two_passes() {
    let s = heisenberg_cocycle(2, 1e-12).unwrap();
    let b = projective_cocycle_algebra(&s, &cfg()).unwrap();
    let r = mkey_report(&b);
    assert!(r.verdict, "{:?}", r.failed_check);
    assert_eq!((r.fixed_dim1, r.fixed_dim2), (4, 4));
    assert!((r.lambda.unwrap() - 4.0).abs() < 1e-9);
}

#[test]
fn trivial_cocycle_fails_at_relative_commutants() {
    let g = FiniteGroup::product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2));
    let b = projective_cocycle_algebra(&TwoCocycle::trivial(g), &cfg()).unwrap();
    let r = mkey_report(&b);
    assert!(!r.verdict);
    assert_eq!(r.failed_check.as_deref(), Some("relative commutants"));
    assert!(r.free1.free && r.free2.free);
    assert!(r.commutant_dim12 > 1);
}

#[test]
fn non_commuting_translations_are_rejected() {
    // left translations of S3 used on both sides do not commute
    let g = FiniteGroup::symmetric3();
    let h = function_algebra(&g, &cfg()).unwrap();
    let maps = left_translations(&g);
    let l = group_action_coaction(h.algebra(), &h, &g, &maps, Side::Left, &cfg()).unwrap();
    let r = group_action_coaction(h.algebra(), &h, &g, &maps, Side::Right, &cfg()).unwrap();
    match validate_biaction(l, r, &cfg()) {
        Err(Error::NotCommuting { residual }) => assert!(residual > 1e-3),
        other => panic!("expected NotCommuting, got {other:?}"),
    }
}

#[test]
fn exchange_map_is_a_scaled_unitary() {
    let h = function_algebra(&FiniteGroup::cyclic(3), &cfg()).unwrap();
    let b = crossed_product(&h, &cfg()).unwrap();
    let x = exchange_map(&b).unwrap();
    assert!(x.report.passes(&cfg()));
    assert!(x.report.isometry_residual < 1e-9);
    assert!((x.report.lambda - 3.0).abs() < 1e-9);
    let n = x.forward.nrows();
    assert!((&x.forward * &x.inverse - CMat::identity(n, n)).norm() < 1e-9);
}

#[test]
fn cotensor_with_dual_crossed_product_has_dimension_eight() {
    let h = function_algebra(&FiniteGroup::cyclic(2), &cfg()).unwrap();
    let b1 = crossed_product(&h, &cfg()).unwrap();
    let b2 = crossed_product(&dual_quantum_group(&h).unwrap(), &cfg()).unwrap();
    let c = cotensor(&b1, &b2, &cfg()).unwrap();
    assert_eq!(c.biaction.algebra().dim(), 8);
    let r = mkey_report(&c.biaction);
    assert!(r.verdict, "{:?}", r.failed_check);
}

#[test]
fn cotensor_with_unit_object_is_isomorphic() {
    let h = function_algebra(&FiniteGroup::symmetric3(), &cfg()).unwrap();
    let b = crossed_product(&h, &cfg()).unwrap();
    let unit = unit_object(b.right().hopf());
    let c = cotensor(&b, &unit, &cfg()).unwrap();
    assert_eq!(c.biaction.algebra().dim(), b.algebra().dim());
    let iso = certify_isomorphism(&b, &c.biaction, &unit_law_candidate(&b, &c), &cfg()).unwrap();
    assert!(iso.verdict, "{iso:?}");
    assert!(iso.residual < 1e-9);
}

#[test]
fn mismatched_middle_groups_are_rejected() {
    let h2 = function_algebra(&FiniteGroup::cyclic(2), &cfg()).unwrap();
    let h3 = function_algebra(&FiniteGroup::cyclic(3), &cfg()).unwrap();
    let b1 = crossed_product(&h2, &cfg()).unwrap();
    let b2 = crossed_product(&h3, &cfg()).unwrap();
    assert!(matches!(cotensor(&b1, &b2, &cfg()), Err(Error::MiddleGroupMismatch { .. })));
}

#[test]
fn certifier_accepts_identity_and_rejects_rank_one() {
    let h = function_algebra(&FiniteGroup::cyclic(2), &cfg()).unwrap();
    let b = crossed_product(&h, &cfg()).unwrap();
    let iso = certify_isomorphism(&b, &b, &CMat::identity(4, 4), &cfg()).unwrap();
    assert!(iso.verdict);
    // a rank-one candidate cannot be corrected to a bijection
    let bad = CMat::from_fn(4, 4, |i, j| if i == 0 && j == 0 { 1.0.into() } else { 0.0.into() });
    let r = certify_isomorphism(&b, &b, &bad, &cfg()).unwrap();
    assert!(!r.verdict);
}

#[test]
fn onesided_hopf_galois_degenerate_case() {
    // B = ℂ1 inside C(G) with α = Δ
    let h = function_algebra(&FiniteGroup::symmetric3(), &cfg()).unwrap();
    let c = regular_coaction(&h, Side::Right, &cfg()).unwrap();
    let unit = CMat::from_column_slice(6, 1, h.algebra().unit().as_slice());
    let r = onesided_report(&c, &unit, &cfg()).unwrap();
    assert!(r.verdict, "{:?}", r.failed_check);
    assert!((r.lambda - 1.0).abs() < 1e-12);
    assert_eq!((r.b_dim, r.fixed_dim), (1, 1));
}

#[test]
fn onesided_agrees_with_two_sided_on_crossed_products() {
    for g in [FiniteGroup::cyclic(2), FiniteGroup::symmetric3()] {
        let h = function_algebra(&g, &cfg()).unwrap();
        let b = crossed_product(&h, &cfg()).unwrap();
        let two = mkey_report(&b);
        let one = onesided_report(b.right(), b.left().fixed_basis(), &cfg()).unwrap();
        assert_eq!(one.verdict, two.verdict);
        assert!((one.lambda - two.lambda.unwrap()).abs() < 1e-9);
    }
}

#[test]
fn onesided_rejects_matrix_algebra_with_trivial_action() {
    let a = matrix_algebra(2, &cfg()).unwrap();
    let h = function_algebra(&FiniteGroup::cyclic(2), &cfg()).unwrap();
    let c = qgalois::coaction::trivial_coaction(&a, &h, Side::Right, &cfg()).unwrap();
    let unit = CMat::from_column_slice(4, 1, a.unit().as_slice());
    let r = onesided_report(&c, &unit, &cfg()).unwrap();
    assert!(!r.verdict);
    assert_eq!(r.failed_check.as_deref(), Some("freeness"));
}

#[test]
fn cotensor_is_associative_on_a_crossed_product_chain() {
    let h = function_algebra(&FiniteGroup::cyclic(2), &cfg()).unwrap();
    let b1 = crossed_product(&h, &cfg()).unwrap();
    let b2 = crossed_product(b1.right().hopf(), &cfg()).unwrap();
    let b3 = crossed_product(b2.right().hopf(), &cfg()).unwrap();
    let (na, nd) = (b1.algebra().dim(), b3.algebra().dim());
    let c12 = cotensor(&b1, &b2, &cfg()).unwrap();
    let left = cotensor(&c12.biaction, &b3, &cfg()).unwrap();
    let c23 = cotensor(&b2, &b3, &cfg()).unwrap();
    let right = cotensor(&b1, &c23.biaction, &cfg()).unwrap();
    assert_eq!(left.biaction.algebra().dim(), 16);
    assert_eq!(right.biaction.algebra().dim(), 16);
    let l = lift_left_nested(&c12, &left, nd);
    let r = lift_right_nested(&c23, &right, na);
    // both bracketings embed onto the same subspace of A⊗B⊗D
    assert!((&r * (r.adjoint() * &l) - &l).norm() < 1e-9);
    let iso = certify_isomorphism(&left.biaction, &right.biaction, &associator_candidate(&l, &r), &cfg()).unwrap();
    assert!(iso.verdict, "{iso:?}");
}
