use affine_sle::affine::build_weyl;
use affine_sle::lie::{build_sl, Weight};
use affine_sle::rational::{q, qi};

#[test]
fn sl2_fundamental_module_to_degree_three() {
    let m = build_weyl(&build_sl(2).unwrap(), 1, &Weight::fundamental(1, 1), 3).unwrap();
    assert_eq!(m.conformal_weight(), q(1, 4));
    assert_eq!(m.central_charge(), qi(1));
    assert!(m.verify_virasoro(3).passed());
    assert!(m.verify_affine_relations(3).passed());
    assert!(m.verify_contravariance(3).passed());
    assert!(m.verify_l0_spectrum().passed());
    assert!(m.verify_casimir().passed());
}

#[test]
fn sl3_vacuum_to_degree_two() {
    let m = build_weyl(&build_sl(3).unwrap(), 1, &Weight::zero(2), 2).unwrap();
    assert_eq!(m.central_charge(), qi(2));
    assert!(m.verify_virasoro(2).passed());
    assert!(m.verify_affine_relations(2).passed());
    assert!(m.verify_contravariance(2).passed());
}

#[test]
fn gram_slices_are_symmetric() {
    let m = build_weyl(&build_sl(2).unwrap(), 2, &Weight::fundamental(1, 1), 3).unwrap();
    for d in 0..=3 {
        assert!(m.gram(d).is_symmetric());
    }
}
