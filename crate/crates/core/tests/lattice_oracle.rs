use affine_sle::affine::build_weyl;
use affine_sle::lattice::{character_coefficients, verify_state_identities, Convention, FkMap};
use affine_sle::lie::{build_sl, Weight};
use affine_sle::null::{build_candidate, solve, Tie};

#[test]
fn sl2_identities_under_both_cocycles() {
    for conv in [Convention::A, Convention::B] {
        let r = verify_state_identities(2, conv).unwrap();
        assert_eq!(r.identities.len(), 5);
        assert!(r.all_hold, "{}", r.proof_log());
    }
}

#[test]
fn sl3_null_identity_under_both_cocycles() {
    for conv in [Convention::A, Convention::B] {
        let r = verify_state_identities(3, conv).unwrap();
        assert!(r.all_hold, "{}", r.proof_log());
    }
    assert!(verify_state_identities(5, Convention::A).is_err());
}

#[test]
fn characters_match_gram_ranks() {
    let m = build_weyl(&build_sl(2).unwrap(), 1, &Weight::zero(1), 4).unwrap();
    let ranks: Vec<u64> = (0..=4).map(|d| m.gram(d).rank() as u64).collect();
    assert_eq!(character_coefficients(1, 4).unwrap(), ranks);
    assert_eq!(character_coefficients(2, 4).unwrap(), vec![1, 8, 17, 46, 98]);
}

#[test]
fn sl2_realizations_agree() {
    let lie = build_sl(2).unwrap();
    let m = build_weyl(&lie, 1, &Weight::zero(1), 4).unwrap();
    for conv in [Convention::A, Convention::B] {
        let fk = FkMap::new(&lie, conv, 4).unwrap();
        assert!(fk.compare(&m, 3).unwrap().passed());
        let c = build_candidate(&m, &m.highest_weight_vector(), 2, Tie::SingleTau).unwrap();
        assert_eq!(fk.solve_candidate(&m, &c).unwrap(), solve(&m, &c).unwrap().solution);
    }
}
