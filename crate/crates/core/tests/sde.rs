use affine_sle::affine::build_weyl;
use affine_sle::lie::{build_sl, Weight};
use affine_sle::null::{build_candidate, verify_null, Tie};
use affine_sle::rational::{q, qi};
use affine_sle::sde::{
    deterministic_drift, loewner_convergence, martingale_mc, run_trace, MartingaleConfig, TraceConfig,
};

#[test]
fn drift_over_time_is_the_candidate_vector() {
    let m = build_weyl(&build_sl(2).unwrap(), 1, &Weight::zero(1), 4).unwrap();
    let w = m.highest_weight_vector();
    let c = build_candidate(&m, &w, 2, Tie::PerGenerator).unwrap();
    let kappa = [qi(1), qi(1), qi(1)];
    let t = q(1, 2);
    let d = deterministic_drift(&m, &w, 2, &q(19, 6), &kappa, &t, 4).unwrap();
    let expected = c.evaluate(&[q(19, 6), qi(1), qi(1), qi(1)]).scaled(&t);
    assert_eq!(d.sub(&w), expected);
    // at the null variances the drift is a null vector, zero in the quotient
    let null = deterministic_drift(&m, &w, 2, &q(8, 3), &kappa, &t, 4).unwrap().sub(&w);
    assert!(!null.is_zero());
    assert!(verify_null(&m, &null).unwrap().is_null);
}

#[test]
fn martingale_runs_are_seed_reproducible() {
    let m = build_weyl(&build_sl(2).unwrap(), 1, &Weight::zero(1), 4).unwrap();
    let w = m.highest_weight_vector();
    let cfg = MartingaleConfig {
        n: 2,
        kappa0: q(8, 3),
        kappa: vec![qi(1); 3],
        t_final: 0.2,
        dt: 1e-2,
        paths: 500,
        max_degree: 4,
        seed: 3,
    };
    let a = martingale_mc(&m, &w, &cfg).unwrap();
    assert_eq!(a, martingale_mc(&m, &w, &cfg).unwrap());
    assert!(a.max_z < 3.0);
    assert_eq!(a.quotient_dims, vec![1, 3, 4, 7, 13]);
    assert!(martingale_mc(&m, &w, &MartingaleConfig { max_degree: 3, ..cfg }).is_err());
}

#[test]
fn loewner_residual_shrinks_with_the_step() {
    let r = loewner_convergence(2, 8.0 / 3.0, 1.0, &[6, 8, 10], 10, 6, 1).unwrap();
    assert!(r.mean_residuals[2] < r.mean_residuals[0]);
    assert!(r.slope > 0.3 && r.slope < 0.8, "{}", r.slope);
}

#[test]
fn trace_is_reproducible() {
    let cfg = TraceConfig {
        n: 2,
        kappa0: 8.0 / 3.0,
        kappa: vec![1.0; 3],
        t_final: 0.05,
        dt: 1e-3,
        depth: 12,
        seed: 42,
        stride: 5,
    };
    let a = run_trace(&cfg).unwrap();
    assert_eq!(a, run_trace(&cfg).unwrap());
    assert_eq!(a.rows.len(), 11);
}
