//! One line per acceptance criterion: `criterion N: PASS|FAIL (seconds) detail`.
//! Criteria run through the `affine-sle` binary where a command exists for them,
//! and through the library otherwise.

use std::process::Command;
use std::time::{Duration, Instant};

use affine_sle::affine::build_weyl;
use affine_sle::lattice::{character_coefficients, verify_state_identities, Convention};
use affine_sle::lie::{build_sl, Weight};
use affine_sle::rational::{format_q, q};
use affine_sle::sde::{g_from_f, loewner_convergence, loewner_residual, step_f_theta, LaurentState, NoisePath};
use serde_json::Value;

type Outcome = Result<String, String>;

fn cli(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_affine-sle"))
        .args(args)
        .arg("--no-timing")
        .env_remove("AFFINE_SLE_SEED")
        .output()
        .expect("run affine-sle");
    let code = out.status.code().unwrap_or(-1);
    let json = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (code, json)
}

fn strings(v: &Value) -> Vec<String> {
    v.as_array().map(|a| a.iter().filter_map(|x| x.as_str().map(String::from)).collect()).unwrap_or_default()
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    ensure(start.elapsed() < limit, format!("took {:?}, limit {limit:?}", start.elapsed()))
}

fn exact_sl2() -> Outcome {
    let start = Instant::now();
    let (code, r) = cli(&["nullvec", "solve", "--algebra", "sl2", "--level", "1", "--weight", "0", "--n", "2"]);
    let values = strings(&r["result"]["values"]);
    ensure(code == 0, format!("exit {code}"))?;
    ensure(r["result"]["status"] == "unique-solution", "not unique")?;
    ensure(values == ["8/3", "1/1", "1/1", "1/1"], format!("values {values:?}"))?;
    within(start, Duration::from_secs(60))?;
    Ok(format!("unique (kappa0, kappa1..3) = {values:?}"))
}

fn exact_sl3() -> Outcome {
    let start = Instant::now();
    let (code, r) =
        cli(&["nullvec", "solve", "--algebra", "sl3", "--level", "1", "--weight", "0", "--n", "2", "--tie", "single-tau"]);
    let values = strings(&r["result"]["values"]);
    ensure(code == 0, format!("exit {code}"))?;
    ensure(values == ["12/5", "4/5"], format!("values {values:?}"))?;
    within(start, Duration::from_secs(15 * 60))?;
    Ok(format!("unique (kappa0, tau) = {values:?}"))
}

fn refutation() -> Outcome {
    let start = Instant::now();
    for top in ["0", "1"] {
        let (code, r) = cli(&["nullvec", "solve", "--algebra", "sl2", "--weight", "L1", "--n", "2", "--top", top]);
        ensure(code == 2, format!("top {top}: exit {code}"))?;
        ensure(r["result"]["status"] == "infeasible", format!("top {top}: {}", r["result"]["status"]))?;
    }
    within(start, Duration::from_secs(5 * 60))?;
    Ok("infeasible for both top-space basis vectors".into())
}

fn oracle() -> Outcome {
    let ids = verify_state_identities(2, Convention::A).map_err(|e| e.to_string())?;
    ensure(ids.identities.len() == 5 && ids.all_hold, "sl2 identities")?;
    let mut checked = 0;
    for alg in ["sl2", "sl3"] {
        let (code, r) = cli(&["lattice", "verify", "--algebra", alg, "--convention", "both", "--compare"]);
        ensure(code == 0, format!("{alg}: exit {code}"))?;
        for conv in r["result"]["conventions"].as_array().into_iter().flatten() {
            for v in conv["verdicts"].as_array().into_iter().flatten() {
                ensure(v["agree"] == true, format!("{alg}: {v}"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("5 sl2 identities hold; {checked} Gram/lattice verdicts agree (sl2, sl3, both cocycles)"))
}

fn structure() -> Outcome {
    let start = Instant::now();
    let mut total = 0;
    for (n, weight, c, h) in [
        (2, Weight::zero(1), q(1, 1), q(0, 1)),
        (2, Weight::fundamental(1, 1), q(1, 1), q(1, 4)),
        (3, Weight::zero(2), q(2, 1), q(0, 1)),
    ] {
        let lie = build_sl(n).map_err(|e| e.to_string())?;
        let m = build_weyl(&lie, 1, &weight, 4).map_err(|e| e.to_string())?;
        let label = format!("sl{n} {weight}");
        ensure(m.central_charge() == c, format!("{label}: c = {}", format_q(&m.central_charge())))?;
        ensure(m.conformal_weight() == h, format!("{label}: h = {}", format_q(&m.conformal_weight())))?;
        let vir = m.verify_virasoro(4);
        ensure(vir.passed(), format!("{label}: {vir:?}"))?;
        for rep in [m.verify_affine_relations(4), m.verify_contravariance(4), m.verify_l0_spectrum(), m.verify_casimir()]
        {
            ensure(rep.passed(), format!("{label}: {rep:?}"))?;
            total += rep.checks;
        }
        total += vir.virasoro.checks + vir.primary.checks;
    }
    within(start, Duration::from_secs(10 * 60))?;
    Ok(format!("{total} exact checks to degree 4; c(sl2) = 1, c(sl3) = 2, h(L1) = 1/4"))
}

fn characters() -> Outcome {
    let lie = build_sl(2).map_err(|e| e.to_string())?;
    let m = build_weyl(&lie, 1, &Weight::zero(1), 4).map_err(|e| e.to_string())?;
    let ranks: Vec<u64> = (0..=4).map(|d| m.gram(d).rank() as u64).collect();
    let chars = character_coefficients(1, 4).map_err(|e| e.to_string())?;
    ensure(ranks == chars, format!("Gram ranks {ranks:?} vs character {chars:?}"))?;
    Ok(format!("Gram ranks = lattice character = {chars:?}"))
}

fn martingale() -> Outcome {
    let start = Instant::now();
    let (code, r) = cli(&["sde", "martingale", "--algebra", "sl2", "--n", "2", "--kappa", "reference"]);
    ensure(code == 0, format!("reference variances: exit {code}, max z {}", r["result"]["max_z"]))?;
    let (code, bad) = cli(&["sde", "martingale", "--algebra", "sl2", "--n", "2", "--kappa0", "19/6"]);
    ensure(code == 2, format!("perturbed: exit {code}"))?;
    let d4 = &bad["result"]["degrees"][4];
    let z = d4["z"].as_f64().unwrap_or(0.0);
    let zp = d4["z_vs_prediction"].as_f64().unwrap_or(f64::INFINITY);
    ensure(z >= 5.0, format!("degree-4 z = {z}"))?;
    ensure(zp.abs() < 3.0, format!("degree-4 z against prediction = {zp}"))?;
    within(start, Duration::from_secs(10 * 60))?;
    Ok(format!(
        "max z {:.2} at reference; kappa0 + 1/2: degree-4 z {z:.2}, vs prediction {zp:.2}",
        r["result"]["max_z"].as_f64().unwrap_or(f64::NAN)
    ))
}

fn sde_structure() -> Outcome {
    let conv = loewner_convergence(2, 8.0 / 3.0, 1.0, &[8, 9, 10, 11, 12], 50, 12, 7).map_err(|e| e.to_string())?;
    ensure((conv.slope - 0.5).abs() <= 0.1, format!("slope {}", conv.slope))?;
    let path = NoisePath::generate(5, 1e-3, 500, &[8.0 / 3.0, 1.0, 1.0, 1.0]).map_err(|e| e.to_string())?;
    let mut a = LaurentState::initial(2, 6, 3).map_err(|e| e.to_string())?;
    let mut b = LaurentState::initial(2, 12, 3).map_err(|e| e.to_string())?;
    for k in 0..path.steps() {
        step_f_theta(&mut a, &path.step(k), path.dt, 8.0 / 3.0).map_err(|e| e.to_string())?;
        step_f_theta(&mut b, &path.step(k), path.dt, 8.0 / 3.0).map_err(|e| e.to_string())?;
    }
    ensure(a.f[..] == b.f[..7] && (0..3).all(|r| a.theta[r][..] == b.theta[r][..7]), "truncation mismatch")?;
    ensure(g_from_f(&a)[..] == g_from_f(&b)[..7], "g truncation mismatch")?;
    let n1 = NoisePath::generate(9, 1e-3, 1000, &[8.0 / 3.0]).map_err(|e| e.to_string())?;
    let r1 = loewner_residual(&n1, 1, 12, 8.0 / 3.0).map_err(|e| e.to_string())?;
    ensure(r1 < 1e-10, format!("n = 1 residual {r1}"))?;
    Ok(format!("n = 2 slope {:.3}; depth 6/12 bit-identical; n = 1 residual {r1:.1e}", conv.slope))
}

fn scan() -> Outcome {
    let start = Instant::now();
    let cp = std::env::temp_dir().join(format!("affine-sle-scan-{}.json", std::process::id()));
    let _ = std::fs::remove_file(&cp);
    let (code, r) = cli(&["nullvec", "scan", "--algebras", "4", "--n", "2", "--checkpoint", cp.to_str().unwrap()]);
    let _ = std::fs::remove_file(&cp);
    ensure(code == 0, format!("exit {code}"))?;
    let status = r["result"]["summary"][0]["status"].as_str().unwrap_or("").to_string();
    ensure(matches!(status.as_str(), "unique-solution" | "infeasible"), format!("status {status:?}"))?;
    within(start, Duration::from_secs(12 * 3600))?;
    let rep = &r["result"]["reports"][0];
    Ok(format!(
        "sl4 single-tau: {status} (rank {} vs augmented {}, {} equations)",
        rep["rank_coefficients"], rep["rank_augmented"], rep["equations"]
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("sl2 vacuum n=2 exact variances", exact_sl2),
        ("sl3 vacuum n=2 single-tau exact variances", exact_sl3),
        ("sl2 L1 n=2 refutation", refutation),
        ("lattice oracle equivalence", oracle),
        ("structure suites", structure),
        ("character cross-check", characters),
        ("martingale Monte Carlo", martingale),
        ("SDE structure", sde_structure),
        ("sl4 conjecture scan", scan),
    ];
    let handles: Vec<_> = criteria
        .iter()
        .map(|&(name, f)| {
            std::thread::spawn(move || {
                let start = Instant::now();
                let res = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
                (name, res, start.elapsed())
            })
        })
        .collect();
    let mut failed = 0;
    for (i, h) in handles.into_iter().enumerate() {
        let (name, res, took) = h.join().expect("criterion thread");
        let (verdict, detail) = match res {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {}: {verdict} [{name}] ({:.1}s) {detail}", i + 1, took.as_secs_f64());
    }
    println!("acceptance: {} passed, {failed} failed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
