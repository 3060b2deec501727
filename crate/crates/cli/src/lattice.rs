use std::path::PathBuf;

use affine_sle::affine::build_weyl;
use affine_sle::lattice::{verify_state_identities, Convention, FkMap, IdentityReport, OracleComparison};
use affine_sle::lie::Weight;
use affine_sle::null::{build_candidate, solve, verify_null, Tie};
use affine_sle::rational::{q, Q};
use clap::{Subcommand, ValueEnum};
use serde::Serialize;

use crate::common::{parse_algebra, reference_kappa, CliResult, Exit};
use crate::report::Outcome;

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConventionArg {
    A,
    B,
    Both,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case", tag = "subcommand")]
pub enum LatticeCmd {
    /// Check the degree-4 state identities in the lattice realization.
    Verify {
        #[arg(long, default_value = "sl2")]
        algebra: String,
        #[arg(long, value_enum, default_value = "both")]
        convention: ConventionArg,
        /// Also compare with the Weyl module: ranks, mode actions and null verdicts.
        #[arg(long)]
        compare: bool,
        #[arg(long, default_value_t = 4)]
        compare_degree: i64,
        #[arg(long, default_value_t = 4)]
        max_mode: i64,
        /// Write the human-readable proof log here.
        #[arg(long)]
        log: Option<PathBuf>,
    },
}

#[derive(Debug, Serialize)]
struct VerdictAgreement {
    candidate: String,
    gram: String,
    lattice: String,
    agree: bool,
}

#[derive(Debug, Serialize)]
struct ConventionResult {
    identities: IdentityReport,
    comparison: Option<OracleComparison>,
    verdicts: Vec<VerdictAgreement>,
    passed: bool,
}

fn verdicts(fk: &FkMap, degree: i64) -> CliResult<Vec<VerdictAgreement>> {
    let lie = fk.lie().clone();
    let m = build_weyl(&lie, 1, &Weight::zero(lie.rank()), degree)?;
    let w = m.highest_weight_vector();
    let mut out = Vec::new();
    for tie in [Tie::PerGenerator, Tie::SingleTau] {
        let c = build_candidate(&m, &w, 2, tie)?;
        let gram = solve(&m, &c)?.solution;
        let lat = fk.solve_candidate(&m, &c)?;
        out.push(VerdictAgreement {
            candidate: format!("{tie:?} solve"),
            gram: format!("{gram:?}"),
            lattice: format!("{lat:?}"),
            agree: gram == lat,
        });
        if let Some((k0, kr)) = reference_kappa(&lie, 2) {
            let perturbed = &k0 + q(1, 2);
            for (label, k0) in [("reference", k0), ("kappa0 + 1/2", perturbed)] {
                let kappa: Vec<Q> = vec![kr.clone(); lie.dim()];
                let v = c.evaluate(&c.unknowns_from_kappa(&k0, &kappa)?);
                let g = verify_null(&m, &v)?.is_null;
                let l = fk.is_null(&v);
                out.push(VerdictAgreement {
                    candidate: format!("{tie:?} at {label}"),
                    gram: if g { "null" } else { "not-null" }.into(),
                    lattice: if l { "null" } else { "not-null" }.into(),
                    agree: g == l,
                });
            }
        }
    }
    Ok(out)
}

pub fn run(cmd: &LatticeCmd) -> CliResult<Outcome> {
    let LatticeCmd::Verify { algebra, convention, compare, compare_degree, max_mode, log } = cmd;
    let lie = parse_algebra(algebra)?;
    let conventions = match convention {
        ConventionArg::A => vec![Convention::A],
        ConventionArg::B => vec![Convention::B],
        ConventionArg::Both => vec![Convention::A, Convention::B],
    };
    let mut results = Vec::new();
    let mut text = String::new();
    for conv in conventions {
        let identities = verify_state_identities(lie.n(), conv)?;
        text.push_str(&identities.proof_log());
        text.push('\n');
        let (comparison, verdicts) = if *compare {
            let fk = FkMap::new(&lie, conv, *compare_degree)?;
            let m = build_weyl(&lie, 1, &Weight::zero(lie.rank()), *compare_degree)?;
            let cmp = fk.compare(&m, *max_mode)?;
            let v = if *compare_degree >= 4 { verdicts(&fk, 4)? } else { Vec::new() };
            (Some(cmp), v)
        } else {
            (None, Vec::new())
        };
        let passed = identities.all_hold
            && comparison.as_ref().is_none_or(|c| c.passed())
            && verdicts.iter().all(|v| v.agree);
        results.push(ConventionResult { identities, comparison, verdicts, passed });
    }
    if let Some(path) = log {
        std::fs::write(path, &text)?;
    }
    let ok = results.iter().all(|r| r.passed);
    let (exit, status) = if ok { (Exit::Ok, "all-hold") } else { (Exit::Refuted, "violated") };
    Ok(Outcome::new(exit, status, serde_json::json!({ "conventions": serde_json::to_value(&results).map_err(|e| std::io::Error::from(e))? })))
}
