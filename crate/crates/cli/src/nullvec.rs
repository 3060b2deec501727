use std::path::PathBuf;

use affine_sle::affine::VectorTermJson;
use affine_sle::null::{build_candidate, conjecture_scan, solve, verify_null, NullCertificate, ScanOptions, Tie};
use affine_sle::rational::{format_q, Q};
use clap::{Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::common::{reference_kappa, resolve_kappa, CliError, CliResult, Exit, ModuleArgs};
use crate::report::Outcome;

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TieArg {
    PerGenerator,
    SingleTau,
}

impl From<TieArg> for Tie {
    fn from(t: TieArg) -> Tie {
        match t {
            TieArg::PerGenerator => Tie::PerGenerator,
            TieArg::SingleTau => Tie::SingleTau,
        }
    }
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case", tag = "subcommand")]
pub enum NullvecCmd {
    /// Solve the nullity equations for the variances.
    Solve {
        #[command(flatten)]
        #[serde(flatten)]
        module: ModuleArgs,
        #[arg(long, default_value_t = 2)]
        n: i64,
        #[arg(long, value_enum, default_value = "per-generator")]
        tie: TieArg,
    },
    /// Check nullity of the candidate at given variances.
    Verify {
        #[command(flatten)]
        #[serde(flatten)]
        module: ModuleArgs,
        #[arg(long, default_value_t = 2)]
        n: i64,
        #[arg(long, value_enum, default_value = "per-generator")]
        tie: TieArg,
        /// `p/q`, or `reference`.
        #[arg(long, default_value = "reference")]
        kappa0: String,
        /// `reference`, a single `p/q` for every generator, or a comma-separated list.
        #[arg(long, default_value = "reference")]
        kappa: String,
    },
    /// Single-tau candidates on the level-1 vacuum for several sl_N.
    Scan {
        /// Values of N.
        #[arg(long, value_delimiter = ',', default_value = "2,3")]
        algebras: Vec<usize>,
        #[arg(long, default_value_t = 2)]
        n: i64,
        /// Resumable progress file.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Equations between checkpoint writes.
        #[arg(long, default_value_t = 200)]
        chunk: usize,
        /// Refuse degree slices with more vectors than this.
        #[arg(long)]
        max_slice: Option<usize>,
    },
    /// Gram matrix of one degree slice.
    Gram {
        #[command(flatten)]
        #[serde(flatten)]
        module: ModuleArgs,
        #[arg(long, default_value_t = 2)]
        degree: i64,
    },
}

fn provenance(lie_n: usize, n: i64, tie: Tie, values: Option<&[Q]>) -> serde_json::Value {
    let lie = match affine_sle::lie::build_sl(lie_n) {
        Ok(l) => l,
        Err(_) => return serde_json::Value::Null,
    };
    let Some((k0, kr)) = reference_kappa(&lie, n) else {
        return serde_json::Value::Null;
    };
    let expected: Vec<Q> = match tie {
        Tie::PerGenerator => std::iter::once(k0).chain(std::iter::repeat_n(kr, lie.dim())).collect(),
        Tie::SingleTau => vec![k0, kr],
    };
    json!({
        "reference_values": expected.iter().map(format_q).collect::<Vec<_>>(),
        "matches_reference": values == Some(&expected[..]),
    })
}

#[derive(Serialize)]
struct VerifyResult<'a> {
    unknowns: &'a [String],
    values: Vec<String>,
    certificate: NullCertificate,
    vector: Vec<VectorTermJson>,
}

pub fn run(cmd: &NullvecCmd) -> CliResult<Outcome> {
    match cmd {
        NullvecCmd::Solve { module, n, tie } => {
            let (m, w) = module.build(2 * n)?;
            let c = build_candidate(&m, &w, *n, (*tie).into())?;
            let report = solve(&m, &c)?;
            let exit = match report.status() {
                "unique-solution" => Exit::Ok,
                "infeasible" => Exit::Refuted,
                _ => Exit::Inconclusive,
            };
            let prov = if module.level == 1 && module.weight.trim() == "0" {
                provenance(m.lie().n(), *n, (*tie).into(), report.values())
            } else {
                serde_json::Value::Null
            };
            let mut result = serde_json::to_value(&report).map_err(io)?;
            result["provenance"] = prov;
            Ok(Outcome::new(exit, report.status(), result))
        }
        NullvecCmd::Verify { module, n, tie, kappa0, kappa } => {
            let (m, w) = module.build(2 * n)?;
            let c = build_candidate(&m, &w, *n, (*tie).into())?;
            let (k0, kr) = resolve_kappa(m.lie(), *n, Some(kappa0), kappa)?;
            let values = c.unknowns_from_kappa(&k0, &kr).map_err(|e| CliError::Usage(e.to_string()))?;
            let v = c.evaluate(&values);
            let certificate = verify_null(&m, &v)?;
            let (exit, status) = if certificate.is_null { (Exit::Ok, "null") } else { (Exit::Refuted, "not-null") };
            let result = VerifyResult {
                unknowns: &c.unknowns,
                values: values.iter().map(format_q).collect(),
                certificate,
                vector: v.to_json(),
            };
            Ok(Outcome::new(exit, status, serde_json::to_value(&result).map_err(io)?))
        }
        NullvecCmd::Scan { algebras, n, checkpoint, chunk, max_slice } => {
            if algebras.iter().any(|&a| a < 2) || *chunk == 0 {
                return Err(CliError::Usage("algebras need N >= 2 and chunk >= 1".into()));
            }
            let opts = ScanOptions {
                algebras: algebras.clone(),
                mode_depth: *n,
                checkpoint: checkpoint.clone(),
                chunk: *chunk,
                max_slice: *max_slice,
            };
            let reports = conjecture_scan(&opts)?;
            let summary: Vec<_> = reports
                .iter()
                .map(|r| {
                    json!({
                        "algebra": r.algebra,
                        "status": r.status(),
                        "values": r.values().map(|v| v.iter().map(format_q).collect::<Vec<_>>()),
                    })
                })
                .collect();
            Ok(Outcome::new(
                Exit::Ok,
                "completed",
                json!({ "summary": summary, "reports": serde_json::to_value(&reports).map_err(io)? }),
            ))
        }
        NullvecCmd::Gram { module, degree } => {
            if *degree < 0 {
                return Err(CliError::Usage("degree must be >= 0".into()));
            }
            let (m, _) = module.build(*degree)?;
            let g = m.gram(*degree);
            let result = json!({
                "dim": g.dim(),
                "rank": g.rank(),
                "symmetric": g.is_symmetric(),
                "gram": serde_json::to_value(&g).map_err(io)?,
            });
            Ok(Outcome::new(Exit::Ok, "computed", result))
        }
    }
}

fn io(e: serde_json::Error) -> CliError {
    CliError::Io(e.into())
}
