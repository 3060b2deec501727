use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;

use affine_sle::rational::to_f64;
use affine_sle::sde::{loewner_convergence, martingale_mc, run_trace, svg_plot, MartingaleConfig, TraceConfig};
use clap::Subcommand;
use serde::Serialize;
use serde_json::json;

use crate::common::{parse_algebra, resolve_kappa, CliError, CliResult, Exit, ModuleArgs};
use crate::report::Outcome;

/// Below this the pathwise `g` residual is rounding noise and no slope is fitted.
const ROUNDING_LEVEL: f64 = 1e-10;

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case", tag = "subcommand")]
pub enum SdeCmd {
    /// Simulate one path of `f_t`, `theta_t` and `g_t`.
    Trace {
        #[arg(long, default_value = "sl2")]
        algebra: String,
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Variance of the Virasoro channel (`p/q` or decimal), or `reference`.
        #[arg(long, default_value = "reference")]
        kappa0: String,
        #[arg(long, default_value = "reference")]
        kappa: String,
        #[arg(long, default_value_t = 0.5)]
        t: f64,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        /// Number of retained Laurent coefficients below the leading one.
        #[arg(long, default_value_t = 12)]
        depth: usize,
        #[arg(long, env = "AFFINE_SLE_SEED", default_value_t = 1)]
        seed: u64,
        /// Keep every `stride`-th step in the CSV.
        #[arg(long, default_value_t = 1)]
        stride: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Fit the strong order of the `g` residual over `dt = T / 2^level`.
        #[arg(long)]
        check_loewner: bool,
        #[arg(long, value_delimiter = ',', default_value = "8,9,10,11,12")]
        levels: Vec<u32>,
        #[arg(long, default_value_t = 50)]
        paths: usize,
    },
    /// Monte Carlo test of the martingale property of `G_t w`.
    Martingale {
        #[command(flatten)]
        #[serde(flatten)]
        module: ModuleArgs,
        #[arg(long, default_value_t = 2)]
        n: i64,
        #[arg(long, default_value = "reference")]
        kappa0: String,
        #[arg(long, default_value = "reference")]
        kappa: String,
        #[arg(long, default_value_t = 0.5)]
        t: f64,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        #[arg(long, default_value_t = 10_000)]
        paths: usize,
        /// Degree truncation of the module.
        #[arg(long, default_value_t = 4)]
        max_degree: i64,
        #[arg(long, env = "AFFINE_SLE_SEED", default_value_t = 1)]
        seed: u64,
    },
}

pub fn run(cmd: &SdeCmd) -> CliResult<Outcome> {
    match cmd {
        SdeCmd::Trace {
            algebra,
            n,
            kappa0,
            kappa,
            t,
            dt,
            depth,
            seed,
            stride,
            csv,
            svg,
            check_loewner,
            levels,
            paths,
        } => {
            let lie = parse_algebra(algebra)?;
            if *n == 0 || !(*dt > 0.0) || !(*t >= 0.0) {
                return Err(CliError::Usage("need n >= 1, dt > 0 and t >= 0".into()));
            }
            let (k0, kr) = resolve_kappa(&lie, 2, Some(kappa0), kappa)?;
            let cfg = TraceConfig {
                n: *n,
                kappa0: to_f64(&k0),
                kappa: kr.iter().map(to_f64).collect(),
                t_final: *t,
                dt: *dt,
                depth: *depth,
                seed: *seed,
                stride: *stride,
            };
            let trace = run_trace(&cfg)?;
            if let Some(path) = csv {
                trace.write_csv(BufWriter::new(File::create(path)?))?;
            }
            if let Some(path) = svg {
                std::fs::write(path, svg_plot(&trace, 3))?;
            }
            let max_residual = trace.rows.iter().map(|r| r.g_residual).fold(0.0, f64::max);
            let mut result = json!({
                "rows": trace.rows.len(),
                "censored_at": trace.censored_at,
                "censoring_rate": if trace.censored_at.is_some() { 1.0 } else { 0.0 },
                "final": trace.rows.last(),
                "max_g_residual": max_residual,
            });
            let mut exit = Exit::Ok;
            let mut status = if trace.censored_at.is_some() { "censored" } else { "completed" };
            if *check_loewner {
                if levels.len() < 2 {
                    return Err(CliError::Usage("need at least two grid levels".into()));
                }
                let conv = loewner_convergence(*n, cfg.kappa0, *t, levels, *paths, *depth, *seed)?;
                let rounding = conv.mean_residuals.iter().all(|r| *r < ROUNDING_LEVEL);
                let within = (conv.slope - 0.5).abs() <= 0.1;
                status = if rounding {
                    "exact-to-rounding"
                } else if within {
                    "strong-order-half"
                } else {
                    exit = Exit::Refuted;
                    "order-mismatch"
                };
                result["loewner"] = serde_json::to_value(&conv).map_err(std::io::Error::from)?;
                result["loewner"]["rounding_level"] = json!(rounding);
            }
            Ok(Outcome::new(exit, status, result).with_seed(*seed))
        }
        SdeCmd::Martingale { module, n, kappa0, kappa, t, dt, paths, max_degree, seed } => {
            let (m, w) = module.build(*max_degree)?;
            let (k0, kr) = resolve_kappa(m.lie(), *n, Some(kappa0), kappa)?;
            let cfg = MartingaleConfig {
                n: *n,
                kappa0: k0,
                kappa: kr,
                t_final: *t,
                dt: *dt,
                paths: *paths,
                max_degree: *max_degree,
                seed: *seed,
            };
            let report = martingale_mc(&m, &w, &cfg)?;
            let (exit, status) = if report.max_z < 3.0 {
                (Exit::Ok, "martingale")
            } else if report.max_z >= 5.0 {
                (Exit::Refuted, "not-martingale")
            } else {
                (Exit::Inconclusive, "inconclusive-increase-paths")
            };
            Ok(Outcome::new(exit, status, serde_json::to_value(&report).map_err(std::io::Error::from)?)
                .with_seed(*seed))
        }
    }
}
