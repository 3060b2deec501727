use affine_sle::affine::{build_weyl, ModuleVector, WeylModule};
use affine_sle::lie::{build_sl, LieData, Weight};
use affine_sle::rational::{parse_q, q, Q};
use clap::Args;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] affine_sle::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type CliResult<T> = Result<T, CliError>;

/// Exit-code contract.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Exit {
    Ok = 0,
    Usage = 1,
    Refuted = 2,
    Inconclusive = 3,
}

/// `sl2`, `sl_3`, `SL4` or `A3`.
pub fn parse_algebra(s: &str) -> CliResult<LieData> {
    let t = s.trim().to_ascii_lowercase();
    let n = if let Some(rest) = t.strip_prefix("sl") {
        rest.trim_start_matches('_').parse::<usize>().ok()
    } else if let Some(rest) = t.strip_prefix('a') {
        rest.parse::<usize>().ok().map(|r| r + 1)
    } else {
        None
    };
    match n {
        Some(n) if n >= 2 => Ok(build_sl(n)?),
        _ => Err(CliError::Usage(format!("unknown algebra {s:?}; expected sl<N> with N >= 2"))),
    }
}

pub fn parse_rational(s: &str) -> CliResult<Q> {
    parse_q(s).map_err(|e| CliError::Usage(e.to_string()))
}

/// Known variances `(kappa0, kappa_r)` for the level-1 vacuum at `n = 2`.
pub fn reference_kappa(lie: &LieData, n: i64) -> Option<(Q, Q)> {
    match (lie.n(), n) {
        (2, 2) => Some((q(8, 3), q(1, 1))),
        (3, 2) => Some((q(12, 5), q(4, 5))),
        _ => None,
    }
}

/// `reference`, one value for every generator, or a comma-separated list.
pub fn resolve_kappa(
    lie: &LieData,
    n: i64,
    kappa0: Option<&str>,
    kappa: &str,
) -> CliResult<(Q, Vec<Q>)> {
    let generators = lie.dim();
    let reference = || {
        reference_kappa(lie, n).ok_or_else(|| {
            CliError::Usage(format!("no reference variances for sl{} at n = {n}; pass them explicitly", lie.n()))
        })
    };
    let list = if kappa.trim() == "reference" {
        vec![reference()?.1; generators]
    } else {
        let vals = kappa.split(',').map(parse_rational).collect::<CliResult<Vec<Q>>>()?;
        match vals.len() {
            1 => vec![vals[0].clone(); generators],
            l if l == generators => vals,
            l => return Err(CliError::Usage(format!("expected 1 or {generators} generator variances, got {l}"))),
        }
    };
    let k0 = match kappa0 {
        Some(s) if s.trim() != "reference" => parse_rational(s)?,
        _ => reference()?.0,
    };
    Ok((k0, list))
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ModuleArgs {
    /// Algebra `sl<N>`.
    #[arg(long, default_value = "sl2")]
    pub algebra: String,
    #[arg(long, default_value_t = 1)]
    pub level: i64,
    /// Highest weight: `0`, `L1`, `L1+L2`, or Dynkin labels `1,0`.
    #[arg(long, default_value = "0")]
    pub weight: String,
    /// Index of the top-space basis vector; defaults to the highest-weight vector.
    #[arg(long)]
    pub top: Option<usize>,
}

impl ModuleArgs {
    pub fn build(&self, max_degree: i64) -> CliResult<(WeylModule, ModuleVector)> {
        let lie = parse_algebra(&self.algebra)?;
        let weight = Weight::parse(lie.rank(), &self.weight).map_err(|e| CliError::Usage(e.to_string()))?;
        let m = build_weyl(&lie, self.level, &weight, max_degree)?;
        let w = match self.top {
            None => m.highest_weight_vector(),
            Some(t) if t < m.dim(0) => m.top_vector(t),
            Some(t) => return Err(CliError::Usage(format!("top index {t} out of range 0..{}", m.dim(0)))),
        };
        Ok((m, w))
    }
}
