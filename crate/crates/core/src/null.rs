//! Null-vector candidates
//! `[-2 L_{-2n} + k0/2 L_{-n}^2 + 1/2 sum_r k_r (X_r)_{-n}^2] w`
//! and exact solving for the coefficients.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::affine::{build_weyl, Monomial, ModuleVector, VectorTermJson, WeylModule};
use crate::error::{Error, Result};
use crate::lie::{build_sl, Weight};
use crate::linalg::{solve_from_echelon, Echelon, LinearSolution};
use crate::rational::{format_q, q, qi, Q};

/// How the per-generator coefficients enter the candidate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tie {
    /// One unknown `kappa_r` per orthonormal generator.
    PerGenerator,
    /// A single `tau` multiplying the whole sum over generators.
    SingleTau,
}

/// Affine-linear family `v(x) = constant + sum_i x_i directions[i]`.
#[derive(Debug, Clone)]
pub struct NullCandidate {
    pub n: i64,
    pub tie: Tie,
    pub top: ModuleVector,
    pub unknowns: Vec<String>,
    pub constant: ModuleVector,
    pub directions: Vec<ModuleVector>,
}

impl NullCandidate {
    pub fn degree(&self) -> i64 {
        2 * self.n
    }

    pub fn evaluate(&self, values: &[Q]) -> ModuleVector {
        assert_eq!(values.len(), self.directions.len());
        let mut v = self.constant.clone();
        for (d, x) in self.directions.iter().zip(values) {
            v.add_scaled(d, x);
        }
        v
    }

    /// Expands per-generator values `(k0, k_1, ..)` to this candidate's unknowns.
    /// For a single-tau candidate all `k_r` must agree.
    pub fn unknowns_from_kappa(&self, kappa0: &Q, kappa: &[Q]) -> Result<Vec<Q>> {
        match self.tie {
            Tie::PerGenerator => {
                if kappa.len() + 1 != self.directions.len() {
                    return Err(Error::Config(format!(
                        "expected {} generator variances, got {}",
                        self.directions.len() - 1,
                        kappa.len()
                    )));
                }
                Ok(std::iter::once(kappa0.clone()).chain(kappa.iter().cloned()).collect())
            }
            Tie::SingleTau => {
                let first = kappa.first().ok_or_else(|| Error::Config("missing tau".into()))?;
                if kappa.iter().any(|k| k != first) {
                    return Err(Error::Config("single-tau candidate needs equal generator variances".into()));
                }
                Ok(vec![kappa0.clone(), first.clone()])
            }
        }
    }

    /// Weights (Dynkin labels) carrying components of the family.
    fn weights(&self, m: &WeylModule) -> Vec<Vec<i64>> {
        let set: BTreeSet<Vec<i64>> = std::iter::once(&self.constant)
            .chain(&self.directions)
            .flat_map(|v| v.iter().map(|(mono, _)| m.monomial_weight(mono)))
            .collect();
        set.into_iter().collect()
    }
}

fn weight_component(m: &WeylModule, v: &ModuleVector, weight: &[i64]) -> ModuleVector {
    v.iter()
        .filter(|(mono, _)| m.monomial_weight(mono) == weight)
        .map(|(mono, c)| (mono.clone(), c.clone()))
        .collect()
}

/// Assembles the candidate family on the top vector `w`.
pub fn build_candidate(m: &WeylModule, w: &ModuleVector, n: i64, tie: Tie) -> Result<NullCandidate> {
    if w.is_zero() {
        return Err(Error::ZeroVector);
    }
    if w.homogeneous_degree() != Some(0) {
        return Err(Error::DegreeMismatch("w must lie in the top space".into()));
    }
    if n < 1 {
        return Err(Error::Config(format!("mode depth n must be >= 1, got {n}")));
    }
    if 2 * n > m.max_degree() {
        return Err(Error::TruncationViolation { degree: 2 * n, max: m.max_degree() });
    }
    let constant = m.sugawara(-2 * n, w)?.scaled(&qi(-2));
    let l = m.sugawara(-n, w)?;
    let v0 = m.sugawara(-n, &l)?.scaled(&q(1, 2));
    let mut per_gen = Vec::with_capacity(m.squares().len());
    for r in 0..m.squares().len() {
        per_gen.push(m.squared_generator(r, -n, w)?.scaled(&q(1, 2)));
    }
    let (unknowns, directions) = match tie {
        Tie::PerGenerator => {
            let names = std::iter::once("kappa0".to_string())
                .chain((1..=per_gen.len()).map(|r| format!("kappa{r}")))
                .collect();
            (names, std::iter::once(v0).chain(per_gen).collect())
        }
        Tie::SingleTau => {
            let mut sum = ModuleVector::zero();
            for v in &per_gen {
                sum.add_scaled(v, &qi(1));
            }
            (vec!["kappa0".to_string(), "tau".to_string()], vec![v0, sum])
        }
    };
    Ok(NullCandidate { n, tie, top: w.clone(), unknowns, constant, directions })
}

/// Pairings of a vector against its whole degree slice.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NullCertificate {
    pub degree: i64,
    pub is_null: bool,
    pub pairings_checked: usize,
    pub nonzero_count: usize,
    /// First few nonzero pairings `<u, v>`, as `(u, value)`.
    pub nonzero_pairings: Vec<NonzeroPairing>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NonzeroPairing {
    pub against: VectorTermJson,
    pub value: String,
}

const MAX_LISTED: usize = 8;

/// Decides whether a homogeneous `v` lies in the radical of the contravariant form.
pub fn verify_null(m: &WeylModule, v: &ModuleVector) -> Result<NullCertificate> {
    let degree = match (v.is_zero(), v.homogeneous_degree()) {
        (true, _) => 0,
        (false, Some(d)) => d,
        (false, None) => return Err(Error::DegreeMismatch("vector is not homogeneous".into())),
    };
    if degree > m.max_degree() {
        return Err(Error::TruncationViolation { degree, max: m.max_degree() });
    }
    let mut cert = NullCertificate {
        degree,
        is_null: true,
        pairings_checked: 0,
        nonzero_count: 0,
        nonzero_pairings: Vec::new(),
    };
    let weights: BTreeSet<Vec<i64>> = v.iter().map(|(mono, _)| m.monomial_weight(mono)).collect();
    for wt in weights {
        let basis = m.weight_basis(degree, &wt);
        let vals = m.pair_with(&basis, &weight_component(m, v, &wt));
        cert.pairings_checked += basis.len();
        for (u, x) in basis.iter().zip(vals) {
            if !x.is_zero() {
                cert.is_null = false;
                cert.nonzero_count += 1;
                if cert.nonzero_pairings.len() < MAX_LISTED {
                    cert.nonzero_pairings.push(NonzeroPairing {
                        against: monomial_json(u),
                        value: format_q(&x),
                    });
                }
            }
        }
    }
    Ok(cert)
}

fn monomial_json(u: &Monomial) -> VectorTermJson {
    ModuleVector::basis(u.clone()).to_json().remove(0)
}

/// Exact outcome of the nullity equations for a candidate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub algebra: String,
    pub level: i64,
    pub weight: String,
    pub n: i64,
    pub tie: Tie,
    pub unknowns: Vec<String>,
    #[serde(flatten)]
    pub solution: LinearSolution,
    /// `Some(true)` when a unique solution has all entries strictly positive.
    pub positive: Option<bool>,
    /// Unique solution with some non-positive entry: not a set of variances.
    pub algebraic_only: bool,
    pub equations: usize,
    pub rank_coefficients: usize,
    pub rank_augmented: usize,
    /// Nullity check of the substituted vector, for unique solutions.
    pub certificate: Option<NullCertificate>,
}

impl SolveReport {
    pub fn values(&self) -> Option<&[Q]> {
        match &self.solution {
            LinearSolution::Unique { values } => Some(values),
            _ => None,
        }
    }

    pub fn status(&self) -> &'static str {
        match self.solution {
            LinearSolution::Unique { .. } => "unique-solution",
            LinearSolution::Family { .. } => "family",
            LinearSolution::Infeasible => "infeasible",
        }
    }
}

/// Resumable state of the equation sweep.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SweepState {
    /// Index into the sorted list of weights still being processed.
    pub block: usize,
    /// Basis monomials of that block already paired.
    pub offset: usize,
    pub equations: usize,
    /// Echelon rows as decimal integers.
    pub rows: Vec<Vec<String>>,
}

/// Feeds the nullity equations `<u, v(x)> = 0` into an echelon form, block by
/// block; `on_chunk` sees the state after every chunk of `chunk` equations.
pub fn sweep_equations(
    m: &WeylModule,
    c: &NullCandidate,
    start: SweepState,
    chunk: usize,
    mut on_chunk: impl FnMut(&SweepState) -> Result<()>,
) -> Result<(Echelon, usize)> {
    let k = c.directions.len();
    let mut ech = Echelon::from_strings(k + 1, &start.rows)
        .ok_or_else(|| Error::Parse("corrupt echelon rows in checkpoint".into()))?;
    let mut state = start;
    let weights = c.weights(m);
    let chunk = chunk.max(1);
    while state.block < weights.len() {
        let wt = &weights[state.block];
        let basis = m.weight_basis(c.degree(), wt);
        let constant = weight_component(m, &c.constant, wt);
        let dirs: Vec<ModuleVector> = c.directions.iter().map(|d| weight_component(m, d, wt)).collect();
        while state.offset < basis.len() {
            let end = (state.offset + chunk).min(basis.len());
            let part = &basis[state.offset..end];
            let rhs = m.pair_with(part, &constant);
            let cols: Vec<Vec<Q>> = dirs.iter().map(|d| m.pair_with(part, d)).collect();
            for i in 0..part.len() {
                let mut row: Vec<Q> = cols.iter().map(|col| col[i].clone()).collect();
                row.push(-rhs[i].clone());
                ech.insert_rational(&row);
            }
            state.equations += part.len();
            state.offset = end;
            state.rows = ech.to_strings();
            on_chunk(&state)?;
        }
        state.block += 1;
        state.offset = 0;
    }
    Ok((ech, state.equations))
}

fn report_from(m: &WeylModule, c: &NullCandidate, ech: &Echelon, equations: usize) -> Result<SolveReport> {
    let k = c.directions.len();
    let pivots = ech.pivots();
    let rank_coefficients = pivots.iter().filter(|&&p| p < k).count();
    let solution = solve_from_echelon(ech);
    let (positive, algebraic_only, certificate) = match &solution {
        LinearSolution::Unique { values } => {
            let pos = values.iter().all(|x| x.is_positive());
            let cert = verify_null(m, &c.evaluate(values))?;
            (Some(pos), !pos, Some(cert))
        }
        _ => (None, false, None),
    };
    Ok(SolveReport {
        algebra: format!("sl{}", m.lie().n()),
        level: m.level(),
        weight: m.weight().to_string(),
        n: c.n,
        tie: c.tie,
        unknowns: c.unknowns.clone(),
        solution,
        positive,
        algebraic_only,
        equations,
        rank_coefficients,
        rank_augmented: ech.rank(),
        certificate,
    })
}

/// Solves `<u, v(x)> = 0` for all `u` of the candidate's degree.
pub fn solve(m: &WeylModule, c: &NullCandidate) -> Result<SolveReport> {
    let (ech, equations) = sweep_equations(m, c, SweepState::default(), usize::MAX, |_| Ok(()))?;
    report_from(m, c, &ech, equations)
}

/// Options for [`conjecture_scan`].
#[derive(Debug, Clone)]
pub struct ScanOptions {
    /// Values of `n` in `sl_n`.
    pub algebras: Vec<usize>,
    pub mode_depth: i64,
    pub checkpoint: Option<PathBuf>,
    /// Equations per checkpoint write.
    pub chunk: usize,
    /// Refuse slices larger than this.
    pub max_slice: Option<usize>,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions { algebras: vec![2, 3], mode_depth: 2, checkpoint: None, chunk: 200, max_slice: None }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ScanCheckpoint {
    pub algebras: Vec<usize>,
    pub mode_depth: i64,
    pub completed: Vec<SolveReport>,
    /// Partial sweep of the first algebra without a report.
    pub current: Option<SweepState>,
}

impl ScanCheckpoint {
    pub fn load(path: &Path) -> Result<Option<Self>> {
        match std::fs::read_to_string(path) {
            Ok(s) => Ok(Some(serde_json::from_str(&s)?)),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e.into()),
        }
    }

    /// Atomic write via a temporary file and rename.
    pub fn save(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, serde_json::to_string(self)?)?;
        std::fs::rename(&tmp, path)?;
        Ok(())
    }
}

/// Single-tau candidates on the vacuum of `L_{sl_n,1}` for each requested `n`,
/// resuming from and updating the checkpoint file when one is given.
pub fn conjecture_scan(opts: &ScanOptions) -> Result<Vec<SolveReport>> {
    let mut cp = match &opts.checkpoint {
        Some(p) => ScanCheckpoint::load(p)?.unwrap_or_default(),
        None => ScanCheckpoint::default(),
    };
    if cp.algebras != opts.algebras || cp.mode_depth != opts.mode_depth {
        cp = ScanCheckpoint {
            algebras: opts.algebras.clone(),
            mode_depth: opts.mode_depth,
            ..Default::default()
        };
    }
    while cp.completed.len() < opts.algebras.len() {
        let rank_n = opts.algebras[cp.completed.len()];
        let lie = build_sl(rank_n)?;
        let degree = 2 * opts.mode_depth;
        let m = build_weyl(&lie, 1, &Weight::zero(lie.rank()), degree)?;
        if let Some(limit) = opts.max_slice {
            if m.dim(degree) > limit {
                return Err(Error::ResourceLimit(format!(
                    "sl{rank_n} degree-{degree} slice has {} vectors (limit {limit})",
                    m.dim(degree)
                )));
            }
        }
        let c = build_candidate(&m, &m.highest_weight_vector(), opts.mode_depth, Tie::SingleTau)?;
        let start = cp.current.take().unwrap_or_default();
        let (ech, equations) = sweep_equations(&m, &c, start, opts.chunk, |state| {
            if let Some(path) = &opts.checkpoint {
                cp.current = Some(state.clone());
                cp.save(path)?;
            }
            Ok(())
        })?;
        cp.current = None;
        cp.completed.push(report_from(&m, &c, &ech, equations)?);
        if let Some(path) = &opts.checkpoint {
            cp.save(path)?;
        }
    }
    Ok(cp.completed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::build_sl;

    fn vacuum(n: usize, d: i64) -> WeylModule {
        let lie = build_sl(n).unwrap();
        build_weyl(&lie, 1, &Weight::zero(lie.rank()), d).unwrap()
    }

    #[test]
    fn sl2_per_generator_unique() {
        let m = vacuum(2, 4);
        let c = build_candidate(&m, &m.highest_weight_vector(), 2, Tie::PerGenerator).unwrap();
        assert_eq!(c.unknowns, ["kappa0", "kappa1", "kappa2", "kappa3"]);
        let r = solve(&m, &c).unwrap();
        assert_eq!(r.values().unwrap(), &[q(8, 3), qi(1), qi(1), qi(1)]);
        assert_eq!(r.positive, Some(true));
        assert!(r.certificate.as_ref().unwrap().is_null);
    }

    #[test]
    fn sl2_single_tau_agrees_with_per_generator() {
        let m = vacuum(2, 4);
        let c = build_candidate(&m, &m.highest_weight_vector(), 2, Tie::SingleTau).unwrap();
        let r = solve(&m, &c).unwrap();
        assert_eq!(r.values().unwrap(), &[q(8, 3), qi(1)]);
    }

    #[test]
    fn perturbed_coefficients_are_refuted() {
        let m = vacuum(2, 4);
        let c = build_candidate(&m, &m.highest_weight_vector(), 2, Tie::PerGenerator).unwrap();
        let v = c.evaluate(&[q(11, 3), qi(1), qi(1), qi(1)]);
        let cert = verify_null(&m, &v).unwrap();
        assert!(!cert.is_null);
        assert!(cert.nonzero_count > 0 && !cert.nonzero_pairings.is_empty());
        assert!(verify_null(&m, &ModuleVector::zero()).unwrap().is_null);
    }

    #[test]
    fn spin_half_has_no_solution() {
        let lie = build_sl(2).unwrap();
        let m = build_weyl(&lie, 1, &Weight(vec![1]), 4).unwrap();
        for t in 0..2 {
            let c = build_candidate(&m, &m.top_vector(t), 2, Tie::PerGenerator).unwrap();
            let r = solve(&m, &c).unwrap();
            assert_eq!(r.status(), "infeasible");
            assert!(r.rank_augmented > r.rank_coefficients);
        }
    }

    #[test]
    fn candidate_errors() {
        let m = vacuum(2, 3);
        let w = m.highest_weight_vector();
        assert!(matches!(
            build_candidate(&m, &w, 2, Tie::PerGenerator),
            Err(Error::TruncationViolation { degree: 4, max: 3 })
        ));
        assert!(matches!(build_candidate(&m, &ModuleVector::zero(), 1, Tie::PerGenerator), Err(Error::ZeroVector)));
        let mixed = m.sugawara(-2, &w).unwrap().sub(&w);
        assert!(matches!(verify_null(&m, &mixed), Err(Error::DegreeMismatch(_))));
    }

    #[test]
    fn n_equal_one_runs() {
        let m = vacuum(2, 2);
        let c = build_candidate(&m, &m.highest_weight_vector(), 1, Tie::PerGenerator).unwrap();
        let r = solve(&m, &c).unwrap();
        assert!(r.equations > 0);
        if let Some(v) = r.values() {
            assert!(verify_null(&m, &c.evaluate(v)).unwrap().is_null);
        }
    }

    #[test]
    fn checkpointed_scan_resumes_to_same_result() {
        let dir = std::env::temp_dir().join(format!("null-scan-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("scan.json");
        let _ = std::fs::remove_file(&path);
        let opts = ScanOptions { algebras: vec![2], checkpoint: Some(path.clone()), chunk: 3, ..Default::default() };
        let full = conjecture_scan(&opts).unwrap();
        // fake an interruption after the first few chunks
        let m = vacuum(2, 4);
        let c = build_candidate(&m, &m.highest_weight_vector(), 2, Tie::SingleTau).unwrap();
        let mut snapshots = Vec::new();
        sweep_equations(&m, &c, SweepState::default(), 3, |s| {
            snapshots.push(s.clone());
            Ok(())
        })
        .unwrap();
        let cp = ScanCheckpoint {
            algebras: vec![2],
            mode_depth: 2,
            completed: vec![],
            current: Some(snapshots[1].clone()),
        };
        cp.save(&path).unwrap();
        let resumed = conjecture_scan(&opts).unwrap();
        assert_eq!(full, resumed);
        assert_eq!(resumed[0].values().unwrap(), &[q(8, 3), qi(1)]);
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
