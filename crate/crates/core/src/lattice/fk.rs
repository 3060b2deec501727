//! Chevalley generators of `sl_n^` at level 1 acting on `V_Q`.

use std::collections::HashMap;
use std::sync::Mutex;

use serde::Serialize;

use super::{Convention, FockKey, FockSpace, LatticeVector, RootLattice};
use crate::affine::{CheckReport, ModuleVector, Monomial, WeylModule};
use crate::error::{Error, Result};
use crate::lie::{BasisKind, LieData};
use crate::linalg::{solve_from_echelon, Echelon, LinearSolution};
use crate::null::NullCandidate;
use crate::rational::{qi, Q};

/// `E_i -> Gamma_{a_i}`, `H_i -> alpha_i`, `F_i -> Gamma_{-a_i}`, with
/// non-simple root vectors fixed by the brackets of the matrix units.
#[derive(Debug)]
pub struct FkMap {
    lie: LieData,
    space: FockSpace,
    /// Signs `s` with `E_root -> s Gamma_root`.
    e_signs: Vec<i64>,
    /// Signs with `F_root -> s Gamma_{-root}`.
    f_signs: Vec<i64>,
    image_cache: Mutex<HashMap<Monomial, LatticeVector>>,
}

impl FkMap {
    pub fn new(lie: &LieData, convention: Convention, max_degree: i64) -> Result<Self> {
        let lattice = RootLattice::type_a(lie.rank())?;
        let space = FockSpace::new(lattice, convention, max_degree);
        let roots = lie.roots();
        let mut e_signs = vec![0i64; roots.len()];
        let mut f_signs = vec![0i64; roots.len()];
        // roots are ordered by height, so shorter pieces come first
        for (r, root) in roots.iter().enumerate() {
            if root.height() == 1 {
                e_signs[r] = 1;
                f_signs[r] = 1;
                continue;
            }
            let head = lie.root_index(root.row, root.col - 1).expect("root");
            let tail = lie.root_index(root.col - 1, root.col).expect("root");
            let (a, b) = (&roots[head].coords, &roots[tail].coords);
            let eps = space.cocycle().sign(a, b);
            // E_{ij} = [E_{i,j-1}, E_{j-1,j}],  F_{ij} = [F_{j-1,j}, F_{i,j-1}]
            e_signs[r] = e_signs[head] * e_signs[tail] * eps;
            f_signs[r] = f_signs[tail] * f_signs[head] * space.cocycle().sign(b, a);
        }
        Ok(FkMap {
            lie: lie.clone(),
            space,
            e_signs,
            f_signs,
            image_cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn space(&self) -> &FockSpace {
        &self.space
    }

    pub fn lie(&self) -> &LieData {
        &self.lie
    }

    /// `(root index, sign)` attached to a root vector; `None` for Cartan elements.
    pub fn root_sign(&self, a: usize) -> Option<(Vec<i64>, i64)> {
        match self.lie.kind(a) {
            BasisKind::E(r) => Some((self.lie.roots()[r].coords.clone(), self.e_signs[r])),
            BasisKind::F(r) => {
                Some((self.lie.roots()[r].coords.iter().map(|x| -x).collect(), self.f_signs[r]))
            }
            BasisKind::H(_) => None,
        }
    }

    /// Image of the affine mode `Y_{a,m}`.
    pub fn act(&self, a: usize, m: i64, v: &LatticeVector) -> Result<LatticeVector> {
        match self.lie.kind(a) {
            BasisKind::H(i) => self.space.heisenberg_mode(i, m, v),
            _ => {
                let (beta, s) = self.root_sign(a).expect("root vector");
                Ok(self.space.vertex_mode(&beta, m, v)?.scaled(&qi(s)))
            }
        }
    }

    pub(crate) fn act_unchecked(&self, a: usize, m: i64, v: &LatticeVector) -> LatticeVector {
        match self.lie.kind(a) {
            BasisKind::H(i) => {
                let mut e = vec![0; self.lie.rank()];
                e[i] = 1;
                self.space.heisenberg_unchecked(&e, m, v)
            }
            _ => {
                let (beta, s) = self.root_sign(a).expect("root vector");
                self.space.vertex_unchecked(&beta, m, v).scaled(&qi(s))
            }
        }
    }

    fn fits(&self, k: &FockKey, lowerings: &[i64]) -> bool {
        let d = self.space.degree(k);
        lowerings.iter().all(|&m| d - m <= self.space.max_degree())
    }

    /// Affine relations at level 1 for `|m|, |n| <= max_mode` on every basis
    /// state up to `max_degree`.
    pub fn verify_relations(&self, max_degree: i64, max_mode: i64) -> CheckReport {
        let mut rep = CheckReport::new("lattice-affine");
        let dim = self.lie.dim();
        for d in 0..=max_degree.min(self.space.max_degree()) {
            for k in self.space.basis(d) {
                let v = LatticeVector::basis(k.clone());
                for m in -max_mode..=max_mode {
                    for n in -max_mode..=max_mode {
                        if !self.fits(k, &[m, n, m + n]) {
                            continue;
                        }
                        for x in 0..dim {
                            let xv = self.act_unchecked(x, m, &v);
                            for y in 0..dim {
                                if (x, m) >= (y, n) {
                                    continue;
                                }
                                let lhs = self
                                    .act_unchecked(x, m, &self.act_unchecked(y, n, &v))
                                    .sub(&self.act_unchecked(y, n, &xv));
                                let mut rhs = LatticeVector::zero();
                                for &(z, f) in self.lie.bracket(x, y) {
                                    rhs.add_scaled(&self.act_unchecked(z, m + n, &v), &qi(f));
                                }
                                if m + n == 0 {
                                    rhs.add_scaled(&v, &qi(m * self.lie.form(x, y)));
                                }
                                rep.record(lhs == rhs, || {
                                    format!(
                                        "[{}_{m}, {}_{n}] on {k}",
                                        self.lie.label(x),
                                        self.lie.label(y)
                                    )
                                });
                            }
                        }
                    }
                }
            }
        }
        rep
    }

    /// Sugawara modes assembled from the images of the Chevalley currents.
    pub fn sugawara(&self, m: i64, v: &LatticeVector) -> LatticeVector {
        let cas = crate::lie::squared_table(&self.lie).casimir_tensor();
        let d = v.iter().map(|(k, _)| self.space.degree(k)).max().unwrap_or(0);
        let mut acc = LatticeVector::zero();
        for (a, b, c) in &cas {
            for j in (m - d)..=-1 {
                let inner = self.act_unchecked(*b, m - j, v);
                acc.add_scaled(&self.act_unchecked(*a, j, &inner), c);
            }
            for j in 0..=d {
                let inner = self.act_unchecked(*a, j, v);
                acc.add_scaled(&self.act_unchecked(*b, m - j, &inner), c);
            }
        }
        acc.scaled(&(Q::from_integer(1.into()) / qi(2 * (1 + self.lie.dual_coxeter()))))
    }

    /// Sugawara modes from the currents agree with the free-boson Virasoro
    /// modes on all states up to `max_degree`.
    pub fn verify_sugawara(&self, max_degree: i64, max_mode: i64) -> CheckReport {
        let mut rep = CheckReport::new("lattice-sugawara");
        for d in 0..=max_degree.min(self.space.max_degree()) {
            for k in self.space.basis(d) {
                let v = LatticeVector::basis(k.clone());
                for m in -max_mode..=max_mode {
                    if !self.fits(k, &[m]) {
                        continue;
                    }
                    let ok = self.sugawara(m, &v) == self.space.free_virasoro_unchecked(m, &v);
                    rep.record(ok, || format!("L_{m} on {k}"));
                }
            }
        }
        rep
    }

    /// `L_0 = degree` on every basis state.
    pub fn verify_l0(&self) -> CheckReport {
        let mut rep = CheckReport::new("lattice-l0");
        for d in 0..=self.space.max_degree() {
            for k in self.space.basis(d) {
                let v = LatticeVector::basis(k.clone());
                rep.record(self.space.free_virasoro_unchecked(0, &v) == v.scaled(&qi(d)), || {
                    format!("L_0 on {k}")
                });
            }
        }
        rep
    }

    /// Image of a PBW monomial on the vacuum: the leftmost letter acts last.
    pub fn image_monomial(&self, mono: &Monomial) -> LatticeVector {
        if mono.letters.is_empty() {
            return self.space.vacuum();
        }
        if let Some(v) = self.image_cache.lock().unwrap().get(mono) {
            return v.clone();
        }
        let rest = Monomial { letters: mono.letters[1..].to_vec(), top: mono.top };
        let inner = self.image_monomial(&rest);
        let first = mono.letters[0];
        let v = self.act_unchecked(first.generator, first.mode, &inner);
        self.image_cache.lock().unwrap().insert(mono.clone(), v.clone());
        v
    }

    /// The map from the vacuum Weyl module onto `V_Q`.
    pub fn image(&self, v: &ModuleVector) -> LatticeVector {
        let mut out = LatticeVector::zero();
        for (mono, c) in v.iter() {
            out.add_scaled(&self.image_monomial(mono), c);
        }
        out
    }

    fn check_module(&self, m: &WeylModule) -> Result<()> {
        if m.level() != 1 || m.weight().0.iter().any(|x| *x != 0) || m.lie().n() != self.lie.n() {
            return Err(Error::Config("lattice comparison needs the level-1 vacuum module of the same algebra".into()));
        }
        if m.max_degree() > self.space.max_degree() {
            return Err(Error::TruncationViolation { degree: m.max_degree(), max: self.space.max_degree() });
        }
        Ok(())
    }

    /// Compares the two realizations degree by degree.
    pub fn compare(&self, m: &WeylModule, max_mode: i64) -> Result<OracleComparison> {
        self.check_module(m)?;
        let mut modes = CheckReport::new("intertwining");
        let mut virasoro = CheckReport::new("virasoro-intertwining");
        let mut weyl_dims = Vec::new();
        let mut image_ranks = Vec::new();
        let mut gram_ranks = Vec::new();
        let mut lattice_dims = Vec::new();
        for d in 0..=m.max_degree() {
            let basis = m.basis(d);
            let images: Vec<LatticeVector> = basis.iter().map(|b| self.image_monomial(b)).collect();
            for (b, img) in basis.iter().zip(&images) {
                let v = ModuleVector::basis(b.clone());
                for mode in -max_mode..=max_mode {
                    if d - mode > m.max_degree() || d - mode < 0 {
                        continue;
                    }
                    for a in 0..self.lie.dim() {
                        let lhs = self.image(&m.affine(a, mode, &v)?);
                        let rhs = self.act_unchecked(a, mode, img);
                        modes.record(lhs == rhs, || format!("{}_{mode} on {b:?}", self.lie.label(a)));
                    }
                    let lhs = self.image(&m.sugawara(mode, &v)?);
                    let rhs = self.space.free_virasoro_unchecked(mode, img);
                    virasoro.record(lhs == rhs, || format!("L_{mode} on {b:?}"));
                }
            }
            weyl_dims.push(basis.len());
            image_ranks.push(lattice_rank(&self.space, d, &images));
            gram_ranks.push(m.quotient_dim(d));
            lattice_dims.push(self.space.dim(d));
        }
        Ok(OracleComparison {
            algebra: format!("sl{}", self.lie.n()),
            convention: self.space.cocycle().convention(),
            weyl_dims,
            gram_ranks,
            image_ranks,
            lattice_dims,
            modes,
            virasoro,
        })
    }

    /// Nullity verdict in `V_Q`: the image vanishes.
    pub fn is_null(&self, v: &ModuleVector) -> bool {
        self.image(v).is_zero()
    }

    /// Solves the candidate's nullity equations coefficientwise in `V_Q`.
    pub fn solve_candidate(&self, m: &WeylModule, c: &NullCandidate) -> Result<LinearSolution> {
        self.check_module(m)?;
        let constant = self.image(&c.constant);
        let dirs: Vec<LatticeVector> = c.directions.iter().map(|d| self.image(d)).collect();
        let mut keys: Vec<&FockKey> = constant.iter().map(|(k, _)| k).collect();
        for d in &dirs {
            keys.extend(d.iter().map(|(k, _)| k));
        }
        keys.sort();
        keys.dedup();
        let mut ech = Echelon::new(dirs.len() + 1);
        for k in keys {
            let mut row: Vec<Q> = dirs.iter().map(|d| d.coefficient(k)).collect();
            row.push(-constant.coefficient(k));
            ech.insert_rational(&row);
        }
        Ok(solve_from_echelon(&ech))
    }
}

fn lattice_rank(space: &FockSpace, degree: i64, vs: &[LatticeVector]) -> usize {
    let keys = space.basis(degree);
    let index: HashMap<&FockKey, usize> = keys.iter().enumerate().map(|(i, k)| (k, i)).collect();
    let mut ech = Echelon::new(keys.len());
    for v in vs {
        let mut row = vec![Q::from_integer(0.into()); keys.len()];
        for (k, c) in v.iter() {
            row[index[k]] = c.clone();
        }
        ech.insert_rational(&row);
        if ech.rank() == keys.len() {
            break;
        }
    }
    ech.rank()
}

/// Side-by-side data of the Weyl-module and lattice realizations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleComparison {
    pub algebra: String,
    pub convention: Convention,
    pub weyl_dims: Vec<usize>,
    /// Ranks of the Gram slices.
    pub gram_ranks: Vec<usize>,
    /// Ranks of the images of the PBW bases in `V_Q`.
    pub image_ranks: Vec<usize>,
    pub lattice_dims: Vec<usize>,
    pub modes: CheckReport,
    pub virasoro: CheckReport,
}

impl OracleComparison {
    pub fn passed(&self) -> bool {
        self.modes.passed()
            && self.virasoro.passed()
            && self.gram_ranks == self.image_ranks
            && self.image_ranks == self.lattice_dims
    }
}
