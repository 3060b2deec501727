//! Finite-dimensional data for sl_n in the Chevalley basis.
//!
//! Basis layout: `E` for every positive root (ordered by height, then by
//! starting row), then the simple coroots `H_1..H_l`, then `F` in the same
//! root order. Root vectors are matrix units `E = e_ij`, `F = e_ji` for
//! `i < j`; all structure constants and trace-form values are integers.

use std::fmt;

use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{q, qi, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BasisKind {
    /// Raising operator of the positive root with the given index.
    E(usize),
    /// Simple coroot `H_i` (0-based).
    H(usize),
    /// Lowering operator of the positive root with the given index.
    F(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositiveRoot {
    /// Matrix unit `e_{row,col}` with `row < col`.
    pub row: usize,
    pub col: usize,
    /// Coordinates in the simple-root basis.
    pub coords: Vec<i64>,
}

impl PositiveRoot {
    pub fn height(&self) -> usize {
        self.col - self.row
    }
}

/// A weight written in Dynkin labels `<lambda, alpha_i^vee>`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn zero(rank: usize) -> Self {
        Weight(vec![0; rank])
    }

    /// Fundamental weight `Lambda_i`, 1-based as in the usual notation.
    pub fn fundamental(rank: usize, i: usize) -> Self {
        let mut w = vec![0; rank];
        w[i - 1] = 1;
        Weight(w)
    }

    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|&x| x >= 0)
    }

    /// `<lambda, theta>` for type A, where every Dynkin label counts once.
    pub fn level(&self) -> i64 {
        self.0.iter().sum()
    }

    /// Parses `0`, `L1`, `L2`, `L1+L2`, `2L1` or a comma-separated label list.
    pub fn parse(rank: usize, s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" {
            return Ok(Weight::zero(rank));
        }
        if s.contains(',') {
            let labels: std::result::Result<Vec<i64>, _> =
                s.split(',').map(|x| x.trim().parse::<i64>()).collect();
            let labels = labels.map_err(|_| Error::Parse(format!("bad weight {s:?}")))?;
            if labels.len() != rank {
                return Err(Error::Parse(format!("weight {s:?} needs {rank} labels")));
            }
            return Ok(Weight(labels));
        }
        let mut w = vec![0i64; rank];
        for term in s.split('+') {
            let term = term.trim();
            let pos = term
                .find(['L', 'l'])
                .ok_or_else(|| Error::Parse(format!("bad weight term {term:?}")))?;
            let mult: i64 = if pos == 0 {
                1
            } else {
                term[..pos]
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad weight term {term:?}")))?
            };
            let idx: usize = term[pos + 1..]
                .parse()
                .map_err(|_| Error::Parse(format!("bad weight term {term:?}")))?;
            if idx == 0 || idx > rank {
                return Err(Error::Parse(format!("fundamental weight index {idx} out of 1..={rank}")));
            }
            w[idx - 1] += mult;
        }
        Ok(Weight(w))
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&x| x == 0) {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &m) in self.0.iter().enumerate() {
            if m == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            if m != 1 {
                write!(f, "{m}")?;
            }
            write!(f, "L{}", i + 1)?;
        }
        Ok(())
    }
}

/// Structure data of `sl_{rank+1}` with the trace form `(X|Y) = Tr(XY)`.
#[derive(Debug, Clone)]
pub struct LieData {
    n: usize,
    roots: Vec<PositiveRoot>,
    kinds: Vec<BasisKind>,
    bracket: Vec<Vec<Vec<(usize, i64)>>>,
    form: Vec<Vec<i64>>,
    weights: Vec<Vec<i64>>,
}

/// Builds the Chevalley data of `sl_n`.
pub fn build_sl(n: usize) -> Result<LieData> {
    if n < 2 {
        return Err(Error::InvalidRank(n));
    }
    let rank = n - 1;
    let mut roots: Vec<PositiveRoot> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut coords = vec![0; rank];
            for c in coords.iter_mut().take(j).skip(i) {
                *c = 1;
            }
            roots.push(PositiveRoot { row: i, col: j, coords });
        }
    }
    roots.sort_by_key(|r| (r.height(), r.row));
    let m = roots.len();
    let mut kinds = Vec::with_capacity(2 * m + rank);
    kinds.extend((0..m).map(BasisKind::E));
    kinds.extend((0..rank).map(BasisKind::H));
    kinds.extend((0..m).map(BasisKind::F));

    let mut data = LieData {
        n,
        roots,
        kinds,
        bracket: Vec::new(),
        form: Vec::new(),
        weights: Vec::new(),
    };
    let dim = data.dim();
    let mats: Vec<Vec<i64>> = (0..dim).map(|a| data.matrix(a)).collect();
    let mut bracket = vec![vec![Vec::new(); dim]; dim];
    let mut form = vec![vec![0i64; dim]; dim];
    for a in 0..dim {
        for b in 0..dim {
            let ab = matmul(n, &mats[a], &mats[b]);
            let ba = matmul(n, &mats[b], &mats[a]);
            let comm: Vec<i64> = ab.iter().zip(&ba).map(|(x, y)| x - y).collect();
            bracket[a][b] = data.decompose(&comm);
            form[a][b] = (0..n).map(|i| ab[i * n + i]).sum();
        }
    }
    data.bracket = bracket;
    data.form = form;
    let mut weights = vec![vec![0i64; rank]; dim];
    for (a, w) in weights.iter_mut().enumerate() {
        for (i, wi) in w.iter_mut().enumerate() {
            let h = data.h_index(i);
            *wi = data.bracket[h][a]
                .iter()
                .find(|(c, _)| *c == a)
                .map(|&(_, v)| v)
                .unwrap_or(0);
        }
    }
    data.weights = weights;
    Ok(data)
}

fn matmul(n: usize, x: &[i64], y: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; n * n];
    for i in 0..n {
        for k in 0..n {
            let xik = x[i * n + k];
            if xik == 0 {
                continue;
            }
            for j in 0..n {
                out[i * n + j] += xik * y[k * n + j];
            }
        }
    }
    out
}

impl LieData {
    /// Size of the defining representation.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.n - 1
    }

    pub fn dim(&self) -> usize {
        self.n * self.n - 1
    }

    pub fn dual_coxeter(&self) -> i64 {
        self.n as i64
    }

    pub fn roots(&self) -> &[PositiveRoot] {
        &self.roots
    }

    pub fn kind(&self, a: usize) -> BasisKind {
        self.kinds[a]
    }

    pub fn e_index(&self, root: usize) -> usize {
        root
    }

    pub fn h_index(&self, i: usize) -> usize {
        self.roots.len() + i
    }

    pub fn f_index(&self, root: usize) -> usize {
        self.roots.len() + self.rank() + root
    }

    /// Index of the simple root `alpha_i` (0-based) in the root list.
    pub fn simple_root(&self, i: usize) -> usize {
        self.roots
            .iter()
            .position(|r| r.row == i && r.col == i + 1)
            .expect("simple roots are present")
    }

    pub fn root_index(&self, row: usize, col: usize) -> Option<usize> {
        self.roots.iter().position(|r| r.row == row && r.col == col)
    }

    /// The Chevalley involution partner under transposition: `E <-> F`, `H -> H`.
    pub fn transpose(&self, a: usize) -> usize {
        match self.kinds[a] {
            BasisKind::E(r) => self.f_index(r),
            BasisKind::F(r) => self.e_index(r),
            BasisKind::H(_) => a,
        }
    }

    pub fn label(&self, a: usize) -> String {
        match self.kinds[a] {
            BasisKind::E(r) => format!("E_{}{}", self.roots[r].row + 1, self.roots[r].col + 1),
            BasisKind::F(r) => format!("F_{}{}", self.roots[r].row + 1, self.roots[r].col + 1),
            BasisKind::H(i) => format!("H_{}", i + 1),
        }
    }

    /// Dense `n x n` integer matrix of a basis element in the defining representation.
    pub fn matrix(&self, a: usize) -> Vec<i64> {
        let n = self.n;
        let mut m = vec![0i64; n * n];
        match self.kinds[a] {
            BasisKind::E(r) => m[self.roots[r].row * n + self.roots[r].col] = 1,
            BasisKind::F(r) => m[self.roots[r].col * n + self.roots[r].row] = 1,
            BasisKind::H(i) => {
                m[i * n + i] = 1;
                m[(i + 1) * n + i + 1] = -1;
            }
        }
        m
    }

    /// Coordinates of a traceless matrix in the Chevalley basis.
    pub fn decompose(&self, m: &[i64]) -> Vec<(usize, i64)> {
        let n = self.n;
        let mut out = Vec::new();
        for (r, root) in self.roots.iter().enumerate() {
            let e = m[root.row * n + root.col];
            if e != 0 {
                out.push((self.e_index(r), e));
            }
        }
        let mut acc = 0i64;
        for i in 0..self.rank() {
            acc += m[i * n + i];
            if acc != 0 {
                out.push((self.h_index(i), acc));
            }
        }
        for (r, root) in self.roots.iter().enumerate() {
            let f = m[root.col * n + root.row];
            if f != 0 {
                out.push((self.f_index(r), f));
            }
        }
        out.sort_unstable();
        out
    }

    /// `[Y_a, Y_b]` as sparse Chevalley coordinates.
    pub fn bracket(&self, a: usize, b: usize) -> &[(usize, i64)] {
        &self.bracket[a][b]
    }

    /// Trace form `(Y_a | Y_b)`.
    pub fn form(&self, a: usize, b: usize) -> i64 {
        self.form[a][b]
    }

    /// Dynkin labels of the adjoint weight of `Y_a`.
    pub fn basis_weight(&self, a: usize) -> &[i64] {
        &self.weights[a]
    }

    pub fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        let l = self.rank();
        (0..l)
            .map(|i| {
                (0..l)
                    .map(|j| match i.abs_diff(j) {
                        0 => 2,
                        1 => -1,
                        _ => 0,
                    })
                    .collect()
            })
            .collect()
    }

    /// Inverse Cartan matrix of `A_l`: `min(i,j)(l+1-max(i,j))/(l+1)` (1-based).
    pub fn inverse_cartan(&self) -> Vec<Vec<Q>> {
        let l = self.rank() as i64;
        (1..=l)
            .map(|i| (1..=l).map(|j| q(i.min(j) * (l + 1 - i.max(j)), l + 1)).collect())
            .collect()
    }

    /// `(lambda|mu)` for weights in Dynkin labels, normalized so that roots have length 2.
    pub fn weight_form(&self, lambda: &Weight, mu: &Weight) -> Q {
        let inv = self.inverse_cartan();
        let mut acc = Q::zero();
        for (i, li) in lambda.0.iter().enumerate() {
            for (j, mj) in mu.0.iter().enumerate() {
                if *li != 0 && *mj != 0 {
                    acc += &inv[i][j] * qi(li * mj);
                }
            }
        }
        acc
    }

    pub fn rho(&self) -> Weight {
        Weight(vec![1; self.rank()])
    }

    /// Highest root in Dynkin labels.
    pub fn highest_root(&self) -> Weight {
        let l = self.rank();
        let mut w = vec![0; l];
        w[0] += 1;
        w[l - 1] += 1;
        Weight(w)
    }

    /// Quadratic Casimir eigenvalue `(lambda | lambda + 2 rho)`.
    pub fn casimir_eigenvalue(&self, lambda: &Weight) -> Q {
        let shifted = Weight(lambda.0.iter().map(|x| x + 2).collect());
        self.weight_form(lambda, &shifted)
    }

    /// `[[X,Y],Z] + [[Y,Z],X] + [[Z,X],Y] = 0` on every basis triple.
    pub fn check_jacobi(&self) -> Result<()> {
        let dim = self.dim();
        for a in 0..dim {
            for b in 0..dim {
                for c in 0..dim {
                    let mut acc = vec![0i64; dim];
                    for (x, y, z) in [(a, b, c), (b, c, a), (c, a, b)] {
                        for &(d, v) in self.bracket(x, y) {
                            for &(e, w) in self.bracket(d, z) {
                                acc[e] += v * w;
                            }
                        }
                    }
                    if acc.iter().any(|&x| x != 0) {
                        return Err(Error::RelationViolation(format!(
                            "Jacobi fails on ({}, {}, {})",
                            self.label(a),
                            self.label(b),
                            self.label(c)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Symmetry and invariance `([X,Y]|Z) = (X|[Y,Z])` of the trace form.
    pub fn check_invariance(&self) -> Result<()> {
        let dim = self.dim();
        for a in 0..dim {
            for b in 0..dim {
                if self.form(a, b) != self.form(b, a) {
                    return Err(Error::RelationViolation(format!(
                        "form not symmetric on ({}, {})",
                        self.label(a),
                        self.label(b)
                    )));
                }
                for c in 0..dim {
                    let lhs: i64 = self.bracket(a, b).iter().map(|&(d, v)| v * self.form(d, c)).sum();
                    let rhs: i64 = self.bracket(b, c).iter().map(|&(d, v)| v * self.form(a, d)).sum();
                    if lhs != rhs {
                        return Err(Error::RelationViolation(format!(
                            "form not invariant on ({}, {}, {})",
                            self.label(a),
                            self.label(b),
                            self.label(c)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// The orthonormal basis `X_r` with respect to the trace form, as complex
    /// combinations of Chevalley elements.
    ///
    /// Cartan part: `h_j / sqrt(j(j+1))` with `h_j = sum_{i<=j} i H_i`; then for
    /// every positive root `(E+F)/sqrt 2` and `i(E-F)/sqrt 2`.
    pub fn hermitian_basis(&self) -> Vec<(String, Vec<(usize, Complex64)>)> {
        let mut out = Vec::with_capacity(self.dim());
        for j in 1..=self.rank() {
            let norm = ((j * (j + 1)) as f64).sqrt();
            let coeffs = (1..=j)
                .map(|i| (self.h_index(i - 1), Complex64::new(i as f64 / norm, 0.0)))
                .collect();
            out.push((format!("cartan_{j}"), coeffs));
        }
        let s = std::f64::consts::FRAC_1_SQRT_2;
        for (r, root) in self.roots.iter().enumerate() {
            let tag = format!("{}{}", root.row + 1, root.col + 1);
            out.push((
                format!("sym_{tag}"),
                vec![(self.e_index(r), Complex64::new(s, 0.0)), (self.f_index(r), Complex64::new(s, 0.0))],
            ));
            out.push((
                format!("asym_{tag}"),
                vec![(self.e_index(r), Complex64::new(0.0, s)), (self.f_index(r), Complex64::new(0.0, -s))],
            ));
        }
        out
    }
}

/// `X_r^2` written exactly as `sum c_ab Y_a Y_b` (ordered products).
#[derive(Debug, Clone, PartialEq)]
pub struct SquaredGenerator {
    pub label: String,
    pub terms: Vec<(usize, usize, Q)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SquaredGeneratorTable {
    pub entries: Vec<SquaredGenerator>,
}

impl SquaredGeneratorTable {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `sum_r X_r (x) X_r`, merged and sorted: the quadratic Casimir tensor.
    pub fn casimir_tensor(&self) -> Vec<(usize, usize, Q)> {
        let mut acc: std::collections::BTreeMap<(usize, usize), Q> = Default::default();
        for e in &self.entries {
            for (a, b, c) in &e.terms {
                *acc.entry((*a, *b)).or_insert_with(Q::zero) += c;
            }
        }
        acc.into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((a, b), c)| (a, b, c))
            .collect()
    }
}

/// Exact squares of the orthonormal generators, in the order of
/// [`LieData::hermitian_basis`].
pub fn squared_table(lie: &LieData) -> SquaredGeneratorTable {
    let mut entries = Vec::with_capacity(lie.dim());
    for j in 1..=lie.rank() {
        let norm = (j * (j + 1)) as i64;
        let mut terms = Vec::new();
        for i in 1..=j {
            for i2 in 1..=j {
                terms.push((lie.h_index(i - 1), lie.h_index(i2 - 1), q((i * i2) as i64, norm)));
            }
        }
        entries.push(SquaredGenerator { label: format!("cartan_{j}"), terms });
    }
    for (r, root) in lie.roots().iter().enumerate() {
        let (e, f) = (lie.e_index(r), lie.f_index(r));
        let tag = format!("{}{}", root.row + 1, root.col + 1);
        let half = q(1, 2);
        let mhalf = q(-1, 2);
        entries.push(SquaredGenerator {
            label: format!("sym_{tag}"),
            terms: vec![
                (e, e, half.clone()),
                (e, f, half.clone()),
                (f, e, half.clone()),
                (f, f, half.clone()),
            ],
        });
        // (i(E-F)/sqrt2)^2 = -(E-F)^2/2
        entries.push(SquaredGenerator {
            label: format!("asym_{tag}"),
            terms: vec![
                (e, e, mhalf.clone()),
                (e, f, half.clone()),
                (f, e, half),
                (f, f, mhalf),
            ],
        });
    }
    SquaredGeneratorTable { entries }
}

/// `h_Lambda = (Lambda|Lambda+2rho) / (2(k+h^vee))`.
pub fn conformal_weight(lie: &LieData, lambda: &Weight, level: &Q) -> Result<Q> {
    if lambda.0.len() != lie.rank() || !lambda.is_dominant() {
        return Err(Error::WeightOutOfRange { weight: lambda.0.clone(), level: 0 });
    }
    let denom = (level + qi(lie.dual_coxeter())) * qi(2);
    if denom.is_zero() {
        return Err(Error::Pole);
    }
    Ok(lie.casimir_eigenvalue(lambda) / denom)
}

/// `c_k = k dim(g) / (k + h^vee)`.
pub fn central_charge(lie: &LieData, level: &Q) -> Result<Q> {
    let denom = level + qi(lie.dual_coxeter());
    if denom.is_zero() {
        return Err(Error::Pole);
    }
    Ok(level * qi(lie.dim() as i64) / denom)
}
