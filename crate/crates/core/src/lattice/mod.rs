//! Fock spaces of the type-A root lattice: free bosons `alpha_{i,n}` and
//! vertex operators `Gamma_beta`, with exact rational coefficients.

mod fk;
mod identities;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_q, qi, Q};

pub use fk::{FkMap, OracleComparison};
pub use identities::{verify_state_identities, IdentityCheck, IdentityReport};

/// Root lattice of `A_l` in the simple-root basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootLattice {
    gram: Vec<Vec<i64>>,
}

impl RootLattice {
    pub fn type_a(rank: usize) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidRank(1));
        }
        let gram = (0..rank)
            .map(|i| {
                (0..rank)
                    .map(|j| match i.abs_diff(j) {
                        0 => 2,
                        1 => -1,
                        _ => 0,
                    })
                    .collect()
            })
            .collect();
        Ok(RootLattice { gram })
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn form(&self, b: &[i64], c: &[i64]) -> i64 {
        let mut acc = 0;
        for (i, bi) in b.iter().enumerate() {
            if *bi == 0 {
                continue;
            }
            for (j, cj) in c.iter().enumerate() {
                acc += bi * cj * self.gram[i][j];
            }
        }
        acc
    }

    pub fn norm(&self, b: &[i64]) -> i64 {
        self.form(b, b)
    }

    /// All points with `(b|b)/2 <= bound`, sorted.
    pub fn points_up_to(&self, bound: i64) -> Vec<Vec<i64>> {
        let l = self.rank();
        // smallest eigenvalue of the A_l Cartan matrix
        let lmin = 2.0 - 2.0 * (std::f64::consts::PI / (l as f64 + 1.0)).cos();
        let b = ((2.0 * bound as f64) / lmin).sqrt().floor() as i64 + 1;
        let mut out = Vec::new();
        let mut cur = vec![-b; l];
        loop {
            if self.norm(&cur) <= 2 * bound {
                out.push(cur.clone());
            }
            let mut i = 0;
            loop {
                if i == l {
                    out.sort();
                    return out;
                }
                cur[i] += 1;
                if cur[i] <= b {
                    break;
                }
                cur[i] = -b;
                i += 1;
            }
        }
    }
}

/// Ordering convention for the cocycle on simple roots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Convention {
    /// `eps(a_i, a_j) = 1` for `i <= j`, `(-1)^{(a_i|a_j)}` for `i > j`.
    A,
    /// `eps(a_i, a_j) = 1` for `i >= j`, `(-1)^{(a_i|a_j)}` for `i < j`.
    B,
}

/// Bimultiplicative sign `eps(b, c) = prod (-1)^{b_i c_j e_ij}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cocycle {
    convention: Convention,
    exponents: Vec<Vec<i64>>,
}

impl Cocycle {
    pub fn new(lattice: &RootLattice, convention: Convention) -> Self {
        let l = lattice.rank();
        let exponents = (0..l)
            .map(|i| {
                (0..l)
                    .map(|j| {
                        let off = match convention {
                            Convention::A => i > j,
                            Convention::B => i < j,
                        };
                        if off {
                            lattice.gram[i][j].rem_euclid(2)
                        } else {
                            0
                        }
                    })
                    .collect()
            })
            .collect();
        Cocycle { convention, exponents }
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn sign(&self, b: &[i64], c: &[i64]) -> i64 {
        let mut e = 0;
        for (i, bi) in b.iter().enumerate() {
            for (j, cj) in c.iter().enumerate() {
                e += bi * cj * self.exponents[i][j];
            }
        }
        if e.rem_euclid(2) == 0 {
            1
        } else {
            -1
        }
    }

    /// Bimultiplicativity, normalization and `eps(b,c) eps(c,b) = (-1)^{(b|c)}`
    /// on the box `|coords| <= radius`.
    pub fn check(&self, lattice: &RootLattice, radius: i64) -> Result<()> {
        let l = lattice.rank();
        let mut pts = vec![vec![]];
        for _ in 0..l {
            pts = pts
                .into_iter()
                .flat_map(|p: Vec<i64>| {
                    (-radius..=radius).map(move |x| {
                        let mut q = p.clone();
                        q.push(x);
                        q
                    })
                })
                .collect();
        }
        let zero = vec![0; l];
        let add = |a: &[i64], b: &[i64]| a.iter().zip(b).map(|(x, y)| x + y).collect::<Vec<_>>();
        for b in &pts {
            if self.sign(b, &zero) != 1 || self.sign(&zero, b) != 1 {
                return Err(Error::RelationViolation(format!("eps not normalized at {b:?}")));
            }
            for c in &pts {
                let parity = if lattice.form(b, c).rem_euclid(2) == 0 { 1 } else { -1 };
                if self.sign(b, c) * self.sign(c, b) != parity {
                    return Err(Error::RelationViolation(format!("eps parity fails at {b:?}, {c:?}")));
                }
                for d in pts.iter().step_by(3) {
                    if self.sign(&add(b, c), d) != self.sign(b, d) * self.sign(c, d)
                        || self.sign(d, &add(b, c)) != self.sign(d, b) * self.sign(d, c)
                    {
                        return Err(Error::RelationViolation(format!(
                            "eps not bimultiplicative at {b:?}, {c:?}, {d:?}"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Basis state `alpha_{i1,-n1} .. alpha_{ir,-nr} e^point`; `occupation`
/// lists `(n, i)` pairs with `n >= 1`, sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FockKey {
    pub point: Vec<i64>,
    pub occupation: Vec<(i64, usize)>,
}

impl FockKey {
    pub fn vacuum(rank: usize) -> Self {
        FockKey { point: vec![0; rank], occupation: Vec::new() }
    }

    pub fn oscillator_degree(&self) -> i64 {
        self.occupation.iter().map(|(n, _)| n).sum()
    }
}

impl fmt::Display for FockKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut i = 0;
        while i < self.occupation.len() {
            let mut j = i;
            while j < self.occupation.len() && self.occupation[j] == self.occupation[i] {
                j += 1;
            }
            let (n, d) = self.occupation[i];
            if !first {
                write!(f, " ")?;
            }
            first = false;
            write!(f, "a{}(-{n})", d + 1)?;
            if j - i > 1 {
                write!(f, "^{}", j - i)?;
            }
            i = j;
        }
        if self.point.iter().any(|x| *x != 0) || first {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "e^{:?}", self.point)?;
        }
        Ok(())
    }
}

/// Sparse rational combination of Fock basis states.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LatticeVector {
    terms: BTreeMap<FockKey, Q>,
}

impl LatticeVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(k: FockKey) -> Self {
        let mut v = Self::zero();
        v.add_term(k, qi(1));
        v
    }

    pub fn add_term(&mut self, k: FockKey, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(k) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &LatticeVector, c: &Q) {
        if c.is_zero() {
            return;
        }
        for (k, x) in &other.terms {
            self.add_term(k.clone(), x * c);
        }
    }

    pub fn scaled(&self, c: &Q) -> Self {
        let mut v = Self::zero();
        v.add_scaled(self, c);
        v
    }

    pub fn sub(&self, other: &LatticeVector) -> Self {
        let mut v = self.clone();
        v.add_scaled(other, &qi(-1));
        v
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, k: &FockKey) -> Q {
        self.terms.get(k).cloned().unwrap_or_else(Q::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&FockKey, &Q)> {
        self.terms.iter()
    }

    /// `(state, coefficient)` strings, for reports.
    pub fn describe(&self) -> Vec<(String, String)> {
        self.terms.iter().map(|(k, c)| (k.to_string(), format_q(c))).collect()
    }
}

impl FromIterator<(FockKey, Q)> for LatticeVector {
    fn from_iter<I: IntoIterator<Item = (FockKey, Q)>>(iter: I) -> Self {
        let mut v = Self::zero();
        for (k, c) in iter {
            v.add_term(k, c);
        }
        v
    }
}

type VertexKey = (Vec<i64>, i64, FockKey);

/// Degree-truncated Fock space `V_Q` with cached vertex-operator action.
#[derive(Debug)]
pub struct FockSpace {
    lattice: RootLattice,
    cocycle: Cocycle,
    max_degree: i64,
    basis: Vec<Vec<FockKey>>,
    vertex_cache: Mutex<HashMap<VertexKey, Arc<LatticeVector>>>,
}

impl FockSpace {
    pub fn new(lattice: RootLattice, convention: Convention, max_degree: i64) -> Self {
        let cocycle = Cocycle::new(&lattice, convention);
        let mut basis = vec![Vec::new(); max_degree.max(0) as usize + 1];
        for p in lattice.points_up_to(max_degree) {
            let base = lattice.norm(&p) / 2;
            for extra in 0..=(max_degree - base) {
                for occ in oscillator_partitions(extra, lattice.rank()) {
                    basis[(base + extra) as usize].push(FockKey { point: p.clone(), occupation: occ });
                }
            }
        }
        for b in &mut basis {
            b.sort();
        }
        FockSpace { lattice, cocycle, max_degree, basis, vertex_cache: Mutex::new(HashMap::new()) }
    }

    pub fn lattice(&self) -> &RootLattice {
        &self.lattice
    }

    pub fn cocycle(&self) -> &Cocycle {
        &self.cocycle
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    pub fn max_degree(&self) -> i64 {
        self.max_degree
    }

    pub fn degree(&self, k: &FockKey) -> i64 {
        self.lattice.norm(&k.point) / 2 + k.oscillator_degree()
    }

    pub fn basis(&self, degree: i64) -> &[FockKey] {
        if degree < 0 || degree > self.max_degree {
            return &[];
        }
        &self.basis[degree as usize]
    }

    pub fn dim(&self, degree: i64) -> usize {
        self.basis(degree).len()
    }

    pub fn vacuum(&self) -> LatticeVector {
        LatticeVector::basis(FockKey::vacuum(self.rank()))
    }

    fn check_degree(&self, v: &LatticeVector, lowering: i64) -> Result<()> {
        if let Some(d) = v.iter().map(|(k, _)| self.degree(k)).max() {
            if d - lowering > self.max_degree {
                return Err(Error::TruncationViolation { degree: d - lowering, max: self.max_degree });
            }
        }
        Ok(())
    }

    /// `alpha_{i,n}` with `[alpha_{i,m}, alpha_{j,n}] = m (a_i|a_j) delta_{m+n,0}`.
    pub fn heisenberg_mode(&self, i: usize, n: i64, v: &LatticeVector) -> Result<LatticeVector> {
        self.check_degree(v, n)?;
        Ok(self.heisenberg_unchecked(&unit(self.rank(), i), n, v))
    }

    /// `beta_n = sum_i beta^i alpha_{i,n}` for a lattice vector `beta`.
    pub(crate) fn heisenberg_unchecked(&self, beta: &[i64], n: i64, v: &LatticeVector) -> LatticeVector {
        let mut out = LatticeVector::zero();
        for (k, c) in v.iter() {
            self.boson_on_key(beta, n, k, c, &mut out);
        }
        out
    }

    fn boson_on_key(&self, beta: &[i64], n: i64, k: &FockKey, c: &Q, out: &mut LatticeVector) {
        match n.cmp(&0) {
            std::cmp::Ordering::Equal => {
                let f = self.lattice.form(beta, &k.point);
                out.add_term(k.clone(), c * qi(f));
            }
            std::cmp::Ordering::Less => {
                for (i, bi) in beta.iter().enumerate() {
                    if *bi == 0 {
                        continue;
                    }
                    let mut occ = k.occupation.clone();
                    let at = occ.partition_point(|x| *x < (-n, i));
                    occ.insert(at, (-n, i));
                    out.add_term(FockKey { point: k.point.clone(), occupation: occ }, c * qi(*bi));
                }
            }
            std::cmp::Ordering::Greater => {
                for (pos, &(m, j)) in k.occupation.iter().enumerate() {
                    if m != n {
                        continue;
                    }
                    let pair: i64 = beta.iter().enumerate().map(|(i, bi)| bi * self.lattice.gram[i][j]).sum();
                    if pair == 0 {
                        continue;
                    }
                    let mut occ = k.occupation.clone();
                    occ.remove(pos);
                    out.add_term(FockKey { point: k.point.clone(), occupation: occ }, c * qi(n * pair));
                }
            }
        }
    }

    /// `(Gamma_beta)_m`, the coefficient of `z^{-m-1}` in
    /// `eps(beta, .) E^-(beta,z) E^+(beta,z) e^beta z^{beta_0}`.
    pub fn vertex_mode(&self, beta: &[i64], m: i64, v: &LatticeVector) -> Result<LatticeVector> {
        let shift = self.lattice.norm(beta) / 2 - 1;
        self.check_degree(v, m - shift)?;
        Ok(self.vertex_unchecked(beta, m, v))
    }

    pub(crate) fn vertex_unchecked(&self, beta: &[i64], m: i64, v: &LatticeVector) -> LatticeVector {
        let mut out = LatticeVector::zero();
        for (k, c) in v.iter() {
            out.add_scaled(&self.vertex_on_key(beta, m, k), c);
        }
        out
    }

    fn vertex_on_key(&self, beta: &[i64], m: i64, k: &FockKey) -> Arc<LatticeVector> {
        let key = (beta.to_vec(), m, k.clone());
        if let Some(v) = self.vertex_cache.lock().unwrap().get(&key) {
            return Arc::clone(v);
        }
        let result = Arc::new(self.expand_vertex(beta, m, k));
        self.vertex_cache.lock().unwrap().entry(key).or_insert_with(|| Arc::clone(&result));
        result
    }

    fn expand_vertex(&self, beta: &[i64], m: i64, k: &FockKey) -> LatticeVector {
        let sign = self.cocycle.sign(beta, &k.point);
        let bg = self.lattice.form(beta, &k.point);
        let hdeg = k.oscillator_degree();
        // E^+ coefficients: q R_q = -sum_{n=1}^q beta_n R_{q-n}
        let mut r: Vec<LatticeVector> = vec![LatticeVector::basis(k.clone())];
        for qq in 1..=hdeg {
            let mut acc = LatticeVector::zero();
            for n in 1..=qq {
                acc.add_scaled(&self.heisenberg_unchecked(beta, n, &r[(qq - n) as usize]), &qi(-1));
            }
            r.push(acc.scaled(&(Q::from_integer(1.into()) / qi(qq))));
        }
        let mut out = LatticeVector::zero();
        for (qq, rq) in r.iter().enumerate() {
            let p = qq as i64 - m - 1 - bg;
            if p < 0 || rq.is_zero() {
                continue;
            }
            // E^- coefficients: p Q_p = sum_{n=1}^p beta_{-n} Q_{p-n}
            let mut qs: Vec<LatticeVector> = vec![rq.clone()];
            for pp in 1..=p {
                let mut acc = LatticeVector::zero();
                for n in 1..=pp {
                    acc.add_scaled(&self.heisenberg_unchecked(beta, -n, &qs[(pp - n) as usize]), &qi(1));
                }
                qs.push(acc.scaled(&(Q::from_integer(1.into()) / qi(pp))));
            }
            out.add_scaled(&qs[p as usize], &qi(1));
        }
        let point: Vec<i64> = beta.iter().zip(&k.point).map(|(a, b)| a + b).collect();
        out.iter()
            .map(|(key, c)| {
                (FockKey { point: point.clone(), occupation: key.occupation.clone() }, c * qi(sign))
            })
            .collect()
    }

    /// Free-boson Virasoro `L_m = 1/2 sum_ij (A^{-1})_ij sum_k :alpha_{i,k} alpha_{j,m-k}:`.
    pub fn free_virasoro(&self, m: i64, v: &LatticeVector) -> Result<LatticeVector> {
        self.check_degree(v, m)?;
        Ok(self.free_virasoro_unchecked(m, v))
    }

    pub(crate) fn free_virasoro_unchecked(&self, m: i64, v: &LatticeVector) -> LatticeVector {
        let l = self.rank();
        let inv = inverse_cartan(l);
        let h = v.iter().map(|(k, _)| k.oscillator_degree()).max().unwrap_or(0);
        let mut out = LatticeVector::zero();
        for i in 0..l {
            for j in 0..l {
                let c = &inv[i][j] / qi(2);
                let (ei, ej) = (unit(l, i), unit(l, j));
                for k in (m - h).min(0)..=h.max(m) {
                    let term = if k < 0 {
                        let inner = self.heisenberg_unchecked(&ej, m - k, v);
                        self.heisenberg_unchecked(&ei, k, &inner)
                    } else {
                        let inner = self.heisenberg_unchecked(&ei, k, v);
                        self.heisenberg_unchecked(&ej, m - k, &inner)
                    };
                    out.add_scaled(&term, &c);
                }
            }
        }
        out
    }

    pub fn cache_len(&self) -> usize {
        self.vertex_cache.lock().unwrap().len()
    }
}

fn unit(l: usize, i: usize) -> Vec<i64> {
    let mut e = vec![0; l];
    e[i] = 1;
    e
}

fn inverse_cartan(l: usize) -> Vec<Vec<Q>> {
    let n = l as i64 + 1;
    (1..=l as i64)
        .map(|i| (1..=l as i64).map(|j| Q::new(i.min(j).into(), n.into()) * qi(n - i.max(j))).collect())
        .collect()
}

/// Multisets of `(mode, direction)` with total mode `total`, sorted within.
fn oscillator_partitions(total: i64, colors: usize) -> Vec<Vec<(i64, usize)>> {
    fn rec(rem: i64, min: (i64, usize), colors: usize, cur: &mut Vec<(i64, usize)>, out: &mut Vec<Vec<(i64, usize)>>) {
        if rem == 0 {
            out.push(cur.clone());
            return;
        }
        for n in min.0..=rem {
            let start = if n == min.0 { min.1 } else { 0 };
            for c in start..colors {
                cur.push((n, c));
                rec(rem - n, (n, c), colors, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(total, (1, 0), colors, &mut Vec::new(), &mut out);
    out
}

/// Graded dimensions of `V_Q` for `A_l` from `theta_Q(q) / prod_n (1-q^n)^l`,
/// computed as power series (independently of any basis enumeration).
pub fn character_coefficients(rank: usize, max_degree: i64) -> Result<Vec<u64>> {
    let lattice = RootLattice::type_a(rank)?;
    let d = max_degree.max(0) as usize;
    let mut theta = vec![0u64; d + 1];
    for p in lattice.points_up_to(max_degree) {
        theta[(lattice.norm(&p) / 2) as usize] += 1;
    }
    // 1/prod (1-q^n)^l by repeated division by (1 - q^n)
    let mut inv_eta = vec![0u64; d + 1];
    inv_eta[0] = 1;
    for n in 1..=d {
        for _ in 0..rank {
            for j in n..=d {
                inv_eta[j] += inv_eta[j - n];
            }
        }
    }
    Ok((0..=d).map(|k| (0..=k).map(|j| theta[j] * inv_eta[k - j]).sum()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sl2(d: i64) -> FockSpace {
        FockSpace::new(RootLattice::type_a(1).unwrap(), Convention::A, d)
    }

    #[test]
    fn characters_of_basic_modules() {
        assert_eq!(character_coefficients(1, 4).unwrap(), vec![1, 3, 4, 7, 13]);
        assert_eq!(character_coefficients(2, 4).unwrap(), vec![1, 8, 17, 46, 98]);
        let s = sl2(5);
        let direct: Vec<u64> = (0..=5).map(|d| s.dim(d) as u64).collect();
        assert_eq!(direct, character_coefficients(1, 5).unwrap());
    }

    #[test]
    fn heisenberg_examples() {
        let s = sl2(4);
        let vac = s.vacuum();
        assert!(s.heisenberg_mode(0, 1, &vac).unwrap().is_zero());
        let ea = LatticeVector::basis(FockKey { point: vec![1], occupation: vec![] });
        assert_eq!(s.heisenberg_mode(0, 0, &ea).unwrap(), ea.scaled(&qi(2)));
        let up = s.heisenberg_mode(0, -2, &vac).unwrap();
        assert_eq!(s.heisenberg_mode(0, 2, &up).unwrap(), vac.scaled(&qi(4)));
    }

    #[test]
    fn vertex_modes_on_vacuum() {
        let s = sl2(4);
        let vac = s.vacuum();
        for m in 1..=3 {
            assert!(s.vertex_mode(&[1], m, &vac).unwrap().is_zero());
        }
        // (Gamma_a)_{-1} |0> = e^a, (Gamma_a)_{-2} |0> = a_{-1} e^a
        let e = s.vertex_mode(&[1], -1, &vac).unwrap();
        assert_eq!(e, LatticeVector::basis(FockKey { point: vec![1], occupation: vec![] }));
        let e2 = s.vertex_mode(&[1], -2, &vac).unwrap();
        assert_eq!(e2, LatticeVector::basis(FockKey { point: vec![1], occupation: vec![(1, 0)] }));
        assert!(s.vertex_mode(&[1], -6, &vac).is_err());
    }

    #[test]
    fn zero_modes_commute_to_alpha_zero() {
        let s = sl2(3);
        for d in 0..=3 {
            for k in s.basis(d) {
                let v = LatticeVector::basis(k.clone());
                let ef = s.vertex_unchecked(&[1], 0, &s.vertex_unchecked(&[-1], 0, &v));
                let fe = s.vertex_unchecked(&[-1], 0, &s.vertex_unchecked(&[1], 0, &v));
                assert_eq!(ef.sub(&fe), s.heisenberg_unchecked(&[1], 0, &v), "{k}");
            }
        }
    }

    #[test]
    fn cocycles_are_admissible() {
        for l in 1..=3 {
            let lat = RootLattice::type_a(l).unwrap();
            for conv in [Convention::A, Convention::B] {
                let c = Cocycle::new(&lat, conv);
                c.check(&lat, 2).unwrap();
                for i in 0..l {
                    assert_eq!(c.sign(&unit(l, i), &unit(l, i)), 1);
                }
            }
        }
    }

    #[test]
    fn lattice_is_even() {
        let lat = RootLattice::type_a(3).unwrap();
        for p in lat.points_up_to(4) {
            assert_eq!(lat.norm(&p) % 2, 0);
        }
    }

    #[test]
    fn fock_key_labels() {
        let k = FockKey { point: vec![1, 0], occupation: vec![(1, 0), (1, 0), (3, 1)] };
        assert_eq!(k.to_string(), "a1(-1)^2 a2(-3) e^[1, 0]");
        assert_eq!(FockKey::vacuum(2).to_string(), "e^[0, 0]");
    }
}
