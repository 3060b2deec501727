//! Graded Weyl modules over the affine algebra of sl_n at level k.
//!
//! A vector is a sparse combination of PBW monomials
//! `Y_{a1,m1} ... Y_{ar,mr} w_t` with strictly negative, canonically ordered
//! modes applied to a top-space basis vector. Modes act by straightening
//! with the affine bracket; results are memoized per `(mode, monomial)`.

mod checks;
mod gram;
mod json;
mod sugawara;

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lie::{squared_table, LieData, SquaredGeneratorTable, Weight};
use crate::rational::{qi, Q};
use crate::rep::FiniteRep;

pub use checks::{CheckReport, VirasoroReport};
pub use gram::{GramBlock, GramForm};
pub use json::{ModuleJson, VectorTermJson};

/// An element `X_m` of the loop algebra or a Sugawara mode `L_m`.
/// The central element is not a mode: it acts as the level everywhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    Affine { generator: usize, m: i64 },
    Virasoro { m: i64 },
}

impl Mode {
    pub fn number(&self) -> i64 {
        match self {
            Mode::Affine { m, .. } | Mode::Virasoro { m } => *m,
        }
    }
}

/// A creation mode `Y_{generator, mode}` with `mode < 0`.
/// Ordering is by mode number, then by generator index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "(i64, usize)", into = "(i64, usize)")]
pub struct Letter {
    pub mode: i64,
    pub generator: usize,
}

impl From<(i64, usize)> for Letter {
    fn from((mode, generator): (i64, usize)) -> Self {
        Letter { mode, generator }
    }
}

impl From<Letter> for (i64, usize) {
    fn from(l: Letter) -> Self {
        (l.mode, l.generator)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Monomial {
    pub letters: Vec<Letter>,
    pub top: usize,
}

impl Monomial {
    pub fn top_vector(top: usize) -> Self {
        Monomial { letters: Vec::new(), top }
    }

    pub fn degree(&self) -> i64 {
        -self.letters.iter().map(|l| l.mode).sum::<i64>()
    }

    pub fn is_canonical(&self) -> bool {
        self.letters.iter().all(|l| l.mode < 0) && self.letters.windows(2).all(|w| w[0] <= w[1])
    }
}

/// Sparse exact combination of PBW monomials. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ModuleVector {
    terms: BTreeMap<Monomial, Q>,
}

impl ModuleVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(m: Monomial) -> Self {
        let mut v = Self::zero();
        v.add_term(m, Q::from_integer(1.into()));
        v
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
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

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &ModuleVector, c: &Q) {
        if c.is_zero() {
            return;
        }
        for (m, x) in &other.terms {
            self.add_term(m.clone(), x * c);
        }
    }

    pub fn scaled(&self, c: &Q) -> ModuleVector {
        let mut out = ModuleVector::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn sub(&self, other: &ModuleVector) -> ModuleVector {
        let mut out = self.clone();
        out.add_scaled(other, &qi(-1));
        out
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

    pub fn coefficient(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    /// The common degree of all terms; `None` for zero or mixed vectors.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let mut it = self.terms.keys().map(Monomial::degree);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Component of the given degree.
    pub fn component(&self, degree: i64) -> ModuleVector {
        ModuleVector {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }
}

impl FromIterator<(Monomial, Q)> for ModuleVector {
    fn from_iter<I: IntoIterator<Item = (Monomial, Q)>>(iter: I) -> Self {
        let mut v = ModuleVector::zero();
        for (m, c) in iter {
            v.add_term(m, c);
        }
        v
    }
}

type ActionKey = (usize, i64, Monomial);

/// The Weyl module induced from `L(Lambda)` at level `k`, truncated at degree `D`.
#[derive(Debug)]
pub struct WeylModule {
    lie: LieData,
    squares: SquaredGeneratorTable,
    casimir: Vec<(usize, usize, Q)>,
    level: i64,
    weight: Weight,
    max_degree: i64,
    top: FiniteRep,
    basis: Vec<Vec<Monomial>>,
    action_cache: Mutex<HashMap<ActionKey, Arc<ModuleVector>>>,
    sugawara_cache: Mutex<HashMap<(i64, Monomial), Arc<ModuleVector>>>,
}

/// Builds the degree-graded PBW bases `0..=max_degree`.
pub fn build_weyl(lie: &LieData, level: i64, weight: &Weight, max_degree: i64) -> Result<WeylModule> {
    if level < 1 {
        return Err(Error::Config(format!("level must be a positive integer, got {level}")));
    }
    if max_degree < 0 {
        return Err(Error::Config("max degree must be non-negative".into()));
    }
    let top = FiniteRep::for_weight(lie, weight, level)?;
    let dim = lie.dim();
    let mut basis = Vec::with_capacity(max_degree as usize + 1);
    for d in 0..=max_degree {
        let mut words: Vec<Vec<Letter>> = Vec::new();
        let letters: Vec<Letter> = (1..=d.max(1))
            .rev()
            .flat_map(|m| (0..dim).map(move |g| Letter { mode: -m, generator: g }))
            .collect();
        fn rec(letters: &[Letter], start: usize, left: i64, cur: &mut Vec<Letter>, out: &mut Vec<Vec<Letter>>) {
            if left == 0 {
                out.push(cur.clone());
                return;
            }
            for (i, l) in letters.iter().enumerate().skip(start) {
                if -l.mode <= left {
                    cur.push(*l);
                    rec(letters, i, left + l.mode, cur, out);
                    cur.pop();
                }
            }
        }
        rec(&letters, 0, d, &mut Vec::new(), &mut words);
        let mut monos: Vec<Monomial> = words
            .into_iter()
            .flat_map(|w| (0..top.dim()).map(move |t| Monomial { letters: w.clone(), top: t }))
            .collect();
        monos.sort();
        basis.push(monos);
    }
    let squares = squared_table(lie);
    let casimir = squares.casimir_tensor();
    Ok(WeylModule {
        lie: lie.clone(),
        squares,
        casimir,
        level,
        weight: weight.clone(),
        max_degree,
        top,
        basis,
        action_cache: Mutex::new(HashMap::new()),
        sugawara_cache: Mutex::new(HashMap::new()),
    })
}

impl WeylModule {
    pub fn lie(&self) -> &LieData {
        &self.lie
    }

    pub fn squares(&self) -> &SquaredGeneratorTable {
        &self.squares
    }

    pub fn casimir_tensor(&self) -> &[(usize, usize, Q)] {
        &self.casimir
    }

    pub fn level(&self) -> i64 {
        self.level
    }

    pub fn weight(&self) -> &Weight {
        &self.weight
    }

    pub fn max_degree(&self) -> i64 {
        self.max_degree
    }

    pub fn top(&self) -> &FiniteRep {
        &self.top
    }

    /// PBW basis of the given degree, sorted.
    pub fn basis(&self, degree: i64) -> &[Monomial] {
        &self.basis[degree as usize]
    }

    pub fn dim(&self, degree: i64) -> usize {
        self.basis[degree as usize].len()
    }

    /// Top-space vector `w_t` as a module vector.
    pub fn top_vector(&self, t: usize) -> ModuleVector {
        ModuleVector::basis(Monomial::top_vector(t))
    }

    pub fn highest_weight_vector(&self) -> ModuleVector {
        self.top_vector(self.top.highest_weight_index())
    }

    /// Dynkin labels of the weight of a monomial.
    pub fn monomial_weight(&self, m: &Monomial) -> Vec<i64> {
        let mut w = self.top.vector_weight(m.top);
        for l in &m.letters {
            for (x, y) in w.iter_mut().zip(self.lie.basis_weight(l.generator)) {
                *x += y;
            }
        }
        w
    }

    pub fn conformal_weight(&self) -> Q {
        crate::lie::conformal_weight(&self.lie, &self.weight, &qi(self.level))
            .expect("positive level has no pole")
    }

    pub fn central_charge(&self) -> Q {
        crate::lie::central_charge(&self.lie, &qi(self.level)).expect("positive level has no pole")
    }

    fn check_target(&self, v: &ModuleVector, lowering_by: i64) -> Result<()> {
        if let Some(d) = v.max_degree() {
            if d - lowering_by > self.max_degree {
                return Err(Error::TruncationViolation { degree: d - lowering_by, max: self.max_degree });
            }
        }
        Ok(())
    }

    /// Applies an affine or Virasoro mode; fails if the result leaves the truncation.
    pub fn apply_mode(&self, mode: Mode, v: &ModuleVector) -> Result<ModuleVector> {
        self.check_target(v, mode.number())?;
        Ok(match mode {
            Mode::Affine { generator, m } => self.affine_unchecked(generator, m, v),
            Mode::Virasoro { m } => self.sugawara_unchecked(m, v),
        })
    }

    pub fn affine(&self, generator: usize, m: i64, v: &ModuleVector) -> Result<ModuleVector> {
        self.apply_mode(Mode::Affine { generator, m }, v)
    }

    pub(crate) fn affine_unchecked(&self, generator: usize, m: i64, v: &ModuleVector) -> ModuleVector {
        let mut out = ModuleVector::zero();
        for (mono, c) in v.iter() {
            out.add_scaled(&self.act_monomial(generator, m, mono), c);
        }
        out
    }

    /// `Y_{a,m}` on a single PBW monomial, by straightening.
    pub(crate) fn act_monomial(&self, a: usize, m: i64, mono: &Monomial) -> Arc<ModuleVector> {
        let key = (a, m, mono.clone());
        if let Some(v) = self.action_cache.lock().unwrap().get(&key) {
            return Arc::clone(v);
        }
        let result = Arc::new(self.straighten(a, m, mono));
        self.action_cache
            .lock()
            .unwrap()
            .entry(key)
            .or_insert_with(|| Arc::clone(&result));
        result
    }

    fn straighten(&self, a: usize, m: i64, mono: &Monomial) -> ModuleVector {
        let x = Letter { mode: m, generator: a };
        let Some(&z1) = mono.letters.first() else {
            return match m {
                m if m > 0 => ModuleVector::zero(),
                0 => self
                    .top
                    .act(a, mono.top)
                    .iter()
                    .map(|&(row, c)| (Monomial::top_vector(row), qi(c)))
                    .collect(),
                _ => ModuleVector::basis(Monomial { letters: vec![x], top: mono.top }),
            };
        };
        if m < 0 && x <= z1 {
            let mut letters = Vec::with_capacity(mono.letters.len() + 1);
            letters.push(x);
            letters.extend_from_slice(&mono.letters);
            return ModuleVector::basis(Monomial { letters, top: mono.top });
        }
        // x z1 rest = z1 (x rest) + [x, z1] rest
        let rest = Monomial { letters: mono.letters[1..].to_vec(), top: mono.top };
        let mut out = ModuleVector::zero();
        let x_rest = self.act_monomial(a, m, &rest);
        for (t, c) in x_rest.iter() {
            out.add_scaled(&self.act_monomial(z1.generator, z1.mode, t), c);
        }
        let mm = m + z1.mode;
        for &(c, f) in self.lie.bracket(a, z1.generator) {
            out.add_scaled(&self.act_monomial(c, mm, &rest), &qi(f));
        }
        if mm == 0 {
            let central = m * self.lie.form(a, z1.generator) * self.level;
            if central != 0 {
                out.add_term(rest, qi(central));
            }
        }
        out
    }

    /// Coordinates of `v` in the sorted degree-`d` basis.
    pub fn coordinates(&self, degree: i64, v: &ModuleVector) -> Vec<Q> {
        self.basis(degree).iter().map(|m| v.coefficient(m)).collect()
    }

    /// Number of cached action entries (for diagnostics).
    pub fn cache_len(&self) -> usize {
        self.action_cache.lock().unwrap().len() + self.sugawara_cache.lock().unwrap().len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::build_sl;
    fn sl2_vacuum(d: i64) -> WeylModule {
        build_weyl(&build_sl(2).unwrap(), 1, &Weight::zero(1), d).unwrap()
    }

    #[test]
    fn degree_zero_is_top_space() {
        let m = sl2_vacuum(4);
        assert_eq!(m.dim(0), 1);
        let m1 = build_weyl(&build_sl(2).unwrap(), 1, &Weight(vec![1]), 2).unwrap();
        assert_eq!(m1.dim(0), 2);
        let sl3 = build_sl(3).unwrap();
        assert_eq!(build_weyl(&sl3, 1, &Weight(vec![0, 1]), 0).unwrap().dim(0), 3);
    }

    /// Graded dimensions of the Weyl module: coefficients of prod (1-q^n)^{-dim g},
    /// counted by an independent partition recursion.
    #[test]
    fn weyl_dimensions_match_partition_count() {
        fn colored_partitions(colors: usize, max: usize) -> Vec<u64> {
            let mut c = vec![0u64; max + 1];
            c[0] = 1;
            for part in 1..=max {
                for _ in 0..colors {
                    for s in part..=max {
                        c[s] += c[s - part];
                    }
                }
            }
            c
        }
        let m = sl2_vacuum(5);
        let expect = colored_partitions(3, 5);
        for d in 0..=5 {
            assert_eq!(m.dim(d) as u64, expect[d as usize]);
        }
        let sl3 = build_sl(3).unwrap();
        let m3 = build_weyl(&sl3, 1, &Weight::zero(2), 4).unwrap();
        let expect3 = colored_partitions(8, 4);
        for d in 0..=4 {
            assert_eq!(m3.dim(d) as u64, expect3[d as usize]);
        }
        assert_eq!(m3.dim(4), 726);
    }

    #[test]
    fn positive_modes_kill_top_and_k_acts_as_level() {
        let m = sl2_vacuum(4);
        let vac = m.highest_weight_vector();
        for g in 0..3 {
            for k in 1..=3 {
                assert!(m.affine(g, k, &vac).unwrap().is_zero());
            }
        }
        // [E_1, F_-1] vac = (H_0 + k (E|F)) vac = vac at level 1
        let e = m.lie().e_index(0);
        let f = m.lie().f_index(0);
        let fv = m.affine(f, -1, &vac).unwrap();
        let efv = m.affine(e, 1, &fv).unwrap();
        assert_eq!(efv, vac);
    }

    #[test]
    fn truncation_violation_reported() {
        let m = sl2_vacuum(2);
        let vac = m.highest_weight_vector();
        let v = m.affine(0, -2, &vac).unwrap();
        assert!(matches!(m.affine(0, -1, &v), Err(Error::TruncationViolation { degree: 3, max: 2 })));
    }

    #[test]
    fn canonical_order_produced() {
        let m = sl2_vacuum(4);
        let vac = m.highest_weight_vector();
        let mut v = m.affine(2, -1, &vac).unwrap();
        v = m.affine(0, -2, &v).unwrap();
        v = m.affine(1, -1, &v).unwrap();
        for (mono, _) in v.iter() {
            assert!(mono.is_canonical(), "{mono:?}");
        }
        assert_eq!(v.homogeneous_degree(), Some(4));
    }

    #[test]
    fn h_zero_mode_measures_weight() {
        let m = build_weyl(&build_sl(3).unwrap(), 1, &Weight(vec![1, 0]), 3).unwrap();
        for d in 0..=3 {
            for mono in m.basis(d) {
                let wt = m.monomial_weight(mono);
                for i in 0..2 {
                    let h = m.lie().h_index(i);
                    let v = ModuleVector::basis(mono.clone());
                    let hv = m.affine(h, 0, &v).unwrap();
                    assert_eq!(hv, v.scaled(&qi(wt[i])));
                }
            }
        }
    }
}
