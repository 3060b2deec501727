//! Top spaces: exterior powers of the defining representation of sl_n.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lie::{LieData, Weight};

/// `L(Lambda)` realized as `wedge^p C^n`; basis vectors are sorted `p`-subsets
/// in lexicographic order, so index 0 is the highest-weight vector.
#[derive(Debug, Clone)]
pub struct FiniteRep {
    weight: Weight,
    power: usize,
    basis: Vec<Vec<usize>>,
    /// `action[a][col]` lists `(row, coefficient)` of `rho(Y_a) e_col`.
    action: Vec<Vec<Vec<(usize, i64)>>>,
}

fn subsets(n: usize, p: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, p: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, p, &mut Vec::new(), &mut out);
    out
}

/// `e_{ij}` acting on `e_S`; returns the image subset and its sign.
fn matrix_unit_on_wedge(i: usize, j: usize, s: &[usize]) -> Option<(Vec<usize>, i64)> {
    if !s.contains(&j) {
        return None;
    }
    if i == j {
        return Some((s.to_vec(), 1));
    }
    if s.contains(&i) {
        return None;
    }
    let (lo, hi) = (i.min(j), i.max(j));
    let between = s.iter().filter(|&&x| x > lo && x < hi).count();
    let mut t: Vec<usize> = s.iter().map(|&x| if x == j { i } else { x }).collect();
    t.sort_unstable();
    Some((t, if between % 2 == 0 { 1 } else { -1 }))
}

impl FiniteRep {
    pub fn exterior_power(lie: &LieData, p: usize) -> Self {
        let n = lie.n();
        assert!(p <= n);
        let basis = subsets(n, p);
        let index_of = |t: &Vec<usize>| basis.binary_search(t).expect("subset in basis");
        let mut action = Vec::with_capacity(lie.dim());
        for a in 0..lie.dim() {
            let m = lie.matrix(a);
            let mut cols = Vec::with_capacity(basis.len());
            for s in &basis {
                let mut col: Vec<(usize, i64)> = Vec::new();
                for i in 0..n {
                    for j in 0..n {
                        let c = m[i * n + j];
                        if c == 0 {
                            continue;
                        }
                        if let Some((t, sign)) = matrix_unit_on_wedge(i, j, s) {
                            let row = index_of(&t);
                            match col.iter_mut().find(|(r, _)| *r == row) {
                                Some(e) => e.1 += c * sign,
                                None => col.push((row, c * sign)),
                            }
                        }
                    }
                }
                col.retain(|&(_, v)| v != 0);
                col.sort_unstable();
                cols.push(col);
            }
            action.push(cols);
        }
        let mut labels = vec![0i64; lie.rank()];
        if p >= 1 && p < n {
            labels[p - 1] = 1;
        }
        FiniteRep { weight: Weight(labels), power: p, basis, action }
    }

    /// The top space for `Lambda`, checked against `P_+^k`.
    pub fn for_weight(lie: &LieData, weight: &Weight, level: i64) -> Result<Self> {
        if weight.0.len() != lie.rank() || !weight.is_dominant() || weight.level() > level {
            return Err(Error::WeightOutOfRange { weight: weight.0.clone(), level });
        }
        match weight.level() {
            0 => Ok(Self::exterior_power(lie, 0)),
            1 => {
                let p = weight.0.iter().position(|&x| x == 1).unwrap() + 1;
                Ok(Self::exterior_power(lie, p))
            }
            _ => Err(Error::UnsupportedWeight(weight.0.clone())),
        }
    }

    pub fn weight(&self) -> &Weight {
        &self.weight
    }

    pub fn power(&self) -> usize {
        self.power
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn highest_weight_index(&self) -> usize {
        0
    }

    pub fn basis_subset(&self, i: usize) -> &[usize] {
        &self.basis[i]
    }

    /// `rho(Y_a) e_col`.
    pub fn act(&self, a: usize, col: usize) -> &[(usize, i64)] {
        &self.action[a][col]
    }

    /// Dynkin labels of the weight of basis vector `i`.
    pub fn vector_weight(&self, i: usize) -> Vec<i64> {
        let s = &self.basis[i];
        let l = self.weight.0.len();
        (0..l)
            .map(|k| s.contains(&k) as i64 - s.contains(&(k + 1)) as i64)
            .collect()
    }

    pub fn dense(&self, a: usize) -> DMatrix<i64> {
        let d = self.dim();
        let mut m = DMatrix::<i64>::zeros(d, d);
        for col in 0..d {
            for &(row, v) in self.act(a, col) {
                m[(row, col)] += v;
            }
        }
        m
    }

    /// Complex matrix of `sum_a c_a rho(Y_a)`.
    pub fn complex_matrix(&self, coeffs: &[(usize, Complex64)]) -> DMatrix<Complex64> {
        let d = self.dim();
        let mut m = DMatrix::<Complex64>::zeros(d, d);
        for &(a, c) in coeffs {
            for col in 0..d {
                for &(row, v) in self.act(a, col) {
                    m[(row, col)] += c * v as f64;
                }
            }
        }
        m
    }

    /// `[rho(Y_a), rho(Y_b)] = rho([Y_a, Y_b])` for all pairs.
    pub fn check_relations(&self, lie: &LieData) -> Result<()> {
        let mats: Vec<DMatrix<i64>> = (0..lie.dim()).map(|a| self.dense(a)).collect();
        for a in 0..lie.dim() {
            for b in 0..lie.dim() {
                let lhs = &mats[a] * &mats[b] - &mats[b] * &mats[a];
                let mut rhs = DMatrix::<i64>::zeros(self.dim(), self.dim());
                for &(c, v) in lie.bracket(a, b) {
                    rhs += &mats[c] * v;
                }
                if lhs != rhs {
                    return Err(Error::RelationViolation(format!(
                        "representation bracket fails on ({}, {})",
                        lie.label(a),
                        lie.label(b)
                    )));
                }
            }
        }
        Ok(())
    }
}
