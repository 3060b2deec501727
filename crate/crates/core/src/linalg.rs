//! Exact linear algebra over the rationals by fraction-free elimination.
//!
//! Rows are scaled to primitive integer vectors and reduced with
//! integer-only row operations `p * row - c * pivot_row`, followed by
//! division by the row content. No floating point is involved.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::Q;

/// Scales a rational row to a primitive integer row with the same span.
pub fn integer_row(row: &[Q]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for x in row {
        if !x.is_zero() {
            lcm = lcm.lcm(x.denom());
        }
    }
    let mut out: Vec<BigInt> = row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    make_primitive(&mut out);
    out
}

fn make_primitive(row: &mut [BigInt]) {
    let mut g = BigInt::zero();
    for x in row.iter() {
        if !x.is_zero() {
            g = g.gcd(x);
            if g.is_one() {
                break;
            }
        }
    }
    if g.is_zero() || g.is_one() {
        if let Some(lead) = row.iter().find(|x| !x.is_zero()) {
            if lead.is_negative() {
                row.iter_mut().for_each(|x| *x = -&*x);
            }
        }
        return;
    }
    let neg = row.iter().find(|x| !x.is_zero()).map(|x| x.is_negative()).unwrap_or(false);
    for x in row.iter_mut() {
        *x = &*x / &g;
        if neg {
            *x = -&*x;
        }
    }
}

/// Row echelon form grown one row at a time.
#[derive(Debug, Clone)]
pub struct Echelon {
    ncols: usize,
    /// `(pivot column, primitive integer row)`, sorted by pivot column.
    rows: Vec<(usize, Vec<BigInt>)>,
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Echelon { ncols, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|(p, _)| *p).collect()
    }

    /// Reduces `row` against the current pivots; returns the remainder.
    pub fn reduce(&self, mut row: Vec<BigInt>) -> Vec<BigInt> {
        assert_eq!(row.len(), self.ncols);
        for (p, prow) in &self.rows {
            if row[*p].is_zero() {
                continue;
            }
            let a = &prow[*p];
            let c = row[*p].clone();
            let g = a.gcd(&c);
            let (ma, mc) = (a / &g, &c / &g);
            for (x, y) in row.iter_mut().zip(prow) {
                *x = &*x * &ma - y * &mc;
            }
            make_primitive(&mut row);
        }
        row
    }

    /// Inserts a row; returns `true` when it was independent of the previous ones.
    pub fn insert(&mut self, row: Vec<BigInt>) -> bool {
        let row = self.reduce(row);
        match row.iter().position(|x| !x.is_zero()) {
            None => false,
            Some(p) => {
                let at = self.rows.partition_point(|(q, _)| *q < p);
                self.rows.insert(at, (p, row));
                true
            }
        }
    }

    /// Rows as decimal strings, for checkpoints.
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        self.rows.iter().map(|(_, r)| r.iter().map(BigInt::to_string).collect()).collect()
    }

    /// Rebuilds an echelon form from rows produced by [`Echelon::to_strings`].
    pub fn from_strings(ncols: usize, rows: &[Vec<String>]) -> Option<Self> {
        let mut ech = Echelon::new(ncols);
        for r in rows {
            let row: Vec<BigInt> = r.iter().map(|x| x.parse().ok()).collect::<Option<_>>()?;
            if row.len() != ncols {
                return None;
            }
            ech.insert(row);
        }
        Some(ech)
    }

    pub fn insert_rational(&mut self, row: &[Q]) -> bool {
        self.insert(integer_row(row))
    }

    /// Solves `x` from the echelon rows of an augmented system `[A | b]`
    /// (last column is `b`), with the given free-variable assignment.
    fn back_substitute(&self, free_values: &[(usize, Q)], homogeneous: bool) -> Vec<Q> {
        let nvars = self.ncols - 1;
        let mut x = vec![Q::zero(); nvars];
        for (f, v) in free_values {
            x[*f] = v.clone();
        }
        for (p, row) in self.rows.iter().rev() {
            let mut acc = if homogeneous {
                Q::zero()
            } else {
                Q::from_integer(row[nvars].clone())
            };
            for j in p + 1..nvars {
                if !row[j].is_zero() {
                    acc -= Q::from_integer(row[j].clone()) * &x[j];
                }
            }
            x[*p] = acc / Q::from_integer(row[*p].clone());
        }
        x
    }
}

/// Outcome of solving an affine system exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum LinearSolution {
    #[serde(rename = "unique-solution")]
    Unique {
        #[serde(with = "crate::rational::serde_qvec")]
        values: Vec<Q>,
    },
    Family {
        #[serde(with = "crate::rational::serde_qvec")]
        particular: Vec<Q>,
        #[serde(with = "serde_qmat")]
        kernel: Vec<Vec<Q>>,
    },
    Infeasible,
}

mod serde_qmat {
    use crate::rational::{format_q, parse_q, Q};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &[Vec<Q>], s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<Vec<String>> = m.iter().map(|r| r.iter().map(format_q).collect()).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Q>>, D::Error> {
        let v = Vec::<Vec<String>>::deserialize(d)?;
        v.iter()
            .map(|r| r.iter().map(|x| parse_q(x).map_err(serde::de::Error::custom)).collect())
            .collect()
    }
}

/// Exact solution set of `A x = b` from an echelon form of `[A | b]`.
pub fn solve_from_echelon(ech: &Echelon) -> LinearSolution {
    let nvars = ech.ncols() - 1;
    let pivots = ech.pivots();
    if pivots.contains(&nvars) {
        return LinearSolution::Infeasible;
    }
    let free: Vec<usize> = (0..nvars).filter(|j| !pivots.contains(j)).collect();
    let particular = ech.back_substitute(&free.iter().map(|&f| (f, Q::zero())).collect::<Vec<_>>(), false);
    if free.is_empty() {
        return LinearSolution::Unique { values: particular };
    }
    let kernel = free
        .iter()
        .map(|&f| {
            let assign: Vec<(usize, Q)> = free
                .iter()
                .map(|&g| (g, if g == f { Q::one() } else { Q::zero() }))
                .collect();
            ech.back_substitute(&assign, true)
        })
        .collect();
    LinearSolution::Family { particular, kernel }
}

/// Solves `A x = b` for a dense rational system.
pub fn solve_affine(a: &[Vec<Q>], b: &[Q]) -> LinearSolution {
    assert_eq!(a.len(), b.len());
    let nvars = a.first().map(|r| r.len()).unwrap_or(0);
    let mut ech = Echelon::new(nvars + 1);
    for (row, rhs) in a.iter().zip(b) {
        let mut aug = row.clone();
        aug.push(rhs.clone());
        ech.insert_rational(&aug);
    }
    solve_from_echelon(&ech)
}

pub fn rank(rows: &[Vec<Q>]) -> usize {
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut ech = Echelon::new(ncols);
    for r in rows {
        ech.insert_rational(r);
    }
    ech.rank()
}

/// Indices of a maximal set of independent rows, chosen greedily in order.
pub fn independent_rows(rows: &[Vec<Q>]) -> Vec<usize> {
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut ech = Echelon::new(ncols);
    rows.iter()
        .enumerate()
        .filter_map(|(i, r)| ech.insert_rational(r).then_some(i))
        .collect()
}

/// Inverse of a nonsingular square rational matrix (Gauss-Jordan).
pub fn invert(m: &[Vec<Q>]) -> Option<Vec<Vec<Q>>> {
    let n = m.len();
    let mut a: Vec<Vec<Q>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let inv = Q::one() / &a[col][col];
        for x in a[col].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r == col || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};
    use proptest::prelude::*;

    #[test]
    fn unique_solution() {
        let a = vec![vec![qi(2), qi(1)], vec![qi(1), qi(3)], vec![qi(3), qi(4)]];
        let b = vec![qi(5), qi(10), qi(15)];
        assert_eq!(solve_affine(&a, &b), LinearSolution::Unique { values: vec![qi(1), qi(3)] });
    }

    #[test]
    fn infeasible_and_family() {
        let a = vec![vec![qi(1), qi(1)], vec![qi(2), qi(2)]];
        assert_eq!(solve_affine(&a, &[qi(1), qi(3)]), LinearSolution::Infeasible);
        match solve_affine(&a, &[qi(1), qi(2)]) {
            LinearSolution::Family { particular, kernel } => {
                assert_eq!(particular, vec![qi(1), qi(0)]);
                assert_eq!(kernel, vec![vec![qi(-1), qi(1)]]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rational_entries_and_rank() {
        let rows = vec![
            vec![q(1, 2), q(1, 3), q(1, 4)],
            vec![q(1, 3), q(1, 4), q(1, 5)],
            vec![q(5, 6), q(7, 12), q(9, 20)],
        ];
        assert_eq!(rank(&rows), 2);
        assert_eq!(independent_rows(&rows), vec![0, 1]);
    }

    #[test]
    fn inverse_of_hilbert_matrix() {
        let h: Vec<Vec<Q>> = (0..4).map(|i| (0..4).map(|j| q(1, i + j + 1)).collect()).collect();
        let inv = invert(&h).unwrap();
        assert_eq!(inv[0][0], qi(16));
        assert_eq!(inv[3][3], qi(2800));
        assert!(invert(&[vec![qi(1), qi(2)], vec![qi(2), qi(4)]]).is_none());
    }

    proptest! {
        /// Any reported unique solution satisfies the system exactly.
        #[test]
        fn unique_solutions_verify(entries in proptest::collection::vec(-6i64..6, 12), rhs in proptest::collection::vec(-6i64..6, 4)) {
            let a: Vec<Vec<Q>> = entries.chunks(3).map(|c| c.iter().map(|&x| qi(x)).collect()).collect();
            let b: Vec<Q> = rhs.iter().map(|&x| qi(x)).collect();
            match solve_affine(&a, &b) {
                LinearSolution::Unique { values } => {
                    for (row, r) in a.iter().zip(&b) {
                        let lhs: Q = row.iter().zip(&values).map(|(x, y)| x * y).sum();
                        prop_assert_eq!(&lhs, r);
                    }
                }
                LinearSolution::Family { particular, kernel } => {
                    for (row, r) in a.iter().zip(&b) {
                        let lhs: Q = row.iter().zip(&particular).map(|(x, y)| x * y).sum();
                        prop_assert_eq!(&lhs, r);
                        for k in &kernel {
                            let h: Q = row.iter().zip(k).map(|(x, y)| x * y).sum();
                            prop_assert!(h.is_zero());
                        }
                    }
                }
                LinearSolution::Infeasible => {
                    let mut aug = a.clone();
                    for (row, r) in aug.iter_mut().zip(&b) { row.push(r.clone()); }
                    prop_assert!(rank(&aug) > rank(&a));
                }
            }
        }

        /// Rank does not depend on the row order.
        #[test]
        fn rank_permutation_invariant(entries in proptest::collection::vec(-3i64..3, 16)) {
            let rows: Vec<Vec<Q>> = entries.chunks(4).map(|c| c.iter().map(|&x| qi(x)).collect()).collect();
            let mut rev = rows.clone();
            rev.reverse();
            prop_assert_eq!(rank(&rows), rank(&rev));
        }
    }
}
