//! Contravariant pairing `<x u, v> = <u, omega(x) v>` with
//! `omega(Y_{a,m}) = (Y_a^T)_{-m}` and the standard form on the top space.

use serde::Serialize;

use super::{Monomial, ModuleVector, WeylModule};
use crate::linalg;
use crate::rational::Q;

/// Gram matrix of one weight space at a fixed degree.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GramBlock {
    pub weight: Vec<i64>,
    pub basis: Vec<Monomial>,
    #[serde(serialize_with = "serialize_matrix")]
    pub matrix: Vec<Vec<Q>>,
}

fn serialize_matrix<S: serde::Serializer>(m: &[Vec<Q>], s: S) -> Result<S::Ok, S::Error> {
    let v: Vec<Vec<String>> = m.iter().map(|r| r.iter().map(crate::rational::format_q).collect()).collect();
    v.serialize(s)
}

impl GramBlock {
    pub fn rank(&self) -> usize {
        linalg::rank(&self.matrix)
    }
}

/// The degree-`d` slice of the contravariant form, block-diagonal by weight.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GramForm {
    pub degree: i64,
    pub blocks: Vec<GramBlock>,
}

impl GramForm {
    pub fn rank(&self) -> usize {
        self.blocks.iter().map(GramBlock::rank).sum()
    }

    pub fn dim(&self) -> usize {
        self.blocks.iter().map(|b| b.basis.len()).sum()
    }

    pub fn is_symmetric(&self) -> bool {
        self.blocks.iter().all(|b| {
            let n = b.basis.len();
            (0..n).all(|i| (0..i).all(|j| b.matrix[i][j] == b.matrix[j][i]))
        })
    }
}

impl WeylModule {
    /// Basis monomials of degree `d` with the given weight, in sorted order.
    pub fn weight_basis(&self, degree: i64, weight: &[i64]) -> Vec<Monomial> {
        self.basis(degree)
            .iter()
            .filter(|m| self.monomial_weight(m) == weight)
            .cloned()
            .collect()
    }

    /// Distinct weights occurring at degree `d`, sorted.
    pub fn weights_at(&self, degree: i64) -> Vec<Vec<i64>> {
        let mut ws: Vec<Vec<i64>> = self.basis(degree).iter().map(|m| self.monomial_weight(m)).collect();
        ws.sort();
        ws.dedup();
        ws
    }

    /// `omega(Y_{a,m}) = (Y_a^T)_{-m}`.
    pub fn omega(&self, a: usize, m: i64) -> (usize, i64) {
        (self.lie.transpose(a), -m)
    }

    /// `<u, v>` for each `u` of a sorted monomial list, sharing work across
    /// common prefixes.
    pub fn pair_with(&self, monos: &[Monomial], v: &ModuleVector) -> Vec<Q> {
        debug_assert!(monos.windows(2).all(|w| w[0] <= w[1]));
        let mut out = Vec::with_capacity(monos.len());
        self.pair_rec(monos, 0, v, &mut out);
        out
    }

    fn pair_rec(&self, monos: &[Monomial], pos: usize, v: &ModuleVector, out: &mut Vec<Q>) {
        let mut i = 0;
        while i < monos.len() && monos[i].letters.len() == pos {
            out.push(v.coefficient(&Monomial::top_vector(monos[i].top)));
            i += 1;
        }
        while i < monos.len() {
            let letter = monos[i].letters[pos];
            let mut j = i + 1;
            while j < monos.len() && monos[j].letters.get(pos) == Some(&letter) {
                j += 1;
            }
            let (a, m) = self.omega(letter.generator, letter.mode);
            let lowered = self.affine_unchecked(a, m, v);
            if lowered.is_zero() {
                out.extend(std::iter::repeat_n(Q::from_integer(0.into()), j - i));
            } else {
                self.pair_rec(&monos[i..j], pos + 1, &lowered, out);
            }
            i = j;
        }
    }

    /// `<u, v>` for two vectors.
    pub fn pairing(&self, u: &ModuleVector, v: &ModuleVector) -> Q {
        let monos: Vec<Monomial> = u.iter().map(|(m, _)| m.clone()).collect();
        let vals = self.pair_with(&monos, v);
        u.iter().zip(vals).map(|((_, c), p)| c * p).sum()
    }

    /// Gram slice of one weight space.
    pub fn gram_block(&self, degree: i64, weight: &[i64]) -> GramBlock {
        let basis = self.weight_basis(degree, weight);
        let mut cols: Vec<Vec<Q>> = Vec::with_capacity(basis.len());
        for b in &basis {
            cols.push(self.pair_with(&basis, &ModuleVector::basis(b.clone())));
        }
        let n = basis.len();
        let matrix = (0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect();
        GramBlock { weight: weight.to_vec(), basis, matrix }
    }

    /// Full degree-`d` Gram form.
    pub fn gram(&self, degree: i64) -> GramForm {
        let blocks = self
            .weights_at(degree)
            .iter()
            .map(|w| self.gram_block(degree, w))
            .collect();
        GramForm { degree, blocks }
    }

    /// Rank of `G_d`: the dimension of the irreducible quotient at degree `d`.
    pub fn quotient_dim(&self, degree: i64) -> usize {
        self.gram(degree).rank()
    }
}

#[cfg(test)]
mod tests {
    use super::super::build_weyl;
    use crate::lie::{build_sl, Weight};
    use crate::rational::{q, qi};

    #[test]
    fn vacuum_gram_low_degrees() {
        let lie = build_sl(2).unwrap();
        let m = build_weyl(&lie, 1, &Weight::zero(1), 4).unwrap();
        let g0 = m.gram(0);
        assert_eq!(g0.blocks.len(), 1);
        assert_eq!(g0.blocks[0].matrix, vec![vec![qi(1)]]);
        let g1 = m.gram(1);
        assert_eq!(g1.dim(), 3);
        assert_eq!(g1.rank(), 3);
        assert!(g1.is_symmetric());
        let vac = m.highest_weight_vector();
        let l2 = m.sugawara(-2, &vac).unwrap();
        assert_eq!(m.pairing(&l2, &l2), q(1, 2));
    }

    #[test]
    fn grams_are_symmetric_and_weight_blocks_cover_basis() {
        let lie = build_sl(3).unwrap();
        let m = build_weyl(&lie, 1, &Weight(vec![0, 1]), 2).unwrap();
        for d in 0..=2 {
            let g = m.gram(d);
            assert!(g.is_symmetric());
            assert_eq!(g.dim(), m.dim(d));
        }
    }
}
