use std::sync::Arc;


use super::{Monomial, ModuleVector, WeylModule};
use crate::error::Result;
use crate::rational::{qi, Q};

impl WeylModule {
    /// `L_m v` from the Sugawara field `(1/2(k+h)) sum_r :X_r(z)^2:`.
    pub fn sugawara(&self, m: i64, v: &ModuleVector) -> Result<ModuleVector> {
        self.apply_mode(super::Mode::Virasoro { m }, v)
    }

    pub(crate) fn sugawara_unchecked(&self, m: i64, v: &ModuleVector) -> ModuleVector {
        let mut out = ModuleVector::zero();
        for (mono, c) in v.iter() {
            out.add_scaled(&self.sugawara_monomial(m, mono), c);
        }
        out
    }

    fn sugawara_monomial(&self, m: i64, mono: &Monomial) -> Arc<ModuleVector> {
        let key = (m, mono.clone());
        if let Some(v) = self.sugawara_cache.lock().unwrap().get(&key) {
            return Arc::clone(v);
        }
        let d = mono.degree();
        let basis = ModuleVector::basis(mono.clone());
        let mut acc = ModuleVector::zero();
        // :X Y:_m = sum_{j<=-1} X_j Y_{m-j} + sum_{j>=0} Y_{m-j} X_j
        for (a, b, c) in &self.casimir {
            for j in (m - d)..=-1 {
                let inner = self.affine_unchecked(*b, m - j, &basis);
                if inner.is_zero() {
                    continue;
                }
                acc.add_scaled(&self.affine_unchecked(*a, j, &inner), c);
            }
            for j in 0..=d {
                let inner = self.affine_unchecked(*a, j, &basis);
                if inner.is_zero() {
                    continue;
                }
                acc.add_scaled(&self.affine_unchecked(*b, m - j, &inner), c);
            }
        }
        let norm = Q::from_integer(1.into()) / qi(2 * (self.level + self.lie.dual_coxeter()));
        let result = Arc::new(acc.scaled(&norm));
        self.sugawara_cache
            .lock()
            .unwrap()
            .entry(key)
            .or_insert_with(|| Arc::clone(&result));
        result
    }

    /// `X_{r,m}^2 v` for the squared orthonormal generator `r`, via its exact
    /// Chevalley expansion.
    pub fn squared_generator(&self, r: usize, m: i64, v: &ModuleVector) -> Result<ModuleVector> {
        let mut out = ModuleVector::zero();
        for (a, b, c) in &self.squares.entries[r].terms {
            let inner = self.affine(*b, m, v)?;
            out.add_scaled(&self.affine(*a, m, &inner)?, c);
        }
        Ok(out)
    }
}
