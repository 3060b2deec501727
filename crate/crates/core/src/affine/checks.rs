//! Exhaustive relation checks on PBW basis vectors up to the truncation degree.

use std::collections::HashMap;

use serde::Serialize;

use super::{Monomial, ModuleVector, WeylModule};
use crate::rational::{format_q, qi, Q};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub checks: usize,
    pub first_failure: Option<String>,
}

impl CheckReport {
    pub(crate) fn new(name: &str) -> Self {
        CheckReport { name: name.to_string(), checks: 0, first_failure: None }
    }

    pub fn passed(&self) -> bool {
        self.first_failure.is_none()
    }

    pub(crate) fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok && self.first_failure.is_none() {
            self.first_failure = Some(describe());
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VirasoroReport {
    pub central_charge: String,
    pub virasoro: CheckReport,
    pub primary: CheckReport,
}

impl VirasoroReport {
    pub fn passed(&self) -> bool {
        self.virasoro.passed() && self.primary.passed()
    }
}

impl WeylModule {
    fn fits(&self, d: i64, lowerings: &[i64]) -> bool {
        lowerings.iter().all(|&m| d - m <= self.max_degree)
    }

    /// `[L_m, L_n] = (m-n) L_{m+n} + c/12 (m^3-m) delta_{m+n,0}` and
    /// `[L_m, X_n] = -n X_{m+n}` on every basis vector, `|m|,|n| <= max_mode`.
    pub fn verify_virasoro(&self, max_mode: i64) -> VirasoroReport {
        let c = self.central_charge();
        let mut vir = CheckReport::new("virasoro");
        let mut prim = CheckReport::new("primary");
        for d in 0..=self.max_degree {
            for b in self.basis(d) {
                let v = ModuleVector::basis(b.clone());
                for m in -max_mode..=max_mode {
                    for n in -max_mode..m {
                        if !self.fits(d, &[m, n, m + n]) {
                            continue;
                        }
                        let lhs = self
                            .sugawara_unchecked(m, &self.sugawara_unchecked(n, &v))
                            .sub(&self.sugawara_unchecked(n, &self.sugawara_unchecked(m, &v)));
                        let mut rhs = self.sugawara_unchecked(m + n, &v).scaled(&qi(m - n));
                        if m + n == 0 {
                            rhs.add_scaled(&v, &(&c * qi(m * m * m - m) / qi(12)));
                        }
                        vir.record(lhs == rhs, || format!("[L_{m}, L_{n}] on {b:?}"));
                    }
                    for n in -max_mode..=max_mode {
                        if !self.fits(d, &[m, n, m + n]) {
                            continue;
                        }
                        for a in 0..self.lie.dim() {
                            let lhs = self
                                .sugawara_unchecked(m, &self.affine_unchecked(a, n, &v))
                                .sub(&self.affine_unchecked(a, n, &self.sugawara_unchecked(m, &v)));
                            let rhs = self.affine_unchecked(a, m + n, &v).scaled(&qi(-n));
                            prim.record(lhs == rhs, || {
                                format!("[L_{m}, {}_{n}] on {b:?}", self.lie.label(a))
                            });
                        }
                    }
                }
            }
        }
        VirasoroReport { central_charge: format_q(&c), virasoro: vir, primary: prim }
    }

    /// `[X_m, Y_n] = [X,Y]_{m+n} + m (X|Y) delta_{m+n,0} k` on every basis vector.
    pub fn verify_affine_relations(&self, max_mode: i64) -> CheckReport {
        let mut rep = CheckReport::new("affine");
        let dim = self.lie.dim();
        for d in 0..=self.max_degree {
            for b in self.basis(d) {
                let v = ModuleVector::basis(b.clone());
                for m in -max_mode..=max_mode {
                    for n in -max_mode..=max_mode {
                        if !self.fits(d, &[m, n, m + n]) {
                            continue;
                        }
                        for x in 0..dim {
                            let xv = self.affine_unchecked(x, m, &v);
                            for y in 0..dim {
                                if (x, m) >= (y, n) {
                                    continue;
                                }
                                let lhs = self
                                    .affine_unchecked(x, m, &self.affine_unchecked(y, n, &v))
                                    .sub(&self.affine_unchecked(y, n, &xv));
                                let mut rhs = ModuleVector::zero();
                                for &(z, f) in self.lie.bracket(x, y) {
                                    rhs.add_scaled(&self.affine_unchecked(z, m + n, &v), &qi(f));
                                }
                                if m + n == 0 {
                                    rhs.add_scaled(&v, &qi(m * self.lie.form(x, y) * self.level));
                                }
                                rep.record(lhs == rhs, || {
                                    format!(
                                        "[{}_{m}, {}_{n}] on {b:?}",
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

    /// `<x u, v> = <u, omega(x) v>` for basis `u, v` and affine modes `|m| <= max_mode`.
    pub fn verify_contravariance(&self, max_mode: i64) -> CheckReport {
        let mut rep = CheckReport::new("contravariance");
        let grams: Vec<HashMap<(Monomial, Monomial), Q>> = (0..=self.max_degree)
            .map(|d| {
                let mut map = HashMap::new();
                for block in self.gram(d).blocks {
                    for (i, u) in block.basis.iter().enumerate() {
                        for (j, v) in block.basis.iter().enumerate() {
                            map.insert((u.clone(), v.clone()), block.matrix[i][j].clone());
                        }
                    }
                }
                map
            })
            .collect();
        let zero = qi(0);
        for d in 0..=self.max_degree {
            for u in self.basis(d) {
                let uv = ModuleVector::basis(u.clone());
                for m in -max_mode..=max_mode {
                    let target = d - m;
                    if target < 0 || target > self.max_degree {
                        continue;
                    }
                    for a in 0..self.lie.dim() {
                        let xu = self.affine_unchecked(a, m, &uv);
                        let (oa, om) = self.omega(a, m);
                        for v in self.basis(target) {
                            let lhs: Q = xu
                                .iter()
                                .map(|(mono, c)| {
                                    c * grams[target as usize].get(&(mono.clone(), v.clone())).unwrap_or(&zero)
                                })
                                .sum();
                            let ov = self.affine_unchecked(oa, om, &ModuleVector::basis(v.clone()));
                            let rhs = ov.iter().map(|(mono, c)| {
                                c * grams[d as usize].get(&(u.clone(), mono.clone())).unwrap_or(&zero)
                            });
                            let rhs: Q = rhs.sum();
                            rep.record(lhs == rhs, || {
                                format!("<{}_{m} {u:?}, {v:?}>", self.lie.label(a))
                            });
                        }
                    }
                }
            }
        }
        rep
    }

    /// The quadratic Casimir of the zero modes is `(Lambda|Lambda + 2 rho)` on the top space.
    pub fn verify_casimir(&self) -> CheckReport {
        let mut rep = CheckReport::new("casimir");
        let expect = self.lie.casimir_eigenvalue(&self.weight);
        for b in self.basis(0) {
            let v = ModuleVector::basis(b.clone());
            let mut acc = ModuleVector::zero();
            for (a, c, x) in self.casimir_tensor() {
                acc.add_scaled(&self.affine_unchecked(*a, 0, &self.affine_unchecked(*c, 0, &v)), x);
            }
            rep.record(acc == v.scaled(&expect), || format!("Casimir on {b:?}"));
        }
        rep
    }

    /// `L_0 = h_Lambda + degree` on every basis vector.
    pub fn verify_l0_spectrum(&self) -> CheckReport {
        let mut rep = CheckReport::new("l0-spectrum");
        let h = self.conformal_weight();
        for d in 0..=self.max_degree {
            for b in self.basis(d) {
                let v = ModuleVector::basis(b.clone());
                let ok = self.sugawara_unchecked(0, &v) == v.scaled(&(&h + qi(d)));
                rep.record(ok, || format!("L_0 on {b:?}"));
            }
        }
        rep
    }
}

#[cfg(test)]
mod tests {
    use super::super::build_weyl;
    use crate::lie::{build_sl, Weight};

    #[test]
    fn sl2_vacuum_relations_to_degree_three() {
        let m = build_weyl(&build_sl(2).unwrap(), 1, &Weight::zero(1), 3).unwrap();
        let vir = m.verify_virasoro(3);
        assert!(vir.passed(), "{vir:?}");
        assert_eq!(vir.central_charge, "1/1");
        assert!(m.verify_affine_relations(2).passed());
        assert!(m.verify_contravariance(3).passed());
        assert!(m.verify_l0_spectrum().passed());
        assert!(m.verify_casimir().passed());
    }

    #[test]
    fn level_two_spin_half_relations() {
        let m = build_weyl(&build_sl(2).unwrap(), 2, &Weight(vec![1]), 2).unwrap();
        let vir = m.verify_virasoro(2);
        assert!(vir.passed(), "{vir:?}");
        assert_eq!(vir.central_charge, "3/2");
        assert!(m.verify_affine_relations(2).passed());
        assert!(m.verify_contravariance(2).passed());
        assert!(m.verify_casimir().passed());
        assert_eq!(m.verify_casimir().checks, 2);
    }
}
