//! JSON encoding of modules and vectors; rationals are `"p/q"` strings.

use serde::{Deserialize, Serialize};

use super::{Letter, Monomial, ModuleVector, WeylModule};
use crate::error::Result;
use crate::rational::{format_q, parse_q};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeJson {
    pub degree: i64,
    pub basis: Vec<Monomial>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModuleJson {
    pub algebra: String,
    pub level: i64,
    pub weight: Vec<i64>,
    pub max_degree: i64,
    pub generators: Vec<String>,
    pub central_charge: String,
    pub conformal_weight: String,
    pub degrees: Vec<DegreeJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VectorTermJson {
    pub letters: Vec<Letter>,
    pub top: usize,
    pub coeff: String,
}

impl WeylModule {
    pub fn to_json(&self) -> ModuleJson {
        ModuleJson {
            algebra: format!("sl{}", self.lie.n()),
            level: self.level,
            weight: self.weight.0.clone(),
            max_degree: self.max_degree,
            generators: (0..self.lie.dim()).map(|a| self.lie.label(a)).collect(),
            central_charge: format_q(&self.central_charge()),
            conformal_weight: format_q(&self.conformal_weight()),
            degrees: (0..=self.max_degree)
                .map(|d| DegreeJson { degree: d, basis: self.basis(d).to_vec() })
                .collect(),
        }
    }
}

impl ModuleVector {
    pub fn to_json(&self) -> Vec<VectorTermJson> {
        self.iter()
            .map(|(m, c)| VectorTermJson { letters: m.letters.clone(), top: m.top, coeff: format_q(c) })
            .collect()
    }

    pub fn from_json(terms: &[VectorTermJson]) -> Result<Self> {
        let mut v = ModuleVector::zero();
        for t in terms {
            let mut m = Monomial { letters: t.letters.clone(), top: t.top };
            m.letters.sort();
            v.add_term(m, parse_q(&t.coeff)?);
        }
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine::build_weyl;
    use crate::lie::{build_sl, Weight};

    #[test]
    fn module_json_shape() {
        let m = build_weyl(&build_sl(2).unwrap(), 1, &Weight::zero(1), 1).unwrap();
        let j = serde_json::to_value(m.to_json()).unwrap();
        assert_eq!(j["central_charge"], "1/1");
        assert_eq!(j["degrees"][1]["basis"][0]["letters"][0], serde_json::json!([-1, 0]));
        let g = serde_json::to_value(m.gram(1)).unwrap();
        assert_eq!(g["blocks"][0]["matrix"][0][0], "1/1");
    }

    #[test]
    fn vector_json_roundtrip() {
        let m = build_weyl(&build_sl(2).unwrap(), 1, &Weight::zero(1), 4).unwrap();
        let vac = m.highest_weight_vector();
        let v = m.sugawara(-2, &m.sugawara(-2, &vac).unwrap()).unwrap();
        let text = serde_json::to_string(&v.to_json()).unwrap();
        let back: Vec<VectorTermJson> = serde_json::from_str(&text).unwrap();
        assert_eq!(ModuleVector::from_json(&back).unwrap(), v);
    }
}
