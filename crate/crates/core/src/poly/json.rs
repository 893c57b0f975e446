//! `{"vars": m, "terms": [{"exp": [..], "coef": "p/q"}]}`

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{MultiIndex, SparsePoly};
use crate::error::{Error, Result};
use crate::numeric::{format_rational, parse_rational};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: Vec<i64>,
    pub coef: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyJson {
    pub vars: usize,
    pub terms: Vec<TermJson>,
}

impl PolyJson {
    pub fn to_poly(&self) -> Result<SparsePoly> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let exp = t
                .exp
                .iter()
                .map(|&e| u32::try_from(e).map_err(|_| Error::NegativeExponent(e)))
                .collect::<Result<Vec<u32>>>()?;
            let coef = match &t.coef {
                Value::String(s) => parse_rational(s)?,
                Value::Number(n) => parse_rational(&n.to_string())?,
                other => return Err(Error::Parse(format!("coefficient must be a string or number, got {other}"))),
            };
            terms.push((MultiIndex::new(exp), coef));
        }
        SparsePoly::from_terms(self.vars, terms)
    }

    pub fn from_poly(p: &SparsePoly) -> Self {
        PolyJson {
            vars: p.num_vars(),
            terms: p
                .terms()
                .map(|(idx, c)| TermJson {
                    exp: idx.entries().iter().map(|&e| e as i64).collect(),
                    coef: Value::String(format_rational(c)),
                })
                .collect(),
        }
    }
}

impl SparsePoly {
    pub fn from_json_str(s: &str) -> Result<SparsePoly> {
        let raw: PolyJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        raw.to_poly()
    }

    pub fn to_json_value(&self) -> Value {
        serde_json::to_value(PolyJson::from_poly(self)).expect("plain data")
    }
}

impl Serialize for SparsePoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyJson::from_poly(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for SparsePoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        PolyJson::deserialize(d)?
            .to_poly()
            .map_err(serde::de::Error::custom)
    }
}
