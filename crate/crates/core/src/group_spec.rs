//! JSON description of a group: a root datum, an optional diagram
//! automorphism and an optional torus catalog.
//!
//! ```json
//! {"family": "GL", "rank": 3, "theta": [2, 1], "tori": ["e", "s1", "s1s2"]}
//! {"cartan": [[2, -1], [-3, 2]], "lattice": "sc"}
//! {"family": "G2", "lattice": "ad"}
//! ```
//!
//! `theta` is a one-based permutation of the simple roots; `tori` lists Weyl
//! words (`"s1s2"`, `"e"`, or arrays of one-based indices).

use std::path::Path;

use serde_json::Value;

use crate::error::{Error, Result};
use crate::linalg::IMat;
use crate::root_datum::{self, automorphism_from_permutation, parse_word, DiagramAutomorphism, Lattice, RootDatum};
use crate::transfer::{self, TorusType};

#[derive(Clone, Debug)]
pub struct GroupSpec {
    pub datum: RootDatum,
    pub theta: DiagramAutomorphism,
    pub tori: Option<Vec<Vec<usize>>>,
}

impl GroupSpec {
    pub fn new(datum: RootDatum) -> Self {
        let theta = DiagramAutomorphism::identity(&datum);
        GroupSpec { datum, theta, tori: None }
    }

    pub fn preset(family: &str, n: usize) -> Result<Self> {
        Ok(Self::new(root_datum::preset(family, n)?))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))?;
        Self::from_str(&text)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn from_str(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Invalid(format!("group spec: {e}")))?;
        Self::from_json(&v)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v.as_object().ok_or_else(|| Error::Invalid("group spec must be a JSON object".into()))?;
        let lattice: Option<Lattice> = match obj.get("lattice") {
            Some(Value::String(s)) => Some(s.parse()?),
            Some(other) => return Err(Error::Invalid(format!("bad lattice {other}"))),
            None => None,
        };
        let rank = match obj.get("rank") {
            Some(r) => Some(r.as_u64().ok_or_else(|| Error::Invalid("rank must be a nonnegative integer".into()))? as usize),
            None => None,
        };
        let datum = if let Some(c) = obj.get("cartan") {
            let cartan: IMat =
                serde_json::from_value(c.clone()).map_err(|e| Error::Invalid(format!("bad cartan matrix: {e}")))?;
            let name = obj.get("name").and_then(Value::as_str).unwrap_or("custom");
            RootDatum::from_cartan(name, &cartan, lattice.unwrap_or(Lattice::Sc))?
        } else {
            let family = obj
                .get("family")
                .or_else(|| obj.get("type"))
                .and_then(Value::as_str)
                .ok_or_else(|| Error::Invalid("group spec needs `family` or `cartan`".into()))?;
            let is_type = family.chars().next().map_or(false, |c| ('A'..='G').contains(&c.to_ascii_uppercase()))
                && family.chars().skip(1).all(|c| c.is_ascii_digit());
            let name = match (is_type, lattice) {
                (true, Some(Lattice::Ad)) => format!("{family}-ad"),
                (true, _) => format!("{family}-sc"),
                (false, _) => family.to_string(),
            };
            root_datum::preset(&name, rank.unwrap_or(0))?
        };
        let theta = match obj.get("theta") {
            Some(p) => {
                let perm: Vec<usize> =
                    serde_json::from_value(p.clone()).map_err(|e| Error::Invalid(format!("bad theta: {e}")))?;
                if perm.iter().any(|&i| i == 0) {
                    return Err(Error::InvalidPermutation(perm));
                }
                automorphism_from_permutation(&datum, &perm.iter().map(|i| i - 1).collect::<Vec<_>>())?
            }
            None => DiagramAutomorphism::identity(&datum),
        };
        let tori = match obj.get("tori") {
            Some(Value::Array(items)) => Some(items.iter().map(parse_word_value).collect::<Result<Vec<_>>>()?),
            Some(other) => return Err(Error::Invalid(format!("bad tori list {other}"))),
            None => None,
        };
        Ok(GroupSpec { datum, theta, tori })
    }

    /// Torus types of the catalog, or the twisted class representatives.
    pub fn torus_catalog(&self) -> Result<Vec<TorusType>> {
        transfer::torus_catalog(&self.datum, &self.theta, self.tori.as_deref())
    }
}

pub fn parse_word_value(v: &Value) -> Result<Vec<usize>> {
    match v {
        Value::String(s) => parse_word(s),
        Value::Array(items) => items
            .iter()
            .map(|i| match i.as_u64() {
                Some(k) if k >= 1 => Ok(k as usize - 1),
                _ => Err(Error::InvalidWord(v.to_string())),
            })
            .collect(),
        other => Err(Error::InvalidWord(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        let g = GroupSpec::from_str(r#"{"family":"GL","rank":3}"#).unwrap();
        assert_eq!(g.datum.rank(), 3);
        assert!(g.theta.is_identity());
        let g = GroupSpec::from_str(r#"{"cartan":[[2,-1],[-3,2]],"lattice":"sc"}"#).unwrap();
        assert_eq!(g.datum.num_positive_roots(), 6);
        let g = GroupSpec::from_str(r#"{"family":"G2","lattice":"ad"}"#).unwrap();
        assert_eq!(g.datum.weyl_order().unwrap(), 12);
        let g = GroupSpec::from_str(r#"{"family":"A","rank":3,"lattice":"ad","theta":[3,2,1],"tori":["e","s1s2",[1,2,3]]}"#)
            .unwrap();
        assert_eq!(g.theta.order(), 2);
        assert_eq!(g.tori.as_ref().unwrap()[2], vec![0, 1, 2]);
        assert_eq!(g.torus_catalog().unwrap().len(), 3);
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(GroupSpec::from_str(r#"{"family":"XX","rank":2}"#).is_err());
        assert!(GroupSpec::from_str(r#"{"family":"GL","rank":2,"theta":[2,1]}"#).is_err());
        assert!(GroupSpec::from_str(r#"{"cartan":[[2,-2],[-2,2]]}"#).is_err());
        assert!(GroupSpec::from_str("[1]").is_err());
    }
}
