//! JSON input files. Indices in files are 1-based.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::liering::{make_ring_labeled, Bracket, FiniteLieRing, RingElement};
use crate::padic::{QpLieAlgebra, QpVector};

/// `{"p": 3, "moduli": [1, 1, 1], "brackets": {"(1,2)": {"3": 1}}}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingSpec {
    pub p: u64,
    pub moduli: Vec<u32>,
    #[serde(default)]
    pub brackets: BTreeMap<String, BTreeMap<String, i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

fn parse_pair(key: &str) -> Result<(usize, usize)> {
    let bad = || Error::InvalidInput(format!("bracket key {key:?} is not of the form \"(i,j)\""));
    let inner = key.trim().strip_prefix('(').and_then(|s| s.strip_suffix(')')).ok_or_else(bad)?;
    let (a, b) = inner.split_once(',').ok_or_else(bad)?;
    let i: usize = a.trim().parse().map_err(|_| bad())?;
    let j: usize = b.trim().parse().map_err(|_| bad())?;
    if i == 0 || j == 0 {
        return Err(Error::InvalidInput(format!("indices in {key:?} are 1-based")));
    }
    Ok((i - 1, j - 1))
}

fn parse_index(key: &str) -> Result<usize> {
    match key.trim().parse::<usize>() {
        Ok(m) if m > 0 => Ok(m - 1),
        _ => Err(Error::InvalidInput(format!("target index {key:?} must be a positive integer"))),
    }
}

impl RingSpec {
    pub fn from_json(text: &str) -> Result<RingSpec> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("ring spec: {e}")))
    }

    pub fn brackets(&self) -> Result<Vec<Bracket>> {
        let mut out = Vec::new();
        for (key, targets) in &self.brackets {
            let (i, j) = parse_pair(key)?;
            for (m, &c) in targets {
                out.push(Bracket { i, j, m: parse_index(m)?, c });
            }
        }
        Ok(out)
    }

    pub fn build(&self) -> Result<FiniteLieRing> {
        make_ring_labeled(self.p, &self.moduli, &self.brackets()?, self.label.clone())
    }

    pub fn heisenberg(p: u64, k: u32) -> RingSpec {
        RingSpec {
            p,
            moduli: vec![k; 3],
            brackets: BTreeMap::from([("(1,2)".to_string(), BTreeMap::from([("3".to_string(), 1)]))]),
            label: Some(format!("heisenberg Z/{}", p.pow(k))),
        }
    }
}

/// An exact rational given as an integer or as a string such as `"-3/4"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RationalValue {
    Int(i64),
    Text(String),
}

impl RationalValue {
    pub fn value(&self) -> Result<BigRational> {
        match self {
            RationalValue::Int(n) => Ok(BigRational::from_integer((*n).into())),
            RationalValue::Text(s) => BigRational::from_str(s.trim())
                .map_err(|_| Error::InvalidInput(format!("{s:?} is not a rational number"))),
        }
    }
}

/// `{"p": 3, "dimension": 3, "brackets": {"(1,2)": {"3": "1"}}, "basis": [...]}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QpAlgebraSpec {
    pub p: u64,
    pub dimension: usize,
    #[serde(default)]
    pub brackets: BTreeMap<String, BTreeMap<String, RationalValue>>,
    /// Rows are basis vectors in coordinates; defaults to the coordinate basis.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<Vec<RationalValue>>>,
}

impl QpAlgebraSpec {
    pub fn from_json(text: &str) -> Result<QpAlgebraSpec> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("algebra spec: {e}")))
    }

    pub fn build(&self) -> Result<(QpLieAlgebra, Option<Vec<QpVector>>)> {
        let mut constants = Vec::new();
        for (key, targets) in &self.brackets {
            let (i, j) = parse_pair(key)?;
            for (m, c) in targets {
                constants.push((i, j, parse_index(m)?, c.value()?));
            }
        }
        let alg = QpLieAlgebra::new(self.p, self.dimension, &constants)?;
        let basis = match &self.basis {
            None => None,
            Some(rows) => Some(
                rows.iter()
                    .map(|r| r.iter().map(RationalValue::value).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?,
            ),
        };
        Ok((alg, basis))
    }
}

/// `{"generators": [[0, 0, 1]]}`: additive generators in coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubringSpec {
    pub generators: Vec<Vec<i64>>,
}

impl SubringSpec {
    pub fn from_json(text: &str) -> Result<SubringSpec> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("subring spec: {e}")))
    }

    pub fn elements(&self, ring: &FiniteLieRing) -> Result<Vec<RingElement>> {
        self.generators
            .iter()
            .map(|g| {
                if g.len() != ring.rank() {
                    return Err(Error::InvalidInput(format!(
                        "generator {g:?} has length {} for rank {}",
                        g.len(),
                        ring.rank()
                    )));
                }
                Ok(ring.reduce(g))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_spec_round_trip() {
        let text = r#"{"p": 3, "moduli": [1, 1, 1], "brackets": {"(1,2)": {"3": 1}}, "label": "H3"}"#;
        let spec = RingSpec::from_json(text).unwrap();
        let ring = spec.build().unwrap();
        assert_eq!(ring.order(), 27);
        assert_eq!(ring.bracket(&[1, 0, 0], &[0, 1, 0]), vec![0, 0, 1]);
        let again = RingSpec::from_json(&serde_json::to_string(&spec).unwrap()).unwrap();
        assert_eq!(again, spec);
        assert_eq!(RingSpec::heisenberg(3, 1).build().unwrap().order(), 27);
    }

    #[test]
    fn rejects_unknown_keys_and_bad_indices() {
        assert!(RingSpec::from_json(r#"{"p": 3, "moduli": [1], "extra": 1}"#).is_err());
        let zero = RingSpec::from_json(r#"{"p": 3, "moduli": [1, 1], "brackets": {"(0,1)": {"2": 1}}}"#).unwrap();
        assert!(matches!(zero.build(), Err(Error::InvalidInput(_))));
        let garbled = RingSpec::from_json(r#"{"p": 3, "moduli": [1, 1], "brackets": {"1,2": {"2": 1}}}"#).unwrap();
        assert!(matches!(garbled.build(), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn algebra_spec_rationals() {
        let text =
            r#"{"p": 2, "dimension": 3, "brackets": {"(1,2)": {"3": "1/2"}}, "basis": [[1,0,0],[0,1,0],[0,0,"1/4"]]}"#;
        let (alg, basis) = QpAlgebraSpec::from_json(text).unwrap().build().unwrap();
        assert_eq!(alg.class(), 2);
        assert_eq!(basis.unwrap()[2][2], BigRational::new(1.into(), 4.into()));
        let bad = r#"{"p": 2, "dimension": 1, "brackets": {"(1,1)": {"1": "x"}}}"#;
        assert!(QpAlgebraSpec::from_json(bad).unwrap().build().is_err());
    }

    #[test]
    fn subring_generators_are_reduced() {
        let ring = RingSpec::heisenberg(3, 1).build().unwrap();
        let s = SubringSpec::from_json(r#"{"generators": [[0, 0, -1]]}"#).unwrap();
        assert_eq!(s.elements(&ring).unwrap(), vec![vec![0, 0, 2]]);
    }
}
