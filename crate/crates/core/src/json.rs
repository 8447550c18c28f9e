//! JSON encodings of the domain types.
//!
//! Rationals are written as decimal strings (`{"num": "-3", "den": "2"}`)
//! since coefficients can exceed native number ranges. Indices are 0-based.
//!
//! * `LieAlgebra`: `{name, dim, labels, sc: [[i, j, k, num, den], ...]}`
//!   with `i < j` only.
//! * `AlternatingForm`: `{dim, degree, terms: [{idx, num, den}, ...]}` in
//!   lexicographic `idx` order.
//! * `Subspace`: `{ambient_dim, dim, basis: [[{i, num, den}, ...], ...]}`,
//!   rows in reduced echelon form.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::Error;
use crate::exterior::AlternatingForm;
use crate::liealg::LieAlgebra;
use crate::linalg::{Rational, Subspace};

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
}

/// Parses `text`, reporting the JSON path of the first violation.
pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T, JsonError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        JsonError::Schema {
            path: if path.is_empty() { ".".into() } else { path },
            message: e.into_inner().to_string(),
        }
    })
}

/// Pretty JSON with a trailing newline; deterministic for equal inputs.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("domain types serialize");
    s.push('\n');
    s
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalJson {
    pub num: String,
    pub den: String,
}

pub fn parse_rational(num: &str, den: &str) -> Result<Rational, Error> {
    let bad = |what: &str, s: &str| Error::InvalidForm(format!("invalid {what} {s:?}"));
    let n = BigInt::from_str(num.trim()).map_err(|_| bad("numerator", num))?;
    let d = BigInt::from_str(den.trim()).map_err(|_| bad("denominator", den))?;
    if d.is_zero() || d.is_negative() {
        return Err(bad("denominator", den));
    }
    Ok(Rational::new(n, d))
}

impl From<&Rational> for RationalJson {
    fn from(q: &Rational) -> Self {
        RationalJson {
            num: q.numer().to_string(),
            den: q.denom().to_string(),
        }
    }
}

impl TryFrom<RationalJson> for Rational {
    type Error = Error;
    fn try_from(q: RationalJson) -> Result<Self, Error> {
        parse_rational(&q.num, &q.den)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LieAlgebraJson {
    pub name: String,
    pub dim: usize,
    pub labels: Vec<String>,
    pub sc: Vec<(usize, usize, usize, String, String)>,
}

impl From<LieAlgebra> for LieAlgebraJson {
    fn from(g: LieAlgebra) -> Self {
        LieAlgebraJson {
            name: g.name().to_string(),
            dim: g.dim(),
            labels: g.labels().to_vec(),
            sc: g
                .structure_constants()
                .map(|(i, j, k, c)| (i, j, k, c.numer().to_string(), c.denom().to_string()))
                .collect(),
        }
    }
}

impl TryFrom<LieAlgebraJson> for LieAlgebra {
    type Error = Error;
    fn try_from(j: LieAlgebraJson) -> Result<Self, Error> {
        if j.labels.len() != j.dim {
            return Err(Error::DimensionMismatch {
                expected: j.dim,
                found: j.labels.len(),
            });
        }
        let triples = j
            .sc
            .into_iter()
            .map(|(i, jj, k, num, den)| Ok((i, jj, k, parse_rational(&num, &den)?)))
            .collect::<Result<Vec<_>, Error>>()?;
        LieAlgebra::from_structure_constants(j.name, j.labels, triples)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub idx: Vec<usize>,
    pub num: String,
    pub den: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlternatingFormJson {
    pub dim: usize,
    pub degree: usize,
    pub terms: Vec<TermJson>,
}

impl From<AlternatingForm> for AlternatingFormJson {
    fn from(w: AlternatingForm) -> Self {
        AlternatingFormJson {
            dim: w.dim(),
            degree: w.degree(),
            terms: w
                .terms()
                .map(|(idx, c)| TermJson {
                    idx: idx.indices().to_vec(),
                    num: c.numer().to_string(),
                    den: c.denom().to_string(),
                })
                .collect(),
        }
    }
}

impl TryFrom<AlternatingFormJson> for AlternatingForm {
    type Error = Error;
    fn try_from(j: AlternatingFormJson) -> Result<Self, Error> {
        let mut seen = std::collections::BTreeSet::new();
        let terms = j
            .terms
            .into_iter()
            .map(|t| {
                if !seen.insert(t.idx.clone()) {
                    return Err(Error::InvalidForm(format!("duplicate term {:?}", t.idx)));
                }
                Ok((t.idx, parse_rational(&t.num, &t.den)?))
            })
            .collect::<Result<Vec<_>, Error>>()?;
        AlternatingForm::from_terms(j.dim, j.degree, terms)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryJson {
    pub i: usize,
    pub num: String,
    pub den: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubspaceJson {
    pub ambient_dim: usize,
    pub dim: usize,
    pub basis: Vec<Vec<EntryJson>>,
}

impl From<Subspace> for SubspaceJson {
    fn from(s: Subspace) -> Self {
        SubspaceJson {
            ambient_dim: s.ambient_dim(),
            dim: s.dim(),
            basis: s
                .basis()
                .iter()
                .map(|v| {
                    v.iter()
                        .map(|(i, c)| EntryJson {
                            i: *i,
                            num: c.numer().to_string(),
                            den: c.denom().to_string(),
                        })
                        .collect()
                })
                .collect(),
        }
    }
}

impl TryFrom<SubspaceJson> for Subspace {
    type Error = Error;
    fn try_from(j: SubspaceJson) -> Result<Self, Error> {
        let mut vectors = Vec::with_capacity(j.basis.len());
        for row in j.basis {
            let mut v = Vec::with_capacity(row.len());
            for e in row {
                if e.i >= j.ambient_dim {
                    return Err(Error::IndexOutOfRange {
                        index: e.i,
                        dim: j.ambient_dim,
                    });
                }
                v.push((e.i, parse_rational(&e.num, &e.den)?));
            }
            vectors.push(crate::linalg::collect_sparse(v));
        }
        let s = Subspace::from_sparse(j.ambient_dim, vectors);
        if s.dim() != j.dim {
            return Err(Error::DimensionMismatch {
                expected: j.dim,
                found: s.dim(),
            });
        }
        Ok(s)
    }
}

/// File written by the `invariants` command.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormBasis {
    pub algebra: String,
    pub dim: usize,
    pub degree: usize,
    pub forms: Vec<AlternatingForm>,
}

/// Either a single form or a [`FormBasis`]; used when reading form files.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum FormFile {
    Basis(FormBasis),
    Single(AlternatingForm),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int, rat};
    use crate::liealg::Series;

    #[test]
    fn rational_encoding() {
        let q = rat(-6, 4);
        let j = RationalJson::from(&q);
        assert_eq!(j, RationalJson { num: "-3".into(), den: "2".into() });
        assert_eq!(Rational::try_from(j).unwrap(), q);
        assert!(parse_rational("1", "0").is_err());
        assert!(parse_rational("1", "-2").is_err());
        assert!(parse_rational("x", "1").is_err());
    }

    #[test]
    fn algebra_file_layout() {
        let g = LieAlgebra::build(Series::A, 1).unwrap();
        let text = to_json(&g);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["dim"], 3);
        assert_eq!(v["labels"][0], "H");
        // [H, X] = 2X
        assert_eq!(v["sc"][0], serde_json::json!([0, 1, 1, "2", "1"]));
        assert_eq!(from_json::<LieAlgebra>(&text).unwrap(), g);
    }

    #[test]
    fn form_file_layout() {
        let w = AlternatingForm::from_terms(3, 2, [(vec![1, 2], rat(1, 3)), (vec![0, 1], int(-2))]).unwrap();
        let v: serde_json::Value = serde_json::from_str(&to_json(&w)).unwrap();
        assert_eq!(v["terms"][0], serde_json::json!({"idx": [0, 1], "num": "-2", "den": "1"}));
        assert_eq!(v["terms"][1]["den"], "3");
    }

    #[test]
    fn schema_errors_carry_path() {
        let text = r#"{"dim": 3, "degree": 2, "terms": [{"idx": [0, 1], "num": "1", "den": "0"}]}"#;
        let err = from_json::<AlternatingForm>(text).unwrap_err();
        assert!(err.to_string().contains("denominator"), "{err}");

        let text = r#"{"dim": 3, "degree": 2, "terms": [{"idx": [0, "a"], "num": "1", "den": "1"}]}"#;
        let JsonError::Schema { path, .. } = from_json::<AlternatingForm>(text).unwrap_err();
        assert_eq!(path, "terms[0].idx[1]");
    }

    #[test]
    fn jacobi_checked_on_load() {
        let text = r#"{"name": "bad", "dim": 3, "labels": ["a","b","c"],
            "sc": [[0,1,2,"1","1"],[1,2,0,"1","1"],[0,2,0,"1","1"]]}"#;
        let err = from_json::<LieAlgebra>(text).unwrap_err();
        assert!(err.to_string().contains("Jacobi"), "{err}");
    }

    #[test]
    fn form_file_accepts_both_shapes() {
        let w = AlternatingForm::monomial(3, &[0, 1, 2]).unwrap();
        let single: FormFile = from_json(&to_json(&w)).unwrap();
        assert!(matches!(single, FormFile::Single(_)));
        let basis = FormBasis {
            algebra: "A1".into(),
            dim: 3,
            degree: 3,
            forms: vec![w],
        };
        let parsed: FormFile = from_json(&to_json(&basis)).unwrap();
        assert!(matches!(parsed, FormFile::Basis(b) if b == basis));
    }
}
