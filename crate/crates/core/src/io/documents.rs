//! JSON input documents. Coordinate labels are 1-based throughout.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::git::{Character, GitError, SupportSet, WeightConfig};
use crate::semigroup::{PolyMatrix, SemigroupError, SparsePolynomial};
use crate::toric::{LatticePolytope, StackyFan, ToricError};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported schema_version {0}, expected {SCHEMA_VERSION}")]
    Version(u32),
    #[error("invalid document: {0}")]
    Invalid(String),
    #[error(transparent)]
    Git(#[from] GitError),
    #[error(transparent)]
    Toric(#[from] ToricError),
    #[error(transparent)]
    Semigroup(#[from] SemigroupError),
}

fn check_version(v: u32) -> Result<(), DocumentError> {
    if v == SCHEMA_VERSION {
        Ok(())
    } else {
        Err(DocumentError::Version(v))
    }
}

/// A character written as `[free, torsion]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterPair(pub Vec<i64>, pub Vec<i64>);

impl From<CharacterPair> for Character {
    fn from(p: CharacterPair) -> Self {
        Character {
            free: p.0,
            torsion: p.1,
        }
    }
}

impl From<&Character> for CharacterPair {
    fn from(c: &Character) -> Self {
        CharacterPair(c.free.clone(), c.torsion.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CharacterSetEntry {
    pub characters: Vec<CharacterPair>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
}

/// A squarefree monomial ideal, each generator given by its variable labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdealEntry {
    pub generators: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightConfigDocument {
    pub schema_version: u32,
    pub rank: usize,
    #[serde(default)]
    pub torsion: Vec<i64>,
    pub weights: Vec<CharacterPair>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi: Option<CharacterPair>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub character_sets: BTreeMap<String, CharacterSetEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ideal: Option<IdealEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
}

impl WeightConfigDocument {
    pub fn from_json(s: &str) -> Result<Self, DocumentError> {
        let doc: Self = serde_json::from_str(s)?;
        check_version(doc.schema_version)?;
        if let Some(labels) = &doc.labels {
            if labels.len() != doc.weights.len() {
                return Err(DocumentError::Invalid(format!(
                    "{} labels for {} weights",
                    labels.len(),
                    doc.weights.len()
                )));
            }
        }
        Ok(doc)
    }

    pub fn from_config(w: &WeightConfig, chi: Option<&Character>) -> Self {
        WeightConfigDocument {
            schema_version: SCHEMA_VERSION,
            rank: w.free_rank(),
            torsion: w.torsion_orders().to_vec(),
            weights: w.weights().iter().map(CharacterPair::from).collect(),
            chi: chi.map(CharacterPair::from),
            labels: None,
            character_sets: BTreeMap::new(),
            ideal: None,
            provenance: None,
        }
    }

    pub fn config(&self) -> Result<WeightConfig, DocumentError> {
        let weights = self.weights.iter().cloned().map(Character::from).collect();
        Ok(WeightConfig::new(self.rank, self.torsion.clone(), weights)?)
    }

    pub fn chi(&self, w: &WeightConfig) -> Result<Option<Character>, DocumentError> {
        Ok(match &self.chi {
            Some(c) => Some(w.character(c.clone().into())?),
            None => None,
        })
    }

    pub fn character_set(
        &self,
        w: &WeightConfig,
        name: &str,
    ) -> Result<Vec<Character>, DocumentError> {
        let entry = self
            .character_sets
            .get(name)
            .ok_or_else(|| DocumentError::Invalid(format!("no character set named {name:?}")))?;
        entry
            .characters
            .iter()
            .map(|c| Ok(w.character(c.clone().into())?))
            .collect()
    }

    /// The ideal's generators as exponent vectors in `x_1..x_d`.
    pub fn ideal_exponents(&self) -> Result<Option<Vec<Vec<u32>>>, DocumentError> {
        let Some(ideal) = &self.ideal else {
            return Ok(None);
        };
        let d = self.weights.len();
        ideal
            .generators
            .iter()
            .map(|g| {
                let mut m = vec![0u32; d];
                for &i in g {
                    if i == 0 || i > d {
                        return Err(DocumentError::Invalid(format!(
                            "variable label {i} outside 1..={d}"
                        )));
                    }
                    m[i - 1] += 1;
                }
                Ok(m)
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Some)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanDocument {
    pub schema_version: u32,
    pub lattice_rank: usize,
    pub rays: Vec<Vec<i64>>,
    /// Maximal cones as 1-based ray labels.
    pub cones: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
}

impl FanDocument {
    pub fn from_json(s: &str) -> Result<Self, DocumentError> {
        let doc: Self = serde_json::from_str(s)?;
        check_version(doc.schema_version)?;
        Ok(doc)
    }

    pub fn from_fan(fan: &StackyFan) -> Self {
        FanDocument {
            schema_version: SCHEMA_VERSION,
            lattice_rank: fan.lattice_rank(),
            rays: fan.rays().to_vec(),
            cones: fan.cones().iter().map(SupportSet::one_based).collect(),
            provenance: None,
        }
    }

    pub fn fan(&self) -> Result<StackyFan, DocumentError> {
        let mut cones = Vec::with_capacity(self.cones.len());
        for c in &self.cones {
            if c.contains(&0) {
                return Err(DocumentError::Invalid("ray labels start at 1".into()));
            }
            cones.push(SupportSet::from_one_based(c));
        }
        Ok(StackyFan::new(self.lattice_rank, self.rays.clone(), cones)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolytopeDocument {
    pub schema_version: u32,
    pub ambient_dim: usize,
    pub points: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
}

impl PolytopeDocument {
    pub fn from_json(s: &str) -> Result<Self, DocumentError> {
        let doc: Self = serde_json::from_str(s)?;
        check_version(doc.schema_version)?;
        Ok(doc)
    }

    pub fn polytope(&self) -> Result<LatticePolytope, DocumentError> {
        Ok(LatticePolytope::from_points(self.ambient_dim, &self.points)?)
    }
}

/// `(d0, d1)` and `f` as polynomial strings over named variables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFactorizationDocument {
    pub schema_version: u32,
    pub variables: Vec<String>,
    pub f: String,
    pub d0: Vec<Vec<String>>,
    pub d1: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
}

impl MatrixFactorizationDocument {
    pub fn from_json(s: &str) -> Result<Self, DocumentError> {
        let doc: Self = serde_json::from_str(s)?;
        check_version(doc.schema_version)?;
        Ok(doc)
    }

    pub fn parse(&self) -> Result<(PolyMatrix, PolyMatrix, SparsePolynomial), DocumentError> {
        let d0 = PolyMatrix::parse(&self.variables, &self.d0)?;
        let d1 = PolyMatrix::parse(&self.variables, &self.d1)?;
        let f = SparsePolynomial::parse(&self.variables, &self.f)?;
        Ok((d0, d1, f))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CONIFOLD: &str = r#"{
        "schema_version": 1,
        "rank": 1,
        "weights": [[[1], []], [[1], []], [[-1], []], [[-1], []]],
        "chi": [[1], []]
    }"#;

    #[test]
    fn weight_document_roundtrip() {
        let doc = WeightConfigDocument::from_json(CONIFOLD).unwrap();
        let w = doc.config().unwrap();
        assert_eq!(w.len(), 4);
        assert_eq!(doc.chi(&w).unwrap(), Some(Character::free(vec![1])));
        let back = WeightConfigDocument::from_config(&w, Some(&Character::free(vec![1])));
        assert_eq!(back, doc);
    }

    #[test]
    fn rejects_bad_documents() {
        let bad = [
            CONIFOLD.replace("\"rank\": 1", "\"rank\": 1.5"),
            CONIFOLD.replace("[[1], []], [[1], []]", "[[1], []], [[\"1\"], []]"),
            CONIFOLD.replace("\"chi\"", "\"khi\""),
            CONIFOLD.replace("\"schema_version\": 1", "\"schema_version\": 2"),
        ];
        for s in &bad {
            assert!(WeightConfigDocument::from_json(s).is_err(), "{s}");
        }
        let doc = WeightConfigDocument::from_json(&CONIFOLD.replace("\"rank\": 1", "\"rank\": 2")).unwrap();
        assert!(doc.config().is_err());
    }

    #[test]
    fn fan_labels_are_one_based() {
        let s = r#"{"schema_version":1,"lattice_rank":1,"rays":[[1],[-1]],"cones":[[1],[2]]}"#;
        let fan = FanDocument::from_json(s).unwrap().fan().unwrap();
        assert_eq!(fan.cones()[1].indices(), &[1]);
        assert_eq!(FanDocument::from_fan(&fan).cones, vec![vec![1], vec![2]]);
        let zero = s.replace("[[1],[2]]", "[[0]]");
        assert!(FanDocument::from_json(&zero).unwrap().fan().is_err());
    }

    #[test]
    fn ideal_labels() {
        let mut doc = WeightConfigDocument::from_json(CONIFOLD).unwrap();
        doc.ideal = Some(IdealEntry {
            generators: vec![vec![1, 3], vec![4]],
            provenance: None,
        });
        assert_eq!(
            doc.ideal_exponents().unwrap(),
            Some(vec![vec![1, 0, 1, 0], vec![0, 0, 0, 1]])
        );
        doc.ideal = Some(IdealEntry {
            generators: vec![vec![5]],
            provenance: None,
        });
        assert!(doc.ideal_exponents().is_err());
    }
}
