//! JSON documents for manifold presentations.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::arith::{format_rational, parse_rational};
use crate::cones::ConeDescription;
use crate::geometry::{
    monomials, CompletenessRegion, IntersectionForm, ManifoldPresentation, ModelError, SubvarietyCandidate,
};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MonomialSpec {
    Exponents(Vec<usize>),
    Named(BTreeMap<String, usize>),
}

/// One tensor entry: either a monomial (exponents, or basis name to exponent)
/// or an ordered index tuple; index tuples of the same monomial must agree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TensorEntry {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub monomial: Option<MonomialSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub indices: Option<Vec<usize>>,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CandidateDocument {
    pub name: String,
    pub dim: usize,
    pub tensor: Vec<TensorEntry>,
    #[serde(default)]
    pub tags: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifoldDocument {
    pub name: String,
    pub dim: usize,
    pub basis: Vec<String>,
    pub tensor: Vec<TensorEntry>,
    #[serde(default)]
    pub cones: Vec<ConeDescription>,
    #[serde(default)]
    pub candidates: Vec<CandidateDocument>,
    #[serde(default)]
    pub complete_regions: Vec<CompletenessRegion>,
}

fn read_tensor(
    owner: &str,
    basis: &[String],
    degree: usize,
    entries: &[TensorEntry],
) -> Result<IntersectionForm, ModelError> {
    let rank = basis.len();
    let mut from_monomials: BTreeMap<Vec<usize>, Rational> = BTreeMap::new();
    let mut from_indices: BTreeMap<Vec<usize>, (Vec<usize>, Rational)> = BTreeMap::new();
    for entry in entries {
        let value = parse_rational(&entry.value)
            .map_err(|e| ModelError::Schema(format!("{owner}: tensor value {:?}: {e}", entry.value)))?;
        match (&entry.monomial, &entry.indices) {
            (Some(spec), None) => {
                let exps = match spec {
                    MonomialSpec::Exponents(v) => {
                        if v.len() != rank {
                            return Err(ModelError::Schema(format!(
                                "{owner}: monomial {v:?} has {} exponents for a basis of {rank}",
                                v.len()
                            )));
                        }
                        v.clone()
                    }
                    MonomialSpec::Named(map) => {
                        let mut v = vec![0; rank];
                        for (name, k) in map {
                            let i = basis.iter().position(|b| b == name).ok_or_else(|| {
                                ModelError::Schema(format!("{owner}: unknown basis name {name:?}"))
                            })?;
                            v[i] += k;
                        }
                        v
                    }
                };
                let total: usize = exps.iter().sum();
                if total != degree {
                    return Err(ModelError::Arity { expected: degree, got: total });
                }
                if from_monomials.insert(exps.clone(), value).is_some() {
                    return Err(ModelError::Schema(format!("{owner}: duplicate monomial {exps:?}")));
                }
            }
            (None, Some(idx)) => {
                if idx.len() != degree {
                    return Err(ModelError::Arity { expected: degree, got: idx.len() });
                }
                let mut exps = vec![0; rank];
                for &i in idx {
                    if i >= rank {
                        return Err(ModelError::Schema(format!("{owner}: index {i} outside the basis")));
                    }
                    exps[i] += 1;
                }
                if let Some((first, v)) = from_indices.get(&exps) {
                    if v != &value {
                        return Err(ModelError::AsymmetricTensor(format!(
                            "{owner}: entries {first:?} = {} and {idx:?} = {}",
                            format_rational(v),
                            format_rational(&value)
                        )));
                    }
                } else {
                    from_indices.insert(exps, (idx.clone(), value));
                }
            }
            _ => {
                return Err(ModelError::Schema(format!(
                    "{owner}: each tensor entry needs exactly one of \"monomial\" or \"indices\""
                )))
            }
        }
    }
    let mut form = IntersectionForm::new(rank, degree);
    for (exps, (idx, v)) in from_indices {
        if let Some(w) = from_monomials.get(&exps) {
            if w != &v {
                return Err(ModelError::AsymmetricTensor(format!("{owner}: index entry {idx:?} disagrees with its monomial")));
            }
        }
        form.set(&exps, v);
    }
    for (exps, v) in from_monomials {
        form.set(&exps, v);
    }
    Ok(form)
}

fn write_tensor(form: &IntersectionForm) -> Vec<TensorEntry> {
    monomials(form.rank(), form.degree())
        .into_iter()
        .filter_map(|m| {
            let v = form.get(&m);
            (!num_traits::Zero::is_zero(&v)).then(|| TensorEntry {
                monomial: Some(MonomialSpec::Exponents(m)),
                indices: None,
                value: format_rational(&v),
            })
        })
        .collect()
}

impl ManifoldDocument {
    pub fn into_presentation(self) -> Result<ManifoldPresentation, ModelError> {
        if self.basis.is_empty() {
            return Err(ModelError::Schema("empty basis".into()));
        }
        if self.dim == 0 {
            return Err(ModelError::Schema("dimension must be positive".into()));
        }
        let tensor = read_tensor(&self.name, &self.basis, self.dim, &self.tensor)?;
        let mut candidates = Vec::with_capacity(self.candidates.len());
        for c in &self.candidates {
            let t = read_tensor(&c.name, &self.basis, c.dim, &c.tensor)?;
            candidates.push(SubvarietyCandidate { name: c.name.clone(), tensor: t, tags: c.tags.clone() });
        }
        let mut names: Vec<&str> = candidates.iter().map(|c| c.name.as_str()).collect();
        names.sort_unstable();
        if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
            return Err(ModelError::Schema(format!("duplicate candidate name {:?}", w[0])));
        }
        let m = ManifoldPresentation {
            name: self.name,
            basis: self.basis,
            tensor,
            cones: self.cones,
            candidates,
            complete_regions: self.complete_regions,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn from_presentation(m: &ManifoldPresentation) -> Self {
        ManifoldDocument {
            name: m.name.clone(),
            dim: m.dim(),
            basis: m.basis.clone(),
            tensor: write_tensor(&m.tensor),
            cones: m.cones.clone(),
            candidates: m
                .candidates
                .iter()
                .map(|c| CandidateDocument {
                    name: c.name.clone(),
                    dim: c.dim(),
                    tensor: write_tensor(&c.tensor),
                    tags: c.tags.clone(),
                })
                .collect(),
            complete_regions: m.complete_regions.clone(),
        }
    }
}

/// Parses a JSON manifold document.
pub fn load_manifold(json: &str) -> Result<ManifoldPresentation, ModelError> {
    let doc: ManifoldDocument = serde_json::from_str(json).map_err(|e| ModelError::Schema(e.to_string()))?;
    doc.into_presentation()
}

/// Canonical pretty-printed JSON; `load_manifold(&save_manifold(m)) == m`.
pub fn save_manifold(m: &ManifoldPresentation) -> String {
    serde_json::to_string_pretty(&ManifoldDocument::from_presentation(m)).expect("manifold documents serialize")
}

/// Hex SHA-256 of the canonical document.
pub fn presentation_hash(m: &ManifoldPresentation) -> String {
    let digest = Sha256::digest(save_manifold(m).as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}
