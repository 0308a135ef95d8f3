//! Finite presentations of compact Kähler manifolds: classes, intersection
//! forms and candidate subvarieties.

mod families;
mod io;

pub use families::{blowup_pn, wu_bundle};
pub use io::{load_manifold, presentation_hash, save_manifold, ManifoldDocument};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cones::ConeDescription;
use crate::scalar::Scalar;
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("schema error: {0}")]
    Schema(String),
    #[error("tensor is not symmetric: {0}")]
    AsymmetricTensor(String),
    #[error("arity mismatch: expected {expected} classes, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("class has {got} coordinates but the basis has {expected}")]
    ClassLength { expected: usize, got: usize },
    #[error("invalid family parameters: {0}")]
    Family(String),
    #[error("candidate {0:?} is degenerate (its intersection data vanishes)")]
    DegenerateCandidate(String),
}

/// A (1,1)-class as a coordinate vector in the manifold's basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CohClass<T: Scalar = Rational> {
    coords: Vec<T>,
}

impl<T: Scalar> CohClass<T> {
    pub fn new(coords: Vec<T>) -> Self {
        CohClass { coords }
    }

    pub fn zero(rank: usize) -> Self {
        CohClass { coords: vec![T::zero(); rank] }
    }

    pub fn basis_vector(rank: usize, i: usize) -> Self {
        let mut c = Self::zero(rank);
        c.coords[i] = T::one();
        c
    }

    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn scaled(&self, s: &T) -> Self {
        CohClass { coords: self.coords.iter().map(|c| c.clone() * s.clone()).collect() }
    }

    pub fn plus(&self, other: &Self) -> Self {
        assert_eq!(self.rank(), other.rank());
        CohClass { coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a.clone() + b.clone()).collect() }
    }

    pub fn minus(&self, other: &Self) -> Self {
        assert_eq!(self.rank(), other.rank());
        CohClass { coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a.clone() - b.clone()).collect() }
    }

    /// `a·self + b·other`
    pub fn combine(&self, a: &T, other: &Self, b: &T) -> Self {
        self.scaled(a).plus(&other.scaled(b))
    }

    /// `(1 - t)·self + t·other`
    pub fn lerp(&self, other: &Self, t: &T) -> Self {
        self.combine(&(T::one() - t.clone()), other, t)
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> CohClass<U> {
        CohClass { coords: self.coords.iter().map(f).collect() }
    }

    /// Whether `self` and `other` span a line (including the zero class).
    pub fn is_proportional(&self, other: &Self) -> bool {
        let n = self.rank();
        (0..n).all(|i| {
            (i + 1..n).all(|j| {
                self.coords[i].clone() * other.coords[j].clone() == self.coords[j].clone() * other.coords[i].clone()
            })
        })
    }
}

impl CohClass<Rational> {
    pub fn to_f64(&self) -> CohClass<f64> {
        self.map(|q| q.to_f64())
    }
}

impl Serialize for CohClass<Rational> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        crate::arith::serde_rational_vec::serialize(&self.coords, s)
    }
}

impl<'de> Deserialize<'de> for CohClass<Rational> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        crate::arith::serde_rational_vec::deserialize(d).map(CohClass::new)
    }
}

impl Serialize for CohClass<f64> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.coords.serialize(s)
    }
}

/// A symmetric multilinear form of the given degree on a basis of the
/// given rank, stored by monomial exponent vectors. Unlisted monomials are 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionForm<T: Scalar = Rational> {
    rank: usize,
    degree: usize,
    values: BTreeMap<Vec<usize>, T>,
}

/// All exponent vectors of length `rank` summing to `degree`, in
/// lexicographically descending order.
pub fn monomials(rank: usize, degree: usize) -> Vec<Vec<usize>> {
    fn go(rank: usize, left: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() + 1 == rank {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in (0..=left).rev() {
            prefix.push(k);
            go(rank, left - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if rank == 0 {
        if degree == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    go(rank, degree, &mut Vec::new(), &mut out);
    out
}

impl<T: Scalar> IntersectionForm<T> {
    pub fn new(rank: usize, degree: usize) -> Self {
        IntersectionForm { rank, degree, values: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Sets the value of the monomial with the given exponents.
    pub fn set(&mut self, exponents: &[usize], value: T) {
        assert_eq!(exponents.len(), self.rank, "exponent vector length");
        assert_eq!(exponents.iter().sum::<usize>(), self.degree, "monomial degree");
        if value.is_zero() {
            self.values.remove(exponents);
        } else {
            self.values.insert(exponents.to_vec(), value);
        }
    }

    pub fn with(mut self, exponents: &[usize], value: T) -> Self {
        self.set(exponents, value);
        self
    }

    pub fn get(&self, exponents: &[usize]) -> T {
        self.values.get(exponents).cloned().unwrap_or_else(T::zero)
    }

    /// Nonzero entries in monomial order.
    pub fn entries(&self) -> impl Iterator<Item = (&Vec<usize>, &T)> {
        self.values.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// `∫ γ₁⋯γ_p` by multilinear expansion.
    pub fn evaluate(&self, classes: &[&CohClass<T>]) -> Result<T, ModelError> {
        if classes.len() != self.degree {
            return Err(ModelError::Arity { expected: self.degree, got: classes.len() });
        }
        if let Some(c) = classes.iter().find(|c| c.rank() != self.rank) {
            return Err(ModelError::ClassLength { expected: self.rank, got: c.rank() });
        }
        let mut terms: BTreeMap<Vec<usize>, T> = BTreeMap::new();
        terms.insert(vec![0; self.rank], T::one());
        for class in classes {
            let mut next: BTreeMap<Vec<usize>, T> = BTreeMap::new();
            for (mono, coef) in &terms {
                for (j, c) in class.coords().iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let mut m = mono.clone();
                    m[j] += 1;
                    let entry = next.entry(m).or_insert_with(T::zero);
                    *entry = entry.clone() + coef.clone() * c.clone();
                }
            }
            terms = next;
        }
        Ok(terms
            .iter()
            .fold(T::zero(), |acc, (m, coef)| acc + coef.clone() * self.get(m)))
    }

    /// `∫ α^i β^j` with `i + j` equal to the degree.
    pub fn powers(&self, alpha: &CohClass<T>, i: usize, beta: &CohClass<T>, j: usize) -> Result<T, ModelError> {
        let mut args = vec![alpha; i];
        args.extend(std::iter::repeat(beta).take(j));
        self.evaluate(&args)
    }

    /// The form `(γ₁,…,γ_{p−1}) ↦ ∫ D·γ₁⋯γ_{p−1}`, i.e. restriction to a
    /// divisor of class `D`.
    pub fn contract(&self, divisor: &CohClass<T>) -> IntersectionForm<T> {
        assert!(self.degree >= 1);
        let mut out = IntersectionForm::new(self.rank, self.degree - 1);
        for m in monomials(self.rank, self.degree - 1) {
            let mut v = T::zero();
            for (j, c) in divisor.coords().iter().enumerate() {
                let mut mj = m.clone();
                mj[j] += 1;
                v = v + c.clone() * self.get(&mj);
            }
            out.set(&m, v);
        }
        out
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> IntersectionForm<U> {
        let mut out = IntersectionForm::new(self.rank, self.degree);
        for (m, v) in &self.values {
            out.set(m, f(v));
        }
        out
    }
}

impl IntersectionForm<Rational> {
    pub fn to_f64(&self) -> IntersectionForm<f64> {
        self.map(|q| q.to_f64())
    }
}

/// A subvariety `V` known through its restricted intersection numbers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubvarietyCandidate {
    pub name: String,
    pub tensor: IntersectionForm<Rational>,
    pub tags: Vec<String>,
}

impl SubvarietyCandidate {
    pub fn new(name: impl Into<String>, tensor: IntersectionForm<Rational>) -> Self {
        SubvarietyCandidate { name: name.into(), tensor, tags: Vec::new() }
    }

    pub fn tagged(mut self, tag: &str) -> Self {
        self.tags.push(tag.to_string());
        self
    }

    pub fn dim(&self) -> usize {
        self.tensor.degree()
    }
}

/// Region of parameter space on which a candidate list is known to contain
/// every destabilizer for the given statement (`"j"`, `"gma"`, `"dhym"`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompletenessRegion {
    pub statement: String,
    #[serde(flatten)]
    pub kind: RegionKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RegionKind {
    /// Certified whenever the λ = 0 modified-Kähler hypotheses all hold.
    ModifiedHypotheses,
    Always,
    /// Certified when `α` and `β` satisfy the listed inequalities.
    Linear {
        #[serde(default)]
        alpha: Vec<crate::cones::LinearIneq>,
        #[serde(default)]
        beta: Vec<crate::cones::LinearIneq>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifoldPresentation {
    pub name: String,
    pub basis: Vec<String>,
    pub tensor: IntersectionForm<Rational>,
    pub cones: Vec<ConeDescription>,
    pub candidates: Vec<SubvarietyCandidate>,
    pub complete_regions: Vec<CompletenessRegion>,
}

impl ManifoldPresentation {
    pub fn dim(&self) -> usize {
        self.tensor.degree()
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Checks ranks, candidate dimensions and degeneracy.
    pub fn validate(&self) -> Result<(), ModelError> {
        if self.tensor.rank() != self.rank() {
            return Err(ModelError::Schema(format!(
                "tensor rank {} differs from basis size {}",
                self.tensor.rank(),
                self.rank()
            )));
        }
        if self.tensor.is_zero() {
            return Err(ModelError::Schema("intersection tensor vanishes identically".into()));
        }
        for v in &self.candidates {
            if v.tensor.rank() != self.rank() {
                return Err(ModelError::Schema(format!("candidate {:?} has the wrong basis size", v.name)));
            }
            if v.dim() == 0 || v.dim() >= self.dim() {
                return Err(ModelError::Schema(format!(
                    "candidate {:?} has dimension {} outside 1..{}",
                    v.name,
                    v.dim(),
                    self.dim() - 1
                )));
            }
            if v.tensor.is_zero() {
                return Err(ModelError::DegenerateCandidate(v.name.clone()));
            }
        }
        for c in &self.cones {
            if let Some(bad) = c.ineqs.iter().find(|l| l.coeffs.len() != self.rank()) {
                return Err(ModelError::Schema(format!(
                    "cone {} inequality has {} coefficients",
                    c.kind,
                    bad.coeffs.len()
                )));
            }
        }
        Ok(())
    }

    pub fn check_class(&self, c: &CohClass) -> Result<(), ModelError> {
        if c.rank() != self.rank() {
            return Err(ModelError::ClassLength { expected: self.rank(), got: c.rank() });
        }
        Ok(())
    }

    /// `∫_X γ₁⋯γ_n`
    pub fn intersect(&self, classes: &[&CohClass]) -> Result<Rational, ModelError> {
        self.tensor.evaluate(classes)
    }

    /// Same as [`Self::intersect`] in any scalar type.
    pub fn intersect_in<T: Scalar>(&self, classes: &[&CohClass<T>]) -> Result<T, ModelError> {
        self.tensor.map(|q| T::from_rational(q)).evaluate(classes)
    }

    pub fn candidate(&self, name: &str) -> Option<&SubvarietyCandidate> {
        self.candidates.iter().find(|v| v.name == name)
    }

    pub fn basis_index(&self, name: &str) -> Option<usize> {
        self.basis.iter().position(|b| b == name)
    }

    pub fn class(&self, coords: &[Rational]) -> Result<CohClass, ModelError> {
        let c = CohClass::new(coords.to_vec());
        self.check_class(&c)?;
        Ok(c)
    }
}

/// `∫_V γ₁⋯γ_p`
pub fn intersect_on(v: &SubvarietyCandidate, classes: &[&CohClass]) -> Result<Rational, ModelError> {
    v.tensor.evaluate(classes)
}
