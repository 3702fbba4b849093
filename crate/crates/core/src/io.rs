//! JSON formats for groups, lattices, complexes and certificates.
//!
//! Matrix entries are written as JSON integers when they fit in `i64` and as
//! strings such as `"-3/4"` otherwise; both forms are accepted on input.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chain::{ChainError, HomotopyCertificate, SpecialComplex, SplitCertificate};
use crate::group::{ConcreteGSet, FiniteGroup, GroupError, SubgroupLattice, DEFAULT_ORDER_CAP};
use crate::linalg::{Matrix, Ring, Scalar};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid number `{0}`")]
    Number(String),
    #[error("unknown subgroup class `{0}`")]
    UnknownClass(String),
    #[error("group description must give exactly one of preset, generators, table")]
    GroupSource,
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Chain(#[from] ChainError),
}

/// A group by preset name, permutation generators, or Cayley table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct GroupJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order_cap: Option<usize>,
}

impl GroupJson {
    pub fn build(&self) -> Result<FiniteGroup, IoError> {
        let cap = self.order_cap.unwrap_or(DEFAULT_ORDER_CAP);
        match (&self.preset, &self.generators, &self.table) {
            (Some(p), None, None) => Ok(FiniteGroup::preset_from_str(p)?),
            (None, Some(gens), None) => {
                let degree = self
                    .degree
                    .or_else(|| gens.first().map(Vec::len))
                    .unwrap_or(0);
                Ok(FiniteGroup::from_generators_with_cap(degree, gens, cap)?)
            }
            (None, None, Some(t)) => Ok(FiniteGroup::from_table(t.clone())?),
            _ => Err(IoError::GroupSource),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarJson {
    Int(i64),
    Text(String),
}

impl ScalarJson {
    pub fn from_scalar(x: &Scalar) -> Self {
        if x.is_integer() {
            if let Some(v) = x.to_integer().to_i64() {
                return ScalarJson::Int(v);
            }
        }
        ScalarJson::Text(x.to_string())
    }

    pub fn to_scalar(&self) -> Result<Scalar, IoError> {
        match self {
            ScalarJson::Int(v) => Ok(Scalar::from_integer(BigInt::from(*v))),
            ScalarJson::Text(s) => s
                .trim()
                .parse::<Scalar>()
                .map_err(|_| IoError::Number(s.clone())),
        }
    }
}

pub fn matrix_to_json(m: &Matrix<Scalar>) -> Vec<Vec<ScalarJson>> {
    m.to_rows()
        .iter()
        .map(|r| r.iter().map(ScalarJson::from_scalar).collect())
        .collect()
}

pub fn matrix_from_json(rows: &[Vec<ScalarJson>], cols: usize) -> Result<Matrix<Scalar>, IoError> {
    let rows = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(ScalarJson::to_scalar)
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Matrix::from_rows_with_cols(rows, cols).map_err(|e| IoError::Chain(ChainError::Linalg(e)))
}

/// A basis G-set by explicit action table, or as a list of orbit types named
/// by subgroup class (each entry contributes one copy of `G/K`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GSetJson {
    Action { action: Vec<Vec<usize>> },
    Orbits { orbits: Vec<String> },
}

impl GSetJson {
    pub fn build(&self, lattice: &SubgroupLattice) -> Result<ConcreteGSet, IoError> {
        let g = lattice.group();
        match self {
            GSetJson::Action { action } => Ok(ConcreteGSet::new(g, action.clone())?),
            GSetJson::Orbits { orbits } => {
                let mut out = ConcreteGSet::empty(g);
                for name in orbits {
                    let c = lattice
                        .class_by_name(name)
                        .map_err(|_| IoError::UnknownClass(name.clone()))?;
                    out = out
                        .disjoint_union(&ConcreteGSet::coset_space(g, lattice.representative(c)));
                }
                Ok(out)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub ring: String,
    /// Basis G-sets for degrees `0..=top`.
    pub degrees: Vec<GSetJson>,
    /// `boundaries[i − 1]` is `∂_i`, rows indexed by degree `i − 1`.
    pub boundaries: Vec<Vec<Vec<ScalarJson>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub augmentation: Option<Vec<ScalarJson>>,
}

impl ComplexJson {
    pub fn from_complex(c: &SpecialComplex) -> Self {
        ComplexJson {
            ring: c.ring().to_string(),
            degrees: c
                .bases()
                .iter()
                .map(|b| GSetJson::Action {
                    action: b.action_table().to_vec(),
                })
                .collect(),
            boundaries: c.boundaries().iter().map(matrix_to_json).collect(),
            augmentation: c
                .augmentation()
                .map(|e| e.iter().map(ScalarJson::from_scalar).collect()),
        }
    }

    pub fn build(&self, lattice: Arc<SubgroupLattice>) -> Result<SpecialComplex, IoError> {
        let ring: Ring = self
            .ring
            .parse()
            .map_err(|_| IoError::Number(self.ring.clone()))?;
        let bases = self
            .degrees
            .iter()
            .map(|d| d.build(&lattice))
            .collect::<Result<Vec<_>, _>>()?;
        let boundaries = self
            .boundaries
            .iter()
            .enumerate()
            .map(|(k, rows)| {
                let cols = bases.get(k + 1).map_or(0, ConcreteGSet::size);
                matrix_from_json(rows, cols)
            })
            .collect::<Result<Vec<_>, _>>()?;
        let augmentation = self
            .augmentation
            .as_ref()
            .map(|e| {
                e.iter()
                    .map(ScalarJson::to_scalar)
                    .collect::<Result<Vec<_>, _>>()
            })
            .transpose()?;
        Ok(SpecialComplex::new(
            lattice,
            ring,
            bases,
            boundaries,
            augmentation,
        )?)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassJson {
    pub index: usize,
    pub name: String,
    pub order: usize,
    pub conjugates: usize,
    pub weyl_order: usize,
    pub representative: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LatticeJson {
    pub order: usize,
    pub subgroups: usize,
    pub classes: Vec<ClassJson>,
    /// `containment[c][d]`: number of subgroups in class `d` containing the representative of `c`.
    pub containment: Vec<Vec<i64>>,
}

impl LatticeJson {
    pub fn new(lattice: &SubgroupLattice) -> Self {
        let n = lattice.num_classes();
        LatticeJson {
            order: lattice.group().order(),
            subgroups: lattice.subgroups().len(),
            classes: lattice
                .classes()
                .iter()
                .enumerate()
                .map(|(i, c)| ClassJson {
                    index: i,
                    name: c.name.clone(),
                    order: c.order,
                    conjugates: c.members.len(),
                    weyl_order: lattice.weyl_order(i),
                    representative: lattice.representative(i).members().to_vec(),
                })
                .collect(),
            containment: (0..n)
                .map(|c| (0..n).map(|d| lattice.above_count(c, d)).collect())
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SplitCertificateJson {
    /// Index `k` maps degree `k − 1` to degree `k`.
    pub contraction: Vec<Vec<Vec<ScalarJson>>>,
}

impl From<&SplitCertificate> for SplitCertificateJson {
    fn from(c: &SplitCertificate) -> Self {
        SplitCertificateJson {
            contraction: c.contraction.iter().map(matrix_to_json).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct HomotopyCertificateJson {
    pub inverse: Vec<Vec<Vec<ScalarJson>>>,
    pub source_homotopy: Vec<Vec<Vec<ScalarJson>>>,
    pub target_homotopy: Vec<Vec<Vec<ScalarJson>>>,
}

impl From<&HomotopyCertificate> for HomotopyCertificateJson {
    fn from(c: &HomotopyCertificate) -> Self {
        let conv = |v: &[Matrix<Scalar>]| v.iter().map(matrix_to_json).collect();
        HomotopyCertificateJson {
            inverse: conv(&c.inverse),
            source_homotopy: conv(&c.source_homotopy),
            target_homotopy: conv(&c.target_homotopy),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalars_round_trip() {
        for text in ["0", "-7", "3/4", "123456789012345678901234567890"] {
            let x: Scalar = text.parse().unwrap();
            let json = serde_json::to_string(&ScalarJson::from_scalar(&x)).unwrap();
            let back: ScalarJson = serde_json::from_str(&json).unwrap();
            assert_eq!(back.to_scalar().unwrap(), x);
        }
        assert!(ScalarJson::Text("x".into()).to_scalar().is_err());
    }

    #[test]
    fn group_sources() {
        let g: GroupJson = serde_json::from_str(r#"{"preset": "S3"}"#).unwrap();
        assert_eq!(g.build().unwrap().order(), 6);
        let g: GroupJson = serde_json::from_str(r#"{"generators": [[1,2,0],[1,0,2]]}"#).unwrap();
        assert_eq!(g.build().unwrap().order(), 6);
        let g: GroupJson = serde_json::from_str(r#"{"table": [[0,1],[1,0]]}"#).unwrap();
        assert_eq!(g.build().unwrap().order(), 2);
        let g: GroupJson = serde_json::from_str(r#"{"preset": "S3", "table": [[0]]}"#).unwrap();
        assert!(matches!(g.build(), Err(IoError::GroupSource)));
    }

    #[test]
    fn complex_round_trip() {
        let g = Arc::new(FiniteGroup::preset_from_str("C2").unwrap());
        let l = Arc::new(SubgroupLattice::new(g));
        let json: ComplexJson = serde_json::from_str(
            r#"{"ring": "Z", "degrees": [{"orbits": ["1"]}, {"orbits": ["1"]}],
                "boundaries": [[[1, -1], [-1, 1]]], "augmentation": [1, 1]}"#,
        )
        .unwrap();
        let c = json.build(l.clone()).unwrap();
        assert_eq!(c.basis(1).size(), 2);
        let again = ComplexJson::from_complex(&c);
        let c2 = again.build(l).unwrap();
        assert_eq!(ComplexJson::from_complex(&c2), again);
    }
}
