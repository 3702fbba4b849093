//! Finite simplicial complexes with a simplicial group action.
//!
//! Simplices are sorted vertex lists, grouped by dimension and sorted
//! lexicographically within a dimension.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::burnside::{BurnsideElement, BurnsideRing};
use crate::chain::{ChainError, SpecialComplex};
use crate::group::{ConcreteGSet, FiniteGroup, GroupError, Subgroup, SubgroupLattice};
use crate::linalg::{Matrix, Ring, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GcwError {
    #[error("simplex {0:?} is empty, repeats a vertex or uses an unknown vertex")]
    InvalidSimplex(Vec<usize>),
    #[error("simplices are not permuted by the action: {0:?} has no image")]
    NotStable(Vec<usize>),
    #[error("element {element} maps {simplex:?} to itself without fixing it pointwise")]
    NotRegular { element: usize, simplex: Vec<usize> },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Chain(#[from] ChainError),
}

/// A finite simplicial complex with a simplicial G-action.
#[derive(Debug, Clone)]
pub struct GSimplicialComplex {
    group: Arc<FiniteGroup>,
    vertices: ConcreteGSet,
    simplices: Vec<Vec<Vec<usize>>>,
    index: HashMap<Vec<usize>, usize>,
}

/// A simplicial complex without an action, such as a fixed-point set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimplicialComplex {
    pub simplices: Vec<Vec<Vec<usize>>>,
}

impl SimplicialComplex {
    pub fn face_counts(&self) -> Vec<usize> {
        self.simplices.iter().map(Vec::len).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        alternating(&self.face_counts())
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.iter().all(Vec::is_empty)
    }
}

fn alternating(counts: &[usize]) -> i64 {
    counts
        .iter()
        .enumerate()
        .map(|(k, &n)| if k % 2 == 0 { n as i64 } else { -(n as i64) })
        .sum()
}

/// `{"vertices": n, "action": [[...]], "simplices": [[v, ...], ...]}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimplicialJson {
    pub vertices: usize,
    pub action: Vec<Vec<usize>>,
    pub simplices: Vec<Vec<usize>>,
}

impl GSimplicialComplex {
    /// The closure of `simplices` under taking faces; every vertex is a 0-simplex.
    pub fn new(
        group: Arc<FiniteGroup>,
        vertices: ConcreteGSet,
        simplices: &[Vec<usize>],
    ) -> Result<Self, GcwError> {
        let n = vertices.size();
        let mut all: BTreeSet<Vec<usize>> = (0..n).map(|v| vec![v]).collect();
        for s in simplices {
            let mut sorted = s.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.is_empty() || sorted.len() != s.len() || sorted.iter().any(|&v| v >= n) {
                return Err(GcwError::InvalidSimplex(s.clone()));
            }
            let k = sorted.len();
            for mask in 1u64..(1u64 << k) {
                all.insert(
                    (0..k)
                        .filter(|i| mask >> i & 1 == 1)
                        .map(|i| sorted[i])
                        .collect(),
                );
            }
        }
        let top = all.iter().map(Vec::len).max().unwrap_or(0);
        let mut by_dim: Vec<Vec<Vec<usize>>> = vec![Vec::new(); top];
        for s in all {
            by_dim[s.len() - 1].push(s);
        }
        let index = by_dim
            .iter()
            .flat_map(|level| level.iter().enumerate().map(|(i, s)| (s.clone(), i)))
            .collect();
        let k = GSimplicialComplex {
            group,
            vertices,
            simplices: by_dim,
            index,
        };
        for level in &k.simplices {
            for s in level {
                for g in 0..k.group.order() {
                    if !k.index.contains_key(&k.image(g, s)) {
                        return Err(GcwError::NotStable(s.clone()));
                    }
                }
            }
        }
        Ok(k)
    }

    pub fn from_json(group: Arc<FiniteGroup>, json: &SimplicialJson) -> Result<Self, GcwError> {
        let vertices = ConcreteGSet::new(&group, json.action.clone())?;
        if vertices.size() != json.vertices {
            return Err(GcwError::InvalidSimplex(Vec::new()));
        }
        GSimplicialComplex::new(group, vertices, &json.simplices)
    }

    /// Maximal simplices only; faces are implied.
    pub fn to_json(&self) -> SimplicialJson {
        let maximal: Vec<Vec<usize>> = self
            .all_simplices()
            .filter(|s| {
                self.simplices
                    .get(s.len())
                    .is_none_or(|up| !up.iter().any(|t| s.iter().all(|v| t.contains(v))))
            })
            .cloned()
            .collect();
        SimplicialJson {
            vertices: self.vertices.size(),
            action: self.vertices.action_table().to_vec(),
            simplices: maximal,
        }
    }

    /// `∂Δ^{n−1}`: all proper faces of the simplex on the points of `vertices`.
    pub fn simplex_boundary(
        group: Arc<FiniteGroup>,
        vertices: ConcreteGSet,
    ) -> Result<Self, GcwError> {
        let n = vertices.size();
        let facets: Vec<Vec<usize>> = (0..n)
            .map(|skip| (0..n).filter(|&v| v != skip).collect())
            .collect();
        GSimplicialComplex::new(group, vertices, &facets)
    }

    /// `Δ^{n−1}` on the points of `vertices`.
    pub fn full_simplex(group: Arc<FiniteGroup>, vertices: ConcreteGSet) -> Result<Self, GcwError> {
        let all: Vec<usize> = (0..vertices.size()).collect();
        GSimplicialComplex::new(group, vertices, &[all])
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn vertices(&self) -> &ConcreteGSet {
        &self.vertices
    }

    pub fn dimension(&self) -> usize {
        self.simplices.len().saturating_sub(1)
    }

    /// Simplices of dimension `k`.
    pub fn simplices(&self, k: usize) -> &[Vec<usize>] {
        self.simplices.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn all_simplices(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.simplices.iter().flatten()
    }

    pub fn face_counts(&self) -> Vec<usize> {
        self.simplices.iter().map(Vec::len).collect()
    }

    fn image(&self, g: usize, s: &[usize]) -> Vec<usize> {
        let mut t: Vec<usize> = s.iter().map(|&v| self.vertices.act(g, v)).collect();
        t.sort_unstable();
        t
    }

    /// Some element mapping a simplex onto itself without fixing it pointwise.
    pub fn validate_regular(&self) -> Option<(usize, Vec<usize>)> {
        for s in self.all_simplices() {
            for g in 0..self.group.order() {
                let moved = s.iter().any(|&v| self.vertices.act(g, v) != v);
                if moved && self.image(g, s) == *s {
                    return Some((g, s.clone()));
                }
            }
        }
        None
    }

    fn require_regular(&self) -> Result<(), GcwError> {
        match self.validate_regular() {
            None => Ok(()),
            Some((element, simplex)) => Err(GcwError::NotRegular { element, simplex }),
        }
    }

    /// The action on `k`-simplices.
    pub fn simplex_gset(&self, k: usize) -> ConcreteGSet {
        let level = self.simplices(k);
        let act = (0..self.group.order())
            .map(|g| {
                level
                    .iter()
                    .map(|s| self.index[&self.image(g, s)])
                    .collect()
            })
            .collect();
        ConcreteGSet::new(&self.group, act).expect("images of a G-stable level form an action")
    }

    /// Vertices are the simplices of `self` (numbered by dimension, then
    /// lexicographically); simplices are chains under inclusion.
    pub fn barycentric_subdivision(&self) -> GSimplicialComplex {
        let offsets: Vec<usize> = self
            .simplices
            .iter()
            .scan(0, |acc, level| {
                let start = *acc;
                *acc += level.len();
                Some(start)
            })
            .collect();
        let all: Vec<&Vec<usize>> = self.all_simplices().collect();
        let global = |s: &Vec<usize>| offsets[s.len() - 1] + self.index[s];
        let act: Vec<Vec<usize>> = (0..self.group.order())
            .map(|g| all.iter().map(|s| global(&self.image(g, s))).collect())
            .collect();
        // extend chains upward: each chain ends at its largest simplex
        let mut chains: Vec<Vec<usize>> = Vec::new();
        let mut stack: Vec<Vec<usize>> = (0..all.len()).map(|i| vec![i]).collect();
        while let Some(chain) = stack.pop() {
            let last = all[*chain.last().expect("chains are nonempty")];
            for (j, t) in all.iter().enumerate() {
                if t.len() > last.len() && last.iter().all(|v| t.contains(v)) {
                    let mut longer = chain.clone();
                    longer.push(j);
                    stack.push(longer);
                }
            }
            chains.push(chain);
        }
        let vertices = ConcreteGSet::new(&self.group, act).expect("subdivision action");
        GSimplicialComplex::new(self.group.clone(), vertices, &chains).expect("chains are G-stable")
    }

    /// Joins a new vertex, fixed by the whole group, to every simplex.
    pub fn cone(&self) -> GSimplicialComplex {
        let n = self.vertices.size();
        let act: Vec<Vec<usize>> = self
            .vertices
            .action_table()
            .iter()
            .map(|row| row.iter().copied().chain(std::iter::once(n)).collect())
            .collect();
        let vertices = ConcreteGSet::new(&self.group, act).expect("cone action");
        let mut simplices: Vec<Vec<usize>> = self
            .all_simplices()
            .map(|s| s.iter().copied().chain(std::iter::once(n)).collect())
            .collect();
        simplices.push(vec![n]);
        GSimplicialComplex::new(self.group.clone(), vertices, &simplices).expect("cone is G-stable")
    }

    /// Simplices fixed pointwise by `h`.
    pub fn fixed_complex(&self, h: &Subgroup) -> Result<SimplicialComplex, GcwError> {
        self.require_regular()?;
        let mut simplices: Vec<Vec<Vec<usize>>> = self
            .simplices
            .iter()
            .map(|level| {
                level
                    .iter()
                    .filter(|s| s.iter().all(|&v| self.vertices.is_fixed(h, v)))
                    .cloned()
                    .collect()
            })
            .collect();
        while simplices.last().is_some_and(Vec::is_empty) {
            simplices.pop();
        }
        Ok(SimplicialComplex { simplices })
    }

    pub fn euler_char(&self, h: &Subgroup) -> Result<i64, GcwError> {
        Ok(self.fixed_complex(h)?.euler_characteristic())
    }

    pub fn euler_characteristic(&self) -> i64 {
        alternating(&self.face_counts())
    }

    /// Cellular chains with the standard augmentation when `augmented`. Each
    /// orbit representative carries the orientation of its sorted vertex list
    /// and every other simplex in the orbit the transported orientation, so the
    /// group permutes the basis without signs.
    pub fn cellular_chain_complex(
        &self,
        lattice: Arc<SubgroupLattice>,
        ring: Ring,
        augmented: bool,
    ) -> Result<SpecialComplex, GcwError> {
        self.require_regular()?;
        let sets: Vec<ConcreteGSet> = (0..=self.dimension())
            .map(|k| self.simplex_gset(k))
            .collect();
        // sign of each simplex's transported orientation relative to sorted order
        let signs: Vec<Vec<i64>> = sets
            .iter()
            .enumerate()
            .map(|(k, set)| {
                let level = self.simplices(k);
                let mut sign = vec![0i64; level.len()];
                for orbit in set.orbits() {
                    let rep = &level[orbit[0]];
                    for g in 0..self.group.order() {
                        let tuple: Vec<usize> =
                            rep.iter().map(|&v| self.vertices.act(g, v)).collect();
                        let target = set.act(g, orbit[0]);
                        let s = permutation_sign(&tuple);
                        if sign[target] == 0 {
                            sign[target] = s;
                        } else {
                            debug_assert_eq!(
                                sign[target], s,
                                "regularity makes orientations consistent"
                            );
                        }
                    }
                }
                sign
            })
            .collect();
        let boundaries = (1..sets.len())
            .map(|k| {
                let (lo, hi) = (self.simplices(k - 1), self.simplices(k));
                let mut m = Matrix::zeros(lo.len(), hi.len());
                for (j, s) in hi.iter().enumerate() {
                    for skip in 0..s.len() {
                        let face: Vec<usize> = s
                            .iter()
                            .enumerate()
                            .filter(|&(i, _)| i != skip)
                            .map(|(_, &v)| v)
                            .collect();
                        let i = self.index[&face];
                        let alt = if skip % 2 == 0 { 1 } else { -1 };
                        let coeff = signs[k][j] * alt * signs[k - 1][i];
                        m.set(i, j, ring.from_int(coeff));
                    }
                }
                m
            })
            .collect();
        let c = SpecialComplex::new(lattice, ring, sets, boundaries, None)?;
        Ok(if augmented {
            c.with_standard_augmentation()?
        } else {
            c
        })
    }

    /// `Σ (−1)^k [X_k]` in the Burnside ring.
    pub fn burnside_class(&self, ring: &BurnsideRing) -> Result<BurnsideElement, GcwError> {
        self.require_regular()?;
        let mut total = BurnsideElement::zero(ring.rank());
        for k in 0..=self.dimension() {
            let part = ring.orbit_decomposition(&self.simplex_gset(k));
            total = total.add(&part.scale(if k % 2 == 0 { 1 } else { -1 }));
        }
        Ok(total)
    }
}

fn permutation_sign(tuple: &[usize]) -> i64 {
    let mut inversions = 0;
    for i in 0..tuple.len() {
        for j in i + 1..tuple.len() {
            if tuple[i] > tuple[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Values of a cellular chain boundary matrix, for display.
pub fn matrix_entries(m: &Matrix<Scalar>) -> Vec<Vec<String>> {
    m.to_rows()
        .iter()
        .map(|r| r.iter().map(ToString::to_string).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::burnside::SuperClassFunction;

    fn s3() -> (Arc<SubgroupLattice>, GSimplicialComplex) {
        let g = Arc::new(FiniteGroup::preset_from_str("S3").unwrap());
        let l = Arc::new(SubgroupLattice::new(g.clone()));
        let k =
            GSimplicialComplex::simplex_boundary(g.clone(), g.natural_action().unwrap()).unwrap();
        (l, k)
    }

    #[test]
    fn triangle_boundary_is_irregular() {
        let (_, k) = s3();
        assert_eq!(k.face_counts(), vec![3, 3]);
        let (g, s) = k.validate_regular().unwrap();
        assert_eq!(s.len(), 2);
        assert_ne!(g, 0);
        let trivial = Arc::new(FiniteGroup::preset_from_str("C1").unwrap());
        let point = ConcreteGSet::trivial(&trivial, 3);
        let plain = GSimplicialComplex::simplex_boundary(trivial, point).unwrap();
        assert!(plain.validate_regular().is_none());
    }

    #[test]
    fn hexagon() {
        let (l, k) = s3();
        let sd = k.barycentric_subdivision();
        assert_eq!(sd.face_counts(), vec![6, 6]);
        assert!(sd.validate_regular().is_none());
        let c2 = l.representative(1);
        let fixed = sd.fixed_complex(c2).unwrap();
        assert_eq!(fixed.face_counts(), vec![2]);
        assert_eq!(fixed.euler_characteristic(), 2);
        assert_eq!(sd.euler_char(l.representative(2)).unwrap(), 0);
        let chains = sd
            .cellular_chain_complex(l.clone(), Ring::Integers, true)
            .unwrap();
        let h = chains.underlying().homology().unwrap();
        assert_eq!((h[0].rank, h[1].rank), (1, 1));
        let ring = BurnsideRing::new(l.clone());
        let class = sd.burnside_class(&ring).unwrap();
        assert_eq!(ring.format_element(&class), "-[G/1] + 2[G/C2]");
        assert_eq!(
            ring.rho(&class),
            SuperClassFunction {
                values: vec![0, 2, 0, 0]
            }
        );
    }

    #[test]
    fn cone_over_hexagon() {
        let (l, k) = s3();
        let c = k.barycentric_subdivision().cone();
        assert_eq!(c.face_counts(), vec![7, 12, 6]);
        assert!(c.validate_regular().is_none());
        let chains = c
            .cellular_chain_complex(l.clone(), Ring::Integers, true)
            .unwrap();
        assert!(chains.is_acyclic(true).unwrap());
        for class in 0..l.num_classes() {
            assert_eq!(c.euler_char(l.representative(class)).unwrap(), 1);
        }
    }

    #[test]
    fn point_and_cone_of_point() {
        let g = Arc::new(FiniteGroup::preset_from_str("C2").unwrap());
        let p = GSimplicialComplex::new(g.clone(), ConcreteGSet::trivial(&g, 1), &[]).unwrap();
        assert_eq!(p.barycentric_subdivision().face_counts(), vec![1]);
        assert_eq!(p.cone().face_counts(), vec![2, 1]);
        let l = Arc::new(SubgroupLattice::new(g));
        let ring = BurnsideRing::new(l.clone());
        assert_eq!(p.burnside_class(&ring).unwrap().coeffs, vec![0, 1]);
    }

    #[test]
    fn irregular_input_is_rejected_downstream() {
        let (l, k) = s3();
        assert!(matches!(
            k.cellular_chain_complex(l, Ring::Integers, false),
            Err(GcwError::NotRegular { .. })
        ));
    }

    #[test]
    fn unstable_simplices_are_rejected() {
        let g = Arc::new(FiniteGroup::preset_from_str("C2").unwrap());
        let swap = ConcreteGSet::new(&g, vec![vec![0, 1, 2], vec![1, 0, 2]]).unwrap();
        assert!(matches!(
            GSimplicialComplex::new(g, swap, &[vec![0, 2]]),
            Err(GcwError::NotStable(_))
        ));
    }

    #[test]
    fn json_round_trip() {
        let (_, k) = s3();
        let sd = k.barycentric_subdivision();
        let json = sd.to_json();
        let back = GSimplicialComplex::from_json(sd.group().clone(), &json).unwrap();
        assert_eq!(back.face_counts(), sd.face_counts());
        assert_eq!(back.to_json(), json);
    }
}
