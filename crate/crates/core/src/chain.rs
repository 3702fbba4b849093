//! Chain complexes of permutation modules.
//!
//! A [`SpecialComplex`] has a basis G-set `X_i` in each degree `0..=top` and
//! boundaries `∂_i: R[X_i] → R[X_{i−1}]` stored as matrices with rows indexed by
//! `X_{i−1}`. Boundaries must be equivariant and admissible: a basis element
//! fixed by `H` is sent into the span of the `H`-fixed basis elements.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::group::{ConcreteGSet, SubgroupLattice};
use crate::linalg::{
    rank, smith_normal_form, solve_linear, to_int_matrix, LinalgError, Matrix, Ring, Scalar,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChainError {
    #[error("dimension mismatch: {0}")]
    Dimensions(String),
    #[error("map in degree {degree} is not G-equivariant")]
    NotEquivariant { degree: i64 },
    #[error("map in degree {degree} is not admissible at subgroup class {class}")]
    NotAdmissible { degree: i64, class: usize },
    #[error("∂∘∂ ≠ 0 at degree {degree}")]
    BoundarySquareNonzero { degree: i64 },
    #[error("augmentation does not vanish on boundaries")]
    AugmentationNotCycle,
    #[error("augmentation is not invariant")]
    AugmentationNotInvariant,
    #[error("the complex has no augmentation")]
    MissingAugmentation,
    #[error("not a chain map at degree {degree}")]
    NotChainMap { degree: i64 },
    #[error("source and target complexes are over different groups or rings")]
    Incompatible,
    #[error("homotopy construction failed at degree {degree}; the fixed-point check passed, so this is a bug")]
    ConstructionFailed { degree: i64 },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A chain complex of finite free modules over `ring` with lowest degree `bottom`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlainComplex {
    pub ring: Ring,
    pub bottom: i64,
    pub dims: Vec<usize>,
    /// `boundaries[k]` maps degree `bottom + k + 1` to degree `bottom + k`.
    pub boundaries: Vec<Matrix<Scalar>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomologyGroup {
    pub degree: i64,
    /// Dimension over a field, Betti number over ℤ.
    pub rank: usize,
    /// Invariant factors greater than 1 (ℤ only).
    pub torsion: Vec<String>,
}

impl HomologyGroup {
    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }
}

impl PlainComplex {
    pub fn new(
        ring: Ring,
        bottom: i64,
        dims: Vec<usize>,
        boundaries: Vec<Matrix<Scalar>>,
    ) -> Result<Self, ChainError> {
        if boundaries.len() + 1 != dims.len().max(1) {
            return Err(ChainError::Dimensions(format!(
                "{} degrees need {} boundaries, got {}",
                dims.len(),
                dims.len().saturating_sub(1),
                boundaries.len()
            )));
        }
        let mut normalized = Vec::with_capacity(boundaries.len());
        for (k, b) in boundaries.iter().enumerate() {
            if b.rows() != dims[k] || b.cols() != dims[k + 1] {
                return Err(ChainError::Dimensions(format!(
                    "boundary from degree {} should be {}x{}, got {}x{}",
                    bottom + k as i64 + 1,
                    dims[k],
                    dims[k + 1],
                    b.rows(),
                    b.cols()
                )));
            }
            normalized.push(ring.matrix(b)?);
        }
        for k in 1..normalized.len() {
            if !ring.mat_mul(&normalized[k - 1], &normalized[k]).is_zero() {
                return Err(ChainError::BoundarySquareNonzero {
                    degree: bottom + k as i64 + 1,
                });
            }
        }
        Ok(PlainComplex {
            ring,
            bottom,
            dims,
            boundaries: normalized,
        })
    }

    pub fn top(&self) -> i64 {
        self.bottom + self.dims.len() as i64 - 1
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.dims
            .iter()
            .enumerate()
            .map(|(k, &d)| {
                if (self.bottom + k as i64) % 2 == 0 {
                    d as i64
                } else {
                    -(d as i64)
                }
            })
            .sum()
    }

    /// Homology in every degree, over a field by ranks and over ℤ by Smith normal form.
    pub fn homology(&self) -> Result<Vec<HomologyGroup>, ChainError> {
        let n = self.dims.len();
        let mut ranks = Vec::with_capacity(self.boundaries.len());
        let mut torsion = Vec::with_capacity(self.boundaries.len());
        for b in &self.boundaries {
            if self.ring == Ring::Integers {
                let snf = smith_normal_form(&to_int_matrix(b, Ring::Integers)?);
                ranks.push(snf.rank);
                torsion.push(
                    snf.invariant_factors()
                        .into_iter()
                        .filter(|d| !d.is_one())
                        .map(|d| d.to_string())
                        .collect::<Vec<_>>(),
                );
            } else {
                ranks.push(rank(b, self.ring)?);
                torsion.push(Vec::new());
            }
        }
        Ok((0..n)
            .map(|k| {
                let outgoing = if k == 0 { 0 } else { ranks[k - 1] };
                let incoming = ranks.get(k).copied().unwrap_or(0);
                HomologyGroup {
                    degree: self.bottom + k as i64,
                    rank: self.dims[k] - outgoing - incoming,
                    torsion: torsion.get(k).cloned().unwrap_or_default(),
                }
            })
            .collect())
    }

    pub fn is_exact(&self) -> Result<bool, ChainError> {
        Ok(self.homology()?.iter().all(HomologyGroup::is_zero))
    }
}

/// Equivariance of `a: R[x] → R[y]` (rows indexed by `y`).
pub fn is_equivariant(x: &ConcreteGSet, y: &ConcreteGSet, a: &Matrix<Scalar>) -> bool {
    let order = x.action_table().len();
    for j in 0..a.cols() {
        for i in 0..a.rows() {
            let v = a.get(i, j);
            if v.is_zero() {
                continue;
            }
            if (0..order).any(|g| a.get(y.act(g, i), x.act(g, j)) != v) {
                return false;
            }
        }
    }
    true
}

/// First subgroup class `H` for which some `H`-fixed basis element of `x` is
/// sent outside `R[y^H]`.
pub fn admissibility_failure(
    lattice: &SubgroupLattice,
    x: &ConcreteGSet,
    y: &ConcreteGSet,
    a: &Matrix<Scalar>,
) -> Option<usize> {
    (0..lattice.num_classes()).find(|&c| {
        let h = lattice.representative(c);
        x.fixed_points(h)
            .into_iter()
            .any(|j| (0..a.rows()).any(|i| !a.get(i, j).is_zero() && !y.is_fixed(h, i)))
    })
}

fn check_map(
    lattice: &SubgroupLattice,
    x: &ConcreteGSet,
    y: &ConcreteGSet,
    a: &Matrix<Scalar>,
    degree: i64,
) -> Result<(), ChainError> {
    if a.rows() != y.size() || a.cols() != x.size() {
        return Err(ChainError::Dimensions(format!(
            "map at degree {degree} should be {}x{}, got {}x{}",
            y.size(),
            x.size(),
            a.rows(),
            a.cols()
        )));
    }
    if !is_equivariant(x, y, a) {
        return Err(ChainError::NotEquivariant { degree });
    }
    if let Some(class) = admissibility_failure(lattice, x, y, a) {
        return Err(ChainError::NotAdmissible { degree, class });
    }
    Ok(())
}

/// A bounded complex of based permutation modules with admissible boundaries.
#[derive(Debug, Clone)]
pub struct SpecialComplex {
    ring: Ring,
    lattice: Arc<SubgroupLattice>,
    bases: Vec<ConcreteGSet>,
    boundaries: Vec<Matrix<Scalar>>,
    augmentation: Option<Vec<Scalar>>,
}

impl SpecialComplex {
    /// `boundaries[i − 1]` is `∂_i` for `i = 1..=top`.
    pub fn new(
        lattice: Arc<SubgroupLattice>,
        ring: Ring,
        bases: Vec<ConcreteGSet>,
        boundaries: Vec<Matrix<Scalar>>,
        augmentation: Option<Vec<Scalar>>,
    ) -> Result<Self, ChainError> {
        if bases.is_empty() || boundaries.len() + 1 != bases.len() {
            return Err(ChainError::Dimensions(format!(
                "{} basis sets need {} boundaries, got {}",
                bases.len(),
                bases.len().saturating_sub(1),
                boundaries.len()
            )));
        }
        let order = lattice.group().order();
        if bases.iter().any(|b| b.action_table().len() != order) {
            return Err(ChainError::Incompatible);
        }
        let mut normalized = Vec::with_capacity(boundaries.len());
        for (k, b) in boundaries.iter().enumerate() {
            let b = ring.matrix(b)?;
            check_map(&lattice, &bases[k + 1], &bases[k], &b, k as i64 + 1)?;
            normalized.push(b);
        }
        for k in 1..normalized.len() {
            if !ring.mat_mul(&normalized[k - 1], &normalized[k]).is_zero() {
                return Err(ChainError::BoundarySquareNonzero {
                    degree: k as i64 + 1,
                });
            }
        }
        let augmentation = match augmentation {
            None => None,
            Some(e) => {
                if e.len() != bases[0].size() {
                    return Err(ChainError::Dimensions("augmentation length".into()));
                }
                let e: Vec<Scalar> = e
                    .iter()
                    .map(|v| ring.element(v))
                    .collect::<Result<_, _>>()?;
                let x0 = &bases[0];
                if (0..order).any(|g| (0..x0.size()).any(|x| e[x0.act(g, x)] != e[x])) {
                    return Err(ChainError::AugmentationNotInvariant);
                }
                if let Some(b1) = normalized.first() {
                    let row = Matrix::from_rows_with_cols(vec![e.clone()], e.len())?;
                    if !ring.mat_mul(&row, b1).is_zero() {
                        return Err(ChainError::AugmentationNotCycle);
                    }
                }
                Some(e)
            }
        };
        Ok(SpecialComplex {
            ring,
            lattice,
            bases,
            boundaries: normalized,
            augmentation,
        })
    }

    /// The augmentation sending every basis element of degree 0 to 1.
    pub fn with_standard_augmentation(self) -> Result<Self, ChainError> {
        let e = vec![self.ring.one(); self.bases[0].size()];
        SpecialComplex::new(
            self.lattice,
            self.ring,
            self.bases,
            self.boundaries,
            Some(e),
        )
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn lattice(&self) -> &Arc<SubgroupLattice> {
        &self.lattice
    }

    pub fn top(&self) -> usize {
        self.bases.len() - 1
    }

    pub fn basis(&self, degree: usize) -> &ConcreteGSet {
        &self.bases[degree]
    }

    pub fn bases(&self) -> &[ConcreteGSet] {
        &self.bases
    }

    /// `∂_degree` for `degree ≥ 1`.
    pub fn boundary(&self, degree: usize) -> &Matrix<Scalar> {
        &self.boundaries[degree - 1]
    }

    pub fn boundaries(&self) -> &[Matrix<Scalar>] {
        &self.boundaries
    }

    pub fn augmentation(&self) -> Option<&[Scalar]> {
        self.augmentation.as_deref()
    }

    /// Basis sets and boundaries with `R` in degree −1 when augmented; the
    /// boundary out of degree 0 is then the augmentation row.
    fn graded(
        &self,
        augmented: bool,
    ) -> Result<(Vec<ConcreteGSet>, Vec<Matrix<Scalar>>), ChainError> {
        if !augmented {
            return Ok((self.bases.clone(), self.boundaries.clone()));
        }
        let e = self
            .augmentation
            .as_ref()
            .ok_or(ChainError::MissingAugmentation)?;
        let mut sets = vec![ConcreteGSet::trivial(self.lattice.group(), 1)];
        sets.extend(self.bases.iter().cloned());
        let mut bds = vec![Matrix::from_rows_with_cols(vec![e.clone()], e.len())?];
        bds.extend(self.boundaries.iter().cloned());
        Ok((sets, bds))
    }

    pub fn underlying(&self) -> PlainComplex {
        PlainComplex {
            ring: self.ring,
            bottom: 0,
            dims: self.bases.iter().map(ConcreteGSet::size).collect(),
            boundaries: self.boundaries.clone(),
        }
    }

    pub fn augmented(&self) -> Result<PlainComplex, ChainError> {
        let (sets, bds) = self.graded(true)?;
        Ok(PlainComplex {
            ring: self.ring,
            bottom: -1,
            dims: sets.iter().map(ConcreteGSet::size).collect(),
            boundaries: bds,
        })
    }

    /// `C(H)`: the restriction to the `H`-fixed basis elements.
    pub fn fixed_subcomplex(&self, class: usize) -> PlainComplex {
        let h = self.lattice.representative(class);
        let fixed: Vec<Vec<usize>> = self.bases.iter().map(|b| b.fixed_points(h)).collect();
        PlainComplex {
            ring: self.ring,
            bottom: 0,
            dims: fixed.iter().map(Vec::len).collect(),
            boundaries: self
                .boundaries
                .iter()
                .enumerate()
                .map(|(k, b)| b.select(&fixed[k], &fixed[k + 1]))
                .collect(),
        }
    }

    /// Homology `H_0 = R`, zero elsewhere; with `reduced`, exactness of the
    /// augmented complex (the standard augmentation when none is attached).
    pub fn is_acyclic(&self, reduced: bool) -> Result<bool, ChainError> {
        if reduced {
            let c = if self.augmentation.is_some() {
                self.clone()
            } else {
                self.clone().with_standard_augmentation()?
            };
            return c.augmented()?.is_exact();
        }
        let h = self.underlying().homology()?;
        Ok(h.iter()
            .all(|g| g.torsion.is_empty() && g.rank == usize::from(g.degree == 0)))
    }

    /// `ℤ ⊗_{ZG} C`: one basis element per orbit, boundary coefficients summed
    /// over the target orbit.
    pub fn quotient_complex(&self) -> PlainComplex {
        let orbits: Vec<Vec<Vec<usize>>> = self.bases.iter().map(ConcreteGSet::orbits).collect();
        let boundaries = self
            .boundaries
            .iter()
            .enumerate()
            .map(|(k, b)| {
                let (low, high) = (&orbits[k], &orbits[k + 1]);
                let mut m = Matrix::zeros(low.len(), high.len());
                for (j, src) in high.iter().enumerate() {
                    for (i, dst) in low.iter().enumerate() {
                        let mut acc = Scalar::zero();
                        for &y in dst {
                            acc += b.get(y, src[0]);
                        }
                        m.set(i, j, self.ring.element(&acc).expect("sum of ring elements"));
                    }
                }
                m
            })
            .collect();
        PlainComplex {
            ring: self.ring,
            bottom: 0,
            dims: orbits.iter().map(Vec::len).collect(),
            boundaries,
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.underlying().euler_characteristic()
    }

    /// `0 → R[X] --id--> R[X] → 0` with the copies of `X` in degrees `degree` and `degree − 1`.
    pub fn elementary(
        lattice: Arc<SubgroupLattice>,
        ring: Ring,
        x: ConcreteGSet,
        degree: usize,
    ) -> Result<Self, ChainError> {
        if degree == 0 {
            return Err(ChainError::Dimensions(
                "an elementary complex needs degree ≥ 1".into(),
            ));
        }
        let g = lattice.group();
        let mut bases: Vec<ConcreteGSet> =
            (0..degree - 1).map(|_| ConcreteGSet::empty(g)).collect();
        bases.push(x.clone());
        bases.push(x.clone());
        let mut boundaries: Vec<Matrix<Scalar>> = (1..degree)
            .map(|i| Matrix::zeros(bases[i - 1].size(), bases[i].size()))
            .collect();
        boundaries.push(Matrix::identity(x.size()));
        SpecialComplex::new(lattice, ring, bases, boundaries, None)
    }

    /// Degreewise `X_i ⊔ Y_i` with block-diagonal boundaries. Augmentations are
    /// concatenated when both summands carry one.
    pub fn direct_sum(&self, other: &SpecialComplex) -> Result<Self, ChainError> {
        if self.ring != other.ring {
            return Err(ChainError::Incompatible);
        }
        let top = self.top().max(other.top());
        let (xs, ys) = (padded(self, top), padded(other, top));
        let bases = xs
            .iter()
            .zip(&ys)
            .map(|(x, y)| x.disjoint_union(y))
            .collect();
        let boundaries = (1..=top)
            .map(|i| {
                let (a, b) = (padded_boundary(self, i), padded_boundary(other, i));
                Matrix::block(
                    &a,
                    &Matrix::zeros(a.rows(), b.cols()),
                    &Matrix::zeros(b.rows(), a.cols()),
                    &b,
                )
            })
            .collect();
        let augmentation = match (&self.augmentation, &other.augmentation) {
            (Some(a), Some(b)) => Some(a.iter().chain(b).cloned().collect()),
            _ => None,
        };
        SpecialComplex::new(
            self.lattice.clone(),
            self.ring,
            bases,
            boundaries,
            augmentation,
        )
    }
}

/// For each orbit: its least point and every `(point, g)` with `g · least = point`.
fn transversal(x: &ConcreteGSet) -> Vec<(usize, Vec<(usize, usize)>)> {
    let order = x.action_table().len();
    x.orbits()
        .into_iter()
        .map(|orbit| {
            let rep = orbit[0];
            let mut carriers = vec![None; x.size()];
            for g in 0..order {
                carriers[x.act(g, rep)].get_or_insert(g);
            }
            let list = orbit
                .iter()
                .map(|&y| (y, carriers[y].expect("y is in the orbit")))
                .collect();
            (rep, list)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Lift {
    /// Images invariant under the stabilizer (sums over its orbits).
    Equivariant,
    /// Images supported on basis elements fixed by the stabilizer.
    Admissible,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContractionFailure {
    /// Index into the graded list of basis sets.
    pub level: usize,
    /// Orbit representative whose image could not be chosen.
    pub representative: usize,
}

/// Builds maps `h_k: R[sets[k]] → R[sets[k+1]]` with `∂h + h∂ = id`, one degree
/// at a time. At each degree and orbit representative `x` a preimage of
/// `x − h_{k−1}(∂x)` is found in the allowed subspace and transported along the orbit.
fn contract(
    sets: &[ConcreteGSet],
    bds: &[Matrix<Scalar>],
    ring: Ring,
    lift: Lift,
) -> Result<Vec<Matrix<Scalar>>, ContractionFailure> {
    let m = sets.len();
    let mut hs: Vec<Matrix<Scalar>> = Vec::with_capacity(m);
    for k in 0..m {
        let here = &sets[k];
        let next_size = if k + 1 < m { sets[k + 1].size() } else { 0 };
        let mut h = Matrix::zeros(next_size, here.size());
        for (rep, carriers) in transversal(here) {
            let mut rhs = vec![Scalar::zero(); here.size()];
            rhs[rep] = ring.one();
            if k > 0 {
                let d = bds[k - 1].column(rep);
                let back = ring.mat_vec(&hs[k - 1], &d);
                for (r, b) in rhs.iter_mut().zip(&back) {
                    *r = ring.sub(r, b);
                }
            }
            let fail = ContractionFailure {
                level: k,
                representative: rep,
            };
            let u = if k + 1 == m {
                if rhs.iter().any(|v| !v.is_zero()) {
                    return Err(fail);
                }
                Vec::new()
            } else {
                let next = &sets[k + 1];
                let stab = here.stabilizer(rep);
                let generators: Vec<Vec<usize>> = match lift {
                    Lift::Equivariant => next.orbits_under(&stab),
                    Lift::Admissible => next
                        .fixed_points(&stab)
                        .into_iter()
                        .map(|y| vec![y])
                        .collect(),
                };
                let mut cols = Matrix::zeros(next.size(), generators.len());
                for (j, gen) in generators.iter().enumerate() {
                    for &y in gen {
                        cols.set(y, j, ring.one());
                    }
                }
                let a = ring.mat_mul(&bds[k], &cols);
                match solve_linear(&a, &rhs, ring) {
                    Ok(Some(coeffs)) => ring.mat_vec(&cols, &coeffs),
                    _ => return Err(fail),
                }
            };
            if u.is_empty() {
                continue;
            }
            for (y, g) in carriers {
                let moved = sets[k + 1].permute(g, &u, Scalar::zero());
                for (i, v) in moved.into_iter().enumerate() {
                    h.set(i, y, v);
                }
            }
        }
        hs.push(h);
    }
    Ok(hs)
}

/// Verifies `∂_{k} h_{k} + h_{k−1} ∂_{k−1} = id` at every level of a graded list.
fn is_contraction(
    sets: &[ConcreteGSet],
    bds: &[Matrix<Scalar>],
    hs: &[Matrix<Scalar>],
    ring: Ring,
) -> bool {
    let m = sets.len();
    if hs.len() != m {
        return false;
    }
    (0..m).all(|k| {
        let n = sets[k].size();
        let mut total = Matrix::zeros(n, n);
        if k + 1 < m {
            total = ring.mat_add(&total, &ring.mat_mul(&bds[k], &hs[k]));
        }
        if k > 0 {
            total = ring.mat_add(&total, &ring.mat_mul(&hs[k - 1], &bds[k - 1]));
        }
        total
            == ring
                .matrix(&Matrix::identity(n))
                .expect("identity is in every ring")
    })
}

/// Equivariant contraction of the augmented complex over ℤ. Restricted to the
/// cycles `Z_{i−1}`, `contraction[i]` is a section of `∂: C_i → Z_{i−1}`;
/// index 0 is degree −1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitCertificate {
    pub contraction: Vec<Matrix<Scalar>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplitFailure {
    /// Degree `i` of the sequence `0 → Z_i → C_i → Z_{i−1} → 0` without an
    /// equivariant section.
    pub degree: i64,
    pub representative: usize,
    pub reason: String,
}

impl SplitCertificate {
    pub fn verify(&self, complex: &SpecialComplex) -> Result<bool, ChainError> {
        let (sets, bds) = complex.graded(true)?;
        let equivariant = self
            .contraction
            .iter()
            .enumerate()
            .all(|(k, h)| k + 1 >= sets.len() || is_equivariant(&sets[k], &sets[k + 1], h));
        Ok(equivariant && is_contraction(&sets, &bds, &self.contraction, Ring::Integers))
    }
}

/// Whether the augmented complex is split by equivariant maps over ℤ.
pub fn g_split_check(
    complex: &SpecialComplex,
) -> Result<Result<SplitCertificate, SplitFailure>, ChainError> {
    let (sets, bds) = complex.graded(true)?;
    let bds = bds
        .iter()
        .map(|b| to_int_matrix(b, Ring::Integers).map(|m| m.to_scalar()))
        .collect::<Result<Vec<_>, _>>()?;
    match contract(&sets, &bds, Ring::Integers, Lift::Equivariant) {
        Ok(contraction) => Ok(Ok(SplitCertificate { contraction })),
        Err(f) => {
            let degree = f.level as i64;
            let reason = if degree as usize == sets.len() - 1 {
                format!("degree {} has nonzero homology", degree - 1)
            } else {
                "no equivariant integral preimage".to_string()
            };
            Ok(Err(SplitFailure {
                degree,
                representative: f.representative,
                reason,
            }))
        }
    }
}

/// An admissible chain map between special complexes over the same group.
#[derive(Debug, Clone)]
pub struct AdmissibleChainMap {
    source: SpecialComplex,
    target: SpecialComplex,
    maps: Vec<Matrix<Scalar>>,
}

impl AdmissibleChainMap {
    /// `maps[i]: R[X_i] → R[Y_i]` for `i = 0..=max(top)`; missing degrees are empty.
    pub fn new(
        source: SpecialComplex,
        target: SpecialComplex,
        maps: Vec<Matrix<Scalar>>,
    ) -> Result<Self, ChainError> {
        if source.ring != target.ring
            || source.lattice.group().table_rows() != target.lattice.group().table_rows()
        {
            return Err(ChainError::Incompatible);
        }
        let top = source.top().max(target.top());
        if maps.len() != top + 1 {
            return Err(ChainError::Dimensions(format!(
                "expected {} component maps",
                top + 1
            )));
        }
        let ring = source.ring;
        let (xs, ys) = (padded(&source, top), padded(&target, top));
        let maps = maps
            .iter()
            .map(|m| ring.matrix(m))
            .collect::<Result<Vec<_>, _>>()?;
        for i in 0..=top {
            check_map(&source.lattice, &xs[i], &ys[i], &maps[i], i as i64)?;
        }
        for i in 1..=top {
            let lhs = ring.mat_mul(&padded_boundary(&target, i), &maps[i]);
            let rhs = ring.mat_mul(&maps[i - 1], &padded_boundary(&source, i));
            if lhs != rhs {
                return Err(ChainError::NotChainMap { degree: i as i64 });
            }
        }
        Ok(AdmissibleChainMap {
            source,
            target,
            maps,
        })
    }

    pub fn identity(c: &SpecialComplex) -> Self {
        let maps = c.bases.iter().map(|b| Matrix::identity(b.size())).collect();
        AdmissibleChainMap::new(c.clone(), c.clone(), maps)
            .expect("identity is an admissible chain map")
    }

    pub fn zero(source: &SpecialComplex, target: &SpecialComplex) -> Result<Self, ChainError> {
        let top = source.top().max(target.top());
        let (xs, ys) = (padded(source, top), padded(target, top));
        let maps = (0..=top)
            .map(|i| Matrix::zeros(ys[i].size(), xs[i].size()))
            .collect();
        AdmissibleChainMap::new(source.clone(), target.clone(), maps)
    }

    /// The projection `A ⊕ B → A`.
    pub fn projection(a: &SpecialComplex, b: &SpecialComplex) -> Result<Self, ChainError> {
        let sum = a.direct_sum(b)?;
        let top = sum.top();
        let (xs, ys) = (padded(a, top), padded(b, top));
        let maps = (0..=top)
            .map(|i| {
                Matrix::block(
                    &Matrix::identity(xs[i].size()),
                    &Matrix::zeros(xs[i].size(), ys[i].size()),
                    &Matrix::zeros(0, xs[i].size()),
                    &Matrix::zeros(0, ys[i].size()),
                )
            })
            .collect();
        AdmissibleChainMap::new(sum, a.clone(), maps)
    }

    /// The inclusion `A → A ⊕ B`.
    pub fn inclusion(a: &SpecialComplex, b: &SpecialComplex) -> Result<Self, ChainError> {
        let sum = a.direct_sum(b)?;
        let top = sum.top();
        let (xs, ys) = (padded(a, top), padded(b, top));
        let maps = (0..=top)
            .map(|i| {
                Matrix::block(
                    &Matrix::identity(xs[i].size()),
                    &Matrix::zeros(xs[i].size(), 0),
                    &Matrix::zeros(ys[i].size(), xs[i].size()),
                    &Matrix::zeros(ys[i].size(), 0),
                )
            })
            .collect();
        AdmissibleChainMap::new(a.clone(), sum, maps)
    }

    pub fn source(&self) -> &SpecialComplex {
        &self.source
    }

    pub fn target(&self) -> &SpecialComplex {
        &self.target
    }

    pub fn maps(&self) -> &[Matrix<Scalar>] {
        &self.maps
    }

    fn top(&self) -> usize {
        self.maps.len() - 1
    }

    /// Mapping cone with `cone_n = X_{n−1} ⊔ Y_n` and `∂(c, d) = (−∂c, f c + ∂d)`.
    pub fn cone(&self) -> SpecialComplex {
        let top = self.top();
        let ring = self.source.ring;
        let g = self.source.lattice.group();
        let xs = padded(&self.source, top);
        let ys = padded(&self.target, top);
        let empty = ConcreteGSet::empty(g);
        let part = |n: usize| -> (&ConcreteGSet, &ConcreteGSet) {
            (
                if n == 0 { &empty } else { &xs[n - 1] },
                if n <= top { &ys[n] } else { &empty },
            )
        };
        let bases: Vec<ConcreteGSet> = (0..=top + 1)
            .map(|n| {
                let (c, d) = part(n);
                c.disjoint_union(d)
            })
            .collect();
        let boundaries = (1..=top + 1)
            .map(|n| {
                let (c_hi, d_hi) = part(n);
                let (c_lo, d_lo) = part(n - 1);
                let dc = if n >= 2 {
                    let b = padded_boundary(&self.source, n - 1);
                    b.map(|v| ring.neg(v))
                } else {
                    Matrix::zeros(c_lo.size(), c_hi.size())
                };
                let fc = self.maps[n - 1].clone();
                let dd = if n <= top {
                    padded_boundary(&self.target, n)
                } else {
                    Matrix::zeros(d_lo.size(), d_hi.size())
                };
                Matrix::block(&dc, &Matrix::zeros(c_lo.size(), d_hi.size()), &fc, &dd)
            })
            .collect();
        SpecialComplex::new(self.source.lattice.clone(), ring, bases, boundaries, None)
            .expect("the cone of an admissible chain map is special")
    }
}

fn padded(c: &SpecialComplex, top: usize) -> Vec<ConcreteGSet> {
    let mut v = c.bases.clone();
    while v.len() < top + 1 {
        v.push(ConcreteGSet::empty(c.lattice.group()));
    }
    v
}

fn padded_boundary(c: &SpecialComplex, degree: usize) -> Matrix<Scalar> {
    if degree <= c.top() {
        c.boundary(degree).clone()
    } else {
        let lo = if degree - 1 <= c.top() {
            c.bases[degree - 1].size()
        } else {
            0
        };
        Matrix::zeros(lo, 0)
    }
}

/// `g` with homotopies `s: C_i → C_{i+1}` and `t: D_i → D_{i+1}` such that
/// `g f − id = ∂s + s∂` and `f g − id = ∂t + t∂`, all admissible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomotopyCertificate {
    pub inverse: Vec<Matrix<Scalar>>,
    pub source_homotopy: Vec<Matrix<Scalar>>,
    pub target_homotopy: Vec<Matrix<Scalar>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuasiIsoWitness {
    pub class: usize,
    pub class_name: String,
    /// Degree of the mapping cone of the fixed-point map with nonzero homology.
    pub degree: i64,
}

impl HomotopyCertificate {
    pub fn verify(&self, f: &AdmissibleChainMap) -> Result<bool, ChainError> {
        let top = f.top();
        let ring = f.source.ring;
        let lattice = &f.source.lattice;
        let xs = padded(&f.source, top + 1);
        let ys = padded(&f.target, top + 1);
        if self.inverse.len() != top + 1
            || self.source_homotopy.len() != top + 1
            || self.target_homotopy.len() != top + 1
        {
            return Ok(false);
        }
        let admissible = |x: &ConcreteGSet, y: &ConcreteGSet, a: &Matrix<Scalar>| {
            a.rows() == y.size()
                && a.cols() == x.size()
                && is_equivariant(x, y, a)
                && admissibility_failure(lattice, x, y, a).is_none()
        };
        for i in 0..=top {
            if !admissible(&ys[i], &xs[i], &self.inverse[i])
                || !admissible(&xs[i], &xs[i + 1], &self.source_homotopy[i])
                || !admissible(&ys[i], &ys[i + 1], &self.target_homotopy[i])
            {
                return Ok(false);
            }
        }
        let bd = |c: &SpecialComplex, i: usize| padded_boundary(c, i);
        for i in 0..=top {
            // g is a chain map
            if i >= 1
                && ring.mat_mul(&bd(&f.source, i), &self.inverse[i])
                    != ring.mat_mul(&self.inverse[i - 1], &bd(&f.target, i))
            {
                return Ok(false);
            }
            for (c, map_then, homotopy) in [
                (
                    &f.source,
                    ring.mat_mul(&self.inverse[i], &f.maps[i]),
                    &self.source_homotopy,
                ),
                (
                    &f.target,
                    ring.mat_mul(&f.maps[i], &self.inverse[i]),
                    &self.target_homotopy,
                ),
            ] {
                let n = map_then.rows();
                let lhs = ring.mat_sub(&map_then, &ring.matrix(&Matrix::identity(n))?);
                let mut rhs = ring.mat_mul(&bd(c, i + 1), &homotopy[i]);
                if i >= 1 {
                    rhs = ring.mat_add(&rhs, &ring.mat_mul(&homotopy[i - 1], &bd(c, i)));
                }
                if lhs != rhs {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Decides whether an admissible chain map over a field is a homotopy
/// equivalence through admissible maps. Every fixed-point map `f^H` must be a
/// quasi-isomorphism (its cone exact); then an admissible contraction of the
/// cone yields the inverse and both homotopies.
pub fn kw_equivalence(
    f: &AdmissibleChainMap,
) -> Result<Result<HomotopyCertificate, QuasiIsoWitness>, ChainError> {
    let ring = f.source.ring;
    if !ring.is_field() {
        return Err(LinalgError::NotAField(ring).into());
    }
    let cone = f.cone();
    let lattice = f.source.lattice.clone();
    for class in 0..lattice.num_classes() {
        let h = cone.fixed_subcomplex(class).homology()?;
        if let Some(bad) = h.iter().find(|g| !g.is_zero()) {
            return Ok(Err(QuasiIsoWitness {
                class,
                class_name: lattice.classes()[class].name.clone(),
                degree: bad.degree,
            }));
        }
    }
    let hs = contract(&cone.bases, &cone.boundaries, ring, Lift::Admissible).map_err(|e| {
        ChainError::ConstructionFailed {
            degree: e.level as i64,
        }
    })?;
    let top = f.top();
    let xs = padded(&f.source, top + 1);
    let ys = padded(&f.target, top + 1);
    // h on cone_i = X_{i−1} ⊔ Y_i lands in cone_{i+1} = X_i ⊔ Y_{i+1}
    let mut inverse = Vec::new();
    let mut source_homotopy = Vec::new();
    let mut target_homotopy = Vec::new();
    for i in 0..=top {
        let h_i = &hs[i];
        let c_lo = if i == 0 { 0 } else { xs[i - 1].size() };
        let (x_i, y_i, y_next) = (xs[i].size(), ys[i].size(), ys[i + 1].size());
        let rows_c: Vec<usize> = (0..x_i).collect();
        let rows_d: Vec<usize> = (x_i..x_i + y_next).collect();
        let cols_d: Vec<usize> = (c_lo..c_lo + y_i).collect();
        inverse.push(h_i.select(&rows_c, &cols_d));
        target_homotopy.push(h_i.select(&rows_d, &cols_d).map(|v| ring.neg(v)));
        // s_i: C_i → C_{i+1} is the C-block of h on cone_{i+1}
        let h_next = &hs[i + 1];
        let rows_c_next: Vec<usize> = (0..xs[i + 1].size()).collect();
        let cols_c: Vec<usize> = (0..x_i).collect();
        source_homotopy.push(h_next.select(&rows_c_next, &cols_c));
    }
    let cert = HomotopyCertificate {
        inverse,
        source_homotopy,
        target_homotopy,
    };
    if !cert.verify(f)? {
        return Err(ChainError::ConstructionFailed { degree: -1 });
    }
    Ok(Ok(cert))
}

/// Helper for tests and callers: the integer matrix `[[v]]` entries as scalars.
pub fn scalar_rows(rows: &[Vec<i64>], cols: usize) -> Matrix<Scalar> {
    Matrix::from_rows_with_cols(
        rows.iter()
            .map(|r| {
                r.iter()
                    .map(|&v| Scalar::from_integer(BigInt::from(v)))
                    .collect()
            })
            .collect(),
        cols,
    )
    .expect("rows have the stated width")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;

    fn lattice(name: &str) -> Arc<SubgroupLattice> {
        Arc::new(SubgroupLattice::new(Arc::new(
            FiniteGroup::preset_from_str(name).unwrap(),
        )))
    }

    fn point(l: &Arc<SubgroupLattice>, ring: Ring) -> SpecialComplex {
        SpecialComplex::new(
            l.clone(),
            ring,
            vec![ConcreteGSet::trivial(l.group(), 1)],
            vec![],
            None,
        )
        .unwrap()
        .with_standard_augmentation()
        .unwrap()
    }

    /// The hexagon `sd(∂Δ²)` with `S₃` permuting the three original vertices.
    fn hexagon(l: &Arc<SubgroupLattice>, ring: Ring) -> SpecialComplex {
        let g = l.group();
        let perms = g.permutations().unwrap();
        // vertices: 0,1,2 original; 3,4,5 midpoints of edges {1,2},{0,2},{0,1}
        let edge_of = |a: usize, b: usize| 3 + (3 - a - b);
        let mut edges: Vec<(usize, usize)> = Vec::new();
        for v in 0..3 {
            for w in 0..3 {
                if v != w {
                    let e = (v, edge_of(v, w));
                    if !edges.contains(&e) {
                        edges.push(e);
                    }
                }
            }
        }
        edges.sort();
        let vmap = |p: &[usize], v: usize| {
            if v < 3 {
                p[v]
            } else {
                let pair: Vec<usize> = (0..3).filter(|&x| x != v - 3).map(|x| p[x]).collect();
                edge_of(pair[0], pair[1])
            }
        };
        let vact: Vec<Vec<usize>> = perms
            .iter()
            .map(|p| (0..6).map(|v| vmap(p, v)).collect())
            .collect();
        let eact: Vec<Vec<usize>> = perms
            .iter()
            .map(|p| {
                edges
                    .iter()
                    .map(|&(a, b)| {
                        edges
                            .iter()
                            .position(|&e| e == (vmap(p, a), vmap(p, b)))
                            .unwrap()
                    })
                    .collect()
            })
            .collect();
        let mut rows = vec![vec![0i64; edges.len()]; 6];
        for (j, &(a, b)) in edges.iter().enumerate() {
            rows[a][j] = -1;
            rows[b][j] = 1;
        }
        SpecialComplex::new(
            l.clone(),
            ring,
            vec![
                ConcreteGSet::new(g, vact).unwrap(),
                ConcreteGSet::new(g, eact).unwrap(),
            ],
            vec![scalar_rows(&rows, edges.len())],
            None,
        )
        .unwrap()
        .with_standard_augmentation()
        .unwrap()
    }

    #[test]
    fn point_complex() {
        let l = lattice("S3");
        let c = point(&l, Ring::Integers);
        assert_eq!(c.euler_characteristic(), 1);
        assert!(c.is_acyclic(false).unwrap());
        assert!(c.is_acyclic(true).unwrap());
        let cert = g_split_check(&c).unwrap().unwrap();
        assert!(cert.verify(&c).unwrap());
    }

    #[test]
    fn hexagon_homology_and_quotient() {
        let l = lattice("S3");
        let c = hexagon(&l, Ring::Integers);
        let h = c.underlying().homology().unwrap();
        assert_eq!((h[0].rank, h[1].rank), (1, 1));
        assert!(!c.is_acyclic(false).unwrap());
        let fixed = c.fixed_subcomplex(1);
        assert_eq!(fixed.dims, vec![2, 0]);
        assert_eq!(c.fixed_subcomplex(3).dims, vec![0, 0]);
        let q = c.quotient_complex();
        assert_eq!(q.dims, vec![2, 1]);
        let hq = q.homology().unwrap();
        assert!(hq[0].rank == 1 && hq[1].is_zero());
        assert!(g_split_check(&c).unwrap().is_err());
    }

    #[test]
    fn torsion_homology() {
        let c = PlainComplex::new(
            Ring::Integers,
            0,
            vec![1, 1],
            vec![scalar_rows(&[vec![2]], 1)],
        )
        .unwrap();
        let h = c.homology().unwrap();
        assert_eq!(h[0].torsion, vec!["2".to_string()]);
        assert!(h[1].is_zero());
        let over_f3 = PlainComplex::new(
            Ring::Prime(3),
            0,
            vec![1, 1],
            vec![scalar_rows(&[vec![2]], 1)],
        )
        .unwrap();
        assert!(over_f3.is_exact().unwrap());
    }

    #[test]
    fn validation_errors() {
        let l = lattice("C2");
        let g = l.group();
        let swap = ConcreteGSet::coset_space(g, l.representative(0));
        let pt = ConcreteGSet::trivial(g, 1);
        // a boundary from a fixed point into a free orbit point is not equivariant
        let bad = SpecialComplex::new(
            l.clone(),
            Ring::Integers,
            vec![swap.clone(), pt.clone()],
            vec![scalar_rows(&[vec![1], vec![0]], 1)],
            None,
        );
        assert_eq!(bad.unwrap_err(), ChainError::NotEquivariant { degree: 1 });
        // equivariant but leaves the fixed-point span
        let bad = SpecialComplex::new(
            l.clone(),
            Ring::Integers,
            vec![swap.clone(), pt.clone()],
            vec![scalar_rows(&[vec![1], vec![1]], 1)],
            None,
        );
        assert_eq!(
            bad.unwrap_err(),
            ChainError::NotAdmissible {
                degree: 1,
                class: 1
            }
        );
        let sq = SpecialComplex::new(
            l.clone(),
            Ring::Integers,
            vec![pt.clone(), pt.clone(), pt.clone()],
            vec![scalar_rows(&[vec![1]], 1), scalar_rows(&[vec![1]], 1)],
            None,
        );
        assert_eq!(
            sq.unwrap_err(),
            ChainError::BoundarySquareNonzero { degree: 2 }
        );
    }

    #[test]
    fn swap_fails_to_split_in_degree_zero() {
        let l = lattice("C2");
        let g = l.group();
        let swap = ConcreteGSet::coset_space(g, l.representative(0));
        let c = SpecialComplex::new(l.clone(), Ring::Integers, vec![swap], vec![], None)
            .unwrap()
            .with_standard_augmentation()
            .unwrap();
        let failure = g_split_check(&c).unwrap().unwrap_err();
        assert_eq!(failure.degree, 0);
    }

    #[test]
    fn identity_and_zero_maps() {
        let l = lattice("S3");
        for ring in [Ring::Rationals, Ring::Prime(2), Ring::Prime(3)] {
            let c = hexagon(&l, ring);
            let id = AdmissibleChainMap::identity(&c);
            let cert = kw_equivalence(&id).unwrap().unwrap();
            assert!(cert.verify(&id).unwrap());
            let zero = AdmissibleChainMap::zero(&c, &c).unwrap();
            let w = kw_equivalence(&zero).unwrap().unwrap_err();
            assert_eq!((w.class, w.degree), (0, 0));
        }
    }

    #[test]
    fn elementary_expansions_are_equivalences() {
        let l = lattice("S3");
        for ring in [Ring::Rationals, Ring::Prime(2), Ring::Prime(3)] {
            let c = hexagon(&l, ring);
            for (class, degree) in [(0, 1), (1, 1), (2, 2), (3, 1)] {
                let x = ConcreteGSet::coset_space(l.group(), l.representative(class));
                let e = SpecialComplex::elementary(l.clone(), ring, x, degree).unwrap();
                for f in [
                    AdmissibleChainMap::projection(&c, &e).unwrap(),
                    AdmissibleChainMap::inclusion(&c, &e).unwrap(),
                ] {
                    let cert = kw_equivalence(&f).unwrap().unwrap();
                    assert!(cert.verify(&f).unwrap());
                }
            }
        }
    }

    #[test]
    fn tampered_homotopy_fails_verification() {
        let l = lattice("S3");
        let c = hexagon(&l, Ring::Rationals);
        let x = ConcreteGSet::coset_space(l.group(), l.representative(1));
        let e = SpecialComplex::elementary(l.clone(), Ring::Rationals, x, 1).unwrap();
        let f = AdmissibleChainMap::projection(&c, &e).unwrap();
        let mut cert = kw_equivalence(&f).unwrap().unwrap();
        let h = &mut cert.source_homotopy[0];
        let v = h.get(0, 0) + Scalar::one();
        h.set(0, 0, v);
        assert!(!cert.verify(&f).unwrap());
    }

    #[test]
    fn cone_of_identity_is_exact() {
        let l = lattice("S3");
        let c = hexagon(&l, Ring::Rationals);
        assert!(AdmissibleChainMap::identity(&c)
            .cone()
            .underlying()
            .is_exact()
            .unwrap());
    }
}
