//! The orbit category over a family of subgroups and modules over it.
//!
//! Objects are `G/K` for class representatives `K` in the family. A morphism
//! `G/V → G/K` is stored as the coset `gK` it sends `eV` to, which requires
//! `g⁻¹Vg ⊆ K`; the composite of `hU: G/V → G/U` and `gK: G/U → G/K` is `(hg)K`.
//! Modules are contravariant: `M(φ): M(G/K) → M(G/V)`, as a matrix with
//! `dim M(V)` rows, and `M(φ ∘ α) = M(α) · M(φ)`.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::group::{ConcreteGSet, Prime, Subgroup, SubgroupLattice};
use crate::linalg::{
    pivot_columns, smith_normal_form, solve_linear, to_int_matrix, LinalgError, Matrix, Ring,
    Scalar,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrbitError {
    #[error("class {0} is not in the family")]
    NotInFamily(usize),
    #[error("subgroup set is not closed under {0}")]
    NotClosed(&'static str),
    #[error("module is not functorial: {0}")]
    NotFunctorial(String),
    #[error("weyl group action is not a homomorphism: {0}")]
    BadAction(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Subgroups closed under conjugation and passing to subgroups.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Family {
    /// Subgroup indices into the lattice.
    pub subgroups: BTreeSet<usize>,
    /// Conjugacy classes represented, in class order.
    pub classes: Vec<usize>,
}

impl Family {
    pub fn new(lattice: &SubgroupLattice, subgroups: BTreeSet<usize>) -> Result<Self, OrbitError> {
        let g = lattice.group();
        for &h in &subgroups {
            let sub = lattice.subgroup(h);
            for x in 0..g.order() {
                let conj = sub.conjugate_by(g, x);
                let idx = lattice
                    .subgroup_index(conj.members())
                    .expect("conjugates are subgroups");
                if !subgroups.contains(&idx) {
                    return Err(OrbitError::NotClosed("conjugation"));
                }
            }
            if lattice.subgroups_of(h).any(|k| !subgroups.contains(&k)) {
                return Err(OrbitError::NotClosed("subgroups"));
            }
        }
        let classes: BTreeSet<usize> = subgroups.iter().map(|&h| lattice.class_of(h)).collect();
        Ok(Family {
            subgroups,
            classes: classes.into_iter().collect(),
        })
    }

    pub fn all(lattice: &SubgroupLattice) -> Self {
        Family {
            subgroups: (0..lattice.subgroups().len()).collect(),
            classes: (0..lattice.num_classes()).collect(),
        }
    }

    pub fn p_subgroups(lattice: &SubgroupLattice, p: Prime) -> Self {
        let subgroups = (0..lattice.subgroups().len())
            .filter(|&h| {
                let mut n = lattice.subgroup(h).order();
                while n.is_multiple_of(p.get() as usize) {
                    n /= p.get() as usize;
                }
                n == 1
            })
            .collect();
        Family::new(lattice, subgroups).expect("p-subgroups form a family")
    }

    pub fn contains_class(&self, c: usize) -> bool {
        self.classes.binary_search(&c).is_ok()
    }
}

/// `Mor(G/V, G/K)`, listed as the cosets of `K` fixed by `V`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitMorphismSet {
    pub source: usize,
    pub target: usize,
    /// Coset indices in the enumeration of `G/K` used by [`OrbitCategory`].
    pub cosets: Vec<usize>,
    /// Least element of each coset.
    pub representatives: Vec<usize>,
}

impl OrbitMorphismSet {
    pub fn len(&self) -> usize {
        self.cosets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cosets.is_empty()
    }

    pub fn position(&self, coset: usize) -> Option<usize> {
        self.cosets.binary_search(&coset).ok()
    }
}

#[derive(Debug, Clone)]
struct CosetData {
    gset: ConcreteGSet,
    reps: Vec<usize>,
    coset_of: Vec<usize>,
}

/// A family together with coset bookkeeping for each of its classes.
#[derive(Debug, Clone)]
pub struct OrbitCategory {
    lattice: Arc<SubgroupLattice>,
    family: Family,
    cosets: BTreeMap<usize, CosetData>,
}

impl OrbitCategory {
    pub fn new(lattice: Arc<SubgroupLattice>, family: Family) -> Self {
        let g = lattice.group();
        let cosets = family
            .classes
            .iter()
            .map(|&c| {
                let k = lattice.representative(c);
                let list = g.left_cosets(k);
                let mut coset_of = vec![0; g.order()];
                for (i, cs) in list.iter().enumerate() {
                    for &x in cs {
                        coset_of[x] = i;
                    }
                }
                let data = CosetData {
                    gset: ConcreteGSet::coset_space(g, k),
                    reps: list.iter().map(|cs| cs[0]).collect(),
                    coset_of,
                };
                (c, data)
            })
            .collect();
        OrbitCategory {
            lattice,
            family,
            cosets,
        }
    }

    pub fn lattice(&self) -> &SubgroupLattice {
        &self.lattice
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn objects(&self) -> &[usize] {
        &self.family.classes
    }

    fn data(&self, c: usize) -> Result<&CosetData, OrbitError> {
        self.cosets.get(&c).ok_or(OrbitError::NotInFamily(c))
    }

    /// Index of the coset `gK` in the enumeration of `G/K`.
    pub fn coset_index(&self, k: usize, g: usize) -> Result<usize, OrbitError> {
        Ok(self.data(k)?.coset_of[g])
    }

    pub fn mor_set(&self, v: usize, k: usize) -> Result<OrbitMorphismSet, OrbitError> {
        self.data(v)?;
        let data = self.data(k)?;
        let cosets = data.gset.fixed_points(self.lattice.representative(v));
        Ok(OrbitMorphismSet {
            source: v,
            target: k,
            representatives: cosets.iter().map(|&i| data.reps[i]).collect(),
            cosets,
        })
    }

    /// Coset of `φ ∘ α` for `α = hU ∈ Mor(V, U)` and `φ = gK ∈ Mor(U, K)`.
    pub fn compose(&self, alpha_rep: usize, phi_rep: usize, k: usize) -> Result<usize, OrbitError> {
        let g = self.lattice.group();
        self.coset_index(k, g.mul(alpha_rep, phi_rep))
    }

    /// The identity of `G/V`.
    pub fn identity_coset(&self, v: usize) -> Result<usize, OrbitError> {
        self.coset_index(v, self.lattice.group().identity())
    }

    /// `W_G(Q) = Mor(G/Q, G/Q)` with the product `nQ · mQ = nmQ`; returns the
    /// multiplication table on morphism positions.
    pub fn weyl_table(&self, q: usize) -> Result<Vec<Vec<usize>>, OrbitError> {
        let g = self.lattice.group();
        let w = self.mor_set(q, q)?;
        w.representatives
            .iter()
            .map(|&a| {
                w.representatives
                    .iter()
                    .map(|&b| {
                        let c = self.coset_index(q, g.mul(a, b))?;
                        Ok(w.position(c).expect("normalizer is closed"))
                    })
                    .collect()
            })
            .collect()
    }
}

/// A finite free module with a left action of `W_G(Q)`; `action[i]` is the
/// matrix of the `i`-th element of `Mor(G/Q, G/Q)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeylModule {
    pub ring: Ring,
    pub class: usize,
    pub rank: usize,
    pub action: Vec<Matrix<Scalar>>,
    /// Invariant factors greater than 1 of a torsion part, integral case only.
    pub torsion: Vec<BigInt>,
}

impl WeylModule {
    /// The free module `R[W_G(Q)]` with `w · e_x = e_{wx}`.
    pub fn regular(cat: &OrbitCategory, q: usize, ring: Ring) -> Result<Self, OrbitError> {
        let table = cat.weyl_table(q)?;
        let n = table.len();
        let action = (0..n)
            .map(|w| {
                let mut m = Matrix::zeros(n, n);
                for x in 0..n {
                    m.set(table[w][x], x, ring.one());
                }
                m
            })
            .collect();
        Ok(WeylModule {
            ring,
            class: q,
            rank: n,
            action,
            torsion: Vec::new(),
        })
    }

    /// `R` with trivial action.
    pub fn trivial(cat: &OrbitCategory, q: usize, ring: Ring) -> Result<Self, OrbitError> {
        let n = cat.mor_set(q, q)?.len();
        Ok(WeylModule {
            ring,
            class: q,
            rank: 1,
            action: vec![Matrix::identity(1); n],
            torsion: Vec::new(),
        })
    }

    pub fn check_action(&self, cat: &OrbitCategory) -> Result<(), OrbitError> {
        let table = cat.weyl_table(self.class)?;
        for (a, row) in table.iter().enumerate() {
            for (b, &ab) in row.iter().enumerate() {
                let prod = self.ring.mat_mul(&self.action[a], &self.action[b]);
                if prod != self.action[ab] {
                    return Err(OrbitError::BadAction(format!("elements {a} and {b}")));
                }
            }
        }
        Ok(())
    }
}

/// A right module over the orbit category of a family, with distinguished bases.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitModule {
    pub ring: Ring,
    /// Rank at each family class.
    pub ranks: BTreeMap<usize, usize>,
    /// `maps[(V, K)][i]` is `M(φ_i)` for the `i`-th element of `Mor(G/V, G/K)`.
    pub maps: BTreeMap<(usize, usize), Vec<Matrix<Scalar>>>,
}

impl OrbitModule {
    fn build<F>(
        cat: &OrbitCategory,
        ring: Ring,
        ranks: BTreeMap<usize, usize>,
        mut map: F,
    ) -> Result<Self, OrbitError>
    where
        F: FnMut(&OrbitMorphismSet, usize) -> Result<Matrix<Scalar>, OrbitError>,
    {
        let mut maps = BTreeMap::new();
        for &v in cat.objects() {
            for &k in cat.objects() {
                let mor = cat.mor_set(v, k)?;
                let mats = (0..mor.len())
                    .map(|i| map(&mor, i))
                    .collect::<Result<Vec<_>, _>>()?;
                maps.insert((v, k), mats);
            }
        }
        Ok(OrbitModule { ring, ranks, maps })
    }

    pub fn rank_at(&self, c: usize) -> usize {
        self.ranks.get(&c).copied().unwrap_or(0)
    }

    /// Checks identities and every composable pair `G/V → G/U → G/K`.
    pub fn check_functoriality(&self, cat: &OrbitCategory) -> Result<(), OrbitError> {
        let objs = cat.objects();
        for &v in objs {
            let id = cat.identity_coset(v)?;
            let pos = cat
                .mor_set(v, v)?
                .position(id)
                .expect("identity is a morphism");
            if self.maps[&(v, v)][pos] != Matrix::identity(self.rank_at(v)) {
                return Err(OrbitError::NotFunctorial(format!("identity at class {v}")));
            }
        }
        for &v in objs {
            for &u in objs {
                let alphas = cat.mor_set(v, u)?;
                if alphas.is_empty() {
                    continue;
                }
                for &k in objs {
                    let phis = cat.mor_set(u, k)?;
                    let composites = cat.mor_set(v, k)?;
                    for (i, &h) in alphas.representatives.iter().enumerate() {
                        for (j, &g) in phis.representatives.iter().enumerate() {
                            let c = cat.compose(h, g, k)?;
                            let pos = composites.position(c).expect("composite is a morphism");
                            let lhs = &self.maps[&(v, k)][pos];
                            let rhs = self
                                .ring
                                .mat_mul(&self.maps[&(v, u)][i], &self.maps[&(u, k)][j]);
                            if *lhs != rhs {
                                return Err(OrbitError::NotFunctorial(format!(
                                    "classes {v} -> {u} -> {k}, morphisms {i}, {j}"
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Ranks per class and morphism matrices as strings, for inspection.
    pub fn to_json(&self) -> serde_json::Value {
        let maps: Vec<serde_json::Value> = self
            .maps
            .iter()
            .map(|((v, k), mats)| {
                serde_json::json!({
                    "source": v,
                    "target": k,
                    "matrices": mats.iter().map(matrix_strings).collect::<Vec<_>>(),
                })
            })
            .collect();
        serde_json::json!({
            "ring": self.ring.to_string(),
            "ranks": self.ranks,
            "maps": maps,
        })
    }
}

fn matrix_strings(m: &Matrix<Scalar>) -> Vec<Vec<String>> {
    m.to_rows()
        .iter()
        .map(|r| r.iter().map(|x| x.to_string()).collect())
        .collect()
}

/// `R[X]` with value `R[X^V]` at `G/V`; the morphism `gK` acts by `x ↦ g·x`.
pub fn fixed_point_module(
    cat: &OrbitCategory,
    x: &ConcreteGSet,
    ring: Ring,
) -> Result<OrbitModule, OrbitError> {
    let lattice = cat.lattice();
    let fixed: BTreeMap<usize, Vec<usize>> = cat
        .objects()
        .iter()
        .map(|&c| (c, x.fixed_points(lattice.representative(c))))
        .collect();
    let ranks = fixed.iter().map(|(&c, f)| (c, f.len())).collect();
    OrbitModule::build(cat, ring, ranks, |mor, i| {
        let src = &fixed[&mor.source];
        let tgt = &fixed[&mor.target];
        let g = mor.representatives[i];
        let mut m = Matrix::zeros(src.len(), tgt.len());
        for (j, &pt) in tgt.iter().enumerate() {
            let image = x.act(g, pt);
            let row = src
                .binary_search(&image)
                .expect("translate lies in the smaller fixed set");
            m.set(row, j, ring.one());
        }
        Ok(m)
    })
}

/// `I_Q(N)`: the value `N` at `G/Q` and zero elsewhere.
pub fn inclusion_functor(cat: &OrbitCategory, n: &WeylModule) -> Result<OrbitModule, OrbitError> {
    let q = n.class;
    cat.data(q)?;
    let ranks = cat
        .objects()
        .iter()
        .map(|&c| (c, if c == q { n.rank } else { 0 }))
        .collect::<BTreeMap<_, _>>();
    let rk = ranks.clone();
    OrbitModule::build(cat, n.ring, ranks, |mor, i| {
        if mor.source == q && mor.target == q {
            Ok(n.action[i].clone())
        } else {
            Ok(Matrix::zeros(rk[&mor.source], rk[&mor.target]))
        }
    })
}

/// `E_Q(N)(G/V) = N ⊗_{R[W]} R[Mor(G/V, G/Q)]`, one copy of `N` per orbit of
/// `W_G(Q)` acting on `Mor(G/V, G/Q)` by `gQ · nQ = gnQ`.
pub fn extension_functor(cat: &OrbitCategory, n: &WeylModule) -> Result<OrbitModule, OrbitError> {
    let q = n.class;
    let g = cat.lattice().group();
    let weyl = cat.mor_set(q, q)?;
    // orbit representatives of Mor(V, Q) under the Weyl group
    let mut orbit_reps: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &v in cat.objects() {
        let mor = cat.mor_set(v, q)?;
        let mut seen = BTreeSet::new();
        let mut reps = Vec::new();
        for &h in &mor.representatives {
            let c = cat.coset_index(q, h)?;
            if seen.contains(&c) {
                continue;
            }
            reps.push(h);
            for &w in &weyl.representatives {
                seen.insert(cat.coset_index(q, g.mul(h, w))?);
            }
        }
        orbit_reps.insert(v, reps);
    }
    // locate a coset hQ as φ_k · w with φ_k an orbit representative
    let locate = |v: usize, h: usize| -> Result<(usize, usize), OrbitError> {
        let target = cat.coset_index(q, h)?;
        for (k, &rep) in orbit_reps[&v].iter().enumerate() {
            let w_coset = cat.coset_index(q, g.mul(g.inv(rep), h))?;
            if let Some(w) = weyl.position(w_coset) {
                if cat.coset_index(q, g.mul(rep, weyl.representatives[w]))? == target {
                    return Ok((k, w));
                }
            }
        }
        unreachable!("every morphism lies in some Weyl orbit")
    };
    let r = n.rank;
    let ranks: BTreeMap<usize, usize> = orbit_reps
        .iter()
        .map(|(&v, reps)| (v, reps.len() * r))
        .collect();
    let rk = ranks.clone();
    OrbitModule::build(cat, n.ring, ranks, |mor, i| {
        // α = hU : G/V → G/U sends φ_j ⊗ x (φ_j ∈ Mor(U, Q)) to (φ_j ∘ α) ⊗ x
        let (v, u) = (mor.source, mor.target);
        let h = mor.representatives[i];
        let mut m = Matrix::zeros(rk[&v], rk[&u]);
        for (j, &rep) in orbit_reps[&u].iter().enumerate() {
            let (k, w) = locate(v, g.mul(h, rep))?;
            for a in 0..r {
                for b in 0..r {
                    m.set(k * r + a, j * r + b, n.action[w].get(a, b).clone());
                }
            }
        }
        Ok(m)
    })
}

/// `Res_K(M) = M(G/K)` with `W_G(K)` acting through the automorphisms of `G/K`.
pub fn restriction(
    cat: &OrbitCategory,
    m: &OrbitModule,
    k: usize,
) -> Result<WeylModule, OrbitError> {
    cat.data(k)?;
    Ok(WeylModule {
        ring: m.ring,
        class: k,
        rank: m.rank_at(k),
        action: m.maps[&(k, k)].clone(),
        torsion: Vec::new(),
    })
}

/// `S_Q(M) = M(G/Q) / M(G/Q)_s`, where `M(G/Q)_s` is spanned by the images of
/// `M(f)` for every `f: G/Q → G/K` with `K` in the family and not conjugate to `Q`.
/// Over ℤ the torsion of the quotient is reported and the action is on the free part.
pub fn split_functor(
    cat: &OrbitCategory,
    m: &OrbitModule,
    q: usize,
) -> Result<WeylModule, OrbitError> {
    cat.data(q)?;
    let ring = m.ring;
    let dim = m.rank_at(q);
    let mut gens: Vec<Vec<Scalar>> = Vec::new();
    for &k in cat.objects() {
        if k == q {
            continue;
        }
        for mat in &m.maps[&(q, k)] {
            for j in 0..mat.cols() {
                gens.push(mat.column(j));
            }
        }
    }
    let autos = &m.maps[&(q, q)];
    let image = Matrix::from_rows_with_cols(gens, dim)?.transpose();
    match ring {
        Ring::Integers => split_integral(image, autos, q),
        _ => split_field(image, autos, q, ring),
    }
}

fn split_field(
    image: Matrix<Scalar>,
    autos: &[Matrix<Scalar>],
    q: usize,
    ring: Ring,
) -> Result<WeylModule, OrbitError> {
    let dim = image.rows();
    // extend a basis of the image by standard vectors
    let mut augmented_rows = image.to_rows();
    for (i, row) in augmented_rows.iter_mut().enumerate() {
        for j in 0..dim {
            row.push(if i == j { ring.one() } else { ring.zero() });
        }
    }
    let augmented = Matrix::from_rows_with_cols(augmented_rows, image.cols() + dim)?;
    let pivots = pivot_columns(&augmented, ring)?;
    let image_cols: Vec<usize> = pivots
        .iter()
        .copied()
        .filter(|&c| c < image.cols())
        .collect();
    let free: Vec<usize> = pivots
        .iter()
        .filter(|&&c| c >= image.cols())
        .map(|&c| c - image.cols())
        .collect();
    let all_rows: Vec<usize> = (0..dim).collect();
    let basis = augmented.select(&all_rows, &pivots);
    let action = autos
        .iter()
        .map(|a| {
            let mut out = Matrix::zeros(free.len(), free.len());
            for (j, &e) in free.iter().enumerate() {
                let col = a.column(e);
                let coords =
                    solve_linear(&basis, &col, ring)?.expect("basis spans the whole space");
                for (i, _) in free.iter().enumerate() {
                    out.set(i, j, coords[image_cols.len() + i].clone());
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>, OrbitError>>()?;
    Ok(WeylModule {
        ring,
        class: q,
        rank: free.len(),
        action,
        torsion: Vec::new(),
    })
}

fn split_integral(
    image: Matrix<Scalar>,
    autos: &[Matrix<Scalar>],
    q: usize,
) -> Result<WeylModule, OrbitError> {
    let dim = image.rows();
    let snf = smith_normal_form(&to_int_matrix(&image, Ring::Integers)?);
    let torsion: Vec<BigInt> = snf
        .invariant_factors()
        .into_iter()
        .filter(|d| !d.is_one())
        .collect();
    let free = dim - snf.rank;
    let action = autos
        .iter()
        .map(|a| {
            let ai = to_int_matrix(a, Ring::Integers)?;
            // quotient coordinates are rows rank.. of P; lift free generator j as U e_{rank+j}
            let conj = snf.p.mul(&ai).mul(&snf.u);
            let mut out = Matrix::zeros(free, free);
            for i in 0..free {
                for j in 0..free {
                    let x = conj.get(snf.rank + i, snf.rank + j);
                    if !x.is_zero() {
                        out.set(i, j, Scalar::from_integer(x.clone()));
                    }
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>, OrbitError>>()?;
    Ok(WeylModule {
        ring: Ring::Integers,
        class: q,
        rank: free,
        action,
        torsion,
    })
}

/// Number of `N_G(Q)`-orbits on `(G/H)^Q`.
pub fn n_hq(lattice: &SubgroupLattice, h: &Subgroup, q: &Subgroup) -> usize {
    let g = lattice.group();
    let x = ConcreteGSet::coset_space(g, h);
    let fixed: BTreeSet<usize> = x.fixed_points(q).into_iter().collect();
    let qi = lattice
        .subgroup_index(q.members())
        .expect("q is a subgroup");
    let normalizer = lattice.subgroup(lattice.normalizer(qi));
    let mut seen = BTreeSet::new();
    let mut orbits = 0;
    for &pt in &fixed {
        if seen.contains(&pt) {
            continue;
        }
        orbits += 1;
        for &n in normalizer.members() {
            seen.insert(x.act(n, pt));
        }
    }
    orbits
}

/// Whether `R[G/H]` is projective over the `p`-subgroup orbit category, by the
/// criterion that `H` has a normal Sylow `p`-subgroup.
pub fn is_projective_orbit_basis(lattice: &SubgroupLattice, h: usize, p: Prime) -> bool {
    lattice.has_normal_sylow(h, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;

    fn setup(name: &str) -> (Arc<SubgroupLattice>, OrbitCategory) {
        let l = Arc::new(SubgroupLattice::new(Arc::new(
            FiniteGroup::preset_from_str(name).unwrap(),
        )));
        let cat = OrbitCategory::new(l.clone(), Family::all(&l));
        (l, cat)
    }

    #[test]
    fn family_closure() {
        let (l, _) = setup("S3");
        let two = Family::p_subgroups(&l, Prime::new(2).unwrap());
        assert_eq!(two.classes, vec![0, 1]);
        // a single C2 is not closed under conjugation
        let c2 = l.representative(1).members().to_vec();
        let idx = l.subgroup_index(&c2).unwrap();
        assert_eq!(
            Family::new(&l, [0, idx].into_iter().collect()),
            Err(OrbitError::NotClosed("conjugation"))
        );
        let whole = l.subgroups().len() - 1;
        assert_eq!(
            Family::new(&l, [whole].into_iter().collect()),
            Err(OrbitError::NotClosed("subgroups"))
        );
    }

    #[test]
    fn morphism_counts() {
        let (l, cat) = setup("S3");
        assert_eq!(cat.mor_set(0, 2).unwrap().len(), 2);
        assert_eq!(cat.mor_set(1, 1).unwrap().len(), 1);
        assert_eq!(cat.mor_set(2, 1).unwrap().len(), 0);
        let two = OrbitCategory::new(l.clone(), Family::p_subgroups(&l, Prime::new(2).unwrap()));
        assert_eq!(two.mor_set(1, 1).unwrap().len(), 1);
        assert_eq!(two.mor_set(2, 2), Err(OrbitError::NotInFamily(2)));
    }

    #[test]
    fn fixed_point_modules() {
        let (l, cat) = setup("C2");
        let m = fixed_point_module(
            &cat,
            &ConcreteGSet::coset_space(l.group(), l.representative(0)),
            Ring::Integers,
        )
        .unwrap();
        assert_eq!(m.rank_at(0), 2);
        assert_eq!(m.rank_at(1), 0);
        m.check_functoriality(&cat).unwrap();
        let point = fixed_point_module(&cat, &ConcreteGSet::trivial(l.group(), 1), Ring::Rationals)
            .unwrap();
        assert!(point.ranks.values().all(|&r| r == 1));
    }

    #[test]
    fn split_functor_examples() {
        let (l, cat) = setup("C2");
        let m = fixed_point_module(
            &cat,
            &ConcreteGSet::coset_space(l.group(), l.representative(0)),
            Ring::Integers,
        )
        .unwrap();
        assert_eq!(split_functor(&cat, &m, 1).unwrap().rank, 0);
        let s1 = split_functor(&cat, &m, 0).unwrap();
        assert_eq!(s1.rank, 2);
        s1.check_action(&cat).unwrap();
    }

    #[test]
    fn split_over_integers_sees_torsion() {
        // M = constant Z on C2 with M(1 -> C2) = 2: the quotient at [1] is Z/2
        let (_, cat) = setup("C2");
        let mut m = fixed_point_module(
            &cat,
            &ConcreteGSet::trivial(cat.lattice().group(), 1),
            Ring::Integers,
        )
        .unwrap();
        let two = Matrix::from_rows(vec![vec![Scalar::from_integer(2.into())]]).unwrap();
        m.maps.get_mut(&(0, 1)).unwrap()[0] = two;
        let s = split_functor(&cat, &m, 0).unwrap();
        assert_eq!(s.rank, 0);
        assert_eq!(s.torsion, vec![BigInt::from(2)]);
    }

    #[test]
    fn extension_of_regular_is_free() {
        let (l, cat) = setup("S3");
        for q in 0..l.num_classes() {
            for ring in [Ring::Integers, Ring::Prime(2), Ring::Rationals] {
                let n = WeylModule::regular(&cat, q, ring).unwrap();
                n.check_action(&cat).unwrap();
                let e = extension_functor(&cat, &n).unwrap();
                e.check_functoriality(&cat).unwrap();
                for v in 0..l.num_classes() {
                    assert_eq!(e.rank_at(v), cat.mor_set(v, q).unwrap().len());
                }
                assert_eq!(split_functor(&cat, &e, q).unwrap().rank, n.rank);
            }
        }
    }

    #[test]
    fn inclusion_and_restriction() {
        let (l, cat) = setup("S3");
        let n = WeylModule::trivial(&cat, 2, Ring::Rationals).unwrap();
        let i = inclusion_functor(&cat, &n).unwrap();
        i.check_functoriality(&cat).unwrap();
        for k in 0..l.num_classes() {
            let r = restriction(&cat, &i, k).unwrap();
            assert_eq!(r.rank, if k == 2 { 1 } else { 0 });
        }
    }

    #[test]
    fn orbit_counts() {
        let (l, _) = setup("S3");
        let g = l.group();
        let c2 = l.representative(1).clone();
        assert_eq!(n_hq(&l, &c2, &Subgroup::trivial()), 1);
        assert_eq!(n_hq(&l, &c2, &c2), 1);
        assert_eq!(n_hq(&l, &Subgroup::whole(g), &c2), 1);
    }

    #[test]
    fn projectivity_criterion() {
        let (l, _) = setup("S3");
        let p2 = Prime::new(2).unwrap();
        let rep = |c: usize| l.classes()[c].representative;
        assert!(is_projective_orbit_basis(&l, rep(0), p2));
        assert!(is_projective_orbit_basis(&l, rep(1), p2));
        assert!(is_projective_orbit_basis(&l, rep(2), p2));
        assert!(!is_projective_orbit_basis(&l, rep(3), p2));
    }
}
