//! Mod-`p` and integral resolving functions and the invariants `m_p(G)`, `m(G)`.
//!
//! A super class function `φ` is mod-`p` resolving when `|W_G(K)|` divides `φ(K)`
//! for every class and `Σ_{L ⊇ K} φ(L) = 0` for every `p`-hypoelementary `K`,
//! the sum running over actual subgroups `L`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

use crate::burnside::{BurnsideElement, BurnsideRing, SuperClassFunction};
use crate::classify::{gpq_primes, hypoelementary_classes, DressClassification};
use crate::group::{prime_divisors, Prime, SubgroupLattice};
use crate::linalg::{hermite_kernel, IntMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Error)]
pub enum ResolvingFailure {
    #[error("expected {expected} class values, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("weyl order {weyl_order} does not divide {value} at class {name}")]
    Divisibility {
        class: usize,
        name: String,
        weyl_order: i64,
        value: i64,
    },
    #[error("sum over subgroups containing {name} is {sum}, not 0")]
    NonzeroSum {
        class: usize,
        name: String,
        sum: i64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResolvingError {
    #[error("not a resolving function: {0}")]
    NotResolving(ResolvingFailure),
    #[error("|G| = {order} is a power of {p}")]
    PPowerOrder { order: usize, p: u64 },
    #[error("resolving function {0:?} has no Burnside preimage")]
    BrokenCertificate(Vec<i64>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DivisibilityRecord {
    pub class: usize,
    pub weyl_order: i64,
    pub value: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VanishingRecord {
    pub class: usize,
    /// Subgroup indices `L ⊇ K` for the class representative `K`.
    pub containing: Vec<usize>,
    pub sum: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResolvingCertificate {
    /// `None` for the integral case.
    pub p: Option<Prime>,
    pub phi: SuperClassFunction,
    pub divisibility: Vec<DivisibilityRecord>,
    pub vanishing: Vec<VanishingRecord>,
}

impl ResolvingCertificate {
    /// Re-checks every record against the lattice from scratch.
    pub fn verify(&self, lattice: &SubgroupLattice) -> bool {
        let n = lattice.num_classes();
        if self.phi.values.len() != n || self.divisibility.len() != n {
            return false;
        }
        let div_ok = self.divisibility.iter().enumerate().all(|(c, r)| {
            r.class == c
                && r.weyl_order == lattice.weyl_orders()[c] as i64
                && r.value == self.phi.values[c]
                && r.value % r.weyl_order == 0
        });
        let sums_ok = self.vanishing.iter().all(|r| {
            let k = lattice.representative(r.class);
            let expected: Vec<usize> = (0..lattice.subgroups().len())
                .filter(|&l| k.is_subgroup_of(lattice.subgroup(l)))
                .collect();
            let sum: i64 = expected
                .iter()
                .map(|&l| self.phi.values[lattice.class_of(l)])
                .sum();
            r.containing == expected && r.sum == sum && sum == 0
        });
        div_ok && sums_ok
    }
}

/// Defining conditions for one prime (or jointly for all primes), with the
/// containing subgroups of each constrained representative precomputed.
#[derive(Debug, Clone)]
pub struct ResolvingConditions {
    p: Option<Prime>,
    weyl: Vec<i64>,
    names: Vec<String>,
    constrained: Vec<usize>,
    /// For each constrained class, subgroup indices `L ⊇ K` and their classes.
    containing: Vec<Vec<usize>>,
    containing_classes: Vec<Vec<usize>>,
}

impl ResolvingConditions {
    pub fn new(lattice: &SubgroupLattice, p: Prime) -> Self {
        Self::build(lattice, Some(p), hypoelementary_classes(lattice, p))
    }

    /// Conditions for every prime at once. Cyclic classes are hypoelementary
    /// for every prime, so they are constrained even when `|G| = 1`.
    pub fn integral(lattice: &SubgroupLattice) -> Self {
        let mut classes: BTreeSet<usize> = BTreeSet::new();
        for q in prime_divisors(lattice.group().order() as u64) {
            classes.extend(hypoelementary_classes(
                lattice,
                Prime::new(q).expect("prime"),
            ));
        }
        let g = lattice.group();
        for (c, cls) in lattice.classes().iter().enumerate() {
            let members = lattice.subgroup(cls.representative).members();
            if members.iter().any(|&x| g.element_order(x) == members.len()) {
                classes.insert(c);
            }
        }
        Self::build(lattice, None, classes.into_iter().collect())
    }

    fn build(lattice: &SubgroupLattice, p: Option<Prime>, constrained: Vec<usize>) -> Self {
        let containing: Vec<Vec<usize>> = constrained
            .iter()
            .map(|&c| {
                let k = lattice.representative(c);
                (0..lattice.subgroups().len())
                    .filter(|&l| k.is_subgroup_of(lattice.subgroup(l)))
                    .collect()
            })
            .collect();
        let containing_classes = containing
            .iter()
            .map(|ls| ls.iter().map(|&l| lattice.class_of(l)).collect())
            .collect();
        ResolvingConditions {
            p,
            weyl: lattice.weyl_orders().iter().map(|&w| w as i64).collect(),
            names: lattice.classes().iter().map(|c| c.name.clone()).collect(),
            constrained,
            containing,
            containing_classes,
        }
    }

    pub fn prime(&self) -> Option<Prime> {
        self.p
    }

    /// Classes at which the vanishing condition is imposed.
    pub fn constrained_classes(&self) -> &[usize] {
        &self.constrained
    }

    /// Fast yes/no form of [`check`](Self::check).
    pub fn holds(&self, phi: &[i64]) -> bool {
        phi.len() == self.weyl.len()
            && self
                .containing_classes
                .iter()
                .all(|ls| ls.iter().map(|&d| phi[d]).sum::<i64>() == 0)
            && phi.iter().zip(&self.weyl).all(|(v, w)| v % w == 0)
    }

    pub fn check(
        &self,
        phi: &SuperClassFunction,
    ) -> Result<ResolvingCertificate, ResolvingFailure> {
        let v = &phi.values;
        if v.len() != self.weyl.len() {
            return Err(ResolvingFailure::WrongLength {
                expected: self.weyl.len(),
                got: v.len(),
            });
        }
        let mut divisibility = Vec::with_capacity(v.len());
        for (c, (&value, &w)) in v.iter().zip(&self.weyl).enumerate() {
            if value % w != 0 {
                return Err(ResolvingFailure::Divisibility {
                    class: c,
                    name: self.names[c].clone(),
                    weyl_order: w,
                    value,
                });
            }
            divisibility.push(DivisibilityRecord {
                class: c,
                weyl_order: w,
                value,
            });
        }
        let mut vanishing = Vec::with_capacity(self.constrained.len());
        for (i, &c) in self.constrained.iter().enumerate() {
            let sum: i64 = self.containing_classes[i].iter().map(|&d| v[d]).sum();
            if sum != 0 {
                return Err(ResolvingFailure::NonzeroSum {
                    class: c,
                    name: self.names[c].clone(),
                    sum,
                });
            }
            vanishing.push(VanishingRecord {
                class: c,
                containing: self.containing[i].clone(),
                sum,
            });
        }
        Ok(ResolvingCertificate {
            p: self.p,
            phi: phi.clone(),
            divisibility,
            vanishing,
        })
    }

    /// All resolving functions: substitute `φ(c) = |W(c)|·y_c`, take the integer
    /// kernel of the vanishing constraints in `y`, and map back.
    pub fn lattice(&self, lattice: &SubgroupLattice) -> ResolvingLattice {
        let n = self.weyl.len();
        let rows: Vec<Vec<i64>> = self
            .constrained
            .iter()
            .map(|&c| {
                (0..n)
                    .map(|d| lattice.above_count(c, d) * self.weyl[d])
                    .collect()
            })
            .collect();
        let a = IntMatrix::from_rows_with_cols(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
            n,
        )
        .expect("constraint rows have one entry per class");
        let basis = hermite_kernel(&a)
            .into_iter()
            .map(|y| SuperClassFunction {
                values: y
                    .iter()
                    .zip(&self.weyl)
                    .map(|(yc, &w)| {
                        (yc * BigInt::from(w))
                            .to_i64()
                            .expect("resolving lattice entries fit in i64")
                    })
                    .collect(),
            })
            .collect();
        ResolvingLattice {
            p: self.p,
            classes: n,
            constraint_rows: rows.len(),
            basis,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResolvingLattice {
    pub classes: usize,
    pub p: Option<Prime>,
    pub constraint_rows: usize,
    pub basis: Vec<SuperClassFunction>,
}

impl ResolvingLattice {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// gcd of the values at the whole group; 0 when they all vanish.
    pub fn gcd_at_whole_group(&self) -> i64 {
        self.basis
            .iter()
            .map(|b| *b.values.last().expect("nonempty class list"))
            .fold(0i64, |acc, v| acc.gcd(&v))
    }

    pub fn combination(&self, coeffs: &[i64]) -> SuperClassFunction {
        let mut values = vec![0i64; self.classes];
        for (b, &k) in self.basis.iter().zip(coeffs) {
            for (v, x) in values.iter_mut().zip(&b.values) {
                *v += k * x;
            }
        }
        SuperClassFunction { values }
    }
}

pub fn is_resolving(
    lattice: &SubgroupLattice,
    phi: &SuperClassFunction,
    p: Prime,
) -> Result<ResolvingCertificate, ResolvingFailure> {
    ResolvingConditions::new(lattice, p).check(phi)
}

pub fn resolving_lattice(lattice: &SubgroupLattice, p: Prime) -> ResolvingLattice {
    ResolvingConditions::new(lattice, p).lattice(lattice)
}

pub fn integral_resolving_lattice(lattice: &SubgroupLattice) -> ResolvingLattice {
    ResolvingConditions::integral(lattice).lattice(lattice)
}

pub fn m_p(lattice: &SubgroupLattice, p: Prime) -> i64 {
    resolving_lattice(lattice, p).gcd_at_whole_group()
}

pub fn m_integral(lattice: &SubgroupLattice) -> i64 {
    integral_resolving_lattice(lattice).gcd_at_whole_group()
}

/// 0 on 𝒢_p^1, 1 outside 𝒢_p, otherwise the product of the primes `q` with
/// `G ∈ 𝒢_p^q`.
pub fn m_p_closed_form(lattice: &SubgroupLattice, p: Prime) -> i64 {
    let dress = DressClassification::new(lattice, p);
    if dress.in_gp1 {
        0
    } else {
        gpq_primes(lattice, p).iter().map(|&q| q as i64).product()
    }
}

/// Whether `χ` is an admissible Euler characteristic of a fixed set, i.e.
/// `χ ≡ 1 mod m_p(G)`.
pub fn realizable_fixed_euler(
    lattice: &SubgroupLattice,
    p: Prime,
    chi: i64,
) -> Result<bool, ResolvingError> {
    let order = lattice.group().order();
    let mut rest = order;
    while rest.is_multiple_of(p.get() as usize) {
        rest /= p.get() as usize;
    }
    if rest == 1 {
        return Err(ResolvingError::PPowerOrder { order, p: p.get() });
    }
    Ok(match m_p(lattice, p) {
        0 => chi == 1,
        m => (chi - 1).rem_euclid(m) == 0,
    })
}

/// The Burnside element with marks `1 + θ⁻¹(φ)`.
pub fn oliver_burnside_element(
    ring: &BurnsideRing,
    phi: &SuperClassFunction,
    p: Prime,
) -> Result<BurnsideElement, ResolvingError> {
    is_resolving(ring.lattice(), phi, p).map_err(ResolvingError::NotResolving)?;
    let marks = ring
        .theta_inv(phi)
        .add(&SuperClassFunction::constant(ring.rank(), 1));
    ring.rho_solve(&marks)
        .ok_or_else(|| ResolvingError::BrokenCertificate(phi.values.clone()))
}

/// The image criterion: `θ⁻¹(f)` is a mark vector and vanishes on the constrained classes.
pub fn image_criterion(
    ring: &BurnsideRing,
    conditions: &ResolvingConditions,
    f: &[i64],
    scratch: &mut [i64],
    solved: &mut [i64],
) -> bool {
    ring.theta_inv_into(f, scratch);
    conditions
        .constrained_classes()
        .iter()
        .all(|&c| scratch[c] == 0)
        && ring.rho_solve_into(scratch, solved)
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub tested: u64,
    pub resolving: u64,
    pub discrepancies: u64,
    pub first_discrepancy: Option<Vec<i64>>,
}

/// Compares the defining conditions with the image criterion on every
/// function `f(c) = scale(c)·y_c` with `|y_c| ≤ radius`. `θ⁻¹(f)` is updated
/// incrementally as the odometer advances and re-synchronised with
/// [`BurnsideRing::theta_inv_into`] whenever an outer digit rolls over.
pub fn equivalence_sweep(
    ring: &BurnsideRing,
    conditions: &ResolvingConditions,
    radius: i64,
    scale: &[i64],
) -> SweepReport {
    let n = ring.rank();
    let lattice = ring.lattice();
    // column steps of θ⁻¹ for a unit move in coordinate i
    let steps: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|c| lattice.above_count(c, i) * scale[i])
                .collect()
        })
        .collect();
    let mut y = vec![-radius; n];
    let mut f: Vec<i64> = y.iter().zip(scale).map(|(a, s)| a * s).collect();
    let mut image = vec![0i64; n];
    ring.theta_inv_into(&f, &mut image);
    let mut solved = vec![0i64; n];
    let constrained = conditions.constrained_classes();
    let mut report = SweepReport::default();
    loop {
        let by_definition = conditions.holds(&f);
        let by_image =
            constrained.iter().all(|&c| image[c] == 0) && ring.rho_solve_into(&image, &mut solved);
        report.tested += 1;
        report.resolving += by_definition as u64;
        if by_definition != by_image {
            report.discrepancies += 1;
            report.first_discrepancy.get_or_insert_with(|| f.clone());
        }
        let mut i = 0;
        loop {
            if i == n {
                return report;
            }
            if y[i] < radius {
                y[i] += 1;
                f[i] += scale[i];
                if i == 0 {
                    for (v, s) in image.iter_mut().zip(&steps[0]) {
                        *v += s;
                    }
                } else {
                    ring.theta_inv_into(&f, &mut image);
                }
                break;
            }
            y[i] = -radius;
            f[i] = -radius * scale[i];
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::group::FiniteGroup;

    fn lattice(name: &str) -> Arc<SubgroupLattice> {
        Arc::new(SubgroupLattice::new(Arc::new(
            FiniteGroup::preset_from_str(name).unwrap(),
        )))
    }

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn scf(v: &[i64]) -> SuperClassFunction {
        SuperClassFunction { values: v.to_vec() }
    }

    #[test]
    fn s3_examples() {
        let l = lattice("S3");
        assert!(is_resolving(&l, &scf(&[0; 4]), p(2)).is_ok());
        let cert = is_resolving(&l, &scf(&[6, -2, -2, 2]), p(2)).unwrap();
        assert!(cert.verify(&l));
        match is_resolving(&l, &scf(&[6, -2, -1, 1]), p(2)) {
            Err(ResolvingFailure::Divisibility { class, .. }) => assert_eq!(class, 2),
            other => panic!("unexpected {other:?}"),
        }
        let lat = resolving_lattice(&l, p(2));
        assert_eq!(lat.basis, vec![scf(&[6, -2, -2, 2])]);
        assert_eq!(m_p(&l, p(2)), 2);
        assert_eq!(m_p(&l, p(3)), 0);
    }

    #[test]
    fn tampered_certificate_fails_verification() {
        let l = lattice("S3");
        let mut cert = is_resolving(&l, &scf(&[6, -2, -2, 2]), p(2)).unwrap();
        cert.phi.values[3] = 4;
        assert!(!cert.verify(&l));
    }

    #[test]
    fn trivial_group() {
        let l = lattice("C1");
        let lat = resolving_lattice(&l, p(2));
        assert_eq!(lat.rank(), 0);
        assert_eq!(integral_resolving_lattice(&l).rank(), 0);
        assert_eq!(m_integral(&l), 0);
    }

    #[test]
    fn cyclic_prime_order() {
        for q in [2, 3, 5] {
            let l = lattice(&format!("C{q}"));
            assert_eq!(m_p(&l, p(q)), 0);
            assert_eq!(m_p_closed_form(&l, p(q)), 0);
            assert_eq!(m_integral(&l), 0);
        }
    }

    #[test]
    fn a5_and_closed_forms() {
        let l = lattice("A5");
        assert_eq!(m_p_closed_form(&l, p(2)), 1);
        assert_eq!(m_p(&l, p(2)), 1);
        assert!(realizable_fixed_euler(&l, p(2), -7).unwrap());
    }

    #[test]
    fn s3_integral_divides_mod_p_values() {
        let l = lattice("S3");
        let m = m_integral(&l);
        assert_eq!(m, 0);
    }

    #[test]
    fn realizability() {
        let l = lattice("S3");
        assert!(realizable_fixed_euler(&l, p(2), 1).unwrap());
        assert!(realizable_fixed_euler(&l, p(2), 3).unwrap());
        assert!(!realizable_fixed_euler(&l, p(2), 2).unwrap());
        assert!(!realizable_fixed_euler(&l, p(3), 3).unwrap());
        assert!(matches!(
            realizable_fixed_euler(&lattice("C4"), p(2), 1),
            Err(ResolvingError::PPowerOrder { .. })
        ));
    }

    #[test]
    fn oliver_element_s3() {
        let l = lattice("S3");
        let ring = BurnsideRing::new(l.clone());
        let x = oliver_burnside_element(&ring, &scf(&[6, -2, -2, 2]), p(2)).unwrap();
        assert_eq!(x.coeffs, vec![1, -2, -1, 3]);
        assert_eq!(ring.rho(&x), scf(&[1, 1, 1, 3]));
        let unit = oliver_burnside_element(&ring, &scf(&[0; 4]), p(2)).unwrap();
        assert_eq!(unit.coeffs, vec![0, 0, 0, 1]);
        assert!(matches!(
            oliver_burnside_element(&ring, &scf(&[1, 0, 0, 0]), p(2)),
            Err(ResolvingError::NotResolving(_))
        ));
    }

    #[test]
    fn small_sweep_agrees() {
        let l = lattice("S3");
        let ring = BurnsideRing::new(l.clone());
        let cond = ResolvingConditions::new(&l, p(2));
        let report = equivalence_sweep(&ring, &cond, 2, &[1, 1, 1, 1]);
        assert_eq!(report.tested, 625);
        assert_eq!(report.discrepancies, 0);
    }
}
