//! Dress classes of finite groups relative to a prime `p`.
//!
//! A group is `p`-hypoelementary (the class 𝒢_p^1) when it has a normal
//! `p`-subgroup with cyclic quotient of order prime to `p`. 𝒢_p^q collects the
//! groups with a normal 𝒢_p^1 subgroup of `q`-power index, and 𝒢_p is their union.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::group::{prime_divisors, Prime, SubgroupLattice};

/// Largest normal `p`-subgroup `O_p(H)`: the intersection of the Sylow
/// `p`-subgroups of `H`. Returns a subgroup index.
pub fn largest_normal_p_subgroup(lattice: &SubgroupLattice, h: usize, p: Prime) -> usize {
    let sylows = lattice.sylow_subgroups(h, p);
    let mut core = lattice.subgroup(sylows[0]).clone();
    for &s in &sylows[1..] {
        core = core.intersection(lattice.subgroup(s));
    }
    lattice
        .subgroup_index(core.members())
        .expect("an intersection of subgroups is a subgroup")
}

/// `H/O_p(H)` cyclic of order prime to `p`.
pub fn is_p_hypoelementary(lattice: &SubgroupLattice, h: usize, p: Prime) -> bool {
    let g = lattice.group();
    let core = lattice.subgroup(largest_normal_p_subgroup(lattice, h, p));
    let quotient = lattice.subgroup(h).order() / core.order();
    if !quotient.is_multiple_of(p.get() as usize) {
        // some h generates H modulo O_p(H)
        lattice.subgroup(h).members().iter().any(|&x| {
            let mut gens = core.members().to_vec();
            gens.push(x);
            g.generate(&gens).len() == lattice.subgroup(h).order()
        })
    } else {
        false
    }
}

/// Classes (ids in class order) whose members are `p`-hypoelementary.
pub fn hypoelementary_classes(lattice: &SubgroupLattice, p: Prime) -> Vec<usize> {
    (0..lattice.num_classes())
        .filter(|&c| is_p_hypoelementary(lattice, lattice.classes()[c].representative, p))
        .collect()
}

fn is_power_of(mut n: usize, q: usize) -> bool {
    while n.is_multiple_of(q) {
        n /= q;
    }
    n == 1
}

/// `G ∈ 𝒢_p^q`: some normal 𝒢_p^1 subgroup has index a power of `q` (possibly `q⁰`).
pub fn in_gpq(lattice: &SubgroupLattice, p: Prime, q: Prime) -> bool {
    let order = lattice.group().order();
    (0..lattice.subgroups().len()).any(|n| {
        lattice.is_normal(n)
            && is_power_of(order / lattice.subgroup(n).order(), q.get() as usize)
            && is_p_hypoelementary(lattice, n, p)
    })
}

/// `G ∈ 𝒢_p`, trying `q` over the primes dividing `|G|` and the `q⁰` case.
pub fn in_gp(lattice: &SubgroupLattice, p: Prime) -> bool {
    let whole = lattice.subgroups().len() - 1;
    is_p_hypoelementary(lattice, whole, p) || !gpq_primes(lattice, p).is_empty()
}

/// Primes `q` dividing `|G|` with `G ∈ 𝒢_p^q`.
pub fn gpq_primes(lattice: &SubgroupLattice, p: Prime) -> Vec<u64> {
    prime_divisors(lattice.group().order() as u64)
        .into_iter()
        .filter(|&q| in_gpq(lattice, p, Prime::new(q).expect("prime divisor")))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DressClassification {
    pub p: Prime,
    pub hypoelementary_classes: BTreeSet<usize>,
    pub gpq_primes: Vec<u64>,
    pub in_gp1: bool,
    pub in_gp: bool,
}

impl DressClassification {
    pub fn new(lattice: &SubgroupLattice, p: Prime) -> Self {
        let hypo: BTreeSet<usize> = hypoelementary_classes(lattice, p).into_iter().collect();
        let in_gp1 = hypo.contains(&lattice.whole_class());
        let gpq = gpq_primes(lattice, p);
        DressClassification {
            p,
            in_gp: in_gp1 || !gpq.is_empty(),
            hypoelementary_classes: hypo,
            gpq_primes: gpq,
            in_gp1,
        }
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::group::FiniteGroup;

    fn lattice(name: &str) -> SubgroupLattice {
        SubgroupLattice::new(Arc::new(FiniteGroup::preset_from_str(name).unwrap()))
    }

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn trivial_group_is_hypoelementary() {
        let l = lattice("C1");
        for q in [2, 3, 5] {
            assert!(is_p_hypoelementary(&l, 0, p(q)));
        }
    }

    #[test]
    fn s3_classes() {
        let l = lattice("S3");
        assert_eq!(hypoelementary_classes(&l, p(2)), vec![0, 1, 2]);
        assert_eq!(hypoelementary_classes(&l, p(3)), vec![0, 1, 2, 3]);
        assert!(in_gpq(&l, p(2), p(2)));
        assert!(!in_gpq(&l, p(2), p(3)));
        assert!(in_gp(&l, p(2)));
    }

    #[test]
    fn a5_is_outside_gp() {
        let l = lattice("A5");
        for q in [2, 3, 5, 7] {
            assert!(!in_gpq(&l, p(2), p(q)));
        }
        assert!(!in_gp(&l, p(2)));
        // S3, D10 and A5 have trivial O_2 and are not cyclic; A4 = V4 ⋊ C3 qualifies
        let hypo = hypoelementary_classes(&l, p(2));
        let excluded: Vec<usize> = l
            .classes()
            .iter()
            .enumerate()
            .filter(|(c, _)| !hypo.contains(c))
            .map(|(_, cls)| cls.order)
            .collect();
        assert_eq!(excluded, vec![6, 10, 60]);
    }

    #[test]
    fn cyclic_p_group() {
        let l = lattice("C3");
        assert!(in_gp(&l, p(3)));
        assert_eq!(hypoelementary_classes(&l, p(3)).len(), l.num_classes());
    }

    #[test]
    fn p_groups_are_hypoelementary_everywhere() {
        for name in ["C4", "D4", "Q8", "C2xC2", "E2^3"] {
            let l = lattice(name);
            assert_eq!(
                hypoelementary_classes(&l, p(2)).len(),
                l.num_classes(),
                "{name}"
            );
        }
    }
}
