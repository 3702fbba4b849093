#![allow(clippy::needless_range_loop)]

use std::sync::Arc;

use num_integer::Integer;
use num_traits::Zero;
use proptest::prelude::*;

use equivar_core::burnside::{BurnsideElement, BurnsideRing, SuperClassFunction};
use equivar_core::linalg::{hermite_kernel, smith_normal_form, solve_linear};
use equivar_core::resolving::{is_resolving, m_p, resolving_lattice, ResolvingConditions};
use equivar_core::{FiniteGroup, IntMatrix, Matrix, Prime, Ring, Scalar, SubgroupLattice};

const GROUPS: [&str; 8] = ["C2", "C4", "C6", "S3", "D4", "Q8", "A4", "C2xC2"];

fn lattice(name: &str) -> Arc<SubgroupLattice> {
    Arc::new(SubgroupLattice::new(Arc::new(
        FiniteGroup::preset_from_str(name).unwrap(),
    )))
}

fn int_matrix(rows: &[Vec<i64>]) -> IntMatrix {
    IntMatrix::from_i64_rows(rows).unwrap()
}

fn matrix_strategy() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..5, 1usize..5)
        .prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-6i64..=6, c), r))
}

/// Number of `g` with `g⁻¹ L g ⊆ K`, divided by `|K|`.
fn mark_by_counting(g: &FiniteGroup, k: &[usize], l: &[usize]) -> i64 {
    let count = (0..g.order())
        .filter(|&x| l.iter().all(|&y| k.contains(&g.mul(g.mul(g.inv(x), y), x))))
        .count();
    (count / k.len()) as i64
}

#[test]
fn marks_match_counting() {
    for name in GROUPS.iter().chain(&["S4", "A5", "D6"]) {
        let l = lattice(name);
        let ring = BurnsideRing::new(l.clone());
        let marks = &ring.table_of_marks().marks;
        for c in 0..l.num_classes() {
            for d in 0..l.num_classes() {
                let want = mark_by_counting(
                    l.group(),
                    l.representative(c).members(),
                    l.representative(d).members(),
                );
                assert_eq!(marks[c][d], want, "{name} ({c}, {d})");
            }
        }
    }
}

#[test]
fn mobius_inverts_containment() {
    for name in GROUPS {
        let l = lattice(name);
        let n = l.subgroups().len();
        for a in 0..n {
            for b in 0..n {
                if !l.contains(a, b) {
                    continue;
                }
                // Σ_{a ≤ c ≤ b} μ(a, c) = δ(a, b)
                let total: i64 = (0..n)
                    .filter(|&c| l.contains(a, c) && l.contains(c, b))
                    .map(|c| l.mobius(a, c).unwrap())
                    .sum();
                assert_eq!(total, i64::from(a == b), "{name}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smith_form_factors(rows in matrix_strategy()) {
        let a = int_matrix(&rows);
        let s = smith_normal_form(&a);
        prop_assert_eq!(s.p.mul(&a).mul(&s.q), s.d.clone());
        prop_assert_eq!(s.u.mul(&s.d).mul(&s.v), a.clone());
        let f = s.invariant_factors();
        for w in f.windows(2) {
            prop_assert!(w[1].is_multiple_of(&w[0]));
        }
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j || i >= s.rank {
                    prop_assert!(s.d.get(i, j).is_zero());
                }
            }
        }
    }

    #[test]
    fn hermite_kernel_is_kernel(rows in matrix_strategy()) {
        let a = int_matrix(&rows);
        let kernel = hermite_kernel(&a);
        prop_assert_eq!(kernel.len(), a.cols() - smith_normal_form(&a).rank);
        for v in &kernel {
            prop_assert!(a.mul_vec(v).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn solutions_solve(rows in matrix_strategy(), x in prop::collection::vec(-5i64..=5, 4), p in prop::sample::select(vec![2u64, 3, 5])) {
        let ring = Ring::Prime(p);
        let a = ring.matrix(&Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| ring.from_int(v)).collect()).collect()).unwrap()).unwrap();
        let x: Vec<Scalar> = x[..a.cols()].iter().map(|&v| ring.from_int(v)).collect();
        let b = ring.mat_vec(&a, &x);
        let y = solve_linear(&a, &b, ring).unwrap().expect("consistent system");
        prop_assert_eq!(ring.mat_vec(&a, &y), b);
    }

    #[test]
    fn diagram_identities(name in prop::sample::select(GROUPS.to_vec()), seed in prop::collection::vec(-8i64..=8, 16)) {
        let ring = BurnsideRing::new(lattice(name));
        let n = ring.rank();
        let f = SuperClassFunction { values: seed[..n].to_vec() };
        let x = BurnsideElement { coeffs: seed[8..8 + n].to_vec() };
        prop_assert_eq!(ring.theta(&ring.theta_inv(&f)), f.clone());
        prop_assert!(ring.psi(&ring.rho(&x)).is_zero());
        prop_assert_eq!(ring.rho_solve(&ring.rho(&x)), Some(x.clone()));
        prop_assert_eq!(ring.rho_solve(&f).is_some(), ring.psi(&f).is_zero());
        // η lands in the kernel of γ
        prop_assert!(ring.gamma(&ring.eta(&x)).is_zero());
        let sq = ring.mul(&x, &x);
        prop_assert_eq!(ring.rho(&sq), ring.rho(&x).pointwise_mul(&ring.rho(&x)));
    }

    #[test]
    fn realized_gsets_decompose_back(name in prop::sample::select(GROUPS.to_vec()), coeffs in prop::collection::vec(0i64..=2, 8)) {
        let ring = BurnsideRing::new(lattice(name));
        let x = BurnsideElement { coeffs: coeffs[..ring.rank()].to_vec() };
        let set = ring.realize(&x).expect("nonnegative element");
        prop_assert_eq!(ring.orbit_decomposition(&set), x.clone());
        for (c, &m) in ring.rho(&x).values.iter().enumerate() {
            prop_assert_eq!(set.fixed_points(ring.lattice().representative(c)).len() as i64, m);
        }
    }

    #[test]
    fn resolving_lattice_is_closed(name in prop::sample::select(vec!["S3", "A4", "D6", "C6", "S4"]), p in prop::sample::select(vec![2u64, 3]), coeffs in prop::collection::vec(-5i64..=5, 12)) {
        let l = lattice(name);
        let p = Prime::new(p).unwrap();
        if !l.group().order().is_multiple_of(p.get() as usize) {
            return Ok(());
        }
        let lat = resolving_lattice(&l, p);
        let phi = lat.combination(&coeffs[..lat.rank()]);
        prop_assert!(is_resolving(&l, &phi, p).is_ok());
        let m = m_p(&l, p);
        let top = phi.values[l.whole_class()];
        if m == 0 {
            prop_assert_eq!(top, 0);
        } else {
            prop_assert_eq!(top % m, 0);
        }
        let cond = ResolvingConditions::new(&l, p);
        prop_assert!(cond.holds(&phi.values));
    }
}

#[test]
fn integral_lattice_values_are_integers() {
    let l = lattice("S3");
    let lat = ResolvingConditions::integral(&l).lattice(&l);
    for b in &lat.basis {
        for p in [2, 3] {
            assert!(is_resolving(&l, b, Prime::new(p).unwrap()).is_ok());
        }
    }
}
