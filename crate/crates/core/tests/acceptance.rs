//! Acceptance suite: one PASS/FAIL line per criterion.

#![allow(clippy::needless_range_loop)]

use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use equivar_core::burnside::{BurnsideElement, BurnsideRing, SuperClassFunction};
use equivar_core::chain::{g_split_check, kw_equivalence, AdmissibleChainMap, SpecialComplex};
use equivar_core::gcw::GSimplicialComplex;
use equivar_core::orbit_cat::{is_projective_orbit_basis, Family, OrbitCategory};
use equivar_core::resolving::{
    equivalence_sweep, is_resolving, m_p, m_p_closed_form, oliver_burnside_element,
    ResolvingConditions,
};
use equivar_core::{ConcreteGSet, FiniteGroup, Prime, Ring, SubgroupLattice};

const CATALOG: [&str; 12] = [
    "C2", "C3", "C4", "C6", "C2xC2", "S3", "D4", "Q8", "A4", "D6", "S4", "A5",
];

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn lattice(name: &str) -> Arc<SubgroupLattice> {
    Arc::new(SubgroupLattice::new(Arc::new(
        FiniteGroup::preset_from_str(name).expect("catalog preset"),
    )))
}

fn prime(p: u64) -> Prime {
    Prime::new(p).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:.2?}, limit {limit:?}"))
}

fn element(ring: &BurnsideRing, s: &str) -> BurnsideElement {
    ring.parse_element(s).unwrap()
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let l = lattice("S3");
    let ring = BurnsideRing::new(l.clone());
    let x = element(&ring, "[G/1] + 2[G/G]");
    let y = element(&ring, "2[G/C2] + [G/C3]");
    let (mx, my) = (ring.rho(&x).values, ring.rho(&y).values);
    ensure(mx == [8, 2, 2, 2], || format!("marks of X {mx:?}"))?;
    ensure(my == [8, 2, 2, 0], || format!("marks of Y {my:?}"))?;
    let differ: Vec<usize> = (0..mx.len()).filter(|&c| mx[c] != my[c]).collect();
    ensure(differ == [l.whole_class()], || {
        format!("marks differ on {differ:?}")
    })?;
    ensure(ring.conlon_equal(&x, &y, prime(2)), || {
        "conlon_equal is false".into()
    })?;
    let projective: Vec<bool> = (0..l.num_classes())
        .map(|c| is_projective_orbit_basis(&l, l.classes()[c].representative, prime(2)))
        .collect();
    ensure(projective == [true, true, true, false], || {
        format!("projectivity {projective:?}")
    })?;
    within(start, Duration::from_secs(1))?;
    Ok(format!(
        "marks {mx:?} / {my:?}, conlon equal, projective {projective:?} in {:.0?}",
        start.elapsed()
    ))
}

fn criterion_2() -> Check {
    let start = Instant::now();
    let mut pairs = 0;
    for name in CATALOG {
        let l = lattice(name);
        let n = l.group().order() as u64;
        for p in (2..=n).filter(|&p| n.is_multiple_of(p) && (2..p).all(|d| p % d != 0)) {
            let (a, b) = (m_p(&l, prime(p)), m_p_closed_form(&l, prime(p)));
            ensure(a == b, || {
                format!("{name}, p={p}: lattice {a}, closed form {b}")
            })?;
            pairs += 1;
        }
    }
    for (name, p, want) in [
        ("C2", 2, 0),
        ("C3", 3, 0),
        ("S3", 2, 2),
        ("S3", 3, 0),
        ("A5", 2, 1),
    ] {
        let got = m_p(&lattice(name), prime(p));
        ensure(got == want, || {
            format!("m_{p}({name}) = {got}, expected {want}")
        })?;
    }
    within(start, Duration::from_secs(30))?;
    Ok(format!(
        "{pairs} (group, prime) pairs agree, pins hold, {:.1?}",
        start.elapsed()
    ))
}

/// Definition of a resolving function evaluated from raw subgroup data.
fn oracle_resolving(l: &SubgroupLattice, p: Prime, phi: &[i64]) -> bool {
    let g = l.group();
    let subs = l.subgroups();
    let hypo = |k: &[usize]| -> bool {
        // some normal p-subgroup P of K with K/P cyclic of order prime to p
        subs.iter().any(|pp| {
            let pm = pp.members();
            let po = pm.len() as u64;
            let is_p = {
                let mut m = po;
                while m.is_multiple_of(p.get()) {
                    m /= p.get();
                }
                m == 1
            };
            if !is_p || !pm.iter().all(|x| k.contains(x)) {
                return false;
            }
            let normal = k.iter().all(|&a| {
                pm.iter()
                    .all(|&x| pm.contains(&g.mul(g.mul(a, x), g.inv(a))))
            });
            let index = k.len() / pm.len();
            normal
                && !(index as u64).is_multiple_of(p.get())
                && k.iter().any(|&a| {
                    let mut y = a;
                    let mut ord = 1;
                    while !pm.contains(&y) {
                        y = g.mul(y, a);
                        ord += 1;
                    }
                    ord == index
                })
        })
    };
    subs.iter().enumerate().all(|(i, k)| {
        let km = k.members();
        let normalizer = (0..g.order())
            .filter(|&a| {
                km.iter()
                    .all(|&x| km.contains(&g.mul(g.mul(a, x), g.inv(a))))
            })
            .count();
        let weyl = (normalizer / km.len()) as i64;
        let divisible = phi[l.class_of(i)] % weyl == 0;
        let vanishing = !hypo(km)
            || subs
                .iter()
                .enumerate()
                .filter(|(_, big)| km.iter().all(|x| big.members().contains(x)))
                .map(|(j, _)| phi[l.class_of(j)])
                .sum::<i64>()
                == 0;
        divisible && vanishing
    })
}

fn criterion_3() -> Check {
    let start = Instant::now();
    let mut summary = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for name in ["S3", "C4", "D4", "A4"] {
        let l = lattice(name);
        let ring = BurnsideRing::new(l.clone());
        let n = l.num_classes();
        for p in [2, 3] {
            if !l.group().order().is_multiple_of(p as usize) {
                continue;
            }
            let cond = ResolvingConditions::new(&l, prime(p));
            let weyl: Vec<i64> = l.weyl_orders().iter().map(|&w| w as i64).collect();
            // unscaled boxes shrink to radius 2 above six classes
            let unscaled_radius = if n > 6 { 2 } else { 6 };
            for (label, radius, scale) in [
                ("weyl", 6, weyl.clone()),
                ("unit", unscaled_radius, vec![1; n]),
            ] {
                let r = equivalence_sweep(&ring, &cond, radius, &scale);
                ensure(r.discrepancies == 0, || {
                    format!(
                        "{name}, p={p}: {} discrepancies, first {:?}",
                        r.discrepancies, r.first_discrepancy
                    )
                })?;
                summary.push(format!(
                    "{name}/p{p}/{label}/r{radius}: {} tested, {} resolving",
                    r.tested, r.resolving
                ));
            }
            // independent oracle on a random sample of the scaled box
            for _ in 0..300 {
                let phi: Vec<i64> = weyl.iter().map(|w| w * rng.gen_range(-6..=6)).collect();
                let by_image = {
                    let f = SuperClassFunction {
                        values: phi.clone(),
                    };
                    let t = ring.theta_inv(&f);
                    cond.constrained_classes().iter().all(|&c| t.values[c] == 0)
                        && ring.rho_solve(&t).is_some()
                };
                ensure(oracle_resolving(&l, prime(p), &phi) == by_image, || {
                    format!("{name}, p={p}: oracle disagrees at {phi:?}")
                })?;
                ensure(
                    is_resolving(
                        &l,
                        &SuperClassFunction {
                            values: phi.clone(),
                        },
                        prime(p),
                    )
                    .is_ok()
                        == by_image,
                    || format!("{name}, p={p}: is_resolving disagrees at {phi:?}"),
                )?;
            }
            let basis = cond.lattice(&l).basis;
            for _ in 0..50 {
                let coeffs: Vec<i64> = basis.iter().map(|_| rng.gen_range(-4..=4)).collect();
                let phi = basis
                    .iter()
                    .zip(&coeffs)
                    .fold(vec![0; n], |mut acc, (b, &k)| {
                        acc.iter_mut().zip(&b.values).for_each(|(a, v)| *a += k * v);
                        acc
                    });
                ensure(oracle_resolving(&l, prime(p), &phi), || {
                    format!("{name}, p={p}: lattice element {phi:?} fails the oracle")
                })?;
            }
        }
    }
    Ok(format!(
        "0 discrepancies ({}) in {:.1?}",
        summary.join("; "),
        start.elapsed()
    ))
}

fn criterion_4() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut trials = 0;
    for name in CATALOG {
        let ring = BurnsideRing::new(lattice(name));
        let n = ring.rank();
        let random = |rng: &mut ChaCha8Rng, r: i64| -> Vec<i64> {
            (0..n).map(|_| rng.gen_range(-r..=r)).collect()
        };
        for _ in 0..100 {
            let f = SuperClassFunction {
                values: random(&mut rng, 30),
            };
            ensure(ring.theta(&ring.theta_inv(&f)) == f, || {
                format!("{name}: θ∘θ⁻¹ ≠ id at {:?}", f.values)
            })?;
            ensure(ring.theta_inv(&ring.theta(&f)) == f, || {
                format!("{name}: θ⁻¹∘θ ≠ id at {:?}", f.values)
            })?;
            let x = BurnsideElement {
                coeffs: random(&mut rng, 5),
            };
            let y = BurnsideElement {
                coeffs: random(&mut rng, 5),
            };
            let rx = ring.rho(&x);
            ensure(ring.psi(&rx).is_zero(), || {
                format!("{name}: ψ∘ρ ≠ 0 at {:?}", x.coeffs)
            })?;
            ensure(ring.rho_solve(&rx).as_ref() == Some(&x), || {
                format!("{name}: rho_solve∘ρ ≠ id at {:?}", x.coeffs)
            })?;
            ensure(
                ring.rho(&ring.mul(&x, &y)) == rx.pointwise_mul(&ring.rho(&y)),
                || {
                    format!(
                        "{name}: ρ not multiplicative at {:?}, {:?}",
                        x.coeffs, y.coeffs
                    )
                },
            )?;
            // a perturbed mark vector is sometimes in the image and sometimes not
            let mut g = rx.clone();
            let c = rng.gen_range(0..n);
            g.values[c] += rng.gen_range(-3..=3);
            for v in [&f, &g] {
                ensure(ring.rho_solve(v).is_some() == ring.psi(v).is_zero(), || {
                    format!("{name}: rho_solve and ψ disagree at {:?}", v.values)
                })?;
            }
            trials += 1;
        }
    }
    Ok(format!(
        "{trials} randomized trials over {} groups",
        CATALOG.len()
    ))
}

fn criterion_5() -> Check {
    let ring = BurnsideRing::new(lattice("S3"));
    let phi = SuperClassFunction {
        values: vec![6, -2, -2, 2],
    };
    let x = oliver_burnside_element(&ring, &phi, prime(2)).map_err(|e| e.to_string())?;
    let marks = ring.rho(&x).values;
    ensure(marks == [1, 1, 1, 3], || format!("marks {marks:?}"))?;
    Ok(format!("{} has marks {marks:?}", ring.format_element(&x)))
}

/// Regular ℤ-acyclic complexes: cones over subdivided simplex boundaries.
fn acyclic_corpus() -> Vec<(String, Arc<SubgroupLattice>, GSimplicialComplex)> {
    let mut out = Vec::new();
    let mut push = |label: &str, group: Arc<FiniteGroup>, vertices: ConcreteGSet, rounds: usize| {
        let l = Arc::new(SubgroupLattice::new(group.clone()));
        let mut k = GSimplicialComplex::simplex_boundary(group, vertices).unwrap();
        for _ in 0..rounds {
            k = k.barycentric_subdivision();
        }
        out.push((format!("{label} sd^{rounds}"), l, k.cone()));
    };
    let c2 = Arc::new(FiniteGroup::preset_from_str("C2").unwrap());
    let natural = c2.natural_action().unwrap();
    push("C2 on ∂Δ¹", c2.clone(), natural, 1);
    let swap = ConcreteGSet::new(&c2, vec![vec![0, 1, 2], vec![1, 0, 2]]).unwrap();
    push("C2 on ∂Δ²", c2.clone(), swap.clone(), 1);
    push("C2 on ∂Δ²", c2, swap, 2);
    let s3 = Arc::new(FiniteGroup::preset_from_str("S3").unwrap());
    let natural = s3.natural_action().unwrap();
    push("S3 on ∂Δ²", s3.clone(), natural.clone(), 1);
    push("S3 on ∂Δ²", s3, natural, 2);
    let a4 = Arc::new(FiniteGroup::preset_from_str("A4").unwrap());
    let natural = a4.natural_action().unwrap();
    push("A4 on ∂Δ³", a4, natural, 1);
    out
}

fn criterion_6() -> Check {
    let start = Instant::now();
    let corpus = acyclic_corpus();
    for (label, l, k) in &corpus {
        ensure(k.validate_regular().is_none(), || {
            format!("{label}: not regular")
        })?;
        let c = k
            .cellular_chain_complex(l.clone(), Ring::Integers, true)
            .map_err(|e| format!("{label}: {e}"))?;
        ensure(c.is_acyclic(true).map_err(|e| e.to_string())?, || {
            format!("{label}: not ℤ-acyclic")
        })?;
        match g_split_check(&c).map_err(|e| e.to_string())? {
            Ok(cert) => ensure(cert.verify(&c).map_err(|e| e.to_string())?, || {
                format!("{label}: certificate does not verify")
            })?,
            Err(f) => return Err(format!("{label}: split fails at degree {}", f.degree)),
        }
        let q = c.quotient_complex().homology().map_err(|e| e.to_string())?;
        let acyclic = q
            .iter()
            .all(|h| h.torsion.is_empty() && h.rank == usize::from(h.degree == 0));
        ensure(acyclic, || format!("{label}: quotient homology {q:?}"))?;
    }
    // negative control: C2 swapping two points, augmented, is not ℤ-acyclic
    let l = lattice("C2");
    let swap = ConcreteGSet::new(l.group(), vec![vec![0, 1], vec![1, 0]]).unwrap();
    let control = SpecialComplex::new(l, Ring::Integers, vec![swap], vec![], None)
        .and_then(SpecialComplex::with_standard_augmentation)
        .map_err(|e| e.to_string())?;
    match g_split_check(&control).map_err(|e| e.to_string())? {
        Ok(_) => return Err("C2 swap control splits".into()),
        Err(f) => ensure(f.degree == 0, || {
            format!("C2 swap control fails at degree {}", f.degree)
        })?,
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!(
        "{} complexes split with verified certificates, quotients acyclic, control fails at degree 0, {:.1?}",
        corpus.len(),
        start.elapsed()
    ))
}

fn criterion_7() -> Check {
    let l = lattice("S3");
    let s3 = l.group_arc().clone();
    let k = GSimplicialComplex::simplex_boundary(s3.clone(), s3.natural_action().unwrap())
        .unwrap()
        .barycentric_subdivision();
    let mut count = 0;
    for ring in [Ring::Prime(2), Ring::Prime(3), Ring::Rationals] {
        let c = k
            .cellular_chain_complex(l.clone(), ring, false)
            .map_err(|e| e.to_string())?;
        let mut maps = vec![AdmissibleChainMap::identity(&c)];
        for (class, degree) in [(0, 1), (1, 1), (2, 2), (3, 1)] {
            let x = ConcreteGSet::coset_space(l.group(), l.representative(class));
            let e = SpecialComplex::elementary(l.clone(), ring, x, degree)
                .map_err(|e| e.to_string())?;
            maps.push(AdmissibleChainMap::projection(&c, &e).map_err(|e| e.to_string())?);
            maps.push(AdmissibleChainMap::inclusion(&c, &e).map_err(|e| e.to_string())?);
        }
        for f in &maps {
            match kw_equivalence(f).map_err(|e| e.to_string())? {
                Ok(cert) => ensure(cert.verify(f).map_err(|e| e.to_string())?, || {
                    format!("{ring}: certificate residual nonzero")
                })?,
                Err(w) => return Err(format!("{ring}: unexpected witness {w:?}")),
            }
            count += 1;
        }
        let zero = AdmissibleChainMap::zero(&c, &c).map_err(|e| e.to_string())?;
        match kw_equivalence(&zero).map_err(|e| e.to_string())? {
            Ok(_) => return Err(format!("{ring}: zero map certified")),
            Err(w) => ensure(w.class == 0 && w.degree == 0 && w.class_name == "1", || {
                format!("{ring}: zero-map witness {w:?}")
            })?,
        }
    }
    Ok(format!(
        "{count} certificates verified over GF(2), GF(3), Q; zero map witness (class 1, degree 0)"
    ))
}

fn criterion_8() -> Check {
    let mut pairs = 0;
    for name in CATALOG {
        let l = lattice(name);
        let ring = BurnsideRing::new(l.clone());
        let marks = &ring.table_of_marks().marks;
        let cat = OrbitCategory::new(l.clone(), Family::all(&l));
        for v in 0..l.num_classes() {
            for k in 0..l.num_classes() {
                let mor = cat.mor_set(v, k).map_err(|e| e.to_string())?.len() as i64;
                ensure(mor == marks[k][v], || {
                    format!("{name}: |Mor({v},{k})| = {mor}, mark {}", marks[k][v])
                })?;
                pairs += 1;
            }
        }
    }
    let mut complexes = 0;
    for (label, l, cone) in acyclic_corpus() {
        let ring = BurnsideRing::new(l.clone());
        let x = cone.burnside_class(&ring).map_err(|e| e.to_string())?;
        let marks = ring.rho(&x).values;
        let chis = (0..l.num_classes())
            .map(|c| cone.euler_char(l.representative(c)))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| e.to_string())?;
        ensure(marks == chis, || {
            format!("{label}: marks {marks:?}, χ {chis:?}")
        })?;
        complexes += 1;
    }
    for name in ["C2", "S3", "A4", "D4"] {
        let l = lattice(name);
        let ring = BurnsideRing::new(l.clone());
        let g = l.group_arc().clone();
        let Some(x) = g.natural_action() else {
            continue;
        };
        let k = GSimplicialComplex::simplex_boundary(g, x)
            .unwrap()
            .barycentric_subdivision();
        let b = k.burnside_class(&ring).map_err(|e| e.to_string())?;
        let chis = (0..l.num_classes())
            .map(|c| k.euler_char(l.representative(c)))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| e.to_string())?;
        ensure(ring.rho(&b).values == chis, || {
            format!("sd ∂Δ for {name}: marks differ from χ")
        })?;
        complexes += 1;
    }
    Ok(format!(
        "{pairs} morphism counts match marks; {complexes} complexes have marks = fixed χ"
    ))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 worked S3 example", criterion_1),
        ("2 m_p by lattice gcd and closed form", criterion_2),
        ("3 resolving definition vs image criterion", criterion_3),
        ("4 diagram identities", criterion_4),
        ("5 Burnside element from a resolving function", criterion_5),
        ("6 equivariant splitting and acyclic quotients", criterion_6),
        ("7 homotopy-equivalence certificates", criterion_7),
        ("8 cross-module consistency", criterion_8),
    ];
    let mut failed = 0;
    for (label, check) in criteria {
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS criterion {label}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {label}: {detail}");
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
