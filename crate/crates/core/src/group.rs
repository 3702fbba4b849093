//! Finite groups as Cayley tables, their subgroup lattices and concrete G-sets.
//!
//! Group elements are indices `0..order` with the identity at index 0. Groups
//! built from permutations multiply as composition `(a·b)(x) = a(b(x))`, so the
//! natural action `g·x = g(x)` and every [`ConcreteGSet`] are left actions:
//! `act[g·h][x] = act[g][act[h][x]]`.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_ORDER_CAP: usize = 400;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("group order exceeds the cap of {cap}")]
    OrderCapExceeded { cap: usize },
    #[error("generator {index} is not a permutation of 0..{degree}")]
    NotAPermutation { index: usize, degree: usize },
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("invalid Cayley table: {0}")]
    InvalidTable(String),
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("subgroups are not comparable")]
    NotComparable,
    #[error("unknown subgroup: {0}")]
    UnknownSubgroup(String),
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// The `p`-part of `n`.
pub fn p_part(mut n: usize, p: u64) -> usize {
    let p = p as usize;
    let mut part = 1;
    while n.is_multiple_of(p) {
        n /= p;
        part *= p;
    }
    part
}

/// A prime number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Self, GroupError> {
        if is_prime(p) {
            Ok(Prime(p))
        } else {
            Err(GroupError::NotPrime(p))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

impl TryFrom<u64> for Prime {
    type Error = GroupError;
    fn try_from(p: u64) -> Result<Self, Self::Error> {
        Prime::new(p)
    }
}

impl From<Prime> for u64 {
    fn from(p: Prime) -> u64 {
        p.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    inverse: Vec<usize>,
    /// Permutation image of each element, when the group came from permutations.
    perms: Option<Vec<Vec<usize>>>,
}

impl FiniteGroup {
    pub fn from_generators(degree: usize, gens: &[Vec<usize>]) -> Result<Self, GroupError> {
        Self::from_generators_with_cap(degree, gens, DEFAULT_ORDER_CAP)
    }

    /// Closure of the generators under composition. Elements are numbered in
    /// lexicographic order of their images, so the identity is element 0.
    pub fn from_generators_with_cap(
        degree: usize,
        gens: &[Vec<usize>],
        cap: usize,
    ) -> Result<Self, GroupError> {
        for (index, g) in gens.iter().enumerate() {
            let mut seen = vec![false; degree];
            let ok = g.len() == degree
                && g.iter()
                    .all(|&x| x < degree && !std::mem::replace(&mut seen[x], true));
            if !ok {
                return Err(GroupError::NotAPermutation { index, degree });
            }
        }
        let identity: Vec<usize> = (0..degree).collect();
        let mut elements: BTreeSet<Vec<usize>> = BTreeSet::new();
        elements.insert(identity.clone());
        let mut queue = VecDeque::from([identity]);
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y: Vec<usize> = x.iter().map(|&i| g[i]).collect();
                if elements.insert(y.clone()) {
                    if elements.len() > cap {
                        return Err(GroupError::OrderCapExceeded { cap });
                    }
                    queue.push_back(y);
                }
            }
        }
        let perms: Vec<Vec<usize>> = elements.into_iter().collect();
        let index: HashMap<&Vec<usize>, usize> =
            perms.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let n = perms.len();
        let mut table = vec![0; n * n];
        for (a, pa) in perms.iter().enumerate() {
            for (b, pb) in perms.iter().enumerate() {
                let c: Vec<usize> = pb.iter().map(|&x| pa[x]).collect();
                table[a * n + b] = index[&c];
            }
        }
        let mut inverse = vec![0; n];
        for a in 0..n {
            inverse[a] = (0..n)
                .find(|&b| table[a * n + b] == 0)
                .expect("inverse exists");
        }
        Ok(FiniteGroup {
            order: n,
            table,
            inverse,
            perms: Some(perms),
        })
    }

    /// Validates a Cayley table (identity at index 0) and builds the group.
    pub fn from_table(rows: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        let n = rows.len();
        if n == 0 {
            return Err(GroupError::InvalidTable("empty table".into()));
        }
        if rows
            .iter()
            .any(|r| r.len() != n || r.iter().any(|&x| x >= n))
        {
            return Err(GroupError::InvalidTable(
                "table is not square over 0..n".into(),
            ));
        }
        let table: Vec<usize> = rows.into_iter().flatten().collect();
        let mut inverse = vec![usize::MAX; n];
        for a in 0..n {
            if let Some(b) = (0..n).find(|&b| table[a * n + b] == 0) {
                inverse[a] = b;
            }
        }
        let g = FiniteGroup {
            order: n,
            table,
            inverse,
            perms: None,
        };
        g.verify_axioms()?;
        Ok(g)
    }

    /// Exhaustive check of associativity, identity and inverses.
    pub fn verify_axioms(&self) -> Result<(), GroupError> {
        let n = self.order;
        for a in 0..n {
            if self.mul(0, a) != a || self.mul(a, 0) != a {
                return Err(GroupError::InvalidTable(
                    "0 is not a two-sided identity".into(),
                ));
            }
            let b = self.inverse[a];
            if b >= n || self.mul(a, b) != 0 || self.mul(b, a) != 0 {
                return Err(GroupError::InvalidTable(format!(
                    "element {a} has no inverse"
                )));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = self.mul(a, b);
                for c in 0..n {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Err(GroupError::InvalidTable(format!(
                            "not associative at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Named groups: `C n`, `D n` (order 2n), `S n`, `A n`, `Q 8`, `E p k`
    /// (elementary abelian of order p^k) and `CP n₁ n₂ …` (direct product of cyclics).
    pub fn preset(name: &str, params: &[usize]) -> Result<Self, GroupError> {
        Self::preset_with_cap(name, params, DEFAULT_ORDER_CAP)
    }

    pub fn preset_with_cap(name: &str, params: &[usize], cap: usize) -> Result<Self, GroupError> {
        let unknown = || GroupError::UnknownPreset(format!("{name} {params:?}"));
        let one = |params: &[usize]| match params {
            [n] if *n >= 1 => Ok(*n),
            _ => Err(unknown()),
        };
        match name {
            "C" => {
                let n = one(params)?;
                Self::from_generators_with_cap(n, &[cycle(n, 0, n)], cap)
            }
            "D" => {
                let n = one(params)?;
                match n {
                    1 => Self::preset_with_cap("C", &[2], cap),
                    2 => Self::preset_with_cap("CP", &[2, 2], cap),
                    _ => {
                        let reflection: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
                        Self::from_generators_with_cap(n, &[cycle(n, 0, n), reflection], cap)
                    }
                }
            }
            "S" => {
                let n = one(params)?;
                if factorial_exceeds(n, cap) {
                    return Err(GroupError::OrderCapExceeded { cap });
                }
                let mut gens = Vec::new();
                if n >= 2 {
                    gens.push(cycle(n, 0, n));
                    gens.push(cycle(n, 0, 2));
                }
                Self::from_generators_with_cap(n, &gens, cap)
            }
            "A" => {
                let n = one(params)?;
                if n > 1 && factorial_exceeds(n, cap.saturating_mul(2)) {
                    return Err(GroupError::OrderCapExceeded { cap });
                }
                // 3-cycles (0 1 k) generate A_n
                let gens: Vec<Vec<usize>> = (2..n)
                    .map(|k| {
                        let mut p: Vec<usize> = (0..n).collect();
                        p[0] = 1;
                        p[1] = k;
                        p[k] = 0;
                        p
                    })
                    .collect();
                Self::from_generators_with_cap(n, &gens, cap)
            }
            "Q" => match params {
                [8] => Self::from_generators_with_cap(8, &quaternion_generators(), cap),
                _ => Err(unknown()),
            },
            "E" => match params {
                [p, k] if is_prime(*p as u64) => Self::preset_with_cap("CP", &vec![*p; *k], cap),
                _ => Err(unknown()),
            },
            "CP" => {
                if params.is_empty() || params.contains(&0) {
                    return Err(unknown());
                }
                let degree: usize = params.iter().sum();
                let mut gens = Vec::new();
                let mut offset = 0;
                for &n in params {
                    gens.push(cycle(degree, offset, n));
                    offset += n;
                }
                Self::from_generators_with_cap(degree, &gens, cap)
            }
            _ => Err(unknown()),
        }
    }

    /// Parses compact names such as `S3`, `A5`, `C4`, `D6`, `Q8`, `E2^3`, `C2xC2`.
    pub fn preset_from_str(spec: &str) -> Result<Self, GroupError> {
        let s = spec.trim();
        let unknown = || GroupError::UnknownPreset(spec.to_string());
        if s.contains('x') || s.contains('×') {
            let factors = s
                .split(['x', '×'])
                .map(|f| {
                    f.trim()
                        .strip_prefix('C')
                        .and_then(|n| n.parse::<usize>().ok())
                        .ok_or_else(unknown)
                })
                .collect::<Result<Vec<_>, _>>()?;
            return Self::preset("CP", &factors);
        }
        if s == "1" || s == "trivial" {
            return Self::preset("C", &[1]);
        }
        let (letter, rest) = s.split_at(s.find(|c: char| c.is_ascii_digit()).ok_or_else(unknown)?);
        if letter == "E" {
            let (p, k) = rest.split_once('^').ok_or_else(unknown)?;
            let p = p.parse().map_err(|_| unknown())?;
            let k = k.parse().map_err(|_| unknown())?;
            return Self::preset("E", &[p, k]);
        }
        let n: usize = rest.parse().map_err(|_| unknown())?;
        Self::preset(letter, &[n])
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    /// `g · x · g⁻¹`
    pub fn conjugate(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        self.table
            .chunks(self.order)
            .map(<[usize]>::to_vec)
            .collect()
    }

    pub fn permutations(&self) -> Option<&[Vec<usize>]> {
        self.perms.as_deref()
    }

    pub fn degree(&self) -> Option<usize> {
        self.perms.as_ref().map(|p| p[0].len())
    }

    /// Sorted members of the subgroup generated by `elems`.
    pub fn generate(&self, elems: &[usize]) -> Vec<usize> {
        let mut member = vec![false; self.order];
        member[0] = true;
        let mut list = vec![0];
        let mut i = 0;
        while i < list.len() {
            let x = list[i];
            for &g in elems {
                let y = self.mul(x, g);
                if !member[y] {
                    member[y] = true;
                    list.push(y);
                }
            }
            i += 1;
        }
        list.sort_unstable();
        list
    }

    pub fn is_abelian_subset(&self, members: &[usize]) -> bool {
        members
            .iter()
            .all(|&a| members.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    /// The subgroup `H` as a group in its own right (element 0 is its identity).
    pub fn subgroup_group(&self, h: &Subgroup) -> FiniteGroup {
        let pos: HashMap<usize, usize> =
            h.members.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let rows = h
            .members
            .iter()
            .map(|&a| h.members.iter().map(|&b| pos[&self.mul(a, b)]).collect())
            .collect();
        FiniteGroup::from_table(rows).expect("subgroup is a group")
    }

    /// The quotient `G / N` for a normal subgroup `N`; cosets numbered by least member.
    pub fn quotient(&self, normal: &Subgroup) -> FiniteGroup {
        let cosets = self.left_cosets(normal);
        let mut coset_of = vec![0; self.order];
        for (i, c) in cosets.iter().enumerate() {
            for &x in c {
                coset_of[x] = i;
            }
        }
        let rows = cosets
            .iter()
            .map(|a| {
                cosets
                    .iter()
                    .map(|b| coset_of[self.mul(a[0], b[0])])
                    .collect()
            })
            .collect();
        FiniteGroup::from_table(rows).expect("quotient by a normal subgroup is a group")
    }

    /// Left cosets `gH`, each sorted, ordered by least member.
    pub fn left_cosets(&self, h: &Subgroup) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.order];
        let mut out = Vec::new();
        for g in 0..self.order {
            if seen[g] {
                continue;
            }
            let mut coset: Vec<usize> = h.members.iter().map(|&x| self.mul(g, x)).collect();
            coset.sort_unstable();
            for &x in &coset {
                seen[x] = true;
            }
            out.push(coset);
        }
        out
    }

    /// The action on `0..degree` of a permutation group.
    pub fn natural_action(&self) -> Option<ConcreteGSet> {
        let perms = self.perms.as_ref()?;
        Some(ConcreteGSet {
            size: perms[0].len(),
            act: perms.clone(),
        })
    }
}

fn cycle(degree: usize, start: usize, len: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..degree).collect();
    for i in 0..len {
        p[start + i] = start + (i + 1) % len;
    }
    p
}

fn factorial_exceeds(n: usize, cap: usize) -> bool {
    let mut f: usize = 1;
    for k in 2..=n {
        f = f.saturating_mul(k);
        if f > cap {
            return true;
        }
    }
    false
}

/// Left multiplication by i and j on {±1, ±i, ±j, ±k}, points 0..8 = 1,i,j,k,-1,-i,-j,-k.
fn quaternion_generators() -> Vec<Vec<usize>> {
    // unit products: units[a][b] = (sign, unit) of e_a · e_b with e = (1, i, j, k)
    const PROD: [[(bool, usize); 4]; 4] = [
        [(false, 0), (false, 1), (false, 2), (false, 3)],
        [(false, 1), (true, 0), (false, 3), (true, 2)],
        [(false, 2), (true, 3), (true, 0), (false, 1)],
        [(false, 3), (false, 2), (true, 1), (true, 0)],
    ];
    let left = |a: usize| -> Vec<usize> {
        (0..8)
            .map(|x| {
                let (neg_x, ux) = (x >= 4, x % 4);
                let (neg_p, up) = PROD[a][ux];
                up + if neg_x ^ neg_p { 4 } else { 0 }
            })
            .collect()
    };
    vec![left(1), left(2)]
}

/// A subgroup given by its sorted members.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Subgroup {
    members: Vec<usize>,
}

impl Subgroup {
    pub fn new(group: &FiniteGroup, mut members: Vec<usize>) -> Result<Self, GroupError> {
        members.sort_unstable();
        members.dedup();
        let mut set = vec![false; group.order()];
        for &m in &members {
            if m >= group.order() {
                return Err(GroupError::UnknownSubgroup(format!(
                    "element {m} out of range"
                )));
            }
            set[m] = true;
        }
        let closed = set[0]
            && members
                .iter()
                .all(|&a| set[group.inv(a)] && members.iter().all(|&b| set[group.mul(a, b)]));
        if !closed {
            return Err(GroupError::UnknownSubgroup(format!(
                "{members:?} is not closed under multiplication and inverses"
            )));
        }
        Ok(Subgroup { members })
    }

    pub fn whole(group: &FiniteGroup) -> Self {
        Subgroup {
            members: (0..group.order()).collect(),
        }
    }

    pub fn trivial() -> Self {
        Subgroup { members: vec![0] }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.members.iter().all(|&x| other.contains(x))
    }

    /// `g H g⁻¹`
    pub fn conjugate_by(&self, group: &FiniteGroup, g: usize) -> Subgroup {
        let mut members: Vec<usize> = self
            .members
            .iter()
            .map(|&x| group.conjugate(g, x))
            .collect();
        members.sort_unstable();
        Subgroup { members }
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        Subgroup {
            members: self
                .members
                .iter()
                .copied()
                .filter(|&x| other.contains(x))
                .collect(),
        }
    }
}

/// A conjugacy class of subgroups.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubgroupClass {
    /// Index (into the lattice's subgroup list) of the representative: the
    /// conjugate with the lexicographically least member list.
    pub representative: usize,
    pub members: Vec<usize>,
    pub order: usize,
    pub name: String,
}

/// All subgroups of a group with conjugacy classes, normalizers, Weyl orders and
/// the Möbius function of the subgroup poset.
#[derive(Debug, Clone)]
pub struct SubgroupLattice {
    group: Arc<FiniteGroup>,
    subgroups: Vec<Subgroup>,
    index: HashMap<Vec<usize>, usize>,
    class_of: Vec<usize>,
    classes: Vec<SubgroupClass>,
    normalizer: Vec<usize>,
    weyl_order: Vec<usize>,
    /// contains[k][l]: subgroup k ≤ subgroup l
    contains: Vec<Vec<bool>>,
    mobius: Vec<Vec<i64>>,
    /// above[c][d] = #{L ∈ class d : K_c ≤ L}
    above: Vec<Vec<i64>>,
    /// mobius_class[c][d] = Σ_{L ∈ class d, K_c ≤ L} μ(K_c, L)
    mobius_class: Vec<Vec<i64>>,
}

impl SubgroupLattice {
    pub fn new(group: Arc<FiniteGroup>) -> Self {
        let g = &*group;
        // cyclic subgroups, then closure under joins
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
        for x in 0..g.order() {
            found.insert(g.generate(&[x]));
        }
        let mut frontier: Vec<Vec<usize>> = found.iter().cloned().collect();
        let cyclic: Vec<Vec<usize>> = frontier.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for h in &frontier {
                for c in &cyclic {
                    if c.iter().all(|x| h.binary_search(x).is_ok()) {
                        continue;
                    }
                    let gens: Vec<usize> = h.iter().chain(c.iter()).copied().collect();
                    let joined = g.generate(&gens);
                    if found.insert(joined.clone()) {
                        next.push(joined);
                    }
                }
            }
            frontier = next;
        }
        let mut subgroups: Vec<Subgroup> = found
            .into_iter()
            .map(|members| Subgroup { members })
            .collect();
        subgroups.sort_by(|a, b| (a.order(), &a.members).cmp(&(b.order(), &b.members)));
        let index: HashMap<Vec<usize>, usize> = subgroups
            .iter()
            .enumerate()
            .map(|(i, s)| (s.members.clone(), i))
            .collect();
        let n = subgroups.len();

        let mut class_of = vec![usize::MAX; n];
        let mut normalizer = vec![0; n];
        let mut raw_classes: Vec<Vec<usize>> = Vec::new();
        for i in 0..n {
            let mut norm = Vec::new();
            let mut conj = BTreeSet::new();
            for x in 0..g.order() {
                let c = subgroups[i].conjugate_by(g, x);
                let ci = index[&c.members];
                if ci == i {
                    norm.push(x);
                }
                conj.insert(ci);
            }
            normalizer[i] = index[&norm];
            if class_of[i] == usize::MAX {
                let id = raw_classes.len();
                for &c in &conj {
                    class_of[c] = id;
                }
                raw_classes.push(conj.into_iter().collect());
            }
        }
        // subgroups are sorted by (order, members), so each class's first member is
        // its representative and classes come out in (order, representative) order
        let mut classes: Vec<SubgroupClass> = raw_classes
            .into_iter()
            .map(|members| SubgroupClass {
                representative: members[0],
                order: subgroups[members[0]].order(),
                members,
                name: String::new(),
            })
            .collect();
        classes.sort_by_key(|c| c.representative);
        for (id, c) in classes.iter().enumerate() {
            for &m in &c.members {
                class_of[m] = id;
            }
        }
        let weyl_order: Vec<usize> = classes
            .iter()
            .map(|c| subgroups[normalizer[c.representative]].order() / c.order)
            .collect();

        let contains: Vec<Vec<bool>> = (0..n)
            .map(|k| {
                (0..n)
                    .map(|l| {
                        subgroups[k].order() <= subgroups[l].order()
                            && subgroups[l].order().is_multiple_of(subgroups[k].order())
                            && subgroups[k].is_subgroup_of(&subgroups[l])
                    })
                    .collect()
            })
            .collect();

        // μ(K, L) = -Σ_{K ≤ M < L} μ(K, M); subgroups are sorted by order so every
        // proper subgroup of L precedes it
        let mut mobius = vec![vec![0i64; n]; n];
        for k in 0..n {
            mobius[k][k] = 1;
            for l in k + 1..n {
                if !contains[k][l] {
                    continue;
                }
                let s: i64 = (k..l)
                    .filter(|&m| contains[k][m] && contains[m][l])
                    .map(|m| mobius[k][m])
                    .sum();
                mobius[k][l] = -s;
            }
        }

        let nc = classes.len();
        let mut above = vec![vec![0i64; nc]; nc];
        let mut mobius_class = vec![vec![0i64; nc]; nc];
        for (c, cls) in classes.iter().enumerate() {
            let k = cls.representative;
            for l in 0..n {
                if contains[k][l] {
                    above[c][class_of[l]] += 1;
                    mobius_class[c][class_of[l]] += mobius[k][l];
                }
            }
        }

        let mut lattice = SubgroupLattice {
            group,
            subgroups,
            index,
            class_of,
            classes,
            normalizer,
            weyl_order,
            contains,
            mobius,
            above,
            mobius_class,
        };
        lattice.assign_names();
        lattice
    }

    /// `1` for the trivial class, `G` for the whole group, `C<n>` for cyclic and
    /// `H<n>` for non-cyclic classes, with `_1, _2, …` suffixes when ambiguous.
    fn assign_names(&mut self) {
        let last = self.classes.len() - 1;
        let base: Vec<String> = self
            .classes
            .iter()
            .enumerate()
            .map(|(id, c)| {
                if id == last {
                    "G".to_string()
                } else if c.order == 1 {
                    "1".to_string()
                } else {
                    let members = &self.subgroups[c.representative].members;
                    let cyclic = members
                        .iter()
                        .any(|&x| self.group.element_order(x) == c.order);
                    format!("{}{}", if cyclic { "C" } else { "H" }, c.order)
                }
            })
            .collect();
        let mut seen: HashMap<&str, usize> = HashMap::new();
        let totals: HashMap<&str, usize> = base.iter().fold(HashMap::new(), |mut m, b| {
            *m.entry(b.as_str()).or_default() += 1;
            m
        });
        let names: Vec<String> = base
            .iter()
            .map(|b| {
                if totals[b.as_str()] > 1 {
                    let k = seen.entry(b.as_str()).or_default();
                    *k += 1;
                    format!("{b}_{k}")
                } else {
                    b.clone()
                }
            })
            .collect();
        for (c, name) in self.classes.iter_mut().zip(names) {
            c.name = name;
        }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn group_arc(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subgroups
    }

    pub fn subgroup(&self, i: usize) -> &Subgroup {
        &self.subgroups[i]
    }

    pub fn subgroup_index(&self, members: &[usize]) -> Option<usize> {
        let mut m = members.to_vec();
        m.sort_unstable();
        self.index.get(&m).copied()
    }

    pub fn classes(&self) -> &[SubgroupClass] {
        &self.classes
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn class_of(&self, subgroup: usize) -> usize {
        self.class_of[subgroup]
    }

    /// Class containing the given subgroup (by members).
    pub fn class_of_subgroup(&self, h: &Subgroup) -> Option<usize> {
        self.subgroup_index(h.members()).map(|i| self.class_of[i])
    }

    pub fn representative(&self, class: usize) -> &Subgroup {
        &self.subgroups[self.classes[class].representative]
    }

    pub fn class_by_name(&self, name: &str) -> Result<usize, GroupError> {
        let name = name.trim();
        if let Some(idx) = name.strip_prefix('#') {
            return idx
                .parse::<usize>()
                .ok()
                .filter(|&i| i < self.classes.len())
                .ok_or_else(|| GroupError::UnknownSubgroup(name.to_string()));
        }
        if let Some(i) = self.classes.iter().position(|c| c.name == name) {
            return Ok(i);
        }
        match name {
            "1" => Ok(self.trivial_class()),
            "G" => Ok(self.whole_class()),
            _ => Err(GroupError::UnknownSubgroup(name.to_string())),
        }
    }

    pub fn trivial_class(&self) -> usize {
        0
    }

    pub fn whole_class(&self) -> usize {
        self.classes.len() - 1
    }

    pub fn weyl_order(&self, class: usize) -> usize {
        self.weyl_order[class]
    }

    pub fn weyl_orders(&self) -> &[usize] {
        &self.weyl_order
    }

    /// Index of `N_G(H)` for subgroup `H`.
    pub fn normalizer(&self, subgroup: usize) -> usize {
        self.normalizer[subgroup]
    }

    pub fn is_normal(&self, subgroup: usize) -> bool {
        self.classes[self.class_of[subgroup]].members.len() == 1
    }

    pub fn contains(&self, k: usize, l: usize) -> bool {
        self.contains[k][l]
    }

    /// μ(K, M) on the full subgroup poset.
    pub fn mobius(&self, k: usize, m: usize) -> Result<i64, GroupError> {
        if self.contains[k][m] {
            Ok(self.mobius[k][m])
        } else {
            Err(GroupError::NotComparable)
        }
    }

    /// `#{L ∈ class d : K_c ≤ L}` for the representative `K_c`.
    pub fn above_count(&self, c: usize, d: usize) -> i64 {
        self.above[c][d]
    }

    /// `Σ_{L ∈ class d, K_c ≤ L} μ(K_c, L)`.
    pub fn mobius_class(&self, c: usize, d: usize) -> i64 {
        self.mobius_class[c][d]
    }

    /// Subgroups (indices) contained in subgroup `h`.
    pub fn subgroups_of(&self, h: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.subgroups.len()).filter(move |&k| self.contains[k][h])
    }

    /// Does some conjugate of subgroup `k` lie in subgroup `l`?
    pub fn is_subconjugate(&self, k: usize, l: usize) -> bool {
        self.classes[self.class_of[k]]
            .members
            .iter()
            .any(|&k2| self.contains[k2][l])
    }

    /// True iff subgroup `h` has a unique (hence normal) Sylow `p`-subgroup.
    pub fn has_normal_sylow(&self, h: usize, p: Prime) -> bool {
        self.sylow_subgroups(h, p).len() == 1
    }

    pub fn sylow_subgroups(&self, h: usize, p: Prime) -> Vec<usize> {
        let target = p_part(self.subgroups[h].order(), p.get());
        self.subgroups_of(h)
            .filter(|&k| self.subgroups[k].order() == target)
            .collect()
    }
}

/// A finite set with a left action of the group: `act[g][x]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConcreteGSet {
    size: usize,
    act: Vec<Vec<usize>>,
}

impl ConcreteGSet {
    pub fn new(group: &FiniteGroup, act: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        if act.len() != group.order() {
            return Err(GroupError::InvalidAction(format!(
                "expected {} rows (one per element), got {}",
                group.order(),
                act.len()
            )));
        }
        let size = act[0].len();
        for (g, row) in act.iter().enumerate() {
            if row.len() != size || row.iter().any(|&x| x >= size) {
                return Err(GroupError::InvalidAction(format!("row {g} is malformed")));
            }
        }
        if act[0].iter().enumerate().any(|(x, &y)| x != y) {
            return Err(GroupError::InvalidAction(
                "identity does not act trivially".into(),
            ));
        }
        for g in 0..group.order() {
            for h in 0..group.order() {
                let gh = group.mul(g, h);
                if (0..size).any(|x| act[gh][x] != act[g][act[h][x]]) {
                    return Err(GroupError::InvalidAction(format!(
                        "act[{g}·{h}] ≠ act[{g}]∘act[{h}]"
                    )));
                }
            }
        }
        Ok(ConcreteGSet { size, act })
    }

    pub fn empty(group: &FiniteGroup) -> Self {
        Self::trivial(group, 0)
    }

    /// `n` points, each fixed by the whole group.
    pub fn trivial(group: &FiniteGroup, n: usize) -> Self {
        ConcreteGSet {
            size: n,
            act: vec![(0..n).collect(); group.order()],
        }
    }

    /// `G/H` as left cosets, numbered by least member.
    pub fn coset_space(group: &FiniteGroup, h: &Subgroup) -> Self {
        let cosets = group.left_cosets(h);
        let mut coset_of = vec![0; group.order()];
        for (i, c) in cosets.iter().enumerate() {
            for &x in c {
                coset_of[x] = i;
            }
        }
        let act = (0..group.order())
            .map(|g| {
                cosets
                    .iter()
                    .map(|c| coset_of[group.mul(g, c[0])])
                    .collect()
            })
            .collect();
        ConcreteGSet {
            size: cosets.len(),
            act,
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn act(&self, g: usize, x: usize) -> usize {
        self.act[g][x]
    }

    pub fn action_table(&self) -> &[Vec<usize>] {
        &self.act
    }

    pub fn fixed_points(&self, h: &Subgroup) -> Vec<usize> {
        (0..self.size)
            .filter(|&x| h.members().iter().all(|&g| self.act[g][x] == x))
            .collect()
    }

    pub fn is_fixed(&self, h: &Subgroup, x: usize) -> bool {
        h.members().iter().all(|&g| self.act[g][x] == x)
    }

    /// Orbits, each sorted, ordered by least point.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.size];
        let mut out = Vec::new();
        for x in 0..self.size {
            if seen[x] {
                continue;
            }
            let mut orbit: Vec<usize> = self.act.iter().map(|row| row[x]).collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &y in &orbit {
                seen[y] = true;
            }
            out.push(orbit);
        }
        out
    }

    /// Orbits of the subgroup `h` only.
    pub fn orbits_under(&self, h: &Subgroup) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.size];
        let mut out = Vec::new();
        for x in 0..self.size {
            if seen[x] {
                continue;
            }
            let mut orbit: Vec<usize> = h.members().iter().map(|&g| self.act[g][x]).collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &y in &orbit {
                seen[y] = true;
            }
            out.push(orbit);
        }
        out
    }

    pub fn stabilizer(&self, x: usize) -> Subgroup {
        Subgroup {
            members: (0..self.act.len())
                .filter(|&g| self.act[g][x] == x)
                .collect(),
        }
    }

    /// Diagonal action on `X × Y`; the pair `(x, y)` is point `x·|Y| + y`.
    pub fn product(&self, other: &ConcreteGSet) -> ConcreteGSet {
        let m = other.size;
        let act = self
            .act
            .iter()
            .zip(&other.act)
            .map(|(a, b)| {
                (0..self.size * m)
                    .map(|p| a[p / m] * m + b[p % m])
                    .collect()
            })
            .collect();
        ConcreteGSet {
            size: self.size * m,
            act,
        }
    }

    /// `X ⊔ Y`; points of `Y` are shifted by `|X|`.
    pub fn disjoint_union(&self, other: &ConcreteGSet) -> ConcreteGSet {
        let n = self.size;
        let act = self
            .act
            .iter()
            .zip(&other.act)
            .map(|(a, b)| a.iter().copied().chain(b.iter().map(|&y| y + n)).collect())
            .collect();
        ConcreteGSet {
            size: n + other.size,
            act,
        }
    }

    /// Applies `g` to a vector indexed by points: `out[g·x] = v[x]`.
    pub fn permute<T: Clone>(&self, g: usize, v: &[T], zero: T) -> Vec<T> {
        let mut out = vec![zero; self.size];
        for (x, val) in v.iter().enumerate() {
            out[self.act[g][x]] = val.clone();
        }
        out
    }
}
