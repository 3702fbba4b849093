//! The Burnside ring B(G), super class functions C(G) and the obstruction group
//! Obs(G) = ⊕ ℤ/|W_G(K)|, with the maps between them:
//!
//! ```text
//! 0 → B(G) --ρ--> C(G) --ψ--> Obs(G) → 0
//!       ‖          θ↓↑θ⁻¹       ‖
//! 0 → B(G) --η--> C(G) --γ--> Obs(G) → 0
//! ```
//!
//! All vectors are indexed by conjugacy classes of subgroups in lattice class order.

use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classify::hypoelementary_classes;
use crate::group::{ConcreteGSet, Prime, SubgroupLattice};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BurnsideError {
    #[error("expected {expected} class values, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("cannot parse Burnside element `{input}`: {reason}")]
    Parse { input: String, reason: String },
}

/// Integer combination of the transitive G-sets `[G/K]`, one coefficient per class.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BurnsideElement {
    pub coeffs: Vec<i64>,
}

/// Integer-valued function on conjugacy classes of subgroups.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SuperClassFunction {
    pub values: Vec<i64>,
}

/// Element of Obs(G); entry `c` lives in ℤ/moduli[c].
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ObsElement {
    pub residues: Vec<i64>,
    pub moduli: Vec<i64>,
}

impl ObsElement {
    pub fn is_zero(&self) -> bool {
        self.residues.iter().all(|&r| r == 0)
    }
}

/// `marks[c][d] = |(G/K_c)^{L_d}|` over class representatives.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableOfMarks {
    pub marks: Vec<Vec<i64>>,
}

/// Marks of a Burnside element on the `p`-hypoelementary classes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ConlonInvariant {
    pub p: Prime,
    pub classes: Vec<usize>,
    pub marks: Vec<i64>,
}

impl SuperClassFunction {
    pub fn constant(n: usize, value: i64) -> Self {
        SuperClassFunction {
            values: vec![value; n],
        }
    }

    pub fn pointwise_mul(&self, other: &Self) -> Self {
        SuperClassFunction {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a * b)
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        SuperClassFunction {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl BurnsideElement {
    pub fn zero(n: usize) -> Self {
        BurnsideElement { coeffs: vec![0; n] }
    }

    pub fn basis(n: usize, c: usize) -> Self {
        let mut coeffs = vec![0; n];
        coeffs[c] = 1;
        BurnsideElement { coeffs }
    }

    pub fn add(&self, other: &Self) -> Self {
        BurnsideElement {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn scale(&self, k: i64) -> Self {
        BurnsideElement {
            coeffs: self.coeffs.iter().map(|a| a * k).collect(),
        }
    }
}

/// The Burnside ring of a group together with its table of marks.
#[derive(Debug)]
pub struct BurnsideRing {
    lattice: Arc<SubgroupLattice>,
    marks: TableOfMarks,
    products: OnceLock<Vec<Vec<BurnsideElement>>>,
}

impl BurnsideRing {
    pub fn new(lattice: Arc<SubgroupLattice>) -> Self {
        let g = lattice.group();
        let n = lattice.num_classes();
        let marks = (0..n)
            .map(|c| {
                let x = ConcreteGSet::coset_space(g, lattice.representative(c));
                (0..n)
                    .map(|d| x.fixed_points(lattice.representative(d)).len() as i64)
                    .collect()
            })
            .collect();
        BurnsideRing {
            lattice,
            marks: TableOfMarks { marks },
            products: OnceLock::new(),
        }
    }

    pub fn lattice(&self) -> &SubgroupLattice {
        &self.lattice
    }

    pub fn lattice_arc(&self) -> &Arc<SubgroupLattice> {
        &self.lattice
    }

    pub fn rank(&self) -> usize {
        self.lattice.num_classes()
    }

    pub fn table_of_marks(&self) -> &TableOfMarks {
        &self.marks
    }

    pub fn check_len(&self, len: usize) -> Result<(), BurnsideError> {
        if len == self.rank() {
            Ok(())
        } else {
            Err(BurnsideError::WrongLength {
                expected: self.rank(),
                got: len,
            })
        }
    }

    /// `G/K_c` as a concrete G-set.
    pub fn transitive_gset(&self, c: usize) -> ConcreteGSet {
        ConcreteGSet::coset_space(self.lattice.group(), self.lattice.representative(c))
    }

    /// Counts orbits by the class of their point stabilizers.
    pub fn orbit_decomposition(&self, x: &ConcreteGSet) -> BurnsideElement {
        let mut coeffs = vec![0; self.rank()];
        for orbit in x.orbits() {
            let stab = x.stabilizer(orbit[0]);
            let c = self
                .lattice
                .class_of_subgroup(&stab)
                .expect("stabilizers are subgroups");
            coeffs[c] += 1;
        }
        BurnsideElement { coeffs }
    }

    /// Disjoint union of `coeffs[c]` copies of `G/K_c`; `None` for virtual elements.
    pub fn realize(&self, x: &BurnsideElement) -> Option<ConcreteGSet> {
        if x.coeffs.iter().any(|&a| a < 0) {
            return None;
        }
        let mut out = ConcreteGSet::empty(self.lattice.group());
        for (c, &k) in x.coeffs.iter().enumerate() {
            let orbit = self.transitive_gset(c);
            for _ in 0..k {
                out = out.disjoint_union(&orbit);
            }
        }
        Some(out)
    }

    /// Mark homomorphism: `ρ(x)(L) = Σ_c x_c · |(G/K_c)^L|`.
    pub fn rho(&self, x: &BurnsideElement) -> SuperClassFunction {
        let n = self.rank();
        let values = (0..n)
            .map(|d| (0..n).map(|c| x.coeffs[c] * self.marks.marks[c][d]).sum())
            .collect();
        SuperClassFunction { values }
    }

    /// Preimage under ρ by back-substitution through the triangular table of
    /// marks, from the largest class down. `None` when `v` is not a mark vector.
    pub fn rho_solve(&self, v: &SuperClassFunction) -> Option<BurnsideElement> {
        let mut x = vec![0i64; self.rank()];
        self.rho_solve_into(&v.values, &mut x)
            .then_some(BurnsideElement { coeffs: x })
    }

    /// Allocation-free [`rho_solve`](Self::rho_solve); writes into `out` and
    /// reports whether the back-substitution stayed integral.
    pub fn rho_solve_into(&self, v: &[i64], out: &mut [i64]) -> bool {
        let n = self.rank();
        let m = &self.marks.marks;
        for d in (0..n).rev() {
            let rest: i64 = (d + 1..n).map(|c| out[c] * m[c][d]).sum();
            let r = v[d] - rest;
            if r % m[d][d] != 0 {
                return false;
            }
            out[d] = r / m[d][d];
        }
        true
    }

    /// `θ(f)(K) = Σ_{K ≤ L} μ(K, L) f(L)`, summed over actual subgroups `L`.
    pub fn theta(&self, f: &SuperClassFunction) -> SuperClassFunction {
        let n = self.rank();
        let values = (0..n)
            .map(|c| {
                (0..n)
                    .map(|d| self.lattice.mobius_class(c, d) * f.values[d])
                    .sum()
            })
            .collect();
        SuperClassFunction { values }
    }

    /// `θ⁻¹(f)(K) = Σ_{K ≤ L} f(L)`, summed over actual subgroups `L`.
    pub fn theta_inv(&self, f: &SuperClassFunction) -> SuperClassFunction {
        let mut values = vec![0i64; self.rank()];
        self.theta_inv_into(&f.values, &mut values);
        SuperClassFunction { values }
    }

    pub fn theta_inv_into(&self, f: &[i64], out: &mut [i64]) {
        let n = self.rank();
        for (c, o) in out.iter_mut().enumerate().take(n) {
            *o = (c..n).map(|d| self.lattice.above_count(c, d) * f[d]).sum();
        }
    }

    /// `η([G/K]) = |W_G(K)|` at the class of `K`, zero elsewhere.
    pub fn eta(&self, x: &BurnsideElement) -> SuperClassFunction {
        SuperClassFunction {
            values: x
                .coeffs
                .iter()
                .zip(self.lattice.weyl_orders())
                .map(|(&a, &w)| a * w as i64)
                .collect(),
        }
    }

    pub fn obs_moduli(&self) -> Vec<i64> {
        self.lattice
            .weyl_orders()
            .iter()
            .map(|&w| w as i64)
            .collect()
    }

    /// Componentwise reduction mod `|W_G(K)|`.
    pub fn gamma(&self, f: &SuperClassFunction) -> ObsElement {
        let moduli = self.obs_moduli();
        ObsElement {
            residues: f
                .values
                .iter()
                .zip(&moduli)
                .map(|(&v, &m)| v.rem_euclid(m))
                .collect(),
            moduli,
        }
    }

    /// `ψ = γ ∘ θ`
    pub fn psi(&self, f: &SuperClassFunction) -> ObsElement {
        self.gamma(&self.theta(f))
    }

    /// Products of transitive G-sets, decomposed into orbits.
    fn basis_products(&self) -> &Vec<Vec<BurnsideElement>> {
        self.products.get_or_init(|| {
            let n = self.rank();
            let sets: Vec<ConcreteGSet> = (0..n).map(|c| self.transitive_gset(c)).collect();
            (0..n)
                .map(|c| {
                    (0..n)
                        .map(|d| {
                            if d < c {
                                BurnsideElement::zero(0)
                            } else {
                                self.orbit_decomposition(&sets[c].product(&sets[d]))
                            }
                        })
                        .collect()
                })
                .collect()
        })
    }

    /// Cartesian product, extended bilinearly from the transitive G-sets.
    pub fn mul(&self, x: &BurnsideElement, y: &BurnsideElement) -> BurnsideElement {
        let n = self.rank();
        let table = self.basis_products();
        let mut out = vec![0i64; n];
        for c in 0..n {
            if x.coeffs[c] == 0 {
                continue;
            }
            for d in 0..n {
                if y.coeffs[d] == 0 {
                    continue;
                }
                let prod = if c <= d { &table[c][d] } else { &table[d][c] };
                let k = x.coeffs[c] * y.coeffs[d];
                for (o, p) in out.iter_mut().zip(&prod.coeffs) {
                    *o += k * p;
                }
            }
        }
        BurnsideElement { coeffs: out }
    }

    pub fn conlon_invariant(&self, x: &BurnsideElement, p: Prime) -> ConlonInvariant {
        let marks = self.rho(x);
        let classes = hypoelementary_classes(&self.lattice, p);
        ConlonInvariant {
            p,
            marks: classes.iter().map(|&c| marks.values[c]).collect(),
            classes,
        }
    }

    /// Equality of the linearizations over a field of characteristic `p`
    /// (or the `p`-adic integers): marks agree on every `p`-hypoelementary class.
    pub fn conlon_equal(&self, x: &BurnsideElement, y: &BurnsideElement, p: Prime) -> bool {
        self.conlon_invariant(x, p) == self.conlon_invariant(y, p)
    }

    /// Parses signed combinations like `[G/1] + 2[G/G] - [G/C2]`, where names
    /// are the lattice class names (or `#index`).
    pub fn parse_element(&self, input: &str) -> Result<BurnsideElement, BurnsideError> {
        let err = |reason: &str| BurnsideError::Parse {
            input: input.to_string(),
            reason: reason.to_string(),
        };
        let mut coeffs = vec![0i64; self.rank()];
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if s == "0" {
            return Ok(BurnsideElement { coeffs });
        }
        if s.is_empty() {
            return Err(err("empty expression"));
        }
        let mut rest = s.as_str();
        let mut first = true;
        while !rest.is_empty() {
            let mut sign = 1i64;
            if let Some(r) = rest.strip_prefix('+') {
                rest = r;
            } else if let Some(r) = rest.strip_prefix('-') {
                sign = -1;
                rest = r;
            } else if !first {
                return Err(err("expected `+` or `-` between terms"));
            }
            first = false;
            let digits = rest
                .find(|c: char| !c.is_ascii_digit())
                .unwrap_or(rest.len());
            let k: i64 = if digits == 0 {
                1
            } else {
                rest[..digits]
                    .parse()
                    .map_err(|_| err("coefficient out of range"))?
            };
            rest = &rest[digits..];
            let body = rest
                .strip_prefix("[G/")
                .ok_or_else(|| err("expected a term of the form k[G/NAME]"))?;
            let close = body.find(']').ok_or_else(|| err("missing `]`"))?;
            let name = &body[..close];
            let c = self
                .lattice
                .class_by_name(name)
                .map_err(|_| err(&format!("unknown subgroup class `{name}`")))?;
            coeffs[c] += sign * k;
            rest = &body[close + 1..];
        }
        Ok(BurnsideElement { coeffs })
    }

    pub fn format_element(&self, x: &BurnsideElement) -> String {
        let classes = self.lattice.classes();
        let mut out = String::new();
        for (c, &k) in x.coeffs.iter().enumerate() {
            if k == 0 {
                continue;
            }
            let sign = if k < 0 { "-" } else { "+" };
            if out.is_empty() {
                if k < 0 {
                    out.push('-');
                }
            } else {
                out.push_str(&format!(" {sign} "));
            }
            if k.abs() != 1 {
                out.push_str(&k.abs().to_string());
            }
            out.push_str(&format!("[G/{}]", classes[c].name));
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl fmt::Display for SuperClassFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(i64::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Parses `6,-2,-2,2` (optionally parenthesised) into class values.
pub fn parse_class_values(input: &str) -> Result<Vec<i64>, BurnsideError> {
    let t = input.trim().trim_start_matches('(').trim_end_matches(')');
    if t.trim().is_empty() {
        return Ok(Vec::new());
    }
    t.split(',')
        .map(|v| {
            v.trim().parse::<i64>().map_err(|_| BurnsideError::Parse {
                input: input.to_string(),
                reason: format!("`{}` is not an integer", v.trim()),
            })
        })
        .collect()
}
