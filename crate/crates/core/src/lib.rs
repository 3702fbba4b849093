//! Finite-group machinery for equivariant topology: subgroup lattices, Burnside
//! rings and their mark/obstruction diagram, mod-p resolving functions, modules
//! over the orbit category, and special G-complexes with certified splitting and
//! homotopy-equivalence checks.

#![allow(clippy::needless_range_loop)]

pub mod burnside;
pub mod chain;
pub mod classify;
pub mod gcw;
pub mod group;
pub mod io;
pub mod linalg;
pub mod orbit_cat;
pub mod resolving;

pub use group::{ConcreteGSet, FiniteGroup, GroupError, Prime, Subgroup, SubgroupLattice};
pub use linalg::{IntMatrix, LinalgError, Matrix, Ring, Scalar};
