//! Exact structure-constant toolkit for finite-dimensional left Leibniz
//! algebras: products and the identity checker, subspace calculus, series
//! and invariants, subalgebra lattices over small prime fields, the named
//! families, classification of algebras whose second-maximal subalgebras
//! are ideals, and an exhaustive census at small dimension.

pub mod algebra;
pub mod census;
pub mod classify;
pub mod error;
pub mod exactfield;
pub mod families;
pub mod lattice;
pub mod linalg;
pub mod packed;
pub mod structure;
pub mod subspaces;

pub use algebra::{AlgebraTable, Vector};
pub use error::{Error, Result};
pub use exactfield::{FieldSpec, Scalar};
pub use subspaces::Subspace;
