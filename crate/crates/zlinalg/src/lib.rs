//! Exact integer linear algebra for homological computations.
//!
//! Everything is over arbitrary-precision integers. Groups are presentations
//! `ℤ^g / im R`, maps are integer matrices on generators, and homology of complexes
//! with non-free terms is computed by pulling relations back into cycle lattices.

pub mod complex;
pub mod derived;
pub mod diagram;
pub mod echelon;
pub mod group;
pub mod matrix;
pub mod snf;

pub use complex::{connecting_map, is_exact_at, ChainComplex, ChainMap, ComplexError, NotExact};
pub use derived::{ext1, hom, tensor, tor1};
pub use diagram::{block_offsets, colimit, limit, limit_kernel, Diagram, Universal};
pub use echelon::{column_echelon, integer_kernel, solve_integer, Lattice};
pub use group::{FgAbGroup, GroupMap, NotAHomomorphism, Subquotient};
pub use matrix::{int, unit_vector, vec_is_zero, vec_sub, Int, IntMatrix};
pub use snf::{invariant_factors, smith_normal_form, Smith};

/// Invariant-factor normal form of `coker(rels)`.
pub fn normalize(rels: &IntMatrix) -> FgAbGroup {
    FgAbGroup::presented(rels.clone())
}
