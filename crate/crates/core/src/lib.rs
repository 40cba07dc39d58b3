//! Sheaves, cosheaves, homology and duality on finite topological spaces.
//!
//! A finite T0 space is a finite poset whose opens are the up-sets. Sheaves are
//! functors on the poset with values in finitely generated abelian groups, and all
//! derived constructions reduce to exact integer linear algebra.

pub mod cosheaf;
pub mod duality;
pub mod error;
pub mod homology;
pub mod poset;
pub mod random;
pub mod report;
pub mod sheaf;

pub use cosheaf::{cos, cos_morphism, shf, shf_morphism, unit, Cosheaf, CosheafMorphism};
pub use error::Error;
pub use poset::{element_set, ElementSet, FinitePoset, MonotoneMap, PosetViolation, ValidationReport};
pub use sheaf::{natural_transformations, tensor_groups, Sheaf, SheafComplex, SheafMorphism};
pub use zlinalg;
