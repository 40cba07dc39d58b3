//! Hom, Ext¹, Tor₁ and tensor products of presented groups.
//!
//! Each is read off a length-one free resolution `0 → ℤ^m → ℤ^g → A → 0`, where the
//! relation matrix of `A` is first replaced by a basis of its column span.

use crate::echelon::Lattice;
use crate::group::{FgAbGroup, GroupMap};
use crate::matrix::IntMatrix;

fn injective_relations(a: &FgAbGroup) -> IntMatrix {
    Lattice::span(a.num_gens(), a.relations()).basis().clone()
}

fn power(b: &FgAbGroup, n: usize) -> FgAbGroup {
    FgAbGroup::direct_sum(&vec![b.clone(); n])
}

/// `Hom(ℤ^g, B) → Hom(ℤ^m, B)`, precomposition with the relations of `A`.
fn hom_resolution_map(a: &FgAbGroup, b: &FgAbGroup) -> GroupMap {
    let r = injective_relations(a);
    let m = r.transpose().kron(&IntMatrix::identity(b.num_gens()));
    GroupMap::new_unchecked(power(b, a.num_gens()), power(b, r.cols()), m)
}

/// `ℤ^m ⊗ B → ℤ^g ⊗ B`.
fn tensor_resolution_map(a: &FgAbGroup, b: &FgAbGroup) -> GroupMap {
    let r = injective_relations(a);
    let m = r.kron(&IntMatrix::identity(b.num_gens()));
    GroupMap::new_unchecked(power(b, r.cols()), power(b, a.num_gens()), m)
}

/// `Hom(A, B)`. An element is a tuple of images of the generators of `A`, concatenated.
pub fn hom(a: &FgAbGroup, b: &FgAbGroup) -> FgAbGroup {
    hom_resolution_map(a, b).kernel().group().clone()
}

pub fn ext1(a: &FgAbGroup, b: &FgAbGroup) -> FgAbGroup {
    hom_resolution_map(a, b).cokernel().0
}

pub fn tor1(a: &FgAbGroup, b: &FgAbGroup) -> FgAbGroup {
    tensor_resolution_map(a, b).kernel().group().clone()
}

/// `A ⊗ B`, presented on pairs of generators `(i, k) ↦ i · gens(B) + k`.
pub fn tensor(a: &FgAbGroup, b: &FgAbGroup) -> FgAbGroup {
    tensor_resolution_map(a, b).cokernel().0
}
