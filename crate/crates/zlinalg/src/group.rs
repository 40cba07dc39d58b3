//! Finitely generated abelian groups given by presentations, and maps between them.

use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::echelon::{integer_kernel, Lattice};
use crate::matrix::{Int, IntMatrix};
use crate::snf::smith_normal_form;

#[derive(Clone, Debug)]
struct NormalForm {
    free_rank: usize,
    torsion: Vec<Int>,
    /// Rows map generator coordinates to normal coordinates (free first, then torsion).
    to_normal: IntMatrix,
    /// Columns express each normal generator in terms of the original generators.
    from_normal: IntMatrix,
}

/// `coker(rels) = ℤ^gens / im(rels)` with its invariant-factor normal form.
#[derive(Clone)]
pub struct FgAbGroup {
    gens: usize,
    rels: IntMatrix,
    nf: Arc<NormalForm>,
}

impl FgAbGroup {
    /// The group presented by `rels` (a `gens × m` matrix whose columns are relations).
    pub fn presented(rels: IntMatrix) -> FgAbGroup {
        let gens = rels.rows();
        let nf = if rels.is_zero() {
            NormalForm {
                free_rank: gens,
                torsion: Vec::new(),
                to_normal: IntMatrix::identity(gens),
                from_normal: IntMatrix::identity(gens),
            }
        } else {
            normal_form(&rels)
        };
        FgAbGroup { gens, rels, nf: Arc::new(nf) }
    }

    pub fn free(n: usize) -> FgAbGroup {
        FgAbGroup::presented(IntMatrix::zeros(n, 0))
    }

    pub fn zero() -> FgAbGroup {
        FgAbGroup::free(0)
    }

    /// `ℤ/n`; `n = 0` gives `ℤ`.
    pub fn cyclic(n: i64) -> FgAbGroup {
        FgAbGroup::presented(IntMatrix::from_rows(&[vec![n]]))
    }

    /// `ℤ^rank ⊕ ℤ/t_1 ⊕ …` with one generator per summand, in that order.
    pub fn from_invariants(rank: usize, torsion: &[Int]) -> FgAbGroup {
        let g = rank + torsion.len();
        let mut rels = IntMatrix::zeros(g, torsion.len());
        for (i, t) in torsion.iter().enumerate() {
            rels[(rank + i, i)] = t.clone();
        }
        FgAbGroup::presented(rels)
    }

    pub fn num_gens(&self) -> usize {
        self.gens
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.rels
    }

    pub fn free_rank(&self) -> usize {
        self.nf.free_rank
    }

    /// Invariant factors `≥ 2`, each dividing the next.
    pub fn torsion(&self) -> &[Int] {
        &self.nf.torsion
    }

    pub fn is_zero(&self) -> bool {
        self.nf.free_rank == 0 && self.nf.torsion.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.nf.torsion.is_empty()
    }

    /// Number of summands in the normal form.
    pub fn normal_len(&self) -> usize {
        self.nf.free_rank + self.nf.torsion.len()
    }

    /// Order of the group, or `None` if infinite.
    pub fn order(&self) -> Option<Int> {
        if self.nf.free_rank > 0 {
            return None;
        }
        Some(self.nf.torsion.iter().fold(Int::one(), |acc, t| acc * t))
    }

    /// Invariant data: free rank and torsion factors.
    pub fn invariants(&self) -> (usize, Vec<Int>) {
        (self.nf.free_rank, self.nf.torsion.clone())
    }

    pub fn is_isomorphic(&self, other: &FgAbGroup) -> bool {
        self.nf.free_rank == other.nf.free_rank && self.nf.torsion == other.nf.torsion
    }

    /// Normal coordinates of an element given on generators; torsion parts reduced
    /// into `[0, d)`.
    pub fn normal_coords(&self, x: &[Int]) -> Vec<Int> {
        assert_eq!(x.len(), self.gens, "element has wrong length");
        let mut y = self.nf.to_normal.mul_vec(x);
        for (i, t) in self.nf.torsion.iter().enumerate() {
            let k = self.nf.free_rank + i;
            y[k] = y[k].mod_floor(t);
        }
        y
    }

    /// The element with the given normal coordinates, expressed on generators.
    pub fn from_normal_coords(&self, y: &[Int]) -> Vec<Int> {
        self.nf.from_normal.mul_vec(y)
    }

    /// Generator-coordinates of the normal generators, as columns.
    pub fn normal_generators(&self) -> &IntMatrix {
        &self.nf.from_normal
    }

    /// Matrix taking generator coordinates to normal coordinates (unreduced).
    pub fn to_normal_matrix(&self) -> &IntMatrix {
        &self.nf.to_normal
    }

    pub fn is_zero_element(&self, x: &[Int]) -> bool {
        self.normal_coords(x).iter().all(Zero::is_zero)
    }

    pub fn elements_equal(&self, x: &[Int], y: &[Int]) -> bool {
        let d: Vec<Int> = x.iter().zip(y).map(|(a, b)| a - b).collect();
        self.is_zero_element(&d)
    }

    /// Whether every column of `m` is zero in the group.
    pub fn columns_vanish(&self, m: &IntMatrix) -> bool {
        assert_eq!(m.rows(), self.gens);
        (0..m.cols()).all(|c| self.is_zero_element(&m.column(c)))
    }

    /// Additive order of an element, or `None` if infinite.
    pub fn element_order(&self, x: &[Int]) -> Option<Int> {
        let y = self.normal_coords(x);
        if y[..self.nf.free_rank].iter().any(|v| !v.is_zero()) {
            return None;
        }
        let mut o = Int::one();
        for (i, t) in self.nf.torsion.iter().enumerate() {
            let v = &y[self.nf.free_rank + i];
            if !v.is_zero() {
                o = o.lcm(&(t / t.gcd(v)));
            }
        }
        Some(o)
    }

    /// Direct sum; generators are concatenated in order.
    pub fn direct_sum(parts: &[FgAbGroup]) -> FgAbGroup {
        let blocks: Vec<&IntMatrix> = parts.iter().map(|p| &p.rels).collect();
        FgAbGroup::presented(IntMatrix::block_diagonal(&blocks))
    }

    pub fn identity_map(&self) -> GroupMap {
        GroupMap::new_unchecked(self.clone(), self.clone(), IntMatrix::identity(self.gens))
    }

    pub fn zero_map_to(&self, target: &FgAbGroup) -> GroupMap {
        GroupMap::new_unchecked(self.clone(), target.clone(), IntMatrix::zeros(target.gens, self.gens))
    }

    /// The same group re-presented on its normal generators, with the isomorphism
    /// from it to `self`.
    pub fn normalized(&self) -> (FgAbGroup, GroupMap) {
        let (r, t) = self.invariants();
        let n = FgAbGroup::from_invariants(r, &t);
        let iso = GroupMap::new_unchecked(n.clone(), self.clone(), self.nf.from_normal.clone());
        (n, iso)
    }

    /// Enumerates all elements of a finite group in normal coordinates.
    pub fn enumerate_normal(&self) -> Vec<Vec<Int>> {
        assert_eq!(self.nf.free_rank, 0, "cannot enumerate an infinite group");
        let mut out = vec![Vec::new()];
        for t in &self.nf.torsion {
            let mut next = Vec::new();
            for v in &out {
                let mut k = Int::zero();
                while &k < t {
                    let mut w = v.clone();
                    w.push(k.clone());
                    next.push(w);
                    k += 1;
                }
            }
            out = next;
        }
        out
    }

    /// Enumerates all elements of a finite group on generators.
    pub fn enumerate(&self) -> Vec<Vec<Int>> {
        self.enumerate_normal().iter().map(|y| self.from_normal_coords(y)).collect()
    }
}

/// The torsion list when `rels` is already `[0; diag(t_1, …, t_k)]` with `1 < t_1 | t_2 | …`.
fn canonical_torsion(rels: &IntMatrix) -> Option<Vec<Int>> {
    let (g, m) = rels.shape();
    let r = g.checked_sub(m)?;
    let mut torsion: Vec<Int> = Vec::with_capacity(m);
    for c in 0..m {
        let col = rels.column(c);
        let t = col[r + c].clone();
        let ok = t > Int::one()
            && col.iter().enumerate().all(|(i, v)| i == r + c || v.is_zero())
            && torsion.last().is_none_or(|prev| (&t % prev).is_zero());
        if !ok {
            return None;
        }
        torsion.push(t);
    }
    Some(torsion)
}

fn normal_form(rels: &IntMatrix) -> NormalForm {
    let g = rels.rows();
    if let Some(torsion) = canonical_torsion(rels) {
        return NormalForm {
            free_rank: g - torsion.len(),
            torsion,
            to_normal: IntMatrix::identity(g),
            from_normal: IntMatrix::identity(g),
        };
    }
    let s = smith_normal_form(rels);
    let diag = s.diagonal();
    let mut free = Vec::new();
    let mut tors = Vec::new();
    for i in 0..g {
        let d = diag.get(i).cloned().unwrap_or_else(Int::zero);
        if d.is_zero() {
            free.push(i);
        } else if !d.abs().is_one() {
            tors.push((i, d));
        }
    }
    let order: Vec<usize> = free.iter().copied().chain(tors.iter().map(|(i, _)| *i)).collect();
    NormalForm {
        free_rank: free.len(),
        torsion: tors.into_iter().map(|(_, d)| d).collect(),
        to_normal: s.u.select_rows(&order),
        from_normal: s.u_inv.select_columns(&order),
    }
}

impl PartialEq for FgAbGroup {
    /// Equality of presentations (same generators and relation span).
    fn eq(&self, other: &Self) -> bool {
        self.gens == other.gens
            && Lattice::span(self.gens, &self.rels).contains_all(&other.rels)
            && Lattice::span(other.gens, &other.rels).contains_all(&self.rels)
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.nf.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for t in &self.nf.torsion {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl fmt::Debug for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FgAbGroup({self}; {} gens)", self.gens)
    }
}

/// Error for a matrix that does not send relations into relations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NotAHomomorphism {
    /// Index of the first source relation whose image is nonzero in the target.
    pub relation: usize,
}

impl fmt::Display for NotAHomomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "matrix does not respect source relation {}", self.relation + 1)
    }
}

impl std::error::Error for NotAHomomorphism {}

/// A homomorphism given by an integer matrix on generators (`tgt.gens × src.gens`).
#[derive(Clone, Debug)]
pub struct GroupMap {
    src: FgAbGroup,
    tgt: FgAbGroup,
    matrix: IntMatrix,
}

impl GroupMap {
    pub fn new(src: FgAbGroup, tgt: FgAbGroup, matrix: IntMatrix) -> Result<GroupMap, NotAHomomorphism> {
        assert_eq!(matrix.shape(), (tgt.gens, src.gens), "map matrix has wrong shape");
        let img = matrix.mul(&src.rels);
        for c in 0..img.cols() {
            if !tgt.is_zero_element(&img.column(c)) {
                return Err(NotAHomomorphism { relation: c });
            }
        }
        Ok(GroupMap { src, tgt, matrix })
    }

    /// Builds a map without checking relations. Debug builds still check.
    pub fn new_unchecked(src: FgAbGroup, tgt: FgAbGroup, matrix: IntMatrix) -> GroupMap {
        assert_eq!(matrix.shape(), (tgt.gens, src.gens), "map matrix has wrong shape");
        debug_assert!(
            tgt.columns_vanish(&matrix.mul(&src.rels)),
            "matrix does not respect relations"
        );
        GroupMap { src, tgt, matrix }
    }

    pub fn source(&self) -> &FgAbGroup {
        &self.src
    }

    pub fn target(&self) -> &FgAbGroup {
        &self.tgt
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &[Int]) -> Vec<Int> {
        self.matrix.mul_vec(x)
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &GroupMap) -> GroupMap {
        assert_eq!(self.tgt.gens, other.src.gens, "maps are not composable");
        GroupMap { src: self.src.clone(), tgt: other.tgt.clone(), matrix: other.matrix.mul(&self.matrix) }
    }

    pub fn add(&self, other: &GroupMap) -> GroupMap {
        GroupMap { src: self.src.clone(), tgt: self.tgt.clone(), matrix: self.matrix.add(&other.matrix) }
    }

    pub fn neg(&self) -> GroupMap {
        GroupMap { src: self.src.clone(), tgt: self.tgt.clone(), matrix: self.matrix.neg() }
    }

    pub fn is_zero(&self) -> bool {
        self.tgt.columns_vanish(&self.matrix)
    }

    /// Equality as homomorphisms (matrices may differ by relations).
    pub fn equals(&self, other: &GroupMap) -> bool {
        self.tgt.columns_vanish(&self.matrix.sub(&other.matrix))
    }

    /// Lattice of `x ∈ ℤ^{src.gens}` with `f(x) = 0` in the target.
    pub fn kernel_lattice(&self) -> Lattice {
        let g = self.src.gens;
        let stacked = self.matrix.hstack(&self.tgt.rels.neg());
        let k = integer_kernel(&stacked);
        Lattice::span(g, &k.row_range(0, g))
    }

    /// Kernel as a subquotient of the source.
    pub fn kernel(&self) -> Subquotient {
        Subquotient::new(self.kernel_lattice(), &self.src.rels)
    }

    /// Cokernel group, with the projection from the target.
    pub fn cokernel(&self) -> (FgAbGroup, GroupMap) {
        let c = FgAbGroup::presented(self.tgt.rels.hstack(&self.matrix));
        let p = GroupMap { src: self.tgt.clone(), tgt: c.clone(), matrix: IntMatrix::identity(self.tgt.gens) };
        (c, p)
    }

    /// Image group, presented on source generators, with its inclusion into the target.
    pub fn image(&self) -> (FgAbGroup, GroupMap) {
        let k = self.kernel_lattice();
        let im = FgAbGroup::presented(k.basis().clone());
        let inc = GroupMap { src: im.clone(), tgt: self.tgt.clone(), matrix: self.matrix.clone() };
        (im, inc)
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().group().is_zero()
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel().0.is_zero()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_surjective() && self.is_injective()
    }

    /// Matrix in normal coordinates of source and target. Torsion rows are reduced.
    pub fn normal_matrix(&self) -> IntMatrix {
        let cols: Vec<Vec<Int>> = (0..self.src.normal_len())
            .map(|j| self.tgt.normal_coords(&self.matrix.mul_vec(&self.src.nf.from_normal.column(j))))
            .collect();
        IntMatrix::from_columns(self.tgt.normal_len(), &cols)
    }

    /// A preimage of `y` on generators, if one exists.
    pub fn preimage(&self, y: &[Int]) -> Option<Vec<Int>> {
        let stacked = self.matrix.hstack(&self.tgt.rels);
        crate::echelon::solve_integer(&stacked, y).map(|mut x| {
            x.truncate(self.src.gens);
            x
        })
    }

    /// Direct sum of maps.
    pub fn direct_sum(maps: &[GroupMap]) -> GroupMap {
        let src = FgAbGroup::direct_sum(&maps.iter().map(|m| m.src.clone()).collect::<Vec<_>>());
        let tgt = FgAbGroup::direct_sum(&maps.iter().map(|m| m.tgt.clone()).collect::<Vec<_>>());
        let blocks: Vec<&IntMatrix> = maps.iter().map(|m| &m.matrix).collect();
        GroupMap { src, tgt, matrix: IntMatrix::block_diagonal(&blocks) }
    }
}

/// `Z / B` for lattices `B ⊆ Z ⊆ ℤ^n`, presented on a basis of `Z`.
#[derive(Clone, Debug)]
pub struct Subquotient {
    cycles: Lattice,
    group: FgAbGroup,
}

impl Subquotient {
    /// `lattice / span(rels)`; every column of `rels` must lie in `lattice`.
    pub fn new(lattice: Lattice, rels: &IntMatrix) -> Subquotient {
        let coords = lattice.coords_matrix(rels);
        let group = FgAbGroup::presented(coords);
        Subquotient { cycles: lattice, group }
    }

    pub fn group(&self) -> &FgAbGroup {
        &self.group
    }

    pub fn lattice(&self) -> &Lattice {
        &self.cycles
    }

    /// Basis of the numerator lattice, as columns of ambient vectors.
    pub fn representatives(&self) -> &IntMatrix {
        self.cycles.basis()
    }

    /// Class of an ambient vector, on the group's generators.
    pub fn class_of(&self, v: &[Int]) -> Option<Vec<Int>> {
        self.cycles.coords(v)
    }

    /// Inclusion into the ambient group presented by `ambient`.
    pub fn inclusion(&self, ambient: &FgAbGroup) -> GroupMap {
        GroupMap::new_unchecked(self.group.clone(), ambient.clone(), self.cycles.basis().clone())
    }

    /// Map into `tgt` sending each numerator basis vector `z` to `class(f z)`.
    pub fn induced(&self, matrix: &IntMatrix, tgt: &Subquotient) -> GroupMap {
        let cols: Vec<Vec<Int>> = (0..self.cycles.rank())
            .map(|j| {
                tgt.class_of(&matrix.mul_vec(&self.cycles.basis().column(j)))
                    .expect("image is not in the target subquotient")
            })
            .collect();
        let m = IntMatrix::from_columns(tgt.group.num_gens(), &cols);
        GroupMap::new_unchecked(self.group.clone(), tgt.group.clone(), m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::int;

    #[test]
    fn normalize_examples() {
        assert_eq!(FgAbGroup::free(2).to_string(), "Z^2");
        assert_eq!(FgAbGroup::cyclic(2).to_string(), "Z/2");
        let g = FgAbGroup::presented(IntMatrix::from_rows(&[vec![2, 0], vec![0, 0]]));
        assert_eq!(g.to_string(), "Z + Z/2");
        assert_eq!(FgAbGroup::zero().to_string(), "0");
        assert_eq!(FgAbGroup::cyclic(1).to_string(), "0");
        assert_eq!(FgAbGroup::cyclic(-3).to_string(), "Z/3");
    }

    #[test]
    fn canonical_presentations_are_kept() {
        let g = FgAbGroup::from_invariants(2, &[int(2), int(4)]);
        assert_eq!(g.normal_generators(), &IntMatrix::identity(4));
        assert_eq!(g.normalized().1.matrix(), &IntMatrix::identity(4));
        assert_eq!(g.normal_coords(&[int(3), int(-1), int(5), int(6)]), vec![int(3), int(-1), int(1), int(2)]);
        let h = FgAbGroup::from_invariants(1, &[int(2), int(3)]);
        assert_eq!(h.to_string(), "Z + Z/6");
    }

    #[test]
    fn chinese_remainder() {
        let g = FgAbGroup::presented(IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(g.torsion(), &[int(6)]);
        assert_eq!(g.order(), Some(int(6)));
        assert_eq!(g.element_order(&[int(1), int(0)]), Some(int(2)));
        assert_eq!(g.element_order(&[int(1), int(1)]), Some(int(6)));
    }

    #[test]
    fn map_validation() {
        let z2 = FgAbGroup::cyclic(2);
        let z4 = FgAbGroup::cyclic(4);
        assert!(GroupMap::new(z2.clone(), z4.clone(), IntMatrix::from_rows(&[vec![2]])).is_ok());
        assert_eq!(
            GroupMap::new(z2, z4, IntMatrix::from_rows(&[vec![1]])).unwrap_err(),
            NotAHomomorphism { relation: 0 }
        );
    }

    #[test]
    fn kernel_cokernel_image() {
        // ·2 on ℤ/4.
        let z4 = FgAbGroup::cyclic(4);
        let f = GroupMap::new(z4.clone(), z4.clone(), IntMatrix::from_rows(&[vec![2]])).unwrap();
        assert_eq!(f.kernel().group().to_string(), "Z/2");
        assert_eq!(f.cokernel().0.to_string(), "Z/2");
        assert_eq!(f.image().0.to_string(), "Z/2");
        assert!(!f.is_injective());
        let z = FgAbGroup::free(1);
        let g = GroupMap::new(z.clone(), z, IntMatrix::from_rows(&[vec![-1]])).unwrap();
        assert!(g.is_isomorphism());
    }

    #[test]
    fn enumeration_and_preimage() {
        let g = FgAbGroup::from_invariants(0, &[int(2), int(4)]);
        assert_eq!(g.enumerate().len(), 8);
        let z = FgAbGroup::free(1);
        let f = GroupMap::new(z, FgAbGroup::cyclic(6), IntMatrix::from_rows(&[vec![2]])).unwrap();
        assert!(f.preimage(&[int(4)]).is_some());
        assert!(f.preimage(&[int(3)]).is_none());
    }
}
