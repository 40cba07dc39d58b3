//! Bounded chain complexes of presented groups, chain maps, and their homology.

use crate::echelon::{solve_integer, Lattice};
use crate::group::{FgAbGroup, GroupMap, Subquotient};
use num_traits::One;

use crate::matrix::{Int, IntMatrix};
use crate::snf::invariant_factors;

/// `C_n` for `n` in `min_degree ..= min_degree + groups.len() - 1`, zero elsewhere.
/// `boundaries[i]` is `∂: C_{min+i+1} → C_{min+i}`.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    min_degree: i64,
    groups: Vec<FgAbGroup>,
    boundaries: Vec<IntMatrix>,
}

/// Why a candidate complex or chain map was rejected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ComplexError {
    Shape { degree: i64 },
    NotAHomomorphism { degree: i64 },
    SquareNonzero { degree: i64 },
    NotAChainMap { degree: i64 },
}

impl std::fmt::Display for ComplexError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ComplexError::Shape { degree } => write!(f, "boundary out of degree {degree} has the wrong shape"),
            ComplexError::NotAHomomorphism { degree } => {
                write!(f, "boundary out of degree {degree} does not respect relations")
            }
            ComplexError::SquareNonzero { degree } => write!(f, "boundary squared is nonzero at degree {degree}"),
            ComplexError::NotAChainMap { degree } => write!(f, "map does not commute with boundaries at degree {degree}"),
        }
    }
}

impl std::error::Error for ComplexError {}

impl ChainComplex {
    pub fn new(min_degree: i64, groups: Vec<FgAbGroup>, boundaries: Vec<IntMatrix>) -> Result<Self, ComplexError> {
        let c = ChainComplex { min_degree, groups, boundaries };
        c.validate()?;
        Ok(c)
    }

    /// Builds a complex without validation in release builds.
    pub fn new_unchecked(min_degree: i64, groups: Vec<FgAbGroup>, boundaries: Vec<IntMatrix>) -> Self {
        let c = ChainComplex { min_degree, groups, boundaries };
        debug_assert_eq!(c.validate(), Ok(()));
        c
    }

    /// A complex of free groups of the given ranks.
    pub fn free(min_degree: i64, ranks: &[usize], boundaries: Vec<IntMatrix>) -> Result<Self, ComplexError> {
        ChainComplex::new(min_degree, ranks.iter().map(|&r| FgAbGroup::free(r)).collect(), boundaries)
    }

    pub fn zero() -> Self {
        ChainComplex { min_degree: 0, groups: Vec::new(), boundaries: Vec::new() }
    }

    fn validate(&self) -> Result<(), ComplexError> {
        let expected = self.groups.len().saturating_sub(1);
        if self.boundaries.len() != expected {
            return Err(ComplexError::Shape { degree: self.min_degree });
        }
        for (i, b) in self.boundaries.iter().enumerate() {
            let degree = self.min_degree + i as i64 + 1;
            let (src, tgt) = (&self.groups[i + 1], &self.groups[i]);
            if b.shape() != (tgt.num_gens(), src.num_gens()) {
                return Err(ComplexError::Shape { degree });
            }
            if !tgt.columns_vanish(&b.mul(src.relations())) {
                return Err(ComplexError::NotAHomomorphism { degree });
            }
            if i > 0 && !self.groups[i - 1].columns_vanish(&self.boundaries[i - 1].mul(b)) {
                return Err(ComplexError::SquareNonzero { degree });
            }
        }
        Ok(())
    }

    pub fn min_degree(&self) -> i64 {
        self.min_degree
    }

    /// Largest degree in the window (`min_degree - 1` if empty).
    pub fn max_degree(&self) -> i64 {
        self.min_degree + self.groups.len() as i64 - 1
    }

    fn index(&self, n: i64) -> Option<usize> {
        if n < self.min_degree || n > self.max_degree() {
            None
        } else {
            Some((n - self.min_degree) as usize)
        }
    }

    pub fn group(&self, n: i64) -> FgAbGroup {
        self.index(n).map_or_else(FgAbGroup::zero, |i| self.groups[i].clone())
    }

    pub fn rank(&self, n: i64) -> usize {
        self.index(n).map_or(0, |i| self.groups[i].num_gens())
    }

    /// `∂_n: C_n → C_{n−1}` as a matrix (`gens(C_{n−1}) × gens(C_n)`).
    pub fn boundary(&self, n: i64) -> IntMatrix {
        match (self.index(n), self.index(n - 1)) {
            (Some(i), Some(_)) => self.boundaries[i - 1].clone(),
            _ => IntMatrix::zeros(self.rank(n - 1), self.rank(n)),
        }
    }

    pub fn boundary_map(&self, n: i64) -> GroupMap {
        GroupMap::new_unchecked(self.group(n), self.group(n - 1), self.boundary(n))
    }

    /// `H_n = ker ∂_n / im ∂_{n+1}`, with cycle representatives.
    pub fn homology(&self, n: i64) -> Subquotient {
        let cn = self.group(n);
        let cycles = self.boundary_map(n).kernel_lattice();
        let b = self.boundary(n + 1).hstack(cn.relations());
        Subquotient::new(cycles, &b)
    }

    pub fn homology_group(&self, n: i64) -> FgAbGroup {
        let free = |k: i64| self.group(k).relations().is_zero();
        if !(free(n) && free(n - 1)) {
            return self.homology(n).group().clone();
        }
        // Free chain groups: only invariant factors are needed.
        let rank_out = invariant_factors(&self.boundary(n)).len();
        let incoming = invariant_factors(&self.boundary(n + 1));
        let torsion: Vec<Int> = incoming.iter().filter(|d| !d.is_one()).cloned().collect();
        FgAbGroup::from_invariants(self.rank(n) - rank_out - incoming.len(), &torsion)
    }

    /// Homology groups over the whole window.
    pub fn all_homology(&self) -> Vec<(i64, FgAbGroup)> {
        (self.min_degree..=self.max_degree()).map(|n| (n, self.homology_group(n))).collect()
    }

    pub fn is_acyclic(&self) -> bool {
        (self.min_degree..=self.max_degree()).all(|n| self.homology_group(n).is_zero())
    }

    /// `C[k]_n = C_{n−k}`, with the boundary negated when `k` is odd.
    pub fn shift(&self, k: i64) -> ChainComplex {
        let sign = if k.rem_euclid(2) == 1 { -1 } else { 1 };
        ChainComplex {
            min_degree: self.min_degree + k,
            groups: self.groups.clone(),
            boundaries: self.boundaries.iter().map(|b| b.scale(&Int::from(sign))).collect(),
        }
    }

    /// Degreewise direct sum.
    pub fn direct_sum(parts: &[ChainComplex]) -> ChainComplex {
        let live: Vec<&ChainComplex> = parts.iter().filter(|p| !p.groups.is_empty()).collect();
        if live.is_empty() {
            return ChainComplex::zero();
        }
        let lo = live.iter().map(|p| p.min_degree).min().unwrap();
        let hi = live.iter().map(|p| p.max_degree()).max().unwrap();
        let groups = (lo..=hi)
            .map(|n| FgAbGroup::direct_sum(&live.iter().map(|p| p.group(n)).collect::<Vec<_>>()))
            .collect();
        let boundaries = (lo + 1..=hi)
            .map(|n| {
                let bs: Vec<IntMatrix> = live.iter().map(|p| p.boundary(n)).collect();
                IntMatrix::block_diagonal(&bs.iter().collect::<Vec<_>>())
            })
            .collect();
        ChainComplex { min_degree: lo, groups, boundaries }
    }

    /// Alternating sum of free ranks of the homology.
    pub fn euler_characteristic(&self) -> i64 {
        (self.min_degree..=self.max_degree())
            .map(|n| {
                let r = self.homology_group(n).free_rank() as i64;
                if n.rem_euclid(2) == 0 { r } else { -r }
            })
            .sum()
    }

    /// The same complex restricted to degrees `lo..=hi` (a brutal truncation).
    pub fn truncate(&self, lo: i64, hi: i64) -> ChainComplex {
        if hi < lo {
            return ChainComplex::zero();
        }
        let groups = (lo..=hi).map(|n| self.group(n)).collect();
        let boundaries = (lo + 1..=hi).map(|n| self.boundary(n)).collect();
        ChainComplex { min_degree: lo, groups, boundaries }
    }
}

/// Degree-preserving chain map; `matrices[i]` acts in degree `min_degree + i`,
/// and is zero outside that window.
#[derive(Clone, Debug)]
pub struct ChainMap {
    src: ChainComplex,
    tgt: ChainComplex,
    min_degree: i64,
    matrices: Vec<IntMatrix>,
}

impl ChainMap {
    pub fn new(src: ChainComplex, tgt: ChainComplex, min_degree: i64, matrices: Vec<IntMatrix>) -> Result<Self, ComplexError> {
        let f = ChainMap { src, tgt, min_degree, matrices };
        f.validate()?;
        Ok(f)
    }

    pub fn new_unchecked(src: ChainComplex, tgt: ChainComplex, min_degree: i64, matrices: Vec<IntMatrix>) -> Self {
        let f = ChainMap { src, tgt, min_degree, matrices };
        debug_assert_eq!(f.validate(), Ok(()));
        f
    }

    pub fn identity(c: &ChainComplex) -> ChainMap {
        let matrices = (c.min_degree..=c.max_degree()).map(|n| IntMatrix::identity(c.rank(n))).collect();
        ChainMap { src: c.clone(), tgt: c.clone(), min_degree: c.min_degree, matrices }
    }

    fn validate(&self) -> Result<(), ComplexError> {
        let lo = self.src.min_degree.min(self.tgt.min_degree).min(self.min_degree);
        let hi = self.src.max_degree().max(self.tgt.max_degree()).max(self.min_degree + self.matrices.len() as i64);
        for n in lo..=hi + 1 {
            let f = self.matrix(n);
            let (s, t) = (self.src.group(n), self.tgt.group(n));
            if f.shape() != (t.num_gens(), s.num_gens()) {
                return Err(ComplexError::Shape { degree: n });
            }
            if !t.columns_vanish(&f.mul(s.relations())) {
                return Err(ComplexError::NotAHomomorphism { degree: n });
            }
            let lhs = self.tgt.boundary(n).mul(&f);
            let rhs = self.matrix(n - 1).mul(&self.src.boundary(n));
            if !self.tgt.group(n - 1).columns_vanish(&lhs.sub(&rhs)) {
                return Err(ComplexError::NotAChainMap { degree: n });
            }
        }
        Ok(())
    }

    pub fn source(&self) -> &ChainComplex {
        &self.src
    }

    pub fn target(&self) -> &ChainComplex {
        &self.tgt
    }

    pub fn matrix(&self, n: i64) -> IntMatrix {
        let i = n - self.min_degree;
        if i >= 0 && (i as usize) < self.matrices.len() {
            self.matrices[i as usize].clone()
        } else {
            IntMatrix::zeros(self.tgt.rank(n), self.src.rank(n))
        }
    }

    /// Induced map `H_n(src) → H_n(tgt)`.
    pub fn induced(&self, n: i64) -> GroupMap {
        self.src.homology(n).induced(&self.matrix(n), &self.tgt.homology(n))
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &ChainMap) -> ChainMap {
        let lo = self.src.min_degree;
        let matrices = (lo..=self.src.max_degree()).map(|n| other.matrix(n).mul(&self.matrix(n))).collect();
        ChainMap { src: self.src.clone(), tgt: other.tgt.clone(), min_degree: lo, matrices }
    }

    /// Mapping cone: `Cone_n = A_{n−1} ⊕ B_n`, `d(a, b) = (−∂a, f a + ∂b)`.
    pub fn cone(&self) -> ChainComplex {
        let (a, b) = (&self.src, &self.tgt);
        let lo = (a.min_degree + 1).min(b.min_degree);
        let hi = (a.max_degree() + 1).max(b.max_degree());
        if hi < lo {
            return ChainComplex::zero();
        }
        let groups = (lo..=hi).map(|n| FgAbGroup::direct_sum(&[a.group(n - 1), b.group(n)])).collect();
        let boundaries = (lo + 1..=hi)
            .map(|n| {
                let (a1, b1, a2, b2) = (a.rank(n - 1), b.rank(n), a.rank(n - 2), b.rank(n - 1));
                let mut m = IntMatrix::zeros(a2 + b2, a1 + b1);
                m.set_block(0, 0, &a.boundary(n - 1).neg());
                m.set_block(a2, 0, &self.matrix(n - 1));
                m.set_block(a2, a1, &b.boundary(n));
                m
            })
            .collect();
        ChainComplex { min_degree: lo, groups, boundaries }
    }

    /// Whether every induced map on homology is an isomorphism.
    pub fn is_quasi_isomorphism(&self) -> bool {
        self.cone().is_acyclic()
    }
}

/// Error from [`connecting_map`] when the input sequence is not short exact in a degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NotExact {
    pub degree: i64,
}

impl std::fmt::Display for NotExact {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "sequence is not short exact in degree {}", self.degree)
    }
}

impl std::error::Error for NotExact {}

/// Connecting map `H_n(C) → H_{n−1}(A)` of a short exact sequence `0 → A → B → C → 0`
/// given by chain maps `i: A → B` and `p: B → C`.
pub fn connecting_map(i: &ChainMap, p: &ChainMap, n: i64) -> Result<GroupMap, NotExact> {
    let (a, b, c) = (i.source(), i.target(), p.target());
    let hc = c.homology(n);
    let ha = a.homology(n - 1);
    let lift_src = p.matrix(n).hstack(c.group(n).relations());
    let incl = i.matrix(n - 1).hstack(b.group(n - 1).relations());
    let reps = hc.representatives();
    let mut cols = Vec::with_capacity(reps.cols());
    for j in 0..reps.cols() {
        let z = reps.column(j);
        let mut lift = solve_integer(&lift_src, &z).ok_or(NotExact { degree: n })?;
        lift.truncate(b.rank(n));
        let db = b.boundary(n).mul_vec(&lift);
        let mut pre = solve_integer(&incl, &db).ok_or(NotExact { degree: n - 1 })?;
        pre.truncate(a.rank(n - 1));
        cols.push(ha.class_of(&pre).ok_or(NotExact { degree: n - 1 })?);
    }
    let m = IntMatrix::from_columns(ha.group().num_gens(), &cols);
    Ok(GroupMap::new_unchecked(hc.group().clone(), ha.group().clone(), m))
}

/// Exactness of `A --f--> B --g--> C` at `B` (all maps on presented groups).
pub fn is_exact_at(f: &GroupMap, g: &GroupMap) -> bool {
    if !f.then(g).is_zero() {
        return false;
    }
    let b = g.source();
    let image = Lattice::span(b.num_gens(), &f.matrix().hstack(b.relations()));
    let kernel = g.kernel_lattice();
    image.contains_all(kernel.basis())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiplication_by_two() {
        let c = ChainComplex::free(0, &[1, 1], vec![IntMatrix::from_rows(&[vec![2]])]).unwrap();
        assert_eq!(c.homology_group(0).to_string(), "Z/2");
        assert!(c.homology_group(1).is_zero());
    }

    #[test]
    fn square_graph() {
        // Vertices 0..4, edges (0,1), (1,2), (2,3), (3,0); ∂e = head − tail.
        let d = IntMatrix::from_rows(&[
            vec![-1, 0, 0, 1],
            vec![1, -1, 0, 0],
            vec![0, 1, -1, 0],
            vec![0, 0, 1, -1],
        ]);
        let c = ChainComplex::free(0, &[4, 4], vec![d]).unwrap();
        assert_eq!(c.homology_group(0).to_string(), "Z");
        assert_eq!(c.homology_group(1).to_string(), "Z");
        assert_eq!(c.euler_characteristic(), 0);
    }

    #[test]
    fn zero_complex() {
        let c = ChainComplex::zero();
        assert!(c.homology_group(0).is_zero());
        assert!(c.homology_group(-3).is_zero());
    }

    #[test]
    fn rejects_nonzero_square() {
        let one = IntMatrix::from_rows(&[vec![1]]);
        let err = ChainComplex::free(0, &[1, 1, 1], vec![one.clone(), one]).unwrap_err();
        assert_eq!(err, ComplexError::SquareNonzero { degree: 2 });
    }

    #[test]
    fn presented_terms() {
        // ℤ/4 --·2--> ℤ/4: H_1 = ℤ/2, H_0 = ℤ/2.
        let z4 = FgAbGroup::cyclic(4);
        let c = ChainComplex::new(0, vec![z4.clone(), z4], vec![IntMatrix::from_rows(&[vec![2]])]).unwrap();
        assert_eq!(c.homology_group(1).to_string(), "Z/2");
        assert_eq!(c.homology_group(0).to_string(), "Z/2");
    }

    #[test]
    fn bockstein_connecting_map() {
        // 0 → ℤ[0] → (ℤ --2--> ℤ) → ℤ[1] → 0 has connecting map ·2.
        let a = ChainComplex::free(0, &[1], vec![]).unwrap();
        let b = ChainComplex::free(0, &[1, 1], vec![IntMatrix::from_rows(&[vec![2]])]).unwrap();
        let c = ChainComplex::free(1, &[1], vec![]).unwrap();
        let i = ChainMap::new(a.clone(), b.clone(), 0, vec![IntMatrix::from_rows(&[vec![1]])]).unwrap();
        let p = ChainMap::new(b, c, 1, vec![IntMatrix::from_rows(&[vec![1]])]).unwrap();
        let delta = connecting_map(&i, &p, 1).unwrap();
        assert_eq!(delta.source().to_string(), "Z");
        assert_eq!(delta.target().to_string(), "Z");
        assert_eq!(delta.normal_matrix().column(0)[0].magnitude().to_string(), "2");
    }

    #[test]
    fn cone_of_identity_is_acyclic() {
        let c = ChainComplex::free(0, &[2, 1], vec![IntMatrix::from_rows(&[vec![3], vec![1]])]).unwrap();
        assert!(ChainMap::identity(&c).is_quasi_isomorphism());
    }
}
