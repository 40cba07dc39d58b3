//! Sheaves on a finite space as functor data, morphisms, and bounded complexes.
//!
//! A sheaf assigns a stalk `F_x = F(U_x)` to every element and a restriction
//! `ρ_{x→y}: F_x → F_y` to every `x ≤ y` (restriction along `U_y ⊆ U_x`). Only maps
//! on Hasse covers are stored; composites are cached at construction, which is
//! also where path independence is checked.

use zlinalg::{ChainComplex, ChainMap, FgAbGroup, GroupMap, IntMatrix, Subquotient};

use crate::error::Error;
use crate::poset::{ElementSet, FinitePoset, MonotoneMap};

/// `A ⊗ B` on generator pairs `(i, k) ↦ i · gens(B) + k`.
pub fn tensor_groups(a: &FgAbGroup, b: &FgAbGroup) -> FgAbGroup {
    let (ga, gb) = (a.num_gens(), b.num_gens());
    let r1 = a.relations().kron(&IntMatrix::identity(gb));
    let r2 = IntMatrix::identity(ga).kron(b.relations());
    FgAbGroup::presented(r1.hstack(&r2))
}

#[derive(Clone, Debug)]
pub struct Sheaf {
    base: FinitePoset,
    stalks: Vec<FgAbGroup>,
    edges: Vec<IntMatrix>,
    rho: Vec<Vec<Option<IntMatrix>>>,
}

impl Sheaf {
    /// Builds a sheaf from stalks and one matrix per cover (aligned with `base.covers()`).
    pub fn new(base: FinitePoset, stalks: Vec<FgAbGroup>, edges: Vec<IntMatrix>) -> Result<Sheaf, Error> {
        if stalks.len() != base.len() || edges.len() != base.covers().len() {
            return Err(Error::Shape("stalk or edge table does not match the space".into()));
        }
        for (k, &(x, y)) in base.covers().iter().enumerate() {
            let m = &edges[k];
            if m.shape() != (stalks[y].num_gens(), stalks[x].num_gens()) {
                return Err(Error::Shape(format!(
                    "map {}->{} is {}x{}, expected {}x{}",
                    base.name(x),
                    base.name(y),
                    m.rows(),
                    m.cols(),
                    stalks[y].num_gens(),
                    stalks[x].num_gens()
                )));
            }
            if let Err(e) = GroupMap::new(stalks[x].clone(), stalks[y].clone(), m.clone()) {
                return Err(Error::NotAHomomorphism(format!(
                    "map {}->{} does not respect relation {} of the source stalk",
                    base.name(x),
                    base.name(y),
                    e.relation + 1
                )));
            }
        }
        let rho = compose_paths(&base, &stalks, &edges)?;
        Ok(Sheaf { base, stalks, edges, rho })
    }

    /// Builds a sheaf from stalks and a function giving the matrix on each cover.
    pub fn from_fn(
        base: FinitePoset,
        stalks: Vec<FgAbGroup>,
        mut f: impl FnMut(usize, usize) -> IntMatrix,
    ) -> Result<Sheaf, Error> {
        let edges = base.covers().iter().map(|&(x, y)| f(x, y)).collect();
        Sheaf::new(base, stalks, edges)
    }

    pub fn constant(base: &FinitePoset, g: &FgAbGroup) -> Sheaf {
        let n = g.num_gens();
        Sheaf::from_fn(base.clone(), vec![g.clone(); base.len()], |_, _| IntMatrix::identity(n)).unwrap()
    }

    pub fn constant_z(base: &FinitePoset) -> Sheaf {
        Sheaf::constant(base, &FgAbGroup::free(1))
    }

    pub fn zero(base: &FinitePoset) -> Sheaf {
        Sheaf::constant(base, &FgAbGroup::zero())
    }

    /// `G_U`: the constant sheaf `G` on an open `U`, extended by zero.
    pub fn constant_on_open(base: &FinitePoset, u: &[usize], g: &FgAbGroup) -> Result<Sheaf, Error> {
        base.require_open(u)?;
        Ok(Sheaf::constant(base, g).keep_stalks(u))
    }

    /// `ℤ_{U_x}`.
    pub fn z_minimal_open(base: &FinitePoset, x: usize) -> Sheaf {
        Sheaf::constant_z(base).keep_stalks(&base.minimal_open(x))
    }

    /// The skyscraper `i_{x*}G`: stalk `G` on `{y ≤ x}`, zero elsewhere.
    pub fn skyscraper(base: &FinitePoset, x: usize, g: &FgAbGroup) -> Sheaf {
        Sheaf::constant(base, g).keep_stalks(&base.point_closure(x))
    }

    /// Replaces stalks outside `s` by zero. For `s` open or closed this is a sheaf.
    fn keep_stalks(&self, s: &[usize]) -> Sheaf {
        let p = &self.base;
        let stalks: Vec<FgAbGroup> = (0..p.len())
            .map(|x| if s.contains(&x) { self.stalks[x].clone() } else { FgAbGroup::zero() })
            .collect();
        let edges = p
            .covers()
            .iter()
            .enumerate()
            .map(|(k, &(x, y))| {
                if s.contains(&x) && s.contains(&y) {
                    self.edges[k].clone()
                } else {
                    IntMatrix::zeros(stalks[y].num_gens(), stalks[x].num_gens())
                }
            })
            .collect();
        Sheaf::new(p.clone(), stalks, edges).expect("open or closed support")
    }

    /// `F_U = j_! j^{-1} F` for an open `U`.
    pub fn extension_by_zero_of_restriction(&self, u: &[usize]) -> Result<Sheaf, Error> {
        self.base.require_open(u)?;
        Ok(self.keep_stalks(u))
    }

    /// `j_! G` for a sheaf `G` on the open subposet `U` (whose elements are `u`, in order).
    pub fn extension_by_zero(base: &FinitePoset, u: &[usize], g: &Sheaf) -> Result<Sheaf, Error> {
        base.require_open(u)?;
        if g.base.len() != u.len() {
            return Err(Error::BaseMismatch);
        }
        let pos = |x: usize| u.iter().position(|&y| y == x);
        let stalks: Vec<FgAbGroup> =
            (0..base.len()).map(|x| pos(x).map_or_else(FgAbGroup::zero, |i| g.stalks[i].clone())).collect();
        Sheaf::from_fn(base.clone(), stalks.clone(), |x, y| match (pos(x), pos(y)) {
            (Some(i), Some(j)) => g.rho(i, j).clone(),
            _ => IntMatrix::zeros(stalks[y].num_gens(), stalks[x].num_gens()),
        })
    }

    /// `F_Y = i_* i^{-1} F` for a closed `Y`. Since `U_x ∩ Y` is empty for `x ∉ Y`
    /// and has minimum `x` otherwise, the stalks are `F_x` on `Y` and zero outside.
    pub fn closed_restriction(&self, y: &[usize]) -> Result<Sheaf, Error> {
        self.base.require_closed(y)?;
        Ok(self.keep_stalks(y))
    }

    /// `F|_S` on the induced subposet of `s`.
    pub fn restrict(&self, s: &[usize]) -> Sheaf {
        let (_, incl) = self.base.subposet(s);
        self.inverse_image(&incl).expect("inclusion has matching target")
    }

    /// `f^{-1}F`: stalks `F_{f(x)}`, restrictions `ρ_{f(x)→f(y)}`.
    pub fn inverse_image(&self, f: &MonotoneMap) -> Result<Sheaf, Error> {
        if f.target() != &self.base {
            return Err(Error::BaseMismatch);
        }
        let src = f.source().clone();
        let stalks = (0..src.len()).map(|x| self.stalks[f.apply(x)].clone()).collect();
        Sheaf::from_fn(src, stalks, |x, y| self.rho(f.apply(x), f.apply(y)).clone())
    }

    /// Stalkwise tensor product.
    pub fn tensor(&self, other: &Sheaf) -> Result<Sheaf, Error> {
        if self.base != other.base {
            return Err(Error::BaseMismatch);
        }
        let stalks = (0..self.base.len()).map(|x| tensor_groups(&self.stalks[x], &other.stalks[x])).collect();
        let edges = (0..self.base.covers().len()).map(|k| self.edges[k].kron(&other.edges[k])).collect();
        Sheaf::new(self.base.clone(), stalks, edges)
    }

    /// `F ⊗ G` for a constant group `G`.
    pub fn tensor_group(&self, g: &FgAbGroup) -> Sheaf {
        self.tensor(&Sheaf::constant(&self.base, g)).expect("same base")
    }

    /// Stalkwise direct sum.
    pub fn direct_sum(&self, other: &Sheaf) -> Result<Sheaf, Error> {
        if self.base != other.base {
            return Err(Error::BaseMismatch);
        }
        let stalks = (0..self.base.len())
            .map(|x| FgAbGroup::direct_sum(&[self.stalks[x].clone(), other.stalks[x].clone()]))
            .collect();
        let edges = (0..self.base.covers().len())
            .map(|k| IntMatrix::block_diagonal(&[&self.edges[k], &other.edges[k]]))
            .collect();
        Sheaf::new(self.base.clone(), stalks, edges)
    }

    /// Stalks re-presented on their invariant-factor generators.
    pub fn normalized(&self) -> Sheaf {
        let parts: Vec<(FgAbGroup, GroupMap)> = self.stalks.iter().map(|s| s.normalized()).collect();
        let stalks: Vec<FgAbGroup> = parts.iter().map(|(g, _)| g.clone()).collect();
        let edges = self
            .base
            .covers()
            .iter()
            .enumerate()
            .map(|(k, &(x, y))| {
                let m = self.edges[k].mul(parts[x].1.matrix());
                let cols: Vec<Vec<zlinalg::Int>> =
                    (0..m.cols()).map(|c| self.stalks[y].normal_coords(&m.column(c))).collect();
                IntMatrix::from_columns(stalks[y].num_gens(), &cols)
            })
            .collect();
        Sheaf::new(self.base.clone(), stalks, edges).expect("normalization preserves the sheaf")
    }

    pub fn base(&self) -> &FinitePoset {
        &self.base
    }

    pub fn stalk(&self, x: usize) -> &FgAbGroup {
        &self.stalks[x]
    }

    pub fn stalks(&self) -> &[FgAbGroup] {
        &self.stalks
    }

    /// Matrix on the cover with index `k` in `base.covers()`.
    pub fn edge_matrix(&self, k: usize) -> &IntMatrix {
        &self.edges[k]
    }

    /// `ρ_{x→y}` for `x ≤ y`.
    pub fn rho(&self, x: usize, y: usize) -> &IntMatrix {
        self.rho[x][y].as_ref().unwrap_or_else(|| panic!("{} is not below {}", self.base.name(x), self.base.name(y)))
    }

    pub fn rho_map(&self, x: usize, y: usize) -> GroupMap {
        GroupMap::new_unchecked(self.stalks[x].clone(), self.stalks[y].clone(), self.rho(x, y).clone())
    }

    pub fn is_zero(&self) -> bool {
        self.stalks.iter().all(|s| s.is_zero())
    }

    /// Every restriction along a cover is an isomorphism.
    pub fn is_locally_constant(&self) -> bool {
        self.base.covers().iter().all(|&(x, y)| self.rho_map(x, y).is_isomorphism())
    }

    /// `Γ(S, F)`: limit of the stalks over `s` (normally an open set).
    pub fn sections(&self, s: &[usize]) -> zlinalg::Universal {
        zlinalg::limit(&self.diagram(s))
    }

    /// `Γ(U, F)` after checking that `U` is open.
    pub fn sections_over_open(&self, u: &[usize]) -> Result<FgAbGroup, Error> {
        self.base.require_open(u)?;
        Ok(self.sections(u).object)
    }

    /// Stalk diagram over `s` with arrows on the covers of the induced order.
    pub fn diagram(&self, s: &[usize]) -> zlinalg::Diagram {
        let mut d = zlinalg::Diagram::new();
        for &x in s {
            d.add_object(self.stalks[x].clone());
        }
        for (i, j) in induced_covers(&self.base, s) {
            d.add_arrow(i, j, self.rho(s[i], s[j]).clone());
        }
        d
    }

    /// `Hom_Shv(F, G)` as a group.
    pub fn hom_group(&self, other: &Sheaf) -> Result<Subquotient, Error> {
        if self.base != other.base {
            return Err(Error::BaseMismatch);
        }
        let arrows: Vec<(usize, usize, &IntMatrix, &IntMatrix)> = self
            .base
            .covers()
            .iter()
            .enumerate()
            .map(|(k, &(x, y))| (x, y, &self.edges[k], &other.edges[k]))
            .collect();
        Ok(natural_transformations(&self.stalks, &other.stalks, &arrows))
    }

    /// The subsheaf generated by elements `(x, v)` with `v ∈ F_x`, with its inclusion
    /// and the projection onto the quotient.
    pub fn generated_subsheaf(&self, elements: &[(usize, Vec<zlinalg::Int>)]) -> (SheafMorphism, SheafMorphism) {
        let p = &self.base;
        let local = |w: usize| -> Vec<usize> { (0..elements.len()).filter(|&i| p.leq(elements[i].0, w)).collect() };
        let images = |w: usize| -> IntMatrix {
            let cols: Vec<Vec<zlinalg::Int>> =
                local(w).iter().map(|&i| self.rho(elements[i].0, w).mul_vec(&elements[i].1)).collect();
            IntMatrix::from_columns(self.stalks[w].num_gens(), &cols)
        };
        let sub_stalks: Vec<FgAbGroup> = (0..p.len())
            .map(|w| {
                let m = images(w);
                let k = GroupMap::new_unchecked(FgAbGroup::free(m.cols()), self.stalks[w].clone(), m).kernel_lattice();
                FgAbGroup::presented(k.basis().clone())
            })
            .collect();
        let sub = Sheaf::from_fn(p.clone(), sub_stalks, |x, y| {
            let (lx, ly) = (local(x), local(y));
            let mut m = IntMatrix::zeros(ly.len(), lx.len());
            for (c, i) in lx.iter().enumerate() {
                m[(ly.iter().position(|j| j == i).unwrap(), c)] = 1.into();
            }
            m
        })
        .expect("generated subsheaf");
        let incl = SheafMorphism::new(sub, self.clone(), (0..p.len()).map(images).collect()).expect("inclusion");
        let quot_stalks: Vec<FgAbGroup> =
            (0..p.len()).map(|w| FgAbGroup::presented(self.stalks[w].relations().hstack(&images(w)))).collect();
        let quot = Sheaf::new(p.clone(), quot_stalks, self.edges.clone()).expect("quotient sheaf");
        let ids = self.stalks.iter().map(|s| IntMatrix::identity(s.num_gens())).collect();
        let proj = SheafMorphism::new(self.clone(), quot, ids).expect("projection");
        (incl, proj)
    }

    pub fn same_data(&self, other: &Sheaf) -> bool {
        self.base == other.base
            && (0..self.base.len()).all(|x| self.stalks[x] == other.stalks[x])
            && self.edges == other.edges
    }
}

/// Group of natural transformations between two functors on a finite category,
/// given by objectwise groups and, per arrow `i → j`, the source and target maps.
///
/// An element is the concatenation over objects of `vec(M_i)` (images of the source
/// generators, one block per generator).
pub fn natural_transformations(
    src: &[FgAbGroup],
    tgt: &[FgAbGroup],
    arrows: &[(usize, usize, &IntMatrix, &IntMatrix)],
) -> Subquotient {
    let blocks: Vec<FgAbGroup> =
        (0..src.len()).map(|i| FgAbGroup::direct_sum(&vec![tgt[i].clone(); src[i].num_gens()])).collect();
    let mut off = vec![0];
    for b in &blocks {
        off.push(off.last().unwrap() + b.num_gens());
    }
    let domain = FgAbGroup::direct_sum(&blocks);
    // One block row per constraint: a list of (column offset, matrix) terms.
    let mut parts = Vec::new();
    let mut block_rows: Vec<Vec<(usize, IntMatrix)>> = Vec::new();
    for i in 0..src.len() {
        let r = src[i].relations();
        parts.push(FgAbGroup::direct_sum(&vec![tgt[i].clone(); r.cols()]));
        block_rows.push(vec![(off[i], r.transpose().kron(&IntMatrix::identity(tgt[i].num_gens())))]);
    }
    for &(i, j, s, t) in arrows {
        parts.push(FgAbGroup::direct_sum(&vec![tgt[j].clone(); src[i].num_gens()]));
        block_rows.push(vec![
            (off[i], IntMatrix::identity(src[i].num_gens()).kron(t)),
            (off[j], s.transpose().kron(&IntMatrix::identity(tgt[j].num_gens())).neg()),
        ]);
    }
    let codomain = FgAbGroup::direct_sum(&parts);
    let mut m = IntMatrix::zeros(codomain.num_gens(), domain.num_gens());
    let mut row = 0;
    for (terms, part) in block_rows.iter().zip(&parts) {
        for (c, a) in terms {
            m.add_block(row, *c, a);
        }
        row += part.num_gens();
    }
    GroupMap::new_unchecked(domain, codomain, m).kernel()
}

/// Covers of the order induced on `s`, as index pairs into `s`.
pub fn induced_covers(p: &FinitePoset, s: &[usize]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (i, &x) in s.iter().enumerate() {
        for (j, &y) in s.iter().enumerate() {
            if p.lt(x, y) && !s.iter().any(|&z| p.lt(x, z) && p.lt(z, y)) {
                out.push((i, j));
            }
        }
    }
    out
}

fn compose_paths(
    base: &FinitePoset,
    stalks: &[FgAbGroup],
    edges: &[IntMatrix],
) -> Result<Vec<Vec<Option<IntMatrix>>>, Error> {
    let n = base.len();
    let mut rho: Vec<Vec<Option<IntMatrix>>> = vec![vec![None; n]; n];
    for (x, row) in rho.iter_mut().enumerate() {
        row[x] = Some(IntMatrix::identity(stalks[x].num_gens()));
    }
    for y in base.linear_extension() {
        for x in 0..n {
            if !base.lt(x, y) {
                continue;
            }
            let mut first: Option<(usize, IntMatrix)> = None;
            for &z in base.lower_covers(y) {
                if !base.leq(x, z) {
                    continue;
                }
                let k = base.cover_index(z, y).unwrap();
                let via = edges[k].mul(rho[x][z].as_ref().unwrap());
                match &first {
                    None => first = Some((z, via)),
                    Some((z0, m0)) => {
                        if !stalks[y].columns_vanish(&m0.sub(&via)) {
                            return Err(Error::NotFunctorial(format!(
                                "restriction {}->{} differs along paths through {} and {}",
                                base.name(x),
                                base.name(y),
                                base.name(*z0),
                                base.name(z)
                            )));
                        }
                    }
                }
            }
            rho[x][y] = first.map(|(_, m)| m);
        }
    }
    Ok(rho)
}

/// A natural transformation between sheaves on the same space.
#[derive(Clone, Debug)]
pub struct SheafMorphism {
    src: Sheaf,
    tgt: Sheaf,
    components: Vec<IntMatrix>,
}

impl SheafMorphism {
    pub fn new(src: Sheaf, tgt: Sheaf, components: Vec<IntMatrix>) -> Result<SheafMorphism, Error> {
        if src.base != tgt.base {
            return Err(Error::BaseMismatch);
        }
        let p = src.base.clone();
        if components.len() != p.len() {
            return Err(Error::Shape("one component per element is required".into()));
        }
        for x in 0..p.len() {
            let c = &components[x];
            if c.shape() != (tgt.stalks[x].num_gens(), src.stalks[x].num_gens()) {
                return Err(Error::Shape(format!("component at {} has the wrong shape", p.name(x))));
            }
            if !tgt.stalks[x].columns_vanish(&c.mul(src.stalks[x].relations())) {
                return Err(Error::NotAHomomorphism(format!("component at {} does not respect relations", p.name(x))));
            }
        }
        for (k, &(x, y)) in p.covers().iter().enumerate() {
            let lhs = tgt.edges[k].mul(&components[x]);
            let rhs = components[y].mul(&src.edges[k]);
            if !tgt.stalks[y].columns_vanish(&lhs.sub(&rhs)) {
                return Err(Error::NotAMorphism(format!("square on {}->{} does not commute", p.name(x), p.name(y))));
            }
        }
        Ok(SheafMorphism { src, tgt, components })
    }

    pub fn identity(f: &Sheaf) -> SheafMorphism {
        let components = f.stalks.iter().map(|s| IntMatrix::identity(s.num_gens())).collect();
        SheafMorphism { src: f.clone(), tgt: f.clone(), components }
    }

    pub fn source(&self) -> &Sheaf {
        &self.src
    }

    pub fn target(&self) -> &Sheaf {
        &self.tgt
    }

    pub fn component(&self, x: usize) -> &IntMatrix {
        &self.components[x]
    }

    pub fn component_map(&self, x: usize) -> GroupMap {
        GroupMap::new_unchecked(self.src.stalks[x].clone(), self.tgt.stalks[x].clone(), self.components[x].clone())
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &SheafMorphism) -> SheafMorphism {
        let components = (0..self.components.len()).map(|x| other.components[x].mul(&self.components[x])).collect();
        SheafMorphism { src: self.src.clone(), tgt: other.tgt.clone(), components }
    }

    pub fn is_isomorphism(&self) -> bool {
        (0..self.components.len()).all(|x| self.component_map(x).is_isomorphism())
    }

    pub fn is_zero(&self) -> bool {
        (0..self.components.len()).all(|x| self.component_map(x).is_zero())
    }
}

/// A bounded cochain complex of sheaves `F^p → F^{p+1}`, for `p` in
/// `min_degree ..= min_degree + terms.len() - 1`.
#[derive(Clone, Debug)]
pub struct SheafComplex {
    base: FinitePoset,
    min_degree: i64,
    terms: Vec<Sheaf>,
    /// `diffs[i][x]`: `F^{min+i}_x → F^{min+i+1}_x`.
    diffs: Vec<Vec<IntMatrix>>,
}

impl SheafComplex {
    pub fn new(base: FinitePoset, min_degree: i64, terms: Vec<Sheaf>, diffs: Vec<Vec<IntMatrix>>) -> Result<Self, Error> {
        if terms.iter().any(|t| t.base != base) {
            return Err(Error::BaseMismatch);
        }
        if diffs.len() != terms.len().saturating_sub(1) {
            return Err(Error::Shape("one differential between consecutive terms is required".into()));
        }
        for (i, d) in diffs.iter().enumerate() {
            SheafMorphism::new(terms[i].clone(), terms[i + 1].clone(), d.clone())?;
            if i > 0 {
                for x in 0..base.len() {
                    if !terms[i + 1].stalks[x].columns_vanish(&d[x].mul(&diffs[i - 1][x])) {
                        return Err(Error::NotAMorphism(format!(
                            "d∘d is nonzero at {} in degree {}",
                            base.name(x),
                            min_degree + i as i64 - 1
                        )));
                    }
                }
            }
        }
        Ok(SheafComplex { base, min_degree, terms, diffs })
    }

    pub(crate) fn new_unchecked(base: FinitePoset, min_degree: i64, terms: Vec<Sheaf>, diffs: Vec<Vec<IntMatrix>>) -> Self {
        SheafComplex { base, min_degree, terms, diffs }
    }

    /// A single sheaf placed in cohomological degree `p`.
    pub fn concentrated(f: &Sheaf, p: i64) -> SheafComplex {
        SheafComplex { base: f.base.clone(), min_degree: p, terms: vec![f.clone()], diffs: Vec::new() }
    }

    pub fn base(&self) -> &FinitePoset {
        &self.base
    }

    pub fn min_degree(&self) -> i64 {
        self.min_degree
    }

    pub fn max_degree(&self) -> i64 {
        self.min_degree + self.terms.len() as i64 - 1
    }

    fn index(&self, p: i64) -> Option<usize> {
        (p >= self.min_degree && p <= self.max_degree()).then(|| (p - self.min_degree) as usize)
    }

    /// `F^p`, the zero sheaf outside the window.
    pub fn term(&self, p: i64) -> Sheaf {
        self.index(p).map_or_else(|| Sheaf::zero(&self.base), |i| self.terms[i].clone())
    }

    pub fn term_ref(&self, p: i64) -> Option<&Sheaf> {
        self.index(p).map(|i| &self.terms[i])
    }

    pub fn stalk_gens(&self, p: i64, x: usize) -> usize {
        self.term_ref(p).map_or(0, |t| t.stalk(x).num_gens())
    }

    /// `d: F^p_x → F^{p+1}_x`.
    pub fn diff(&self, p: i64, x: usize) -> IntMatrix {
        match (self.index(p), self.index(p + 1)) {
            (Some(i), Some(_)) => self.diffs[i][x].clone(),
            _ => IntMatrix::zeros(self.stalk_gens(p + 1, x), self.stalk_gens(p, x)),
        }
    }

    /// The stalk complex at `x`, as a chain complex in homological degree `-p`.
    pub fn stalk_complex(&self, x: usize) -> ChainComplex {
        if self.terms.is_empty() {
            return ChainComplex::zero();
        }
        let lo = -self.max_degree();
        let groups = (lo..=-self.min_degree).map(|n| self.term(-n).stalk(x).clone()).collect();
        let boundaries = (lo + 1..=-self.min_degree).map(|n| self.diff(-n, x)).collect();
        ChainComplex::new_unchecked(lo, groups, boundaries)
    }

    /// `H^j` of the stalk complex at `x`.
    pub fn stalk_cohomology(&self, x: usize, j: i64) -> Subquotient {
        self.stalk_complex(x).homology(-j)
    }

    /// Map `H^j(F)_x → H^j(F)_y` induced by restriction, for `x ≤ y`.
    pub fn stalk_cohomology_map(&self, x: usize, y: usize, j: i64) -> GroupMap {
        let cx = self.stalk_complex(x);
        let cy = self.stalk_complex(y);
        let lo = cx.min_degree();
        let mats = (lo..=cx.max_degree()).map(|n| self.term(-n).rho(x, y).clone()).collect();
        ChainMap::new_unchecked(cx, cy, lo, mats).induced(-j)
    }

    /// Replaces every stalk outside the open or closed set `s` by zero.
    pub fn keep_stalks(&self, s: &[usize]) -> SheafComplex {
        let terms = self.terms.iter().map(|t| t.keep_stalks(s)).collect();
        let diffs = self
            .diffs
            .iter()
            .map(|d| {
                (0..self.base.len())
                    .map(|x| {
                        if s.contains(&x) {
                            d[x].clone()
                        } else {
                            IntMatrix::zeros(0, 0)
                        }
                    })
                    .collect()
            })
            .collect();
        SheafComplex { base: self.base.clone(), min_degree: self.min_degree, terms, diffs }
    }

    /// `F_U` for an open `U`.
    pub fn extension_by_zero_of_restriction(&self, u: &[usize]) -> Result<SheafComplex, Error> {
        self.base.require_open(u)?;
        Ok(self.keep_stalks(u))
    }

    /// Restriction to the induced subposet on `s`.
    pub fn restrict(&self, s: &ElementSet) -> SheafComplex {
        let terms: Vec<Sheaf> = self.terms.iter().map(|t| t.restrict(s)).collect();
        let base = terms.first().map_or_else(|| self.base.subposet(s).0, |t| t.base.clone());
        let diffs = self.diffs.iter().map(|d| s.iter().map(|&x| d[x].clone()).collect()).collect();
        SheafComplex { base, min_degree: self.min_degree, terms, diffs }
    }

    /// Stalkwise tensor with a sheaf `G` (placed in degree 0).
    pub fn tensor_sheaf(&self, g: &Sheaf) -> Result<SheafComplex, Error> {
        let terms = self.terms.iter().map(|t| t.tensor(g)).collect::<Result<Vec<_>, _>>()?;
        let diffs = self
            .diffs
            .iter()
            .map(|d| {
                (0..self.base.len()).map(|x| d[x].kron(&IntMatrix::identity(g.stalk(x).num_gens()))).collect()
            })
            .collect();
        Ok(SheafComplex { base: self.base.clone(), min_degree: self.min_degree, terms, diffs })
    }

    pub fn terms(&self) -> &[Sheaf] {
        &self.terms
    }

    /// `f^{-1}` applied termwise.
    pub fn inverse_image(&self, f: &MonotoneMap) -> Result<SheafComplex, Error> {
        let terms = self.terms.iter().map(|t| t.inverse_image(f)).collect::<Result<Vec<_>, _>>()?;
        let diffs = self.diffs.iter().map(|d| (0..f.source().len()).map(|x| d[f.apply(x)].clone()).collect()).collect();
        Ok(SheafComplex { base: f.source().clone(), min_degree: self.min_degree, terms, diffs })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s1() -> FinitePoset {
        FinitePoset::sphere(1)
    }

    #[test]
    fn constant_and_zero() {
        let f = Sheaf::constant_z(&s1());
        assert!(f.stalks().iter().all(|s| s.to_string() == "Z"));
        assert!(Sheaf::zero(&s1()).is_zero());
        let g = Sheaf::constant(&FinitePoset::chain(2), &FgAbGroup::cyclic(2));
        assert_eq!(g.stalk(1).to_string(), "Z/2");
    }

    #[test]
    fn extension_by_zero_examples() {
        let p = s1();
        let c = p.index_of("c").unwrap();
        let f = Sheaf::z_minimal_open(&p, c);
        let nonzero: Vec<usize> = (0..4).filter(|&x| !f.stalk(x).is_zero()).collect();
        assert_eq!(nonzero, vec![c]);
        let all = Sheaf::constant_z(&p).extension_by_zero_of_restriction(&p.all()).unwrap();
        assert!(all.same_data(&Sheaf::constant_z(&p)));
        assert!(Sheaf::constant_z(&p).extension_by_zero_of_restriction(&[]).unwrap().is_zero());
        assert!(Sheaf::constant_z(&p).extension_by_zero_of_restriction(&[0]).is_err());
    }

    #[test]
    fn closed_restriction_examples() {
        let p = s1();
        let f = Sheaf::constant_z(&p).closed_restriction(&[0]).unwrap();
        let nonzero: Vec<usize> = (0..4).filter(|&x| !f.stalk(x).is_zero()).collect();
        assert_eq!(nonzero, vec![0]);
        assert!(Sheaf::constant_z(&p).closed_restriction(&[2]).is_err());
    }

    #[test]
    fn inverse_image_examples() {
        let p = s1();
        let c = p.index_of("c").unwrap();
        let (pt, incl) = p.subposet(&[c]);
        let f = Sheaf::z_minimal_open(&p, 0).inverse_image(&incl).unwrap();
        assert_eq!(pt.len(), 1);
        assert_eq!(f.stalk(0).to_string(), "Z");
        let g = Sheaf::constant(&FinitePoset::point(), &FgAbGroup::cyclic(3));
        let h = g.inverse_image(&MonotoneMap::to_point(&p)).unwrap();
        assert!(h.stalks().iter().all(|s| s.to_string() == "Z/3"));
    }

    #[test]
    fn tensor_examples() {
        let p = s1();
        let a = Sheaf::constant(&p, &FgAbGroup::cyclic(2));
        let b = Sheaf::constant(&p, &FgAbGroup::cyclic(3));
        assert!(a.tensor(&b).unwrap().is_zero());
        let u = Sheaf::z_minimal_open(&p, 0);
        let v = Sheaf::z_minimal_open(&p, 1);
        let uv = u.tensor(&v).unwrap();
        let support: Vec<usize> = (0..4).filter(|&x| !uv.stalk(x).is_zero()).collect();
        assert_eq!(support, vec![2, 3]);
    }

    #[test]
    fn functoriality_is_checked() {
        // Diamond a < b, c < d with edge signs multiplying to -1 around the square.
        let p = FinitePoset::new(&["a", "b", "c", "d"], &[("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")]).unwrap();
        let z = FgAbGroup::free(1);
        let err = Sheaf::from_fn(p.clone(), vec![z.clone(); 4], |x, y| {
            let s = if (x, y) == (2, 3) { -1 } else { 1 };
            IntMatrix::from_rows(&[vec![s]])
        })
        .unwrap_err();
        assert!(matches!(err, Error::NotFunctorial(_)));
        // On S^1 the same twist is fine: there is no square.
        let t = Sheaf::from_fn(s1(), vec![z; 4], |x, y| {
            let s = if (x, y) == (1, 3) { -1 } else { 1 };
            IntMatrix::from_rows(&[vec![s]])
        })
        .unwrap();
        assert!(t.is_locally_constant());
    }

    #[test]
    fn sections_examples() {
        let p = s1();
        assert_eq!(Sheaf::constant_z(&p).sections_over_open(&p.all()).unwrap().to_string(), "Z");
        assert_eq!(Sheaf::constant_z(&p).sections_over_open(&[2, 3]).unwrap().to_string(), "Z^2");
        let c = p.index_of("c").unwrap();
        assert!(Sheaf::z_minimal_open(&p, c).sections_over_open(&p.all()).unwrap().is_zero());
    }

    #[test]
    fn rejects_bad_relations() {
        let p = FinitePoset::chain(2);
        let err = Sheaf::from_fn(p, vec![FgAbGroup::cyclic(2), FgAbGroup::free(1)], |_, _| IntMatrix::from_rows(&[vec![1]]))
            .unwrap_err();
        assert!(err.to_string().contains("relation 1"));
    }
}
