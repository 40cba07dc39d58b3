//! Cosheaves as covariant functor data on minimal opens, and the `cos ⊣ shf` pair.
//!
//! `Q_x = Q(U_x)` and, for `x ≤ y`, the extension `e_{y→x}: Q_y → Q_x` along
//! `U_y ⊆ U_x`. Values on arbitrary opens are colimits of this data.

use zlinalg::{colimit, limit_kernel, Diagram, FgAbGroup, GroupMap, Int, IntMatrix, Subquotient};

use crate::error::Error;
use crate::poset::{ElementSet, FinitePoset};
use crate::sheaf::{induced_covers, natural_transformations, Sheaf, SheafMorphism};

#[derive(Clone, Debug)]
pub struct Cosheaf {
    base: FinitePoset,
    values: Vec<FgAbGroup>,
    /// Per cover `(x, y)`: `Q_y → Q_x`.
    edges: Vec<IntMatrix>,
    ext: Vec<Vec<Option<IntMatrix>>>,
}

impl Cosheaf {
    pub fn new(base: FinitePoset, values: Vec<FgAbGroup>, edges: Vec<IntMatrix>) -> Result<Cosheaf, Error> {
        if values.len() != base.len() || edges.len() != base.covers().len() {
            return Err(Error::Shape("value or edge table does not match the space".into()));
        }
        for (k, &(x, y)) in base.covers().iter().enumerate() {
            if edges[k].shape() != (values[x].num_gens(), values[y].num_gens()) {
                return Err(Error::Shape(format!("map {}->{} has the wrong shape", base.name(y), base.name(x))));
            }
            if GroupMap::new(values[y].clone(), values[x].clone(), edges[k].clone()).is_err() {
                return Err(Error::NotAHomomorphism(format!(
                    "map {}->{} does not respect relations",
                    base.name(y),
                    base.name(x)
                )));
            }
        }
        let n = base.len();
        let mut ext: Vec<Vec<Option<IntMatrix>>> = vec![vec![None; n]; n];
        for (x, row) in ext.iter_mut().enumerate() {
            row[x] = Some(IntMatrix::identity(values[x].num_gens()));
        }
        // ext[y][x] for x ≤ y, built downwards from y.
        let order = base.linear_extension();
        for &x in order.iter().rev() {
            for y in 0..n {
                if !base.lt(x, y) {
                    continue;
                }
                let mut first: Option<IntMatrix> = None;
                for &z in base.upper_covers(x) {
                    if !base.leq(z, y) {
                        continue;
                    }
                    let k = base.cover_index(x, z).unwrap();
                    let via = edges[k].mul(ext[y][z].as_ref().unwrap());
                    match &first {
                        None => first = Some(via),
                        Some(m0) => {
                            if !values[x].columns_vanish(&m0.sub(&via)) {
                                return Err(Error::NotFunctorial(format!(
                                    "extension {}->{} differs along two paths",
                                    base.name(y),
                                    base.name(x)
                                )));
                            }
                        }
                    }
                }
                ext[y][x] = first;
            }
        }
        Ok(Cosheaf { base, values, edges, ext })
    }

    pub fn from_fn(
        base: FinitePoset,
        values: Vec<FgAbGroup>,
        mut f: impl FnMut(usize, usize) -> IntMatrix,
    ) -> Result<Cosheaf, Error> {
        let edges = base.covers().iter().map(|&(x, y)| f(y, x)).collect();
        Cosheaf::new(base, values, edges)
    }

    /// `G^cos`.
    pub fn constant(base: &FinitePoset, g: &FgAbGroup) -> Cosheaf {
        let n = g.num_gens();
        Cosheaf::from_fn(base.clone(), vec![g.clone(); base.len()], |_, _| IntMatrix::identity(n)).unwrap()
    }

    pub fn zero(base: &FinitePoset) -> Cosheaf {
        Cosheaf::constant(base, &FgAbGroup::zero())
    }

    /// `j_! Q|_U` for an open `U`, with `(j_! Q|_U)(V) = Q(U ∩ V)`.
    pub fn extension_by_zero_of_restriction(&self, u: &[usize]) -> Result<Cosheaf, Error> {
        self.base.require_open(u)?;
        let p = &self.base;
        let meets: Vec<ElementSet> =
            (0..p.len()).map(|x| p.minimal_open(x).into_iter().filter(|y| u.contains(y)).collect()).collect();
        let values = meets.iter().map(|v| self.value(v)).collect::<Result<Vec<_>, _>>()?;
        Cosheaf::from_fn(p.clone(), values, |y, x| self.value_map(&meets[y], &meets[x]))
    }

    pub fn direct_sum(&self, other: &Cosheaf) -> Result<Cosheaf, Error> {
        if self.base != other.base {
            return Err(Error::BaseMismatch);
        }
        let values = (0..self.base.len())
            .map(|x| FgAbGroup::direct_sum(&[self.values[x].clone(), other.values[x].clone()]))
            .collect();
        let edges = (0..self.edges.len())
            .map(|k| IntMatrix::block_diagonal(&[&self.edges[k], &other.edges[k]]))
            .collect();
        Cosheaf::new(self.base.clone(), values, edges)
    }

    pub fn base(&self) -> &FinitePoset {
        &self.base
    }

    pub fn value_at(&self, x: usize) -> &FgAbGroup {
        &self.values[x]
    }

    pub fn edge_matrix(&self, k: usize) -> &IntMatrix {
        &self.edges[k]
    }

    /// `e_{y→x}` for `x ≤ y`.
    pub fn extension(&self, y: usize, x: usize) -> &IntMatrix {
        self.ext[y][x].as_ref().expect("elements are not comparable")
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    pub fn is_locally_constant(&self) -> bool {
        self.base.covers().iter().enumerate().all(|(k, &(x, y))| {
            GroupMap::new_unchecked(self.values[y].clone(), self.values[x].clone(), self.edges[k].clone())
                .is_isomorphism()
        })
    }

    /// Diagram over `s` with arrows `Q_y → Q_x` on induced covers `x ⋖ y`.
    pub fn diagram(&self, s: &[usize]) -> Diagram {
        let mut d = Diagram::new();
        for &x in s {
            d.add_object(self.values[x].clone());
        }
        for (i, j) in induced_covers(&self.base, s) {
            d.add_arrow(j, i, self.extension(s[j], s[i]).clone());
        }
        d
    }

    /// `Q(U)` for an open `U`, presented on `⊕_{x ∈ U} Q_x`.
    pub fn value(&self, u: &[usize]) -> Result<FgAbGroup, Error> {
        self.base.require_open(u)?;
        Ok(colimit(&self.diagram(u)).object)
    }

    /// `Q(V) → Q(W)` for opens `V ⊆ W`, on the presentations of [`Cosheaf::value`].
    pub fn value_map(&self, v: &[usize], w: &[usize]) -> IntMatrix {
        let off_w = offsets(&self.values, w);
        let off_v = offsets(&self.values, v);
        let mut m = IntMatrix::zeros(*off_w.last().unwrap(), *off_v.last().unwrap());
        for (i, x) in v.iter().enumerate() {
            let j = w.iter().position(|y| y == x).expect("V is not contained in W");
            m.set_block(off_w[j], off_v[i], &IntMatrix::identity(self.values[*x].num_gens()));
        }
        m
    }

    /// `Hom_Coshv(Q, R)` as a group.
    pub fn hom_group(&self, other: &Cosheaf) -> Result<Subquotient, Error> {
        if self.base != other.base {
            return Err(Error::BaseMismatch);
        }
        let arrows: Vec<(usize, usize, &IntMatrix, &IntMatrix)> = self
            .base
            .covers()
            .iter()
            .enumerate()
            .map(|(k, &(x, y))| (y, x, &self.edges[k], &other.edges[k]))
            .collect();
        Ok(natural_transformations(&self.values, &other.values, &arrows))
    }

    /// The exact-sequence check `⊕ Q(U_1 ∩ U_2) → Q(U_1) ⊕ Q(U_2) → Q(U_1 ∪ U_2) → 0`.
    pub fn coequalizer_exact(&self, u1: &[usize], u2: &[usize]) -> Result<bool, Error> {
        let u: ElementSet = crate::poset::element_set(u1.iter().chain(u2).copied().collect());
        let i: ElementSet = u1.iter().copied().filter(|x| u2.contains(x)).collect();
        let (qi, q1, q2, q) = (self.value(&i)?, self.value(u1)?, self.value(u2)?, self.value(&u)?);
        let a = self.value_map(&i, u1).vstack(&self.value_map(&i, u2).neg());
        let b = self.value_map(u1, &u).hstack(&self.value_map(u2, &u));
        let sum = FgAbGroup::direct_sum(&[q1, q2]);
        let f = GroupMap::new_unchecked(qi, sum.clone(), a);
        let g = GroupMap::new_unchecked(sum, q, b);
        Ok(g.is_surjective() && zlinalg::is_exact_at(&f, &g))
    }
}

fn offsets(values: &[FgAbGroup], s: &[usize]) -> Vec<usize> {
    let mut out = vec![0];
    for &x in s {
        out.push(out.last().unwrap() + values[x].num_gens());
    }
    out
}

/// A natural transformation of cosheaves.
#[derive(Clone, Debug)]
pub struct CosheafMorphism {
    src: Cosheaf,
    tgt: Cosheaf,
    components: Vec<IntMatrix>,
}

impl CosheafMorphism {
    pub fn new(src: Cosheaf, tgt: Cosheaf, components: Vec<IntMatrix>) -> Result<CosheafMorphism, Error> {
        if src.base != tgt.base {
            return Err(Error::BaseMismatch);
        }
        let p = src.base.clone();
        for x in 0..p.len() {
            let c = &components[x];
            if c.shape() != (tgt.values[x].num_gens(), src.values[x].num_gens())
                || !tgt.values[x].columns_vanish(&c.mul(src.values[x].relations()))
            {
                return Err(Error::NotAHomomorphism(format!("component at {} is not a homomorphism", p.name(x))));
            }
        }
        for (k, &(x, y)) in p.covers().iter().enumerate() {
            let lhs = tgt.edges[k].mul(&components[y]);
            let rhs = components[x].mul(&src.edges[k]);
            if !tgt.values[x].columns_vanish(&lhs.sub(&rhs)) {
                return Err(Error::NotAMorphism(format!("square on {}->{} does not commute", p.name(y), p.name(x))));
            }
        }
        Ok(CosheafMorphism { src, tgt, components })
    }

    pub fn source(&self) -> &Cosheaf {
        &self.src
    }

    pub fn target(&self) -> &Cosheaf {
        &self.tgt
    }

    pub fn component(&self, x: usize) -> &IntMatrix {
        &self.components[x]
    }

    pub fn component_map(&self, x: usize) -> GroupMap {
        GroupMap::new_unchecked(self.src.values[x].clone(), self.tgt.values[x].clone(), self.components[x].clone())
    }

    pub fn is_isomorphism(&self) -> bool {
        (0..self.components.len()).all(|x| self.component_map(x).is_isomorphism())
    }

    pub fn then(&self, other: &CosheafMorphism) -> CosheafMorphism {
        let components = self.components.iter().zip(&other.components).map(|(a, b)| b.mul(a)).collect();
        CosheafMorphism { src: self.src.clone(), tgt: other.tgt.clone(), components }
    }
}

/// The cosheaf of cosections: `cos(F)_x = colim_{U_x} F`.
pub fn cos(f: &Sheaf) -> Cosheaf {
    let p = f.base();
    let opens: Vec<ElementSet> = (0..p.len()).map(|x| p.minimal_open(x)).collect();
    let values: Vec<FgAbGroup> = opens.iter().map(|u| colimit(&f.diagram(u)).object).collect();
    let stalks = f.stalks();
    Cosheaf::from_fn(p.clone(), values, |y, x| {
        let off_x = offsets(stalks, &opens[x]);
        let off_y = offsets(stalks, &opens[y]);
        let mut m = IntMatrix::zeros(off_x[opens[x].len()], off_y[opens[y].len()]);
        for (i, z) in opens[y].iter().enumerate() {
            let j = opens[x].iter().position(|w| w == z).unwrap();
            m.set_block(off_x[j], off_y[i], &IntMatrix::identity(stalks[*z].num_gens()));
        }
        m
    })
    .expect("cosections form a cosheaf")
}

/// `cos(φ)` for a sheaf morphism.
pub fn cos_morphism(phi: &SheafMorphism) -> CosheafMorphism {
    let (s, t) = (phi.source(), phi.target());
    let p = s.base();
    let components = (0..p.len())
        .map(|x| {
            let u = p.minimal_open(x);
            IntMatrix::block_diagonal(&u.iter().map(|&z| phi.component(z)).collect::<Vec<_>>())
        })
        .collect();
    CosheafMorphism::new(cos(s), cos(t), components).expect("cos is a functor")
}

/// Connected non-empty opens contained in `U_x`, each sorted, in a fixed order.
pub fn connected_opens_below(p: &FinitePoset, x: usize) -> Vec<ElementSet> {
    let u = p.minimal_open(x);
    assert!(u.len() < 26, "too many subsets of a minimal open to enumerate");
    let mut out = Vec::new();
    for mask in 1u32..(1 << u.len()) {
        let v: ElementSet = (0..u.len()).filter(|i| mask >> i & 1 == 1).map(|i| u[i]).collect();
        if p.is_open(&v) && p.connected_components(&v).len() == 1 {
            out.push(v);
        }
    }
    out
}

struct ShfStalk {
    opens: Vec<ElementSet>,
    offsets: Vec<usize>,
    kernel: Subquotient,
}

fn shf_stalk(q: &Cosheaf, x: usize) -> ShfStalk {
    let opens = connected_opens_below(&q.base, x);
    let mut d = Diagram::new();
    for v in &opens {
        d.add_object(q.value(v).unwrap());
    }
    // Hasse covers of inclusion among the connected opens.
    let sub = |a: &ElementSet, b: &ElementSet| a.len() < b.len() && a.iter().all(|z| b.contains(z));
    for (i, a) in opens.iter().enumerate() {
        for (j, b) in opens.iter().enumerate() {
            if sub(a, b) && !opens.iter().any(|c| sub(a, c) && sub(c, b)) {
                d.add_arrow(i, j, q.value_map(a, b));
            }
        }
    }
    let offsets = zlinalg::block_offsets(&d);
    let (kernel, _) = limit_kernel(&d);
    ShfStalk { opens, offsets, kernel }
}

/// `shf(Q)_x = Γ(U_x, Q)`: the limit of `Q(V)` over connected opens `V ⊆ U_x`.
///
/// Enumerates every connected open below each point, so the cost grows
/// exponentially with the size of the minimal opens.
pub fn shf(q: &Cosheaf) -> Sheaf {
    let p = &q.base;
    let data: Vec<ShfStalk> = (0..p.len()).map(|x| shf_stalk(q, x)).collect();
    let stalks = data.iter().map(|s| s.kernel.group().clone()).collect();
    Sheaf::from_fn(p.clone(), stalks, |x, y| {
        let (dx, dy) = (&data[x], &data[y]);
        let reps = dx.kernel.representatives();
        let cols: Vec<Vec<Int>> = (0..reps.cols())
            .map(|c| {
                let v = reps.column(c);
                let mut w = Vec::with_capacity(*dy.offsets.last().unwrap());
                for o in &dy.opens {
                    let i = dx.opens.iter().position(|a| a == o).unwrap();
                    w.extend_from_slice(&v[dx.offsets[i]..dx.offsets[i + 1]]);
                }
                dy.kernel.class_of(&w).expect("restriction of a compatible family")
            })
            .collect();
        IntMatrix::from_columns(dy.kernel.group().num_gens(), &cols)
    })
    .expect("sections form a sheaf")
}

/// `shf(ψ)`: a compatible family `(q_V)` goes to `(ψ_V q_V)`.
pub fn shf_morphism(psi: &CosheafMorphism) -> SheafMorphism {
    let (q, r) = (psi.source(), psi.target());
    let p = &q.base;
    let components = (0..p.len())
        .map(|x| {
            let (dq, dr) = (shf_stalk(q, x), shf_stalk(r, x));
            let blocks: Vec<&IntMatrix> =
                dq.opens.iter().flat_map(|v| v.iter().map(|&z| psi.component(z))).collect();
            let m = IntMatrix::block_diagonal(&blocks);
            let reps = dq.kernel.representatives();
            let cols: Vec<Vec<Int>> = (0..reps.cols())
                .map(|c| dr.kernel.class_of(&m.mul_vec(&reps.column(c))).expect("image of a compatible family"))
                .collect();
            IntMatrix::from_columns(dr.kernel.group().num_gens(), &cols)
        })
        .collect();
    SheafMorphism::new(shf(q), shf(r), components).expect("shf is a functor")
}

/// The unit `F → shf(cos F)`.
pub fn unit(f: &Sheaf) -> SheafMorphism {
    let c = cos(f);
    let p = f.base();
    let target = shf(&c);
    let components = (0..p.len())
        .map(|x| {
            let data = shf_stalk(&c, x);
            let g = f.stalk(x).num_gens();
            let cols: Vec<Vec<Int>> = (0..g)
                .map(|gen| {
                    let a = zlinalg::unit_vector(g, gen);
                    let mut w = Vec::new();
                    for v in &data.opens {
                        // a|_V in L(V, F) is carried by any single point z of V: the
                        // F_z block of Q_z inside Q(V).
                        let z = v[0];
                        let img = f.rho(x, z).mul_vec(&a);
                        let uz = p.minimal_open(z);
                        let inner: usize = uz.iter().take_while(|&&w| w != z).map(|&w| f.stalk(w).num_gens()).sum();
                        let total: usize = v.iter().map(|&w| c.value_at(w).num_gens()).sum();
                        let mut block = vec![Int::from(0); total];
                        block[inner..inner + img.len()].clone_from_slice(&img);
                        w.extend(block);
                    }
                    data.kernel.class_of(&w).expect("unit lands in the limit")
                })
                .collect();
            IntMatrix::from_columns(target.stalk(x).num_gens(), &cols)
        })
        .collect();
    SheafMorphism::new(f.clone(), target, components).expect("unit is natural")
}
