//! Homology of sheaves on finite spaces and its consistency checks.
//!
//! `H_i(X, F)` is computed from the standard resolution as `H_i(L(X, P_•))`; the
//! bar complex computes the same groups independently and is used for maps
//! (functoriality, Mayer-Vietoris, excision) since its chains are natural in `X`.

pub mod cap;
pub mod chains;
pub mod dual;
pub mod resolution;

use zlinalg::{colimit, connecting_map, ext1, hom, is_exact_at, tor1, ChainComplex, ChainMap, FgAbGroup, GroupMap, IntMatrix};

use crate::error::Error;
use crate::poset::{element_set, ElementSet, FinitePoset, MonotoneMap};
use crate::report::Report;
use crate::sheaf::{Sheaf, SheafComplex, SheafMorphism};

pub use cap::{cap_chain, cap_naturality_check, cap_product, CapPairing};
pub use chains::{bar_complex, bar_total, cobar_complex, cobar_total, Chains, Total};
pub use dual::{derived_dual, duality_sequence_check};
pub use resolution::{Generator, Resolution};

/// `L(X, F)`: the colimit of the stalk diagram.
pub fn cosections(f: &Sheaf) -> FgAbGroup {
    colimit(&f.diagram(&f.base().all())).object
}

/// `H_0 ..= H_d` from the standard resolution.
pub fn homology(f: &Sheaf, max_deg: usize) -> Vec<FgAbGroup> {
    let c = Resolution::of_sheaf(f, max_deg + 2).cosections_complex();
    (0..=max_deg as i64).map(|i| c.homology_group(i)).collect()
}

/// `H_lo ..= H_hi` of a complex of sheaves (cohomologically graded) from the
/// resolution of the complex.
pub fn complex_homology(f: &SheafComplex, lo: i64, hi: i64) -> Vec<FgAbGroup> {
    let length = (hi + 2 + f.max_degree().max(0)).max(1) as usize;
    let c = Resolution::new(f, length).cosections_complex();
    (lo..=hi).map(|i| c.homology_group(i)).collect()
}

/// `H_0 ..= H_d` from the bar complex.
pub fn bar_homology(f: &Sheaf, max_deg: usize) -> Vec<FgAbGroup> {
    let c = bar_complex(f, &f.base().all()).complex;
    (0..=max_deg as i64).map(|i| c.homology_group(i)).collect()
}

pub fn complex_bar_homology(f: &SheafComplex, lo: i64, hi: i64) -> Vec<FgAbGroup> {
    let c = bar_total(f, &f.base().all()).complex;
    (lo..=hi).map(|i| c.homology_group(i)).collect()
}

/// `H^0 ..= H^d` from the cobar complex.
pub fn cohomology(f: &Sheaf, max_deg: usize) -> Vec<FgAbGroup> {
    let c = cobar_complex(f, &f.base().all()).complex;
    (0..=max_deg as i64).map(|j| c.homology_group(-j)).collect()
}

/// Hypercohomology `H^lo ..= H^hi` of a complex of sheaves.
pub fn complex_cohomology(f: &SheafComplex, lo: i64, hi: i64) -> Vec<FgAbGroup> {
    let c = cobar_total(f, &f.base().all()).complex;
    (lo..=hi).map(|j| c.homology_group(-j)).collect()
}

/// Cohomology of `U ↦ Γ(U, F)` restricted to the chains inside `s`.
pub(crate) fn cohomology_on(f: &Sheaf, s: &[usize], j: i64) -> FgAbGroup {
    cobar_complex(f, s).complex.homology_group(-j)
}

/// `f_*: H_i(X, f^{-1}F) → H_i(Y, F)` for `i ≤ d`.
pub fn pushforward(f: &MonotoneMap, sheaf: &Sheaf, max_deg: usize) -> Result<Vec<GroupMap>, Error> {
    let m = pushforward_chain_map(f, sheaf)?;
    Ok((0..=max_deg as i64).map(|i| m.induced(i)).collect())
}

pub(crate) fn pushforward_chain_map(f: &MonotoneMap, sheaf: &Sheaf) -> Result<ChainMap, Error> {
    let pulled = sheaf.inverse_image(f)?;
    let src = bar_complex(&pulled, &f.source().all());
    let tgt = bar_complex(sheaf, &sheaf.base().all());
    Ok(chains::bar_map(&src, &tgt, |x| f.apply(x), |_, x| IntMatrix::identity(pulled.stalk(x).num_gens())))
}

/// `H^Y_i(X, F) = H_i(X, F_Y)` for `i ≤ d`.
pub fn local_homology(f: &Sheaf, y: &[usize], max_deg: usize) -> Result<Vec<FgAbGroup>, Error> {
    Ok(homology(&f.closed_restriction(y)?, max_deg))
}

/// Inclusion of bar complexes of one sheaf over chains in `s ⊆ t`.
fn bar_inclusion(f: &Sheaf, s: &Total, t: &Total) -> ChainMap {
    chains::bar_map(s, t, |x| x, |_, x| IntMatrix::identity(f.stalk(x).num_gens()))
}

fn window(cs: &[&ChainComplex]) -> (i64, i64) {
    let lo = cs.iter().map(|c| c.min_degree()).min().unwrap();
    let hi = cs.iter().map(|c| c.max_degree()).max().unwrap();
    (lo, hi)
}

fn padded(c: &ChainComplex, lo: i64, hi: i64) -> ChainComplex {
    if hi < lo {
        return ChainComplex::zero();
    }
    let groups = (lo..=hi).map(|n| c.group(n)).collect();
    let bds = (lo + 1..=hi).map(|n| c.boundary(n)).collect();
    ChainComplex::new_unchecked(lo, groups, bds)
}

/// Checks the homology sequence of a short exact sequence of complexes
/// `0 → A →α B →β C → 0` in degrees `0..=d`: composites vanish, the middle is
/// exact, `coker(H_i β) ≅ ker(H_{i−1} α)`, and the sequence with connecting maps is
/// exact everywhere.
pub fn ses_check(title: &str, alpha: &ChainMap, beta: &ChainMap, max_deg: usize) -> Report {
    let mut r = Report::new(title);
    for i in 0..=max_deg as i64 {
        let a = alpha.induced(i);
        let b = beta.induced(i);
        let (ha, hb, hc) = (a.source().clone(), a.target().clone(), b.target().clone());
        r.push(
            format!("H_{i}"),
            true,
            format!("{ha} -> {hb} -> {hc}"),
        );
        r.push(format!("composite zero in degree {i}"), a.then(&b).is_zero(), "");
        r.push(format!("exact at the middle in degree {i}"), is_exact_at(&a, &b), "");
        let coker = b.cokernel().0;
        let ker = if i > 0 { alpha.induced(i - 1).kernel().group().clone() } else { FgAbGroup::zero() };
        r.push(
            format!("coker(H_{i}) matches ker(H_{})", i - 1),
            coker.is_isomorphic(&ker),
            format!("{coker} vs {ker}"),
        );
        match connecting_map(alpha, beta, i) {
            Ok(delta) => {
                let ok_c = is_exact_at(&b, &delta);
                let ok_a = i == 0 || is_exact_at(&delta, &alpha.induced(i - 1));
                r.push(format!("connecting map exact in degree {i}"), ok_c && ok_a, "");
            }
            Err(e) => r.push(format!("connecting map in degree {i}"), false, format!("not exact at chain level: {e:?}")),
        }
    }
    r
}

/// The sequence `0 → C(S ∩ T) → C(S) ⊕ C(T) → C(S ∪ T) → 0` on bar complexes.
fn union_sequence(f: &Sheaf, s: &[usize], t: &[usize]) -> (ChainMap, ChainMap) {
    let i: ElementSet = s.iter().copied().filter(|x| t.contains(x)).collect();
    let u: ElementSet = element_set(s.iter().chain(t).copied().collect());
    let (ci, cs, ct, cu) = (bar_complex(f, &i), bar_complex(f, s), bar_complex(f, t), bar_complex(f, &u));
    let (is, it) = (bar_inclusion(f, &ci, &cs), bar_inclusion(f, &ci, &ct));
    let (js, jt) = (bar_inclusion(f, &cs, &cu), bar_inclusion(f, &ct, &cu));
    let (lo, hi) = window(&[&ci.complex, &cs.complex, &ct.complex, &cu.complex]);
    let a = padded(&ci.complex, lo, hi);
    let b = ChainComplex::direct_sum(&[padded(&cs.complex, lo, hi), padded(&ct.complex, lo, hi)]);
    let b = padded(&b, lo, hi);
    let c = padded(&cu.complex, lo, hi);
    let alpha = (lo..=hi).map(|n| is.matrix(n).vstack(&it.matrix(n))).collect();
    let beta = (lo..=hi).map(|n| js.matrix(n).hstack(&jt.matrix(n).neg())).collect();
    (
        ChainMap::new_unchecked(a, b.clone(), lo, alpha),
        ChainMap::new_unchecked(b, c, lo, beta),
    )
}

/// Mayer-Vietoris for an open cover `X = U ∪ V`.
pub fn mv_open_check(f: &Sheaf, u: &[usize], v: &[usize], max_deg: usize) -> Result<Report, Error> {
    let p = f.base();
    p.require_open(u)?;
    p.require_open(v)?;
    require_cover(p, u, v)?;
    let (alpha, beta) = union_sequence(f, u, v);
    Ok(ses_check("Mayer-Vietoris (open)", &alpha, &beta, max_deg))
}

/// Mayer-Vietoris for a closed cover `X = Y ∪ Z`, with `F|_Y`, `F|_Z`, `F|_{Y∩Z}`.
pub fn mv_closed_check(f: &Sheaf, y: &[usize], z: &[usize], max_deg: usize) -> Result<Report, Error> {
    let p = f.base();
    p.require_closed(y)?;
    p.require_closed(z)?;
    require_cover(p, y, z)?;
    let (alpha, beta) = union_sequence(f, y, z);
    Ok(ses_check("Mayer-Vietoris (closed)", &alpha, &beta, max_deg))
}

fn require_cover(p: &FinitePoset, a: &[usize], b: &[usize]) -> Result<(), Error> {
    let u = element_set(a.iter().chain(b).copied().collect());
    if u != p.all() {
        return Err(Error::Precondition(format!("{} and {} do not cover the space", p.describe(a), p.describe(b))));
    }
    Ok(())
}

/// Excision: the inclusion of bar complexes `C(U, F_Y) → C(X, F_Y)` induces
/// isomorphisms `H^Y_i(U, F|_U) → H^Y_i(X, F)`.
pub fn excision_check(f: &Sheaf, u: &[usize], y: &[usize], max_deg: usize) -> Result<Report, Error> {
    let p = f.base();
    p.require_open(u)?;
    p.require_closed(y)?;
    if !y.iter().all(|x| u.contains(x)) {
        return Err(Error::Precondition(format!("{} is not contained in {}", p.describe(y), p.describe(u))));
    }
    let fy = f.closed_restriction(y)?;
    let small = bar_complex(&fy, u);
    let big = bar_complex(&fy, &p.all());
    let m = bar_inclusion(&fy, &small, &big);
    let mut r = Report::new("excision");
    for i in 0..=max_deg as i64 {
        let g = m.induced(i);
        r.push(format!("H_{i}"), g.is_isomorphism(), format!("{} -> {}", g.source(), g.target()));
    }
    Ok(r)
}

/// Long exact sequence of `0 → A → B → C → 0` given by sheaf morphisms.
pub fn les_check(i: &SheafMorphism, q: &SheafMorphism, max_deg: usize) -> Report {
    let x = i.source().base().all();
    let (a, b, c) = (bar_complex(i.source(), &x), bar_complex(i.target(), &x), bar_complex(q.target(), &x));
    let alpha = chains::bar_map(&a, &b, |x| x, |_, x| i.component(x).clone());
    let beta = chains::bar_map(&b, &c, |x| x, |_, x| q.component(x).clone());
    ses_check("long exact sequence", &alpha, &beta, max_deg)
}

/// `H_i(X, F ⊗^L G)` together with the universal coefficient check.
#[derive(Clone, Debug)]
pub struct GroupsWithReport {
    pub groups: Vec<FgAbGroup>,
    pub report: Report,
}

/// `L(P_•) ⊗ (ℤ^m →R ℤ^g)` as a total complex, with `D = ∂ ⊗ 1 + (−1)^k 1 ⊗ R`.
fn tensor_with_presentation(c: &ChainComplex, g: &FgAbGroup) -> ChainComplex {
    let r = zlinalg::Lattice::span(g.num_gens(), g.relations()).basis().clone();
    let (ng, nm) = (g.num_gens(), r.cols());
    let lo = c.min_degree();
    let hi = c.max_degree() + 1;
    let rank = |n: i64| c.rank(n) * ng + c.rank(n - 1) * nm;
    let ranks: Vec<usize> = (lo..=hi).map(rank).collect();
    let bds = (lo + 1..=hi)
        .map(|n| {
            let mut m = IntMatrix::zeros(rank(n - 1), rank(n));
            // C_n ⊗ ℤ^g → C_{n−1} ⊗ ℤ^g
            m.set_block(0, 0, &c.boundary(n).kron(&IntMatrix::identity(ng)));
            // C_{n−1} ⊗ ℤ^m → C_{n−2} ⊗ ℤ^m and → C_{n−1} ⊗ ℤ^g
            let k = n - 1;
            m.set_block(c.rank(n - 1) * ng, c.rank(n) * ng, &c.boundary(k).kron(&IntMatrix::identity(nm)));
            let s = if k.rem_euclid(2) == 0 { 1 } else { -1 };
            m.set_block(0, c.rank(n) * ng, &IntMatrix::identity(c.rank(k)).kron(&r).scale(&s.into()));
            m
        })
        .collect();
    ChainComplex::free(lo, &ranks, bds).expect("tensor total complex")
}

/// Universal coefficients: `H_i(X, F ⊗^L G) ≅ H_i(X,F) ⊗ G ⊕ Tor₁(H_{i−1}(X,F), G)`.
pub fn universal_coefficients(f: &Sheaf, g: &FgAbGroup, max_deg: usize) -> GroupsWithReport {
    let c = Resolution::of_sheaf(f, max_deg + 2).cosections_complex();
    let t = tensor_with_presentation(&c, g);
    let mut report = Report::new("universal coefficients");
    let mut groups = Vec::new();
    for i in 0..=max_deg as i64 {
        let actual = t.homology_group(i);
        let h = c.homology_group(i);
        let prev = c.homology_group(i - 1);
        let expected = FgAbGroup::direct_sum(&[zlinalg::tensor(&h, g), tor1(&prev, g)]);
        report.compare(format!("H_{i}"), &actual, &expected);
        groups.push(actual);
    }
    GroupsWithReport { groups, report }
}

/// Künneth: `H_n(X_1 × X_2, F_1 ⊠^L F_2)` from `π_1^{-1} P(F_1) ⊗ π_2^{-1} F_2`,
/// compared with `⊕ H_p ⊗ H_q ⊕ ⊕ Tor₁(H_p, H_q)`.
pub fn kunneth(f1: &Sheaf, f2: &Sheaf, max_deg: usize) -> GroupsWithReport {
    let (x1, x2) = (f1.base(), f2.base());
    let (pi1, pi2) = x1.product_projections(x2);
    let p = Resolution::complete_of_sheaf(f1).as_sheaf_complex();
    let pulled = p.inverse_image(&pi1).expect("projection targets the first factor");
    let g = f2.inverse_image(&pi2).expect("projection targets the second factor");
    let t = pulled.tensor_sheaf(&g).expect("same base");
    let actual = complex_homology(&t, 0, max_deg as i64);
    let h1 = homology(f1, max_deg);
    let h2 = homology(f2, max_deg);
    let mut report = Report::new("Künneth");
    for n in 0..=max_deg {
        let mut parts = Vec::new();
        for a in 0..=n {
            parts.push(zlinalg::tensor(&h1[a], &h2[n - a]));
        }
        for a in 0..n {
            parts.push(tor1(&h1[a], &h2[n - 1 - a]));
        }
        let expected = FgAbGroup::direct_sum(&parts);
        report.compare(format!("H_{n}"), &actual[n], &expected);
    }
    GroupsWithReport { groups: actual, report }
}

/// Whether `f_* = g_*` on `H_i(X, G)` for `f ≤ g` pointwise.
pub fn homotopy_check(f: &MonotoneMap, g: &MonotoneMap, coeff: &FgAbGroup, max_deg: usize) -> Result<Report, Error> {
    if f.source() != g.source() || f.target() != g.target() {
        return Err(Error::BaseMismatch);
    }
    if !f.pointwise_leq(g) {
        return Err(Error::Precondition("maps are not pointwise comparable".into()));
    }
    let sheaf = Sheaf::constant(f.target(), coeff);
    let a = pushforward(f, &sheaf, max_deg)?;
    let b = pushforward(g, &sheaf, max_deg)?;
    let mut r = Report::new("homotopy invariance");
    for (i, (fa, gb)) in a.iter().zip(&b).enumerate() {
        r.push(format!("H_{i}"), fa.equals(gb), format!("{} -> {}", fa.source(), fa.target()));
    }
    Ok(r)
}

/// Compares `H^i(X, F^∨)` with `Hom(H_i, ℤ) ⊕ Ext¹(H_{i−1}, ℤ)`.
pub(crate) fn duality_expected(h: &[FgAbGroup], i: usize) -> FgAbGroup {
    let z = FgAbGroup::free(1);
    let prev = if i > 0 { h[i - 1].clone() } else { FgAbGroup::zero() };
    FgAbGroup::direct_sum(&[hom(&h[i], &z), ext1(&prev, &z)])
}
