//! The derived dual `F^∨ = ℝHHom(F, ℤ)`.
//!
//! With `P_•` the complete standard resolution, `F^∨ ≃ Tot HHom(P_•, I^•)` where
//! `I^m` has stalk `ℤ^{chains of m + 1 elements in U_w}` at `w`; it is a sum of
//! skyscrapers, so `HHom(ℤ_{U_x}, I^m)_w = ℤ^{chains in U_x ∩ U_w}`. When every
//! `U_x ∩ U_w` that occurs has no higher cohomology, `HHom(ℤ_{U_x}, ℤ) = j_{x*}ℤ`
//! is already acyclic and the smaller complex `HHom(P_•, ℤ)`, with stalks
//! `ℤ^{π_0(U_x ∩ U_w)}`, is used instead.

use std::collections::HashMap;

use zlinalg::{FgAbGroup, Int, IntMatrix};

use crate::homology::{complex_cohomology, duality_expected, homology, Resolution};
use crate::poset::{ElementSet, FinitePoset};
use crate::report::Report;
use crate::sheaf::{Sheaf, SheafComplex};

/// `(level, generator, chain or component)`.
type Label = (usize, usize, Vec<usize>);

struct Layout {
    labels: Vec<Vec<Vec<Label>>>,
    index: Vec<Vec<HashMap<Label, usize>>>,
}

impl Layout {
    fn new(labels: Vec<Vec<Vec<Label>>>) -> Layout {
        let index = labels
            .iter()
            .map(|per_w| per_w.iter().map(|ls| ls.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect()).collect())
            .collect();
        Layout { labels, index }
    }
}

fn intersection(p: &FinitePoset, x: usize, w: usize) -> ElementSet {
    p.minimal_open(x).into_iter().filter(|&y| p.leq(w, y)).collect()
}

fn acyclic(p: &FinitePoset, s: &[usize], cache: &mut HashMap<ElementSet, bool>) -> bool {
    if let Some(&b) = cache.get(s) {
        return b;
    }
    let z = Sheaf::constant_z(p);
    let h = p.height_of(s).max(0);
    let ok = (1..=h).all(|j| crate::homology::cohomology_on(&z, s, j).is_zero());
    cache.insert(s.to_vec(), ok);
    ok
}

/// `F^∨` as a bounded complex of sheaves in non-negative degrees.
pub fn derived_dual(f: &Sheaf) -> SheafComplex {
    let res = Resolution::complete_of_sheaf(f);
    dual_of_resolution(&res)
}

pub(crate) fn dual_of_resolution(res: &Resolution) -> SheafComplex {
    let p = res.base().clone();
    let n = p.len();
    if res.is_empty() {
        return SheafComplex::concentrated(&Sheaf::zero(&p), 0);
    }
    let mut cache = HashMap::new();
    let bases: Vec<usize> = {
        let mut b: Vec<usize> = (0..res.len()).flat_map(|k| res.generators(k).iter().map(|g| g.base)).collect();
        b.sort_unstable();
        b.dedup();
        b
    };
    let compact = bases.iter().all(|&x| (0..n).all(|w| acyclic(&p, &intersection(&p, x, w), &mut cache)));
    if compact {
        compact_dual(res)
    } else {
        cochain_dual(res)
    }
}

fn build(
    p: &FinitePoset,
    min_degree: i64,
    layout: &Layout,
    edge_source: impl Fn(usize, usize, &Label) -> Option<Label>,
    diff: impl Fn(usize, &Label) -> Vec<(Label, Int)>,
) -> SheafComplex {
    let n = p.len();
    let degrees = layout.labels.len();
    let mut terms = Vec::new();
    for q in 0..degrees {
        let stalks = (0..n).map(|w| FgAbGroup::free(layout.labels[q][w].len())).collect();
        let t = Sheaf::from_fn(p.clone(), stalks, |w, v| {
            let (src, tgt) = (&layout.labels[q][w], &layout.labels[q][v]);
            let mut m = IntMatrix::zeros(tgt.len(), src.len());
            for (r, l) in tgt.iter().enumerate() {
                if let Some(s) = edge_source(w, v, l) {
                    m[(r, layout.index[q][w][&s])] = Int::from(1);
                }
            }
            m
        })
        .expect("restrictions of duals are functorial");
        terms.push(t);
    }
    let mut diffs = Vec::new();
    for q in 0..degrees.saturating_sub(1) {
        let per_w = (0..n)
            .map(|w| {
                let (src, tgt) = (&layout.labels[q][w], &layout.labels[q + 1][w]);
                let mut m = IntMatrix::zeros(tgt.len(), src.len());
                for (c, l) in src.iter().enumerate() {
                    for (t, coeff) in diff(w, l) {
                        m[(layout.index[q + 1][w][&t], c)] += coeff;
                    }
                }
                m
            })
            .collect();
        diffs.push(per_w);
    }
    SheafComplex::new(p.clone(), min_degree, terms, diffs).expect("dual differentials square to zero")
}

/// `HHom(P_•, ℤ)` with `HHom(ℤ_{U_x}, ℤ)_w = ℤ^{π_0(U_x ∩ U_w)}`.
fn compact_dual(res: &Resolution) -> SheafComplex {
    let p = res.base();
    let n = p.len();
    let components = |x: usize, w: usize| p.connected_components(&intersection(p, x, w));
    let labels: Vec<Vec<Vec<Label>>> = (0..res.len())
        .map(|k| {
            (0..n)
                .map(|w| {
                    let mut ls = Vec::new();
                    for (g, gen) in res.generators(k).iter().enumerate() {
                        for c in components(gen.base, w) {
                            ls.push((k, g, c));
                        }
                    }
                    ls
                })
                .collect()
        })
        .collect();
    let layout = Layout::new(labels);
    // A component at the larger element lies in a unique component at the smaller one.
    let edge_source = |w: usize, _v: usize, l: &Label| {
        let (k, g, c) = l;
        let base = res.generators(*k)[*g].base;
        components(base, w).into_iter().find(|d| d.contains(&c[0])).map(|d| (*k, *g, d))
    };
    let diff = |w: usize, l: &Label| {
        let (k, h, c) = l;
        let mut out = Vec::new();
        for (g, gen) in res.generators(k + 1).iter().enumerate() {
            for (i, coeff) in &gen.image {
                if i != h {
                    continue;
                }
                for d in components(gen.base, w) {
                    if c.contains(&d[0]) {
                        out.push(((k + 1, g, d), coeff.clone()));
                    }
                }
            }
        }
        out
    };
    build(p, 0, &layout, edge_source, diff)
}

/// `Tot HHom(P_•, I^•)`, in degree `k + m` with differential `d^* + (−1)^k δ`.
fn cochain_dual(res: &Resolution) -> SheafComplex {
    let p = res.base();
    let n = p.len();
    let top = (res.len() - 1) + p.height().max(0) as usize;
    let chains_in = |x: usize, w: usize, m: usize| p.strict_chains(&intersection(p, x, w), m);
    let labels: Vec<Vec<Vec<Label>>> = (0..=top)
        .map(|q| {
            (0..n)
                .map(|w| {
                    let mut ls = Vec::new();
                    for k in 0..res.len().min(q + 1) {
                        let m = q - k;
                        for (g, gen) in res.generators(k).iter().enumerate() {
                            for ch in chains_in(gen.base, w, m) {
                                ls.push((k, g, ch));
                            }
                        }
                    }
                    ls
                })
                .collect()
        })
        .collect();
    let layout = Layout::new(labels);
    let edge_source = |_w: usize, _v: usize, l: &Label| Some(l.clone());
    let diff = |w: usize, l: &Label| {
        let (k, h, ch) = l;
        let mut out = Vec::new();
        for (g, gen) in res.generators(k + 1).iter().enumerate() {
            for (i, coeff) in &gen.image {
                if i == h && ch.iter().all(|&y| p.leq(gen.base, y)) {
                    out.push(((k + 1, g, ch.clone()), coeff.clone()));
                }
            }
        }
        let sign: i64 = if k % 2 == 0 { 1 } else { -1 };
        let base = res.generators(*k)[*h].base;
        for tau in chains_in(base, w, ch.len()) {
            for i in 0..tau.len() {
                let face: Vec<usize> = tau.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &y)| y).collect();
                if face == *ch {
                    let s = if i % 2 == 0 { sign } else { -sign };
                    out.push(((*k, *h, tau.clone()), Int::from(s)));
                }
            }
        }
        out
    };
    build(p, 0, &layout, edge_source, diff)
}

/// Checks `H^i(X, F^∨) ≅ Hom(H_i(X,F), ℤ) ⊕ Ext¹(H_{i−1}(X,F), ℤ)` for `i ≤ d`.
pub fn duality_sequence_check(f: &Sheaf, max_deg: usize) -> Report {
    let dual = derived_dual(f);
    let h = homology(f, max_deg);
    let coh = complex_cohomology(&dual, 0, max_deg as i64);
    let mut r = Report::new("homology-cohomology duality");
    for i in 0..=max_deg {
        r.compare(format!("H^{i}(F^v)"), &coh[i], &duality_expected(&h, i));
    }
    r
}
