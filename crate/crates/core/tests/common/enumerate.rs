//! Exhaustive enumeration of morphisms between finite sheaves and cosheaves.

use std::collections::HashSet;

use finsheaf::zlinalg::{FgAbGroup, Int, IntMatrix};
use finsheaf::random::{random_finite_sheaf, random_poset};
use finsheaf::{cos, shf, shf_morphism, unit, Cosheaf, CosheafMorphism, Sheaf};
use rand::Rng;

use super::rng;

/// Every homomorphism `a → b` of finite groups, by choosing images of the normal generators.
fn homs(a: &FgAbGroup, b: &FgAbGroup) -> Vec<IntMatrix> {
    let (rank, torsion) = a.invariants();
    assert_eq!(rank, 0);
    let elements = b.enumerate();
    let mut tuples: Vec<Vec<&Vec<Int>>> = vec![Vec::new()];
    for t in &torsion {
        let ok: Vec<&Vec<Int>> =
            elements.iter().filter(|y| b.is_zero_element(&y.iter().map(|v| v * t).collect::<Vec<_>>())).collect();
        tuples = tuples.iter().flat_map(|tu| ok.iter().map(move |y| [tu.clone(), vec![*y]].concat())).collect();
    }
    tuples
        .iter()
        .map(|tu| {
            let cols: Vec<Vec<Int>> = tu.iter().map(|y| y.to_vec()).collect();
            IntMatrix::from_columns(b.num_gens(), &cols).mul(a.to_normal_matrix())
        })
        .collect()
}

/// An arrow `i → j` carrying `s: src_i → src_j` and `t: tgt_i → tgt_j`.
type Arrow<'a> = (usize, usize, &'a IntMatrix, &'a IntMatrix);

/// All natural transformations, by backtracking over objects.
fn transformations(src: &[FgAbGroup], tgt: &[FgAbGroup], arrows: &[Arrow]) -> Vec<Vec<IntMatrix>> {
    let options: Vec<Vec<IntMatrix>> = src.iter().zip(tgt).map(|(a, b)| homs(a, b)).collect();
    let mut out = Vec::new();
    let mut chosen: Vec<IntMatrix> = Vec::new();
    fn go(
        k: usize,
        options: &[Vec<IntMatrix>],
        tgt: &[FgAbGroup],
        arrows: &[Arrow],
        chosen: &mut Vec<IntMatrix>,
        out: &mut Vec<Vec<IntMatrix>>,
    ) {
        if k == options.len() {
            out.push(chosen.clone());
            return;
        }
        for m in &options[k] {
            chosen.push(m.clone());
            let ok = arrows.iter().filter(|a| a.0.max(a.1) == k).all(|&(i, j, s, t)| {
                tgt[j].columns_vanish(&t.mul(&chosen[i]).sub(&chosen[j].mul(s)))
            });
            if ok {
                go(k + 1, options, tgt, arrows, chosen, out);
            }
            chosen.pop();
        }
    }
    go(0, &options, tgt, arrows, &mut chosen, &mut out);
    out
}

pub fn sheaf_homs(f: &Sheaf, g: &Sheaf) -> Vec<Vec<IntMatrix>> {
    let p = f.base();
    let arrows: Vec<Arrow> =
        p.covers().iter().enumerate().map(|(k, &(x, y))| (x, y, f.edge_matrix(k), g.edge_matrix(k))).collect();
    transformations(f.stalks(), g.stalks(), &arrows)
}

pub fn cosheaf_homs(q: &Cosheaf, r: &Cosheaf) -> Vec<Vec<IntMatrix>> {
    let p = q.base();
    let arrows: Vec<Arrow> =
        p.covers().iter().enumerate().map(|(k, &(x, y))| (y, x, q.edge_matrix(k), r.edge_matrix(k))).collect();
    let values = |c: &Cosheaf| (0..p.len()).map(|x| c.value_at(x).clone()).collect::<Vec<_>>();
    transformations(&values(q), &values(r), &arrows)
}

pub fn finite_order(g: &FgAbGroup) -> u64 {
    g.order().map_or(u64::MAX, |o| o.try_into().unwrap_or(u64::MAX))
}

/// Checks that `ψ ↦ shf(ψ) ∘ η_F` is a bijection `Hom(cos F, Q) → Hom(F, shf Q)`.
/// Returns the number of morphisms, or `None` when the instance is too large to enumerate.
pub fn adjunction_bijection(f: &Sheaf, q: &Cosheaf) -> Option<usize> {
    let cf = cos(f);
    let sq = shf(q);
    let p = f.base();
    // Rough bound on the search: skip instances with huge hom sets.
    let budget: f64 = (0..p.len())
        .map(|x| {
            let gens = f.stalk(x).normal_len() as i32;
            (finite_order(sq.stalk(x)) as f64).powi(gens) + (finite_order(q.value_at(x)) as f64).powi(gens)
        })
        .product();
    if budget > 1e7 {
        return None;
    }
    let left = cosheaf_homs(&cf, q);
    let right = sheaf_homs(f, &sq);
    assert_eq!(left.len(), right.len());
    let count = left.len();
    let eta = unit(f);
    let mut seen = HashSet::new();
    for comps in left {
        let psi = CosheafMorphism::new(cf.clone(), q.clone(), comps).unwrap();
        let adj = eta.then(&shf_morphism(&psi));
        let mut key: Vec<Vec<Int>> = Vec::new();
        for x in 0..p.len() {
            let m = adj.component(x);
            key.extend((0..m.cols()).map(|c| sq.stalk(x).normal_coords(&m.column(c))));
        }
        assert!(seen.insert(key), "two cosheaf morphisms with the same adjunct");
    }
    Some(count)
}


/// Runs the bijection check on random instances (posets of at most 6 elements, stalk
/// orders at most 8) until `wanted` of them have more than one morphism. Returns the
/// number of instances checked.
pub fn adjunction_suite(seed: u64, wanted: usize) -> usize {
    let (mut checked, mut nontrivial) = (0, 0);
    let mut r = rng(seed);
    while nontrivial < wanted {
        let n = r.gen_range(1..=6);
        let p = random_poset(&mut r, n, 0.4);
        let f = random_finite_sheaf(&mut r, &p, 8);
        let g = random_finite_sheaf(&mut r, &p, 8);
        let q = match r.gen_range(0..3) {
            0 => Cosheaf::constant(&p, &FgAbGroup::cyclic(r.gen_range(2..=4))),
            1 => cos(&f),
            _ => cos(&g),
        };
        if (0..p.len()).any(|x| finite_order(q.value_at(x)) > 8) {
            continue;
        }
        if let Some(count) = adjunction_bijection(&f, &q) {
            checked += 1;
            nontrivial += usize::from(count > 1);
        }
        assert!(checked < 8 * wanted + 50, "too few instances with non-trivial hom sets");
    }
    checked
}
