//! The dualizing complex `D_X` of a finite space, Poincaré-Verdier checks and
//! homological manifolds.
//!
//! The stalk of `D_X` at `x` is `ℝHom(ℝΓ(X, ℤ_{U_x}), ℤ)`. With `ℝΓ` computed by
//! the cobar complex, `D^{−n}_x` is free on the strict chains `x_0 < … < x_n` with
//! `x ≤ x_n`, the differential is the transpose of the cobar differential, and for
//! `x ≤ y` the structure map forgets the chains whose top is not above `y`.

use std::collections::{HashMap, VecDeque};

use zlinalg::{FgAbGroup, Int, IntMatrix};

use crate::error::Error;
use crate::homology::complex_cohomology;
use crate::poset::FinitePoset;
use crate::report::Report;
use crate::sheaf::{Sheaf, SheafComplex};

#[derive(Clone, Debug)]
pub struct DualizingComplex {
    /// `D_X`, in cohomological degrees `−height ..= 0`.
    pub complex: SheafComplex,
    /// Chains indexing the generators of `D^{−n}_x`, per `n` and `x`.
    pub chains: Vec<Vec<Vec<Vec<usize>>>>,
}

impl DualizingComplex {
    pub fn base(&self) -> &FinitePoset {
        self.complex.base()
    }

    /// `H^j(D_X)_x`.
    pub fn stalk_cohomology(&self, x: usize, j: i64) -> FgAbGroup {
        self.complex.stalk_cohomology(x, j).group().clone()
    }
}

pub fn dualizing_complex(p: &FinitePoset) -> DualizingComplex {
    let n_el = p.len();
    let h = p.height();
    if h < 0 {
        let z = SheafComplex::concentrated(&Sheaf::zero(p), 0);
        return DualizingComplex { complex: z, chains: Vec::new() };
    }
    let h = h as usize;
    let all = p.all();
    let chains: Vec<Vec<Vec<Vec<usize>>>> = (0..=h)
        .map(|n| {
            let cs = p.strict_chains(&all, n);
            (0..n_el)
                .map(|x| cs.iter().filter(|c| p.leq(x, *c.last().unwrap())).cloned().collect())
                .collect()
        })
        .collect();
    let index: Vec<Vec<HashMap<&[usize], usize>>> = chains
        .iter()
        .map(|per_x| per_x.iter().map(|cs| cs.iter().enumerate().map(|(i, c)| (c.as_slice(), i)).collect()).collect())
        .collect();
    // Degree −n is term h − n.
    let terms: Vec<Sheaf> = (0..=h)
        .rev()
        .map(|n| {
            let stalks = (0..n_el).map(|x| FgAbGroup::free(chains[n][x].len())).collect();
            Sheaf::from_fn(p.clone(), stalks, |x, y| {
                let mut m = IntMatrix::zeros(chains[n][y].len(), chains[n][x].len());
                for (r, c) in chains[n][y].iter().enumerate() {
                    m[(r, index[n][x][c.as_slice()])] = Int::from(1);
                }
                m
            })
            .expect("projections are functorial")
        })
        .collect();
    // D^{−n−1} → D^{−n}: a chain goes to the alternating sum of its faces.
    let diffs: Vec<Vec<IntMatrix>> = (0..h)
        .rev()
        .map(|n| {
            (0..n_el)
                .map(|x| {
                    let (src, tgt) = (&chains[n + 1][x], &chains[n][x]);
                    let mut m = IntMatrix::zeros(tgt.len(), src.len());
                    for (c, tau) in src.iter().enumerate() {
                        for i in 0..tau.len() {
                            let face: Vec<usize> =
                                tau.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &v)| v).collect();
                            if let Some(&r) = index[n][x].get(face.as_slice()) {
                                m[(r, c)] += Int::from(if i % 2 == 0 { 1 } else { -1 });
                            }
                        }
                    }
                    m
                })
                .collect()
        })
        .collect();
    let complex = SheafComplex::new(p.clone(), -(h as i64), terms, diffs).expect("faces of faces cancel");
    DualizingComplex { complex, chains }
}

/// Compares `H^{−i}(X, ℤ_{U_x} ⊗ D_X)` with `H_i(U_x, ℤ)` (`ℤ` in degree 0) for every `x`
/// and `i ≤ d`.
pub fn pv_check(p: &FinitePoset, max_deg: usize) -> Report {
    let d = dualizing_complex(p);
    let mut r = Report::new("Poincare-Verdier");
    for x in 0..p.len() {
        let dx = d.complex.keep_stalks(&p.minimal_open(x));
        let h = complex_cohomology(&dx, -(max_deg as i64), 0);
        for i in 0..=max_deg {
            let expected = if i == 0 { FgAbGroup::free(1) } else { FgAbGroup::zero() };
            r.compare(format!("U_{} H_{i}", p.name(x)), &h[max_deg - i], &expected);
        }
    }
    r
}

/// `H^{−i}(X, D_X)` for `i ≤ d`, which is `H_i(X, ℤ)` on PV-spaces.
pub fn global_dual_homology(p: &FinitePoset, max_deg: usize) -> Vec<FgAbGroup> {
    let d = dualizing_complex(p);
    let mut h = complex_cohomology(&d.complex, -(max_deg as i64), 0);
    h.reverse();
    h
}

#[derive(Clone, Debug)]
pub struct ManifoldReport {
    pub is_manifold: bool,
    pub dimension: Option<usize>,
    /// Sign of every Hasse cover in the orientation sheaf, when a manifold.
    pub orientation_signs: Vec<((usize, usize), i64)>,
    /// The orientation sheaf `𝕋_X`, when a manifold.
    pub orientation_sheaf: Option<Sheaf>,
    pub orientable: Option<bool>,
    pub witnesses: Vec<String>,
}

/// Whether the stalk cohomology of `D_X` is `ℤ` in a single degree `−n` at every point
/// with isomorphisms along every cover.
pub fn homological_manifold_check(p: &FinitePoset) -> ManifoldReport {
    let d = dualizing_complex(p);
    let fail = |w: Vec<String>| ManifoldReport {
        is_manifold: false,
        dimension: None,
        orientation_signs: Vec::new(),
        orientation_sheaf: None,
        orientable: None,
        witnesses: w,
    };
    let lo = d.complex.min_degree();
    let mut dimension: Option<i64> = None;
    let mut witnesses = Vec::new();
    for x in 0..p.len() {
        let nonzero: Vec<(i64, FgAbGroup)> =
            (lo..=0).map(|j| (j, d.stalk_cohomology(x, j))).filter(|(_, g)| !g.is_zero()).collect();
        match nonzero.as_slice() {
            [] => witnesses.push(format!("stalk at {} vanishes", p.name(x))),
            [(j, g)] => {
                if !g.is_isomorphic(&FgAbGroup::free(1)) {
                    witnesses.push(format!("stalk at {} is {g} in degree {j}", p.name(x)));
                } else if dimension.is_some_and(|n| n != *j) {
                    witnesses.push(format!("stalk at {} sits in degree {j}", p.name(x)));
                } else {
                    dimension = Some(*j);
                }
            }
            _ => {
                let degs: Vec<String> = nonzero.iter().map(|(j, g)| format!("H^{j} = {g}")).collect();
                witnesses.push(format!("stalk at {} is spread over {}", p.name(x), degs.join(", ")));
            }
        }
    }
    if p.is_empty() || !witnesses.is_empty() {
        return fail(witnesses);
    }
    let j = dimension.unwrap();
    let mut signs = Vec::new();
    for &(x, y) in p.covers() {
        let m = d.complex.stalk_cohomology_map(x, y, j).normal_matrix();
        let s = &m[(0, 0)];
        if *s == Int::from(1) || *s == Int::from(-1) {
            signs.push(((x, y), if *s == Int::from(1) { 1 } else { -1 }));
        } else {
            witnesses.push(format!("map {} -> {} is multiplication by {s}", p.name(x), p.name(y)));
        }
    }
    if !witnesses.is_empty() {
        return fail(witnesses);
    }
    let z = FgAbGroup::free(1);
    let sign_of: HashMap<(usize, usize), i64> = signs.iter().copied().collect();
    let sheaf = Sheaf::new(
        p.clone(),
        vec![z; p.len()],
        p.covers().iter().map(|c| IntMatrix::from_rows(&[vec![sign_of[c]]])).collect(),
    )
    .ok();
    ManifoldReport {
        is_manifold: true,
        dimension: Some((-j) as usize),
        orientable: Some(signs_trivializable(p, &sign_of)),
        orientation_signs: signs,
        orientation_sheaf: sheaf,
        witnesses: Vec::new(),
    }
}

/// Whether there are `s(x) = ±1` with `sign(x, y) = s(x) s(y)` on every cover.
fn signs_trivializable(p: &FinitePoset, sign: &HashMap<(usize, usize), i64>) -> bool {
    let mut adj = vec![Vec::new(); p.len()];
    for (&(x, y), &s) in sign {
        adj[x].push((y, s));
        adj[y].push((x, s));
    }
    let mut s: Vec<Option<i64>> = vec![None; p.len()];
    for start in 0..p.len() {
        if s[start].is_some() {
            continue;
        }
        s[start] = Some(1);
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            let sx = s[x].unwrap();
            for &(y, e) in &adj[x] {
                match s[y] {
                    None => {
                        s[y] = Some(sx * e);
                        queue.push_back(y);
                    }
                    Some(sy) if sy != sx * e => return false,
                    _ => {}
                }
            }
        }
    }
    true
}

/// Compares the stalk cohomology of `(D_X)|_U` and `D_U` for an open `U`; the two
/// need not agree.
pub fn restriction_comparison(p: &FinitePoset, u: &[usize]) -> Result<Report, Error> {
    p.require_open(u)?;
    let dx = dualizing_complex(p);
    let (sub, _) = p.subposet(u);
    let du = dualizing_complex(&sub);
    let lo = dx.complex.min_degree().min(du.complex.min_degree());
    let mut r = Report::new(format!("restriction of D_X to {}", p.describe(u)));
    for (i, &x) in u.iter().enumerate() {
        for j in lo..=0 {
            let a = dx.stalk_cohomology(x, j);
            let b = if j >= du.complex.min_degree() { du.stalk_cohomology(i, j) } else { FgAbGroup::zero() };
            r.compare(format!("H^{j} at {}", p.name(x)), &a, &b);
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sierpinski() -> FinitePoset {
        FinitePoset::new(&["a", "b"], &[("a", "b")]).unwrap()
    }

    #[test]
    fn point() {
        let pt = FinitePoset::point();
        let d = dualizing_complex(&pt);
        assert_eq!(d.stalk_cohomology(0, 0).to_string(), "Z");
        assert!(pv_check(&pt, 2).passed());
        let m = homological_manifold_check(&pt);
        assert_eq!(m.dimension, Some(0));
        assert_eq!(m.orientable, Some(true));
    }

    #[test]
    fn sierpinski_is_a_skyscraper() {
        let s = sierpinski();
        let d = dualizing_complex(&s);
        assert_eq!(d.stalk_cohomology(0, 0).to_string(), "Z");
        assert!(d.stalk_cohomology(0, -1).is_zero());
        assert!((-1..=0).all(|j| d.stalk_cohomology(1, j).is_zero()));
        assert!(!pv_check(&s, 1).passed());
        let m = homological_manifold_check(&s);
        assert!(!m.is_manifold);
        assert_eq!(m.witnesses, ["stalk at b vanishes"]);
    }

    #[test]
    fn spheres_are_manifolds() {
        for n in 0..=2 {
            let s = FinitePoset::sphere(n);
            let m = homological_manifold_check(&s);
            assert!(m.is_manifold, "{:?}", m.witnesses);
            assert_eq!(m.dimension, Some(n));
            assert_eq!(m.orientable, Some(true));
            assert!(pv_check(&s, n + 1).passed());
        }
    }

    #[test]
    fn restriction_to_minimal_open_of_circle() {
        let s1 = FinitePoset::sphere(1);
        let r = restriction_comparison(&s1, &s1.minimal_open(0)).unwrap();
        assert!(!r.items.is_empty());
    }
}
