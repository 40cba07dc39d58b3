//! Seeded random spaces, sheaves and subsets for property tests.

use rand::seq::SliceRandom;
use rand::Rng;
use zlinalg::{FgAbGroup, Int, IntMatrix};

use crate::poset::{element_set, ElementSet, FinitePoset};
use crate::sheaf::Sheaf;

/// A poset on `n` elements from a random DAG compatible with `0 < 1 < … < n − 1`.
pub fn random_poset<R: Rng>(rng: &mut R, n: usize, density: f64) -> FinitePoset {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut rel = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                rel.push((perm[i], perm[j]));
            }
        }
    }
    let names = (0..n).map(|i| format!("x{i}")).collect();
    FinitePoset::from_relation(names, &rel)
}

/// Shape of a random sheaf: the cokernel of a random map `⊕ ℤ_{U_{y_j}} → ⊕ ℤ_{U_{x_i}}`.
#[derive(Clone, Copy, Debug)]
pub struct SheafShape {
    pub generators: usize,
    pub relations: usize,
    pub max_coeff: i64,
    /// Adds `d·e_i = 0` with `d ∈ {2, 3, 4}` for every generator, so all stalks are finite.
    pub finite: bool,
}

impl Default for SheafShape {
    fn default() -> Self {
        SheafShape { generators: 4, relations: 3, max_coeff: 2, finite: false }
    }
}

pub fn random_sheaf<R: Rng>(rng: &mut R, p: &FinitePoset, shape: SheafShape) -> Sheaf {
    let n = p.len();
    let xs: Vec<usize> = (0..shape.generators).map(|_| rng.gen_range(0..n)).collect();
    // (y, coefficients on the generators x_i ≤ y)
    let mut rels: Vec<(usize, Vec<(usize, Int)>)> = Vec::new();
    for _ in 0..shape.relations {
        let y = rng.gen_range(0..n);
        let coeffs = (0..xs.len())
            .filter(|&i| p.leq(xs[i], y))
            .map(|i| (i, Int::from(rng.gen_range(-shape.max_coeff..=shape.max_coeff))))
            .collect();
        rels.push((y, coeffs));
    }
    if shape.finite {
        for (i, &x) in xs.iter().enumerate() {
            rels.push((x, vec![(i, Int::from(rng.gen_range(2..=4)))]));
        }
    }
    presented_sheaf(p, &xs, &rels)
}

/// Random finite sheaf whose stalks have order at most `max_order`.
pub fn random_finite_sheaf<R: Rng>(rng: &mut R, p: &FinitePoset, max_order: u64) -> Sheaf {
    loop {
        let shape = SheafShape {
            generators: rng.gen_range(1..=3),
            relations: rng.gen_range(0..=2),
            max_coeff: 2,
            finite: true,
        };
        let f = random_sheaf(rng, p, shape);
        let small = f.stalks().iter().all(|g| g.order().is_some_and(|o| o <= Int::from(max_order)));
        if small {
            return f;
        }
    }
}

fn presented_sheaf(p: &FinitePoset, xs: &[usize], rels: &[(usize, Vec<(usize, Int)>)]) -> Sheaf {
    let gens_at = |w: usize| -> Vec<usize> { (0..xs.len()).filter(|&i| p.leq(xs[i], w)).collect() };
    let stalks = (0..p.len())
        .map(|w| {
            let gens = gens_at(w);
            let cols: Vec<Vec<Int>> = rels
                .iter()
                .filter(|(y, _)| p.leq(*y, w))
                .map(|(_, c)| {
                    let mut v = vec![Int::from(0); gens.len()];
                    for (i, a) in c {
                        v[gens.iter().position(|g| g == i).unwrap()] += a;
                    }
                    v
                })
                .collect();
            FgAbGroup::presented(IntMatrix::from_columns(gens.len(), &cols))
        })
        .collect();
    Sheaf::from_fn(p.clone(), stalks, |w, v| {
        let (gw, gv) = (gens_at(w), gens_at(v));
        let mut m = IntMatrix::zeros(gv.len(), gw.len());
        for (c, i) in gw.iter().enumerate() {
            m[(gv.iter().position(|g| g == i).unwrap(), c)] = Int::from(1);
        }
        m
    })
    .expect("presented sheaves are functorial")
    .normalized()
}

fn random_subset<R: Rng>(rng: &mut R, s: &[usize]) -> ElementSet {
    element_set(s.iter().copied().filter(|_| rng.gen_bool(0.5)).collect())
}

/// Two opens covering the space.
pub fn random_open_cover<R: Rng>(rng: &mut R, p: &FinitePoset) -> (ElementSet, ElementSet) {
    let u = p.up_closure(&random_subset(rng, &p.all()));
    let mut rest = p.complement(&u);
    rest.extend(random_subset(rng, &u));
    let v = p.up_closure(&element_set(rest));
    (u, v)
}

/// Two closed sets covering the space.
pub fn random_closed_cover<R: Rng>(rng: &mut R, p: &FinitePoset) -> (ElementSet, ElementSet) {
    let y = p.down_closure(&random_subset(rng, &p.all()));
    let mut rest = p.complement(&y);
    rest.extend(random_subset(rng, &y));
    let z = p.down_closure(&element_set(rest));
    (y, z)
}

/// An open `U` and a closed `Y ⊆ U`.
pub fn random_excision_pair<R: Rng>(rng: &mut R, p: &FinitePoset) -> (ElementSet, ElementSet) {
    let u = p.up_closure(&random_subset(rng, &p.all()));
    let inside: Vec<usize> = u.iter().copied().filter(|&x| p.point_closure(x).iter().all(|z| u.contains(z))).collect();
    let y = p.down_closure(&random_subset(rng, &inside));
    (u, y)
}

/// Random elements of random stalks, for generating subsheaves.
pub fn random_elements<R: Rng>(rng: &mut R, f: &Sheaf, count: usize) -> Vec<(usize, Vec<Int>)> {
    let n = f.base().len();
    (0..count)
        .map(|_| {
            let x = rng.gen_range(0..n);
            let v = (0..f.stalk(x).num_gens()).map(|_| Int::from(rng.gen_range(-2..=2))).collect();
            (x, v)
        })
        .collect()
}
