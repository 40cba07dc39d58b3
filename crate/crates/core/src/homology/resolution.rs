//! The standard resolution by sums of `ℤ_{U_x}`.
//!
//! Level 0 has one copy of `ℤ_{U_z}` per stalk generator of `F^p_z`; level `k + 1`
//! has generators at `w` for whatever part of the stalk of `ker(P_k → P_{k−1})` at
//! `w` is not already generated from below. For a complex `F^•` each generator
//! `e` in degree `p` comes with a partner mapping to `d e` in degree `p + 1`, so that
//! every level is a complex and the augmentation is a chain map.
//!
//! Since `P_k` is a sum of `ℤ_{U_z}`, its stalk at `w` is free on the generators with
//! base `≤ w`, restrictions are coordinate inclusions, and `L(X, P_k)` is free on
//! all generators.

use zlinalg::{integer_kernel, ChainComplex, FgAbGroup, GroupMap, Int, IntMatrix, Lattice};

use crate::poset::FinitePoset;
use crate::sheaf::{Sheaf, SheafComplex};

/// One summand `ℤ_{U_base}` in cohomological degree `degree`.
#[derive(Clone, Debug)]
pub struct Generator {
    pub base: usize,
    pub degree: i64,
    /// Image under the resolution differential: sparse over the previous level's
    /// generators, or over the generators of `F^p_base` at level 0.
    pub image: Vec<(usize, Int)>,
    /// Index of the partner generator in degree `degree + 1`, if any.
    pub partner: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct Resolution {
    base: FinitePoset,
    min_degree: i64,
    max_degree: i64,
    levels: Vec<Vec<Generator>>,
    complete: bool,
}

/// Safety bound on the number of levels of a complete resolution.
const MAX_LEVELS: usize = 64;

fn dense(v: &[(usize, Int)], n: usize) -> Vec<Int> {
    let mut out = vec![Int::from(0); n];
    for (i, c) in v {
        out[*i] += c;
    }
    out
}

impl Resolution {
    /// Levels `0..=length`.
    pub fn new(f: &SheafComplex, length: usize) -> Resolution {
        Resolution::build(f, Some(length))
    }

    pub fn of_sheaf(f: &Sheaf, length: usize) -> Resolution {
        Resolution::new(&SheafComplex::concentrated(f, 0), length)
    }

    /// Resolves until the kernel vanishes.
    pub fn complete(f: &SheafComplex) -> Resolution {
        Resolution::build(f, None)
    }

    pub fn complete_of_sheaf(f: &Sheaf) -> Resolution {
        Resolution::complete(&SheafComplex::concentrated(f, 0))
    }

    fn build(f: &SheafComplex, length: Option<usize>) -> Resolution {
        let base = f.base().clone();
        let (pmin, pmax) = (f.min_degree(), f.max_degree());
        let order = base.linear_extension();
        let mut levels: Vec<Vec<Generator>> = Vec::new();

        // Level 0: every stalk generator, with partners carrying `d e`.
        let mut gens = Vec::new();
        for &z in &order {
            for p in pmin..=pmax {
                let g = f.stalk_gens(p, z);
                for j in 0..g {
                    let partner = if p < pmax {
                        let col = f.diff(p, z).column(j);
                        let image = col.into_iter().enumerate().filter(|(_, c)| c != &Int::from(0)).collect();
                        gens.push(Generator { base: z, degree: p + 1, image, partner: None });
                        Some(gens.len() - 1)
                    } else {
                        None
                    };
                    gens.push(Generator { base: z, degree: p, image: vec![(j, Int::from(1))], partner });
                }
            }
        }
        levels.push(gens);

        let mut complete = false;
        loop {
            let k = levels.len() - 1;
            if length.is_some_and(|l| k >= l) {
                break;
            }
            if levels[k].is_empty() {
                complete = true;
                break;
            }
            assert!(k < MAX_LEVELS, "resolution did not terminate");
            levels.push(next_level(&base, f, &order, &levels, pmin, pmax));
        }
        while levels.len() > 1 && levels.last().is_some_and(|l| l.is_empty()) {
            levels.pop();
        }
        Resolution { base, min_degree: pmin, max_degree: pmax, levels, complete }
    }

    pub fn base(&self) -> &FinitePoset {
        &self.base
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    /// Number of levels present.
    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.iter().all(|l| l.is_empty())
    }

    pub fn generators(&self, k: usize) -> &[Generator] {
        self.levels.get(k).map_or(&[], |v| v.as_slice())
    }

    /// Generators of level `k` in degree `p`, as indices.
    pub fn indices(&self, k: usize, p: i64) -> Vec<usize> {
        (0..self.generators(k).len()).filter(|&i| self.levels[k][i].degree == p).collect()
    }

    /// `L(d_k)` restricted to degree `p`, on the generator lists of [`Resolution::indices`].
    pub fn boundary(&self, k: usize, p: i64) -> IntMatrix {
        let src = self.indices(k, p);
        let tgt = self.indices(k - 1, p);
        let pos = positions(self.generators(k - 1).len(), &tgt);
        let cols: Vec<Vec<Int>> = src
            .iter()
            .map(|&g| {
                let mut v = vec![Int::from(0); tgt.len()];
                for (i, c) in &self.levels[k][g].image {
                    v[pos[*i].unwrap()] += c;
                }
                v
            })
            .collect();
        IntMatrix::from_columns(tgt.len(), &cols)
    }

    /// Internal differential of level `k` from degree `p` to `p + 1`.
    pub fn internal(&self, k: usize, p: i64) -> IntMatrix {
        let src = self.indices(k, p);
        let tgt = self.indices(k, p + 1);
        let pos = positions(self.generators(k).len(), &tgt);
        let mut m = IntMatrix::zeros(tgt.len(), src.len());
        for (c, &g) in src.iter().enumerate() {
            if let Some(t) = self.levels[k][g].partner {
                m[(pos[t].unwrap(), c)] = Int::from(1);
            }
        }
        m
    }

    /// `L(X, Tot P)`, in homological degree `k − p` (level 0 is the augmentation's
    /// source and is included as `k = 0`).
    pub fn cosections_complex(&self) -> ChainComplex {
        let (lo, hi, blocks) = self.total_blocks();
        if lo > hi {
            return ChainComplex::zero();
        }
        let size = |k: usize, p: i64| self.indices(k, p).len();
        let offsets: Vec<Vec<usize>> = blocks
            .iter()
            .map(|bs| {
                let mut o = vec![0];
                for &(k, p) in bs {
                    o.push(o.last().unwrap() + size(k, p));
                }
                o
            })
            .collect();
        let find = |d: i64, k: usize, p: i64| -> usize {
            let i = (d - lo) as usize;
            let j = blocks[i].iter().position(|&b| b == (k, p)).unwrap();
            offsets[i][j]
        };
        let mut boundaries = Vec::new();
        for d in lo + 1..=hi {
            let i = (d - lo) as usize;
            let mut m = IntMatrix::zeros(*offsets[i - 1].last().unwrap(), *offsets[i].last().unwrap());
            for (j, &(k, p)) in blocks[i].iter().enumerate() {
                let c = offsets[i][j];
                if k >= 1 {
                    m.add_block(find(d - 1, k - 1, p), c, &self.boundary(k, p));
                }
                if blocks[i - 1].contains(&(k, p + 1)) {
                    let s = if k % 2 == 0 { 1 } else { -1 };
                    m.add_block(find(d - 1, k, p + 1), c, &self.internal(k, p).scale(&Int::from(s)));
                }
            }
            boundaries.push(m);
        }
        let ranks: Vec<usize> = offsets.iter().map(|o| *o.last().unwrap()).collect();
        ChainComplex::free(lo, &ranks, boundaries).expect("resolution differentials compose to zero")
    }

    fn total_blocks(&self) -> (i64, i64, Vec<Vec<(usize, i64)>>) {
        let mut lo = i64::MAX;
        let mut hi = i64::MIN;
        for k in 0..self.len() {
            for p in self.min_degree..=self.max_degree {
                lo = lo.min(k as i64 - p);
                hi = hi.max(k as i64 - p);
            }
        }
        if lo > hi {
            return (0, -1, Vec::new());
        }
        let mut blocks = vec![Vec::new(); (hi - lo + 1) as usize];
        for k in 0..self.len() {
            for p in self.min_degree..=self.max_degree {
                blocks[(k as i64 - p - lo) as usize].push((k, p));
            }
        }
        (lo, hi, blocks)
    }

    /// `Tot P` as a complex of sheaves, in cohomological degree `p − k`, with
    /// differential `∂ + (−1)^k d`.
    pub fn as_sheaf_complex(&self) -> SheafComplex {
        let (lo, hi, blocks) = self.total_blocks();
        let n = self.base.len();
        if lo > hi {
            return SheafComplex::concentrated(&Sheaf::zero(&self.base), 0);
        }
        // Cohomological degree q = −(homological degree).
        let qs: Vec<i64> = (-hi..=-lo).collect();
        let block_of = |q: i64| &blocks[(-q - lo) as usize];
        // Local generator lists per (x, block).
        let local = |x: usize, k: usize, p: i64| -> Vec<usize> {
            self.indices(k, p).into_iter().filter(|&g| self.base.leq(self.levels[k][g].base, x)).collect()
        };
        let layout = |x: usize, q: i64| -> Vec<((usize, i64), Vec<usize>)> {
            block_of(q).iter().map(|&(k, p)| ((k, p), local(x, k, p))).collect()
        };
        let mut terms = Vec::new();
        let mut layouts: Vec<Vec<Vec<((usize, i64), Vec<usize>)>>> = Vec::new();
        for &q in &qs {
            let per_x: Vec<_> = (0..n).map(|x| layout(x, q)).collect();
            let stalks: Vec<FgAbGroup> =
                per_x.iter().map(|l| FgAbGroup::free(l.iter().map(|(_, v)| v.len()).sum())).collect();
            let sheaf = Sheaf::from_fn(self.base.clone(), stalks, |x, y| inclusion(&per_x[x], &per_x[y]))
                .expect("coordinate inclusions are functorial");
            terms.push(sheaf);
            layouts.push(per_x);
        }
        let mut diffs = Vec::new();
        for qi in 0..qs.len().saturating_sub(1) {
            let mut per_x = Vec::new();
            for x in 0..n {
                let src = &layouts[qi][x];
                let tgt = &layouts[qi + 1][x];
                let rows: usize = tgt.iter().map(|(_, v)| v.len()).sum();
                let cols: usize = src.iter().map(|(_, v)| v.len()).sum();
                let mut m = IntMatrix::zeros(rows, cols);
                let mut col = 0;
                for ((k, p), gens) in src {
                    for &g in gens {
                        let gen = &self.levels[*k][g];
                        if *k >= 1 {
                            for (h, c) in &gen.image {
                                let r = row_of(tgt, (*k - 1, *p), *h).expect("image supported below the base");
                                m[(r, col)] += c;
                            }
                        }
                        if let Some(t) = gen.partner {
                            let s = if k % 2 == 0 { 1 } else { -1 };
                            let r = row_of(tgt, (*k, *p + 1), t).expect("partner has the same base");
                            m[(r, col)] += Int::from(s);
                        }
                        col += 1;
                    }
                }
                per_x.push(m);
            }
            diffs.push(per_x);
        }
        SheafComplex::new_unchecked(self.base.clone(), qs[0], terms, diffs)
    }
}

fn row_of(layout: &[((usize, i64), Vec<usize>)], block: (usize, i64), g: usize) -> Option<usize> {
    let mut off = 0;
    for (b, gens) in layout {
        if *b == block {
            return gens.iter().position(|&h| h == g).map(|i| off + i);
        }
        off += gens.len();
    }
    None
}

fn inclusion(src: &[((usize, i64), Vec<usize>)], tgt: &[((usize, i64), Vec<usize>)]) -> IntMatrix {
    let rows: usize = tgt.iter().map(|(_, v)| v.len()).sum();
    let cols: usize = src.iter().map(|(_, v)| v.len()).sum();
    let mut m = IntMatrix::zeros(rows, cols);
    let mut col = 0;
    for (b, gens) in src {
        for &g in gens {
            m[(row_of(tgt, *b, g).unwrap(), col)] = Int::from(1);
            col += 1;
        }
    }
    m
}

fn positions(n: usize, list: &[usize]) -> Vec<Option<usize>> {
    let mut pos = vec![None; n];
    for (i, &g) in list.iter().enumerate() {
        pos[g] = Some(i);
    }
    pos
}

/// Kernel lattice of `P_k → P_{k−1}` (or the augmentation for `k = 0`) at `w` in
/// degree `p`, on the local generator list.
fn local_kernel(f: &SheafComplex, levels: &[Vec<Generator>], k: usize, w: usize, p: i64, local: &[usize]) -> Lattice {
    let base = f.base();
    let gens = &levels[k];
    if k == 0 {
        let stalk = f.term_ref(p).unwrap().stalk(w).clone();
        let cols: Vec<Vec<Int>> = local
            .iter()
            .map(|&g| {
                let gen = &gens[g];
                let v = dense(&gen.image, f.stalk_gens(p, gen.base));
                f.term_ref(p).unwrap().rho(gen.base, w).mul_vec(&v)
            })
            .collect();
        let m = IntMatrix::from_columns(stalk.num_gens(), &cols);
        GroupMap::new_unchecked(FgAbGroup::free(local.len()), stalk, m).kernel_lattice()
    } else {
        let prev: Vec<usize> = (0..levels[k - 1].len())
            .filter(|&h| levels[k - 1][h].degree == p && base.leq(levels[k - 1][h].base, w))
            .collect();
        let pos = positions(levels[k - 1].len(), &prev);
        let cols: Vec<Vec<Int>> = local
            .iter()
            .map(|&g| {
                let mut v = vec![Int::from(0); prev.len()];
                for (h, c) in &gens[g].image {
                    v[pos[*h].expect("image supported below the base")] += c;
                }
                v
            })
            .collect();
        let m = IntMatrix::from_columns(prev.len(), &cols);
        Lattice::span(local.len(), &integer_kernel(&m))
    }
}

fn next_level(
    base: &FinitePoset,
    f: &SheafComplex,
    order: &[usize],
    levels: &[Vec<Generator>],
    pmin: i64,
    pmax: i64,
) -> Vec<Generator> {
    let k = levels.len() - 1;
    let cur = &levels[k];
    let mut out: Vec<Generator> = Vec::new();
    for &w in order {
        for p in pmin..=pmax {
            let local: Vec<usize> =
                (0..cur.len()).filter(|&g| cur[g].degree == p && base.leq(cur[g].base, w)).collect();
            if local.is_empty() {
                continue;
            }
            let kernel = local_kernel(f, levels, k, w, p, &local);
            if kernel.rank() == 0 {
                continue;
            }
            let pos = positions(cur.len(), &local);
            // Span of what the generators created so far already cover at w.
            let existing: Vec<Vec<Int>> = out
                .iter()
                .filter(|g| g.degree == p && base.leq(g.base, w))
                .map(|g| {
                    let mut v = vec![Int::from(0); local.len()];
                    for (h, c) in &g.image {
                        v[pos[*h].expect("image supported below the base")] += c;
                    }
                    v
                })
                .collect();
            let s = IntMatrix::from_columns(local.len(), &existing);
            let quotient = FgAbGroup::presented(kernel.coords_matrix(&s));
            let lifts = kernel.basis().mul(quotient.normal_generators());
            for c in 0..lifts.cols() {
                let v = lifts.column(c);
                let image: Vec<(usize, Int)> =
                    v.iter().enumerate().filter(|(_, x)| **x != Int::from(0)).map(|(i, x)| (local[i], x.clone())).collect();
                let partner = if p < pmax {
                    let mut top: Vec<(usize, Int)> = Vec::new();
                    for (h, c) in &image {
                        if let Some(t) = cur[*h].partner {
                            top.push((t, c.clone()));
                        }
                    }
                    out.push(Generator { base: w, degree: p + 1, image: top, partner: None });
                    Some(out.len() - 1)
                } else {
                    None
                };
                out.push(Generator { base: w, degree: p, image, partner });
            }
        }
    }
    out
}
