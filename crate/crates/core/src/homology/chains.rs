//! Normalized bar and cobar complexes over strict chains.
//!
//! For a complex of sheaves `F^•` the bar total complex has, in homological degree
//! `n − p`, one block `F^p_{x_0}` per chain `x_0 < … < x_n`, with differential
//! `∂_bar + (−1)^n d`. The cobar total complex has blocks `F^p_{x_n}` in
//! cohomological degree `n + p` (stored in homological degree `−n − p`), with
//! differential `δ + (−1)^n d`.

use std::collections::HashMap;

use zlinalg::{ChainComplex, ChainMap, FgAbGroup, IntMatrix};

use crate::poset::FinitePoset;
use crate::sheaf::{Sheaf, SheafComplex};

/// All strict chains inside a subset, grouped by length.
#[derive(Clone, Debug)]
pub struct Chains {
    by_degree: Vec<Vec<Vec<usize>>>,
    index: HashMap<Vec<usize>, usize>,
}

impl Chains {
    pub fn new(p: &FinitePoset, s: &[usize]) -> Chains {
        let mut by_degree = Vec::new();
        let mut index = HashMap::new();
        for n in 0.. {
            let c = p.strict_chains(s, n);
            if c.is_empty() {
                break;
            }
            for (i, ch) in c.iter().enumerate() {
                index.insert(ch.clone(), i);
            }
            by_degree.push(c);
        }
        Chains { by_degree, index }
    }

    /// Number of chain lengths present (height + 1, or 0 for the empty set).
    pub fn levels(&self) -> usize {
        self.by_degree.len()
    }

    pub fn get(&self, n: usize) -> &[Vec<usize>] {
        self.by_degree.get(n).map_or(&[], |v| v.as_slice())
    }

    pub fn find(&self, chain: &[usize]) -> Option<usize> {
        self.index.get(chain).copied()
    }
}

fn without(chain: &[usize], i: usize) -> Vec<usize> {
    chain.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, &x)| x).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BlockKey {
    pub n: usize,
    pub p: i64,
    pub chain: usize,
}

/// A total complex together with the position of every `(chain, degree)` block.
#[derive(Clone, Debug)]
pub struct Total {
    pub complex: ChainComplex,
    pub chains: Chains,
    /// Homological degree and offset of each block.
    pub blocks: HashMap<BlockKey, (i64, usize)>,
}

impl Total {
    /// Offset of a block, which lives in the homological degree returned alongside.
    pub fn block(&self, n: usize, p: i64, chain: &[usize]) -> Option<(i64, usize)> {
        let c = self.chains.find(chain)?;
        self.blocks.get(&BlockKey { n, p, chain: c }).copied()
    }
}

enum Kind {
    Bar,
    Cobar,
}

fn total(f: &SheafComplex, s: &[usize], kind: Kind) -> Total {
    let base = f.base();
    let chains = Chains::new(base, s);
    let levels = chains.levels();
    let (pmin, pmax) = (f.min_degree(), f.max_degree());
    let mut blocks = HashMap::new();
    if levels == 0 || f.terms().is_empty() {
        return Total { complex: ChainComplex::zero(), chains, blocks };
    }
    let h = levels as i64 - 1;
    let deg = |n: usize, p: i64| match kind {
        Kind::Bar => n as i64 - p,
        Kind::Cobar => -(n as i64) - p,
    };
    let anchor = |ch: &[usize]| match kind {
        Kind::Bar => ch[0],
        Kind::Cobar => *ch.last().unwrap(),
    };
    let (lo, hi) = match kind {
        Kind::Bar => (-pmax, h - pmin),
        Kind::Cobar => (-h - pmax, -pmin),
    };
    let span = (hi - lo + 1) as usize;
    let mut groups: Vec<Vec<FgAbGroup>> = vec![Vec::new(); span];
    let mut sizes = vec![0usize; span];
    for p in pmin..=pmax {
        let term = f.term_ref(p).unwrap();
        for n in 0..levels {
            for (c, ch) in chains.get(n).iter().enumerate() {
                let d = deg(n, p);
                let i = (d - lo) as usize;
                let g = term.stalk(anchor(ch)).clone();
                blocks.insert(BlockKey { n, p, chain: c }, (d, sizes[i]));
                sizes[i] += g.num_gens();
                groups[i].push(g);
            }
        }
    }
    let mut boundaries: Vec<IntMatrix> = (1..span).map(|i| IntMatrix::zeros(sizes[i - 1], sizes[i])).collect();
    let sign = |k: usize| if k % 2 == 0 { 1 } else { -1 };
    for p in pmin..=pmax {
        let term = f.term_ref(p).unwrap();
        for n in 0..levels {
            for (c, ch) in chains.get(n).iter().enumerate() {
                let (d, off) = blocks[&BlockKey { n, p, chain: c }];
                let a = anchor(ch);
                match kind {
                    Kind::Bar => {
                        if n > 0 {
                            for i in 0..=n {
                                let face = chains.find(&without(ch, i)).unwrap();
                                let (_, toff) = blocks[&BlockKey { n: n - 1, p, chain: face }];
                                let m = if i == 0 {
                                    term.rho(ch[0], ch[1]).clone()
                                } else {
                                    IntMatrix::identity(term.stalk(a).num_gens())
                                };
                                boundaries[(d - lo - 1) as usize].add_block(toff, off, &m.scale(&sign(i).into()));
                            }
                        }
                    }
                    Kind::Cobar => {
                        if n + 1 < levels {
                            for (t, tau) in chains.get(n + 1).iter().enumerate() {
                                for i in 0..=n + 1 {
                                    if without(tau, i) != *ch {
                                        continue;
                                    }
                                    let (_, toff) = blocks[&BlockKey { n: n + 1, p, chain: t }];
                                    let m = if i == n + 1 {
                                        term.rho(tau[n], tau[n + 1]).clone()
                                    } else {
                                        IntMatrix::identity(term.stalk(a).num_gens())
                                    };
                                    boundaries[(d - lo - 1) as usize].add_block(toff, off, &m.scale(&sign(i).into()));
                                }
                            }
                        }
                    }
                }
                if p < pmax {
                    let (td, toff) = blocks[&BlockKey { n, p: p + 1, chain: c }];
                    debug_assert_eq!(td, d - 1);
                    let m = f.diff(p, a).scale(&sign(n).into());
                    boundaries[(d - lo - 1) as usize].add_block(toff, off, &m);
                }
            }
        }
    }
    let groups = groups.into_iter().map(|g| FgAbGroup::direct_sum(&g)).collect();
    Total { complex: ChainComplex::new_unchecked(lo, groups, boundaries), chains, blocks }
}

/// Bar total complex of `F^•` over chains inside `s`.
pub fn bar_total(f: &SheafComplex, s: &[usize]) -> Total {
    total(f, s, Kind::Bar)
}

/// Cobar total complex of `F^•` over chains inside `s`.
pub fn cobar_total(f: &SheafComplex, s: &[usize]) -> Total {
    total(f, s, Kind::Cobar)
}

pub fn bar_complex(f: &Sheaf, s: &[usize]) -> Total {
    bar_total(&SheafComplex::concentrated(f, 0), s)
}

pub fn cobar_complex(f: &Sheaf, s: &[usize]) -> Total {
    cobar_total(&SheafComplex::concentrated(f, 0), s)
}

/// Chain map between bar totals sending the block of `σ` to the block of `φ(σ)`
/// (zero when `φ(σ)` is degenerate), through `component(p, x_0)`.
pub fn bar_map(
    src: &Total,
    tgt: &Total,
    phi: impl Fn(usize) -> usize,
    component: impl Fn(i64, usize) -> IntMatrix,
) -> ChainMap {
    let (s, t) = (&src.complex, &tgt.complex);
    let lo = s.min_degree().min(t.min_degree());
    let hi = s.max_degree().max(t.max_degree());
    let mut mats: Vec<IntMatrix> = (lo..=hi).map(|d| IntMatrix::zeros(t.rank(d), s.rank(d))).collect();
    for (key, &(d, off)) in &src.blocks {
        let ch = &src.chains.get(key.n)[key.chain];
        let image: Vec<usize> = ch.iter().map(|&x| phi(x)).collect();
        if image.windows(2).any(|w| w[0] == w[1]) {
            continue;
        }
        if let Some((td, toff)) = tgt.block(key.n, key.p, &image) {
            debug_assert_eq!(td, d);
            mats[(d - lo) as usize].add_block(toff, off, &component(key.p, ch[0]));
        }
    }
    ChainMap::new_unchecked(s.clone(), t.clone(), lo, mats)
}

/// Pullback of cobar cochains along `φ`: the block of `σ` in the source receives the
/// block of `φ(σ)` in `tgt`, through `component(p, x_n)`; degenerate images give zero.
pub fn cobar_pullback(
    tgt: &Total,
    src: &Total,
    phi: impl Fn(usize) -> usize,
    component: impl Fn(i64, usize) -> IntMatrix,
) -> ChainMap {
    let (s, t) = (&tgt.complex, &src.complex);
    let lo = s.min_degree().min(t.min_degree());
    let hi = s.max_degree().max(t.max_degree());
    let mut mats: Vec<IntMatrix> = (lo..=hi).map(|d| IntMatrix::zeros(t.rank(d), s.rank(d))).collect();
    for (key, &(d, off)) in &src.blocks {
        let ch = &src.chains.get(key.n)[key.chain];
        let image: Vec<usize> = ch.iter().map(|&x| phi(x)).collect();
        if image.windows(2).any(|w| w[0] == w[1]) {
            continue;
        }
        if let Some((_, toff)) = tgt.block(key.n, key.p, &image) {
            mats[(d - lo) as usize].add_block(off, toff, &component(key.p, *ch.last().unwrap()));
        }
    }
    ChainMap::new_unchecked(s.clone(), t.clone(), lo, mats)
}
