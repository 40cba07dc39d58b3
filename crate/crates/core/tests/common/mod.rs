//! Shared fixtures and a machine-integer oracle for simplicial homology.
#![allow(dead_code)]

pub mod algebra;
pub mod cap;
pub mod enumerate;

use finsheaf::random::{random_poset, random_sheaf, SheafShape};
use finsheaf::zlinalg::FgAbGroup;
use finsheaf::{FinitePoset, Sheaf};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn sierpinski() -> FinitePoset {
    FinitePoset::new(&["a", "b"], &[("a", "b")]).unwrap()
}

/// A poset with at most `max_n` elements and a random sheaf on it.
pub fn instance(seed: u64, max_n: usize) -> (FinitePoset, Sheaf) {
    let mut r = rng(seed);
    let n = r.gen_range(1..=max_n);
    let density = r.gen_range(0.2..0.7);
    let p = random_poset(&mut r, n, density);
    let shape = SheafShape {
        generators: r.gen_range(1..=4),
        relations: r.gen_range(0..=3),
        max_coeff: 2,
        finite: r.gen_bool(0.3),
    };
    let f = random_sheaf(&mut r, &p, shape);
    (p, f)
}

pub fn strings(v: &[FgAbGroup]) -> Vec<String> {
    v.iter().map(|g| g.to_string()).collect()
}

/// Invariants `(rank, torsion)` of `ℤ^rows / im(m)` for a small integer matrix, by
/// repeated pivoting on the smallest entry.
pub fn cokernel_invariants(mut m: Vec<Vec<i64>>, rows: usize, cols: usize) -> (usize, Vec<i64>) {
    let mut diag = Vec::new();
    let (mut r0, mut c0) = (0, 0);
    while r0 < rows && c0 < cols {
        let mut best: Option<(usize, usize)> = None;
        for i in r0..rows {
            for j in c0..cols {
                if m[i][j] != 0 && best.is_none_or(|(a, b)| m[i][j].abs() < m[a][b].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        m.swap(r0, pi);
        for row in m.iter_mut() {
            row.swap(c0, pj);
        }
        let piv = m[r0][c0];
        let mut clean = true;
        for i in r0 + 1..rows {
            let q = m[i][c0] / piv;
            for j in c0..cols {
                m[i][j] -= q * m[r0][j];
            }
            clean &= m[i][c0] == 0;
        }
        for j in c0 + 1..cols {
            let q = m[r0][j] / piv;
            for row in m.iter_mut() {
                row[j] -= q * row[c0];
            }
            clean &= m[r0][j] == 0;
        }
        if !clean {
            continue;
        }
        // Divisibility: fold any entry not divisible by the pivot back into the pivot row.
        let bad = (r0 + 1..rows).find(|&i| (c0 + 1..cols).any(|j| m[i][j] % piv != 0));
        if let Some(i) = bad {
            for j in c0..cols {
                m[r0][j] += m[i][j];
            }
            continue;
        }
        diag.push(piv.abs());
        r0 += 1;
        c0 += 1;
    }
    let rank = rows - diag.len();
    (rank, diag.into_iter().filter(|&d| d > 1).collect())
}

/// `H_i` of the order complex of `p` with `ℤ` coefficients, as `(rank, torsion)`.
pub fn order_complex_homology(p: &FinitePoset, max_deg: usize) -> Vec<(usize, Vec<i64>)> {
    let all = p.all();
    let chains: Vec<Vec<Vec<usize>>> = (0..=max_deg + 1).map(|n| p.strict_chains(&all, n)).collect();
    let boundary = |n: usize| -> Vec<Vec<i64>> {
        // rows: (n−1)-chains, cols: n-chains
        let (src, tgt) = (&chains[n], &chains[n - 1]);
        let mut m = vec![vec![0i64; src.len()]; tgt.len()];
        for (c, s) in src.iter().enumerate() {
            for i in 0..s.len() {
                let face: Vec<usize> = s.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, &v)| v).collect();
                let r = tgt.iter().position(|t| *t == face).unwrap();
                m[r][c] += if i % 2 == 0 { 1 } else { -1 };
            }
        }
        m
    };
    let rank_of = |m: &Vec<Vec<i64>>, rows: usize, cols: usize| {
        let (free, _) = cokernel_invariants(m.clone(), rows, cols);
        rows - free
    };
    (0..=max_deg)
        .map(|i| {
            let ci = chains[i].len();
            let ker = if i == 0 { ci } else { ci - rank_of(&boundary(i), chains[i - 1].len(), ci) };
            let next = boundary(i + 1);
            let (_, torsion) = cokernel_invariants(next.clone(), ci, chains[i + 1].len());
            let im = rank_of(&next, ci, chains[i + 1].len());
            (ker - im, torsion)
        })
        .collect()
}

pub fn invariants(g: &FgAbGroup) -> (usize, Vec<i64>) {
    let (r, t) = g.invariants();
    (r, t.iter().map(|d| i64::try_from(d).unwrap()).collect())
}
