//! Group arithmetic on `(rank, cyclic orders)` with machine integers, normalized through
//! the cokernel oracle.

use super::cokernel_invariants;

/// A finitely generated abelian group as `(rank, torsion invariant factors)`.
pub type Inv = (usize, Vec<i64>);

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// `ℤ^rank ⊕ ⊕ ℤ/c` in invariant-factor form.
pub fn group(rank: usize, cyclic: &[i64]) -> Inv {
    let c: Vec<i64> = cyclic.iter().copied().filter(|&d| d != 1).collect();
    let n = c.len();
    let m: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| if i == j { c[i] } else { 0 }).collect()).collect();
    let (free, torsion) = cokernel_invariants(m, n, n);
    (rank + free, torsion)
}

pub fn sum(parts: &[Inv]) -> Inv {
    let rank = parts.iter().map(|p| p.0).sum();
    let cyclic: Vec<i64> = parts.iter().flat_map(|p| p.1.iter().copied()).collect();
    group(rank, &cyclic)
}

pub fn tensor(a: &Inv, b: &Inv) -> Inv {
    let mut cyclic = Vec::new();
    for _ in 0..b.0 {
        cyclic.extend(&a.1);
    }
    for _ in 0..a.0 {
        cyclic.extend(&b.1);
    }
    for &x in &a.1 {
        for &y in &b.1 {
            cyclic.push(gcd(x, y));
        }
    }
    group(a.0 * b.0, &cyclic)
}

pub fn tor(a: &Inv, b: &Inv) -> Inv {
    let cyclic: Vec<i64> = a.1.iter().flat_map(|&x| b.1.iter().map(move |&y| gcd(x, y))).collect();
    group(0, &cyclic)
}

/// `Hom(A, ℤ) ⊕ Ext¹(B, ℤ)`.
pub fn dual_pair(a: &Inv, b: &Inv) -> Inv {
    group(a.0, &b.1)
}
