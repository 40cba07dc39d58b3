//! Column Hermite form, integer kernels, lattices and integer solving.

use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::matrix::{Int, IntMatrix};

/// `m · v = e` with `e` in column echelon form: the first `rank` columns are nonzero,
/// column `j` has its leading (topmost) nonzero entry, positive, at row `pivots[j]`,
/// and the pivot rows strictly increase. The remaining columns are zero.
#[derive(Clone, Debug)]
pub struct ColumnEchelon {
    pub e: IntMatrix,
    pub v: Option<IntMatrix>,
    pub pivots: Vec<usize>,
}

impl ColumnEchelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Column echelon form. When `track` is set, the unimodular `v` with `m · v = e` is kept.
pub fn column_echelon(m: &IntMatrix, track: bool) -> ColumnEchelon {
    let (rows, cols) = m.shape();
    let mut a = m.clone();
    let mut v = if track { Some(IntMatrix::identity(cols)) } else { None };
    let mut pivots = Vec::new();
    let mut k = 0;
    for r in 0..rows {
        if k == cols {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for c in k..cols {
                let x = &a[(r, c)];
                if !x.is_zero() && best.is_none_or(|b| x.abs() < a[(r, b)].abs()) {
                    best = Some(c);
                }
            }
            let Some(b) = best else { break };
            a.swap_cols(k, b);
            if let Some(v) = v.as_mut() {
                v.swap_cols(k, b);
            }
            let mut done = true;
            for c in k + 1..cols {
                if a[(r, c)].is_zero() {
                    continue;
                }
                let q = -(&a[(r, c)] / &a[(r, k)]);
                a.add_col_multiple(c, k, &q);
                if let Some(v) = v.as_mut() {
                    v.add_col_multiple(c, k, &q);
                }
                if !a[(r, c)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if a[(r, k)].is_zero() {
            continue;
        }
        if a[(r, k)].is_negative() {
            a.negate_col(k);
            if let Some(v) = v.as_mut() {
                v.negate_col(k);
            }
        }
        let p = a[(r, k)].clone();
        for j in 0..k {
            let q = -a[(r, j)].div_floor(&p);
            if !q.is_zero() {
                a.add_col_multiple(j, k, &q);
                if let Some(v) = v.as_mut() {
                    v.add_col_multiple(j, k, &q);
                }
            }
        }
        pivots.push(r);
        k += 1;
    }
    ColumnEchelon { e: a, v, pivots }
}

/// A basis (as columns) of the integer kernel `{x : m · x = 0}`. The basis is saturated:
/// it spans every integer solution.
pub fn integer_kernel(m: &IntMatrix) -> IntMatrix {
    let ech = column_echelon(m, true);
    let rank = ech.rank();
    ech.v.expect("tracked").column_range(rank, m.cols())
}

/// Some `x` with `a · x = b`, or `None` if no integer solution exists.
pub fn solve_integer(a: &IntMatrix, b: &[Int]) -> Option<Vec<Int>> {
    assert_eq!(a.rows(), b.len(), "dimension mismatch in solve");
    let ech = column_echelon(a, true);
    let y = echelon_coords(&ech.e, &ech.pivots, b)?;
    let v = ech.v.expect("tracked");
    let mut full = y;
    full.resize(a.cols(), Int::zero());
    Some(v.mul_vec(&full))
}

fn echelon_coords(e: &IntMatrix, pivots: &[usize], b: &[Int]) -> Option<Vec<Int>> {
    let mut r: Vec<Int> = b.to_vec();
    let mut out = Vec::with_capacity(pivots.len());
    let mut next_row = 0;
    for (j, &p) in pivots.iter().enumerate() {
        if r[next_row..p].iter().any(|x| !x.is_zero()) {
            return None;
        }
        let (q, rem) = r[p].div_rem(&e[(p, j)]);
        if !rem.is_zero() {
            return None;
        }
        if !q.is_zero() {
            for (i, ri) in r.iter_mut().enumerate().skip(p) {
                let x = &e[(i, j)];
                if !x.is_zero() {
                    *ri -= x * &q;
                }
            }
        }
        out.push(q);
        next_row = p + 1;
    }
    if r[next_row..].iter().any(|x| !x.is_zero()) {
        return None;
    }
    Some(out)
}

/// A sublattice of `ℤ^n`, stored by an echelon basis.
#[derive(Clone, Debug)]
pub struct Lattice {
    ambient: usize,
    basis: IntMatrix,
    pivots: Vec<usize>,
}

impl Lattice {
    /// The lattice spanned by the columns of `gens` (which has `ambient` rows).
    pub fn span(ambient: usize, gens: &IntMatrix) -> Lattice {
        assert_eq!(gens.rows(), ambient);
        let ech = column_echelon(gens, false);
        let basis = ech.e.column_range(0, ech.rank());
        Lattice { ambient, basis, pivots: ech.pivots }
    }

    pub fn zero(ambient: usize) -> Lattice {
        Lattice { ambient, basis: IntMatrix::zeros(ambient, 0), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Lattice {
        Lattice::span(ambient, &IntMatrix::identity(ambient))
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Basis vectors as columns.
    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    /// Coordinates of `v` in the basis, if `v` lies in the lattice.
    pub fn coords(&self, v: &[Int]) -> Option<Vec<Int>> {
        assert_eq!(v.len(), self.ambient);
        echelon_coords(&self.basis, &self.pivots, v)
    }

    pub fn contains(&self, v: &[Int]) -> bool {
        self.coords(v).is_some()
    }

    /// Coordinates of every column of `m`; panics if one is outside the lattice.
    pub fn coords_matrix(&self, m: &IntMatrix) -> IntMatrix {
        let cols: Vec<Vec<Int>> = (0..m.cols())
            .map(|c| self.coords(&m.column(c)).expect("vector outside lattice"))
            .collect();
        IntMatrix::from_columns(self.rank(), &cols)
    }

    pub fn contains_all(&self, m: &IntMatrix) -> bool {
        (0..m.cols()).all(|c| self.contains(&m.column(c)))
    }

    pub fn sum(&self, other: &Lattice) -> Lattice {
        Lattice::span(self.ambient, &self.basis.hstack(&other.basis))
    }
}
