//! Smith normal form with optional transform tracking.

use num_traits::{One, Signed, Zero};

use crate::matrix::{Int, IntMatrix};

/// Result of [`smith_normal_form`]: `d = u · m · v`, with `u_inv`/`v_inv` the exact inverses.
#[derive(Clone, Debug)]
pub struct Smith {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
    pub d: IntMatrix,
    /// Number of nonzero diagonal entries.
    pub rank: usize,
}

impl Smith {
    /// Diagonal entries `d_1 | d_2 | …`, length `min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<Int> {
        let n = self.d.rows().min(self.d.cols());
        (0..n).map(|i| self.d[(i, i)].clone()).collect()
    }
}

struct Tracker {
    track: bool,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl Tracker {
    fn new(rows: usize, cols: usize, track: bool) -> Self {
        let (r, c) = if track { (rows, cols) } else { (0, 0) };
        Tracker {
            track,
            u: IntMatrix::identity(r),
            u_inv: IntMatrix::identity(r),
            v: IntMatrix::identity(c),
            v_inv: IntMatrix::identity(c),
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if self.track {
            self.u.swap_rows(a, b);
            self.u_inv.swap_cols(a, b);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if self.track {
            self.v.swap_cols(a, b);
            self.v_inv.swap_rows(a, b);
        }
    }

    fn add_row_multiple(&mut self, dst: usize, src: usize, q: &Int) {
        if self.track {
            self.u.add_row_multiple(dst, src, q);
            self.u_inv.add_col_multiple(src, dst, &-q);
        }
    }

    fn add_col_multiple(&mut self, dst: usize, src: usize, q: &Int) {
        if self.track {
            self.v.add_col_multiple(dst, src, q);
            self.v_inv.add_row_multiple(src, dst, &-q);
        }
    }

    fn negate_row(&mut self, r: usize) {
        if self.track {
            self.u.negate_row(r);
            self.u_inv.negate_col(r);
        }
    }
}

/// Computes unimodular `u`, `v` with `u · m · v` diagonal, nonnegative, and each
/// diagonal entry dividing the next.
pub fn smith_normal_form(m: &IntMatrix) -> Smith {
    run(m, true)
}

/// Invariant factors only: the nonzero diagonal of the Smith form, ascending.
pub fn invariant_factors(m: &IntMatrix) -> Vec<Int> {
    let s = run(m, false);
    s.diagonal().into_iter().take(s.rank).collect()
}

fn run(m: &IntMatrix, track: bool) -> Smith {
    let (rows, cols) = m.shape();
    let mut a = m.clone();
    let mut t = Tracker::new(rows, cols, track);
    let mut rank = 0;
    let n = rows.min(cols);

    'outer: for k in 0..n {
        loop {
            // Smallest nonzero entry in the trailing block becomes the pivot.
            let mut best: Option<(usize, usize)> = None;
            'search: for r in k..rows {
                for c in k..cols {
                    let v = a[(r, c)].magnitude();
                    if v.is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(br, bc)| v < a[(br, bc)].magnitude()) {
                        best = Some((r, c));
                        if v.is_one() {
                            break 'search;
                        }
                    }
                }
            }
            let Some((pr, pc)) = best else { break 'outer };
            a.swap_rows(k, pr);
            t.swap_rows(k, pr);
            a.swap_cols(k, pc);
            t.swap_cols(k, pc);

            let mut clean = true;
            for r in k + 1..rows {
                if a[(r, k)].is_zero() {
                    continue;
                }
                let q = -(&a[(r, k)] / &a[(k, k)]);
                a.add_row_multiple(r, k, &q);
                t.add_row_multiple(r, k, &q);
                if !a[(r, k)].is_zero() {
                    clean = false;
                }
            }
            for c in k + 1..cols {
                if a[(k, c)].is_zero() {
                    continue;
                }
                let q = -(&a[(k, c)] / &a[(k, k)]);
                a.add_col_multiple(c, k, &q);
                t.add_col_multiple(c, k, &q);
                if !a[(k, c)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // Enforce divisibility: fold an offending row into the pivot row and retry.
            let p = a[(k, k)].clone();
            if p.magnitude().is_one() {
                break;
            }
            let mut offending = None;
            'scan: for r in k + 1..rows {
                for c in k + 1..cols {
                    if !(&a[(r, c)] % &p).is_zero() {
                        offending = Some(r);
                        break 'scan;
                    }
                }
            }
            match offending {
                Some(r) => {
                    let one = Int::one();
                    a.add_row_multiple(k, r, &one);
                    t.add_row_multiple(k, r, &one);
                }
                None => break,
            }
        }
        if a[(k, k)].is_negative() {
            a.negate_row(k);
            t.negate_row(k);
        }
        rank = k + 1;
    }

    Smith { u: t.u, u_inv: t.u_inv, v: t.v, v_inv: t.v_inv, d: a, rank }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::int;

    #[test]
    fn two_by_two_example() {
        let m = IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]);
        let s = smith_normal_form(&m);
        assert_eq!(s.diagonal(), vec![int(2), int(4)]);
        assert_eq!(s.u.mul(&m).mul(&s.v), s.d);
        assert_eq!(s.u.mul(&s.u_inv), IntMatrix::identity(2));
        assert_eq!(s.v.mul(&s.v_inv), IntMatrix::identity(2));
    }

    #[test]
    fn identity_and_zero() {
        let s = smith_normal_form(&IntMatrix::identity(3));
        assert_eq!(s.d, IntMatrix::identity(3));
        let z = IntMatrix::zeros(2, 3);
        let s = smith_normal_form(&z);
        assert!(s.d.is_zero());
        assert_eq!(s.rank, 0);
    }

    #[test]
    fn divisibility_needs_fixup() {
        // diag(2, 3) is diagonal but not in Smith form.
        let m = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(invariant_factors(&m), vec![int(1), int(6)]);
    }
}
