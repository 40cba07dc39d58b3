//! The Leibniz identity for cap products, evaluated on random chains and cochains.

use finsheaf::homology::{bar_complex, cap_chain, cobar_complex};
use finsheaf::zlinalg::Int;
use rand::Rng;

use super::{instance, rng};

fn random_vector<R: Rng>(r: &mut R, n: usize) -> Vec<Int> {
    (0..n).map(|_| Int::from(r.gen_range(-3..=3))).collect()
}

/// `∂(c ∩ φ) − ∂c ∩ φ − (−1)^{p+q+1} c ∩ δφ` for random `c`, `φ`.
pub fn leibniz_defect(seed: u64) -> Option<Vec<Int>> {
    let (p, f) = instance(seed, 5);
    let mut r = rng(seed ^ 0xcafe);
    let g = finsheaf::random::random_sheaf(&mut r, &p, Default::default());
    let h = p.height() as usize;
    let deg = r.gen_range(0..=h);
    let q = r.gen_range(0..=deg);
    let all = p.all();
    let fg = f.tensor(&g).unwrap();
    let (bf, cg, bfg) = (bar_complex(&f, &all).complex, cobar_complex(&g, &all).complex, bar_complex(&fg, &all).complex);
    let (dp, dq) = (deg as i64, -(q as i64));
    let c = random_vector(&mut r, bf.rank(dp));
    let phi = random_vector(&mut r, cg.rank(dq));
    let dphi = cg.boundary(dq).mul_vec(&phi);
    let lhs = bfg.boundary(dp - q as i64).mul_vec(&cap_chain(&f, &g, deg, q, &phi).unwrap().mul_vec(&c));
    let mut rhs = vec![Int::from(0); lhs.len()];
    if deg > q {
        let a = cap_chain(&f, &g, deg - 1, q, &phi).unwrap().mul_vec(&bf.boundary(dp).mul_vec(&c));
        let sign = Int::from(if (deg + q + 1) % 2 == 0 { 1 } else { -1 });
        let b = cap_chain(&f, &g, deg, q + 1, &dphi).unwrap().mul_vec(&c);
        for i in 0..rhs.len() {
            rhs[i] = &a[i] + &sign * &b[i];
        }
    }
    let defect: Vec<Int> = lhs.iter().zip(&rhs).map(|(a, b)| a - b).collect();
    defect.iter().any(|x| *x != Int::from(0)).then_some(defect)
}

