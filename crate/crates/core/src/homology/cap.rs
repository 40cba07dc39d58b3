//! Cap product `H_p(X, F) ⊗ H^q(X, F') → H_{p−q}(X, F ⊗ F')`.
//!
//! On chains, `(x_0 < … < x_p; a) ∩ φ = (−1)^{pq} (x_q < … < x_p; ρ(a) ⊗ φ(x_0 < … < x_q))`
//! with `ρ = ρ_{x_0 → x_q}`, which satisfies
//! `∂(c ∩ φ) = ∂c ∩ φ + (−1)^{p+q+1} c ∩ δφ`.

use zlinalg::{Int, IntMatrix, Subquotient};

use crate::error::Error;
use crate::homology::chains::{bar_map, cobar_pullback, Total};
use crate::homology::{bar_complex, cobar_complex};
use crate::poset::MonotoneMap;
use crate::report::Report;
use crate::sheaf::Sheaf;

/// The chain-level cap with a chosen sign exponent `e(p, q)`.
#[allow(clippy::too_many_arguments)]
pub(crate) fn cap_matrix_with_sign(
    f: &Sheaf,
    g: &Sheaf,
    bar_f: &Total,
    cobar_g: &Total,
    bar_fg: &Total,
    p: usize,
    q: usize,
    phi: &[Int],
    exponent: impl Fn(usize, usize) -> usize,
) -> IntMatrix {
    let (dp, dq) = (p as i64, p as i64 - q as i64);
    let mut m = IntMatrix::zeros(bar_fg.complex.rank(dq), bar_f.complex.rank(dp));
    if q > p {
        return m;
    }
    let sign = Int::from(if exponent(p, q) % 2 == 0 { 1 } else { -1 });
    for ch in bar_f.chains.get(p) {
        let (front, back) = (&ch[..=q], &ch[q..]);
        let (_, off) = bar_f.block(p, 0, ch).expect("chain has a block");
        let Some((_, foff)) = cobar_g.block(q, 0, front) else { continue };
        let Some((_, boff)) = bar_fg.block(p - q, 0, back) else { continue };
        let gb = g.stalk(front[q]).num_gens();
        let value = IntMatrix::from_columns(gb, &[phi[foff..foff + gb].to_vec()]);
        let block = f.rho(ch[0], ch[q]).kron(&value).scale(&sign);
        m.add_block(boff, off, &block);
    }
    m
}

/// Matrix of `c ↦ c ∩ φ` from `C_p(X, F)` to `C_{p−q}(X, F ⊗ F')` for a cochain
/// `φ ∈ C^q(X, F')` given in cobar coordinates.
pub fn cap_chain(f: &Sheaf, g: &Sheaf, p: usize, q: usize, phi: &[Int]) -> Result<IntMatrix, Error> {
    let fg = f.tensor(g)?;
    let all = f.base().all();
    let (bf, cg, bfg) = (bar_complex(f, &all), cobar_complex(g, &all), bar_complex(&fg, &all));
    Ok(cap_matrix_with_sign(f, g, &bf, &cg, &bfg, p, q, phi, |p, q| p * q))
}

/// The cap pairing on homology, tabulated on generators.
#[derive(Clone, Debug)]
pub struct CapPairing {
    pub p: usize,
    pub q: usize,
    pub homology: Subquotient,
    pub cohomology: Subquotient,
    pub target: Subquotient,
    table: Vec<Vec<Vec<Int>>>,
}

impl CapPairing {
    /// `α ∩ β` with `α`, `β` and the result on the generators of the respective groups.
    pub fn apply(&self, alpha: &[Int], beta: &[Int]) -> Vec<Int> {
        let mut out = vec![Int::from(0); self.target.group().num_gens()];
        for (i, a) in alpha.iter().enumerate() {
            for (j, b) in beta.iter().enumerate() {
                let c = a * b;
                for (o, t) in out.iter_mut().zip(&self.table[i][j]) {
                    *o += &c * t;
                }
            }
        }
        out
    }

    /// `gen_i ∩ gen_j`.
    pub fn on_generators(&self, i: usize, j: usize) -> &[Int] {
        &self.table[i][j]
    }
}

pub fn cap_product(f: &Sheaf, g: &Sheaf, p: usize, q: usize) -> Result<CapPairing, Error> {
    let fg = f.tensor(g)?;
    let all = f.base().all();
    let (bf, cg, bfg) = (bar_complex(f, &all), cobar_complex(g, &all), bar_complex(&fg, &all));
    let homology = bf.complex.homology(p as i64);
    let cohomology = cg.complex.homology(-(q as i64));
    let target = bfg.complex.homology(p as i64 - q as i64);
    let (hr, cr) = (homology.representatives(), cohomology.representatives());
    let table = (0..hr.cols())
        .map(|i| {
            let a = hr.column(i);
            (0..cr.cols())
                .map(|j| {
                    let m = cap_matrix_with_sign(f, g, &bf, &cg, &bfg, p, q, &cr.column(j), |p, q| p * q);
                    target.class_of(&m.mul_vec(&a)).expect("cap of cycles is a cycle")
                })
                .collect()
        })
        .collect();
    Ok(CapPairing { p, q, homology, cohomology, target, table })
}

/// Projection formula `f_*(α ∩ f^*β) = f_*α ∩ β` for `α ∈ H_p(X, f^{-1}F)` and
/// `β ∈ H^q(Y, F')`, checked on all pairs of generators.
pub fn cap_naturality_check(map: &MonotoneMap, f: &Sheaf, g: &Sheaf, p: usize, q: usize) -> Result<Report, Error> {
    let (x, y) = (map.source().all(), map.target().all());
    let (ff, gg) = (f.inverse_image(map)?, g.inverse_image(map)?);
    let (fg_y, fg_x) = (f.tensor(g)?, ff.tensor(&gg)?);
    let (bxf, byf) = (bar_complex(&ff, &x), bar_complex(f, &y));
    let (cxg, cyg) = (cobar_complex(&gg, &x), cobar_complex(g, &y));
    let (bxfg, byfg) = (bar_complex(&fg_x, &x), bar_complex(&fg_y, &y));
    let id = |s: &Sheaf| {
        let s = s.clone();
        move |_: i64, z: usize| IntMatrix::identity(s.stalk(z).num_gens())
    };
    let push_f = bar_map(&bxf, &byf, |z| map.apply(z), id(&ff));
    let push_fg = bar_map(&bxfg, &byfg, |z| map.apply(z), id(&fg_x));
    let pull = cobar_pullback(&cyg, &cxg, |z| map.apply(z), id(&gg));
    let (dp, dq) = (p as i64, p as i64 - q as i64);
    let alphas = bxf.complex.homology(dp).representatives().clone();
    let betas = cyg.complex.homology(-(q as i64)).representatives().clone();
    let target = byfg.complex.homology(dq);
    let mut r = Report::new("cap naturality");
    for i in 0..alphas.cols() {
        let a = alphas.column(i);
        for j in 0..betas.cols() {
            let b = betas.column(j);
            let pulled = pull.matrix(-(q as i64)).mul_vec(&b);
            let lhs = cap_matrix_with_sign(&ff, &gg, &bxf, &cxg, &bxfg, p, q, &pulled, |p, q| p * q).mul_vec(&a);
            let lhs = push_fg.matrix(dq).mul_vec(&lhs);
            let pushed = push_f.matrix(dp).mul_vec(&a);
            let rhs = cap_matrix_with_sign(f, g, &byf, &cyg, &byfg, p, q, &b, |p, q| p * q).mul_vec(&pushed);
            let ok = match (target.class_of(&lhs), target.class_of(&rhs)) {
                (Some(l), Some(r)) => target.group().elements_equal(&l, &r),
                _ => false,
            };
            r.push(format!("generator {i} cap generator {j}"), ok, "");
        }
    }
    Ok(r)
}
