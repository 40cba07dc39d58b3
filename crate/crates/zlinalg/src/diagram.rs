//! Colimits and limits of finite diagrams of presented groups.

use crate::group::{FgAbGroup, GroupMap, Subquotient};
use crate::matrix::IntMatrix;

/// Objects and arrows `(src, tgt, matrix)`; arrows need not compose or commute, the
/// (co)limit is taken over the free category they generate.
#[derive(Clone, Debug, Default)]
pub struct Diagram {
    pub objects: Vec<FgAbGroup>,
    pub arrows: Vec<(usize, usize, IntMatrix)>,
}

impl Diagram {
    pub fn new() -> Self {
        Diagram::default()
    }

    pub fn add_object(&mut self, g: FgAbGroup) -> usize {
        self.objects.push(g);
        self.objects.len() - 1
    }

    pub fn add_arrow(&mut self, src: usize, tgt: usize, m: IntMatrix) {
        assert_eq!(
            m.shape(),
            (self.objects[tgt].num_gens(), self.objects[src].num_gens()),
            "arrow matrix has wrong shape"
        );
        self.arrows.push((src, tgt, m));
    }

    fn offsets(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.objects.len() + 1);
        let mut acc = 0;
        out.push(0);
        for o in &self.objects {
            acc += o.num_gens();
            out.push(acc);
        }
        out
    }

    fn sum(&self) -> FgAbGroup {
        FgAbGroup::direct_sum(&self.objects)
    }
}

/// A (co)limit object together with its structure maps, one per diagram object.
#[derive(Clone, Debug)]
pub struct Universal {
    pub object: FgAbGroup,
    pub maps: Vec<GroupMap>,
}

/// Colimit: `⊕ A_i` modulo `ι_src(a) − ι_tgt(m a)` for every arrow.
pub fn colimit(d: &Diagram) -> Universal {
    let off = d.offsets();
    let total = off[d.objects.len()];
    let sum = d.sum();
    let mut extra = Vec::new();
    for (s, t, m) in &d.arrows {
        let mut block = IntMatrix::zeros(total, m.cols());
        block.set_block(off[*s], 0, &IntMatrix::identity(m.cols()));
        block.add_block(off[*t], 0, &m.neg());
        extra.push(block);
    }
    let rels = extra.iter().fold(sum.relations().clone(), |acc, b| acc.hstack(b));
    let object = FgAbGroup::presented(rels);
    let maps = d
        .objects
        .iter()
        .enumerate()
        .map(|(i, o)| {
            let mut m = IntMatrix::zeros(total, o.num_gens());
            m.set_block(off[i], 0, &IntMatrix::identity(o.num_gens()));
            GroupMap::new_unchecked(o.clone(), object.clone(), m)
        })
        .collect();
    Universal { object, maps }
}

/// The limit as the subquotient `ker(⊕ A_i → ⊕_arrows A_tgt)` of `⊕ A_i`, where
/// `(a_i) ↦ m a_src − a_tgt`, together with `⊕ A_i`.
pub fn limit_kernel(d: &Diagram) -> (Subquotient, FgAbGroup) {
    let off = d.offsets();
    let total = off[d.objects.len()];
    let sum = d.sum();
    let tgt = FgAbGroup::direct_sum(&d.arrows.iter().map(|(_, t, _)| d.objects[*t].clone()).collect::<Vec<_>>());
    let mut m = IntMatrix::zeros(tgt.num_gens(), total);
    let mut row = 0;
    for (s, t, a) in &d.arrows {
        m.set_block(row, off[*s], a);
        m.add_block(row, off[*t], &IntMatrix::identity(a.rows()).neg());
        row += a.rows();
    }
    let diff = GroupMap::new_unchecked(sum.clone(), tgt, m);
    (diff.kernel(), sum)
}

/// Limit: the kernel of `⊕ A_i → ⊕_arrows A_tgt`, `(a_i) ↦ m a_src − a_tgt`.
pub fn limit(d: &Diagram) -> Universal {
    let off = d.offsets();
    let total = off[d.objects.len()];
    let (k, sum) = limit_kernel(d);
    let incl = k.inclusion(&sum);
    let object = k.group().clone();
    let maps = d
        .objects
        .iter()
        .enumerate()
        .map(|(i, o)| {
            let mut p = IntMatrix::zeros(o.num_gens(), total);
            p.set_block(0, off[i], &IntMatrix::identity(o.num_gens()));
            incl.then(&GroupMap::new_unchecked(sum.clone(), o.clone(), p))
        })
        .collect();
    Universal { object, maps }
}

/// Offsets of each object's generators inside `⊕ A_i`.
pub fn block_offsets(d: &Diagram) -> Vec<usize> {
    d.offsets()
}

/// Whether the arrows of `d` commute with the given cocone maps into a common target.
pub fn is_cocone(d: &Diagram, maps: &[GroupMap]) -> bool {
    d.arrows.iter().all(|(s, t, m)| {
        let via = maps[*t].matrix().mul(m);
        maps[*s].target().columns_vanish(&via.sub(maps[*s].matrix()))
    })
}

/// Whether the cone maps from a common source commute with the arrows of `d`.
pub fn is_cone(d: &Diagram, maps: &[GroupMap]) -> bool {
    d.arrows.iter().all(|(s, t, m)| {
        let via = m.mul(maps[*s].matrix());
        d.objects[*t].columns_vanish(&via.sub(maps[*t].matrix()))
    })
}
