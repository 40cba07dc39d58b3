//! Acceptance run: one PASS/FAIL line per criterion, each under a minute.

mod common;
#[path = "../../core/tests/common/mod.rs"]
mod oracle;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use finsheaf::duality::{dualizing_complex, global_dual_homology, homological_manifold_check, pv_check};
use finsheaf::homology::*;
use finsheaf::random::{random_closed_cover, random_excision_pair, random_open_cover};
use finsheaf::zlinalg::{FgAbGroup, Int, IntMatrix};
use finsheaf::{cos, shf, unit, Cosheaf, FinitePoset, MonotoneMap, Sheaf};
use finsheaf_cli::files::SpaceFile;
use oracle::algebra::{dual_pair, sum, tensor, tor, Inv};
use oracle::{instance, invariants, order_complex_homology, rng, sierpinski, strings};

const LIMIT: Duration = Duration::from_secs(60);

fn invs(v: &[FgAbGroup]) -> Vec<Inv> {
    v.iter().map(invariants).collect()
}

fn height(p: &FinitePoset) -> usize {
    p.height().max(0) as usize
}

fn spheres() {
    for (n, want) in [(1, vec!["Z", "Z", "0"]), (2, vec!["Z", "0", "Z", "0"])] {
        let s = FinitePoset::sphere(n);
        let z = Sheaf::constant_z(&s);
        let h = homology(&z, n + 1);
        assert_eq!(strings(&h), want);
        let oc = order_complex_homology(&s, n + 1);
        assert_eq!(invs(&h), oc);
        // Free homology, so cohomology is the dual with no Ext terms.
        assert!(oc.iter().all(|g| g.1.is_empty()));
        assert_eq!(strings(&cohomology(&z, n + 1)), want);
    }
}

fn resolution_vs_bar() {
    for seed in 0..200 {
        let (p, f) = instance(seed, 7);
        let d = height(&p) + 1;
        assert_eq!(strings(&homology(&f, d)), strings(&bar_homology(&f, d)), "seed {seed}");
    }
}

fn contractibility() {
    let s1 = FinitePoset::sphere(1);
    let mut spaces = vec![
        FinitePoset::point(),
        FinitePoset::sphere(0),
        sierpinski(),
        s1.clone(),
        FinitePoset::sphere(2),
        s1.product(&s1),
        SpaceFile::load(&common::corpus("random7.json")).unwrap().poset().unwrap(),
    ];
    let opens: Vec<FinitePoset> =
        spaces.iter().flat_map(|p| (0..p.len()).map(|x| p.subposet(&p.minimal_open(x)).0).collect::<Vec<_>>()).collect();
    spaces.extend(opens);
    let coeffs = [FgAbGroup::free(1), FgAbGroup::cyclic(2), FgAbGroup::cyclic(3), FgAbGroup::cyclic(4)];
    for p in &spaces {
        let d = height(p) + 1;
        let acyclic = order_complex_homology(p, d)[1..].iter().all(|g| *g == (0, vec![]));
        let trivial = coeffs.iter().all(|g| cohomology(&Sheaf::constant(p, g), d)[1..].iter().all(|c| c.is_zero()));
        assert_eq!(acyclic, trivial);
        assert_eq!(acyclic, p.components_contractible());
    }
    for p in &spaces[7..] {
        assert!(p.components_contractible());
    }
}

fn universal_coefficients_vs_oracle() {
    let coeffs = [(FgAbGroup::cyclic(2), (0, vec![2])), (FgAbGroup::cyclic(4), (0, vec![4])), (FgAbGroup::cyclic(6), (0, vec![6])), (FgAbGroup::free(2), (2, vec![]))];
    for seed in 0..80 {
        let (p, f) = instance(seed, 7);
        let d = height(&p) + 1;
        let (g, gi) = &coeffs[seed as usize % 4];
        let u = universal_coefficients(&f, g, d);
        assert!(u.report.passed(), "{}", u.report);
        let h = invs(&bar_homology(&f, d));
        for i in 0..=d {
            let prev = if i == 0 { (0, vec![]) } else { h[i - 1].clone() };
            assert_eq!(invariants(&u.groups[i]), sum(&[tensor(&h[i], gi), tor(&prev, gi)]), "seed {seed} degree {i}");
        }
    }
}

fn kunneth_vs_oracle() {
    let s1 = FinitePoset::sphere(1);
    let z = Sheaf::constant_z(&s1);
    assert_eq!(strings(&kunneth(&z, &z, 2).groups), ["Z", "Z^2", "Z"]);
    assert_eq!(invs(&kunneth(&z, &z, 2).groups), order_complex_homology(&s1.product(&s1), 2));
    let k = kunneth(&Sheaf::constant(&s1, &FgAbGroup::cyclic(2)), &z, 2);
    assert_eq!(strings(&k.groups), ["Z/2", "Z/2 + Z/2", "Z/2"]);
    for seed in 0..40 {
        let (p, f1) = instance(seed, 5);
        let (q, f2) = instance(seed + 1000, 5);
        let d = height(&p) + height(&q) + 1;
        let k = kunneth(&f1, &f2, d);
        assert!(k.report.passed(), "{}", k.report);
        let (h1, h2) = (invs(&bar_homology(&f1, d)), invs(&bar_homology(&f2, d)));
        for n in 0..=d {
            let mut parts: Vec<Inv> = (0..=n).map(|a| tensor(&h1[a], &h2[n - a])).collect();
            parts.extend((0..n).map(|a| tor(&h1[a], &h2[n - 1 - a])));
            assert_eq!(invariants(&k.groups[n]), sum(&parts), "seed {seed} degree {n}");
        }
    }
}

fn sequences() {
    let s1 = FinitePoset::sphere(1);
    let z = Sheaf::constant_z(&s1);
    assert!(mv_open_check(&z, &s1.minimal_open(0), &s1.minimal_open(1), 2).unwrap().passed());
    let (y, w) = (s1.set_of(&["a", "b", "c"]).unwrap(), s1.set_of(&["a", "b", "d"]).unwrap());
    assert!(mv_closed_check(&z, &y, &w, 2).unwrap().passed());
    for seed in 0..50 {
        let (p, f) = instance(seed, 7);
        let d = height(&p) + 1;
        let (u, v) = random_open_cover(&mut rng(seed ^ 1), &p);
        let r = mv_open_check(&f, &u, &v, d).unwrap();
        assert!(r.passed(), "{r}");
        let (y, w) = random_closed_cover(&mut rng(seed ^ 2), &p);
        let r = mv_closed_check(&f, &y, &w, d).unwrap();
        assert!(r.passed(), "{r}");
        let (u, y) = random_excision_pair(&mut rng(seed ^ 3), &p);
        let r = excision_check(&f, &u, &y, d).unwrap();
        assert!(r.passed(), "{r}");
    }
}

fn duality_sequence() {
    for seed in 0..40 {
        let (p, f) = instance(seed, 5);
        let d = height(&p) + 1;
        let r = duality_sequence_check(&f, d);
        assert!(r.passed(), "{r}");
        let h = invs(&bar_homology(&f, d));
        let coh = complex_cohomology(&derived_dual(&f), 0, d as i64);
        for i in 0..=d {
            let prev = if i == 0 { (0, vec![]) } else { h[i - 1].clone() };
            assert_eq!(invariants(&coh[i]), dual_pair(&h[i], &prev), "seed {seed} degree {i}");
        }
    }
    let pt = FinitePoset::point();
    let coh = complex_cohomology(&derived_dual(&Sheaf::constant(&pt, &FgAbGroup::cyclic(2))), 0, 1);
    assert_eq!(strings(&coh), ["0", "Z/2"]);
}

fn cap_products() {
    for seed in 0..100 {
        assert_eq!(oracle::cap::leibniz_defect(seed), None, "seed {seed}");
    }
    for seed in 0..20 {
        let (p, f) = instance(seed, 6);
        let z = Sheaf::constant_z(&p);
        let one = vec![Int::from(1); p.len()];
        for deg in 0..=height(&p) {
            let m = cap_chain(&f, &z, deg, 0, &one).unwrap();
            assert_eq!(m, IntMatrix::identity(m.rows()));
        }
    }
    let s1 = FinitePoset::sphere(1);
    let s2 = FinitePoset::sphere(2);
    let pt = FinitePoset::point();
    let z = |p: &FinitePoset| Sheaf::constant_z(p);
    let z3 = |p: &FinitePoset| Sheaf::constant(p, &FgAbGroup::cyclic(3));
    let (_, ua) = s1.subposet(&s1.minimal_open(0));
    let (_, eq) = s2.subposet(&s2.set_of(&["a", "b", "c", "d"]).unwrap());
    let fixtures = [
        (MonotoneMap::identity(&s1), z(&s1), z(&s1)),
        (MonotoneMap::to_point(&s1), z(&pt), z3(&pt)),
        (ua, z(&s1), z(&s1)),
        (eq, z(&s2), z3(&s2)),
    ];
    for (m, f, g) in &fixtures {
        let h = height(m.source());
        for p in 0..=h {
            for q in 0..=p {
                let r = cap_naturality_check(m, f, g, p, q).unwrap();
                assert!(r.passed(), "{r}");
            }
        }
    }
    let c = cap_product(&z(&s1), &z(&s1), 1, 1).unwrap();
    let v = c.target.group().normal_coords(c.on_generators(0, 0));
    assert!(v == [Int::from(1)] || v == [Int::from(-1)]);
}

fn verdier_duality() {
    let s = sierpinski();
    let d = dualizing_complex(&s);
    assert_eq!(d.stalk_cohomology(0, 0).to_string(), "Z");
    assert!(d.stalk_cohomology(0, -1).is_zero());
    assert!((-1..=0).all(|j| d.stalk_cohomology(1, j).is_zero()));
    assert!(!pv_check(&s, 1).passed());
    assert!(!homological_manifold_check(&s).is_manifold);
    for n in 0..=3 {
        let s = FinitePoset::sphere(n);
        let m = homological_manifold_check(&s);
        assert!(m.is_manifold && m.dimension == Some(n), "S^{n}");
        assert!(pv_check(&s, n + 1).passed(), "S^{n}");
        let h = homology(&Sheaf::constant_z(&s), n + 1);
        assert_eq!(strings(&global_dual_homology(&s, n + 1)), strings(&h));
        assert_eq!(invs(&h), order_complex_homology(&s, n + 1));
    }
}

fn cosheaves() {
    assert!(oracle::enumerate::adjunction_suite(3, 25) >= 25);
    let s1 = FinitePoset::sphere(1);
    for p in [FinitePoset::point(), FinitePoset::sphere(0), sierpinski(), s1.clone(), FinitePoset::sphere(2)] {
        for g in [FgAbGroup::free(1), FgAbGroup::cyclic(3)] {
            let c = cos(&Sheaf::constant(&p, &g));
            assert!(c.is_locally_constant());
            assert!((0..p.len()).all(|x| c.value_at(x).is_isomorphic(&g)));
            let s = shf(&Cosheaf::constant(&p, &g));
            assert!(s.is_locally_constant());
            assert!(s.stalks().iter().all(|h| h.is_isomorphic(&g)));
        }
    }
    let covers = s1.covers().to_vec();
    for mask in 0..16u32 {
        let t = Sheaf::from_fn(s1.clone(), vec![FgAbGroup::free(1); 4], |x, y| {
            let k = covers.iter().position(|&c| c == (x, y)).unwrap();
            IntMatrix::from_rows(&[vec![if mask >> k & 1 == 1 { -1 } else { 1 }]])
        })
        .unwrap();
        assert!(unit(&t).is_isomorphism());
        assert!(cos(&t).is_locally_constant());
        let want = if mask.count_ones() % 2 == 1 { ["0", "Z/2", "0"] } else { ["Z", "Z", "0"] };
        assert_eq!(strings(&cohomology(&t, 2)), want);
    }
}

fn command_line() {
    let golden = common::golden_mismatches(false);
    assert!(golden.is_empty(), "{}", golden.join("\n"));
    let dir = tempfile::tempdir().unwrap();
    let exits = common::exit_code_failures(dir.path());
    assert!(exits.is_empty(), "{}", exits.join("\n"));
    assert!(common::json_is_stable());
}

fn main() {
    let criteria: [(&str, fn()); 11] = [
        ("sphere homology", spheres),
        ("resolution against bar complex", resolution_vs_bar),
        ("contractible spaces", contractibility),
        ("universal coefficients", universal_coefficients_vs_oracle),
        ("Künneth", kunneth_vs_oracle),
        ("Mayer-Vietoris and excision", sequences),
        ("duality sequence", duality_sequence),
        ("cap product", cap_products),
        ("Verdier duality", verdier_duality),
        ("cosheaf adjunction", cosheaves),
        ("command line", command_line),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let ok = catch_unwind(AssertUnwindSafe(run)).is_ok();
        let t = start.elapsed();
        let pass = ok && t <= LIMIT;
        if !pass {
            failed += 1;
        }
        let note = if ok && t > LIMIT { ", over the time limit" } else { "" };
        println!("criterion {} ({name}): {} ({:.3} s{note})", i + 1, if pass { "PASS" } else { "FAIL" }, t.as_secs_f64());
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
}
