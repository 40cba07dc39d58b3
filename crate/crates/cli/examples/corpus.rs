//! Regenerates the bundled corpus: `cargo run -p finsheaf-cli --example corpus -- DIR`.

use std::fs;
use std::path::PathBuf;

use finsheaf::random::{random_poset, random_sheaf, SheafShape};
use finsheaf::zlinalg::{FgAbGroup, IntMatrix};
use finsheaf::{FinitePoset, Sheaf};
use finsheaf_cli::files::{write_json, SheafFile, SpaceFile};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "corpus".into()));
    fs::create_dir_all(&dir).unwrap();
    let put = |file: &str, text: String| fs::write(dir.join(file), text).unwrap();
    let s1 = FinitePoset::sphere(1);
    let sierpinski = FinitePoset::new(&["a", "b"], &[("a", "b")]).unwrap();
    let spaces = [
        ("point", FinitePoset::point()),
        ("s0", FinitePoset::sphere(0)),
        ("sierpinski", sierpinski),
        ("s1", s1.clone()),
        ("s2", FinitePoset::sphere(2)),
        ("s3", FinitePoset::sphere(3)),
    ];
    for (name, p) in &spaces {
        put(&format!("{name}.json"), write_json(&SpaceFile::from_poset(name, p)));
    }
    // Product elements are written `ac` rather than `(a,c)` so they survive comma lists.
    let mut torus = SpaceFile::from_poset("s1xs1", &s1.product(&s1));
    let rename = |s: &String| s.chars().filter(|c| c.is_alphanumeric()).collect::<String>();
    torus.elements = torus.elements.iter().map(rename).collect();
    torus.covers = torus.covers.iter().map(|(a, b)| (rename(a), rename(b))).collect();
    put("s1xs1.json", write_json(&torus));

    put("const_z.json", write_json(&SheafFile::from_sheaf("s1", &Sheaf::constant_z(&s1))));
    let twisted = Sheaf::from_fn(s1.clone(), vec![FgAbGroup::free(1); 4], |x, y| {
        IntMatrix::from_rows(&[vec![if (x, y) == (1, 3) { -1 } else { 1 }]])
    })
    .unwrap();
    put("twisted_s1.json", write_json(&SheafFile::from_sheaf("s1", &twisted)));

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let p = loop {
        let p = random_poset(&mut rng, 7, 0.45);
        if p.height() >= 2 {
            break p;
        }
    };
    put("random7.json", write_json(&SpaceFile::from_poset("random7", &p)));
    let shape = SheafShape { generators: 5, relations: 3, max_coeff: 2, finite: false };
    let f = loop {
        let f = random_sheaf(&mut rng, &p, shape);
        let nonzero = f.stalks().iter().filter(|g| !g.is_zero()).count();
        let torsion = f.stalks().iter().any(|g| !g.invariants().1.is_empty());
        let higher = finsheaf::homology::homology(&f, 2)[1..].iter().any(|g| !g.is_zero());
        if !f.is_locally_constant() && nonzero >= 5 && torsion && higher {
            break f;
        }
    };
    put("random7_sheaf.json", write_json(&SheafFile::from_sheaf("random7", &f)));
}
