//! Shared helpers: corpus paths, binary invocation, golden files and the exit-code matrix.
#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn corpus(file: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(file)
}

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// Runs the binary; arguments ending in `.json` are resolved against the corpus.
pub fn run(args: &[&str]) -> Output {
    let resolved: Vec<String> = args
        .iter()
        .map(|a| if a.ends_with(".json") && !a.contains('/') { corpus(a).display().to_string() } else { a.to_string() })
        .collect();
    Command::new(env!("CARGO_BIN_EXE_finsheaf")).args(&resolved).output().expect("binary runs")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

pub const GOLDEN: &[(&str, &[&str])] = &[
    ("homology_point", &["homology", "point.json"]),
    ("homology_s0", &["homology", "s0.json"]),
    ("homology_sierpinski", &["homology", "sierpinski.json", "--max-deg", "1"]),
    ("homology_s1", &["homology", "s1.json", "--max-deg", "2"]),
    ("homology_s2", &["homology", "s2.json"]),
    ("homology_s3", &["homology", "s3.json"]),
    ("homology_s1xs1", &["homology", "s1xs1.json"]),
    ("homology_const_z", &["homology", "s1.json", "--sheaf", "const_z.json"]),
    ("homology_twisted_s1", &["homology", "s1.json", "--sheaf", "twisted_s1.json"]),
    ("homology_random7", &["homology", "random7.json", "--sheaf", "random7_sheaf.json"]),
    ("homology_random7_z", &["homology", "random7.json"]),
    ("cohomology_s2", &["cohomology", "s2.json"]),
    ("cohomology_twisted_s1", &["cohomology", "s1.json", "--sheaf", "twisted_s1.json"]),
    ("local_homology_s1", &["local-homology", "s1.json", "--closed", "a"]),
    ("mv_s1", &["mv", "s1.json", "--u", "a,c,d", "--v", "b,c,d"]),
    ("mv_closed_s1", &["mv-closed", "s1.json", "--y", "a,b,c", "--z", "a,b,d"]),
    ("excise_s1", &["excise", "s1.json", "--open", "a,c,d", "--closed", "a"]),
    ("uct_s1", &["uct", "s1.json", "--coeff", "Z/2"]),
    ("uct_s2", &["uct", "s2.json", "--coeff", "Z/3"]),
    ("kunneth_s1_s1", &["kunneth", "s1.json", "s1.json", "--max-deg", "2"]),
    ("kunneth_twisted", &["kunneth", "s1.json", "--sheaf", "twisted_s1.json", "s1.json"]),
    ("dual_twisted_s1", &["dual", "s1.json", "--sheaf", "twisted_s1.json"]),
    ("dual_random7", &["dual", "random7.json", "--sheaf", "random7_sheaf.json"]),
    ("dualizing_sierpinski", &["dualizing", "sierpinski.json"]),
    ("dualizing_s2", &["dualizing", "s2.json"]),
    ("pv_check_s1", &["pv-check", "s1.json"]),
    ("pv_check_sierpinski", &["pv-check", "sierpinski.json"]),
    ("manifold_check_sierpinski", &["manifold-check", "sierpinski.json"]),
    ("manifold_check_s2", &["manifold-check", "s2.json"]),
    ("manifold_check_s1xs1", &["manifold-check", "s1xs1.json"]),
    ("manifold_check_random7", &["manifold-check", "random7.json"]),
    ("verify_random7", &["verify", "random7.json", "--sheaf", "random7_sheaf.json"]),
    ("homology_s1_json", &["homology", "s1.json", "--json"]),
    ("pv_check_sierpinski_json", &["pv-check", "sierpinski.json", "--json"]),
];

/// Compares every golden file with a fresh run. With `bless` the files are rewritten instead.
pub fn golden_mismatches(bless: bool) -> Vec<String> {
    let mut mismatches = Vec::new();
    for (name, args) in GOLDEN {
        let o = run(args);
        let got = format!("{}exit {}\n", stdout(&o), o.status.code().unwrap());
        let path = golden_dir().join(format!("{name}.txt"));
        if bless {
            fs::create_dir_all(golden_dir()).unwrap();
            fs::write(&path, &got).unwrap();
            continue;
        }
        match fs::read_to_string(&path) {
            Ok(want) if want == got => {}
            Ok(want) => mismatches.push(format!("{name}:\n--- want\n{want}--- got\n{got}")),
            Err(_) => mismatches.push(format!("missing golden file {}", path.display())),
        }
    }
    mismatches
}

fn write_fixture(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.display().to_string()
}

/// Runs the pass / check-failure / input-error fixtures in `d` and returns the mismatches.
pub fn exit_code_failures(d: &Path) -> Vec<String> {
    let cycle = write_fixture(d, "cycle.json", r#"{"name": "c", "elements": ["a", "b"], "covers": [["a", "b"], ["b", "a"]]}"#);
    let malformed = write_fixture(d, "bad.json", "{\"name\": \"x\",\n \"elements\": [\"a\"\n");
    let shape = write_fixture(
        d,
        "shape.json",
        r#"{"space": "sierpinski", "stalks": {"a": {"rank": 1}, "b": {"rank": 1}}, "maps": {"a->b": [[1, 0]]}}"#,
    );
    let relation = write_fixture(
        d,
        "relation.json",
        r#"{"space": "sierpinski", "stalks": {"a": {"rank": 0, "torsion": [2]}, "b": {"rank": 1}}, "maps": {"a->b": [[1]]}}"#,
    );
    let wrong_space = write_fixture(d, "wrong.json", r#"{"space": "s1", "stalks": {}, "maps": {}}"#);
    let not_cover = write_fixture(
        d,
        "nc.json",
        r#"{"space": "sierpinski", "stalks": {"a": {"rank": 1}, "b": {"rank": 1}}, "maps": {"b->a": [[1]]}}"#,
    );
    let cases: Vec<(Vec<String>, i32, &str)> = vec![
        (vec!["homology".into(), corpus("s1.json").display().to_string()], 0, ""),
        (vec!["pv-check".into(), corpus("s2.json").display().to_string()], 0, ""),
        (vec!["manifold-check".into(), corpus("s1.json").display().to_string()], 0, ""),
        (vec!["verify".into(), corpus("s1xs1.json").display().to_string()], 0, ""),
        (vec!["pv-check".into(), corpus("sierpinski.json").display().to_string()], 1, ""),
        (vec!["manifold-check".into(), corpus("sierpinski.json").display().to_string()], 1, ""),
        (vec!["manifold-check".into(), corpus("random7.json").display().to_string()], 1, ""),
        (vec!["homology".into(), cycle.clone()], 2, "cycle"),
        (vec!["homology".into(), malformed], 2, "parse error at line"),
        (vec!["homology".into(), d.join("missing.json").display().to_string()], 2, "cannot read"),
        (vec!["homology".into(), corpus("sierpinski.json").display().to_string(), "--sheaf".into(), shape], 2, "shape"),
        (
            vec!["homology".into(), corpus("sierpinski.json").display().to_string(), "--sheaf".into(), relation],
            2,
            "maps[a->b] does not respect relation 2·g1 = 0",
        ),
        (vec!["homology".into(), corpus("sierpinski.json").display().to_string(), "--sheaf".into(), wrong_space], 2, "refers to space s1"),
        (vec!["homology".into(), corpus("sierpinski.json").display().to_string(), "--sheaf".into(), not_cover], 2, "not a cover"),
        (vec!["uct".into(), corpus("s1.json").display().to_string(), "--coeff".into(), "Q".into()], 2, "bad group term"),
        (
            vec!["mv".into(), corpus("s1.json").display().to_string(), "--u".into(), "a".into(), "--v".into(), "b".into()],
            2,
            "",
        ),
        (vec!["local-homology".into(), corpus("s1.json").display().to_string(), "--closed".into(), "z".into()], 2, "unknown"),
        (vec!["local-homology".into(), corpus("s1.json").display().to_string(), "--closed".into(), "c".into()], 2, "not closed"),
        (vec!["no-such-command".into()], 2, ""),
    ];
    let mut failures = Vec::new();
    for (args, code, needle) in cases {
        let o = Command::new(env!("CARGO_BIN_EXE_finsheaf")).args(&args).output().unwrap();
        let err = String::from_utf8_lossy(&o.stderr);
        if o.status.code() != Some(code) || !err.contains(needle) {
            failures.push(format!("{args:?}: exit {:?}, stderr {err}", o.status.code()));
        }
    }
    failures
}

/// Whether `homology --json` is byte-identical across two runs on every corpus space.
pub fn json_is_stable() -> bool {
    ["point", "s0", "sierpinski", "s1", "s2", "s1xs1", "random7"].iter().all(|space| {
        let file = format!("{space}.json");
        let (a, b) = (run(&["homology", &file, "--json"]), run(&["homology", &file, "--json"]));
        a.status.code() == Some(0) && a.stdout == b.stdout
    })
}
