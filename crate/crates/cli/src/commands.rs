//! Command-line interface: argument parsing and command execution.

use std::path::{Path, PathBuf};

use anyhow::{anyhow, Result};
use clap::{Args, Parser, Subcommand};
use finsheaf::duality::{dualizing_complex, homological_manifold_check, pv_check};
use finsheaf::homology::{
    bar_homology, cohomology, cosections, duality_sequence_check, excision_check, homology, kunneth, local_homology,
    mv_closed_check, mv_open_check, universal_coefficients,
};
use finsheaf::report::Report;
use finsheaf::zlinalg::FgAbGroup;
use finsheaf::{FinitePoset, Sheaf};
use serde_json::{json, Value};

use crate::files::{SheafFile, SpaceFile};
use crate::render::{degrees_json, group_json, parse_elements, parse_group, report_json, verdict};

#[derive(Parser, Debug)]
#[command(name = "finsheaf", version, about = "Sheaf homology and duality on finite spaces")]
pub struct Cli {
    /// Print structured JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Worker thread hint. Computations currently run on one thread.
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Input {
    /// Space file.
    pub space: PathBuf,
    /// Sheaf file; defaults to the constant sheaf Z.
    #[arg(long, value_name = "FILE")]
    pub sheaf: Option<PathBuf>,
    /// Highest degree to report; defaults to the height of the space.
    #[arg(long, value_name = "N")]
    pub max_deg: Option<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct SpaceOnly {
    /// Space file.
    pub space: PathBuf,
    /// Highest degree to report; defaults to the height of the space.
    #[arg(long, value_name = "N")]
    pub max_deg: Option<usize>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Sheaf homology H_i(X, F).
    Homology(Input),
    /// Sheaf cohomology H^i(X, F).
    Cohomology(Input),
    /// Local homology H_i^Y(X, F) for a closed subset Y.
    LocalHomology {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_name = "ELEMENTS")]
        closed: String,
    },
    /// Mayer-Vietoris sequence for an open cover X = U ∪ V.
    Mv {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_name = "ELEMENTS")]
        u: String,
        #[arg(long, value_name = "ELEMENTS")]
        v: String,
    },
    /// Mayer-Vietoris sequence for a closed cover X = Y ∪ Z.
    MvClosed {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_name = "ELEMENTS")]
        y: String,
        #[arg(long, value_name = "ELEMENTS")]
        z: String,
    },
    /// Excision for a closed Y inside an open U.
    Excise {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_name = "ELEMENTS")]
        open: String,
        #[arg(long, value_name = "ELEMENTS")]
        closed: String,
    },
    /// Homology with coefficients in a group, checked against universal coefficients.
    Uct {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_name = "GROUP")]
        coeff: String,
    },
    /// Homology of an external product, checked against the Künneth formula.
    Kunneth {
        #[command(flatten)]
        input: Input,
        /// Second space file.
        space2: PathBuf,
        /// Sheaf file on the second space; defaults to the constant sheaf Z.
        sheaf2: Option<PathBuf>,
    },
    /// Homology-cohomology duality through the derived dual of F.
    Dual(Input),
    /// Stalk cohomology of the dualizing complex.
    Dualizing(SpaceOnly),
    /// Poincaré-Verdier duality on the minimal opens.
    PvCheck(SpaceOnly),
    /// Decide whether the space is a homological manifold.
    ManifoldCheck(SpaceOnly),
    /// Cross-check the homology of F against independent constructions.
    Verify(Input),
}

/// The result of a command: rendered text, structured output and whether every check passed.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub text: String,
    pub json: Value,
    pub passed: bool,
}

struct Loaded {
    space: SpaceFile,
    poset: FinitePoset,
    sheaf_name: Option<String>,
    sheaf: Sheaf,
}

fn load(space: &Path, sheaf: Option<&Path>) -> Result<Loaded> {
    let file = SpaceFile::load(space)?;
    let poset = file.poset()?;
    let (sheaf_name, sheaf) = match sheaf {
        Some(path) => {
            let s = SheafFile::load(path)?.sheaf(&file, &poset).map_err(|e| anyhow!("{}: {e}", path.display()))?;
            let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned());
            (stem, s)
        }
        None => (None, Sheaf::constant_z(&poset)),
    };
    Ok(Loaded { space: file, poset, sheaf_name, sheaf })
}

fn default_degree(p: &FinitePoset, max_deg: Option<usize>) -> usize {
    max_deg.unwrap_or(p.height().max(0) as usize)
}

fn lines(groups: &[FgAbGroup], label: impl Fn(usize) -> String) -> String {
    groups.iter().enumerate().map(|(i, g)| format!("{} = {g}\n", label(i))).collect()
}

fn header(command: &str, l: &Loaded, max_deg: usize) -> Value {
    json!({
        "command": command,
        "space": l.space.name,
        "sheaf": l.sheaf_name,
        "max_deg": max_deg,
    })
}

fn groups_outcome(command: &str, l: &Loaded, max_deg: usize, groups: &[FgAbGroup], upper: bool) -> Outcome {
    let text = lines(groups, |i| if upper { format!("H^{i}") } else { format!("H_{i}") });
    let mut json = header(command, l, max_deg);
    json["groups"] = degrees_json(groups, |i| i as i64);
    Outcome { text, json, passed: true }
}

fn report_outcome(command: &str, l: &Loaded, max_deg: usize, report: &Report) -> Outcome {
    let mut json = header(command, l, max_deg);
    json["report"] = report_json(report);
    Outcome { text: report.to_string(), json, passed: report.passed() }
}

/// Groups followed by the verdict of the check that accompanies them.
fn checked_groups_outcome(command: &str, l: &Loaded, max_deg: usize, groups: &[FgAbGroup], report: &Report) -> Outcome {
    let mut text = lines(groups, |i| format!("H_{i}"));
    text.push_str(&format!("{} check {}\n", report.title, verdict(report.passed())));
    for i in report.failures() {
        text.push_str(&format!("  {}: {}\n", i.label, i.detail));
    }
    let mut json = header(command, l, max_deg);
    json["groups"] = degrees_json(groups, |i| i as i64);
    json["report"] = report_json(report);
    Outcome { text, json, passed: report.passed() }
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Homology(i) => {
            let l = load(&i.space, i.sheaf.as_deref())?;
            let d = default_degree(&l.poset, i.max_deg);
            Ok(groups_outcome("homology", &l, d, &homology(&l.sheaf, d), false))
        }
        Command::Cohomology(i) => {
            let l = load(&i.space, i.sheaf.as_deref())?;
            let d = default_degree(&l.poset, i.max_deg);
            Ok(groups_outcome("cohomology", &l, d, &cohomology(&l.sheaf, d), true))
        }
        Command::LocalHomology { input: i, closed } => {
            let l = load(&i.space, i.sheaf.as_deref())?;
            let d = default_degree(&l.poset, i.max_deg);
            let y = parse_elements(&l.poset, closed)?;
            let groups = local_homology(&l.sheaf, &y, d).map_err(|e| anyhow!("{e}"))?;
            let mut out = groups_outcome("local-homology", &l, d, &groups, false);
            out.json["closed"] = json!(names(&l.poset, &y));
            Ok(out)
        }
        Command::Mv { input: i, u, v } => {
            let l = load(&i.space, i.sheaf.as_deref())?;
            let d = default_degree(&l.poset, i.max_deg);
            let (u, v) = (parse_elements(&l.poset, u)?, parse_elements(&l.poset, v)?);
            let r = mv_open_check(&l.sheaf, &u, &v, d).map_err(|e| anyhow!("{e}"))?;
            Ok(report_outcome("mv", &l, d, &r))
        }
        Command::MvClosed { input: i, y, z } => {
            let l = load(&i.space, i.sheaf.as_deref())?;
            let d = default_degree(&l.poset, i.max_deg);
            let (y, z) = (parse_elements(&l.poset, y)?, parse_elements(&l.poset, z)?);
            let r = mv_closed_check(&l.sheaf, &y, &z, d).map_err(|e| anyhow!("{e}"))?;
            Ok(report_outcome("mv-closed", &l, d, &r))
        }
        Command::Excise { input: i, open, closed } => {
            let l = load(&i.space, i.sheaf.as_deref())?;
            let d = default_degree(&l.poset, i.max_deg);
            let (u, y) = (parse_elements(&l.poset, open)?, parse_elements(&l.poset, closed)?);
            let r = excision_check(&l.sheaf, &u, &y, d).map_err(|e| anyhow!("{e}"))?;
            Ok(report_outcome("excise", &l, d, &r))
        }
        Command::Uct { input: i, coeff } => {
            let l = load(&i.space, i.sheaf.as_deref())?;
            let d = default_degree(&l.poset, i.max_deg);
            let g = parse_group(coeff)?;
            let u = universal_coefficients(&l.sheaf, &g, d);
            let mut out = checked_groups_outcome("uct", &l, d, &u.groups, &u.report);
            out.json["coeff"] = group_json(&g);
            Ok(out)
        }
        Command::Kunneth { input: i, space2, sheaf2 } => {
            let l = load(&i.space, i.sheaf.as_deref())?;
            let l2 = load(space2, sheaf2.as_deref())?;
            let d = i.max_deg.unwrap_or((l.poset.height().max(0) + l2.poset.height().max(0)) as usize);
            let k = kunneth(&l.sheaf, &l2.sheaf, d);
            let mut out = checked_groups_outcome("kunneth", &l, d, &k.groups, &k.report);
            out.json["space2"] = json!(l2.space.name);
            out.json["sheaf2"] = json!(l2.sheaf_name);
            Ok(out)
        }
        Command::Dual(i) => {
            let l = load(&i.space, i.sheaf.as_deref())?;
            let d = default_degree(&l.poset, i.max_deg);
            Ok(report_outcome("dual", &l, d, &duality_sequence_check(&l.sheaf, d)))
        }
        Command::Dualizing(s) => {
            let l = load(&s.space, None)?;
            Ok(dualizing(&l))
        }
        Command::PvCheck(s) => {
            let l = load(&s.space, None)?;
            let d = default_degree(&l.poset, s.max_deg);
            Ok(report_outcome("pv-check", &l, d, &pv_check(&l.poset, d)))
        }
        Command::ManifoldCheck(s) => {
            let l = load(&s.space, None)?;
            Ok(manifold(&l))
        }
        Command::Verify(i) => {
            let l = load(&i.space, i.sheaf.as_deref())?;
            let d = default_degree(&l.poset, i.max_deg);
            Ok(verify(&l, d))
        }
    }
}

fn names(p: &FinitePoset, s: &[usize]) -> Vec<String> {
    s.iter().map(|&x| p.name(x).to_string()).collect()
}

fn dualizing(l: &Loaded) -> Outcome {
    let p = &l.poset;
    let h = p.height().max(0);
    let d = dualizing_complex(p);
    let mut text = String::new();
    let mut stalks = Vec::new();
    for x in 0..p.len() {
        let groups: Vec<FgAbGroup> = (-h..=0).map(|j| d.stalk_cohomology(x, j)).collect();
        let parts: Vec<String> = groups.iter().zip(-h..=0).map(|(g, j)| format!("H^{j} = {g}")).collect();
        text.push_str(&format!("{}: {}\n", p.name(x), parts.join(", ")));
        stalks.push(json!({"element": p.name(x), "groups": degrees_json(&groups, |i| i as i64 - h)}));
    }
    let mut json = header("dualizing", l, h as usize);
    json["stalks"] = Value::Array(stalks);
    Outcome { text, json, passed: true }
}

fn manifold(l: &Loaded) -> Outcome {
    let m = homological_manifold_check(&l.poset);
    let text = match (m.is_manifold, m.dimension, m.orientable) {
        (true, Some(n), Some(o)) => {
            format!("homological {n}-manifold, {}\n", if o { "orientable" } else { "non-orientable" })
        }
        _ => format!("not a homological manifold ({})\n", m.witnesses.join("; ")),
    };
    let mut json = header("manifold-check", l, l.poset.height().max(0) as usize);
    json["manifold"] = json!(m.is_manifold);
    json["dimension"] = json!(m.dimension);
    json["orientable"] = json!(m.orientable);
    json["witnesses"] = json!(m.witnesses);
    Outcome { text, json, passed: m.is_manifold }
}

/// Every check the library can run on a single sheaf without further input.
fn verify(l: &Loaded, d: usize) -> Outcome {
    let f = &l.sheaf;
    let h = homology(f, d + 1);
    let mut reports = Vec::new();
    let mut r = Report::new("resolution vs bar complex");
    for (i, (a, b)) in h.iter().zip(bar_homology(f, d + 1)).enumerate() {
        r.compare(format!("H_{i}"), a, &b);
    }
    reports.push(r);
    let mut r = Report::new("cosections");
    r.compare("H_0", &h[0], &cosections(f));
    reports.push(r);
    let mut r = Report::new("vanishing above the height");
    let top = l.poset.height().max(0) as usize + 1;
    if top <= d + 1 {
        r.compare(format!("H_{top}"), &h[top], &FgAbGroup::zero());
    }
    reports.push(r);
    reports.push(duality_sequence_check(f, d));
    for n in [2, 3] {
        let mut u = universal_coefficients(f, &FgAbGroup::cyclic(n), d).report;
        u.title = format!("{} with Z/{n}", u.title);
        reports.push(u);
    }
    let passed = reports.iter().all(Report::passed);
    let mut text: String = reports.iter().map(|r| format!("{} {}\n", r.title, verdict(r.passed()))).collect();
    for r in &reports {
        for i in r.failures() {
            text.push_str(&format!("  {}: {}: {}\n", r.title, i.label, i.detail));
        }
    }
    text.push_str(&format!("verify {}\n", verdict(passed)));
    let mut json = header("verify", l, d);
    json["passed"] = json!(passed);
    json["reports"] = Value::Array(reports.iter().map(report_json).collect());
    Outcome { text, json, passed }
}
