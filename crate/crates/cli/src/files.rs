//! JSON space and sheaf files.
//!
//! A space file lists element names and Hasse covers `[lower, upper]`. A sheaf file
//! gives each stalk as `{rank, torsion}` and, for each cover `a->b`, the matrix of
//! `F_a → F_b` on canonical generators: the free generators first, then one
//! generator per torsion entry in the listed order. Generators are numbered
//! `g1, g2, …` in that order.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use finsheaf::zlinalg::{FgAbGroup, Int, IntMatrix};
use finsheaf::{FinitePoset, Sheaf};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceFile {
    pub name: String,
    pub elements: Vec<String>,
    pub covers: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Stalk {
    pub rank: usize,
    #[serde(default)]
    pub torsion: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SheafFile {
    pub space: String,
    pub stalks: BTreeMap<String, Stalk>,
    #[serde(default)]
    pub maps: BTreeMap<String, Vec<Vec<i64>>>,
}

impl Stalk {
    fn gens(&self) -> usize {
        self.rank + self.torsion.len()
    }

    fn group(&self) -> FgAbGroup {
        let t: Vec<Int> = self.torsion.iter().map(|&d| Int::from(d)).collect();
        FgAbGroup::from_invariants(self.rank, &t)
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| anyhow!("{}: parse error at line {} column {}: {e}", path.display(), e.line(), e.column()))
}

impl SpaceFile {
    pub fn load(path: &Path) -> Result<SpaceFile> {
        read_json(path)
    }

    pub fn poset(&self) -> Result<FinitePoset> {
        FinitePoset::new(&self.elements, &self.covers).map_err(|r| anyhow!("space {}: {r}", self.name))
    }

    pub fn from_poset(name: &str, p: &FinitePoset) -> SpaceFile {
        SpaceFile {
            name: name.to_string(),
            elements: p.names().to_vec(),
            covers: p.covers().iter().map(|&(a, b)| (p.name(a).to_string(), p.name(b).to_string())).collect(),
        }
    }
}

impl SheafFile {
    pub fn load(path: &Path) -> Result<SheafFile> {
        read_json(path)
    }

    /// Validates the file against `space` and builds the sheaf.
    pub fn sheaf(&self, space: &SpaceFile, p: &FinitePoset) -> Result<Sheaf> {
        if self.space != space.name {
            bail!("sheaf refers to space {} but {} was given", self.space, space.name);
        }
        for name in self.stalks.keys() {
            p.index_of(name).map_err(|_| anyhow!("stalks: unknown element {name}"))?;
        }
        let mut stalks = Vec::with_capacity(p.len());
        for x in 0..p.len() {
            let s = self.stalks.get(p.name(x)).ok_or_else(|| anyhow!("stalks: missing element {}", p.name(x)))?;
            if let Some(d) = s.torsion.iter().find(|&&d| d < 2) {
                bail!("stalks[{}]: torsion entry {d} must be at least 2", p.name(x));
            }
            stalks.push(s.clone());
        }
        let key = |a: usize, b: usize| format!("{}->{}", p.name(a), p.name(b));
        for k in self.maps.keys() {
            if !p.covers().iter().any(|&(a, b)| key(a, b) == *k) {
                bail!("maps[{k}] is not a cover of the space");
            }
        }
        let mut edges = Vec::with_capacity(p.covers().len());
        for &(a, b) in p.covers() {
            let k = key(a, b);
            let (rows, cols) = (stalks[b].gens(), stalks[a].gens());
            let m = match self.maps.get(&k) {
                Some(m) => matrix(&k, m, rows, cols)?,
                None if rows == 0 || cols == 0 => IntMatrix::zeros(rows, cols),
                None => bail!("maps[{k}] is missing"),
            };
            // Each torsion generator of the source must land in the target's torsion.
            let target = stalks[b].group();
            for (i, d) in stalks[a].torsion.iter().enumerate() {
                let g = stalks[a].rank + i;
                let image: Vec<Int> = m.column(g).iter().map(|v| v * Int::from(*d)).collect();
                if !target.is_zero_element(&image) {
                    bail!("maps[{k}] does not respect relation {d}·g{} = 0", g + 1);
                }
            }
            edges.push(m);
        }
        let groups = stalks.iter().map(Stalk::group).collect();
        Sheaf::new(p.clone(), groups, edges).map_err(|e| anyhow!("sheaf on {}: {e}", space.name))
    }

    /// Writes a sheaf on canonical generators.
    pub fn from_sheaf(space: &str, f: &Sheaf) -> SheafFile {
        let f = f.normalized();
        let p = f.base();
        let stalks = (0..p.len())
            .map(|x| {
                let (rank, torsion) = f.stalk(x).invariants();
                let torsion = torsion.iter().map(|t| u64::try_from(t).expect("torsion fits in u64")).collect();
                (p.name(x).to_string(), Stalk { rank, torsion })
            })
            .collect();
        let maps = p
            .covers()
            .iter()
            .enumerate()
            .filter(|&(_, &(a, b))| f.stalk(a).num_gens() > 0 && f.stalk(b).num_gens() > 0)
            .map(|(k, &(a, b))| {
                let m = f.edge_matrix(k);
                let rows = (0..m.rows())
                    .map(|r| m.row(r).iter().map(|v| i64::try_from(v).expect("entry fits in i64")).collect())
                    .collect();
                (format!("{}->{}", p.name(a), p.name(b)), rows)
            })
            .collect();
        SheafFile { space: space.to_string(), stalks, maps }
    }
}

fn matrix(key: &str, rows: &[Vec<i64>], r: usize, c: usize) -> Result<IntMatrix> {
    // A map from or to the zero group may be written as `[]`.
    if rows.is_empty() && (r == 0 || c == 0) {
        return Ok(IntMatrix::zeros(r, c));
    }
    let cols = rows.first().map_or(0, Vec::len);
    if rows.len() != r || rows.iter().any(|row| row.len() != cols) || cols != c {
        bail!("maps[{key}] has shape {}x{cols}, expected {r}x{c}", rows.len());
    }
    Ok(IntMatrix::from_rows_with_cols(rows, c))
}

pub fn write_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}
