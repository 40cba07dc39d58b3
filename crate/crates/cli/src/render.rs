//! Group syntax `Z^r + Z/d1 + …` in both directions, and JSON encodings of results.

use anyhow::{anyhow, bail, Result};
use finsheaf::report::Report;
use finsheaf::zlinalg::{FgAbGroup, Int};
use finsheaf::{ElementSet, FinitePoset};
use serde_json::{json, Value};

/// Parses `0`, `Z`, `Z^3`, `Z/4` and sums of these joined by `+`.
pub fn parse_group(s: &str) -> Result<FgAbGroup> {
    let mut rank = 0;
    let mut torsion = Vec::new();
    for term in s.split('+').map(str::trim) {
        match term {
            "0" => {}
            "Z" => rank += 1,
            _ if term.starts_with("Z^") => {
                rank += term[2..].parse::<usize>().map_err(|_| anyhow!("bad group term {term:?}"))?;
            }
            _ if term.starts_with("Z/") => {
                let d: u64 = term[2..].parse().map_err(|_| anyhow!("bad group term {term:?}"))?;
                if d == 0 {
                    bail!("bad group term {term:?}");
                }
                torsion.push(Int::from(d));
            }
            _ => bail!("bad group term {term:?}"),
        }
    }
    let parts: Vec<FgAbGroup> = std::iter::once(FgAbGroup::free(rank))
        .chain(torsion.iter().map(|d| FgAbGroup::from_invariants(0, std::slice::from_ref(d))))
        .collect();
    Ok(FgAbGroup::direct_sum(&parts))
}

/// A comma-separated list of element names; the empty string is the empty set.
pub fn parse_elements(p: &FinitePoset, s: &str) -> Result<ElementSet> {
    let names: Vec<&str> = s.split(',').map(str::trim).filter(|n| !n.is_empty()).collect();
    p.set_of(&names).map_err(|e| anyhow!("{e}"))
}

fn int_json(v: &Int) -> Value {
    match u64::try_from(v) {
        Ok(n) => json!(n),
        Err(_) => json!(v.to_string()),
    }
}

pub fn group_json(g: &FgAbGroup) -> Value {
    let (rank, torsion) = g.invariants();
    json!({
        "group": g.to_string(),
        "rank": rank,
        "torsion": torsion.iter().map(int_json).collect::<Vec<_>>(),
    })
}

pub fn degrees_json(groups: &[FgAbGroup], degree: impl Fn(usize) -> i64) -> Value {
    Value::Array(
        groups
            .iter()
            .enumerate()
            .map(|(i, g)| {
                let mut v = group_json(g);
                v["degree"] = json!(degree(i));
                v
            })
            .collect(),
    )
}

pub fn report_json(r: &Report) -> Value {
    json!({
        "title": r.title,
        "passed": r.passed(),
        "items": r.items.iter().map(|i| json!({"label": i.label, "ok": i.ok, "detail": i.detail})).collect::<Vec<_>>(),
    })
}

pub fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_syntax_round_trips() {
        for s in ["0", "Z", "Z^2", "Z/2", "Z + Z/2", "Z^3 + Z/2 + Z/6"] {
            assert_eq!(parse_group(s).unwrap().to_string(), s);
        }
        assert_eq!(parse_group("Z/2 + Z/3").unwrap().to_string(), "Z/6");
        assert_eq!(parse_group("Z/1").unwrap().to_string(), "0");
        for bad in ["", "Q", "Z/0", "Z^x", "Z/-2"] {
            assert!(parse_group(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn element_lists() {
        let p = FinitePoset::sphere(1);
        assert_eq!(parse_elements(&p, "c, a").unwrap(), vec![0, 2]);
        assert!(parse_elements(&p, "").unwrap().is_empty());
        assert!(parse_elements(&p, "a,z").is_err());
    }
}
