//! Pass/fail reports produced by the consistency checks.

use std::fmt;

use zlinalg::FgAbGroup;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Item {
    pub label: String,
    pub ok: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub title: String,
    pub items: Vec<Item>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Report {
        Report { title: title.into(), items: Vec::new() }
    }

    pub fn push(&mut self, label: impl Into<String>, ok: bool, detail: impl Into<String>) {
        self.items.push(Item { label: label.into(), ok, detail: detail.into() });
    }

    /// Records whether two groups are isomorphic.
    pub fn compare(&mut self, label: impl Into<String>, actual: &FgAbGroup, expected: &FgAbGroup) {
        let ok = actual.is_isomorphic(expected);
        let detail = if ok { actual.to_string() } else { format!("got {actual}, expected {expected}") };
        self.push(label, ok, detail);
    }

    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.ok)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Item> {
        self.items.iter().filter(|i| !i.ok)
    }

    pub fn extend(&mut self, other: Report) {
        for mut i in other.items {
            i.label = format!("{}: {}", other.title, i.label);
            self.items.push(i);
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}: {}", self.title, if self.passed() { "PASS" } else { "FAIL" })?;
        for i in &self.items {
            let mark = if i.ok { "ok" } else { "FAIL" };
            if i.detail.is_empty() {
                writeln!(f, "  [{mark}] {}", i.label)?;
            } else {
                writeln!(f, "  [{mark}] {}: {}", i.label, i.detail)?;
            }
        }
        Ok(())
    }
}
