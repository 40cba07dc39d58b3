//! Finite T0 spaces as posets.
//!
//! Opens are up-sets: the smallest open containing `x` is `U_x = {y : y ≥ x}`, so
//! maximal elements are open points. Closed sets are down-sets.
//!
//! Subsets are passed around as sorted, deduplicated `Vec<usize>` of element indices.
//! Element indices follow input order and fix every matrix ordering downstream.

use std::collections::HashMap;
use std::fmt;

use crate::error::Error;

/// A subset of elements, sorted ascending without repeats.
pub type ElementSet = Vec<usize>;

/// Normalizes an arbitrary list of indices into an [`ElementSet`].
pub fn element_set(mut v: Vec<usize>) -> ElementSet {
    v.sort_unstable();
    v.dedup();
    v
}

/// One problem found by [`validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PosetViolation {
    DuplicateElement(String),
    UnknownElement(String),
    SelfLoop(String),
    DuplicateCover(String, String),
    Cycle(Vec<String>),
    NonHasse(String, String),
}

impl fmt::Display for PosetViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PosetViolation::DuplicateElement(e) => write!(f, "duplicate element {e}"),
            PosetViolation::UnknownElement(e) => write!(f, "unknown element {e}"),
            PosetViolation::SelfLoop(e) => write!(f, "cycle: self-cover at {e}"),
            PosetViolation::DuplicateCover(a, b) => write!(f, "duplicate cover ({a},{b})"),
            PosetViolation::Cycle(c) => write!(f, "cycle through {}", c.join(" < ")),
            PosetViolation::NonHasse(a, b) => write!(f, "non-Hasse edge ({a},{b})"),
        }
    }
}

/// Every violation of the poset invariants; empty means valid.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<PosetViolation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return write!(f, "ok");
        }
        let parts: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// Checks element names and cover pairs against the poset invariants.
pub fn validate<S: AsRef<str>>(elements: &[S], covers: &[(S, S)]) -> ValidationReport {
    let mut violations = Vec::new();
    let mut index = HashMap::new();
    for (i, e) in elements.iter().enumerate() {
        if index.insert(e.as_ref().to_string(), i).is_some() {
            violations.push(PosetViolation::DuplicateElement(e.as_ref().to_string()));
        }
    }
    let n = elements.len();
    let mut edges = Vec::new();
    for (a, b) in covers {
        let (a, b) = (a.as_ref(), b.as_ref());
        let (Some(&i), Some(&j)) = (index.get(a), index.get(b)) else {
            for x in [a, b] {
                if !index.contains_key(x) {
                    violations.push(PosetViolation::UnknownElement(x.to_string()));
                }
            }
            continue;
        };
        if i == j {
            violations.push(PosetViolation::SelfLoop(a.to_string()));
            continue;
        }
        if edges.contains(&(i, j)) {
            violations.push(PosetViolation::DuplicateCover(a.to_string(), b.to_string()));
            continue;
        }
        edges.push((i, j));
    }
    let name = |i: usize| elements[i].as_ref().to_string();
    if let Some(cycle) = find_cycle(n, &edges) {
        violations.push(PosetViolation::Cycle(cycle.into_iter().map(name).collect()));
        return ValidationReport { violations };
    }
    let reach = reachability(n, &edges);
    for &(i, j) in &edges {
        // (i, j) is implied if some other successor k of i reaches j.
        let implied = edges.iter().any(|&(a, k)| a == i && k != j && reach[k][j]);
        if implied {
            violations.push(PosetViolation::NonHasse(name(i), name(j)));
        }
    }
    ValidationReport { violations }
}

fn find_cycle(n: usize, edges: &[(usize, usize)]) -> Option<Vec<usize>> {
    let mut succ = vec![Vec::new(); n];
    for &(a, b) in edges {
        succ[a].push(b);
    }
    // 0 = unvisited, 1 = on stack, 2 = done.
    let mut state = vec![0u8; n];
    let mut stack: Vec<usize> = Vec::new();
    fn dfs(v: usize, succ: &[Vec<usize>], state: &mut [u8], stack: &mut Vec<usize>) -> Option<Vec<usize>> {
        state[v] = 1;
        stack.push(v);
        for &w in &succ[v] {
            if state[w] == 1 {
                let pos = stack.iter().position(|&s| s == w).unwrap();
                let mut c = stack[pos..].to_vec();
                c.push(w);
                return Some(c);
            }
            if state[w] == 0 {
                if let Some(c) = dfs(w, succ, state, stack) {
                    return Some(c);
                }
            }
        }
        stack.pop();
        state[v] = 2;
        None
    }
    for v in 0..n {
        if state[v] == 0 {
            if let Some(c) = dfs(v, &succ, &mut state, &mut stack) {
                return Some(c);
            }
        }
    }
    None
}

/// Reflexive-transitive closure of an acyclic edge set.
fn reachability(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let mut r = vec![vec![false; n]; n];
    for (i, row) in r.iter_mut().enumerate() {
        row[i] = true;
    }
    for &(a, b) in edges {
        r[a][b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if r[i][k] {
                for j in 0..n {
                    if r[k][j] {
                        r[i][j] = true;
                    }
                }
            }
        }
    }
    r
}

/// A finite poset given by its Hasse diagram.
#[derive(Clone, PartialEq, Eq)]
pub struct FinitePoset {
    names: Vec<String>,
    covers: Vec<(usize, usize)>,
    leq: Vec<Vec<bool>>,
    upper: Vec<Vec<usize>>,
    lower: Vec<Vec<usize>>,
}

impl fmt::Debug for FinitePoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let covers: Vec<String> =
            self.covers.iter().map(|&(a, b)| format!("{}<{}", self.names[a], self.names[b])).collect();
        write!(f, "FinitePoset[{}; {}]", self.names.join(","), covers.join(","))
    }
}

impl FinitePoset {
    /// Builds a poset from element names and cover pairs `(lower, upper)`.
    pub fn new<S: AsRef<str>>(elements: &[S], covers: &[(S, S)]) -> Result<FinitePoset, ValidationReport> {
        let report = validate(elements, covers);
        if !report.is_ok() {
            return Err(report);
        }
        let names: Vec<String> = elements.iter().map(|e| e.as_ref().to_string()).collect();
        let index: HashMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        let edges: Vec<(usize, usize)> =
            covers.iter().map(|(a, b)| (index[a.as_ref()], index[b.as_ref()])).collect();
        Ok(FinitePoset::from_hasse(names, edges))
    }

    /// Builds a poset from an arbitrary acyclic relation, reducing it to Hasse form.
    pub fn from_relation(names: Vec<String>, relation: &[(usize, usize)]) -> FinitePoset {
        let n = names.len();
        let reach = reachability(n, relation);
        for i in 0..n {
            for j in 0..n {
                assert!(i == j || !(reach[i][j] && reach[j][i]), "relation has a cycle");
            }
        }
        let mut edges = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j && reach[i][j] && !(0..n).any(|k| k != i && k != j && reach[i][k] && reach[k][j]) {
                    edges.push((i, j));
                }
            }
        }
        FinitePoset::from_hasse(names, edges)
    }

    fn from_hasse(names: Vec<String>, mut covers: Vec<(usize, usize)>) -> FinitePoset {
        covers.sort_unstable();
        let n = names.len();
        let leq = reachability(n, &covers);
        let mut upper = vec![Vec::new(); n];
        let mut lower = vec![Vec::new(); n];
        for &(a, b) in &covers {
            upper[a].push(b);
            lower[b].push(a);
        }
        FinitePoset { names, covers, leq, upper, lower }
    }

    /// The one-point space.
    pub fn point() -> FinitePoset {
        FinitePoset::from_hasse(vec!["p".into()], Vec::new())
    }

    /// Discrete space on the given names.
    pub fn discrete<S: AsRef<str>>(names: &[S]) -> FinitePoset {
        FinitePoset::from_hasse(names.iter().map(|s| s.as_ref().to_string()).collect(), Vec::new())
    }

    /// Adds two incomparable elements above everything.
    pub fn suspension(&self, top1: &str, top2: &str) -> FinitePoset {
        let n = self.len();
        let mut names = self.names.clone();
        names.push(top1.to_string());
        names.push(top2.to_string());
        let maxima: Vec<usize> = (0..n).filter(|&x| self.upper[x].is_empty()).collect();
        let mut covers = self.covers.clone();
        for m in maxima {
            covers.push((m, n));
            covers.push((m, n + 1));
        }
        FinitePoset::from_hasse(names, covers)
    }

    /// The minimal finite model of `S^n`: `S^0 = {a, b}` discrete, then iterated
    /// suspensions adding `{c, d}`, `{e, f}`, and so on.
    pub fn sphere(n: usize) -> FinitePoset {
        let mut p = FinitePoset::discrete(&["a", "b"]);
        for k in 0..n {
            let c1 = char::from(b'c' + 2 * k as u8).to_string();
            let c2 = char::from(b'd' + 2 * k as u8).to_string();
            p = p.suspension(&c1, &c2);
        }
        p
    }

    /// A chain `0 < 1 < … < n-1`.
    pub fn chain(n: usize) -> FinitePoset {
        let names = (0..n).map(|i| i.to_string()).collect();
        let covers = (1..n).map(|i| (i - 1, i)).collect();
        FinitePoset::from_hasse(names, covers)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, x: usize) -> &str {
        &self.names[x]
    }

    pub fn index_of(&self, name: &str) -> Result<usize, Error> {
        self.names.iter().position(|n| n == name).ok_or_else(|| Error::UnknownElement(name.to_string()))
    }

    /// Indices of the given names, as a sorted set.
    pub fn set_of<S: AsRef<str>>(&self, names: &[S]) -> Result<ElementSet, Error> {
        let v = names.iter().map(|n| self.index_of(n.as_ref())).collect::<Result<Vec<_>, _>>()?;
        Ok(element_set(v))
    }

    pub fn all(&self) -> ElementSet {
        (0..self.len()).collect()
    }

    /// Hasse covers `(lower, upper)`, sorted.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn cover_index(&self, x: usize, y: usize) -> Option<usize> {
        self.covers.binary_search(&(x, y)).ok()
    }

    pub fn upper_covers(&self, x: usize) -> &[usize] {
        &self.upper[x]
    }

    pub fn lower_covers(&self, x: usize) -> &[usize] {
        &self.lower[x]
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq[x][y]
    }

    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.leq[x][y]
    }

    pub fn comparable(&self, x: usize, y: usize) -> bool {
        self.leq[x][y] || self.leq[y][x]
    }

    /// `U_x = {y : y ≥ x}`.
    pub fn minimal_open(&self, x: usize) -> ElementSet {
        (0..self.len()).filter(|&y| self.leq[x][y]).collect()
    }

    /// Closure of a point, `{y : y ≤ x}`.
    pub fn point_closure(&self, x: usize) -> ElementSet {
        (0..self.len()).filter(|&y| self.leq[y][x]).collect()
    }

    pub fn is_open(&self, s: &[usize]) -> bool {
        s.iter().all(|&x| self.upper[x].iter().all(|y| s.contains(y)))
    }

    pub fn is_closed(&self, s: &[usize]) -> bool {
        s.iter().all(|&x| self.lower[x].iter().all(|y| s.contains(y)))
    }

    pub fn up_closure(&self, s: &[usize]) -> ElementSet {
        (0..self.len()).filter(|&y| s.iter().any(|&x| self.leq[x][y])).collect()
    }

    pub fn down_closure(&self, s: &[usize]) -> ElementSet {
        (0..self.len()).filter(|&y| s.iter().any(|&x| self.leq[y][x])).collect()
    }

    pub fn complement(&self, s: &[usize]) -> ElementSet {
        (0..self.len()).filter(|x| !s.contains(x)).collect()
    }

    pub fn require_open(&self, s: &[usize]) -> Result<(), Error> {
        if self.is_open(s) { Ok(()) } else { Err(Error::NotOpen(self.describe(s))) }
    }

    pub fn require_closed(&self, s: &[usize]) -> Result<(), Error> {
        if self.is_closed(s) { Ok(()) } else { Err(Error::NotClosed(self.describe(s))) }
    }

    /// `{a,b,c}` rendering of a subset.
    pub fn describe(&self, s: &[usize]) -> String {
        let names: Vec<&str> = s.iter().map(|&x| self.name(x)).collect();
        format!("{{{}}}", names.join(","))
    }

    /// Connected components of the comparability graph restricted to `s`, each sorted,
    /// ordered by smallest element.
    pub fn connected_components(&self, s: &[usize]) -> Vec<ElementSet> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for &start in s {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut i = 0;
            while i < comp.len() {
                let x = comp[i];
                for &y in s {
                    if !seen[y] && self.comparable(x, y) {
                        seen[y] = true;
                        comp.push(y);
                    }
                }
                i += 1;
            }
            out.push(element_set(comp));
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components(&self.all()).len() == 1
    }

    /// All chains `x_0 < … < x_n` inside `s`, in lexicographic order of index tuples.
    pub fn strict_chains(&self, s: &[usize], n: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(n + 1);
        fn rec(p: &FinitePoset, s: &[usize], n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == n + 1 {
                out.push(cur.clone());
                return;
            }
            for &y in s {
                if cur.last().is_none_or(|&x| p.lt(x, y)) {
                    cur.push(y);
                    rec(p, s, n, cur, out);
                    cur.pop();
                }
            }
        }
        rec(self, s, n, &mut cur, &mut out);
        out
    }

    /// Length (number of steps) of the longest chain in `s`; `-1` for empty `s`.
    pub fn height_of(&self, s: &[usize]) -> i64 {
        let mut best = vec![0i64; self.len()];
        let order = self.linear_extension();
        let mut h = -1;
        for &x in &order {
            if !s.contains(&x) {
                continue;
            }
            let below = s.iter().filter(|&&y| self.lt(y, x)).map(|&y| best[y] + 1).max().unwrap_or(0);
            best[x] = below;
            h = h.max(below);
        }
        h
    }

    pub fn height(&self) -> i64 {
        self.height_of(&self.all())
    }

    /// Elements ordered so that `x < y` implies `x` comes first; ties by index.
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&x| (self.point_closure(x).len(), x));
        order
    }

    /// Maximal elements of `s`.
    pub fn maximal_in(&self, s: &[usize]) -> ElementSet {
        s.iter().copied().filter(|&x| !s.iter().any(|&y| self.lt(x, y))).collect()
    }

    /// Minimal elements of `s`.
    pub fn minimal_in(&self, s: &[usize]) -> ElementSet {
        s.iter().copied().filter(|&x| !s.iter().any(|&y| self.lt(y, x))).collect()
    }

    /// Induced subposet on `s`, with the inclusion as a monotone map.
    pub fn subposet(&self, s: &[usize]) -> (FinitePoset, MonotoneMap) {
        let names = s.iter().map(|&x| self.names[x].clone()).collect();
        let mut rel = Vec::new();
        for (i, &x) in s.iter().enumerate() {
            for (j, &y) in s.iter().enumerate() {
                if self.lt(x, y) {
                    rel.push((i, j));
                }
            }
        }
        let sub = FinitePoset::from_relation(names, &rel);
        let incl = MonotoneMap { source: sub.clone(), target: self.clone(), table: s.to_vec() };
        (sub, incl)
    }

    /// Cartesian product with the componentwise order. Element `(i, j)` has index
    /// `i * q.len() + j` and name `(a,b)`.
    pub fn product(&self, q: &FinitePoset) -> FinitePoset {
        let m = q.len();
        let mut names = Vec::with_capacity(self.len() * m);
        for a in &self.names {
            for b in &q.names {
                names.push(format!("({a},{b})"));
            }
        }
        // Covers of a product are covers in one coordinate with equality in the other.
        let mut covers = Vec::new();
        for i in 0..self.len() {
            for j in 0..m {
                for &i2 in &self.upper[i] {
                    covers.push((i * m + j, i2 * m + j));
                }
                for &j2 in &q.upper[j] {
                    covers.push((i * m + j, i * m + j2));
                }
            }
        }
        FinitePoset::from_hasse(names, covers)
    }

    /// Projections from `self.product(q)` onto the two factors.
    pub fn product_projections(&self, q: &FinitePoset) -> (MonotoneMap, MonotoneMap) {
        let prod = self.product(q);
        let m = q.len();
        let p1 = (0..prod.len()).map(|k| k / m).collect();
        let p2 = (0..prod.len()).map(|k| k % m).collect();
        (
            MonotoneMap { source: prod.clone(), target: self.clone(), table: p1 },
            MonotoneMap { source: prod, target: q.clone(), table: p2 },
        )
    }

    /// Removes beat points (elements with exactly one lower or exactly one upper cover)
    /// until none remain, returning the remaining elements. The result is the core of
    /// the space; a connected space is contractible iff its core is a single point.
    pub fn core(&self) -> ElementSet {
        let mut alive: ElementSet = self.all();
        loop {
            let (sub, incl) = self.subposet(&alive);
            let beat = (0..sub.len()).find(|&x| sub.upper[x].len() == 1 || sub.lower[x].len() == 1);
            match beat {
                Some(x) => {
                    let e = incl.table[x];
                    alive.retain(|&y| y != e);
                }
                None => return alive,
            }
        }
    }

    /// Every connected component is contractible.
    pub fn components_contractible(&self) -> bool {
        self.connected_components(&self.all()).iter().all(|c| {
            let (sub, _) = self.subposet(c);
            sub.core().len() == 1
        })
    }
}

/// An order-preserving map between finite posets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotoneMap {
    source: FinitePoset,
    target: FinitePoset,
    table: Vec<usize>,
}

impl MonotoneMap {
    pub fn new(source: FinitePoset, target: FinitePoset, table: Vec<usize>) -> Result<MonotoneMap, Error> {
        if table.len() != source.len() || table.iter().any(|&y| y >= target.len()) {
            return Err(Error::Shape("map table does not match source and target".into()));
        }
        for &(a, b) in source.covers() {
            if !target.leq(table[a], table[b]) {
                return Err(Error::NotMonotone(source.name(a).to_string(), source.name(b).to_string()));
            }
        }
        Ok(MonotoneMap { source, target, table })
    }

    pub fn identity(p: &FinitePoset) -> MonotoneMap {
        MonotoneMap { source: p.clone(), target: p.clone(), table: (0..p.len()).collect() }
    }

    pub fn constant(source: &FinitePoset, target: &FinitePoset, y: usize) -> MonotoneMap {
        MonotoneMap { source: source.clone(), target: target.clone(), table: vec![y; source.len()] }
    }

    pub fn to_point(source: &FinitePoset) -> MonotoneMap {
        MonotoneMap::constant(source, &FinitePoset::point(), 0)
    }

    pub fn source(&self) -> &FinitePoset {
        &self.source
    }

    pub fn target(&self) -> &FinitePoset {
        &self.target
    }

    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &MonotoneMap) -> MonotoneMap {
        assert_eq!(self.target, other.source, "maps are not composable");
        MonotoneMap {
            source: self.source.clone(),
            target: other.target.clone(),
            table: self.table.iter().map(|&y| other.table[y]).collect(),
        }
    }

    /// Whether `self(x) ≤ other(x)` for all `x`.
    pub fn pointwise_leq(&self, other: &MonotoneMap) -> bool {
        self.table.iter().zip(&other.table).all(|(&a, &b)| self.target.leq(a, b))
    }

    /// `f^{-1}(s)`.
    pub fn preimage(&self, s: &[usize]) -> ElementSet {
        (0..self.source.len()).filter(|&x| s.contains(&self.table[x])).collect()
    }
}
