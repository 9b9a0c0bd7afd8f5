//! Simple undirected graphs on the dense vertex range `0..n`, the induced
//! edge counts every construction is measured by, and the twin checker.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{GraphError, ParseError, ParseErrorKind};

/// Immutable simple undirected graph.
///
/// Edges are stored once as `(u, v)` with `u < v`, sorted; adjacency lists are
/// sorted as well, so every query below is deterministic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        let mut adj = vec![Vec::new(); n];
        let mut list = Vec::new();
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            list.push((u.min(v), u.max(v)));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateEdge(w[0].0, w[0].1));
        }
        for &(u, v) in &list {
            adj[u].push(v);
            adj[v].push(u);
        }
        for nb in &mut adj {
            nb.sort_unstable();
        }
        Ok(Graph { n, edges: list, adj })
    }

    /// Graph on `n` vertices with no edges.
    pub fn empty(n: usize) -> Self {
        Graph { n, edges: Vec::new(), adj: vec![Vec::new(); n] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    /// `d(A)`: sum of degrees over `set`, in this graph.
    pub fn degree_sum(&self, set: &[usize]) -> usize {
        set.iter().map(|&v| self.degree(v)).sum()
    }

    fn membership(&self, set: &[usize]) -> Result<Vec<bool>, GraphError> {
        let mut mark = vec![false; self.n];
        for &v in set {
            if v >= self.n {
                return Err(GraphError::VertexOutOfRange { vertex: v, n: self.n });
            }
            mark[v] = true;
        }
        Ok(mark)
    }

    /// `e(S)`: number of edges with both endpoints in `set`.
    pub fn induced_edge_count(&self, set: &[usize]) -> Result<usize, GraphError> {
        let mark = self.membership(set)?;
        Ok(self.edges.iter().filter(|&&(u, v)| mark[u] && mark[v]).count())
    }

    /// `e(S, T)`: number of edges with one endpoint in each of two disjoint sets.
    pub fn cross_edge_count(&self, s: &[usize], t: &[usize]) -> Result<usize, GraphError> {
        let in_s = self.membership(s)?;
        let in_t = self.membership(t)?;
        if let Some(v) = (0..self.n).find(|&v| in_s[v] && in_t[v]) {
            return Err(GraphError::NotDisjoint(v));
        }
        Ok(self
            .edges
            .iter()
            .filter(|&&(u, v)| (in_s[u] && in_t[v]) || (in_s[v] && in_t[u]))
            .count())
    }

    /// `G - W` with vertex labels kept: every edge touching `removed` is
    /// dropped and those vertices stay behind as isolated vertices.
    pub fn isolate(&self, removed: &[usize]) -> Graph {
        let mut gone = vec![false; self.n];
        for &v in removed {
            if v < self.n {
                gone[v] = true;
            }
        }
        let edges = self.edges.iter().copied().filter(|&(u, v)| !gone[u] && !gone[v]);
        Graph::new(self.n, edges).expect("subgraph of a simple graph is simple")
    }

    /// `G[S]` relabelled to `0..|S|`; the returned map sends new labels back
    /// to the original vertices (in increasing order).
    pub fn induced_subgraph(&self, set: &[usize]) -> (Graph, Vec<usize>) {
        let mut keep: Vec<usize> = set.iter().copied().filter(|&v| v < self.n).collect();
        keep.sort_unstable();
        keep.dedup();
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in keep.iter().enumerate() {
            index[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| index[u] != usize::MAX && index[v] != usize::MAX)
            .map(|&(u, v)| (index[u], index[v]));
        let g = Graph::new(keep.len(), edges).expect("subgraph of a simple graph is simple");
        (g, keep)
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                for &w in &self.adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// A graph is a forest iff `e = n - (number of components)`.
    pub fn is_forest(&self) -> bool {
        self.edges.len() + self.components().len() == self.n
    }

    /// Serialise in the edge-list text format accepted by [`parse_graph`].
    pub fn to_edge_list(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.n, self.edges.len())?;
        for &(u, v) in &self.edges {
            writeln!(f, "{u} {v}")?;
        }
        Ok(())
    }
}

impl FromStr for Graph {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_graph(s)
    }
}

/// Parse the edge-list format: `#` comment lines, a `n m` header, then exactly
/// `m` lines `u v` with `0 <= u, v < n` and `u != v`.
pub fn parse_graph(text: &str) -> Result<Graph, ParseError> {
    let err = |line: usize, kind: ParseErrorKind| ParseError { line, kind };
    let mut header: Option<(usize, usize, usize)> = None;
    let mut edges = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(err(line, ParseErrorKind::Malformed(format!("expected two integers, got {trimmed:?}"))));
        }
        let parse = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| err(line, ParseErrorKind::Malformed(format!("not a non-negative integer: {s:?}"))))
        };
        let (x, y) = (parse(fields[0])?, parse(fields[1])?);
        match header {
            None => header = Some((x, y, line)),
            Some((n, m, _)) => {
                if edges.len() == m {
                    return Err(err(line, ParseErrorKind::CountMismatch { declared: m, found: m + 1 }));
                }
                if x >= n || y >= n {
                    let vertex = if x >= n { x } else { y };
                    return Err(err(line, GraphError::VertexOutOfRange { vertex, n }.into()));
                }
                if x == y {
                    return Err(err(line, GraphError::SelfLoop(x).into()));
                }
                let key = (x.min(y), x.max(y));
                if !seen.insert(key) {
                    return Err(err(line, GraphError::DuplicateEdge(key.0, key.1).into()));
                }
                edges.push(key);
            }
        }
    }
    let (n, m, _) = header.ok_or(err(last_line.max(1), ParseErrorKind::MissingHeader))?;
    if edges.len() != m {
        return Err(err(last_line, ParseErrorKind::CountMismatch { declared: m, found: edges.len() }));
    }
    Graph::new(n, edges).map_err(|e| err(last_line, e.into()))
}

/// Sorted, deduplicated copy of a vertex list.
pub fn canonical(set: &[usize]) -> Vec<usize> {
    let mut v = set.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

/// Two disjoint equal-size vertex sets with their induced edge counts.
/// The pair is a twin pair iff `disc == 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwinPair {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub edges_a: usize,
    pub edges_b: usize,
    pub disc: usize,
}

impl TwinPair {
    /// Canonicalises both sets and counts their induced edges in `g`.
    pub fn new(g: &Graph, a: &[usize], b: &[usize]) -> Result<Self, GraphError> {
        let a = canonical(a);
        let b = canonical(b);
        if a.len() != b.len() {
            return Err(GraphError::SizeMismatch(a.len(), b.len()));
        }
        if let Some(&v) = a.iter().find(|v| b.binary_search(v).is_ok()) {
            return Err(GraphError::NotDisjoint(v));
        }
        let edges_a = g.induced_edge_count(&a)?;
        let edges_b = g.induced_edge_count(&b)?;
        Ok(TwinPair { a, b, edges_a, edges_b, disc: edges_a.abs_diff(edges_b) })
    }

    pub fn empty() -> Self {
        TwinPair { a: Vec::new(), b: Vec::new(), edges_a: 0, edges_b: 0, disc: 0 }
    }

    pub fn size(&self) -> usize {
        self.a.len()
    }

    pub fn is_twins(&self) -> bool {
        self.disc == 0
    }

    /// The same pair with the roles of `a` and `b` exchanged.
    pub fn swapped(self) -> Self {
        TwinPair { a: self.b, b: self.a, edges_a: self.edges_b, edges_b: self.edges_a, disc: self.disc }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Violation {
    Overlap,
    SizeMismatch,
    EdgeCountMismatch,
    OutOfRange,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwinCheck {
    pub valid: bool,
    pub violations: Vec<Violation>,
}

/// Check every clause of the twin definition, reporting each one that fails.
///
/// The inputs are treated as sets. Edge counts are only compared when every
/// vertex is in range.
pub fn check_twins(g: &Graph, a: &[usize], b: &[usize]) -> TwinCheck {
    let a = canonical(a);
    let b = canonical(b);
    let mut violations = Vec::new();
    let in_range = a.iter().chain(&b).all(|&v| v < g.n());
    if !in_range {
        violations.push(Violation::OutOfRange);
    }
    if a.iter().any(|v| b.binary_search(v).is_ok()) {
        violations.push(Violation::Overlap);
    }
    if a.len() != b.len() {
        violations.push(Violation::SizeMismatch);
    }
    if in_range {
        let ea = g.induced_edge_count(&a).expect("range checked");
        let eb = g.induced_edge_count(&b).expect("range checked");
        if ea != eb {
            violations.push(Violation::EdgeCountMismatch);
        }
    }
    TwinCheck { valid: violations.is_empty(), violations }
}

/// Vertices grouped by degree: the classes `V_i`, plus `δ` and `Δ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeProfile {
    pub classes: BTreeMap<usize, Vec<usize>>,
    pub min_degree: usize,
    pub max_degree: usize,
}

impl DegreeProfile {
    pub fn class(&self, d: usize) -> &[usize] {
        self.classes.get(&d).map(Vec::as_slice).unwrap_or(&[])
    }

    /// `Δ - δ`.
    pub fn spread(&self) -> usize {
        self.max_degree - self.min_degree
    }
}

pub fn degree_profile(g: &Graph) -> DegreeProfile {
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in 0..g.n() {
        classes.entry(g.degree(v)).or_default().push(v);
    }
    let min_degree = classes.keys().next().copied().unwrap_or(0);
    let max_degree = classes.keys().next_back().copied().unwrap_or(0);
    DegreeProfile { classes, min_degree, max_degree }
}
