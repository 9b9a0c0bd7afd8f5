//! Twins in sparse graphs via a reserved matching and independent set.
//!
//! High-degree vertices are dropped first. In what is left, a greedy pass
//! reserves `l` pairwise far-apart edges and `2l` far-apart single vertices,
//! fencing off their closed neighbourhoods. The untouched remainder `S` has
//! no edges to the reserve, so almost-twins found in `G[S]` can be balanced
//! exactly: each surplus edge on one side is matched by one reserved edge on
//! the other, padded with two reserved singles.

use serde::{Deserialize, Serialize};

use crate::ceil_log2;
use crate::discrepancy::{almost_twins_extraction, almost_twins_local_search};
use crate::error::{Error, Result};
use crate::graph::{Graph, TwinPair};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SparsePath {
    /// Almost-twins in `S` balanced with the reserve.
    Balanced,
    /// The matching step ran dry; halves of the independent remainder won.
    IndependentHalves,
    /// Neither of the above was available; local search output.
    LocalSearch,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SparseTrace {
    /// `sqrt(e) lg n / n`.
    pub f: f64,
    /// Degree threshold `2e / (n f)` for the high set.
    pub x_threshold: f64,
    /// Reserve size `2 ceil(lg n)^2`.
    pub l: usize,
    pub high_set: Vec<usize>,
    pub matching: Vec<(usize, usize)>,
    pub singles: Vec<usize>,
    pub untouched: Vec<usize>,
    /// Discrepancy of the almost-twins found in `G[S]`.
    pub gamma: usize,
    /// `n/2 (1 - 20 f)`; negative at small scale.
    pub bound: f64,
    pub matching_complete: bool,
    /// Reserve pieces added in equal numbers to both sides after balancing.
    pub padding_edges: usize,
    pub padding_singles: usize,
    pub path: SparsePath,
    pub not_twins: bool,
}

struct Reserve {
    matching: Vec<(usize, usize)>,
    singles: Vec<usize>,
    untouched: Vec<usize>,
    /// Available vertices when the matching step failed, if it did.
    independent_remainder: Option<Vec<usize>>,
}

fn reserve(g: &Graph, high: &[bool], l: usize) -> Reserve {
    let n = g.n();
    let mut free: Vec<bool> = high.iter().map(|&h| !h).collect();
    // Closed neighbourhood in G - L.
    let block = |free: &mut Vec<bool>, v: usize| {
        free[v] = false;
        for &w in g.neighbors(v) {
            free[w] = false;
        }
    };

    let mut matching = Vec::new();
    // Blocking only grows, so one ascending pass finds each lex-least edge.
    for &(u, v) in g.edges() {
        if matching.len() == l {
            break;
        }
        if free[u] && free[v] {
            matching.push((u, v));
            block(&mut free, u);
            block(&mut free, v);
        }
    }
    let independent_remainder =
        (matching.len() < l).then(|| (0..n).filter(|&v| free[v]).collect::<Vec<_>>());

    let mut singles = Vec::new();
    for v in 0..n {
        if singles.len() == 2 * l {
            break;
        }
        if free[v] {
            singles.push(v);
            block(&mut free, v);
        }
    }
    let untouched = (0..n).filter(|&v| free[v]).collect();
    Reserve { matching, singles, untouched, independent_remainder }
}

/// Twins in a graph with `e >= 4` edges on `n >= 16` vertices.
///
/// The result has discrepancy zero unless every construction failed, in
/// which case `not_twins` is set in the trace.
pub fn sparse_twins(g: &Graph) -> Result<(TwinPair, SparseTrace)> {
    let (n, e) = (g.n(), g.edge_count());
    if e < 4 || n < 16 {
        return Err(Error::Precondition(format!("need e >= 4 and n >= 16, got e = {e}, n = {n}")));
    }
    let lg = (n as f64).log2();
    let f = (e as f64).sqrt() * lg / n as f64;
    let x = 2.0 * e as f64 / (n as f64 * f);
    let k = ceil_log2(n);
    let l = 2 * k * k;
    let high: Vec<bool> = (0..n).map(|v| g.degree(v) as f64 >= x).collect();
    let high_set: Vec<usize> = (0..n).filter(|&v| high[v]).collect();
    let host = g.isolate(&high_set);
    let res = reserve(&host, &high, l);

    // Almost-twins inside the untouched region, oriented so that e(A) >= e(B).
    let (sub, labels) = g.induced_subgraph(&res.untouched);
    let (mut a, mut b, gamma) = if sub.n() >= 2 {
        let (p, _) = almost_twins_extraction(&sub)?;
        let map = |s: &[usize]| s.iter().map(|&v| labels[v]).collect::<Vec<_>>();
        if p.edges_a >= p.edges_b {
            (map(&p.a), map(&p.b), p.disc)
        } else {
            (map(&p.b), map(&p.a), p.disc)
        }
    } else {
        (Vec::new(), Vec::new(), 0)
    };

    let mut balanced = None;
    let (mut padding_edges, mut padding_singles) = (0, 0);
    if gamma <= res.matching.len() && 2 * gamma <= res.singles.len() {
        a.extend_from_slice(&res.singles[..2 * gamma]);
        for &(u, v) in &res.matching[..gamma] {
            b.extend([u, v]);
        }
        for pair in res.matching[gamma..].chunks_exact(2) {
            a.extend([pair[0].0, pair[0].1]);
            b.extend([pair[1].0, pair[1].1]);
            padding_edges += 2;
        }
        for pair in res.singles[2 * gamma..].chunks_exact(2) {
            a.push(pair[0]);
            b.push(pair[1]);
            padding_singles += 2;
        }
        balanced = Some(TwinPair::new(g, &a, &b)?);
    }
    let halves = match &res.independent_remainder {
        Some(r) => {
            let h = r.len() / 2;
            Some(TwinPair::new(g, &r[..h], &r[h..2 * h])?)
        }
        None => None,
    };

    let (pair, path) = match (balanced, halves) {
        (Some(bal), Some(half)) if half.size() > bal.size() => (half, SparsePath::IndependentHalves),
        (Some(bal), _) => (bal, SparsePath::Balanced),
        (None, Some(half)) => (half, SparsePath::IndependentHalves),
        (None, None) => (almost_twins_local_search(g)?.0, SparsePath::LocalSearch),
    };
    if path == SparsePath::Balanced && !pair.is_twins() {
        return Err(Error::Internal(format!(
            "balanced construction left discrepancy {} (gamma {gamma})",
            pair.disc
        )));
    }
    if path != SparsePath::Balanced {
        padding_edges = 0;
        padding_singles = 0;
    }
    let trace = SparseTrace {
        f,
        x_threshold: x,
        l,
        high_set,
        matching_complete: res.independent_remainder.is_none(),
        matching: res.matching,
        singles: res.singles,
        untouched: res.untouched,
        gamma,
        bound: n as f64 / 2.0 * (1.0 - 20.0 * f),
        padding_edges,
        padding_singles,
        path,
        not_twins: !pair.is_twins(),
    };
    Ok((pair, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::gen_gnp;
    use crate::graph::check_twins;

    fn grid(r: usize, c: usize) -> Graph {
        let id = |i: usize, j: usize| i * c + j;
        let mut edges = Vec::new();
        for i in 0..r {
            for j in 0..c {
                if j + 1 < c {
                    edges.push((id(i, j), id(i, j + 1)));
                }
                if i + 1 < r {
                    edges.push((id(i, j), id(i + 1, j)));
                }
            }
        }
        Graph::new(r * c, edges).unwrap()
    }

    fn matching_plus_isolated(edges: usize, n: usize) -> Graph {
        Graph::new(n, (0..edges).map(|i| (2 * i, 2 * i + 1))).unwrap()
    }

    fn assert_reserve_fenced(g: &Graph, t: &SparseTrace) {
        let mut reserved = vec![false; g.n()];
        for &(u, v) in &t.matching {
            reserved[u] = true;
            reserved[v] = true;
        }
        for &v in &t.singles {
            reserved[v] = true;
        }
        let in_s: Vec<bool> = (0..g.n()).map(|v| t.untouched.binary_search(&v).is_ok()).collect();
        for &(u, v) in g.edges() {
            assert!(!(in_s[u] && reserved[v]) && !(in_s[v] && reserved[u]), "edge {u}-{v} crosses the fence");
        }
        let t_vertices: Vec<usize> = (0..g.n()).filter(|&v| reserved[v]).collect();
        assert_eq!(g.induced_edge_count(&t_vertices).unwrap(), t.matching.len());
    }

    #[test]
    fn grid_five_by_five() {
        let g = grid(5, 5);
        assert_eq!(g.edge_count(), 40);
        let (p, t) = sparse_twins(&g).unwrap();
        assert!(check_twins(&g, &p.a, &p.b).valid);
        assert!(t.bound < 0.0);
        assert_reserve_fenced(&g, &t);
    }

    #[test]
    fn four_edges_on_sixteen_vertices() {
        let g = matching_plus_isolated(4, 16);
        let (p, t) = sparse_twins(&g).unwrap();
        assert!(check_twins(&g, &p.a, &p.b).valid);
        assert!(p.size() >= 4);
        assert_eq!(t.high_set.len(), 8);
        assert!(!t.matching_complete);
        assert_ne!(t.path, SparsePath::LocalSearch);
    }

    #[test]
    fn gnp_sparse() {
        let g = gen_gnp(64, 0.05, 3).unwrap();
        let (p, t) = sparse_twins(&g).unwrap();
        assert!(check_twins(&g, &p.a, &p.b).valid);
        assert!(t.high_set.len() as f64 <= g.n() as f64 * t.f + 1e-9);
        for &v in &t.high_set {
            assert!(g.degree(v) as f64 >= t.x_threshold);
        }
        if t.bound > 0.0 {
            assert!(p.size() as f64 >= t.bound);
        }
    }

    #[test]
    fn main_path_on_large_matching() {
        let g = matching_plus_isolated(1000, 2000);
        let (p, t) = sparse_twins(&g).unwrap();
        assert_eq!(t.path, SparsePath::Balanced);
        assert!(t.matching_complete);
        assert_eq!(t.matching.len(), t.l);
        assert_eq!(t.singles.len(), 2 * t.l);
        assert!(check_twins(&g, &p.a, &p.b).valid);
        assert_reserve_fenced(&g, &t);
    }

    #[test]
    fn bound_holds_when_positive() {
        let g = matching_plus_isolated(4, 2048);
        let (p, t) = sparse_twins(&g).unwrap();
        assert!(t.bound > 0.0);
        assert!(p.is_twins());
        assert!(p.size() as f64 >= t.bound);
    }

    #[test]
    fn refuses_tiny_inputs() {
        assert!(sparse_twins(&matching_plus_isolated(3, 20)).is_err());
        assert!(sparse_twins(&matching_plus_isolated(5, 12)).is_err());
    }

    #[test]
    fn gamma_is_balanced_by_reserve() {
        for seed in 0..10 {
            let g = gen_gnp(900, 1.5 / 900.0, seed).unwrap();
            let (p, t) = sparse_twins(&g).unwrap();
            assert!(check_twins(&g, &p.a, &p.b).valid, "seed {seed}");
            assert!(!t.not_twins);
            assert_reserve_fenced(&g, &t);
        }
    }
}
