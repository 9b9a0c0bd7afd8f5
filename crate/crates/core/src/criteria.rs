//! Degree conditions that guarantee perfect twins, and the matching
//! constructions.
//!
//! All four constructors produce a full partition `(A, B)` of the vertex set
//! with `d(A) = d(B)`. Since `2 e(A) + e(A, B) = d(A)` and likewise for `B`,
//! equal degree sums force `e(A) = e(B)`.

use serde::{Deserialize, Serialize};

use crate::discrepancy::almost_twins_local_search;
use crate::error::{Error, Result};
use crate::graph::{degree_profile, DegreeProfile, Graph, TwinPair};
use crate::oracle::balanced_halving;

/// Smallest order for which the odd-class condition is considered.
pub const ODD_CLASS_MIN_N: usize = 90;

/// Preference order when several conditions hold.
pub const CONSTRUCTION_ORDER: [u8; 4] = [2, 1, 4, 3];

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionEvidence {
    pub min_degree: usize,
    pub max_degree: usize,
    /// Degrees in `[δ, Δ]` with no vertex.
    pub missing_degrees: Vec<usize>,
    /// Degrees whose class has odd size.
    pub odd_classes: Vec<usize>,
    /// Vertex-disjoint pairs `(v, v')` with `d(v) + 1 = d(v')`.
    pub consecutive_pairs: Vec<(usize, usize)>,
    /// `Δ - δ`, the number of pairs the last condition asks for.
    pub required_pairs: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub satisfied: Vec<u8>,
    pub evidence: CriterionEvidence,
    /// Set when no condition was evaluated.
    pub reason: Option<String>,
}

impl CriterionReport {
    pub fn holds(&self, criterion: u8) -> bool {
        self.satisfied.contains(&criterion)
    }
}

/// Maximum set of vertex-disjoint pairs between adjacent degree classes.
///
/// Classes are swept upwards; whatever part of `V_d` was not already matched
/// downwards is matched into `V_{d+1}` in index order. On a path of complete
/// bipartite blocks this greedy sweep is optimal.
pub fn consecutive_pairs(profile: &DegreeProfile) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    let mut used_from_current = 0;
    for (&d, class) in &profile.classes {
        let next = profile.class(d + 1);
        let free = &class[used_from_current.min(class.len())..];
        let k = free.len().min(next.len());
        pairs.extend(free.iter().zip(next).take(k).map(|(&v, &w)| (v, w)));
        used_from_current = k;
    }
    pairs
}

pub fn detect_criteria(g: &Graph) -> CriterionReport {
    let n = g.n();
    if n % 2 != 0 {
        return CriterionReport {
            reason: Some(format!("vertex count {n} is odd; perfect twins are impossible")),
            ..CriterionReport::default()
        };
    }
    let profile = degree_profile(g);
    let (lo, hi) = (profile.min_degree, profile.max_degree);
    let missing_degrees: Vec<usize> = if n == 0 {
        Vec::new()
    } else {
        (lo..=hi).filter(|d| profile.class(*d).is_empty()).collect()
    };
    let odd_classes: Vec<usize> =
        profile.classes.iter().filter(|(_, c)| c.len() % 2 == 1).map(|(&d, _)| d).collect();
    let pairs = consecutive_pairs(&profile);
    let required = profile.spread();

    let mut satisfied = Vec::new();
    if missing_degrees.is_empty() {
        satisfied.push(1);
    }
    if odd_classes.is_empty() {
        satisfied.push(2);
    }
    if n >= ODD_CLASS_MIN_N && 2 * odd_classes.len() > n {
        satisfied.push(3);
    }
    if pairs.len() >= required {
        satisfied.push(4);
    }
    CriterionReport {
        satisfied,
        evidence: CriterionEvidence {
            min_degree: lo,
            max_degree: hi,
            missing_degrees,
            odd_classes,
            consecutive_pairs: pairs,
            required_pairs: required,
        },
        reason: None,
    }
}

fn require(g: &Graph, criterion: u8) -> Result<()> {
    let report = detect_criteria(g);
    if let Some(reason) = report.reason {
        return Err(Error::Precondition(reason));
    }
    if !report.holds(criterion) {
        return Err(Error::Precondition(format!("criterion {criterion} does not hold")));
    }
    Ok(())
}

/// Checks a constructed full partition before handing it out.
fn finish(g: &Graph, a: Vec<usize>, b: Vec<usize>, what: &str) -> Result<TwinPair> {
    if a.len() + b.len() != g.n() {
        return Err(Error::Internal(format!("{what}: partition covers {} of {} vertices", a.len() + b.len(), g.n())));
    }
    if g.degree_sum(&a) != g.degree_sum(&b) {
        return Err(Error::Internal(format!(
            "{what}: degree sums differ ({} vs {})",
            g.degree_sum(&a),
            g.degree_sum(&b)
        )));
    }
    let pair = TwinPair::new(g, &a, &b)?;
    if !pair.is_twins() {
        return Err(Error::Internal(format!(
            "{what}: equal degree sums but e(A) = {} and e(B) = {}",
            pair.edges_a, pair.edges_b
        )));
    }
    Ok(pair)
}

/// Vertices by degree descending, index ascending, dealt alternately.
fn sorted_alternating(g: &Graph, vertices: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let mut order = vertices.to_vec();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    let mut a = Vec::with_capacity(order.len() / 2 + 1);
    let mut b = Vec::with_capacity(order.len() / 2);
    for (i, v) in order.into_iter().enumerate() {
        if i % 2 == 0 {
            a.push(v);
        } else {
            b.push(v);
        }
    }
    (a, b)
}

/// Starting partition and the sequence of swaps `(from A, from B)` used by
/// [`perfect_twins_consecutive`].
pub(crate) fn consecutive_swaps(g: &Graph) -> Result<(Vec<usize>, Vec<usize>, Vec<(usize, usize)>)> {
    let all: Vec<usize> = (0..g.n()).collect();
    let (a0, b0) = sorted_alternating(g, &all);
    let mut side_a = vec![false; g.n()];
    for &v in &a0 {
        side_a[v] = true;
    }
    let mut diff = g.induced_edge_count(&a0)? as i64 - g.induced_edge_count(&b0)? as i64;
    let mut swaps = Vec::new();
    while diff != 0 {
        // The heavier side gives up a vertex one degree above the one it receives.
        let heavy_is_a = diff > 0;
        let found = (0..g.n()).filter(|&v| side_a[v] == heavy_is_a).find_map(|h| {
            let target = g.degree(h).checked_sub(1)?;
            (0..g.n()).find(|&l| side_a[l] != heavy_is_a && g.degree(l) == target).map(|l| (h, l))
        });
        let Some((h, l)) = found else {
            return Err(Error::Internal(format!("consecutive swap blocked at discrepancy {}", diff.abs())));
        };
        side_a[h] = !side_a[h];
        side_a[l] = !side_a[l];
        diff += if heavy_is_a { -1 } else { 1 };
        swaps.push(if heavy_is_a { (h, l) } else { (l, h) });
    }
    Ok((a0, b0, swaps))
}

/// Perfect twins when the degrees form a run of consecutive integers.
pub fn perfect_twins_consecutive(g: &Graph) -> Result<TwinPair> {
    require(g, 1)?;
    let (mut a, mut b, swaps) = consecutive_swaps(g)?;
    for (x, y) in swaps {
        let i = a.iter().position(|&v| v == x).expect("swap source lies in A");
        let j = b.iter().position(|&v| v == y).expect("swap source lies in B");
        a[i] = y;
        b[j] = x;
    }
    finish(g, a, b, "consecutive degrees")
}

/// Perfect twins when every degree class has even size.
pub fn perfect_twins_even_classes(g: &Graph) -> Result<TwinPair> {
    if g.n() % 2 != 0 {
        return Err(Error::Precondition("vertex count is odd".into()));
    }
    let profile = degree_profile(g);
    let (mut a, mut b) = (Vec::new(), Vec::new());
    for (d, class) in &profile.classes {
        if class.len() % 2 != 0 {
            return Err(Error::Precondition(format!("degree class {d} has odd size {}", class.len())));
        }
        let (lo, hi) = class.split_at(class.len() / 2);
        a.extend_from_slice(lo);
        b.extend_from_slice(hi);
    }
    finish(g, a, b, "even classes")
}

/// Perfect twins from one leftover vertex per odd class, halved by degree.
///
/// Requires only that `n` is even; the odd-class condition is what makes a
/// balanced halving of the leftovers likely, but the construction succeeds
/// whenever such a halving exists.
pub fn perfect_twins_odd_classes(g: &Graph) -> Result<TwinPair> {
    if g.n() % 2 != 0 {
        return Err(Error::Precondition("vertex count is odd".into()));
    }
    let profile = degree_profile(g);
    let (mut a, mut b, mut leftover) = (Vec::new(), Vec::new(), Vec::new());
    for class in profile.classes.values() {
        let h = class.len() / 2;
        a.extend_from_slice(&class[..h]);
        b.extend_from_slice(&class[h..2 * h]);
        if class.len() % 2 == 1 {
            leftover.push(class[2 * h]);
        }
    }
    let degrees: Vec<usize> = leftover.iter().map(|&v| g.degree(v)).collect();
    let Some((u, u2)) = balanced_halving(&degrees) else {
        return Err(Error::Construction(format!("no balanced halving of leftover degrees {degrees:?}")));
    };
    a.extend(u.iter().map(|&i| leftover[i]));
    b.extend(u2.iter().map(|&i| leftover[i]));
    finish(g, a, b, "odd classes")
}

/// Perfect twins from at least `Δ - δ` disjoint consecutive pairs.
pub fn perfect_twins_consecutive_pairs(g: &Graph) -> Result<TwinPair> {
    require(g, 4)?;
    let profile = degree_profile(g);
    let x = profile.spread();
    let pairs: Vec<(usize, usize)> = consecutive_pairs(&profile).into_iter().take(x).collect();
    let mut in_pair = vec![false; g.n()];
    for &(v, w) in &pairs {
        in_pair[v] = true;
        in_pair[w] = true;
    }
    let rest: Vec<usize> = (0..g.n()).filter(|&v| !in_pair[v]).collect();
    let (mut a, mut b) = sorted_alternating(g, &rest);
    let gap = g.degree_sum(&a) - g.degree_sum(&b);
    if gap > x {
        return Err(Error::Internal(format!("alternating gap {gap} exceeds Δ - δ = {x}")));
    }
    // The first `gap` pairs close the gap; the rest alternate orientation.
    for (i, &(low, high)) in pairs.iter().enumerate() {
        let rank = i + 1;
        if rank <= gap || rank % 2 == 0 {
            a.push(low);
            b.push(high);
        } else {
            a.push(high);
            b.push(low);
        }
    }
    finish(g, a, b, "consecutive pairs")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PerfectMethod {
    Criterion(u8),
    /// No condition held (or none succeeded) but local search hit zero.
    Opportunistic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerfectAttempt {
    pub report: CriterionReport,
    pub method: Option<PerfectMethod>,
    pub pair: Option<TwinPair>,
    /// Failures of constructors whose condition held.
    pub failures: Vec<String>,
}

pub fn construct_for(g: &Graph, criterion: u8) -> Result<TwinPair> {
    match criterion {
        1 => perfect_twins_consecutive(g),
        2 => perfect_twins_even_classes(g),
        3 => perfect_twins_odd_classes(g),
        4 => perfect_twins_consecutive_pairs(g),
        c => Err(Error::Precondition(format!("unknown criterion {c}"))),
    }
}

/// Tries the constructors of every holding condition in
/// [`CONSTRUCTION_ORDER`], then local search.
pub fn perfect_twins(g: &Graph) -> PerfectAttempt {
    let report = detect_criteria(g);
    let mut failures = Vec::new();
    for c in CONSTRUCTION_ORDER {
        if !report.holds(c) {
            continue;
        }
        match construct_for(g, c) {
            Ok(pair) => {
                return PerfectAttempt { report, method: Some(PerfectMethod::Criterion(c)), pair: Some(pair), failures };
            }
            Err(e) => failures.push(format!("criterion {c}: {e}")),
        }
    }
    if g.n() >= 2 && g.n() % 2 == 0 {
        if let Ok((pair, _)) = almost_twins_local_search(g) {
            if pair.is_twins() {
                return PerfectAttempt { report, method: Some(PerfectMethod::Opportunistic), pair: Some(pair), failures };
            }
        }
    }
    PerfectAttempt { report, method: None, pair: None, failures }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_criterion_graph, gen_star};
    use crate::graph::check_twins;

    fn path(n: usize) -> Graph {
        Graph::new(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    fn two_triangles() -> Graph {
        Graph::new(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap()
    }

    #[test]
    fn detection_examples() {
        assert_eq!(detect_criteria(&two_triangles()).satisfied, vec![1, 2, 4]);
        assert!(detect_criteria(&gen_star(6).unwrap()).satisfied.is_empty());
        assert_eq!(detect_criteria(&path(4)).satisfied, vec![1, 2, 4]);
        let odd = detect_criteria(&path(5));
        assert!(odd.satisfied.is_empty());
        assert!(odd.reason.is_some());
    }

    #[test]
    fn star_evidence() {
        let r = detect_criteria(&gen_star(6).unwrap());
        assert_eq!(r.evidence.missing_degrees, vec![2, 3, 4]);
        assert_eq!(r.evidence.odd_classes, vec![1, 5]);
        assert!(r.evidence.consecutive_pairs.is_empty());
        assert_eq!(r.evidence.required_pairs, 4);
    }

    #[test]
    fn sweep_carries_between_classes() {
        // Degrees: 0 (vertex 6), 1 (0, 5), 2 (1, 2, 3, 4): path 0-1-2-3-4-5 plus isolated 6, 7.
        let g = Graph::new(8, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)]).unwrap();
        let pairs = consecutive_pairs(&degree_profile(&g));
        assert_eq!(pairs, vec![(6, 0), (7, 5)]);
        // Four degree-1 vertices but only two degree-2 partners.
        let g = Graph::new(6, [(0, 1), (1, 2), (3, 4), (4, 5)]).unwrap();
        assert_eq!(consecutive_pairs(&degree_profile(&g)), vec![(0, 1), (2, 4)]);
    }

    #[test]
    fn pairs_are_disjoint_and_consecutive() {
        for seed in 0..30 {
            let g = crate::generators::gen_gnp(20, 0.3, seed).unwrap();
            let pairs = consecutive_pairs(&degree_profile(&g));
            let mut seen = std::collections::HashSet::new();
            for &(v, w) in &pairs {
                assert_eq!(g.degree(v) + 1, g.degree(w));
                assert!(seen.insert(v) && seen.insert(w));
            }
        }
    }

    #[test]
    fn consecutive_constructor() {
        let p = perfect_twins_consecutive(&path(4)).unwrap();
        assert_eq!((p.size(), p.disc), (2, 0));
        let p = perfect_twins_consecutive(&cycle(6)).unwrap();
        assert_eq!((p.size(), p.disc), (3, 0));
        assert!(perfect_twins_consecutive(&gen_star(6).unwrap()).is_err());
    }

    #[test]
    fn consecutive_swaps_move_by_one() {
        for seed in 0..20 {
            let g = gen_criterion_graph(1, 16, seed).unwrap();
            let (mut a, mut b, swaps) = consecutive_swaps(&g).unwrap();
            let mut diff = g.induced_edge_count(&a).unwrap() as i64 - g.induced_edge_count(&b).unwrap() as i64;
            for (x, y) in swaps {
                let i = a.iter().position(|&v| v == x).unwrap();
                let j = b.iter().position(|&v| v == y).unwrap();
                a[i] = y;
                b[j] = x;
                let now = g.induced_edge_count(&a).unwrap() as i64 - g.induced_edge_count(&b).unwrap() as i64;
                assert_eq!((now - diff).abs(), 1);
                assert!(now.abs() < diff.abs());
                diff = now;
            }
            assert_eq!(diff, 0);
        }
    }

    #[test]
    fn even_class_constructor() {
        let p = perfect_twins_even_classes(&two_triangles()).unwrap();
        assert_eq!((p.size(), p.disc), (3, 0));
        assert_eq!(p.a, vec![0, 1, 2]);
        let p = perfect_twins_even_classes(&cycle(6)).unwrap();
        assert_eq!((p.a.clone(), p.b.clone()), (vec![0, 1, 2], vec![3, 4, 5]));
        let m = Graph::new(8, [(0, 1), (2, 3), (4, 5), (6, 7)]).unwrap();
        assert_eq!(perfect_twins_even_classes(&m).unwrap().size(), 4);
        assert!(perfect_twins_even_classes(&gen_star(6).unwrap()).is_err());
    }

    #[test]
    fn odd_class_constructor() {
        for seed in 0..5 {
            let g = gen_criterion_graph(3, 90, seed).unwrap();
            let p = perfect_twins_odd_classes(&g).unwrap();
            assert_eq!((p.size(), p.disc), (45, 0));
            assert!(check_twins(&g, &p.a, &p.b).valid);
        }
    }

    #[test]
    fn odd_class_constructor_reports_missing_halving() {
        // Star K_{1,5}: leftovers have degrees 1 and 5, which cannot be halved.
        match perfect_twins_odd_classes(&gen_star(6).unwrap()) {
            Err(Error::Construction(msg)) => assert!(msg.contains("[1, 5]")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn consecutive_pairs_constructor() {
        let p = perfect_twins_consecutive_pairs(&path(4)).unwrap();
        assert_eq!((p.a.clone(), p.b.clone()), (vec![0, 2], vec![1, 3]));
        assert_eq!((p.edges_a, p.edges_b), (0, 0));
        let p = perfect_twins_consecutive_pairs(&cycle(6)).unwrap();
        assert_eq!(p.disc, 0);
        for seed in 0..10 {
            let g = gen_criterion_graph(4, 12, seed).unwrap();
            let p = perfect_twins_consecutive_pairs(&g).unwrap();
            assert_eq!((p.size(), p.disc), (6, 0));
        }
    }

    #[test]
    fn dispatch_prefers_even_classes() {
        let attempt = perfect_twins(&two_triangles());
        assert_eq!(attempt.method, Some(PerfectMethod::Criterion(2)));
        let attempt = perfect_twins(&gen_star(6).unwrap());
        assert_eq!(attempt.method, None);
        assert!(attempt.pair.is_none());
    }

    #[test]
    fn dispatch_falls_back_to_local_search() {
        // Degrees 4, 2, 0, 3, 2, 2, 3, 2: degree 1 is missing and the classes
        // of degree 0 and 4 are odd.
        let g = Graph::new(8, [(0, 3), (0, 5), (0, 6), (0, 7), (1, 3), (1, 5), (3, 4), (4, 6), (6, 7)]).unwrap();
        let attempt = perfect_twins(&g);
        assert!(attempt.report.satisfied.is_empty());
        assert_eq!(attempt.method, Some(PerfectMethod::Opportunistic));
        let pair = attempt.pair.unwrap();
        assert!(check_twins(&g, &pair.a, &pair.b).valid);
        assert_eq!(pair.size(), 4);
    }
}
