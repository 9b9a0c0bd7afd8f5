//! Deterministic seeded graph families.
//!
//! Every random choice is drawn from [`SplitMix64`], so a given
//! `(arguments, seed)` produces the same graph on every platform:
//!
//! * `next_u64`: `state += 0x9E3779B97F4A7C15`, then the standard splitmix
//!   finaliser (`xor-shift 30, * 0xBF58476D1CE4E5B9, xor-shift 27,
//!   * 0x94D049BB133111EB, xor-shift 31`).
//! * `next_f64`: top 53 bits of `next_u64` scaled by `2^-53`, in `[0, 1)`.
//! * `next_below(k)`: `(next_u64 * k) >> 64` computed in 128 bits.

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::criteria::detect_criteria;
use crate::error::{Error, Result};
use crate::graph::Graph;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// Probability that a vertex of [`gen_forest`] starts a new component.
pub const FOREST_NEW_COMPONENT_PROB: f64 = 0.2;

/// Largest vertex count any generator will produce.
pub const MAX_GENERATED_VERTICES: usize = 100_000;

/// Attempts [`gen_criterion_graph`] makes before giving up.
pub const CRITERION_RETRY_BUDGET: u64 = 1000;

#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform-ish integer in `0..bound` (`bound > 0`).
    pub fn next_below(&mut self, bound: usize) -> usize {
        ((self.next_u64() as u128 * bound as u128) >> 64) as usize
    }
}

/// Independent seed for the `index`-th sample of a batch seeded with `seed`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    SplitMix64::new(seed ^ index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)).next_u64()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Gnp,
    Star,
    Forest,
    OddCliques,
    Criterion,
}

/// Parameters of one generated graph; fields a family does not use are ignored.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub family: Family,
    pub n: usize,
    pub p: f64,
    pub m: usize,
    pub criterion: u8,
    pub seed: u64,
}

impl GenSpec {
    pub fn generate(&self) -> Result<Graph> {
        match self.family {
            Family::Gnp => gen_gnp(self.n, self.p, self.seed),
            Family::Star => gen_star(self.n),
            Family::Forest => gen_forest(self.n, self.seed),
            Family::OddCliques => gen_odd_cliques(self.m),
            Family::Criterion => gen_criterion_graph(self.criterion, self.n, self.seed),
        }
    }
}

fn check_size(n: usize) -> Result<()> {
    if n > MAX_GENERATED_VERTICES {
        return Err(Error::Generation(format!(
            "{n} vertices requested, cap is {MAX_GENERATED_VERTICES}"
        )));
    }
    Ok(())
}

fn build(n: usize, edges: Vec<(usize, usize)>) -> Graph {
    Graph::new(n, edges).expect("generators emit simple graphs")
}

/// Erdős–Rényi `G(n, p)`: pairs `(i, j)`, `i < j`, are visited in
/// lexicographic order and each is kept when `next_f64() < p`.
pub fn gen_gnp(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Precondition(format!("edge probability {p} is outside [0, 1]")));
    }
    check_size(n)?;
    let mut rng = SplitMix64::new(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.next_f64() < p {
                edges.push((i, j));
            }
        }
    }
    Ok(build(n, edges))
}

/// `K_{1, n-1}` centred at vertex 0.
pub fn gen_star(n: usize) -> Result<Graph> {
    if n == 0 {
        return Err(Error::Precondition("a star needs at least one vertex".into()));
    }
    check_size(n)?;
    Ok(build(n, (1..n).map(|i| (0, i)).collect()))
}

/// Clique orders `a_1 = 1` and `a_j` = the smallest odd integer strictly
/// greater than `2 (a_1^2 + ... + a_{j-1}^2)`.
pub fn odd_clique_orders(m: usize, cap: usize) -> Result<Vec<usize>> {
    if m == 0 {
        return Err(Error::Precondition("need at least one clique".into()));
    }
    let mut orders: Vec<usize> = Vec::with_capacity(m);
    let mut square_sum: u128 = 0;
    let mut total: u128 = 0;
    for _ in 0..m {
        let bound = 2 * square_sum;
        let a = if bound % 2 == 0 { bound + 1 } else { bound + 2 };
        total += a;
        if total > cap as u128 {
            return Err(Error::Generation(format!(
                "odd-clique family with {m} cliques needs more than {cap} vertices"
            )));
        }
        square_sum += a * a;
        orders.push(a as usize);
    }
    Ok(orders)
}

/// Disjoint union of odd cliques from [`odd_clique_orders`], laid out
/// consecutively from vertex 0.
pub fn gen_odd_cliques(m: usize) -> Result<Graph> {
    let orders = odd_clique_orders(m, MAX_GENERATED_VERTICES)?;
    let mut edges = Vec::new();
    let mut start = 0;
    for &a in &orders {
        for i in start..start + a {
            for j in i + 1..start + a {
                edges.push((i, j));
            }
        }
        start += a;
    }
    Ok(build(start, edges))
}

/// Random forest by attachment: vertex `i >= 1` starts a new component with
/// probability [`FOREST_NEW_COMPONENT_PROB`], otherwise it attaches to
/// `next_below(i)`.
pub fn gen_forest(n: usize, seed: u64) -> Result<Graph> {
    check_size(n)?;
    let mut rng = SplitMix64::new(seed);
    let mut edges = Vec::new();
    for i in 1..n {
        if rng.next_f64() >= FOREST_NEW_COMPONENT_PROB {
            edges.push((rng.next_below(i), i));
        }
    }
    Ok(build(n, edges))
}

/// Uniform random recursive tree: vertex `i` attaches to `next_below(i)`.
fn random_tree(n: usize, rng: &mut SplitMix64) -> Graph {
    build(n, (1..n).map(|i| (rng.next_below(i), i)).collect())
}

/// Two disjoint copies of a cycle `C_{n/2}` with random chords (p = 0.3);
/// every degree occurs an even number of times.
fn doubled_graph(n: usize, rng: &mut SplitMix64) -> Graph {
    let h = n / 2;
    let mut base: BTreeSet<(usize, usize)> = BTreeSet::new();
    if h == 2 {
        base.insert((0, 1));
    } else if h >= 3 {
        for i in 0..h {
            let j = (i + 1) % h;
            base.insert((i.min(j), i.max(j)));
        }
    }
    for i in 0..h {
        for j in i + 1..h {
            if rng.next_f64() < 0.3 {
                base.insert((i, j));
            }
        }
    }
    let mut edges: Vec<(usize, usize)> = base.iter().copied().collect();
    edges.extend(base.iter().map(|&(u, v)| (u + h, v + h)));
    build(n, edges)
}

/// Antiregular (threshold) graph, relabelled at random and perturbed by
/// `n / 10` random pair toggles. Almost all degrees are distinct.
fn near_antiregular(n: usize, rng: &mut SplitMix64) -> Graph {
    let mut edges: HashSet<(usize, usize)> = HashSet::new();
    for i in 1..n {
        if i % 2 == 1 {
            for j in 0..i {
                edges.insert((j, i));
            }
        }
    }
    for _ in 0..n / 10 {
        let u = rng.next_below(n);
        let v = rng.next_below(n);
        if u != v {
            let key = (u.min(v), u.max(v));
            if !edges.remove(&key) {
                edges.insert(key);
            }
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.next_below(i + 1));
    }
    let mut list: Vec<(usize, usize)> = edges.into_iter().map(|(u, v)| (perm[u], perm[v])).collect();
    list.sort_unstable();
    build(n, list)
}

/// A graph satisfying the requested perfect-twin criterion (1..=4).
///
/// Families: 1 and 4 use random recursive trees, 2 uses a doubled graph,
/// 3 a perturbed antiregular graph. The seed is incremented until the
/// criterion detector accepts the candidate, at most
/// [`CRITERION_RETRY_BUDGET`] times.
pub fn gen_criterion_graph(criterion: u8, n: usize, seed: u64) -> Result<Graph> {
    if !(1..=4).contains(&criterion) {
        return Err(Error::Precondition(format!("criterion must be 1..=4, got {criterion}")));
    }
    if n % 2 != 0 {
        return Err(Error::Precondition(format!("criterion graphs need an even vertex count, got {n}")));
    }
    if criterion == 3 && n < 90 {
        return Err(Error::Precondition(format!("criterion 3 needs n >= 90, got {n}")));
    }
    check_size(n)?;
    for attempt in 0..CRITERION_RETRY_BUDGET {
        let mut rng = SplitMix64::new(seed.wrapping_add(attempt).wrapping_add(u64::from(criterion) << 56));
        let g = match criterion {
            1 | 4 => random_tree(n, &mut rng),
            2 => doubled_graph(n, &mut rng),
            _ => near_antiregular(n, &mut rng),
        };
        if detect_criteria(&g).holds(criterion) {
            return Ok(g);
        }
    }
    Err(Error::Generation(format!(
        "no graph satisfying criterion {criterion} on {n} vertices within {CRITERION_RETRY_BUDGET} attempts"
    )))
}

/// Canonical string of a tree rooted at `root` (AHU encoding).
fn rooted_code(g: &Graph, root: usize, parent: Option<usize>) -> String {
    let mut kids: Vec<String> = g
        .neighbors(root)
        .iter()
        .filter(|&&w| Some(w) != parent)
        .map(|&w| rooted_code(g, w, Some(root)))
        .collect();
    kids.sort();
    format!("({})", kids.concat())
}

/// Isomorphism-invariant code of a free tree: the smaller of its
/// centre-rooted encodings.
pub fn tree_canonical_form(tree: &Graph) -> String {
    let n = tree.n();
    if n == 0 {
        return String::new();
    }
    let mut deg = tree.degrees();
    let mut alive = n;
    let mut layer: Vec<usize> = (0..n).filter(|&v| deg[v] <= 1).collect();
    let mut removed = vec![false; n];
    while alive > 2 {
        let mut next = Vec::new();
        for &v in &layer {
            removed[v] = true;
            alive -= 1;
            for &w in tree.neighbors(v) {
                if !removed[w] {
                    deg[w] -= 1;
                    if deg[w] == 1 {
                        next.push(w);
                    }
                }
            }
        }
        layer = next;
    }
    (0..n)
        .filter(|&v| !removed[v])
        .map(|c| rooted_code(tree, c, None))
        .min()
        .expect("a non-empty tree has a centre")
}

/// Every free tree on `n` vertices up to isomorphism, each labelled by the
/// order its vertices were grown in, sorted by canonical form.
pub fn all_free_trees(n: usize) -> Vec<Graph> {
    if n == 0 {
        return Vec::new();
    }
    let mut level: Vec<(String, Graph)> = vec![(tree_canonical_form(&Graph::empty(1)), Graph::empty(1))];
    for size in 2..=n {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for (_, t) in &level {
            for v in 0..t.n() {
                let mut edges = t.edges().to_vec();
                edges.push((v, size - 1));
                let grown = build(size, edges);
                let code = tree_canonical_form(&grown);
                if seen.insert(code.clone()) {
                    next.push((code, grown));
                }
            }
        }
        next.sort_by(|a, b| a.0.cmp(&b.0));
        level = next;
    }
    level.into_iter().map(|(_, g)| g).collect()
}
