//! Low-discrepancy pairs of large equal-size sets in arbitrary graphs.
//!
//! Two constructions are offered. Extraction peels off small blocks
//! `(A_i, B_i)` with equal degree sums and recombines them with alternating
//! orientation; it yields sets of size about `n/2 - lg n` with discrepancy
//! `O(lg² n)`. Local search splits (almost) the whole vertex set and swaps
//! vertices until no swap helps; its discrepancy is at most about half the
//! degree spread.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::ceil_log2;
use crate::error::{Error, GraphError, Result};
use crate::graph::{canonical, Graph, TwinPair};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockPair {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    /// `|d(a) - d(b)|` in the host the block was last measured against.
    pub eps: usize,
}

impl BlockPair {
    pub fn new(host: &Graph, a: &[usize], b: &[usize]) -> Self {
        let (a, b) = (canonical(a), canonical(b));
        let eps = host.degree_sum(&a).abs_diff(host.degree_sum(&b));
        BlockPair { a, b, eps }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Extraction,
    LocalSearch,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlmostTwinsTrace {
    pub branch: Branch,
    /// `ceil(lg n)`.
    pub k: usize,
    /// Extraction only: blocks with `eps` measured in `G - S`.
    pub blocks: Vec<BlockPair>,
    /// Vertices in no block (extraction), or the vertex dropped to make the
    /// order even (local search).
    pub leftover: Vec<usize>,
    pub bound: f64,
    pub achieved_disc: usize,
    /// Local search only: number of swaps applied.
    pub swaps: usize,
}

/// Colex successor of a sorted index combination drawn from `0..m`.
fn next_combination(idx: &mut [usize], m: usize) -> bool {
    let k = idx.len();
    let mut j = 0;
    while j < k && idx[j] + 1 == if j + 1 < k { idx[j + 1] } else { m } {
        j += 1;
    }
    if j == k {
        return false;
    }
    idx[j] += 1;
    for (i, slot) in idx.iter_mut().enumerate().take(j) {
        *slot = i;
    }
    true
}

/// First sum collision among the `size`-subsets of `x[..window]`, stripped of
/// shared indices. The pair is ordered by smallest index.
fn collision(x: &[usize], window: usize, size: usize) -> Option<(Vec<usize>, Vec<usize>)> {
    if size == 0 || size > window || window > x.len() || window > 128 {
        return None;
    }
    // Subsets are stored as bitmasks; windows never exceed 2 * 64 entries.
    let mut seen: HashMap<usize, u128> = HashMap::new();
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        let sum: usize = idx.iter().map(|&i| x[i]).sum();
        let mask = idx.iter().fold(0u128, |m, &i| m | 1 << i);
        if let Some(&prev) = seen.get(&sum) {
            let bits = |m: u128| (0..window).filter(move |&i| m >> i & 1 == 1).collect::<Vec<_>>();
            let (i, j) = (bits(prev & !mask), bits(mask & !prev));
            return Some(if i[0] < j[0] { (i, j) } else { (j, i) });
        }
        seen.insert(sum, mask);
        if !next_combination(&mut idx, window) {
            return None;
        }
    }
}

/// Disjoint nonempty index sets of equal size at most `k` with equal sums,
/// searched among the `k`-subsets of the first `min(|x|, 2k)` entries.
pub fn equal_sum_pair(x: &[usize], k: usize) -> Option<(Vec<usize>, Vec<usize>)> {
    if k == 0 {
        return None;
    }
    let window = x.len().min(2 * k);
    collision(x, window, k.min(window))
}

/// Merges blocks into one pair whose discrepancy in `host` is at most the
/// largest block `eps`.
///
/// Blocks are ranked by `eps` (recomputed in `host`) descending. Odd ranks put
/// the side with the larger degree sum into `a`, even ranks into `b`, so the
/// signed contributions alternate and never exceed the first in magnitude.
/// The identity `2(e(a) - e(b)) = d(a) - d(b)` behind this needs every vertex
/// outside the blocks to be isolated in `host`.
pub fn combine_blocks(host: &Graph, blocks: &[BlockPair]) -> Result<(Vec<usize>, Vec<usize>)> {
    let mut seen = BTreeSet::new();
    for block in blocks {
        if block.a.len() != block.b.len() {
            return Err(GraphError::SizeMismatch(block.a.len(), block.b.len()).into());
        }
        for &v in block.a.iter().chain(&block.b) {
            if v >= host.n() {
                return Err(GraphError::VertexOutOfRange { vertex: v, n: host.n() }.into());
            }
            if !seen.insert(v) {
                return Err(GraphError::NotDisjoint(v).into());
            }
        }
    }
    let mut order: Vec<(usize, &BlockPair, bool)> = blocks
        .iter()
        .map(|blk| {
            let (da, db) = (host.degree_sum(&blk.a), host.degree_sum(&blk.b));
            (da.abs_diff(db), blk, da >= db)
        })
        .collect();
    order.sort_by_key(|&(eps, _, _)| Reverse(eps));
    let (mut a, mut b) = (Vec::new(), Vec::new());
    for (rank, (_, blk, a_heavier)) in order.into_iter().enumerate() {
        let (heavy, light) = if a_heavier { (&blk.a, &blk.b) } else { (&blk.b, &blk.a) };
        let (to_a, to_b) = if rank % 2 == 0 { (heavy, light) } else { (light, heavy) };
        a.extend_from_slice(to_a);
        b.extend_from_slice(to_b);
    }
    Ok((canonical(&a), canonical(&b)))
}

/// Block extraction followed by [`combine_blocks`].
///
/// With `k = ceil(lg n)`, blocks come from equal degree sums among the first
/// `2k` remaining vertices while at least `2k` remain. Afterwards, while more
/// than `2 lg n` vertices remain, blocks of size below `k` are searched among
/// all remaining vertices, which keeps the leftover small enough for the size
/// guarantee `(n - 2 lg n) / 2`.
pub fn almost_twins_extraction(g: &Graph) -> Result<(TwinPair, AlmostTwinsTrace)> {
    let n = g.n();
    if n < 2 {
        return Err(Error::Precondition(format!("need at least 2 vertices, got {n}")));
    }
    let k = ceil_log2(n);
    let threshold = 2.0 * (n as f64).log2();
    let mut remaining: Vec<usize> = (0..n).collect();
    let mut raw: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    while remaining.len() as f64 > threshold {
        let window = remaining.len().min(2 * k);
        let size = k.min(window / 2);
        let degrees: Vec<usize> = remaining[..window].iter().map(|&v| g.degree(v)).collect();
        match collision(&degrees, window, size) {
            Some((i, j)) => {
                let a: Vec<usize> = i.iter().map(|&t| remaining[t]).collect();
                let b: Vec<usize> = j.iter().map(|&t| remaining[t]).collect();
                remaining.retain(|v| !a.contains(v) && !b.contains(v));
                raw.push((a, b));
            }
            None if window == 2 * k && n >= 16 => {
                return Err(Error::Internal(format!(
                    "no equal degree sums among {window} vertices with k = {k}, n = {n}"
                )));
            }
            None => break,
        }
    }
    let host = g.isolate(&remaining);
    let blocks: Vec<BlockPair> = raw.iter().map(|(a, b)| BlockPair::new(&host, a, b)).collect();
    let (a, b) = combine_blocks(&host, &blocks)?;
    let pair = TwinPair::new(g, &a, &b)?;
    let trace = AlmostTwinsTrace {
        branch: Branch::Extraction,
        k,
        blocks,
        leftover: remaining,
        bound: (2 * k * k) as f64,
        achieved_disc: pair.disc,
        swaps: 0,
    };
    Ok((pair, trace))
}

/// Best-improvement swap search from the degree-sorted alternating split.
///
/// For odd `n` the lowest-index vertex is left out. A swap of `a ∈ A` and
/// `b ∈ B` changes `e(A) - e(B)` by `d(b) - d(a)`, so candidates are scanned
/// per degree class.
pub fn almost_twins_local_search(g: &Graph) -> Result<(TwinPair, AlmostTwinsTrace)> {
    let n = g.n();
    if n < 2 {
        return Err(Error::Precondition(format!("need at least 2 vertices, got {n}")));
    }
    let leftover: Vec<usize> = if n % 2 == 1 { vec![0] } else { Vec::new() };
    let host = g.isolate(&leftover);
    let mut order: Vec<usize> = (0..n).filter(|v| !leftover.contains(v)).collect();
    order.sort_by_key(|&v| (Reverse(host.degree(v)), v));

    let mut side_a: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    let mut side_b: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for (i, &v) in order.iter().enumerate() {
        let side = if i % 2 == 0 { &mut side_a } else { &mut side_b };
        side.entry(host.degree(v)).or_default().insert(v);
    }
    let members = |side: &BTreeMap<usize, BTreeSet<usize>>| -> Vec<usize> {
        side.values().flatten().copied().collect()
    };
    let mut diff = host.induced_edge_count(&members(&side_a))? as i64
        - host.induced_edge_count(&members(&side_b))? as i64;

    let mut swaps = 0;
    while diff != 0 {
        let mut best: Option<(i64, usize, usize)> = None;
        for (&da, va) in &side_a {
            for (&db, vb) in &side_b {
                let after = (diff - da as i64 + db as i64).abs();
                let cand = (after, *va.first().unwrap(), *vb.first().unwrap());
                if best.is_none_or(|b| cand < b) {
                    best = Some(cand);
                }
            }
        }
        let Some((after, x, y)) = best.filter(|b| b.0 < diff.abs()) else { break };
        let (dx, dy) = (host.degree(x), host.degree(y));
        remove(&mut side_a, dx, x);
        remove(&mut side_b, dy, y);
        side_a.entry(dy).or_default().insert(y);
        side_b.entry(dx).or_default().insert(x);
        diff = diff - dx as i64 + dy as i64;
        debug_assert_eq!(diff.abs(), after);
        swaps += 1;
    }

    let pair = TwinPair::new(g, &members(&side_a), &members(&side_b))?;
    let degrees = g.degrees();
    let spread = degrees.iter().max().unwrap() - degrees.iter().min().unwrap();
    let trace = AlmostTwinsTrace {
        branch: Branch::LocalSearch,
        k: ceil_log2(n),
        blocks: Vec::new(),
        leftover,
        bound: ((spread + 1) / 2) as f64,
        achieved_disc: pair.disc,
        swaps,
    };
    Ok((pair, trace))
}

fn remove(side: &mut BTreeMap<usize, BTreeSet<usize>>, d: usize, v: usize) {
    let class = side.get_mut(&d).expect("degree class present");
    class.remove(&v);
    if class.is_empty() {
        side.remove(&d);
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlmostTwins {
    pub chosen: Branch,
    pub pair: TwinPair,
    pub extraction: (TwinPair, AlmostTwinsTrace),
    pub local_search: (TwinPair, AlmostTwinsTrace),
}

/// Runs both constructions and keeps the smaller discrepancy, preferring the
/// larger pair on ties.
pub fn almost_twins(g: &Graph) -> Result<AlmostTwins> {
    let extraction = almost_twins_extraction(g)?;
    let local_search = almost_twins_local_search(g)?;
    let key = |p: &TwinPair| (p.disc, Reverse(p.size()));
    let (chosen, pair) = if key(&local_search.0) <= key(&extraction.0) {
        (Branch::LocalSearch, local_search.0.clone())
    } else {
        (Branch::Extraction, extraction.0.clone())
    };
    Ok(AlmostTwins { chosen, pair, extraction, local_search })
}
