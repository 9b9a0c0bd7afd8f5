//! Exhaustive ground truth for small graphs.
//!
//! Everything here is plain enumeration over bitmasks, deliberately free of
//! cleverness so it can serve as the reference the constructive modules are
//! checked against.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, TwinPair};

/// Default vertex cap for [`exact_t`].
pub const DEFAULT_CAP: usize = 14;
/// Hard ceiling on any cap: the edge-count table has `2^n` entries.
pub const ORACLE_MAX_VERTICES: usize = 24;
/// Vertex limit for [`min_disc_at_half`].
pub const MIN_DISC_MAX_VERTICES: usize = 16;
/// Largest `(size, sum)` table [`balanced_halving`] will allocate.
pub const MAX_HALVING_CELLS: usize = 1 << 27;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleResult {
    pub t: usize,
    pub witness: TwinPair,
    pub nodes_examined: u64,
}

/// `e(S)` for every subset mask `S` of a graph with at most
/// [`ORACLE_MAX_VERTICES`] vertices.
pub(crate) fn subset_edge_table(g: &Graph) -> Vec<u16> {
    let n = g.n();
    debug_assert!(n <= ORACLE_MAX_VERTICES);
    let adj: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | (1 << w)))
        .collect();
    let mut table = vec![0u16; 1 << n];
    for mask in 1usize..(1 << n) {
        let v = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        table[mask] = table[rest] + (adj[v] & rest as u32).count_ones() as u16;
    }
    table
}

fn mask_to_vec(mask: usize) -> Vec<usize> {
    (0..usize::BITS as usize).filter(|&i| mask >> i & 1 == 1).collect()
}

/// Visits the `k`-subsets of the set bits of `universe` in colexicographic
/// order; the visitor returns `true` to stop early.
fn for_each_subset(universe: usize, k: usize, mut visit: impl FnMut(usize) -> bool) -> bool {
    let positions = mask_to_vec(universe);
    let m = positions.len();
    if k > m {
        return false;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        let mask = idx.iter().fold(0usize, |acc, &i| acc | (1 << positions[i]));
        if visit(mask) {
            return true;
        }
        // Colex successor: bump the lowest index that has room, reset those below it.
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
    }
}

/// Exact `t(G)`: the largest `k` with disjoint `k`-sets inducing equally many
/// edges.
///
/// Sizes are tried from `floor(n/2)` downwards; for each size, `A` runs over
/// the `k`-subsets in colex order and `B` over the `k`-subsets of the
/// complement with `min(A) < min(B)`. The first hit is the witness.
pub fn exact_t(g: &Graph, cap: usize) -> Result<OracleResult> {
    let n = g.n();
    let limit = cap.min(ORACLE_MAX_VERTICES);
    if n > limit {
        return Err(Error::OracleCap { n, cap: limit });
    }
    let table = subset_edge_table(g);
    let full = (1usize << n) - 1;
    let mut nodes = 0u64;
    for k in (1..=n / 2).rev() {
        let mut hit = None;
        for_each_subset(full, k, |a| {
            let low = a & a.wrapping_neg();
            let above = full & !a & !((low << 1) - 1);
            for_each_subset(above, k, |b| {
                nodes += 1;
                if table[a] == table[b] {
                    hit = Some((a, b));
                    return true;
                }
                false
            })
        });
        if let Some((a, b)) = hit {
            let witness = TwinPair::new(g, &mask_to_vec(a), &mask_to_vec(b))?;
            return Ok(OracleResult { t: k, witness, nodes_examined: nodes });
        }
    }
    Ok(OracleResult { t: 0, witness: TwinPair::empty(), nodes_examined: nodes })
}

/// Minimum of `|e(A) - e(B)|` over disjoint `A`, `B` of size `floor(n/2)`.
///
/// For odd `n` every choice of the omitted vertex is tried. Returns the
/// minimum and the first partition attaining it.
pub fn min_disc_at_half(g: &Graph) -> Result<(usize, TwinPair)> {
    let n = g.n();
    if n > MIN_DISC_MAX_VERTICES {
        return Err(Error::OracleCap { n, cap: MIN_DISC_MAX_VERTICES });
    }
    let half = n / 2;
    if half == 0 {
        return Ok((0, TwinPair::empty()));
    }
    let table = subset_edge_table(g);
    let full = (1usize << n) - 1;
    let omissions: Vec<usize> = if n % 2 == 0 { vec![0] } else { (0..n).map(|o| 1 << o).collect() };
    let mut best: Option<(usize, usize, usize)> = None;
    for omit in omissions {
        let universe = if n % 2 == 0 { full } else { full & !omit };
        let low = universe & universe.wrapping_neg();
        // Fixing the lowest vertex in A visits each unordered split once.
        for_each_subset(universe & !low, half - 1, |rest| {
            let a = rest | low;
            let b = universe & !a;
            let disc = (table[a] as usize).abs_diff(table[b] as usize);
            if best.is_none_or(|(d, _, _)| disc < d) {
                best = Some((disc, a, b));
            }
            disc == 0
        });
        if matches!(best, Some((0, _, _))) {
            break;
        }
    }
    let (disc, a, b) = best.expect("at least one split exists");
    Ok((disc, TwinPair::new(g, &mask_to_vec(a), &mask_to_vec(b))?))
}

/// Split `values` into two index sets whose sizes differ by at most one and
/// whose sums differ by at most one, if such a split exists.
///
/// Subset-sum dynamic programming over `(count, sum)` states; each state
/// remembers the first item that reached it, which makes the reconstruction
/// walk strictly decreasing in item index. The first returned set contains
/// index 0. Returns `None` when no such split exists or when the table would
/// exceed [`MAX_HALVING_CELLS`].
pub fn balanced_halving(values: &[usize]) -> Option<(Vec<usize>, Vec<usize>)> {
    let m = values.len();
    if m == 0 {
        return Some((Vec::new(), Vec::new()));
    }
    let total: usize = values.iter().sum();
    let k = m / 2;
    let width = total + 1;
    if (k + 1).checked_mul(width).is_none_or(|c| c > MAX_HALVING_CELLS) {
        return None;
    }
    const UNREACHED: u32 = u32::MAX;
    const ORIGIN: u32 = u32::MAX - 1;
    let mut first = vec![UNREACHED; (k + 1) * width];
    first[0] = ORIGIN;
    for (i, &x) in values.iter().enumerate() {
        for c in (1..=k.min(i + 1)).rev() {
            for s in (x..width).rev() {
                let cell = c * width + s;
                if first[cell] == UNREACHED && first[(c - 1) * width + s - x] != UNREACHED {
                    first[cell] = i as u32;
                }
            }
        }
    }
    let targets = [total / 2, total.div_ceil(2)];
    let target = targets.into_iter().find(|&s| first[k * width + s] != UNREACHED)?;

    let mut chosen = vec![false; m];
    let (mut c, mut s) = (k, target);
    while c > 0 {
        let i = first[c * width + s] as usize;
        chosen[i] = true;
        s -= values[i];
        c -= 1;
    }
    let mut picked: Vec<usize> = (0..m).filter(|&i| chosen[i]).collect();
    let mut rest: Vec<usize> = (0..m).filter(|&i| !chosen[i]).collect();
    if !chosen[0] {
        std::mem::swap(&mut picked, &mut rest);
    }
    Some((picked, rest))
}
