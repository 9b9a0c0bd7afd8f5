//! Empirical frequency of perfect twins in `G(n, p)`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::criteria::perfect_twins;
use crate::discrepancy::almost_twins;
use crate::error::{Error, Result};
use crate::generators::{derive_seed, gen_gnp, Family, GenSpec};
use crate::graph::Graph;
use crate::oracle::{exact_t, DEFAULT_CAP};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub family: GenSpec,
    pub samples: usize,
    pub perfect: usize,
    pub perfect_twin_fraction: f64,
    /// Largest twin size found per sample; 0 when none was found.
    pub size_histogram: BTreeMap<usize, usize>,
    pub seed: u64,
    /// Samples whose heuristic answer was compared with the exact oracle.
    pub oracle_checked: usize,
    /// Samples where the oracle finds perfect twins the heuristics missed.
    pub oracle_only_perfect: usize,
}

/// Largest twin size among the heuristic constructions.
fn best_twins(g: &Graph) -> Result<usize> {
    let mut best = 0;
    if let Some(p) = perfect_twins(g).pair {
        best = p.size();
    }
    let at = almost_twins(g)?;
    for p in [&at.extraction.0, &at.local_search.0] {
        if p.is_twins() {
            best = best.max(p.size());
        }
    }
    Ok(best)
}

pub fn bench_gnp(n: usize, p: f64, samples: usize, seed: u64) -> Result<BenchReport> {
    if n % 2 != 0 || n == 0 {
        return Err(Error::Precondition(format!("n must be even and positive, got {n}")));
    }
    if samples == 0 {
        return Err(Error::Precondition("need at least one sample".into()));
    }
    let half = n / 2;
    let check_oracle = n <= DEFAULT_CAP;
    let outcomes: Vec<(usize, bool)> = (0..samples)
        .into_par_iter()
        .map(|i| -> Result<(usize, bool)> {
            let g = gen_gnp(n, p, derive_seed(seed, i as u64))?;
            let best = best_twins(&g)?;
            let mut oracle_only = false;
            if check_oracle {
                let t = exact_t(&g, DEFAULT_CAP)?.t;
                if best > t {
                    return Err(Error::Internal(format!("sample {i}: heuristic size {best} exceeds exact {t}")));
                }
                oracle_only = t == half && best < half;
            }
            Ok((best, oracle_only))
        })
        .collect::<Result<_>>()?;

    let mut size_histogram = BTreeMap::new();
    for &(s, _) in &outcomes {
        *size_histogram.entry(s).or_insert(0) += 1;
    }
    let perfect = outcomes.iter().filter(|o| o.0 == half).count();
    Ok(BenchReport {
        family: GenSpec { family: Family::Gnp, n, p, m: 0, criterion: 0, seed },
        samples,
        perfect,
        perfect_twin_fraction: perfect as f64 / samples as f64,
        size_histogram,
        seed,
        oracle_checked: if check_oracle { samples } else { 0 },
        oracle_only_perfect: outcomes.iter().filter(|o| o.1).count(),
    })
}
