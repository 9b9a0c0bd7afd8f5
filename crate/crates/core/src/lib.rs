//! Twin pairs: disjoint vertex sets of equal size inducing the same
//! number of edges.
//!
//! The crate offers an exhaustive oracle for small graphs, low-discrepancy
//! partitions for general graphs, a pipeline for sparse graphs, perfect-twin
//! constructions under degree conditions, and a complete construction for
//! forests.

pub mod bench;
pub mod criteria;
pub mod discrepancy;
pub mod error;
pub mod forest;
pub mod generators;
pub mod graph;
pub mod oracle;
pub mod sparse;

pub use error::{Error, GraphError, ParseError, Result};
pub use graph::{check_twins, degree_profile, parse_graph, DegreeProfile, Graph, TwinCheck, TwinPair};

/// `ceil(log2 n)` for `n >= 1`.
pub fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

#[cfg(test)]
mod tests {
    #[test]
    fn ceil_log2_values() {
        let cases = [(1, 0), (2, 1), (3, 2), (4, 2), (5, 3), (16, 4), (17, 5), (1024, 10), (1025, 11)];
        for (n, k) in cases {
            assert_eq!(super::ceil_log2(n), k, "n = {n}");
        }
    }
}
