use proptest::prelude::*;

use twins_core::criteria::{construct_for, detect_criteria, perfect_twins};
use twins_core::forest::{forest_twins, good_twins, is_good};
use twins_core::generators::{derive_seed, gen_forest, gen_gnp, odd_clique_orders, SplitMix64};
use twins_core::oracle::{balanced_halving, exact_t, DEFAULT_CAP};
use twins_core::sparse::sparse_twins;
use twins_core::{check_twins, degree_profile, parse_graph, Graph, TwinPair};

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut k = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if bits[k] {
                        edges.push((i, j));
                    }
                    k += 1;
                }
            }
            Graph::new(n, edges).unwrap()
        })
    })
}

fn graph_and_subset(max_n: usize) -> impl Strategy<Value = (Graph, Vec<usize>)> {
    graph_strategy(max_n).prop_flat_map(|g| {
        let n = g.n();
        (Just(g), proptest::collection::vec(any::<bool>(), n))
            .prop_map(|(g, pick)| {
                let s = (0..g.n()).filter(|&v| pick[v]).collect();
                (g, s)
            })
    })
}

fn count_within(g: &Graph, s: &[usize]) -> usize {
    g.edges().iter().filter(|(u, v)| s.contains(u) && s.contains(v)).count()
}

/// Largest twin size by trying every assignment of vertices to A, B or neither.
fn brute_t(g: &Graph) -> usize {
    let n = g.n();
    let mut best = 0;
    let total = 3usize.pow(n as u32);
    for code in 0..total {
        let (mut a, mut b, mut c) = (Vec::new(), Vec::new(), code);
        for v in 0..n {
            match c % 3 {
                1 => a.push(v),
                2 => b.push(v),
                _ => {}
            }
            c /= 3;
        }
        if a.len() == b.len() && a.len() > best && count_within(g, &a) == count_within(g, &b) {
            best = a.len();
        }
    }
    best
}

/// Whether some split of `x` has size gap and sum gap at most one.
fn halving_exists(x: &[usize]) -> bool {
    let m = x.len();
    let total: usize = x.iter().sum();
    (0u32..1 << m).any(|mask| {
        let size = mask.count_ones() as usize;
        let sum: usize = (0..m).filter(|&i| mask >> i & 1 == 1).map(|i| x[i]).sum();
        size.abs_diff(m - size) <= 1 && sum.abs_diff(total - sum) <= 1
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn text_format_round_trips(g in graph_strategy(12)) {
        prop_assert_eq!(parse_graph(&g.to_edge_list()).unwrap(), g);
    }

    #[test]
    fn handshake_identity((g, s) in graph_and_subset(10)) {
        let degree_sum: usize = (0..g.n()).map(|v| g.degree(v)).sum();
        prop_assert_eq!(degree_sum, 2 * g.edge_count());
        let rest: Vec<usize> = (0..g.n()).filter(|v| !s.contains(v)).collect();
        let d_s: usize = s.iter().map(|&v| g.degree(v)).sum();
        let inner = g.induced_edge_count(&s).unwrap();
        let cross = g.cross_edge_count(&s, &rest).unwrap();
        prop_assert_eq!(d_s, 2 * inner + cross);
        let all: Vec<usize> = (0..g.n()).collect();
        prop_assert_eq!(g.induced_edge_count(&all).unwrap(), g.edge_count());
    }

    #[test]
    fn checker_is_symmetric((g, s) in graph_and_subset(10)) {
        let rest: Vec<usize> = (0..g.n()).filter(|v| !s.contains(v)).collect();
        let k = s.len().min(rest.len());
        let (a, b) = (&s[..k], &rest[..k]);
        let fwd = check_twins(&g, a, b);
        prop_assert_eq!(fwd.valid, check_twins(&g, b, a).valid);
        prop_assert_eq!(fwd.valid, fwd.violations.is_empty());
        let p = TwinPair::new(&g, a, b).unwrap();
        prop_assert_eq!(p.disc, p.edges_a.abs_diff(p.edges_b));
        prop_assert_eq!(p.is_twins(), fwd.valid);
    }

    #[test]
    fn degree_classes_partition(g in graph_strategy(12)) {
        let prof = degree_profile(&g);
        let mut seen: Vec<usize> = prof.classes.values().flatten().copied().collect();
        seen.sort_unstable();
        prop_assert_eq!(seen, (0..g.n()).collect::<Vec<_>>());
        for (&d, vs) in &prof.classes {
            prop_assert!(!vs.is_empty());
            prop_assert!(vs.iter().all(|&v| g.degree(v) == d));
        }
        prop_assert_eq!(prof.min_degree, *prof.classes.keys().next().unwrap());
        prop_assert_eq!(prof.max_degree, *prof.classes.keys().last().unwrap());
    }

    #[test]
    fn generators_are_deterministic(n in 0usize..60, p in 0.0f64..=1.0, seed in any::<u64>()) {
        prop_assert_eq!(gen_gnp(n, p, seed).unwrap(), gen_gnp(n, p, seed).unwrap());
        let f = gen_forest(n, seed).unwrap();
        prop_assert!(f.is_forest());
        prop_assert_eq!(f, gen_forest(n, seed).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn exact_matches_three_way_enumeration(g in graph_strategy(8)) {
        let r = exact_t(&g, DEFAULT_CAP).unwrap();
        prop_assert!(check_twins(&g, &r.witness.a, &r.witness.b).valid);
        prop_assert_eq!(r.witness.size(), r.t);
        prop_assert_eq!(r.t, brute_t(&g));
    }

    #[test]
    fn halving_gaps_are_tight(x in proptest::collection::vec(0usize..40, 0..14)) {
        match balanced_halving(&x) {
            Some((p, q)) => {
                prop_assert!(p.len().abs_diff(q.len()) <= 1);
                let sum = |s: &[usize]| s.iter().map(|&i| x[i]).sum::<usize>();
                prop_assert!(sum(&p).abs_diff(sum(&q)) <= 1);
                let mut all: Vec<usize> = p.iter().chain(&q).copied().collect();
                all.sort_unstable();
                prop_assert_eq!(all, (0..x.len()).collect::<Vec<_>>());
            }
            None => prop_assert!(!halving_exists(&x)),
        }
    }

    #[test]
    fn forest_outputs_are_good(n in 1usize..80, seed in any::<u64>()) {
        let f = gen_forest(n, seed).unwrap();
        let (c, _) = good_twins(&f).unwrap();
        prop_assert!(is_good(&f, &c).is_empty());
        let (p, t) = forest_twins(&f).unwrap();
        prop_assert!(check_twins(&f, &p.a, &p.b).valid);
        prop_assert!(p.size() + 1 >= n.div_ceil(2));
        prop_assert!(t.dropped.len() <= 2);
    }

    #[test]
    fn detected_criteria_yield_perfect_twins(n in 2usize..40, seed in any::<u64>()) {
        let n = n & !1;
        // Random recursive trees often meet the degree conditions.
        let mut rng = SplitMix64::new(seed);
        let edges: Vec<(usize, usize)> = (1..n).map(|i| (rng.next_below(i), i)).collect();
        let g = Graph::new(n, edges).unwrap();
        for &c in &detect_criteria(&g).satisfied {
            let p = construct_for(&g, c).unwrap();
            prop_assert!(check_twins(&g, &p.a, &p.b).valid);
            prop_assert_eq!(p.size(), n / 2);
        }
        if let Some(p) = perfect_twins(&g).pair {
            prop_assert!(check_twins(&g, &p.a, &p.b).valid);
        }
    }

    #[test]
    fn sparse_reserve_is_fenced(n in 16usize..300, c in 0.5f64..4.0, seed in any::<u64>()) {
        let g = gen_gnp(n, c / n as f64, seed).unwrap();
        prop_assume!(g.edge_count() >= 4);
        let (p, t) = sparse_twins(&g).unwrap();
        prop_assert!(check_twins(&g, &p.a, &p.b).valid || t.not_twins);
        prop_assert!(t.high_set.len() as f64 <= n as f64 * t.f + 1e-9);
        prop_assert!(t.high_set.iter().all(|&v| g.degree(v) as f64 >= t.x_threshold));
        let mut reserved: Vec<usize> = t.matching.iter().flat_map(|&(u, v)| [u, v]).chain(t.singles.iter().copied()).collect();
        reserved.sort_unstable();
        prop_assert_eq!(g.induced_edge_count(&reserved).unwrap(), t.matching.len());
        prop_assert_eq!(g.cross_edge_count(&reserved, &t.untouched).unwrap(), 0);
    }
}

#[test]
fn odd_clique_orders_grow_fast_enough() {
    let orders = odd_clique_orders(3, usize::MAX).unwrap();
    assert_eq!(orders, vec![1, 3, 21]);
    for j in 0..orders.len() {
        let squares: usize = orders[..j].iter().map(|a| a * a).sum();
        assert!(orders[j] % 2 == 1 && orders[j] > 2 * squares);
    }
}

#[test]
fn halving_finds_every_existing_split() {
    let mut found = 0;
    for i in 0..200u64 {
        let mut rng = SplitMix64::new(derive_seed(0xBA1, i));
        let m = 10 + 2 * rng.next_below(4);
        // m distinct values from [1, 2m - 2].
        let mut pool: Vec<usize> = (1..=2 * m - 2).collect();
        for k in (1..pool.len()).rev() {
            pool.swap(k, rng.next_below(k + 1));
        }
        let x = &pool[..m];
        let exists = halving_exists(x);
        assert_eq!(balanced_halving(x).is_some(), exists, "{x:?}");
        found += usize::from(exists);
    }
    assert!(found > 150, "only {found} inputs admitted a split");
}
