//! Randomized invariants: structural facts about multigraphs and the
//! construction family, bound domination, and end-to-end solver guarantees
//! (determinism, certification, enclosure) on small instances.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use multex_core::bounds::{amgm_upper, amgm_upper_with_deficient, product_upper_bound};
use multex_core::constructions::{build_construction, pi_rd_with_witness, sigma_rd};
use multex_core::search::{
    certify_witness, exact_ex_pi, search_cache_lookup, search_cache_store, CacheKey,
};
use multex_core::{BigNat, Multigraph, SQConstraint, SearchConfig, SearchStatus};

fn arb_graph() -> impl Strategy<Value = Multigraph> {
    (2usize..=7)
        .prop_flat_map(|n| {
            let m = n * (n - 1) / 2;
            (Just(n), proptest::collection::vec(0u64..=8, m))
        })
        .prop_map(|(n, ws)| {
            let mut g = Multigraph::new(n);
            g.weights_mut().copy_from_slice(&ws);
            g
        })
}

/// A graph together with a set size it can actually span.
fn arb_graph_and_s() -> impl Strategy<Value = (Multigraph, usize)> {
    arb_graph().prop_flat_map(|g| {
        let n = g.n();
        (Just(g), 2usize..=n)
    })
}

proptest! {
    #[test]
    fn full_set_sum_matches_edge_sum(g in arb_graph()) {
        let all: Vec<usize> = (0..g.n()).collect();
        prop_assert_eq!(g.spanned_sum(&all).unwrap(), g.edge_sum());
    }

    #[test]
    fn lowering_a_multiplicity_preserves_the_cap_property(
        (g, s) in arb_graph_and_s(),
        idx in any::<proptest::sample::Index>(),
    ) {
        let q = g.max_spanned_sum(s).unwrap();
        let c = SQConstraint::new(s, q).unwrap();
        prop_assert!(g.is_sq_graph(&c));
        let mut h = g.clone();
        let k = idx.index(h.pair_count());
        if h.weights()[k] == 0 {
            return Ok(());
        }
        h.weights_mut()[k] -= 1;
        prop_assert!(h.is_sq_graph(&c));
    }

    #[test]
    fn relabeling_changes_nothing_observable(
        (gs, perm) in arb_graph_and_s().prop_flat_map(|(g, s)| {
            let n = g.n();
            (Just((g, s)), Just((0..n).collect::<Vec<usize>>()).prop_shuffle())
        }),
    ) {
        let (g, s) = gs;
        let h = g.relabeled(&perm).unwrap();
        prop_assert_eq!(h.product(), g.product());
        prop_assert_eq!(h.edge_sum(), g.edge_sum());
        prop_assert_eq!(h.max_spanned_sum(s), g.max_spanned_sum(s));
    }

    #[test]
    fn every_pair_stays_under_the_set_cap((g, s) in arb_graph_and_s()) {
        let q = g.max_spanned_sum(s).unwrap();
        prop_assert!(g.weights().iter().all(|&w| w <= q));
    }

    #[test]
    fn edge_list_text_roundtrips(g in arb_graph()) {
        let back = Multigraph::parse_edge_list(&g.to_edge_list()).unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn balanced_split_bound_dominates_products(
        ws in proptest::collection::vec(0u64..=12, 1..=8),
    ) {
        let total: u64 = ws.iter().sum();
        let product = ws.iter().fold(BigNat::from(1u64), |p, &w| p * w);
        prop_assert!(product <= amgm_upper(ws.len() as u64, total).unwrap());
    }

    #[test]
    fn pinned_split_bound_dominates_products(
        (m, a, t, w0) in (2usize..=8, 1u64..=6).prop_flat_map(|(m, a)| {
            (Just(m), Just(a), 0u64..=(m as u64 - 2), 0..a)
        }),
        seed in any::<u64>(),
    ) {
        let total = a * m as u64 + t;
        let mut ws = vec![0u64; m];
        ws[0] = w0;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..(total - w0) {
            ws[rng.gen_range(1..m)] += 1;
        }
        let product = ws.iter().fold(BigNat::from(1u64), |p, &w| p * w);
        prop_assert!(product <= amgm_upper_with_deficient(m as u64, total, a).unwrap());
    }

    #[test]
    fn construction_witness_matches_its_value(
        (a, r, d, n, s) in (1u64..=6, 1usize..=4, 2usize..=7).prop_flat_map(|(a, r, n)| {
            (Just(a), Just(r), 0..a, Just(n), 2..=n)
        }).prop_map(|(a, r, d, n, s)| (a, r, d, n, s)),
    ) {
        let (value, t) = pi_rd_with_witness(a, r, d, n).unwrap();
        let g = build_construction(&t).unwrap();
        prop_assert_eq!(g.n(), n);
        prop_assert_eq!(g.product(), value);
        // the family-wide worst case dominates any one member's worst case
        prop_assert!(g.max_spanned_sum(s).unwrap() <= sigma_rd(a, r, d, s).unwrap());
    }
}

fn arb_instance() -> impl Strategy<Value = (usize, usize, u64)> {
    (3usize..=6)
        .prop_flat_map(|n| (Just(n), 2usize..=n))
        .prop_flat_map(|(n, s)| (Just(n), Just(s), 0u64..=14))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn search_results_are_certified_enclosures((n, s, q) in arb_instance()) {
        let cfg = SearchConfig {
            node_budget: Some(300),
            ..SearchConfig::default()
        };
        let r = exact_ex_pi(n, s, q, &cfg).unwrap();
        prop_assert!(r.lower <= r.upper);
        prop_assert!(r.upper <= product_upper_bound(n, s, q).unwrap().product_cap);
        prop_assert_eq!(r.witness.n(), n);
        prop_assert!(certify_witness(&r.witness, s, q));
        prop_assert_eq!(r.witness.product(), r.lower.clone());
        if r.status == SearchStatus::Closed {
            prop_assert_eq!(r.lower.clone(), r.upper);
        }
        let pairs_per_set = (s * (s - 1) / 2) as u64;
        if q >= pairs_per_set {
            prop_assert!(r.lower >= BigNat::from(1u64));
        }
    }

    #[test]
    fn solver_is_deterministic_across_widths(
        (n, s, q) in (4usize..=6)
            .prop_flat_map(|n| (Just(n), 3usize..=n))
            .prop_flat_map(|(n, s)| {
                let base = (s * (s - 1) / 2) as u64;
                (Just(n), Just(s), base..=base + 8)
            }),
    ) {
        let narrow = SearchConfig {
            node_budget: Some(100),
            parallel_width: 1,
            ..SearchConfig::default()
        };
        let wide = SearchConfig {
            parallel_width: 4,
            ..narrow.clone()
        };
        let mut a = exact_ex_pi(n, s, q, &narrow).unwrap();
        let mut b = exact_ex_pi(n, s, q, &wide).unwrap();
        a.stats.wall_time_ms = 0;
        b.stats.wall_time_ms = 0;
        prop_assert_eq!(a, b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 10, ..ProptestConfig::default() })]

    #[test]
    fn cache_roundtrip_returns_the_stored_result(
        (n, s, q) in (3usize..=5)
            .prop_flat_map(|n| (Just(n), 2usize..=n))
            .prop_flat_map(|(n, s)| (Just(n), Just(s), 0u64..=10)),
    ) {
        let cfg = SearchConfig {
            node_budget: Some(50),
            ..SearchConfig::default()
        };
        let result = exact_ex_pi(n, s, q, &cfg).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let key = CacheKey::new(n, s, q, &cfg);
        search_cache_store(dir.path(), &key, &result).unwrap();
        prop_assert_eq!(search_cache_lookup(dir.path(), &key), Some(result));
    }
}
