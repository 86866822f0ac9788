//! Exact maximization of the pair-multiplicity product over all (s,q)-graphs
//! on n labeled vertices, by depth-first branch and bound.
//!
//! Determinism contract: identical (n, s, q, config) gives an identical
//! result — including the witness — regardless of parallel width. To get
//! that, the top-level subtrees (one per value of the first pair) are solved
//! fully independently: each starts from the same seeded incumbent, shares
//! nothing while running, and the partial results are reduced in a fixed
//! order. A wall-clock budget is the one escape hatch: where the clock cuts
//! off work is inherently timing-dependent, so only node-budgeted and
//! unbudgeted runs are bit-reproducible.

mod cache;
mod engine;
mod oracle;

pub use cache::{search_cache_lookup, search_cache_store, CacheKey};
pub use oracle::exhaustive_ex_pi;

use crate::bignat::{serde_decimal, BigNat};
use crate::bounds::averaging_edge_bound;
use crate::constructions::{
    build_construction, cycle_construction, pi_rd_with_witness, sigma_rd, TuranTemplate,
};
use crate::error::{Error, Result};
use crate::graph::{Multigraph, SQConstraint};
use crate::util::choose2;
use engine::{Arith, Engine, EngineStats, Geometry, SubOutcome};
use serde::{Deserialize, Serialize};
use std::time::{Duration, Instant};

/// Knobs for [`exact_ex_pi`]. `Default` gives the unrestricted exact search:
/// full weight range, no budgets, one thread, automatic seeding.
#[derive(Clone, Debug)]
pub struct SearchConfig {
    /// Minimum weight per pair (part of the problem definition when raised).
    pub weight_floor: u64,
    /// Maximum weight per pair; `None` means `q`, which never cuts anything.
    pub weight_ceiling: Option<u64>,
    /// Node-expansion allowance per top-level subtree; `Some(0)` evaluates
    /// only the root relaxation.
    pub node_budget: Option<u64>,
    /// Wall-clock allowance for the whole call.
    pub time_budget: Option<Duration>,
    /// Worker threads for top-level subtrees.
    pub parallel_width: usize,
    /// Extra incumbent seeds, tried after the automatic ones.
    pub seeds: Vec<TuranTemplate>,
    /// Scan the construction family (and the six-vertex cycle overlay) for a
    /// starting incumbent.
    pub auto_seed: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            weight_floor: 0,
            weight_ceiling: None,
            node_budget: None,
            time_budget: None,
            parallel_width: 1,
            seeds: Vec::new(),
            auto_seed: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SearchStatus {
    #[serde(rename = "closed")]
    Closed,
    #[serde(rename = "budget-exhausted")]
    BudgetExhausted,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub nodes_expanded: u64,
    pub prunes_bound: u64,
    pub prunes_infeasible: u64,
    pub prunes_symmetry: u64,
    pub wall_time_ms: u64,
}

mod witness_text {
    use super::Multigraph;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(g: &Multigraph, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&g.to_edge_list())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Multigraph, D::Error> {
        let text = String::deserialize(d)?;
        Multigraph::parse_edge_list(&text).map_err(de::Error::custom)
    }
}

/// Outcome of a search: an exact optimum (`status == Closed`, `lower ==
/// upper`) or a certified enclosure, with the best witness found.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchResult {
    #[serde(with = "serde_decimal")]
    pub lower: BigNat,
    #[serde(with = "serde_decimal")]
    pub upper: BigNat,
    pub status: SearchStatus,
    #[serde(with = "witness_text")]
    pub witness: Multigraph,
    pub stats: SearchStats,
}

/// Re-check that `g` satisfies every s-set cap. Used before trusting any
/// imported or cached witness.
pub fn certify_witness(g: &Multigraph, s: usize, q: u64) -> bool {
    match SQConstraint::new(s, q) {
        Ok(c) => g.is_sq_graph(&c),
        Err(_) => false,
    }
}

fn graph_in_space(g: &Multigraph, floor: u64, ceiling: u64) -> bool {
    g.weights().iter().all(|&w| w >= floor && w <= ceiling)
}

/// Best starting incumbent: the all-floor baseline, the best admissible
/// construction-family member (admissible because its s-vertex edge-sum
/// maximum is at most q, and every s-subset of a family member induces a
/// family member on s vertices), the six-vertex cycle overlay where it
/// applies, then any user seeds. First maximum wins, so the choice is
/// deterministic.
fn build_seeds(
    n: usize,
    s: usize,
    q: u64,
    floor: u64,
    ceiling: u64,
    cfg: &SearchConfig,
) -> Result<(BigNat, Multigraph)> {
    let mut best_graph = Multigraph::complete(n, floor);
    let mut best_val = best_graph.product();
    let consider = |g: Multigraph, floor: u64, ceiling: u64, best_val: &mut BigNat, best_graph: &mut Multigraph| {
        if graph_in_space(&g, floor, ceiling) && certify_witness(&g, s, q) {
            let v = g.product();
            if v > *best_val {
                *best_val = v;
                *best_graph = g;
            }
        }
    };
    if cfg.auto_seed {
        // admissible means the family's s-vertex edge-sum maximum fits under
        // q; any member with r >= 2 realizes an all-a s-set, so nothing past
        // a = q / C(s,2) qualifies. For fixed (a, r), both that maximum and
        // the product maximum only drop as d grows, so the smallest
        // admissible d is the one candidate worth building. For fixed (r, d)
        // the product grows with a, so when q is enormous a bounded top band
        // of a values keeps seeding cheap without affecting correctness — a
        // weaker seed only slows the search.
        let a_max = q / choose2(s) as u64;
        let a_lo = a_max.saturating_sub(4095).max(1);
        for a in a_lo..=a_max {
            for r in 1..=n {
                let (mut lo, mut hi) = (0u64, a - 1);
                if sigma_rd(a, r, hi, s)? > q {
                    continue;
                }
                while lo < hi {
                    let mid = lo + (hi - lo) / 2;
                    if sigma_rd(a, r, mid, s)? <= q {
                        hi = mid;
                    } else {
                        lo = mid + 1;
                    }
                }
                let (_, t) = pi_rd_with_witness(a, r, lo, n)?;
                consider(build_construction(&t)?, floor, ceiling, &mut best_val, &mut best_graph);
            }
        }
        if n == 6 && s == 5 && q >= 14 && (q - 4).is_multiple_of(10) {
            let g = cycle_construction((q - 4) / 10, 6)?;
            consider(g, floor, ceiling, &mut best_val, &mut best_graph);
        }
    }
    for t in &cfg.seeds {
        t.validate()?;
        if t.n() != n {
            log::warn!("seed template covers {} vertices, need {n}; skipped", t.n());
            continue;
        }
        let g = build_construction(t)?;
        if !certify_witness(&g, s, q) {
            log::warn!("seed template {t:?} violates the (s,q) caps; skipped");
            continue;
        }
        consider(g, floor, ceiling, &mut best_val, &mut best_graph);
    }
    Ok((best_val, best_graph))
}

struct Reduced {
    lower: BigNat,
    upper: BigNat,
    status: SearchStatus,
    witness: Multigraph,
    stats: SearchStats,
}

/// Solve all top-level subtrees independently and reduce deterministically:
/// max of lowers, max of outstanding bounds as the upper, lexicographically
/// least witness among those attaining the maximum.
#[allow(clippy::too_many_arguments)]
fn run_search<N: Arith>(
    geom: &Geometry,
    q: u64,
    floor: u64,
    ceiling: u64,
    edge_cap: u64,
    seed_val: &BigNat,
    seed_graph: &Multigraph,
    cfg: &SearchConfig,
    deadline: Option<Instant>,
) -> Reduced {
    let seed_n = N::from_bignat(seed_val);
    let node_budget = cfg.node_budget.unwrap_or(u64::MAX);

    // enumerate first-pair subproblems with their relaxation bounds
    let mut proto: Engine<N> = Engine::new(
        geom,
        q,
        floor,
        ceiling,
        edge_cap,
        seed_n.clone(),
        u64::MAX,
        None,
    );
    let mut root_stats = EngineStats::default();
    let strict0 = proto
        .strict_cap(0)
        .expect("feasibility was established before searching");
    let mut subs: Vec<(u64, N)> = Vec::new();
    for v0 in (floor..=strict0).rev() {
        proto.assign(0, v0);
        if proto.deg_check_fails(0) {
            root_stats.prunes_symmetry += 1;
        } else {
            match proto.child_bound(0, &N::from_u64(v0)) {
                None => root_stats.prunes_infeasible += 1,
                Some(cb) => {
                    if cb <= seed_n {
                        root_stats.prunes_bound += 1;
                    } else {
                        subs.push((v0, cb));
                    }
                }
            }
        }
        proto.undo(0, v0);
    }
    // attack the largest bounds first: they are the ones that keep the
    // reported upper high if the budget runs out
    subs.sort_by(|x, y| y.1.cmp(&x.1).then(y.0.cmp(&x.0)));

    let solve = |&(v0, _): &(u64, N)| -> SubOutcome<N> {
        let mut eng: Engine<N> = Engine::new(
            geom,
            q,
            floor,
            ceiling,
            edge_cap,
            seed_n.clone(),
            node_budget,
            deadline,
        );
        eng.solve_pinned(v0)
    };
    let outcomes: Vec<SubOutcome<N>> = if cfg.parallel_width > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.parallel_width)
            .build()
            .expect("worker pool");
        pool.install(|| {
            use rayon::prelude::*;
            subs.par_iter().map(solve).collect()
        })
    } else {
        subs.iter().map(solve).collect()
    };

    let mut lower_n = seed_n.clone();
    for o in &outcomes {
        if let Some((v, _)) = &o.improved {
            if *v > lower_n {
                lower_n = v.clone();
            }
        }
    }
    let witness = if lower_n == seed_n {
        seed_graph.clone()
    } else {
        let w = outcomes
            .iter()
            .filter_map(|o| o.improved.as_ref())
            .filter(|(v, _)| *v == lower_n)
            .map(|(_, w)| w)
            .min()
            .expect("an improved value implies an improved witness");
        let mut g = Multigraph::new(geom.n);
        g.weights_mut().copy_from_slice(w);
        g
    };
    let mut outstanding: Option<N> = None;
    for o in &outcomes {
        if let Some(out) = &o.outstanding {
            outstanding = Some(match outstanding {
                None => out.clone(),
                Some(cur) => cur.max(out.clone()),
            });
        }
    }
    let (upper_n, status) = match outstanding {
        None => (lower_n.clone(), SearchStatus::Closed),
        Some(out) => (out.max(lower_n.clone()), SearchStatus::BudgetExhausted),
    };
    let mut agg = root_stats;
    for o in &outcomes {
        agg.absorb(&o.stats);
    }
    Reduced {
        lower: lower_n.to_bignat(),
        upper: upper_n.to_bignat(),
        status,
        witness,
        stats: SearchStats {
            nodes_expanded: agg.nodes,
            prunes_bound: agg.prunes_bound,
            prunes_infeasible: agg.prunes_infeasible,
            prunes_symmetry: agg.prunes_symmetry,
            wall_time_ms: 0,
        },
    }
}

/// Compute ex_Π(n, s, q): the maximum pair-multiplicity product over all
/// graphs on n vertices in which every s vertices span total multiplicity at
/// most q. Returns either the exact optimum or a certified enclosure when a
/// budget interrupts the run.
pub fn exact_ex_pi(n: usize, s: usize, q: u64, cfg: &SearchConfig) -> Result<SearchResult> {
    let start = Instant::now();
    if s < 2 {
        return Err(Error::param("s", format!("need s >= 2, got {s}")));
    }
    if n < s {
        return Err(Error::Unbounded { n, s });
    }
    let ceiling = cfg.weight_ceiling.unwrap_or(q);
    if cfg.weight_floor > ceiling {
        return Err(Error::param(
            "weight_floor",
            format!("floor {} exceeds ceiling {ceiling}", cfg.weight_floor),
        ));
    }
    let set_size = choose2(s) as u64;
    if cfg
        .weight_floor
        .checked_mul(set_size)
        .is_none_or(|v| v > q)
    {
        return Err(Error::param(
            "weight_floor",
            format!(
                "no feasible assignment: floor {} forces s-set sums past q = {q}",
                cfg.weight_floor
            ),
        ));
    }
    let m = choose2(n);
    let edge_cap = {
        let avg = averaging_edge_bound(n, s, q)?;
        let ceil_total = (ceiling as u128 * m as u128).min(u64::MAX as u128) as u64;
        avg.min(ceil_total)
    };
    let (seed_val, seed_graph) = build_seeds(n, s, q, cfg.weight_floor, ceiling, cfg)?;

    let geom = Geometry::new(n, s);
    let mut root_caps = vec![ceiling.min(q); m];
    let root_bound: BigNat = engine::waterfill(&mut root_caps, edge_cap);
    debug_assert!(seed_val <= root_bound);
    if root_bound == seed_val {
        return Ok(SearchResult {
            lower: seed_val.clone(),
            upper: seed_val,
            status: SearchStatus::Closed,
            witness: seed_graph,
            stats: SearchStats {
                wall_time_ms: start.elapsed().as_millis() as u64,
                ..SearchStats::default()
            },
        });
    }

    let deadline = cfg.time_budget.map(|d| start + d);
    let mut red = if root_bound.bits() <= 127 {
        run_search::<u128>(
            &geom,
            q,
            cfg.weight_floor,
            ceiling,
            edge_cap,
            &seed_val,
            &seed_graph,
            cfg,
            deadline,
        )
    } else {
        run_search::<BigNat>(
            &geom,
            q,
            cfg.weight_floor,
            ceiling,
            edge_cap,
            &seed_val,
            &seed_graph,
            cfg,
            deadline,
        )
    };
    red.stats.wall_time_ms = start.elapsed().as_millis() as u64;
    debug_assert!(certify_witness(&red.witness, s, q));
    debug_assert_eq!(red.witness.product(), red.lower);
    Ok(SearchResult {
        lower: red.lower,
        upper: red.upper,
        status: red.status,
        witness: red.witness,
        stats: red.stats,
    })
}
