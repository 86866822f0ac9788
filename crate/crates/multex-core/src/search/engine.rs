//! Branch-and-bound core, generic over the product arithmetic.
//!
//! Products along any root-to-leaf path never exceed the root relaxation
//! bound (every bound is computed from a relaxation of its parent's), so when
//! the root bound fits in `u128` the whole search runs on machine words;
//! otherwise the same code runs on heap integers. Multiplications are checked
//! so a violated width assumption panics instead of wrapping.

use crate::bignat::BigNat;
use crate::util::{choose2, for_each_subset, pair_from_index, pair_index};
use std::time::Instant;

/// Product arithmetic used inside the engine.
pub(crate) trait Arith: Clone + Ord + Send + Sync {
    fn one() -> Self;
    fn from_u64(v: u64) -> Self;
    fn from_bignat(v: &BigNat) -> Self;
    fn to_bignat(&self) -> BigNat;
    fn mul(&self, rhs: &Self) -> Self;
    fn mul_u64(&self, v: u64) -> Self;
    fn mul_pow(&self, base: u64, exp: u32) -> Self;
}

impl Arith for u128 {
    fn one() -> Self {
        1
    }
    fn from_u64(v: u64) -> Self {
        v as u128
    }
    fn from_bignat(v: &BigNat) -> Self {
        u128::try_from(v).expect("value exceeds the machine-word engine width")
    }
    fn to_bignat(&self) -> BigNat {
        BigNat::from(*self)
    }
    fn mul(&self, rhs: &Self) -> Self {
        self.checked_mul(*rhs).expect("engine width exceeded")
    }
    fn mul_u64(&self, v: u64) -> Self {
        self.checked_mul(v as u128).expect("engine width exceeded")
    }
    fn mul_pow(&self, base: u64, exp: u32) -> Self {
        let mut out = *self;
        for _ in 0..exp {
            out = out.checked_mul(base as u128).expect("engine width exceeded");
        }
        out
    }
}

impl Arith for BigNat {
    fn one() -> Self {
        BigNat::from(1u32)
    }
    fn from_u64(v: u64) -> Self {
        BigNat::from(v)
    }
    fn from_bignat(v: &BigNat) -> Self {
        v.clone()
    }
    fn to_bignat(&self) -> BigNat {
        self.clone()
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn mul_u64(&self, v: u64) -> Self {
        self * BigNat::from(v)
    }
    fn mul_pow(&self, base: u64, exp: u32) -> Self {
        self * BigNat::from(base).pow(exp)
    }
}

/// Maximum product of integer weights `w_e <= caps[e]` with `sum w_e <= budget`.
///
/// Greedy water-filling on the sorted caps is exact here: if the smallest cap
/// `c` satisfies `c * remaining <= budget`, some optimum saturates it (if the
/// budget is slack, raise that weight; if tight, a unit moved from any weight
/// above `c` to one below it never decreases the product). Once saturation
/// stops, every remaining cap exceeds the fair share, so the plain balanced
/// split `b^(r-t) (b+1)^t` is feasible and optimal for the rest.
///
/// Sorts `caps` in place.
pub(crate) fn waterfill<N: Arith>(caps: &mut [u64], budget: u64) -> N {
    if caps.is_empty() {
        return N::one();
    }
    caps.sort_unstable();
    if caps[0] == 0 {
        return N::from_u64(0);
    }
    let len = caps.len();
    let mut left = budget as u128;
    let mut prod = N::one();
    for (i, &cap) in caps.iter().enumerate() {
        let r = (len - i) as u128;
        let c = cap as u128;
        if c * r <= left {
            prod = prod.mul_u64(cap);
            left -= c;
        } else {
            let base = (left / r) as u64;
            if base == 0 {
                return N::from_u64(0);
            }
            let t = (left % r) as u32;
            return prod.mul_pow(base, r as u32 - t).mul_pow(base + 1, t);
        }
    }
    prod
}

/// The constraint geometry of an (n, s) instance: which s-sets contain which
/// pairs. Pairs are indexed lexicographically; s-sets in subset-enumeration
/// order.
pub(crate) struct Geometry {
    pub n: usize,
    pub m: usize,
    pub set_count: usize,
    /// C(s,2): number of pairs inside each s-set.
    pub set_size: u32,
    /// pair index -> ids of the s-sets containing it
    pub edge_sets: Vec<Vec<u32>>,
    /// pair index -> endpoints
    pub pairs: Vec<(usize, usize)>,
}

impl Geometry {
    pub fn new(n: usize, s: usize) -> Self {
        let m = choose2(n);
        let mut edge_sets = vec![Vec::new(); m];
        let mut set_count = 0u32;
        for_each_subset(n, s, |xs| {
            for (ai, &i) in xs.iter().enumerate() {
                for &j in &xs[ai + 1..] {
                    edge_sets[pair_index(i, j, n)].push(set_count);
                }
            }
            set_count += 1;
        });
        Geometry {
            n,
            m,
            set_count: set_count as usize,
            set_size: choose2(s) as u32,
            edge_sets,
            pairs: (0..m).map(|e| pair_from_index(e, n)).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub(crate) struct EngineStats {
    pub nodes: u64,
    pub prunes_bound: u64,
    pub prunes_infeasible: u64,
    pub prunes_symmetry: u64,
}

impl EngineStats {
    pub fn absorb(&mut self, other: &EngineStats) {
        self.nodes += other.nodes;
        self.prunes_bound += other.prunes_bound;
        self.prunes_infeasible += other.prunes_infeasible;
        self.prunes_symmetry += other.prunes_symmetry;
    }
}

/// Result of one fully independent subtree solve.
pub(crate) struct SubOutcome<N> {
    /// Best assignment strictly beating the shared seed, if any.
    pub improved: Option<(N, Vec<u64>)>,
    /// Cover bound for the unexplored remainder when the budget ran out.
    pub outstanding: Option<N>,
    pub stats: EngineStats,
}

pub(crate) struct Engine<'g, N: Arith> {
    geom: &'g Geometry,
    q: u64,
    floor: u64,
    ceil_eff: u64, // min(ceiling, q)
    edge_cap: u64,
    committed: Vec<u64>, // per s-set, sum of assigned weights inside it
    remaining: Vec<u32>, // per s-set, count of unassigned pairs inside it
    total: u64,
    w: Vec<u64>,
    wdeg: Vec<u64>,
    /// pair index -> vertices t whose degree completes there and must obey
    /// wdeg[t-1] >= wdeg[t]
    deg_checks: Vec<Vec<usize>>,
    best: N,
    best_w: Vec<u64>,
    improved: bool,
    pub stats: EngineStats,
    node_budget: u64,
    deadline: Option<Instant>,
    caps_buf: Vec<Vec<u64>>,
    kids_buf: Vec<Vec<(u64, N)>>,
    smax_buf: Vec<Vec<N>>,
}

impl<'g, N: Arith> Engine<'g, N> {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        geom: &'g Geometry,
        q: u64,
        floor: u64,
        ceiling: u64,
        edge_cap: u64,
        seed: N,
        node_budget: u64,
        deadline: Option<Instant>,
    ) -> Self {
        let n = geom.n;
        let m = geom.m;
        // degree order is constrained on the first min(n,4) vertices; vertex
        // t's degree is final once pair (t, n-1) — or the last pair overall
        // for t = n-1 — has been assigned
        let mut deg_checks = vec![Vec::new(); m];
        let levels = n.min(4);
        for t in 1..levels {
            let e = if t < n - 1 {
                pair_index(t, n - 1, n)
            } else {
                pair_index(n - 2, n - 1, n)
            };
            deg_checks[e].push(t);
        }
        Engine {
            geom,
            q,
            floor,
            ceil_eff: ceiling.min(q),
            edge_cap,
            committed: vec![0; geom.set_count],
            remaining: vec![geom.set_size; geom.set_count],
            total: 0,
            w: vec![0; m],
            wdeg: vec![0; n],
            deg_checks,
            best: seed,
            best_w: vec![0; m],
            improved: false,
            stats: EngineStats::default(),
            node_budget,
            deadline,
            caps_buf: vec![Vec::with_capacity(m); m + 1],
            kids_buf: vec![Vec::new(); m + 1],
            smax_buf: vec![Vec::new(); m + 1],
        }
    }

    pub fn assign(&mut self, e: usize, v: u64) {
        self.w[e] = v;
        self.total += v;
        for &k in &self.geom.edge_sets[e] {
            self.committed[k as usize] += v;
            self.remaining[k as usize] -= 1;
        }
        let (i, j) = self.geom.pairs[e];
        self.wdeg[i] += v;
        self.wdeg[j] += v;
    }

    pub fn undo(&mut self, e: usize, v: u64) {
        self.w[e] = 0;
        self.total -= v;
        for &k in &self.geom.edge_sets[e] {
            self.committed[k as usize] -= v;
            self.remaining[k as usize] += 1;
        }
        let (i, j) = self.geom.pairs[e];
        self.wdeg[i] -= v;
        self.wdeg[j] -= v;
    }

    /// True iff assigning pair `e` just violated the canonical degree order.
    pub fn deg_check_fails(&self, e: usize) -> bool {
        self.deg_checks[e]
            .iter()
            .any(|&t| self.wdeg[t - 1] < self.wdeg[t])
    }

    /// Largest weight assignable to pair `e` (the next unassigned one) that
    /// leaves every constraint completable with weights >= floor.
    /// None when even `floor` does not fit.
    pub fn strict_cap(&self, e: usize) -> Option<u64> {
        let mut c = self.ceil_eff as i128;
        let after = (self.geom.m - e - 1) as i128;
        let g = self.edge_cap as i128 - self.total as i128 - self.floor as i128 * after;
        c = c.min(g);
        for &k in &self.geom.edge_sets[e] {
            let k = k as usize;
            let others = self.remaining[k] as i128 - 1;
            c = c.min(self.q as i128 - self.committed[k] as i128 - self.floor as i128 * others);
        }
        if c < self.floor as i128 {
            None
        } else {
            Some(c as u64)
        }
    }

    /// Relaxation bound for the subtree under the current assignment, where
    /// pair `e` was just assigned and `base` is the committed product
    /// including it. None when a remaining pair cannot reach `floor`.
    pub fn child_bound(&mut self, e: usize, base: &N) -> Option<N> {
        let mut caps = std::mem::take(&mut self.caps_buf[e]);
        caps.clear();
        for f in e + 1..self.geom.m {
            let mut c = self.ceil_eff;
            for &k in &self.geom.edge_sets[f] {
                c = c.min(self.q - self.committed[k as usize]);
            }
            if c < self.floor {
                self.caps_buf[e] = caps;
                return None;
            }
            caps.push(c);
        }
        debug_assert!(self.total <= self.edge_cap);
        let bound: N = waterfill(&mut caps, self.edge_cap - self.total);
        self.caps_buf[e] = caps;
        Some(base.mul(&bound))
    }

    fn exhausted(&self) -> bool {
        self.stats.nodes >= self.node_budget
            || self.deadline.is_some_and(|d| Instant::now() >= d)
    }

    /// Solve the subtree with pair 0 pinned to `v0`. Fully independent of any
    /// other subtree: prunes only against the shared seed value and whatever
    /// this subtree itself finds.
    pub fn solve_pinned(&mut self, v0: u64) -> SubOutcome<N> {
        self.assign(0, v0);
        let outstanding = if self.deg_check_fails(0) {
            self.stats.prunes_symmetry += 1;
            None
        } else {
            self.dfs(1, N::from_u64(v0))
        };
        self.undo(0, v0);
        SubOutcome {
            improved: if self.improved {
                Some((self.best.clone(), self.best_w.clone()))
            } else {
                None
            },
            outstanding,
            stats: self.stats,
        }
    }

    /// Depth-first expansion of the node whose pairs `0..depth` are assigned
    /// with committed product `committed`. Returns a bound covering every
    /// completion this call did NOT fully resolve (None = subtree resolved:
    /// nothing in it beats `self.best` as of return).
    fn dfs(&mut self, depth: usize, committed: N) -> Option<N> {
        self.stats.nodes += 1;
        let m = self.geom.m;
        if depth == m {
            if committed > self.best {
                self.best = committed;
                self.best_w.copy_from_slice(&self.w);
                self.improved = true;
            }
            return None;
        }
        let e = depth;
        let Some(strict) = self.strict_cap(e) else {
            self.stats.prunes_infeasible += 1;
            return None;
        };

        if depth == m - 1 {
            // last pair: enumerate directly, values descending so the first
            // non-improving value ends the scan
            for v in (self.floor..=strict).rev() {
                let val = committed.mul_u64(v);
                if val <= self.best {
                    break;
                }
                self.assign(e, v);
                if self.deg_check_fails(e) {
                    self.stats.prunes_symmetry += 1;
                } else {
                    self.best = val;
                    self.best_w.copy_from_slice(&self.w);
                    self.improved = true;
                }
                self.undo(e, v);
            }
            return None;
        }

        // generate children with their relaxation bounds, values descending
        let mut kids = std::mem::take(&mut self.kids_buf[depth]);
        kids.clear();
        for v in (self.floor..=strict).rev() {
            self.assign(e, v);
            if self.deg_check_fails(e) {
                self.stats.prunes_symmetry += 1;
            } else {
                match self.child_bound(e, &committed.mul_u64(v)) {
                    None => self.stats.prunes_infeasible += 1,
                    Some(cb) => kids.push((v, cb)),
                }
            }
            self.undo(e, v);
        }
        // suffix maxima of the child bounds make aborts cheap to cover
        let mut smax = std::mem::take(&mut self.smax_buf[depth]);
        smax.clear();
        smax.resize(kids.len(), N::one());
        for i in (0..kids.len()).rev() {
            smax[i] = if i + 1 < kids.len() {
                kids[i].1.clone().max(smax[i + 1].clone())
            } else {
                kids[i].1.clone()
            };
        }

        let mut result = None;
        for i in 0..kids.len() {
            if self.exhausted() {
                result = Some(smax[i].clone());
                break;
            }
            let (v, ref cb) = kids[i];
            if *cb <= self.best {
                self.stats.prunes_bound += 1;
                continue;
            }
            self.assign(e, v);
            let child_out = self.dfs(depth + 1, committed.mul_u64(v));
            self.undo(e, v);
            if let Some(out) = child_out {
                result = Some(if i + 1 < kids.len() {
                    out.max(smax[i + 1].clone())
                } else {
                    out
                });
                break;
            }
        }
        self.kids_buf[depth] = kids;
        self.smax_buf[depth] = smax;
        result
    }
}
