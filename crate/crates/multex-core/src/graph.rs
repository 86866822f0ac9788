//! Weighted complete graphs (equivalently multigraphs on `n` vertices) and
//! the `(s, q)` constraint they are tested against.
//!
//! A multigraph here is a total weight function on vertex pairs: `w(i,j) >= 0`
//! is the edge multiplicity. The objective everywhere in this crate is the
//! product of all `C(n,2)` multiplicities, so a single zero pair kills a graph.

use crate::bignat::BigNat;
use crate::error::{Error, Result};
use crate::util::{choose2, for_each_subset, pair_from_index, pair_index};
use serde::{Deserialize, Serialize};

/// The side condition defining the family: every `s` vertices span edge sum
/// at most `q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SQConstraint {
    pub s: usize,
    pub q: u64,
}

impl SQConstraint {
    pub fn new(s: usize, q: u64) -> Result<Self> {
        if s < 2 {
            return Err(Error::param("s", format!("need s >= 2, got {s}")));
        }
        Ok(SQConstraint { s, q })
    }
}

/// Dense upper-triangular multiplicity table on vertices `0..n`.
///
/// Pairs are indexed in lexicographic order of `(i, j)` with `i < j`; the
/// derived `Ord` therefore orders graphs lexicographically by that edge
/// sequence, which is exactly the tie-break rule used when a search reduces
/// several optimal witnesses to one.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Multigraph {
    n: usize,
    weights: Vec<u64>,
}

impl Multigraph {
    /// The empty multigraph: all multiplicities zero.
    pub fn new(n: usize) -> Self {
        Multigraph {
            n,
            weights: vec![0; choose2(n)],
        }
    }

    /// Every pair gets multiplicity `w`.
    pub fn complete(n: usize, w: u64) -> Self {
        Multigraph {
            n,
            weights: vec![w; choose2(n)],
        }
    }

    /// Build from explicit `(i, j, w)` triples (0-based, any order);
    /// unlisted pairs stay zero.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize, u64)]) -> Result<Self> {
        let mut g = Multigraph::new(n);
        for &(i, j, w) in pairs {
            g.set_weight(i, j, w)?;
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pair_count(&self) -> usize {
        self.weights.len()
    }

    pub fn weight(&self, i: usize, j: usize) -> u64 {
        assert!(i < j && j < self.n, "pair ({i},{j}) out of range for n={}", self.n);
        self.weights[pair_index(i, j, self.n)]
    }

    pub fn set_weight(&mut self, i: usize, j: usize, w: u64) -> Result<()> {
        if i >= j || j >= self.n {
            let v = if j >= self.n { j } else { i };
            return Err(Error::VertexOutOfRange { vertex: v, n: self.n });
        }
        self.weights[pair_index(i, j, self.n)] = w;
        Ok(())
    }

    /// Multiplicities in lexicographic pair order.
    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    /// Direct write access in lexicographic pair order (for solvers).
    pub fn weights_mut(&mut self) -> &mut [u64] {
        &mut self.weights
    }

    /// Iterate `(i, j, w)` over all pairs in lexicographic order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        let n = self.n;
        self.weights
            .iter()
            .enumerate()
            .map(move |(e, &w)| {
                let (i, j) = pair_from_index(e, n);
                (i, j, w)
            })
    }

    /// Total edge multiplicity.
    pub fn edge_sum(&self) -> u64 {
        self.weights.iter().sum()
    }

    /// Product of all `C(n,2)` multiplicities; the empty product (n < 2) is 1.
    pub fn product(&self) -> BigNat {
        let mut p = BigNat::from(1u32);
        for &w in &self.weights {
            if w == 0 {
                return BigNat::from(0u32);
            }
            p *= w;
        }
        p
    }

    /// Sum of multiplicities over pairs inside the vertex set `xs`
    /// (duplicates in the slice are ignored).
    pub fn spanned_sum(&self, xs: &[usize]) -> Result<u64> {
        let mut set = xs.to_vec();
        for &v in &set {
            if v >= self.n {
                return Err(Error::VertexOutOfRange { vertex: v, n: self.n });
            }
        }
        set.sort_unstable();
        set.dedup();
        let mut total = 0u64;
        for (a, &i) in set.iter().enumerate() {
            for &j in &set[a + 1..] {
                total += self.weights[pair_index(i, j, self.n)];
            }
        }
        Ok(total)
    }

    /// Whether every `s`-set spans sum at most `q`. Vacuously true when
    /// `n < s`: there is no `s`-set to violate the bound.
    pub fn is_sq_graph(&self, c: &SQConstraint) -> bool {
        if self.n < c.s {
            return true;
        }
        let mut ok = true;
        for_each_subset(self.n, c.s, |xs| {
            if ok {
                let mut total = 0u64;
                for (a, &i) in xs.iter().enumerate() {
                    for &j in &xs[a + 1..] {
                        total += self.weights[pair_index(i, j, self.n)];
                    }
                }
                if total > c.q {
                    ok = false;
                }
            }
        });
        ok
    }

    /// Largest sum spanned by any `s`-set, or `None` when `n < s`.
    pub fn max_spanned_sum(&self, s: usize) -> Option<u64> {
        if self.n < s {
            return None;
        }
        let mut best = 0u64;
        for_each_subset(self.n, s, |xs| {
            let mut total = 0u64;
            for (a, &i) in xs.iter().enumerate() {
                for &j in &xs[a + 1..] {
                    total += self.weights[pair_index(i, j, self.n)];
                }
            }
            best = best.max(total);
        });
        Some(best)
    }

    /// Relabel vertices by `perm` (vertex `v` becomes `perm[v]`).
    pub fn relabeled(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::param(
                "perm",
                format!("length {} != n = {}", perm.len(), self.n),
            ));
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            if p >= self.n {
                return Err(Error::VertexOutOfRange { vertex: p, n: self.n });
            }
            if seen[p] {
                return Err(Error::param("perm", format!("vertex {p} repeated")));
            }
            seen[p] = true;
        }
        let mut g = Multigraph::new(self.n);
        for (i, j, w) in self.pairs() {
            let (a, b) = (perm[i], perm[j]);
            let (a, b) = if a < b { (a, b) } else { (b, a) };
            g.weights[pair_index(a, b, self.n)] = w;
        }
        Ok(g)
    }

    /// Weighted degree of each vertex (sum of incident multiplicities).
    pub fn weighted_degrees(&self) -> Vec<u64> {
        let mut deg = vec![0u64; self.n];
        for (i, j, w) in self.pairs() {
            deg[i] += w;
            deg[j] += w;
        }
        deg
    }

    /// Serialize as edge-list text: first line `n`, then one `i j w` line per
    /// pair with positive multiplicity, 1-based, `i < j`, lexicographic order.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for (i, j, w) in self.pairs() {
            if w > 0 {
                out.push_str(&format!("{} {} {}\n", i + 1, j + 1, w));
            }
        }
        out
    }

    /// Parse the edge-list text format. Blank lines and `#` comments are
    /// skipped; pairs not listed get multiplicity zero; a pair listed twice
    /// is an error.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| Error::EdgeListParse("empty input".into()))?;
        let n: usize = header
            .parse()
            .map_err(|_| Error::EdgeListParse(format!("bad vertex count {header:?}")))?;
        let mut g = Multigraph::new(n);
        let mut touched = vec![false; choose2(n)];
        for line in lines {
            let mut it = line.split_whitespace();
            let (a, b, w) = match (it.next(), it.next(), it.next(), it.next()) {
                (Some(a), Some(b), Some(w), None) => (a, b, w),
                _ => return Err(Error::EdgeListParse(format!("expected `i j w`, got {line:?}"))),
            };
            let i: usize = a
                .parse()
                .map_err(|_| Error::EdgeListParse(format!("bad vertex {a:?}")))?;
            let j: usize = b
                .parse()
                .map_err(|_| Error::EdgeListParse(format!("bad vertex {b:?}")))?;
            let w: u64 = w
                .parse()
                .map_err(|_| Error::EdgeListParse(format!("bad multiplicity {w:?}")))?;
            if i == 0 || j == 0 || i > n || j > n {
                return Err(Error::EdgeListParse(format!(
                    "vertex pair ({i},{j}) out of range 1..={n}"
                )));
            }
            if i >= j {
                return Err(Error::EdgeListParse(format!(
                    "need i < j on each line, got ({i},{j})"
                )));
            }
            if w == 0 {
                return Err(Error::EdgeListParse(format!(
                    "explicit zero multiplicity on ({i},{j}); omit the line instead"
                )));
            }
            let e = pair_index(i - 1, j - 1, n);
            if touched[e] {
                return Err(Error::EdgeListParse(format!("pair ({i},{j}) listed twice")));
            }
            touched[e] = true;
            g.weights[e] = w;
        }
        Ok(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bignat::BigNat;

    /// 6-cycle at multiplicity `a+1` over a complete background at `a`.
    fn six_cycle_bump(a: u64) -> Multigraph {
        let mut g = Multigraph::complete(6, a);
        for k in 0..6 {
            let (i, j) = (k, (k + 1) % 6);
            let (i, j) = if i < j { (i, j) } else { (j, i) };
            g.set_weight(i, j, a + 1).unwrap();
        }
        g
    }

    #[test]
    fn uniform_graph_basics() {
        let g = Multigraph::complete(5, 3);
        assert_eq!(g.pair_count(), 10);
        assert_eq!(g.edge_sum(), 30);
        assert_eq!(g.product(), BigNat::from(59049u64));
        assert_eq!(g.spanned_sum(&[0, 1, 2, 3, 4]).unwrap(), 30);
        assert_eq!(g.spanned_sum(&[0, 1, 2]).unwrap(), 9);
        assert!(g.is_sq_graph(&SQConstraint::new(3, 9).unwrap()));
        assert!(!g.is_sq_graph(&SQConstraint::new(3, 8).unwrap()));
    }

    #[test]
    fn six_cycle_bump_values() {
        let g = six_cycle_bump(3);
        assert_eq!(g.edge_sum(), 51);
        assert_eq!(g.product(), BigNat::from(80_621_568u64));
        // dropping vertex 5 leaves a 4-edge path of the cycle
        assert_eq!(g.spanned_sum(&[0, 1, 2, 3, 4]).unwrap(), 34);
        assert_eq!(g.max_spanned_sum(5), Some(34));
        assert!(g.is_sq_graph(&SQConstraint::new(5, 34).unwrap()));
        assert!(!g.is_sq_graph(&SQConstraint::new(5, 33).unwrap()));
    }

    #[test]
    fn zero_pair_kills_product() {
        let mut g = Multigraph::complete(4, 2);
        g.set_weight(1, 3, 0).unwrap();
        assert_eq!(g.product(), BigNat::from(0u32));
    }

    #[test]
    fn vacuous_constraint_below_s() {
        let g = Multigraph::complete(3, 1000);
        assert!(g.is_sq_graph(&SQConstraint::new(5, 0).unwrap()));
        assert_eq!(g.max_spanned_sum(5), None);
    }

    #[test]
    fn spanned_sum_rejects_bad_vertex() {
        let g = Multigraph::complete(4, 1);
        assert!(matches!(
            g.spanned_sum(&[0, 4]),
            Err(Error::VertexOutOfRange { vertex: 4, n: 4 })
        ));
    }

    #[test]
    fn relabel_preserves_invariants() {
        let g = six_cycle_bump(4);
        let h = g.relabeled(&[2, 0, 5, 3, 1, 4]).unwrap();
        assert_eq!(g.product(), h.product());
        assert_eq!(g.edge_sum(), h.edge_sum());
        assert_eq!(g.max_spanned_sum(5), h.max_spanned_sum(5));
    }

    #[test]
    fn edge_list_roundtrip() {
        let g = six_cycle_bump(3);
        let text = g.to_edge_list();
        assert!(text.starts_with("6\n1 2 4\n"));
        let h = Multigraph::parse_edge_list(&text).unwrap();
        assert_eq!(g, h);
    }

    #[test]
    fn edge_list_parse_errors() {
        assert!(Multigraph::parse_edge_list("").is_err());
        assert!(Multigraph::parse_edge_list("3\n2 1 5\n").is_err()); // i >= j
        assert!(Multigraph::parse_edge_list("3\n1 2 0\n").is_err()); // explicit zero
        assert!(Multigraph::parse_edge_list("3\n1 2 5\n1 2 6\n").is_err()); // dup
        assert!(Multigraph::parse_edge_list("3\n1 4 2\n").is_err()); // range
        let g = Multigraph::parse_edge_list("# comment\n3\n\n1 2 7\n").unwrap();
        assert_eq!(g.weight(0, 1), 7);
        assert_eq!(g.weight(0, 2), 0);
    }
}
