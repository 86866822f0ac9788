//! Reference maximizer by plain enumeration, for cross-checking the
//! branch-and-bound path on small instances. Shares nothing with the engine
//! beyond the constraint geometry: no relaxation bounds, no symmetry
//! breaking, no seeding.

use super::engine::Geometry;
use crate::bignat::BigNat;
use crate::error::{Error, Result};
use crate::graph::Multigraph;
use crate::util::choose2;

/// Maximize the pair-multiplicity product over every (s,q)-graph on n
/// vertices by direct enumeration of all weight assignments that meet the
/// s-set caps. The witness is the lexicographically least maximizer.
pub fn exhaustive_ex_pi(n: usize, s: usize, q: u64) -> Result<(BigNat, Multigraph)> {
    if s < 2 {
        return Err(Error::param("s", format!("need s >= 2, got {s}")));
    }
    if n < s {
        return Err(Error::Unbounded { n, s });
    }
    let m = choose2(n);
    if s == 2 {
        // the s-sets are exactly the pairs, so each weight independently
        // tops out at q
        return Ok((
            BigNat::from(q).pow(m as u32),
            Multigraph::complete(n, q),
        ));
    }
    // products are accumulated in u128; q^m bounds every candidate
    if BigNat::from(q).pow(m as u32).bits() > 127 {
        return Err(Error::param(
            "q",
            format!("exhaustive check needs q^C(n,2) below 2^127, got q = {q}, n = {n}"),
        ));
    }
    let geom = Geometry::new(n, s);
    let mut st = State {
        geom: &geom,
        q,
        committed: vec![0; geom.set_count],
        w: vec![0; m],
        best: 0,
        best_w: vec![0; m],
    };
    st.dfs(0, 1);
    let mut witness = Multigraph::new(n);
    witness.weights_mut().copy_from_slice(&st.best_w);
    Ok((BigNat::from(st.best), witness))
}

struct State<'g> {
    geom: &'g Geometry,
    q: u64,
    committed: Vec<u64>,
    w: Vec<u64>,
    best: u128,
    best_w: Vec<u64>,
}

impl State<'_> {
    fn dfs(&mut self, e: usize, prod: u128) {
        if e == self.geom.m {
            if prod > self.best {
                self.best = prod;
                self.best_w.copy_from_slice(&self.w);
            }
            return;
        }
        let mut cap = self.q;
        for &k in &self.geom.edge_sets[e] {
            cap = cap.min(self.q - self.committed[k as usize]);
        }
        // a zero weight zeroes the whole product, which can never beat the
        // all-zero baseline recorded at the start, so enumerate from 1;
        // values ascend so the first maximizer found is the lexicographically
        // least
        for v in 1..=cap {
            self.w[e] = v;
            for &k in &self.geom.edge_sets[e] {
                self.committed[k as usize] += v;
            }
            self.dfs(e + 1, prod * v as u128);
            for &k in &self.geom.edge_sets[e] {
                self.committed[k as usize] -= v;
            }
            self.w[e] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bignat::pow_u64;

    #[test]
    fn pair_caps_alone_give_power_of_q() {
        let (v, g) = exhaustive_ex_pi(4, 2, 5).unwrap();
        assert_eq!(v, pow_u64(5, 6));
        assert_eq!(g, Multigraph::complete(4, 5));
    }

    #[test]
    fn triangle_instances() {
        // n = s = 3: one constraint, three pairs, sum <= q
        let (v, _) = exhaustive_ex_pi(3, 3, 6).unwrap();
        assert_eq!(v, BigNat::from(8u32)); // 2*2*2
        let (v, g) = exhaustive_ex_pi(3, 3, 7).unwrap();
        assert_eq!(v, BigNat::from(12u32)); // 2*2*3 up to order
        assert_eq!(g.weights(), &[2, 2, 3]); // lexicographically least maximizer
        let (v, w) = exhaustive_ex_pi(3, 3, 2).unwrap();
        assert_eq!(v, BigNat::from(0u32));
        assert_eq!(w.weights(), &[0, 0, 0]);
    }

    #[test]
    fn four_vertices_overlapping_triples() {
        // n=4, s=3, q=3: every triangle sums to <= 3; uniform 1 attains 1,
        // and no positive assignment can push any pair to 2 without a
        // triangle hitting 4 unless another pair drops to 0
        let (v, g) = exhaustive_ex_pi(4, 3, 3).unwrap();
        assert_eq!(v, BigNat::from(1u32));
        assert_eq!(g, Multigraph::complete(4, 1));
    }

    #[test]
    fn rejects_bad_params() {
        assert!(exhaustive_ex_pi(3, 4, 5).is_err());
        assert!(exhaustive_ex_pi(3, 1, 5).is_err());
        assert!(exhaustive_ex_pi(6, 3, u64::MAX).is_err()); // width guard
    }
}
