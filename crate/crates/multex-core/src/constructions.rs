//! The layered construction family and its exact optimizers.
//!
//! A template splits the vertices into parts `V0, ..., V_{r-1}`; pairs inside
//! `V0` get multiplicity `a - d`, pairs inside any other part get `a`, and
//! pairs across parts get `a + 1`. `sigma_rd` / `pi_rd` maximize edge sum and
//! product over all part-size choices by enumeration; `optimal_v0_size`
//! locates the best `|V0|` for the two-part deficiency-2 family with exact
//! integer comparisons (floats never decide anything here).

use crate::bignat::{pow_u64, serde_decimal, BigNat};
use crate::error::{Error, Result};
use crate::graph::Multigraph;
use crate::util::choose2;
use serde::{Deserialize, Serialize};

/// Parameters of one member of the construction family.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TuranTemplate {
    pub a: u64,
    pub r: usize,
    pub d: u64,
    pub sizes: Vec<usize>,
}

impl TuranTemplate {
    pub fn new(a: u64, d: u64, sizes: Vec<usize>) -> Result<Self> {
        let t = TuranTemplate {
            a,
            r: sizes.len(),
            d,
            sizes,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        if self.a < 1 {
            return Err(Error::param("a", format!("need a >= 1, got {}", self.a)));
        }
        if self.r < 1 {
            return Err(Error::param("r", "need at least one part"));
        }
        if self.r != self.sizes.len() {
            return Err(Error::param(
                "sizes",
                format!("r = {} but {} sizes given", self.r, self.sizes.len()),
            ));
        }
        if self.d > self.a - 1 {
            return Err(Error::param(
                "d",
                format!("need d in [0, a-1] = [0, {}], got {}", self.a - 1, self.d),
            ));
        }
        if self.n() < 1 {
            return Err(Error::param("sizes", "part sizes must sum to n >= 1"));
        }
        Ok(())
    }

    /// Total vertex count.
    pub fn n(&self) -> usize {
        self.sizes.iter().sum()
    }
}

/// Materialize a template as a multigraph, parts laid out consecutively
/// (`V0` gets the first `sizes[0]` labels, and so on).
pub fn build_construction(t: &TuranTemplate) -> Result<Multigraph> {
    t.validate()?;
    let n = t.n();
    let mut part_of = Vec::with_capacity(n);
    for (p, &sz) in t.sizes.iter().enumerate() {
        part_of.extend(std::iter::repeat_n(p, sz));
    }
    let mut g = Multigraph::new(n);
    for i in 0..n {
        for j in i + 1..n {
            let w = if part_of[i] != part_of[j] {
                t.a + 1
            } else if part_of[i] == 0 {
                t.a - t.d
            } else {
                t.a
            };
            g.set_weight(i, j, w)?;
        }
    }
    Ok(g)
}

fn check_family_params(a: u64, r: usize, d: u64, n: usize) -> Result<()> {
    if a < 1 {
        return Err(Error::param("a", format!("need a >= 1, got {a}")));
    }
    if r < 1 {
        return Err(Error::param("r", format!("need r >= 1, got {r}")));
    }
    if d > a - 1 {
        return Err(Error::param(
            "d",
            format!("need d in [0, a-1] = [0, {}], got {d}", a - 1),
        ));
    }
    if n < 1 {
        return Err(Error::param("n", format!("need n >= 1, got {n}")));
    }
    Ok(())
}

/// Edge sum and product of a template, from the part sizes alone.
fn template_stats(a: u64, d: u64, x0: usize, rest: &[usize], n: usize) -> (u64, BigNat) {
    let inner0 = choose2(x0) as u64;
    let inner: u64 = rest.iter().map(|&x| choose2(x) as u64).sum();
    let cross = choose2(n) as u64 - inner0 - inner;
    let edge_sum = (a - d) * inner0 + a * inner + (a + 1) * cross;
    let product =
        pow_u64(a - d, inner0 as u32) * pow_u64(a, inner as u32) * pow_u64(a + 1, cross as u32);
    (edge_sum, product)
}

/// Enumerate nondecreasing part-size vectors for the interchangeable parts
/// (everything except `V0`), zeros allowed.
fn for_each_rest(total: usize, parts: usize, min: usize, buf: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if parts == 0 {
        if total == 0 {
            f(buf);
        }
        return;
    }
    for x in min..=total {
        // remaining parts are all >= x, so they need at least (parts-1)*x
        if total - x < (parts - 1) * x {
            // larger x only gets worse once infeasible, but keep scanning:
            // feasibility here is total - x >= (parts-1)*x, monotone down in x
            break;
        }
        buf.push(x);
        for_each_rest(total - x, parts - 1, x, buf, f);
        buf.pop();
    }
}

/// Run `f` over every canonical part-size choice `(x0, rest)` for the family.
fn for_each_composition(r: usize, n: usize, mut f: impl FnMut(usize, &[usize])) {
    let mut buf = Vec::with_capacity(r.saturating_sub(1));
    for x0 in 0..=n {
        for_each_rest(n - x0, r - 1, 0, &mut buf, &mut |rest| f(x0, rest));
    }
}

/// Maximum edge sum over all part-size choices.
pub fn sigma_rd(a: u64, r: usize, d: u64, n: usize) -> Result<u64> {
    check_family_params(a, r, d, n)?;
    let mut best = 0u64;
    for_each_composition(r, n, |x0, rest| {
        let (e, _) = template_stats(a, d, x0, rest, n);
        best = best.max(e);
    });
    Ok(best)
}

/// Maximum product over all part-size choices, with the witness template.
/// Ties resolve to the smaller `|V0|`, then the lexicographically smaller
/// size vector, so the answer is independent of enumeration order.
pub fn pi_rd_with_witness(a: u64, r: usize, d: u64, n: usize) -> Result<(BigNat, TuranTemplate)> {
    check_family_params(a, r, d, n)?;
    let mut best: Option<(BigNat, usize, Vec<usize>)> = None;
    for_each_composition(r, n, |x0, rest| {
        let (_, p) = template_stats(a, d, x0, rest, n);
        let better = match &best {
            None => true,
            Some((bp, bx0, brest)) => {
                p > *bp || (p == *bp && (x0 < *bx0 || (x0 == *bx0 && rest < &brest[..])))
            }
        };
        if better {
            best = Some((p, x0, rest.to_vec()));
        }
    });
    let (value, x0, rest) = best.expect("composition enumeration is never empty");
    let mut sizes = vec![x0];
    sizes.extend_from_slice(&rest);
    Ok((value, TuranTemplate { a, r, d, sizes }))
}

/// Maximum product over all part-size choices.
pub fn pi_rd(a: u64, r: usize, d: u64, n: usize) -> Result<BigNat> {
    pi_rd_with_witness(a, r, d, n).map(|(v, _)| v)
}

/// The two-part deficiency-2 product profile at `|V0| = x`:
/// `(a-2)^C(x,2) * a^C(n-x,2) * (a+1)^{x(n-x)}`.
pub fn v0_profile(a: u64, n: usize, x: usize) -> BigNat {
    assert!(a >= 2, "profile needs a >= 2");
    assert!(x <= n);
    pow_u64(a - 2, choose2(x) as u32)
        * pow_u64(a, choose2(n - x) as u32)
        * pow_u64(a + 1, (x * (n - x)) as u32)
}

/// The optimal `|V0|` for the two-part deficiency-2 family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionOptimum {
    pub x_star: usize,
    #[serde(with = "serde_decimal")]
    pub value: BigNat,
    /// Set when `x_star + 1` attains the same value (resolved to the smaller x).
    pub tied: bool,
}

/// Locate the `x` maximizing `v0_profile(a, n, x)` by the exact inequality
/// test: the profile rises at step `x -> x+1` iff
/// `a^{n-x-1} (a+1)^x <= (a-2)^x (a+1)^{n-x-1}`, and the step ratio is
/// monotone in `x` (a consequence of `(a+1)^2 >= a(a-2)`), so the first `x`
/// where the step stops rising is the maximum.
pub fn optimal_v0_size(a: u64, n: usize) -> Result<PartitionOptimum> {
    if a < 3 {
        return Err(Error::param(
            "a",
            format!("need a >= 3 (deficiency 2 requires a - 2 >= 1), got {a}"),
        ));
    }
    if n < 5 {
        return Err(Error::param("n", format!("need n >= 5, got {n}")));
    }
    for x in 1..n {
        let lhs = pow_u64(a, (n - x - 1) as u32) * pow_u64(a + 1, x as u32);
        let rhs = pow_u64(a - 2, x as u32) * pow_u64(a + 1, (n - x - 1) as u32);
        if lhs >= rhs {
            return Ok(PartitionOptimum {
                x_star: x,
                value: v0_profile(a, n, x),
                tied: lhs == rhs,
            });
        }
    }
    unreachable!("step test always succeeds by x = n-1 since (a+1)^{{n-1}} > (a-2)^{{n-1}}")
}

/// `F(a) = ln(1 - 3/(a+1)) / ln(1 - 1/(a+1))` — the width of the optimal-x
/// interval in the large-n regime. Display/diagnostic only; optimality
/// decisions always go through `optimal_v0_size`.
pub fn f_ratio(a: u64) -> Result<f64> {
    if a < 3 {
        return Err(Error::param(
            "a",
            format!("need a >= 3 (F(a) undefined below), got {a}"),
        ));
    }
    let ap1 = (a + 1) as f64;
    Ok((1.0 - 3.0 / ap1).ln() / (1.0 - 1.0 / ap1).ln())
}

/// All-`a` complete graph with an `n`-cycle overlaid at multiplicity `a+1`
/// (vertex `k` joined to `k+1 mod n`). For n = 6 this is the witness that
/// beats every two-part template.
pub fn cycle_construction(a: u64, n: usize) -> Result<Multigraph> {
    if n < 3 {
        return Err(Error::param("n", format!("cycle needs n >= 3, got {n}")));
    }
    let mut g = Multigraph::complete(n, a);
    for k in 0..n {
        let (i, j) = (k, (k + 1) % n);
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        g.set_weight(i, j, a + 1)?;
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::SQConstraint;

    fn weight_census(g: &Multigraph) -> Vec<(u64, usize)> {
        let mut counts = std::collections::BTreeMap::new();
        for (_, _, w) in g.pairs() {
            *counts.entry(w).or_insert(0usize) += 1;
        }
        counts.into_iter().collect()
    }

    #[test]
    fn build_two_part_five_vertices() {
        let t = TuranTemplate::new(3, 2, vec![1, 4]).unwrap();
        let g = build_construction(&t).unwrap();
        assert_eq!(weight_census(&g), vec![(3, 6), (4, 4)]);
        assert_eq!(g.product(), BigNat::from(186_624u64));
    }

    #[test]
    fn build_single_part_is_uniform() {
        let t = TuranTemplate::new(3, 0, vec![6]).unwrap();
        assert_eq!(build_construction(&t).unwrap(), Multigraph::complete(6, 3));
    }

    #[test]
    fn build_two_part_six_vertices_deficient() {
        let t = TuranTemplate::new(5, 2, vec![2, 4]).unwrap();
        let g = build_construction(&t).unwrap();
        assert_eq!(weight_census(&g), vec![(3, 1), (5, 6), (6, 8)]);
        let expect = BigNat::from(3u32) * pow_u64(5, 6) * pow_u64(6, 8);
        assert_eq!(g.product(), expect);
    }

    #[test]
    fn build_rejects_bad_deficiency() {
        assert!(TuranTemplate::new(3, 3, vec![1, 4]).is_err());
        assert!(TuranTemplate::new(1, 1, vec![2]).is_err());
    }

    #[test]
    fn sigma_two_part_five() {
        for a in 3..=10 {
            assert_eq!(sigma_rd(a, 2, 2, 5).unwrap(), 10 * a + 4);
        }
        assert_eq!(sigma_rd(3, 2, 2, 5).unwrap(), 34);
    }

    #[test]
    fn sigma_single_part() {
        for (a, n) in [(1u64, 4usize), (3, 6), (7, 9)] {
            assert_eq!(sigma_rd(a, 1, 0, n).unwrap(), a * choose2(n) as u64);
        }
    }

    #[test]
    fn pi_two_part_values() {
        assert_eq!(pi_rd(3, 2, 2, 5).unwrap(), BigNat::from(186_624u64));
        // n=6 crossover: small a favors |V0|=1, larger a favors |V0|=2
        assert_eq!(
            pi_rd(3, 2, 2, 6).unwrap(),
            pow_u64(4, 5) * pow_u64(3, 10) // 60466176
        );
        assert_eq!(
            pi_rd(5, 2, 2, 6).unwrap(),
            BigNat::from(3u32) * pow_u64(6, 8) * pow_u64(5, 6)
        );
        assert_eq!(
            pi_rd(3, 2, 2, 7).unwrap(),
            pow_u64(3, 10) * pow_u64(4, 10) // 61917364224
        );
    }

    #[test]
    fn pi_witness_tie_breaks_to_smaller_v0() {
        // d=0 makes V0 interchangeable with the other part, so (2,3) and
        // (3,2) tie at n=5; the witness must pick x0=2.
        let (v, t) = pi_rd_with_witness(3, 2, 0, 5).unwrap();
        assert_eq!(v, pow_u64(3, 4) * pow_u64(4, 6));
        assert_eq!(t.sizes, vec![2, 3]);
    }

    #[test]
    fn pi_witness_matches_value() {
        for a in [3u64, 5, 9] {
            for n in 5..=8 {
                let (v, t) = pi_rd_with_witness(a, 2, 2, n).unwrap();
                assert_eq!(build_construction(&t).unwrap().product(), v);
            }
        }
    }

    #[test]
    fn construction_stays_feasible_at_its_own_cap() {
        // every s-subset of a template induces a template on s vertices, so
        // the s-vertex edge-sum maximum really caps all spanned sums
        for (a, r, d, n) in [(3u64, 2usize, 2u64, 6usize), (5, 2, 2, 6), (4, 3, 1, 7), (3, 1, 0, 5)] {
            let (_, t) = pi_rd_with_witness(a, r, d, n).unwrap();
            let g = build_construction(&t).unwrap();
            for s in 2..=n {
                let cap = sigma_rd(a, r, d, s).unwrap();
                assert!(
                    g.is_sq_graph(&SQConstraint::new(s, cap).unwrap()),
                    "template {t:?} violates its own cap at s={s}"
                );
            }
        }
    }

    #[test]
    fn optimal_v0_spot_values() {
        assert_eq!(optimal_v0_size(3, 6).unwrap().x_star, 1);
        assert_eq!(optimal_v0_size(4, 6).unwrap().x_star, 1);
        assert_eq!(optimal_v0_size(5, 6).unwrap().x_star, 2);
        assert_eq!(optimal_v0_size(10, 6).unwrap().x_star, 2);
        assert_eq!(optimal_v0_size(3, 7).unwrap().x_star, 2);
        assert!(optimal_v0_size(2, 6).is_err());
        assert!(optimal_v0_size(3, 4).is_err());
    }

    #[test]
    fn optimal_v0_matches_enumerated_profile() {
        for a in 3..=12u64 {
            for n in 5..=12usize {
                let opt = optimal_v0_size(a, n).unwrap();
                let profile: Vec<BigNat> = (0..=n).map(|x| v0_profile(a, n, x)).collect();
                let max = profile.iter().max().unwrap();
                assert_eq!(&opt.value, max, "value off at a={a} n={n}");
                assert_eq!(&profile[opt.x_star], max, "x_star not in argmax at a={a} n={n}");
                if !opt.tied {
                    assert_eq!(profile.iter().filter(|v| *v == max).count(), 1);
                }
            }
        }
    }

    #[test]
    fn optimal_v0_agrees_with_pi_enumeration() {
        for a in 3..=12u64 {
            for n in 5..=12usize {
                assert_eq!(pi_rd(a, 2, 2, n).unwrap(), optimal_v0_size(a, n).unwrap().value);
            }
        }
    }

    #[test]
    fn step_ratio_is_monotone() {
        // cross-multiplied check that the rise/fall test used by
        // optimal_v0_size flips at most once: R(k) <= R(k+1) where
        // R(k) = a^{n-k}(a+1)^{k-1} / ((a-2)^{k-1}(a+1)^{n-k})
        for a in 3..=12u64 {
            for n in 5..=12usize {
                for k in 1..n - 1 {
                    let nk = |k: usize| pow_u64(a, (n - k) as u32) * pow_u64(a + 1, (k - 1) as u32);
                    let dk = |k: usize| pow_u64(a - 2, (k - 1) as u32) * pow_u64(a + 1, (n - k) as u32);
                    assert!(nk(k) * dk(k + 1) <= nk(k + 1) * dk(k));
                }
            }
        }
    }

    #[test]
    fn f_ratio_values() {
        assert!((f_ratio(3).unwrap() - 4.82).abs() < 0.005);
        assert!((f_ratio(5).unwrap() - 3.80).abs() < 0.005);
        let far = f_ratio(100_000).unwrap();
        assert!(far > 3.0 && far < 3.001);
        assert!(f_ratio(2).is_err());
    }

    #[test]
    fn cycle_construction_six() {
        let g = cycle_construction(3, 6).unwrap();
        assert_eq!(g.product(), BigNat::from(80_621_568u64));
        assert_eq!(g.edge_sum(), 51);
        assert_eq!(g.max_spanned_sum(5), Some(34));
        assert!(cycle_construction(3, 2).is_err());
    }

    #[test]
    fn template_json_shape() {
        let t = TuranTemplate::new(3, 2, vec![1, 4]).unwrap();
        let js = serde_json::to_string(&t).unwrap();
        assert_eq!(js, r#"{"a":3,"r":2,"d":2,"sizes":[1,4]}"#);
        let back: TuranTemplate = serde_json::from_str(&js).unwrap();
        assert_eq!(back, t);
    }
}
