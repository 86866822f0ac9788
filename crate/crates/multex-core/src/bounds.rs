//! Upper-bound machinery: the pair-averaging edge-sum cap and the exact
//! integral form of the AM-GM inequality (balanced integer vectors maximize
//! the product for a fixed sum).

use crate::bignat::{pow_u64, serde_decimal, BigNat};
use crate::error::{Error, Result};
use crate::util::choose2;
use serde::{Deserialize, Serialize};

/// Maximum product of `m` nonnegative integers summing to `S`: writing
/// `S = b*m + t` with `0 <= t < m`, the balanced vector gives
/// `b^(m-t) * (b+1)^t`.
pub fn amgm_upper(m: u64, s: u64) -> Result<BigNat> {
    if m == 0 {
        return Err(Error::param("m", "need at least one weight"));
    }
    let b = s / m;
    let t = s % m;
    Ok(pow_u64(b, (m - t) as u32) * pow_u64(b + 1, t as u32))
}

/// Maximum product of `m` nonnegative integers summing to `S = a*m + t`
/// when one of them is pinned to `a - 1`. Requires `0 <= t <= m - 2`; the
/// remaining weights then balance to `(a-1) * a^(m-t-2) * (a+1)^(t+1)`.
pub fn amgm_upper_with_deficient(m: u64, s: u64, a: u64) -> Result<BigNat> {
    if m < 2 {
        return Err(Error::param("m", format!("need m >= 2, got {m}")));
    }
    if a < 1 {
        return Err(Error::param("a", format!("need a >= 1, got {a}")));
    }
    let t = s
        .checked_sub(a * m)
        .ok_or_else(|| Error::param("S", format!("need S >= a*m = {}, got {s}", a * m)))?;
    if t > m - 2 {
        return Err(Error::param(
            "S",
            format!("need t = S - a*m <= m-2 = {}, got {t}", m - 2),
        ));
    }
    Ok(BigNat::from(a - 1) * pow_u64(a, (m - t - 2) as u32) * pow_u64(a + 1, (t + 1) as u32))
}

/// Edge-sum cap from averaging the s-set constraints: each pair lies in the
/// same fraction of s-sets, so `e(G) <= floor(q * C(n,2) / C(s,2))`.
pub fn averaging_edge_bound(n: usize, s: usize, q: u64) -> Result<u64> {
    if s < 2 {
        return Err(Error::param("s", format!("need s >= 2, got {s}")));
    }
    if n < s {
        return Err(Error::param("n", format!("need n >= s = {s}, got {n}")));
    }
    let num = q as u128 * choose2(n) as u128;
    u64::try_from(num / choose2(s) as u128)
        .map_err(|_| Error::param("q", "edge-sum cap exceeds u64"))
}

/// How a product cap was derived.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundMethod {
    #[serde(rename = "averaging+amgm")]
    AveragingAmgm,
    #[serde(rename = "amgm-with-deficient-edge")]
    AmgmWithDeficientEdge,
    #[serde(rename = "case-analysis")]
    CaseAnalysis,
}

/// An edge-sum cap and the product cap it implies.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub n: usize,
    pub s: usize,
    pub q: u64,
    pub edge_cap: u64,
    #[serde(with = "serde_decimal")]
    pub product_cap: BigNat,
    pub method: BoundMethod,
}

/// Chain the averaging cap into the balanced-product bound over all
/// `C(n,2)` pairs.
pub fn product_upper_bound(n: usize, s: usize, q: u64) -> Result<BoundReport> {
    let edge_cap = averaging_edge_bound(n, s, q)?;
    let product_cap = amgm_upper(choose2(n) as u64, edge_cap)?;
    Ok(BoundReport {
        n,
        s,
        q,
        edge_cap,
        product_cap,
        method: BoundMethod::AveragingAmgm,
    })
}
