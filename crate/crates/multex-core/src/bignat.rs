//! Arbitrary-precision nonnegative integers.
//!
//! Edge multiplicities fit comfortably in machine words, but products over
//! all `C(n,2)` edges do not, so every product in this crate is a [`BigNat`].
//! JSON documents carry them as decimal strings to survive any consumer.

use num_bigint::BigUint;
use num_traits::{One, Zero};

pub type BigNat = BigUint;

/// `base^exp` as a BigNat; `0^0 = 1` by the empty-product convention.
pub fn pow_u64(base: u64, exp: u32) -> BigNat {
    BigNat::from(base).pow(exp)
}

pub fn from_decimal(s: &str) -> Option<BigNat> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse::<BigUint>().ok()
}

/// Floor of `num * 10^digits / den` — the scaled quotient used for ratio
/// trends, exact on the computed digits.
pub fn scaled_quotient(num: &BigNat, den: &BigNat, digits: u32) -> BigNat {
    assert!(!den.is_zero(), "scaled_quotient: zero denominator");
    num * BigNat::from(10u32).pow(digits) / den
}

/// Lossy conversion for display; BigNat values beyond f64 range map to inf.
pub fn to_f64(v: &BigNat) -> f64 {
    let s = v.to_string();
    s.parse::<f64>().unwrap_or(f64::INFINITY)
}

pub fn is_one(v: &BigNat) -> bool {
    v.is_one()
}

/// Serde adapter: BigNat as a decimal string.
pub mod serde_decimal {
    use super::*;
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigNat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigNat, D::Error> {
        let raw = String::deserialize(d)?;
        from_decimal(&raw).ok_or_else(|| de::Error::custom(format!("not a decimal natural: {raw:?}")))
    }
}
