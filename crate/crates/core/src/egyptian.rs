//! Unit-fraction representations: greedy expansion, the splitting identity
//! `1/m = 1/(m+1) + 1/(m(m+1))`, and exhaustive enumeration with a fixed
//! number of terms.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numeric::{big_lcm, validate_delta, Rational};

/// Nondecreasing positive denominators `m_1 <= ... <= m_k`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct EgyptianTuple(Vec<BigUint>);

impl EgyptianTuple {
    pub fn new(denominators: Vec<BigUint>) -> Result<Self> {
        if denominators.iter().any(Zero::is_zero) || denominators.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidTuple);
        }
        Ok(EgyptianTuple(denominators))
    }

    /// Sorts the input first; rejects zeros.
    pub fn from_unsorted(mut denominators: Vec<BigUint>) -> Result<Self> {
        denominators.sort();
        Self::new(denominators)
    }

    pub fn from_u64s(denominators: &[u64]) -> Result<Self> {
        Self::new(denominators.iter().map(|&m| BigUint::from(m)).collect())
    }

    pub fn denominators(&self) -> &[BigUint] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> Rational {
        self.0.iter().map(Rational::unit).sum()
    }

    pub fn lcm(&self) -> BigUint {
        self.0.iter().fold(BigUint::one(), |acc, m| big_lcm(&acc, m))
    }

    pub fn product(&self) -> BigUint {
        self.0.iter().product()
    }

    pub fn into_inner(self) -> Vec<BigUint> {
        self.0
    }
}

impl fmt::Display for EgyptianTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, m) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for EgyptianTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for EgyptianTuple {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.0.iter().map(|m| m.to_string()))
    }
}

impl<'de> Deserialize<'de> for EgyptianTuple {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<String>::deserialize(deserializer)?;
        let ms = raw
            .iter()
            .map(|s| s.parse::<BigUint>().map_err(serde::de::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        EgyptianTuple::new(ms).map_err(serde::de::Error::custom)
    }
}

pub fn tuple_sum(t: &EgyptianTuple) -> Rational {
    t.sum()
}

pub fn tuple_lcm(t: &EgyptianTuple) -> BigUint {
    t.lcm()
}

/// Smallest `m >= 1` with `m x >= 1`, for `x > 0`.
fn smallest_unit_below(x: &Rational) -> BigUint {
    // ceil(1/x) = ceil(den/num)
    let inv = x.recip().expect("x > 0");
    inv.ceil().to_biguint().expect("positive")
}

/// Greedy expansion: repeatedly subtract the largest unit fraction `1/m <= x`.
pub fn greedy(x: &Rational) -> Result<EgyptianTuple> {
    if x.is_negative() {
        return Err(Error::Negative(x.clone()));
    }
    let mut rest = x.clone();
    let mut out = Vec::new();
    while !rest.is_zero() {
        let m = smallest_unit_below(&rest);
        rest = rest - Rational::unit(&m);
        out.push(m);
    }
    Ok(EgyptianTuple(out))
}

/// Replaces the entry at 1-based `position` by `m+1` and `m(m+1)`, then re-sorts.
pub fn split_expand(t: &EgyptianTuple, position: usize) -> Result<EgyptianTuple> {
    if position == 0 || position > t.len() {
        return Err(Error::Position { position, len: t.len() });
    }
    let mut ms = t.0.clone();
    let m = ms.remove(position - 1);
    let m1 = &m + 1u32;
    ms.push(&m * &m1);
    ms.push(m1);
    ms.sort();
    Ok(EgyptianTuple(ms))
}

/// Admissible range for the next denominator when `remaining > 0` must be
/// covered by exactly `slots` further unit fractions, none smaller than
/// `1/prev` in denominator order: `max(prev, ceil(1/R)) ..= floor(slots/R)`.
pub fn position_range(prev: &BigUint, remaining: &Rational, slots: u64) -> Option<(BigUint, BigUint)> {
    if slots == 0 || !remaining.is_positive() {
        return None;
    }
    let inv = remaining.recip().expect("remaining > 0");
    let lo = inv.ceil().to_biguint().expect("positive").max(prev.clone());
    let hi = inv.scale(slots).floor().to_biguint()?;
    (lo <= hi).then_some((lo, hi))
}

/// All nondecreasing `k`-tuples with `sum 1/m_i = x`, in lexicographic order.
pub fn enumerate_exact(x: &Rational, k: u64) -> Result<Vec<EgyptianTuple>> {
    if x.is_negative() {
        return Err(Error::Negative(x.clone()));
    }
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(k as usize);
    exact_dfs(&mut prefix, x, k, &BigUint::one(), &mut out);
    Ok(out)
}

fn exact_dfs(prefix: &mut Vec<BigUint>, remaining: &Rational, slots: u64, prev: &BigUint, out: &mut Vec<EgyptianTuple>) {
    if slots == 0 {
        if remaining.is_zero() {
            out.push(EgyptianTuple(prefix.clone()));
        }
        return;
    }
    let Some((lo, hi)) = position_range(prev, remaining, slots) else {
        return;
    };
    let mut m = lo;
    while m <= hi {
        let next = remaining - Rational::unit(&m);
        prefix.push(m.clone());
        exact_dfs(prefix, &next, slots - 1, &m, out);
        prefix.pop();
        m += 1u32;
    }
}

/// The tuples of length `k` summing to exactly `k - delta`.
pub fn enumerate_deficiency(k: u64, delta: &Rational, q: u64) -> Result<Vec<EgyptianTuple>> {
    validate_delta(delta, q)?;
    let target = Rational::from(k) - delta;
    if target.is_negative() || target > Rational::from(k) {
        return Ok(Vec::new());
    }
    enumerate_exact(&target, k)
}
