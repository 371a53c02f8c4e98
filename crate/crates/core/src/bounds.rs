//! Sharp bounds for `k`-term unit-fraction sums with deficiency `delta`.
//!
//! Writing `delta = s - r/q` (see [`srq_decompose`]):
//!
//! * a sum strictly below `k - delta` is at most `k - delta - r/u(s+1,q)`;
//! * a sum equal to `k - delta` has `lcm(m_i) <= u(s,q)/r`.
//!
//! Both bounds are attained only by the tuples built in [`extremal_gap_tuple`]
//! and [`extremal_lcm_tuple`].

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::egyptian::EgyptianTuple;
use crate::error::{Error, Result};
use crate::numeric::{srq_decompose, Rational, Srq};
use crate::sylvester::u;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EqualityTag {
    /// `delta < 0`: the all-ones tuple reaches the trivial bound `k`.
    NegativeDelta,
    /// `0 <= delta < 1`: ones followed by `(1+q)/r`.
    FractionalDelta,
    /// `delta >= 1`: ones followed by the Sylvester tail `(1+u(i,q))/r`.
    SylvesterGap,
    /// Sylvester tail closed by `u(s,q)/r`; attains the lcm bound.
    SylvesterLcm,
    /// Ones followed by `(1+q)/r, q(1+q)/r` with `r > 1`.
    TwoTermLcm,
    None,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EqualityCase {
    pub tag: EqualityTag,
    pub witness: Option<EgyptianTuple>,
}

impl EqualityCase {
    fn none() -> Self {
        EqualityCase { tag: EqualityTag::None, witness: None }
    }
}

fn exact_quotient(num: &BigUint, r: u64) -> Option<BigUint> {
    let (quot, rem) = num.div_rem(&BigUint::from(r));
    (rem == BigUint::ZERO).then_some(quot)
}

/// `q(1-{delta}) / u(floor(delta)+2, q)`, i.e. `r / u(s+1,q)`.
pub fn gap_amount(delta: &Rational, q: u64) -> Result<Rational> {
    let Srq { s, r, .. } = srq_decompose(delta, q)?;
    Rational::new(r, u(s + 1, q)?)
}

/// Largest achievable `k`-term sum strictly below `k - delta`.
pub fn sharp_sum_bound(k: u64, delta: &Rational, q: u64) -> Result<Rational> {
    Ok(Rational::from(k) - delta - gap_amount(delta, q)?)
}

/// `u(floor(delta)+1, q) / (q(1-{delta}))`, i.e. `u(s,q)/r`. Needs `delta >= 0`.
pub fn lcm_bound(delta: &Rational, q: u64) -> Result<Rational> {
    let Srq { s, r, .. } = srq_decompose(delta, q)?;
    if delta.is_negative() {
        return Err(Error::LcmNegativeDelta(delta.clone()));
    }
    Rational::new(u(s, q)?, r)
}

/// Divisibility conditions under which the lcm bound is attained (given `k >= s`):
/// `s = 1` and `r | q`, or `s = 2` and `r | 1+q`, or `s >= 3` and `r = 1`.
pub fn lcm_attainable(srq: &Srq) -> bool {
    match srq.s {
        0 => false,
        1 => srq.q.is_multiple_of(srq.r),
        2 => (srq.q + 1).is_multiple_of(srq.r),
        _ => srq.r == 1,
    }
}

/// `(1,...,1, (1+u(1,q))/r, ..., (1+u(s,q))/r)` when every entry is integral and `k >= s`.
pub fn extremal_gap_tuple(k: u64, delta: &Rational, q: u64) -> Result<Option<EgyptianTuple>> {
    let Srq { s, r, .. } = srq_decompose(delta, q)?;
    if k < s {
        return Ok(None);
    }
    let mut ms = vec![BigUint::one(); (k - s) as usize];
    for i in 1..=s {
        match exact_quotient(&(u(i, q)? + 1u32), r) {
            Some(m) => ms.push(m),
            None => return Ok(None),
        }
    }
    EgyptianTuple::new(ms).map(Some)
}

/// `(1,...,1, (1+u(1,q))/r, ..., (1+u(s-1,q))/r, u(s,q)/r)` when integral and `k >= s`.
pub fn extremal_lcm_tuple(k: u64, delta: &Rational, q: u64) -> Result<Option<EgyptianTuple>> {
    let Srq { s, r, .. } = srq_decompose(delta, q)?;
    if delta.is_negative() {
        return Err(Error::LcmNegativeDelta(delta.clone()));
    }
    if k < s {
        return Ok(None);
    }
    let mut ms = vec![BigUint::one(); (k - s) as usize];
    for i in 1..s {
        match exact_quotient(&(u(i, q)? + 1u32), r) {
            Some(m) => ms.push(m),
            None => return Ok(None),
        }
    }
    match exact_quotient(&u(s, q)?, r) {
        Some(m) => ms.push(m),
        None => return Ok(None),
    }
    EgyptianTuple::new(ms).map(Some)
}

/// Matches `t` structurally against the extremal tuples of its own length.
/// Gap families are tried before lcm families; within the lcm families the
/// Sylvester form wins ties.
pub fn classify_equality(t: &EgyptianTuple, delta: &Rational, q: u64) -> Result<EqualityCase> {
    let srq = srq_decompose(delta, q)?;
    let k = t.len() as u64;
    if extremal_gap_tuple(k, delta, q)?.as_ref() == Some(t) {
        let tag = match srq.s {
            0 => EqualityTag::NegativeDelta,
            1 => EqualityTag::FractionalDelta,
            _ => EqualityTag::SylvesterGap,
        };
        return Ok(EqualityCase { tag, witness: Some(t.clone()) });
    }
    if !delta.is_negative() && extremal_lcm_tuple(k, delta, q)?.as_ref() == Some(t) {
        let tag = if srq.s == 2 && srq.r > 1 { EqualityTag::TwoTermLcm } else { EqualityTag::SylvesterLcm };
        return Ok(EqualityCase { tag, witness: Some(t.clone()) });
    }
    Ok(EqualityCase::none())
}
