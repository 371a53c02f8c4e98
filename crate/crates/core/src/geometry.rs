//! Log structures `(P^d, sum b_i E_i)` with general hyperplanes `E_i` and
//! coefficients in the standard set `{1 - 1/m} ∪ {1}`, translated into the
//! unit-fraction layer.
//!
//! With `k` finite coefficients `1 - 1/m_i` and `c` coefficients equal to one,
//! `v = deg(K+B) = -(d+1) + sum b_i` satisfies
//! `sum 1/m_i = k - (d - c + 1 + v)`, so the tuple `(m_i)` has deficiency
//! `delta = v + d - c + 1` and the general bounds apply.
//!
//! Hyperplane generality is a precondition, not something checked here; base
//! point freeness is represented by the index `r` making every `r b_i` integral.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::bounds::lcm_bound;
use crate::egyptian::EgyptianTuple;
use crate::error::{Error, Result};
use crate::numeric::{big_lcm, canonical_q, srq_decompose, Rational};
use crate::sylvester::u;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StandardCoefficient {
    /// `1 - 1/m`, `m >= 1`.
    Finite(u64),
    One,
}

impl StandardCoefficient {
    pub fn finite(m: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::ZeroDenominator);
        }
        Ok(StandardCoefficient::Finite(m))
    }

    pub fn value(&self) -> Rational {
        match *self {
            StandardCoefficient::Finite(m) => Rational::one() - Rational::new(1, m).expect("m >= 1"),
            StandardCoefficient::One => Rational::one(),
        }
    }
}

impl fmt::Display for StandardCoefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StandardCoefficient::Finite(m) => write!(f, "m:{m}"),
            StandardCoefficient::One => write!(f, "one"),
        }
    }
}

/// `m:<int>` or `one`.
impl FromStr for StandardCoefficient {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("one") {
            return Ok(StandardCoefficient::One);
        }
        let m = s
            .strip_prefix("m:")
            .and_then(|m| m.parse::<u64>().ok())
            .ok_or_else(|| Error::Parse(s.to_string()))?;
        StandardCoefficient::finite(m)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogStructure {
    pub d: u64,
    pub coefficients: Vec<StandardCoefficient>,
}

impl LogStructure {
    pub fn new(d: u64, coefficients: Vec<StandardCoefficient>) -> Result<Self> {
        if d == 0 {
            return Err(Error::Config("dimension must be at least 1".into()));
        }
        Ok(LogStructure { d, coefficients })
    }

    /// Parses a comma-separated list such as `m:2,m:3,one`.
    pub fn parse_coefficients(s: &str) -> Result<Vec<StandardCoefficient>> {
        if s.trim().is_empty() {
            return Ok(Vec::new());
        }
        s.split(',').map(str::parse).collect()
    }

    /// Denominators `m_i` of the finite coefficients, sorted.
    pub fn finite_part(&self) -> EgyptianTuple {
        let ms = self
            .coefficients
            .iter()
            .filter_map(|c| match c {
                StandardCoefficient::Finite(m) => Some(BigUint::from(*m)),
                StandardCoefficient::One => None,
            })
            .collect();
        EgyptianTuple::from_unsorted(ms).expect("m >= 1")
    }

    /// Number of finite coefficients.
    pub fn k(&self) -> u64 {
        self.coefficients.len() as u64 - self.c()
    }

    /// Number of coefficients equal to one.
    pub fn c(&self) -> u64 {
        self.coefficients.iter().filter(|c| **c == StandardCoefficient::One).count() as u64
    }

    /// Deficiency of the finite part: `d - c + 1 + v`.
    pub fn deficiency(&self) -> Rational {
        Rational::from(self.d) - Rational::from(self.c()) + Rational::one() + volume(self)
    }
}

/// `v = deg(K+B) = -(d+1) + sum b_i`.
pub fn volume(ls: &LogStructure) -> Rational {
    let b: Rational = ls.coefficients.iter().map(StandardCoefficient::value).sum();
    b - Rational::from(ls.d + 1)
}

fn check_threshold(t: &Rational, q: u64) -> Result<()> {
    if t.is_negative() {
        return Err(Error::Negative(t.clone()));
    }
    srq_decompose(t, q).map(|_| ())
}

/// `q(1-{t}) / u(floor(t)+d+3, q)`: any volume above `t` exceeds it by at least this.
pub fn gap_bound_mr(d: u64, t: &Rational, q: u64) -> Result<Rational> {
    check_threshold(t, q)?;
    let (fl, frac) = t.floor_frac();
    let p = index(&fl, d + 3)?;
    (Rational::one() - frac).scale(q).checked_div(&Rational::from(u(p, q)?))
}

/// `u(floor(t)+d+2, q) / (q(1-{t}))`: bound on the base-point-free index at volume `t`.
pub fn index_bound_mr(d: u64, t: &Rational, q: u64) -> Result<Rational> {
    check_threshold(t, q)?;
    let (fl, frac) = t.floor_frac();
    let p = index(&fl, d + 2)?;
    Rational::from(u(p, q)?).checked_div(&(Rational::one() - frac).scale(q))
}

fn index(floor: &num_bigint::BigInt, offset: u64) -> Result<u64> {
    u64::try_from(floor + offset).map_err(|_| Error::Overflow(format!("index {floor} + {offset}")))
}

/// Sharper index bound `u(floor(v)+d-c+2, q)/r` obtained by keeping track of
/// the coefficients equal to one; never exceeds [`index_bound_mr`].
pub fn proof_level_index_bound(ls: &LogStructure, q: u64) -> Result<Rational> {
    let v = volume(ls);
    if v.is_negative() {
        return Err(Error::NegativeVolume(v));
    }
    lcm_bound(&ls.deficiency(), q)
}

/// `r = lcm(m_i)` over the finite coefficients. Checks `r b_i` integral and
/// `r <= index_bound_mr(d, v, canonical_q(v))`.
pub fn bpf_index(ls: &LogStructure) -> Result<BigUint> {
    let v = volume(ls);
    if v.is_negative() {
        return Err(Error::NegativeVolume(v));
    }
    let r = ls
        .coefficients
        .iter()
        .filter_map(|c| match c {
            StandardCoefficient::Finite(m) => Some(BigUint::from(*m)),
            StandardCoefficient::One => None,
        })
        .fold(BigUint::one(), |acc, m| big_lcm(&acc, &m));
    let rr = Rational::from(r.clone());
    if let Some(c) = ls.coefficients.iter().find(|c| !(c.value() * &rr).is_integer()) {
        return Err(Error::Violated(format!("{r} * ({c}) is not integral")));
    }
    let bound = index_bound_mr(ls.d, &v, canonical_q(&v)?)?;
    if rr > bound {
        return Err(Error::Violated(format!("index {r} exceeds bound {bound}")));
    }
    Ok(r)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeometrySummary {
    pub d: u64,
    pub k: u64,
    pub c: u64,
    pub volume: Rational,
    pub t: Rational,
    pub q: u64,
    pub gap_bound: Rational,
    pub index_bound: Rational,
    /// Present when `v >= 0`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub bpf_index: Option<String>,
    /// The c-dependent bound at `t = v`, present when `v >= 0`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub proof_level_index_bound: Option<Rational>,
}

/// Everything the `geometry` command reports. `t` defaults to `max(v, 0)` and
/// `q` to the reduced denominator of `t`.
pub fn summarize(ls: &LogStructure, t: Option<Rational>, q: Option<u64>) -> Result<GeometrySummary> {
    let v = volume(ls);
    let t = t.unwrap_or_else(|| if v.is_negative() { Rational::zero() } else { v.clone() });
    let q = match q {
        Some(q) => q,
        None => canonical_q(&t)?,
    };
    let (bpf, proof) = if v.is_negative() {
        (None, None)
    } else {
        let vq = canonical_q(&v)?;
        (Some(bpf_index(ls)?.to_string()), Some(proof_level_index_bound(ls, vq)?))
    };
    Ok(GeometrySummary {
        d: ls.d,
        k: ls.k(),
        c: ls.c(),
        gap_bound: gap_bound_mr(ls.d, &t, q)?,
        index_bound: index_bound_mr(ls.d, &t, q)?,
        volume: v,
        t,
        q,
        bpf_index: bpf,
        proof_level_index_bound: proof,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One as _;
    use StandardCoefficient::{Finite, One};

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn ls(d: u64, cs: &[StandardCoefficient]) -> LogStructure {
        LogStructure::new(d, cs.to_vec()).unwrap()
    }

    #[test]
    fn volume_examples() {
        assert_eq!(volume(&ls(2, &[Finite(2), Finite(3), Finite(4), One, One])), r("11/12"));
        assert_eq!(volume(&ls(1, &[])), r("-2"));
        assert_eq!(volume(&ls(1, &[Finite(2); 5])), r("1/2"));
    }

    #[test]
    fn gap_bound_examples() {
        assert_eq!(gap_bound_mr(1, &r("0"), 1).unwrap(), r("1/42"));
        assert_eq!(gap_bound_mr(2, &r("0"), 1).unwrap(), r("1/1806"));
        // u(4,2) = 1806 by the recursion 2, 6, 42, 1806.
        assert_eq!(gap_bound_mr(1, &r("1/2"), 2).unwrap(), r("1/1806"));
        assert!(gap_bound_mr(1, &r("-1/2"), 2).is_err());
        assert!(gap_bound_mr(1, &r("1/2"), 3).is_err());
    }

    #[test]
    fn index_bound_examples() {
        assert_eq!(index_bound_mr(1, &r("0"), 1).unwrap(), r("6"));
        assert_eq!(index_bound_mr(2, &r("0"), 1).unwrap(), r("42"));
        assert_eq!(index_bound_mr(1, &r("1"), 1).unwrap(), r("42"));
    }

    #[test]
    fn bpf_examples() {
        assert_eq!(bpf_index(&ls(1, &[Finite(2), Finite(3), One])).unwrap(), BigUint::from(6u32));
        assert_eq!(bpf_index(&ls(1, &[One, One, One])).unwrap(), BigUint::one());
        let s = ls(1, &[Finite(2), Finite(2), Finite(2), Finite(2), Finite(3)]);
        assert_eq!(volume(&s), r("2/3"));
        assert_eq!(bpf_index(&s).unwrap(), BigUint::from(6u32));
        assert!(matches!(bpf_index(&ls(1, &[Finite(2)])), Err(Error::NegativeVolume(_))));
    }

    #[test]
    fn coefficient_text() {
        let cs = LogStructure::parse_coefficients("m:2,m:3,one,one").unwrap();
        assert_eq!(cs, vec![Finite(2), Finite(3), One, One]);
        assert!(LogStructure::parse_coefficients("m:0").is_err());
        assert!(LogStructure::parse_coefficients("two").is_err());
        assert_eq!(LogStructure::parse_coefficients("").unwrap(), vec![]);
        assert_eq!(Finite(7).to_string().parse::<StandardCoefficient>().unwrap(), Finite(7));
    }

    #[test]
    fn dictionary_identity_small() {
        let s = ls(2, &[Finite(2), Finite(3), Finite(4), One, One]);
        let lhs = s.finite_part().sum();
        let rhs = Rational::from(s.k()) - (Rational::from(s.d) - Rational::from(s.c()) + Rational::one() + volume(&s));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn proof_level_never_exceeds_stated() {
        let s = ls(2, &[Finite(2), Finite(3), Finite(7), One, One, One]);
        let v = volume(&s);
        let q = canonical_q(&v).unwrap();
        assert!(proof_level_index_bound(&s, q).unwrap() <= index_bound_mr(2, &v, q).unwrap());
    }
}
