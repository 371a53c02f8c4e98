//! Exact rational arithmetic and the `delta = s - r/q` decomposition.
//!
//! [`Rational`] is always kept in lowest terms with a positive denominator, so
//! structural equality, ordering and hashing agree with numeric equality.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision reduced fraction.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        let den = den.into();
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Rational(BigRational::new(num.into(), den)))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    /// `1/m`.
    pub fn unit(m: &BigUint) -> Self {
        Rational(BigRational::new(BigInt::one(), BigInt::from(m.clone())))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    /// Always positive.
    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Rational(self.0.recip()))
    }

    pub fn checked_div(&self, rhs: &Rational) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Rational(&self.0 / &rhs.0))
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn ceil(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    /// Splits `x` into `(floor(x), {x})` with `0 <= {x} < 1`.
    pub fn floor_frac(&self) -> (BigInt, Rational) {
        let fl = self.floor();
        let frac = Rational(&self.0 - BigRational::from_integer(fl.clone()));
        (fl, frac)
    }

    pub fn pow(&self, e: i32) -> Rational {
        Rational(num_traits::Pow::pow(&self.0, e))
    }

    /// `self * n` for a machine integer.
    pub fn scale(&self, n: u64) -> Rational {
        Rational(&self.0 * BigRational::from_integer(BigInt::from(n)))
    }

    /// The numerator when the value is a nonnegative integer.
    pub fn to_biguint(&self) -> Option<BigUint> {
        if self.is_integer() && !self.is_negative() {
            self.numer().to_biguint()
        } else {
            None
        }
    }
}

pub fn floor_frac(x: &Rational) -> (BigInt, Rational) {
    x.floor_frac()
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Rational(r)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<u64> for Rational {
    fn from(n: u64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigUint> for Rational {
    fn from(n: BigUint) -> Self {
        Rational::from_integer(BigInt::from(n))
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::from_integer(n)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl<'a> $tr<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl<'a> $tr<Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
        impl<'a, 'b> $tr<&'b Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'b Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
// Panics on a zero divisor like the integer types do; use `checked_div` for
// untrusted input.
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl std::iter::Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> std::iter::Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl std::iter::Product for Rational {
    fn product<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::one(), |acc, x| acc * x)
    }
}

impl<'a> std::iter::Product<&'a Rational> for Rational {
    fn product<I: Iterator<Item = &'a Rational>>(iter: I) -> Rational {
        iter.fold(Rational::one(), |acc, x| acc * x)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_digits(s: &str) -> Option<BigUint> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    BigUint::from_str(s).ok()
}

/// Accepts an optional sign, digits, and an optional `/digits` tail.
impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(s.to_string());
        let t = s.trim();
        let (negative, body) = match t.as_bytes().first() {
            Some(b'-') => (true, &t[1..]),
            Some(b'+') => (false, &t[1..]),
            _ => (false, t),
        };
        let (num, den) = match body.split_once('/') {
            Some((n, d)) => (parse_digits(n).ok_or_else(bad)?, parse_digits(d).ok_or_else(bad)?),
            None => (parse_digits(body).ok_or_else(bad)?, BigUint::one()),
        };
        let sign = if negative { Sign::Minus } else { Sign::Plus };
        Rational::new(BigInt::from_biguint(sign, num), BigInt::from(den))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// String (de)serialization for big integers, whose values routinely exceed
/// what JSON numbers can carry.
pub mod big_str {
    use std::str::FromStr;

    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(n: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(n)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        BigUint::from_str(&s).map_err(serde::de::Error::custom)
    }

    pub mod option {
        use super::*;

        pub fn serialize<S: Serializer>(n: &Option<BigUint>, s: S) -> Result<S::Ok, S::Error> {
            match n {
                Some(n) => s.collect_str(n),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigUint>, D::Error> {
            Option::<String>::deserialize(d)?
                .map(|s| BigUint::from_str(&s).map_err(serde::de::Error::custom))
                .transpose()
        }
    }
}

/// `delta = s - r/q` with `s = floor(delta) + 1` and `r = q(1 - {delta})`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Srq {
    pub s: u64,
    pub r: u64,
    pub q: u64,
}

impl Srq {
    pub fn delta(&self) -> Rational {
        Rational::from(self.s) - Rational::new(self.r, self.q).expect("q >= 1")
    }
}

/// Checks `delta >= -1` and `q * delta` integral.
pub fn validate_delta(delta: &Rational, q: u64) -> Result<()> {
    if q == 0 {
        return Err(Error::ZeroQ);
    }
    if *delta < Rational::from(-1i64) {
        return Err(Error::DeltaBelowMinusOne(delta.clone()));
    }
    if !delta.scale(q).is_integer() {
        return Err(Error::NotIntegral { delta: delta.clone(), q });
    }
    Ok(())
}

pub fn srq_decompose(delta: &Rational, q: u64) -> Result<Srq> {
    validate_delta(delta, q)?;
    let (fl, frac) = delta.floor_frac();
    let s = (fl + 1u32)
        .to_u64()
        .ok_or_else(|| Error::Overflow(format!("floor({delta}) + 1")))?;
    // q * {delta} is an integer in [0, q).
    let qfrac = frac.scale(q).numer().to_u64().expect("0 <= q{delta} < q");
    Ok(Srq { s, r: q - qfrac, q })
}

/// The reduced denominator of `delta`, i.e. the least `q` with `q * delta` integral.
pub fn canonical_q(delta: &Rational) -> Result<u64> {
    delta
        .denom()
        .to_u64()
        .ok_or_else(|| Error::Overflow(format!("denominator of {delta}")))
}

/// Reports whether `1 - 1/n <= p/q < 1`. Whenever it does, `n <= q` must
/// follow; that implication is asserted.
pub fn check_o1(n: u64, p: u64, q: u64) -> bool {
    if n == 0 || q == 0 {
        return false;
    }
    // Cross-multiplied: q(n - 1) <= p n and p < q.
    let holds = (q as u128) * (n as u128 - 1) <= (p as u128) * (n as u128) && p < q;
    if holds {
        assert!(n <= q, "n <= q fails for n={n}, p={p}, q={q}");
    }
    holds
}

pub(crate) fn big_lcm(a: &BigUint, b: &BigUint) -> BigUint {
    a.lcm(b)
}

impl PartialEq<i64> for Rational {
    fn eq(&self, other: &i64) -> bool {
        *self == Rational::from(*other)
    }
}

impl PartialOrd<i64> for Rational {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        Some(self.cmp(&Rational::from(*other)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn make_rational_reduces() {
        assert_eq!(Rational::new(6, 4).unwrap(), q("3/2"));
        let z = Rational::new(0, 7).unwrap();
        assert_eq!((z.numer().clone(), z.denom().clone()), (BigInt::zero(), BigInt::one()));
        let n = Rational::new(5, -10).unwrap();
        assert_eq!(n.numer(), &BigInt::from(-1));
        assert_eq!(n.denom(), &BigInt::from(2));
        assert_eq!(Rational::new(1, 0), Err(Error::ZeroDenominator));
    }

    #[test]
    fn text_format() {
        assert_eq!(q("-5/6").to_string(), "-5/6");
        assert_eq!(q("3").to_string(), "3");
        assert_eq!(q("+4/2").to_string(), "2");
        assert_eq!(q(" 10/5 ").to_string(), "2");
        for bad in ["", "-", "1/", "/2", "1/0", "a", "1.5", "1/-2", "--1"] {
            assert!(bad.parse::<Rational>().is_err(), "{bad:?} parsed");
        }
    }

    #[test]
    fn floor_frac_examples() {
        assert_eq!(floor_frac(&q("3/2")), (BigInt::from(1), q("1/2")));
        assert_eq!(floor_frac(&q("-1")), (BigInt::from(-1), q("0")));
        assert_eq!(floor_frac(&q("-1/2")), (BigInt::from(-1), q("1/2")));
    }

    #[test]
    fn srq_examples() {
        assert_eq!(srq_decompose(&q("3/2"), 2).unwrap(), Srq { s: 2, r: 1, q: 2 });
        assert_eq!(srq_decompose(&q("-1"), 1).unwrap(), Srq { s: 0, r: 1, q: 1 });
        assert_eq!(srq_decompose(&q("0"), 3).unwrap(), Srq { s: 1, r: 3, q: 3 });
        assert_eq!(srq_decompose(&q("-1/2"), 2).unwrap(), Srq { s: 0, r: 1, q: 2 });
    }

    #[test]
    fn srq_rejects() {
        assert!(matches!(srq_decompose(&q("-2"), 1), Err(Error::DeltaBelowMinusOne(_))));
        assert!(matches!(srq_decompose(&q("-3/2"), 2), Err(Error::DeltaBelowMinusOne(_))));
        assert!(matches!(srq_decompose(&q("1/3"), 2), Err(Error::NotIntegral { .. })));
        assert_eq!(srq_decompose(&q("1"), 0), Err(Error::ZeroQ));
    }

    #[test]
    fn canonical_q_examples() {
        assert_eq!(canonical_q(&q("3/2")).unwrap(), 2);
        assert_eq!(canonical_q(&q("-1")).unwrap(), 1);
        assert_eq!(canonical_q(&q("5/6")).unwrap(), 6);
    }

    #[test]
    fn o1_examples() {
        assert!(check_o1(3, 2, 3));
        assert!(!check_o1(5, 3, 4));
        assert!(check_o1(2, 9, 10));
    }

    #[test]
    fn o1_exhaustive_cube() {
        for n in 1..=50u64 {
            for p in 1..=50u64 {
                for qq in 1..=50u64 {
                    // Oracle: the hypothesis evaluated in exact rationals.
                    let lhs = Rational::one() - Rational::new(1, n).unwrap();
                    let mid = Rational::new(p, qq).unwrap();
                    let hyp = lhs <= mid && mid < Rational::one();
                    assert_eq!(check_o1(n, p, qq), hyp);
                    if hyp {
                        assert!(n <= qq);
                    }
                }
            }
        }
    }

    fn arb_rational() -> impl Strategy<Value = Rational> {
        (-10_000i64..10_000, 1i64..500).prop_map(|(n, d)| Rational::new(n, d).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]

        #[test]
        fn floor_frac_reconstructs(x in arb_rational()) {
            let (fl, frac) = x.floor_frac();
            prop_assert!(!frac.is_negative() && frac < Rational::one());
            prop_assert_eq!(Rational::from(fl) + frac, x);
        }
    }

    proptest! {
        #[test]
        fn arithmetic_is_exact(a in arb_rational(), b in arb_rational()) {
            prop_assert_eq!((&a + &b) - &b, a.clone());
            prop_assert_eq!((&a - &b) + &b, a.clone());
            if !b.is_zero() {
                prop_assert_eq!((&a * &b) / &b, a.clone());
            }
            prop_assert_eq!(a.to_string().parse::<Rational>().unwrap(), a);
        }

        #[test]
        fn srq_round_trip(n in -3i64..200, qq in 1u64..40) {
            let delta = Rational::new(n, qq as i64).unwrap();
            prop_assume!(delta >= -1);
            let srq = srq_decompose(&delta, qq).unwrap();
            prop_assert!(1 <= srq.r && srq.r <= qq);
            prop_assert_eq!(srq.delta(), delta);
        }
    }
}
