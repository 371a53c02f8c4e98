//! Exchange lemmas for nonincreasing positive sequences:
//!
//! * prefix products of `x` dominating those of `y` forces `sum x >= sum y`;
//! * suffix sums of `x` dominating those of `y` forces `prod x >= prod y`;
//!
//! each with equality only when `x = y`.

use crate::error::{Error, Result};
use crate::numeric::Rational;

/// Positive rationals `x_1 >= x_2 >= ... >= x_n > 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PositiveSequence(Vec<Rational>);

impl PositiveSequence {
    pub fn new(entries: Vec<Rational>) -> Result<Self> {
        if entries.iter().any(|x| !x.is_positive()) || entries.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidSequence);
        }
        Ok(PositiveSequence(entries))
    }

    pub fn entries(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> Rational {
        self.0.iter().sum()
    }

    pub fn product(&self) -> Rational {
        self.0.iter().product()
    }
}

fn same_len(x: &PositiveSequence, y: &PositiveSequence) -> Result<()> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    Ok(())
}

pub fn prefix_product_dominates(x: &PositiveSequence, y: &PositiveSequence) -> Result<bool> {
    same_len(x, y)?;
    let mut px = Rational::one();
    let mut py = Rational::one();
    for (a, b) in x.0.iter().zip(&y.0) {
        px = px * a;
        py = py * b;
        if px < py {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn suffix_sum_dominates(x: &PositiveSequence, y: &PositiveSequence) -> Result<bool> {
    same_len(x, y)?;
    let mut sx = Rational::zero();
    let mut sy = Rational::zero();
    for (a, b) in x.0.iter().rev().zip(y.0.iter().rev()) {
        sx = sx + a;
        sy = sy + b;
        if sx < sy {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Under prefix-product dominance, checks `sum x >= sum y` and returns whether
/// the sums coincide. Equal sums with unequal sequences is reported as a violation.
pub fn lemma_sp_conclusion(x: &PositiveSequence, y: &PositiveSequence) -> Result<bool> {
    if !prefix_product_dominates(x, y)? {
        return Err(Error::Precondition("prefix products of x must dominate those of y"));
    }
    let (sx, sy) = (x.sum(), y.sum());
    conclude(sx, sy, x, y, "sum")
}

/// Under suffix-sum dominance, checks `prod x >= prod y` and returns whether
/// the products coincide.
pub fn lemma_sp2_conclusion(x: &PositiveSequence, y: &PositiveSequence) -> Result<bool> {
    if !suffix_sum_dominates(x, y)? {
        return Err(Error::Precondition("suffix sums of x must dominate those of y"));
    }
    let (px, py) = (x.product(), y.product());
    conclude(px, py, x, y, "product")
}

fn conclude(a: Rational, b: Rational, x: &PositiveSequence, y: &PositiveSequence, what: &str) -> Result<bool> {
    if a < b {
        return Err(Error::Violated(format!("{what} of x ({a}) below {what} of y ({b})")));
    }
    let equal = a == b;
    if equal && x != y {
        return Err(Error::Violated(format!("equal {what}s for distinct sequences {:?} and {:?}", x.0, y.0)));
    }
    Ok(equal)
}

/// Constructive generators of hypothesis-satisfying pairs. Each move either
/// raises one entry or transfers mass between neighbours in the direction that
/// preserves dominance, so every output pair satisfies the lemma's hypothesis
/// without rejection sampling.
pub mod generate {
    use rand::Rng;

    use super::PositiveSequence;
    use crate::numeric::Rational;

    pub const MAX_ENTRY: i64 = 10;

    fn small_rational<R: Rng>(rng: &mut R, lo: &Rational, hi: &Rational) -> Rational {
        // Uniform on a grid of 1/den inside [lo, hi].
        let den: i64 = rng.gen_range(1..=12);
        let lo_n = (lo.scale(den as u64)).ceil();
        let hi_n = (hi.scale(den as u64)).floor();
        if lo_n > hi_n {
            return lo.clone();
        }
        let span: i64 = (&hi_n - &lo_n).try_into().unwrap_or(i64::MAX);
        let pick = lo_n + rng.gen_range(0..=span);
        Rational::new(pick, den).expect("den >= 1")
    }

    /// Nonincreasing sequence of length `n` with entries in `(0, MAX_ENTRY]`.
    pub fn base_sequence<R: Rng>(rng: &mut R, n: usize) -> Vec<Rational> {
        let mut v: Vec<Rational> = (0..n)
            .map(|_| Rational::new(rng.gen_range(1..=MAX_ENTRY * 6), 6).unwrap())
            .collect();
        v.sort_by(|a, b| b.cmp(a));
        v
    }

    /// Returns `(x, y)` with the prefix products of `x` dominating those of `y`.
    pub fn prefix_product_pair<R: Rng>(rng: &mut R, n: usize, moves: usize) -> (PositiveSequence, PositiveSequence) {
        let y = base_sequence(rng, n);
        let mut x = y.clone();
        let cap = Rational::from(MAX_ENTRY);
        for _ in 0..moves {
            let i = rng.gen_range(0..n);
            let one = Rational::one();
            if rng.gen_bool(0.5) || i + 1 == n {
                // Scale x_i up by f in [1, x_{i-1}/x_i]: prefix products from i on grow.
                let ceiling = if i == 0 { cap.clone() } else { x[i - 1].clone().min(cap.clone()) };
                let f_hi = ceiling / &x[i];
                let f = small_rational(rng, &one, &f_hi);
                x[i] = &x[i] * f;
            } else {
                // x_i *= t, x_{i+1} /= t: only the i-th prefix product changes, upward.
                let mut t_hi = if i > 0 { &x[i - 1] / &x[i] } else { &cap / &x[i] };
                if i + 2 < n {
                    t_hi = t_hi.min(&x[i + 1] / &x[i + 2]);
                }
                let t = small_rational(rng, &one, &t_hi);
                x[i] = &x[i] * &t;
                x[i + 1] = &x[i + 1] / &t;
            }
        }
        (PositiveSequence::new(x).expect("moves keep order"), PositiveSequence::new(y).expect("sorted"))
    }

    /// Returns `(x, y)` with the suffix sums of `x` dominating those of `y`.
    pub fn suffix_sum_pair<R: Rng>(rng: &mut R, n: usize, moves: usize) -> (PositiveSequence, PositiveSequence) {
        let y = base_sequence(rng, n);
        let mut x = y.clone();
        let cap = Rational::from(MAX_ENTRY);
        let zero = Rational::zero();
        for _ in 0..moves {
            let i = rng.gen_range(0..n);
            if rng.gen_bool(0.5) || i + 1 == n {
                // Raise x_i by e <= x_{i-1} - x_i: suffix sums up to i grow.
                let ceiling = if i == 0 { cap.clone() } else { x[i - 1].clone().min(cap.clone()) };
                let e = small_rational(rng, &zero, &(ceiling - &x[i]));
                x[i] = &x[i] + e;
            } else {
                // Move e from x_i to x_{i+1} keeping x_i - e >= x_{i+1} + e and
                // x_{i+1} + e <= x_i - e; only the (i+1)-th suffix sum changes, upward.
                let half_gap = (&x[i] - &x[i + 1]) / Rational::from(2i64);
                let e = small_rational(rng, &zero, &half_gap);
                x[i] = &x[i] - &e;
                x[i + 1] = &x[i + 1] + &e;
            }
        }
        (PositiveSequence::new(x).expect("moves keep order"), PositiveSequence::new(y).expect("sorted"))
    }
}
