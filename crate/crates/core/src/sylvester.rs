//! The two-parameter Sylvester recursion `u(1,q) = q`, `u(p+1,q) = u(p,q)(u(p,q)+1)`
//! and its companion `t(p,q) = 1 + u(p,q)`.
//!
//! Values grow doubly exponentially: `u(p,q)` has roughly `2^(p-1) * log10(q+1)`
//! digits. Tables are memoized per `q` and refuse to grow past a depth cap.

use std::collections::HashMap;
use std::sync::{LazyLock, Mutex};
use std::time::Instant;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::numeric::Rational;
use crate::report::{Claim, Counterexample, Parameters, VerificationReport};

/// Default maximum index `p`. `u(24,1)` already has over three million digits.
pub const DEFAULT_DEPTH_CAP: u64 = 24;

/// Prefix `u(1,q), ..., u(P,q)` of the recursion for one `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SylvesterTable {
    q: u64,
    cap: u64,
    values: Vec<BigUint>,
}

impl SylvesterTable {
    pub fn new(q: u64) -> Result<Self> {
        Self::with_cap(q, DEFAULT_DEPTH_CAP)
    }

    pub fn with_cap(q: u64, cap: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::ZeroQ);
        }
        Ok(SylvesterTable { q, cap, values: vec![BigUint::from(q)] })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Stored values; index 0 holds `u(1,q)`.
    pub fn values(&self) -> &[BigUint] {
        &self.values
    }

    pub fn extend_to(&mut self, p: u64) -> Result<()> {
        if p == 0 {
            return Err(Error::ZeroIndex);
        }
        if p > self.cap {
            return Err(Error::DepthCap { p, cap: self.cap });
        }
        while (self.values.len() as u64) < p {
            let last = self.values.last().expect("table is never empty");
            let next = last * (last + 1u32);
            self.values.push(next);
        }
        Ok(())
    }

    pub fn u(&mut self, p: u64) -> Result<&BigUint> {
        self.extend_to(p)?;
        Ok(&self.values[(p - 1) as usize])
    }
}

static TABLES: LazyLock<Mutex<HashMap<u64, SylvesterTable>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));

/// `u(p,q)`, memoized across calls.
pub fn u(p: u64, q: u64) -> Result<BigUint> {
    if p == 0 {
        return Err(Error::ZeroIndex);
    }
    if q == 0 {
        return Err(Error::ZeroQ);
    }
    if p > DEFAULT_DEPTH_CAP {
        return Err(Error::DepthCap { p, cap: DEFAULT_DEPTH_CAP });
    }
    let mut tables = TABLES.lock().unwrap_or_else(|e| e.into_inner());
    let table = match tables.get_mut(&q) {
        Some(t) => t,
        None => tables.entry(q).or_insert(SylvesterTable::new(q)?),
    };
    table.u(p).cloned()
}

/// `t(p,q) = 1 + u(p,q)`; for `q = 1` this is Sylvester's sequence 2, 3, 7, 43, ...
pub fn sylvester_term(p: u64, q: u64) -> Result<BigUint> {
    Ok(u(p, q)? + 1u32)
}

/// Checks, for every `1 <= p <= p_max` and `1 <= q <= q_max`, that
/// `sum_{i<=p} 1/(1+u(i,q)) = 1/q - 1/u(p+1,q)` and
/// `prod_{i<=p} (1+u(i,q)) = u(p+1,q)/q`.
pub fn check_identities(p_max: u64, q_max: u64) -> Result<VerificationReport> {
    let start = Instant::now();
    let mut report = VerificationReport::new(Parameters {
        p_max: Some(p_max),
        q_max: Some(q_max),
        ..Parameters::default()
    });
    for q in 1..=q_max {
        let mut table = SylvesterTable::with_cap(q, p_max.max(1) + 1)?;
        table.extend_to(p_max + 1)?;
        let vals = table.values().to_vec();
        let inv_q = Rational::new(1, q)?;
        let mut sum = Rational::zero();
        let mut prod = BigUint::one();
        for p in 1..=p_max {
            let t = &vals[(p - 1) as usize] + 1u32;
            sum = sum + Rational::unit(&t);
            prod *= &t;
            report.stats.nodes += 1;
            let next = &vals[p as usize];
            if sum != &inv_q - Rational::unit(next) {
                report.counterexamples.push(Counterexample::identity(Claim::SylvesterSum, p, q));
            }
            if &prod * q != *next {
                report.counterexamples.push(Counterexample::identity(Claim::SylvesterProduct, p, q));
            }
        }
    }
    report.stats.millis = Some(start.elapsed().as_millis() as u64);
    Ok(report.finish())
}
