//! Exhaustive verification of the gap and lcm bounds over small parameter ranges.
//!
//! The window search walks nondecreasing denominators depth first. With
//! `T = k - delta`, `c = sharp_sum_bound(k, delta, q)` and prefix sum `P` with
//! `j` slots left:
//!
//! * `P >= T`: prune, the sum only grows;
//! * `c <= P < T` with `j >= 1`: arbitrarily large remaining denominators land
//!   strictly inside `(c, T)`, so the prefix alone refutes the gap bound; one
//!   concrete completion is reported;
//! * `P < c`: the next denominator `m` must satisfy `j/m >= c - P` to reach the
//!   window (or its lower edge) and `P + 1/m < T` to stay below `T`.
//!
//! Leaves at exactly `c` are equality witnesses; leaves strictly inside the
//! window are counterexamples.

use std::collections::BTreeSet;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Instant;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;

use crate::bounds::{
    classify_equality, extremal_gap_tuple, extremal_lcm_tuple, lcm_attainable, lcm_bound, sharp_sum_bound, EqualityTag,
};
use crate::egyptian::{enumerate_deficiency, EgyptianTuple};
use crate::error::{Error, Result};
use crate::numeric::{big_lcm, canonical_q, srq_decompose, validate_delta, Rational};
use crate::report::{Claim, Counterexample, DeltaQ, LcmClass, Parameters, VerificationReport, Witness};

pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Node budget shared by every search of one run.
#[derive(Debug)]
pub struct Budget {
    limit: u64,
    used: AtomicU64,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget { limit, used: AtomicU64::new(0) }
    }

    /// Charges one node; `false` once the limit is passed.
    fn tick(&self) -> bool {
        self.used.fetch_add(1, Ordering::Relaxed) < self.limit
    }

    fn exhausted(&self) -> bool {
        self.used.load(Ordering::Relaxed) >= self.limit
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(DEFAULT_BUDGET)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QMode {
    Canonical,
    /// Every `q <= N` with `q * delta` integral.
    AllUpTo(u64),
}

impl QMode {
    pub fn qs(&self, delta: &Rational) -> Result<Vec<u64>> {
        match *self {
            QMode::Canonical => Ok(vec![canonical_q(delta)?]),
            QMode::AllUpTo(n) => Ok((1..=n).filter(|&q| delta.scale(q).is_integer()).collect()),
        }
    }
}

/// `canonical` or `all-upto:N`.
impl FromStr for QMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "canonical" {
            return Ok(QMode::Canonical);
        }
        s.strip_prefix("all-upto:")
            .and_then(|n| n.parse::<u64>().ok())
            .filter(|&n| n >= 1)
            .map(QMode::AllUpTo)
            .ok_or_else(|| Error::Config(format!("unknown q mode {s:?}")))
    }
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    /// Tuple lengths `1..=k_max`.
    pub k_max: u64,
    pub deltas: Vec<Rational>,
    pub q_mode: QMode,
    pub budget: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig { k_max: 0, deltas: Vec::new(), q_mode: QMode::Canonical, budget: DEFAULT_BUDGET }
    }
}

/// Comma-separated rationals, e.g. `-1,1/2,3`.
pub fn parse_delta_list(s: &str) -> Result<Vec<Rational>> {
    s.split(',').filter(|p| !p.trim().is_empty()).map(str::parse).collect()
}

struct Window<'a> {
    k: u64,
    delta: &'a Rational,
    q: u64,
    target: Rational,
    bound: Rational,
    budget: &'a Budget,
}

impl Window<'_> {
    fn report(&self) -> VerificationReport {
        VerificationReport::new(Parameters {
            k_range: Some((self.k, self.k)),
            deltas: vec![DeltaQ { delta: self.delta.clone(), q: self.q }],
            ..Parameters::default()
        })
    }

    /// Range of the next denominator for a prefix strictly below the bound.
    fn children(&self, prefix_sum: &Rational, slots: u64, prev: &BigUint) -> Option<(BigUint, BigUint)> {
        let need = &self.bound - prefix_sum;
        let hi = Rational::from(slots).checked_div(&need).ok()?.floor().to_biguint()?;
        let room = &self.target - prefix_sum;
        let lo = (room.recip().ok()?.floor() + 1u32).to_biguint()?.max(prev.clone());
        (lo <= hi).then_some((lo, hi))
    }

    fn visit(&self, prefix: &mut Vec<BigUint>, sum: &Rational, slots: u64, out: &mut VerificationReport) {
        if !self.budget.tick() {
            out.budget_exceeded = true;
            return;
        }
        out.stats.nodes += 1;
        if slots == 0 {
            self.leaf(prefix, sum, out);
            return;
        }
        if *sum >= self.target {
            return;
        }
        if *sum >= self.bound {
            self.early_window(prefix, sum, slots, out);
            return;
        }
        let prev = prefix.last().cloned().unwrap_or_else(BigUint::one);
        let Some((lo, hi)) = self.children(sum, slots, &prev) else {
            return;
        };
        let mut m = lo;
        while m <= hi {
            let next = sum + Rational::unit(&m);
            prefix.push(m.clone());
            self.visit(prefix, &next, slots - 1, out);
            prefix.pop();
            if out.budget_exceeded {
                return;
            }
            m += 1u32;
        }
    }

    fn leaf(&self, prefix: &[BigUint], sum: &Rational, out: &mut VerificationReport) {
        let tuple = EgyptianTuple::new(prefix.to_vec()).expect("search keeps order");
        let direct = tuple.sum();
        if direct != *sum {
            out.counterexamples.push(Counterexample::tuple(
                Claim::LeafMismatch,
                tuple,
                self.delta,
                self.q,
                format!("incremental {sum}, direct {direct}"),
            ));
            return;
        }
        if direct >= self.target {
            return;
        }
        if direct > self.bound {
            out.counterexamples.push(Counterexample::tuple(
                Claim::GapWindow,
                tuple,
                self.delta,
                self.q,
                format!("sum {direct} inside ({}, {})", self.bound, self.target),
            ));
        } else if direct == self.bound {
            let family = classify_equality(&tuple, self.delta, self.q)
                .map(|c| c.tag)
                .unwrap_or(EqualityTag::None);
            out.equality_witnesses.push(Witness { tuple, delta: self.delta.clone(), q: self.q, family });
        }
    }

    fn early_window(&self, prefix: &[BigUint], sum: &Rational, slots: u64, out: &mut VerificationReport) {
        // Fill every remaining slot with M > slots/(T - P): the total stays below T.
        let room = &self.target - sum;
        let prev = prefix.last().cloned().unwrap_or_else(BigUint::one);
        let fill = (Rational::from(slots) / room).floor().to_biguint().expect("positive") + 1u32;
        let fill = fill.max(prev);
        let mut ms = prefix.to_vec();
        ms.extend(std::iter::repeat_n(fill, slots as usize));
        let tuple = EgyptianTuple::new(ms).expect("nondecreasing");
        let completed = tuple.sum();
        out.counterexamples.push(Counterexample::tuple(
            Claim::EarlyWindow,
            tuple,
            self.delta,
            self.q,
            format!("prefix sum {sum} with {slots} slots left; completion sums to {completed}"),
        ));
    }
}

/// Searches for `k`-term sums strictly between `sharp_sum_bound(k, delta, q)`
/// and `k - delta`, and collects every tuple attaining the bound.
pub fn window_search(k: u64, delta: &Rational, q: u64) -> Result<VerificationReport> {
    window_search_with_budget(k, delta, q, &Budget::default())
}

pub fn window_search_with_budget(k: u64, delta: &Rational, q: u64, budget: &Budget) -> Result<VerificationReport> {
    validate_delta(delta, q)?;
    let start = Instant::now();
    let w = Window {
        k,
        delta,
        q,
        target: Rational::from(k) - delta,
        bound: sharp_sum_bound(k, delta, q)?,
        budget,
    };
    let mut report = w.report();
    let root = Rational::zero();
    let top = if k == 0 || root >= w.bound { None } else { w.children(&root, k, &BigUint::one()) };
    match top {
        None => w.visit(&mut Vec::new(), &root, k, &mut report),
        Some((lo, hi)) => {
            // The root itself.
            if budget.tick() {
                report.stats.nodes += 1;
                let lo = lo.to_u64().ok_or_else(|| Error::Overflow("first denominator".into()))?;
                let hi = hi.to_u64().ok_or_else(|| Error::Overflow("first denominator".into()))?;
                let parts: Vec<VerificationReport> = (lo..=hi)
                    .into_par_iter()
                    .map(|m1| {
                        let mut part = w.report();
                        let m1 = BigUint::from(m1);
                        let sum = Rational::unit(&m1);
                        w.visit(&mut vec![m1], &sum, k - 1, &mut part);
                        part
                    })
                    .collect();
                for part in parts {
                    report.merge(part);
                }
            } else {
                report.budget_exceeded = true;
            }
        }
    }
    report.stats.millis = Some(start.elapsed().as_millis() as u64);
    Ok(report.normalize())
}

/// `L^2 <= q * prod m_i` with `L = lcm(q, m_1, ..., m_k)`.
pub fn lcm_square_check(t: &EgyptianTuple, q: u64) -> bool {
    let l = big_lcm(&t.lcm(), &BigUint::from(q));
    &l * &l <= t.product() * q
}

/// Maximum lcm over the tuples of length `k` summing to `k - delta`, checked
/// against `lcm_bound(delta, q)`. Every class member also goes through
/// [`lcm_square_check`] with the reduced denominator of `delta`, the only `q`
/// guaranteed to divide the lcm.
pub fn max_lcm_search(k: u64, delta: &Rational, q: u64) -> Result<VerificationReport> {
    let start = Instant::now();
    let bound = lcm_bound(delta, q)?;
    let class = enumerate_deficiency(k, delta, q)?;
    let mut report = VerificationReport::new(Parameters {
        k_range: Some((k, k)),
        deltas: vec![DeltaQ { delta: delta.clone(), q }],
        ..Parameters::default()
    });
    report.stats.nodes = class.len() as u64;
    let square_q = canonical_q(delta)?;
    let mut max_lcm: Option<BigUint> = None;
    let mut maximizers = Vec::new();
    for tuple in &class {
        let l = tuple.lcm();
        if Rational::from(l.clone()) > bound {
            report.counterexamples.push(Counterexample::tuple(
                Claim::LcmBound,
                tuple.clone(),
                delta,
                q,
                format!("lcm {l} above bound {bound}"),
            ));
        }
        if !lcm_square_check(tuple, square_q) {
            report.counterexamples.push(Counterexample::tuple(
                Claim::LcmSquare,
                tuple.clone(),
                delta,
                q,
                format!("lcm({square_q}, m)^2 > {square_q} * prod m"),
            ));
        }
        match &max_lcm {
            Some(best) if l < *best => {}
            Some(best) if l == *best => maximizers.push(tuple.clone()),
            _ => {
                max_lcm = Some(l);
                maximizers = vec![tuple.clone()];
            }
        }
    }
    let attained = max_lcm.as_ref().is_some_and(|l| Rational::from(l.clone()) == bound);
    if attained {
        for tuple in &maximizers {
            let family = classify_equality(tuple, delta, q)?.tag;
            report.equality_witnesses.push(Witness { tuple: tuple.clone(), delta: delta.clone(), q, family });
        }
    }
    report.lcm_classes.push(LcmClass {
        k,
        delta: delta.clone(),
        q,
        class_size: class.len(),
        max_lcm,
        maximizers,
        bound,
        attained,
    });
    report.stats.millis = Some(start.elapsed().as_millis() as u64);
    Ok(report.normalize())
}

fn mismatch(claim: Claim, delta: &Rational, q: u64, detail: String) -> Counterexample {
    Counterexample { claim, tuple: None, delta: Some(delta.clone()), q, detail }
}

fn tuple_set<'a>(it: impl Iterator<Item = &'a EgyptianTuple>) -> BTreeSet<EgyptianTuple> {
    it.cloned().collect()
}

fn fmt_set(s: &BTreeSet<EgyptianTuple>) -> String {
    let items: Vec<String> = s.iter().map(ToString::to_string).collect();
    format!("{{{}}}", items.join(", "))
}

/// Gap attainers found by search must be exactly the extremal gap tuple.
fn cross_check_gap(k: u64, delta: &Rational, q: u64, found: &VerificationReport, out: &mut VerificationReport) -> Result<()> {
    let seen = tuple_set(found.equality_witnesses.iter().map(|w| &w.tuple));
    let predicted = tuple_set(extremal_gap_tuple(k, delta, q)?.iter());
    if seen != predicted {
        out.counterexamples.push(mismatch(
            Claim::GapEquality,
            delta,
            q,
            format!("k={k}: search {} vs extremal {}", fmt_set(&seen), fmt_set(&predicted)),
        ));
    }
    for w in &found.equality_witnesses {
        let ok = matches!(w.family, EqualityTag::NegativeDelta | EqualityTag::FractionalDelta | EqualityTag::SylvesterGap);
        if !ok {
            out.counterexamples.push(Counterexample::tuple(
                Claim::Classification,
                w.tuple.clone(),
                delta,
                q,
                format!("gap attainer tagged {:?}", w.family),
            ));
        }
    }
    Ok(())
}

/// Lcm maximizers at the bound must be exactly the extremal lcm tuple, and the
/// bound is reached exactly when the divisibility conditions hold with `k >= s`.
fn cross_check_lcm(k: u64, delta: &Rational, q: u64, found: &VerificationReport, out: &mut VerificationReport) -> Result<()> {
    let srq = srq_decompose(delta, q)?;
    let class = &found.lcm_classes[0];
    let seen = if class.attained { tuple_set(class.maximizers.iter()) } else { BTreeSet::new() };
    let predicted = tuple_set(extremal_lcm_tuple(k, delta, q)?.iter());
    if seen != predicted {
        out.counterexamples.push(mismatch(
            Claim::LcmEquality,
            delta,
            q,
            format!("k={k}: search {} vs extremal {}", fmt_set(&seen), fmt_set(&predicted)),
        ));
    }
    let expect = k >= srq.s && lcm_attainable(&srq);
    if class.attained != expect {
        out.counterexamples.push(mismatch(
            Claim::LcmAttainability,
            delta,
            q,
            format!("k={k} s={} r={}: attained={} predicted={expect}", srq.s, srq.r, class.attained),
        ));
    }
    for w in &found.equality_witnesses {
        if !matches!(w.family, EqualityTag::SylvesterLcm | EqualityTag::TwoTermLcm) {
            out.counterexamples.push(Counterexample::tuple(
                Claim::Classification,
                w.tuple.clone(),
                delta,
                q,
                format!("lcm attainer tagged {:?}", w.family),
            ));
        }
    }
    Ok(())
}

/// Runs the window search for every `(k, delta, q)` and the lcm search for every
/// `delta >= 0`, then cross-checks the equality cases in both directions.
pub fn sweep(config: &SweepConfig) -> Result<VerificationReport> {
    let start = Instant::now();
    let mut pairs = Vec::new();
    for delta in &config.deltas {
        if *delta < Rational::from(-1i64) {
            return Err(Error::Config(format!("delta {delta} is below -1")));
        }
        for q in config.q_mode.qs(delta)? {
            pairs.push(DeltaQ { delta: delta.clone(), q });
        }
    }
    let budget = Budget::new(config.budget);
    let mut report = VerificationReport::new(Parameters {
        k_range: (config.k_max > 0).then_some((1, config.k_max)),
        deltas: pairs.clone(),
        ..Parameters::default()
    });
    'outer: for DeltaQ { delta, q } in &pairs {
        for k in 1..=config.k_max {
            let window = window_search_with_budget(k, delta, *q, &budget)?;
            if window.budget_exceeded || budget.exhausted() {
                report.merge(window);
                report.budget_exceeded = true;
                break 'outer;
            }
            let mut checks = VerificationReport::new(Parameters::default());
            cross_check_gap(k, delta, *q, &window, &mut checks)?;
            report.merge(window);
            report.merge(checks);
            if delta.is_negative() {
                continue;
            }
            let lcm = max_lcm_search(k, delta, *q)?;
            let mut checks = VerificationReport::new(Parameters::default());
            cross_check_lcm(k, delta, *q, &lcm, &mut checks)?;
            report.merge(lcm);
            report.merge(checks);
        }
    }
    report.stats.millis = Some(start.elapsed().as_millis() as u64);
    Ok(report.normalize())
}
