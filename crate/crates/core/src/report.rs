//! Verification report shared by the identity checks and the oracle.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::bounds::EqualityTag;
use crate::egyptian::EgyptianTuple;
use crate::numeric::{big_str, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Claim {
    SylvesterSum,
    SylvesterProduct,
    /// A complete tuple whose sum lies strictly between the sharp bound and `k - delta`.
    GapWindow,
    /// A prefix at or above the sharp bound with slots left; the recorded tuple is
    /// one concrete completion landing inside the window.
    EarlyWindow,
    /// Incremental prefix sum disagrees with a direct recomputation.
    LeafMismatch,
    LcmBound,
    LcmSquare,
    /// Search-found gap attainers differ from the extremal constructor.
    GapEquality,
    /// Search-found lcm maximizers at the bound differ from the extremal constructor.
    LcmEquality,
    /// Attainment of the lcm bound disagrees with the divisibility conditions.
    LcmAttainability,
    /// `classify_equality` disagrees with the family an attainer belongs to.
    Classification,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub claim: Claim,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub tuple: Option<EgyptianTuple>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub delta: Option<Rational>,
    pub q: u64,
    pub detail: String,
}

impl Counterexample {
    pub fn identity(claim: Claim, p: u64, q: u64) -> Self {
        Counterexample { claim, tuple: None, delta: None, q, detail: format!("p={p}") }
    }

    pub fn tuple(claim: Claim, tuple: EgyptianTuple, delta: &Rational, q: u64, detail: String) -> Self {
        Counterexample { claim, tuple: Some(tuple), delta: Some(delta.clone()), q, detail }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Witness {
    pub tuple: EgyptianTuple,
    pub delta: Rational,
    pub q: u64,
    pub family: EqualityTag,
}

/// Outcome of the lcm search over one deficiency class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LcmClass {
    pub k: u64,
    pub delta: Rational,
    pub q: u64,
    pub class_size: usize,
    #[serde(with = "big_str::option")]
    pub max_lcm: Option<BigUint>,
    pub maximizers: Vec<EgyptianTuple>,
    pub bound: Rational,
    /// Whether some tuple of the class reaches the bound.
    pub attained: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaQ {
    pub delta: Rational,
    pub q: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Parameters {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k_range: Option<(u64, u64)>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub deltas: Vec<DeltaQ>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub p_max: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub q_max: Option<u64>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stats {
    pub nodes: u64,
    /// Wall time; omitted from serialized output unless explicitly kept, so
    /// that reports stay byte-stable.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub millis: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub passed: bool,
    pub parameters: Parameters,
    pub counterexamples: Vec<Counterexample>,
    pub equality_witnesses: Vec<Witness>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub lcm_classes: Vec<LcmClass>,
    pub budget_exceeded: bool,
    pub stats: Stats,
}

impl VerificationReport {
    pub fn new(parameters: Parameters) -> Self {
        VerificationReport {
            passed: true,
            parameters,
            counterexamples: Vec::new(),
            equality_witnesses: Vec::new(),
            lcm_classes: Vec::new(),
            budget_exceeded: false,
            stats: Stats::default(),
        }
    }

    /// Recomputes `passed`.
    pub fn finish(mut self) -> Self {
        self.passed = self.counterexamples.is_empty() && !self.budget_exceeded;
        self
    }

    /// Appends `other`'s findings. Order of merging does not affect the
    /// result once [`VerificationReport::normalize`] is applied.
    pub fn merge(&mut self, other: VerificationReport) {
        self.counterexamples.extend(other.counterexamples);
        self.equality_witnesses.extend(other.equality_witnesses);
        self.lcm_classes.extend(other.lcm_classes);
        self.budget_exceeded |= other.budget_exceeded;
        self.stats.nodes += other.stats.nodes;
        self.stats.millis = match (self.stats.millis, other.stats.millis) {
            (Some(a), Some(b)) => Some(a + b),
            (a, b) => a.or(b),
        };
    }

    /// Sorts every list into a canonical order.
    pub fn normalize(mut self) -> Self {
        self.counterexamples.sort_by(|a, b| {
            (a.claim, &a.delta, a.q, &a.tuple, &a.detail).cmp(&(b.claim, &b.delta, b.q, &b.tuple, &b.detail))
        });
        self.equality_witnesses.sort_by(|a, b| {
            (&a.delta, a.q, a.tuple.len(), &a.tuple).cmp(&(&b.delta, b.q, b.tuple.len(), &b.tuple))
        });
        self.equality_witnesses.dedup();
        self.lcm_classes.sort_by(|a, b| (&a.delta, a.q, a.k).cmp(&(&b.delta, b.q, b.k)));
        self.finish()
    }

    pub fn without_timing(mut self) -> Self {
        self.stats.millis = None;
        self
    }
}
