//! Exact arithmetic for unit-fraction (Egyptian fraction) representations:
//! generalized Sylvester sequences, greedy and exhaustive expansions, the sharp
//! gap and lcm bounds for `k`-term sums together with their extremal tuples,
//! an exhaustive verification oracle, and the translation to log structures on
//! projective space.

pub mod bounds;
pub mod egyptian;
pub mod error;
pub mod geometry;
pub mod majorization;
pub mod numeric;
pub mod oracle;
pub mod report;
pub mod sylvester;

pub use bounds::{
    classify_equality, extremal_gap_tuple, extremal_lcm_tuple, gap_amount, lcm_bound, sharp_sum_bound, EqualityCase,
    EqualityTag,
};
pub use egyptian::{enumerate_deficiency, enumerate_exact, greedy, split_expand, tuple_lcm, tuple_sum, EgyptianTuple};
pub use error::{Error, Result};
pub use geometry::{bpf_index, gap_bound_mr, index_bound_mr, volume, LogStructure, StandardCoefficient};
pub use numeric::{canonical_q, check_o1, floor_frac, srq_decompose, Rational, Srq};
pub use oracle::{lcm_square_check, max_lcm_search, sweep, window_search, QMode, SweepConfig};
pub use report::VerificationReport;
pub use sylvester::{check_identities, sylvester_term, u, SylvesterTable};
