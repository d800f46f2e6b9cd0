//! Bivariate partial information decomposition over finite discrete
//! distributions.
//!
//! Given a joint distribution of a target `S` and two predictors `X1`, `X2`,
//! this crate computes how the mutual information `I(S; X1 X2)` splits into
//! shared (SI), unique (UI1, UI2) and complementary (CI) parts under two
//! measures:
//!
//! * [`imin_decomposition`] — the minimum-specific-information measure
//!   (`imin`), where shared information is the expected minimum specific
//!   information of the predictors about each target outcome;
//! * [`broja_decomposition`] — the optimization-based measure (`broja`),
//!   where unique information is the minimum of `I_Q(S; X1 | X2)` over all
//!   joints `Q` preserving both `(S, Xi)` pair marginals.
//!
//! On top of either measure sits the *extractable* operator
//! ([`extract`]): the supremum of a measure over all deterministic
//! functions of the target, i.e. over all set partitions of the target
//! alphabet. It is the smallest left-monotonic measure dominating the
//! original one. [`extracted_decomposition`] rebuilds a full decomposition
//! from the extracted shared information.
//!
//! The [`blackwell`] module decides channel dominance ("is the channel
//! `S -> X1` a garbling of `S -> X2`?") with a floating-point phase-1
//! simplex and, for rational inputs, an exact arithmetic backend. Zero
//! BROJA unique information is equivalent to this dominance, which makes
//! the pair a useful cross-check; the extracted measure provably loses
//! that equivalence, and [`fixtures::counterexample`] ships a distribution
//! witnessing the failure.
//!
//! All information quantities are in bits (log base 2) unless a caller
//! converts otherwise, `0 * log 0 = 0` throughout, and zero-probability
//! outcomes are skipped.

pub mod blackwell;
pub mod broja;
pub mod decomp;
pub mod dist;
mod error;
pub mod exact;
pub mod extract;
pub mod fixtures;
pub mod imin;
pub mod io;
pub mod partitions;
pub mod polytope;
pub mod simplex;

pub use blackwell::{blackwell_property_check, is_garbling, GarblingQuery, GarblingVerdict};
pub use broja::{broja_decomposition, broja_ui, SolverConfig};
pub use decomp::{PidResult, SolverDiagnostics};
pub use dist::{Channel, JointDistribution};
pub use error::{Error, Result};
pub use extract::{
    check_proposition_bound, extract, extracted_decomposition, verify_markov_consequence,
    ExtractionResult, Measure, SiMeasure,
};
pub use imin::{i_min, imin_decomposition, specific_information, SourceSpec};
pub use partitions::{bell_number, enumerate_partitions, SetPartition};

/// Probability mass functions must sum to one within this tolerance.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-12;
