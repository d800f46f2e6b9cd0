//! Shared result types for bivariate decompositions.
//!
//! Every bivariate measure reports the same four parts, tied to the
//! mutual informations by the linear identities
//!
//! ```text
//! I(S; X1 X2) = SI + UI1 + UI2 + CI
//! I(S; X1)    = SI + UI1
//! I(S; X2)    = SI + UI2
//! ```
//!
//! so a single scalar (the shared part, or one unique part) pins down the
//! rest. Constructors here derive the remaining parts from those
//! identities exactly, which keeps the reported numbers self-consistent.

use serde::Serialize;

/// A bivariate partial information decomposition in bits.
#[derive(Debug, Clone, Serialize)]
pub struct PidResult {
    /// Measure tag: `imin`, `broja`, `ext-imin` or `ext-broja`.
    pub measure: String,
    /// Shared (redundant) information.
    pub si: f64,
    /// Information unique to the first predictor.
    pub ui1: f64,
    /// Information unique to the second predictor.
    pub ui2: f64,
    /// Complementary (synergistic) information.
    pub ci: f64,
    /// I(S; X1).
    pub mi_s_x1: f64,
    /// I(S; X2).
    pub mi_s_x2: f64,
    /// I(S; X1 X2).
    pub mi_s_x1x2: f64,
    /// Co-information I(S; X1) - I(S; X1 | X2) = SI - CI.
    pub coinformation: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostics: Option<SolverDiagnostics>,
}

impl PidResult {
    /// Builds a decomposition from its shared part via the linear
    /// identities.
    pub fn from_shared(
        measure: &str,
        si: f64,
        mi_s_x1: f64,
        mi_s_x2: f64,
        mi_s_x1x2: f64,
        coinformation: f64,
    ) -> PidResult {
        let ui1 = mi_s_x1 - si;
        let ui2 = mi_s_x2 - si;
        let ci = mi_s_x1x2 - si - ui1 - ui2;
        PidResult {
            measure: measure.to_string(),
            si,
            ui1,
            ui2,
            ci,
            mi_s_x1,
            mi_s_x2,
            mi_s_x1x2,
            coinformation,
            diagnostics: None,
        }
    }
}

/// Convergence data from the convex solver behind the `broja` measure.
#[derive(Debug, Clone, Serialize)]
pub struct SolverDiagnostics {
    /// Whether at least one restart satisfied the stationarity test.
    pub converged: bool,
    /// Total line-search iterations across restarts (UI1 solve).
    pub iterations: u64,
    /// Number of restarts performed.
    pub restarts: u32,
    /// Spread of the objective across converged restarts (bits).
    pub restart_spread: f64,
    /// Most negative remaining feasible descent slope (bits per unit step).
    pub final_slope: f64,
    /// |UI2 from its own solve - (I(S;X2) - SI)|; the two optimization
    /// routes must agree through the linear identities.
    pub cross_check: f64,
    /// The minimizing joint pmf of the UI1 solve, row-major over
    /// (S, X1, X2).
    pub optimizer_pmf: Vec<f64>,
}
