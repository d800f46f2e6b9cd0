//! Blackwell dominance between the two predictor channels.
//!
//! The channel `S -> X1` is a *garbling* (degradation) of `S -> X2` when
//! a row-stochastic matrix lambda exists with `kappa1 = kappa2 * lambda`:
//! everything `X1` says about `S` can be simulated by post-processing
//! `X2`. Deciding this is a linear feasibility problem in the entries of
//! lambda.
//!
//! Two backends answer it. The default is the floating phase-1 simplex:
//! a phase-1 optimum at most `1e-10` counts as feasible, at least `1e-7`
//! as infeasible, and the band between is *marginal*. Marginal verdicts
//! escalate to exact rational elimination when the query carries exact
//! channel entries, so no verdict of record hinges on a tolerance.
//!
//! Garbling ties into the decomposition: the `broja` unique information
//! `UI(S; X1 \ X2)` vanishes exactly when `S -> X1` is a garbling of
//! `S -> X2` ([`blackwell_property_check`] tests the equivalence on a
//! given joint). The extracted measure deliberately gives this up:
//! [`crate::fixtures::counterexample`] has `UI* = 0` at the maximizing
//! coarsening while the S-level garbling is infeasible.

use crate::broja::{broja_ui, SolverConfig};
use crate::dist::{Channel, JointDistribution};
use crate::error::{Error, Result};
use crate::exact::{garbling_feasible_exact, RationalJoint};
use crate::simplex::lp_feasibility;
use num::rational::BigRational;
use num::ToPrimitive;
use serde::Serialize;

/// Phase-1 mass at or below this is feasible.
pub const FEASIBLE_TOL: f64 = 1e-10;
/// Phase-1 mass at or above this is infeasible; between the two bounds
/// the verdict is marginal.
pub const INFEASIBLE_TOL: f64 = 1e-7;

/// Which predictor is the candidate garbling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Direction {
    /// Is `S -> X1` a garbling of `S -> X2`?
    X1OfX2,
    /// Is `S -> X2` a garbling of `S -> X1`?
    X2OfX1,
}

/// A garbling feasibility question: is `coarse` a garbling of `fine`?
#[derive(Debug, Clone)]
pub struct GarblingQuery {
    fine: Channel,
    coarse: Channel,
    exact: Option<ExactChannels>,
}

#[derive(Debug, Clone)]
struct ExactChannels {
    fine: Vec<Vec<BigRational>>,
    coarse: Vec<Vec<BigRational>>,
}

/// Outcome of a garbling feasibility check.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum GarblingVerdict {
    /// A witness lambda exists: `coarse = fine * lambda`.
    Feasible {
        /// Row-stochastic witness, indexed `[fine output][coarse output]`.
        witness: Vec<Vec<f64>>,
        /// Largest violation of the defining equations by the witness.
        max_residual: f64,
        /// Phase-1 mass of the floating solve.
        phase1: f64,
    },
    /// No witness exists; `phase1` is the L1 distance to feasibility.
    Infeasible { phase1: f64 },
    /// The floating solve landed between the tolerance bands and no
    /// exact data was available to settle it.
    Marginal { phase1: f64 },
}

impl GarblingQuery {
    /// A query asking whether `coarse` is a garbling of `fine`. The
    /// channels must share their input alphabet and support.
    pub fn new(fine: Channel, coarse: Channel) -> Result<GarblingQuery> {
        if fine.input_size() != coarse.input_size() {
            return Err(Error::invalid(
                "garbling channels must share their input alphabet",
            ));
        }
        if fine.support() != coarse.support() {
            return Err(Error::invalid(
                "garbling channels must share their input support",
            ));
        }
        Ok(GarblingQuery {
            fine,
            coarse,
            exact: None,
        })
    }

    /// Attaches exact rational entries (same shapes as the floating
    /// channels, agreeing within 1e-9) to enable exact escalation.
    pub fn with_exact(
        mut self,
        fine: Vec<Vec<BigRational>>,
        coarse: Vec<Vec<BigRational>>,
    ) -> Result<GarblingQuery> {
        let check = |rows: &[Vec<BigRational>], ch: &Channel, label: &str| -> Result<()> {
            if rows.len() != ch.input_size()
                || rows.iter().any(|r| r.len() != ch.output_size())
            {
                return Err(Error::invalid(format!(
                    "exact {label} channel shape mismatch"
                )));
            }
            for (s, row) in rows.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    let f = v.to_f64().unwrap_or(f64::NAN);
                    if !(f - ch.row(s)[j]).abs().le(&1e-9) {
                        return Err(Error::invalid(format!(
                            "exact {label} channel disagrees with the floating one at ({s}, {j})"
                        )));
                    }
                }
            }
            Ok(())
        };
        check(&fine, &self.fine, "fine")?;
        check(&coarse, &self.coarse, "coarse")?;
        self.exact = Some(ExactChannels { fine, coarse });
        Ok(self)
    }

    pub fn fine(&self) -> &Channel {
        &self.fine
    }

    pub fn coarse(&self) -> &Channel {
        &self.coarse
    }

    pub fn has_exact(&self) -> bool {
        self.exact.is_some()
    }

    /// Runs the exact rational backend, independent of the floating one.
    /// `None` when the query carries no exact entries.
    pub fn rational_check(&self) -> Option<Result<(bool, Option<Vec<Vec<BigRational>>>)>> {
        let exact = self.exact.as_ref()?;
        Some(garbling_feasible_exact(
            &exact.fine,
            &exact.coarse,
            self.fine.support(),
        ))
    }
}

/// Builds the query for `dist` in the given direction (float-only).
pub fn garbling_query(dist: &JointDistribution, direction: Direction) -> Result<GarblingQuery> {
    if dist.n_axes() != 3 {
        return Err(Error::invalid("garbling queries need axes (S, X1, X2)"));
    }
    let to_x1 = dist.channel_from(0, 1)?;
    let to_x2 = dist.channel_from(0, 2)?;
    match direction {
        Direction::X1OfX2 => GarblingQuery::new(to_x2, to_x1),
        Direction::X2OfX1 => GarblingQuery::new(to_x1, to_x2),
    }
}

/// Builds the query from an exact rational joint; both the floating
/// channels and their exact entries come from the same source.
pub fn garbling_query_exact(
    joint: &RationalJoint,
    direction: Direction,
) -> Result<GarblingQuery> {
    if joint.sizes().len() != 3 {
        return Err(Error::invalid("garbling queries need axes (S, X1, X2)"));
    }
    let (r1, support1) = joint.channel(0, 1)?;
    let (r2, support2) = joint.channel(0, 2)?;
    let to_float = |rows: &[Vec<BigRational>], support: &[bool]| -> Result<Channel> {
        let frows: Vec<Vec<f64>> = rows
            .iter()
            .map(|r| r.iter().map(|v| v.to_f64().unwrap_or(f64::NAN)).collect())
            .collect();
        Channel::from_rows(frows, support.to_vec())
    };
    let c1 = to_float(&r1, &support1)?;
    let c2 = to_float(&r2, &support2)?;
    match direction {
        Direction::X1OfX2 => GarblingQuery::new(c2, c1)?.with_exact(r2, r1),
        Direction::X2OfX1 => GarblingQuery::new(c1, c2)?.with_exact(r1, r2),
    }
}

/// Decides the query: floating phase-1 simplex first, exact escalation
/// inside the marginal band when exact entries are attached.
pub fn is_garbling(query: &GarblingQuery) -> Result<GarblingVerdict> {
    let fine = &query.fine;
    let coarse = &query.coarse;
    let m2 = fine.output_size();
    let m1 = coarse.output_size();
    let nvars = m1 * m2; // lambda[x2][x1] at x2 * m1 + x1.
    let mut a: Vec<Vec<f64>> = Vec::new();
    let mut b: Vec<f64> = Vec::new();
    for s in 0..fine.input_size() {
        if !fine.is_supported(s) {
            continue;
        }
        for x1 in 0..m1 {
            let mut row = vec![0.0; nvars];
            for x2 in 0..m2 {
                row[x2 * m1 + x1] = fine.row(s)[x2];
            }
            a.push(row);
            b.push(coarse.row(s)[x1]);
        }
    }
    for x2 in 0..m2 {
        let mut row = vec![0.0; nvars];
        for x1 in 0..m1 {
            row[x2 * m1 + x1] = 1.0;
        }
        a.push(row);
        b.push(1.0);
    }
    let lp = lp_feasibility(&a, &b)?;
    let phase1 = lp.phase1_value;
    if phase1 <= FEASIBLE_TOL {
        let witness: Vec<Vec<f64>> = (0..m2)
            .map(|x2| lp.point[x2 * m1..(x2 + 1) * m1].to_vec())
            .collect();
        let max_residual = witness_residual(&a, &b, &lp.point);
        return Ok(GarblingVerdict::Feasible {
            witness,
            max_residual,
            phase1,
        });
    }
    if phase1 >= INFEASIBLE_TOL {
        return Ok(GarblingVerdict::Infeasible { phase1 });
    }
    // Marginal band: settle exactly if we can.
    match query.rational_check() {
        Some(Ok((true, Some(witness)))) => {
            let float_witness: Vec<Vec<f64>> = witness
                .iter()
                .map(|r| r.iter().map(|v| v.to_f64().unwrap_or(f64::NAN)).collect())
                .collect();
            let flat: Vec<f64> = float_witness.iter().flatten().copied().collect();
            let max_residual = witness_residual(&a, &b, &flat);
            Ok(GarblingVerdict::Feasible {
                witness: float_witness,
                max_residual,
                phase1,
            })
        }
        Some(Ok((false, _))) => Ok(GarblingVerdict::Infeasible { phase1 }),
        Some(Ok((true, None))) => unreachable!("exact feasibility always carries a witness"),
        Some(Err(_)) | None => Ok(GarblingVerdict::Marginal { phase1 }),
    }
}

fn witness_residual(a: &[Vec<f64>], b: &[f64], point: &[f64]) -> f64 {
    let mut worst = 0.0_f64;
    for (row, &rhs) in a.iter().zip(b) {
        let lhs: f64 = row.iter().zip(point).map(|(&c, &x)| c * x).sum();
        worst = worst.max((lhs - rhs).abs());
    }
    for &x in point {
        worst = worst.max((-x).max(0.0));
    }
    worst
}

/// Joint report on the equivalence "zero unique information iff the
/// predictor's channel is a garbling of the other's".
#[derive(Debug, Clone, Serialize)]
pub struct BlackwellPropertyReport {
    /// `UI(S; X_which \ X_other)` in bits.
    pub ui: f64,
    /// Whether the garbling system was feasible (marginal counts as not
    /// garbling; it cannot occur when exact entries are available).
    pub garbling: bool,
    pub verdict: GarblingVerdict,
    /// `garbling == (ui <= 1e-8)`.
    pub consistent: bool,
}

/// Checks the zero-UI/garbling equivalence for predictor `which` (1 or
/// 2) on `dist`.
pub fn blackwell_property_check(
    dist: &JointDistribution,
    which: usize,
    cfg: &SolverConfig,
) -> Result<BlackwellPropertyReport> {
    let direction = match which {
        1 => Direction::X1OfX2,
        2 => Direction::X2OfX1,
        _ => return Err(Error::invalid("predictor must be 1 or 2")),
    };
    let (ui, _) = broja_ui(dist, which, cfg)?;
    let verdict = is_garbling(&garbling_query(dist, direction)?)?;
    let garbling = matches!(verdict, GarblingVerdict::Feasible { .. });
    Ok(BlackwellPropertyReport {
        ui,
        garbling,
        verdict,
        consistent: garbling == (ui <= 1e-8),
    })
}
