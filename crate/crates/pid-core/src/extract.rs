//! The extractable ("left-monotone envelope") version of an information
//! measure, and the decomposition built from it.
//!
//! For a measure `IM` of how much the predictors tell about the target,
//! the extractable version is the largest value obtainable by first
//! applying a deterministic function to the target:
//!
//! ```text
//! IM-bar(S) = max over partitions f of the target alphabet of IM(f(S))
//! ```
//!
//! Deterministic functions of `S` correspond to set partitions of its
//! alphabet, so the supremum is a finite enumeration. `IM-bar` dominates
//! `IM`, is unchanged by further target coarsening in the sense of left
//! monotonicity, and equals `IM` whenever `IM` was left monotonic to
//! begin with (mutual information, target entropy, the `broja` unique
//! informations).
//!
//! [`extracted_decomposition`] rebuilds a four-part decomposition from an
//! extracted shared measure: `SI-bar` as extracted shared information,
//! `UI*_i = I(S;X_i) - SI-bar`, and `CI*` as the remainder. All four
//! parts are provably nonnegative. The price is the Blackwell property:
//! `UI* = 0` no longer implies that `S -> X1` is a garbling of
//! `S -> X2` (see [`crate::fixtures::counterexample`]).

use crate::broja::{broja_si, broja_ui, SolverConfig};
use crate::decomp::PidResult;
use crate::dist::JointDistribution;
use crate::error::{Error, Result};
use crate::imin::{i_min, SourceSpec};
use crate::partitions::{enumerate_partitions, SetPartition};
use serde::Serialize;

/// Partition/value tables are retained up to this target alphabet size
/// (203 partitions); beyond it only the maximizer is kept.
const TABLE_LIMIT: usize = 6;
/// Values within this of the maximum count as ties; the lexicographically
/// first tied partition is reported as the maximizer.
const TIE_EPS: f64 = 1e-9;

/// A scalar information measure of a three-axis joint, identified by a
/// stable tag.
#[derive(Debug, Clone)]
pub enum Measure {
    /// Shared information under the `imin` measure.
    IminSi,
    /// Shared information under the `broja` measure.
    BrojaSi(SolverConfig),
    /// `broja` unique information of the first predictor.
    BrojaUi1(SolverConfig),
    /// `broja` unique information of the second predictor.
    BrojaUi2(SolverConfig),
    /// Co-information `I(S;X1) - I(S;X1|X2)`.
    Coinformation,
    /// `I(S; X1)`.
    MutualInformation,
    /// `H(S)`.
    TargetEntropy,
}

impl Measure {
    pub fn tag(&self) -> &'static str {
        match self {
            Measure::IminSi => "imin-si",
            Measure::BrojaSi(_) => "broja-si",
            Measure::BrojaUi1(_) => "broja-ui1",
            Measure::BrojaUi2(_) => "broja-ui2",
            Measure::Coinformation => "coinformation",
            Measure::MutualInformation => "mutual-information",
            Measure::TargetEntropy => "target-entropy",
        }
    }

    /// Looks a measure up by tag; `broja` variants take the given solver
    /// configuration.
    pub fn from_tag(tag: &str, cfg: &SolverConfig) -> Option<Measure> {
        match tag {
            "imin-si" => Some(Measure::IminSi),
            "broja-si" => Some(Measure::BrojaSi(cfg.clone())),
            "broja-ui1" => Some(Measure::BrojaUi1(cfg.clone())),
            "broja-ui2" => Some(Measure::BrojaUi2(cfg.clone())),
            "coinformation" => Some(Measure::Coinformation),
            "mutual-information" => Some(Measure::MutualInformation),
            "target-entropy" => Some(Measure::TargetEntropy),
            _ => None,
        }
    }

    pub fn eval(&self, dist: &JointDistribution) -> Result<f64> {
        match self {
            Measure::IminSi => i_min(dist, &SourceSpec::standard_bivariate()),
            Measure::BrojaSi(cfg) => Ok(broja_si(dist, cfg)?.0),
            Measure::BrojaUi1(cfg) => Ok(broja_ui(dist, 1, cfg)?.0),
            Measure::BrojaUi2(cfg) => Ok(broja_ui(dist, 2, cfg)?.0),
            Measure::Coinformation => dist.coinformation(),
            Measure::MutualInformation => dist.mutual_information(&[0], &[1]),
            Measure::TargetEntropy => dist.entropy(&[0]),
        }
    }

    /// The same measure with solver tolerance tightened for enumeration,
    /// so partition comparisons are not noise-dominated.
    fn tightened(&self) -> Measure {
        let tighten = |cfg: &SolverConfig| SolverConfig {
            objective_tolerance: cfg.objective_tolerance.min(1e-10),
            ..cfg.clone()
        };
        match self {
            Measure::BrojaSi(cfg) => Measure::BrojaSi(tighten(cfg)),
            Measure::BrojaUi1(cfg) => Measure::BrojaUi1(tighten(cfg)),
            Measure::BrojaUi2(cfg) => Measure::BrojaUi2(tighten(cfg)),
            other => other.clone(),
        }
    }
}

/// One row of an extraction table.
#[derive(Debug, Clone, Serialize)]
pub struct PartitionValue {
    pub partition: SetPartition,
    pub value: f64,
}

/// Result of maximizing a measure over target coarsenings.
#[derive(Debug, Clone, Serialize)]
pub struct ExtractionResult {
    /// Tag of the extracted measure.
    pub measure: String,
    /// The maximum over all partitions.
    pub value: f64,
    /// Lexicographically first partition within [`TIE_EPS`] of the
    /// maximum (restricted-growth-string order).
    pub maximizer: SetPartition,
    /// The measure at the identity partition (the unextracted value).
    pub base_value: f64,
    /// Number of partitions evaluated (the Bell number of the target
    /// alphabet size).
    pub evaluated: u64,
    /// Per-partition values, retained for target alphabets of at most 6
    /// symbols.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<PartitionValue>>,
}

/// Maximizes `measure` over all deterministic coarsenings of the target.
pub fn extract(dist: &JointDistribution, measure: &Measure) -> Result<ExtractionResult> {
    if dist.n_axes() != 3 {
        return Err(Error::invalid("extraction needs axes (S, X1, X2)"));
    }
    let n = dist.sizes()[0];
    let tight = measure.tightened();
    let mut values: Vec<f64> = Vec::new();
    let mut table: Option<Vec<PartitionValue>> = (n <= TABLE_LIMIT).then(Vec::new);
    let mut base_value = f64::NAN;
    for f in enumerate_partitions(n)? {
        let quotient = dist.quotient_target(&f)?;
        let v = tight.eval(&quotient)?;
        if f.is_identity() {
            base_value = v;
        }
        if let Some(rows) = table.as_mut() {
            rows.push(PartitionValue {
                partition: f.clone(),
                value: v,
            });
        }
        values.push(v);
    }
    let value = values.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v));
    let mut maximizer = None;
    for (i, f) in enumerate_partitions(n)?.enumerate() {
        if values[i] >= value - TIE_EPS {
            maximizer = Some(f);
            break;
        }
    }
    Ok(ExtractionResult {
        measure: measure.tag().to_string(),
        value,
        maximizer: maximizer.expect("the maximum is attained by an enumerated partition"),
        base_value,
        evaluated: values.len() as u64,
        table,
    })
}

/// The shared-information measure underlying an extracted decomposition.
#[derive(Debug, Clone)]
pub enum SiMeasure {
    Imin,
    Broja(SolverConfig),
}

impl SiMeasure {
    pub fn tag(&self) -> &'static str {
        match self {
            SiMeasure::Imin => "ext-imin",
            SiMeasure::Broja(_) => "ext-broja",
        }
    }

    pub fn measure(&self) -> Measure {
        match self {
            SiMeasure::Imin => Measure::IminSi,
            SiMeasure::Broja(cfg) => Measure::BrojaSi(cfg.clone()),
        }
    }

    /// The measure's own (unextracted) shared information.
    pub fn shared(&self, dist: &JointDistribution) -> Result<f64> {
        self.measure().eval(dist)
    }

    /// The measure's own unique information of predictor `which`.
    pub fn unique(&self, dist: &JointDistribution, which: usize) -> Result<f64> {
        match self {
            SiMeasure::Imin => {
                let mi = dist.mutual_information(&[0], &[which])?;
                Ok(mi - i_min(dist, &SourceSpec::standard_bivariate())?)
            }
            SiMeasure::Broja(cfg) => Ok(broja_ui(dist, which, cfg)?.0),
        }
    }
}

/// The decomposition induced by extracted shared information:
/// `SI-bar = max over f of SI(f(S))`, `UI*_i = I(S;X_i) - SI-bar`, and
/// `CI*` as the remainder against `I(S;X1X2)`. Also returns the
/// extraction itself (maximizer, table).
pub fn extracted_decomposition(
    dist: &JointDistribution,
    si: &SiMeasure,
) -> Result<(PidResult, ExtractionResult)> {
    let extraction = extract(dist, &si.measure())?;
    let mi1 = dist.mutual_information(&[0], &[1])?;
    let mi2 = dist.mutual_information(&[0], &[2])?;
    let mi12 = dist.mutual_information(&[0], &[1, 2])?;
    let coi = dist.coinformation()?;
    let result = PidResult::from_shared(si.tag(), extraction.value, mi1, mi2, mi12, coi);
    Ok((result, extraction))
}

/// Consequences of a vanishing extracted unique information.
#[derive(Debug, Clone, Serialize)]
pub struct MarkovReport {
    /// `UI*(S; X1 \ X2) = I(S;X1) - SI-bar`.
    pub ui_star: f64,
    /// The extraction maximizer `f*`.
    pub maximizer: SetPartition,
    /// Whether the hypothesis `UI* = 0` is met (within 1e-7).
    pub applicable: bool,
    /// `I(S; X1 | f*(S))`, when applicable: zero means `X1 - f*(S) - S`
    /// is a Markov chain.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conditional_mi: Option<f64>,
    /// The measure's own `UI(f*(S); X1 \ X2)`, when applicable.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quotient_ui: Option<f64>,
    /// True when the consequences hold (vacuously true when the
    /// hypothesis is not met).
    pub ok: bool,
}

/// When `UI*(S;X1\X2) = 0`, the maximizer `f*` must screen `X1` off from
/// `S` (`I(S;X1|f*(S)) = 0`) and carry no unique information itself.
/// Verifies both consequences within 1e-7.
pub fn verify_markov_consequence(
    dist: &JointDistribution,
    si: &SiMeasure,
) -> Result<MarkovReport> {
    let (pid, extraction) = extracted_decomposition(dist, si)?;
    let ui_star = pid.ui1;
    let maximizer = extraction.maximizer.clone();
    if ui_star.abs() > 1e-7 {
        return Ok(MarkovReport {
            ui_star,
            maximizer,
            applicable: false,
            conditional_mi: None,
            quotient_ui: None,
            ok: true,
        });
    }
    let with_f = dist.append_partition_axis(&maximizer)?;
    // Axes after appending: (S, X1, X2, f(S)).
    let conditional_mi = with_f.conditional_mutual_information(&[0], &[1], &[3])?;
    let quotient = dist.quotient_target(&maximizer)?;
    let quotient_ui = si.unique(&quotient, 1)?;
    Ok(MarkovReport {
        ui_star,
        maximizer,
        applicable: true,
        conditional_mi: Some(conditional_mi),
        quotient_ui: Some(quotient_ui),
        ok: conditional_mi <= 1e-7 && quotient_ui <= 1e-7,
    })
}

/// Whether a decomposition respects the coarsening bound
/// `SI(f(X1,X2); X1, X2) <= I(X1; X2)`.
#[derive(Debug, Clone, Serialize)]
pub struct PropositionReport {
    /// The (possibly extracted) shared information of `f(X1,X2)`.
    pub si_value: f64,
    /// `I(X1; X2)` under the pair distribution.
    pub predictor_mi: f64,
    /// `si_value <= predictor_mi` within 1e-9.
    pub holds: bool,
    /// `predictor_mi - si_value` (negative when violated).
    pub margin: f64,
}

/// Evaluates the bound `SI(f(X1,X2); X1, X2) <= I(X1;X2)` for a target
/// built by applying the partition `f` to the paired predictor alphabet
/// (symbol `x1 * |X2| + x2`). A decomposition whose shared and unique
/// parts are both left monotonic must satisfy it; this is a diagnostic
/// predicate, not an assertion, because the implemented measures violate
/// it. Set `extracted` to evaluate the extracted variant of `si`.
pub fn check_proposition_bound(
    pair: &JointDistribution,
    f: &SetPartition,
    si: &SiMeasure,
    extracted: bool,
) -> Result<PropositionReport> {
    if pair.n_axes() != 2 {
        return Err(Error::invalid(
            "the coarsening bound needs a two-axis (X1, X2) distribution",
        ));
    }
    let (n1, n2) = (pair.sizes()[0], pair.sizes()[1]);
    if f.n() != n1 * n2 {
        return Err(Error::invalid(format!(
            "partition is over {} symbols but the paired alphabet has {}",
            f.n(),
            n1 * n2
        )));
    }
    let ns = f.block_count();
    let mut pmf = vec![0.0; ns * n1 * n2];
    for x1 in 0..n1 {
        for x2 in 0..n2 {
            let p = pair.pmf()[x1 * n2 + x2];
            if p > 0.0 {
                let s = f.block_of(x1 * n2 + x2);
                pmf[(s * n1 + x1) * n2 + x2] += p;
            }
        }
    }
    let dist = JointDistribution::new(
        vec!["S".into(), "X1".into(), "X2".into()],
        vec![ns, n1, n2],
        pmf,
    )?;
    let si_value = if extracted {
        extract(&dist, &si.measure())?.value
    } else {
        si.measure().eval(&dist)?
    };
    let predictor_mi = pair.mutual_information(&[0], &[1])?;
    Ok(PropositionReport {
        si_value,
        predictor_mi,
        holds: si_value <= predictor_mi + 1e-9,
        margin: predictor_mi - si_value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    const AND_SI: f64 = 0.311_278_124_459_132_8; // 3/4 * log2(4/3)

    fn broja() -> SiMeasure {
        SiMeasure::Broja(SolverConfig::default())
    }

    #[test]
    fn extracted_coinformation_of_xor_is_zero() {
        // The identity partition has co-information -1; the single-block
        // partition has 0, which wins.
        let out = extract(&fixtures::xor(), &Measure::Coinformation).unwrap();
        assert!((out.base_value - (-1.0)).abs() <= 1e-12);
        assert!(out.value.abs() <= 1e-12);
        assert_eq!(out.maximizer, SetPartition::single_block(2).unwrap());
        assert_eq!(out.evaluated, 2);
    }

    #[test]
    fn mutual_information_is_its_own_extraction() {
        // Any strict coarsening of the sum target loses information, so
        // the identity partition is the unique maximizer.
        let out = extract(&fixtures::sum(), &Measure::MutualInformation).unwrap();
        assert!((out.value - 0.5).abs() <= 1e-12);
        assert!((out.base_value - 0.5).abs() <= 1e-12);
        assert!(out.maximizer.is_identity());
        assert_eq!(out.evaluated, 5);
        let table = out.table.unwrap();
        assert_eq!(table.len(), 5);
        let best = table.iter().map(|r| r.value).fold(f64::NEG_INFINITY, f64::max);
        assert_eq!(best, out.value);
    }

    #[test]
    fn copy_extractions_match_their_known_values() {
        let imin = extract(&fixtures::copy(), &Measure::IminSi).unwrap();
        assert!((imin.value - 1.0).abs() <= 1e-12);
        assert!(imin.maximizer.is_identity());
        assert_eq!(imin.evaluated, 15);

        let broja = extract(&fixtures::copy(), &Measure::BrojaSi(SolverConfig::default()))
            .unwrap();
        assert!((broja.value - 0.5).abs() <= 1e-7, "value = {}", broja.value);
        // Two partitions tie at 1/2 bit; the lexicographically first is
        // the sum-style partition {00}{01,10}{11}.
        assert_eq!(broja.maximizer.rgs(), &[0, 1, 1, 2]);
        assert!(broja.base_value.abs() <= 1e-9);
    }

    #[test]
    fn and_is_a_fixed_point_of_imin_extraction() {
        let out = extract(&fixtures::and(), &Measure::IminSi).unwrap();
        assert!((out.value - AND_SI).abs() <= 1e-12);
        assert!((out.base_value - out.value).abs() <= 1e-12);
        assert!(out.maximizer.is_identity());
    }

    #[test]
    fn counterexample_extraction_lands_on_the_and_coarsening() {
        let out = extract(
            &fixtures::counterexample(),
            &Measure::BrojaSi(SolverConfig::default()),
        )
        .unwrap();
        assert_eq!(out.maximizer, fixtures::counterexample_partition());
        assert!((out.value - AND_SI).abs() <= 1e-7, "value = {}", out.value);
        assert!(out.base_value < out.value - 0.1, "base = {}", out.base_value);
    }

    #[test]
    fn copy_extracted_decomposition_splits_evenly() {
        let (pid, _) = extracted_decomposition(&fixtures::copy(), &broja()).unwrap();
        assert!((pid.si - 0.5).abs() <= 1e-7);
        assert!((pid.ui1 - 0.5).abs() <= 1e-7);
        assert!((pid.ui2 - 0.5).abs() <= 1e-7);
        assert!((pid.ci - 0.5).abs() <= 1e-7);
        assert_eq!(pid.measure, "ext-broja");
    }

    #[test]
    fn extraction_dominates_the_base_measure_on_fixtures() {
        for name in fixtures::fixture_names() {
            let dist = fixtures::named(name).unwrap();
            for si in [SiMeasure::Imin, broja()] {
                let out = extract(&dist, &si.measure()).unwrap();
                assert!(
                    out.value >= out.base_value - 1e-9,
                    "{name}/{}: {} < {}",
                    si.tag(),
                    out.value,
                    out.base_value
                );
            }
        }
    }

    #[test]
    fn markov_consequences_hold_on_the_counterexample() {
        let report = verify_markov_consequence(&fixtures::counterexample(), &broja()).unwrap();
        assert!(report.applicable, "ui_star = {}", report.ui_star);
        assert!(report.ui_star.abs() <= 1e-6);
        assert_eq!(report.maximizer, fixtures::counterexample_partition());
        assert!(report.conditional_mi.unwrap() <= 1e-10);
        assert!(report.quotient_ui.unwrap() <= 1e-7);
        assert!(report.ok);
    }

    #[test]
    fn markov_check_is_vacuous_when_unique_information_remains() {
        let report =
            verify_markov_consequence(&fixtures::x1_projection(), &broja()).unwrap();
        assert!(!report.applicable);
        assert!(report.ui_star > 0.9);
        assert!(report.conditional_mi.is_none());
        assert!(report.ok);
    }

    #[test]
    fn coarsening_bound_is_violated_by_and_but_held_by_correlated_bits() {
        let independent = JointDistribution::new(
            vec!["X1".into(), "X2".into()],
            vec![2, 2],
            vec![0.25; 4],
        )
        .unwrap();
        let and_partition = SetPartition::from_rgs(vec![0, 0, 0, 1]).unwrap();
        let viol = check_proposition_bound(&independent, &and_partition, &SiMeasure::Imin, false)
            .unwrap();
        assert!(!viol.holds);
        assert!((viol.si_value - AND_SI).abs() <= 1e-9);
        assert!(viol.predictor_mi.abs() <= 1e-12);

        let viol_ext =
            check_proposition_bound(&independent, &and_partition, &broja(), true).unwrap();
        assert!(!viol_ext.holds);
        assert!((viol_ext.si_value - AND_SI).abs() <= 1e-5);

        let correlated = JointDistribution::new(
            vec!["X1".into(), "X2".into()],
            vec![2, 2],
            vec![0.5, 0.0, 0.0, 0.5],
        )
        .unwrap();
        let held = check_proposition_bound(&correlated, &and_partition, &SiMeasure::Imin, false)
            .unwrap();
        assert!(held.holds, "margin = {}", held.margin);

        let single = SetPartition::single_block(4).unwrap();
        let trivial =
            check_proposition_bound(&independent, &single, &SiMeasure::Imin, false).unwrap();
        assert!(trivial.holds);
        assert!(trivial.si_value.abs() <= 1e-12);
    }

    #[test]
    fn measure_tags_round_trip() {
        let cfg = SolverConfig::default();
        for tag in [
            "imin-si",
            "broja-si",
            "broja-ui1",
            "broja-ui2",
            "coinformation",
            "mutual-information",
            "target-entropy",
        ] {
            let m = Measure::from_tag(tag, &cfg).unwrap();
            assert_eq!(m.tag(), tag);
        }
        assert!(Measure::from_tag("nonsense", &cfg).is_none());
    }

    #[test]
    fn extraction_rejects_oversized_targets() {
        // 13 target symbols exceed the enumeration guard.
        let ns = 13;
        let mut pmf = vec![0.0; ns * 2 * 2];
        for s in 0..ns {
            pmf[(s * 2) * 2] = 1.0 / ns as f64;
        }
        let dist = JointDistribution::new(
            vec!["S".into(), "X1".into(), "X2".into()],
            vec![ns, 2, 2],
            pmf,
        )
        .unwrap();
        assert!(extract(&dist, &Measure::TargetEntropy).is_err());
    }
}
