//! The minimum-specific-information measure of shared information.
//!
//! The specific information a source group `G` carries about a single
//! target outcome `s` is the Kullback–Leibler divergence
//! `KL(P(G | s) || P(G))` in bits. Shared information averages, over the
//! target, the *minimum* specific information among the source groups:
//! whatever every source tells us about each outcome.

use crate::decomp::PidResult;
use crate::dist::JointDistribution;
use crate::error::{Error, Result};

/// An ordered list of source groups, each a set of predictor axes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceSpec {
    groups: Vec<Vec<usize>>,
}

impl SourceSpec {
    /// Validates a list of source groups. Groups are sorted internally;
    /// empty groups, repeated axes within a group, axis 0 (the target),
    /// and duplicate groups are rejected.
    pub fn new(groups: Vec<Vec<usize>>) -> Result<SourceSpec> {
        if groups.is_empty() {
            return Err(Error::invalid("at least one source group is required"));
        }
        let mut normalized: Vec<Vec<usize>> = Vec::with_capacity(groups.len());
        for g in &groups {
            if g.is_empty() {
                return Err(Error::invalid("source groups must be non-empty"));
            }
            let mut sorted = g.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != g.len() {
                return Err(Error::invalid(format!("axis repeated in group {g:?}")));
            }
            if sorted[0] == 0 {
                return Err(Error::invalid("axis 0 is the target, not a source"));
            }
            if normalized.contains(&sorted) {
                return Err(Error::invalid(format!("duplicate source group {g:?}")));
            }
            normalized.push(sorted);
        }
        Ok(SourceSpec { groups: normalized })
    }

    /// The standard bivariate sources `{X1}, {X2}`.
    pub fn standard_bivariate() -> SourceSpec {
        SourceSpec {
            groups: vec![vec![1], vec![2]],
        }
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    fn check_against(&self, dist: &JointDistribution) -> Result<()> {
        for g in &self.groups {
            for &a in g {
                if a >= dist.n_axes() {
                    return Err(Error::invalid(format!(
                        "source axis {a} out of range for {} axes",
                        dist.n_axes()
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Specific information (bits) the predictor group `group` carries about
/// the target outcome `s`: `KL(P(G | s) || P(G))`.
///
/// Requires `P(s) > 0`.
pub fn specific_information(
    dist: &JointDistribution,
    group: &[usize],
    s: usize,
) -> Result<f64> {
    if s >= dist.size(0) {
        return Err(Error::invalid(format!(
            "target outcome {s} out of range for alphabet of size {}",
            dist.size(0)
        )));
    }
    if group.contains(&0) {
        return Err(Error::invalid("axis 0 is the target, not a source"));
    }
    let mut axes = vec![0usize];
    axes.extend_from_slice(group);
    // The marginal call validates the rest (range, duplicates).
    let pair = dist.marginal(&axes)?;

    let g_cells: usize = pair.sizes()[1..].iter().product();
    let mut p_s = 0.0;
    for g in 0..g_cells {
        p_s += pair.pmf()[s * g_cells + g];
    }
    if p_s <= 0.0 {
        return Err(Error::invalid(format!(
            "specific information undefined: P(s = {s}) = 0"
        )));
    }
    // P(g) marginal over the group.
    let n_s = pair.sizes()[0];
    let mut p_g = vec![0.0; g_cells];
    for si in 0..n_s {
        for g in 0..g_cells {
            p_g[g] += pair.pmf()[si * g_cells + g];
        }
    }
    let mut kl = 0.0;
    for g in 0..g_cells {
        let joint = pair.pmf()[s * g_cells + g];
        if joint > 0.0 {
            // P(g|s) * log2( P(s|g) / P(s) )
            kl += joint / p_s * ((joint / p_g[g]) / p_s).log2();
        }
    }
    Ok(kl.max(0.0))
}

/// Shared information as expected minimum specific information over the
/// source groups. With a single group this reduces to `I(S; G)`.
pub fn i_min(dist: &JointDistribution, sources: &SourceSpec) -> Result<f64> {
    sources.check_against(dist)?;
    let target = dist.marginal(&[0])?;
    let mut total = 0.0;
    for s in 0..dist.size(0) {
        let p_s = target.pmf()[s];
        if p_s <= 0.0 {
            continue;
        }
        let mut min_spec = f64::INFINITY;
        for g in sources.groups() {
            let spec = specific_information(dist, g, s)?;
            if spec < min_spec {
                min_spec = spec;
            }
        }
        total += p_s * min_spec;
    }
    Ok(total)
}

/// Full bivariate decomposition under the minimum-specific-information
/// measure: `SI = i_min(S; {X1}, {X2})`, the rest by the linear
/// identities.
pub fn imin_decomposition(dist: &JointDistribution) -> Result<PidResult> {
    if dist.n_axes() != 3 {
        return Err(Error::invalid(format!(
            "bivariate decomposition needs exactly 3 axes, got {}",
            dist.n_axes()
        )));
    }
    let si = i_min(dist, &SourceSpec::standard_bivariate())?;
    let mi1 = dist.mutual_information(&[0], &[1])?;
    let mi2 = dist.mutual_information(&[0], &[2])?;
    let mi12 = dist.mutual_information(&[0], &[1, 2])?;
    let coi = dist.coinformation()?;
    Ok(PidResult::from_shared("imin", si, mi1, mi2, mi12, coi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn assert_close(actual: f64, expected: f64, tol: f64) {
        assert!(
            (actual - expected).abs() <= tol,
            "expected {expected}, got {actual}"
        );
    }

    #[test]
    fn specific_information_of_a_copied_target_is_surprisal() {
        // S = X1 with P(X1) = (1/2, 1/4, 1/4): the specific information of
        // {X1} about s is -log2 P(s).
        let d = JointDistribution::from_outcomes(
            vec!["S".into(), "X1".into()],
            vec![3, 3],
            &[(&[0, 0], 0.5), (&[1, 1], 0.25), (&[2, 2], 0.25)],
        )
        .unwrap();
        assert_close(specific_information(&d, &[1], 0).unwrap(), 1.0, 1e-12);
        assert_close(specific_information(&d, &[1], 1).unwrap(), 2.0, 1e-12);
    }

    #[test]
    fn specific_information_requires_positive_outcome_mass() {
        let d = JointDistribution::from_outcomes(
            vec!["S".into(), "X1".into()],
            vec![2, 2],
            &[(&[0, 0], 1.0)],
        )
        .unwrap();
        assert!(specific_information(&d, &[1], 1).is_err());
    }

    #[test]
    fn xor_predictors_have_zero_specific_information() {
        let d = fixtures::xor();
        for s in 0..2 {
            assert_close(specific_information(&d, &[1], s).unwrap(), 0.0, 1e-12);
            assert_close(specific_information(&d, &[2], s).unwrap(), 0.0, 1e-12);
        }
        assert_close(
            i_min(&d, &SourceSpec::standard_bivariate()).unwrap(),
            0.0,
            1e-12,
        );
    }

    #[test]
    fn imin_of_the_named_targets() {
        let cases = [
            (fixtures::copy(), 1.0),
            (fixtures::and(), 0.3112781244591328),
            (fixtures::or(), 0.3112781244591328),
            (fixtures::xor(), 0.0),
            (fixtures::sum(), 0.5),
            (fixtures::x1_projection(), 0.0),
            (fixtures::f1(), 0.5),
        ];
        for (d, expected) in cases {
            let si = i_min(&d, &SourceSpec::standard_bivariate()).unwrap();
            assert_close(si, expected, 1e-12);
        }
    }

    #[test]
    fn copy_shares_a_bit_despite_independent_predictors() {
        // The identity-style characterization fails for i_min: predictors
        // that share no information with each other still "share" a full
        // bit about the copied pair.
        let d = fixtures::copy();
        assert_close(d.mutual_information(&[1], &[2]).unwrap(), 0.0, 1e-12);
        let si = i_min(&d, &SourceSpec::standard_bivariate()).unwrap();
        assert_close(si, 1.0, 1e-12);
    }

    #[test]
    fn single_group_is_self_redundancy() {
        let d = fixtures::and();
        let spec = SourceSpec::new(vec![vec![1]]).unwrap();
        assert_close(
            i_min(&d, &spec).unwrap(),
            d.mutual_information(&[0], &[1]).unwrap(),
            1e-12,
        );
    }

    #[test]
    fn adding_the_joint_group_changes_nothing() {
        // {X1} is a function of {X1, X2}, so appending the joint group
        // leaves the minimum untouched.
        let d = fixtures::and();
        let two = i_min(&d, &SourceSpec::standard_bivariate()).unwrap();
        let three = i_min(
            &d,
            &SourceSpec::new(vec![vec![1], vec![2], vec![1, 2]]).unwrap(),
        )
        .unwrap();
        assert_close(two, three, 1e-12);
    }

    #[test]
    fn source_spec_validation() {
        assert!(SourceSpec::new(vec![]).is_err());
        assert!(SourceSpec::new(vec![vec![]]).is_err());
        assert!(SourceSpec::new(vec![vec![0]]).is_err());
        assert!(SourceSpec::new(vec![vec![1, 1]]).is_err());
        assert!(SourceSpec::new(vec![vec![1], vec![1]]).is_err());
        assert!(SourceSpec::new(vec![vec![2, 1], vec![1]]).is_ok());
    }

    #[test]
    fn decomposition_satisfies_the_linear_identities() {
        let d = fixtures::and();
        let r = imin_decomposition(&d).unwrap();
        assert_close(r.si + r.ui1, r.mi_s_x1, 1e-12);
        assert_close(r.si + r.ui2, r.mi_s_x2, 1e-12);
        assert_close(r.si + r.ui1 + r.ui2 + r.ci, r.mi_s_x1x2, 1e-12);
        assert!(r.si >= 0.0 && r.ui1 >= -1e-12 && r.ui2 >= -1e-12 && r.ci >= -1e-12);
        assert_close(r.si, 0.3112781244591328, 1e-12);
    }
}
