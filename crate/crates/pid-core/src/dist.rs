//! Dense joint distributions over named finite axes, and the information
//! quantities defined on them.
//!
//! Axis 0 is the target `S` by convention; further axes are predictors.
//! Probabilities are `f64`, stored row-major. All information quantities
//! are in bits, `0 * log 0 = 0`, and zero-mass outcomes are skipped.

use crate::error::{Error, Result};
use crate::partitions::SetPartition;
use crate::NORMALIZATION_TOLERANCE;

/// A joint probability mass function over one or more finite axes.
#[derive(Debug, Clone)]
pub struct JointDistribution {
    axis_names: Vec<String>,
    sizes: Vec<usize>,
    strides: Vec<usize>,
    pmf: Vec<f64>,
}

/// A row-stochastic channel `input -> output` extracted from a joint.
///
/// Rows of inputs that have zero marginal mass carry no conditional
/// distribution; they are all-zero and flagged unsupported.
#[derive(Debug, Clone)]
pub struct Channel {
    rows: Vec<Vec<f64>>,
    support: Vec<bool>,
}

fn compute_strides(sizes: &[usize]) -> Vec<usize> {
    let mut strides = vec![1usize; sizes.len()];
    for i in (0..sizes.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * sizes[i + 1];
    }
    strides
}

impl JointDistribution {
    /// Builds a joint distribution, validating shape and normalization.
    ///
    /// Entries must be nonnegative (tiny negative rounding noise below
    /// `1e-12` in magnitude is clamped to zero) and sum to one within
    /// [`NORMALIZATION_TOLERANCE`].
    pub fn new(
        axis_names: Vec<String>,
        sizes: Vec<usize>,
        mut pmf: Vec<f64>,
    ) -> Result<JointDistribution> {
        if sizes.is_empty() {
            return Err(Error::invalid("a distribution needs at least one axis"));
        }
        if axis_names.len() != sizes.len() {
            return Err(Error::invalid(format!(
                "{} axis names for {} axes",
                axis_names.len(),
                sizes.len()
            )));
        }
        if sizes.iter().any(|&n| n == 0) {
            return Err(Error::invalid("every axis needs at least one symbol"));
        }
        let cells: usize = sizes.iter().product();
        if pmf.len() != cells {
            return Err(Error::invalid(format!(
                "pmf has {} entries but the axes span {} outcomes",
                pmf.len(),
                cells
            )));
        }
        for p in pmf.iter_mut() {
            if !p.is_finite() {
                return Err(Error::invalid("probabilities must be finite"));
            }
            if *p < 0.0 {
                if *p > -1e-12 {
                    *p = 0.0;
                } else {
                    return Err(Error::invalid(format!("negative probability {p}")));
                }
            }
        }
        let total: f64 = pmf.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::invalid(format!(
                "probabilities sum to {total}, expected 1 within {NORMALIZATION_TOLERANCE}"
            )));
        }
        let strides = compute_strides(&sizes);
        Ok(JointDistribution {
            axis_names,
            sizes,
            strides,
            pmf,
        })
    }

    /// Builds a joint from sparse `(outcome, probability)` pairs; outcomes
    /// not listed get probability zero. Duplicate outcomes are rejected.
    pub fn from_outcomes(
        axis_names: Vec<String>,
        sizes: Vec<usize>,
        outcomes: &[(&[usize], f64)],
    ) -> Result<JointDistribution> {
        let cells: usize = sizes.iter().product();
        let strides = compute_strides(&sizes);
        let mut pmf = vec![0.0; cells];
        let mut seen = vec![false; cells];
        for (coords, p) in outcomes {
            if coords.len() != sizes.len() {
                return Err(Error::invalid(format!(
                    "outcome {coords:?} has {} coordinates, expected {}",
                    coords.len(),
                    sizes.len()
                )));
            }
            for (axis, (&c, &n)) in coords.iter().zip(sizes.iter()).enumerate() {
                if c >= n {
                    return Err(Error::invalid(format!(
                        "coordinate {c} out of range for axis {axis} of size {n}"
                    )));
                }
            }
            let idx: usize = coords
                .iter()
                .zip(strides.iter())
                .map(|(&c, &s)| c * s)
                .sum();
            if seen[idx] {
                return Err(Error::invalid(format!("outcome {coords:?} listed twice")));
            }
            seen[idx] = true;
            pmf[idx] = *p;
        }
        JointDistribution::new(axis_names, sizes, pmf)
    }

    pub fn n_axes(&self) -> usize {
        self.sizes.len()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn size(&self, axis: usize) -> usize {
        self.sizes[axis]
    }

    pub fn axis_names(&self) -> &[String] {
        &self.axis_names
    }

    pub fn pmf(&self) -> &[f64] {
        &self.pmf
    }

    /// Linear index of an outcome given its per-axis coordinates.
    pub fn index_of(&self, coords: &[usize]) -> usize {
        coords
            .iter()
            .zip(self.strides.iter())
            .map(|(&c, &s)| c * s)
            .sum()
    }

    /// Per-axis coordinates of a linear index.
    pub fn coords_of(&self, mut index: usize) -> Vec<usize> {
        let mut coords = vec![0usize; self.sizes.len()];
        for (i, &stride) in self.strides.iter().enumerate() {
            coords[i] = index / stride;
            index %= stride;
        }
        coords
    }

    pub fn prob(&self, coords: &[usize]) -> f64 {
        self.pmf[self.index_of(coords)]
    }

    fn check_axes(&self, axes: &[usize], what: &str) -> Result<()> {
        if axes.is_empty() {
            return Err(Error::invalid(format!("{what}: empty axis list")));
        }
        let mut seen = vec![false; self.sizes.len()];
        for &a in axes {
            if a >= self.sizes.len() {
                return Err(Error::invalid(format!(
                    "{what}: axis {a} out of range for {} axes",
                    self.sizes.len()
                )));
            }
            if seen[a] {
                return Err(Error::invalid(format!("{what}: axis {a} repeated")));
            }
            seen[a] = true;
        }
        Ok(())
    }

    /// Marginal over the given axes, in the given order.
    pub fn marginal(&self, axes: &[usize]) -> Result<JointDistribution> {
        self.check_axes(axes, "marginal")?;
        let new_sizes: Vec<usize> = axes.iter().map(|&a| self.sizes[a]).collect();
        let new_names: Vec<String> = axes.iter().map(|&a| self.axis_names[a].clone()).collect();
        let new_strides = compute_strides(&new_sizes);
        let cells: usize = new_sizes.iter().product();
        let mut pmf = vec![0.0; cells];
        for (idx, &p) in self.pmf.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            let mut target = 0usize;
            for (k, &a) in axes.iter().enumerate() {
                let coord = (idx / self.strides[a]) % self.sizes[a];
                target += coord * new_strides[k];
            }
            pmf[target] += p;
        }
        Ok(JointDistribution {
            axis_names: new_names,
            sizes: new_sizes,
            strides: new_strides,
            pmf,
        })
    }

    /// Reorders axes according to `perm` (a permutation of `0..n_axes`).
    pub fn permute_axes(&self, perm: &[usize]) -> Result<JointDistribution> {
        if perm.len() != self.sizes.len() {
            return Err(Error::invalid("permutation length must match axis count"));
        }
        self.check_axes(perm, "permute_axes")?;
        self.marginal(perm)
    }

    /// Replaces the axis `axis` by its image under the partition `f`,
    /// summing probabilities of merged symbols. Block indices follow the
    /// partition's first-appearance numbering.
    pub fn quotient_axis(&self, axis: usize, f: &SetPartition) -> Result<JointDistribution> {
        if axis >= self.sizes.len() {
            return Err(Error::invalid(format!("quotient axis {axis} out of range")));
        }
        if f.n() != self.sizes[axis] {
            return Err(Error::invalid(format!(
                "partition of {} symbols applied to axis of size {}",
                f.n(),
                self.sizes[axis]
            )));
        }
        let mut new_sizes = self.sizes.clone();
        new_sizes[axis] = f.block_count();
        let new_strides = compute_strides(&new_sizes);
        let cells: usize = new_sizes.iter().product();
        let mut pmf = vec![0.0; cells];
        for (idx, &p) in self.pmf.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            let mut target = 0usize;
            for a in 0..self.sizes.len() {
                let mut coord = (idx / self.strides[a]) % self.sizes[a];
                if a == axis {
                    coord = f.block_of(coord);
                }
                target += coord * new_strides[a];
            }
            pmf[target] += p;
        }
        Ok(JointDistribution {
            axis_names: self.axis_names.clone(),
            sizes: new_sizes,
            strides: new_strides,
            pmf,
        })
    }

    /// Quotient of the target axis (axis 0) by the partition `f`.
    pub fn quotient_target(&self, f: &SetPartition) -> Result<JointDistribution> {
        self.quotient_axis(0, f)
    }

    /// Appends a new last axis holding `f(S)`, the image of the target
    /// under the partition. Useful for conditional-independence checks
    /// such as `I(S; X1 | f(S))`.
    pub fn append_partition_axis(&self, f: &SetPartition) -> Result<JointDistribution> {
        if f.n() != self.sizes[0] {
            return Err(Error::invalid(format!(
                "partition of {} symbols applied to target of size {}",
                f.n(),
                self.sizes[0]
            )));
        }
        let mut new_sizes = self.sizes.clone();
        new_sizes.push(f.block_count());
        let new_strides = compute_strides(&new_sizes);
        let cells: usize = new_sizes.iter().product();
        let mut pmf = vec![0.0; cells];
        for (idx, &p) in self.pmf.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            let s = idx / self.strides[0];
            let mut t = 0usize;
            for a in 0..self.sizes.len() {
                let coord = (idx / self.strides[a]) % self.sizes[a];
                t += coord * new_strides[a];
            }
            t += f.block_of(s) * new_strides[new_sizes.len() - 1];
            pmf[t] += p;
        }
        let mut names = self.axis_names.clone();
        names.push(format!("f({})", self.axis_names[0]));
        Ok(JointDistribution {
            axis_names: names,
            sizes: new_sizes,
            strides: new_strides,
            pmf,
        })
    }

    /// The channel from axis `from` to axis `to`: rows are `P(to | from)`
    /// for each supported input symbol.
    pub fn channel_from(&self, from: usize, to: usize) -> Result<Channel> {
        if from == to {
            return Err(Error::invalid("channel endpoints must differ"));
        }
        let pair = self.marginal(&[from, to])?;
        let n_in = pair.sizes[0];
        let n_out = pair.sizes[1];
        let mut rows = Vec::with_capacity(n_in);
        let mut support = Vec::with_capacity(n_in);
        for i in 0..n_in {
            let row_slice = &pair.pmf[i * n_out..(i + 1) * n_out];
            let mass: f64 = row_slice.iter().sum();
            if mass > 0.0 {
                rows.push(row_slice.iter().map(|&p| p / mass).collect());
                support.push(true);
            } else {
                rows.push(vec![0.0; n_out]);
                support.push(false);
            }
        }
        Ok(Channel { rows, support })
    }

    fn entropy_of_axes(&self, axes: &[usize]) -> Result<f64> {
        if axes.is_empty() {
            return Ok(0.0);
        }
        let m = self.marginal(axes)?;
        Ok(entropy_of_pmf(&m.pmf))
    }

    /// Shannon entropy (bits) of the marginal over `axes`.
    pub fn entropy(&self, axes: &[usize]) -> Result<f64> {
        self.check_axes(axes, "entropy")?;
        self.entropy_of_axes(axes)
    }

    fn check_disjoint(groups: &[&[usize]]) -> Result<()> {
        for (i, a) in groups.iter().enumerate() {
            for b in groups.iter().skip(i + 1) {
                if a.iter().any(|x| b.contains(x)) {
                    return Err(Error::invalid("axis groups must be disjoint"));
                }
            }
        }
        Ok(())
    }

    /// Mutual information `I(A; B)` (bits) between two disjoint axis groups.
    /// Never negative: rounding noise is clamped at zero.
    pub fn mutual_information(&self, a: &[usize], b: &[usize]) -> Result<f64> {
        self.check_axes(a, "mutual_information")?;
        self.check_axes(b, "mutual_information")?;
        Self::check_disjoint(&[a, b])?;
        let mut ab = a.to_vec();
        ab.extend_from_slice(b);
        let value = self.entropy_of_axes(a)? + self.entropy_of_axes(b)? - self.entropy_of_axes(&ab)?;
        Ok(value.max(0.0))
    }

    /// Conditional mutual information `I(A; B | C)` (bits). `C` may be
    /// empty, in which case this is plain mutual information.
    pub fn conditional_mutual_information(
        &self,
        a: &[usize],
        b: &[usize],
        c: &[usize],
    ) -> Result<f64> {
        self.check_axes(a, "conditional_mutual_information")?;
        self.check_axes(b, "conditional_mutual_information")?;
        if !c.is_empty() {
            self.check_axes(c, "conditional_mutual_information")?;
        }
        Self::check_disjoint(&[a, b, c])?;
        let mut ac = a.to_vec();
        ac.extend_from_slice(c);
        let mut bc = b.to_vec();
        bc.extend_from_slice(c);
        let mut abc = a.to_vec();
        abc.extend_from_slice(b);
        abc.extend_from_slice(c);
        let value = self.entropy_of_axes(&ac)? + self.entropy_of_axes(&bc)?
            - self.entropy_of_axes(&abc)?
            - self.entropy_of_axes(c)?;
        Ok(value.max(0.0))
    }

    /// Co-information of a three-axis joint `(S, X1, X2)`:
    /// `I(S; X1) - I(S; X1 | X2)`. Symmetric in all three axes; may be
    /// negative (synergy exceeding redundancy).
    pub fn coinformation(&self) -> Result<f64> {
        if self.sizes.len() != 3 {
            return Err(Error::invalid(format!(
                "coinformation needs exactly 3 axes, got {}",
                self.sizes.len()
            )));
        }
        Ok(self.mutual_information(&[0], &[1])?
            - self.conditional_mutual_information(&[0], &[1], &[2])?)
    }
}

/// Entropy (bits) of a raw pmf slice; zero entries are skipped.
pub fn entropy_of_pmf(pmf: &[f64]) -> f64 {
    let mut h = 0.0;
    for &p in pmf {
        if p > 0.0 {
            h -= p * p.log2();
        }
    }
    h
}

impl Channel {
    /// Builds a channel directly from row data.
    pub fn from_rows(rows: Vec<Vec<f64>>, support: Vec<bool>) -> Result<Channel> {
        if rows.is_empty() {
            return Err(Error::invalid("channel needs at least one input row"));
        }
        if rows.len() != support.len() {
            return Err(Error::invalid("support mask length must match row count"));
        }
        let width = rows[0].len();
        if width == 0 {
            return Err(Error::invalid("channel needs at least one output symbol"));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != width {
                return Err(Error::invalid("channel rows must have equal length"));
            }
            if row.iter().any(|&p| !(p >= 0.0) || !p.is_finite()) {
                return Err(Error::invalid("channel entries must be nonnegative"));
            }
            let sum: f64 = row.iter().sum();
            if support[i] {
                if (sum - 1.0).abs() > NORMALIZATION_TOLERANCE {
                    return Err(Error::invalid(format!(
                        "channel row {i} sums to {sum}, expected 1"
                    )));
                }
            } else if sum != 0.0 {
                return Err(Error::invalid(format!(
                    "unsupported channel row {i} must be all-zero"
                )));
            }
        }
        Ok(Channel { rows, support })
    }

    pub fn input_size(&self) -> usize {
        self.rows.len()
    }

    pub fn output_size(&self) -> usize {
        self.rows[0].len()
    }

    pub fn row(&self, input: usize) -> &[f64] {
        &self.rows[input]
    }

    pub fn support(&self) -> &[bool] {
        &self.support
    }

    pub fn is_supported(&self, input: usize) -> bool {
        self.support[input]
    }
}
