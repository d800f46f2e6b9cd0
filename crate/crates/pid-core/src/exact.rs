//! Exact rational arithmetic: probability parsing, rational joints, and
//! an exact feasibility decision for garbling systems.
//!
//! The floating-point simplex in [`crate::simplex`] answers most garbling
//! queries; verdicts in its numerical grey zone escalate here. The exact
//! route is deliberately a *different algorithm* — Gauss–Jordan
//! elimination of the equality system followed by Fourier–Motzkin
//! elimination of the sign constraints — so the two backends fail
//! independently.

use crate::error::{Error, Result};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use std::collections::HashSet;

/// Parses a probability token: a rational like `1/8`, or a decimal with
/// optional exponent like `0.125` or `2.5e-3`. The result is exact.
pub fn parse_ratio(token: &str) -> Result<BigRational> {
    let tok = token.trim();
    let bad = |msg: &str| Error::invalid(format!("bad probability {tok:?}: {msg}"));
    if tok.is_empty() {
        return Err(bad("empty token"));
    }
    if let Some((num, den)) = tok.split_once('/') {
        let n: BigInt = num
            .trim()
            .parse()
            .map_err(|_| bad("numerator is not an integer"))?;
        let d: BigInt = den
            .trim()
            .parse()
            .map_err(|_| bad("denominator is not an integer"))?;
        if d.is_zero() {
            return Err(bad("zero denominator"));
        }
        return Ok(BigRational::new(n, d));
    }
    // Decimal with optional exponent.
    let (mantissa, exp) = match tok.split_once(['e', 'E']) {
        Some((m, e)) => {
            let exp: i64 = e.parse().map_err(|_| bad("bad exponent"))?;
            (m, exp)
        }
        None => (tok, 0),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    let negative = int_part.starts_with('-');
    let int_digits = int_part.trim_start_matches(['-', '+']);
    if !int_digits.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
        || (int_digits.is_empty() && frac_part.is_empty())
    {
        return Err(bad("not a decimal or rational"));
    }
    let digits = format!("{int_digits}{frac_part}");
    let mut numer: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().map_err(|_| bad("bad digits"))?
    };
    if negative {
        numer = -numer;
    }
    let scale = frac_part.len() as i64 - exp;
    let ten = BigInt::from(10u32);
    let mut value = BigRational::from_integer(numer);
    if scale > 0 {
        value /= BigRational::from_integer(ten.pow(scale as u32));
    } else if scale < 0 {
        value *= BigRational::from_integer(ten.pow((-scale) as u32));
    }
    Ok(value)
}

/// A joint distribution with exact rational probabilities, kept alongside
/// the `f64` form for exact-arithmetic cross-checks.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalJoint {
    sizes: Vec<usize>,
    pmf: Vec<BigRational>,
}

impl RationalJoint {
    pub fn new(sizes: Vec<usize>, pmf: Vec<BigRational>) -> Result<RationalJoint> {
        if sizes.is_empty() || sizes.iter().any(|&n| n == 0) {
            return Err(Error::invalid("every axis needs at least one symbol"));
        }
        let cells: usize = sizes.iter().product();
        if pmf.len() != cells {
            return Err(Error::invalid(format!(
                "pmf has {} entries but the axes span {cells} outcomes",
                pmf.len()
            )));
        }
        if pmf.iter().any(|p| p.is_negative()) {
            return Err(Error::invalid("negative rational probability"));
        }
        let total: BigRational = pmf.iter().sum();
        let total_f = total.to_f64().unwrap_or(f64::NAN);
        if !(total_f - 1.0).abs().le(&1e-12) {
            return Err(Error::invalid(format!(
                "rational probabilities sum to {total_f}, expected 1"
            )));
        }
        Ok(RationalJoint { sizes, pmf })
    }

    /// Builds from sparse outcomes given as `(coords, numerator, denominator)`.
    pub fn from_outcomes(
        sizes: Vec<usize>,
        outcomes: &[(&[usize], i64, i64)],
    ) -> Result<RationalJoint> {
        let cells: usize = sizes.iter().product();
        let mut pmf = vec![BigRational::zero(); cells];
        let strides = {
            let mut s = vec![1usize; sizes.len()];
            for i in (0..sizes.len().saturating_sub(1)).rev() {
                s[i] = s[i + 1] * sizes[i + 1];
            }
            s
        };
        for (coords, num, den) in outcomes {
            if coords.len() != sizes.len() {
                return Err(Error::invalid("outcome arity mismatch"));
            }
            let idx: usize = coords
                .iter()
                .zip(strides.iter())
                .map(|(&c, &s)| c * s)
                .sum();
            pmf[idx] = BigRational::new(BigInt::from(*num), BigInt::from(*den));
        }
        RationalJoint::new(sizes, pmf)
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn pmf(&self) -> &[BigRational] {
        &self.pmf
    }

    fn strides(&self) -> Vec<usize> {
        let mut s = vec![1usize; self.sizes.len()];
        for i in (0..self.sizes.len().saturating_sub(1)).rev() {
            s[i] = s[i + 1] * self.sizes[i + 1];
        }
        s
    }

    /// The `f64` counterpart, with default axis names `S, X1, X2, ..`.
    pub fn to_joint(&self) -> Result<crate::dist::JointDistribution> {
        let names: Vec<String> = (0..self.sizes.len())
            .map(|i| if i == 0 { "S".into() } else { format!("X{i}") })
            .collect();
        let pmf: Vec<f64> = self
            .pmf
            .iter()
            .map(|p| p.to_f64().unwrap_or(f64::NAN))
            .collect();
        crate::dist::JointDistribution::new(names, self.sizes.clone(), pmf)
    }

    /// Exact pair marginal over two distinct axes, as a matrix indexed
    /// `[a][b]`.
    pub fn marginal_pair(&self, a: usize, b: usize) -> Result<Vec<Vec<BigRational>>> {
        if a >= self.sizes.len() || b >= self.sizes.len() || a == b {
            return Err(Error::invalid("bad axis pair for rational marginal"));
        }
        let strides = self.strides();
        let mut m = vec![vec![BigRational::zero(); self.sizes[b]]; self.sizes[a]];
        for (idx, p) in self.pmf.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            let ca = (idx / strides[a]) % self.sizes[a];
            let cb = (idx / strides[b]) % self.sizes[b];
            m[ca][cb] += p;
        }
        Ok(m)
    }

    /// Exact channel `from -> to`: row-stochastic rows for supported
    /// inputs, all-zero rows and a `false` flag elsewhere.
    pub fn channel(&self, from: usize, to: usize) -> Result<(Vec<Vec<BigRational>>, Vec<bool>)> {
        let pair = self.marginal_pair(from, to)?;
        let mut rows = Vec::with_capacity(pair.len());
        let mut support = Vec::with_capacity(pair.len());
        for row in pair {
            let mass: BigRational = row.iter().sum();
            if mass.is_zero() {
                rows.push(vec![BigRational::zero(); row.len()]);
                support.push(false);
            } else {
                rows.push(row.into_iter().map(|p| p / &mass).collect());
                support.push(true);
            }
        }
        Ok((rows, support))
    }

    /// Exact quotient of the target axis (axis 0) by a partition.
    pub fn quotient_target(
        &self,
        f: &crate::partitions::SetPartition,
    ) -> Result<RationalJoint> {
        if f.n() != self.sizes[0] {
            return Err(Error::invalid("partition length must match target size"));
        }
        let mut new_sizes = self.sizes.clone();
        new_sizes[0] = f.block_count();
        let rest: usize = self.sizes[1..].iter().product();
        let mut pmf = vec![BigRational::zero(); f.block_count() * rest];
        for (idx, p) in self.pmf.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            let s = idx / rest;
            let tail = idx % rest;
            pmf[f.block_of(s) * rest + tail] += p;
        }
        RationalJoint::new(new_sizes, pmf)
    }
}

/// One inequality `sum(coeffs[j] * y[j]) + constant >= 0`.
#[derive(Clone)]
struct Ineq {
    coeffs: Vec<BigRational>,
    constant: BigRational,
}

impl Ineq {
    fn is_constant(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn key(&self) -> String {
        // Normalize by the first nonzero coefficient's absolute value so
        // scaled duplicates collapse.
        let scale = self
            .coeffs
            .iter()
            .chain(std::iter::once(&self.constant))
            .find(|c| !c.is_zero())
            .map(|c| c.abs());
        match scale {
            None => "0".to_string(),
            Some(s) => {
                let mut parts: Vec<String> =
                    self.coeffs.iter().map(|c| (c / &s).to_string()).collect();
                parts.push((&self.constant / &s).to_string());
                parts.join(",")
            }
        }
    }
}

/// Exceeding this many inequalities aborts the elimination; at the
/// intended desk scale (a handful of unknowns) it is never approached.
const FM_ROW_CAP: usize = 50_000;

/// Decides, in exact arithmetic, whether a row-stochastic `lambda` exists
/// with `kappa1[s] = sum_b kappa2[s][b] * lambda[b]` for every supported
/// row `s`. Returns the verdict and, when feasible, a rational witness.
pub fn garbling_feasible_exact(
    kappa2: &[Vec<BigRational>],
    kappa1: &[Vec<BigRational>],
    support: &[bool],
) -> Result<(bool, Option<Vec<Vec<BigRational>>>)> {
    if kappa1.len() != kappa2.len() || kappa1.len() != support.len() {
        return Err(Error::invalid("channel row counts must match"));
    }
    if kappa1.is_empty() {
        return Err(Error::invalid("empty channel"));
    }
    let m1 = kappa1[0].len();
    let m2 = kappa2[0].len();
    if m1 == 0 || m2 == 0 {
        return Err(Error::invalid("channels need at least one output"));
    }
    if kappa1.iter().any(|r| r.len() != m1) || kappa2.iter().any(|r| r.len() != m2) {
        return Err(Error::invalid("ragged channel rows"));
    }
    let nvars = m1 * m2; // lambda[b][a] at index b * m1 + a
    if nvars > 64 {
        return Err(Error::ExactOverflow(format!(
            "{nvars} unknowns exceed the exact backend's guard"
        )));
    }

    // Equality system E x = e.
    let mut equalities: Vec<(Vec<BigRational>, BigRational)> = Vec::new();
    for (s, sup) in support.iter().enumerate() {
        if !sup {
            continue;
        }
        for a in 0..m1 {
            let mut row = vec![BigRational::zero(); nvars];
            for b in 0..m2 {
                row[b * m1 + a] = kappa2[s][b].clone();
            }
            equalities.push((row, kappa1[s][a].clone()));
        }
    }
    for b in 0..m2 {
        let mut row = vec![BigRational::zero(); nvars];
        for a in 0..m1 {
            row[b * m1 + a] = BigRational::one();
        }
        equalities.push((row, BigRational::one()));
    }

    // Gauss-Jordan elimination.
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; nvars];
    let mut pivot_row_col: Vec<usize> = Vec::new();
    let mut reduced: Vec<(Vec<BigRational>, BigRational)> = Vec::new();
    for (mut row, mut rhs) in equalities {
        // Reduce against existing pivots.
        for (r, &col) in pivot_row_col.iter().enumerate() {
            if !row[col].is_zero() {
                let factor = row[col].clone();
                let (prow, prhs) = &reduced[r];
                for j in 0..nvars {
                    let delta = &factor * &prow[j];
                    row[j] -= delta;
                }
                rhs -= &factor * prhs;
            }
        }
        match row.iter().position(|c| !c.is_zero()) {
            None => {
                if !rhs.is_zero() {
                    return Ok((false, None)); // 0 = nonzero: inconsistent.
                }
            }
            Some(col) => {
                let lead = row[col].clone();
                for c in row.iter_mut() {
                    *c /= &lead;
                }
                rhs /= &lead;
                // Eliminate this column from earlier rows.
                for (r, &pcol) in pivot_row_col.clone().iter().enumerate() {
                    let _ = pcol;
                    let factor = reduced[r].0[col].clone();
                    if !factor.is_zero() {
                        for j in 0..nvars {
                            let delta = &factor * &row[j];
                            reduced[r].0[j] -= delta;
                        }
                        let d = &factor * &rhs;
                        reduced[r].1 -= d;
                    }
                }
                pivot_of_col[col] = Some(reduced.len());
                pivot_row_col.push(col);
                reduced.push((row, rhs));
            }
        }
    }

    let free_cols: Vec<usize> = (0..nvars).filter(|&c| pivot_of_col[c].is_none()).collect();
    let nfree = free_cols.len();
    let free_index: Vec<Option<usize>> = {
        let mut v = vec![None; nvars];
        for (k, &c) in free_cols.iter().enumerate() {
            v[c] = Some(k);
        }
        v
    };

    // Nonnegativity of every variable, expressed over the free variables.
    let mut ineqs: Vec<Ineq> = Vec::new();
    for x in 0..nvars {
        match pivot_of_col[x] {
            None => {
                let mut coeffs = vec![BigRational::zero(); nfree];
                coeffs[free_index[x].unwrap()] = BigRational::one();
                ineqs.push(Ineq {
                    coeffs,
                    constant: BigRational::zero(),
                });
            }
            Some(r) => {
                // x = rhs - sum over free columns of coeff * y.
                let mut coeffs = vec![BigRational::zero(); nfree];
                for (k, &c) in free_cols.iter().enumerate() {
                    coeffs[k] = -reduced[r].0[c].clone();
                }
                ineqs.push(Ineq {
                    coeffs,
                    constant: reduced[r].1.clone(),
                });
            }
        }
    }

    // Fourier-Motzkin elimination of the free variables, remembering each
    // variable's bounds for back-substitution.
    let mut bounds_stack: Vec<(usize, Vec<Ineq>, Vec<Ineq>)> = Vec::new();
    let mut current = ineqs;
    for k in (0..nfree).rev() {
        let mut lowers = Vec::new();
        let mut uppers = Vec::new();
        let mut rest = Vec::new();
        for ineq in current {
            let a = ineq.coeffs[k].clone();
            if a.is_zero() {
                rest.push(ineq);
            } else {
                // a*y_k + (rest) >= 0  =>  y_k >=/<= -(rest)/a.
                let mut coeffs: Vec<BigRational> = ineq
                    .coeffs
                    .iter()
                    .map(|c| -(c / &a))
                    .collect();
                coeffs[k] = BigRational::zero();
                let constant = -(&ineq.constant / &a);
                let bound = Ineq { coeffs, constant };
                if a.is_positive() {
                    lowers.push(bound);
                } else {
                    uppers.push(bound);
                }
            }
        }
        let mut seen: HashSet<String> = rest.iter().map(|i| i.key()).collect();
        for lo in &lowers {
            for hi in &uppers {
                // hi - lo >= 0.
                let coeffs: Vec<BigRational> = hi
                    .coeffs
                    .iter()
                    .zip(lo.coeffs.iter())
                    .map(|(h, l)| h - l)
                    .collect();
                let constant = &hi.constant - &lo.constant;
                let row = Ineq { coeffs, constant };
                if row.is_constant() && row.constant.is_negative() {
                    return Ok((false, None));
                }
                if !(row.is_constant() && !row.constant.is_negative())
                    && seen.insert(row.key())
                {
                    rest.push(row);
                }
                if rest.len() > FM_ROW_CAP {
                    return Err(Error::ExactOverflow(format!(
                        "Fourier-Motzkin exceeded {FM_ROW_CAP} rows"
                    )));
                }
            }
        }
        bounds_stack.push((k, lowers, uppers));
        current = rest;
    }

    // Only constants remain.
    for ineq in &current {
        if ineq.constant.is_negative() {
            return Ok((false, None));
        }
    }

    // Back-substitute a feasible point.
    let mut y = vec![BigRational::zero(); nfree];
    for (k, lowers, uppers) in bounds_stack.into_iter().rev() {
        let eval = |b: &Ineq, y: &[BigRational]| -> BigRational {
            let mut v = b.constant.clone();
            for (j, c) in b.coeffs.iter().enumerate() {
                if !c.is_zero() {
                    v += c * &y[j];
                }
            }
            v
        };
        let lo = lowers.iter().map(|b| eval(b, &y)).max();
        let hi = uppers.iter().map(|b| eval(b, &y)).min();
        y[k] = match (lo, hi) {
            (Some(l), Some(h)) => (&l + &h) / BigRational::from_integer(BigInt::from(2)),
            (Some(l), None) => l,
            (None, Some(h)) => h,
            (None, None) => BigRational::zero(),
        };
    }

    // Reconstruct lambda and verify every original constraint exactly.
    let mut x = vec![BigRational::zero(); nvars];
    for (k, &c) in free_cols.iter().enumerate() {
        x[c] = y[k].clone();
    }
    for (r, &col) in pivot_row_col.iter().enumerate() {
        let mut v = reduced[r].1.clone();
        for (k, &c) in free_cols.iter().enumerate() {
            if !reduced[r].0[c].is_zero() {
                v -= &reduced[r].0[c] * &y[k];
            }
        }
        x[col] = v;
    }
    let lambda: Vec<Vec<BigRational>> = (0..m2)
        .map(|b| x[b * m1..(b + 1) * m1].to_vec())
        .collect();
    let valid = verify_witness(kappa2, kappa1, support, &lambda);
    if !valid {
        return Err(Error::DegenerateLp(
            "exact elimination produced an invalid witness".into(),
        ));
    }
    Ok((true, Some(lambda)))
}

fn verify_witness(
    kappa2: &[Vec<BigRational>],
    kappa1: &[Vec<BigRational>],
    support: &[bool],
    lambda: &[Vec<BigRational>],
) -> bool {
    let m1 = kappa1[0].len();
    let m2 = kappa2[0].len();
    for row in lambda {
        if row.iter().any(|v| v.is_negative()) {
            return false;
        }
        let sum: BigRational = row.iter().sum();
        if !sum.is_one() {
            return false;
        }
    }
    for (s, sup) in support.iter().enumerate() {
        if !sup {
            continue;
        }
        for a in 0..m1 {
            let mut v = BigRational::zero();
            for b in 0..m2 {
                v += &kappa2[s][b] * &lambda[b][a];
            }
            if v != kappa1[s][a] {
                return false;
            }
        }
    }
    true
}
