//! Phase-1 simplex: decides feasibility of `A x = b, x >= 0`.
//!
//! The program `min sum(artificials)` subject to `A x + artificials = b`
//! has optimum 0 exactly when the original system is feasible, and the
//! optimum measures the L1 infeasibility otherwise. Pivoting follows
//! Bland's rule, which cannot cycle.

use crate::error::{Error, Result};

/// Outcome of a phase-1 feasibility solve.
#[derive(Debug, Clone)]
pub struct LpFeasibility {
    /// `phase1_value <= 1e-10`; callers with stricter needs should
    /// inspect `phase1_value` directly.
    pub feasible: bool,
    /// A feasible point when `feasible`, otherwise the least-infeasible
    /// point found.
    pub point: Vec<f64>,
    /// L1 residual `sum |A x - b|` of `point` against the original
    /// system (the distance to feasibility at the optimum).
    pub phase1_value: f64,
}

/// Reduced costs smaller than this are treated as already optimal.
const COST_EPS: f64 = 1e-10;
/// Pivot entries smaller than this are numerical zeros; dividing by one
/// would amplify rounding noise into the tableau.
const PIVOT_TOL: f64 = 1e-9;
/// Ratio-test ties within this margin are broken by Bland's rule.
const RATIO_EPS: f64 = 1e-12;

/// Decides feasibility of `A x = b, x >= 0` for a dense `A`.
pub fn lp_feasibility(a: &[Vec<f64>], b: &[f64]) -> Result<LpFeasibility> {
    let m = a.len();
    if m == 0 || m != b.len() {
        return Err(Error::invalid("constraint matrix and rhs sizes must match"));
    }
    let n = a[0].len();
    if n == 0 || a.iter().any(|row| row.len() != n) {
        return Err(Error::invalid("constraint matrix must be rectangular"));
    }
    if a.iter().flatten().chain(b.iter()).any(|v| !v.is_finite()) {
        return Err(Error::invalid("non-finite entry in linear system"));
    }

    // Tableau: n structural columns, m artificial columns, rhs.
    let width = n + m + 1;
    let mut t = vec![vec![0.0_f64; width]; m];
    for (i, row) in a.iter().enumerate() {
        let flip = if b[i] < 0.0 { -1.0 } else { 1.0 };
        for (j, &v) in row.iter().enumerate() {
            t[i][j] = flip * v;
        }
        t[i][n + i] = 1.0;
        t[i][width - 1] = flip * b[i];
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    let max_pivots = 50_000usize;
    let mut optimal = false;
    for _ in 0..max_pivots {
        // Reduced costs for min sum(artificials): c_j = 1 for artificial
        // columns, 0 otherwise; d_j = c_j - sum over rows with artificial
        // basic variables of T[i][j]. Bland's rule (smallest usable
        // index) prevents cycling. A column whose entries are all below
        // the pivot tolerance cannot actually be pivoted on: since the
        // phase-1 objective is bounded below by zero, such an "improving"
        // column is numerical noise, and it is skipped rather than
        // divided by.
        let mut chosen: Option<(usize, usize)> = None;
        'cols: for j in 0..n + m {
            if basis.contains(&j) {
                continue;
            }
            let c_j = if j >= n { 1.0 } else { 0.0 };
            let mut d = c_j;
            for (i, &bi) in basis.iter().enumerate() {
                if bi >= n {
                    d -= t[i][j];
                }
            }
            if d >= -COST_EPS {
                continue;
            }
            // Ratio test over usable pivots; ties go to the smallest
            // basis index (Bland).
            let mut leaving: Option<(usize, f64)> = None;
            for i in 0..m {
                if t[i][j] > PIVOT_TOL {
                    let ratio = t[i][width - 1] / t[i][j];
                    let better = match leaving {
                        None => true,
                        Some((li, lr)) => {
                            ratio < lr - RATIO_EPS
                                || (ratio <= lr + RATIO_EPS && basis[i] < basis[li])
                        }
                    };
                    if better {
                        leaving = Some((i, ratio));
                    }
                }
            }
            if let Some((r, _)) = leaving {
                chosen = Some((j, r));
                break 'cols;
            }
        }
        let Some((j, r)) = chosen else {
            optimal = true;
            break;
        };

        // Pivot on (r, j).
        let pivot = t[r][j];
        for v in t[r].iter_mut() {
            *v /= pivot;
        }
        for i in 0..m {
            if i != r && t[i][j].abs() > 0.0 {
                let factor = t[i][j];
                for k in 0..width {
                    t[i][k] -= factor * t[r][k];
                }
            }
        }
        basis[r] = j;
        for row in t.iter_mut() {
            if row[width - 1].abs() < 1e-14 {
                row[width - 1] = row[width - 1].max(0.0);
            }
        }
    }

    if !optimal {
        return Err(Error::DegenerateLp(format!(
            "phase-1 simplex did not reach optimality within {max_pivots} pivots"
        )));
    }
    let mut point = vec![0.0_f64; n];
    for (i, &bi) in basis.iter().enumerate() {
        if bi < n {
            point[bi] = t[i][width - 1].max(0.0);
        }
    }
    // Report the distance of the returned point against the original
    // system rather than trusting the tableau's artificial column, so the
    // verdict cannot ride on accumulated pivot rounding.
    let mut phase1_value = 0.0;
    for (row, &rhs) in a.iter().zip(b) {
        let lhs: f64 = row.iter().zip(&point).map(|(&c, &x)| c * x).sum();
        phase1_value += (lhs - rhs).abs();
    }
    Ok(LpFeasibility {
        feasible: phase1_value <= 1e-10,
        point,
        phase1_value,
    })
}
