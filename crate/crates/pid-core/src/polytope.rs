//! The marginal polytope Δ_P: all joints over `(S, X1, X2)` that preserve
//! the observed `(S, X1)` and `(S, X2)` pair marginals.
//!
//! Δ_P is an affine slice of the simplex. Within each target slice `s`,
//! moving mass around a rectangle `{a0, a} x {b0, b}` with alternating
//! signs leaves both pair marginals fixed; anchoring `a0`, `b0` at the
//! first supported symbols of the slice yields a basis of the free
//! directions, one per `(a, b)` pair of non-anchor supported symbols. The
//! dimension is the sum over slices of `(|A_s| - 1)(|B_s| - 1)`.

use crate::dist::JointDistribution;
use crate::error::{Error, Result};
use rand::Rng;

/// One free direction: four cells with `+1/-1` coefficients.
#[derive(Debug, Clone)]
pub struct BasisVector {
    /// `(flat cell index, coefficient)`; coefficients are `+1` or `-1`.
    pub cells: [(usize, f64); 4],
}

impl BasisVector {
    /// Dot product with a dense vector (e.g. a gradient).
    pub fn dot(&self, dense: &[f64]) -> f64 {
        self.cells.iter().map(|&(i, c)| c * dense[i]).sum()
    }

    /// Adds `step * self` to a dense point.
    pub fn add_to(&self, point: &mut [f64], step: f64) {
        for &(i, c) in &self.cells {
            point[i] += step * c;
        }
    }
}

/// The marginal polytope of a three-axis joint.
#[derive(Debug, Clone)]
pub struct MarginalPolytope {
    ns: usize,
    n1: usize,
    n2: usize,
    /// Observed joint, the reference point of the polytope.
    observed: Vec<f64>,
    /// P(s, x1), row-major `s * n1 + a`.
    pair1: Vec<f64>,
    /// P(s, x2), row-major `s * n2 + b`.
    pair2: Vec<f64>,
    /// Support closure: cell `(s, a, b)` may carry mass iff
    /// `P(s, a) > 0` and `P(s, b) > 0`.
    closure: Vec<bool>,
    basis: Vec<BasisVector>,
}

impl MarginalPolytope {
    pub fn new(dist: &JointDistribution) -> Result<MarginalPolytope> {
        if dist.n_axes() != 3 {
            return Err(Error::invalid(format!(
                "the marginal polytope needs axes (S, X1, X2); got {} axes",
                dist.n_axes()
            )));
        }
        let (ns, n1, n2) = (dist.sizes()[0], dist.sizes()[1], dist.sizes()[2]);
        let m1 = dist.marginal(&[0, 1])?;
        let m2 = dist.marginal(&[0, 2])?;
        let pair1 = m1.pmf().to_vec();
        let pair2 = m2.pmf().to_vec();
        let mut closure = vec![false; ns * n1 * n2];
        for s in 0..ns {
            for a in 0..n1 {
                if pair1[s * n1 + a] <= 0.0 {
                    continue;
                }
                for b in 0..n2 {
                    if pair2[s * n2 + b] > 0.0 {
                        closure[(s * n1 + a) * n2 + b] = true;
                    }
                }
            }
        }
        let mut basis = Vec::new();
        for s in 0..ns {
            let supp_a: Vec<usize> = (0..n1).filter(|&a| pair1[s * n1 + a] > 0.0).collect();
            let supp_b: Vec<usize> = (0..n2).filter(|&b| pair2[s * n2 + b] > 0.0).collect();
            if supp_a.len() < 2 || supp_b.len() < 2 {
                continue;
            }
            let (a0, b0) = (supp_a[0], supp_b[0]);
            let cell = |a: usize, b: usize| (s * n1 + a) * n2 + b;
            for &a in &supp_a[1..] {
                for &b in &supp_b[1..] {
                    basis.push(BasisVector {
                        cells: [
                            (cell(a, b), 1.0),
                            (cell(a, b0), -1.0),
                            (cell(a0, b), -1.0),
                            (cell(a0, b0), 1.0),
                        ],
                    });
                }
            }
        }
        Ok(MarginalPolytope {
            ns,
            n1,
            n2,
            observed: dist.pmf().to_vec(),
            pair1,
            pair2,
            closure,
            basis,
        })
    }

    pub fn sizes(&self) -> (usize, usize, usize) {
        (self.ns, self.n1, self.n2)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisVector] {
        &self.basis
    }

    pub fn closure(&self) -> &[bool] {
        &self.closure
    }

    pub fn pair1(&self) -> &[f64] {
        &self.pair1
    }

    pub fn pair2(&self) -> &[f64] {
        &self.pair2
    }

    /// The observed joint pmf (a feasible point by construction).
    pub fn observed(&self) -> Vec<f64> {
        self.observed.clone()
    }

    /// The coupling that makes `X1` and `X2` conditionally independent
    /// given `S`: `q(s, a, b) = P(s, a) P(s, b) / P(s)`. It is feasible
    /// and strictly positive on the whole closure, which makes it a good
    /// interior starting point.
    pub fn independent_coupling(&self) -> Vec<f64> {
        let mut q = vec![0.0; self.ns * self.n1 * self.n2];
        for s in 0..self.ns {
            let ps: f64 = (0..self.n1).map(|a| self.pair1[s * self.n1 + a]).sum();
            if ps <= 0.0 {
                continue;
            }
            for a in 0..self.n1 {
                let pa = self.pair1[s * self.n1 + a];
                if pa <= 0.0 {
                    continue;
                }
                for b in 0..self.n2 {
                    let pb = self.pair2[s * self.n2 + b];
                    if pb > 0.0 {
                        q[(s * self.n1 + a) * self.n2 + b] = pa * pb / ps;
                    }
                }
            }
        }
        q
    }

    /// Whether `q` lies in the polytope: nonnegative, supported on the
    /// closure, and reproducing both pair marginals, all within `tol`.
    pub fn is_feasible(&self, q: &[f64], tol: f64) -> bool {
        if q.len() != self.closure.len() {
            return false;
        }
        for (i, &v) in q.iter().enumerate() {
            if v < -tol || (!self.closure[i] && v > tol) {
                return false;
            }
        }
        for s in 0..self.ns {
            for a in 0..self.n1 {
                let sum: f64 = (0..self.n2)
                    .map(|b| q[(s * self.n1 + a) * self.n2 + b])
                    .sum();
                if (sum - self.pair1[s * self.n1 + a]).abs() > tol {
                    return false;
                }
            }
            for b in 0..self.n2 {
                let sum: f64 = (0..self.n1)
                    .map(|a| q[(s * self.n1 + a) * self.n2 + b])
                    .sum();
                if (sum - self.pair2[s * self.n2 + b]).abs() > tol {
                    return false;
                }
            }
        }
        true
    }

    /// The largest interval `[lo, hi]` (with `lo <= 0 <= hi`) such that
    /// `q + alpha * direction` stays nonnegative for `alpha` in it. The
    /// direction must keep the marginals fixed (any combination of basis
    /// vectors does).
    pub fn interval_along(&self, q: &[f64], direction: &[f64]) -> (f64, f64) {
        let mut lo = f64::NEG_INFINITY;
        let mut hi = f64::INFINITY;
        for (i, &d) in direction.iter().enumerate() {
            if d > 1e-300 {
                lo = lo.max(-q[i] / d);
            } else if d < -1e-300 {
                hi = hi.min(q[i] / -d);
            }
        }
        (lo.min(0.0), hi.max(0.0))
    }

    /// [`Self::interval_along`] for the `j`-th basis vector.
    pub fn coordinate_interval(&self, q: &[f64], j: usize) -> (f64, f64) {
        let mut lo = f64::NEG_INFINITY;
        let mut hi = f64::INFINITY;
        for &(i, c) in &self.basis[j].cells {
            if c > 0.0 {
                lo = lo.max(-q[i]);
            } else {
                hi = hi.min(q[i]);
            }
        }
        (lo.min(0.0), hi.max(0.0))
    }

    /// A random feasible point: starting from the independent coupling,
    /// take a uniform step inside the feasible interval of each basis
    /// direction in turn. `shrink` in `(0, 1]` keeps the point away from
    /// the boundary (1 allows touching it).
    pub fn random_feasible<R: Rng>(&self, rng: &mut R, shrink: f64) -> Vec<f64> {
        let mut q = self.independent_coupling();
        if self.basis.is_empty() {
            return q;
        }
        let mut order: Vec<usize> = (0..self.basis.len()).collect();
        for i in (1..order.len()).rev() {
            order.swap(i, rng.gen_range(0..=i));
        }
        for &j in &order {
            let (lo, hi) = self.coordinate_interval(&q, j);
            if hi - lo <= 0.0 {
                continue;
            }
            let t = lo + (hi - lo) * (0.5 + shrink * (rng.gen::<f64>() - 0.5));
            self.basis[j].add_to(&mut q, t);
            for v in q.iter_mut() {
                if *v < 0.0 {
                    *v = 0.0;
                }
            }
        }
        q
    }
}
