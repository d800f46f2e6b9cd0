//! Shared generators and oracles for the integration suites.
#![allow(dead_code)]

use pid_core::dist::JointDistribution;
use pid_core::partitions::SetPartition;
use pid_core::polytope::MarginalPolytope;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random three-axis joint. Axis sizes are drawn from `2..=max_symbols`,
/// cell masses from Exp(1), and each cell is emptied with probability
/// `zero_prob` (so supports of all shapes appear).
pub fn random_joint(rng: &mut ChaCha8Rng, max_symbols: usize, zero_prob: f64) -> JointDistribution {
    loop {
        let sizes = vec![
            rng.gen_range(2..=max_symbols),
            rng.gen_range(2..=max_symbols),
            rng.gen_range(2..=max_symbols),
        ];
        let cells = sizes.iter().product();
        let mut pmf = vec![0.0; cells];
        let mut occupied = 0usize;
        for p in pmf.iter_mut() {
            if rng.gen::<f64>() >= zero_prob {
                *p = -rng.gen::<f64>().max(1e-300).ln();
                occupied += 1;
            }
        }
        if occupied < 2 {
            continue;
        }
        let total: f64 = pmf.iter().sum();
        for p in pmf.iter_mut() {
            *p /= total;
        }
        // Push rounding residue into the heaviest cell so the pmf sums to
        // one at full precision.
        let residue = 1.0 - pmf.iter().sum::<f64>();
        let heaviest = pmf
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .unwrap();
        pmf[heaviest] += residue;
        let names = vec!["S".to_string(), "X1".to_string(), "X2".to_string()];
        if let Ok(dist) = JointDistribution::new(names, sizes, pmf) {
            return dist;
        }
    }
}

/// A uniformly random restricted-growth string over `n` symbols.
pub fn random_partition(rng: &mut ChaCha8Rng, n: usize) -> SetPartition {
    let mut rgs = vec![0usize; n];
    let mut max = 0usize;
    for slot in rgs.iter_mut().skip(1) {
        let v = rng.gen_range(0..=max + 1);
        *slot = v;
        max = max.max(v);
    }
    SetPartition::from_rgs(rgs).expect("generated string is restricted-growth")
}

/// A random row-stochastic channel matrix.
pub fn random_channel_rows(rng: &mut ChaCha8Rng, inputs: usize, outputs: usize) -> Vec<Vec<f64>> {
    (0..inputs)
        .map(|_| {
            let mut row: Vec<f64> = (0..outputs)
                .map(|_| -rng.gen::<f64>().max(1e-300).ln())
                .collect();
            let total: f64 = row.iter().sum();
            for v in row.iter_mut() {
                *v /= total;
            }
            let residue = 1.0 - row.iter().sum::<f64>();
            row[0] += residue;
            row
        })
        .collect()
}

/// `I_Q(S; X1 | X2)` for a dense pmf over the polytope's axis shape.
pub fn conditional_mi_of_pmf(poly: &MarginalPolytope, q: &[f64]) -> f64 {
    let (ns, n1, n2) = poly.sizes();
    let dist = JointDistribution::new(
        vec!["S".into(), "X1".into(), "X2".into()],
        vec![ns, n1, n2],
        q.to_vec(),
    )
    .expect("grid point is a valid pmf");
    dist.conditional_mutual_information(&[0], &[1], &[2])
        .expect("axes are in range")
}

/// Brute-force minimum of `I_Q(S;X1|X2)` over the marginal polytope by
/// nested grid refinement over the free coordinates. Intended for small
/// dimensions (binary alphabets give at most two free directions).
pub fn grid_oracle_ui1(dist: &JointDistribution, steps: usize, stages: usize) -> f64 {
    let poly = MarginalPolytope::new(dist).expect("three axes");
    let d = poly.dim();
    let base = poly.observed().to_vec();
    if d == 0 {
        return conditional_mi_of_pmf(&poly, &base);
    }
    // Outer bounds per coordinate: the largest step possible from the
    // observed point in either direction anywhere in the polytope is
    // bounded by the total mass, so [-1, 1] always covers the feasible
    // range of each free coefficient.
    let mut lo = vec![-1.0f64; d];
    let mut hi = vec![1.0f64; d];
    let mut best_val = f64::INFINITY;
    let mut best_t = vec![0.0f64; d];
    for _ in 0..stages {
        let mut idx = vec![0usize; d];
        let mut point = vec![0.0f64; base.len()];
        loop {
            let t: Vec<f64> = (0..d)
                .map(|j| lo[j] + (hi[j] - lo[j]) * idx[j] as f64 / steps as f64)
                .collect();
            point.copy_from_slice(&base);
            for (j, basis) in poly.basis().iter().enumerate() {
                basis.add_to(&mut point, t[j]);
            }
            if poly.is_feasible(&point, 1e-9) {
                for v in point.iter_mut() {
                    if *v < 0.0 {
                        *v = 0.0;
                    }
                }
                let val = conditional_mi_of_pmf(&poly, &point);
                if val < best_val {
                    best_val = val;
                    best_t = t;
                }
            }
            // Advance the mixed-radix counter.
            let mut j = 0;
            loop {
                if j == d {
                    break;
                }
                idx[j] += 1;
                if idx[j] <= steps {
                    break;
                }
                idx[j] = 0;
                j += 1;
            }
            if j == d {
                break;
            }
        }
        // Zoom in around the best point found at this stage.
        for j in 0..d {
            let span = (hi[j] - lo[j]) / steps as f64;
            lo[j] = best_t[j] - 2.0 * span;
            hi[j] = best_t[j] + 2.0 * span;
        }
    }
    best_val
}
