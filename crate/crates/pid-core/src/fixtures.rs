//! Built-in example distributions over `(S, X1, X2)`.
//!
//! Each fixture exists in two forms derived from one outcome table: an
//! `f64` [`JointDistribution`] for the measures, and a [`RationalJoint`]
//! for exact-arithmetic cross-checks. All probabilities are dyadic, so
//! the `f64` form is exact.

use crate::dist::JointDistribution;
use crate::exact::RationalJoint;
use crate::partitions::SetPartition;

struct Spec {
    sizes: [usize; 3],
    outcomes: &'static [([usize; 3], i64, i64)],
}

const COPY: Spec = Spec {
    sizes: [4, 2, 2],
    outcomes: &[
        ([0, 0, 0], 1, 4),
        ([1, 0, 1], 1, 4),
        ([2, 1, 0], 1, 4),
        ([3, 1, 1], 1, 4),
    ],
};

const AND: Spec = Spec {
    sizes: [2, 2, 2],
    outcomes: &[
        ([0, 0, 0], 1, 4),
        ([0, 0, 1], 1, 4),
        ([0, 1, 0], 1, 4),
        ([1, 1, 1], 1, 4),
    ],
};

const OR: Spec = Spec {
    sizes: [2, 2, 2],
    outcomes: &[
        ([0, 0, 0], 1, 4),
        ([1, 0, 1], 1, 4),
        ([1, 1, 0], 1, 4),
        ([1, 1, 1], 1, 4),
    ],
};

const XOR: Spec = Spec {
    sizes: [2, 2, 2],
    outcomes: &[
        ([0, 0, 0], 1, 4),
        ([1, 0, 1], 1, 4),
        ([1, 1, 0], 1, 4),
        ([0, 1, 1], 1, 4),
    ],
};

const SUM: Spec = Spec {
    sizes: [3, 2, 2],
    outcomes: &[
        ([0, 0, 0], 1, 4),
        ([1, 0, 1], 1, 4),
        ([1, 1, 0], 1, 4),
        ([2, 1, 1], 1, 4),
    ],
};

const X1_PROJECTION: Spec = Spec {
    sizes: [2, 2, 2],
    outcomes: &[
        ([0, 0, 0], 1, 4),
        ([0, 0, 1], 1, 4),
        ([1, 1, 0], 1, 4),
        ([1, 1, 1], 1, 4),
    ],
};

const F1: Spec = Spec {
    sizes: [3, 2, 2],
    outcomes: &[
        ([0, 0, 1], 1, 4),
        ([1, 1, 1], 1, 4),
        ([2, 0, 0], 1, 4),
        ([2, 1, 0], 1, 4),
    ],
};

const COUNTEREXAMPLE: Spec = Spec {
    sizes: [3, 2, 2],
    outcomes: &[
        ([0, 0, 0], 1, 4),
        ([0, 1, 0], 1, 8),
        ([1, 0, 1], 1, 4),
        ([1, 1, 0], 1, 8),
        ([2, 1, 1], 1, 4),
    ],
};

fn build(spec: &Spec) -> JointDistribution {
    let outcomes: Vec<(&[usize], f64)> = spec
        .outcomes
        .iter()
        .map(|(c, n, d)| (c.as_slice(), *n as f64 / *d as f64))
        .collect();
    JointDistribution::from_outcomes(
        vec!["S".into(), "X1".into(), "X2".into()],
        spec.sizes.to_vec(),
        &outcomes,
    )
    .expect("built-in fixture is valid")
}

fn build_rational(spec: &Spec) -> RationalJoint {
    let outcomes: Vec<(&[usize], i64, i64)> = spec
        .outcomes
        .iter()
        .map(|(c, n, d)| (&c[..], *n, *d))
        .collect();
    RationalJoint::from_outcomes(spec.sizes.to_vec(), &outcomes)
        .expect("built-in fixture is valid")
}

/// Two uniform independent bits; `S = (X1, X2)` copies both.
pub fn copy() -> JointDistribution {
    build(&COPY)
}

/// Two uniform independent bits; `S = X1 AND X2`.
pub fn and() -> JointDistribution {
    build(&AND)
}

/// Two uniform independent bits; `S = X1 OR X2`.
pub fn or() -> JointDistribution {
    build(&OR)
}

/// Two uniform independent bits; `S = X1 XOR X2`.
pub fn xor() -> JointDistribution {
    build(&XOR)
}

/// Two uniform independent bits; `S = X1 + X2` with three symbols.
pub fn sum() -> JointDistribution {
    build(&SUM)
}

/// Two uniform independent bits; `S = X1` (ignores `X2`).
pub fn x1_projection() -> JointDistribution {
    build(&X1_PROJECTION)
}

/// Three-symbol target: when `X2 = 1`, `S = X1`; when `X2 = 0`, `S = 2`
/// and `X1` is uniform noise.
pub fn f1() -> JointDistribution {
    build(&F1)
}

/// The worked example for the extractable decomposition: a three-symbol
/// target whose coarsening by [`counterexample_partition`] is exactly the
/// AND distribution, with unique information in `X1` that no
/// deterministic function of `S` can retain.
pub fn counterexample() -> JointDistribution {
    build(&COUNTEREXAMPLE)
}

/// The coarsening `{0,1}{2}` of the counterexample target.
pub fn counterexample_partition() -> SetPartition {
    SetPartition::from_rgs(vec![0, 0, 1]).expect("valid partition")
}

/// Exact rational form of [`counterexample`].
pub fn counterexample_rational() -> RationalJoint {
    build_rational(&COUNTEREXAMPLE)
}

/// Exact rational form of [`and`].
pub fn and_rational() -> RationalJoint {
    build_rational(&AND)
}

/// Names accepted by [`named`], in display order.
pub fn fixture_names() -> &'static [&'static str] {
    &["copy", "and", "or", "xor", "sum", "x1", "f1", "counterexample"]
}

/// Looks up a fixture by name (see [`fixture_names`]).
pub fn named(name: &str) -> Option<JointDistribution> {
    match name {
        "copy" => Some(copy()),
        "and" => Some(and()),
        "or" => Some(or()),
        "xor" => Some(xor()),
        "sum" => Some(sum()),
        "x1" => Some(x1_projection()),
        "f1" => Some(f1()),
        "counterexample" => Some(counterexample()),
        _ => None,
    }
}

/// Looks up the exact rational form of a fixture by name.
pub fn named_rational(name: &str) -> Option<RationalJoint> {
    let spec = match name {
        "copy" => &COPY,
        "and" => &AND,
        "or" => &OR,
        "xor" => &XOR,
        "sum" => &SUM,
        "x1" => &X1_PROJECTION,
        "f1" => &F1,
        "counterexample" => &COUNTEREXAMPLE,
        _ => return None,
    };
    Some(build_rational(spec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::ToPrimitive;

    #[test]
    fn all_fixtures_build_and_have_three_axes() {
        for name in fixture_names() {
            let d = named(name).unwrap();
            assert_eq!(d.n_axes(), 3, "{name}");
            assert_eq!(d.axis_names()[0], "S", "{name}");
            let r = named_rational(name).unwrap();
            assert_eq!(r.sizes(), d.sizes(), "{name}");
            for (i, p) in r.pmf().iter().enumerate() {
                assert_eq!(p.to_f64().unwrap(), d.pmf()[i], "{name} cell {i}");
            }
        }
    }

    #[test]
    fn counterexample_coarsens_to_and() {
        let q = counterexample()
            .quotient_target(&counterexample_partition())
            .unwrap();
        let target = and();
        assert_eq!(q.sizes(), target.sizes());
        for i in 0..q.pmf().len() {
            assert!((q.pmf()[i] - target.pmf()[i]).abs() < 1e-15, "cell {i}");
        }
        // Same statement in exact arithmetic.
        let qr = counterexample_rational()
            .quotient_target(&counterexample_partition())
            .unwrap();
        assert_eq!(qr, and_rational());
    }

    #[test]
    fn counterexample_channels_match_hand_computation() {
        let r = counterexample_rational();
        let (kappa2, support) = r.channel(0, 2).unwrap();
        assert!(support.iter().all(|&s| s));
        let q = |n: i64, d: i64| {
            num::rational::BigRational::new(num::bigint::BigInt::from(n), num::bigint::BigInt::from(d))
        };
        assert_eq!(kappa2[0], vec![q(1, 1), q(0, 1)]);
        assert_eq!(kappa2[1], vec![q(1, 3), q(2, 3)]);
        assert_eq!(kappa2[2], vec![q(0, 1), q(1, 1)]);
        let (kappa1, _) = r.channel(0, 1).unwrap();
        assert_eq!(kappa1[0], vec![q(2, 3), q(1, 3)]);
        assert_eq!(kappa1[1], vec![q(2, 3), q(1, 3)]);
        assert_eq!(kappa1[2], vec![q(0, 1), q(1, 1)]);
    }

    #[test]
    fn copy_target_enumerates_both_bits() {
        let d = copy();
        assert_eq!(d.sizes(), &[4, 2, 2]);
        assert!((d.mutual_information(&[0], &[1, 2]).unwrap() - 2.0).abs() < 1e-12);
    }
}
