//! Text format for distributions.
//!
//! One outcome per line, whitespace-separated: the symbols of each axis
//! followed by the probability, e.g. `s x1 x2 p`. Symbols are arbitrary
//! tokens mapped to indices in first-appearance order; the probability is
//! a decimal (`0.125`, `2.5e-3`) or a rational (`1/8`), parsed exactly.
//! Lines starting with `#` are comments; unlisted outcomes have
//! probability 0.

use crate::dist::JointDistribution;
use crate::error::{Error, Result};
use crate::exact::{parse_ratio, RationalJoint};
use num::rational::BigRational;
use num::{Signed, ToPrimitive, Zero};
use std::collections::HashMap;

/// A parsed distribution: the `f64` joint, its exact rational source, and
/// the original symbol tokens of each axis (index order).
#[derive(Debug, Clone)]
pub struct ParsedDistribution {
    pub joint: JointDistribution,
    pub rational: RationalJoint,
    pub labels: Vec<Vec<String>>,
}

/// Parses the text format described at module level.
pub fn parse_distribution(text: &str) -> Result<ParsedDistribution> {
    let mut arity: Option<usize> = None;
    // Per-axis token -> index maps, and the tokens in index order.
    let mut maps: Vec<HashMap<String, usize>> = Vec::new();
    let mut labels: Vec<Vec<String>> = Vec::new();
    // Outcomes as (coords, probability, source line).
    let mut outcomes: Vec<(Vec<usize>, BigRational, usize)> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let lineno = lineno + 1;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let n_axes = match arity {
            None => {
                if tokens.len() < 2 {
                    return Err(Error::Parse {
                        line: lineno,
                        message: "expected at least one symbol and a probability".into(),
                    });
                }
                let n = tokens.len() - 1;
                arity = Some(n);
                maps = vec![HashMap::new(); n];
                labels = vec![Vec::new(); n];
                n
            }
            Some(n) => {
                if tokens.len() != n + 1 {
                    return Err(Error::Parse {
                        line: lineno,
                        message: format!(
                            "expected {} tokens (as on the first outcome line), found {}",
                            n + 1,
                            tokens.len()
                        ),
                    });
                }
                n
            }
        };
        let mut coords = Vec::with_capacity(n_axes);
        for (axis, tok) in tokens[..n_axes].iter().enumerate() {
            if tok.starts_with('#') {
                return Err(Error::Parse {
                    line: lineno,
                    message: format!("symbol {tok:?} may not start with '#'"),
                });
            }
            let next = maps[axis].len();
            let idx = *maps[axis].entry((*tok).to_string()).or_insert_with(|| {
                labels[axis].push((*tok).to_string());
                next
            });
            coords.push(idx);
        }
        let p = parse_ratio(tokens[n_axes]).map_err(|e| Error::Parse {
            line: lineno,
            message: e.to_string(),
        })?;
        if p.is_negative() {
            return Err(Error::Parse {
                line: lineno,
                message: "negative probability".into(),
            });
        }
        if let Some((_, _, first)) = outcomes.iter().find(|(c, _, _)| *c == coords) {
            return Err(Error::Parse {
                line: lineno,
                message: format!("outcome already listed on line {first}"),
            });
        }
        outcomes.push((coords, p, lineno));
    }

    let Some(n_axes) = arity else {
        return Err(Error::Parse {
            line: 0,
            message: "no outcome lines".into(),
        });
    };
    let sizes: Vec<usize> = maps.iter().map(|m| m.len()).collect();
    let cells: usize = sizes.iter().product();
    let mut strides = vec![1usize; n_axes];
    for i in (0..n_axes.saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * sizes[i + 1];
    }
    let mut rational_pmf = vec![BigRational::zero(); cells];
    for (coords, p, _) in &outcomes {
        let idx: usize = coords.iter().zip(&strides).map(|(&c, &s)| c * s).sum();
        rational_pmf[idx] = p.clone();
    }
    let rational = RationalJoint::new(sizes.clone(), rational_pmf)?;
    let names: Vec<String> = (0..n_axes)
        .map(|i| if i == 0 { "S".into() } else { format!("X{i}") })
        .collect();
    let pmf: Vec<f64> = rational
        .pmf()
        .iter()
        .map(|p| p.to_f64().unwrap_or(f64::NAN))
        .collect();
    let joint = JointDistribution::new(names, sizes, pmf)?;
    Ok(ParsedDistribution {
        joint,
        rational,
        labels,
    })
}

/// Renders a distribution in the module's text format, listing every cell
/// (zeros included) in row-major order so the alphabet shapes survive a
/// round-trip. Probabilities use the shortest decimal that re-parses to
/// the same `f64`.
///
/// `labels` supplies the symbol tokens per axis; omit it to label symbols
/// by index.
pub fn render_distribution(dist: &JointDistribution, labels: Option<&[Vec<String>]>) -> String {
    let mut out = String::new();
    let names = dist.axis_names().join(" ");
    out.push_str(&format!("# axes: {names}\n"));
    for idx in 0..dist.pmf().len() {
        let coords = dist.coords_of(idx);
        for (axis, &c) in coords.iter().enumerate() {
            match labels {
                Some(l) => out.push_str(&l[axis][c]),
                None => out.push_str(&c.to_string()),
            }
            out.push(' ');
        }
        out.push_str(&format!("{}\n", dist.pmf()[idx]));
    }
    out
}
