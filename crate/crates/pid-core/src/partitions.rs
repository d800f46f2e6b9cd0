//! Set partitions of `{0, .., n-1}` as restricted growth strings, with
//! lexicographic enumeration and Bell numbers.
//!
//! A restricted growth string (RGS) `r` encodes the partition in which
//! symbols `i` and `j` share a block iff `r[i] == r[j]`; blocks are
//! numbered by first appearance, so `r[0] == 0` and
//! `r[i] <= 1 + max(r[..i])`. Lexicographic order on RGS runs from the
//! single-block partition `0 0 .. 0` to the all-singletons identity
//! `0 1 .. n-1`.

use crate::error::{Error, Result};
use serde::Serialize;

/// Largest `n` for which partition enumeration is allowed (`B_12` is
/// ~4.2 million partitions; beyond that enumeration stops being a
/// desk-scale operation).
pub const MAX_ENUMERATION_SIZE: usize = 12;

/// Largest argument accepted by [`bell_number`]; `B_20` still fits `u64`.
pub const MAX_BELL_ARGUMENT: usize = 20;

/// A set partition in restricted-growth-string form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct SetPartition {
    rgs: Vec<usize>,
}

impl SetPartition {
    /// Validates and wraps a restricted growth string.
    pub fn from_rgs(rgs: Vec<usize>) -> Result<SetPartition> {
        if rgs.is_empty() {
            return Err(Error::invalid("partition of an empty set"));
        }
        if rgs[0] != 0 {
            return Err(Error::invalid("restricted growth string must start at 0"));
        }
        let mut max = 0usize;
        for (i, &r) in rgs.iter().enumerate().skip(1) {
            if r > max + 1 {
                return Err(Error::invalid(format!(
                    "rgs[{i}] = {r} exceeds 1 + max of prefix ({max})"
                )));
            }
            max = max.max(r);
        }
        Ok(SetPartition { rgs })
    }

    /// The all-singletons partition (every symbol its own block).
    pub fn identity(n: usize) -> Result<SetPartition> {
        if n == 0 {
            return Err(Error::invalid("partition of an empty set"));
        }
        Ok(SetPartition {
            rgs: (0..n).collect(),
        })
    }

    /// The single-block partition (all symbols merged).
    pub fn single_block(n: usize) -> Result<SetPartition> {
        if n == 0 {
            return Err(Error::invalid("partition of an empty set"));
        }
        Ok(SetPartition { rgs: vec![0; n] })
    }

    /// Number of symbols partitioned.
    pub fn n(&self) -> usize {
        self.rgs.len()
    }

    /// Number of blocks.
    pub fn block_count(&self) -> usize {
        self.rgs.iter().copied().max().unwrap_or(0) + 1
    }

    /// Block index of symbol `i`.
    pub fn block_of(&self, i: usize) -> usize {
        self.rgs[i]
    }

    pub fn rgs(&self) -> &[usize] {
        &self.rgs
    }

    pub fn is_identity(&self) -> bool {
        self.rgs.iter().enumerate().all(|(i, &r)| r == i)
    }

    /// Blocks as sorted symbol lists, ordered by first appearance.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.block_count()];
        for (i, &r) in self.rgs.iter().enumerate() {
            blocks[r].push(i);
        }
        blocks
    }

    /// Renders as a block list, e.g. `{0,1}{2}`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for block in self.blocks() {
            out.push('{');
            for (k, sym) in block.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                out.push_str(&sym.to_string());
            }
            out.push('}');
        }
        out
    }

    /// Parses either a block list (`{0,1}{2}`) or a comma-separated
    /// restricted growth string (`0,0,1`).
    pub fn parse(text: &str, n: usize) -> Result<SetPartition> {
        let text = text.trim();
        if text.starts_with('{') {
            Self::parse_blocks(text, n)
        } else {
            let rgs: Result<Vec<usize>> = text
                .split(',')
                .map(|tok| {
                    tok.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::invalid(format!("bad rgs entry {tok:?}")))
                })
                .collect();
            let rgs = rgs?;
            if rgs.len() != n {
                return Err(Error::invalid(format!(
                    "partition of {} symbols where {n} were expected",
                    rgs.len()
                )));
            }
            SetPartition::from_rgs(rgs)
        }
    }

    fn parse_blocks(text: &str, n: usize) -> Result<SetPartition> {
        let mut assignment: Vec<Option<usize>> = vec![None; n];
        let mut block = 0usize;
        let mut rest = text;
        while !rest.is_empty() {
            if !rest.starts_with('{') {
                return Err(Error::invalid("expected '{' in partition text"));
            }
            let close = rest
                .find('}')
                .ok_or_else(|| Error::invalid("unclosed '{' in partition text"))?;
            let inner = &rest[1..close];
            for tok in inner.split(',') {
                let tok = tok.trim();
                if tok.is_empty() {
                    return Err(Error::invalid("empty symbol in partition block"));
                }
                let sym: usize = tok
                    .parse()
                    .map_err(|_| Error::invalid(format!("bad symbol {tok:?} in partition")))?;
                if sym >= n {
                    return Err(Error::invalid(format!(
                        "symbol {sym} out of range for {n}-symbol target"
                    )));
                }
                if assignment[sym].is_some() {
                    return Err(Error::invalid(format!("symbol {sym} listed twice")));
                }
                assignment[sym] = Some(block);
            }
            block += 1;
            rest = rest[close + 1..].trim_start();
        }
        let mut raw = Vec::with_capacity(n);
        for (sym, a) in assignment.iter().enumerate() {
            match a {
                Some(b) => raw.push(*b),
                None => {
                    return Err(Error::invalid(format!(
                        "symbol {sym} missing from partition"
                    )))
                }
            }
        }
        // Renumber blocks by first appearance so the result is a valid RGS
        // even if the caller listed blocks in an arbitrary order.
        let mut relabel: Vec<Option<usize>> = vec![None; block];
        let mut next = 0usize;
        let mut rgs = Vec::with_capacity(n);
        for b in raw {
            let lab = match relabel[b] {
                Some(l) => l,
                None => {
                    relabel[b] = Some(next);
                    next += 1;
                    next - 1
                }
            };
            rgs.push(lab);
        }
        SetPartition::from_rgs(rgs)
    }
}

/// Iterator over all partitions of `{0..n-1}` in lexicographic RGS order.
pub struct PartitionIter {
    rgs: Vec<usize>,
    /// `prefix_max[i]` = max of `rgs[..=i]`.
    prefix_max: Vec<usize>,
    done: bool,
}

/// Enumerates all set partitions of an `n`-symbol set, smallest RGS first.
///
/// `n` must be at most [`MAX_ENUMERATION_SIZE`]; the count of items equals
/// the Bell number `B_n`. The empty set has exactly one partition (the
/// empty one), matching `B_0 = 1`.
pub fn enumerate_partitions(n: usize) -> Result<PartitionIter> {
    if n > MAX_ENUMERATION_SIZE {
        return Err(Error::invalid(format!(
            "partition enumeration capped at {MAX_ENUMERATION_SIZE} symbols (got {n})"
        )));
    }
    Ok(PartitionIter {
        rgs: vec![0; n],
        prefix_max: vec![0; n],
        done: false,
    })
}

impl Iterator for PartitionIter {
    type Item = SetPartition;

    fn next(&mut self) -> Option<SetPartition> {
        if self.done {
            return None;
        }
        let current = SetPartition {
            rgs: self.rgs.clone(),
        };
        // Advance to the lexicographic successor: find the rightmost
        // position (never 0) that can still be incremented.
        let n = self.rgs.len();
        let mut i = n;
        loop {
            if i <= 1 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.rgs[i] <= self.prefix_max[i - 1] {
                self.rgs[i] += 1;
                self.prefix_max[i] = self.prefix_max[i - 1].max(self.rgs[i]);
                for j in i + 1..n {
                    self.rgs[j] = 0;
                    self.prefix_max[j] = self.prefix_max[j - 1];
                }
                break;
            }
        }
        Some(current)
    }
}

/// The Bell number `B_n` (number of set partitions of an `n`-set),
/// computed exactly via the Bell triangle. `n` must be at most
/// [`MAX_BELL_ARGUMENT`].
pub fn bell_number(n: usize) -> Result<u64> {
    if n > MAX_BELL_ARGUMENT {
        return Err(Error::invalid(format!(
            "bell_number capped at {MAX_BELL_ARGUMENT} (got {n})"
        )));
    }
    // Bell triangle: each row starts with the previous row's last entry,
    // and B_n is the first entry of row n.
    let mut row: Vec<u64> = vec![1];
    for _ in 0..n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(*row.last().unwrap());
        for &v in &row {
            let last = *next.last().unwrap();
            next.push(last + v);
        }
        row = next;
    }
    Ok(row[0])
}
