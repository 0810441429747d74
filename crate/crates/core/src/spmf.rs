//! Text format for datasets and mined patterns.
//!
//! A dataset file holds one sequence per line: positive integers are
//! events, `-1` closes an itemset, `-2` closes the sequence, e.g.
//! `1 2 -1 1 -1 2 -1 -2`. A pattern file holds one pattern per line in
//! the same itemset notation followed by its support:
//! `1 2 -1 #SUP: 3`.

use std::io::{self, BufRead, Write};

use thiserror::Error;

use crate::model::{PatternSet, Sequence, StructuredDataset};

#[derive(Debug, Error, Clone, PartialEq)]
#[error("line {line}: {message}")]
pub struct SpmfError {
    pub line: usize,
    pub message: String,
}

impl SpmfError {
    fn new(line: usize, message: impl Into<String>) -> SpmfError {
        SpmfError {
            line,
            message: message.into(),
        }
    }
}

/// Parse a dataset, canonicalizing as it goes (itemsets sorted, literal
/// duplicates dropped). Itemsets may continue across line breaks; a
/// sequence ends at `-2`, or at end of input if itemsets are pending.
pub fn parse_spmf<R: BufRead>(reader: R) -> Result<StructuredDataset, SpmfError> {
    let mut sequences: Vec<Sequence> = Vec::new();
    let mut seq: Sequence = Vec::new();
    let mut itemset: Vec<u32> = Vec::new();
    let mut line_no = 0usize;
    for line in reader.lines() {
        line_no += 1;
        let line = line.map_err(|e| SpmfError::new(line_no, format!("read failed: {e}")))?;
        for token in line.split_whitespace() {
            let value: i64 = token
                .parse()
                .map_err(|_| SpmfError::new(line_no, format!("bad token {token:?}")))?;
            match value {
                v if v > 0 => {
                    if v > u32::MAX as i64 {
                        return Err(SpmfError::new(line_no, format!("event {v} out of range")));
                    }
                    itemset.push(v as u32);
                }
                -1 => {
                    if itemset.is_empty() {
                        return Err(SpmfError::new(line_no, "-1 closes an empty itemset"));
                    }
                    seq.push(std::mem::take(&mut itemset));
                }
                -2 => {
                    if !itemset.is_empty() {
                        return Err(SpmfError::new(line_no, "-2 not preceded by -1"));
                    }
                    if seq.is_empty() {
                        return Err(SpmfError::new(line_no, "-2 not preceded by -1"));
                    }
                    sequences.push(std::mem::take(&mut seq));
                }
                _ => {
                    return Err(SpmfError::new(line_no, format!("bad token {token:?}")));
                }
            }
        }
    }
    if !itemset.is_empty() {
        return Err(SpmfError::new(line_no, "input ends inside an itemset"));
    }
    if !seq.is_empty() {
        sequences.push(seq);
    }
    crate::canonicalize(sequences).map_err(|e| SpmfError::new(line_no, e.to_string()))
}

/// [`parse_spmf`] over an in-memory string.
pub fn parse_spmf_str(text: &str) -> Result<StructuredDataset, SpmfError> {
    parse_spmf(text.as_bytes())
}

/// Write a dataset, one sequence per line.
pub fn write_spmf<W: Write>(d: &StructuredDataset, mut w: W) -> io::Result<()> {
    for seq in d.sequences() {
        let mut first = true;
        for itemset in seq {
            for lit in itemset {
                if !first {
                    write!(w, " ")?;
                }
                first = false;
                write!(w, "{lit}")?;
            }
            write!(w, " -1")?;
        }
        writeln!(w, " -2")?;
    }
    Ok(())
}

/// Write mined patterns, one per line with its support, in the canonical
/// pattern order (event count, then flattened element order).
pub fn write_patterns<W: Write>(patterns: &PatternSet, mut w: W) -> io::Result<()> {
    for (pattern, support) in patterns.iter() {
        writeln!(w, "{pattern} #SUP: {support}")?;
    }
    Ok(())
}
