//! Core domain types: events, datasets, patterns, mining parameters.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

/// Cell value separating itemsets in [`Flattening::Separator`] rows.
/// Never a valid event code.
pub const SEPARATOR: i32 = 0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DatasetError {
    #[error("sequence {sequence}: literals must be positive")]
    InvalidLiteral { sequence: usize },
    #[error("row {row}: first code must be negative (transformed)")]
    RowNotTransformed { row: usize },
    #[error("row {row}: unexpected separator cell in transformed data")]
    UnexpectedSeparator { row: usize },
    #[error("expected {expected:?} flattening, got {found:?}")]
    WrongFlattening {
        expected: Flattening,
        found: Flattening,
    },
    #[error("theta {theta} outside (0, 1]")]
    InvalidTheta { theta: f64 },
    #[error("minimum support count must be at least 1")]
    InvalidMinsup,
    #[error("pattern must contain at least one nonempty itemset")]
    EmptyPattern,
    #[error("dataset too large for 32-bit node arena")]
    TooLarge,
}

/// One event occurrence in a flattened row.
///
/// The sign carries structure: a negative code marks the event that opens
/// a new itemset, a positive code continues the current one. The literal
/// is the absolute value; zero is reserved for [`SEPARATOR`].
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct EventCode(i32);

impl EventCode {
    pub fn original(literal: u32) -> EventCode {
        debug_assert!(literal > 0 && literal <= i32::MAX as u32);
        EventCode(literal as i32)
    }

    pub fn transformed(literal: u32) -> EventCode {
        debug_assert!(literal > 0 && literal <= i32::MAX as u32);
        EventCode(-(literal as i32))
    }

    /// `None` for the separator sentinel, which is not an event.
    pub fn from_raw(raw: i32) -> Option<EventCode> {
        if raw == SEPARATOR {
            None
        } else {
            Some(EventCode(raw))
        }
    }

    pub fn raw(self) -> i32 {
        self.0
    }

    pub fn literal(self) -> u32 {
        self.0.unsigned_abs()
    }

    /// True when this event opens a new itemset.
    pub fn is_transformed(self) -> bool {
        self.0 < 0
    }
}

impl fmt::Debug for EventCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

pub type Itemset = Vec<u32>;
pub type Sequence = Vec<Itemset>;

/// A dataset in canonical structured form: every itemset sorted strictly
/// ascending, no empty itemsets or sequences. Construct via
/// [`canonicalize`], [`unflatten`](crate::unflatten) or
/// [`parse_spmf`](crate::parse_spmf).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct StructuredDataset {
    sequences: Vec<Sequence>,
}

impl StructuredDataset {
    pub fn sequences(&self) -> &[Sequence] {
        &self.sequences
    }

    /// Number of sequences.
    pub fn len(&self) -> usize {
        self.sequences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequences.is_empty()
    }

    /// Total number of events across all itemsets.
    pub fn total_entries(&self) -> usize {
        self.sequences
            .iter()
            .flat_map(|s| s.iter())
            .map(|i| i.len())
            .sum()
    }

    pub(crate) fn from_canonical(sequences: Vec<Sequence>) -> StructuredDataset {
        StructuredDataset { sequences }
    }
}

/// Bring raw nested lists into canonical form: sort each itemset, drop
/// duplicate literals, drop empty itemsets and empty sequences. Rejects
/// the literal 0 (negative literals cannot be represented at all).
pub fn canonicalize(raw: Vec<Sequence>) -> Result<StructuredDataset, DatasetError> {
    let mut sequences = Vec::with_capacity(raw.len());
    for (index, seq) in raw.into_iter().enumerate() {
        let mut out: Sequence = Vec::with_capacity(seq.len());
        for mut itemset in seq {
            if itemset.iter().any(|&l| l == 0) {
                return Err(DatasetError::InvalidLiteral { sequence: index });
            }
            itemset.sort_unstable();
            itemset.dedup();
            if !itemset.is_empty() {
                out.push(itemset);
            }
        }
        if !out.is_empty() {
            sequences.push(out);
        }
    }
    Ok(StructuredDataset { sequences })
}

/// True when `small` is a subset of `big`; both must be sorted ascending.
pub(crate) fn is_subset(small: &[u32], big: &[u32]) -> bool {
    let mut it = big.iter();
    'outer: for &want in small {
        for &have in it.by_ref() {
            match have.cmp(&want) {
                Ordering::Less => continue,
                Ordering::Equal => continue 'outer,
                Ordering::Greater => return false,
            }
        }
        return false;
    }
    true
}

/// Containment test: `pattern` is a subsequence of `sequence` when its
/// itemsets embed into distinct itemsets of `sequence`, in order, each
/// covered by the itemset it maps to. Greedy left-to-right matching.
pub fn is_subsequence(pattern: &Pattern, sequence: &[Itemset]) -> bool {
    let mut next = 0usize;
    'pat: for want in pattern.itemsets() {
        while next < sequence.len() {
            let idx = next;
            next += 1;
            if is_subset(want, &sequence[idx]) {
                continue 'pat;
            }
        }
        return false;
    }
    true
}

/// Number of sequences of `d` containing `pattern`.
pub fn support_of(d: &StructuredDataset, pattern: &Pattern) -> u64 {
    d.sequences()
        .iter()
        .filter(|s| is_subsequence(pattern, s))
        .count() as u64
}

/// A candidate or mined pattern: an ordered list of itemsets in the same
/// canonical form as dataset sequences.
///
/// Ordering is by total event count first, then element-wise over the
/// flattened form, comparing `(literal, opens-new-itemset)` with the
/// itemset-opening form sorting before the continuing form. This gives a
/// stable, human-scannable output order: short patterns first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Pattern {
    itemsets: Vec<Itemset>,
}

impl Pattern {
    /// Canonicalizes the given itemsets; rejects empty itemsets, an empty
    /// list, or the literal 0.
    pub fn new(itemsets: Vec<Itemset>) -> Result<Pattern, DatasetError> {
        if itemsets.is_empty() || itemsets.iter().any(|i| i.is_empty()) {
            return Err(DatasetError::EmptyPattern);
        }
        if itemsets.iter().flatten().any(|&l| l == 0) {
            return Err(DatasetError::InvalidLiteral { sequence: 0 });
        }
        let mut itemsets = itemsets;
        for itemset in &mut itemsets {
            itemset.sort_unstable();
            itemset.dedup();
        }
        Ok(Pattern { itemsets })
    }

    pub fn singleton(literal: u32) -> Pattern {
        debug_assert!(literal > 0);
        Pattern {
            itemsets: vec![vec![literal]],
        }
    }

    pub fn itemsets(&self) -> &[Itemset] {
        &self.itemsets
    }

    pub fn last_itemset(&self) -> &[u32] {
        self.itemsets.last().expect("pattern is never empty")
    }

    /// Total number of events.
    pub fn total_len(&self) -> usize {
        self.itemsets.iter().map(|i| i.len()).sum()
    }

    /// This pattern extended with `{literal}` as a new final itemset.
    pub fn with_sequence_extension(&self, literal: u32) -> Pattern {
        let mut itemsets = self.itemsets.clone();
        itemsets.push(vec![literal]);
        Pattern { itemsets }
    }

    /// This pattern with `literal` appended to the final itemset. The
    /// literal must exceed the current maximum of that itemset, which
    /// keeps growth canonical and duplicate-free.
    pub fn with_itemset_extension(&self, literal: u32) -> Pattern {
        debug_assert!(literal > *self.last_itemset().last().unwrap());
        let mut itemsets = self.itemsets.clone();
        itemsets.last_mut().unwrap().push(literal);
        Pattern { itemsets }
    }

    /// Flattened signed codes: each itemset's first literal negated.
    pub fn flat_codes(&self) -> Vec<EventCode> {
        let mut out = Vec::with_capacity(self.total_len());
        for itemset in &self.itemsets {
            for (k, &lit) in itemset.iter().enumerate() {
                out.push(if k == 0 {
                    EventCode::transformed(lit)
                } else {
                    EventCode::original(lit)
                });
            }
        }
        out
    }

    fn flat_key(&self) -> impl Iterator<Item = (u32, u8)> + '_ {
        self.itemsets
            .iter()
            .flat_map(|i| i.iter().enumerate().map(|(k, &l)| (l, (k != 0) as u8)))
    }
}

impl Ord for Pattern {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_len()
            .cmp(&other.total_len())
            .then_with(|| self.flat_key().cmp(other.flat_key()))
    }
}

impl PartialOrd for Pattern {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Pattern {
    /// Text form used in pattern files: literals separated by spaces, each
    /// itemset closed by `-1`, e.g. `1 2 -1 3 -1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for itemset in &self.itemsets {
            for lit in itemset {
                if !first {
                    write!(f, " ")?;
                }
                first = false;
                write!(f, "{lit}")?;
            }
            write!(f, " -1")?;
        }
        Ok(())
    }
}

/// Mining thresholds. `minsup_count` is the absolute sequence count a
/// pattern must reach; `theta` records the equivalent fraction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MiningParams {
    pub theta: f64,
    pub minsup_count: u64,
}

impl MiningParams {
    /// Absolute threshold from a fraction: `ceil(theta * n)`, at least 1.
    ///
    /// The product is nudged down by one part in 10^9 before the ceiling:
    /// binary floats can land a hair above an exact integer (0.8 * 5 is
    /// not 4.0 in f64) and the ceiling of an intended-exact product must
    /// not round up.
    pub fn from_theta(theta: f64, n_sequences: usize) -> Result<MiningParams, DatasetError> {
        if !(theta > 0.0 && theta <= 1.0) {
            return Err(DatasetError::InvalidTheta { theta });
        }
        let x = theta * n_sequences as f64;
        let minsup_count = ((x - x * 1e-9).ceil() as u64).max(1);
        Ok(MiningParams {
            theta,
            minsup_count,
        })
    }

    /// Absolute threshold given directly; must be at least 1.
    pub fn from_count(minsup_count: u64, n_sequences: usize) -> Result<MiningParams, DatasetError> {
        if minsup_count == 0 {
            return Err(DatasetError::InvalidMinsup);
        }
        let theta = if n_sequences == 0 {
            1.0
        } else {
            minsup_count as f64 / n_sequences as f64
        };
        Ok(MiningParams {
            theta,
            minsup_count,
        })
    }
}

/// Mined output: frequent patterns with their supports, iterated in the
/// canonical [`Pattern`] order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PatternSet {
    entries: BTreeMap<Pattern, u64>,
}

impl PatternSet {
    pub fn insert(&mut self, pattern: Pattern, support: u64) {
        let prev = self.entries.insert(pattern, support);
        debug_assert!(prev.is_none(), "pattern inserted twice");
    }

    pub fn get(&self, pattern: &Pattern) -> Option<u64> {
        self.entries.get(pattern).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Pattern, u64)> {
        self.entries.iter().map(|(p, &s)| (p, s))
    }
}

/// How a [`FlatDataset`] encodes itemset boundaries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flattening {
    /// Each itemset's first event carries a negative code.
    Transformed,
    /// A zero cell sits between consecutive itemsets of a sequence; no
    /// leading or trailing zeros. All event codes stay positive.
    Separator,
}

/// A dataset as one signed-integer row per sequence.
///
/// `n_sequences` is the number of sequences the dataset originally had;
/// support filtering keeps it while possibly dropping rows, so relative
/// thresholds stay anchored to the unfiltered input.
#[derive(Clone, Debug, PartialEq)]
pub struct FlatDataset {
    rows: Vec<Vec<i32>>,
    n_sequences: usize,
    alphabet_size: usize,
    max_row_len: usize,
    flattening: Flattening,
}

impl FlatDataset {
    /// Wraps pre-built rows, computing the summary fields. The rows are
    /// trusted to follow `flattening`; the mining entry points validate.
    pub fn from_rows(rows: Vec<Vec<i32>>, flattening: Flattening) -> FlatDataset {
        let n = rows.len();
        FlatDataset::with_original_n(rows, flattening, n)
    }

    pub(crate) fn with_original_n(
        rows: Vec<Vec<i32>>,
        flattening: Flattening,
        n_sequences: usize,
    ) -> FlatDataset {
        let mut literals: Vec<u32> = rows
            .iter()
            .flatten()
            .filter(|&&c| c != SEPARATOR)
            .map(|&c| c.unsigned_abs())
            .collect();
        literals.sort_unstable();
        literals.dedup();
        let max_row_len = rows.iter().map(|r| r.len()).max().unwrap_or(0);
        FlatDataset {
            rows,
            n_sequences,
            alphabet_size: literals.len(),
            max_row_len,
            flattening,
        }
    }

    pub fn rows(&self) -> &[Vec<i32>] {
        &self.rows
    }

    /// Original sequence count (not the surviving row count).
    pub fn n_sequences(&self) -> usize {
        self.n_sequences
    }

    /// Distinct literals appearing in the rows.
    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    /// Longest row in storage cells, separators included.
    pub fn max_row_len(&self) -> usize {
        self.max_row_len
    }

    /// Total storage cells across rows, separators included.
    pub fn total_entries(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn flattening(&self) -> Flattening {
        self.flattening
    }
}
