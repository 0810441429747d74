//! Pseudo-projection mining straight off the flat rows.
//!
//! A pattern is tracked as a list of `(row, position)` pairs, one per
//! matching row: the cell at which the pattern's minimal match ends.
//! Extensions scan each row only from that cell onward. This is the
//! lightest-weight miner and the baseline the tries are measured
//! against; frontier sizes here bound the trie frontier sizes from
//! above, since the trie merges rows that share a path.

use std::collections::BTreeMap;

use crate::model::{
    DatasetError, FlatDataset, Flattening, MiningParams, Pattern, PatternSet, SEPARATOR,
};
use crate::trie_miner::ExtensionKind;

/// One minimal pattern match: the row and the cell index (into the raw
/// row, separators included) where the match ends.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PositionPair {
    pub seq_index: usize,
    pub pos_index: usize,
}

/// A pattern with its minimal match position in every matching row — at
/// most one pair per row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TabularFrontier {
    pub pattern: Pattern,
    pub positions: Vec<PositionPair>,
}

/// Number of tracked pairs; also the pattern's support.
pub fn frontier_size_tabular(frontier: &TabularFrontier) -> usize {
    frontier.positions.len()
}

/// Mine sign-flattened rows. Rejects separator-flattened input and any
/// separator cell smuggled into transformed rows.
pub fn mine_tabular(f: &FlatDataset, params: &MiningParams) -> Result<PatternSet, DatasetError> {
    expect_flattening(f, Flattening::Transformed)?;
    Ok(mine(f, params, false).0)
}

/// Mine separator-flattened rows; same output as [`mine_tabular`] on the
/// sign-flattened form of the same data.
pub fn mine_tabular_separators(
    f: &FlatDataset,
    params: &MiningParams,
) -> Result<PatternSet, DatasetError> {
    expect_flattening(f, Flattening::Separator)?;
    Ok(mine(f, params, false).0)
}

/// As [`mine_tabular`], also returning every mined pattern's frontier.
pub fn mine_tabular_traced(
    f: &FlatDataset,
    params: &MiningParams,
) -> Result<(PatternSet, BTreeMap<Pattern, TabularFrontier>), DatasetError> {
    expect_flattening(f, Flattening::Transformed)?;
    Ok(mine(f, params, true))
}

fn expect_flattening(f: &FlatDataset, expected: Flattening) -> Result<(), DatasetError> {
    if f.flattening() != expected {
        return Err(DatasetError::WrongFlattening {
            expected,
            found: f.flattening(),
        });
    }
    for (index, row) in f.rows().iter().enumerate() {
        match expected {
            Flattening::Transformed => {
                if row.iter().any(|&c| c == SEPARATOR) {
                    return Err(DatasetError::UnexpectedSeparator { row: index });
                }
                if !row.is_empty() && row[0] >= 0 {
                    return Err(DatasetError::RowNotTransformed { row: index });
                }
            }
            Flattening::Separator => {
                if row.iter().any(|&c| c < 0) {
                    return Err(DatasetError::RowNotTransformed { row: index });
                }
            }
        }
    }
    Ok(())
}

/// Events of `row` from cell `from` on, as `(cell, literal, opens)`
/// where `opens` marks the first event of a data itemset. Handles both
/// flattenings; separator cells are skipped, never yielded.
fn events_from(
    row: &[i32],
    from: usize,
) -> impl Iterator<Item = (usize, u32, bool)> + '_ {
    row.iter().enumerate().skip(from).filter_map(move |(i, &c)| {
        if c == SEPARATOR {
            None
        } else {
            let opens = c < 0 || (i > 0 && row[i - 1] == SEPARATOR);
            Some((i, c.unsigned_abs(), opens))
        }
    })
}

fn mine(
    f: &FlatDataset,
    params: &MiningParams,
    traced: bool,
) -> (PatternSet, BTreeMap<Pattern, TabularFrontier>) {
    let mut miner = Miner {
        rows: f.rows(),
        minsup: params.minsup_count,
        out: PatternSet::default(),
        trace: BTreeMap::new(),
        traced,
    };

    // Seed frontiers: the first occurrence of each literal per row, in
    // either form.
    let mut seeds: BTreeMap<u32, Vec<PositionPair>> = BTreeMap::new();
    for (seq_index, row) in f.rows().iter().enumerate() {
        for (pos_index, literal, _) in events_from(row, 0) {
            let positions = seeds.entry(literal).or_default();
            if positions.last().map(|p| p.seq_index) != Some(seq_index) {
                positions.push(PositionPair {
                    seq_index,
                    pos_index,
                });
            }
        }
    }
    for (literal, positions) in seeds {
        if positions.len() as u64 >= miner.minsup {
            let frontier = TabularFrontier {
                pattern: Pattern::singleton(literal),
                positions,
            };
            miner.record(&frontier);
            miner.expand(&frontier);
        }
    }
    (miner.out, miner.trace)
}

struct Miner<'a> {
    rows: &'a [Vec<i32>],
    minsup: u64,
    out: PatternSet,
    trace: BTreeMap<Pattern, TabularFrontier>,
    traced: bool,
}

impl<'a> Miner<'a> {
    fn record(&mut self, frontier: &TabularFrontier) {
        self.out
            .insert(frontier.pattern.clone(), frontier.positions.len() as u64);
        if self.traced {
            self.trace
                .insert(frontier.pattern.clone(), frontier.clone());
        }
    }

    /// Scan each row from its frontier cell, collecting candidate
    /// extension positions, then recurse into the frequent ones.
    ///
    /// The scan mirrors the trie miner: cells still inside the anchor's
    /// data itemset extend that itemset directly; afterwards a counter
    /// tracks how much of the pattern's final itemset has reoccurred in
    /// the current data itemset, gating deeper itemset extensions, while
    /// any first occurrence of a literal is a sequence extension. Only
    /// the first qualifying position per row enters a candidate list.
    fn expand(&mut self, frontier: &TabularFrontier) {
        let last = frontier.pattern.last_itemset();
        let max_last = *last.last().unwrap();
        let mut candidates: BTreeMap<(u32, ExtensionKind), Vec<PositionPair>> = BTreeMap::new();

        for &PositionPair {
            seq_index,
            pos_index,
        } in &frontier.positions
        {
            let row = &self.rows[seq_index];
            let mut in_anchor_itemset = true;
            let mut rematch_len = 0usize;
            for (cell, literal, opens) in events_from(row, pos_index + 1) {
                if opens {
                    in_anchor_itemset = false;
                    rematch_len = usize::from(literal == last[0]);
                    push_candidate(
                        &mut candidates,
                        (literal, ExtensionKind::Sequence),
                        seq_index,
                        cell,
                    );
                } else if in_anchor_itemset {
                    if literal > max_last {
                        push_candidate(
                            &mut candidates,
                            (literal, ExtensionKind::Itemset),
                            seq_index,
                            cell,
                        );
                    }
                } else {
                    push_candidate(
                        &mut candidates,
                        (literal, ExtensionKind::Sequence),
                        seq_index,
                        cell,
                    );
                    if rematch_len == last.len() && literal > max_last {
                        push_candidate(
                            &mut candidates,
                            (literal, ExtensionKind::Itemset),
                            seq_index,
                            cell,
                        );
                    }
                    if rematch_len < last.len() && literal == last[rematch_len] {
                        rematch_len += 1;
                    }
                }
            }
        }

        for ((literal, kind), positions) in candidates {
            if positions.len() as u64 >= self.minsup {
                let pattern = match kind {
                    ExtensionKind::Sequence => {
                        frontier.pattern.with_sequence_extension(literal)
                    }
                    ExtensionKind::Itemset => frontier.pattern.with_itemset_extension(literal),
                };
                let next = TabularFrontier { pattern, positions };
                self.record(&next);
                self.expand(&next);
            }
        }
    }
}

fn push_candidate(
    candidates: &mut BTreeMap<(u32, ExtensionKind), Vec<PositionPair>>,
    key: (u32, ExtensionKind),
    seq_index: usize,
    pos_index: usize,
) {
    let positions = candidates.entry(key).or_default();
    if positions.last().map(|p| p.seq_index) != Some(seq_index) {
        positions.push(PositionPair {
            seq_index,
            pos_index,
        });
    }
}

/// Minimal match positions of an arbitrary pattern, found by direct
/// greedy scanning — the slow way. Rows that do not contain the pattern
/// contribute nothing. Cross-checks the incrementally built frontiers.
pub fn pattern_frontier(
    f: &FlatDataset,
    pattern: &Pattern,
) -> Result<TabularFrontier, DatasetError> {
    expect_flattening(f, Flattening::Transformed)?;
    let mut positions = Vec::new();
    for (seq_index, row) in f.rows().iter().enumerate() {
        // Itemsets as cell ranges.
        let mut bounds: Vec<(usize, usize)> = Vec::new();
        for (cell, _, opens) in events_from(row, 0) {
            if opens {
                bounds.push((cell, cell + 1));
            } else {
                bounds.last_mut().unwrap().1 = cell + 1;
            }
        }
        let mut next = 0usize;
        let mut end_cell = None;
        'pat: for want in pattern.itemsets() {
            while next < bounds.len() {
                let (lo, hi) = bounds[next];
                next += 1;
                if let Some(end) = itemset_match_end(&row[lo..hi], want) {
                    end_cell = Some(lo + end);
                    continue 'pat;
                }
            }
            end_cell = None;
            break;
        }
        if let Some(pos_index) = end_cell {
            positions.push(PositionPair {
                seq_index,
                pos_index,
            });
        }
    }
    Ok(TabularFrontier {
        pattern: pattern.clone(),
        positions,
    })
}

/// Offset just past the last needed literal when `cells` covers `want`.
fn itemset_match_end(cells: &[i32], want: &[u32]) -> Option<usize> {
    let mut end = None;
    let mut it = cells.iter().enumerate();
    'outer: for &w in want {
        for (i, &c) in it.by_ref() {
            if c.unsigned_abs() == w {
                end = Some(i);
                continue 'outer;
            }
        }
        return None;
    }
    end
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::testutil::{pat, random_dataset, small_dataset};
    use crate::{flatten_separators, flatten_transformed, oracle_mine};

    fn pp(seq_index: usize, pos_index: usize) -> PositionPair {
        PositionPair {
            seq_index,
            pos_index,
        }
    }

    #[test]
    fn small_dataset_matches_oracle() {
        let d = small_dataset();
        let f = flatten_transformed(&d);
        for minsup in 1..=5 {
            let params = MiningParams::from_count(minsup, d.len()).unwrap();
            assert_eq!(
                mine_tabular(&f, &params).unwrap(),
                oracle_mine(&d, &params),
                "minsup {minsup}"
            );
        }
    }

    #[test]
    fn separator_form_mines_identically() {
        let d = small_dataset();
        let ft = flatten_transformed(&d);
        let fs = flatten_separators(&d);
        for minsup in 1..=5 {
            let params = MiningParams::from_count(minsup, d.len()).unwrap();
            assert_eq!(
                mine_tabular(&ft, &params).unwrap(),
                mine_tabular_separators(&fs, &params).unwrap()
            );
        }
    }

    #[test]
    fn seed_frontier_positions() {
        let f = flatten_transformed(&small_dataset());
        let params = MiningParams::from_count(1, 5).unwrap();
        let (_, trace) = mine_tabular_traced(&f, &params).unwrap();
        assert_eq!(
            trace[&pat(&[&[1]])].positions,
            vec![pp(0, 0), pp(1, 0), pp(2, 0), pp(3, 0), pp(4, 0)]
        );
        assert_eq!(
            trace[&pat(&[&[3]])].positions,
            vec![pp(1, 2), pp(3, 1), pp(4, 2)]
        );
    }

    #[test]
    fn grown_frontier_positions_are_minimal() {
        let f = flatten_transformed(&small_dataset());
        let params = MiningParams::from_count(1, 5).unwrap();
        let (patterns, trace) = mine_tabular_traced(&f, &params).unwrap();

        let p = pat(&[&[1], &[3]]);
        assert_eq!(trace[&p].positions, vec![pp(1, 3), pp(3, 3)]);
        assert_eq!(frontier_size_tabular(&trace[&p]), 2);
        assert_eq!(patterns.get(&p), Some(2));

        // Every traced frontier agrees with the direct scan.
        for (p, frontier) in &trace {
            assert_eq!(&pattern_frontier(&f, p).unwrap(), frontier, "{p}");
        }
    }

    #[test]
    fn single_row_single_event() {
        let f = FlatDataset::from_rows(vec![vec![-4]], Flattening::Transformed);
        let params = MiningParams::from_count(1, 1).unwrap();
        let got = mine_tabular(&f, &params).unwrap();
        assert_eq!(got.len(), 1);
        assert_eq!(got.get(&pat(&[&[4]])), Some(1));
    }

    #[test]
    fn rejects_wrong_input_form() {
        let d = small_dataset();
        let fs = flatten_separators(&d);
        assert!(matches!(
            mine_tabular(&fs, &MiningParams::from_count(1, 5).unwrap()),
            Err(DatasetError::WrongFlattening { .. })
        ));
        let ft = flatten_transformed(&d);
        assert!(matches!(
            mine_tabular_separators(&ft, &MiningParams::from_count(1, 5).unwrap()),
            Err(DatasetError::WrongFlattening { .. })
        ));
        let smuggled = FlatDataset::from_rows(vec![vec![-1, 0, 2]], Flattening::Transformed);
        assert!(matches!(
            mine_tabular(&smuggled, &MiningParams::from_count(1, 1).unwrap()),
            Err(DatasetError::UnexpectedSeparator { row: 0 })
        ));
    }

    #[test]
    fn random_data_matches_oracle_both_forms() {
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        for _ in 0..30 {
            let d = random_dataset(&mut rng, 16, 5);
            let ft = flatten_transformed(&d);
            let fs = flatten_separators(&d);
            for minsup in [1, 2, 3] {
                let params = MiningParams::from_count(minsup, d.len()).unwrap();
                let want = oracle_mine(&d, &params);
                assert_eq!(mine_tabular(&ft, &params).unwrap(), want);
                assert_eq!(mine_tabular_separators(&fs, &params).unwrap(), want);
            }
        }
    }

    #[test]
    fn traced_frontiers_match_direct_scans_on_random_data() {
        let mut rng = ChaCha8Rng::seed_from_u64(52);
        for _ in 0..20 {
            let d = random_dataset(&mut rng, 12, 5);
            let f = flatten_transformed(&d);
            let params = MiningParams::from_count(2, d.len()).unwrap();
            let (_, trace) = mine_tabular_traced(&f, &params).unwrap();
            for (p, frontier) in &trace {
                assert_eq!(&pattern_frontier(&f, p).unwrap(), frontier, "{p}");
            }
        }
    }
}
