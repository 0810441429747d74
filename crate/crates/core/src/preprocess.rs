//! Flattening between the structured and tabular dataset forms, and
//! support-based filtering of flat rows.

use std::collections::BTreeMap;

use crate::model::{
    DatasetError, FlatDataset, Flattening, Itemset, Sequence, StructuredDataset, SEPARATOR,
};

/// Distinct-sequence counts per literal.
pub type SupportTable = BTreeMap<u32, u64>;

/// Flatten with the sign convention: each itemset's first event is
/// emitted negated, later events positive. Row length equals the event
/// count, so no cells are added.
pub fn flatten_transformed(d: &StructuredDataset) -> FlatDataset {
    let rows = d
        .sequences()
        .iter()
        .map(|seq| {
            let mut row = Vec::with_capacity(seq.iter().map(|i| i.len()).sum());
            for itemset in seq {
                for (k, &lit) in itemset.iter().enumerate() {
                    row.push(if k == 0 { -(lit as i32) } else { lit as i32 });
                }
            }
            row
        })
        .collect();
    FlatDataset::from_rows(rows, Flattening::Transformed)
}

/// Flatten with zero cells between consecutive itemsets (none at the row
/// edges). Adds one cell per itemset boundary: `#itemsets - #sequences`
/// extra cells in total.
pub fn flatten_separators(d: &StructuredDataset) -> FlatDataset {
    let rows = d
        .sequences()
        .iter()
        .map(|seq| {
            let mut row = Vec::new();
            for (j, itemset) in seq.iter().enumerate() {
                if j > 0 {
                    row.push(SEPARATOR);
                }
                row.extend(itemset.iter().map(|&l| l as i32));
            }
            row
        })
        .collect();
    FlatDataset::from_rows(rows, Flattening::Separator)
}

/// Rebuild the structured form of sign-flattened rows. Rejects
/// separator-flattened input and any row not opening with a negative
/// code.
pub fn unflatten(f: &FlatDataset) -> Result<StructuredDataset, DatasetError> {
    if f.flattening() != Flattening::Transformed {
        return Err(DatasetError::WrongFlattening {
            expected: Flattening::Transformed,
            found: f.flattening(),
        });
    }
    let mut sequences: Vec<Sequence> = Vec::with_capacity(f.rows().len());
    for (index, row) in f.rows().iter().enumerate() {
        if row.is_empty() {
            continue;
        }
        if row[0] >= 0 {
            return Err(DatasetError::RowNotTransformed { row: index });
        }
        let mut seq: Sequence = Vec::new();
        let mut current: Itemset = Vec::new();
        for &code in row {
            if code == SEPARATOR {
                return Err(DatasetError::UnexpectedSeparator { row: index });
            }
            if code < 0 && !current.is_empty() {
                seq.push(std::mem::take(&mut current));
            }
            current.push(code.unsigned_abs());
        }
        seq.push(current);
        sequences.push(seq);
    }
    Ok(StructuredDataset::from_canonical(sequences))
}

/// Per-literal support: the number of rows in which the literal occurs
/// at all, in either form. Works for both flattenings.
pub fn event_supports(f: &FlatDataset) -> SupportTable {
    let mut table = SupportTable::new();
    for row in f.rows() {
        let mut lits: Vec<u32> = row
            .iter()
            .filter(|&&c| c != SEPARATOR)
            .map(|&c| c.unsigned_abs())
            .collect();
        lits.sort_unstable();
        lits.dedup();
        for lit in lits {
            *table.entry(lit).or_insert(0) += 1;
        }
    }
    table
}

/// Drop every occurrence of literals whose support is below
/// `minsup_count`, preserving row structure.
///
/// When a sign-flattened itemset loses its opening (negative) event, the
/// next surviving event of that itemset is promoted to negative so the
/// row stays well formed. Itemsets and rows left empty disappear, but
/// the dataset keeps its original `n_sequences`, so relative thresholds
/// still refer to the unfiltered input. Mining filtered rows yields the
/// same patterns as mining the originals: a pattern at or above the
/// threshold can only match via events that survive.
pub fn filter_by_support(f: &FlatDataset, minsup_count: u64) -> FlatDataset {
    let supports = event_supports(f);
    let keep = |lit: u32| supports.get(&lit).copied().unwrap_or(0) >= minsup_count;
    let mut rows: Vec<Vec<i32>> = Vec::with_capacity(f.rows().len());
    match f.flattening() {
        Flattening::Transformed => {
            for row in f.rows() {
                let mut out = Vec::with_capacity(row.len());
                let mut pending_negative = false;
                for &code in row {
                    let lit = code.unsigned_abs();
                    if code < 0 {
                        pending_negative = true;
                    }
                    if !keep(lit) {
                        continue;
                    }
                    if pending_negative {
                        out.push(-(lit as i32));
                        pending_negative = false;
                    } else {
                        out.push(lit as i32);
                    }
                }
                if !out.is_empty() {
                    rows.push(out);
                }
            }
        }
        Flattening::Separator => {
            for row in f.rows() {
                let mut out: Vec<i32> = Vec::with_capacity(row.len());
                for itemset in row.split(|&c| c == SEPARATOR) {
                    let surviving: Vec<i32> =
                        itemset.iter().copied().filter(|&c| keep(c as u32)).collect();
                    if surviving.is_empty() {
                        continue;
                    }
                    if !out.is_empty() {
                        out.push(SEPARATOR);
                    }
                    out.extend(surviving);
                }
                if !out.is_empty() {
                    rows.push(out);
                }
            }
        }
    }
    FlatDataset::with_original_n(rows, f.flattening(), f.n_sequences())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::small_dataset;
    use crate::{canonicalize, MiningParams};

    #[test]
    fn transformed_flattening_of_the_small_dataset() {
        let f = flatten_transformed(&small_dataset());
        assert_eq!(
            f.rows(),
            &[
                vec![-1, 2, -1, -2],
                vec![-1, 2, 3, -3],
                vec![-1, -2],
                vec![-1, 3, -1, 3],
                vec![-1, 2, 3],
            ]
        );
        assert_eq!(f.n_sequences(), 5);
        assert_eq!(f.total_entries(), 17);
        assert_eq!(f.alphabet_size(), 3);
        assert_eq!(f.max_row_len(), 4);
    }

    #[test]
    fn transformed_flattening_adds_no_cells() {
        let d = small_dataset();
        let f = flatten_transformed(&d);
        assert_eq!(f.total_entries(), d.total_entries());
    }

    #[test]
    fn separator_flattening_examples() {
        let d = canonicalize(vec![
            vec![vec![1, 2], vec![1], vec![2]],
            vec![vec![1], vec![2]],
            vec![vec![3]],
        ])
        .unwrap();
        let f = flatten_separators(&d);
        assert_eq!(
            f.rows(),
            &[vec![1, 2, 0, 1, 0, 2], vec![1, 0, 2], vec![3]]
        );
        // One extra cell per itemset boundary.
        let boundaries: usize = d.sequences().iter().map(|s| s.len() - 1).sum();
        assert_eq!(f.total_entries(), d.total_entries() + boundaries);
    }

    #[test]
    fn unflatten_inverts_flatten() {
        let d = small_dataset();
        assert_eq!(unflatten(&flatten_transformed(&d)).unwrap(), d);
    }

    #[test]
    fn unflatten_rejects_positive_first_code() {
        let f = FlatDataset::from_rows(vec![vec![-1], vec![2, -1]], Flattening::Transformed);
        assert_eq!(
            unflatten(&f).unwrap_err(),
            DatasetError::RowNotTransformed { row: 1 }
        );
    }

    #[test]
    fn unflatten_rejects_separator_form() {
        let f = flatten_separators(&small_dataset());
        assert!(matches!(
            unflatten(&f),
            Err(DatasetError::WrongFlattening { .. })
        ));
    }

    #[test]
    fn supports_of_the_small_dataset() {
        let f = flatten_transformed(&small_dataset());
        let t = event_supports(&f);
        assert_eq!(t.get(&1), Some(&5));
        assert_eq!(t.get(&2), Some(&4));
        assert_eq!(t.get(&3), Some(&3));
        assert_eq!(t.len(), 3);
    }

    #[test]
    fn supports_agree_across_flattenings() {
        let d = small_dataset();
        assert_eq!(
            event_supports(&flatten_transformed(&d)),
            event_supports(&flatten_separators(&d))
        );
    }

    #[test]
    fn supports_of_empty_dataset() {
        let f = flatten_transformed(&canonicalize(vec![]).unwrap());
        assert!(event_supports(&f).is_empty());
    }

    #[test]
    fn filter_at_eighty_percent_drops_literal_three() {
        let f = flatten_transformed(&small_dataset());
        let params = MiningParams::from_theta(0.8, f.n_sequences()).unwrap();
        assert_eq!(params.minsup_count, 4);
        let filtered = filter_by_support(&f, params.minsup_count);
        assert_eq!(
            filtered.rows(),
            &[
                vec![-1, 2, -1, -2],
                vec![-1, 2],
                vec![-1, -2],
                vec![-1, -1],
                vec![-1, 2],
            ]
        );
        assert_eq!(filtered.n_sequences(), 5, "original count retained");
        assert_eq!(filtered.alphabet_size(), 2);
    }

    #[test]
    fn filter_promotes_next_survivor_to_negative() {
        // Literal 3 opens the only itemset of row 0 but is infrequent;
        // the surviving 4 must take over the negative code.
        let f = FlatDataset::from_rows(
            vec![vec![-3, 4], vec![-4], vec![-4]],
            Flattening::Transformed,
        );
        let filtered = filter_by_support(&f, 2);
        assert_eq!(filtered.rows(), &[vec![-4], vec![-4], vec![-4]]);
    }

    #[test]
    fn filter_at_minsup_one_is_identity() {
        let f = flatten_transformed(&small_dataset());
        assert_eq!(filter_by_support(&f, 1).rows(), f.rows());
    }

    #[test]
    fn filter_above_n_empties_the_rows() {
        let f = flatten_transformed(&small_dataset());
        let filtered = filter_by_support(&f, 6);
        assert!(filtered.rows().is_empty());
        assert_eq!(filtered.n_sequences(), 5);
    }

    #[test]
    fn filter_is_idempotent() {
        let f = flatten_transformed(&small_dataset());
        for minsup in 1..=6 {
            let once = filter_by_support(&f, minsup);
            let twice = filter_by_support(&once, minsup);
            assert_eq!(once, twice);
        }
    }

    #[test]
    fn filter_works_on_separator_rows() {
        let d = canonicalize(vec![
            vec![vec![1, 3], vec![2]],
            vec![vec![1], vec![2]],
            vec![vec![3], vec![1]],
        ])
        .unwrap();
        let f = flatten_separators(&d);
        let filtered = filter_by_support(&f, 2);
        // Literal 2 survives (2 rows), 3 survives (2 rows), all of 1.
        assert_eq!(
            filtered.rows(),
            &[vec![1, 3, 0, 2], vec![1, 0, 2], vec![3, 0, 1]]
        );
        let dropped = filter_by_support(&f, 3);
        assert_eq!(dropped.rows(), &[vec![1], vec![1], vec![1]]);
    }
}
