//! Reference miner: exhaustive breadth-first pattern growth with direct
//! support counting. Slow on purpose — every decision is a plain scan of
//! the structured dataset, so the fast miners can be checked against it.

use std::collections::BTreeMap;

use crate::model::{support_of, MiningParams, Pattern, PatternSet, StructuredDataset};

/// Mine every frequent pattern of `d` by brute force.
///
/// Candidates grow one event at a time from frequent single literals:
/// either a new `{e}` itemset at the end, or `e` joined into the last
/// itemset when it exceeds that itemset's maximum (which generates each
/// pattern exactly once). Growth stops at infrequent patterns; support
/// is anti-monotone, so nothing frequent is missed.
pub fn oracle_mine(d: &StructuredDataset, params: &MiningParams) -> PatternSet {
    let minsup = params.minsup_count;
    let mut out = PatternSet::default();

    let mut literal_rows: BTreeMap<u32, u64> = BTreeMap::new();
    for seq in d.sequences() {
        let mut seen: Vec<u32> = seq.iter().flatten().copied().collect();
        seen.sort_unstable();
        seen.dedup();
        for lit in seen {
            *literal_rows.entry(lit).or_insert(0) += 1;
        }
    }
    let frequent_literals: Vec<u32> = literal_rows
        .iter()
        .filter(|&(_, &n)| n >= minsup)
        .map(|(&l, _)| l)
        .collect();

    let mut level: Vec<Pattern> = Vec::new();
    for &lit in &frequent_literals {
        let p = Pattern::singleton(lit);
        out.insert(p.clone(), literal_rows[&lit]);
        level.push(p);
    }

    while !level.is_empty() {
        let mut next = Vec::new();
        for p in &level {
            let max_last = *p.last_itemset().last().unwrap();
            for &lit in &frequent_literals {
                let q = p.with_sequence_extension(lit);
                let s = support_of(d, &q);
                if s >= minsup {
                    out.insert(q.clone(), s);
                    next.push(q);
                }
                if lit > max_last {
                    let q = p.with_itemset_extension(lit);
                    let s = support_of(d, &q);
                    if s >= minsup {
                        out.insert(q.clone(), s);
                        next.push(q);
                    }
                }
            }
        }
        level = next;
    }
    out
}
