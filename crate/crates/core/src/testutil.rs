//! Shared fixtures for the unit tests.

use rand::Rng;

use crate::{canonicalize, Pattern, Sequence, StructuredDataset};

/// Five short sequences over {1, 2, 3}; the worked example most tests
/// pin their expectations against.
pub(crate) fn small_dataset() -> StructuredDataset {
    canonicalize(vec![
        vec![vec![1, 2], vec![1], vec![2]],
        vec![vec![1, 2, 3], vec![3]],
        vec![vec![1], vec![2]],
        vec![vec![1, 3], vec![1, 3]],
        vec![vec![1, 2, 3]],
    ])
    .unwrap()
}

pub(crate) fn pat(itemsets: &[&[u32]]) -> Pattern {
    Pattern::new(itemsets.iter().map(|i| i.to_vec()).collect()).unwrap()
}

/// Random small dataset: up to `max_rows` sequences of at most 4 itemsets
/// with at most 3 events each over an alphabet of at most `max_alpha`.
pub(crate) fn random_dataset<R: Rng>(
    rng: &mut R,
    max_rows: usize,
    max_alpha: u32,
) -> StructuredDataset {
    let n = rng.gen_range(1..=max_rows);
    let alpha = rng.gen_range(1..=max_alpha);
    let mut raw: Vec<Sequence> = Vec::with_capacity(n);
    for _ in 0..n {
        let n_itemsets = rng.gen_range(1..=4);
        let mut seq = Vec::with_capacity(n_itemsets);
        for _ in 0..n_itemsets {
            let n_events = rng.gen_range(1..=3);
            let itemset: Vec<u32> = (0..n_events).map(|_| rng.gen_range(1..=alpha)).collect();
            seq.push(itemset);
        }
        raw.push(seq);
    }
    canonicalize(raw).unwrap()
}
