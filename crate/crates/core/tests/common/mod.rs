use rand::Rng;

use seqtrie::{canonicalize, Sequence, StructuredDataset};

/// Random dataset within the shapes the reference miner can handle
/// comfortably: short sequences, small itemsets, small alphabet.
pub fn random_dataset<R: Rng>(rng: &mut R, max_rows: usize, max_alpha: u32) -> StructuredDataset {
    let n = rng.gen_range(1..=max_rows);
    let alpha = rng.gen_range(1..=max_alpha);
    let mut raw: Vec<Sequence> = Vec::with_capacity(n);
    for _ in 0..n {
        let n_itemsets = rng.gen_range(1..=4);
        let mut seq = Vec::with_capacity(n_itemsets);
        for _ in 0..n_itemsets {
            let n_events = rng.gen_range(1..=3);
            seq.push((0..n_events).map(|_| rng.gen_range(1..=alpha)).collect());
        }
        raw.push(seq);
    }
    canonicalize(raw).unwrap()
}
