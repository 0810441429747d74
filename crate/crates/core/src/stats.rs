//! Size accounting for a built trie: sharing ratio, per-depth widths,
//! modelled byte costs of the three dataset representations, and sanity
//! bounds the trie shape must respect.

use crate::model::FlatDataset;
use crate::trie::{layer_sizes, TrieModel};

/// Bytes per integer label or link in the cost model.
const WORD: u64 = 8;
/// Modelled bookkeeping of one growable collection (pointer, length,
/// capacity).
const VEC_OVERHEAD: u64 = 3 * WORD;

#[derive(Clone, Debug, PartialEq)]
pub struct TrieStats {
    pub node_count: usize,
    /// Storage cells of the source rows.
    pub entry_count: usize,
    /// Fraction of entries eliminated by prefix sharing:
    /// `1 - node_count / entry_count` (0 for an empty dataset).
    pub compression: f64,
    /// Nodes per depth, root layer included.
    pub layer_sizes: Vec<usize>,
    /// Modelled bytes for the flat row table.
    pub est_bytes_tabular: u64,
    /// Modelled bytes for the child-vector trie.
    pub est_bytes_sdtrie: u64,
    /// Modelled bytes for the left-child/right-sibling trie.
    pub est_bytes_bdtrie: u64,
    /// Worst-case node count for this dataset shape: a trie over N rows
    /// of length at most m with 2|E| distinct codes cannot exceed
    /// `min(N, (2|E|)^m) * m` nodes.
    pub node_bound: u64,
}

/// Summarize a trie built from `f`.
///
/// The byte model charges one [`WORD`] per stored integer and
/// [`VEC_OVERHEAD`] per growable collection: a row costs its cells plus
/// one collection, a child-vector node its four labels, its child
/// vector, and one word per child link, and a binary node exactly six
/// words (four labels, two links) — constant size, no collection.
pub fn compute_stats<T: TrieModel + ?Sized>(t: &T, f: &FlatDataset) -> TrieStats {
    let node_count = t.node_count();
    let entry_count = f.total_entries();
    let compression = if entry_count == 0 {
        0.0
    } else {
        1.0 - node_count as f64 / entry_count as f64
    };
    let rows = f.rows().len() as u64;
    let nodes_with_root = node_count as u64 + 1;
    // Every non-root node is some node's child: one link word per node.
    let est_bytes_sdtrie =
        nodes_with_root * (4 * WORD + VEC_OVERHEAD) + node_count as u64 * WORD;
    TrieStats {
        node_count,
        entry_count,
        compression,
        layer_sizes: layer_sizes(t),
        est_bytes_tabular: rows * VEC_OVERHEAD + entry_count as u64 * WORD,
        est_bytes_sdtrie,
        est_bytes_bdtrie: nodes_with_root * 6 * WORD,
        node_bound: node_bound(t),
    }
}

fn node_bound<T: TrieModel + ?Sized>(t: &T) -> u64 {
    let n = t.source_rows() as u64;
    let m = t.source_max_len() as u64;
    let codes = 2 * t.source_alphabet() as u64;
    // min(n, codes^m), capping the power at n to avoid overflow.
    let mut width = 1u64;
    for _ in 0..m {
        width = width.saturating_mul(codes);
        if width >= n {
            width = n;
            break;
        }
    }
    width.saturating_mul(m)
}

/// Verify the trie's shape against its bounds: each layer is at most
/// `min(N, previous * 2|E|)` wide (a node has at most one child per
/// code, and no layer can exceed the row count), and the total node
/// count stays within [`TrieStats::node_bound`].
pub fn check_layer_bounds<T: TrieModel + ?Sized>(t: &T) -> bool {
    let n = t.source_rows() as u64;
    let codes = 2 * t.source_alphabet() as u64;
    let sizes = layer_sizes(t);
    for pair in sizes.windows(2) {
        let cap = n.min((pair[0] as u64).saturating_mul(codes));
        if pair[1] as u64 > cap {
            return false;
        }
    }
    t.node_count() as u64 <= node_bound(t)
}
