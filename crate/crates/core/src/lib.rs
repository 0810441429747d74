//! Sequential pattern mining over three interchangeable dataset models.
//!
//! A dataset is a list of sequences, each sequence an ordered list of
//! itemsets drawn from a positive-integer alphabet. Mining finds every
//! pattern (itself a sequence of itemsets) contained in at least
//! `minsup` of the input sequences.
//!
//! The crate offers three ways to hold the data while mining, all
//! producing identical pattern sets:
//!
//! * a flat tabular form, one signed-integer row per sequence, mined by
//!   pseudo-projection ([`mine_tabular`]);
//! * [`SdTrie`], a prefix-shared trie over the flat rows with a child
//!   vector per node;
//! * [`BdTrie`], the same trie in left-child / right-sibling form with a
//!   constant-size node, trading pointer chasing for memory.
//!
//! A deliberately naive breadth-first miner ([`oracle_mine`]) serves as
//! the reference the fast paths are checked against.

mod bdtrie;
mod model;
#[cfg(test)]
pub(crate) mod testutil;
mod oracle;
mod preprocess;
mod sdtrie;
mod spmf;
mod stats;
mod tabular;
mod trie;
mod trie_miner;

pub use bdtrie::BdTrie;
pub use model::{
    canonicalize, is_subsequence, support_of, DatasetError, EventCode, FlatDataset, Flattening,
    Itemset, MiningParams, Pattern, PatternSet, Sequence, StructuredDataset, SEPARATOR,
};
pub use oracle::oracle_mine;
pub use preprocess::{
    event_supports, filter_by_support, flatten_separators, flatten_transformed, unflatten,
    SupportTable,
};
pub use sdtrie::SdTrie;
pub use spmf::{parse_spmf, parse_spmf_str, write_patterns, write_spmf, SpmfError};
pub use stats::{check_layer_bounds, compute_stats, TrieStats};
pub use tabular::{
    frontier_size_tabular, mine_tabular, mine_tabular_separators, mine_tabular_traced,
    pattern_frontier, PositionPair, TabularFrontier,
};
pub use trie::{label_profile, layer_sizes, leaf_count, reconstruct, NodeId, TrieError, TrieModel};
pub use trie_miner::{
    frontier_support, mine_trie, mine_trie_traced, valid_extension, ExtensionContext,
    ExtensionKind, Frontier,
};
