//! Standard trie over sign-flattened rows: every node owns a growable
//! vector of children.

use std::collections::HashMap;

use crate::model::{DatasetError, EventCode, FlatDataset, Flattening, SEPARATOR};
use crate::trie::{NodeId, TrieModel};

struct SdNode {
    event: i32,
    freq: u32,
    itemset_index: u32,
    ancestor: NodeId,
    children: Vec<NodeId>,
}

/// Prefix-sharing trie with per-node child vectors. Rows equal on a
/// prefix share that prefix's nodes; `freq` counts the rows through each
/// node.
pub struct SdTrie {
    nodes: Vec<SdNode>,
    n_rows: usize,
    entry_count: usize,
    alphabet_size: usize,
    max_row_len: usize,
}

impl SdTrie {
    /// Insert every row of a sign-flattened dataset.
    ///
    /// Each row is walked from the root, matching or appending one child
    /// per event. A per-row register of the last node seen per literal
    /// provides the `ancestor` label for nodes created along the way, and
    /// a counter incremented at each negative code provides the itemset
    /// ordinal.
    pub fn build(f: &FlatDataset) -> Result<SdTrie, DatasetError> {
        if f.flattening() != Flattening::Transformed {
            return Err(DatasetError::WrongFlattening {
                expected: Flattening::Transformed,
                found: f.flattening(),
            });
        }
        if f.rows().len() >= u32::MAX as usize || f.total_entries() >= u32::MAX as usize {
            return Err(DatasetError::TooLarge);
        }
        let mut trie = SdTrie {
            nodes: vec![SdNode {
                event: 0,
                freq: 0,
                itemset_index: 0,
                ancestor: NodeId::ROOT,
                children: Vec::new(),
            }],
            n_rows: 0,
            entry_count: f.total_entries(),
            alphabet_size: f.alphabet_size(),
            max_row_len: f.max_row_len(),
        };
        let mut last_seen: HashMap<u32, NodeId> = HashMap::new();
        for (index, row) in f.rows().iter().enumerate() {
            if row.is_empty() {
                continue;
            }
            if row[0] >= 0 {
                return Err(if row[0] == SEPARATOR {
                    DatasetError::UnexpectedSeparator { row: index }
                } else {
                    DatasetError::RowNotTransformed { row: index }
                });
            }
            last_seen.clear();
            let mut cur = NodeId::ROOT;
            let mut itemset_index = 0u32;
            trie.nodes[0].freq += 1;
            for &code in row {
                if code == SEPARATOR {
                    return Err(DatasetError::UnexpectedSeparator { row: index });
                }
                if code < 0 {
                    itemset_index += 1;
                }
                let lit = code.unsigned_abs();
                let next = match trie.find_child(cur, code) {
                    Some(n) => {
                        trie.nodes[n.index()].freq += 1;
                        n
                    }
                    None => {
                        let n = NodeId::from_index(trie.nodes.len());
                        let ancestor = last_seen.get(&lit).copied().unwrap_or(NodeId::ROOT);
                        trie.nodes.push(SdNode {
                            event: code,
                            freq: 1,
                            itemset_index,
                            ancestor,
                            children: Vec::new(),
                        });
                        trie.nodes[cur.index()].children.push(n);
                        n
                    }
                };
                last_seen.insert(lit, next);
                cur = next;
            }
            trie.n_rows += 1;
        }
        Ok(trie)
    }

    fn find_child(&self, n: NodeId, code: i32) -> Option<NodeId> {
        self.nodes[n.index()]
            .children
            .iter()
            .copied()
            .find(|c| self.nodes[c.index()].event == code)
    }

    /// Child list in insertion order.
    pub fn child_slice(&self, n: NodeId) -> &[NodeId] {
        &self.nodes[n.index()].children
    }
}

impl TrieModel for SdTrie {
    type ChildIter<'a> = std::iter::Copied<std::slice::Iter<'a, NodeId>>;

    fn children(&self, n: NodeId) -> Self::ChildIter<'_> {
        self.nodes[n.index()].children.iter().copied()
    }

    fn event(&self, n: NodeId) -> EventCode {
        debug_assert!(!n.is_root());
        EventCode::from_raw(self.nodes[n.index()].event).expect("root has no event")
    }

    fn freq(&self, n: NodeId) -> u64 {
        self.nodes[n.index()].freq as u64
    }

    fn itemset_index(&self, n: NodeId) -> u32 {
        self.nodes[n.index()].itemset_index
    }

    fn ancestor(&self, n: NodeId) -> NodeId {
        self.nodes[n.index()].ancestor
    }

    fn node_count(&self) -> usize {
        self.nodes.len() - 1
    }

    fn source_rows(&self) -> usize {
        self.n_rows
    }

    fn source_entries(&self) -> usize {
        self.entry_count
    }

    fn source_alphabet(&self) -> usize {
        self.alphabet_size
    }

    fn source_max_len(&self) -> usize {
        self.max_row_len
    }
}
