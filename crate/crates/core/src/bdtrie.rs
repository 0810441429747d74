//! Binary-decomposed trie: the same logical tree as [`SdTrie`] stored in
//! left-child / right-sibling form. Every node is six 32-bit words —
//! event, freq, itemset ordinal, same-literal ancestor, first child,
//! next sibling — so memory is exactly linear in the node count, with no
//! growable collections.

use std::collections::HashMap;

use crate::model::{DatasetError, EventCode, FlatDataset, Flattening, SEPARATOR};
use crate::trie::{NodeId, TrieError, TrieModel};

/// In-arena null link. `u32::MAX` cannot collide with a real node index
/// because build rejects arenas that large.
const NONE: u32 = u32::MAX;

struct BdNode {
    event: i32,
    freq: u32,
    itemset_index: u32,
    ancestor: u32,
    child: u32,
    sibling: u32,
}

/// Left-child / right-sibling trie over sign-flattened rows. A node's
/// logical children are its `child` link followed by that node's chain
/// of `sibling` links; new children append at the chain tail, so logical
/// child order matches [`SdTrie`] insertion order.
pub struct BdTrie {
    nodes: Vec<BdNode>,
    n_rows: usize,
    entry_count: usize,
    alphabet_size: usize,
    max_row_len: usize,
}

impl BdTrie {
    pub fn build(f: &FlatDataset) -> Result<BdTrie, DatasetError> {
        if f.flattening() != Flattening::Transformed {
            return Err(DatasetError::WrongFlattening {
                expected: Flattening::Transformed,
                found: f.flattening(),
            });
        }
        if f.rows().len() >= u32::MAX as usize || f.total_entries() >= u32::MAX as usize {
            return Err(DatasetError::TooLarge);
        }
        let mut trie = BdTrie {
            nodes: vec![BdNode {
                event: 0,
                freq: 0,
                itemset_index: 0,
                ancestor: 0,
                child: NONE,
                sibling: NONE,
            }],
            n_rows: 0,
            entry_count: f.total_entries(),
            alphabet_size: f.alphabet_size(),
            max_row_len: f.max_row_len(),
        };
        let mut last_seen: HashMap<u32, u32> = HashMap::new();
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
            let mut cur = 0u32;
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
                let next = trie.walk_or_insert(cur, code, itemset_index, &last_seen);
                last_seen.insert(lit, next);
                cur = next;
            }
            trie.n_rows += 1;
        }
        Ok(trie)
    }

    /// Find `code` among the logical children of `cur`, bumping its count,
    /// or append a fresh node at the sibling chain's tail.
    fn walk_or_insert(
        &mut self,
        cur: u32,
        code: i32,
        itemset_index: u32,
        last_seen: &HashMap<u32, u32>,
    ) -> u32 {
        let ancestor = last_seen.get(&code.unsigned_abs()).copied().unwrap_or(0);
        let fresh = |nodes: &mut Vec<BdNode>| {
            let id = nodes.len() as u32;
            nodes.push(BdNode {
                event: code,
                freq: 1,
                itemset_index,
                ancestor,
                child: NONE,
                sibling: NONE,
            });
            id
        };
        match self.nodes[cur as usize].child {
            NONE => {
                let id = fresh(&mut self.nodes);
                self.nodes[cur as usize].child = id;
                id
            }
            first => {
                let mut walk = first;
                loop {
                    if self.nodes[walk as usize].event == code {
                        self.nodes[walk as usize].freq += 1;
                        return walk;
                    }
                    match self.nodes[walk as usize].sibling {
                        NONE => {
                            let id = fresh(&mut self.nodes);
                            self.nodes[walk as usize].sibling = id;
                            return id;
                        }
                        next => walk = next,
                    }
                }
            }
        }
    }

    /// First child in the binary structure, if any.
    pub fn child(&self, n: NodeId) -> Option<NodeId> {
        match self.nodes[n.index()].child {
            NONE => None,
            c => Some(NodeId::from_index(c as usize)),
        }
    }

    /// Next sibling in the binary structure, if any.
    pub fn sibling(&self, n: NodeId) -> Option<NodeId> {
        match self.nodes[n.index()].sibling {
            NONE => None,
            s => Some(NodeId::from_index(s as usize)),
        }
    }

    /// Logical children of `n`: the child link, then its sibling chain.
    pub fn logical_children(&self, n: NodeId) -> BdChildren<'_> {
        BdChildren {
            trie: self,
            next: self.nodes[n.index()].child,
        }
    }

    /// Events read off a root-anchored path through the binary links.
    ///
    /// The path may traverse sibling links, which stand for "try the next
    /// alternative" rather than "descend"; only nodes actually descended
    /// through contribute. A node's event is kept when it is the first or
    /// last path node or when the path leaves it through its child link.
    /// Rejects paths that do not start at the root or hop between
    /// unlinked nodes.
    pub fn tf_b(&self, path: &[NodeId]) -> Result<Vec<EventCode>, TrieError> {
        if path.first() != Some(&NodeId::ROOT) {
            return Err(TrieError::DisconnectedPath);
        }
        for pair in path.windows(2) {
            let linked =
                self.child(pair[0]) == Some(pair[1]) || self.sibling(pair[0]) == Some(pair[1]);
            if !linked {
                return Err(TrieError::DisconnectedPath);
            }
        }
        let mut out = Vec::new();
        for j in 1..path.len() {
            let keep = j == 1
                || j == path.len() - 1
                || self.child(path[j]) == Some(path[j + 1]);
            if keep {
                out.push(self.event(path[j]));
            }
        }
        Ok(out)
    }
}

/// Iterator over logical children.
pub struct BdChildren<'a> {
    trie: &'a BdTrie,
    next: u32,
}

impl<'a> Iterator for BdChildren<'a> {
    type Item = NodeId;

    fn next(&mut self) -> Option<NodeId> {
        if self.next == NONE {
            return None;
        }
        let id = self.next;
        self.next = self.trie.nodes[id as usize].sibling;
        Some(NodeId::from_index(id as usize))
    }
}

impl TrieModel for BdTrie {
    type ChildIter<'a> = BdChildren<'a>;

    fn children(&self, n: NodeId) -> Self::ChildIter<'_> {
        self.logical_children(n)
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
        NodeId::from_index(self.nodes[n.index()].ancestor as usize)
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

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::testutil::{random_dataset, small_dataset};
    use crate::trie::{label_profile, layer_sizes, reconstruct};
    use crate::{flatten_transformed, SdTrie};

    fn n(i: usize) -> NodeId {
        NodeId::from_index(i)
    }

    #[test]
    fn node_is_six_words() {
        assert_eq!(std::mem::size_of::<BdNode>(), 24);
    }

    #[test]
    fn small_dataset_binary_links() {
        let f = flatten_transformed(&small_dataset());
        let t = BdTrie::build(&f).unwrap();
        assert_eq!(t.node_count(), 10);

        assert_eq!(t.child(NodeId::ROOT), Some(n(1)));
        assert_eq!(t.sibling(n(1)), None);
        assert_eq!(t.child(n(1)), Some(n(2)));
        assert_eq!(t.sibling(n(2)), Some(n(7)));
        assert_eq!(t.sibling(n(7)), Some(n(8)));
        assert_eq!(t.sibling(n(8)), None);
        assert_eq!(t.child(n(2)), Some(n(3)));
        assert_eq!(t.sibling(n(3)), Some(n(5)));
        assert_eq!(t.child(n(8)), Some(n(9)));
        assert_eq!(t.child(n(9)), Some(n(10)));
        assert_eq!(t.child(n(4)), None);

        let children: Vec<NodeId> = t.logical_children(n(1)).collect();
        assert_eq!(children, vec![n(2), n(7), n(8)]);

        let freqs: Vec<u64> = (1..=10).map(|i| t.freq(n(i))).collect();
        assert_eq!(freqs, vec![5, 3, 1, 1, 2, 1, 1, 1, 1, 1]);
        assert_eq!(t.ancestor(n(10)), n(8));
        assert_eq!(layer_sizes(&t), vec![1, 1, 3, 3, 3]);
    }

    #[test]
    fn single_row_is_a_pure_child_chain() {
        let f = FlatDataset::from_rows(vec![vec![-1, 2, -3]], Flattening::Transformed);
        let t = BdTrie::build(&f).unwrap();
        assert_eq!(t.child(NodeId::ROOT), Some(n(1)));
        assert_eq!(t.child(n(1)), Some(n(2)));
        assert_eq!(t.child(n(2)), Some(n(3)));
        assert!((1..=3).all(|i| t.sibling(n(i)).is_none()));
    }

    #[test]
    fn matches_sdtrie_on_random_data() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..40 {
            let d = random_dataset(&mut rng, 20, 6);
            let f = flatten_transformed(&d);
            let sd = SdTrie::build(&f).unwrap();
            let bd = BdTrie::build(&f).unwrap();
            assert_eq!(sd.node_count(), bd.node_count());
            assert_eq!(layer_sizes(&sd), layer_sizes(&bd));
            assert_eq!(label_profile(&sd), label_profile(&bd));
        }
    }

    #[test]
    fn reconstruct_matches_source_multiset() {
        let f = flatten_transformed(&small_dataset());
        let t = BdTrie::build(&f).unwrap();
        let mut got = reconstruct(&t).unwrap().rows().to_vec();
        let mut want = f.rows().to_vec();
        got.sort();
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn path_events_skip_sibling_hops() {
        let f = flatten_transformed(&small_dataset());
        let t = BdTrie::build(&f).unwrap();
        // Walk to n9: descend into n1, try n2, pass n7, reach n8, descend.
        let path = [NodeId::ROOT, n(1), n(2), n(7), n(8), n(9)];
        let events: Vec<i32> = t.tf_b(&path).unwrap().iter().map(|e| e.raw()).collect();
        assert_eq!(events, vec![-1, 3, -1]);

        let single = [NodeId::ROOT, n(1)];
        let events: Vec<i32> = t.tf_b(&single).unwrap().iter().map(|e| e.raw()).collect();
        assert_eq!(events, vec![-1]);

        // A pure child chain keeps every event.
        let chain = [NodeId::ROOT, n(1), n(2), n(3), n(4)];
        let events: Vec<i32> = t.tf_b(&chain).unwrap().iter().map(|e| e.raw()).collect();
        assert_eq!(events, vec![-1, 2, -1, -2]);
    }

    #[test]
    fn disconnected_paths_rejected() {
        let f = flatten_transformed(&small_dataset());
        let t = BdTrie::build(&f).unwrap();
        assert!(t.tf_b(&[n(1), n(2)]).is_err(), "must start at the root");
        assert!(t.tf_b(&[NodeId::ROOT, n(1), n(5)]).is_err(), "no direct link");
        assert!(t.tf_b(&[NodeId::ROOT, n(1), n(2), n(8)]).is_err());
    }

    #[test]
    fn rejects_malformed_rows() {
        let bad = FlatDataset::from_rows(vec![vec![2]], Flattening::Transformed);
        assert!(matches!(
            BdTrie::build(&bad),
            Err(DatasetError::RowNotTransformed { row: 0 })
        ));
    }
}
