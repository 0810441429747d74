//! Arena-tree plumbing shared by the two trie representations: node
//! handles, the read-only [`TrieModel`] trait the miner works against,
//! and traversals that only need that trait.

use thiserror::Error;

use crate::model::{EventCode, FlatDataset, Flattening};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TrieError {
    #[error("corrupt trie: node {node:?} frequency is below its child total")]
    BadFrequency { node: NodeId },
    #[error("path is not a connected chain starting at the root")]
    DisconnectedPath,
}

/// Index into a trie's node arena. The root is always index 0 and carries
/// no event; inserted nodes take 1, 2, ... in creation order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(u32);

impl NodeId {
    pub const ROOT: NodeId = NodeId(0);

    pub fn from_index(index: usize) -> NodeId {
        NodeId(u32::try_from(index).expect("node index exceeds u32"))
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn is_root(self) -> bool {
        self.0 == 0
    }
}

impl std::fmt::Debug for NodeId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_root() {
            write!(f, "root")
        } else {
            write!(f, "n{}", self.0)
        }
    }
}

/// Read access to a trie built from sign-flattened rows. Both
/// representations expose the same logical tree through this trait; the
/// miner and the statistics never see the difference.
///
/// Node labels: the event, how many inserted rows pass through the node,
/// the 1-based ordinal of the itemset the event belongs to on its path,
/// and the nearest strict ancestor carrying the same literal (the root
/// when there is none).
pub trait TrieModel {
    type ChildIter<'a>: Iterator<Item = NodeId>
    where
        Self: 'a;

    /// Children in insertion order, which is also first-visit row order.
    fn children(&self, n: NodeId) -> Self::ChildIter<'_>;

    /// Event label; must not be called on the root.
    fn event(&self, n: NodeId) -> EventCode;

    /// Rows through this node; for the root, the number of inserted rows.
    fn freq(&self, n: NodeId) -> u64;

    /// 1-based itemset ordinal along the path; 0 for the root.
    fn itemset_index(&self, n: NodeId) -> u32;

    /// Nearest strict ancestor with the same literal, or the root.
    fn ancestor(&self, n: NodeId) -> NodeId;

    /// Inserted nodes, root excluded. Valid ids are `1..=node_count()`.
    fn node_count(&self) -> usize;

    /// Rows inserted at build time.
    fn source_rows(&self) -> usize;

    /// Storage cells of the source dataset.
    fn source_entries(&self) -> usize;

    fn source_alphabet(&self) -> usize;

    /// Longest source row, which bounds the trie depth.
    fn source_max_len(&self) -> usize;
}

/// Node counts per depth, the root layer (always 1) included.
pub fn layer_sizes<T: TrieModel + ?Sized>(t: &T) -> Vec<usize> {
    let mut sizes = vec![1usize];
    let mut stack: Vec<(NodeId, usize)> = vec![(NodeId::ROOT, 0)];
    while let Some((n, depth)) = stack.pop() {
        for c in t.children(n) {
            let d = depth + 1;
            if sizes.len() <= d {
                sizes.resize(d + 1, 0);
            }
            sizes[d] += 1;
            stack.push((c, d));
        }
    }
    sizes
}

/// Number of leaves, i.e. maximal root-to-leaf paths. Zero for an empty
/// trie.
pub fn leaf_count<T: TrieModel + ?Sized>(t: &T) -> usize {
    if t.node_count() == 0 {
        return 0;
    }
    let mut leaves = 0usize;
    let mut stack = vec![NodeId::ROOT];
    while let Some(n) = stack.pop() {
        let mut any = false;
        for c in t.children(n) {
            any = true;
            stack.push(c);
        }
        if !any && !n.is_root() {
            leaves += 1;
        }
    }
    leaves
}

/// Sorted multiset of `(depth, event, freq, itemset_index)` labels; two
/// tries represent the same logical tree only if these agree.
pub fn label_profile<T: TrieModel + ?Sized>(t: &T) -> Vec<(usize, i32, u64, u32)> {
    let mut out = Vec::with_capacity(t.node_count());
    let mut stack: Vec<(NodeId, usize)> = vec![(NodeId::ROOT, 0)];
    while let Some((n, depth)) = stack.pop() {
        if !n.is_root() {
            out.push((depth, t.event(n).raw(), t.freq(n), t.itemset_index(n)));
        }
        for c in t.children(n) {
            stack.push((c, depth + 1));
        }
    }
    out.sort_unstable();
    out
}

/// Rebuild the inserted rows as a multiset. Each node terminates
/// `freq - sum(child freqs)` rows; a negative difference means the trie
/// was corrupted.
pub fn reconstruct<T: TrieModel + ?Sized>(t: &T) -> Result<FlatDataset, TrieError> {
    let mut rows: Vec<Vec<i32>> = Vec::with_capacity(t.source_rows());
    let mut path: Vec<i32> = Vec::new();
    walk(t, NodeId::ROOT, &mut path, &mut rows)?;
    return Ok(FlatDataset::from_rows(rows, Flattening::Transformed));

    fn walk<T: TrieModel + ?Sized>(
        t: &T,
        n: NodeId,
        path: &mut Vec<i32>,
        rows: &mut Vec<Vec<i32>>,
    ) -> Result<(), TrieError> {
        let mut child_total = 0u64;
        for c in t.children(n) {
            child_total += t.freq(c);
        }
        if !n.is_root() {
            let here = t.freq(n);
            if here < child_total {
                return Err(TrieError::BadFrequency { node: n });
            }
            for _ in 0..(here - child_total) {
                rows.push(path.clone());
            }
        }
        for c in t.children(n) {
            path.push(t.event(c).raw());
            walk(t, c, path, rows)?;
            path.pop();
        }
        Ok(())
    }
}
