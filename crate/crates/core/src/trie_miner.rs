//! Frequent-pattern mining directly on a trie.
//!
//! A mined pattern is tracked as a *frontier*: the set of trie nodes at
//! which the pattern's minimal match ends, one node per matched row
//! group. Summing `freq` over the frontier gives the support without
//! touching the rows. Extending a pattern only requires scanning the
//! subtrees below its frontier nodes, and the same-literal `ancestor`
//! links let each candidate be accepted or rejected locally, without
//! re-walking its path.

use std::collections::{BTreeMap, HashMap};

use crate::model::{MiningParams, Pattern, PatternSet};
use crate::trie::{NodeId, TrieModel};

/// The two ways a pattern grows by one event.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum ExtensionKind {
    /// Append `{e}` as a new final itemset.
    Sequence,
    /// Join `e` into the final itemset.
    Itemset,
}

/// Path-dependent facts about a candidate node that the acceptance rule
/// needs but cannot read off the trie labels alone. The mining descent
/// maintains both incrementally.
#[derive(Clone, Copy, Debug, Default)]
pub struct ExtensionContext {
    /// Every literal of the pattern's final itemset reoccurs in the
    /// candidate's own data itemset, before the candidate.
    pub last_itemset_rematched: bool,
    /// An already-accepted itemset-extension node with the candidate's
    /// literal lies on the path between anchor and candidate, so this
    /// occurrence is redundant for the row group.
    pub literal_claimed_on_path: bool,
}

/// A pattern with the trie nodes its minimal matches end at.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frontier {
    pub pattern: Pattern,
    pub nodes: Vec<NodeId>,
}

/// Support represented by a frontier: total rows through its nodes.
pub fn frontier_support<T: TrieModel + ?Sized>(t: &T, frontier: &Frontier) -> u64 {
    frontier.nodes.iter().map(|&n| t.freq(n)).sum()
}

/// Decide whether `candidate`, found below `anchor`, contributes a new
/// row group to the extension of the anchor's pattern.
///
/// For a sequence extension the test is purely structural: accept when
/// the candidate's same-literal ancestor sits at or before the anchor's
/// itemset — i.e. no occurrence of the literal between the end of the
/// matched pattern and this node, making this the first usable
/// occurrence on its path. For an itemset extension the candidate's data
/// itemset must additionally re-contain the pattern's final itemset
/// (`last_itemset_rematched`), and an occurrence below an accepted
/// same-literal node (`literal_claimed_on_path`) is redundant unless its
/// ancestor predates the anchor's itemset.
pub fn valid_extension<T: TrieModel + ?Sized>(
    t: &T,
    anchor: NodeId,
    candidate: NodeId,
    kind: ExtensionKind,
    ctx: ExtensionContext,
) -> bool {
    let candidate_anc = t.itemset_index(t.ancestor(candidate));
    let anchor_itemset = t.itemset_index(anchor);
    match kind {
        ExtensionKind::Sequence => candidate_anc <= anchor_itemset,
        ExtensionKind::Itemset => {
            ctx.last_itemset_rematched
                && (candidate_anc < anchor_itemset || !ctx.literal_claimed_on_path)
        }
    }
}

/// Mine all patterns with support at least `params.minsup_count`.
pub fn mine_trie<T: TrieModel + ?Sized>(t: &T, params: &MiningParams) -> PatternSet {
    let (patterns, _) = mine(t, params, false);
    patterns
}

/// As [`mine_trie`], also returning the frontier of every mined pattern.
pub fn mine_trie_traced<T: TrieModel + ?Sized>(
    t: &T,
    params: &MiningParams,
) -> (PatternSet, BTreeMap<Pattern, Frontier>) {
    mine(t, params, true)
}

fn mine<T: TrieModel + ?Sized>(
    t: &T,
    params: &MiningParams,
    traced: bool,
) -> (PatternSet, BTreeMap<Pattern, Frontier>) {
    let mut miner = Miner {
        t,
        minsup: params.minsup_count,
        out: PatternSet::default(),
        trace: BTreeMap::new(),
        traced,
    };

    // Seed frontiers: for each literal, every node whose same-literal
    // ancestor is the root, i.e. the first occurrence of the literal on
    // its path. Deeper occurrences re-count rows already counted above.
    let mut seeds: BTreeMap<u32, Vec<NodeId>> = BTreeMap::new();
    let mut stack = vec![NodeId::ROOT];
    while let Some(n) = stack.pop() {
        for c in t.children(n) {
            if t.ancestor(c).is_root() {
                seeds.entry(t.event(c).literal()).or_default().push(c);
            }
            stack.push(c);
        }
    }
    for (literal, mut nodes) in seeds {
        nodes.sort_unstable();
        let support: u64 = nodes.iter().map(|&n| t.freq(n)).sum();
        if support >= miner.minsup {
            let frontier = Frontier {
                pattern: Pattern::singleton(literal),
                nodes,
            };
            miner.record(&frontier, support);
            miner.expand(&frontier);
        }
    }
    (miner.out, miner.trace)
}

struct Miner<'a, T: TrieModel + ?Sized> {
    t: &'a T,
    minsup: u64,
    out: PatternSet,
    trace: BTreeMap<Pattern, Frontier>,
    traced: bool,
}

impl<'a, T: TrieModel + ?Sized> Miner<'a, T> {
    fn record(&mut self, frontier: &Frontier, support: u64) {
        self.out.insert(frontier.pattern.clone(), support);
        if self.traced {
            self.trace.insert(frontier.pattern.clone(), frontier.clone());
        }
    }

    /// Gather candidate extension nodes below every frontier node, then
    /// recurse depth-first into each frequent extension.
    fn expand(&mut self, frontier: &Frontier) {
        let last: Vec<u32> = frontier.pattern.last_itemset().to_vec();
        let max_last = *last.last().unwrap();
        let mut candidates: BTreeMap<(u32, ExtensionKind), Vec<NodeId>> = BTreeMap::new();

        for &anchor in &frontier.nodes {
            let mut claimed: HashMap<u32, u32> = HashMap::new();
            for c in self.t.children(anchor) {
                self.visit(
                    c,
                    anchor,
                    true,
                    0,
                    &last,
                    max_last,
                    &mut claimed,
                    &mut candidates,
                );
            }
        }

        for ((literal, kind), nodes) in candidates {
            let support: u64 = nodes.iter().map(|&n| self.t.freq(n)).sum();
            if support >= self.minsup {
                let pattern = match kind {
                    ExtensionKind::Sequence => {
                        frontier.pattern.with_sequence_extension(literal)
                    }
                    ExtensionKind::Itemset => frontier.pattern.with_itemset_extension(literal),
                };
                let next = Frontier { pattern, nodes };
                self.record(&next, support);
                self.expand(&next);
            }
        }
    }

    /// One node of the descent below an anchor.
    ///
    /// `in_anchor_itemset` is true while the walk has not yet left the
    /// anchor's own data itemset — candidates there extend that itemset
    /// with no further checks, since the final pattern itemset is known
    /// to match inside it. Afterwards `rematch_len` counts how many
    /// leading literals of the pattern's final itemset have reoccurred in
    /// the current data itemset, and `claimed` counts accepted
    /// itemset-extension nodes per literal on the path above.
    #[allow(clippy::too_many_arguments)]
    fn visit(
        &mut self,
        n: NodeId,
        anchor: NodeId,
        in_anchor_itemset: bool,
        rematch_len: usize,
        last: &[u32],
        max_last: u32,
        claimed: &mut HashMap<u32, u32>,
        candidates: &mut BTreeMap<(u32, ExtensionKind), Vec<NodeId>>,
    ) {
        let event = self.t.event(n);
        let literal = event.literal();
        let mut claim = false;

        if event.is_transformed() {
            // A new data itemset starts here; the event itself can only
            // ever be a sequence extension.
            if valid_extension(self.t, anchor, n, ExtensionKind::Sequence, Default::default()) {
                candidates.entry((literal, ExtensionKind::Sequence)).or_default().push(n);
            }
            let rematch = usize::from(literal == last[0]);
            for c in self.t.children(n) {
                self.visit(c, anchor, false, rematch, last, max_last, claimed, candidates);
            }
        } else if in_anchor_itemset {
            if literal > max_last {
                candidates.entry((literal, ExtensionKind::Itemset)).or_default().push(n);
                claim = true;
                *claimed.entry(literal).or_insert(0) += 1;
            }
            for c in self.t.children(n) {
                self.visit(c, anchor, true, 0, last, max_last, claimed, candidates);
            }
        } else {
            let ctx = ExtensionContext {
                last_itemset_rematched: rematch_len == last.len(),
                literal_claimed_on_path: claimed.get(&literal).copied().unwrap_or(0) > 0,
            };
            if literal > max_last
                && valid_extension(self.t, anchor, n, ExtensionKind::Itemset, ctx)
            {
                candidates.entry((literal, ExtensionKind::Itemset)).or_default().push(n);
                claim = true;
                *claimed.entry(literal).or_insert(0) += 1;
            }
            if valid_extension(self.t, anchor, n, ExtensionKind::Sequence, ctx) {
                candidates.entry((literal, ExtensionKind::Sequence)).or_default().push(n);
            }
            let rematch = if rematch_len < last.len() && literal == last[rematch_len] {
                rematch_len + 1
            } else {
                rematch_len
            };
            for c in self.t.children(n) {
                self.visit(c, anchor, false, rematch, last, max_last, claimed, candidates);
            }
        }

        if claim {
            *claimed.get_mut(&literal).unwrap() -= 1;
        }
    }
}
