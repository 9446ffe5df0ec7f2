//! Subset search with call-graph memoization.
//!
//! A traced subset query records every search state it passes through as a
//! [`CallNode`]. Consecutive query itemsets in canonical order often share a
//! long prefix, and a node whose reads stayed within that shared prefix
//! behaves identically for the next itemset, so its recorded outcome can be
//! reused without repeating any range search. Nodes that read beyond the
//! shared prefix are re-executed in place.
//!
//! A query that finds a subset stops early, leaving ranges unexplored;
//! blindly reusing such a graph could silently skip a region that matters
//! for the next itemset. Two policies deal with this. [`ReusePolicy::Discard`]
//! (the default) throws the graph away after every `true` result, so only
//! complete false-result graphs are carried forward. [`ReusePolicy::FrontierResume`]
//! records every range an early stop skipped as a placeholder node with
//! [`UNEXPLORED`] in place of `m`; placeholders never test as reusable, so a
//! later query that reaches one re-executes it, and the graph survives
//! `true` results. On subset-heavy inputs nearly every query returns `true`,
//! which makes frontier resume the policy that actually preserves reuse
//! there.

use crate::lex::{
    self, next_begin_range, next_end_range, next_item, QueryCursor, RangeSearchStats,
};
use crate::model::{longest_common_prefix, Dataset, Item};
use crate::oracle::MinimalityFlags;

/// Marker value of [`CallNode::m`] for a placeholder recorded in place of a
/// range the search never entered. Larger than any real read bound, so the
/// node is stale for every shared prefix and always re-executes when reached.
pub const UNEXPLORED: u32 = u32::MAX;

/// One search state of a traced subset query.
///
/// `b`, `e`, `j`, `d` are the entry state (positions 0-based, `e` exclusive).
/// `t` marks a direct hit: the itemset at `b` was exactly the matched prefix
/// plus one item and therefore a proper subset of the query. `m` is the
/// number of leading query items that cover every read this node performed
/// locally: reuse is sound for a later query itemset agreeing on at least
/// `m` leading items. `c1` is the deepened-prefix child, `c2` the
/// continuation within the same range. A node with `m == UNEXPLORED` is a
/// placeholder holding only an entry state that was never executed.
///
/// `mx`, `ht` and `pl` cache subtree aggregates: when `mx <= p` every
/// executed node below is reusable and `ht` already answers the query for
/// the explored part, so a reuse walk can stop without descending unless it
/// still needs to enter placeholders flagged by `pl`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CallNode {
    pub b: u32,
    pub e: u32,
    pub j: u32,
    pub d: u32,
    pub m: u32,
    pub t: bool,
    /// Set when exploration below or at this node stopped early because a
    /// subset was found. Truncated graphs must not be reused directly.
    pub truncated: bool,
    /// Largest `m` of any executed node in this subtree, counting this node;
    /// placeholders contribute nothing.
    pub mx: u32,
    /// Whether this subtree holds any direct hit, counting this node.
    pub ht: bool,
    /// Whether this subtree holds any unexplored placeholder.
    pub pl: bool,
    pub c1: Option<Box<CallNode>>,
    pub c2: Option<Box<CallNode>>,
}

impl CallNode {
    fn at(b: usize, e: usize, j: usize, d: usize) -> CallNode {
        CallNode {
            b: b as u32,
            e: e as u32,
            j: j as u32,
            d: d as u32,
            m: 0,
            t: false,
            truncated: false,
            mx: 0,
            ht: false,
            pl: false,
            c1: None,
            c2: None,
        }
    }

    fn unexplored(b: usize, e: usize, j: usize, d: usize) -> CallNode {
        let mut n = CallNode::at(b, e, j, d);
        n.m = UNEXPLORED;
        n.pl = true;
        n
    }

    /// Whether this node is a placeholder for a range the search never
    /// entered.
    pub fn is_unexplored(&self) -> bool {
        self.m == UNEXPLORED
    }

    fn refresh_caches(&mut self) {
        let mut mx = if self.m == UNEXPLORED { 0 } else { self.m };
        let mut ht = self.t;
        let mut pl = self.m == UNEXPLORED;
        if let Some(c) = self.c1.as_deref() {
            mx = mx.max(c.mx);
            ht |= c.ht;
            pl |= c.pl;
        }
        if let Some(c) = self.c2.as_deref() {
            mx = mx.max(c.mx);
            ht |= c.ht;
            pl |= c.pl;
        }
        self.mx = mx;
        self.ht = ht;
        self.pl = pl;
    }

    /// Nodes in this graph, counting `self`.
    pub fn count(&self) -> usize {
        let mut total = 0;
        let mut stack = vec![self];
        while let Some(n) = stack.pop() {
            total += 1;
            stack.extend(n.c1.as_deref());
            stack.extend(n.c2.as_deref());
        }
        total
    }
}

// Continuation chains grow with the dataset, so the default recursive drop
// glue could overflow the stack on large graphs.
impl Drop for CallNode {
    fn drop(&mut self) {
        let mut stack: Vec<Box<CallNode>> = Vec::new();
        stack.extend(self.c1.take());
        stack.extend(self.c2.take());
        while let Some(mut n) = stack.pop() {
            stack.extend(n.c1.take());
            stack.extend(n.c2.take());
        }
    }
}

/// Shared worker for the traced and full-trace modes. In traced mode the
/// walk returns as soon as a subset is found, tagging the involved nodes
/// truncated; in full mode direct hits only set `t` and the walk continues,
/// so the resulting graph is always complete.
#[allow(clippy::too_many_arguments)]
fn walk(
    d: &Dataset,
    b0: usize,
    e: usize,
    s: &[Item],
    j0: usize,
    depth: usize,
    stats: &mut RangeSearchStats,
    full: bool,
) -> (bool, Box<CallNode>) {
    debug_assert!(b0 < e && e <= d.len());
    debug_assert!(j0 < s.len());
    debug_assert!(depth < d.get(b0).len());

    let mut b = b0;
    let mut j = j0;
    let mut chain: Vec<Box<CallNode>> = Vec::new();
    let mut found = false;
    loop {
        let mut cur = Box::new(CallNode::at(b, e, j, depth));
        let row = d.get(b);
        let target = row[depth];
        if s[j] < target {
            match next_item(s, j, target, stats) {
                None => {
                    cur.m = s.len() as u32;
                    chain.push(cur);
                    break;
                }
                Some(k) => {
                    j = k;
                    cur.m = (k + 1) as u32;
                }
            }
        } else {
            cur.m = (j + 1) as u32;
        }
        if s[j] == target {
            let end = next_end_range(d, b, e, target, depth, stats);
            if s.len() > depth + 1 && row.len() == depth + 1 {
                cur.t = true;
                found = true;
                if !full {
                    cur.truncated = true;
                    chain.push(cur);
                    if end < e {
                        chain.push(Box::new(CallNode::unexplored(end, e, j, depth)));
                    }
                    break;
                }
                // A hit means the block head is a pure prefix itemset, so
                // there is no valid deeper search state to record here.
            } else if j + 1 < s.len() {
                let (sub, child) = walk(d, b, end, s, j + 1, depth + 1, stats, full);
                cur.c1 = Some(child);
                if sub {
                    found = true;
                    if !full {
                        cur.truncated = true;
                        chain.push(cur);
                        if end < e {
                            chain.push(Box::new(CallNode::unexplored(end, e, j, depth)));
                        }
                        break;
                    }
                }
            }
            b = end;
        } else {
            b = next_begin_range(d, b, e, s[j], depth, stats);
        }
        chain.push(cur);
        if b >= e {
            break;
        }
    }
    // Link continuations right to left so each node folds its tail's caches
    // into its own.
    let mut root: Option<Box<CallNode>> = None;
    for mut node in chain.into_iter().rev() {
        node.c2 = root;
        node.refresh_caches();
        root = Some(node);
    }
    let mut root = root.unwrap();
    if found && !full {
        root.truncated = true;
    }
    (found, root)
}

/// [`lex::contains_subset_of`] with the call graph recorded. When the result
/// is `true` the graph is truncated (tagged on the root) because the search
/// stopped at the first subset found; each range skipped by the stop is
/// recorded as an unexplored placeholder node, costing no range searches.
pub fn contains_subset_of_traced(
    d: &Dataset,
    cursor: QueryCursor,
    s: &[Item],
    stats: &mut RangeSearchStats,
) -> (bool, Box<CallNode>) {
    lex::debug_check_cursor(d, cursor, s);
    assert!(d.len() < u32::MAX as usize);
    walk(d, cursor.b, cursor.e, s, cursor.j, cursor.d, stats, false)
}

/// Records the complete call graph, never returning early: direct hits set
/// `t` and exploration continues. Intended for structural testing; no
/// instrumentation is reported.
pub fn trace_full(d: &Dataset, cursor: QueryCursor, s: &[Item]) -> Box<CallNode> {
    lex::debug_check_cursor(d, cursor, s);
    assert!(d.len() < u32::MAX as usize);
    let mut scratch = RangeSearchStats::default();
    walk(d, cursor.b, cursor.e, s, cursor.j, cursor.d, &mut scratch, true).1
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MemoError {
    #[error("stored call graph is truncated and cannot be reused")]
    TruncatedGraph,
    #[error("shared prefix length {p} must be shorter than the query itemset ({len} items)")]
    PrefixTooLong { p: usize, len: usize },
}

/// Re-runs a stored call graph for the query itemset `d[i]` over
/// `d[i + 1..]`, given that the graph was produced while querying an earlier
/// itemset whose longest common prefix with `d[i]` has length `p`.
///
/// Nodes whose reads stayed within the first `p` items are reused: a stored
/// direct hit is consumed (after re-checking that the witness is a *proper*
/// subset of the new, possibly shorter itemset) and children are visited in
/// search order. Any node with `m > p` is re-executed over
/// `[max(b, i + 1), e)` and replaced in the graph, or removed when that
/// range is empty. The graph is updated in place.
///
/// The traversal stops at the first subset found, which leaves regions of
/// the graph stale relative to `d[i]`; the root is then tagged truncated so
/// a further call cannot reuse it.
pub fn contains_subset_of_memoized(
    d: &Dataset,
    i: usize,
    p: usize,
    root: &mut Option<Box<CallNode>>,
    stats: &mut RangeSearchStats,
) -> Result<bool, MemoError> {
    if let Some(node) = root.as_deref() {
        if node.truncated {
            return Err(MemoError::TruncatedGraph);
        }
    }
    let s = d.get(i);
    if p >= s.len() {
        return Err(MemoError::PrefixTooLong { p, len: s.len() });
    }
    let res = memo_walk(d, i, p, root, s, stats);
    if res {
        if let Some(node) = root.as_deref_mut() {
            node.truncated = true;
        }
    }
    Ok(res)
}

fn memo_walk(
    d: &Dataset,
    i: usize,
    p: usize,
    slot: &mut Option<Box<CallNode>>,
    s: &[Item],
    stats: &mut RangeSearchStats,
) -> bool {
    let mut chain: Vec<Box<CallNode>> = Vec::new();
    let mut tail = slot.take();
    let mut base: Option<Box<CallNode>> = None;
    let mut result = false;
    while let Some(mut node) = tail.take() {
        if (node.mx as usize) <= p && !node.pl {
            // Nothing in this subtree read past the shared prefix, so the
            // cached aggregate already answers the rest of the chain.
            result = node.ht;
            base = Some(node);
            break;
        }
        if (node.m as usize) > p {
            let b = (node.b as usize).max(i + 1);
            let e = node.e as usize;
            if b < e {
                let (res, fresh) = walk(d, b, e, s, node.j as usize, node.d as usize, stats, false);
                result = res;
                base = Some(fresh);
            }
            break;
        }
        if node.t && s.len() > node.d as usize + 1 {
            result = true;
            base = Some(node);
            break;
        }
        if memo_walk(d, i, p, &mut node.c1, s, stats) {
            result = true;
            base = Some(node);
            break;
        }
        tail = node.c2.take();
        chain.push(node);
    }
    for mut node in chain.into_iter().rev() {
        node.c2 = base;
        node.refresh_caches();
        base = Some(node);
    }
    *slot = base;
    result
}

/// Full-traversal variant of [`memo_walk`] used by the frontier-resume
/// policy. Every stale node is either re-executed or demoted, so afterwards
/// the whole graph is consistent with having queried `d[i]` and can be kept
/// even when the result is `true`.
///
/// Stale nodes reached before the first subset is found are re-executed in
/// place, exactly like the short-circuiting walk. Stale nodes reached after
/// it are demoted to unexplored placeholders instead, which costs no range
/// searches. Demotion loses nothing: queried itemsets ascend
/// lexicographically, so the shared prefix between the node's original query
/// and any later itemset can never exceed `p`, and a node stale now would
/// have been stale for every later query as well.
fn resume_walk(
    d: &Dataset,
    i: usize,
    p: usize,
    slot: &mut Option<Box<CallNode>>,
    s: &[Item],
    stats: &mut RangeSearchStats,
    found: bool,
) -> bool {
    let mut chain: Vec<Box<CallNode>> = Vec::new();
    let mut tail = slot.take();
    let mut base: Option<Box<CallNode>> = None;
    let mut any = false;
    while let Some(mut node) = tail.take() {
        if (node.mx as usize) <= p && (!node.pl || found || any || node.ht) {
            // Every executed node in this subtree is reusable, so the cached
            // aggregate answers the rest of the chain. Placeholders inside
            // only matter while the answer is still open; once a subset is
            // found (possibly by this very subtree) they can simply stay
            // unexplored.
            any |= node.ht;
            base = Some(node);
            break;
        }
        if (node.m as usize) > p {
            // The node's range runs to the end of its chain, so whichever
            // branch is taken here also covers every stored node after it.
            if found || any {
                if node.e as usize > i + 1 {
                    node.m = UNEXPLORED;
                    node.t = false;
                    node.truncated = false;
                    node.c1 = None;
                    node.c2 = None;
                    node.refresh_caches();
                    base = Some(node);
                }
            } else {
                let b = (node.b as usize).max(i + 1);
                let e = node.e as usize;
                if b < e {
                    let (res, fresh) =
                        walk(d, b, e, s, node.j as usize, node.d as usize, stats, false);
                    any |= res;
                    base = Some(fresh);
                }
            }
            break;
        }
        if node.t && s.len() > node.d as usize + 1 {
            any = true;
        }
        any |= resume_walk(d, i, p, &mut node.c1, s, stats, found || any);
        tail = node.c2.take();
        chain.push(node);
    }
    for mut node in chain.into_iter().rev() {
        node.c2 = base;
        node.refresh_caches();
        base = Some(node);
    }
    *slot = base;
    any
}

/// Re-derives the root's `truncated` flag after a resume traversal. A false
/// result means every reachable placeholder was just re-executed, so the
/// graph is complete again; inner nodes keep the flag from when they were
/// recorded.
fn refresh_truncated(root: &mut Option<Box<CallNode>>, result: bool) {
    if let Some(r) = root.as_deref_mut() {
        r.truncated = result || r.pl;
    }
}

/// How the engine treats a stored call graph once a query returns `true`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReusePolicy {
    /// Drop the graph after any `true` result; only complete false-result
    /// graphs are carried to the next query. Never reuses a graph containing
    /// unexplored placeholders.
    #[default]
    Discard,
    /// Keep the graph across `true` results. Ranges skipped by an early stop
    /// stay in the graph as unexplored placeholders and are re-executed if a
    /// later query reaches them; stale nodes behind an already-found subset
    /// are demoted to placeholders instead of being re-executed.
    FrontierResume,
}

/// Carries the reusable call graph from one subset query to the next.
///
/// Under [`ReusePolicy::Discard`], `root` holds a graph only when the
/// previous query completed with a `false` result; truncated graphs are
/// discarded on the spot. Under [`ReusePolicy::FrontierResume`] the graph is
/// kept across results.
#[derive(Debug, Default)]
pub struct MemoState {
    prev: Vec<Item>,
    root: Option<Box<CallNode>>,
    policy: ReusePolicy,
}

impl MemoState {
    pub fn new() -> Self {
        MemoState::default()
    }

    pub fn with_policy(policy: ReusePolicy) -> Self {
        MemoState { policy, ..MemoState::default() }
    }

    /// The stored graph, if any.
    pub fn root(&self) -> Option<&CallNode> {
        self.root.as_deref()
    }

    /// Queries whether `d[i + 1..]` contains a proper subset of `d[i]`,
    /// reusing whatever graph the previous call on this state left behind.
    ///
    /// Calls must visit positions in ascending order and skip itemsets that
    /// have a proper prefix or duplicate earlier in the dataset, as the
    /// minimality engines do after the prefix pass.
    pub fn query(&mut self, d: &Dataset, i: usize, stats: &mut RangeSearchStats) -> bool {
        stats.subset_queries += 1;
        let s = d.get(i);
        let res = if self.root.is_none() {
            if i + 1 >= d.len() {
                false
            } else {
                let (res, graph) = contains_subset_of_traced(d, QueryCursor::root(i + 1, d.len()), s, stats);
                self.root = Some(graph);
                res
            }
        } else {
            let p = longest_common_prefix(&self.prev, s);
            debug_assert!(p < s.len(), "queried itemsets must ascend and survive the prefix pass");
            match self.policy {
                ReusePolicy::Discard => memo_walk(d, i, p, &mut self.root, s, stats),
                ReusePolicy::FrontierResume => {
                    let res = resume_walk(d, i, p, &mut self.root, s, stats, false);
                    refresh_truncated(&mut self.root, res);
                    res
                }
            }
        };
        if res && self.policy == ReusePolicy::Discard {
            self.root = None;
        }
        self.prev.clear();
        self.prev.extend_from_slice(s);
        res
    }
}

/// Flags the minimal itemsets of a canonical dataset, like
/// [`lex::minimal_itemsets`] but reusing call graphs across consecutive
/// queries under [`ReusePolicy::Discard`]. Results are identical; only the
/// number of range searches drops.
pub fn minimal_itemsets(d: &Dataset) -> (MinimalityFlags, RangeSearchStats) {
    run_engine(d, ReusePolicy::Discard, |_, _| {})
}

/// [`minimal_itemsets`] with an explicit reuse policy. Flags are identical
/// under either policy; on subset-heavy datasets [`ReusePolicy::FrontierResume`]
/// keeps far more of each graph alive and needs far fewer range searches.
pub fn minimal_itemsets_with_policy(
    d: &Dataset,
    policy: ReusePolicy,
) -> (MinimalityFlags, RangeSearchStats) {
    run_engine(d, policy, |_, _| {})
}

/// Like [`minimal_itemsets_with_policy`], invoking `on_graph` after each
/// subset query with the queried position and the resulting graph (before
/// any discard).
pub fn minimal_itemsets_observed(
    d: &Dataset,
    policy: ReusePolicy,
    on_graph: impl FnMut(usize, &CallNode),
) -> (MinimalityFlags, RangeSearchStats) {
    run_engine(d, policy, on_graph)
}

fn run_engine(
    d: &Dataset,
    policy: ReusePolicy,
    mut on_graph: impl FnMut(usize, &CallNode),
) -> (MinimalityFlags, RangeSearchStats) {
    assert!(d.is_canonical(), "minimal_itemsets requires a canonical dataset");
    assert!(d.len() < u32::MAX as usize);
    let n = d.len();
    let mut flags = lex::prefix_subsume_pass(d);
    let mut stats = RangeSearchStats::default();
    let mut prev: Option<usize> = None;
    let mut root: Option<Box<CallNode>> = None;
    for i in 0..n.saturating_sub(1) {
        if !flags.get(i) {
            continue;
        }
        stats.subset_queries += 1;
        let s = d.get(i);
        let res = match root {
            None => {
                let (res, graph) = contains_subset_of_traced(d, QueryCursor::root(i + 1, n), s, &mut stats);
                root = Some(graph);
                res
            }
            Some(_) => {
                let p = longest_common_prefix(d.get(prev.unwrap()), s);
                match policy {
                    ReusePolicy::Discard => memo_walk(d, i, p, &mut root, s, &mut stats),
                    ReusePolicy::FrontierResume => {
                        let res = resume_walk(d, i, p, &mut root, s, &mut stats, false);
                        refresh_truncated(&mut root, res);
                        res
                    }
                }
            }
        };
        if let Some(graph) = root.as_deref() {
            on_graph(i, graph);
        }
        if res {
            flags.clear(i);
            if policy == ReusePolicy::Discard {
                root = None;
            }
        }
        prev = Some(i);
    }
    (flags, stats)
}

/// Renders a call graph as JSON: an array of nodes in search order with ids,
/// 1-based inclusive positions, and child ids, matching the convention used
/// in hand-drawn traces.
pub fn call_graph_json(root: &CallNode) -> serde_json::Value {
    let mut nodes: Vec<serde_json::Value> = Vec::new();
    // (node, parent id, is descend child)
    let mut stack: Vec<(&CallNode, Option<(usize, bool)>)> = vec![(root, None)];
    while let Some((node, parent)) = stack.pop() {
        let id = nodes.len();
        nodes.push(serde_json::json!({
            "id": id,
            "b": node.b + 1,
            "e": node.e,
            "j": node.j + 1,
            "d": node.d,
            "t": node.t,
            "m": node.m,
            "c1": serde_json::Value::Null,
            "c2": serde_json::Value::Null,
        }));
        if let Some((pid, is_c1)) = parent {
            nodes[pid][if is_c1 { "c1" } else { "c2" }] = serde_json::json!(id);
        }
        // pop order: c1 first to mirror search order
        if let Some(c) = node.c2.as_deref() {
            stack.push((c, Some((id, false))));
        }
        if let Some(c) = node.c1.as_deref() {
            stack.push((c, Some((id, true))));
        }
    }
    serde_json::Value::Array(nodes)
}
