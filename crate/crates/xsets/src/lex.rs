//! Subset search over a canonical dataset, and the minimal-itemsets engine
//! built on it.
//!
//! The key fact making one-directional search sound: if `a` is a proper
//! subset of `b`, then in lexicographic order `a` is either a proper prefix
//! of `b` (so it sorts before `b`) or `a` sorts after `b`. A linear prefix
//! pass handles the first case; for the second, each surviving itemset is
//! queried against the itemsets after it.
//!
//! All positions are 0-based and ranges are half-open `[b, e)`.

use crate::model::{is_proper_prefix, Dataset, Item};
use crate::oracle::{self, MinimalityFlags};

/// Counts of calls into the binary-search subroutines. Calls are counted,
/// not probes: one call increments one counter once regardless of how many
/// elements the search inspects.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct RangeSearchStats {
    pub next_item_calls: u64,
    pub next_begin_range_calls: u64,
    pub next_end_range_calls: u64,
    /// Top-level subset queries issued by an engine.
    pub subset_queries: u64,
}

impl RangeSearchStats {
    pub fn merge(&mut self, other: &RangeSearchStats) {
        self.next_item_calls += other.next_item_calls;
        self.next_begin_range_calls += other.next_begin_range_calls;
        self.next_end_range_calls += other.next_end_range_calls;
        self.subset_queries += other.subset_queries;
    }

    /// The headline cost metric: range searches over the dataset.
    pub fn range_search_calls(&self) -> u64 {
        self.next_begin_range_calls + self.next_end_range_calls
    }

    /// All binary-search calls including scans of the query itemset.
    pub fn total_search_calls(&self) -> u64 {
        self.next_item_calls + self.range_search_calls()
    }
}

/// The state of a subset query: search `d[b..e]` for a proper subset of the
/// query itemset `s`, where
///
/// * `b < e <= d.len()`,
/// * `j < s.len()` is the position in `s` the search resumes from,
/// * every itemset in `d[b..e]` shares the same first `depth` items, each of
///   which occurs in `s` before position `j`, and `depth < d[b].len()`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QueryCursor {
    pub b: usize,
    pub e: usize,
    pub j: usize,
    pub d: usize,
}

impl QueryCursor {
    /// Cursor for a fresh query over `d[b..e]`.
    pub fn root(b: usize, e: usize) -> Self {
        QueryCursor { b, e, j: 0, d: 0 }
    }
}

/// First position `k >= j` with `s[k] >= target`, if any.
pub fn next_item(s: &[Item], j: usize, target: Item, stats: &mut RangeSearchStats) -> Option<usize> {
    stats.next_item_calls += 1;
    let k = j + s[j..].partition_point(|&x| x < target);
    (k < s.len()).then_some(k)
}

fn row_partition(d: &Dataset, b: usize, e: usize, mut keep: impl FnMut(&[Item]) -> bool) -> usize {
    let mut lo = b;
    let mut hi = e;
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if keep(d.get(mid)) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    lo
}

/// End (exclusive) of the block starting at `b` whose itemsets all carry
/// `item` at position `depth`. Requires `d[b][depth] == item`, that every
/// itemset in `d[b..e]` has more than `depth` items, and that their items at
/// `depth` are non-decreasing (all guaranteed at call sites by the cursor
/// invariants).
pub fn next_end_range(d: &Dataset, b: usize, e: usize, item: Item, depth: usize, stats: &mut RangeSearchStats) -> usize {
    stats.next_end_range_calls += 1;
    debug_assert!(d.get(b)[depth] == item);
    row_partition(d, b, e, |row| row[depth] <= item)
}

/// First position in `[b, e)` whose itemset carries an item `>= item` at
/// position `depth`, or `e` if there is none. Same structural requirements
/// as [`next_end_range`].
pub fn next_begin_range(d: &Dataset, b: usize, e: usize, item: Item, depth: usize, stats: &mut RangeSearchStats) -> usize {
    stats.next_begin_range_calls += 1;
    row_partition(d, b, e, |row| row[depth] < item)
}

pub(crate) fn debug_check_cursor(d: &Dataset, cursor: QueryCursor, s: &[Item]) {
    debug_assert!(cursor.b < cursor.e && cursor.e <= d.len());
    debug_assert!(cursor.j < s.len());
    debug_assert!(cursor.d < d.get(cursor.b).len());
}

/// Position of some proper subset of `s` within `d[cursor.b..cursor.e]`, or
/// `None`. See [`QueryCursor`] for the preconditions.
pub fn find_proper_subset(d: &Dataset, cursor: QueryCursor, s: &[Item], stats: &mut RangeSearchStats) -> Option<usize> {
    debug_check_cursor(d, cursor, s);
    find_at(d, cursor.b, cursor.e, s, cursor.j, cursor.d, stats)
}

/// Whether `d[cursor.b..cursor.e]` contains a proper subset of `s`.
pub fn contains_subset_of(d: &Dataset, cursor: QueryCursor, s: &[Item], stats: &mut RangeSearchStats) -> bool {
    find_proper_subset(d, cursor, s, stats).is_some()
}

// Recursion happens only when the matched prefix deepens, so the stack is
// bounded by the longest itemset; stepping past a block keeps looping here.
fn find_at(d: &Dataset, mut b: usize, e: usize, s: &[Item], mut j: usize, depth: usize, stats: &mut RangeSearchStats) -> Option<usize> {
    loop {
        let row = d.get(b);
        let target = row[depth];
        if s[j] < target {
            j = next_item(s, j, target, stats)?;
        }
        if s[j] == target {
            let end = next_end_range(d, b, e, target, depth, stats);
            if s.len() > depth + 1 && row.len() == depth + 1 {
                // `row` is exactly the shared prefix plus `target`, all of
                // which occur in the longer `s`.
                return Some(b);
            }
            if j + 1 < s.len() {
                if let Some(w) = find_at(d, b, end, s, j + 1, depth + 1, stats) {
                    return Some(w);
                }
            }
            b = end;
        } else {
            b = next_begin_range(d, b, e, s[j], depth, stats);
        }
        if b >= e {
            return None;
        }
    }
}

/// Clears every position whose itemset has an earlier proper prefix or an
/// earlier identical copy. Runs in one pass: in canonical order it suffices
/// to compare against the most recent surviving itemset.
pub fn prefix_subsume_pass(d: &Dataset) -> MinimalityFlags {
    assert!(d.is_canonical(), "prefix_subsume_pass requires a canonical dataset");
    let n = d.len();
    let mut flags = MinimalityFlags::all_true(n);
    if n == 0 {
        return flags;
    }
    let mut rep = 0;
    for i in 1..n {
        let s = d.get(rep);
        let cur = d.get(i);
        if is_proper_prefix(s, cur) || s == cur {
            flags.clear(i);
        } else {
            rep = i;
        }
    }
    flags
}

/// Flags the minimal itemsets of a canonical dataset: the prefix pass
/// followed by one backward-looking-free subset query per surviving itemset.
pub fn minimal_itemsets(d: &Dataset) -> (MinimalityFlags, RangeSearchStats) {
    assert!(d.is_canonical(), "minimal_itemsets requires a canonical dataset");
    assert!(d.len() < u32::MAX as usize);
    let n = d.len();
    let mut flags = prefix_subsume_pass(d);
    let mut stats = RangeSearchStats::default();
    for i in 0..n.saturating_sub(1) {
        if flags.get(i) {
            stats.subset_queries += 1;
            if contains_subset_of(d, QueryCursor::root(i + 1, n), d.get(i), &mut stats) {
                flags.clear(i);
            }
        }
    }
    (flags, stats)
}

/// Flags the maximal itemsets. Maximality is not on a fast path here, so
/// this delegates to the quadratic reference implementation.
pub fn maximal_itemsets(d: &Dataset) -> MinimalityFlags {
    oracle::naive_maximal(d)
}
