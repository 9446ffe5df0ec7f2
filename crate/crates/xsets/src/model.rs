//! Items, itemsets, and the flat dataset they are stored in.
//!
//! An itemset is a non-empty, strictly increasing sequence of `u32` item ids.
//! A dataset is a sequence of itemsets; most algorithms in this crate require
//! it in *canonical* form, meaning the itemsets are sorted lexicographically
//! (by item id, shorter prefix first).

use std::cmp::Ordering;
use std::fmt;

/// A single item id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
#[serde(transparent)]
pub struct Item(pub u32);

impl fmt::Display for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ItemsetError {
    #[error("itemset must contain at least one item")]
    Empty,
    #[error("items must be strictly increasing (violated at position {position})")]
    NotStrictlyIncreasing { position: usize },
}

/// An owned itemset: non-empty, strictly increasing items.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Itemset(Vec<Item>);

impl Itemset {
    /// Validates that `items` is non-empty and strictly increasing.
    pub fn new(items: Vec<Item>) -> Result<Self, ItemsetError> {
        if items.is_empty() {
            return Err(ItemsetError::Empty);
        }
        for (pos, pair) in items.windows(2).enumerate() {
            if pair[0] >= pair[1] {
                return Err(ItemsetError::NotStrictlyIncreasing { position: pos + 1 });
            }
        }
        Ok(Itemset(items))
    }

    /// Builds an itemset from arbitrary ids by sorting and deduplicating.
    /// Fails only when `ids` is empty.
    pub fn from_unsorted(mut ids: Vec<u32>) -> Result<Self, ItemsetError> {
        ids.sort_unstable();
        ids.dedup();
        if ids.is_empty() {
            return Err(ItemsetError::Empty);
        }
        Ok(Itemset(ids.into_iter().map(Item).collect()))
    }

    pub fn items(&self) -> &[Item] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false // by construction
    }
}

impl AsRef<[Item]> for Itemset {
    fn as_ref(&self) -> &[Item] {
        &self.0
    }
}

/// Compares two itemsets lexicographically by item id; a proper prefix sorts
/// before its extensions.
pub fn lex_compare(a: &[Item], b: &[Item]) -> Ordering {
    a.cmp(b)
}

/// True iff `a` is a proper subset of `b` (strict containment).
pub fn is_proper_subset(a: &[Item], b: &[Item]) -> bool {
    if a.len() >= b.len() {
        return false;
    }
    // Both sides are strictly increasing, so a linear merge suffices.
    let mut ib = 0;
    for &x in a {
        while ib < b.len() && b[ib] < x {
            ib += 1;
        }
        if ib == b.len() || b[ib] != x {
            return false;
        }
        ib += 1;
    }
    true
}

/// True iff `a` is a proper prefix of `b`.
pub fn is_proper_prefix(a: &[Item], b: &[Item]) -> bool {
    a.len() < b.len() && a == &b[..a.len()]
}

/// Length of the longest common prefix of `a` and `b`.
pub fn longest_common_prefix(a: &[Item], b: &[Item]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

/// A family of itemsets stored flat: `items` holds every itemset
/// back to back and `bounds[i]..bounds[i + 1]` delimits itemset `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    items: Vec<Item>,
    bounds: Vec<usize>,
    canonical: bool,
}

impl Dataset {
    pub fn empty() -> Self {
        Dataset { items: Vec::new(), bounds: vec![0], canonical: true }
    }

    /// Collects itemsets in the given order. The result is not marked
    /// canonical; see [`crate::io::canonicalize`] or [`Self::verify_canonical`].
    pub fn from_itemsets<I>(itemsets: I) -> Self
    where
        I: IntoIterator<Item = Itemset>,
    {
        let mut d = Dataset { items: Vec::new(), bounds: vec![0], canonical: false };
        for s in itemsets {
            d.push_row(s.items());
        }
        d
    }

    /// Appends a row without validation; callers must uphold the itemset
    /// invariants.
    pub(crate) fn push_row(&mut self, row: &[Item]) {
        debug_assert!(!row.is_empty());
        debug_assert!(row.windows(2).all(|w| w[0] < w[1]));
        self.items.extend_from_slice(row);
        self.bounds.push(self.items.len());
        self.canonical = false;
    }

    pub(crate) fn set_canonical(&mut self, value: bool) {
        self.canonical = value;
    }

    /// Number of itemsets.
    pub fn len(&self) -> usize {
        self.bounds.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Total number of stored items across all itemsets.
    pub fn total_items(&self) -> usize {
        self.items.len()
    }

    /// Itemset at position `i` (0-based).
    pub fn get(&self, i: usize) -> &[Item] {
        &self.items[self.bounds[i]..self.bounds[i + 1]]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Item]> + '_ {
        (0..self.len()).map(move |i| self.get(i))
    }

    /// Whether this dataset is known to be in canonical (lexicographic) order.
    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    /// Scans the rows and records whether they are lexicographically
    /// non-decreasing; returns the outcome.
    pub fn verify_canonical(&mut self) -> bool {
        let sorted = (1..self.len()).all(|i| lex_compare(self.get(i - 1), self.get(i)) != Ordering::Greater);
        self.canonical = sorted;
        sorted
    }
}
