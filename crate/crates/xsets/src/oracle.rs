//! Quadratic reference implementations of minimality and maximality.
//!
//! These are deliberately simple pairwise scans used as the ground truth for
//! testing the fast engines, and as the backing implementation for maximal
//! itemsets, which are not on any fast path here.

use crate::model::{is_proper_subset, Dataset};

/// One retain/discard flag per itemset position. `true` means the itemset at
/// that position is kept (minimal or maximal depending on the producing
/// operation); among duplicates only the first occurrence is kept.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimalityFlags(Vec<bool>);

impl MinimalityFlags {
    pub fn all_true(n: usize) -> Self {
        MinimalityFlags(vec![true; n])
    }

    pub fn from_vec(v: Vec<bool>) -> Self {
        MinimalityFlags(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn clear(&mut self, i: usize) {
        self.0[i] = false;
    }

    pub fn count_retained(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    pub fn retained_positions(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i)
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.0
    }
}

/// Flags the minimal itemsets: position `i` is cleared iff some other itemset
/// is a proper subset of `d[i]`, or an identical itemset occurs earlier.
pub fn naive_minimal(d: &Dataset) -> MinimalityFlags {
    assert!(d.is_canonical(), "naive_minimal requires a canonical dataset");
    let n = d.len();
    let mut flags = MinimalityFlags::all_true(n);
    for i in 0..n {
        let cur = d.get(i);
        for j in 0..n {
            if j == i {
                continue;
            }
            let other = d.get(j);
            if is_proper_subset(other, cur) || (j < i && other == cur) {
                flags.clear(i);
                break;
            }
        }
    }
    flags
}

/// Flags the maximal itemsets: position `i` is cleared iff `d[i]` is a proper
/// subset of some other itemset, or an identical itemset occurs earlier.
pub fn naive_maximal(d: &Dataset) -> MinimalityFlags {
    assert!(d.is_canonical(), "naive_maximal requires a canonical dataset");
    let n = d.len();
    let mut flags = MinimalityFlags::all_true(n);
    for i in 0..n {
        let cur = d.get(i);
        for j in 0..n {
            if j == i {
                continue;
            }
            let other = d.get(j);
            if is_proper_subset(cur, other) || (j < i && other == cur) {
                flags.clear(i);
                break;
            }
        }
    }
    flags
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::{canonicalize, RemapMode};
    use crate::model::{Item, Itemset};

    fn canon(rows: &[&[u32]]) -> Dataset {
        let d = Dataset::from_itemsets(
            rows.iter().map(|r| Itemset::new(r.iter().map(|&x| Item(x)).collect()).unwrap()),
        );
        canonicalize(&d, RemapMode::None).0
    }

    // The worked family used throughout: abc, abde, abdf, bd, c with a..f = 1..6.
    fn worked_example() -> Dataset {
        canon(&[&[1, 2, 3], &[1, 2, 4, 5], &[1, 2, 4, 6], &[2, 4], &[3]])
    }

    #[test]
    fn worked_example_minimal() {
        let d = worked_example();
        let flags = naive_minimal(&d);
        // bd and c survive: c ⊂ abc, bd ⊂ abde, bd ⊂ abdf.
        assert_eq!(flags.as_slice(), &[false, false, false, true, true]);
    }

    #[test]
    fn worked_example_maximal() {
        let d = worked_example();
        let flags = naive_maximal(&d);
        assert_eq!(flags.as_slice(), &[true, true, true, false, false]);
    }

    #[test]
    fn duplicates_keep_first_occurrence() {
        let d = canon(&[&[2, 4], &[2, 4], &[2, 4]]);
        assert_eq!(naive_minimal(&d).as_slice(), &[true, false, false]);
        assert_eq!(naive_maximal(&d).as_slice(), &[true, false, false]);
    }

    #[test]
    fn antichain_keeps_everything() {
        // pairwise incomparable sets
        let d = canon(&[&[1, 2], &[1, 3], &[2, 3]]);
        assert_eq!(naive_minimal(&d).as_slice(), &[true, true, true]);
        assert_eq!(naive_maximal(&d).as_slice(), &[true, true, true]);
    }

    #[test]
    fn chain_keeps_opposite_ends() {
        let d = canon(&[&[1], &[1, 2], &[1, 2, 3]]);
        assert_eq!(naive_minimal(&d).as_slice(), &[true, false, false]);
        assert_eq!(naive_maximal(&d).as_slice(), &[false, false, true]);
    }

    #[test]
    fn empty_and_singleton() {
        let d = canon(&[]);
        assert_eq!(naive_minimal(&d).len(), 0);
        let d = canon(&[&[7]]);
        assert_eq!(naive_minimal(&d).as_slice(), &[true]);
        assert_eq!(naive_maximal(&d).as_slice(), &[true]);
    }
}
