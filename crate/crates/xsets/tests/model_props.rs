//! Property tests for the ordering and containment primitives.

use std::cmp::Ordering;
use std::collections::HashSet;

use proptest::prelude::*;
use xsets::model::{
    is_proper_prefix, is_proper_subset, lex_compare, longest_common_prefix, Itemset,
};

fn itemset(max_id: u32, max_len: usize) -> impl Strategy<Value = Itemset> {
    proptest::collection::vec(1..=max_id, 1..=max_len)
        .prop_map(|ids| Itemset::from_unsorted(ids).unwrap())
}

proptest! {
    // A proper subset either shares its whole body with the front of the
    // superset or sorts after it; this is what lets a single forward scan
    // plus a prefix pass find every subsumption.
    #[test]
    fn subset_implies_prefix_or_sorts_after(a in itemset(12, 8), b in itemset(12, 8)) {
        if is_proper_subset(a.items(), b.items()) {
            prop_assert!(
                is_proper_prefix(a.items(), b.items())
                    || lex_compare(a.items(), b.items()) == Ordering::Greater
            );
        }
    }

    #[test]
    fn proper_subset_matches_hashset_containment(a in itemset(12, 8), b in itemset(12, 8)) {
        let sa: HashSet<u32> = a.items().iter().map(|i| i.0).collect();
        let sb: HashSet<u32> = b.items().iter().map(|i| i.0).collect();
        let expected = sa.is_subset(&sb) && sa != sb;
        prop_assert_eq!(is_proper_subset(a.items(), b.items()), expected);
    }

    #[test]
    fn lex_compare_is_a_total_order(
        a in itemset(6, 5),
        b in itemset(6, 5),
        c in itemset(6, 5),
    ) {
        prop_assert_eq!(lex_compare(a.items(), b.items()), lex_compare(b.items(), a.items()).reverse());
        prop_assert_eq!(lex_compare(a.items(), b.items()) == Ordering::Equal, a == b);
        if lex_compare(a.items(), b.items()) != Ordering::Greater
            && lex_compare(b.items(), c.items()) != Ordering::Greater
        {
            prop_assert_ne!(lex_compare(a.items(), c.items()), Ordering::Greater);
        }
    }

    #[test]
    fn proper_prefixes_sort_before_their_extensions(a in itemset(12, 8), b in itemset(12, 8)) {
        if is_proper_prefix(a.items(), b.items()) {
            prop_assert_eq!(lex_compare(a.items(), b.items()), Ordering::Less);
            prop_assert!(is_proper_subset(a.items(), b.items()));
        }
    }

    #[test]
    fn lcp_is_the_longest_equal_leading_run(a in itemset(12, 8), b in itemset(12, 8)) {
        let p = longest_common_prefix(a.items(), b.items());
        prop_assert_eq!(&a.items()[..p], &b.items()[..p]);
        if p < a.len() && p < b.len() {
            prop_assert_ne!(a.items()[p], b.items()[p]);
        }
    }

    // For ordered triples the common prefix with the far itemset is exactly
    // the shortest of the adjacent ones. Graph reuse across successive
    // queries leans on this: once a node reads past the prefix shared with
    // the next query, no later query can revalidate it.
    #[test]
    fn lcp_of_ordered_triples_is_the_min_of_adjacent_lcps(
        mut v in proptest::collection::vec(itemset(8, 6), 3),
    ) {
        v.sort_by(|x, y| lex_compare(x.items(), y.items()));
        let (a, b, c) = (&v[0], &v[1], &v[2]);
        prop_assert_eq!(
            longest_common_prefix(a.items(), c.items()),
            longest_common_prefix(a.items(), b.items())
                .min(longest_common_prefix(b.items(), c.items()))
        );
    }
}
