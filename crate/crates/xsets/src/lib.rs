//! Identify the minimal (and maximal) itemsets of a family of integer sets.
//!
//! A dataset is a list of itemsets, each a strictly increasing sequence of
//! `u32` ids, held in canonical (lexicographic) order. An itemset is minimal
//! when no other itemset in the family is a proper subset of it. Four
//! engines compute the same minimality flags:
//!
//! * [`oracle::naive_minimal`]: quadratic pairwise reference,
//! * [`lex::minimal_itemsets`]: binary range searches over the sorted
//!   family, one subset query per candidate,
//! * [`memo::minimal_itemsets`]: the same queries with call graphs reused
//!   across consecutive candidates sharing a prefix,
//! * [`parallel::minimal_itemsets`]: the plain queries spread over worker
//!   threads.
//!
//! All engines count their range searches in [`lex::RangeSearchStats`], so
//! their work can be compared independently of wall time. [`generator`]
//! produces synthetic datasets whose density is steered by a per-item
//! minimum frequency; [`io`] reads and writes text and binary datasets and
//! canonicalizes them.

pub mod generator;
pub mod io;
pub mod lex;
pub mod memo;
pub mod model;
pub mod oracle;
pub mod parallel;

pub use io::{canonicalize, RemapMode, Remapping};
pub use lex::{QueryCursor, RangeSearchStats};
pub use model::{Dataset, Item, Itemset};
pub use oracle::MinimalityFlags;
