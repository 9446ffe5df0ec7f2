//! Helpers shared by the integration tests.

#![allow(dead_code)]

use rand::prelude::*;
use rand::seq::index;
use rand_chacha::ChaCha12Rng;
use xsets::generator::inject_mixed;
use xsets::io::{canonicalize, RemapMode};
use xsets::memo::CallNode;
use xsets::model::{Dataset, Itemset};

/// A random canonical dataset with duplicate and proper-prefix rows mixed in.
/// Uniform draws alone almost never produce subset relations, so the
/// injections are what make differential runs meaningful.
pub fn random_canonical(seed: u64, max_n: usize, alphabet: u32) -> Dataset {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let n = rng.random_range(0..=max_n);
    let max_len = (alphabet as usize).min(8);
    let mut rows: Vec<Itemset> = Vec::with_capacity(n);
    for _ in 0..n {
        let len = rng.random_range(1..=max_len);
        let ids: Vec<u32> =
            index::sample(&mut rng, alphabet as usize, len).iter().map(|x| x as u32 + 1).collect();
        rows.push(Itemset::from_unsorted(ids).unwrap());
    }
    let base = canonicalize(&Dataset::from_itemsets(rows), RemapMode::None).0;
    let dup_rate = rng.random_range(0.0..0.4);
    let prefix_rate = rng.random_range(0.0..0.4);
    inject_mixed(&base, rng.random(), dup_rate, prefix_rate)
}

/// A random canonical dataset whose rows all have `width` items, so no row
/// is a proper subset of another and every subset query returns false.
pub fn random_antichain(seed: u64, max_n: usize, alphabet: u32, width: usize) -> Dataset {
    assert!(width <= alphabet as usize);
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let n = rng.random_range(0..=max_n);
    let rows: Vec<Itemset> = (0..n)
        .map(|_| {
            let ids: Vec<u32> = index::sample(&mut rng, alphabet as usize, width)
                .iter()
                .map(|x| x as u32 + 1)
                .collect();
            Itemset::from_unsorted(ids).unwrap()
        })
        .collect();
    canonicalize(&Dataset::from_itemsets(rows), RemapMode::None).0
}

/// Rows as plain id vectors, for multiset comparisons.
pub fn id_rows(d: &Dataset) -> Vec<Vec<u32>> {
    d.rows().map(|row| row.iter().map(|item| item.0).collect()).collect()
}

/// A call graph reduced to its entry labels, keeping only nodes whose query
/// position lies below `p`. Children inherit a position at least as large as
/// their parent, so pruning at the first offending node yields exactly the
/// induced subgraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Shape {
    pub b: u32,
    pub e: u32,
    pub j: u32,
    pub d: u32,
    pub c1: Option<Box<Shape>>,
    pub c2: Option<Box<Shape>>,
}

pub fn restrict(node: Option<&CallNode>, p: u32) -> Option<Box<Shape>> {
    let n = node?;
    if n.j >= p {
        return None;
    }
    Some(Box::new(Shape {
        b: n.b,
        e: n.e,
        j: n.j,
        d: n.d,
        c1: restrict(n.c1.as_deref(), p),
        c2: restrict(n.c2.as_deref(), p),
    }))
}
