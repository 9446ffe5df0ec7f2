//! Work-sharing parallel minimality engine.
//!
//! The prefix pass is a single linear scan and runs sequentially; the
//! per-itemset subset queries are then handed out to worker threads through
//! an atomic position dispenser. Query `i` reads only the dataset and
//! writes only `flags[i]`, and each position is dispensed to exactly one
//! worker, so workers share nothing but the dispenser. Flags and search
//! statistics come out identical to the sequential engine for every worker
//! count.

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};

use crate::lex::{self, QueryCursor, RangeSearchStats};
use crate::model::Dataset;
use crate::oracle::MinimalityFlags;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum ParallelError {
    #[error("worker count must be at least 1")]
    ZeroWorkers,
}

/// Flags the minimal itemsets of a canonical dataset using `workers`
/// threads. Output and statistics match [`lex::minimal_itemsets`] exactly.
pub fn minimal_itemsets(
    d: &Dataset,
    workers: usize,
) -> Result<(MinimalityFlags, RangeSearchStats), ParallelError> {
    if workers == 0 {
        return Err(ParallelError::ZeroWorkers);
    }
    assert!(d.is_canonical(), "minimal_itemsets requires a canonical dataset");
    assert!(d.len() < u32::MAX as usize);
    let n = d.len();
    let seed = lex::prefix_subsume_pass(d);
    let mut stats = RangeSearchStats::default();
    if n < 2 {
        return Ok((seed, stats));
    }

    let flags: Vec<AtomicBool> = seed.as_slice().iter().map(|&b| AtomicBool::new(b)).collect();
    let dispenser = AtomicUsize::new(0);
    // The last itemset has an empty search range and is never queried.
    let last = n - 1;

    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|_| {
                scope.spawn(|| {
                    let mut local = RangeSearchStats::default();
                    loop {
                        let i = dispenser.fetch_add(1, Ordering::Relaxed);
                        if i >= last {
                            break;
                        }
                        if !flags[i].load(Ordering::Relaxed) {
                            continue;
                        }
                        local.subset_queries += 1;
                        if lex::contains_subset_of(d, QueryCursor::root(i + 1, n), d.get(i), &mut local) {
                            flags[i].store(false, Ordering::Relaxed);
                        }
                    }
                    local
                })
            })
            .collect();
        for h in handles {
            stats.merge(&h.join().expect("worker panicked"));
        }
    });

    let out = flags.into_iter().map(AtomicBool::into_inner).collect();
    Ok((MinimalityFlags::from_vec(out), stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::{canonicalize, RemapMode};
    use crate::model::{Item, Itemset};
    use crate::oracle;

    fn canon(rows: &[&[u32]]) -> Dataset {
        let d = Dataset::from_itemsets(
            rows.iter().map(|r| Itemset::new(r.iter().map(|&x| Item(x)).collect()).unwrap()),
        );
        canonicalize(&d, RemapMode::None).0
    }

    #[test]
    fn zero_workers_is_an_error() {
        let d = canon(&[&[1]]);
        assert_eq!(minimal_itemsets(&d, 0), Err(ParallelError::ZeroWorkers));
    }

    #[test]
    fn matches_sequential_for_every_worker_count() {
        let cases: Vec<Vec<&[u32]>> = vec![
            vec![&[1, 2, 3], &[1, 2, 4, 5], &[1, 2, 4, 6], &[2, 4], &[3]],
            vec![&[1], &[1, 2], &[1, 2, 3], &[2], &[2, 3]],
            vec![&[1, 2], &[1, 2], &[3, 4]],
            vec![&[7]],
            vec![],
            vec![&[1, 3, 5], &[1, 3, 6], &[1, 4, 5], &[2, 3, 5], &[3, 5]],
        ];
        for rows in cases {
            let d = canon(&rows);
            let (seq_flags, seq_stats) = lex::minimal_itemsets(&d);
            for workers in 1..=8 {
                let (flags, stats) = minimal_itemsets(&d, workers).unwrap();
                assert_eq!(flags, seq_flags, "workers={workers} rows={rows:?}");
                assert_eq!(stats, seq_stats, "workers={workers} rows={rows:?}");
            }
        }
    }

    #[test]
    fn agrees_with_the_oracle() {
        let d = canon(&[&[2, 3], &[1, 2, 3, 4], &[2, 3, 5], &[1, 4], &[1, 4], &[5]]);
        let (flags, _) = minimal_itemsets(&d, 3).unwrap();
        assert_eq!(flags, oracle::naive_minimal(&d));
    }

    #[test]
    fn more_workers_than_itemsets_is_fine() {
        let d = canon(&[&[1, 2], &[2, 3]]);
        let (flags, _) = minimal_itemsets(&d, 32).unwrap();
        assert_eq!(flags, oracle::naive_minimal(&d));
    }
}
