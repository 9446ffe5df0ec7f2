//! Acceptance suite: one test per numbered criterion, each printing a
//! single PASS/FAIL line (visible with `--nocapture`).
//!
//! Run with:
//!
//! ```text
//! cargo test -p xsets --test acceptance -- --nocapture --test-threads=1
//! ```

mod common;

use std::time::Instant;

use rand::prelude::*;
use rand_chacha::ChaCha12Rng;
use xsets::generator::{generate, GeneratorConfig};
use xsets::lex;
use xsets::memo::{self, ReusePolicy};
use xsets::model::{is_proper_prefix, longest_common_prefix, Dataset, Item, Itemset};
use xsets::oracle;
use xsets::parallel;
use xsets::{QueryCursor, RemapMode};

fn verdict(number: u32, name: &str, pass: bool, detail: &str) {
    println!("criterion {number} [{}] {name}: {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {number} ({name}): {detail}");
}

fn canon(rows: &[&[u32]]) -> Dataset {
    let itemsets =
        rows.iter().map(|r| Itemset::new(r.iter().map(|&x| Item(x)).collect()).unwrap());
    xsets::canonicalize(&Dataset::from_itemsets(itemsets), RemapMode::None).0
}

// Criterion 1: on {abc, abde, abdf, bd, c} with a..f as 1..6, every engine
// returns exactly {bd, c}, in milliseconds.
#[test]
fn c1_worked_example_all_engines() {
    let started = Instant::now();
    let d = canon(&[&[1, 2, 3], &[1, 2, 4, 5], &[1, 2, 4, 6], &[2, 4], &[3]]);
    let expected = oracle::MinimalityFlags::from_vec(vec![false, false, false, true, true]);

    let mut disagreements = Vec::new();
    if oracle::naive_minimal(&d) != expected {
        disagreements.push("naive");
    }
    if lex::minimal_itemsets(&d).0 != expected {
        disagreements.push("lex");
    }
    if memo::minimal_itemsets(&d).0 != expected {
        disagreements.push("memo/discard");
    }
    if memo::minimal_itemsets_with_policy(&d, ReusePolicy::FrontierResume).0 != expected {
        disagreements.push("memo/frontier-resume");
    }
    for workers in [1, 4] {
        if parallel::minimal_itemsets(&d, workers).unwrap().0 != expected {
            disagreements.push("parallel");
        }
    }
    let retained: Vec<String> = expected
        .retained_positions()
        .map(|i| d.get(i).iter().map(|x| x.0.to_string()).collect::<Vec<_>>().join(" "))
        .collect();
    let elapsed = started.elapsed();
    verdict(
        1,
        "worked example",
        disagreements.is_empty(),
        &format!(
            "minimal = [{}] from every engine in {:.1?}{}",
            retained.join(", "),
            elapsed,
            if disagreements.is_empty() {
                String::new()
            } else {
                format!("; disagreeing engines: {disagreements:?}")
            }
        ),
    );
}

// Criterion 2: 1000 random canonical datasets (n <= 200, alphabet <= 12,
// duplicate/prefix injections); all four engines equal the quadratic
// reference, zero tolerance, under a minute.
#[test]
fn c2_oracle_differential_across_engines() {
    let started = Instant::now();
    let mut checked = 0u32;
    let mut first_failure: Option<String> = None;
    for seed in 10_000..11_000u64 {
        let d = common::random_canonical(seed, 200, 12);
        let expected = oracle::naive_minimal(&d);
        let workers = [1, 2, 4, 8][seed as usize % 4];
        let runs: [(&str, oracle::MinimalityFlags); 4] = [
            ("lex", lex::minimal_itemsets(&d).0),
            ("memo/discard", memo::minimal_itemsets(&d).0),
            (
                "memo/frontier-resume",
                memo::minimal_itemsets_with_policy(&d, ReusePolicy::FrontierResume).0,
            ),
            ("parallel", parallel::minimal_itemsets(&d, workers).unwrap().0),
        ];
        for (engine, flags) in &runs {
            if flags != &expected && first_failure.is_none() {
                first_failure = Some(format!("seed {seed}, engine {engine}"));
            }
        }
        checked += 1;
    }
    let elapsed = started.elapsed();
    let pass = first_failure.is_none() && checked >= 1000 && elapsed.as_secs() < 60;
    verdict(
        2,
        "oracle differential",
        pass,
        &format!(
            "{checked} datasets x 4 engines in {:.1?}{}",
            elapsed,
            first_failure.map(|f| format!("; first disagreement: {f}")).unwrap_or_default()
        ),
    );
}

// Criterion 3: for queries sharing a prefix, full traces restricted to
// positions below the shared length are node-and-edge identical with equal
// (b, e, j, d) labels. Zero tolerance.
#[test]
fn c3_full_traces_restricted_to_the_shared_prefix() {
    let mut rng = ChaCha12Rng::seed_from_u64(314);
    let mut compared = 0u32;
    let mut nonempty = 0u32;
    let mut first_failure: Option<String> = None;
    let mut case = 0u64;
    while compared < 120 {
        case += 1;
        let d = common::random_canonical(2000 + case, 80, 10);
        if d.is_empty() {
            continue;
        }
        let cursor = QueryCursor::root(0, d.len());
        let (s, t) = if case.is_multiple_of(2) {
            // Synthetic pair with a controlled shared prefix.
            let len = rng.random_range(1..=4usize);
            let mut prefix: Vec<u32> =
                rand::seq::index::sample(&mut rng, 9, len).iter().map(|x| x as u32 + 1).collect();
            prefix.sort_unstable();
            let base = *prefix.last().unwrap();
            let s: Vec<Item> = prefix.iter().chain([&(base + 1)]).map(|&x| Item(x)).collect();
            let t: Vec<Item> =
                prefix.iter().chain([&(base + 2), &(base + 4)]).map(|&x| Item(x)).collect();
            (s, t)
        } else {
            // A pair of adjacent surviving rows, as the engine would query.
            let survivors = lex::prefix_subsume_pass(&d);
            let mut rows =
                (0..d.len()).filter(|&i| survivors.get(i)).map(|i| d.get(i).to_vec());
            match (rows.next(), rows.next()) {
                (Some(a), Some(b)) => (a, b),
                _ => continue,
            }
        };
        let p = longest_common_prefix(&s, &t) as u32;
        let gs = memo::trace_full(&d, cursor, &s);
        let gt = memo::trace_full(&d, cursor, &t);
        let rs = common::restrict(Some(&*gs), p);
        let rt = common::restrict(Some(&*gt), p);
        if rs != rt && first_failure.is_none() {
            first_failure = Some(format!("case {case} (shared length {p})"));
        }
        compared += 1;
        if rs.is_some() {
            nonempty += 1;
        }
    }
    let pass = first_failure.is_none() && compared >= 100 && nonempty >= 50;
    verdict(
        3,
        "restricted full traces",
        pass,
        &format!(
            "{compared} query pairs, {nonempty} with a nonempty restriction{}",
            first_failure.map(|f| format!("; first mismatch: {f}")).unwrap_or_default()
        ),
    );
}

// Criterion 4: on generated data (100000 slots, alphabet 140, fixed seed)
// the ratio of lex to memo range-search calls is >= 1 everywhere, strictly
// increasing over the frequency grid, and >= 5 at 0.95. Counts cover all
// three search subroutines.
#[test]
fn c4_range_search_reduction_trend() {
    let grid = [0.5, 0.7, 0.9, 0.95];
    let mut ratios = Vec::new();
    let mut details = Vec::new();
    let mut flag_mismatch = false;
    for &fmin in &grid {
        let started = Instant::now();
        let cfg = GeneratorConfig { itemsets: 100_000, alphabet: 140, min_frequency: fmin, seed: 9 };
        let d = generate(&cfg).unwrap().dataset;
        let (lex_flags, lex_stats) = lex::minimal_itemsets(&d);
        let (memo_flags, memo_stats) =
            memo::minimal_itemsets_with_policy(&d, ReusePolicy::FrontierResume);
        flag_mismatch |= lex_flags != memo_flags;
        let ratio =
            lex_stats.total_search_calls() as f64 / memo_stats.total_search_calls() as f64;
        ratios.push(ratio);
        details.push(format!(
            "f={fmin}: {}/{} = {ratio:.2} ({:.0?})",
            lex_stats.total_search_calls(),
            memo_stats.total_search_calls(),
            started.elapsed()
        ));
    }
    let all_ge_one = ratios.iter().all(|&r| r >= 1.0);
    let increasing = ratios.windows(2).all(|w| w[1] > w[0]);
    let last_ge_five = *ratios.last().unwrap() >= 5.0;
    let pass = all_ge_one && increasing && last_ge_five && !flag_mismatch;
    verdict(
        4,
        "range-search reduction trend",
        pass,
        &format!(
            "{}{}",
            details.join("; "),
            if flag_mismatch { "; engines disagreed on flags" } else { "" }
        ),
    );
}

// Criterion 5: flags are identical for 1, 2, 4 and 8 workers on fuzzed
// inputs (zero tolerance). The wall-clock speedup benchmark is informational
// and needs at least four cores.
#[test]
fn c5_parallel_equivalence_and_scaling() {
    let mut first_failure: Option<String> = None;
    let mut checked = 0u32;
    for seed in 3000..3100u64 {
        let d = common::random_canonical(seed, 150, 10);
        let (expected, _) = lex::minimal_itemsets(&d);
        for workers in [1, 2, 4, 8] {
            let (flags, _) = parallel::minimal_itemsets(&d, workers).unwrap();
            if flags != expected && first_failure.is_none() {
                first_failure = Some(format!("seed {seed}, {workers} workers"));
            }
        }
        checked += 1;
    }
    let equivalence_ok = first_failure.is_none();

    let cores = std::thread::available_parallelism().map(|c| c.get()).unwrap_or(1);
    let scaling_note = if cores >= 4 {
        let cfg =
            GeneratorConfig { itemsets: 1_000_000, alphabet: 100, min_frequency: 0.7, seed: 9 };
        let d = generate(&cfg).unwrap().dataset;
        let t1 = Instant::now();
        let (f1, _) = parallel::minimal_itemsets(&d, 1).unwrap();
        let t1 = t1.elapsed();
        let t4 = Instant::now();
        let (f4, _) = parallel::minimal_itemsets(&d, 4).unwrap();
        let t4 = t4.elapsed();
        assert_eq!(f1, f4);
        let speedup = t1.as_secs_f64() / t4.as_secs_f64();
        format!("speedup P=4 over P=1: {speedup:.2}x ({t1:.0?} vs {t4:.0?})")
    } else {
        format!("speedup benchmark skipped: {cores} available core(s) < 4")
    };
    verdict(
        5,
        "parallel equivalence",
        equivalence_ok && checked >= 100,
        &format!(
            "{checked} fuzzed datasets x workers {{1,2,4,8}}{}; {scaling_note}",
            first_failure.map(|f| format!("; first disagreement: {f}")).unwrap_or_default()
        ),
    );
}

// Criterion 6: the prefix pass clears exactly the positions with an earlier
// proper prefix or an earlier duplicate, on 500 random datasets.
#[test]
fn c6_prefix_pass_equals_brute_force() {
    let mut first_failure: Option<String> = None;
    let mut checked = 0u32;
    for seed in 4000..4500u64 {
        let d = common::random_canonical(seed, 120, 9);
        let got = lex::prefix_subsume_pass(&d);
        let n = d.len();
        for i in 0..n {
            let subsumed = (0..i).any(|j| {
                is_proper_prefix(d.get(j), d.get(i)) || d.get(j) == d.get(i)
            });
            if got.get(i) != !subsumed && first_failure.is_none() {
                first_failure = Some(format!("seed {seed}, position {i}"));
            }
        }
        checked += 1;
    }
    verdict(
        6,
        "prefix pass vs brute force",
        first_failure.is_none() && checked >= 500,
        &format!(
            "{checked} datasets{}",
            first_failure.map(|f| format!("; first mismatch: {f}")).unwrap_or_default()
        ),
    );
}

// Criterion 7: binary write / parse / rewrite is byte-identical on 100
// random datasets.
#[test]
fn c7_binary_roundtrip_bytes() {
    let mut first_failure: Option<String> = None;
    let mut checked = 0u32;
    for seed in 5000..5100u64 {
        let d = common::random_canonical(seed, 150, 10);
        let mut bytes = Vec::new();
        xsets::io::write_binary(&d, &mut bytes).unwrap();
        let parsed = xsets::io::parse_binary(std::io::Cursor::new(&bytes)).unwrap();
        let mut again = Vec::new();
        xsets::io::write_binary(&parsed, &mut again).unwrap();
        if !(parsed.rows().eq(d.rows()) && bytes == again) && first_failure.is_none() {
            first_failure = Some(format!("seed {seed}"));
        }
        checked += 1;
    }
    verdict(
        7,
        "binary round-trip",
        first_failure.is_none() && checked >= 100,
        &format!(
            "{checked} datasets byte-compared{}",
            first_failure.map(|f| format!("; first mismatch: {f}")).unwrap_or_default()
        ),
    );
}
