//! Synthetic dataset generation with per-item frequency control.
//!
//! Every item of the alphabet is assigned a frequency drawn uniformly from
//! `[min_frequency, 1]` and placed into that fraction of the itemset slots,
//! chosen uniformly without replacement. High minimum frequencies make
//! dense datasets whose rows share long prefixes; low ones make sparse,
//! irregular rows. Slots left empty are dropped. The output is in canonical
//! order with the original item ids.

use rand::seq::index::sample;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::io::{canonicalize, RemapMode};
use crate::model::{Dataset, Item};

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum GeneratorError {
    #[error("alphabet must contain at least one item")]
    EmptyAlphabet,
    #[error("min_frequency must lie in [0, 1]")]
    FrequencyOutOfRange,
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct GeneratorConfig {
    /// Number of itemset slots drawn; empty slots are dropped, so the output
    /// can be shorter.
    pub itemsets: usize,
    /// Items are the ids `1..=alphabet`.
    pub alphabet: u32,
    /// Lower bound of the per-item frequency draw.
    pub min_frequency: f64,
    pub seed: u64,
}

impl GeneratorConfig {
    pub fn validate(&self) -> Result<(), GeneratorError> {
        if self.alphabet == 0 {
            return Err(GeneratorError::EmptyAlphabet);
        }
        if !(0.0..=1.0).contains(&self.min_frequency) {
            return Err(GeneratorError::FrequencyOutOfRange);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ItemStats {
    pub id: u32,
    /// The drawn frequency.
    pub frequency: f64,
    /// `floor(frequency * itemsets)`: the exact number of rows the item
    /// occurs in (dropped slots are empty, so no occurrence is ever lost).
    pub occurrences: usize,
}

#[derive(Debug, Clone)]
pub struct GeneratedDataset {
    pub dataset: Dataset,
    pub dropped_empty_slots: usize,
    pub item_stats: Vec<ItemStats>,
}

pub fn generate(config: &GeneratorConfig) -> Result<GeneratedDataset, GeneratorError> {
    config.validate()?;
    let n = config.itemsets;
    let mut rng = ChaCha12Rng::seed_from_u64(config.seed);

    let mut item_stats = Vec::with_capacity(config.alphabet as usize);
    for id in 1..=config.alphabet {
        let frequency = rng.random_range(config.min_frequency..=1.0);
        let occurrences = (frequency * n as f64).floor() as usize;
        item_stats.push(ItemStats { id, frequency, occurrences });
    }

    // Two passes over identical index draws: the first sizes each slot, the
    // second fills them. Ascending ids keep every row sorted as it fills.
    let mut fill_rng = rng.clone();
    let mut counts = vec![0usize; n];
    for st in &item_stats {
        for slot in sample(&mut rng, n, st.occurrences) {
            counts[slot] += 1;
        }
    }

    let mut offsets = Vec::with_capacity(n + 1);
    offsets.push(0usize);
    for &c in &counts {
        offsets.push(offsets.last().unwrap() + c);
    }
    let mut buf = vec![Item(0); *offsets.last().unwrap()];
    let mut cursors = offsets[..n].to_vec();
    for st in &item_stats {
        for slot in sample(&mut fill_rng, n, st.occurrences) {
            buf[cursors[slot]] = Item(st.id);
            cursors[slot] += 1;
        }
    }

    let mut raw = Dataset::empty();
    let mut dropped = 0usize;
    for slot in 0..n {
        let row = &buf[offsets[slot]..offsets[slot + 1]];
        if row.is_empty() {
            dropped += 1;
        } else {
            raw.push_row(row);
        }
    }
    let (dataset, _) = canonicalize(&raw, RemapMode::None);
    Ok(GeneratedDataset { dataset, dropped_empty_slots: dropped, item_stats })
}

/// Derives a noisier dataset by appending duplicates and proper prefixes of
/// randomly chosen rows, then re-sorting. Uniform random draws almost never
/// produce subset relations, so tests use this to manufacture them. Rates
/// must lie in `[0, 1]`.
pub fn inject_mixed(d: &Dataset, seed: u64, dup_rate: f64, prefix_rate: f64) -> Dataset {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut raw = Dataset::empty();
    for row in d.rows() {
        raw.push_row(row);
    }
    for i in 0..d.len() {
        let row = d.get(i);
        if rng.random_bool(dup_rate) {
            raw.push_row(row);
        }
        if row.len() > 1 && rng.random_bool(prefix_rate) {
            let cut = rng.random_range(1..row.len());
            raw.push_row(&row[..cut]);
        }
    }
    canonicalize(&raw, RemapMode::None).0
}
