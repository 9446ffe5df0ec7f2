//! Reading, writing, and canonicalizing datasets.
//!
//! Text format: one itemset per line, whitespace-separated decimal ids.
//! Blank lines and lines starting with `#` are skipped; ids on a line are
//! sorted and deduplicated during parsing.
//!
//! Binary format (little-endian): magic `XSET`, version `u32` = 1, itemset
//! count `u64`, then per itemset a `u32` length followed by that many `u32`
//! ids. Records must satisfy the itemset invariants.

use std::collections::HashMap;
use std::io::{BufRead, Read, Write};

use crate::model::{lex_compare, Dataset, Item, ItemsetError};

const MAGIC: &[u8; 4] = b"XSET";
const VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum ParseError {
    #[error("line {line}: invalid item id {token:?}")]
    InvalidItem { line: usize, token: String },
    #[error("bad magic bytes; expected \"XSET\"")]
    BadMagic,
    #[error("unsupported format version {0}")]
    UnsupportedVersion(u32),
    #[error("itemset count {0} exceeds the supported maximum")]
    TooManyItemsets(u64),
    #[error("truncated input while reading {0}")]
    Truncated(&'static str),
    #[error("record {index}: {source}")]
    InvalidRecord { index: u64, source: ItemsetError },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Parses the text format. Item ids must fit in 32 bits.
pub fn parse_text<R: BufRead>(reader: R) -> Result<Dataset, ParseError> {
    let mut d = Dataset::empty();
    d.set_canonical(false);
    let mut row: Vec<u32> = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        row.clear();
        for token in line.split_whitespace() {
            let id: u32 = token
                .parse()
                .map_err(|_| ParseError::InvalidItem { line: idx + 1, token: token.to_string() })?;
            row.push(id);
        }
        row.sort_unstable();
        row.dedup();
        // A line of only separators never reaches here, so `row` is non-empty.
        let items: Vec<Item> = row.iter().map(|&x| Item(x)).collect();
        d.push_row(&items);
    }
    Ok(d)
}

/// Writes the text format: one line per itemset, ids separated by spaces.
pub fn write_text<W: Write>(d: &Dataset, mut writer: W) -> std::io::Result<()> {
    let mut buf = String::new();
    for row in d.rows() {
        buf.clear();
        for (k, item) in row.iter().enumerate() {
            if k > 0 {
                buf.push(' ');
            }
            buf.push_str(&item.0.to_string());
        }
        buf.push('\n');
        writer.write_all(buf.as_bytes())?;
    }
    Ok(())
}

fn read_u32<R: Read>(r: &mut R, what: &'static str) -> Result<u32, ParseError> {
    let mut buf = [0u8; 4];
    r.read_exact(&mut buf).map_err(|_| ParseError::Truncated(what))?;
    Ok(u32::from_le_bytes(buf))
}

fn read_u64<R: Read>(r: &mut R, what: &'static str) -> Result<u64, ParseError> {
    let mut buf = [0u8; 8];
    r.read_exact(&mut buf).map_err(|_| ParseError::Truncated(what))?;
    Ok(u64::from_le_bytes(buf))
}

/// Parses the binary format, validating the itemset invariants per record.
pub fn parse_binary<R: Read>(mut reader: R) -> Result<Dataset, ParseError> {
    let mut magic = [0u8; 4];
    reader.read_exact(&mut magic).map_err(|_| ParseError::Truncated("magic"))?;
    if &magic != MAGIC {
        return Err(ParseError::BadMagic);
    }
    let version = read_u32(&mut reader, "version")?;
    if version != VERSION {
        return Err(ParseError::UnsupportedVersion(version));
    }
    let count = read_u64(&mut reader, "itemset count")?;
    // Engine bookkeeping stores positions as u32.
    if count >= u64::from(u32::MAX) {
        return Err(ParseError::TooManyItemsets(count));
    }
    let mut d = Dataset::empty();
    d.set_canonical(false);
    let mut row: Vec<Item> = Vec::new();
    for index in 0..count {
        let len = read_u32(&mut reader, "record length")?;
        if len == 0 {
            return Err(ParseError::InvalidRecord { index, source: ItemsetError::Empty });
        }
        row.clear();
        let mut buf = vec![0u8; len as usize * 4];
        reader.read_exact(&mut buf).map_err(|_| ParseError::Truncated("record items"))?;
        for chunk in buf.chunks_exact(4) {
            row.push(Item(u32::from_le_bytes(chunk.try_into().unwrap())));
        }
        for (pos, pair) in row.windows(2).enumerate() {
            if pair[0] >= pair[1] {
                return Err(ParseError::InvalidRecord {
                    index,
                    source: ItemsetError::NotStrictlyIncreasing { position: pos + 1 },
                });
            }
        }
        d.push_row(&row);
    }
    Ok(d)
}

/// Writes the binary format.
pub fn write_binary<W: Write>(d: &Dataset, mut writer: W) -> std::io::Result<()> {
    writer.write_all(MAGIC)?;
    writer.write_all(&VERSION.to_le_bytes())?;
    writer.write_all(&(d.len() as u64).to_le_bytes())?;
    for row in d.rows() {
        writer.write_all(&(row.len() as u32).to_le_bytes())?;
        for item in row {
            writer.write_all(&item.0.to_le_bytes())?;
        }
    }
    Ok(())
}

/// How item ids are renumbered during canonicalization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RemapMode {
    /// Keep ids as they are.
    None,
    /// Give the smallest new ids to the least frequent items. This shortens
    /// shared prefixes, which suits subset search.
    FrequencyAscending,
    /// Give the smallest new ids to the most frequent items, manufacturing
    /// long shared prefixes.
    FrequencyDescending,
}

/// The id permutation applied by [`canonicalize`]: a bijection over the ids
/// present in the input. An empty table means the identity.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct Remapping {
    pub mode: RemapMode,
    /// `(old id, new id)` pairs sorted by old id; empty for the identity.
    pub table: Vec<(u32, u32)>,
}

impl Remapping {
    pub fn apply(&self, item: Item) -> Item {
        match self.table.binary_search_by_key(&item.0, |&(old, _)| old) {
            Ok(k) => Item(self.table[k].1),
            Err(_) => item,
        }
    }

    /// The inverse permutation.
    pub fn invert(&self) -> Remapping {
        let mut table: Vec<(u32, u32)> = self.table.iter().map(|&(old, new)| (new, old)).collect();
        table.sort_unstable();
        Remapping { mode: self.mode, table }
    }
}

/// Renumbers items per `mode`, re-sorts each itemset, and sorts the itemsets
/// lexicographically (stable, so duplicates keep their input order). Returns
/// the canonical dataset and the permutation used.
///
/// Frequency is the number of itemsets an item occurs in, counted over the
/// input; ties are broken by ascending old id.
pub fn canonicalize(d: &Dataset, mode: RemapMode) -> (Dataset, Remapping) {
    let remapping = match mode {
        RemapMode::None => Remapping { mode, table: Vec::new() },
        RemapMode::FrequencyAscending | RemapMode::FrequencyDescending => {
            let mut counts: HashMap<u32, u64> = HashMap::new();
            for row in d.rows() {
                for item in row {
                    *counts.entry(item.0).or_insert(0) += 1;
                }
            }
            let mut order: Vec<(u64, u32)> = counts.iter().map(|(&id, &c)| (c, id)).collect();
            match mode {
                RemapMode::FrequencyAscending => order.sort_unstable_by_key(|&(c, id)| (c, id)),
                RemapMode::FrequencyDescending => {
                    order.sort_unstable_by_key(|&(c, id)| (std::cmp::Reverse(c), id))
                }
                RemapMode::None => unreachable!(),
            }
            let mut pool: Vec<u32> = counts.keys().copied().collect();
            pool.sort_unstable();
            let mut table: Vec<(u32, u32)> =
                order.iter().zip(&pool).map(|(&(_, old), &new)| (old, new)).collect();
            table.sort_unstable();
            Remapping { mode, table }
        }
    };

    let mut rows: Vec<Vec<Item>> = d
        .rows()
        .map(|row| {
            let mut mapped: Vec<Item> = row.iter().map(|&x| remapping.apply(x)).collect();
            mapped.sort_unstable();
            mapped
        })
        .collect();
    // Stable sort keeps duplicate itemsets adjacent in input order.
    rows.sort_by(|a, b| lex_compare(a, b));

    let mut out = Dataset::empty();
    for row in &rows {
        out.push_row(row);
    }
    out.set_canonical(true);
    (out, remapping)
}
