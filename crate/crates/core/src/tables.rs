//! Published twin-prime census tables and the bracketing argument that turns
//! them into an enclosure of `B(x)` far beyond sieving range.
//!
//! A table line reads `<k>d<n>  <pi2>  <prediction>`: `pi2` pairs below
//! `k * 10^n`, followed by a heuristic estimate that never enters a bound.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::sieve::TwinCensus;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusTableEntry {
    pub k: u64,
    pub exponent: u32,
    pub threshold: u64,
    pub pi2: u64,
    /// Third column as written, kept for diagnostics and re-serialization.
    pub prediction: String,
}

impl CensusTableEntry {
    pub fn new(k: u64, exponent: u32, pi2: u64, prediction: impl Into<String>) -> Result<Self> {
        let threshold = threshold_of(k, exponent).ok_or_else(|| Error::Parse {
            line: 0,
            message: format!("threshold {k}d{exponent} out of range"),
        })?;
        Ok(CensusTableEntry { k, exponent, threshold, pi2, prediction: prediction.into() })
    }

    pub fn prediction_value(&self) -> Option<f64> {
        self.prediction.trim_end_matches("...").parse().ok()
    }

    pub fn label(&self) -> String {
        format!("{}d{}", self.k, self.exponent)
    }
}

fn threshold_of(k: u64, exponent: u32) -> Option<u64> {
    10u64.checked_pow(exponent).and_then(|p| k.checked_mul(p)).filter(|&t| t > 0)
}

fn parse_label(s: &str) -> Option<(u64, u32)> {
    let (k, n) = s.split_once('d')?;
    let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
    if !digits(k) || !digits(n) {
        return None;
    }
    Some((k.parse().ok()?, n.parse().ok()?))
}

/// Parse a census table. Blank lines and `#` comments are skipped.
pub fn parse_table(text: &str) -> Result<Vec<CensusTableEntry>> {
    let mut out: Vec<CensusTableEntry> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse { line, message };
        let cols: Vec<&str> = body.split_whitespace().collect();
        if cols.len() != 3 {
            return Err(err(format!("expected 3 columns, found {}", cols.len())));
        }
        let (k, exponent) =
            parse_label(cols[0]).ok_or_else(|| err(format!("bad threshold {:?}, expected <k>d<n>", cols[0])))?;
        let threshold =
            threshold_of(k, exponent).ok_or_else(|| err(format!("threshold {:?} out of range", cols[0])))?;
        let pi2: u64 = cols[1].parse().map_err(|_| err(format!("bad count {:?}", cols[1])))?;
        let pred = cols[2].trim_end_matches("...");
        if pred.parse::<f64>().is_err() {
            return Err(err(format!("bad prediction {:?}", cols[2])));
        }
        if let Some(prev) = out.last() {
            if threshold <= prev.threshold {
                return Err(Error::CorruptData(format!(
                    "line {line}: threshold {} does not exceed {}",
                    cols[0],
                    prev.label()
                )));
            }
            if pi2 < prev.pi2 {
                return Err(Error::CorruptData(format!(
                    "line {line}: count {pi2} below previous count {}",
                    prev.pi2
                )));
            }
        }
        out.push(CensusTableEntry { k, exponent, threshold, pi2, prediction: cols[2].to_string() });
    }
    Ok(out)
}

/// One entry per line, single-space separated.
pub fn serialize_table(entries: &[CensusTableEntry]) -> String {
    let mut s = String::new();
    for e in entries {
        let _ = writeln!(s, "{} {} {}", e.label(), e.pi2, e.prediction);
    }
    s
}

/// Enclosure of the sum of `1/p + 1/(p+2)` over the pairs with
/// `lower.threshold < p <= upper.threshold`.
///
/// Each such term lies in `[2/(p+1), 2/p]` by convexity of `1/t`. The upper
/// end uses `p > L`. For the lower end `p + 1 <= U` when `U` is even, since
/// `p` is odd; an odd `U` falls back to `U + 1`.
pub fn bracket_contribution(lower: &CensusTableEntry, upper: &CensusTableEntry) -> Result<Interval> {
    if lower.threshold >= upper.threshold {
        return Err(Error::CorruptData(format!(
            "bracket {} -> {} is not increasing",
            lower.label(),
            upper.label()
        )));
    }
    if lower.pi2 > upper.pi2 {
        return Err(Error::CorruptData(format!(
            "count decreases from {} ({}) to {} ({})",
            lower.label(),
            lower.pi2,
            upper.label(),
            upper.pi2
        )));
    }
    let delta = upper.pi2 - lower.pi2;
    if delta == 0 {
        return Ok(Interval::ZERO);
    }
    let twice = Interval::from_u64(delta) * Interval::point(2.0);
    let far = if upper.threshold.is_multiple_of(2) { upper.threshold } else { upper.threshold + 1 };
    let lo = twice.checked_div(Interval::from_u64(far))?;
    let hi = twice.checked_div(Interval::from_u64(lower.threshold))?;
    Interval::new(lo.lo(), hi.hi())
}

/// Extend a census from the first entry's threshold to the last one's.
pub fn extend_brun(base: &TwinCensus, entries: &[CensusTableEntry]) -> Result<TwinCensus> {
    let first = entries.first().ok_or_else(|| Error::Splice("no table entries".into()))?;
    if first.threshold != base.x {
        return Err(Error::Splice(format!(
            "base point x = {} but the first entry is {}",
            base.x,
            first.label()
        )));
    }
    if first.pi2 != base.pi2 {
        return Err(Error::Splice(format!(
            "base count {} disagrees with table count {} at {}",
            base.pi2,
            first.pi2,
            first.label()
        )));
    }
    let mut acc = base.brun_partial;
    for pair in entries.windows(2) {
        acc = acc + bracket_contribution(&pair[0], &pair[1])?;
    }
    let last = entries.last().expect("nonempty");
    Ok(TwinCensus { x: last.threshold, pi2: last.pi2, brun_partial: acc })
}

/// Name and SHA-256 of an input file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileDigest {
    pub name: String,
    pub sha256: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

#[derive(Clone, Debug)]
pub struct TableSet {
    pub entries: Vec<CensusTableEntry>,
    pub files: Vec<FileDigest>,
}

impl TableSet {
    /// Entries from `from` through `to` inclusive; both must be present.
    pub fn span(&self, from: u64, to: u64) -> Result<&[CensusTableEntry]> {
        let find = |x: u64| {
            self.entries
                .binary_search_by_key(&x, |e| e.threshold)
                .map_err(|_| Error::Splice(format!("no table entry at threshold {x}")))
        };
        let (i, j) = (find(from)?, find(to)?);
        if i > j {
            return Err(Error::Splice(format!("threshold {from} lies beyond {to}")));
        }
        Ok(&self.entries[i..=j])
    }
}

/// Merge several parsed tables. Thresholds present in more than one table
/// must carry the same count, and the merged sequence must stay monotone.
pub fn merge_tables(tables: Vec<Vec<CensusTableEntry>>) -> Result<Vec<CensusTableEntry>> {
    let mut all: Vec<CensusTableEntry> = tables.into_iter().flatten().collect();
    all.sort_by_key(|e| e.threshold);
    let mut out: Vec<CensusTableEntry> = Vec::with_capacity(all.len());
    for e in all {
        match out.last() {
            Some(prev) if prev.threshold == e.threshold => {
                if prev.pi2 != e.pi2 {
                    return Err(Error::CorruptData(format!(
                        "tables disagree at {}: {} vs {}",
                        e.label(),
                        prev.pi2,
                        e.pi2
                    )));
                }
            }
            Some(prev) if prev.pi2 > e.pi2 => {
                return Err(Error::CorruptData(format!(
                    "merged counts decrease between {} and {}",
                    prev.label(),
                    e.label()
                )));
            }
            _ => out.push(e),
        }
    }
    Ok(out)
}

/// Load every regular, non-hidden file in `dir` (sorted by name) as a table.
pub fn load_table_dir(dir: &Path) -> Result<TableSet> {
    let io = |path: &Path, e: std::io::Error| Error::Io { path: path.display().to_string(), message: e.to_string() };
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| io(dir, e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .filter(|p| !p.file_name().and_then(|n| n.to_str()).is_some_and(|n| n.starts_with('.')))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(Error::MissingInput(format!("no table files in {}", dir.display())));
    }
    let mut tables = Vec::new();
    let mut files = Vec::new();
    for path in &paths {
        let bytes = std::fs::read(path).map_err(|e| io(path, e))?;
        let text = String::from_utf8(bytes.clone())
            .map_err(|_| Error::CorruptData(format!("{} is not UTF-8", path.display())))?;
        let entries = parse_table(&text).map_err(|e| match e {
            Error::Parse { line, message } => Error::Parse { line, message: format!("{}: {message}", path.display()) },
            other => other,
        })?;
        tables.push(entries);
        files.push(FileDigest {
            name: path.file_name().unwrap_or_default().to_string_lossy().into_owned(),
            sha256: sha256_hex(&bytes),
        });
    }
    Ok(TableSet { entries: merge_tables(tables)?, files })
}
