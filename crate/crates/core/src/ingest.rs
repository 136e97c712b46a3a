//! Loading trial records from an IST-shaped CSV file.
//!
//! Nothing is inferred from the data: each mapped column carries an explicit
//! map from raw string values to a bit. Heparin dose levels (low / medium)
//! collapse to "given" through that map. A blank cell, or one holding a
//! configured missing token, is *missing* and handled by the
//! [`MissingPolicy`]; any other value absent from the map is an error.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bandit::{ArmId, Outcome};
use crate::contextual::{Context, MAX_CONTEXT_DIM};
use crate::environment::TrialRecord;
use crate::error::{Error, Result};

/// Number of arms in the aspirin × heparin factorial design.
pub const FACTORIAL_ARMS: usize = 4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ColumnMapping {
    pub aspirin_col: String,
    pub heparin_col: String,
    /// Column flagging death within 14 days (mapped bit 1 = dead).
    pub outcome_col: String,
    #[serde(default)]
    pub context_cols: Vec<String>,
    /// Raw value → bit, keyed by column name.
    pub values: BTreeMap<String, BTreeMap<String, u8>>,
    /// Raw values treated as missing, in addition to blank cells.
    #[serde(default)]
    pub missing_values: Vec<String>,
}

impl ColumnMapping {
    pub fn columns(&self) -> Vec<&str> {
        let mut cols = vec![
            self.aspirin_col.as_str(),
            self.heparin_col.as_str(),
            self.outcome_col.as_str(),
        ];
        cols.extend(self.context_cols.iter().map(String::as_str));
        cols
    }

    pub fn validate(&self) -> Result<()> {
        let cols = self.columns();
        let mut seen = BTreeSet::new();
        for c in &cols {
            if !seen.insert(*c) {
                return Err(Error::Config(format!("column `{c}` is mapped more than once")));
            }
            let map = self
                .values
                .get(*c)
                .ok_or_else(|| Error::Config(format!("no value map for column `{c}`")))?;
            if let Some((raw, bit)) = map.iter().find(|(_, &b)| b > 1) {
                return Err(Error::Config(format!(
                    "value map for `{c}` sends {raw:?} to {bit}; only 0 and 1 are allowed"
                )));
            }
        }
        if self.context_cols.len() > MAX_CONTEXT_DIM {
            return Err(Error::Config(format!(
                "{} context columns exceed the maximum of {MAX_CONTEXT_DIM}",
                self.context_cols.len()
            )));
        }
        Ok(())
    }
}

/// What to do with a row whose mapped cell is missing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MissingPolicy {
    /// Skip the row and count it in [`Dataset::excluded`].
    #[default]
    Drop,
    Error,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub records: Vec<TrialRecord>,
    pub d: usize,
    pub k: usize,
    pub excluded: usize,
}

/// (0,0) → 0 neither, (1,0) → 1 aspirin only, (0,1) → 2 heparin only, (1,1) → 3 both.
pub fn encode_arm(aspirin: bool, heparin: bool) -> ArmId {
    ArmId(usize::from(aspirin) | usize::from(heparin) << 1)
}

/// Alive at 14 days is a success.
pub fn encode_outcome(dead_within_14d: bool) -> Outcome {
    Outcome::from_success(!dead_within_14d)
}

pub fn encode_context(raw_bits: &[u8], d: usize) -> Result<Context> {
    if raw_bits.len() != d {
        return Err(Error::invalid(format!(
            "expected {d} context bits, got {}",
            raw_bits.len()
        )));
    }
    Context::new(raw_bits.to_vec())
}

pub fn load_csv(path: impl AsRef<Path>, mapping: &ColumnMapping, policy: MissingPolicy) -> Result<Dataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_csv(file, mapping, policy)
}

struct Resolved<'a> {
    name: &'a str,
    index: usize,
    map: &'a BTreeMap<String, u8>,
}

enum Cell {
    Bit(u8),
    Missing,
}

pub fn read_csv<R: Read>(reader: R, mapping: &ColumnMapping, policy: MissingPolicy) -> Result<Dataset> {
    mapping.validate()?;
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let header = rdr.headers()?.clone();
    let resolve = |name: &str| -> Result<usize> {
        header
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| Error::Schema {
                column: name.to_string(),
            })
    };
    let columns: Vec<Resolved> = mapping
        .columns()
        .into_iter()
        .map(|name| {
            Ok(Resolved {
                name,
                index: resolve(name)?,
                map: &mapping.values[name],
            })
        })
        .collect::<Result<_>>()?;

    let d = mapping.context_cols.len();
    let mut records = Vec::new();
    let mut excluded = 0;
    for (ordinal, row) in rdr.records().enumerate() {
        let row = row?;
        let line = row
            .position()
            .map(|p| p.line() as usize)
            .unwrap_or(ordinal + 2);
        let mut bits = Vec::with_capacity(columns.len());
        let mut missing = None;
        for col in &columns {
            let raw = row.get(col.index).unwrap_or("").trim();
            let cell = if raw.is_empty() || mapping.missing_values.iter().any(|m| m == raw) {
                Cell::Missing
            } else {
                match col.map.get(raw) {
                    Some(&bit) => Cell::Bit(bit),
                    None => {
                        return Err(Error::Value {
                            column: col.name.to_string(),
                            value: raw.to_string(),
                            row: line,
                        })
                    }
                }
            };
            match cell {
                Cell::Bit(b) => bits.push(b),
                Cell::Missing => {
                    missing.get_or_insert(col.name);
                }
            }
        }
        if let Some(column) = missing {
            match policy {
                MissingPolicy::Drop => {
                    excluded += 1;
                    continue;
                }
                MissingPolicy::Error => {
                    return Err(Error::MissingField {
                        column: column.to_string(),
                        row: line,
                    })
                }
            }
        }
        records.push(TrialRecord {
            arm: encode_arm(bits[0] == 1, bits[1] == 1),
            outcome: encode_outcome(bits[2] == 1),
            context: encode_context(&bits[3..], d)?,
            sequence: records.len() as u64,
        });
    }
    Ok(Dataset {
        records,
        d,
        k: FACTORIAL_ARMS,
        excluded,
    })
}
