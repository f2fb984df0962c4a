//! `const:<c>` | `cos:<k>[:shift]` | `table:<path>`

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use kinlayer::BoundaryProfile;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum BoundarySpec {
    Const(f64),
    /// `cos(kφ) + shift`
    Cos { k: u32, shift: f64 },
    /// Two-column CSV `(angle, value)` covering `[0, π]`.
    Table(PathBuf),
}

fn number(s: &str, what: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("{what} `{s}` is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("{what} must be finite"))
    }
}

impl FromStr for BoundarySpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (head, rest) = s.split_once(':').ok_or_else(|| format!("boundary spec `{s}` lacks a `kind:` prefix"))?;
        match head {
            "const" => Ok(BoundarySpec::Const(number(rest, "constant")?)),
            "cos" => {
                let (k, shift) = match rest.split_once(':') {
                    Some((k, shift)) => (k, number(shift, "shift")?),
                    None => (rest, 0.0),
                };
                let k: u32 = k.trim().parse().map_err(|_| format!("mode `{k}` is not a non-negative integer"))?;
                Ok(BoundarySpec::Cos { k, shift })
            }
            "table" if !rest.is_empty() => Ok(BoundarySpec::Table(PathBuf::from(rest))),
            "table" => Err("table spec needs a path".into()),
            other => Err(format!("unknown boundary kind `{other}` (const, cos, table)")),
        }
    }
}

impl fmt::Display for BoundarySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundarySpec::Const(c) => write!(f, "const:{c}"),
            BoundarySpec::Cos { k, shift } if *shift == 0.0 => write!(f, "cos:{k}"),
            BoundarySpec::Cos { k, shift } => write!(f, "cos:{k}:{shift}"),
            BoundarySpec::Table(p) => write!(f, "table:{}", p.display()),
        }
    }
}

impl BoundarySpec {
    pub fn profile(&self) -> Result<BoundaryProfile> {
        match self {
            BoundarySpec::Const(c) => Ok(BoundaryProfile::constant(*c)),
            BoundarySpec::Cos { k, shift } => Ok(BoundaryProfile::cos(*k, *shift)),
            BoundarySpec::Table(path) => {
                let rows = read_table(path)?;
                BoundaryProfile::table(rows).map_err(|e| CliError::config(format!("{}: {e}", path.display())))
            }
        }
    }
}

/// Rows of a two-column table; a header row is skipped if its first field
/// is not numeric.
fn read_table(path: &PathBuf) -> Result<Vec<(f64, f64)>> {
    let bad = |msg: String| CliError::config(format!("{}: {msg}", path.display()));
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| bad(e.to_string()))?;
    let mut rows = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| bad(e.to_string()))?;
        if record.len() != 2 {
            return Err(bad(format!("row {} has {} fields, expected 2", line + 1, record.len())));
        }
        let parsed = (record[0].parse::<f64>(), record[1].parse::<f64>());
        match parsed {
            (Ok(a), Ok(v)) => rows.push((a, v)),
            _ if line == 0 => continue,
            _ => return Err(bad(format!("row {} is not numeric", line + 1))),
        }
    }
    Ok(rows)
}
