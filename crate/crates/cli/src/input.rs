//! The JSON matrix-set document.
//!
//! ```json
//! { "d": 2, "matrices": [[[0, 1], [0, 0]], [[[0, 1], 2], [0, 0]]], "labels": ["A", "B"] }
//! ```
//!
//! An entry is either a real number or an `[re, im]` pair.

use jsr_core::{Complex64, ComplexMatrix, MatrixSet};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{field}: {message}")]
pub struct InputError {
    /// Path of the offending field, e.g. `matrices[1][0][2]`.
    pub field: String,
    pub message: String,
}

impl InputError {
    fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            field: field.into(),
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

impl Entry {
    pub fn value(self) -> Complex64 {
        match self {
            Entry::Real(re) => Complex64::new(re, 0.0),
            Entry::Complex([re, im]) => Complex64::new(re, im),
        }
    }

    /// Real entries collapse to the shorthand form.
    pub fn from_value(z: Complex64) -> Self {
        if z.im == 0.0 {
            Entry::Real(z.re)
        } else {
            Entry::Complex([z.re, z.im])
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputDocument {
    pub d: usize,
    pub matrices: Vec<Vec<Vec<Entry>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl InputDocument {
    pub fn parse(text: &str) -> Result<Self, InputError> {
        let root: Value = serde_json::from_str(text).map_err(|e| InputError::new("document", e.to_string()))?;
        Self::from_json(&root)
    }

    pub fn from_json(root: &Value) -> Result<Self, InputError> {
        let obj = root
            .as_object()
            .ok_or_else(|| InputError::new("document", "expected a JSON object"))?;
        if let Some(key) = obj.keys().find(|k| !matches!(k.as_str(), "d" | "matrices" | "labels")) {
            return Err(InputError::new(key.as_str(), "unknown field"));
        }

        let d = obj
            .get("d")
            .ok_or_else(|| InputError::new("d", "missing"))?
            .as_u64()
            .filter(|&d| d >= 1)
            .ok_or_else(|| InputError::new("d", "expected a positive integer"))? as usize;

        let grids = obj
            .get("matrices")
            .ok_or_else(|| InputError::new("matrices", "missing"))?
            .as_array()
            .ok_or_else(|| InputError::new("matrices", "expected an array of matrices"))?;
        if grids.is_empty() {
            return Err(InputError::new("matrices", "at least one matrix is required"));
        }
        let matrices = grids
            .iter()
            .enumerate()
            .map(|(i, g)| parse_grid(g, d, &format!("matrices[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;

        let labels = match obj.get("labels") {
            None | Some(Value::Null) => None,
            Some(Value::Array(items)) => {
                if items.len() != matrices.len() {
                    return Err(InputError::new(
                        "labels",
                        format!("expected {} labels, got {}", matrices.len(), items.len()),
                    ));
                }
                let labels = items
                    .iter()
                    .enumerate()
                    .map(|(i, v)| {
                        v.as_str()
                            .map(str::to_owned)
                            .ok_or_else(|| InputError::new(format!("labels[{i}]"), "expected a string"))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Some(labels)
            }
            Some(_) => return Err(InputError::new("labels", "expected an array of strings")),
        };

        Ok(Self { d, matrices, labels })
    }

    pub fn from_set(set: &MatrixSet, labels: Option<Vec<String>>) -> Self {
        Self {
            d: set.dim(),
            matrices: set
                .members()
                .iter()
                .map(|m| {
                    m.rows()
                        .map(|row| row.iter().map(|&z| Entry::from_value(z)).collect())
                        .collect()
                })
                .collect(),
            labels,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("document serializes")
    }

    pub fn to_set(&self) -> MatrixSet {
        let members = self
            .matrices
            .iter()
            .map(|grid| {
                let rows: Vec<Vec<Complex64>> = grid
                    .iter()
                    .map(|row| row.iter().map(|e| e.value()).collect())
                    .collect();
                ComplexMatrix::from_rows(&rows).expect("validated grid")
            })
            .collect();
        MatrixSet::new(members).expect("validated dimensions")
    }
}

fn parse_grid(grid: &Value, d: usize, path: &str) -> Result<Vec<Vec<Entry>>, InputError> {
    let rows = grid
        .as_array()
        .ok_or_else(|| InputError::new(path, "expected an array of rows"))?;
    if rows.len() != d {
        return Err(InputError::new(path, format!("expected {d} rows, got {}", rows.len())));
    }
    rows.iter()
        .enumerate()
        .map(|(j, row)| {
            let path = format!("{path}[{j}]");
            let cells = row
                .as_array()
                .ok_or_else(|| InputError::new(&path, "expected an array of entries"))?;
            if cells.len() != d {
                return Err(InputError::new(&path, format!("expected {d} entries, got {}", cells.len())));
            }
            cells
                .iter()
                .enumerate()
                .map(|(k, cell)| parse_entry(cell, &format!("{path}[{k}]")))
                .collect()
        })
        .collect()
}

fn parse_entry(cell: &Value, path: &str) -> Result<Entry, InputError> {
    let number = |v: &Value, path: &str| -> Result<f64, InputError> {
        let x = v
            .as_f64()
            .ok_or_else(|| InputError::new(path, "expected a number"))?;
        if x.is_finite() {
            Ok(x)
        } else {
            Err(InputError::new(path, "entry is not finite"))
        }
    };
    match cell {
        Value::Array(pair) if pair.len() == 2 => Ok(Entry::Complex([
            number(&pair[0], &format!("{path}[0]"))?,
            number(&pair[1], &format!("{path}[1]"))?,
        ])),
        Value::Array(_) => Err(InputError::new(path, "complex entries are [re, im] pairs")),
        Value::Number(_) => Ok(Entry::Real(number(cell, path)?)),
        _ => Err(InputError::new(path, "expected a number or an [re, im] pair")),
    }
}
