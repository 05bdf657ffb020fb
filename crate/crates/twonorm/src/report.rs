//! Structured experiment output with deterministic CSV/JSON emission.
//!
//! Reports are plain tables: named columns, typed cells, a parameter map,
//! and an optional pass verdict. Floats are written with 17 significant
//! digits in CSV (lossless for doubles); JSON goes through serde_json, whose
//! shortest-round-trip float encoding is also lossless. Files are written
//! atomically (temp file + rename) so partial outputs never appear.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CellValue {
    Int(i64),
    Num(f64),
    Text(String),
}

impl CellValue {
    fn to_csv_field(&self) -> String {
        match self {
            CellValue::Int(v) => v.to_string(),
            CellValue::Num(v) => format_float(*v),
            CellValue::Text(v) => {
                if v.contains(',') || v.contains('"') || v.contains('\n') {
                    format!("\"{}\"", v.replace('"', "\"\""))
                } else {
                    v.clone()
                }
            }
        }
    }
}

impl From<i64> for CellValue {
    fn from(v: i64) -> Self {
        CellValue::Int(v)
    }
}

impl From<usize> for CellValue {
    fn from(v: usize) -> Self {
        CellValue::Int(v as i64)
    }
}

impl From<f64> for CellValue {
    fn from(v: f64) -> Self {
        CellValue::Num(v)
    }
}

impl From<&str> for CellValue {
    fn from(v: &str) -> Self {
        CellValue::Text(v.to_string())
    }
}

impl From<String> for CellValue {
    fn from(v: String) -> Self {
        CellValue::Text(v)
    }
}

impl From<bool> for CellValue {
    fn from(v: bool) -> Self {
        CellValue::Text(if v { "true".into() } else { "false".into() })
    }
}

/// 17 significant digits: lossless decimal round-trip for f64.
pub fn format_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "nan".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// Structured numerical output of one named experiment.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema_version: String,
    pub name: String,
    /// Parameters are kept sorted (BTreeMap) so serialization is stable.
    pub params: BTreeMap<String, String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<CellValue>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pass: Option<bool>,
    pub artifacts: Vec<PathBuf>,
}

impl ExperimentReport {
    pub fn new(name: impl Into<String>, columns: &[&str]) -> Self {
        ExperimentReport {
            schema_version: "1".into(),
            name: name.into(),
            params: BTreeMap::new(),
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
            pass: None,
            artifacts: Vec::new(),
        }
    }

    pub fn set_param(&mut self, key: impl Into<String>, value: impl ToString) {
        self.params.insert(key.into(), value.to_string());
    }

    pub fn push_row(&mut self, row: Vec<CellValue>) {
        assert_eq!(
            row.len(),
            self.columns.len(),
            "row width must match column count"
        );
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let fields: Vec<String> = row.iter().map(|c| c.to_csv_field()).collect();
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn write_csv(&mut self, path: &Path) -> Result<()> {
        let text = self.to_csv();
        write_atomic(path, text.as_bytes())?;
        self.artifacts.push(path.to_path_buf());
        Ok(())
    }

    pub fn write_json(&mut self, path: &Path) -> Result<()> {
        // serialize with the artifact list already including this file
        self.artifacts.push(path.to_path_buf());
        let text = self.to_json()?;
        write_atomic(path, text.as_bytes())?;
        Ok(())
    }
}

/// Write via a sibling temp file and rename, so readers never see a torn file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    let tmp = path.with_extension("tmp-write");
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_floats_carry_17_significant_digits() {
        let s = format_float(std::f64::consts::PI);
        assert_eq!(s, "3.1415926535897931e0");
        let parsed: f64 = s.parse().unwrap();
        assert_eq!(parsed, std::f64::consts::PI);
    }

    #[test]
    fn report_round_trips_and_emits_csv() {
        let mut r = ExperimentReport::new("demo", &["k", "value", "note"]);
        r.set_param("seed", 42);
        r.push_row(vec![1usize.into(), 0.5f64.into(), "ok".into()]);
        r.push_row(vec![2usize.into(), (1.0 / 3.0).into(), "with,comma".into()]);
        let csv = r.to_csv();
        assert!(csv.starts_with("k,value,note\n"));
        assert!(csv.contains("\"with,comma\""));
        let json = r.to_json().unwrap();
        let back: ExperimentReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back.rows, r.rows);
        assert_eq!(back.schema_version, "1");
    }

    #[test]
    fn atomic_write_replaces_content() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        write_atomic(&path, b"first").unwrap();
        write_atomic(&path, b"second").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "second");
        assert!(!path.with_extension("tmp-write").exists());
    }
}
