//! Tabular datasets and their CSV/JSON renderings.
//!
//! CSV is byte-deterministic: header row, comma separator, LF line endings,
//! reals in `{:.16e}` (17 significant digits). JSON is an object with the
//! tag, the metadata and the rows as an array of column-keyed objects.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            _ => Err(Error::InvalidParams(format!("unknown format {s:?}; expected csv or json"))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Csv => "csv",
            Self::Json => "json",
        })
    }
}

/// Which table a dataset holds. The `fig*` tags have fixed schemas:
///
/// | tag | columns |
/// |---|---|
/// | `spectrum` | n, parity, energy, shooting_residual, galerkin_energy, abs_difference |
/// | `fig2`, `fig5`, `fig7` | ell, beta, n, parity, energy, galerkin_energy, abs_difference, error |
/// | `fig3` | x, n, value |
/// | `fig4` | hamiltonian, n, parity, energy, shared_odd, arrow_up_to, arrow_down_to |
/// | `ladder_checks` | check, k, measured, tolerance, passed |
/// | `verify` | suite, name, measured, tolerance, comparison, passed, detail |
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FigureTag {
    Spectrum,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig7,
    LadderChecks,
    Verify,
}

impl FigureTag {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Spectrum => "spectrum",
            Self::Fig2 => "fig2",
            Self::Fig3 => "fig3",
            Self::Fig4 => "fig4",
            Self::Fig5 => "fig5",
            Self::Fig7 => "fig7",
            Self::LadderChecks => "ladder_checks",
            Self::Verify => "verify",
        }
    }

    pub fn columns(self) -> &'static [&'static str] {
        match self {
            Self::Spectrum => {
                &["n", "parity", "energy", "shooting_residual", "galerkin_energy", "abs_difference"]
            }
            Self::Fig2 | Self::Fig5 | Self::Fig7 => &[
                "ell",
                "beta",
                "n",
                "parity",
                "energy",
                "galerkin_energy",
                "abs_difference",
                "error",
            ],
            Self::Fig3 => &["x", "n", "value"],
            Self::Fig4 => {
                &["hamiltonian", "n", "parity", "energy", "shared_odd", "arrow_up_to", "arrow_down_to"]
            }
            Self::LadderChecks => &["check", "k", "measured", "tolerance", "passed"],
            Self::Verify => &["suite", "name", "measured", "tolerance", "comparison", "passed", "detail"],
        }
    }
}

impl fmt::Display for FigureTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Int(i64),
    Real(f64),
    Bool(bool),
    Text(String),
}

impl Cell {
    pub fn as_real(&self) -> Option<f64> {
        match self {
            Self::Real(v) => Some(*v),
            Self::Int(v) => Some(*v as f64),
            _ => None,
        }
    }

    pub fn as_text(&self) -> Option<&str> {
        match self {
            Self::Text(s) => Some(s),
            _ => None,
        }
    }

    fn render(&self) -> String {
        match self {
            Self::Int(v) => v.to_string(),
            Self::Real(v) => format!("{v:.16e}"),
            Self::Bool(v) => v.to_string(),
            Self::Text(s) => s.clone(),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Self::Real(v)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Self::Int(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Self::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Self::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Self::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Self::Text(v)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureDataset {
    tag: FigureTag,
    rows: Vec<Vec<Cell>>,
    metadata: Map<String, Value>,
}

impl FigureDataset {
    pub fn new(tag: FigureTag) -> Self {
        Self { tag, rows: Vec::new(), metadata: Map::new() }
    }

    pub fn tag(&self) -> FigureTag {
        self.tag
    }

    pub fn columns(&self) -> &'static [&'static str] {
        self.tag.columns()
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn metadata(&self) -> &Map<String, Value> {
        &self.metadata
    }

    /// Appends a row; it must have one cell per column.
    pub fn push(&mut self, row: Vec<Cell>) -> Result<()> {
        if row.len() != self.columns().len() {
            return Err(Error::Size(format!(
                "{} row has {} cells, schema has {}",
                self.tag,
                row.len(),
                self.columns().len()
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn set_meta(&mut self, key: &str, value: impl Serialize) {
        let value = serde_json::to_value(value).unwrap_or(Value::Null);
        self.metadata.insert(key.to_string(), value);
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns().iter().position(|c| *c == name)
    }

    /// Cells of column `name`, in row order.
    pub fn column(&self, name: &str) -> Option<Vec<&Cell>> {
        let j = self.column_index(name)?;
        Some(self.rows.iter().map(|r| &r[j]).collect())
    }

    /// Numeric column; non-numeric cells become NaN.
    pub fn reals(&self, name: &str) -> Option<Vec<f64>> {
        Some(self.column(name)?.into_iter().map(|c| c.as_real().unwrap_or(f64::NAN)).collect())
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        let io = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(self.columns()).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render)).map_err(io)?;
        }
        w.flush().map_err(|e| Error::Io(e.to_string()))
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| Error::Io(e.to_string()))
    }

    pub fn to_json(&self) -> Value {
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns()
                    .iter()
                    .zip(row)
                    .map(|(c, v)| (c.to_string(), serde_json::to_value(v).unwrap_or(Value::Null)))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        let mut obj = Map::new();
        obj.insert("figure".into(), Value::String(self.tag.as_str().into()));
        obj.insert("metadata".into(), Value::Object(self.metadata.clone()));
        obj.insert("rows".into(), Value::Array(rows));
        Value::Object(obj)
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Csv => self.to_csv_string(),
            Format::Json => serde_json::to_string_pretty(&self.to_json())
                .map(|s| s + "\n")
                .map_err(|e| Error::Io(e.to_string())),
        }
    }

    /// Writes to `path`; for CSV, non-empty metadata goes to the sidecar
    /// [`metadata_path`].
    pub fn write_to(&self, path: &Path, format: Format) -> Result<()> {
        write_file(path, &self.render(format)?)?;
        if format == Format::Csv && !self.metadata.is_empty() {
            let meta = serde_json::to_string_pretty(&self.metadata).map_err(|e| Error::Io(e.to_string()))?;
            write_file(&metadata_path(path), &(meta + "\n"))?;
        }
        Ok(())
    }
}

/// `out.csv` → `out.meta.json`.
pub fn metadata_path(path: &Path) -> PathBuf {
    path.with_extension("meta.json")
}

/// `out.csv` → `out.<suffix>.csv`.
pub fn companion_path(path: &Path, suffix: &str) -> PathBuf {
    let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("csv");
    path.with_extension(format!("{suffix}.{ext}"))
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    }
    fs::write(path, contents).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> FigureDataset {
        let mut d = FigureDataset::new(FigureTag::Fig3);
        d.push(vec![(-1.0).into(), 0usize.into(), 0.5.into()]).unwrap();
        d.push(vec![0.1.into(), 1usize.into(), (1.0 / 3.0).into()]).unwrap();
        d.set_meta("energies", [0.5, 1.5]);
        d
    }

    #[test]
    fn csv_layout() {
        let s = sample().to_csv_string().unwrap();
        assert_eq!(
            s,
            "x,n,value\n-1.0000000000000000e0,0,5.0000000000000000e-1\n\
             1.0000000000000001e-1,1,3.3333333333333331e-1\n"
        );
        assert!(!s.contains('\r'));
    }

    #[test]
    fn seventeen_digits_round_trip() {
        for v in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, f64::MIN_POSITIVE] {
            let text = Cell::Real(v).render();
            assert_eq!(text.parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn row_width_enforced() {
        let mut d = FigureDataset::new(FigureTag::Fig3);
        assert!(matches!(d.push(vec![1.0.into()]), Err(Error::Size(_))));
    }

    #[test]
    fn json_rows_and_metadata() {
        let v = sample().to_json();
        assert_eq!(v["figure"], "fig3");
        assert_eq!(v["rows"][1]["n"], 1);
        assert_eq!(v["metadata"]["energies"][1], 1.5);
    }

    #[test]
    fn nan_is_null_in_json() {
        let mut d = FigureDataset::new(FigureTag::Fig3);
        d.push(vec![0.0.into(), 0usize.into(), f64::NAN.into()]).unwrap();
        assert!(d.to_json()["rows"][0]["value"].is_null());
    }

    #[test]
    fn sidecar_paths() {
        let p = Path::new("out/fig4.csv");
        assert_eq!(metadata_path(p), Path::new("out/fig4.meta.json"));
        assert_eq!(companion_path(p, "checks"), Path::new("out/fig4.checks.csv"));
    }

    #[test]
    fn csv_file_with_sidecar() {
        let dir = std::env::temp_dir().join(format!("circle-osc-io-{}", std::process::id()));
        let path = dir.join("f.csv");
        sample().write_to(&path, Format::Csv).unwrap();
        let meta: Value = serde_json::from_str(&fs::read_to_string(metadata_path(&path)).unwrap()).unwrap();
        assert_eq!(meta["energies"][0], 0.5);
        fs::remove_dir_all(dir).unwrap();
    }
}
