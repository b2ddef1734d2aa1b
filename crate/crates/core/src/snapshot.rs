//! Cell-average profiles and their CSV form.
//!
//! A snapshot file starts with a `# time = <t>` comment line, followed by a
//! header row `x,<observable>,...` and one row per cell. Numbers are written
//! in scientific notation with 17 significant digits unless the
//! `DGFLUX_CSV_DIGITS` environment variable asks for another count (1 to 17).

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::Error;
use crate::mesh::Mesh;
use crate::model::SystemModel;
use crate::state::DGState;

/// Environment variable overriding the number of significant digits.
pub const DIGITS_ENV: &str = "DGFLUX_CSV_DIGITS";

/// Observables of every cell average at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileSnapshot {
    pub time: f64,
    pub x: Vec<f64>,
    pub columns: Vec<String>,
    /// `values[j][c]`: observable `c` in cell `j`.
    pub values: Vec<Vec<f64>>,
}

impl ProfileSnapshot {
    pub fn from_state(state: &DGState, mesh: &Mesh, model: &dyn SystemModel) -> Self {
        let values = (0..state.n_cells())
            .map(|j| model.observables(state.average(j), mesh.theta(j)))
            .collect();
        Self {
            time: state.time,
            x: mesh.centers(),
            columns: model.observable_names(),
            values,
        }
    }

    pub fn n_rows(&self) -> usize {
        self.x.len()
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn column(&self, c: usize) -> Vec<f64> {
        self.values.iter().map(|row| row[c]).collect()
    }

    /// Sum over all observable columns per row.
    pub fn row_sums(&self) -> Vec<f64> {
        self.values.iter().map(|row| row.iter().sum()).collect()
    }

    pub fn write_csv(&self, path: &Path) -> Result<(), Error> {
        let digits = significant_digits();
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut out = BufWriter::new(file);
        let io = |e| Error::io(path, e);
        writeln!(out, "# time = {}", format_number(self.time, 17)).map_err(io)?;
        let mut w = csv::Writer::from_writer(out);
        let csv_err = |e: csv::Error| Error::Csv {
            path: path.to_path_buf(),
            message: e.to_string(),
        };
        let mut header = vec!["x".to_string()];
        header.extend(self.columns.iter().cloned());
        w.write_record(&header).map_err(csv_err)?;
        for (x, row) in self.x.iter().zip(&self.values) {
            let mut record = vec![format_number(*x, digits)];
            record.extend(row.iter().map(|v| format_number(*v, digits)));
            w.write_record(&record).map_err(csv_err)?;
        }
        w.into_inner()
            .map_err(|e| Error::io(path, e.into_error()))?
            .flush()
            .map_err(io)
    }

    pub fn read_csv(path: &Path) -> Result<Self, Error> {
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        let mut reader = BufReader::new(file);
        let bad = |message: String| Error::Csv {
            path: path.to_path_buf(),
            message,
        };
        let mut first = String::new();
        reader.read_line(&mut first).map_err(|e| Error::io(path, e))?;
        let time = first
            .trim()
            .strip_prefix("# time =")
            .and_then(|t| t.trim().parse::<f64>().ok())
            .ok_or_else(|| bad(format!("expected '# time = <t>' line, found '{}'", first.trim())))?;

        let mut r = csv::Reader::from_reader(reader);
        let header = r.headers().map_err(|e| bad(e.to_string()))?.clone();
        if header.get(0) != Some("x") || header.len() < 2 {
            return Err(bad("header must start with 'x' followed by observables".into()));
        }
        let columns: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
        let mut x = Vec::new();
        let mut values = Vec::new();
        for (row, record) in r.records().enumerate() {
            let record = record.map_err(|e| bad(e.to_string()))?;
            let nums = record
                .iter()
                .map(|f| f.trim().parse::<f64>())
                .collect::<Result<Vec<f64>, _>>()
                .map_err(|e| bad(format!("row {}: {e}", row + 1)))?;
            if nums.len() != header.len() {
                return Err(bad(format!("row {} has {} fields", row + 1, nums.len())));
            }
            x.push(nums[0]);
            values.push(nums[1..].to_vec());
        }
        if x.windows(2).any(|w| w[1] <= w[0]) {
            return Err(bad("x column is not strictly increasing".into()));
        }
        Ok(Self {
            time,
            x,
            columns,
            values,
        })
    }
}

/// Digits requested through [`DIGITS_ENV`], defaulting to 17.
pub fn significant_digits() -> usize {
    std::env::var(DIGITS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|d| (1..=17).contains(d))
        .unwrap_or(17)
}

/// Scientific notation with `digits` significant digits.
pub fn format_number(v: f64, digits: usize) -> String {
    format!("{:.*e}", digits.saturating_sub(1), v)
}
