//! Density files and plain CSV tables.
//!
//! Densities are read from CSV with header `x,value` (cell center, height)
//! or from JSON `{"grid": {"lo", "hi", "n_cells"}, "values": [...]}`.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::domain::{DensityField, Grid, DEFAULT_FLOOR};
use crate::error::{invalid, Result};
use crate::numeric::fmt_sig;

/// Digits used for every float written to CSV.
pub const CSV_DIGITS: usize = 9;

#[derive(Debug, Serialize, Deserialize)]
struct GridSpec {
    lo: f64,
    hi: f64,
    n_cells: usize,
}

#[derive(Debug, Serialize, Deserialize)]
struct DensityJson {
    grid: GridSpec,
    values: Vec<f64>,
}

#[derive(Debug, Deserialize)]
struct DensityRow {
    x: f64,
    value: f64,
}

/// Reads a density by file extension: `.json` or anything else as CSV.
pub fn read_density(path: &Path) -> Result<DensityField> {
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
        let raw: DensityJson = serde_json::from_reader(File::open(path)?)?;
        let grid = Grid::new(raw.grid.lo, raw.grid.hi, raw.grid.n_cells)?;
        DensityField::from_values(grid, &raw.values, DEFAULT_FLOOR)
    } else {
        density_from_csv(File::open(path)?)
    }
}

pub fn density_from_csv<R: std::io::Read>(reader: R) -> Result<DensityField> {
    let mut rdr = csv::Reader::from_reader(reader);
    let rows: Vec<DensityRow> = rdr.deserialize().collect::<std::result::Result<_, _>>()?;
    if rows.len() < 2 {
        return invalid(format!("density needs at least 2 rows, got {}", rows.len()));
    }
    let dx = (rows[rows.len() - 1].x - rows[0].x) / (rows.len() - 1) as f64;
    if !(dx > 0.0) {
        return invalid("cell centers must increase");
    }
    for (i, r) in rows.iter().enumerate() {
        let expected = rows[0].x + dx * i as f64;
        if (r.x - expected).abs() > 1e-6 * dx {
            return invalid(format!("cell centers are not evenly spaced at row {}", i + 1));
        }
    }
    let grid = Grid::new(rows[0].x - dx / 2.0, rows[rows.len() - 1].x + dx / 2.0, rows.len())?;
    let values: Vec<f64> = rows.iter().map(|r| r.value).collect();
    DensityField::from_values(grid, &values, DEFAULT_FLOOR)
}

pub fn write_density_csv<W: Write>(d: &DensityField, out: W) -> Result<()> {
    let rows = d
        .grid()
        .centers()
        .into_iter()
        .zip(d.values())
        .map(|(x, v)| vec![fmt_sig(x, CSV_DIGITS), fmt_sig(*v, CSV_DIGITS)]);
    write_csv(out, &["x", "value"], rows)
}

pub fn write_density_json<W: Write>(d: &DensityField, out: W) -> Result<()> {
    let g = d.grid();
    let doc = DensityJson {
        grid: GridSpec { lo: g.lo(), hi: g.hi(), n_cells: g.n_cells() },
        values: d.values().to_vec(),
    };
    serde_json::to_writer_pretty(out, &doc)?;
    Ok(())
}

pub fn write_csv<W: Write, I>(out: W, header: &[&str], rows: I) -> Result<()>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Formats a float for CSV output.
pub fn cell(x: f64) -> String {
    fmt_sig(x, CSV_DIGITS)
}
