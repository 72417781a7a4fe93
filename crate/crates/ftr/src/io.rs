//! Persistent containers: the FTRS snapshot file and a fixed CSV dialect.
//!
//! FTRS layout, all little-endian:
//!
//! ```text
//! offset  size          content
//! 0       4             magic "FTRS"
//! 4       4             format version (u32), currently 1
//! 8       12            nx, ny, nt (u32 each); ny = 1 marks 1D data
//! 20      16            Lx, Ly (f64 each); Ly = 0 for 1D data
//! 36      8 * nt        timestamps (f64)
//! 36+8nt  8 * nt*nx*ny  field values (f64), snapshot-major, then
//!                       row-major with x fastest
//! ```
//!
//! Total size is exactly `36 + 8 * nt + 8 * nt * nx * ny` bytes; readers
//! reject both truncated and trailing bytes.
//!
//! CSV files carry a header row of column names, `,` separators, `.`
//! decimal points, LF line endings and floats at 17 significant digits,
//! which round-trips every f64 exactly.

use std::fs;
use std::io::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::grid::{Grid, Grid1D, Grid2D};
use crate::series::SnapshotSeries;

pub const MAGIC: [u8; 4] = *b"FTRS";
pub const FORMAT_VERSION: u32 = 1;

/// Exact file size of a series with the given shape.
pub fn ftrs_file_size(nx: usize, ny: usize, nt: usize) -> u64 {
    36 + 8 * nt as u64 + 8 * (nt as u64) * (nx as u64) * (ny as u64)
}

/// Serializes a series into the FTRS byte layout.
pub fn snapshots_to_bytes(s: &SnapshotSeries) -> Vec<u8> {
    let (nx, ny, lx, ly) = match s.grid() {
        Grid::One(g) => (g.nx(), 1usize, g.lx(), 0.0),
        Grid::Two(g) => (g.nx(), g.ny(), g.lx(), g.ly()),
    };
    let nt = s.len();
    let mut out = Vec::with_capacity(ftrs_file_size(nx, ny, nt) as usize);
    out.extend_from_slice(&MAGIC);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    out.extend_from_slice(&(nx as u32).to_le_bytes());
    out.extend_from_slice(&(ny as u32).to_le_bytes());
    out.extend_from_slice(&(nt as u32).to_le_bytes());
    out.extend_from_slice(&lx.to_le_bytes());
    out.extend_from_slice(&ly.to_le_bytes());
    for &t in s.times() {
        out.extend_from_slice(&t.to_le_bytes());
    }
    for field in s.fields() {
        for &v in field {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    out
}

/// Writes a series to `path` in the FTRS format.
pub fn write_snapshots(s: &SnapshotSeries, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, snapshots_to_bytes(s)).map_err(|e| Error::io(path, e))
}

fn read_u32(buf: &[u8], offset: usize) -> u32 {
    u32::from_le_bytes(buf[offset..offset + 4].try_into().unwrap())
}

fn read_f64(buf: &[u8], offset: usize) -> f64 {
    f64::from_le_bytes(buf[offset..offset + 8].try_into().unwrap())
}

/// Parses an FTRS byte buffer back into a series.
pub fn snapshots_from_bytes(buf: &[u8]) -> Result<SnapshotSeries> {
    if buf.len() < 4 || buf[0..4] != MAGIC {
        return Err(Error::BadMagic);
    }
    if buf.len() < 36 {
        return Err(Error::TruncatedPayload {
            expected: 36,
            got: buf.len() as u64,
        });
    }
    let version = read_u32(buf, 4);
    if version != FORMAT_VERSION {
        return Err(Error::VersionMismatch {
            got: version,
            expected: FORMAT_VERSION,
        });
    }
    let nx = read_u32(buf, 8) as usize;
    let ny = read_u32(buf, 12) as usize;
    let nt = read_u32(buf, 16) as usize;
    let lx = read_f64(buf, 20);
    let ly = read_f64(buf, 28);

    let expected = ftrs_file_size(nx, ny, nt);
    if (buf.len() as u64) < expected {
        return Err(Error::TruncatedPayload {
            expected,
            got: buf.len() as u64,
        });
    }
    if buf.len() as u64 > expected {
        return Err(Error::TrailingData {
            expected,
            got: buf.len() as u64,
        });
    }

    let grid: Grid = if ny == 1 {
        Grid1D::new(nx, lx)?.into()
    } else {
        Grid2D::new(nx, ny, lx, ly)?.into()
    };

    let mut offset = 36;
    let mut times = Vec::with_capacity(nt);
    for _ in 0..nt {
        times.push(read_f64(buf, offset));
        offset += 8;
    }
    let nodes = nx * ny;
    let mut fields = Vec::with_capacity(nt);
    for _ in 0..nt {
        let mut field = Vec::with_capacity(nodes);
        for _ in 0..nodes {
            field.push(read_f64(buf, offset));
            offset += 8;
        }
        fields.push(field);
    }
    SnapshotSeries::new(grid, times, fields)
}

/// Reads a series from an FTRS file.
pub fn read_snapshots(path: impl AsRef<Path>) -> Result<SnapshotSeries> {
    let path = path.as_ref();
    let buf = fs::read(path).map_err(|e| Error::io(path, e))?;
    snapshots_from_bytes(&buf)
}

/// One named CSV column; integers print plain, floats at 17 significant
/// digits.
#[derive(Debug, Clone)]
pub enum Column {
    Int(String, Vec<i64>),
    Float(String, Vec<f64>),
}

impl Column {
    pub fn name(&self) -> &str {
        match self {
            Column::Int(name, _) => name,
            Column::Float(name, _) => name,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Column::Int(_, v) => v.len(),
            Column::Float(_, v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn cell(&self, row: usize) -> String {
        match self {
            Column::Int(_, v) => format!("{}", v[row]),
            Column::Float(_, v) => format!("{:.16e}", v[row]),
        }
    }
}

/// An equal-length set of named columns.
#[derive(Debug, Clone, Default)]
pub struct Table {
    columns: Vec<Column>,
}

impl Table {
    pub fn new(columns: Vec<Column>) -> Result<Self> {
        if let Some(first) = columns.first() {
            let expected = first.len();
            for col in &columns[1..] {
                if col.len() != expected {
                    return Err(Error::RaggedColumns {
                        name: col.name().to_string(),
                        got: col.len(),
                        expected,
                    });
                }
            }
        }
        Ok(Self { columns })
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn rows(&self) -> usize {
        self.columns.first().map_or(0, Column::len)
    }

    /// Renders the CSV text: header row, then data rows, LF line endings.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        let names: Vec<&str> = self.columns.iter().map(Column::name).collect();
        out.push_str(&names.join(","));
        out.push('\n');
        for row in 0..self.rows() {
            let cells: Vec<String> = self.columns.iter().map(|c| c.cell(row)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// Writes a table to `path` as CSV.
pub fn write_csv(table: &Table, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    file.write_all(table.to_csv_string().as_bytes())
        .map_err(|e| Error::io(path, e))
}

/// Reads a CSV produced by [`write_csv`] back as header names plus rows of
/// f64 cells (integer columns parse as floats).
pub fn read_csv_floats(path: impl AsRef<Path>) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut lines = text.lines();
    let header = lines
        .next()
        .map(|l| l.split(',').map(str::to_string).collect())
        .unwrap_or_default();
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let mut row = Vec::new();
        for cell in line.split(',') {
            row.push(cell.parse::<f64>().map_err(|_| Error::BadCsvCell {
                cell: cell.to_string(),
                line: i + 2,
            })?);
        }
        rows.push(row);
    }
    Ok((header, rows))
}
