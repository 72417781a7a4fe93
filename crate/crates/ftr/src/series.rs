//! Snapshot containers and the snapshot-matrix view.
//!
//! A [`SnapshotSeries`] stores `N` full field samples over a fixed grid,
//! one per time stamp. The [`SnapshotMatrix`] view stacks them as columns:
//! entry `(i, j)` is the value at flat node `i` of snapshot `j`. The node
//! order is the grid's row-major order with x fastest, so matrix columns
//! can be reshaped back to images deterministically.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::grid::Grid;

/// An ordered set of field samples over a fixed grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotSeries {
    grid: Grid,
    times: Vec<f64>,
    fields: Vec<Vec<f64>>,
}

impl SnapshotSeries {
    /// Validates node counts, strictly increasing times and finiteness.
    pub fn new(grid: impl Into<Grid>, times: Vec<f64>, fields: Vec<Vec<f64>>) -> Result<Self> {
        let grid = grid.into();
        if fields.is_empty() || times.is_empty() {
            return Err(Error::EmptySeries);
        }
        if times.len() != fields.len() {
            return Err(Error::FieldSizeMismatch {
                index: 0,
                got: fields.len(),
                expected: times.len(),
            });
        }
        let nodes = grid.num_nodes();
        for (index, field) in fields.iter().enumerate() {
            if field.len() != nodes {
                return Err(Error::FieldSizeMismatch {
                    index,
                    got: field.len(),
                    expected: nodes,
                });
            }
            if !field.iter().all(|v| v.is_finite()) {
                return Err(Error::NonFiniteField { index });
            }
        }
        for (index, pair) in times.windows(2).enumerate() {
            if !(pair[1] > pair[0]) {
                return Err(Error::TimesNotIncreasing { index: index + 1 });
            }
        }
        if !times.iter().all(|t| t.is_finite()) {
            return Err(Error::TimesNotIncreasing { index: 0 });
        }
        Ok(Self {
            grid,
            times,
            fields,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn grid2d(&self) -> Result<&crate::grid::Grid2D> {
        self.grid.as_two()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.fields.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fields.is_empty()
    }

    pub fn field(&self, index: usize) -> &[f64] {
        &self.fields[index]
    }

    pub fn fields(&self) -> &[Vec<f64>] {
        &self.fields
    }

    /// Global (min, max) over all snapshots.
    pub fn value_range(&self) -> (f64, f64) {
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for field in &self.fields {
            for &v in field {
                min = min.min(v);
                max = max.max(v);
            }
        }
        (min, max)
    }
}

/// Column-per-snapshot matrix of a series: `rows = nodes`, `cols = N`.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotMatrix {
    data: DMatrix<f64>,
}

impl SnapshotMatrix {
    /// Wraps a raw matrix, rejecting non-finite entries.
    pub fn new(data: DMatrix<f64>) -> Result<Self> {
        if !data.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFiniteMatrix);
        }
        Ok(Self { data })
    }

    pub fn rows(&self) -> usize {
        self.data.nrows()
    }

    pub fn cols(&self) -> usize {
        self.data.ncols()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.data
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.data
    }
}

/// Stacks the snapshots of `s` as matrix columns in time order.
pub fn series_to_matrix(s: &SnapshotSeries) -> SnapshotMatrix {
    let rows = s.grid().num_nodes();
    let cols = s.len();
    let mut data = DMatrix::zeros(rows, cols);
    for (j, field) in s.fields().iter().enumerate() {
        data.column_mut(j).copy_from_slice(field);
    }
    SnapshotMatrix { data }
}

/// Reshapes matrix columns back into a series over `grid` at `times`.
///
/// Exact inverse of [`series_to_matrix`] when given the original grid and
/// times.
pub fn matrix_to_series(
    m: &DMatrix<f64>,
    grid: impl Into<Grid>,
    times: &[f64],
) -> Result<SnapshotSeries> {
    let grid = grid.into();
    if m.nrows() != grid.num_nodes() || m.ncols() != times.len() {
        return Err(Error::MatrixShapeMismatch {
            rows: m.nrows(),
            cols: m.ncols(),
            expected_rows: grid.num_nodes(),
            expected_cols: times.len(),
        });
    }
    let fields = (0..m.ncols())
        .map(|j| m.column(j).iter().copied().collect())
        .collect();
    SnapshotSeries::new(grid, times.to_vec(), fields)
}
