//! Discrete level-curve extraction by per-cell marching squares.
//!
//! Each grid cell is classified by which of its four corners lie above the
//! threshold; the standard 16-case table connects the linearly
//! interpolated edge crossings into 0, 1 or 2 line segments. Segments are
//! left unordered: downstream distance queries only need the set, and
//! chaining would break when fronts split or merge.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::grid::Grid2D;

/// Relative perturbation applied to nodes that hit the threshold exactly.
const THRESHOLD_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub fn length(&self) -> f64 {
        (self.a.x - self.b.x).hypot(self.a.y - self.b.y)
    }

    pub fn midpoint(&self) -> Point {
        Point {
            x: 0.5 * (self.a.x + self.b.x),
            y: 0.5 * (self.a.y + self.b.y),
        }
    }
}

/// The discrete level curve as an unordered set of line segments.
#[derive(Debug, Clone, Default)]
pub struct SegmentList {
    segments: Vec<Segment>,
}

impl SegmentList {
    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn total_length(&self) -> f64 {
        self.segments.iter().map(Segment::length).sum()
    }

    /// Length-weighted mean of segment midpoints; `None` when empty.
    /// For a closed curve this approximates the curve's centroid.
    pub fn length_weighted_centroid(&self) -> Option<Point> {
        if self.segments.is_empty() {
            return None;
        }
        let mut wx = 0.0;
        let mut wy = 0.0;
        let mut w = 0.0;
        for seg in &self.segments {
            let len = seg.length();
            let mid = seg.midpoint();
            wx += len * mid.x;
            wy += len * mid.y;
            w += len;
        }
        Some(Point {
            x: wx / w,
            y: wy / w,
        })
    }

    /// Number of connected components under exact endpoint adjacency.
    ///
    /// Crossings shared between neighbouring cells are computed from the
    /// same inputs in the same order, so shared endpoints match bitwise.
    pub fn component_count(&self) -> usize {
        let mut ids: HashMap<(u64, u64), usize> = HashMap::new();
        let mut parent: Vec<usize> = Vec::new();

        fn find(parent: &mut Vec<usize>, mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }

        let mut node_id = |p: &Point, parent: &mut Vec<usize>| -> usize {
            let key = (p.x.to_bits(), p.y.to_bits());
            *ids.entry(key).or_insert_with(|| {
                let id = parent.len();
                parent.push(id);
                id
            })
        };

        for seg in &self.segments {
            let a = node_id(&seg.a, &mut parent);
            let b = node_id(&seg.b, &mut parent);
            let ra = find(&mut parent, a);
            let rb = find(&mut parent, b);
            if ra != rb {
                parent[ra] = rb;
            }
        }
        let total = parent.len();
        (0..total)
            .filter(|&i| find(&mut parent, i) == i)
            .count()
    }
}

/// Result of a level-curve extraction.
#[derive(Debug, Clone)]
pub struct Extraction {
    pub segments: SegmentList,
    /// Set when the threshold lies outside `[min, max]` of the field, i.e.
    /// no front is present in this snapshot.
    pub threshold_outside_range: bool,
}

/// Fraction along an edge at which the linear interpolant hits `thr`.
///
/// Requires the endpoint values to straddle the threshold strictly; the
/// returned fraction lies in (0, 1) measured from `q_a`.
pub fn crossing_on_edge(q_a: f64, q_b: f64, thr: f64) -> Result<f64> {
    if !((q_a - thr) * (q_b - thr) < 0.0) {
        return Err(Error::NoEdgeCrossing {
            a: q_a,
            b: q_b,
            threshold: thr,
        });
    }
    Ok((thr - q_a) / (q_b - q_a))
}

// Cell edges, with node order fixed by ascending flat index so that the
// crossing on an edge shared by two cells is computed identically in both.
#[derive(Clone, Copy)]
enum CellEdge {
    Bottom,
    Right,
    Top,
    Left,
}

/// Extracts the level curve of `field` at `thr` as line segments in
/// physical coordinates.
///
/// Nodes exactly at the threshold are shifted to `thr + 1e-12 * range`
/// before classification. A threshold outside the field's value range is
/// not an error: it returns an empty list with the warning flag set.
pub fn extract_zero_level(field: &[f64], grid: &Grid2D, thr: f64) -> Result<Extraction> {
    if field.len() != grid.num_nodes() {
        return Err(Error::FieldGridMismatch {
            got: field.len(),
            expected: grid.num_nodes(),
        });
    }
    if !field.iter().all(|v| v.is_finite()) {
        return Err(Error::NonFiniteField { index: 0 });
    }

    let (mut min, mut max) = (f64::INFINITY, f64::NEG_INFINITY);
    for &v in field {
        min = min.min(v);
        max = max.max(v);
    }
    if thr < min || thr > max {
        return Ok(Extraction {
            segments: SegmentList::default(),
            threshold_outside_range: true,
        });
    }

    let eps = THRESHOLD_EPS * (max - min);
    let perturb = |v: f64| if v == thr { thr + eps } else { v };

    let nx = grid.nx();
    let ny = grid.ny();
    let mut segments = Vec::new();

    for iy in 0..ny - 1 {
        for ix in 0..nx - 1 {
            let v0 = perturb(field[grid.node_index(ix, iy)]);
            let v1 = perturb(field[grid.node_index(ix + 1, iy)]);
            let v2 = perturb(field[grid.node_index(ix + 1, iy + 1)]);
            let v3 = perturb(field[grid.node_index(ix, iy + 1)]);

            let case = (v0 > thr) as usize
                | ((v1 > thr) as usize) << 1
                | ((v2 > thr) as usize) << 2
                | ((v3 > thr) as usize) << 3;
            if case == 0 || case == 15 {
                continue;
            }

            let x0 = grid.x(ix);
            let x1 = grid.x(ix + 1);
            let y0 = grid.y(iy);
            let y1 = grid.y(iy + 1);

            let cross = |edge: CellEdge| -> Point {
                let (qa, qb, pa, pb) = match edge {
                    CellEdge::Bottom => (v0, v1, (x0, y0), (x1, y0)),
                    CellEdge::Right => (v1, v2, (x1, y0), (x1, y1)),
                    CellEdge::Top => (v3, v2, (x0, y1), (x1, y1)),
                    CellEdge::Left => (v0, v3, (x0, y0), (x0, y1)),
                };
                let s = (thr - qa) / (qb - qa);
                Point {
                    x: pa.0 + s * (pb.0 - pa.0),
                    y: pa.1 + s * (pb.1 - pa.1),
                }
            };

            use CellEdge::*;
            let pairs: &[(CellEdge, CellEdge)] = match case {
                1 => &[(Left, Bottom)],
                2 => &[(Bottom, Right)],
                3 => &[(Left, Right)],
                4 => &[(Right, Top)],
                5 => {
                    // saddle: resolve by the cell-centre average
                    if 0.25 * (v0 + v1 + v2 + v3) > thr {
                        &[(Bottom, Right), (Top, Left)]
                    } else {
                        &[(Left, Bottom), (Right, Top)]
                    }
                }
                6 => &[(Bottom, Top)],
                7 => &[(Left, Top)],
                8 => &[(Left, Top)],
                9 => &[(Bottom, Top)],
                10 => {
                    if 0.25 * (v0 + v1 + v2 + v3) > thr {
                        &[(Left, Bottom), (Right, Top)]
                    } else {
                        &[(Bottom, Right), (Top, Left)]
                    }
                }
                11 => &[(Right, Top)],
                12 => &[(Left, Right)],
                13 => &[(Bottom, Right)],
                14 => &[(Left, Bottom)],
                _ => unreachable!(),
            };

            for &(ea, eb) in pairs {
                let a = cross(ea);
                let b = cross(eb);
                if a != b {
                    segments.push(Segment { a, b });
                }
            }
        }
    }

    Ok(Extraction {
        segments: SegmentList { segments },
        threshold_outside_range: false,
    })
}

/// Threshold crossings per horizontal gridline: for every row, the number
/// of sign changes of `field - thr` along x. A sharp front crosses each
/// row it passes through once; low-rank artifacts multiply the count.
pub fn row_crossing_counts(field: &[f64], grid: &Grid2D, thr: f64) -> Vec<usize> {
    let nx = grid.nx();
    (0..grid.ny())
        .map(|iy| {
            let mut count = 0;
            let mut prev_hot = field[grid.node_index(0, iy)] > thr;
            for ix in 1..nx {
                let hot = field[grid.node_index(ix, iy)] > thr;
                if hot != prev_hot {
                    count += 1;
                }
                prev_hot = hot;
            }
            count
        })
        .collect()
}
