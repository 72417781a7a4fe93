//! Signed distance fields from extracted level curves.
//!
//! Every grid node gets the minimal Euclidean distance to the segment set,
//! negated where the field lies below the threshold. Two interchangeable
//! backends compute the same values: a brute-force scan over all segments
//! (the reference) and a uniform bucket grid that prunes far-away
//! segments. Both take the minimum of identical per-segment distances, so
//! their results agree bitwise.

use rayon::prelude::*;

use crate::contour::{extract_zero_level, Point, Segment, SegmentList};
use crate::error::{Error, Result};
use crate::grid::Grid2D;
use crate::series::SnapshotSeries;

/// Distance-query backend selection.
///
/// The brute-force scan is the reference and the default; at desk-scale
/// segment counts its tight loop is hard to beat. The bucket grid prunes
/// candidates and pays off for long, convoluted fronts. Both return
/// identical values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DistanceMethod {
    /// Scan every segment for every node.
    #[default]
    BruteForce,
    /// Uniform bucket grid with ring search.
    BucketGrid,
}

/// A level-set field: per-node signed distances to the threshold curve.
#[derive(Debug, Clone)]
pub struct LevelSetField {
    grid: Grid2D,
    values: Vec<f64>,
    threshold: f64,
}

impl LevelSetField {
    /// Wraps externally supplied level-set values, e.g. an analytic field
    /// standing in for a computed signed distance.
    pub fn from_values(grid: Grid2D, values: Vec<f64>, threshold: f64) -> Result<Self> {
        if values.len() != grid.num_nodes() {
            return Err(Error::FieldGridMismatch {
                got: values.len(),
                expected: grid.num_nodes(),
            });
        }
        if !values.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFiniteField { index: 0 });
        }
        Ok(Self {
            grid,
            values,
            threshold,
        })
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }
}

/// Euclidean distance from `p` to the closed segment `[a, b]`.
pub fn point_segment_distance(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> Result<f64> {
    if a == b {
        return Err(Error::DegenerateSegment);
    }
    let seg = PreparedSegment::new(&Segment {
        a: Point { x: a.0, y: a.1 },
        b: Point { x: b.0, y: b.1 },
    });
    Ok(seg.distance_sq(p.0, p.1).sqrt())
}

#[derive(Clone, Copy)]
struct PreparedSegment {
    ax: f64,
    ay: f64,
    dx: f64,
    dy: f64,
    inv_len_sq: f64,
}

impl PreparedSegment {
    fn new(seg: &Segment) -> Self {
        let dx = seg.b.x - seg.a.x;
        let dy = seg.b.y - seg.a.y;
        Self {
            ax: seg.a.x,
            ay: seg.a.y,
            dx,
            dy,
            inv_len_sq: 1.0 / (dx * dx + dy * dy),
        }
    }

    #[inline]
    fn distance_sq(&self, px: f64, py: f64) -> f64 {
        let rx = px - self.ax;
        let ry = py - self.ay;
        let t = ((rx * self.dx + ry * self.dy) * self.inv_len_sq).clamp(0.0, 1.0);
        let ex = rx - t * self.dx;
        let ey = ry - t * self.dy;
        ex * ex + ey * ey
    }
}

/// Uniform bucket grid over a segment set for pruned minimal-distance
/// queries. Distances returned are identical to a full scan.
pub struct SegmentIndex {
    segments: Vec<PreparedSegment>,
    buckets: Vec<Vec<u32>>,
    nxb: usize,
    nyb: usize,
    cell: f64,
    x0: f64,
    y0: f64,
    bbox: (f64, f64, f64, f64),
}

impl SegmentIndex {
    pub fn build(list: &SegmentList, grid: &Grid2D) -> Self {
        let segments: Vec<PreparedSegment> =
            list.segments().iter().map(PreparedSegment::new).collect();
        // scale buckets with the segment count so ring scans touch few
        // empty buckets, but never below a couple of grid spacings
        let target = (segments.len().max(1) as f64).sqrt();
        let cell = (grid.diagonal() / target).max(2.0 * grid.max_spacing());
        let x0 = 0.0;
        let y0 = 0.0;
        let nxb = (grid.lx() / cell).ceil() as usize + 1;
        let nyb = (grid.ly() / cell).ceil() as usize + 1;
        let mut buckets = vec![Vec::new(); nxb * nyb];
        let clamp_bucket = |v: f64, n: usize| -> usize {
            if v < 0.0 {
                0
            } else {
                (v as usize).min(n - 1)
            }
        };
        let mut bbox = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
        for (id, seg) in list.segments().iter().enumerate() {
            bbox.0 = bbox.0.min(seg.a.x.min(seg.b.x));
            bbox.1 = bbox.1.min(seg.a.y.min(seg.b.y));
            bbox.2 = bbox.2.max(seg.a.x.max(seg.b.x));
            bbox.3 = bbox.3.max(seg.a.y.max(seg.b.y));
            let bx0 = clamp_bucket((seg.a.x.min(seg.b.x) - x0) / cell, nxb);
            let bx1 = clamp_bucket((seg.a.x.max(seg.b.x) - x0) / cell, nxb);
            let by0 = clamp_bucket((seg.a.y.min(seg.b.y) - y0) / cell, nyb);
            let by1 = clamp_bucket((seg.a.y.max(seg.b.y) - y0) / cell, nyb);
            for by in by0..=by1 {
                for bx in bx0..=bx1 {
                    buckets[by * nxb + bx].push(id as u32);
                }
            }
        }
        Self {
            segments,
            buckets,
            nxb,
            nyb,
            cell,
            x0,
            y0,
            bbox,
        }
    }

    /// Minimal distance from `(px, py)` to the segment set.
    pub fn distance(&self, px: f64, py: f64) -> f64 {
        let bx = (((px - self.x0) / self.cell) as isize).clamp(0, self.nxb as isize - 1);
        let by = (((py - self.y0) / self.cell) as isize).clamp(0, self.nyb as isize - 1);
        let max_ring = self.nxb.max(self.nyb) as isize;
        // distance to the segment bounding box lower-bounds the answer;
        // rings whose entire reach (Euclidean diagonal plus one bucket of
        // bbox slack) stays below that bound cannot hold any segment, so
        // the walk can start past them
        let gap_x = (self.bbox.0 - px).max(px - self.bbox.2).max(0.0);
        let gap_y = (self.bbox.1 - py).max(py - self.bbox.3).max(0.0);
        let lower = gap_x.hypot(gap_y);
        let start = ((((lower - self.cell) / (std::f64::consts::SQRT_2 * self.cell)).floor()
            as isize)
            - 2)
        .max(0);
        let mut best = f64::INFINITY;
        for ring in start..=max_ring {
            // any segment in a farther ring is at least (ring - 1) buckets
            // away from the query point
            if ring >= 2 {
                let floor = (ring - 1) as f64 * self.cell;
                if best <= floor * floor {
                    break;
                }
            }
            self.scan_ring(bx, by, ring, px, py, &mut best);
        }
        best.sqrt()
    }

    fn scan_ring(&self, bx: isize, by: isize, ring: isize, px: f64, py: f64, best: &mut f64) {
        let mut visit = |x: isize, y: isize| {
            if x < 0 || y < 0 || x >= self.nxb as isize || y >= self.nyb as isize {
                return;
            }
            for &id in &self.buckets[y as usize * self.nxb + x as usize] {
                let d = self.segments[id as usize].distance_sq(px, py);
                if d < *best {
                    *best = d;
                }
            }
        };
        if ring == 0 {
            visit(bx, by);
            return;
        }
        for x in (bx - ring)..=(bx + ring) {
            visit(x, by - ring);
            visit(x, by + ring);
        }
        for y in (by - ring + 1)..=(by + ring - 1) {
            visit(bx - ring, y);
            visit(bx + ring, y);
        }
    }
}

fn distances_for_nodes(
    grid: &Grid2D,
    list: &SegmentList,
    method: DistanceMethod,
) -> Vec<f64> {
    match method {
        DistanceMethod::BruteForce => {
            let segs: Vec<PreparedSegment> =
                list.segments().iter().map(PreparedSegment::new).collect();
            (0..grid.num_nodes())
                .into_par_iter()
                .map(|i| {
                    let (px, py) = grid.node_position(i);
                    let mut best = f64::INFINITY;
                    for seg in &segs {
                        let d = seg.distance_sq(px, py);
                        if d < best {
                            best = d;
                        }
                    }
                    best.sqrt()
                })
                .collect()
        }
        DistanceMethod::BucketGrid => {
            let index = SegmentIndex::build(list, grid);
            (0..grid.num_nodes())
                .into_par_iter()
                .map(|i| {
                    let (px, py) = grid.node_position(i);
                    index.distance(px, py)
                })
                .collect()
        }
    }
}

/// Signed distance field of one snapshot with the default backend.
///
/// The sign is negative where `field < thr`, positive where `field > thr`,
/// and exact-threshold nodes get `+0`. Fails with [`Error::EmptyContour`]
/// when the field yields no level curve.
pub fn signed_distance_field(field: &[f64], grid: &Grid2D, thr: f64) -> Result<LevelSetField> {
    signed_distance_field_with(field, grid, thr, DistanceMethod::default())
}

/// [`signed_distance_field`] with an explicit backend.
pub fn signed_distance_field_with(
    field: &[f64],
    grid: &Grid2D,
    thr: f64,
    method: DistanceMethod,
) -> Result<LevelSetField> {
    let extraction = extract_zero_level(field, grid, thr)?;
    if extraction.segments.is_empty() {
        return Err(Error::EmptyContour { index: 0 });
    }
    let unsigned = distances_for_nodes(grid, &extraction.segments, method);
    let values = unsigned
        .into_iter()
        .zip(field)
        .map(|(d, &q)| {
            if q < thr {
                -d
            } else if q > thr {
                d
            } else {
                0.0
            }
        })
        .collect();
    Ok(LevelSetField {
        grid: *grid,
        values,
        threshold: thr,
    })
}

/// Signed distance fields for every snapshot of a 2D series.
///
/// The output series shares the input's grid and times; a snapshot without
/// a level crossing fails with [`Error::EmptyContour`] naming its index.
pub fn sdf_series(s: &SnapshotSeries, thr: f64) -> Result<SnapshotSeries> {
    sdf_series_with(s, thr, DistanceMethod::default())
}

/// [`sdf_series`] with an explicit backend.
pub fn sdf_series_with(
    s: &SnapshotSeries,
    thr: f64,
    method: DistanceMethod,
) -> Result<SnapshotSeries> {
    let grid = *s.grid2d()?;
    let mut fields = Vec::with_capacity(s.len());
    for index in 0..s.len() {
        let phi = signed_distance_field_with(s.field(index), &grid, thr, method)
            .map_err(|e| match e {
                Error::EmptyContour { .. } => Error::EmptyContour { index },
                other => other,
            })?;
        fields.push(phi.into_values());
    }
    SnapshotSeries::new(grid, s.times().to_vec(), fields)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid2D;
    use proptest::prelude::*;

    #[test]
    fn point_on_segment() {
        let d = point_segment_distance((0.5, 0.0), (0.0, 0.0), (1.0, 0.0)).unwrap();
        assert_eq!(d, 0.0);
    }

    #[test]
    fn endpoint_case() {
        let d = point_segment_distance((2.0, 0.0), (0.0, 0.0), (1.0, 0.0)).unwrap();
        assert_eq!(d, 1.0);
    }

    #[test]
    fn perpendicular_case() {
        let d = point_segment_distance((0.5, 0.3), (0.0, 0.0), (1.0, 0.0)).unwrap();
        assert!((d - 0.3).abs() < 1e-15);
    }

    #[test]
    fn degenerate_segment_rejected() {
        assert!(matches!(
            point_segment_distance((0.0, 0.0), (1.0, 1.0), (1.0, 1.0)),
            Err(Error::DegenerateSegment)
        ));
    }

    fn disc_field(g: &Grid2D, cx: f64, cy: f64, r: f64, lambda: f64) -> Vec<f64> {
        (0..g.num_nodes())
            .map(|i| {
                let (x, y) = g.node_position(i);
                let d = (x - cx).hypot(y - cy) - r;
                ((d / lambda).tanh() + 1.0) / 2.0
            })
            .collect()
    }

    #[test]
    fn constant_field_has_no_contour() {
        let g = Grid2D::new(4, 4, 1.0, 1.0).unwrap();
        let err = signed_distance_field(&vec![0.3; 16], &g, 0.3).unwrap_err();
        assert!(matches!(err, Error::EmptyContour { .. }));
    }

    #[test]
    fn disc_matches_analytic_distance() {
        let n = 64;
        let g = Grid2D::new(n, n, 1.0, 1.0).unwrap();
        let r = 0.15;
        let field = disc_field(&g, 0.5, 0.5, r, 0.01);
        let phi = signed_distance_field(&field, &g, 0.5).unwrap();
        let tol = 2.0 * g.max_spacing();
        for i in 0..g.num_nodes() {
            let (x, y) = g.node_position(i);
            let exact = (x - 0.5).hypot(y - 0.5) - r;
            if exact.abs() < 0.3 {
                assert!(
                    (phi.values()[i] - exact).abs() <= tol,
                    "node {i}: got {} want {exact}",
                    phi.values()[i]
                );
            }
        }
    }

    #[test]
    fn sign_matches_thresholded_field() {
        let g = Grid2D::new(48, 48, 1.0, 1.0).unwrap();
        let field = disc_field(&g, 0.4, 0.6, 0.2, 0.02);
        let phi = signed_distance_field(&field, &g, 0.5).unwrap();
        for (v, &q) in phi.values().iter().zip(&field) {
            if q < 0.5 {
                assert!(*v < 0.0);
            } else if q > 0.5 {
                assert!(*v >= 0.0);
            } else {
                assert_eq!(*v, 0.0);
                assert!(v.is_sign_positive());
            }
        }
    }

    #[test]
    fn lipschitz_between_adjacent_nodes() {
        let g = Grid2D::new(40, 40, 1.0, 1.0).unwrap();
        let field = disc_field(&g, 0.5, 0.5, 0.22, 0.015);
        let phi = signed_distance_field(&field, &g, 0.5).unwrap();
        let slack = 2.0 * g.max_spacing();
        for iy in 0..g.ny() {
            for ix in 0..g.nx() {
                let v = phi.values()[g.node_index(ix, iy)];
                if ix + 1 < g.nx() {
                    let w = phi.values()[g.node_index(ix + 1, iy)];
                    assert!((v - w).abs() <= g.hx() + slack);
                }
                if iy + 1 < g.ny() {
                    let w = phi.values()[g.node_index(ix, iy + 1)];
                    assert!((v - w).abs() <= g.hy() + slack);
                }
            }
        }
    }

    #[test]
    fn series_propagates_snapshot_index() {
        let g = Grid2D::new(8, 8, 1.0, 1.0).unwrap();
        let with_front = disc_field(&g, 0.5, 0.5, 0.25, 0.05);
        let flat = vec![0.0; g.num_nodes()];
        let s = SnapshotSeries::new(g, vec![0.0, 1.0], vec![with_front, flat]).unwrap();
        match sdf_series(&s, 0.5) {
            Err(Error::EmptyContour { index }) => assert_eq!(index, 1),
            other => panic!("expected EmptyContour, got {other:?}"),
        }
    }

    #[test]
    fn backends_agree_on_long_range_queries() {
        // 128^2 disc: most nodes are many buckets from the front, which
        // exercises the seeded ring start of the bucket index
        let g = Grid2D::new(128, 128, 1.0, 1.0).unwrap();
        let field = disc_field(&g, 0.3, 0.7, 0.1, 0.008);
        let brute =
            signed_distance_field_with(&field, &g, 0.5, DistanceMethod::BruteForce).unwrap();
        let bucket =
            signed_distance_field_with(&field, &g, 0.5, DistanceMethod::BucketGrid).unwrap();
        assert_eq!(brute.values(), bucket.values());
    }

    #[test]
    fn single_snapshot_series_matches_field_call() {
        let g = Grid2D::new(32, 32, 1.0, 1.0).unwrap();
        let field = disc_field(&g, 0.5, 0.5, 0.2, 0.02);
        let s = SnapshotSeries::new(g, vec![0.0], vec![field.clone()]).unwrap();
        let series_phi = sdf_series(&s, 0.5).unwrap();
        let single = signed_distance_field(&field, &g, 0.5).unwrap();
        assert_eq!(series_phi.field(0), single.values());
    }

    proptest! {
        // the bucket index prunes candidates but must return the exact
        // brute-force minimum
        #[test]
        fn bucket_grid_equals_brute_force(values in proptest::collection::vec(0.0f64..1.0, 100)) {
            let g = Grid2D::new(10, 10, 1.0, 1.0).unwrap();
            let thr = 0.5;
            let ex = extract_zero_level(&values, &g, thr).unwrap();
            prop_assume!(!ex.segments.is_empty());
            let brute = signed_distance_field_with(&values, &g, thr, DistanceMethod::BruteForce).unwrap();
            let bucket = signed_distance_field_with(&values, &g, thr, DistanceMethod::BucketGrid).unwrap();
            for (a, b) in brute.values().iter().zip(bucket.values()) {
                prop_assert!((a - b).abs() <= 1e-12, "brute {a} vs bucket {b}");
            }
        }
    }
}
