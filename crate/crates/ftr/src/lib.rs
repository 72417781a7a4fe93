//! Front transport reconstruction (FTR) for snapshot data with sharp
//! moving fronts.
//!
//! Linear truncation of a snapshot matrix converges slowly when the data
//! transports a steep front: the singular values of the raw field decay
//! slowly, truncations smear the front into staircase artifacts and leave
//! the physical value range. This crate instead represents the data as
//! `q = f(phi)`, where `phi` is an auxiliary level-set field whose zero
//! level tracks the front and `f` is a scalar front-shape function. The
//! level-set stack has a much better low-rank structure, and the nonlinear
//! map keeps reconstructions sharp, single-fronted and inside the training
//! range — including through front splits and merges.
//!
//! The pipeline, given only field snapshots `q(x, t_i)` and a threshold:
//!
//! 1. extract the threshold level curve per snapshot ([`contour`]),
//! 2. build signed distance fields from it ([`distance`]),
//! 3. factor the level-set stack by a thin SVD ([`lowrank`]),
//! 4. estimate the front shape from samples near the front ([`profile`]),
//! 5. reconstruct `f(phi_n)` at any retained rank and compare against the
//!    POD baseline ([`reconstruct`]).
//!
//! Synthetic benchmark datasets live in [`synth`]; snapshot files and CSV
//! reports in [`io`]. Variant families — dataset generators, reduction
//! methods, distance backends — sit behind traits and are selectable by
//! name at runtime.

pub mod contour;
pub mod distance;
mod error;
pub mod grid;
pub mod io;
pub mod lowrank;
pub mod profile;
pub mod reconstruct;
pub mod series;
pub mod synth;

pub use error::{Error, Result};
pub use grid::{Grid, Grid1D, Grid2D};
pub use series::{matrix_to_series, series_to_matrix, SnapshotMatrix, SnapshotSeries};

/// Re-export of the dense matrix type used throughout the public API.
pub use nalgebra::DMatrix;

/// Caps the global thread pool used for per-node parallel work. Returns
/// false when a pool already exists; call once, before any parallel work.
/// Results do not depend on the thread count.
pub fn set_thread_cap(threads: usize) -> bool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .is_ok()
}
