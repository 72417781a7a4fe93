//! Synthetic datasets with sharp moving fronts.
//!
//! Three generators, each registered by name for runtime selection:
//! `advection1d` (a tanh step translating at constant speed), `disc` (a
//! disc riding a circular path, with either a signed-distance or a
//! paraboloid level-set encoding) and `merging` (two discs that approach
//! and fuse, exercising topology changes).

use crate::error::{Error, Result};
use crate::grid::{Grid1D, Grid2D};
use crate::profile::{FrontShape, TanhProfile};
use crate::series::SnapshotSeries;

fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if !(value > 0.0) || !value.is_finite() {
        return Err(Error::NonPositiveParameter { name, value });
    }
    Ok(())
}

fn check_count(name: &'static str, value: usize, min: usize) -> Result<()> {
    if value < min {
        return Err(Error::ParameterTooSmall { name, min, value });
    }
    Ok(())
}

fn linspace(start: f64, end: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|j| start + (end - start) * j as f64 / (n - 1) as f64)
        .collect()
}

/// A disc of radius `0.15 L` riding a circle of radius `L / 4` around the
/// domain centre, one full revolution over `t` in [0, 1].
#[derive(Debug, Clone, Copy)]
pub struct DiscTrajectory {
    l: f64,
}

impl DiscTrajectory {
    pub fn new(l: f64) -> Result<Self> {
        check_positive("domain size", l)?;
        Ok(Self { l })
    }

    pub fn domain(&self) -> f64 {
        self.l
    }

    pub fn radius(&self) -> f64 {
        0.15 * self.l
    }

    pub fn center(&self, t: f64) -> (f64, f64) {
        let angle = 2.0 * std::f64::consts::PI * t;
        (
            self.l * (0.5 + 0.25 * angle.cos()),
            self.l * (0.5 + 0.25 * angle.sin()),
        )
    }
}

/// Level-set encoding for the moving disc: the true signed distance or a
/// paraboloid sharing its zero level and its gradient there.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PhiKind {
    #[default]
    SignedDistance,
    Paraboloid,
}

/// 1D advection: `phi(x, t) = x - c t` and `q = f_lambda(phi)`.
#[derive(Debug, Clone, Copy)]
pub struct Advection1dConfig {
    pub l: f64,
    pub t_final: f64,
    pub speed: f64,
    pub lambda: f64,
    pub nx: usize,
    pub nt: usize,
}

impl Default for Advection1dConfig {
    fn default() -> Self {
        Self {
            l: 1.0,
            t_final: 1.0,
            speed: 0.5,
            lambda: 0.005,
            nx: 500,
            nt: 50,
        }
    }
}

/// Generates the 1D advection dataset; returns `(q, phi)` series.
pub fn gen_advection_1d(cfg: &Advection1dConfig) -> Result<(SnapshotSeries, SnapshotSeries)> {
    check_positive("domain size", cfg.l)?;
    check_positive("final time", cfg.t_final)?;
    check_positive("speed", cfg.speed)?;
    check_count("nx", cfg.nx, 2)?;
    check_count("nt", cfg.nt, 2)?;
    let front = TanhProfile::new(cfg.lambda)?;
    let grid = Grid1D::new(cfg.nx, cfg.l)?;
    let times = linspace(0.0, cfg.t_final, cfg.nt);
    let mut q_fields = Vec::with_capacity(cfg.nt);
    let mut phi_fields = Vec::with_capacity(cfg.nt);
    for &t in &times {
        let shift = cfg.speed * t;
        let phi: Vec<f64> = (0..cfg.nx).map(|i| grid.x(i) - shift).collect();
        q_fields.push(phi.iter().map(|&p| front.eval(p)).collect());
        phi_fields.push(phi);
    }
    Ok((
        SnapshotSeries::new(grid, times.clone(), q_fields)?,
        SnapshotSeries::new(grid, times, phi_fields)?,
    ))
}

/// Moving disc on a square grid.
#[derive(Debug, Clone, Copy)]
pub struct DiscConfig {
    pub l: f64,
    pub lambda: f64,
    pub nx: usize,
    pub nt: usize,
    pub phi_kind: PhiKind,
}

impl Default for DiscConfig {
    fn default() -> Self {
        Self {
            l: 1.0,
            lambda: 0.01,
            nx: 256,
            nt: 60,
            phi_kind: PhiKind::SignedDistance,
        }
    }
}

/// Generates the moving-disc dataset; returns `(q, phi)` series sampled at
/// `nt` times over [0, 1].
///
/// `q` is always built from the signed-distance field; `phi_kind` only
/// selects which level-set encoding of the same front the `phi` series
/// carries.
pub fn gen_moving_disc(
    traj: &DiscTrajectory,
    lambda: f64,
    nx: usize,
    nt: usize,
    phi_kind: PhiKind,
) -> Result<(SnapshotSeries, SnapshotSeries)> {
    check_count("nx", nx, 2)?;
    check_count("nt", nt, 2)?;
    let front = TanhProfile::new(lambda)?;
    let grid = Grid2D::new(nx, nx, traj.domain(), traj.domain())?;
    let r = traj.radius();
    let times = linspace(0.0, 1.0, nt);
    let mut q_fields = Vec::with_capacity(nt);
    let mut phi_fields = Vec::with_capacity(nt);
    for &t in &times {
        let (cx, cy) = traj.center(t);
        let mut q = Vec::with_capacity(grid.num_nodes());
        let mut phi = Vec::with_capacity(grid.num_nodes());
        for i in 0..grid.num_nodes() {
            let (x, y) = grid.node_position(i);
            let dist = (x - cx).hypot(y - cy);
            let sd = dist - r;
            q.push(front.eval(sd));
            phi.push(match phi_kind {
                PhiKind::SignedDistance => sd,
                PhiKind::Paraboloid => (dist * dist - r * r) / (2.0 * r),
            });
        }
        q_fields.push(q);
        phi_fields.push(phi);
    }
    Ok((
        SnapshotSeries::new(grid, times.clone(), q_fields)?,
        SnapshotSeries::new(grid, times, phi_fields)?,
    ))
}

/// Convenience wrapper over [`gen_moving_disc`] driven by a config.
pub fn gen_moving_disc_cfg(cfg: &DiscConfig) -> Result<(SnapshotSeries, SnapshotSeries)> {
    let traj = DiscTrajectory::new(cfg.l)?;
    gen_moving_disc(&traj, cfg.lambda, cfg.nx, cfg.nt, cfg.phi_kind)
}

/// Two discs approaching until they merge.
#[derive(Debug, Clone, Copy)]
pub struct MergingConfig {
    pub l: f64,
    pub r1: f64,
    pub r2: f64,
    pub lambda: f64,
    pub nx: usize,
    pub nt: usize,
}

impl Default for MergingConfig {
    fn default() -> Self {
        // lambda chosen so the tanh tail saturates within the default
        // five-spacing sample band at nx = 256
        Self {
            l: 1.0,
            r1: 0.12,
            r2: 0.12,
            lambda: 0.005,
            nx: 256,
            nt: 60,
        }
    }
}

/// Generates the merging-discs dataset: centres move linearly from
/// `(0.3 L, 0.5 L)` and `(0.7 L, 0.5 L)` to the domain centre, so early
/// snapshots carry two front curves and late snapshots one.
pub fn gen_merging_discs(cfg: &MergingConfig) -> Result<SnapshotSeries> {
    check_positive("domain size", cfg.l)?;
    check_positive("r1", cfg.r1)?;
    check_positive("r2", cfg.r2)?;
    check_count("nx", cfg.nx, 2)?;
    check_count("nt", cfg.nt, 2)?;
    let front = TanhProfile::new(cfg.lambda)?;
    let grid = Grid2D::new(cfg.nx, cfg.nx, cfg.l, cfg.l)?;
    let times = linspace(0.0, 1.0, cfg.nt);
    let mid = 0.5 * cfg.l;
    let mut fields = Vec::with_capacity(cfg.nt);
    for &t in &times {
        let c1 = (0.3 * cfg.l + t * (mid - 0.3 * cfg.l), mid);
        let c2 = (0.7 * cfg.l + t * (mid - 0.7 * cfg.l), mid);
        let field: Vec<f64> = (0..grid.num_nodes())
            .map(|i| {
                let (x, y) = grid.node_position(i);
                let d1 = (x - c1.0).hypot(y - c1.1) - cfg.r1;
                let d2 = (x - c2.0).hypot(y - c2.1) - cfg.r2;
                front.eval(d1.min(d2))
            })
            .collect();
        fields.push(field);
    }
    SnapshotSeries::new(grid, times, fields)
}

/// Numerical rank of the paraboloid level-set stack on the default disc
/// configuration: the count of singular values above `1e-10` of the
/// largest. The paraboloid encoding spans three spatial functions, so this
/// returns 3.
pub fn rank_of_paraboloid_stack() -> Result<usize> {
    let cfg = DiscConfig {
        phi_kind: PhiKind::Paraboloid,
        ..DiscConfig::default()
    };
    let (_, phi) = gen_moving_disc_cfg(&cfg)?;
    let factors = crate::lowrank::thin_svd(&crate::series::series_to_matrix(&phi))?;
    Ok(crate::lowrank::numerical_rank(&factors, 1e-10))
}

/// Everything a generator can produce: the observable field and, when the
/// construction defines one, the analytic level-set series.
pub struct GeneratedSet {
    pub q: SnapshotSeries,
    pub phi: Option<SnapshotSeries>,
}

/// Shared parameter set for the registered generators; each generator
/// reads the fields it understands. `None` falls back to the generator's
/// own default.
#[derive(Debug, Clone, Copy)]
pub struct GenConfig {
    pub l: f64,
    pub t_final: f64,
    pub speed: f64,
    pub lambda: Option<f64>,
    pub nx: Option<usize>,
    pub nt: Option<usize>,
    pub phi_kind: PhiKind,
    pub r1: f64,
    pub r2: f64,
}

impl Default for GenConfig {
    fn default() -> Self {
        Self {
            l: 1.0,
            t_final: 1.0,
            speed: 0.5,
            lambda: None,
            nx: None,
            nt: None,
            phi_kind: PhiKind::SignedDistance,
            r1: 0.12,
            r2: 0.12,
        }
    }
}

/// A named dataset generator selectable at runtime.
pub trait DatasetGenerator: Sync {
    fn name(&self) -> &'static str;
    fn summary(&self) -> &'static str;
    fn generate(&self, cfg: &GenConfig) -> Result<GeneratedSet>;
}

struct Advection1d;

impl DatasetGenerator for Advection1d {
    fn name(&self) -> &'static str {
        "advection1d"
    }

    fn summary(&self) -> &'static str {
        "1D tanh step translating at constant speed"
    }

    fn generate(&self, cfg: &GenConfig) -> Result<GeneratedSet> {
        let defaults = Advection1dConfig::default();
        let (q, phi) = gen_advection_1d(&Advection1dConfig {
            l: cfg.l,
            t_final: cfg.t_final,
            speed: cfg.speed,
            lambda: cfg.lambda.unwrap_or(defaults.lambda),
            nx: cfg.nx.unwrap_or(defaults.nx),
            nt: cfg.nt.unwrap_or(defaults.nt),
        })?;
        Ok(GeneratedSet { q, phi: Some(phi) })
    }
}

struct MovingDisc;

impl DatasetGenerator for MovingDisc {
    fn name(&self) -> &'static str {
        "disc"
    }

    fn summary(&self) -> &'static str {
        "disc of radius 0.15 L on a circular path"
    }

    fn generate(&self, cfg: &GenConfig) -> Result<GeneratedSet> {
        let defaults = DiscConfig::default();
        let traj = DiscTrajectory::new(cfg.l)?;
        let (q, phi) = gen_moving_disc(
            &traj,
            cfg.lambda.unwrap_or(defaults.lambda),
            cfg.nx.unwrap_or(defaults.nx),
            cfg.nt.unwrap_or(defaults.nt),
            cfg.phi_kind,
        )?;
        Ok(GeneratedSet { q, phi: Some(phi) })
    }
}

struct MergingDiscs;

impl DatasetGenerator for MergingDiscs {
    fn name(&self) -> &'static str {
        "merging"
    }

    fn summary(&self) -> &'static str {
        "two discs approaching until their fronts fuse"
    }

    fn generate(&self, cfg: &GenConfig) -> Result<GeneratedSet> {
        let defaults = MergingConfig::default();
        let q = gen_merging_discs(&MergingConfig {
            l: cfg.l,
            r1: cfg.r1,
            r2: cfg.r2,
            lambda: cfg.lambda.unwrap_or(defaults.lambda),
            nx: cfg.nx.unwrap_or(defaults.nx),
            nt: cfg.nt.unwrap_or(defaults.nt),
        })?;
        Ok(GeneratedSet { q, phi: None })
    }
}

static GENERATORS: &[&dyn DatasetGenerator] = &[&Advection1d, &MovingDisc, &MergingDiscs];

/// All registered generators.
pub fn generators() -> &'static [&'static dyn DatasetGenerator] {
    GENERATORS
}

/// Looks a generator up by its registered name.
pub fn generator_by_name(name: &str) -> Result<&'static dyn DatasetGenerator> {
    GENERATORS
        .iter()
        .find(|g| g.name() == name)
        .copied()
        .ok_or_else(|| Error::UnknownName {
            kind: "generator",
            name: name.to_string(),
            available: GENERATORS
                .iter()
                .map(|g| g.name())
                .collect::<Vec<_>>()
                .join(", "),
        })
}
