//! Front transport reconstruction and the POD baseline.
//!
//! The FTR model replaces the field itself by an auxiliary level-set
//! series: extract the front as the threshold level curve, build signed
//! distance fields, factor their snapshot matrix, and estimate a single
//! front-shape function from samples near the front. A rank-n
//! reconstruction is then `f(phi_n)` — the nonlinear map keeps fronts
//! sharp and values inside the training range, where the linear POD
//! truncation `q_n` smears them and overshoots.
//!
//! Both reductions implement [`ReductionMethod`] and are registered by
//! name (`pod`, `ftr`) for runtime selection.

use nalgebra::DMatrix;

use crate::distance::{sdf_series, LevelSetField};
use crate::error::{Error, Result};
use crate::grid::Grid2D;
use crate::io::{Column, Table};
use crate::lowrank::{frobenius_norm, spectral_norm, thin_svd, truncate, SvdFactors};
use crate::profile::{collect_front_samples, fit_profile, FrontProfile, FrontShape, SampleSet};
use crate::series::{matrix_to_series, series_to_matrix, SnapshotSeries};

/// Default number of support points for the fitted front profile; odd so
/// the support contains 0.
pub const DEFAULT_SUPPORT_SIZE: usize = 201;

/// Default sample band in grid spacings.
pub const DEFAULT_BAND_SPACINGS: f64 = 5.0;

/// Band width used when none is given: five grid spacings.
pub fn default_band(grid: &Grid2D) -> f64 {
    DEFAULT_BAND_SPACINGS * grid.max_spacing()
}

/// Applies a front-shape map entrywise.
pub fn apply_front_shape(shape: &impl FrontShape, m: &DMatrix<f64>) -> DMatrix<f64> {
    m.map(|v| shape.eval(v))
}

fn check_threshold(series: &SnapshotSeries, threshold: f64) -> Result<()> {
    let (min, max) = series.value_range();
    if !threshold.is_finite() || threshold < min || threshold > max {
        return Err(Error::ThresholdOutOfRange {
            threshold,
            min,
            max,
        });
    }
    Ok(())
}

/// A fitted FTR model: the factored level-set stack plus the front shape.
#[derive(Debug, Clone)]
pub struct FtrModel {
    threshold: f64,
    band: f64,
    phi_factors: SvdFactors,
    profile: FrontProfile,
    grid: Grid2D,
    times: Vec<f64>,
}

impl FtrModel {
    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn band(&self) -> f64 {
        self.band
    }

    pub fn phi_factors(&self) -> &SvdFactors {
        &self.phi_factors
    }

    pub fn profile(&self) -> &FrontProfile {
        &self.profile
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn rank(&self) -> usize {
        self.phi_factors.rank()
    }
}

/// Fits an FTR model to 2D snapshot data: signed distance fields at
/// `threshold`, thin SVD of their stack, and a front profile estimated
/// from the pooled near-front samples of all snapshots.
pub fn ftr_decompose(
    series: &SnapshotSeries,
    threshold: f64,
    band: f64,
    support_size: usize,
) -> Result<FtrModel> {
    check_threshold(series, threshold)?;
    let phi = sdf_series(series, threshold)?;
    ftr_decompose_with_phi(series, &phi, threshold, band, support_size)
}

/// Fits an FTR model with an externally supplied level-set series, e.g. an
/// analytic encoding of the same front, in place of computed signed
/// distance fields.
pub fn ftr_decompose_with_phi(
    series: &SnapshotSeries,
    phi: &SnapshotSeries,
    threshold: f64,
    band: f64,
    support_size: usize,
) -> Result<FtrModel> {
    check_threshold(series, threshold)?;
    let grid = *series.grid2d()?;
    if phi.grid() != series.grid() || phi.len() != series.len() {
        return Err(Error::FieldGridMismatch {
            got: phi.grid().num_nodes() * phi.len(),
            expected: grid.num_nodes() * series.len(),
        });
    }
    let phi_factors = thin_svd(&series_to_matrix(phi))?;
    let mut samples = SampleSet::default();
    for i in 0..series.len() {
        let level = LevelSetField::from_values(grid, phi.field(i).to_vec(), threshold)?;
        let snapshot_samples = collect_front_samples(&level, series.field(i), band)?;
        samples.extend(&snapshot_samples);
    }
    let profile = fit_profile(&samples, support_size, band)?;
    Ok(FtrModel {
        threshold,
        band,
        phi_factors,
        profile,
        grid,
        times: series.times().to_vec(),
    })
}

/// Rank-n FTR reconstruction: `f(phi_n)` evaluated nodewise.
pub fn ftr_reconstruct(model: &FtrModel, n: usize) -> Result<SnapshotSeries> {
    let phi_n = truncate(&model.phi_factors, n)?;
    let q = apply_front_shape(&model.profile, phi_n.matrix());
    matrix_to_series(&q, model.grid, &model.times)
}

/// A fitted POD basis of the raw snapshot matrix.
#[derive(Debug, Clone)]
pub struct PodModel {
    factors: SvdFactors,
    grid: crate::grid::Grid,
    times: Vec<f64>,
}

impl PodModel {
    pub fn factors(&self) -> &SvdFactors {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.rank()
    }

    pub fn reconstruct(&self, n: usize) -> Result<SnapshotSeries> {
        let xn = truncate(&self.factors, n)?;
        matrix_to_series(xn.matrix(), self.grid, &self.times)
    }
}

/// Factors the snapshot matrix of `series` for POD truncations.
pub fn pod_fit(series: &SnapshotSeries) -> Result<PodModel> {
    Ok(PodModel {
        factors: thin_svd(&series_to_matrix(series))?,
        grid: *series.grid(),
        times: series.times().to_vec(),
    })
}

/// Rank-n POD reconstruction of a series.
pub fn pod_reconstruct(series: &SnapshotSeries, n: usize) -> Result<SnapshotSeries> {
    pod_fit(series)?.reconstruct(n)
}

/// Parameters shared by the registered reduction methods. POD ignores all
/// of them; FTR reads the threshold, band and support size.
#[derive(Debug, Clone, Copy)]
pub struct FitParams {
    pub threshold: f64,
    pub band: Option<f64>,
    pub support_size: usize,
}

impl FitParams {
    pub fn new(threshold: f64) -> Self {
        Self {
            threshold,
            band: None,
            support_size: DEFAULT_SUPPORT_SIZE,
        }
    }
}

/// A reduced representation that can reconstruct the data at any retained
/// rank up to [`rank`](ReducedModel::rank).
pub trait ReducedModel: Send + Sync {
    fn rank(&self) -> usize;
    fn reconstruct(&self, n: usize) -> Result<SnapshotSeries>;
}

impl ReducedModel for FtrModel {
    fn rank(&self) -> usize {
        self.phi_factors.rank()
    }

    fn reconstruct(&self, n: usize) -> Result<SnapshotSeries> {
        ftr_reconstruct(self, n)
    }
}

impl ReducedModel for PodModel {
    fn rank(&self) -> usize {
        self.rank()
    }

    fn reconstruct(&self, n: usize) -> Result<SnapshotSeries> {
        PodModel::reconstruct(self, n)
    }
}

/// A named model-reduction strategy selectable at runtime.
pub trait ReductionMethod: Sync {
    fn name(&self) -> &'static str;
    fn summary(&self) -> &'static str;
    fn fit(&self, series: &SnapshotSeries, params: &FitParams) -> Result<Box<dyn ReducedModel>>;
}

struct PodMethod;

impl ReductionMethod for PodMethod {
    fn name(&self) -> &'static str {
        "pod"
    }

    fn summary(&self) -> &'static str {
        "linear truncation of the snapshot matrix"
    }

    fn fit(&self, series: &SnapshotSeries, _params: &FitParams) -> Result<Box<dyn ReducedModel>> {
        Ok(Box::new(pod_fit(series)?))
    }
}

struct FtrMethod;

impl ReductionMethod for FtrMethod {
    fn name(&self) -> &'static str {
        "ftr"
    }

    fn summary(&self) -> &'static str {
        "front-shape map over a low-rank level-set field"
    }

    fn fit(&self, series: &SnapshotSeries, params: &FitParams) -> Result<Box<dyn ReducedModel>> {
        let grid = *series.grid2d()?;
        let band = params.band.unwrap_or_else(|| default_band(&grid));
        Ok(Box::new(ftr_decompose(
            series,
            params.threshold,
            band,
            params.support_size,
        )?))
    }
}

static METHODS: &[&dyn ReductionMethod] = &[&PodMethod, &FtrMethod];

/// All registered reduction methods.
pub fn methods() -> &'static [&'static dyn ReductionMethod] {
    METHODS
}

/// Looks a reduction method up by its registered name.
pub fn method_by_name(name: &str) -> Result<&'static dyn ReductionMethod> {
    METHODS
        .iter()
        .find(|m| m.name() == name)
        .copied()
        .ok_or_else(|| Error::UnknownName {
            kind: "method",
            name: name.to_string(),
            available: METHODS
                .iter()
                .map(|m| m.name())
                .collect::<Vec<_>>()
                .join(", "),
        })
}

/// Which norms to evaluate in an error report. Frobenius columns are
/// always computed; the spectral columns are filled with NaN unless
/// requested.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NormSelect {
    Frobenius,
    Spectral,
    #[default]
    Both,
}

impl NormSelect {
    fn with_spectral(self) -> bool {
        !matches!(self, NormSelect::Frobenius)
    }
}

/// Per-rank relative errors of POD and FTR against the same data.
///
/// `delta_f` is the rank-independent floor `|q - f(phi)| / |q|` reached at
/// full rank; `bound` adds the front-steepness times the next singular
/// value of the level-set stack, the first-order truncation term.
#[derive(Debug, Clone)]
pub struct ErrorReport {
    pub modes: Vec<usize>,
    pub pod_rel_fro: Vec<f64>,
    pub ftr_rel_fro: Vec<f64>,
    pub phi_rel_fro: Vec<f64>,
    pub delta_f: f64,
    pub bound: Vec<f64>,
    pub pod_rel_spec: Vec<f64>,
    pub ftr_rel_spec: Vec<f64>,
}

impl ErrorReport {
    /// The fixed CSV column layout of the report.
    pub fn to_table(&self) -> Table {
        let rows = self.modes.len();
        Table::new(vec![
            Column::Int("n".into(), self.modes.iter().map(|&n| n as i64).collect()),
            Column::Float("pod_rel_fro".into(), self.pod_rel_fro.clone()),
            Column::Float("ftr_rel_fro".into(), self.ftr_rel_fro.clone()),
            Column::Float("phi_rel_fro".into(), self.phi_rel_fro.clone()),
            Column::Float("delta_f".into(), vec![self.delta_f; rows]),
            Column::Float("bound".into(), self.bound.clone()),
            Column::Float("pod_rel_spec".into(), self.pod_rel_spec.clone()),
            Column::Float("ftr_rel_spec".into(), self.ftr_rel_spec.clone()),
        ])
        .expect("equal-length columns by construction")
    }
}

/// Evaluates POD and FTR reconstruction errors for each mode count in
/// `ns` (deduplicated and sorted ascending).
///
/// Reconstructions are accumulated one rank-1 term at a time, so sweeping
/// all ranks costs little more than the largest one.
pub fn error_report(
    series: &SnapshotSeries,
    model: &FtrModel,
    ns: &[usize],
    norms: NormSelect,
) -> Result<ErrorReport> {
    let mut modes = ns.to_vec();
    modes.sort_unstable();
    modes.dedup();

    let x_q = series_to_matrix(series).into_matrix();
    let q_factors = crate::lowrank::thin_svd_matrix(&x_q)?;
    let phi = &model.phi_factors;
    let rank = phi.rank().min(q_factors.rank());
    if let Some(&max_n) = modes.last() {
        if max_n > rank {
            return Err(Error::RankOutOfRange { n: max_n, rank });
        }
    }

    let q_norm_fro = frobenius_norm(&x_q);
    let q_norm_spec = q_factors.singular_values().first().copied().unwrap_or(0.0);
    let phi_full = phi.full_matrix();
    let phi_norm_fro = frobenius_norm(&phi_full);
    let delta_matrix = &x_q - apply_front_shape(&model.profile, &phi_full);
    let delta_f = frobenius_norm(&delta_matrix) / q_norm_fro;
    let max_slope = model.profile.max_abs_derivative();

    let (m_rows, n_cols) = x_q.shape();
    let mut phi_acc = DMatrix::zeros(m_rows, n_cols);
    let mut q_acc = DMatrix::zeros(m_rows, n_cols);
    let mut k = 0usize;

    let mut report = ErrorReport {
        modes: modes.clone(),
        pod_rel_fro: Vec::new(),
        ftr_rel_fro: Vec::new(),
        phi_rel_fro: Vec::new(),
        delta_f,
        bound: Vec::new(),
        pod_rel_spec: Vec::new(),
        ftr_rel_spec: Vec::new(),
    };

    for &n in &modes {
        while k < n {
            phi_acc.ger(
                phi.singular_values()[k],
                &phi.u().column(k),
                &phi.v().column(k),
                1.0,
            );
            q_acc.ger(
                q_factors.singular_values()[k],
                &q_factors.u().column(k),
                &q_factors.v().column(k),
                1.0,
            );
            k += 1;
        }
        let pod_resid = &x_q - &q_acc;
        let ftr_resid = &x_q - apply_front_shape(&model.profile, &phi_acc);
        let phi_resid = &phi_full - &phi_acc;
        report.pod_rel_fro.push(frobenius_norm(&pod_resid) / q_norm_fro);
        report.ftr_rel_fro.push(frobenius_norm(&ftr_resid) / q_norm_fro);
        report.phi_rel_fro.push(frobenius_norm(&phi_resid) / phi_norm_fro);
        let sigma_next = if n < phi.rank() {
            phi.singular_values()[n]
        } else {
            0.0
        };
        report.bound.push(delta_f + max_slope * sigma_next / q_norm_fro);
        if norms.with_spectral() {
            report.pod_rel_spec.push(spectral_norm(&pod_resid) / q_norm_spec);
            report.ftr_rel_spec.push(spectral_norm(&ftr_resid) / q_norm_spec);
        } else {
            report.pod_rel_spec.push(f64::NAN);
            report.ftr_rel_spec.push(f64::NAN);
        }
    }
    Ok(report)
}
