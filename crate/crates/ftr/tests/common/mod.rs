//! Shared fixtures and independent numerical oracles for the integration
//! suites. The oracles deliberately avoid the library's SVD path: singular
//! values come from a one-sided Jacobi iteration and spectral norms from
//! power iteration, so the decomposition under test never checks itself.
#![allow(dead_code)]

use std::sync::OnceLock;

use ftr::distance::sdf_series;
use ftr::reconstruct::{
    default_band, error_report, ftr_decompose_with_phi, pod_fit, ErrorReport, FtrModel,
    NormSelect, PodModel, DEFAULT_SUPPORT_SIZE,
};
use ftr::synth::{gen_merging_discs, gen_moving_disc_cfg, DiscConfig, MergingConfig, PhiKind};
use ftr::{DMatrix, SnapshotSeries};

/// Singular values by one-sided Jacobi orthogonalization of the columns.
pub fn jacobi_singular_values(a: &DMatrix<f64>) -> Vec<f64> {
    let mut b = if a.nrows() >= a.ncols() {
        a.clone()
    } else {
        a.transpose()
    };
    let n = b.ncols();
    let m = b.nrows();
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let mut app = 0.0;
                let mut aqq = 0.0;
                let mut apq = 0.0;
                for i in 0..m {
                    let (x, y) = (b[(i, p)], b[(i, q)]);
                    app += x * x;
                    aqq += y * y;
                    apq += x * y;
                }
                if apq.abs() <= 1e-15 * (app * aqq).sqrt() {
                    continue;
                }
                rotated = true;
                let tau = (aqq - app) / (2.0 * apq);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..m {
                    let (x, y) = (b[(i, p)], b[(i, q)]);
                    b[(i, p)] = c * x - s * y;
                    b[(i, q)] = s * x + c * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<f64> = (0..n).map(|j| b.column(j).norm()).collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    sv
}

/// Spectral norm by power iteration on the Gram operator.
pub fn power_iteration_spectral_norm(a: &DMatrix<f64>, max_iters: usize) -> f64 {
    let n = a.ncols();
    let mut v = nalgebra::DVector::from_fn(n, |i, _| {
        1.0 + ((i.wrapping_mul(2654435761)) % 97) as f64 / 97.0
    });
    v /= v.norm();
    let mut last = 0.0f64;
    for _ in 0..max_iters {
        let w = a * &v;
        let sigma = w.norm();
        if sigma == 0.0 {
            return 0.0;
        }
        let z = a.transpose() * w;
        let zn = z.norm();
        if zn == 0.0 {
            return sigma;
        }
        v = z / zn;
        if (sigma - last).abs() <= 1e-13 * sigma {
            return sigma;
        }
        last = sigma;
    }
    last
}

pub const DISC_THRESHOLD: f64 = 0.5;

/// The shipped moving-disc dataset: (q, analytic signed-distance phi).
pub fn disc_dataset() -> &'static (SnapshotSeries, SnapshotSeries) {
    static CELL: OnceLock<(SnapshotSeries, SnapshotSeries)> = OnceLock::new();
    CELL.get_or_init(|| gen_moving_disc_cfg(&DiscConfig::default()).expect("disc generator"))
}

/// Signed distance fields computed from the disc data by the pipeline.
pub fn disc_sdf() -> &'static SnapshotSeries {
    static CELL: OnceLock<SnapshotSeries> = OnceLock::new();
    CELL.get_or_init(|| sdf_series(&disc_dataset().0, DISC_THRESHOLD).expect("sdf series"))
}

/// FTR model fitted to the disc data with default band and support size.
pub fn disc_model() -> &'static FtrModel {
    static CELL: OnceLock<FtrModel> = OnceLock::new();
    CELL.get_or_init(|| {
        let q = &disc_dataset().0;
        let grid = *q.grid2d().expect("2d grid");
        ftr_decompose_with_phi(
            q,
            disc_sdf(),
            DISC_THRESHOLD,
            default_band(&grid),
            DEFAULT_SUPPORT_SIZE,
        )
        .expect("ftr model")
    })
}

/// POD basis of the disc data.
pub fn disc_pod() -> &'static PodModel {
    static CELL: OnceLock<PodModel> = OnceLock::new();
    CELL.get_or_init(|| pod_fit(&disc_dataset().0).expect("pod fit"))
}

/// Frobenius error curves of the disc data over every rank.
pub fn disc_report() -> &'static ErrorReport {
    static CELL: OnceLock<ErrorReport> = OnceLock::new();
    CELL.get_or_init(|| {
        let q = &disc_dataset().0;
        let ns: Vec<usize> = (0..=disc_model().rank()).collect();
        error_report(q, disc_model(), &ns, NormSelect::Frobenius).expect("error report")
    })
}

/// The shipped merging-discs dataset.
pub fn merging_dataset() -> &'static SnapshotSeries {
    static CELL: OnceLock<SnapshotSeries> = OnceLock::new();
    CELL.get_or_init(|| gen_merging_discs(&MergingConfig::default()).expect("merging generator"))
}

/// FTR model fitted to the merging data with default parameters.
pub fn merging_model() -> &'static FtrModel {
    static CELL: OnceLock<FtrModel> = OnceLock::new();
    CELL.get_or_init(|| {
        let q = merging_dataset();
        let grid = *q.grid2d().expect("2d grid");
        let phi = sdf_series(q, DISC_THRESHOLD).expect("sdf series");
        ftr_decompose_with_phi(
            q,
            &phi,
            DISC_THRESHOLD,
            default_band(&grid),
            DEFAULT_SUPPORT_SIZE,
        )
        .expect("ftr model")
    })
}

/// Frobenius error curves of the merging data over every rank.
pub fn merging_report() -> &'static ErrorReport {
    static CELL: OnceLock<ErrorReport> = OnceLock::new();
    CELL.get_or_init(|| {
        let q = merging_dataset();
        let ns: Vec<usize> = (0..=merging_model().rank()).collect();
        error_report(q, merging_model(), &ns, NormSelect::Frobenius).expect("error report")
    })
}

/// The paraboloid-encoded disc dataset and its fitted model.
pub fn paraboloid_model() -> &'static (SnapshotSeries, FtrModel) {
    static CELL: OnceLock<(SnapshotSeries, FtrModel)> = OnceLock::new();
    CELL.get_or_init(|| {
        let cfg = DiscConfig {
            phi_kind: PhiKind::Paraboloid,
            ..DiscConfig::default()
        };
        let (q, phi) = gen_moving_disc_cfg(&cfg).expect("disc generator");
        let grid = *q.grid2d().expect("2d grid");
        let model = ftr_decompose_with_phi(
            &q,
            &phi,
            DISC_THRESHOLD,
            default_band(&grid),
            DEFAULT_SUPPORT_SIZE,
        )
        .expect("ftr model");
        (q, model)
    })
}
