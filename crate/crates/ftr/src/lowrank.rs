//! Thin SVD of snapshot matrices and rank-n truncation.
//!
//! `X = U diag(S) V^T` with `U: rows x r`, `V: cols x r`, `r = min(rows,
//! cols)` and `S` non-increasing. The best rank-n approximation keeps the
//! first `n` triplets; its spectral-norm error is the singular value
//! `S[n]`, which [`spectral_truncation_error`] returns directly.
//!
//! Columns of `U` are the spatial mode fields and the scaled rows of `V`
//! (`S[k] * V[:, k]`) the temporal coefficients of the snapshot data.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::series::SnapshotMatrix;

/// Thin SVD factors with non-increasing singular values.
#[derive(Debug, Clone)]
pub struct SvdFactors {
    u: DMatrix<f64>,
    s: Vec<f64>,
    v: DMatrix<f64>,
}

impl SvdFactors {
    /// Assembles factors from parts, checking shapes and the singular-value
    /// ordering. Orthonormality of `u` and `v` is the caller's business.
    pub fn from_parts(u: DMatrix<f64>, s: Vec<f64>, v: DMatrix<f64>) -> Result<Self> {
        if u.ncols() != s.len() || v.ncols() != s.len() {
            return Err(Error::MatrixShapeMismatch {
                rows: u.ncols(),
                cols: v.ncols(),
                expected_rows: s.len(),
                expected_cols: s.len(),
            });
        }
        if s.iter().any(|v| !v.is_finite() || *v < 0.0) || s.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::NonFiniteMatrix);
        }
        Ok(Self { u, s, v })
    }

    /// Left singular vectors, `rows x r`.
    pub fn u(&self) -> &DMatrix<f64> {
        &self.u
    }

    /// Singular values, non-increasing.
    pub fn singular_values(&self) -> &[f64] {
        &self.s
    }

    /// Right singular vectors, `cols x r`.
    pub fn v(&self) -> &DMatrix<f64> {
        &self.v
    }

    pub fn rank(&self) -> usize {
        self.s.len()
    }

    /// `U diag(S) V^T` at full rank.
    pub fn full_matrix(&self) -> DMatrix<f64> {
        truncate(self, self.rank()).expect("full rank is valid").into_matrix()
    }
}

/// Rank-n reconstruction of a snapshot matrix.
#[derive(Debug, Clone)]
pub struct LowRankApprox {
    n: usize,
    xn: DMatrix<f64>,
}

impl LowRankApprox {
    pub fn retained_rank(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.xn
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.xn
    }
}

/// Thin SVD of a snapshot matrix.
pub fn thin_svd(x: &SnapshotMatrix) -> Result<SvdFactors> {
    thin_svd_matrix(x.matrix())
}

/// Thin SVD of a raw matrix; rejects non-finite entries.
pub fn thin_svd_matrix(a: &DMatrix<f64>) -> Result<SvdFactors> {
    if !a.iter().all(|v| v.is_finite()) {
        return Err(Error::NonFiniteMatrix);
    }
    let (u, s, v) = svd_dispatch(a);
    let (u, s, v) = canonicalize(u, s, v);
    Ok(SvdFactors { u, s, v })
}

/// For strongly rectangular matrices a QR factorization first reduces the
/// SVD to the small square factor; tall snapshot matrices (many nodes, few
/// snapshots) are the common case.
fn svd_dispatch(a: &DMatrix<f64>) -> (DMatrix<f64>, Vec<f64>, DMatrix<f64>) {
    let (m, n) = a.shape();
    if m >= 2 * n {
        let (q, r) = a.clone().qr().unpack();
        let (ur, s, v) = svd_direct(&r);
        (q * ur, s, v)
    } else if n >= 2 * m {
        let (v, s, u) = svd_dispatch(&a.transpose());
        (u, s, v)
    } else {
        svd_direct(a)
    }
}

fn svd_direct(a: &DMatrix<f64>) -> (DMatrix<f64>, Vec<f64>, DMatrix<f64>) {
    let svd = a.clone().svd(true, true);
    let u = svd.u.expect("u requested");
    let v = svd.v_t.expect("v_t requested").transpose();
    let s = svd.singular_values.iter().copied().collect();
    (u, s, v)
}

/// Sorts triplets by descending singular value and fixes the sign
/// convention (largest-magnitude entry of each left vector positive), so
/// repeated runs produce identical factors.
fn canonicalize(
    u: DMatrix<f64>,
    s: Vec<f64>,
    v: DMatrix<f64>,
) -> (DMatrix<f64>, Vec<f64>, DMatrix<f64>) {
    let r = s.len();
    let mut order: Vec<usize> = (0..r).collect();
    order.sort_by(|&i, &j| s[j].total_cmp(&s[i]));

    let mut us = DMatrix::zeros(u.nrows(), r);
    let mut vs = DMatrix::zeros(v.nrows(), r);
    let mut ss = Vec::with_capacity(r);
    for (k, &src) in order.iter().enumerate() {
        ss.push(s[src]);
        us.column_mut(k).copy_from(&u.column(src));
        vs.column_mut(k).copy_from(&v.column(src));
        let col = us.column(k);
        let pivot = col
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            .map(|(i, _)| i)
            .unwrap_or(0);
        if col[pivot] < 0.0 {
            us.column_mut(k).neg_mut();
            vs.column_mut(k).neg_mut();
        }
    }
    (us, ss, vs)
}

/// Best rank-n approximation `X_n = sum_{k<n} S[k] u_k v_k^T`.
///
/// `n = 0` yields the zero matrix; `n > rank` is rejected.
pub fn truncate(f: &SvdFactors, n: usize) -> Result<LowRankApprox> {
    if n > f.rank() {
        return Err(Error::RankOutOfRange { n, rank: f.rank() });
    }
    let mut xn = DMatrix::zeros(f.u.nrows(), f.v.nrows());
    for k in 0..n {
        xn.ger(f.s[k], &f.u.column(k), &f.v.column(k), 1.0);
    }
    Ok(LowRankApprox { n, xn })
}

/// Normalized singular spectrum `S[k] / S[0]` (the spectral norm of X is
/// its largest singular value). Rejects the all-zero matrix.
pub fn spectrum(f: &SvdFactors) -> Result<Vec<f64>> {
    let first = *f.s.first().ok_or(Error::ZeroMatrix)?;
    if first <= 0.0 {
        return Err(Error::ZeroMatrix);
    }
    Ok(f.s.iter().map(|&v| v / first).collect())
}

/// Spectral-norm error of the rank-n truncation: the singular value `S[n]`.
pub fn spectral_truncation_error(f: &SvdFactors, n: usize) -> Result<f64> {
    if n >= f.rank() {
        return Err(Error::RankOutOfRange { n, rank: f.rank() });
    }
    Ok(f.s[n])
}

/// Number of singular values above `rel_tol * S[0]`.
pub fn numerical_rank(f: &SvdFactors, rel_tol: f64) -> usize {
    match f.s.first() {
        Some(&first) if first > 0.0 => f.s.iter().filter(|&&v| v > rel_tol * first).count(),
        _ => 0,
    }
}

/// Frobenius norm.
pub fn frobenius_norm(a: &DMatrix<f64>) -> f64 {
    a.norm()
}

/// Spectral norm via the symmetric eigendecomposition of the smaller Gram
/// matrix. Relative accuracy for the top singular value is at machine
/// level; small trailing values are not needed here.
pub fn spectral_norm(a: &DMatrix<f64>) -> f64 {
    let (m, n) = a.shape();
    if m == 0 || n == 0 {
        return 0.0;
    }
    let gram = if m >= n {
        a.transpose() * a
    } else {
        a * a.transpose()
    };
    let eig = SymmetricEigen::new(gram);
    eig.eigenvalues.iter().fold(0.0f64, |acc, &l| acc.max(l)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn snap(data: DMatrix<f64>) -> SnapshotMatrix {
        SnapshotMatrix::new(data).unwrap()
    }

    #[test]
    fn diagonal_matrix_spectrum() {
        let x = snap(DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]));
        let f = thin_svd(&x).unwrap();
        assert_relative_eq!(f.singular_values()[0], 1.0, max_relative = 1e-12);
        assert!(f.singular_values()[1].abs() < 1e-12);
    }

    #[test]
    fn rank_one_outer_product() {
        let u = nalgebra::DVector::from_vec(vec![0.6, 0.8, 0.0]);
        let v = nalgebra::DVector::from_vec(vec![0.0, 1.0]);
        let x = snap(&u * v.transpose());
        let f = thin_svd(&x).unwrap();
        assert_relative_eq!(f.singular_values()[0], 1.0, max_relative = 1e-12);
        assert!(f.singular_values()[1] < 1e-13);
    }

    #[test]
    fn truncate_full_rank_reproduces_input() {
        let x = snap(DMatrix::from_fn(6, 4, |i, j| ((i * 7 + j * 3) % 11) as f64 - 5.0));
        let f = thin_svd(&x).unwrap();
        let xr = truncate(&f, f.rank()).unwrap();
        let rel = frobenius_norm(&(x.matrix() - xr.matrix())) / frobenius_norm(x.matrix());
        assert!(rel <= 1e-10, "relative residual {rel}");
    }

    #[test]
    fn truncate_zero_rank_is_zero() {
        let x = snap(DMatrix::from_element(3, 3, 2.0));
        let f = thin_svd(&x).unwrap();
        let x0 = truncate(&f, 0).unwrap();
        assert!(x0.matrix().iter().all(|&v| v == 0.0));
        assert!(truncate(&f, f.rank() + 1).is_err());
    }

    #[test]
    fn spectrum_edges() {
        let x = snap(DMatrix::from_row_slice(2, 2, &[3.0, 0.0, 0.0, 2.0]));
        let f = thin_svd(&x).unwrap();
        let spec = spectrum(&f).unwrap();
        assert_eq!(spec[0], 1.0);
        assert_relative_eq!(spec[1], 2.0 / 3.0, max_relative = 1e-12);
        assert_relative_eq!(spectral_truncation_error(&f, 0).unwrap(), 3.0, max_relative = 1e-12);
        assert_relative_eq!(spectral_truncation_error(&f, 1).unwrap(), 2.0, max_relative = 1e-12);
        assert!(spectral_truncation_error(&f, 2).is_err());

        let zero = snap(DMatrix::zeros(2, 2));
        let fz = thin_svd(&zero).unwrap();
        assert!(spectrum(&fz).is_err());
    }

    #[test]
    fn rejects_non_finite() {
        let mut a = DMatrix::zeros(2, 2);
        a[(0, 0)] = f64::NAN;
        assert!(thin_svd_matrix(&a).is_err());
    }

    #[test]
    fn sign_flip_leaves_truncation_unchanged() {
        let x = snap(DMatrix::from_fn(5, 4, |i, j| (i as f64 - 1.5) * (j as f64 + 0.5) + i as f64));
        let f = thin_svd(&x).unwrap();
        let mut u = f.u().clone();
        let mut v = f.v().clone();
        u.column_mut(1).neg_mut();
        v.column_mut(1).neg_mut();
        let flipped = SvdFactors::from_parts(u, f.singular_values().to_vec(), v).unwrap();
        let a = truncate(&f, 3).unwrap();
        let b = truncate(&flipped, 3).unwrap();
        assert_eq!(a.matrix(), b.matrix());
    }

    #[test]
    fn qr_path_matches_direct_path() {
        // 20x4 is tall enough to take the QR-first branch
        let a = DMatrix::from_fn(20, 4, |i, j| ((i + 1) as f64).sin() * (j + 1) as f64);
        let f = thin_svd_matrix(&a).unwrap();
        let back = f.full_matrix();
        let rel = frobenius_norm(&(&a - &back)) / frobenius_norm(&a);
        assert!(rel < 1e-12, "qr-first reconstruction off by {rel}");
        let id = f.u().transpose() * f.u();
        let max_off = (id - DMatrix::identity(4, 4)).abs().max();
        assert!(max_off < 1e-10);
    }

    #[test]
    fn spectral_norm_matches_top_singular_value() {
        let a = DMatrix::from_fn(8, 5, |i, j| ((3 * i + 2 * j) % 7) as f64 - 3.0);
        let f = thin_svd_matrix(&a).unwrap();
        assert_relative_eq!(spectral_norm(&a), f.singular_values()[0], max_relative = 1e-10);
    }
}
