//! The scalar front-shape function: analytic tanh step and profiles
//! estimated from `(phi, q)` samples collected near the front.
//!
//! Fitting bins the samples onto an equispaced support over
//! `[-band, band]` and takes per-bin means; evaluation interpolates
//! linearly and extends as a constant outside the support, which keeps
//! every reconstruction inside the range of the fitting data.

use crate::distance::LevelSetField;
use crate::error::{Error, Result};

/// A scalar map from level-set values to field values.
pub trait FrontShape {
    fn eval(&self, phi: f64) -> f64;
}

/// The analytic step profile `(tanh(phi / lambda) + 1) / 2`.
///
/// `lambda` adjusts the front width; the range is (0, 1) with value 1/2 at
/// the front.
#[derive(Debug, Clone, Copy)]
pub struct TanhProfile {
    lambda: f64,
}

impl TanhProfile {
    pub fn new(lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::NonPositiveParameter {
                name: "lambda",
                value: lambda,
            });
        }
        Ok(Self { lambda })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
}

impl FrontShape for TanhProfile {
    fn eval(&self, phi: f64) -> f64 {
        ((phi / self.lambda).tanh() + 1.0) / 2.0
    }
}

/// Paired `(phi, q)` samples within a band around the front.
#[derive(Debug, Clone, Default)]
pub struct SampleSet {
    phi: Vec<f64>,
    q: Vec<f64>,
}

impl SampleSet {
    pub fn len(&self) -> usize {
        self.phi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phi.is_empty()
    }

    pub fn phi(&self) -> &[f64] {
        &self.phi
    }

    pub fn q(&self) -> &[f64] {
        &self.q
    }

    /// Appends another set, e.g. to pool samples across snapshots.
    pub fn extend(&mut self, other: &SampleSet) {
        self.phi.extend_from_slice(&other.phi);
        self.q.extend_from_slice(&other.q);
    }
}

/// Collects all nodes with `|phi| <= band`, paired with their `q` values.
///
/// An empty result signals that the band is too small for this grid.
pub fn collect_front_samples(phi: &LevelSetField, q: &[f64], band: f64) -> Result<SampleSet> {
    if !(band > 0.0) || !band.is_finite() {
        return Err(Error::NonPositiveParameter {
            name: "band",
            value: band,
        });
    }
    if q.len() != phi.values().len() {
        return Err(Error::FieldGridMismatch {
            got: q.len(),
            expected: phi.values().len(),
        });
    }
    let mut set = SampleSet::default();
    for (&p, &v) in phi.values().iter().zip(q) {
        if p.abs() <= band {
            set.phi.push(p);
            set.q.push(v);
        }
    }
    Ok(set)
}

/// A tabulated front profile over a strictly increasing support.
#[derive(Debug, Clone, PartialEq)]
pub struct FrontProfile {
    support: Vec<f64>,
    values: Vec<f64>,
    band: f64,
}

/// Fits a profile to samples: per-bin means on `m` equispaced support
/// points over `[-band, band]`, with empty interior bins filled by linear
/// interpolation between their nonempty neighbours and empty edge bins by
/// the nearest nonempty value.
pub fn fit_profile(samples: &SampleSet, m: usize, band: f64) -> Result<FrontProfile> {
    if samples.is_empty() {
        return Err(Error::NoSamples);
    }
    if m < 2 {
        return Err(Error::ParameterTooSmall {
            name: "support size",
            min: 2,
            value: m,
        });
    }
    if !(band > 0.0) || !band.is_finite() {
        return Err(Error::NonPositiveParameter {
            name: "band",
            value: band,
        });
    }

    let support: Vec<f64> = (0..m)
        .map(|j| {
            let t = j as f64 / (m - 1) as f64;
            -band + 2.0 * band * t
        })
        .collect();

    // sort sample pairs so the binned means do not depend on input order
    let mut order: Vec<usize> = (0..samples.len()).collect();
    order.sort_by(|&i, &j| {
        samples.phi[i]
            .total_cmp(&samples.phi[j])
            .then(samples.q[i].total_cmp(&samples.q[j]))
    });

    let mut sums = vec![0.0f64; m];
    let mut counts = vec![0usize; m];
    let scale = (m - 1) as f64 / (2.0 * band);
    for &i in &order {
        let bin = ((samples.phi[i] + band) * scale).round();
        let bin = (bin.max(0.0) as usize).min(m - 1);
        sums[bin] += samples.q[i];
        counts[bin] += 1;
    }

    let mut values = vec![f64::NAN; m];
    for j in 0..m {
        if counts[j] > 0 {
            values[j] = sums[j] / counts[j] as f64;
        }
    }

    let first = values
        .iter()
        .position(|v| !v.is_nan())
        .ok_or(Error::NoSamples)?;
    let last = values.iter().rposition(|v| !v.is_nan()).unwrap();
    for j in 0..first {
        values[j] = values[first];
    }
    for j in last + 1..m {
        values[j] = values[last];
    }
    let mut left = first;
    for j in first + 1..=last {
        if !values[j].is_nan() {
            if j > left + 1 {
                let (p0, p1) = (support[left], support[j]);
                let (v0, v1) = (values[left], values[j]);
                for k in left + 1..j {
                    let t = (support[k] - p0) / (p1 - p0);
                    values[k] = v0 + t * (v1 - v0);
                }
            }
            left = j;
        }
    }

    Ok(FrontProfile {
        support,
        values,
        band,
    })
}

impl FrontProfile {
    /// Builds a profile directly from tabulated values.
    pub fn from_table(support: Vec<f64>, values: Vec<f64>, band: f64) -> Result<Self> {
        if support.len() < 2 || support.len() != values.len() {
            return Err(Error::ParameterTooSmall {
                name: "support size",
                min: 2,
                value: support.len().min(values.len()),
            });
        }
        if support.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::NonPositiveParameter {
                name: "support spacing",
                value: 0.0,
            });
        }
        if !(band > 0.0) {
            return Err(Error::NonPositiveParameter {
                name: "band",
                value: band,
            });
        }
        Ok(Self {
            support,
            values,
            band,
        })
    }

    pub fn support(&self) -> &[f64] {
        &self.support
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn band(&self) -> f64 {
        self.band
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Tabulated derivative on the support: central differences inside,
    /// one-sided at the ends.
    pub fn derivative(&self) -> Vec<f64> {
        let m = self.support.len();
        let s = &self.support;
        let v = &self.values;
        (0..m)
            .map(|j| {
                if j == 0 {
                    (v[1] - v[0]) / (s[1] - s[0])
                } else if j == m - 1 {
                    (v[m - 1] - v[m - 2]) / (s[m - 1] - s[m - 2])
                } else {
                    (v[j + 1] - v[j - 1]) / (s[j + 1] - s[j - 1])
                }
            })
            .collect()
    }

    /// Largest `|f'|` on the support; the front-steepness factor of the
    /// truncation-error bound.
    pub fn max_abs_derivative(&self) -> f64 {
        self.derivative()
            .into_iter()
            .fold(0.0f64, |acc, d| acc.max(d.abs()))
    }
}

impl FrontShape for FrontProfile {
    /// Piecewise-linear interpolation, clamped to the end values outside
    /// the support.
    fn eval(&self, phi: f64) -> f64 {
        let m = self.support.len();
        if phi <= self.support[0] {
            return self.values[0];
        }
        if phi >= self.support[m - 1] {
            return self.values[m - 1];
        }
        let step = (self.support[m - 1] - self.support[0]) / (m - 1) as f64;
        let mut j = (((phi - self.support[0]) / step) as usize).min(m - 2);
        // equispaced in exact arithmetic; nudge against rounding
        while j > 0 && phi < self.support[j] {
            j -= 1;
        }
        while j + 2 < m && phi >= self.support[j + 1] {
            j += 1;
        }
        if phi == self.support[j] {
            return self.values[j];
        }
        if phi == self.support[j + 1] {
            return self.values[j + 1];
        }
        let t = (phi - self.support[j]) / (self.support[j + 1] - self.support[j]);
        self.values[j] + t * (self.values[j + 1] - self.values[j])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distance::signed_distance_field;
    use crate::grid::Grid2D;
    use proptest::prelude::*;

    #[test]
    fn tanh_profile_basics() {
        for lambda in [0.01, 0.1, 3.0] {
            let f = TanhProfile::new(lambda).unwrap();
            assert_eq!(f.eval(0.0), 0.5);
            assert!(f.eval(100.0 * lambda) > 1.0 - 1e-12);
            assert!(f.eval(-100.0 * lambda) < 1e-12);
        }
        let f = TanhProfile::new(0.1).unwrap();
        let expected = (1.0f64.tanh() + 1.0) / 2.0;
        assert!((f.eval(0.1) - expected).abs() < 1e-15);
        assert!((expected - 0.880797).abs() < 1e-6);
        assert!(TanhProfile::new(0.0).is_err());
        assert!(TanhProfile::new(-1.0).is_err());
    }

    fn disc_phi_and_q(n: usize, lambda: f64) -> (LevelSetField, Vec<f64>) {
        let g = Grid2D::new(n, n, 1.0, 1.0).unwrap();
        let f = TanhProfile::new(lambda).unwrap();
        let q: Vec<f64> = (0..g.num_nodes())
            .map(|i| {
                let (x, y) = g.node_position(i);
                f.eval((x - 0.5).hypot(y - 0.5) - 0.2)
            })
            .collect();
        let phi = signed_distance_field(&q, &g, 0.5).unwrap();
        (phi, q)
    }

    #[test]
    fn band_covers_everything_or_nothing() {
        let (phi, q) = disc_phi_and_q(24, 0.05);
        let max_abs = phi.values().iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let all = collect_front_samples(&phi, &q, max_abs + 1.0).unwrap();
        assert_eq!(all.len(), q.len());
        let tiny = collect_front_samples(&phi, &q, 1e-15).unwrap();
        assert!(tiny.len() < q.len() / 10);
        assert!(collect_front_samples(&phi, &q, 0.0).is_err());
    }

    #[test]
    fn exact_relation_is_preserved_by_collection() {
        let g = Grid2D::new(32, 32, 1.0, 1.0).unwrap();
        let f = TanhProfile::new(0.05).unwrap();
        // build q from an analytic phi so q = f(phi) holds exactly
        let phi_vals: Vec<f64> = (0..g.num_nodes())
            .map(|i| {
                let (x, y) = g.node_position(i);
                (x - 0.5).hypot(y - 0.5) - 0.2
            })
            .collect();
        let q: Vec<f64> = phi_vals.iter().map(|&p| f.eval(p)).collect();
        let synthetic = LevelSetField::from_values(g, phi_vals, 0.5).unwrap();
        let set = collect_front_samples(&synthetic, &q, 0.1).unwrap();
        for (p, v) in set.phi().iter().zip(set.q()) {
            assert!((f.eval(*p) - v).abs() <= 1e-15);
        }
    }

    #[test]
    fn single_sample_fills_support() {
        let mut set = SampleSet::default();
        set.phi.push(0.01);
        set.q.push(0.7);
        let p = fit_profile(&set, 11, 0.05).unwrap();
        assert!(p.values().iter().all(|&v| v == 0.7));
    }

    #[test]
    fn constant_samples_give_constant_profile() {
        let mut set = SampleSet::default();
        for i in 0..100 {
            set.phi.push(-0.04 + 0.0008 * i as f64);
            set.q.push(2.5);
        }
        let p = fit_profile(&set, 21, 0.05).unwrap();
        assert!(p.values().iter().all(|&v| (v - 2.5).abs() < 1e-12));
    }

    #[test]
    fn eval_support_points_and_clamping() {
        let support = vec![-1.0, -0.5, 0.0, 0.5, 1.0];
        let values = vec![0.0, 0.1, 0.5, 0.9, 1.0];
        let p = FrontProfile::from_table(support.clone(), values.clone(), 1.0).unwrap();
        for (s, v) in support.iter().zip(&values) {
            assert_eq!(p.eval(*s), *v);
        }
        assert_eq!(p.eval(1.0 + 10.0), 1.0);
        assert_eq!(p.eval(-42.0), 0.0);
        let mid = p.eval(0.25);
        assert!((mid - (0.5 + 0.9) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn derivative_constant_and_linear() {
        let support: Vec<f64> = (0..9).map(|j| -1.0 + 0.25 * j as f64).collect();
        let constant = FrontProfile::from_table(support.clone(), vec![3.0; 9], 1.0).unwrap();
        assert!(constant.derivative().iter().all(|&d| d == 0.0));
        let linear_vals: Vec<f64> = support.iter().map(|s| 2.0 * s + 1.0).collect();
        let linear = FrontProfile::from_table(support, linear_vals, 1.0).unwrap();
        for d in linear.derivative() {
            assert!((d - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn derivative_of_tabulated_tanh() {
        let lambda = 0.1;
        let m = 2001;
        let band = 1.0;
        let f = TanhProfile::new(lambda).unwrap();
        let support: Vec<f64> = (0..m)
            .map(|j| -band + 2.0 * band * j as f64 / (m - 1) as f64)
            .collect();
        let values: Vec<f64> = support.iter().map(|&s| f.eval(s)).collect();
        let p = FrontProfile::from_table(support, values, band).unwrap();
        let d = p.derivative();
        // f'(0) = 1 / (2 lambda)
        let mid = (m - 1) / 2;
        assert!((d[mid] - 1.0 / (2.0 * lambda)).abs() < 1e-3);
        assert!((p.max_abs_derivative() - 1.0 / (2.0 * lambda)).abs() < 1e-2);
    }

    proptest! {
        // fitting must not depend on sample order and must stay inside the
        // sample range
        #[test]
        fn fit_is_order_independent_and_range_bounded(
            pairs in proptest::collection::vec((-0.05f64..0.05, 0.0f64..1.0), 1..200),
            seed in 0u64..1000,
        ) {
            let mut set = SampleSet::default();
            for (p, q) in &pairs {
                set.phi.push(*p);
                set.q.push(*q);
            }
            let mut shuffled_pairs = pairs.clone();
            // deterministic pseudo-shuffle
            let n = shuffled_pairs.len();
            for i in 0..n {
                let j = (seed as usize)
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(i.wrapping_mul(1442695040888963407))
                    % n;
                shuffled_pairs.swap(i, j);
            }
            let mut shuffled = SampleSet::default();
            for (p, q) in &shuffled_pairs {
                shuffled.phi.push(*p);
                shuffled.q.push(*q);
            }
            let a = fit_profile(&set, 31, 0.05).unwrap();
            let b = fit_profile(&shuffled, 31, 0.05).unwrap();
            prop_assert_eq!(a.values(), b.values());

            let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
            for (_, q) in &pairs {
                lo = lo.min(*q);
                hi = hi.max(*q);
            }
            for probe in [-1.0, -0.03, 0.0, 0.0123, 0.05, 2.0] {
                let v = a.eval(probe);
                prop_assert!(v >= lo - 1e-12 && v <= hi + 1e-12);
            }
        }
    }
}
