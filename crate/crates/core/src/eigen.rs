//! Dense eigensolver for general real matrices, and multiset matching of
//! spectra.
//!
//! Eigenvalues come from nalgebra's real Schur decomposition (Hessenberg
//! reduction plus shifted QR); exactly symmetric input takes the symmetric
//! path. Right eigenvectors are recovered by complex inverse iteration.

use std::cmp::Ordering;

use nalgebra::{DMatrix, DVector, Schur, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::operator::Operator;

pub const DEFAULT_DIM_LIMIT: usize = 2048;
const MAX_SWEEPS: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Recurrence,
    Dense,
    ClosedForm,
}

impl Provenance {
    pub fn label(self) -> &'static str {
        match self {
            Provenance::Recurrence => "recurrence",
            Provenance::Dense => "dense",
            Provenance::ClosedForm => "closed-form",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    /// Sorted by `(re, im)`.
    pub eigenvalues: Vec<Complex64>,
    /// Right eigenvectors in the order of `eigenvalues`, if requested.
    pub eigenvectors: Option<Vec<Vec<Complex64>>>,
    /// `|A v - E v|_inf / |v|_inf` per eigenpair, if eigenvectors were
    /// requested.
    pub residuals: Vec<f64>,
    pub provenance: Provenance,
    pub warnings: Vec<String>,
}

impl Spectrum {
    pub fn from_values(mut eigenvalues: Vec<Complex64>, provenance: Provenance) -> Self {
        sort_lexicographic(&mut eigenvalues);
        Spectrum { eigenvalues, eigenvectors: None, residuals: Vec::new(), provenance, warnings: Vec::new() }
    }

    pub fn real_parts(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|z| z.re).collect()
    }

    pub fn max_imaginary(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0, |m, z| m.max(z.im.abs()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EigenOptions {
    pub dim_limit: usize,
    pub eigenvectors: bool,
}

impl Default for EigenOptions {
    fn default() -> Self {
        EigenOptions { dim_limit: DEFAULT_DIM_LIMIT, eigenvectors: false }
    }
}

pub fn sort_lexicographic(values: &mut [Complex64]) {
    values.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

pub fn eigen_dense(op: &Operator<f64>) -> Result<Spectrum> {
    eigen_matrix(&op.to_dense(), EigenOptions::default())
}

pub fn eigen_dense_with(op: &Operator<f64>, opts: EigenOptions) -> Result<Spectrum> {
    eigen_matrix(&op.to_dense(), opts)
}

fn is_exactly_symmetric(m: &DMatrix<f64>) -> bool {
    let n = m.nrows();
    (0..n).all(|i| (0..i).all(|j| m[(i, j)] == m[(j, i)]))
}

pub fn eigen_matrix(m: &DMatrix<f64>, opts: EigenOptions) -> Result<Spectrum> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, got: m.ncols() });
    }
    if n > opts.dim_limit {
        return Err(Error::DimensionTooLarge { dim: n, limit: opts.dim_limit });
    }
    if m.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidArgument("matrix has non-finite entries".into()));
    }
    if n == 0 {
        return Ok(Spectrum::from_values(Vec::new(), Provenance::Dense));
    }
    if is_exactly_symmetric(m) {
        let eig = SymmetricEigen::try_new(m.clone(), f64::EPSILON, MAX_SWEEPS)
            .ok_or_else(|| no_convergence(m))?;
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let eigenvalues: Vec<Complex64> = order.iter().map(|&i| Complex64::new(eig.eigenvalues[i], 0.0)).collect();
        let mut spec = Spectrum::from_values(eigenvalues, Provenance::Dense);
        if opts.eigenvectors {
            let vectors: Vec<Vec<Complex64>> = order
                .iter()
                .map(|&i| eig.eigenvectors.column(i).iter().map(|x| Complex64::new(*x, 0.0)).collect())
                .collect();
            spec.residuals = residuals(m, &spec.eigenvalues, &vectors);
            spec.eigenvectors = Some(vectors);
        }
        return Ok(spec);
    }
    let schur = Schur::try_new(m.clone(), f64::EPSILON, MAX_SWEEPS).ok_or_else(|| no_convergence(m))?;
    let values: Vec<Complex64> = schur.complex_eigenvalues().iter().copied().collect();
    let mut spec = Spectrum::from_values(values, Provenance::Dense);
    if opts.eigenvectors {
        let vectors: Vec<Vec<Complex64>> = spec
            .eigenvalues
            .iter()
            .map(|&lambda| inverse_iteration(m, lambda))
            .collect::<Result<_>>()?;
        spec.residuals = residuals(m, &spec.eigenvalues, &vectors);
        spec.eigenvectors = Some(vectors);
    }
    Ok(spec)
}

fn no_convergence(m: &DMatrix<f64>) -> Error {
    let h = m.clone().hessenberg().h();
    let norm = m.norm().max(f64::MIN_POSITIVE);
    let subdiagonal = (1..h.nrows()).fold(0.0f64, |acc, i| acc.max(h[(i, i - 1)].abs())) / norm;
    Error::NoConvergence { dim: m.nrows(), max_iterations: MAX_SWEEPS, subdiagonal }
}

fn inf_norm(v: &[Complex64]) -> f64 {
    v.iter().fold(0.0, |m, z| m.max(z.norm()))
}

fn residuals(m: &DMatrix<f64>, values: &[Complex64], vectors: &[Vec<Complex64>]) -> Vec<f64> {
    let mc = m.map(|x| Complex64::new(x, 0.0));
    values
        .iter()
        .zip(vectors)
        .map(|(&lambda, v)| {
            let dv = DVector::from_column_slice(v);
            let r = &mc * &dv - dv.map(|z| z * lambda);
            inf_norm(r.as_slice()) / inf_norm(v).max(f64::MIN_POSITIVE)
        })
        .collect()
}

/// Right eigenvector for `lambda` by a few steps of shifted inverse
/// iteration from a fixed start vector.
fn inverse_iteration(m: &DMatrix<f64>, lambda: Complex64) -> Result<Vec<Complex64>> {
    let n = m.nrows();
    let scale = m.amax().max(1.0);
    let shift = lambda + Complex64::new(scale * 1e-13, scale * 1e-14);
    let mut shifted = m.map(|x| Complex64::new(x, 0.0));
    for i in 0..n {
        shifted[(i, i)] -= shift;
    }
    let lu = shifted.lu();
    let mut v = DVector::from_fn(n, |i, _| Complex64::new(1.0 + (i as f64 * 0.618_033_988_749_895).fract(), 0.0));
    for _ in 0..3 {
        v = lu
            .solve(&v)
            .ok_or_else(|| Error::InvalidArgument("singular shifted system in inverse iteration".into()))?;
        let norm = inf_norm(v.as_slice());
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::InvalidArgument("inverse iteration lost the eigenvector".into()));
        }
        // Normalize so the largest component is real and positive.
        let pivot = v.iter().copied().max_by(|a, b| a.norm().total_cmp(&b.norm())).unwrap_or_default();
        let phase = pivot / pivot.norm();
        v = v.map(|z| z / (phase * norm));
    }
    Ok(v.as_slice().to_vec())
}

/// Acceptance rule for comparing two eigenvalues.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Tolerance {
    /// `|a - b| <= abs + rel * |a|`
    Additive { abs: f64, rel: f64 },
    /// `|a - b| <= rel * max(1, |a|)`
    Relative { rel: f64 },
}

impl Tolerance {
    pub const MATCHING: Tolerance = Tolerance::Additive { abs: 1e-8, rel: 1e-8 };

    pub fn allows(self, a: Complex64, b: Complex64) -> bool {
        let d = (a - b).norm();
        match self {
            Tolerance::Additive { abs, rel } => d <= abs + rel * a.norm(),
            Tolerance::Relative { rel } => d <= rel * a.norm().max(1.0),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Matching {
    /// `(left index, right index, distance)`, sorted by left index.
    pub pairs: Vec<(usize, usize, f64)>,
    pub unmatched_left: Vec<usize>,
    pub unmatched_right: Vec<usize>,
}

impl Matching {
    pub fn is_complete(&self) -> bool {
        self.unmatched_left.is_empty() && self.unmatched_right.is_empty()
    }

    pub fn left_contained(&self) -> bool {
        self.unmatched_left.is_empty()
    }

    pub fn max_distance(&self) -> f64 {
        self.pairs.iter().fold(0.0, |m, p| m.max(p.2))
    }
}

/// Greedy nearest-neighbour matching: candidate pairs within tolerance are
/// taken in order of increasing distance, each element used at most once.
pub fn match_multiset(left: &[Complex64], right: &[Complex64], tol: Tolerance) -> Matching {
    let mut candidates: Vec<(f64, usize, usize)> = Vec::new();
    for (i, &a) in left.iter().enumerate() {
        for (k, &b) in right.iter().enumerate() {
            if tol.allows(a, b) {
                candidates.push(((a - b).norm(), i, k));
            }
        }
    }
    candidates.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
    let mut used_left = vec![false; left.len()];
    let mut used_right = vec![false; right.len()];
    let mut pairs = Vec::new();
    for (d, i, k) in candidates {
        if !used_left[i] && !used_right[k] {
            used_left[i] = true;
            used_right[k] = true;
            pairs.push((i, k, d));
        }
    }
    pairs.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.partial_cmp(&b.2).unwrap_or(Ordering::Equal)));
    Matching {
        pairs,
        unmatched_left: (0..left.len()).filter(|&i| !used_left[i]).collect(),
        unmatched_right: (0..right.len()).filter(|&k| !used_right[k]).collect(),
    }
}

pub fn real_values(values: &[f64]) -> Vec<Complex64> {
    values.iter().map(|&x| Complex64::new(x, 0.0)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::Domain;

    fn close(a: Complex64, re: f64) -> bool {
        (a.re - re).abs() < 1e-12 && a.im.abs() < 1e-12
    }

    #[test]
    fn diagonal_matrix() {
        let op = Operator::from_triplets(Domain::Plain { dim: 3 }, [(0, 0, 3.0), (1, 1, 1.0), (2, 2, 2.0)]);
        let spec = eigen_dense(&op).unwrap();
        assert!(close(spec.eigenvalues[0], 1.0) && close(spec.eigenvalues[1], 2.0) && close(spec.eigenvalues[2], 3.0));
    }

    #[test]
    fn symmetric_two_by_two() {
        let (a, b, k) = (0.3, -1.1, 0.7);
        let op = Operator::from_triplets(Domain::Plain { dim: 2 }, [(0, 0, a), (1, 1, b), (0, 1, k), (1, 0, k)]);
        let spec = eigen_dense(&op).unwrap();
        let root = (k * k + (a - b) * (a - b) / 4.0).sqrt();
        assert!(close(spec.eigenvalues[0], (a + b) / 2.0 - root));
        assert!(close(spec.eigenvalues[1], (a + b) / 2.0 + root));
    }

    #[test]
    fn rotation_has_complex_pair_and_vectors() {
        let op = Operator::from_triplets(Domain::Plain { dim: 2 }, [(0, 1, -1.0), (1, 0, 1.0)]);
        let spec = eigen_dense_with(&op, EigenOptions { eigenvectors: true, ..Default::default() }).unwrap();
        assert!((spec.eigenvalues[0] - Complex64::new(0.0, -1.0)).norm() < 1e-12);
        assert!((spec.eigenvalues[1] - Complex64::new(0.0, 1.0)).norm() < 1e-12);
        assert!(spec.residuals.iter().all(|r| *r < 1e-10));
    }

    #[test]
    fn dimension_limit_is_enforced() {
        let op = Operator::<f64>::identity(Domain::Plain { dim: 5 });
        let err = eigen_dense_with(&op, EigenOptions { dim_limit: 4, eigenvectors: false }).unwrap_err();
        assert!(matches!(err, Error::DimensionTooLarge { dim: 5, limit: 4 }));
    }

    #[test]
    fn matching_prefers_nearest() {
        let left = real_values(&[1.0, 2.0, 2.0]);
        let right = real_values(&[2.0 + 1e-10, 1.0, 5.0]);
        let m = match_multiset(&left, &right, Tolerance::MATCHING);
        assert_eq!(m.pairs.len(), 2);
        assert_eq!(m.unmatched_left, vec![2]);
        assert_eq!(m.unmatched_right, vec![2]);
    }
}
