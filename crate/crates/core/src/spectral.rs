//! Dense symmetric eigendecomposition by cyclic Jacobi rotations, with
//! eigenvalue clustering into multiplicity blocks.
//!
//! Conventions used throughout the crate:
//!
//! * eigenvectors are stored as the **rows** of `V`, so `V A Vᵀ = diag(λ)`;
//! * eigenvalues are sorted ascending, ties keep Jacobi's output order;
//! * each eigenvector is signed so that its first entry of largest absolute
//!   value is positive.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

pub const DEFAULT_SYMTOL: f64 = 1e-10;
pub const MAX_SWEEPS: usize = 30;
/// Jacobi stops once the off-diagonal Frobenius norm is below this fraction of ‖A‖_F.
pub const OFF_DIAGONAL_TOL: f64 = 1e-12;
/// Relative factor of the default clustering tolerance.
pub const DEFAULT_CLUSTER_REL: f64 = 1e-8;

/// `‖A − Aᵀ‖_F ≤ symtol · max(1, ‖A‖_F)`.
pub fn check_symmetric<T: Scalar>(a: &Matrix<T>, symtol: T) -> Result<bool> {
    let (residual, bound) = symmetry_residual(a, symtol)?;
    Ok(residual <= bound)
}

fn symmetry_residual<T: Scalar>(a: &Matrix<T>, symtol: T) -> Result<(T, T)> {
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "expected a square matrix, got {}×{}",
            a.rows(),
            a.cols()
        )));
    }
    let residual = (a - &a.transpose()).frobenius_norm();
    let bound = symtol * T::one().max(a.frobenius_norm());
    Ok((residual, bound))
}

/// A square matrix that passed the symmetry gate.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix<T> {
    inner: Matrix<T>,
}

impl<T: Scalar> SymMatrix<T> {
    pub fn new(m: Matrix<T>, symtol: T) -> Result<Self> {
        let (residual, bound) = symmetry_residual(&m, symtol)?;
        if residual.is_nan() || residual > bound {
            return Err(Error::NotSymmetric { residual: residual.as_f64(), bound: bound.as_f64() });
        }
        if !m.is_finite() {
            return Err(Error::Argument("matrix has non-finite entries".into()));
        }
        Ok(Self { inner: m })
    }

    /// Checks symmetry at [`DEFAULT_SYMTOL`].
    pub fn try_from_matrix(m: Matrix<T>) -> Result<Self> {
        Self::new(m, T::tol(DEFAULT_SYMTOL))
    }

    pub fn from_rows<R: AsRef<[T]>>(rows: &[R]) -> Result<Self> {
        Self::try_from_matrix(Matrix::from_rows(rows)?)
    }

    pub fn from_diagonal(diag: &[T]) -> Self {
        Self { inner: Matrix::from_diagonal(diag) }
    }

    /// Wraps `(m + mᵀ)/2`, which is symmetric by construction.
    pub fn symmetrized(m: &Matrix<T>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Dimension(format!("expected a square matrix, got {}×{}", m.rows(), m.cols())));
        }
        let half = T::lit(0.5);
        Ok(Self { inner: (m + &m.transpose()).scale(half) })
    }

    pub fn n(&self) -> usize {
        self.inner.rows()
    }

    pub fn as_matrix(&self) -> &Matrix<T> {
        &self.inner
    }

    pub fn into_matrix(self) -> Matrix<T> {
        self.inner
    }

    pub fn frobenius_norm(&self) -> T {
        self.inner.frobenius_norm()
    }

    /// `Q A Qᵀ` for orthogonal `Q`; the result is re-symmetrized.
    pub fn conjugated(&self, q: &Matrix<T>) -> Result<Self> {
        let b = q.matmul(&self.inner)?.matmul(&q.transpose())?;
        Self::symmetrized(&b)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cluster<T> {
    /// Mean of the eigenvalues in the cluster.
    pub value: T,
    pub multiplicity: usize,
    /// Index of the first eigenvalue of the cluster in the sorted spectrum.
    pub start: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition<T> {
    matrix: SymMatrix<T>,
    vectors: Matrix<T>,
    values: Vec<T>,
    clusters: Vec<Cluster<T>>,
    cluster_tol: T,
    borderline: bool,
    id: u64,
}

impl<T: Scalar> SpectralDecomposition<T> {
    pub fn n(&self) -> usize {
        self.values.len()
    }

    /// The decomposed matrix.
    pub fn matrix(&self) -> &SymMatrix<T> {
        &self.matrix
    }

    /// Orthogonal `V` whose rows are eigenvectors.
    pub fn vectors(&self) -> &Matrix<T> {
        &self.vectors
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn clusters(&self) -> &[Cluster<T>] {
        &self.clusters
    }

    pub fn multiplicities(&self) -> Vec<usize> {
        self.clusters.iter().map(|c| c.multiplicity).collect()
    }

    pub fn cluster_tol(&self) -> T {
        self.cluster_tol
    }

    /// Set when some gap between neighbouring eigenvalues lies within a
    /// factor of ten of the clustering tolerance, or a cluster is wider than
    /// the tolerance through chaining.
    pub fn is_borderline(&self) -> bool {
        self.borderline
    }

    /// Fingerprint of `V` and `λ`, used to tag derived group elements.
    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn eigenvector(&self, i: usize) -> &[T] {
        self.vectors.row(i)
    }

    /// `(‖VVᵀ − I‖_F, ‖VAVᵀ − diag λ‖_F)`.
    pub fn residuals(&self) -> (T, T) {
        let orth = self.vectors.orthogonality_defect();
        let d = &(&self.vectors * self.matrix.as_matrix()) * &self.vectors.transpose();
        let recon = (&d - &Matrix::from_diagonal(&self.values)).frobenius_norm();
        (orth, recon)
    }

    /// Builds a decomposition of `a` from a caller-supplied eigenbasis (rows
    /// of `v`). Rows are reordered to ascending eigenvalue; signs are kept.
    pub fn from_basis(a: &SymMatrix<T>, v: Matrix<T>, cluster_tol: Option<T>) -> Result<Self> {
        let n = a.n();
        if v.rows() != n || v.cols() != n {
            return Err(Error::Dimension(format!("basis is {}×{}, matrix is {n}×{n}", v.rows(), v.cols())));
        }
        let orth = v.orthogonality_defect();
        if orth > T::tol(1e-10) * T::lit(n as f64) {
            return Err(Error::Precondition(format!("basis is not orthogonal: ‖VVᵀ − I‖_F = {orth:e}")));
        }
        let d = &(&v * a.as_matrix()) * &v.transpose();
        let diag = d.diagonal();
        let off = (&d - &Matrix::from_diagonal(&diag)).frobenius_norm();
        if off > T::tol(1e-9) * T::one().max(a.frobenius_norm()) {
            return Err(Error::Precondition(format!("basis does not diagonalize the matrix: off-diagonal norm {off:e}")));
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).expect("finite eigenvalues"));
        let values: Vec<T> = order.iter().map(|&i| diag[i]).collect();
        let vectors = Matrix::from_fn(n, n, |i, j| v[(order[i], j)]);
        Ok(Self::assemble(a.clone(), vectors, values, cluster_tol))
    }

    /// Same eigenvalues and clusters with a new basis; the caller guarantees
    /// that `v` still diagonalizes the matrix in the same row order.
    pub(crate) fn with_vectors(&self, v: Matrix<T>) -> Self {
        let mut out = self.clone();
        out.id = fingerprint(&v, &out.values);
        out.vectors = v;
        out
    }

    fn assemble(matrix: SymMatrix<T>, vectors: Matrix<T>, values: Vec<T>, cluster_tol: Option<T>) -> Self {
        let cluster_tol = cluster_tol.unwrap_or_else(|| default_cluster_tol(&values));
        let (clusters, borderline) = build_clusters(&values, cluster_tol);
        let id = fingerprint(&vectors, &values);
        Self { matrix, vectors, values, clusters, cluster_tol, borderline, id }
    }
}

/// `1e-8 · max(1, max |λ|)`.
pub fn default_cluster_tol<T: Scalar>(values: &[T]) -> T {
    let scale = values.iter().fold(T::one(), |acc, x| acc.max(x.abs()));
    T::tol(DEFAULT_CLUSTER_REL) * scale
}

/// Greedy left-to-right grouping of a nondecreasing spectrum: a new cluster
/// starts whenever the next gap exceeds `cluster_tol`.
pub fn cluster_eigenvalues<T: Scalar>(lambdas: &[T], cluster_tol: T) -> Result<Vec<usize>> {
    if cluster_tol.is_nan() || cluster_tol < T::zero() {
        return Err(Error::Argument(format!("cluster tolerance must be nonnegative, got {cluster_tol}")));
    }
    if lambdas.windows(2).any(|w| w[1].is_nan() || w[0].is_nan() || w[1] < w[0]) {
        return Err(Error::Argument("eigenvalues must be sorted nondecreasing".into()));
    }
    Ok(build_clusters(lambdas, cluster_tol).0.into_iter().map(|c| c.multiplicity).collect())
}

fn build_clusters<T: Scalar>(values: &[T], tol: T) -> (Vec<Cluster<T>>, bool) {
    let mut clusters = Vec::new();
    let mut borderline = false;
    let ten = T::lit(10.0);
    let mut start = 0;
    for i in 0..values.len() {
        let last = i + 1 == values.len();
        if !last {
            let gap = values[i + 1] - values[i];
            if gap > tol / ten && gap <= tol * ten && tol > T::zero() {
                borderline = true;
            }
        }
        if last || values[i + 1] - values[i] > tol {
            let members = &values[start..=i];
            if members[members.len() - 1] - members[0] > tol {
                borderline = true;
            }
            let sum = members.iter().fold(T::zero(), |a, &b| a + b);
            clusters.push(Cluster {
                value: sum / T::lit(members.len() as f64),
                multiplicity: members.len(),
                start,
            });
            start = i + 1;
        }
    }
    (clusters, borderline)
}

fn fingerprint<T: Scalar>(v: &Matrix<T>, values: &[T]) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    let mut h = OFFSET;
    for x in v.as_slice().iter().chain(values) {
        for b in x.as_f64().to_bits().to_le_bytes() {
            h ^= u64::from(b);
            h = h.wrapping_mul(PRIME);
        }
    }
    h
}

/// Eigendecomposition with the default clustering tolerance.
pub fn eig_sym<T: Scalar>(a: &SymMatrix<T>) -> Result<SpectralDecomposition<T>> {
    eig_sym_with(a, None)
}

pub fn eig_sym_with<T: Scalar>(a: &SymMatrix<T>, cluster_tol: Option<T>) -> Result<SpectralDecomposition<T>> {
    if let Some(t) = cluster_tol {
        if t.is_nan() || t < T::zero() {
            return Err(Error::Argument(format!("cluster tolerance must be nonnegative, got {t}")));
        }
    }
    let n = a.n();
    let (diag, cols) = jacobi(a.as_matrix())?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).expect("finite eigenvalues"));
    let values: Vec<T> = order.iter().map(|&i| diag[i]).collect();
    let mut vectors = Matrix::from_fn(n, n, |i, j| cols[(j, order[i])]);
    for i in 0..n {
        let row = vectors.row_mut(i);
        let mut best = 0;
        for k in 1..n {
            if row[k].abs() > row[best].abs() {
                best = k;
            }
        }
        if row[best] < T::zero() {
            row.iter_mut().for_each(|x| *x = -*x);
        }
    }
    Ok(SpectralDecomposition::assemble(a.clone(), vectors, values, cluster_tol))
}

/// Cyclic Jacobi in row-major pair order. Returns the unsorted eigenvalues
/// and a matrix whose **columns** are the matching eigenvectors.
fn jacobi<T: Scalar>(m: &Matrix<T>) -> Result<(Vec<T>, Matrix<T>)> {
    let n = m.rows();
    let half = T::lit(0.5);
    let mut a = (m + &m.transpose()).scale(half);
    let mut v = Matrix::identity(n);
    let threshold = T::tol(OFF_DIAGONAL_TOL) * a.frobenius_norm();

    for sweep in 0..=MAX_SWEEPS {
        let off = off_diagonal_norm(&a);
        if off <= threshold {
            return Ok((a.diagonal(), v));
        }
        if sweep == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps: MAX_SWEEPS, residual: off.as_f64() });
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == T::zero() {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (apq + apq);
                let sign = if theta < T::zero() { -T::one() } else { T::one() };
                let t = sign / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                a[(p, q)] = T::zero();
                a[(q, p)] = T::zero();
                for k in 0..n {
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    unreachable!("loop returns on the final sweep")
}

fn off_diagonal_norm<T: Scalar>(a: &Matrix<T>) -> T {
    let n = a.rows();
    let mut s = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)] * a[(i, j)];
            }
        }
    }
    s.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynsys::guiding_matrix;

    #[test]
    fn symmetry_gate() {
        assert!(check_symmetric(&Matrix::<f64>::identity(3), 1e-10).unwrap());
        let tri = Matrix::from_rows(&[[0.0, 1.0], [0.0, 0.0]]).unwrap();
        assert!(!check_symmetric(&tri, 1e-10).unwrap());
        assert!(check_symmetric(guiding_matrix::<f64>(0.0).as_matrix(), 1e-10).unwrap());
        assert!(matches!(check_symmetric(&Matrix::<f64>::zeros(2, 3), 1e-10), Err(Error::Dimension(_))));
        assert!(matches!(SymMatrix::try_from_matrix(tri), Err(Error::NotSymmetric { .. })));
    }

    #[test]
    fn guiding_spectra() {
        let dec = eig_sym(&guiding_matrix::<f64>(0.0)).unwrap();
        let expected = [0.0, 4.0, 4.0];
        for (l, e) in dec.values().iter().zip(expected) {
            assert!((l - e).abs() < 1e-10, "{l} vs {e}");
        }
        assert_eq!(dec.multiplicities(), vec![1, 2]);

        let dec = eig_sym(&guiding_matrix::<f64>(-0.25)).unwrap();
        for (l, e) in dec.values().iter().zip([-1.0, 5.0, 5.0]) {
            assert!((l - e).abs() < 1e-10);
        }
        assert_eq!(dec.multiplicities(), vec![1, 2]);
    }

    #[test]
    fn scalar_case() {
        let dec = eig_sym(&SymMatrix::from_diagonal(&[7.0_f64])).unwrap();
        assert_eq!(dec.values(), &[7.0]);
        assert_eq!(dec.vectors(), &Matrix::identity(1));
    }

    #[test]
    fn sign_convention() {
        let dec = eig_sym(&guiding_matrix::<f64>(0.3)).unwrap();
        for i in 0..3 {
            let row = dec.eigenvector(i);
            let best = row.iter().cloned().fold(0.0_f64, |a, x| if x.abs() > a.abs() { x } else { a });
            assert!(best > 0.0);
        }
    }

    #[test]
    fn clustering() {
        assert_eq!(cluster_eigenvalues(&[0.0, 4.0, 4.0], 1e-8).unwrap(), vec![1, 2]);
        assert_eq!(cluster_eigenvalues(&[1.0, 2.0, 3.0], 1e-8).unwrap(), vec![1, 1, 1]);
        assert_eq!(cluster_eigenvalues(&[5.0, 5.0 + 1e-12, 5.0 + 2e-12], 1e-8).unwrap(), vec![3]);
        assert!(matches!(cluster_eigenvalues(&[1.0], -1.0), Err(Error::Argument(_))));
        assert!(cluster_eigenvalues::<f64>(&[], 1e-8).unwrap().is_empty());
    }

    #[test]
    fn borderline_gap_is_flagged() {
        let a = SymMatrix::from_diagonal(&[1.0, 1.0 + 5e-8, 3.0]);
        let dec = eig_sym_with(&a, Some(1e-8)).unwrap();
        assert!(dec.is_borderline());
        assert_eq!(dec.multiplicities(), vec![1, 1, 1]);
        let dec = eig_sym(&SymMatrix::from_diagonal(&[1.0, 2.0, 3.0])).unwrap();
        assert!(!dec.is_borderline());
    }

    #[test]
    fn zero_matrix() {
        let dec = eig_sym(&SymMatrix::<f64>::from_diagonal(&[0.0; 4])).unwrap();
        assert_eq!(dec.multiplicities(), vec![4]);
    }

    #[test]
    fn f32_path() {
        let a = guiding_matrix::<f32>(-0.25);
        let dec = eig_sym(&a).unwrap();
        let (orth, recon) = dec.residuals();
        assert!(orth < 1e-5 && recon < 1e-4, "{orth} {recon}");
        assert!((dec.values()[0] + 1.0).abs() < 1e-4);
        assert_eq!(dec.multiplicities(), vec![1, 2]);
    }

    #[test]
    fn from_basis_reorders_and_validates() {
        let a = SymMatrix::from_diagonal(&[3.0, 1.0]);
        let dec = SpectralDecomposition::from_basis(&a, Matrix::identity(2), None).unwrap();
        assert_eq!(dec.values(), &[1.0, 3.0]);
        assert_eq!(dec.eigenvector(0), &[0.0, 1.0]);
        let bad = Matrix::from_rows(&[[1.0, 1.0], [1.0, -1.0]]).unwrap();
        assert!(SpectralDecomposition::from_basis(&a, bad, None).is_err());
    }
}
