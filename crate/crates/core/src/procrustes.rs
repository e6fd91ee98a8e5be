//! Two-sided orthogonal Procrustes problem for symmetric matrices:
//! minimize ‖PA − BP‖_F over orthogonal P.
//!
//! With eigendecompositions `D_A = V_A A V_Aᵀ` and `D_B = V_B B V_Bᵀ` sorted
//! in the same order, `P = V_Bᵀ V_A` is optimal with cost ‖D_A − D_B‖_F, and
//! so is every `V_Bᵀ σ_Bᵀ σ_A V_A` with σ_A, σ_B drawn from the block
//! orthogonal groups of the two spectra.
//!
//! Minimizing this cost is equivalent to maximizing `tr(AᵀPᵀBP)`, so the same
//! solutions apply to the orthogonal relaxation of the quadratic assignment
//! problem; that relaxation is not exposed here.

use crate::error::{Error, Result};
use crate::isotropy::BlockOrthogonal;
use crate::matrix::Matrix;
use crate::rng::rng_from_seed;
use crate::scalar::Scalar;
use crate::spectral::{eig_sym, SpectralDecomposition, SymMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Order {
    #[default]
    Ascending,
    Descending,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProcrustesSolution<T> {
    pub p: Matrix<T>,
    pub cost: T,
    /// ‖D_A − D_B‖_F for the chosen ordering.
    pub lower_bound: T,
    pub sigma_a: BlockOrthogonal<T>,
    pub sigma_b: BlockOrthogonal<T>,
}

/// Eigenbasis rows, eigenvalues and multiplicities in the requested order.
struct Ordered<T> {
    v: Matrix<T>,
    values: Vec<T>,
    m: Vec<usize>,
}

fn ordered<T: Scalar>(dec: &SpectralDecomposition<T>, order: Order) -> Ordered<T> {
    let n = dec.n();
    match order {
        Order::Ascending => Ordered { v: dec.vectors().clone(), values: dec.values().to_vec(), m: dec.multiplicities() },
        Order::Descending => Ordered {
            v: Matrix::from_fn(n, n, |i, j| dec.vectors()[(n - 1 - i, j)]),
            values: dec.values().iter().rev().copied().collect(),
            m: dec.multiplicities().into_iter().rev().collect(),
        },
    }
}

fn check_dims<T: Scalar>(a: &SymMatrix<T>, b: &SymMatrix<T>) -> Result<()> {
    if a.n() != b.n() {
        return Err(Error::Dimension(format!("A is {0}×{0}, B is {1}×{1}", a.n(), b.n())));
    }
    Ok(())
}

fn spectral_distance<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + (x - y) * (x - y)).sqrt()
}

/// ‖PA − BP‖_F.
pub fn cost<T: Scalar>(a: &SymMatrix<T>, b: &SymMatrix<T>, p: &Matrix<T>) -> Result<T> {
    check_dims(a, b)?;
    let pa = p.matmul(a.as_matrix())?;
    let bp = b.as_matrix().matmul(p)?;
    Ok(pa.checked_sub(&bp)?.frobenius_norm())
}

/// Canonical optimum `P = V_Bᵀ V_A`.
pub fn solve<T: Scalar>(a: &SymMatrix<T>, b: &SymMatrix<T>, order: Order) -> Result<ProcrustesSolution<T>> {
    check_dims(a, b)?;
    let (da, db) = (eig_sym(a)?, eig_sym(b)?);
    let (oa, ob) = (ordered(&da, order), ordered(&db, order));
    let p = &ob.v.transpose() * &oa.v;
    Ok(ProcrustesSolution {
        cost: cost(a, b, &p)?,
        lower_bound: spectral_distance(&oa.values, &ob.values),
        p,
        sigma_a: BlockOrthogonal::identity(&oa.m),
        sigma_b: BlockOrthogonal::identity(&ob.m),
    })
}

/// `count` members of the optimal family with independently Haar-sampled
/// σ_A and σ_B (ascending order). Requires matching multiplicity vectors.
pub fn family_sample<T: Scalar>(
    a: &SymMatrix<T>,
    b: &SymMatrix<T>,
    seed: u64,
    count: usize,
) -> Result<Vec<ProcrustesSolution<T>>> {
    check_dims(a, b)?;
    let (da, db) = (eig_sym(a)?, eig_sym(b)?);
    let (ma, mb) = (da.multiplicities(), db.multiplicities());
    if ma != mb {
        return Err(Error::Structure { left: ma, right: mb });
    }
    let lower_bound = spectral_distance(da.values(), db.values());
    let vbt = db.vectors().transpose();
    let mut rng = rng_from_seed(seed);
    (0..count)
        .map(|_| {
            let sigma_a = BlockOrthogonal::haar(&ma, &mut rng);
            let sigma_b = BlockOrthogonal::haar(&mb, &mut rng);
            let inner = sigma_b.transpose().compose(&sigma_a)?;
            let p = &(&vbt * &inner.to_dense()) * da.vectors();
            Ok(ProcrustesSolution { cost: cost(a, b, &p)?, lower_bound, p, sigma_a, sigma_b })
        })
        .collect()
}

/// Sorted spectra agree elementwise within `tol`.
pub fn isospectral<T: Scalar>(a: &SymMatrix<T>, b: &SymMatrix<T>, tol: T) -> Result<bool> {
    check_dims(a, b)?;
    let (da, db) = (eig_sym(a)?, eig_sym(b)?);
    Ok(da.values().iter().zip(db.values()).all(|(&x, &y)| (x - y).abs() <= tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isotropy::is_member;

    #[test]
    fn identical_diagonal() {
        let a = SymMatrix::from_diagonal(&[1.0, 2.0, 3.0]);
        let sol = solve(&a, &a, Order::Ascending).unwrap();
        assert!(sol.cost < 1e-14);
        assert!(is_member(&eig_sym(&a).unwrap(), &sol.p, 1e-10).unwrap());
    }

    #[test]
    fn relabeling() {
        let a: SymMatrix<f64> = SymMatrix::from_diagonal(&[1.0, 2.0]);
        let b = SymMatrix::from_diagonal(&[2.0, 1.0]);
        let sol = solve(&a, &b, Order::Ascending).unwrap();
        assert!(sol.cost < 1e-14);
        assert!(sol.p[(0, 0)].abs() < 1e-14 && (sol.p[(0, 1)].abs() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn hand_cost() {
        let a = SymMatrix::from_diagonal(&[1.0, 0.0]);
        let b = SymMatrix::from_diagonal(&[0.0, 1.0]);
        assert!((cost(&a, &b, &Matrix::identity(2)).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(cost(&a, &a, &Matrix::identity(2)).unwrap(), 0.0);
    }

    #[test]
    fn descending_uses_own_bound() {
        let a: SymMatrix<f64> = SymMatrix::from_diagonal(&[1.0, 2.0, 5.0]);
        let b = SymMatrix::from_diagonal(&[0.0, 3.0, 4.0]);
        for order in [Order::Ascending, Order::Descending] {
            let sol = solve(&a, &b, order).unwrap();
            assert!((sol.cost - sol.lower_bound).abs() < 1e-12);
        }
    }

    #[test]
    fn mismatched_structure() {
        let a = SymMatrix::from_diagonal(&[1.0, 1.0, 2.0]);
        let b = SymMatrix::from_diagonal(&[1.0, 2.0, 3.0]);
        match family_sample(&a, &b, 0, 1) {
            Err(Error::Structure { left, right }) => {
                assert_eq!(left, vec![2, 1]);
                assert_eq!(right, vec![1, 1, 1]);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(solve(&a, &SymMatrix::from_diagonal(&[1.0]), Order::Ascending).is_err());
    }

    #[test]
    fn isospectral_basic() {
        let a = SymMatrix::from_diagonal(&[1.0, 2.0]);
        let b = SymMatrix::from_diagonal(&[1.0, 3.0]);
        assert!(!isospectral(&a, &b, 1e-6).unwrap());
        assert!(isospectral(&a, &SymMatrix::from_diagonal(&[2.0, 1.0]), 1e-12).unwrap());
    }
}
