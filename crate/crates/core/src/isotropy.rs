//! Elements of the orthogonal isotropy group Γ(A) = Vᵀ O_B(m) V of a
//! symmetric matrix, and of its finite sign subgroup Γ₂(A) = {Vᵀ σ V}.

use rand::Rng;

use crate::error::{Error, Result};
use crate::matrix::{haar_orthogonal, Matrix};
use crate::rng::rng_from_seed;
use crate::scalar::Scalar;
use crate::spectral::{SpectralDecomposition, SymMatrix};

/// Largest dimension for which Γ₂(A) is enumerated.
pub const GAMMA2_MAX_N: usize = 20;

/// A diagonal ±1 matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignPattern {
    signs: Vec<i8>,
}

impl SignPattern {
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if let Some(s) = signs.iter().find(|&&s| s != 1 && s != -1) {
            return Err(Error::Argument(format!("sign entries must be ±1, found {s}")));
        }
        Ok(Self { signs })
    }

    /// Bit `i` of `code` set means entry `i` is −1.
    pub fn from_code(n: usize, code: u64) -> Self {
        Self { signs: (0..n).map(|i| if code >> i & 1 == 1 { -1 } else { 1 }).collect() }
    }

    pub fn code(&self) -> u64 {
        self.signs.iter().enumerate().fold(0, |acc, (i, &s)| if s < 0 { acc | 1 << i } else { acc })
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }
}

/// Block-diagonal orthogonal matrix with block sizes `m`, i.e. an element of O_B(m).
#[derive(Debug, Clone, PartialEq)]
pub struct BlockOrthogonal<T> {
    multiplicities: Vec<usize>,
    blocks: Vec<Matrix<T>>,
}

impl<T: Scalar> BlockOrthogonal<T> {
    pub fn new(blocks: Vec<Matrix<T>>) -> Result<Self> {
        let mut multiplicities = Vec::with_capacity(blocks.len());
        for (i, b) in blocks.iter().enumerate() {
            if !b.is_square() || b.rows() == 0 {
                return Err(Error::Dimension(format!("block {i} is {}×{}", b.rows(), b.cols())));
            }
            let m = b.rows();
            let defect = b.orthogonality_defect();
            if defect > T::tol(1e-10) * T::lit(m as f64) {
                return Err(Error::Precondition(format!(
                    "block {i} is not orthogonal: ‖QQᵀ − I‖_F = {defect:e}"
                )));
            }
            multiplicities.push(m);
        }
        Ok(Self { multiplicities, blocks })
    }

    pub fn identity(m: &[usize]) -> Self {
        Self { multiplicities: m.to_vec(), blocks: m.iter().map(|&k| Matrix::identity(k)).collect() }
    }

    pub fn negated_identity(m: &[usize]) -> Self {
        Self {
            multiplicities: m.to_vec(),
            blocks: m.iter().map(|&k| Matrix::identity(k).scale(-T::one())).collect(),
        }
    }

    /// Lifts a sign pattern into diagonal blocks of sizes `m`.
    pub fn from_signs(m: &[usize], signs: &SignPattern) -> Result<Self> {
        let n: usize = m.iter().sum();
        if n != signs.len() {
            return Err(Error::Dimension(format!("sign pattern of length {} for block sizes summing to {n}", signs.len())));
        }
        let mut offset = 0;
        let blocks = m
            .iter()
            .map(|&k| {
                let d: Vec<T> = signs.signs()[offset..offset + k].iter().map(|&s| T::lit(f64::from(s))).collect();
                offset += k;
                Matrix::from_diagonal(&d)
            })
            .collect();
        Ok(Self { multiplicities: m.to_vec(), blocks })
    }

    /// Independent Haar draw on each O(mᵢ).
    pub fn haar<R: Rng + ?Sized>(m: &[usize], rng: &mut R) -> Self {
        Self { multiplicities: m.to_vec(), blocks: m.iter().map(|&k| haar_orthogonal(k, rng)).collect() }
    }

    /// Reads the diagonal blocks of `full` at sizes `m`, rejecting matrices
    /// with off-block mass above `tol` or non-orthogonal blocks.
    pub fn from_dense(m: &[usize], full: &Matrix<T>, tol: T) -> Result<Self> {
        let n: usize = m.iter().sum();
        if full.rows() != n || full.cols() != n {
            return Err(Error::Dimension(format!("{}×{} matrix for block sizes summing to {n}", full.rows(), full.cols())));
        }
        let mut blocks = Vec::with_capacity(m.len());
        let mut offset = 0;
        let mut off_block = T::zero();
        for &k in m {
            blocks.push(full.submatrix(offset, offset, k, k));
            offset += k;
        }
        let mut starts = Vec::with_capacity(m.len());
        let mut acc = 0;
        for &k in m {
            starts.push(acc);
            acc += k;
        }
        for (bi, (&si, &ki)) in starts.iter().zip(m).enumerate() {
            for (bj, (&sj, &kj)) in starts.iter().zip(m).enumerate() {
                if bi == bj {
                    continue;
                }
                for i in si..si + ki {
                    for j in sj..sj + kj {
                        off_block += full[(i, j)] * full[(i, j)];
                    }
                }
            }
        }
        if off_block.sqrt() > tol {
            return Err(Error::Precondition(format!("matrix has off-block norm {:e}", off_block.sqrt().as_f64())));
        }
        Self::new(blocks)
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    pub fn blocks(&self) -> &[Matrix<T>] {
        &self.blocks
    }

    pub fn n(&self) -> usize {
        self.multiplicities.iter().sum()
    }

    pub fn to_dense(&self) -> Matrix<T> {
        let mut full = Matrix::zeros(self.n(), self.n());
        let mut offset = 0;
        for b in &self.blocks {
            full.set_submatrix(offset, offset, b);
            offset += b.rows();
        }
        full
    }

    pub fn transpose(&self) -> Self {
        Self { multiplicities: self.multiplicities.clone(), blocks: self.blocks.iter().map(Matrix::transpose).collect() }
    }

    /// Blockwise product `self · rhs`.
    pub fn compose(&self, rhs: &Self) -> Result<Self> {
        if self.multiplicities != rhs.multiplicities {
            return Err(Error::Structure { left: self.multiplicities.clone(), right: rhs.multiplicities.clone() });
        }
        Ok(Self {
            multiplicities: self.multiplicities.clone(),
            blocks: self.blocks.iter().zip(&rhs.blocks).map(|(a, b)| a * b).collect(),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GroupSource<T> {
    Signs(SignPattern),
    Blocks(BlockOrthogonal<T>),
}

/// γ = Vᵀ σ V together with the σ it was built from.
#[derive(Debug, Clone, PartialEq)]
pub struct IsotropyElement<T> {
    pub gamma: Matrix<T>,
    pub source: GroupSource<T>,
    pub decomposition_id: u64,
}

impl<T: Scalar> IsotropyElement<T> {
    pub fn sigma(&self, m: &[usize]) -> Result<BlockOrthogonal<T>> {
        match &self.source {
            GroupSource::Blocks(b) => Ok(b.clone()),
            GroupSource::Signs(s) => BlockOrthogonal::from_signs(m, s),
        }
    }
}

fn conjugate_dense<T: Scalar>(dec: &SpectralDecomposition<T>, sigma: &BlockOrthogonal<T>) -> Matrix<T> {
    let v = dec.vectors();
    let n = dec.n();
    // σV is computed blockwise, then Vᵀ(σV).
    let mut sv = Matrix::zeros(n, n);
    let mut offset = 0;
    for b in sigma.blocks() {
        let k = b.rows();
        let rows = v.submatrix(offset, 0, k, n);
        sv.set_submatrix(offset, 0, &(b * &rows));
        offset += k;
    }
    &v.transpose() * &sv
}

/// γ = Vᵀ σ V.
pub fn conjugate<T: Scalar>(dec: &SpectralDecomposition<T>, sigma: &BlockOrthogonal<T>) -> Result<IsotropyElement<T>> {
    let m = dec.multiplicities();
    if sigma.multiplicities() != m.as_slice() {
        return Err(Error::Structure { left: m, right: sigma.multiplicities().to_vec() });
    }
    Ok(IsotropyElement {
        gamma: conjugate_dense(dec, sigma),
        source: GroupSource::Blocks(sigma.clone()),
        decomposition_id: dec.id(),
    })
}

/// Lazily yields the 2ⁿ elements of Γ₂(A) in order of sign-pattern code.
pub fn gamma2_iter<T: Scalar>(
    dec: &SpectralDecomposition<T>,
) -> Result<impl Iterator<Item = IsotropyElement<T>> + '_> {
    let n = dec.n();
    if n > GAMMA2_MAX_N {
        return Err(Error::SizeCap { n, cap: GAMMA2_MAX_N, what: "Γ₂ enumeration" });
    }
    let m = dec.multiplicities();
    Ok((0..1u64 << n).map(move |code| {
        let signs = SignPattern::from_code(n, code);
        let sigma = BlockOrthogonal::from_signs(&m, &signs).expect("pattern length matches");
        IsotropyElement {
            gamma: conjugate_dense(dec, &sigma),
            source: GroupSource::Signs(signs),
            decomposition_id: dec.id(),
        }
    }))
}

pub fn gamma2_elements<T: Scalar>(dec: &SpectralDecomposition<T>) -> Result<Vec<IsotropyElement<T>>> {
    Ok(gamma2_iter(dec)?.collect())
}

/// Haar-random element of Γ(A), deterministic in `seed`.
pub fn sample_gamma<T: Scalar>(dec: &SpectralDecomposition<T>, seed: u64) -> IsotropyElement<T> {
    sample_gamma_with(dec, &mut rng_from_seed(seed))
}

pub fn sample_gamma_with<T: Scalar, R: Rng + ?Sized>(dec: &SpectralDecomposition<T>, rng: &mut R) -> IsotropyElement<T> {
    let sigma = BlockOrthogonal::haar(&dec.multiplicities(), rng);
    IsotropyElement {
        gamma: conjugate_dense(dec, &sigma),
        source: GroupSource::Blocks(sigma),
        decomposition_id: dec.id(),
    }
}

/// ‖GA − AG‖_F.
pub fn commutator_residual<T: Scalar>(a: &SymMatrix<T>, g: &Matrix<T>) -> Result<T> {
    let a = a.as_matrix();
    if g.rows() != a.rows() || g.cols() != a.cols() {
        return Err(Error::Dimension(format!("{}×{} against {}×{}", g.rows(), g.cols(), a.rows(), a.cols())));
    }
    Ok((&(g * a) - &(a * g)).frobenius_norm())
}

/// Membership in Γ(A) via orthogonality and commutation with A.
pub fn is_member<T: Scalar>(dec: &SpectralDecomposition<T>, g: &Matrix<T>, tol: T) -> Result<bool> {
    let a = dec.matrix();
    let residual = commutator_residual(a, g)?;
    let n = T::lit(a.n() as f64);
    Ok(g.orthogonality_defect() <= tol * n && residual <= tol * T::one().max(a.frobenius_norm()))
}

/// Γ(A) is finite exactly when every eigenvalue is simple.
pub fn is_finite<T: Scalar>(dec: &SpectralDecomposition<T>) -> bool {
    dec.clusters().iter().all(|c| c.multiplicity == 1)
}

/// A second decomposition of the same matrix with basis `σ V`; valid for any
/// σ ∈ O_B(m) because σ commutes with the diagonal factor.
pub fn rebase<T: Scalar>(dec: &SpectralDecomposition<T>, sigma: &BlockOrthogonal<T>) -> Result<SpectralDecomposition<T>> {
    let m = dec.multiplicities();
    if sigma.multiplicities() != m.as_slice() {
        return Err(Error::Structure { left: m, right: sigma.multiplicities().to_vec() });
    }
    Ok(dec.with_vectors(&sigma.to_dense() * dec.vectors()))
}

/// Rebases `dec` onto the eigenbasis nearest to `reference` (rows are
/// eigenvectors in the same ascending order). Each block of σ is the polar
/// factor of `R_i V_iᵀ`, so the result is still an eigendecomposition of the
/// same matrix whatever the reference is.
pub fn align_to<T: Scalar>(dec: &SpectralDecomposition<T>, reference: &Matrix<T>) -> Result<SpectralDecomposition<T>> {
    let n = dec.n();
    if reference.rows() != n || reference.cols() != n {
        return Err(Error::Dimension(format!("reference is {}×{}, expected {n}×{n}", reference.rows(), reference.cols())));
    }
    let m = dec.multiplicities();
    let mut blocks = Vec::with_capacity(m.len());
    let mut start = 0;
    for &k in &m {
        let r = reference.submatrix(start, 0, k, n);
        let v = dec.vectors().submatrix(start, 0, k, n);
        blocks.push(polar_factor(&(&r * &v.transpose()))?);
        start += k;
    }
    rebase(dec, &BlockOrthogonal::new(blocks)?)
}

/// Orthogonal factor `M (MᵀM)^{-1/2}` of a nonsingular square matrix.
fn polar_factor<T: Scalar>(mat: &Matrix<T>) -> Result<Matrix<T>> {
    let gram = SymMatrix::symmetrized(&(&mat.transpose() * mat))?;
    let dec = crate::spectral::eig_sym(&gram)?;
    let floor = T::tol(1e-12) * T::one().max(gram.frobenius_norm());
    if dec.values()[0] <= floor {
        return Err(Error::Precondition("reference block is orthogonal to the eigenspace".into()));
    }
    let w = dec.vectors();
    let inv_sqrt: Vec<T> = dec.values().iter().map(|&s| T::one() / s.sqrt()).collect();
    let root = &(&w.transpose() * &Matrix::from_diagonal(&inv_sqrt)) * w;
    Ok(mat * &root)
}

/// Index of the nearest matrix in `set` and its Frobenius distance.
pub fn nearest<'a, T: Scalar>(target: &Matrix<T>, set: impl IntoIterator<Item = &'a Matrix<T>>) -> Option<(usize, T)> {
    set.into_iter()
        .enumerate()
        .filter_map(|(i, m)| m.distance(target).ok().map(|d| (i, d)))
        .min_by(|a, b| a.1.partial_cmp(&b.1).expect("finite distances"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynsys::guiding_matrix;
    use crate::spectral::eig_sym;

    fn dec(mu: f64) -> SpectralDecomposition<f64> {
        eig_sym(&guiding_matrix(mu)).unwrap()
    }

    #[test]
    fn conjugate_identity_and_central() {
        let d = dec(0.0);
        let m = d.multiplicities();
        let g = conjugate(&d, &BlockOrthogonal::identity(&m)).unwrap();
        assert!(g.gamma.distance(&Matrix::identity(3)).unwrap() < 1e-14);
        let g = conjugate(&d, &BlockOrthogonal::negated_identity(&m)).unwrap();
        assert!(g.gamma.distance(&Matrix::identity(3).scale(-1.0)).unwrap() < 1e-14);
    }

    #[test]
    fn conjugate_rejects_mismatched_blocks() {
        let d = dec(0.0);
        let wrong = BlockOrthogonal::<f64>::identity(&[1, 1, 1]);
        assert!(matches!(conjugate(&d, &wrong), Err(Error::Structure { .. })));
    }

    #[test]
    fn gamma2_one_dimensional() {
        let d = eig_sym(&SymMatrix::from_diagonal(&[3.0])).unwrap();
        let els = gamma2_elements(&d).unwrap();
        assert_eq!(els.len(), 2);
        assert_eq!(els[0].gamma[(0, 0)], 1.0);
        assert_eq!(els[1].gamma[(0, 0)], -1.0);
    }

    #[test]
    fn gamma2_size_cap() {
        let d = eig_sym(&SymMatrix::from_diagonal(&[1.0; 21])).unwrap();
        assert!(matches!(gamma2_iter(&d).map(|_| ()), Err(Error::SizeCap { n: 21, .. })));
    }

    #[test]
    fn samples_commute_and_repeat() {
        let d = dec(-0.25);
        let a = sample_gamma(&d, 11);
        let b = sample_gamma(&d, 11);
        assert_eq!(a, b);
        assert!(commutator_residual(d.matrix(), &a.gamma).unwrap() <= 1e-8);
    }

    #[test]
    fn simple_spectrum_samples_are_sign_elements() {
        let d = eig_sym(&SymMatrix::from_diagonal(&[1.0, 2.0, 3.0])).unwrap();
        let g = sample_gamma(&d, 3);
        let els = gamma2_elements(&d).unwrap();
        let (_, dist) = nearest(&g.gamma, els.iter().map(|e| &e.gamma)).unwrap();
        assert!(dist < 1e-12);
    }

    #[test]
    fn commutator_basics() {
        let a = guiding_matrix::<f64>(0.0);
        assert_eq!(commutator_residual(&a, &Matrix::identity(3)).unwrap(), 0.0);
        assert!(commutator_residual(&a, a.as_matrix()).unwrap() < 1e-14);
        assert!(commutator_residual(&a, &Matrix::identity(2)).is_err());
    }

    #[test]
    fn finiteness() {
        assert!(is_finite(&eig_sym(&SymMatrix::from_diagonal(&[1.0, 2.0, 3.0])).unwrap()));
        assert!(!is_finite(&dec(-0.25)));
    }

    #[test]
    fn sign_pattern_codes() {
        let s = SignPattern::from_code(4, 0b1010);
        assert_eq!(s.signs(), &[1, -1, 1, -1]);
        assert_eq!(s.code(), 0b1010);
        assert!(SignPattern::new(vec![1, 0]).is_err());
    }

    #[test]
    fn block_roundtrip_through_dense() {
        let mut rng = rng_from_seed(5);
        let b = BlockOrthogonal::<f64>::haar(&[1, 2, 3], &mut rng);
        let back = BlockOrthogonal::from_dense(&[1, 2, 3], &b.to_dense(), 1e-12).unwrap();
        assert_eq!(b, back);
        assert!(BlockOrthogonal::from_dense(&[2, 4], &b.to_dense(), 1e-12).is_err());
    }
}
