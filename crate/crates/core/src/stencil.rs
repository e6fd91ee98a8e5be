//! Symmetry-based Taylor probes.
//!
//! For γ in the isotropy group of the Hessian H(x̄), the symmetric second
//! difference `f(x̄+γh) − 2f(x̄) + f(x̄−γh)` has the same quadratic part
//! `hᵀHh` for every γ. Subtracting two such differences cancels it, leaving
//! the quartic Taylor terms:
//!
//! ```text
//! s = f(x̄+γ₁h) + f(x̄−γ₁h) − f(x̄+γ₂h) − f(x̄−γ₂h) = O(‖h‖⁴)
//! ```

use crate::error::{Error, Result};
use crate::isotropy::is_member;
use crate::matrix::{norm, Matrix};
use crate::scalar::Scalar;
use crate::spectral::{eig_sym, SpectralDecomposition, SymMatrix};

/// Membership tolerance against the finite-difference Hessian.
pub const MEMBERSHIP_TOL: f64 = 1e-6;
/// `h` counts as an eigenvector of γ when ‖γh ∓ h‖ ≤ this · ‖h‖.
pub const EIGENVECTOR_TOL: f64 = 1e-8;
pub const UNDERFLOW: f64 = 1e-14;

pub trait ScalarField<T>: Sync {
    fn dim(&self) -> usize;
    fn eval(&self, x: &[T]) -> T;
}

/// Adapts a closure into a [`ScalarField`].
pub struct FnField<F> {
    dim: usize,
    f: F,
}

impl<F> FnField<F> {
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f }
    }
}

impl<T, F> ScalarField<T> for FnField<F>
where
    F: Fn(&[T]) -> T + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, x: &[T]) -> T {
        (self.f)(x)
    }
}

fn eval<T: Scalar, F: ScalarField<T> + ?Sized>(f: &F, x: &[T]) -> Result<T> {
    let y = f.eval(x);
    if !y.is_finite() {
        return Err(Error::Evaluation { point: x.iter().map(|v| v.as_f64()).collect() });
    }
    Ok(y)
}

fn check_point<T: Scalar, F: ScalarField<T> + ?Sized>(f: &F, x: &[T], what: &str) -> Result<()> {
    if x.len() != f.dim() {
        return Err(Error::Dimension(format!("{what} has length {}, field dimension is {}", x.len(), f.dim())));
    }
    Ok(())
}

fn offset<T: Scalar>(x: &[T], d: &[T], sign: T) -> Vec<T> {
    x.iter().zip(d).map(|(&a, &b)| a + sign * b).collect()
}

pub fn default_step<T: Scalar>(x: &[T]) -> T {
    T::lit(1e-4) * T::one().max(norm(x))
}

/// Central-difference Hessian, symmetrized.
pub fn hessian_fd<T: Scalar, F: ScalarField<T> + ?Sized>(f: &F, x: &[T], step: Option<T>) -> Result<SymMatrix<T>> {
    check_point(f, x, "base point")?;
    let s = step.unwrap_or_else(|| default_step(x));
    if s.is_nan() || s <= T::zero() {
        return Err(Error::Argument(format!("finite-difference step must be positive, got {s}")));
    }
    let n = x.len();
    let mut h = Matrix::zeros(n, n);
    let probe = |di: usize, si: T, dj: usize, sj: T| -> Result<T> {
        let mut p = x.to_vec();
        p[di] += si * s;
        p[dj] += sj * s;
        eval(f, &p)
    };
    let (one, neg) = (T::one(), -T::one());
    let denom = T::lit(4.0) * s * s;
    for i in 0..n {
        for j in i..n {
            let v = (probe(i, one, j, one)? - probe(i, one, j, neg)? - probe(i, neg, j, one)? + probe(i, neg, j, neg)?) / denom;
            h[(i, j)] = v;
            h[(j, i)] = v;
        }
    }
    SymMatrix::symmetrized(&h)
}

/// Hessian and its decomposition at a base point, shared by several probes.
#[derive(Debug, Clone)]
pub struct HessianContext<T> {
    pub base: Vec<T>,
    pub hessian: SymMatrix<T>,
    pub decomposition: SpectralDecomposition<T>,
}

impl<T: Scalar> HessianContext<T> {
    pub fn new<F: ScalarField<T> + ?Sized>(f: &F, base: &[T]) -> Result<Self> {
        let hessian = hessian_fd(f, base, None)?;
        let decomposition = eig_sym(&hessian)?;
        Ok(Self { base: base.to_vec(), hessian, decomposition })
    }

    pub fn require_member(&self, g: &Matrix<T>, label: &str) -> Result<()> {
        if !is_member(&self.decomposition, g, T::tol(MEMBERSHIP_TOL))? {
            return Err(Error::Precondition(format!("{label} does not commute with the Hessian at the base point")));
        }
        Ok(())
    }

    pub fn second_diff<F: ScalarField<T> + ?Sized>(&self, f: &F, gamma: &Matrix<T>, h: &[T]) -> Result<T> {
        check_point(f, h, "displacement")?;
        self.require_member(gamma, "γ")?;
        let gh = gamma.matvec(h)?;
        let two = T::lit(2.0);
        Ok(eval(f, &offset(&self.base, &gh, T::one()))? - two * eval(f, &self.base)? + eval(f, &offset(&self.base, &gh, -T::one()))?)
    }

    pub fn probe<F: ScalarField<T> + ?Sized>(
        &self,
        f: &F,
        g1: &Matrix<T>,
        g2: &Matrix<T>,
        h: &[T],
    ) -> Result<StencilProbe<T>> {
        check_point(f, h, "displacement")?;
        self.require_member(g1, "γ₁")?;
        self.require_member(g2, "γ₂")?;
        let mut warnings = Vec::new();
        let close = T::tol(1e-8);
        if g1.distance(g2)? <= close || (g1 + g2).frobenius_norm() <= close {
            warnings.push(ProbeWarning::GammasCoincide);
        }
        for (which, g) in [(1u8, g1), (2u8, g2)] {
            let gh = g.matvec(h)?;
            for (lambda, sign) in [(1i8, T::one()), (-1i8, -T::one())] {
                let r: Vec<T> = gh.iter().zip(h).map(|(&a, &b)| a - sign * b).collect();
                if norm(&r) <= T::tol(EIGENVECTOR_TOL) * norm(h) {
                    warnings.push(ProbeWarning::EigenvectorDisplacement { gamma: which, eigenvalue: lambda });
                }
            }
        }
        let value = self.probe_value(f, g1, g2, h)?;
        Ok(StencilProbe {
            base: self.base.clone(),
            gamma1: g1.clone(),
            gamma2: g2.clone(),
            h: h.to_vec(),
            value,
            warnings,
        })
    }

    fn probe_value<F: ScalarField<T> + ?Sized>(&self, f: &F, g1: &Matrix<T>, g2: &Matrix<T>, h: &[T]) -> Result<T> {
        let (a, b) = (g1.matvec(h)?, g2.matvec(h)?);
        let x = &self.base;
        let plus = eval(f, &offset(x, &a, T::one()))? - eval(f, &offset(x, &b, T::one()))?;
        let minus = eval(f, &offset(x, &a, -T::one()))? - eval(f, &offset(x, &b, -T::one()))?;
        Ok(plus + minus)
    }

    /// Least-squares slope of log|s| against log‖h‖ over `levels` halvings.
    pub fn order_fit<F: ScalarField<T> + ?Sized>(
        &self,
        f: &F,
        g1: &Matrix<T>,
        g2: &Matrix<T>,
        h: &[T],
        levels: usize,
    ) -> Result<T> {
        if levels < 3 {
            return Err(Error::Argument(format!("order fit needs at least 3 levels, got {levels}")));
        }
        check_point(f, h, "displacement")?;
        self.require_member(g1, "γ₁")?;
        self.require_member(g2, "γ₂")?;
        let mut points = Vec::with_capacity(levels);
        let mut hk = h.to_vec();
        for level in 0..levels {
            let s = self.probe_value(f, g1, g2, &hk)?;
            if s.abs() < T::lit(UNDERFLOW) {
                return Err(Error::DegenerateProbe { level, value: s.abs().as_f64() });
            }
            points.push((norm(&hk).ln(), s.abs().ln()));
            hk.iter_mut().for_each(|v| *v *= T::lit(0.5));
        }
        Ok(least_squares_slope(&points))
    }
}

fn least_squares_slope<T: Scalar>(points: &[(T, T)]) -> T {
    let k = T::lit(points.len() as f64);
    let (sx, sy) = points.iter().fold((T::zero(), T::zero()), |(a, b), &(x, y)| (a + x, b + y));
    let (mx, my) = (sx / k, sy / k);
    let (num, den) = points
        .iter()
        .fold((T::zero(), T::zero()), |(n, d), &(x, y)| (n + (x - mx) * (y - my), d + (x - mx) * (x - mx)));
    num / den
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeWarning {
    /// γ₁ = ±γ₂, so the probe vanishes identically.
    GammasCoincide,
    /// `h` is an eigenvector of γ₁ or γ₂ with the given eigenvalue.
    EigenvectorDisplacement { gamma: u8, eigenvalue: i8 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct StencilProbe<T> {
    pub base: Vec<T>,
    pub gamma1: Matrix<T>,
    pub gamma2: Matrix<T>,
    pub h: Vec<T>,
    /// `f(x̄+γ₁h) + f(x̄−γ₁h) − f(x̄+γ₂h) − f(x̄−γ₂h)`.
    pub value: T,
    pub warnings: Vec<ProbeWarning>,
}

pub fn second_diff<T: Scalar, F: ScalarField<T> + ?Sized>(f: &F, x: &[T], gamma: &Matrix<T>, h: &[T]) -> Result<T> {
    HessianContext::new(f, x)?.second_diff(f, gamma, h)
}

pub fn fourth_order_probe<T: Scalar, F: ScalarField<T> + ?Sized>(
    f: &F,
    x: &[T],
    g1: &Matrix<T>,
    g2: &Matrix<T>,
    h: &[T],
) -> Result<StencilProbe<T>> {
    HessianContext::new(f, x)?.probe(f, g1, g2, h)
}

pub fn order_fit<T: Scalar, F: ScalarField<T> + ?Sized>(
    f: &F,
    x: &[T],
    g1: &Matrix<T>,
    g2: &Matrix<T>,
    h: &[T],
    levels: usize,
) -> Result<T> {
    HessianContext::new(f, x)?.order_fit(f, g1, g2, h, levels)
}

/// Householder reflection `I − 2uuᵀ/‖u‖²`.
pub fn reflection<T: Scalar>(u: &[T]) -> Matrix<T> {
    let nn = u.iter().fold(T::zero(), |a, &b| a + b * b);
    let two = T::lit(2.0);
    Matrix::from_fn(u.len(), u.len(), |i, j| {
        let d = if i == j { T::one() } else { T::zero() };
        d - two * u[i] * u[j] / nn
    })
}

/// `x₁x₂x₃² + x₁² − 3x₂² + x₂ sin x₁ − x₂²x₃²`.
pub fn mixed_trig_cubic<T: Scalar>(x: &[T]) -> T {
    let (a, b, c) = (x[0], x[1], x[2]);
    a * b * c * c + a * a - T::lit(3.0) * b * b + b * a.sin() - b * b * c * c
}

/// Analytic Hessian of [`mixed_trig_cubic`].
pub fn mixed_trig_cubic_hessian<T: Scalar>(x: &[T]) -> Matrix<T> {
    let (a, b, c) = (x[0], x[1], x[2]);
    let two = T::lit(2.0);
    let h = [
        [two - b * a.sin(), c * c + a.cos(), two * b * c],
        [c * c + a.cos(), -two * c * c - T::lit(6.0), two * a * c - T::lit(4.0) * b * c],
        [two * b * c, two * a * c - T::lit(4.0) * b * c, two * a * b - two * b * b],
    ];
    Matrix::from_rows(&h).expect("3×3")
}

/// Named evaluators exposed on the command line.
pub fn builtin(name: &str) -> Option<Box<dyn ScalarField<f64>>> {
    match name {
        "taylor-demo" | "paper-6-3" => Some(Box::new(FnField::new(3, |x: &[f64]| mixed_trig_cubic(x)))),
        "quadratic" => Some(Box::new(FnField::new(3, |x: &[f64]| {
            2.0 * x[0] * x[0] + x[1] * x[1] - x[2] * x[2] + x[0] * x[1] - 3.0 * x[1] * x[2]
        }))),
        // Quartic part ‖x‖⁴ is O(n)-invariant, so probes at the origin are sixth order.
        "sixth-order" => Some(Box::new(FnField::new(3, |x: &[f64]| {
            let r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
            let p = 0.6 * x[0] - 0.8 * x[1] + 0.5 * x[2];
            r2 * r2 + p.powi(6)
        }))),
        _ => None,
    }
}

pub const BUILTIN_NAMES: &[&str] = &["taylor-demo", "paper-6-3", "quadratic", "sixth-order"];
