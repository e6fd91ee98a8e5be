//! The three-dimensional system ẋ = A(μ)x − ‖x‖²x.
//!
//! `A(μ)` commutes with the coordinate swap `S = (1)(2 3)` for every μ and
//! has eigenvalues 4μ (simple) and 4(1 − μ) (double). A nonzero point is an
//! equilibrium exactly when it is an eigenvector whose squared norm equals
//! its (positive) eigenvalue, so equilibria are read off the spectrum.

use crate::error::{Error, Result};
use crate::matrix::{dot, norm, Matrix};
use crate::scalar::Scalar;
use crate::spectral::{eig_sym, SpectralDecomposition, SymMatrix};

pub type Point<T> = [T; 3];

pub const DEFAULT_DT: f64 = 1e-2;
pub const DEFAULT_STEPS: usize = 10_000;

pub fn guiding_matrix<T: Scalar>(mu: T) -> SymMatrix<T> {
    let (one, two, three) = (T::one(), T::lit(2.0), T::lit(3.0));
    let c = two * mu - one;
    let r = T::SQRT_2() * c;
    let rows = [[two, r, r], [r, three - two * mu, c], [r, c, three - two * mu]];
    SymMatrix::try_from_matrix(Matrix::from_rows(&rows).expect("3×3")).expect("symmetric by construction")
}

/// The coordinate swap x₂ ↔ x₃.
pub fn swap_symmetry<T: Scalar>() -> Matrix<T> {
    let (o, z) = (T::one(), T::zero());
    Matrix::from_rows(&[[o, z, z], [z, z, o], [z, o, z]]).expect("3×3")
}

/// Closed-form spectrum `(4μ, 4(1 − μ))`.
pub fn spectrum_formula_check<T: Scalar>(mu: T) -> (T, T) {
    let four = T::lit(4.0);
    (four * mu, four * (T::one() - mu))
}

pub fn rhs<T: Scalar>(x: &Point<T>, mu: T) -> Point<T> {
    rhs_with(guiding_matrix(mu).as_matrix(), x)
}

fn rhs_with<T: Scalar>(a: &Matrix<T>, x: &Point<T>) -> Point<T> {
    let ax = a.matvec(x).expect("3×3 against length 3");
    let r2 = dot(x, x);
    [ax[0] - r2 * x[0], ax[1] - r2 * x[1], ax[2] - r2 * x[2]]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ComponentKind {
    Origin,
    PointPair,
    Circle,
    Sphere,
}

impl ComponentKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ComponentKind::Origin => "origin",
            ComponentKind::PointPair => "point-pair",
            ComponentKind::Circle => "circle",
            ComponentKind::Sphere => "sphere",
        }
    }
}

/// One connected family of equilibria: the origin, or the sphere of radius
/// √λ in an m-dimensional eigenspace (m = 1: a pair of points, m = 2: a
/// circle, m ≥ 3: a sphere).
#[derive(Debug, Clone, PartialEq)]
pub enum Component<T> {
    Origin,
    PointPair { direction: Vec<T>, radius: T, eigenvalue: T },
    Circle { basis: [Vec<T>; 2], radius: T, eigenvalue: T },
    Sphere { basis: Vec<Vec<T>>, radius: T, eigenvalue: T },
}

impl<T: Scalar> Component<T> {
    pub fn kind(&self) -> ComponentKind {
        match self {
            Component::Origin => ComponentKind::Origin,
            Component::PointPair { .. } => ComponentKind::PointPair,
            Component::Circle { .. } => ComponentKind::Circle,
            Component::Sphere { .. } => ComponentKind::Sphere,
        }
    }

    pub fn radius(&self) -> T {
        match self {
            Component::Origin => T::zero(),
            Component::PointPair { radius, .. } | Component::Circle { radius, .. } | Component::Sphere { radius, .. } => *radius,
        }
    }

    pub fn eigenvalue(&self) -> Option<T> {
        match self {
            Component::Origin => None,
            Component::PointPair { eigenvalue, .. }
            | Component::Circle { eigenvalue, .. }
            | Component::Sphere { eigenvalue, .. } => Some(*eigenvalue),
        }
    }

    pub fn basis(&self) -> Vec<&[T]> {
        match self {
            Component::Origin => Vec::new(),
            Component::PointPair { direction, .. } => vec![direction.as_slice()],
            Component::Circle { basis, .. } => basis.iter().map(Vec::as_slice).collect(),
            Component::Sphere { basis, .. } => basis.iter().map(Vec::as_slice).collect(),
        }
    }

    /// Euclidean distance from `x` to the component.
    pub fn distance(&self, x: &[T]) -> T {
        let basis = self.basis();
        if basis.is_empty() {
            return norm(x);
        }
        let coords: Vec<T> = basis.iter().map(|b| dot(b, x)).collect();
        let mut proj = vec![T::zero(); x.len()];
        for (c, b) in coords.iter().zip(&basis) {
            for (p, &bi) in proj.iter_mut().zip(b.iter()) {
                *p += *c * bi;
            }
        }
        let perp: Vec<T> = x.iter().zip(&proj).map(|(&a, &b)| a - b).collect();
        let inplane = norm(&coords);
        let radial = if matches!(self, Component::PointPair { .. }) {
            // nearest of ±r·v
            (coords[0].abs() - self.radius()).abs()
        } else {
            (inplane - self.radius()).abs()
        };
        (norm(&perp) * norm(&perp) + radial * radial).sqrt()
    }

    /// `k` points spread over the component (both points of a pair, a
    /// uniform angle grid on a circle, a spiral grid on a sphere).
    pub fn sample_points(&self, k: usize) -> Vec<Vec<T>> {
        let k = k.max(1);
        let lin = |coeffs: &[T], basis: &[&[T]]| -> Vec<T> {
            let n = basis[0].len();
            let mut out = vec![T::zero(); n];
            for (c, b) in coeffs.iter().zip(basis) {
                for (o, &bi) in out.iter_mut().zip(b.iter()) {
                    *o += *c * bi;
                }
            }
            out
        };
        let basis = self.basis();
        let r = self.radius();
        match self {
            Component::Origin => vec![vec![T::zero(); 3]],
            Component::PointPair { .. } => vec![lin(&[r], &basis), lin(&[-r], &basis)],
            Component::Circle { .. } => (0..k)
                .map(|i| {
                    let t = T::TAU() * T::lit(i as f64) / T::lit(k as f64);
                    lin(&[r * t.cos(), r * t.sin()], &basis)
                })
                .collect(),
            Component::Sphere { .. } => (0..k)
                .map(|i| {
                    // Fibonacci spiral on the first three basis directions.
                    let z = T::one() - T::lit(2.0) * (T::lit(i as f64) + T::lit(0.5)) / T::lit(k as f64);
                    let rho = (T::one() - z * z).max(T::zero()).sqrt();
                    let phi = T::lit(2.399_963_229_728_653) * T::lit(i as f64);
                    let mut coeffs = vec![r * rho * phi.cos(), r * rho * phi.sin(), r * z];
                    coeffs.resize(basis.len(), T::zero());
                    lin(&coeffs, &basis)
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumSet<T> {
    pub eigenvalues: Vec<T>,
    pub multiplicities: Vec<usize>,
    /// Origin first, then one component per positive eigenvalue cluster in
    /// ascending eigenvalue order.
    pub components: Vec<Component<T>>,
}

impl<T: Scalar> EquilibriumSet<T> {
    pub fn kinds(&self) -> Vec<ComponentKind> {
        self.components.iter().map(Component::kind).collect()
    }

    /// Kinds with multiplicity, order-independent.
    pub fn inventory(&self) -> Vec<ComponentKind> {
        let mut k = self.kinds();
        k.sort();
        k
    }

    pub fn distance(&self, x: &[T]) -> T {
        self.components.iter().map(|c| c.distance(x)).fold(T::infinity(), T::min)
    }
}

/// Equilibria of ẋ = Ax − ‖x‖²x for any symmetric `A`.
pub fn equilibria_of<T: Scalar>(dec: &SpectralDecomposition<T>) -> EquilibriumSet<T> {
    let mut components = vec![Component::Origin];
    for cluster in dec.clusters() {
        if cluster.value <= dec.cluster_tol() {
            continue;
        }
        let eigenvalue = cluster.value;
        let radius = eigenvalue.sqrt();
        let basis: Vec<Vec<T>> = (cluster.start..cluster.start + cluster.multiplicity)
            .map(|i| dec.eigenvector(i).to_vec())
            .collect();
        components.push(match cluster.multiplicity {
            1 => Component::PointPair { direction: basis[0].clone(), radius, eigenvalue },
            2 => Component::Circle { basis: [basis[0].clone(), basis[1].clone()], radius, eigenvalue },
            _ => Component::Sphere { basis, radius, eigenvalue },
        });
    }
    EquilibriumSet { eigenvalues: dec.values().to_vec(), multiplicities: dec.multiplicities(), components }
}

pub fn equilibria<T: Scalar>(mu: T) -> Result<EquilibriumSet<T>> {
    Ok(equilibria_of(&eig_sym(&guiding_matrix(mu))?))
}

/// Classical fixed-step RK4; the returned trajectory starts at `x0` and has
/// `steps + 1` points.
pub fn integrate<T: Scalar>(x0: Point<T>, mu: T, dt: T, steps: usize) -> Result<Vec<Point<T>>> {
    if dt.is_nan() || dt <= T::zero() {
        return Err(Error::Argument(format!("time step must be positive, got {dt}")));
    }
    if steps == 0 {
        return Err(Error::Argument("at least one step is required".into()));
    }
    let a = guiding_matrix(mu).into_matrix();
    let f = |x: &Point<T>| rhs_with(&a, x);
    let axpy = |x: &Point<T>, k: &Point<T>, s: T| [x[0] + s * k[0], x[1] + s * k[1], x[2] + s * k[2]];
    let (half, sixth, two) = (T::lit(0.5), T::one() / T::lit(6.0), T::lit(2.0));
    let mut traj = Vec::with_capacity(steps + 1);
    let mut x = x0;
    traj.push(x);
    for step in 1..=steps {
        let k1 = f(&x);
        let k2 = f(&axpy(&x, &k1, half * dt));
        let k3 = f(&axpy(&x, &k2, half * dt));
        let k4 = f(&axpy(&x, &k3, dt));
        for i in 0..3 {
            x[i] += dt * sixth * (k1[i] + two * k2[i] + two * k3[i] + k4[i]);
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::Divergence { step });
        }
        traj.push(x);
    }
    Ok(traj)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow<T> {
    pub mu: T,
    pub eigenvalues: Vec<T>,
    pub components: Vec<(ComponentKind, T)>,
    /// The component inventory differs from the previous row.
    pub transition: bool,
}

pub fn sweep<T: Scalar>(mu_from: T, mu_to: T, samples: usize) -> Result<Vec<SweepRow<T>>> {
    if samples < 2 {
        return Err(Error::Argument(format!("a sweep needs at least 2 samples, got {samples}")));
    }
    let last = T::lit((samples - 1) as f64);
    let mut rows: Vec<SweepRow<T>> = Vec::with_capacity(samples);
    let mut previous: Option<Vec<ComponentKind>> = None;
    for i in 0..samples {
        let mu = if i + 1 == samples { mu_to } else { mu_from + (mu_to - mu_from) * T::lit(i as f64) / last };
        let set = equilibria(mu)?;
        let inventory = set.inventory();
        let transition = previous.as_ref().is_some_and(|p| *p != inventory);
        previous = Some(inventory);
        rows.push(SweepRow {
            mu,
            eigenvalues: set.eigenvalues.clone(),
            components: set.components.iter().map(|c| (c.kind(), c.radius())).collect(),
            transition,
        });
    }
    Ok(rows)
}
