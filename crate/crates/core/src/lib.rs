//! Orthogonal isotropy groups of real symmetric matrices.
//!
//! For a symmetric `A = Vᵀ diag(λ) V` with eigenvalue multiplicities
//! `m = (m₁, …, m_k)`, every orthogonal matrix commuting with `A` has the form
//! `Vᵀ σ V` with σ block diagonal, block `i` in O(mᵢ). This crate computes
//! that group and uses it for:
//!
//! * [`spectral`]: deterministic Jacobi eigendecomposition and clustering;
//! * [`isotropy`]: enumeration of the sign subgroup, Haar sampling, membership;
//! * [`procrustes`]: the two-sided orthogonal Procrustes problem and its
//!   full family of optimal solutions;
//! * [`graphsym`]: automorphisms, isomorphism witnesses and hidden
//!   orthogonal symmetries of graphs;
//! * [`stencil`]: four-point probes of fourth-order Taylor terms;
//! * [`dynsys`]: equilibria and bifurcation sweep of ẋ = A(μ)x − ‖x‖²x.
//!
//! ```
//! use symiso::{dynsys, isotropy, spectral};
//!
//! let a = dynsys::guiding_matrix(0.0_f64);
//! let dec = spectral::eig_sym(&a)?;
//! assert_eq!(dec.multiplicities(), vec![1, 2]);
//! assert_eq!(isotropy::gamma2_elements(&dec)?.len(), 8);
//! let g = isotropy::sample_gamma(&dec, 7).gamma;
//! assert!(isotropy::is_member(&dec, &g, 1e-8)?);
//! # Ok::<(), symiso::Error>(())
//! ```
//!
//! Numerical code is generic over [`Scalar`] (`f32` or `f64`); the `*64`
//! aliases below name the double-precision instantiations.

pub mod dynsys;
pub mod error;
pub mod fixtures;
pub mod graphsym;
pub mod io;
pub mod isotropy;
pub mod matrix;
pub mod procrustes;
pub mod rng;
pub mod scalar;
pub mod spectral;
pub mod stencil;

pub use error::{Error, Result};
pub use graphsym::{Graph, Permutation};
pub use isotropy::{BlockOrthogonal, GroupSource, IsotropyElement, SignPattern};
pub use matrix::Matrix;
pub use procrustes::{Order, ProcrustesSolution};
pub use scalar::Scalar;
pub use spectral::{SpectralDecomposition, SymMatrix};

pub type Matrix64 = Matrix<f64>;
pub type Matrix32 = Matrix<f32>;
pub type SymMatrix64 = SymMatrix<f64>;
pub type SymMatrix32 = SymMatrix<f32>;
pub type SpectralDecomposition64 = SpectralDecomposition<f64>;
pub type SpectralDecomposition32 = SpectralDecomposition<f32>;
pub type BlockOrthogonal64 = BlockOrthogonal<f64>;
pub type IsotropyElement64 = IsotropyElement<f64>;
pub type ProcrustesSolution64 = ProcrustesSolution<f64>;
pub type EquilibriumSet64 = dynsys::EquilibriumSet<f64>;
pub type StencilProbe64 = stencil::StencilProbe<f64>;
