//! Reference matrices bundled with the crate. Entries quoted to four
//! decimals are only good to about 10⁻⁴; compare them at 10⁻³.

use crate::graphsym::Graph;
use crate::io::parse_matrix;
use crate::matrix::Matrix;
use crate::spectral::SymMatrix;

macro_rules! fixture {
    ($file:literal) => {
        include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/", $file))
    };
}

/// `(file name, contents)` for every bundled fixture.
pub const FILES: &[(&str, &str)] = &[
    ("guiding_mu0.txt", fixture!("guiding_mu0.txt")),
    ("guiding_mu_neg025.txt", fixture!("guiding_mu_neg025.txt")),
    ("guiding_swap.txt", fixture!("guiding_swap.txt")),
    ("guiding_mu0_basis.txt", fixture!("guiding_mu0_basis.txt")),
    ("guiding_mu0_gamma_1.txt", fixture!("guiding_mu0_gamma_1.txt")),
    ("guiding_mu0_gamma_2.txt", fixture!("guiding_mu0_gamma_2.txt")),
    ("guiding_mu0_gamma_3.txt", fixture!("guiding_mu0_gamma_3.txt")),
    ("guiding_mu0_gamma_4.txt", fixture!("guiding_mu0_gamma_4.txt")),
    ("guiding_mu_neg025_rotation.txt", fixture!("guiding_mu_neg025_rotation.txt")),
    ("d4_mu0.txt", fixture!("d4_mu0.txt")),
    ("d4_rotation.txt", fixture!("d4_rotation.txt")),
    ("d4_reflection.txt", fixture!("d4_reflection.txt")),
    ("d4_sigma_rotation.txt", fixture!("d4_sigma_rotation.txt")),
    ("d4_sigma_reflection.txt", fixture!("d4_sigma_reflection.txt")),
    ("d4_hidden_gamma1.txt", fixture!("d4_hidden_gamma1.txt")),
    ("d4_sigma_hidden_gamma1.txt", fixture!("d4_sigma_hidden_gamma1.txt")),
    ("asymmetric_graph.txt", fixture!("asymmetric_graph.txt")),
    ("asymmetric_graph_gamma.txt", fixture!("asymmetric_graph_gamma.txt")),
    ("taylor_demo_basis.txt", fixture!("taylor_demo_basis.txt")),
    ("taylor_demo_gamma2.txt", fixture!("taylor_demo_gamma2.txt")),
];

/// Parses a bundled fixture by file name.
///
/// # Panics
///
/// If `name` is not bundled or fails to parse; both are build defects.
pub fn matrix(name: &str) -> Matrix<f64> {
    let (_, text) = FILES.iter().find(|(n, _)| *n == name).unwrap_or_else(|| panic!("unknown fixture {name}"));
    parse_matrix(text).unwrap_or_else(|e| panic!("fixture {name}: {e}"))
}

pub fn sym(name: &str) -> SymMatrix<f64> {
    SymMatrix::try_from_matrix(matrix(name)).unwrap_or_else(|e| panic!("fixture {name}: {e}"))
}

pub fn guiding_mu0() -> SymMatrix<f64> {
    sym("guiding_mu0.txt")
}

pub fn guiding_mu_neg025() -> SymMatrix<f64> {
    sym("guiding_mu_neg025.txt")
}

/// γ₁…γ₄ of the sign group of A(0); the other four are their negatives.
pub fn guiding_mu0_gammas() -> [Matrix<f64>; 4] {
    [1, 2, 3, 4].map(|k| matrix(&format!("guiding_mu0_gamma_{k}.txt")))
}

/// Normalized kernel vector of A(0).
pub fn guiding_mu0_kernel() -> [f64; 3] {
    [std::f64::consts::FRAC_1_SQRT_2, 0.5, 0.5]
}

pub fn d4_mu0() -> SymMatrix<f64> {
    sym("d4_mu0.txt")
}

pub fn asymmetric_graph() -> Graph {
    Graph::from_matrix(&matrix("asymmetric_graph.txt")).expect("0/1 adjacency")
}

/// Rounded spectrum of [`asymmetric_graph`], one entry per distinct eigenvalue.
pub const ASYMMETRIC_GRAPH_SPECTRUM: [f64; 7] = [-2.24, -1.66, -0.83, 0.0, 0.74, 1.29, 2.70];
pub const ASYMMETRIC_GRAPH_MULTIPLICITIES: [usize; 7] = [1, 1, 1, 2, 1, 1, 1];

/// Block sizes of the canonical group for the 16×16 family at μ = 0.
pub const D4_MULTIPLICITIES: [usize; 12] = [1, 1, 1, 2, 1, 2, 2, 2, 1, 1, 1, 1];

/// The dihedral-symmetric 16×16 family built from 4×4 blocks `D(μ)` and `B(μ)`
/// arranged as a 4-cycle.
pub fn d4_family(mu: f64) -> SymMatrix<f64> {
    let (s, c) = (mu.sin(), mu.cos());
    let d = [
        [-2.0 + s, 0.2 + mu * mu, 0.4 * mu, 0.9 * mu * mu],
        [0.2 + mu * mu, -0.4, -0.8 + mu * (1.0 - mu), mu * s],
        [0.4 * mu, -0.8 + mu * (1.0 - mu), -1.4 + c, 0.0],
        [0.9 * mu * mu, mu * s, 0.0, mu],
    ];
    let b = [
        [1.0 + mu * c, -3.5 * c, -0.5 * mu, -1.0],
        [-3.5 * c, -1.0 + mu, 0.5 * mu * mu, 2.0 + 0.5 * c],
        [-0.5 * mu, 0.5 * mu * mu, 1.0 + mu, 0.0],
        [-1.0, 2.0 + 0.5 * c, 0.0, s],
    ];
    let m = Matrix::from_fn(16, 16, |i, j| {
        let (bi, bj) = (i / 4, j / 4);
        let (r, k) = (i % 4, j % 4);
        match (bj + 4 - bi) % 4 {
            0 => d[r][k],
            1 | 3 => b[r][k],
            _ => 0.0,
        }
    });
    SymMatrix::try_from_matrix(m).expect("symmetric by construction")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_fixture_parses() {
        for (name, _) in FILES {
            let m = matrix(name);
            assert!(m.is_square() && m.rows() > 0, "{name}");
        }
    }

    #[test]
    fn d4_generator_matches_file() {
        assert!(d4_family(0.0).as_matrix().distance(d4_mu0().as_matrix()).unwrap() < 1e-12);
        assert!(d4_family(1.3).n() == 16);
    }

    #[test]
    fn guiding_fixtures_match_constructor() {
        use crate::dynsys::guiding_matrix;
        assert!(guiding_mu0().as_matrix().distance(guiding_matrix(0.0).as_matrix()).unwrap() < 1e-15);
        assert!(guiding_mu_neg025().as_matrix().distance(guiding_matrix(-0.25).as_matrix()).unwrap() < 1e-15);
        assert_eq!(matrix("guiding_swap.txt"), crate::dynsys::swap_symmetry());
    }
}
