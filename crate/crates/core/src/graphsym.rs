//! Symmetries of undirected simple graphs: exact automorphism and
//! isomorphism search, and "hidden" orthogonal symmetries from Γ(adjacency).
//!
//! A [`Permutation`] with map `π` acts as the matrix with `P[π(i), i] = 1`,
//! so `P A Pᵀ` has entry `A[i, j]` at `(π(i), π(j))`.

use crate::error::{Error, Result};
use crate::isotropy::{sample_gamma, IsotropyElement};
use crate::matrix::Matrix;
use crate::procrustes::isospectral;
use crate::scalar::Scalar;
use crate::spectral::{eig_sym, SpectralDecomposition, SymMatrix};

/// Cap for [`Strategy::Exhaustive`], which walks all n! permutations.
pub const EXHAUSTIVE_MAX_N: usize = 12;
/// Cap for [`find_isomorphism`].
pub const ISOMORPHISM_MAX_N: usize = 12;
pub const BACKTRACK_MAX_N: usize = 512;
pub const DEFAULT_PERMUTATION_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<u8>,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Self { n, adj: vec![0; n * n] }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n);
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Argument(format!("edge ({u}, {v}) out of range for {n} vertices")));
            }
            if u == v {
                return Err(Error::Argument(format!("self-loop at vertex {u}")));
            }
            g.adj[u * n + v] = 1;
            g.adj[v * n + u] = 1;
        }
        Ok(g)
    }

    /// Accepts an exactly symmetric 0/1 matrix with zero diagonal.
    pub fn from_matrix<T: Scalar>(m: &Matrix<T>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Dimension(format!("adjacency matrix is {}×{}", m.rows(), m.cols())));
        }
        let n = m.rows();
        let mut g = Self::empty(n);
        for i in 0..n {
            for j in 0..n {
                let x = m[(i, j)];
                let bit = if x == T::zero() {
                    0
                } else if x == T::one() {
                    1
                } else {
                    return Err(Error::Argument(format!("adjacency entry ({i}, {j}) = {x} is not 0 or 1")));
                };
                g.adj[i * n + j] = bit;
            }
        }
        for i in 0..n {
            if g.adj[i * n + i] != 0 {
                return Err(Error::Argument(format!("nonzero diagonal at vertex {i}")));
            }
            for j in 0..i {
                if g.adj[i * n + j] != g.adj[j * n + i] {
                    return Err(Error::Argument(format!("adjacency is not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u * self.n + v] == 1
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u * self.n..(u + 1) * self.n].iter().map(|&b| usize::from(b)).sum()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.has_edge(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn adjacency<T: Scalar>(&self) -> SymMatrix<T> {
        let m = Matrix::from_fn(self.n, self.n, |i, j| if self.has_edge(i, j) { T::one() } else { T::zero() });
        SymMatrix::try_from_matrix(m).expect("adjacency is symmetric")
    }

    pub fn spectrum<T: Scalar>(&self) -> Result<SpectralDecomposition<T>> {
        eig_sym(&self.adjacency())
    }

    /// Image of the graph under `p`: edge `(u, v)` becomes `(π(u), π(v))`.
    pub fn relabeled(&self, p: &Permutation) -> Result<Self> {
        if p.len() != self.n {
            return Err(Error::Dimension(format!("permutation of {} points on {} vertices", p.len(), self.n)));
        }
        let edges: Vec<_> = self.edges().into_iter().map(|(u, v)| (p.apply(u), p.apply(v))).collect();
        Self::from_edges(self.n, &edges)
    }

    fn invariants(&self) -> Vec<(usize, Vec<usize>, usize)> {
        (0..self.n)
            .map(|u| {
                let nbrs: Vec<usize> = (0..self.n).filter(|&v| self.has_edge(u, v)).collect();
                let mut nd: Vec<usize> = nbrs.iter().map(|&v| self.degree(v)).collect();
                nd.sort_unstable();
                let mut triangles = 0;
                for (k, &a) in nbrs.iter().enumerate() {
                    for &b in &nbrs[k + 1..] {
                        if self.has_edge(a, b) {
                            triangles += 1;
                        }
                    }
                }
                (nbrs.len(), nd, triangles)
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; map.len()];
        for &x in &map {
            if x >= map.len() || std::mem::replace(&mut seen[x], true) {
                return Err(Error::Argument(format!("{map:?} is not a bijection")));
            }
        }
        Ok(Self { map })
    }

    pub fn identity(n: usize) -> Self {
        Self { map: (0..n).collect() }
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &x)| i == x)
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Self) -> Self {
        Self { map: other.map.iter().map(|&i| self.map[i]).collect() }
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.map.len()];
        for (i, &x) in self.map.iter().enumerate() {
            inv[x] = i;
        }
        Self { map: inv }
    }

    pub fn to_matrix<T: Scalar>(&self) -> Matrix<T> {
        let n = self.map.len();
        let mut m = Matrix::zeros(n, n);
        for (i, &x) in self.map.iter().enumerate() {
            m[(x, i)] = T::one();
        }
        m
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Vertex-invariant pruned backtracking; exact.
    #[default]
    Backtracking,
    /// All n! permutations; used as an oracle for small graphs.
    Exhaustive,
}

/// Aut(G) with the default strategy.
pub fn automorphisms(g: &Graph, limit: usize) -> Result<Vec<Permutation>> {
    automorphisms_with(g, limit, Strategy::Backtracking)
}

/// All permutations π with `A[π(i), π(j)] = A[i, j]`, sorted lexicographically.
pub fn automorphisms_with(g: &Graph, limit: usize, strategy: Strategy) -> Result<Vec<Permutation>> {
    match strategy {
        Strategy::Exhaustive => {
            if g.n > EXHAUSTIVE_MAX_N {
                return Err(Error::SizeCap { n: g.n, cap: EXHAUSTIVE_MAX_N, what: "exhaustive automorphism search" });
            }
            let mut out = Vec::new();
            let mut perm: Vec<usize> = (0..g.n).collect();
            loop {
                if (0..g.n).all(|i| (0..g.n).all(|j| g.has_edge(perm[i], perm[j]) == g.has_edge(i, j))) {
                    if out.len() == limit {
                        return Err(Error::LimitExceeded { limit });
                    }
                    out.push(Permutation { map: perm.clone() });
                }
                if !next_permutation(&mut perm) {
                    break;
                }
            }
            Ok(out)
        }
        Strategy::Backtracking => {
            if g.n > BACKTRACK_MAX_N {
                return Err(Error::SizeCap { n: g.n, cap: BACKTRACK_MAX_N, what: "backtracking automorphism search" });
            }
            let mut search = Matcher::new(g, g);
            search.run(limit, false)?;
            Ok(search.found)
        }
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Backtracking search for structure-preserving maps from `a` onto `b`.
struct Matcher<'g> {
    a: &'g Graph,
    b: &'g Graph,
    inv_a: Vec<(usize, Vec<usize>, usize)>,
    inv_b: Vec<(usize, Vec<usize>, usize)>,
    map: Vec<usize>,
    used: Vec<bool>,
    found: Vec<Permutation>,
}

impl<'g> Matcher<'g> {
    fn new(a: &'g Graph, b: &'g Graph) -> Self {
        Self {
            a,
            b,
            inv_a: a.invariants(),
            inv_b: b.invariants(),
            map: Vec::with_capacity(a.n),
            used: vec![false; b.n],
            found: Vec::new(),
        }
    }

    /// Returns early with `Ok(())` once one map is found when `first_only`.
    fn run(&mut self, limit: usize, first_only: bool) -> Result<()> {
        let i = self.map.len();
        if i == self.a.n {
            if self.found.len() == limit {
                return Err(Error::LimitExceeded { limit });
            }
            self.found.push(Permutation { map: self.map.clone() });
            return Ok(());
        }
        for c in 0..self.b.n {
            if self.used[c] || self.inv_a[i] != self.inv_b[c] {
                continue;
            }
            let consistent = self.map.iter().enumerate().all(|(j, &mj)| self.a.has_edge(i, j) == self.b.has_edge(c, mj));
            if !consistent {
                continue;
            }
            self.map.push(c);
            self.used[c] = true;
            let r = self.run(limit, first_only);
            self.used[c] = false;
            self.map.pop();
            r?;
            if first_only && !self.found.is_empty() {
                return Ok(());
            }
        }
        Ok(())
    }
}

/// Haar sample from Γ(adjacency); generically not a permutation.
pub fn hidden_symmetry_sample<T: Scalar>(g: &Graph, seed: u64) -> Result<IsotropyElement<T>> {
    Ok(sample_gamma(&g.spectrum::<T>()?, seed))
}

/// Reads `p` as a permutation matrix if every entry is within `tol` of 0 or
/// 1 with exactly one 1 per row and column.
pub fn is_permutation<T: Scalar>(p: &Matrix<T>, tol: T) -> Option<Permutation> {
    if !p.is_square() {
        return None;
    }
    let n = p.rows();
    let mut map = vec![usize::MAX; n];
    for j in 0..n {
        for i in 0..n {
            let x = p[(i, j)];
            if (x - T::one()).abs() <= tol {
                if map[j] != usize::MAX {
                    return None;
                }
                map[j] = i;
            } else if x.abs() > tol {
                return None;
            }
        }
        if map[j] == usize::MAX {
            return None;
        }
    }
    Permutation::new(map).ok()
}

/// A witness π with `π(G_A) = G_B`, or `None`. Non-isospectral pairs are
/// rejected before any search.
pub fn find_isomorphism(ga: &Graph, gb: &Graph) -> Result<Option<Permutation>> {
    let n = ga.n.max(gb.n);
    if n > ISOMORPHISM_MAX_N {
        return Err(Error::SizeCap { n, cap: ISOMORPHISM_MAX_N, what: "isomorphism search" });
    }
    if ga.n != gb.n || ga.edges().len() != gb.edges().len() {
        return Ok(None);
    }
    let (a, b) = (ga.adjacency::<f64>(), gb.adjacency::<f64>());
    let tol = 1e-8 * a.frobenius_norm().max(1.0);
    if !isospectral(&a, &b, tol)? {
        return Ok(None);
    }
    let mut search = Matcher::new(ga, gb);
    search.run(usize::MAX, true)?;
    Ok(search.found.into_iter().next())
}
