//! Shift and coin operators of coined quantum walks, and the time-evolution
//! matrices U = SC and U = C1 C2.
//!
//! A coin is built from an isometry d (p rows, orthonormal in the 2m-dim
//! arc space) as C = a d*d + b (I - d*d): the spectrum is {a, b} with a of
//! multiplicity p. The vertex-supported Grover builders give the classical
//! coined walk; seeded random isometries exercise the determinant identities
//! in full generality.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::Distribution;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::{self, CMatrix};
use crate::poly::{ONE, ZERO};

type C = Complex64;

/// Row-orthonormality tolerance for isometries.
pub const ISOMETRY_TOL: f64 = 1e-12;
/// State normalization tolerance.
pub const STATE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsometryKind {
    OriginGrover,
    TerminalGrover,
    Random { seed: u64 },
    Custom,
}

/// A p x 2m matrix d with d d* = I_p.
#[derive(Debug, Clone)]
pub struct Isometry {
    matrix: CMatrix,
    kind: IsometryKind,
}

impl Isometry {
    /// Wraps a matrix after checking row orthonormality.
    pub fn new(matrix: CMatrix, kind: IsometryKind) -> Result<Self> {
        linalg::check_finite(&matrix)?;
        if matrix.nrows() > matrix.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "isometry has more rows ({}) than columns ({})",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let p = matrix.nrows();
        let gram = &matrix * matrix.adjoint();
        let mut dev = 0.0f64;
        for i in 0..p {
            for j in 0..p {
                let want = if i == j { ONE } else { ZERO };
                dev = dev.max((gram[(i, j)] - want).norm());
            }
        }
        if dev > ISOMETRY_TOL {
            return Err(Error::NotIsometry { deviation: dev });
        }
        Ok(Isometry { matrix, kind })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn kind(&self) -> IsometryKind {
        self.kind
    }

    /// Row count p = rank of the projection d*d.
    pub fn rank(&self) -> usize {
        self.matrix.nrows()
    }

    /// Arc-space dimension 2m.
    pub fn arc_dim(&self) -> usize {
        self.matrix.ncols()
    }

    /// The orthogonal projection d*d on the arc space.
    pub fn projection(&self) -> CMatrix {
        self.matrix.adjoint() * &self.matrix
    }
}

/// Coin eigenvalue pair (a, b), with c = a - b.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoinParams {
    pub a: C,
    pub b: C,
}

impl CoinParams {
    /// Strict-unitary constructor: both parameters must be unit modulus.
    pub fn new(a: C, b: C) -> Result<Self> {
        for z in [a, b] {
            if (z.norm() - 1.0).abs() > 1e-12 {
                return Err(Error::NonUnitModulus(z));
            }
        }
        Ok(CoinParams { a, b })
    }

    /// Unchecked constructor; the determinant identities hold as polynomial
    /// identities regardless of unitarity.
    pub fn new_unchecked(a: C, b: C) -> Self {
        CoinParams { a, b }
    }

    /// The Grover reflection parameters (1, -1).
    pub fn grover() -> Self {
        CoinParams { a: ONE, b: C::new(-1.0, 0.0) }
    }

    pub fn c(&self) -> C {
        self.a - self.b
    }

    /// a = b collapses the coin to a scalar.
    pub fn is_degenerate(&self) -> bool {
        (self.a - self.b).norm() == 0.0
    }
}

/// One-step walk specification over a fixed graph.
#[derive(Debug, Clone)]
pub enum WalkSpec {
    /// U = S C with a single coin.
    ShiftCoin { graph: Graph, isometry: Isometry, coin: CoinParams },
    /// U = C1 C2 with two coins.
    TwoCoin {
        graph: Graph,
        isometry1: Isometry,
        coin1: CoinParams,
        isometry2: Isometry,
        coin2: CoinParams,
    },
}

impl WalkSpec {
    pub fn shift_coin(graph: Graph, isometry: Isometry, coin: CoinParams) -> Result<Self> {
        if isometry.arc_dim() != graph.arc_count() {
            return Err(Error::DimensionMismatch(format!(
                "isometry arc dimension {} does not match the graph's {}",
                isometry.arc_dim(),
                graph.arc_count()
            )));
        }
        Ok(WalkSpec::ShiftCoin { graph, isometry, coin })
    }

    pub fn two_coin(
        graph: Graph,
        isometry1: Isometry,
        coin1: CoinParams,
        isometry2: Isometry,
        coin2: CoinParams,
    ) -> Result<Self> {
        for iso in [&isometry1, &isometry2] {
            if iso.arc_dim() != graph.arc_count() {
                return Err(Error::DimensionMismatch(format!(
                    "isometry arc dimension {} does not match the graph's {}",
                    iso.arc_dim(),
                    graph.arc_count()
                )));
            }
        }
        Ok(WalkSpec::TwoCoin { graph, isometry1, coin1, isometry2, coin2 })
    }

    pub fn graph(&self) -> &Graph {
        match self {
            WalkSpec::ShiftCoin { graph, .. } => graph,
            WalkSpec::TwoCoin { graph, .. } => graph,
        }
    }
}

/// The arc-inversion permutation S: S_{ef} = 1 iff f = e^{-1}.
pub fn shift_matrix(g: &Graph) -> CMatrix {
    let n = g.arc_count();
    let mut s = CMatrix::zeros(n, n);
    for e in 0..n {
        s[(e, g.arc_inverse(e))] = ONE;
    }
    s
}

/// Grover isometry on origins: row v holds 1/sqrt(deg v) at each arc
/// leaving v.
pub fn origin_grover_isometry(g: &Graph) -> Result<Isometry> {
    grover_isometry(g, false)
}

/// Grover isometry on terminals; equals origin_grover_isometry(g) * S.
pub fn terminal_grover_isometry(g: &Graph) -> Result<Isometry> {
    grover_isometry(g, true)
}

fn grover_isometry(g: &Graph, terminal: bool) -> Result<Isometry> {
    if let Some(v) = (0..g.vertex_count()).find(|&v| g.degree(v) == 0) {
        return Err(Error::MalformedGraph(format!("vertex {v} is isolated")));
    }
    let mut d = CMatrix::zeros(g.vertex_count(), g.arc_count());
    for arc in g.arcs() {
        let v = if terminal { arc.terminal } else { arc.origin };
        d[(v, arc.index)] = C::new(1.0 / (g.degree(v) as f64).sqrt(), 0.0);
    }
    let kind = if terminal { IsometryKind::TerminalGrover } else { IsometryKind::OriginGrover };
    Isometry::new(d, kind)
}

/// Seeded random isometry: p orthonormalized complex-gaussian rows in the
/// arc space of g. Deterministic for a fixed seed; rank-deficient draws are
/// retried with a perturbed seed, up to 8 attempts.
pub fn random_isometry(p: usize, g: &Graph, seed: u64) -> Result<Isometry> {
    let n = g.arc_count();
    if p == 0 || p > n {
        return Err(Error::DimensionMismatch(format!(
            "requested {p} orthonormal rows in a {n}-dimensional arc space"
        )));
    }
    let mut last = Error::NumericalFailure;
    for attempt in 0..8u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt.wrapping_mul(0x9e37)));
        let normal = StandardNormal;
        let mut m = CMatrix::zeros(p, n);
        for i in 0..p {
            for j in 0..n {
                m[(i, j)] = C::new(normal.sample(&mut rng), normal.sample(&mut rng));
            }
        }
        match linalg::orthonormalize_rows(&mut m) {
            Ok(()) => return Isometry::new(m, IsometryKind::Random { seed }),
            Err(e) => last = e,
        }
    }
    Err(last)
}

/// C = a d*d + b (I - d*d).
pub fn coin_operator(d: &Isometry, params: CoinParams) -> CMatrix {
    let n = d.arc_dim();
    let proj = d.projection();
    let mut c = proj.map(|z| z * (params.a - params.b));
    for i in 0..n {
        c[(i, i)] += params.b;
    }
    c
}

/// The time-evolution matrix of a walk: S C or C1 C2.
pub fn evolution(spec: &WalkSpec) -> CMatrix {
    match spec {
        WalkSpec::ShiftCoin { graph, isometry, coin } => {
            shift_matrix(graph) * coin_operator(isometry, *coin)
        }
        WalkSpec::TwoCoin { isometry1, coin1, isometry2, coin2, .. } => {
            coin_operator(isometry1, *coin1) * coin_operator(isometry2, *coin2)
        }
    }
}

/// Amplitude vector over arcs, normalized to a unit state.
#[derive(Debug, Clone)]
pub struct WalkState {
    amplitudes: DVector<C>,
}

impl WalkState {
    pub fn new(amplitudes: DVector<C>) -> Result<Self> {
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > STATE_TOL {
            return Err(Error::BadState(norm));
        }
        Ok(WalkState { amplitudes })
    }

    /// The pure state concentrated on one arc.
    pub fn basis(g: &Graph, arc: usize) -> Result<Self> {
        if arc >= g.arc_count() {
            return Err(Error::DimensionMismatch(format!(
                "arc {arc} out of range 0..{}",
                g.arc_count()
            )));
        }
        let mut v = DVector::zeros(g.arc_count());
        v[arc] = ONE;
        Ok(WalkState { amplitudes: v })
    }

    /// Uniform superposition over all arcs.
    pub fn uniform(g: &Graph) -> Self {
        let n = g.arc_count();
        let amp = C::new(1.0 / (n as f64).sqrt(), 0.0);
        WalkState { amplitudes: DVector::from_element(n, amp) }
    }

    pub fn amplitudes(&self) -> &DVector<C> {
        &self.amplitudes
    }

    /// Per-arc occupation probabilities |amplitude|^2.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|z| z.norm_sqr()).collect()
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }
}

/// t applications of U to the state; returns the final state and its
/// per-arc probability map.
pub fn evolve_state(u: &CMatrix, psi0: &WalkState, t: usize) -> Result<(WalkState, Vec<f64>)> {
    if u.ncols() != psi0.dim() || u.nrows() != psi0.dim() {
        return Err(Error::DimensionMismatch(format!(
            "evolution is {}x{} but the state has {} amplitudes",
            u.nrows(),
            u.ncols(),
            psi0.dim()
        )));
    }
    let mut psi = psi0.amplitudes.clone();
    for _ in 0..t {
        psi = u * psi;
    }
    let state = WalkState { amplitudes: psi };
    let probs = state.probabilities();
    Ok((state, probs))
}
