//! Z^d-periodic (crystal) graphs: Gamma-traces, Gamma-determinants via
//! Brillouin-torus quadrature, and the periodic walk zeta with its factored
//! form.
//!
//! A crystal graph is a finite quotient multigraph whose arcs carry integer
//! shift vectors; the covering graph has vertex set V x Z^d with the
//! translation action, which is free, so stabilizer weights are all 1 and
//! Tr_Gamma(I_V) = n_V, Tr_Gamma(I_R) = 2 m_Q. Every periodic operator
//! fibers over the torus [0, 2pi)^d into finite matrices F(theta);
//! Tr_Gamma becomes the torus average of tr F, and
//!
//!   det_Gamma(F) = exp( (2 pi)^-d  integral of tr Log F(theta) )
//!
//! with the principal logarithm, admissible only while every fiber spectrum
//! stays clear of the cut (-inf, 0]; the quadrature certifies this at every
//! grid point and refuses otherwise. The uniform periodic trapezoid rule is
//! spectrally accurate for these analytic fibers; the error estimate comes
//! from doubling the grid.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg::{self, CMatrix};
use crate::poly::{ONE, ZERO};
use crate::walk::CoinParams;

type C = Complex64;

/// Minimum admissible distance of any fiber eigenvalue from the cut.
pub const BRANCH_EPS: f64 = 1e-6;

/// One quotient edge with its Z^d shift vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrystalEdge {
    pub from: usize,
    pub to: usize,
    pub shift: Vec<i64>,
}

/// One oriented quotient arc.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrystalArc {
    pub index: usize,
    pub origin: usize,
    pub terminal: usize,
    pub shift: Vec<i64>,
}

/// Finite quotient of a periodic graph under a free Z^d action.
///
/// Loops and parallel edges are allowed in the quotient (the integer
/// lattice needs them), but the lift must be simple: no loop may carry a
/// zero shift, and no two arcs may share origin, terminal and shift.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrystalGraph {
    dim: usize,
    n_v: usize,
    edges: Vec<CrystalEdge>,
    arcs: Vec<CrystalArc>,
    degrees: Vec<usize>,
}

impl CrystalGraph {
    pub fn new(dim: usize, n_v: usize, edges: Vec<CrystalEdge>) -> Result<Self> {
        if n_v == 0 {
            return Err(Error::MalformedGraph("crystal needs at least one vertex".into()));
        }
        let mut arcs = Vec::with_capacity(2 * edges.len());
        for (idx, e) in edges.iter().enumerate() {
            if e.from >= n_v || e.to >= n_v {
                return Err(Error::MalformedGraph(format!(
                    "edge {idx} touches a vertex outside 0..{n_v}"
                )));
            }
            if e.shift.len() != dim {
                return Err(Error::MalformedGraph(format!(
                    "edge {idx} carries a shift of rank {}, lattice rank is {dim}",
                    e.shift.len()
                )));
            }
            if e.from == e.to && e.shift.iter().all(|&s| s == 0) {
                return Err(Error::MalformedGraph(format!(
                    "edge {idx} is a loop with zero shift; the covering graph would not be simple"
                )));
            }
            let back: Vec<i64> = e.shift.iter().map(|&s| -s).collect();
            arcs.push(CrystalArc {
                index: 2 * idx,
                origin: e.from,
                terminal: e.to,
                shift: e.shift.clone(),
            });
            arcs.push(CrystalArc {
                index: 2 * idx + 1,
                origin: e.to,
                terminal: e.from,
                shift: back,
            });
        }
        let mut seen = std::collections::HashSet::new();
        for a in &arcs {
            if !seen.insert((a.origin, a.terminal, a.shift.clone())) {
                return Err(Error::MalformedGraph(format!(
                    "arcs {} -> {} with shift {:?} collide; the covering graph would not be simple",
                    a.origin, a.terminal, a.shift
                )));
            }
        }
        let mut degrees = vec![0usize; n_v];
        for a in &arcs {
            degrees[a.origin] += 1;
        }
        Ok(CrystalGraph { dim, n_v, edges, arcs, degrees })
    }

    /// A finite simple graph viewed as a crystal with trivial group (d = 0).
    pub fn from_graph(g: &Graph) -> Self {
        let edges = g
            .edges()
            .iter()
            .map(|&(u, v)| CrystalEdge { from: u, to: v, shift: Vec::new() })
            .collect();
        CrystalGraph::new(0, g.vertex_count(), edges).expect("a simple graph is a valid crystal")
    }

    /// The integer lattice Z: one vertex, one loop with shift +1.
    pub fn integer_lattice() -> Self {
        CrystalGraph::new(1, 1, vec![CrystalEdge { from: 0, to: 0, shift: vec![1] }]).unwrap()
    }

    /// The ladder Z x K2: a rung plus one rail loop per side.
    pub fn ladder() -> Self {
        CrystalGraph::new(
            1,
            2,
            vec![
                CrystalEdge { from: 0, to: 1, shift: vec![0] },
                CrystalEdge { from: 0, to: 0, shift: vec![1] },
                CrystalEdge { from: 1, to: 1, shift: vec![1] },
            ],
        )
        .unwrap()
    }

    /// The square lattice Z^2: one vertex, loops along both axes.
    pub fn square_lattice() -> Self {
        CrystalGraph::new(
            2,
            1,
            vec![
                CrystalEdge { from: 0, to: 0, shift: vec![1, 0] },
                CrystalEdge { from: 0, to: 0, shift: vec![0, 1] },
            ],
        )
        .unwrap()
    }

    /// The honeycomb lattice: two vertices, three parallel-class edges.
    pub fn honeycomb() -> Self {
        CrystalGraph::new(
            2,
            2,
            vec![
                CrystalEdge { from: 0, to: 1, shift: vec![0, 0] },
                CrystalEdge { from: 0, to: 1, shift: vec![1, 0] },
                CrystalEdge { from: 0, to: 1, shift: vec![0, 1] },
            ],
        )
        .unwrap()
    }

    pub fn lattice_rank(&self) -> usize {
        self.dim
    }

    pub fn vertex_count(&self) -> usize {
        self.n_v
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn edges(&self) -> &[CrystalEdge] {
        &self.edges
    }

    pub fn arc(&self, k: usize) -> &CrystalArc {
        &self.arcs[k]
    }

    pub fn arc_inverse(&self, k: usize) -> usize {
        k ^ 1
    }

    pub fn arcs(&self) -> &[CrystalArc] {
        &self.arcs
    }

    pub fn degree(&self, v: usize) -> usize {
        self.degrees[v]
    }

    /// Tr_Gamma(I_V): one per quotient vertex under a free action.
    pub fn tr_gamma_vertices(&self) -> usize {
        self.n_v
    }

    /// Tr_Gamma(I_R): one per quotient arc.
    pub fn tr_gamma_arcs(&self) -> usize {
        self.arcs.len()
    }
}

fn phase(theta: &[f64], shift: &[i64]) -> C {
    let angle: f64 = theta.iter().zip(shift).map(|(t, &s)| t * s as f64).sum();
    C::new(angle.cos(), angle.sin())
}

/// Bloch fiber of the adjacency operator:
/// A(theta)_{vw} = sum over arcs v -> w of e^(i <theta, shift>).
/// Hermitian for every theta.
pub fn fiber_adjacency(cg: &CrystalGraph, theta: &[f64]) -> CMatrix {
    let mut a = CMatrix::zeros(cg.n_v, cg.n_v);
    for arc in &cg.arcs {
        a[(arc.origin, arc.terminal)] += phase(theta, &arc.shift);
    }
    a
}

/// Bloch fiber of the arc-inversion shift:
/// S(theta)_{e^-1, e} = e^(i <theta, shift(e)>). Hermitian and unitary.
pub fn fiber_shift(cg: &CrystalGraph, theta: &[f64]) -> CMatrix {
    let n = cg.arc_count();
    let mut s = CMatrix::zeros(n, n);
    for arc in &cg.arcs {
        s[(cg.arc_inverse(arc.index), arc.index)] = phase(theta, &arc.shift);
    }
    s
}

/// Origin Grover isometry on the quotient; constant in theta.
pub fn fiber_origin_grover(cg: &CrystalGraph, _theta: &[f64]) -> Result<CMatrix> {
    check_no_isolated(cg)?;
    let mut d = CMatrix::zeros(cg.n_v, cg.arc_count());
    for arc in &cg.arcs {
        d[(arc.origin, arc.index)] =
            C::new(1.0 / (cg.degree(arc.origin) as f64).sqrt(), 0.0);
    }
    Ok(d)
}

/// Terminal Grover isometry on the quotient; the phases attach to the
/// terminal-side incidences, so that terminal(theta) = origin(theta) S(theta).
pub fn fiber_terminal_grover(cg: &CrystalGraph, theta: &[f64]) -> Result<CMatrix> {
    check_no_isolated(cg)?;
    let mut d = CMatrix::zeros(cg.n_v, cg.arc_count());
    for arc in &cg.arcs {
        d[(arc.terminal, arc.index)] = phase(theta, &arc.shift)
            * C::new(1.0 / (cg.degree(arc.terminal) as f64).sqrt(), 0.0);
    }
    Ok(d)
}

fn check_no_isolated(cg: &CrystalGraph) -> Result<()> {
    if let Some(v) = (0..cg.n_v).find(|&v| cg.degrees[v] == 0) {
        return Err(Error::MalformedGraph(format!("quotient vertex {v} is isolated")));
    }
    Ok(())
}

/// Walk specification on a crystal graph. The isometries are the origin and
/// terminal Grover builders on the quotient; the coins are free.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PeriodicWalkSpec {
    /// U(theta) = S(theta) C with the origin-Grover coin.
    ShiftCoin { coin: CoinParams },
    /// U(theta) = C1 C2(theta) with origin- and terminal-Grover coins.
    TwoCoin { coin1: CoinParams, coin2: CoinParams },
}

fn coin_from_fiber(d: &CMatrix, params: CoinParams) -> CMatrix {
    let n = d.ncols();
    let proj = d.adjoint() * d;
    let mut c = proj.map(|z| z * (params.a - params.b));
    for i in 0..n {
        c[(i, i)] += params.b;
    }
    c
}

/// The fibered time-evolution matrix U(theta); at lattice rank 0 this is
/// exactly the finite-graph evolution.
pub fn fiber_walk_operator(
    cg: &CrystalGraph,
    spec: &PeriodicWalkSpec,
    theta: &[f64],
) -> Result<CMatrix> {
    if theta.len() != cg.dim {
        return Err(Error::DimensionMismatch(format!(
            "theta has rank {}, lattice rank is {}",
            theta.len(),
            cg.dim
        )));
    }
    match spec {
        PeriodicWalkSpec::ShiftCoin { coin } => {
            let d = fiber_origin_grover(cg, theta)?;
            Ok(fiber_shift(cg, theta) * coin_from_fiber(&d, *coin))
        }
        PeriodicWalkSpec::TwoCoin { coin1, coin2 } => {
            let d1 = fiber_origin_grover(cg, theta)?;
            let d2 = fiber_terminal_grover(cg, theta)?;
            Ok(coin_from_fiber(&d1, *coin1) * coin_from_fiber(&d2, *coin2))
        }
    }
}

/// Which space a fiber family acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FiberKind {
    Vertex,
    Arc,
    Other,
}

/// A continuous family theta -> F(theta) of finite complex matrices over
/// the torus [0, 2pi)^d.
pub struct FiberFamily<'a> {
    dim: usize,
    size: usize,
    kind: FiberKind,
    eval: Box<dyn Fn(&[f64]) -> CMatrix + Sync + Send + 'a>,
}

impl<'a> FiberFamily<'a> {
    pub fn new(
        dim: usize,
        size: usize,
        kind: FiberKind,
        eval: impl Fn(&[f64]) -> CMatrix + Sync + Send + 'a,
    ) -> Self {
        FiberFamily { dim, size, kind, eval: Box::new(eval) }
    }

    pub fn constant(dim: usize, m: CMatrix) -> FiberFamily<'static> {
        let size = m.nrows();
        FiberFamily { dim, size, kind: FiberKind::Other, eval: Box::new(move |_| m.clone()) }
    }

    pub fn eval(&self, theta: &[f64]) -> CMatrix {
        (self.eval)(theta)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn kind(&self) -> FiberKind {
        self.kind
    }
}

/// Quadrature and admissibility knobs for periodic computations.
#[derive(Debug, Clone, Copy)]
pub struct PeriodicOptions {
    /// Grid points per torus dimension.
    pub grid: usize,
    /// Certified disc radius for the walk zeta variable.
    pub u_max: f64,
}

impl Default for PeriodicOptions {
    fn default() -> Self {
        PeriodicOptions { grid: 64, u_max: 0.5 }
    }
}

/// Value and certificates of a Gamma-determinant quadrature.
#[derive(Debug, Clone, Copy)]
pub struct GammaDetResult {
    pub value: C,
    /// Grid points per dimension of the base grid.
    pub grid: usize,
    /// |value(grid) - value(2 * grid)|.
    pub error_estimate: f64,
    /// Min over grid points and eigenvalues of the distance to (-inf, 0].
    pub branch_distance: f64,
    /// Max over grid points and eigenvalues of |lambda - 1|; the stronger
    /// admissibility condition holds when this is below 1.
    pub b1_radius: f64,
}

fn grid_points(dim: usize, n: usize) -> Vec<Vec<f64>> {
    let total = n.pow(dim as u32);
    let step = 2.0 * std::f64::consts::PI / n as f64;
    (0..total)
        .map(|mut idx| {
            let mut theta = vec![0.0; dim];
            for t in theta.iter_mut() {
                *t = (idx % n) as f64 * step;
                idx /= n;
            }
            theta
        })
        .collect()
}

/// Tr_Gamma of a fiber family: the equal-weight torus average of tr F.
pub fn gamma_trace(fam: &FiberFamily, grid: usize) -> C {
    let pts = grid_points(fam.dim(), grid.max(1));
    let traces: Vec<C> = pts.par_iter().map(|theta| fam.eval(theta).trace()).collect();
    // fixed-order reduction for bitwise reproducibility
    traces.iter().sum::<C>() / C::new(traces.len() as f64, 0.0)
}

fn dist_to_cut(z: C) -> f64 {
    if z.re > 0.0 {
        z.norm()
    } else {
        z.im.abs()
    }
}

struct LogIntegral {
    mean: C,
    branch_distance: f64,
    b1_radius: f64,
}

/// Grid average of sum of principal logs of eigenvalues, refusing when the
/// spectrum leaves the open right half-plane or comes within BRANCH_EPS of
/// the cut.
fn log_integral<F>(dim: usize, grid: usize, spectra: F) -> Result<LogIntegral>
where
    F: Fn(&[f64]) -> Result<Vec<C>> + Sync,
{
    let pts = grid_points(dim, grid.max(1));
    let per_point: Vec<Result<(C, f64, f64)>> = pts
        .par_iter()
        .map(|theta| {
            let eigs = spectra(theta)?;
            let mut sum = ZERO;
            let mut dist = f64::INFINITY;
            let mut radius = 0.0f64;
            for lam in eigs {
                let d = dist_to_cut(lam);
                if lam.re <= 0.0 || d < BRANCH_EPS {
                    return Err(Error::BranchCutViolation {
                        theta: theta.clone(),
                        eigenvalue: lam,
                        distance: d,
                    });
                }
                dist = dist.min(d);
                radius = radius.max((lam - ONE).norm());
                sum += lam.ln();
            }
            Ok((sum, dist, radius))
        })
        .collect();

    let mut total = ZERO;
    let mut branch_distance = f64::INFINITY;
    let mut b1_radius = 0.0f64;
    let count = per_point.len();
    for r in per_point {
        let (sum, dist, radius) = r?;
        total += sum;
        branch_distance = branch_distance.min(dist);
        b1_radius = b1_radius.max(radius);
    }
    Ok(LogIntegral { mean: total / C::new(count as f64, 0.0), branch_distance, b1_radius })
}

/// det_Gamma(F) = exp of the torus average of tr Log F, with the error
/// estimated against a doubled grid.
pub fn det_gamma(fam: &FiberFamily, grid: usize) -> Result<GammaDetResult> {
    let spectra = |theta: &[f64]| linalg::eigenvalues(&fam.eval(theta));
    let base = log_integral(fam.dim(), grid, spectra)?;
    let value = base.mean.exp();
    if fam.dim() == 0 {
        return Ok(GammaDetResult {
            value,
            grid,
            error_estimate: 0.0,
            branch_distance: base.branch_distance,
            b1_radius: base.b1_radius,
        });
    }
    let doubled = log_integral(fam.dim(), grid * 2, spectra)?;
    Ok(GammaDetResult {
        value,
        grid,
        error_estimate: (value - doubled.mean.exp()).norm(),
        branch_distance: base.branch_distance.min(doubled.branch_distance),
        b1_radius: base.b1_radius.max(doubled.b1_radius),
    })
}

/// det_gamma that also enforces a quadrature tolerance.
pub fn det_gamma_with_tolerance(
    fam: &FiberFamily,
    grid: usize,
    tolerance: f64,
) -> Result<GammaDetResult> {
    let result = det_gamma(fam, grid)?;
    if result.error_estimate > tolerance {
        return Err(Error::QuadratureNotConverged {
            estimate: result.error_estimate,
            tolerance,
            grid,
        });
    }
    Ok(result)
}

/// A periodic zeta evaluation with both the zeta value and its reciprocal
/// det_Gamma(I - uU).
#[derive(Debug, Clone, Copy)]
pub struct PeriodicZeta {
    pub zeta: C,
    pub reciprocal: C,
    pub det: GammaDetResult,
}

/// Precomputed fiber spectra of a periodic walk, reusable across values of
/// u. Eigensolves happen once per grid point; each u only remaps spectra.
pub struct PeriodicWalkEvaluator {
    dim: usize,
    grid: usize,
    u_max: f64,
    tr_arcs: usize,
    tr_vertices: usize,
    spec: PeriodicWalkSpec,
    /// Eigenvalues of U(theta) on the base and doubled grids.
    walk_base: Vec<Vec<C>>,
    walk_doubled: Vec<Vec<C>>,
    /// Eigenvalues of the vertex pencil d2 d1* d1 d2* (two-coin walks).
    pencil_base: Vec<Vec<C>>,
    pencil_doubled: Vec<Vec<C>>,
    max_unitary_deviation: f64,
}

impl PeriodicWalkEvaluator {
    pub fn new(
        cg: &CrystalGraph,
        spec: &PeriodicWalkSpec,
        opts: &PeriodicOptions,
    ) -> Result<Self> {
        check_no_isolated(cg)?;
        let dim = cg.dim;
        let grid = opts.grid.max(1);
        let walk_at = |pts: &[Vec<f64>]| -> Result<(Vec<Vec<C>>, f64)> {
            let rows: Vec<Result<(Vec<C>, f64)>> = pts
                .par_iter()
                .map(|theta| {
                    let u = fiber_walk_operator(cg, spec, theta)?;
                    let dev = linalg::unitary_deviation(&u);
                    Ok((linalg::eigenvalues(&u)?, dev))
                })
                .collect();
            let mut spectra = Vec::with_capacity(rows.len());
            let mut worst = 0.0f64;
            for r in rows {
                let (eigs, dev) = r?;
                worst = worst.max(dev);
                spectra.push(eigs);
            }
            Ok((spectra, worst))
        };
        let pencil_at = |pts: &[Vec<f64>]| -> Result<Vec<Vec<C>>> {
            pts.par_iter()
                .map(|theta| {
                    let d1 = fiber_origin_grover(cg, theta)?;
                    let d2 = fiber_terminal_grover(cg, theta)?;
                    let cross = &d2 * d1.adjoint();
                    linalg::eigenvalues(&(&cross * cross.adjoint()))
                })
                .collect()
        };

        let base_pts = grid_points(dim, grid);
        let doubled_pts =
            if dim == 0 { base_pts.clone() } else { grid_points(dim, grid * 2) };
        let (walk_base, dev1) = walk_at(&base_pts)?;
        let (walk_doubled, dev2) = walk_at(&doubled_pts)?;
        let (pencil_base, pencil_doubled) = match spec {
            PeriodicWalkSpec::TwoCoin { .. } => {
                (pencil_at(&base_pts)?, pencil_at(&doubled_pts)?)
            }
            PeriodicWalkSpec::ShiftCoin { .. } => (Vec::new(), Vec::new()),
        };

        Ok(PeriodicWalkEvaluator {
            dim,
            grid,
            u_max: opts.u_max,
            tr_arcs: cg.tr_gamma_arcs(),
            tr_vertices: cg.tr_gamma_vertices(),
            spec: *spec,
            walk_base,
            walk_doubled,
            pencil_base,
            pencil_doubled,
            max_unitary_deviation: dev1.max(dev2),
        })
    }

    pub fn max_unitary_deviation(&self) -> f64 {
        self.max_unitary_deviation
    }

    fn check_u(&self, u: C) -> Result<()> {
        if u.norm() > self.u_max {
            return Err(Error::OutsideCertifiedDisc(u.norm(), self.u_max));
        }
        Ok(())
    }

    fn det_from_spectra(
        &self,
        spectra: (&[Vec<C>], &[Vec<C>]),
        map: impl Fn(C) -> C + Copy,
    ) -> Result<GammaDetResult> {
        let reduce = |rows: &[Vec<C>]| -> Result<LogIntegral> {
            let mut total = ZERO;
            let mut branch_distance = f64::INFINITY;
            let mut b1_radius = 0.0f64;
            for row in rows {
                for &raw in row {
                    let lam = map(raw);
                    let d = dist_to_cut(lam);
                    if lam.re <= 0.0 || d < BRANCH_EPS {
                        return Err(Error::BranchCutViolation {
                            theta: Vec::new(),
                            eigenvalue: lam,
                            distance: d,
                        });
                    }
                    branch_distance = branch_distance.min(d);
                    b1_radius = b1_radius.max((lam - ONE).norm());
                    total += lam.ln();
                }
            }
            Ok(LogIntegral {
                mean: total / C::new(rows.len() as f64, 0.0),
                branch_distance,
                b1_radius,
            })
        };
        let base = reduce(spectra.0)?;
        let doubled = reduce(spectra.1)?;
        let value = base.mean.exp();
        Ok(GammaDetResult {
            value,
            grid: self.grid,
            error_estimate: if self.dim == 0 {
                0.0
            } else {
                (value - doubled.mean.exp()).norm()
            },
            branch_distance: base.branch_distance.min(doubled.branch_distance),
            b1_radius: base.b1_radius.max(doubled.b1_radius),
        })
    }

    /// zeta(G, Gamma, u) = det_Gamma(I - uU)^-1.
    pub fn direct(&self, u: C) -> Result<PeriodicZeta> {
        self.check_u(u)?;
        let det =
            self.det_from_spectra((&self.walk_base, &self.walk_doubled), |lam| ONE - u * lam)?;
        Ok(PeriodicZeta { zeta: ONE / det.value, reciprocal: det.value, det })
    }

    /// The factored reciprocal
    /// (1 + b2 u)^(Tr I_R - 2 Tr I_V) det_Gamma((1 + a2 u)(1 - b2 u) I_V
    ///  - 2 c2 u d2 d1* d1 d2*),
    /// valid for a two-coin walk whose first coin squares to the identity
    /// (parameters exactly (1, -1)).
    pub fn factored(&self, u: C) -> Result<PeriodicZeta> {
        self.check_u(u)?;
        let (coin1, coin2) = match self.spec {
            PeriodicWalkSpec::TwoCoin { coin1, coin2 } => (coin1, coin2),
            PeriodicWalkSpec::ShiftCoin { coin } => {
                return Err(Error::HypothesisViolation { a1: coin.a, b1: coin.b })
            }
        };
        if (coin1.a - ONE).norm() > 1e-12 || (coin1.b + ONE).norm() > 1e-12 {
            return Err(Error::HypothesisViolation { a1: coin1.a, b1: coin1.b });
        }
        let (a2, b2) = (coin2.a, coin2.b);
        let c2 = coin2.c();
        let scale = (ONE + a2 * u) * (ONE - b2 * u);
        let det = self.det_from_spectra(
            (&self.pencil_base, &self.pencil_doubled),
            |mu| scale - C::new(2.0, 0.0) * c2 * u * mu,
        )?;
        let exponent = self.tr_arcs as i32 - 2 * self.tr_vertices as i32;
        let reciprocal = (ONE + b2 * u).powi(exponent) * det.value;
        Ok(PeriodicZeta { zeta: ONE / reciprocal, reciprocal, det })
    }
}

/// One-shot direct periodic zeta; see `PeriodicWalkEvaluator` for sweeps.
pub fn zeta_periodic_direct(
    cg: &CrystalGraph,
    spec: &PeriodicWalkSpec,
    u: C,
    opts: &PeriodicOptions,
) -> Result<PeriodicZeta> {
    PeriodicWalkEvaluator::new(cg, spec, opts)?.direct(u)
}

/// One-shot factored periodic reciprocal zeta.
pub fn zeta_periodic_factored(
    cg: &CrystalGraph,
    spec: &PeriodicWalkSpec,
    u: C,
    opts: &PeriodicOptions,
) -> Result<PeriodicZeta> {
    PeriodicWalkEvaluator::new(cg, spec, opts)?.factored(u)
}

/// Periodic Ihara zeta of a crystal graph.
#[derive(Debug, Clone, Copy)]
pub struct PeriodicIhara {
    /// Z(u) with the exponent read from the covolume difference m - n.
    pub zeta: C,
    /// Z(u) with the exponent read from the L2 Euler characteristic; an
    /// algebraic rearrangement of `zeta`.
    pub zeta_from_euler_characteristic: C,
    /// chi^(2) = Tr_Gamma(I_V) - Tr_Gamma(I_E).
    pub euler_characteristic: i64,
    pub det: GammaDetResult,
}

/// Z(G, Gamma, u) = (1 - u^2)^-(m - n) det_Gamma(I - uA + u^2 (D - I))^-1,
/// where m - n = Tr_Gamma(I_E) - Tr_Gamma(I_V); equivalently the exponent
/// is the negated L2 Euler characteristic.
pub fn ihara_periodic(cg: &CrystalGraph, u: C, opts: &PeriodicOptions) -> Result<PeriodicIhara> {
    let n_v = cg.vertex_count();
    let fam = FiberFamily::new(cg.lattice_rank(), n_v, FiberKind::Vertex, |theta: &[f64]| {
        let mut m = fiber_adjacency(cg, theta).map(|z| -u * z);
        for v in 0..n_v {
            m[(v, v)] += ONE + u * u * C::new(cg.degree(v) as f64 - 1.0, 0.0);
        }
        m
    });
    let det = det_gamma(&fam, opts.grid)?;
    let covolume_exponent = cg.edge_count() as i32 - cg.vertex_count() as i32;
    let euler_characteristic = cg.vertex_count() as i64 - cg.edge_count() as i64;
    let one_minus_u2 = ONE - u * u;
    let zeta = one_minus_u2.powi(-covolume_exponent) / det.value;
    let zeta_from_euler_characteristic =
        one_minus_u2.powi(euler_characteristic as i32) / det.value;
    Ok(PeriodicIhara { zeta, zeta_from_euler_characteristic, euler_characteristic, det })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ihara::ihara_bass;
    use crate::linalg::max_entry_norm;
    use crate::walk::{
        evolution, origin_grover_isometry, terminal_grover_isometry, WalkSpec,
    };
    use crate::zeta::zeta_reciprocal_two_coin;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    #[test]
    fn crystal_validation() {
        // loop with zero shift: covering not simple
        assert!(CrystalGraph::new(
            1,
            1,
            vec![CrystalEdge { from: 0, to: 0, shift: vec![0] }]
        )
        .is_err());
        // duplicate arc (same endpoints and shift)
        assert!(CrystalGraph::new(
            1,
            2,
            vec![
                CrystalEdge { from: 0, to: 1, shift: vec![0] },
                CrystalEdge { from: 0, to: 1, shift: vec![0] },
            ]
        )
        .is_err());
        // opposite loops at one vertex collide after inversion
        assert!(CrystalGraph::new(
            1,
            1,
            vec![
                CrystalEdge { from: 0, to: 0, shift: vec![1] },
                CrystalEdge { from: 0, to: 0, shift: vec![-1] },
            ]
        )
        .is_err());
        // shift rank must match
        assert!(CrystalGraph::new(
            2,
            1,
            vec![CrystalEdge { from: 0, to: 0, shift: vec![1] }]
        )
        .is_err());

        let z = CrystalGraph::integer_lattice();
        assert_eq!(z.tr_gamma_vertices(), 1);
        assert_eq!(z.tr_gamma_arcs(), 2);
        assert_eq!(z.degree(0), 2);
    }

    #[test]
    fn fiber_adjacency_of_integer_lattice_is_two_cos() {
        let z = CrystalGraph::integer_lattice();
        for theta in [0.0, 0.7, 2.9] {
            let a = fiber_adjacency(&z, &[theta]);
            assert!((a[(0, 0)] - c(2.0 * theta.cos(), 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn fiber_adjacency_at_zero_counts_quotient_arcs() {
        let h = CrystalGraph::honeycomb();
        let a = fiber_adjacency(&h, &[0.0, 0.0]);
        assert!((a[(0, 1)] - c(3.0, 0.0)).norm() < 1e-14);
        assert!((a[(1, 0)] - c(3.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn fiber_adjacency_of_square_lattice_at_pi_pi() {
        let sq = CrystalGraph::square_lattice();
        let a = fiber_adjacency(&sq, &[std::f64::consts::PI, std::f64::consts::PI]);
        assert!((a[(0, 0)] - c(-4.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn fiber_adjacency_is_hermitian() {
        let lad = CrystalGraph::ladder();
        let a = fiber_adjacency(&lad, &[1.234]);
        assert!(max_entry_norm(&(a.adjoint() - a)) < 1e-14);
    }

    #[test]
    fn fiber_shift_is_hermitian_unitary() {
        let sq = CrystalGraph::square_lattice();
        let s = fiber_shift(&sq, &[0.4, 1.9]);
        assert!(max_entry_norm(&(s.adjoint() - &s)) < 1e-14);
        let s2 = &s * &s;
        assert!(max_entry_norm(&(s2 - CMatrix::identity(4, 4))) < 1e-14);
    }

    #[test]
    fn terminal_fiber_equals_origin_times_shift() {
        let lad = CrystalGraph::ladder();
        let theta = [0.83];
        let origin = fiber_origin_grover(&lad, &theta).unwrap();
        let terminal = fiber_terminal_grover(&lad, &theta).unwrap();
        let produced = origin * fiber_shift(&lad, &theta);
        assert!(max_entry_norm(&(produced - terminal)) < 1e-14);
    }

    #[test]
    fn integer_lattice_grover_walk_is_diagonal_phases() {
        let z = CrystalGraph::integer_lattice();
        let spec = PeriodicWalkSpec::ShiftCoin { coin: CoinParams::grover() };
        for theta in [0.3, 1.1, 4.4] {
            let u = fiber_walk_operator(&z, &spec, &[theta]).unwrap();
            assert!((u[(0, 0)] - c(theta.cos(), -theta.sin())).norm() < 1e-13);
            assert!((u[(1, 1)] - c(theta.cos(), theta.sin())).norm() < 1e-13);
            assert!(u[(0, 1)].norm() < 1e-14);
            assert!(u[(1, 0)].norm() < 1e-14);
        }
    }

    #[test]
    fn trivial_shifts_reduce_to_finite_evolution() {
        let g = Graph::cycle(3).unwrap();
        let cg = CrystalGraph::from_graph(&g);
        let spec = PeriodicWalkSpec::TwoCoin {
            coin1: CoinParams::grover(),
            coin2: CoinParams::grover(),
        };
        let fibered = fiber_walk_operator(&cg, &spec, &[]).unwrap();
        let finite = evolution(
            &WalkSpec::two_coin(
                g.clone(),
                origin_grover_isometry(&g).unwrap(),
                CoinParams::grover(),
                terminal_grover_isometry(&g).unwrap(),
                CoinParams::grover(),
            )
            .unwrap(),
        );
        assert!(max_entry_norm(&(fibered - finite)) < 1e-13);
    }

    #[test]
    fn walk_fibers_are_unitary_on_honeycomb() {
        let h = CrystalGraph::honeycomb();
        let spec = PeriodicWalkSpec::TwoCoin {
            coin1: CoinParams::grover(),
            coin2: CoinParams::new(c(0.0, 1.0), c(0.0, -1.0)).unwrap(),
        };
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..16 {
            let theta = [rng.random::<f64>() * 6.28, rng.random::<f64>() * 6.28];
            let u = fiber_walk_operator(&h, &spec, &theta).unwrap();
            assert!(linalg::unitary_deviation(&u) < 1e-10);
        }
    }

    #[test]
    fn gamma_trace_examples() {
        let z = CrystalGraph::integer_lattice();
        let id_v = FiberFamily::new(1, 1, FiberKind::Vertex, |_: &[f64]| CMatrix::identity(1, 1));
        let t = gamma_trace(&id_v, 16);
        assert!((t - c(1.0, 0.0)).norm() < 1e-14);

        let id_r = FiberFamily::new(1, 2, FiberKind::Arc, |_: &[f64]| CMatrix::identity(2, 2));
        assert!((gamma_trace(&id_r, 16) - c(2.0, 0.0)).norm() < 1e-14);

        let adj = FiberFamily::new(1, 1, FiberKind::Vertex, |theta: &[f64]| {
            fiber_adjacency(&z, theta)
        });
        assert!(gamma_trace(&adj, 64).norm() < 1e-13);
    }

    #[test]
    fn det_gamma_of_constant_family() {
        let alpha = c(0.8, 0.3);
        let fam = FiberFamily::constant(1, CMatrix::identity(3, 3).map(|z| z * alpha));
        let res = det_gamma(&fam, 8).unwrap();
        assert!((res.value - alpha.powu(3)).norm() < 1e-12);
        assert!(res.error_estimate < 1e-12);
    }

    #[test]
    fn det_gamma_of_winding_scalar_family_is_one() {
        // F(theta) = 1 - u e^(i theta): the log integral vanishes
        let u = c(0.5, 0.0);
        let fam = FiberFamily::new(1, 1, FiberKind::Other, move |theta: &[f64]| {
            CMatrix::from_element(1, 1, ONE - u * c(theta[0].cos(), theta[0].sin()))
        });
        let res = det_gamma(&fam, 64).unwrap();
        assert!((res.value - ONE).norm() < 1e-12);
        assert!(res.b1_radius <= 0.5 + 1e-12);
    }

    #[test]
    fn det_gamma_with_trivial_group_is_plain_determinant() {
        let g = Graph::complete(4).unwrap();
        let dd = g.adjacency_and_degree();
        // I + A/4 is positive definite
        let m = linalg::to_complex(&dd.adjacency).map(|z| z * c(0.25, 0.0))
            + CMatrix::identity(4, 4);
        let fam = FiberFamily::constant(0, m.clone());
        let res = det_gamma(&fam, 1).unwrap();
        // eigenvalues of K4 adjacency: 3, -1, -1, -1
        let want = (1.0 + 0.75) * 0.75f64.powi(3);
        assert!((res.value - c(want, 0.0)).norm() < 1e-12);
        assert_eq!(res.error_estimate, 0.0);
    }

    #[test]
    fn det_gamma_refuses_cut_spectrum() {
        let fam = FiberFamily::constant(1, CMatrix::identity(2, 2).map(|z| -z));
        assert!(matches!(det_gamma(&fam, 8), Err(Error::BranchCutViolation { .. })));
    }

    #[test]
    fn quadrature_estimate_decays_geometrically() {
        // 1x1 family with a slowly converging grid sum at u = 0.4
        let u = c(0.4, 0.0);
        let fam = FiberFamily::new(1, 1, FiberKind::Other, move |theta: &[f64]| {
            CMatrix::from_element(1, 1, ONE - u * c(theta[0].cos(), theta[0].sin()))
        });
        let e4 = det_gamma(&fam, 4).unwrap().error_estimate;
        let e8 = det_gamma(&fam, 8).unwrap().error_estimate;
        let e16 = det_gamma(&fam, 16).unwrap().error_estimate;
        assert!(e8 < e4 * 0.5, "e4={e4:.3e} e8={e8:.3e}");
        assert!(e16 < e8 * 0.5, "e8={e8:.3e} e16={e16:.3e}");
    }

    #[test]
    fn quadrature_tolerance_enforced() {
        let u = c(0.4, 0.0);
        let fam = FiberFamily::new(1, 1, FiberKind::Other, move |theta: &[f64]| {
            CMatrix::from_element(1, 1, ONE - u * c(theta[0].cos(), theta[0].sin()))
        });
        assert!(matches!(
            det_gamma_with_tolerance(&fam, 2, 1e-12),
            Err(Error::QuadratureNotConverged { .. })
        ));
        assert!(det_gamma_with_tolerance(&fam, 64, 1e-10).is_ok());
    }

    #[test]
    fn integer_lattice_walk_zeta_is_one() {
        let z = CrystalGraph::integer_lattice();
        let spec = PeriodicWalkSpec::ShiftCoin { coin: CoinParams::grover() };
        let opts = PeriodicOptions::default();
        for u in [c(0.2, 0.0), c(0.0, 0.0), c(0.1, 0.1)] {
            let res = zeta_periodic_direct(&z, &spec, u, &opts).unwrap();
            assert!((res.zeta - ONE).norm() < 1e-10, "u={u}");
        }
    }

    #[test]
    fn u_outside_disc_rejected() {
        let z = CrystalGraph::integer_lattice();
        let spec = PeriodicWalkSpec::ShiftCoin { coin: CoinParams::grover() };
        assert!(matches!(
            zeta_periodic_direct(&z, &spec, c(0.7, 0.0), &PeriodicOptions::default()),
            Err(Error::OutsideCertifiedDisc(_, _))
        ));
    }

    #[test]
    fn trivial_shift_walk_zeta_matches_finite() {
        let g = Graph::cycle(3).unwrap();
        let cg = CrystalGraph::from_graph(&g);
        let spec = PeriodicWalkSpec::TwoCoin {
            coin1: CoinParams::grover(),
            coin2: CoinParams::grover(),
        };
        let u = c(0.1, 0.0);
        let res = zeta_periodic_direct(&cg, &spec, u, &PeriodicOptions::default()).unwrap();
        let finite = zeta_reciprocal_two_coin(
            &g,
            &origin_grover_isometry(&g).unwrap(),
            CoinParams::grover(),
            &terminal_grover_isometry(&g).unwrap(),
            CoinParams::grover(),
        )
        .unwrap();
        let want = ONE / finite.reciprocal.eval(u);
        assert!((res.zeta - want).norm() < 1e-10);
    }

    #[test]
    fn factored_reciprocal_matches_direct_on_lattices() {
        let opts = PeriodicOptions { grid: 32, u_max: 0.5 };
        let lattices = [
            CrystalGraph::integer_lattice(),
            CrystalGraph::ladder(),
            CrystalGraph::square_lattice(),
        ];
        for cg in &lattices {
            for coin2 in [CoinParams::grover(), CoinParams::new(c(0.0, 1.0), c(0.0, -1.0)).unwrap()]
            {
                let spec =
                    PeriodicWalkSpec::TwoCoin { coin1: CoinParams::grover(), coin2 };
                let eval = PeriodicWalkEvaluator::new(cg, &spec, &opts).unwrap();
                assert!(eval.max_unitary_deviation() < 1e-10);
                for u in [c(0.1, 0.0), c(0.0, 0.2), c(0.15, 0.1)] {
                    let direct = eval.direct(u).unwrap();
                    let fact = eval.factored(u).unwrap();
                    let diff = (fact.reciprocal - direct.reciprocal).norm();
                    assert!(diff < 1e-8, "diff {diff:.3e}");
                }
            }
        }
    }

    #[test]
    fn factored_demands_reflection_first_coin() {
        let z = CrystalGraph::integer_lattice();
        let spec = PeriodicWalkSpec::TwoCoin {
            coin1: CoinParams::new(c(0.0, 1.0), c(0.0, -1.0)).unwrap(),
            coin2: CoinParams::grover(),
        };
        assert!(matches!(
            zeta_periodic_factored(&z, &spec, c(0.1, 0.0), &PeriodicOptions::default()),
            Err(Error::HypothesisViolation { .. })
        ));
    }

    #[test]
    fn factored_at_zero_is_one() {
        let lad = CrystalGraph::ladder();
        let spec = PeriodicWalkSpec::TwoCoin {
            coin1: CoinParams::grover(),
            coin2: CoinParams::grover(),
        };
        let res =
            zeta_periodic_factored(&lad, &spec, ZERO, &PeriodicOptions::default()).unwrap();
        assert!((res.reciprocal - ONE).norm() < 1e-12);
    }

    #[test]
    fn trivial_shift_factored_matches_finite_two_coin() {
        let g = Graph::complete(4).unwrap();
        let cg = CrystalGraph::from_graph(&g);
        let coin2 = CoinParams::new(c(0.0, 1.0), c(0.0, -1.0)).unwrap();
        let spec = PeriodicWalkSpec::TwoCoin { coin1: CoinParams::grover(), coin2 };
        let finite = zeta_reciprocal_two_coin(
            &g,
            &origin_grover_isometry(&g).unwrap(),
            CoinParams::grover(),
            &terminal_grover_isometry(&g).unwrap(),
            coin2,
        )
        .unwrap();
        for u in [c(0.1, 0.0), c(0.05, 0.1)] {
            let res =
                zeta_periodic_factored(&cg, &spec, u, &PeriodicOptions::default()).unwrap();
            let want = finite.reciprocal.eval(u);
            assert!((res.reciprocal - want).norm() < 1e-8);
        }
    }

    #[test]
    fn periodic_ihara_of_integer_lattice_is_one() {
        let z = CrystalGraph::integer_lattice();
        let opts = PeriodicOptions::default();
        for u in [c(0.0, 0.0), c(0.3, 0.0), c(0.5, 0.0), c(0.2, 0.3)] {
            let res = ihara_periodic(&z, u, &opts).unwrap();
            assert!((res.zeta - ONE).norm() < 1e-8, "u={u}");
            assert_eq!(res.euler_characteristic, 0);
            assert!((res.zeta - res.zeta_from_euler_characteristic).norm() < 1e-12);
        }
    }

    #[test]
    fn trivial_shift_periodic_ihara_matches_bass() {
        let g = Graph::complete(4).unwrap();
        let cg = CrystalGraph::from_graph(&g);
        let bass = ihara_bass(&g).unwrap();
        for u in [c(0.1, 0.0), c(0.2, 0.05)] {
            let res = ihara_periodic(&cg, u, &PeriodicOptions::default()).unwrap();
            let want = ONE / bass.eval(u);
            assert!((res.zeta - want).norm() < 1e-9);
            assert!((res.zeta_from_euler_characteristic - want).norm() < 1e-9);
            assert_eq!(res.euler_characteristic, -2);
        }
    }
}
