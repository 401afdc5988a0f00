//! Zeta functions of finite and Z^d-periodic graphs built from the
//! time-evolution matrices of coined quantum walks.
//!
//! The reciprocal zeta of a walk with evolution U is det(I - uU). For
//! two-projector coins this determinant factors through a small vertex- or
//! rank-indexed pencil, which also yields the characteristic polynomial and
//! the full spectrum in closed form. The crate computes both sides of each
//! identity — dense determinants and eigensolvers on one side, the factored
//! formulas on the other — plus the classical Ihara zeta (Bass determinant,
//! non-backtracking arc matrix, Euler product over prime cycles) as an
//! independent oracle.
//!
//! Periodic graphs with a free Z^d translation action are handled through
//! their finite quotients: operators fiber over the Brillouin torus, the
//! von Neumann trace becomes a torus average, and the Gamma-determinant
//! det_G = exp(Tr_G log) is evaluated by spectrally accurate trapezoid
//! quadrature with a per-grid-point branch certificate.
//!
//! Modules:
//! * [`graph`] — finite simple graphs and their canonical arc order
//! * [`linalg`] — dense complex matrices, char polys, eigenvalues, pencils
//! * [`poly`] — complex polynomials and truncated power series
//! * [`walk`] — shift/coin operators, evolutions, state simulation
//! * [`zeta`] — walk zeta functions and their factored forms
//! * [`ihara`] — classical Ihara zeta and prime-cycle machinery
//! * [`periodic`] — crystal graphs, Bloch fibers, Gamma-determinants
//! * [`graphfile`] — the JSON graph-file format
//! * [`verify`] — randomized batch verification with reports

pub mod error;
pub mod graph;
pub mod graphfile;
pub mod ihara;
pub mod linalg;
pub mod periodic;
pub mod poly;
pub mod verify;
pub mod walk;
pub mod zeta;

pub use error::{Error, Result};
pub use graph::{DegreeData, Graph};
pub use graphfile::{GraphFile, ParsedGraph};
pub use linalg::CMatrix;
pub use periodic::{
    CrystalEdge, CrystalGraph, FiberFamily, GammaDetResult, PeriodicOptions, PeriodicWalkSpec,
};
pub use poly::{ComplexPolynomial, PowerSeries};
pub use walk::{CoinParams, Isometry, WalkSpec, WalkState};
pub use zeta::{SpectrumReport, ZetaMethod, ZetaResult};
