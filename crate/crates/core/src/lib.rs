//! Single-valued p-adic line integrals on curves with semi-stable reduction.
//!
//! The toolkit splits the integral into a local piece (branch-dependent
//! logarithms on annuli) and a combinatorial piece (a harmonic/exact
//! decomposition of edge cochains on the dual graph of the special fiber).
//! Supporting machinery: precision-tracked Q_p arithmetic, exact integer
//! Laplacian solves, Newton polygons for annulus residues, and the Tate
//! curve as the fully worked case.

#![forbid(unsafe_code)]

pub mod assembly;
pub mod document;
pub mod graph;
pub mod laurent;
mod linalg;
pub mod padic;
pub mod selftest;
pub mod tate;

pub use assembly::{annulus_interpolate, AssemblyError, FormKind, PrimitiveFamily};
pub use graph::{Cochain, DualGraph, GraphError, OrientedEdge, VertexFunction};
pub use laurent::{LaurentError, LaurentPolynomial, NewtonPolygon};
pub use padic::{plog, teichmuller, LogBranch, PadicContext, PadicError, PadicNumber, Valuation};
pub use tate::{TateCurve, TateError, TatePoint};
