//! Tubular domains around symmetric planar curves: Fermi coordinates,
//! geometric hypothesis checks, Neumann eigenvalue lower bounds and weighted
//! finite-element eigensolvers that verify them.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod conditions;
pub mod eigensolve;
pub mod error;
pub mod exprparse;
pub mod fermi;
pub mod geometry;
pub mod polygon;
pub mod quad;
pub mod roots;
pub mod spline;

pub use error::{Error, Result};
pub use exprparse::{Expr, Piece, Piecewise};
pub use fermi::{Dimension, TubeDomain};
pub use geometry::{ArcCurve, Builtin, CurvatureFn, Frame};
