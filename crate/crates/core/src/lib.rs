//! Computational engine for the geometric fixed-point equation `C = (GC)°`.
//!
//! Convex bodies and cones are held in closed-form representations
//! ([`ConvexSet`]); polars, gauges and support functions are evaluated
//! exactly per representation, and candidate solutions are certified by
//! direction-sampled residuals ([`verify`]).
//!
//! Module map:
//!
//! * [`linalg`]: dense matrices, Jacobi eigensolver, spectral absolute value,
//!   a small simplex LP for support functions of H-polytopes.
//! * [`sets`]: the [`ConvexSet`] representations with gauge, support and
//!   membership.
//! * [`polarity`]: [`Operator`], the polar map, linear pushforward and the
//!   polarity map `T_G(C) = (GC)° = (Gᵀ)⁻¹C°`.
//! * [`solver`]: constructive solvers, the 1D classification, operator
//!   equation residuals, semi-skew decomposition and the iteration explorer.
//! * [`conjugate`]: Legendre–Fenchel transforms on grids and the
//!   gauge/conjugate identities.
//! * [`verify`]: support, gauge and cone-membership residual reports.
//! * [`gallery`]: generators for the worked examples.

pub mod conjugate;
pub mod error;
pub mod extended;
pub mod gallery;
pub mod linalg;
pub mod polarity;
pub mod random;
pub mod sets;
pub mod solver;
pub mod verify;

pub use error::{Error, Result, SemiSkewReason};
pub use linalg::Matrix;
pub use polarity::Operator;
pub use sets::ConvexSet;

/// Absolute floor used by every tolerance in the crate.
pub const TOL_ABS: f64 = 1e-10;
/// Relative factor, multiplied by a matrix norm.
pub const TOL_REL: f64 = 1e-9;
