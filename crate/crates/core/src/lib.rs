//! Exact non-Archimedean value distribution theory.
//!
//! Gauss norms, Newton polygons and the Nevanlinna functions `T_f`, `m_f`,
//! `N_f` are represented as exact piecewise-linear functions of the
//! log-radius `t = log_p r`. On top of that the crate computes the
//! subgeneral-position invariants `t_m`, the multiplicity bound `M` and the
//! correction term `α` of a hypersurface arrangement with a Gröbner engine
//! over the rationals, and checks second main theorem bounds on concrete
//! maps.

pub mod cli;
pub mod error;
pub mod pl;
pub mod poly;
pub mod position;
pub mod projective;
pub mod scalar;
pub mod series;
pub mod smt;
pub mod upoly;

pub use error::{Error, Result};
pub use pl::PlFun;
pub use scalar::Scalar;
