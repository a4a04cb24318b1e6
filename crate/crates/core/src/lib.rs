//! Exact construction of the operator triplet `(X, Y, Z)` attached to the
//! Hahn-like biorthogonal rational functions, the functions themselves,
//! and machine verification of the identities they satisfy.
//!
//! Layout:
//! - [`kernel`]: rationals, polynomials, rational functions, partial
//!   fractions, Pochhammer symbols and terminating hypergeometric sums.
//! - [`operators`] and [`heun`]: the difference operators, their grid and
//!   symbolic actions, delta-basis matrices and the raising property.
//! - [`bases`]: the `φ_n`, `U_n`, `V_n` families, the weight and the scalar
//!   product, basis expansion and biorthogonality.
//! - [`bispectral`]: closed-form coefficient families, matrices in the `φ` and
//!   `U` bases, and the verifiers for the shift relations and both GEVPs.
//! - [`algebra`]: the quadratic algebra, its Casimir, the tilde operators and
//!   the potential with cyclic derivatives.
//! - [`suite`] and [`emit`]: the verification runner and file output.

pub mod algebra;
pub mod bases;
pub mod bispectral;
pub mod emit;
pub mod error;
pub mod heun;
pub mod kernel;
pub mod matrix;
pub mod operators;
pub mod params;
pub mod report;
pub mod suite;

pub use error::{Error, Result};
pub use kernel::{RatFun, RatScalar};
pub use matrix::{Basis, ExactMatrix};
pub use operators::{DiffOp, GridFun, OpKind};
pub use params::Params;
pub use report::{Status, VerificationReport};
