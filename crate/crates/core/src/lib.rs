//! Exact exterior calculus on almost-Hermitian manifolds presented by
//! structure equations on a (1,0)-coframe.
//!
//! Forms, operators and matrices are generic over the coefficient ring; the
//! aliases below fix the two rings used in practice.

pub mod catalog;
pub mod error;
pub mod exterior;
pub mod hodge;
pub mod linalg;
pub mod model;
pub mod operators;
pub mod report;
pub mod scalar;

pub use error::{Error, Result};
pub use exterior::{Bidegree, Form, Monomial, Space};
pub use hodge::{CheckId, Hodge, Status, Subspace, VerificationReport};
pub use model::{parse_spec, render_spec, ManifoldSpec};
pub use operators::{Calculus, ConstCalculus, Differential, OperatorId, OperatorMatrix, SymCalculus};
pub use scalar::{GaussianRational, SymScalar};

/// A form with constant coefficients in ℚ(i).
pub type ConstForm = Form<GaussianRational>;
/// A form with Laurent-polynomial coefficients in function symbols.
pub type SymForm = Form<SymScalar>;
/// An exact matrix over ℚ(i).
pub type ConstMatrix = linalg::Matrix<GaussianRational>;

/// Version string carried by every report.
pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");
