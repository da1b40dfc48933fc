//! Exact A∞-operations measuring the failure of a degree +1 operator on a
//! graded associative algebra to be a derivation, together with exhaustive
//! verifiers for the identities they satisfy.

pub mod ainf;
pub mod algebra;
pub mod bar;
pub mod basis;
pub mod cli;
pub mod cohomology;
pub mod error;
pub mod fixtures;
pub mod format;
pub mod hochschild;
pub mod linalg;
pub mod multiop;
pub mod operator;
pub mod random;
pub mod scalar;
pub mod sign;

pub use algebra::{gamma_n, validate_algebra, GradedAlgebra, ValidationReport, Violation};
pub use basis::{Element, GradedBasis};
pub use cohomology::{delta_cohomology, operator_cohomology, CohomologyBasis, CohomologyClass};
pub use error::{Error, Result};
pub use format::{parse_algebra_file, serialize_algebra};
pub use multiop::{apply_tensor_slot, MultiOp};
pub use operator::{apply_operator, compose, LinearOperator};
pub use scalar::Scalar;
pub use sign::koszul_sign;
