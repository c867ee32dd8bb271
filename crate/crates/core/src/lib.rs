//! Finite-matrix verification of the weak-type (1,1) estimate for the matrix
//! absolute value `‖|A| − |B|‖_{1,∞} ≤ C·‖A − B‖_1`.
//!
//! Every constructive object of the argument is implemented at matrix scale
//! (Schur multipliers, triangular truncation, the four-term decomposition of
//! `|A| − |B|`, the tensor-with-`F` reduction, Davies-class functions and the
//! commutator route), and each inequality is evaluated numerically into a
//! [`Report`] rather than asserted inside the library.

// `!(x >= 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod absdiff;
pub mod commutator;
pub mod constants;
pub mod davies;
pub mod eig;
pub mod error;
pub mod harness;
pub mod matrix;
pub mod norms;
pub mod report;
pub mod schur;
pub mod spectral;
pub mod weaktrunc;

pub use constants::{BoundConstants, C_MAIN, C_S, C_SYM, C_TRUNC, C_TRUNC_SA};
pub use eig::{hermitian_eig, hermitian_eigenvalues, SpectralDecomposition};
pub use error::{Error, Result};
pub use matrix::{
    direct_sum, kron, matrix_from_json, matrix_to_json, ComplexMatrix, HermitianMatrix, MatrixJson,
};
pub use norms::{
    m1inf_norm, operator_norm, schatten_norm, singular_values, trace_norm, weak_l1_norm,
    SingularValueSeq,
};
pub use report::{CheckEntry, Relation, Report, DEFAULT_SLACK};
pub use schur::DecreasingPositiveSeq;
pub use spectral::{
    abs_matrix, neg_part, pos_part, spectral_function, support_projection, unitary_exp,
};

pub use num_complex::Complex64;
