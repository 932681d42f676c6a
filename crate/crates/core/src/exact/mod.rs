//! Exact field arithmetic and dense linear algebra over the rationals and
//! prime fields. Nothing in the crate touches floating point.

mod field;
mod matrix;

pub use field::{good_characteristic, lambda_params, roots_of_minus_one, FieldSpec, Scalar};
pub(crate) use field::is_prime;
pub use matrix::{
    add, axpy, combination, eigenspace, is_direct_sum, is_zero_vector, rank_of, scale, span_basis, sub,
    unit_vector, zero_vector, EchelonBasis, ExactVector, Matrix, Rref,
};
