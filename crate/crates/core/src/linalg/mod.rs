//! Exact integer and rational linear algebra.

mod int;
mod lp;
mod rat;

pub use int::{
    big_to_i64, hermite_normal_form, hnf_pivots, int_rank, integer_kernel, integer_right_inverse,
    primitive_vector, reduce_mod_lattice, smith_diagonal, smith_normal_form, IntMatrix,
};
pub use lp::{in_cone, nonnegative_solution_exists};
pub use rat::{pivot_columns, rat, rational_kernel_basis, RatMatrix, Rref};
