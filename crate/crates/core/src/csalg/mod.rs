//! Finite-dimensional C*-algebras: construction, Wedderburn form, functionals,
//! dual bases and Frobenius diagnostics.

mod algebra;
mod frobenius;
mod functional;
mod wedderburn;

pub(crate) use algebra::dense_to_row;
pub use algebra::{
    commutative_algebra, matrix_algebra, multimatrix, opposite_algebra, scalars, subalgebra,
    tensor_mul, tensor_product, tensor_star, CStarAlgebra, ProductRow,
};
pub use frobenius::{
    comultiplication, frobenius_report, module_unitarity_residual, multiply_tensor, q_scalar,
    FrobeniusReport,
};
pub use functional::{check_functional, dual_basis, dual_basis_sandwich, DualBasisPair, Functional};
pub use wedderburn::{wedderburn_decompose, Wedderburn};
