//! Dense complex linear algebra: factorizations, operator norms and the
//! decomposition of a contraction into a convex combination of unitaries.

mod eig;
mod factor;
mod matrix;
mod norm;

pub use eig::{diag_apply, diagonalize, eig, eigenvalues, expm, logm, schur, Diagonalization, Eigen, Schur};
pub use factor::{
    complete_orthonormal, contraction_to_isometries, eigh, inverse, matrix_factor, polar, solve, svd,
    FactorKind, Factorization, HermitianEigen, IsometryDecomposition, IsometryTerm, Lu, Polar, Svd,
};
pub use matrix::{c, sech, CMatrix, CVector, C64, I};
pub use norm::{conjugate_exponent, lp_op_norm_upper, op_norm, random_unit_vector, NormKind, NormSpec, OpNorm};
