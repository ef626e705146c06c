//! Arithmetic and dense linear algebra over prime fields, plus polynomial
//! factorisation.

mod echelon;
mod factor;
mod field;
mod matrix;
mod poly;

pub(crate) use echelon::Echelon;
pub use factor::{distinct_degree, factor, squarefree_decomposition, FactorList};
pub use field::PrimeField;
pub use matrix::{FpMatrix, Rref};
pub use poly::FpPolynomial;

/// Reduced row echelon form of `m`.
pub fn rref(m: &FpMatrix) -> Rref {
    m.rref()
}

/// Rows spanning the right kernel of `m`.
pub fn kernel_basis(m: &FpMatrix) -> FpMatrix {
    m.kernel_basis()
}

pub fn char_poly_fp(m: &FpMatrix) -> crate::Result<FpPolynomial> {
    m.char_poly()
}

pub fn min_poly_fp(m: &FpMatrix) -> crate::Result<FpPolynomial> {
    m.min_poly()
}
