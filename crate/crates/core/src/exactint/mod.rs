//! Exact linear algebra over the integers and the rationals.

pub mod crt;
mod hnf;
mod matrix;
mod poly;

use num_rational::BigRational;
use num_traits::Zero;

pub use hnf::{hnf, lattice_coordinates, lattice_coordinates_mod, pivot_columns, pivot_product};
pub(crate) use matrix::fp_determinant;
pub use matrix::{IntegerMatrix, RationalMatrix};
pub use poly::{IntegerPolynomial, RationalPolynomial};

use crate::error::{Error, Result};

/// Characteristic polynomial `det(x I - M)` with exact coefficients.
pub fn char_poly_q(m: &RationalMatrix) -> Result<RationalPolynomial> {
    m.char_poly()
}

/// Determinant of the trace form `(i, j) -> Tr(b_i b_j)` on the given basis of
/// a commutative matrix algebra.
pub fn gram_determinant(basis: &[RationalMatrix]) -> Result<BigRational> {
    let Some(first) = basis.first() else {
        return Ok(BigRational::from_integer(1.into()));
    };
    if !first.is_square() {
        return Err(Error::NotSquare { rows: first.rows(), cols: first.cols() });
    }
    if basis.iter().any(|b| b.rows() != first.rows() || b.cols() != first.cols()) {
        return Err(Error::DimensionMismatch("basis elements differ in size".into()));
    }
    let n = basis.len();
    let mut products = vec![vec![None; n]; n];
    for i in 0..n {
        for j in i..n {
            let ij = basis[i].mul(&basis[j])?;
            if i != j && ij != basis[j].mul(&basis[i])? {
                return Err(Error::NonCommuting);
            }
            products[i][j] = Some(ij);
        }
    }
    let mut g = RationalMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let t = products[i][j].as_ref().unwrap().trace()?;
            g.set(i, j, t.clone());
            g.set(j, i, t);
        }
    }
    let det = g.determinant()?;
    Ok(if det.is_zero() { BigRational::zero() } else { det })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gram_examples() {
        let one = RationalMatrix::identity(2);
        let t = RationalMatrix::from_i64_rows(&[vec![0, 1], vec![0, 0]]).unwrap();
        assert!(gram_determinant(&[one.clone(), t]).unwrap().is_zero());
        let one1 = RationalMatrix::identity(1);
        assert_eq!(gram_determinant(&[one1]).unwrap(), BigRational::from_integer(1.into()));
        // regular representation of Q[x]/(x^2 - x) on the basis {1, x}
        let x = RationalMatrix::from_i64_rows(&[vec![0, 1], vec![0, 1]]).unwrap();
        assert_eq!(gram_determinant(&[one, x]).unwrap(), BigRational::from_integer(1.into()));
    }

    #[test]
    fn gram_rejects_non_commuting() {
        let a = RationalMatrix::from_i64_rows(&[vec![0, 1], vec![0, 0]]).unwrap();
        let b = RationalMatrix::from_i64_rows(&[vec![0, 0], vec![1, 0]]).unwrap();
        assert!(matches!(gram_determinant(&[a, b]), Err(Error::NonCommuting)));
    }

    #[test]
    fn char_poly_of_oldform_block() {
        let m = RationalMatrix::from_i64_rows(&[vec![5, 1], vec![-7, 0]]).unwrap();
        assert_eq!(char_poly_q(&m).unwrap(), RationalPolynomial::from_i64(&[7, -5, 1]));
    }
}
