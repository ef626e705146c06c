//! Modular symbols for `Gamma0(N)` in even weight through Manin symbols.

mod boundary;
mod dims;
mod heilbronn;
mod operators;
mod p1;
mod space;

pub use boundary::{cuspidal_subspace, CuspBasis, CuspidalSubspace};
pub use dims::{dim_oracle, gamma0_index, sturm_bound};
pub use heilbronn::{cremona, heilbronn, merel, Heilbronn, HeilbronnKind};
pub use operators::{hecke_operator, hecke_operators, HeckeOperatorMatrix, OperatorMatrix};
pub use p1::{lift_to_sl2z, P1List};
pub use space::{build_space, Domain, IntOperator, ManinSymbolSpace};

use std::sync::Arc;

use crate::error::Result;

/// Build the space and its cuspidal subspace in one step.
pub fn cuspidal(n: u64, k: u32, domain: Domain) -> Result<CuspidalSubspace> {
    cuspidal_subspace(Arc::new(build_space(n, k, domain)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactint::RationalPolynomial;
    use crate::ffalg::PrimeField;

    /// Coefficients `a_1..a_len` of `q^s prod (1 - q^n)^e (1 - q^(Mn))^e`,
    /// where `s = e (1 + M) / 24`.
    fn eta_product(m: usize, e: u32, len: usize) -> Vec<i64> {
        let shift = (e as usize * (1 + m)) / 24;
        let prec = len + 1;
        let mut series = vec![0i64; prec];
        series[0] = 1;
        let mut times = |step: usize| {
            for _ in 0..e {
                for i in (step..prec).rev() {
                    series[i] -= series[i - step];
                }
            }
        };
        for n in 1..prec {
            times(n);
            if m * n < prec {
                times(m * n);
            }
        }
        let mut out = vec![0i64; len + 1];
        for (i, c) in series.iter().enumerate() {
            if i + shift <= len {
                out[i + shift] = *c;
            }
        }
        out
    }

    fn square_of_linear(a: i64) -> RationalPolynomial {
        let lin = RationalPolynomial::from_i64(&[-a, 1]);
        lin.mul(&lin)
    }

    fn check_against_eta(n: u64, k: u32, e: u32, upto: u64) {
        let coeffs = eta_product(n as usize, e, upto as usize);
        assert_eq!(coeffs[1], 1);
        let cusp = cuspidal(n, k, Domain::Rational).unwrap();
        assert_eq!(cusp.dimension(), 2);
        let ns: Vec<u64> = (1..=upto).collect();
        for op in hecke_operators(&cusp, &ns).unwrap() {
            let m = op.matrix.as_rational().unwrap();
            let cp = m.char_poly().unwrap();
            assert_eq!(cp, square_of_linear(coeffs[op.index as usize]), "N = {n}, k = {k}, T_{}", op.index);
        }
    }

    #[test]
    fn level_11_weight_2() {
        let c = eta_product(11, 2, 10);
        assert_eq!(&c[1..8], &[1, -2, -1, 2, 1, 2, -2]);
        check_against_eta(11, 2, 2, 10);
    }

    #[test]
    fn small_eta_products() {
        check_against_eta(5, 4, 4, 8);
        check_against_eta(3, 6, 6, 8);
        check_against_eta(2, 8, 8, 8);
    }

    #[test]
    fn level_23_t2() {
        let cusp = cuspidal(23, 2, Domain::Rational).unwrap();
        let t2 = hecke_operator(&cusp, 2).unwrap();
        let q = RationalPolynomial::from_i64(&[-1, 1, 1]);
        assert_eq!(t2.matrix.as_rational().unwrap().char_poly().unwrap(), q.mul(&q));
    }

    #[test]
    fn t1_identity_and_zero_index() {
        let cusp = cuspidal(37, 2, Domain::Rational).unwrap();
        let t1 = hecke_operator(&cusp, 1).unwrap();
        assert!(t1.matrix.as_rational().unwrap().sub(&crate::exactint::RationalMatrix::identity(4)).unwrap().is_zero());
        assert!(matches!(hecke_operator(&cusp, 0), Err(crate::Error::ZeroIndex)));
    }

    #[test]
    fn modular_matches_rational_reduction() {
        let f = PrimeField::new(7).unwrap();
        let rat = cuspidal(37, 2, Domain::Rational).unwrap();
        let md = cuspidal(37, 2, Domain::Prime(f)).unwrap();
        assert_eq!(rat.dimension(), md.dimension());
        for ell in [2u64, 3, 5] {
            let a = hecke_operator(&rat, ell).unwrap().matrix.as_rational().unwrap().char_poly().unwrap();
            let b = hecke_operator(&md, ell).unwrap().matrix.as_modular().unwrap().char_poly().unwrap();
            let reduced: Vec<u64> = a
                .coeffs()
                .iter()
                .map(|c| {
                    assert!(c.is_integer());
                    f.from_bigint(c.numer())
                })
                .collect();
            assert_eq!(b.coeffs(), &reduced[..]);
        }
    }

    #[test]
    fn cremona_and_merel_agree() {
        let space = build_space(43, 2, Domain::Rational).unwrap();
        for ell in [2u64, 3, 5, 7] {
            let cremona_op = space.hecke_prime_rational(ell).unwrap();
            let dim = space.dimension();
            let mats = merel(ell);
            let mut via_merel = vec![0i128; dim * dim];
            for j in 0..dim {
                for &h in &mats {
                    space
                        .act(space.free_generators()[j], h, |t, c| {
                            for &(pos, x) in space.projection(t) {
                                via_merel[j * dim + pos as usize] += c * x as i128;
                            }
                        })
                        .unwrap();
                }
            }
            let left: Vec<i128> = cremona_op.numerators.iter().map(|&x| x as i128).collect();
            assert_eq!(left, via_merel, "T_{ell}");
        }
    }
}
