use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::boundary::{CuspBasis, CuspidalSubspace};
use crate::arith::factorize;
use crate::error::{Error, Result};
use crate::exactint::RationalMatrix;
use crate::ffalg::FpMatrix;

/// A Hecke operator on the cuspidal basis, acting on row vectors.
#[derive(Clone, Debug, PartialEq)]
pub enum OperatorMatrix {
    Rational(RationalMatrix),
    Modular(FpMatrix),
}

impl OperatorMatrix {
    pub fn dimension(&self) -> usize {
        match self {
            Self::Rational(m) => m.rows(),
            Self::Modular(m) => m.rows(),
        }
    }

    pub fn as_rational(&self) -> Option<&RationalMatrix> {
        match self {
            Self::Rational(m) => Some(m),
            Self::Modular(_) => None,
        }
    }

    pub fn as_modular(&self) -> Option<&FpMatrix> {
        match self {
            Self::Modular(m) => Some(m),
            Self::Rational(_) => None,
        }
    }

    fn identity_like(&self) -> Self {
        match self {
            Self::Rational(m) => Self::Rational(RationalMatrix::identity(m.rows())),
            Self::Modular(m) => Self::Modular(FpMatrix::identity(m.field(), m.rows())),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (Self::Rational(a), Self::Rational(b)) => Ok(Self::Rational(a.mul(b)?)),
            (Self::Modular(a), Self::Modular(b)) => Ok(Self::Modular(a.mul(b)?)),
            _ => Err(Error::Inconsistent("mixed operator domains".into())),
        }
    }

    /// `self - c * other` for an integer `c`.
    fn sub_scaled(&self, c: u64, other: &Self) -> Result<Self> {
        match (self, other) {
            (Self::Rational(a), Self::Rational(b)) => {
                let c = BigRational::from_integer(BigInt::from(c));
                Ok(Self::Rational(a.sub(&b.scale(&c))?))
            }
            (Self::Modular(a), Self::Modular(b)) => {
                let f = a.field();
                let c = c % f.characteristic();
                Ok(Self::Modular(a.sub(&b.scale(c))?))
            }
            _ => Err(Error::Inconsistent("mixed operator domains".into())),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HeckeOperatorMatrix {
    pub index: u64,
    pub matrix: OperatorMatrix,
}

/// `T_n` on the cuspidal subspace.
pub fn hecke_operator(cusp: &CuspidalSubspace, n: u64) -> Result<HeckeOperatorMatrix> {
    Ok(hecke_operators(cusp, &[n])?.pop().expect("one operator"))
}

/// `T_n` for every `n` in `ns`, sharing the prime operators between them.
pub fn hecke_operators(cusp: &CuspidalSubspace, ns: &[u64]) -> Result<Vec<HeckeOperatorMatrix>> {
    if ns.contains(&0) {
        return Err(Error::ZeroIndex);
    }
    let mut primes: BTreeMap<u64, OperatorMatrix> = BTreeMap::new();
    let mut out = Vec::with_capacity(ns.len());
    for &n in ns {
        let mut acc = identity(cusp);
        for (ell, r) in factorize(n) {
            let t = match primes.entry(ell) {
                std::collections::btree_map::Entry::Occupied(e) => e.into_mut(),
                std::collections::btree_map::Entry::Vacant(e) => e.insert(prime_operator(cusp, ell)?),
            };
            acc = acc.mul(&prime_power(cusp, t, ell, r)?)?;
        }
        out.push(HeckeOperatorMatrix { index: n, matrix: acc });
    }
    Ok(out)
}

fn identity(cusp: &CuspidalSubspace) -> OperatorMatrix {
    match cusp.basis() {
        CuspBasis::Rational(b) => OperatorMatrix::Rational(RationalMatrix::identity(b.rows())),
        CuspBasis::Modular(b) => OperatorMatrix::Modular(FpMatrix::identity(b.field(), b.rows())),
    }
}

fn prime_power(cusp: &CuspidalSubspace, t: &OperatorMatrix, ell: u64, r: u32) -> Result<OperatorMatrix> {
    let space = cusp.space();
    let bad = space.level() % ell == 0;
    let scale = ell.checked_pow(space.weight() - 1).ok_or(Error::Overflow("ell^(k-1)"))?;
    let mut prev = t.identity_like();
    let mut cur = t.clone();
    for _ in 1..r {
        let next = t.mul(&cur)?;
        let next = if bad { next } else { next.sub_scaled(scale, &prev)? };
        prev = cur;
        cur = next;
    }
    if r == 0 {
        return Ok(prev);
    }
    Ok(cur)
}

/// Restrict the quotient operator `T_ell` to the cuspidal basis, checking
/// that every basis image stays inside the subspace.
fn prime_operator(cusp: &CuspidalSubspace, ell: u64) -> Result<OperatorMatrix> {
    let space = cusp.space();
    let keys = cusp.key_columns();
    let d = keys.len();
    let unstable = || Error::Inconsistent(format!("cuspidal subspace not stable under T_{ell}"));
    match cusp.basis() {
        CuspBasis::Rational(basis) => {
            let t = space.hecke_prime_rational(ell)?;
            let q = space.dimension();
            let den = BigInt::from(t.denominator);
            let mut m = RationalMatrix::zeros(d, d);
            for i in 0..d {
                let row = basis.row(i);
                let mut w = vec![BigRational::zero(); q];
                for (a, x) in row.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    for (wj, &y) in w.iter_mut().zip(t.row(a)) {
                        if y != 0 {
                            *wj += x * BigRational::from_integer(BigInt::from(y));
                        }
                    }
                }
                for wj in w.iter_mut() {
                    *wj /= BigRational::from_integer(den.clone());
                }
                let coords: Vec<BigRational> = keys.iter().map(|&c| w[c].clone()).collect();
                let back = basis.vec_mul(&coords);
                if back != w {
                    return Err(unstable());
                }
                for (j, x) in coords.into_iter().enumerate() {
                    m.set(i, j, x);
                }
            }
            Ok(OperatorMatrix::Rational(m))
        }
        CuspBasis::Modular(basis) => {
            let t = space.hecke_prime_modular(ell)?;
            let f = basis.field();
            let mut data = Vec::with_capacity(d * d);
            for i in 0..d {
                let w = t.vec_mul(basis.row(i));
                let coords: Vec<u64> = keys.iter().map(|&c| w[c]).collect();
                if basis.vec_mul(&coords) != w {
                    return Err(unstable());
                }
                data.extend(coords);
            }
            Ok(OperatorMatrix::Modular(FpMatrix::from_vec(f, d, d, data)?))
        }
    }
}
