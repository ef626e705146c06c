//! The Hecke block `A_f(m, l)` on an oldform space `V_f(m)` and when it is
//! diagonalisable.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactint::RationalMatrix;

/// Which hypothesis on `l` and the level `M = N/m` of `f` holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OldformCase {
    /// `l` does not divide `M`.
    EllCoprimeM,
    /// `l || M`, or the character cannot be defined modulo `M/l`.
    EllExactlyDividesMOrEpsUndefinable,
    /// `l^2 | M` and the character can be defined modulo `M/l`.
    EllSquaredDividesMEpsDefinable,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OldformBlockSpec {
    pub a_ell: BigRational,
    pub eps_ell: BigRational,
    pub ell: u64,
    pub k: u32,
    pub r: usize,
    pub delta: u8,
    pub case: OldformCase,
}

impl OldformBlockSpec {
    /// A block description; `delta` must be 1 in the coprime case and 0
    /// otherwise.
    pub fn new(
        a_ell: BigRational,
        eps_ell: BigRational,
        ell: u64,
        k: u32,
        r: usize,
        delta: u8,
        case: OldformCase,
    ) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidWeight(k));
        }
        let expected = match case {
            OldformCase::EllCoprimeM => 1,
            _ => 0,
        };
        if delta != expected {
            return Err(Error::Inconsistent(format!("delta = {delta} does not fit {case:?}")));
        }
        Ok(Self { a_ell, eps_ell, ell, k, r, delta, case })
    }
}

/// The `(r+1) x (r+1)` matrix with first row `(a_l, 1, 0, ...)`, second row
/// `(-delta eps(l) l^(k-1), 0, 1, 0, ...)` and ones on the rest of the
/// superdiagonal.
pub fn build_block(spec: &OldformBlockSpec) -> RationalMatrix {
    let n = spec.r + 1;
    let mut m = RationalMatrix::zeros(n, n);
    m.set(0, 0, spec.a_ell.clone());
    for i in 0..n - 1 {
        m.set(i, i + 1, BigRational::one());
    }
    if n > 1 && spec.delta == 1 {
        let lk = BigRational::from_integer(BigInt::from(spec.ell).pow(spec.k - 1));
        m.set(1, 0, -(&spec.eps_ell * lk));
    }
    m
}

/// Whether the block is diagonalisable, from the case and `r` alone.
pub fn classify(spec: &OldformBlockSpec) -> bool {
    match spec.case {
        OldformCase::EllCoprimeM => spec.r <= 2,
        OldformCase::EllExactlyDividesMOrEpsUndefinable => spec.r <= 1,
        OldformCase::EllSquaredDividesMEpsDefinable => spec.r == 0,
    }
}

/// Diagonalisable over a splitting field iff the minimal polynomial is
/// squarefree.
pub fn diagonalisable_bruteforce(m: &RationalMatrix) -> Result<bool> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    if m.rows() == 0 {
        return Ok(true);
    }
    Ok(m.min_poly()?.is_squarefree())
}

/// Discriminant `a_l^2 - 4 eps(l) l^(k-1)` of the top-left 2x2 block.
pub fn discriminant(spec: &OldformBlockSpec) -> BigRational {
    let lk = BigRational::from_integer(BigInt::from(spec.ell).pow(spec.k - 1));
    &spec.a_ell * &spec.a_ell - BigRational::from_integer(4.into()) * &spec.eps_ell * lk
}

/// Whether the instance satisfies the side conditions under which the case
/// verdicts are claimed: nonzero discriminant and `eps(l) != 0` in the
/// coprime case, `a_l != 0` in the second case and `a_l = 0` in the third.
pub fn hypotheses_hold(spec: &OldformBlockSpec) -> bool {
    match spec.case {
        OldformCase::EllCoprimeM => !spec.eps_ell.is_zero() && !discriminant(spec).is_zero(),
        OldformCase::EllExactlyDividesMOrEpsUndefinable => !spec.a_ell.is_zero(),
        OldformCase::EllSquaredDividesMEpsDefinable => spec.a_ell.is_zero(),
    }
}
