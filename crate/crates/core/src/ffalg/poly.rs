use std::fmt;

use super::field::PrimeField;
use crate::error::{Error, Result};

/// Univariate polynomial over `F_p`, coefficients stored lowest degree first
/// with no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FpPolynomial {
    field: PrimeField,
    coeffs: Vec<u64>,
}

impl FpPolynomial {
    pub fn new(field: PrimeField, coeffs: Vec<u64>) -> Self {
        let mut coeffs: Vec<u64> = coeffs.into_iter().map(|c| field.reduce(c)).collect();
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { field, coeffs }
    }

    pub fn from_i64(field: PrimeField, coeffs: &[i64]) -> Self {
        Self::new(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn zero(field: PrimeField) -> Self {
        Self { field, coeffs: Vec::new() }
    }

    pub fn one(field: PrimeField) -> Self {
        Self { field, coeffs: vec![1] }
    }

    /// The monomial `x`.
    pub fn x(field: PrimeField) -> Self {
        Self::new(field, vec![0, 1])
    }

    pub fn monomial(field: PrimeField, coeff: u64, degree: usize) -> Self {
        let mut c = vec![0; degree + 1];
        c[degree] = coeff;
        Self::new(field, c)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        let inv = self.field.inv(self.leading());
        self.scale(inv)
    }

    pub fn scale(&self, c: u64) -> Self {
        let f = self.field;
        Self::new(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let f = self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect();
        Self::new(f, c)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let f = self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect();
        Self::new(f, c)
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.field);
        }
        let p = self.field.characteristic();
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + a * b) % p;
            }
        }
        Self::new(self.field, out)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Euclidean division; errors when dividing by zero.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let f = self.field;
        let dd = divisor.degree().ok_or(Error::ZeroPolynomial)?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(f), self.clone()));
        }
        let inv = f.inv(divisor.leading());
        let mut quot = vec![0u64; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = f.mul(rem[i], inv);
            if c == 0 {
                continue;
            }
            quot[i - dd] = c;
            for (j, &dc) in divisor.coeffs.iter().enumerate() {
                let idx = i - dd + j;
                rem[idx] = f.sub(rem[idx], f.mul(c, dc));
            }
        }
        rem.truncate(dd);
        Ok((Self::new(f, quot), Self::new(f, rem)))
    }

    pub fn rem(&self, divisor: &Self) -> Result<Self> {
        Ok(self.div_rem(divisor)?.1)
    }

    /// Exact quotient; errors if the division leaves a remainder.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(divisor)?;
        if !r.is_zero() {
            return Err(Error::Inconsistent("polynomial division is not exact".into()));
        }
        Ok(q)
    }

    /// Monic gcd (zero only when both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        let f = self.field;
        let c = self.coeffs.iter().enumerate().skip(1).map(|(i, &a)| f.mul(a, f.reduce(i as u64))).collect();
        Self::new(f, c)
    }

    pub fn eval(&self, x: u64) -> u64 {
        let f = self.field;
        self.coeffs.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn mul_mod(&self, other: &Self, modulus: &Self) -> Self {
        self.mul(other).rem(modulus).expect("nonzero modulus")
    }

    /// `self^e mod modulus` by square-and-multiply.
    pub fn pow_mod(&self, mut e: u64, modulus: &Self) -> Self {
        let mut base = self.rem(modulus).expect("nonzero modulus");
        let mut acc = Self::one(self.field).rem(modulus).expect("nonzero modulus");
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_mod(&base, modulus);
            }
            base = base.mul_mod(&base, modulus);
            e >>= 1;
        }
        acc
    }

    /// For `self = g(x^p)`, returns `g`; the p-th root of a polynomial whose
    /// derivative vanishes (coefficients of `F_p` are their own p-th roots).
    pub(crate) fn pth_root(&self) -> Self {
        let p = self.field.characteristic() as usize;
        let c = self.coeffs.iter().step_by(p).copied().collect();
        Self::new(self.field, c)
    }

    /// Irreducibility over `F_p` via the distinct-degree criterion.
    pub fn is_irreducible(&self) -> bool {
        let n = match self.degree() {
            None | Some(0) => return false,
            Some(1) => return true,
            Some(n) => n,
        };
        let f = self.monic();
        let p = self.field.characteristic();
        let x = Self::x(self.field);
        // x^(p^i) mod f for i = 0..=n
        let mut frob = vec![x.rem(&f).unwrap()];
        for i in 1..=n {
            let next = frob[i - 1].pow_mod(p, &f);
            frob.push(next);
        }
        if frob[n] != frob[0] {
            return false;
        }
        for (q, _) in crate::arith::factorize(n as u64) {
            let g = frob[n / q as usize].sub(&x).gcd(&f);
            if !g.is_one() {
                return false;
            }
        }
        true
    }
}

impl fmt::Display for FpPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, _) => write!(f, "{c}")?,
                (1, 1) => write!(f, "x")?,
                (1, _) => write!(f, "{c}*x")?,
                (_, 1) => write!(f, "x^{i}")?,
                _ => write!(f, "{c}*x^{i}")?,
            }
        }
        Ok(())
    }
}
