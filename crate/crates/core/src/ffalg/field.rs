use crate::arith;
use crate::error::{Error, Result};

/// The prime field `F_p`, `p < 2^31`, so a product of two residues fits in a
/// `u64` with room for a few additions before reduction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

pub(crate) const MAX_PRIME: u64 = 1 << 31;

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p >= MAX_PRIME {
            return Err(Error::PrimeOutOfRange(p));
        }
        if !arith::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Self { p })
    }

    #[inline]
    pub fn characteristic(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn reduce(&self, x: u64) -> u64 {
        x % self.p
    }

    #[inline]
    pub fn from_i64(&self, x: i64) -> u64 {
        x.rem_euclid(self.p as i64) as u64
    }

    pub fn from_bigint(&self, x: &num_bigint::BigInt) -> u64 {
        use num_traits::ToPrimitive;
        let m = num_bigint::BigInt::from(self.p);
        let r = ((x % &m) + &m) % &m;
        r.to_u64().expect("residue fits in u64")
    }

    /// Symmetric lift into `(-p/2, p/2]`.
    pub fn lift_signed(&self, x: u64) -> i64 {
        if x > self.p / 2 {
            x as i64 - self.p as i64
        } else {
            x as i64
        }
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        (a * b) % self.p
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; panics on zero, which is always a caller bug.
    pub fn inv(&self, a: u64) -> u64 {
        assert!(a % self.p != 0, "inverse of zero in F_{}", self.p);
        self.pow(a, self.p - 2)
    }

    pub(crate) fn check_same(&self, other: &PrimeField) -> Result<()> {
        if self.p != other.p {
            return Err(Error::FieldMismatch { left: self.p, right: other.p });
        }
        Ok(())
    }
}
