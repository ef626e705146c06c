//! Chinese remaindering for integer vectors computed modulo word-sized primes.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith;
use crate::ffalg::PrimeField;

/// Incremental symmetric CRT for a vector of integers.
///
/// Values are kept as mixed-radix digits, one `u64` per entry and prime:
/// `x = t_0 + t_1 q_0 + t_2 q_0 q_1 + ...`, read symmetrically modulo the
/// product of the primes. Big integers are only formed on request.
#[derive(Clone, Debug)]
pub struct CrtVector {
    len: usize,
    fields: Vec<PrimeField>,
    digits: Vec<Vec<u64>>,
}

impl CrtVector {
    pub fn new(len: usize) -> Self {
        Self { len, fields: Vec::new(), digits: Vec::new() }
    }

    pub fn modulus(&self) -> BigInt {
        self.fields.iter().fold(BigInt::one(), |acc, f| acc * f.characteristic())
    }

    /// Symmetric representatives of the current values.
    pub fn values(&self) -> Vec<BigInt> {
        let m = self.modulus();
        (0..self.len)
            .map(|i| {
                let mut x = BigInt::zero();
                for (f, t) in self.fields.iter().zip(&self.digits).rev() {
                    x = x * f.characteristic() + t[i];
                }
                if self.is_negative(i) {
                    x - &m
                } else {
                    x
                }
            })
            .collect()
    }

    pub fn into_values(self) -> Vec<BigInt> {
        self.values()
    }

    /// Whether the nonnegative value of entry `i` exceeds half the modulus;
    /// compares digits from the top against those of `M/2`.
    fn is_negative(&self, i: usize) -> bool {
        for (f, t) in self.fields.iter().zip(&self.digits).rev() {
            let h = (f.characteristic() - 1) / 2;
            match t[i].cmp(&h) {
                std::cmp::Ordering::Greater => return true,
                std::cmp::Ordering::Less => return false,
                std::cmp::Ordering::Equal => {}
            }
        }
        false
    }

    /// Fold in residues modulo `q`. Returns true if no value changed.
    pub fn absorb(&mut self, field: PrimeField, residues: &[u64]) -> bool {
        assert_eq!(residues.len(), self.len);
        let q = field.characteristic();
        assert!(q % 2 == 1 && !self.fields.contains(&field));
        // weights[j] = q_0 ... q_(j-1) mod q
        let mut weights = Vec::with_capacity(self.fields.len());
        let mut w = 1 % q;
        for f in &self.fields {
            weights.push(w);
            w = field.mul(w, f.characteristic() % q);
        }
        let inv = field.inv(w);
        let top = self.fields.iter().map(|f| f.characteristic()).max().unwrap_or(q);
        let batch = (u64::MAX / (top * q)).max(1) as usize;
        let mut next = vec![0u64; self.len];
        let mut stable = true;
        for (i, (t, &r)) in next.iter_mut().zip(residues).enumerate() {
            let mut acc = 0u64;
            for (j, (digits, &wj)) in self.digits.iter().zip(&weights).enumerate() {
                acc += digits[i] * wj;
                if (j + 1) % batch == 0 {
                    acc %= q;
                }
            }
            *t = field.mul(field.sub(r % q, acc % q), inv);
            let unchanged = if self.is_negative(i) { *t == q - 1 } else { *t == 0 };
            stable &= unchanged;
        }
        self.fields.push(field);
        self.digits.push(next);
        stable
    }
}

/// Primes just below 2^28, avoiding divisors of `avoid`. Products of a few
/// hundred residues then accumulate in a `u64` without reduction.
pub fn crt_primes(avoid: &BigInt) -> impl Iterator<Item = PrimeField> + '_ {
    let mut q = (1u64 << 28) - 1;
    std::iter::from_fn(move || loop {
        while !arith::is_prime(q) {
            q -= 2;
        }
        let cur = q;
        q -= 2;
        if !avoid.is_zero() && (avoid % cur).is_zero() {
            continue;
        }
        return Some(PrimeField::new(cur).expect("prime below 2^28"));
    })
}

/// Euclidean remainder in `[0, |m|)`.
pub fn mod_floor(x: &BigInt, m: &BigInt) -> BigInt {
    x.mod_floor(m)
}

/// Rational reconstruction of `a mod m`: the fraction `n/d` with
/// `|n|, d <= sqrt(m/2)` and `n = a d (mod m)`, if one exists.
pub fn rational_reconstruction(a: &BigInt, m: &BigInt) -> Option<(BigInt, BigInt)> {
    let bound = (m >> 1u32).sqrt();
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        (r0, r1) = (r1, r2);
        (t0, t1) = (t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    if t1.is_negative() {
        Some((-r1, -t1))
    } else {
        Some((r1, t1))
    }
}

/// Bit length of `|x|`.
pub fn bits(x: &BigInt) -> u64 {
    x.abs().bits()
}
