use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::crt::crt_primes;
use super::poly::RationalPolynomial;
use crate::error::{Error, Result};
use crate::ffalg::{FpMatrix, PrimeField};

/// Dense row-major matrix of arbitrary-precision integers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        Ok(Self { rows, cols, data })
    }

    /// Build from rows; `cols` is needed when `rows` is empty.
    pub fn from_rows(cols: usize, rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let r = rows.len();
        if rows.iter().any(|row| row.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Self { rows: r, cols, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_rows(cols, rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }
    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }
    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }
    pub fn row_vecs(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch("integer matrix product".into()));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![BigInt::zero(); self.cols];
        for (k, a) in v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (o, b) in out.iter_mut().zip(self.row(k)) {
                if !b.is_zero() {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        Self { rows: idx.len(), cols: self.cols, data }
    }

    pub fn select_cols(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(self.rows * idx.len());
        for r in 0..self.rows {
            for &c in idx {
                data.push(self.get(r, c).clone());
            }
        }
        Self { rows: self.rows, cols: idx.len(), data }
    }

    pub fn to_rational(&self) -> RationalMatrix {
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| BigRational::from_integer(x.clone())).collect(),
        }
    }

    pub fn reduce(&self, field: PrimeField) -> FpMatrix {
        let data = self.data.iter().map(|x| field.from_bigint(x)).collect();
        FpMatrix::from_vec(field, self.rows, self.cols, data).expect("shape preserved")
    }

    /// log2 of the Hadamard bound on |det|.
    fn hadamard_log2(&self) -> f64 {
        (0..self.rows)
            .map(|r| {
                let s: f64 = self.row(r).iter().map(|x| big_to_f64(x).powi(2)).sum();
                if s > 0.0 {
                    0.5 * s.log2()
                } else {
                    0.0
                }
            })
            .sum()
    }

    /// Exact determinant by Chinese remaindering up to the Hadamard bound.
    pub fn determinant(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let need_bits = self.hadamard_log2() + 2.0;
        let mut acc = super::crt::CrtVector::new(1);
        let mut have_bits = 0.0;
        for f in crt_primes(&BigInt::zero()) {
            let det = fp_determinant(&self.reduce(f));
            acc.absorb(f, &[det]);
            have_bits += (f.characteristic() as f64).log2();
            if have_bits > need_bits {
                break;
            }
        }
        Ok(acc.into_values().pop().unwrap())
    }
}

pub(crate) fn big_to_f64(x: &BigInt) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

/// Determinant over `F_p` by elimination.
pub(crate) fn fp_determinant(m: &FpMatrix) -> u64 {
    let f = m.field();
    let n = m.rows();
    let mut a: Vec<Vec<u64>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    let mut det = 1u64;
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| a[r][c] != 0) else {
            return 0;
        };
        if p != c {
            a.swap(p, c);
            det = f.neg(det);
        }
        det = f.mul(det, a[c][c]);
        let inv = f.inv(a[c][c]);
        for r in c + 1..n {
            let factor = f.mul(a[r][c], inv);
            if factor == 0 {
                continue;
            }
            let (top, bottom) = a.split_at_mut(r);
            let pivot_row = &top[c];
            for (x, &y) in bottom[0][c..].iter_mut().zip(&pivot_row[c..]) {
                *x = f.sub(*x, f.mul(factor, y));
            }
        }
    }
    det
}

impl fmt::Debug for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntegerMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let cells: Vec<String> = self.row(r).iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Dense row-major matrix of reduced fractions.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![BigRational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigRational::one();
        }
        m
    }

    pub fn from_rows(cols: usize, rows: Vec<Vec<BigRational>>) -> Result<Self> {
        let r = rows.len();
        if rows.iter().any(|row| row.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Self { rows: r, cols, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Ok(IntegerMatrix::from_i64_rows(rows)?.to_rational())
    }

    /// Entries given as `(numerator, denominator)` pairs.
    pub fn from_fraction_rows(rows: &[Vec<(i64, i64)>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let rows = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&(n, d)| {
                        if d == 0 {
                            Err(Error::Inconsistent("zero denominator".into()))
                        } else {
                            Ok(BigRational::new(n.into(), d.into()))
                        }
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(cols, rows)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn get(&self, r: usize, c: usize) -> &BigRational {
        &self.data[r * self.cols + c]
    }
    pub fn set(&mut self, r: usize, c: usize, v: BigRational) {
        self.data[r * self.cols + c] = v;
    }
    pub fn row(&self, r: usize) -> &[BigRational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    fn require_square(&self) -> Result<usize> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        Ok(self.rows)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(Self { rows: self.rows, cols: self.cols, data })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(Self { rows: self.rows, cols: self.cols, data })
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * c).collect() }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch("rational matrix product".into()));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn vec_mul(&self, v: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![BigRational::zero(); self.cols];
        for (k, a) in v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (o, b) in out.iter_mut().zip(self.row(k)) {
                if !b.is_zero() {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Result<BigRational> {
        let n = self.require_square()?;
        Ok((0..n).map(|i| self.get(i, i).clone()).sum())
    }

    pub fn commutes_with(&self, other: &Self) -> Result<bool> {
        Ok(self.mul(other)? == other.mul(self)?)
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if pr != r {
                for j in 0..m.cols {
                    m.data.swap(pr * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m.get(r, c).recip();
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let factor = m.get(i, c).clone();
                for j in c..m.cols {
                    let v = m.get(i, j) - &factor * m.get(r, j);
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Exact determinant by fraction-carrying elimination.
    pub fn determinant(&self) -> Result<BigRational> {
        let n = self.require_square()?;
        let mut a = self.clone();
        let mut det = BigRational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a.get(r, c).is_zero()) else {
                return Ok(BigRational::zero());
            };
            if p != c {
                for j in 0..n {
                    a.data.swap(p * n + j, c * n + j);
                }
                det = -det;
            }
            let piv = a.get(c, c).clone();
            det *= &piv;
            for r in c + 1..n {
                if a.get(r, c).is_zero() {
                    continue;
                }
                let factor = a.get(r, c) / &piv;
                for j in c..n {
                    let v = a.get(r, j) - &factor * a.get(c, j);
                    a.set(r, j, v);
                }
            }
        }
        Ok(det)
    }

    /// Characteristic polynomial `det(x I - M)` via Hessenberg reduction.
    pub fn char_poly(&self) -> Result<RationalPolynomial> {
        let n = self.require_square()?;
        let mut h = self.clone();
        for m in 1..n.saturating_sub(1) {
            let Some(i) = (m..n).find(|&i| !h.get(i, m - 1).is_zero()) else {
                continue;
            };
            if i != m {
                for j in 0..n {
                    h.data.swap(i * n + j, m * n + j);
                }
                for j in 0..n {
                    h.data.swap(j * n + i, j * n + m);
                }
            }
            let piv = h.get(m, m - 1).clone();
            for i in m + 1..n {
                if h.get(i, m - 1).is_zero() {
                    continue;
                }
                let u = h.get(i, m - 1) / &piv;
                for j in 0..n {
                    let v = h.get(i, j) - &u * h.get(m, j);
                    h.set(i, j, v);
                }
                for j in 0..n {
                    let v = h.get(j, m) + &u * h.get(j, i);
                    h.set(j, m, v);
                }
            }
        }
        let x = RationalPolynomial::x();
        let mut ps = vec![RationalPolynomial::one()];
        for k in 0..n {
            let mut next = x.sub(&RationalPolynomial::constant(h.get(k, k).clone())).mul(&ps[k]);
            let mut t = BigRational::one();
            for i in (0..k).rev() {
                t *= h.get(i + 1, i);
                if t.is_zero() {
                    break;
                }
                next = next.sub(&ps[i].scale(&(&t * h.get(i, k))));
            }
            ps.push(next);
        }
        Ok(ps.pop().unwrap())
    }

    /// Minimal polynomial as the lcm of the Krylov minimal polynomials of the
    /// standard basis vectors under `v -> v M`.
    pub fn min_poly(&self) -> Result<RationalPolynomial> {
        let n = self.require_square()?;
        let mut acc = RationalPolynomial::one();
        for j in 0..n {
            let mut e = vec![BigRational::zero(); n];
            e[j] = BigRational::one();
            let mp = self.vector_min_poly(&e);
            let g = acc.gcd(&mp);
            acc = acc.mul(&mp.div_rem(&g)?.0);
        }
        Ok(acc)
    }

    fn vector_min_poly(&self, v: &[BigRational]) -> RationalPolynomial {
        let n = v.len();
        let mut basis: Vec<(usize, Vec<BigRational>, Vec<BigRational>)> = Vec::new();
        let mut cur = v.to_vec();
        for step in 0..=n {
            let mut vec = cur.clone();
            let mut combo = vec![BigRational::zero(); step + 1];
            combo[step] = BigRational::one();
            for (pc, row, rc) in &basis {
                let c = vec[*pc].clone();
                if c.is_zero() {
                    continue;
                }
                for (a, b) in vec.iter_mut().zip(row) {
                    *a -= &c * b;
                }
                for (a, b) in combo.iter_mut().zip(rc) {
                    *a -= &c * b;
                }
            }
            match vec.iter().position(|x| !x.is_zero()) {
                None => return RationalPolynomial::new(combo).monic(),
                Some(pc) => {
                    let inv = vec[pc].recip();
                    vec.iter_mut().for_each(|a| *a *= &inv);
                    combo.iter_mut().for_each(|a| *a *= &inv);
                    basis.push((pc, vec, combo));
                }
            }
            cur = self.vec_mul(&cur);
        }
        unreachable!("Krylov sequence must become dependent within n+1 steps")
    }

    /// Clear denominators: returns `(D, D*M)` with `D` the lcm of denominators.
    pub fn clear_denominators(&self) -> (BigInt, IntegerMatrix) {
        let mut den = BigInt::one();
        for x in &self.data {
            den = num_integer::Integer::lcm(&den, x.denom());
        }
        let data = self.data.iter().map(|x| (x * BigRational::from_integer(den.clone())).to_integer()).collect();
        (den, IntegerMatrix { rows: self.rows, cols: self.cols, data })
    }

    /// True when every entry is an integer.
    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|x| x.is_integer())
    }

    pub fn abs_max_height(&self) -> u64 {
        self.data.iter().map(|x| x.numer().abs().bits().max(x.denom().bits())).max().unwrap_or(0)
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RationalMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let cells: Vec<String> = self.row(r).iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn integer_determinant() {
        let m = IntegerMatrix::from_i64_rows(&[vec![1, 2], vec![3, 4]]).unwrap();
        assert_eq!(m.determinant().unwrap(), BigInt::from(-2));
        let big = IntegerMatrix::from_i64_rows(&[
            vec![1_000_000_007, 3, 5],
            vec![-7, 999_999_937, 11],
            vec![13, 17, -1_000_000_009],
        ])
        .unwrap();
        assert_eq!(big.determinant().unwrap(), big.to_rational().determinant().unwrap().to_integer());
    }

    #[test]
    fn rational_char_polys() {
        let companion = RationalMatrix::from_i64_rows(&[vec![0, 1], vec![-1, -1]]).unwrap();
        assert_eq!(companion.char_poly().unwrap(), RationalPolynomial::from_i64(&[1, 1, 1]));
        let half = RationalMatrix::from_fraction_rows(&[vec![(1, 2), (0, 1)], vec![(0, 1), (1, 2)]]).unwrap();
        let x_half = RationalPolynomial::new(vec![q(-1, 2), q(1, 1)]);
        assert_eq!(half.char_poly().unwrap(), x_half.mul(&x_half));
        assert_eq!(half.min_poly().unwrap(), x_half);
    }

    #[test]
    fn non_square_rejected() {
        let m = RationalMatrix::zeros(2, 3);
        assert!(matches!(m.char_poly(), Err(Error::NotSquare { .. })));
        assert!(matches!(IntegerMatrix::zeros(1, 2).determinant(), Err(Error::NotSquare { .. })));
    }
}
