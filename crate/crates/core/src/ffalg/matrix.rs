use std::fmt;

use super::field::PrimeField;
use super::poly::FpPolynomial;
use crate::error::{Error, Result};

/// Dense row-major matrix over `F_p`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: FpMatrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

impl FpMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Self { field, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % field.characteristic();
        }
        m
    }

    /// Build from residues; values are reduced mod p.
    pub fn from_vec(field: PrimeField, rows: usize, cols: usize, data: Vec<u64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        let data = data.into_iter().map(|x| field.reduce(x)).collect();
        Ok(Self { field, rows, cols, data })
    }

    pub fn from_i64_rows(field: PrimeField, rows: &[Vec<i64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let data = rows.iter().flatten().map(|&x| field.from_i64(x)).collect();
        Ok(Self { field, rows: r, cols: c, data })
    }

    pub fn diagonal(field: PrimeField, diag: &[u64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(field, n, n);
        for (i, &x) in diag.iter().enumerate() {
            m.data[i * n + i] = field.reduce(x);
        }
        m
    }

    /// Companion matrix of a monic polynomial, acting on column vectors.
    pub fn companion(poly: &FpPolynomial) -> Self {
        let f = poly.field();
        let p = poly.monic();
        let n = p.degree().unwrap_or(0);
        let mut m = Self::zeros(f, n, n);
        for i in 1..n {
            m.set(i, i - 1, 1);
        }
        for i in 0..n {
            m.set(i, n - 1, f.neg(p.coeff(i)));
        }
        m
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }
    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }
    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }
    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }
    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = self.field.reduce(v);
    }
    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }
    pub fn data(&self) -> &[u64] {
        &self.data
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn from_rows_slice(field: PrimeField, cols: usize, rows: &[Vec<u64>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            debug_assert_eq!(r.len(), cols);
            data.extend_from_slice(r);
        }
        Self { field, rows: rows.len(), cols, data }
    }

    fn require_square(&self) -> Result<usize> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        Ok(self.rows)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.field.check_same(&other.field)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch("matrix sum".into()));
        }
        let f = self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        Ok(Self { data, ..self.clone() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.field.check_same(&other.field)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch("matrix difference".into()));
        }
        let f = self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect();
        Ok(Self { data, ..self.clone() })
    }

    pub fn scale(&self, c: u64) -> Self {
        let f = self.field;
        let c = f.reduce(c);
        Self { data: self.data.iter().map(|&a| f.mul(a, c)).collect(), ..self.clone() }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.field.check_same(&other.field)?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let p = self.field.characteristic();
        let n = other.cols;
        let mut out = vec![0u64; self.rows * n];
        let batch = lazy_batch(p);
        let mut acc = vec![0u64; n];
        for i in 0..self.rows {
            acc.iter_mut().for_each(|x| *x = 0);
            let mut pending = 0;
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == 0 {
                    continue;
                }
                let brow = &other.data[k * n..(k + 1) * n];
                for (x, &b) in acc.iter_mut().zip(brow) {
                    *x += a * b;
                }
                pending += 1;
                if pending == batch {
                    acc.iter_mut().for_each(|x| *x %= p);
                    pending = 0;
                }
            }
            for (o, &x) in out[i * n..(i + 1) * n].iter_mut().zip(&acc) {
                *o = x % p;
            }
        }
        Ok(Self { field: self.field, rows: self.rows, cols: n, data: out })
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.rows);
        let p = self.field.characteristic();
        let batch = lazy_batch(p);
        let mut acc = vec![0u64; self.cols];
        let mut pending = 0;
        for (k, &a) in v.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (x, &b) in acc.iter_mut().zip(self.row(k)) {
                *x += a * b;
            }
            pending += 1;
            if pending == batch {
                acc.iter_mut().for_each(|x| *x %= p);
                pending = 0;
            }
        }
        acc.iter_mut().for_each(|x| *x %= p);
        acc
    }

    /// Matrix times column vector.
    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols);
        let f = self.field;
        let p = f.characteristic();
        (0..self.rows)
            .map(|r| {
                let mut acc: u128 = 0;
                for (&a, &b) in self.row(r).iter().zip(v) {
                    acc += (a * b) as u128;
                }
                (acc % p as u128) as u64
            })
            .collect()
    }

    pub fn pow(&self, mut e: u64) -> Result<Self> {
        let n = self.require_square()?;
        let mut base = self.clone();
        let mut acc = Self::identity(self.field, n);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            base = base.mul(&base)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Evaluate a polynomial at this matrix by Horner's rule.
    pub fn eval_poly(&self, poly: &FpPolynomial) -> Result<Self> {
        let n = self.require_square()?;
        self.field.check_same(&poly.field())?;
        let mut acc = Self::zeros(self.field, n, n);
        for &c in poly.coeffs().iter().rev() {
            acc = acc.mul(self)?;
            for i in 0..n {
                let v = self.field.add(acc.get(i, i), c);
                acc.data[i * n + i] = v;
            }
        }
        Ok(acc)
    }

    /// Reduced row echelon form (Gauss-Jordan).
    pub fn rref(&self) -> Rref {
        let f = self.field;
        let p = f.characteristic();
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..m.cols {
                    m.data.swap(pr * m.cols + j, r * m.cols + j);
                }
            }
            let inv = f.inv(m.get(r, c));
            for j in c..m.cols {
                let v = m.get(r, j);
                m.data[r * m.cols + j] = f.mul(v, inv);
            }
            let pivot_row: Vec<u64> = m.row(r)[c..].to_vec();
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c);
                if factor == 0 {
                    continue;
                }
                let neg = p - factor;
                let row = &mut m.data[i * m.cols + c..(i + 1) * m.cols];
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    *x = (*x + neg * y) % p;
                }
            }
            pivots.push(c);
            r += 1;
        }
        let rank = pivots.len();
        Rref { matrix: m, pivots, rank }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Rows form a basis of the right kernel `{v : M v^T = 0}`.
    pub fn kernel_basis(&self) -> FpMatrix {
        let f = self.field;
        let Rref { matrix: r, pivots, rank } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Self::zeros(f, free.len(), self.cols);
        for (i, &fc) in free.iter().enumerate() {
            k.data[i * self.cols + fc] = 1;
            for (row, &pc) in pivots.iter().enumerate().take(rank) {
                k.data[i * self.cols + pc] = f.neg(r.get(row, fc));
            }
        }
        k
    }

    /// Rows form a basis of the left kernel `{v : v M = 0}`.
    pub fn left_kernel_basis(&self) -> FpMatrix {
        self.transpose().kernel_basis()
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.require_square()?;
        let mut aug = Self::zeros(self.field, n, 2 * n);
        for i in 0..n {
            aug.data[i * 2 * n..i * 2 * n + n].copy_from_slice(self.row(i));
            aug.data[i * 2 * n + n + i] = 1;
        }
        let r = aug.rref();
        if r.rank < n || r.pivots[n - 1] != n - 1 {
            return Err(Error::Inconsistent("matrix is singular".into()));
        }
        let mut inv = Self::zeros(self.field, n, n);
        for i in 0..n {
            inv.data[i * n..(i + 1) * n].copy_from_slice(&r.matrix.row(i)[n..]);
        }
        Ok(inv)
    }

    /// Select a subset of rows.
    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        Self { field: self.field, rows: idx.len(), cols: self.cols, data }
    }

    /// Characteristic polynomial `det(x I - M)` via Hessenberg reduction.
    pub fn char_poly(&self) -> Result<FpPolynomial> {
        let n = self.require_square()?;
        let f = self.field;
        let mut h = self.clone();
        // similarity transform to upper Hessenberg form
        for m in 1..n.saturating_sub(1) {
            let Some(i) = (m..n).find(|&i| h.get(i, m - 1) != 0) else {
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
            let inv = f.inv(h.get(m, m - 1));
            for i in m + 1..n {
                let u = f.mul(h.get(i, m - 1), inv);
                if u == 0 {
                    continue;
                }
                for j in 0..n {
                    let v = f.sub(h.get(i, j), f.mul(u, h.get(m, j)));
                    h.data[i * n + j] = v;
                }
                for j in 0..n {
                    let v = f.add(h.get(j, m), f.mul(u, h.get(j, i)));
                    h.data[j * n + m] = v;
                }
            }
        }
        // p_k = (x - h_kk) p_{k-1} - sum_{i<k} h_ik (prod_{j=i+1}^{k} h_{j,j-1}) p_{i-1}
        let x = FpPolynomial::x(f);
        let mut ps: Vec<FpPolynomial> = vec![FpPolynomial::one(f)];
        for k in 0..n {
            let mut next = x.sub(&FpPolynomial::new(f, vec![h.get(k, k)])).mul(&ps[k]);
            let mut t = 1u64;
            for i in (0..k).rev() {
                t = f.mul(t, h.get(i + 1, i));
                if t == 0 {
                    break;
                }
                let c = f.mul(t, h.get(i, k));
                next = next.sub(&ps[i].scale(c));
            }
            ps.push(next);
        }
        Ok(ps.pop().unwrap())
    }

    /// Minimal polynomial: lcm of the minimal polynomials of the standard
    /// basis vectors under the action `v -> v M`.
    pub fn min_poly(&self) -> Result<FpPolynomial> {
        let n = self.require_square()?;
        let f = self.field;
        let mut acc = FpPolynomial::one(f);
        for j in 0..n {
            let mut e = vec![0u64; n];
            e[j] = 1;
            if self.apply_poly_row(&acc, &e).iter().all(|&x| x == 0) {
                continue;
            }
            let mp = self.vector_min_poly(&e);
            let g = acc.gcd(&mp);
            acc = acc.mul(&mp.div_exact(&g)?);
        }
        Ok(acc)
    }

    fn apply_poly_row(&self, poly: &FpPolynomial, v: &[u64]) -> Vec<u64> {
        let f = self.field;
        let mut acc = vec![0u64; v.len()];
        for &c in poly.coeffs().iter().rev() {
            acc = self.vec_mul(&acc);
            for (a, &x) in acc.iter_mut().zip(v) {
                *a = f.add(*a, f.mul(c, x));
            }
        }
        acc
    }

    /// Minimal polynomial of `v` under `v -> v M` (Krylov sequence).
    fn vector_min_poly(&self, v: &[u64]) -> FpPolynomial {
        let f = self.field;
        let n = v.len();
        // echelon rows with their expression in terms of the Krylov vectors
        let mut basis: Vec<(usize, Vec<u64>, Vec<u64>)> = Vec::new();
        let mut cur = v.to_vec();
        for step in 0..=n {
            let mut vec = cur.clone();
            let mut combo = vec![0u64; step + 1];
            combo[step] = 1;
            for (pc, row, rc) in &basis {
                let c = vec[*pc];
                if c == 0 {
                    continue;
                }
                for (a, &b) in vec.iter_mut().zip(row) {
                    *a = f.sub(*a, f.mul(c, b));
                }
                for (a, &b) in combo.iter_mut().zip(rc) {
                    *a = f.sub(*a, f.mul(c, b));
                }
            }
            match vec.iter().position(|&x| x != 0) {
                None => return FpPolynomial::new(f, combo).monic(),
                Some(pc) => {
                    let inv = f.inv(vec[pc]);
                    vec.iter_mut().for_each(|a| *a = f.mul(*a, inv));
                    combo.iter_mut().for_each(|a| *a = f.mul(*a, inv));
                    basis.push((pc, vec, combo));
                }
            }
            cur = self.vec_mul(&cur);
        }
        unreachable!("Krylov sequence must become dependent within n+1 steps")
    }
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FpMatrix over F_{} ({}x{})", self.field.characteristic(), self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

/// How many products of residues can be added to a reduced accumulator
/// before a `u64` could overflow.
fn lazy_batch(p: u64) -> u64 {
    let sq = (p - 1) * (p - 1);
    if sq == 0 {
        u64::MAX
    } else {
        ((u64::MAX - (p - 1)) / sq).max(1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn m(p: u64, rows: &[Vec<i64>]) -> FpMatrix {
        FpMatrix::from_i64_rows(fp(p), rows).unwrap()
    }

    #[test]
    fn rref_identity() {
        let id = FpMatrix::identity(fp(5), 3);
        let r = id.rref();
        assert_eq!(r.matrix, id);
        assert_eq!(r.pivots, vec![0, 1, 2]);
        assert_eq!(r.rank, 3);
    }

    #[test]
    fn rref_zero() {
        let z = FpMatrix::zeros(fp(2), 2, 4);
        let r = z.rref();
        assert_eq!(r.matrix, z);
        assert!(r.pivots.is_empty());
        assert_eq!(r.rank, 0);
    }

    #[test]
    fn rref_rank_one() {
        let r = m(3, &[vec![1, 1], vec![1, 1]]).rref();
        assert_eq!(r.matrix, m(3, &[vec![1, 1], vec![0, 0]]));
        assert_eq!(r.rank, 1);
    }

    #[test]
    fn kernels() {
        assert_eq!(FpMatrix::identity(fp(3), 2).kernel_basis().rows(), 0);
        assert_eq!(FpMatrix::zeros(fp(3), 2, 2).kernel_basis().rows(), 2);
        let k = m(2, &[vec![1, 1]]).kernel_basis();
        assert_eq!(k, m(2, &[vec![1, 1]]));
    }

    #[test]
    fn char_polys() {
        let f2 = fp(2);
        assert_eq!(FpMatrix::zeros(f2, 1, 1).char_poly().unwrap(), FpPolynomial::x(f2));
        let f7 = fp(7);
        let x_minus_1 = FpPolynomial::from_i64(f7, &[-1, 1]);
        assert_eq!(FpMatrix::identity(f7, 4).char_poly().unwrap(), x_minus_1.pow(4));
        let g = FpPolynomial::from_i64(f2, &[1, 1, 1]);
        assert_eq!(FpMatrix::companion(&g).char_poly().unwrap(), g);
    }

    #[test]
    fn min_polys() {
        let f5 = fp(5);
        assert_eq!(FpMatrix::identity(f5, 3).min_poly().unwrap(), FpPolynomial::from_i64(f5, &[-1, 1]));
        let jordan = m(5, &[vec![0, 1], vec![0, 0]]);
        assert_eq!(jordan.min_poly().unwrap(), FpPolynomial::monomial(f5, 1, 2));
        let d = FpMatrix::diagonal(f5, &[1, 2]);
        let expect = FpPolynomial::from_i64(f5, &[-1, 1]).mul(&FpPolynomial::from_i64(f5, &[-2, 1]));
        assert_eq!(d.min_poly().unwrap(), expect);
    }

    #[test]
    fn non_square_errors() {
        let a = FpMatrix::zeros(fp(3), 2, 3);
        assert!(matches!(a.char_poly(), Err(Error::NotSquare { .. })));
        assert!(matches!(a.min_poly(), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn mixed_fields_rejected() {
        let a = FpMatrix::identity(fp(3), 2);
        let b = FpMatrix::identity(fp(5), 2);
        assert!(matches!(a.mul(&b), Err(Error::FieldMismatch { .. })));
    }

    #[test]
    fn inverse_roundtrip() {
        let a = m(7, &[vec![1, 2], vec![3, 4]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), FpMatrix::identity(fp(7), 2));
        assert!(m(7, &[vec![1, 2], vec![2, 4]]).inverse().is_err());
    }
}
