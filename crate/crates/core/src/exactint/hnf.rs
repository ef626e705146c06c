//! Row-style Hermite normal form of integer lattices.
//!
//! The pivot columns and an invertible square block are found modulo a large
//! prime. The projected full-rank lattice is put in HNF modulo a multiple of
//! its determinant, then lifted back to full width by Chinese remaindering.
//! The lift is accepted only after an exact check that it is in canonical
//! form and contains every input row, which also rules out unlucky primes.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::crt::{crt_primes, CrtVector};
use super::matrix::IntegerMatrix;
use crate::error::{Error, Result};
use crate::ffalg::{FpMatrix, PrimeField};

const SCRAMBLE_SEED: u64 = 0x4e4f_524d;

/// Hermite normal form of the row lattice of `m` with zero rows removed,
/// together with its rank.
pub fn hnf(m: &IntegerMatrix) -> (IntegerMatrix, usize) {
    if m.is_zero() {
        return (IntegerMatrix::zeros(0, m.cols()), 0);
    }
    for field in crt_primes(&BigInt::zero()).take(64) {
        if let Some(h) = try_hnf(m, field) {
            let r = h.rows();
            return (h, r);
        }
    }
    unreachable!("64 distinct primes all failed the rank profile")
}

fn try_hnf(m: &IntegerMatrix, field: PrimeField) -> Option<IntegerMatrix> {
    let reduced = m.reduce(field);
    let profile = reduced.rref();
    let cols = profile.pivots.clone();
    let r = profile.rank;
    let proj = m.select_cols(&cols);
    let row_idx = proj.reduce(field).transpose().rref().pivots;
    let k1 = proj.select_rows(&row_idx);
    let det1 = k1.determinant().ok()?.abs();
    if det1.is_zero() {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SCRAMBLE_SEED);
    let mixer: Vec<Vec<BigInt>> =
        (0..r).map(|_| (0..m.rows()).map(|_| BigInt::from(rng.gen_range(-3i64..=3))).collect()).collect();
    let k2 = IntegerMatrix::from_rows(m.rows(), mixer).ok()?.mul(&proj).ok()?;
    let d = det1.gcd(&k2.determinant().ok()?);
    let hj = hnf_modular(&proj.row_vecs(), r, &d);
    let lifted = lift(m, &hj, &cols, &row_idx, &det1)?;
    verify(m, &lifted, &cols).then_some(lifted)
}

/// HNF of a full-rank lattice in `Z^n` containing `d Z^n`, computed with all
/// arithmetic reduced modulo a shrinking multiple of the determinant.
pub(crate) fn hnf_modular(rows: &[Vec<BigInt>], n: usize, d: &BigInt) -> Vec<Vec<BigInt>> {
    assert!(rows.len() >= n, "need at least n generators");
    let mut r = d.abs();
    let mut a: Vec<Vec<BigInt>> = rows.iter().map(|row| row.iter().map(|x| x.mod_floor(&r)).collect()).collect();
    let mut w: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    let mut k = a.len() - 1;
    for i in 0..n {
        if a[k][i].is_zero() {
            a[k][i] = r.clone();
        }
        for j in (0..k).rev() {
            if a[j][i].is_zero() {
                continue;
            }
            let ext = a[k][i].extended_gcd(&a[j][i]);
            let (g, u, v) = (ext.gcd, ext.x, ext.y);
            let ak = &a[k][i] / &g;
            let aj = &a[j][i] / &g;
            let (head, tail) = a.split_at_mut(k);
            let row_j = &mut head[j];
            let row_k = &mut tail[0];
            for c in i..n {
                let xk = &row_k[c];
                let xj = &row_j[c];
                let new_k = (&u * xk + &v * xj).mod_floor(&r);
                let new_j = (&ak * xj - &aj * xk).mod_floor(&r);
                row_k[c] = new_k;
                row_j[c] = new_j;
            }
        }
        let ext = a[k][i].extended_gcd(&r);
        let (g, u) = (ext.gcd, ext.x);
        let mut wi: Vec<BigInt> = vec![BigInt::zero(); n];
        for c in i..n {
            wi[c] = (&u * &a[k][c]).mod_floor(&r);
        }
        if wi[i].is_zero() {
            wi[i] = r.clone();
        }
        for wj in w.iter_mut() {
            let q = wj[i].div_floor(&wi[i]);
            if q.is_zero() {
                continue;
            }
            for c in i..n {
                let t = &q * &wi[c];
                wj[c] -= t;
            }
        }
        w.push(wi);
        r = &r / &g;
        if i + 1 < n {
            k -= 1;
        }
    }
    w
}

fn lift(
    m: &IntegerMatrix,
    hj: &[Vec<BigInt>],
    cols: &[usize],
    row_idx: &[usize],
    det1: &BigInt,
) -> Option<IntegerMatrix> {
    let r = hj.len();
    let full = m.select_rows(row_idx);
    let k1 = full.select_cols(cols);
    let hmat = IntegerMatrix::from_rows(r, hj.to_vec()).ok()?;
    let mut acc = CrtVector::new(r * m.cols());
    let mut stable_runs = 0;
    for field in crt_primes(det1).take(4096) {
        let inv = k1.reduce(field).inverse().ok()?;
        let y = hmat.reduce(field).mul(&inv).ok()?.mul(&full.reduce(field)).ok()?;
        if acc.absorb(field, y.data()) {
            stable_runs += 1;
            if stable_runs == 2 {
                let data = acc.into_values();
                return IntegerMatrix::from_vec(r, m.cols(), data).ok();
            }
        } else {
            stable_runs = 0;
        }
    }
    None
}

fn verify(m: &IntegerMatrix, h: &IntegerMatrix, cols: &[usize]) -> bool {
    for (i, &pc) in cols.iter().enumerate() {
        let row = h.row(i);
        if row[..pc].iter().any(|x| !x.is_zero()) || !row[pc].is_positive() {
            return false;
        }
        for j in 0..i {
            let above = h.get(j, pc);
            if above.is_negative() || above >= &row[pc] {
                return false;
            }
        }
    }
    (0..m.rows()).all(|i| lattice_coordinates(h, m.row(i)).is_ok())
}

/// Integer coordinates of `v` in the row lattice of an HNF basis `h`.
pub fn lattice_coordinates(h: &IntegerMatrix, v: &[BigInt]) -> Result<Vec<BigInt>> {
    if v.len() != h.cols() {
        return Err(Error::DimensionMismatch(format!("vector of length {} vs {} columns", v.len(), h.cols())));
    }
    let mut rest = v.to_vec();
    let mut coords = Vec::with_capacity(h.rows());
    let mut start = 0;
    for i in 0..h.rows() {
        let row = h.row(i);
        let Some(pc) = (start..h.cols()).find(|&c| !row[c].is_zero()) else {
            return Err(Error::Inconsistent("zero row in HNF basis".into()));
        };
        if rest[start..pc].iter().any(|x| !x.is_zero()) {
            return Err(Error::NotInLattice);
        }
        let (c, rem) = rest[pc].div_rem(&row[pc]);
        if !rem.is_zero() {
            return Err(Error::NotInLattice);
        }
        if !c.is_zero() {
            for (x, y) in rest[pc..].iter_mut().zip(&row[pc..]) {
                *x -= &c * y;
            }
        }
        coords.push(c);
        start = pc + 1;
    }
    if rest.iter().any(|x| !x.is_zero()) {
        return Err(Error::NotInLattice);
    }
    Ok(coords)
}

/// Coordinates of `v` modulo `field`, given the pivot columns of `h` and the
/// inverse of the pivot block of `h` reduced modulo the same prime.
pub fn lattice_coordinates_mod(pivot_inv: &FpMatrix, cols: &[usize], v: &[u64]) -> Vec<u64> {
    let vj: Vec<u64> = cols.iter().map(|&c| v[c]).collect();
    pivot_inv.vec_mul(&vj)
}

/// Pivot columns of an HNF basis.
pub fn pivot_columns(h: &IntegerMatrix) -> Vec<usize> {
    let mut out = Vec::with_capacity(h.rows());
    let mut start = 0;
    for i in 0..h.rows() {
        let pc = (start..h.cols()).find(|&c| !h.get(i, c).is_zero()).expect("nonzero HNF row");
        out.push(pc);
        start = pc + 1;
    }
    out
}

/// Product of the pivots (the covolume of the projected lattice).
pub fn pivot_product(h: &IntegerMatrix) -> BigInt {
    pivot_columns(h).iter().enumerate().map(|(i, &c)| h.get(i, c).clone()).fold(BigInt::one(), |a, b| a * b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn im(rows: &[Vec<i64>]) -> IntegerMatrix {
        IntegerMatrix::from_i64_rows(rows).unwrap()
    }

    #[test]
    fn examples() {
        let two = im(&[vec![2, 0], vec![0, 2]]);
        assert_eq!(hnf(&two), (two.clone(), 2));
        assert_eq!(hnf(&im(&[vec![1, 2], vec![3, 4]])), (im(&[vec![1, 0], vec![0, 2]]), 2));
        let (z, r) = hnf(&IntegerMatrix::zeros(3, 2));
        assert_eq!((z.rows(), r), (0, 0));
    }

    #[test]
    fn rank_deficient() {
        let m = im(&[vec![2, 4, 6], vec![3, 6, 9], vec![0, 0, 0]]);
        assert_eq!(hnf(&m), (im(&[vec![1, 2, 3]]), 1));
        let m = im(&[vec![0, 2, 1, 5], vec![0, 4, 3, 1], vec![0, 6, 4, 6]]);
        let (h, r) = hnf(&m);
        assert_eq!(r, 2);
        assert_eq!(h, im(&[vec![0, 2, 0, 14], vec![0, 0, 1, -9]]));
    }

    #[test]
    fn coordinates() {
        let h = im(&[vec![1, 0], vec![0, 2]]);
        let v = |a: i64, b: i64| vec![BigInt::from(a), BigInt::from(b)];
        assert_eq!(lattice_coordinates(&h, &v(3, 4)).unwrap(), v(3, 2));
        assert!(matches!(lattice_coordinates(&h, &v(0, 1)), Err(Error::NotInLattice)));
        assert_eq!(lattice_coordinates(&IntegerMatrix::identity(2), &v(-5, 7)).unwrap(), v(-5, 7));
    }
}
