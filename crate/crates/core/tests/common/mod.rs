#![allow(dead_code)]

use heckestat::degen::{OldformBlockSpec, OldformCase};
use heckestat::ffalg::{FpMatrix, FpPolynomial, PrimeField};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn random_irreducible(f: PrimeField, degree: usize, rng: &mut ChaCha8Rng) -> FpPolynomial {
    loop {
        let mut c: Vec<u64> = (0..degree).map(|_| rng.gen_range(0..f.characteristic())).collect();
        c.push(1);
        let g = FpPolynomial::new(f, c);
        if g.is_irreducible() {
            return g;
        }
    }
}

pub fn random_invertible(f: PrimeField, n: usize, rng: &mut ChaCha8Rng) -> FpMatrix {
    loop {
        let data = (0..n * n).map(|_| rng.gen_range(0..f.characteristic())).collect();
        let m = FpMatrix::from_vec(f, n, n, data).unwrap();
        if m.rank() == n {
            return m;
        }
    }
}

/// Multiplication matrices of every basis element `s^i t^j` of
/// `F_p[s, t] / (g(s), t^m)`.
fn piece_regular(f: PrimeField, g: &FpPolynomial, m: usize) -> Vec<FpMatrix> {
    let e = g.degree().unwrap();
    let n = e * m;
    let idx = |i: usize, j: usize| i + e * j;
    let mut s = FpMatrix::zeros(f, n, n);
    let mut t = FpMatrix::zeros(f, n, n);
    for j in 0..m {
        for i in 0..e {
            if i + 1 < e {
                s.set(idx(i, j), idx(i + 1, j), 1);
            } else {
                for k in 0..e {
                    s.set(idx(i, j), idx(k, j), f.neg(g.coeff(k)));
                }
            }
            if j + 1 < m {
                t.set(idx(i, j), idx(i, j + 1), 1);
            }
        }
    }
    let mut out = Vec::with_capacity(n);
    for j in 0..m {
        for i in 0..e {
            out.push(s.pow(i as u64).unwrap().mul(&t.pow(j as u64).unwrap()).unwrap());
        }
    }
    out
}

/// Regular representation of a product of `F_(p^e)[t]/(t^m)` pieces in a
/// random basis, with the `(dimension, residue degree)` of each piece.
pub fn scrambled_product(f: PrimeField, max_dim: usize, rng: &mut ChaCha8Rng) -> (Vec<FpMatrix>, Vec<(usize, usize)>) {
    let mut pieces = Vec::new();
    let mut total = 0;
    let count = rng.gen_range(1..=4);
    for _ in 0..count {
        let e = rng.gen_range(1..=3);
        let m = rng.gen_range(1..=3);
        if total + e * m > max_dim {
            continue;
        }
        total += e * m;
        pieces.push((random_irreducible(f, e, rng), m));
    }
    if pieces.is_empty() {
        pieces.push((random_irreducible(f, 1, rng), 1));
        total = 1;
    }
    let mut truth = Vec::new();
    let mut basis_mats = Vec::new();
    let mut offset = 0;
    for (g, m) in &pieces {
        let e = g.degree().unwrap();
        truth.push((e * m, e));
        for local in piece_regular(f, g, *m) {
            let mut big = FpMatrix::zeros(f, total, total);
            for i in 0..local.rows() {
                for j in 0..local.cols() {
                    big.set(offset + i, offset + j, local.get(i, j));
                }
            }
            basis_mats.push(big);
        }
        offset += e * m;
    }
    let p = random_invertible(f, total, rng);
    let pinv = p.inverse().unwrap();
    let gens = (0..total)
        .map(|k| {
            let mut m = FpMatrix::zeros(f, total, total);
            for (j, b) in basis_mats.iter().enumerate() {
                m = m.add(&b.scale(p.get(k, j))).unwrap();
            }
            p.mul(&m).unwrap().mul(&pinv).unwrap()
        })
        .collect();
    truth.sort_unstable();
    (gens, truth)
}

pub fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Random instances respecting `|a_l| < 2 l^((k-1)/2)` and the sign
/// conditions attached to each case.
pub fn sample_oldform_block(rng: &mut ChaCha8Rng) -> OldformBlockSpec {
    let ell = [2u64, 3, 5, 7, 11][rng.gen_range(0..5)];
    let k = [2u32, 4, 6][rng.gen_range(0..3)];
    let r = rng.gen_range(0..=5);
    let case = [
        OldformCase::EllCoprimeM,
        OldformCase::EllExactlyDividesMOrEpsUndefinable,
        OldformCase::EllSquaredDividesMEpsDefinable,
    ][rng.gen_range(0..3)];
    let bound = 4 * (ell as i128).pow(k - 1);
    let a = loop {
        let a: i64 = rng.gen_range(-200..=200);
        let ok = match case {
            OldformCase::EllCoprimeM => (a as i128).pow(2) < bound,
            OldformCase::EllExactlyDividesMOrEpsUndefinable => a != 0,
            OldformCase::EllSquaredDividesMEpsDefinable => a == 0,
        };
        if ok {
            break a;
        }
    };
    let a = if rng.gen_bool(0.2) && a != 0 { BigRational::new(BigInt::from(a), BigInt::from(3)) } else { q(a) };
    let eps = if rng.gen_bool(0.5) { q(1) } else { q(-1) };
    let delta = u8::from(case == OldformCase::EllCoprimeM);
    OldformBlockSpec::new(a, eps, ell, k, r, delta, case).unwrap()
}
