use heckestat::exactint::{hnf, lattice_coordinates, IntegerMatrix};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

/// Textbook HNF by gcd row operations, with no modular tricks.
fn naive_hnf(m: &IntegerMatrix) -> IntegerMatrix {
    let mut rows = m.row_vecs();
    let cols = m.cols();
    let mut out: Vec<Vec<BigInt>> = Vec::new();
    let mut pivots = Vec::new();
    for c in 0..cols {
        let mut piv: Option<Vec<BigInt>> = None;
        let mut rest = Vec::new();
        for mut row in rows.drain(..) {
            if row[c].is_zero() {
                rest.push(row);
                continue;
            }
            match piv.take() {
                None => piv = Some(row),
                Some(mut p) => {
                    let e = p[c].extended_gcd(&row[c]);
                    let (a, b) = (&p[c] / &e.gcd, &row[c] / &e.gcd);
                    let new_p: Vec<BigInt> = p.iter().zip(&row).map(|(x, y)| &e.x * x + &e.y * y).collect();
                    let new_r: Vec<BigInt> = p.iter().zip(&row).map(|(x, y)| &a * y - &b * x).collect();
                    p = new_p;
                    row = new_r;
                    rest.push(row);
                    piv = Some(p);
                }
            }
        }
        rows = rest;
        if let Some(mut p) = piv {
            if p[c].is_negative() {
                p.iter_mut().for_each(|x| *x = -x.clone());
            }
            for prev in out.iter_mut() {
                let q = prev[c].div_floor(&p[c]);
                for (x, y) in prev.iter_mut().zip(&p) {
                    *x -= &q * y;
                }
            }
            out.push(p);
            pivots.push(c);
        }
    }
    IntegerMatrix::from_rows(cols, out).unwrap()
}

fn matrix() -> impl Strategy<Value = IntegerMatrix> {
    (1usize..7, 1usize..6).prop_flat_map(|(r, c)| {
        prop::collection::vec(-20i64..=20, r * c)
            .prop_map(move |v| IntegerMatrix::from_vec(r, c, v.into_iter().map(BigInt::from).collect()).unwrap())
    })
}

/// A matrix together with a sequence of elementary row operations.
fn with_ops() -> impl Strategy<Value = (IntegerMatrix, Vec<(usize, usize, i64, bool)>)> {
    matrix().prop_flat_map(|m| {
        let r = m.rows();
        let ops = prop::collection::vec((0..r, 0..r, -5i64..=5, any::<bool>()), 0..12);
        (Just(m), ops)
    })
}

proptest! {
    #[test]
    fn hnf_matches_naive(m in matrix()) {
        let (h, rank) = hnf(&m);
        prop_assert_eq!(&h, &naive_hnf(&m));
        prop_assert_eq!(rank, h.rows());
    }

    #[test]
    fn hnf_unimodular_invariance((m, ops) in with_ops()) {
        let mut rows = m.row_vecs();
        for (i, j, k, swap) in ops {
            if swap {
                rows.swap(i, j);
            } else if i != j {
                let add: Vec<BigInt> = rows[j].iter().map(|x| x * k).collect();
                for (x, y) in rows[i].iter_mut().zip(add) {
                    *x += y;
                }
            } else {
                rows[i].iter_mut().for_each(|x| *x = -x.clone());
            }
        }
        let u = IntegerMatrix::from_rows(m.cols(), rows).unwrap();
        prop_assert_eq!(hnf(&m), hnf(&u));
    }

    #[test]
    fn coordinates_roundtrip(m in matrix(), seed in prop::collection::vec(-9i64..=9, 8)) {
        let (h, r) = hnf(&m);
        let coeffs: Vec<BigInt> = (0..r).map(|i| BigInt::from(seed[i % seed.len()])).collect();
        let v = h.vec_mul(&coeffs);
        prop_assert_eq!(lattice_coordinates(&h, &v).unwrap(), coeffs);
    }
}

#[test]
fn wide_random_lattices() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let rank = rng.gen_range(1..8);
        let rows = rank + rng.gen_range(0..6);
        let cols = rank + rng.gen_range(0..6);
        let a = IntegerMatrix::from_vec(
            rows,
            rank,
            (0..rows * rank).map(|_| BigInt::from(rng.gen_range(-50i64..50))).collect(),
        )
        .unwrap();
        let b = IntegerMatrix::from_vec(
            rank,
            cols,
            (0..rank * cols).map(|_| BigInt::from(rng.gen_range(-50i64..50))).collect(),
        )
        .unwrap();
        let m = a.mul(&b).unwrap();
        assert_eq!(hnf(&m).0, naive_hnf(&m));
    }
}
