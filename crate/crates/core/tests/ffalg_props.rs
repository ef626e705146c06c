use heckestat::ffalg::{factor, FpMatrix, FpPolynomial, PrimeField};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PRIMES: [u64; 4] = [2, 3, 5, 7];

fn random_poly(rng: &mut ChaCha8Rng, field: PrimeField) -> FpPolynomial {
    let p = field.characteristic();
    let deg = rng.gen_range(1..=30);
    let mut coeffs: Vec<u64> = (0..=deg).map(|_| rng.gen_range(0..p)).collect();
    if coeffs[deg] == 0 {
        coeffs[deg] = 1;
    }
    FpPolynomial::new(field, coeffs)
}

/// Irreducible iff x^(p^i) - x shares no factor with f for i <= deg/2.
fn ddf_irreducible(f: &FpPolynomial) -> bool {
    let field = f.field();
    let p = field.characteristic();
    let n = f.degree().unwrap();
    let x = FpPolynomial::x(field);
    let mut h = x.rem(f).unwrap();
    for _ in 1..=n / 2 {
        h = h.pow_mod(p, f);
        if !h.sub(&x).gcd(f).is_one() {
            return false;
        }
    }
    true
}

#[test]
fn factorisations_of_random_polynomials() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xfac7);
    for &p in &PRIMES {
        let field = PrimeField::new(p).unwrap();
        for _ in 0..500 {
            let f = random_poly(&mut rng, field);
            let fl = factor(&f).unwrap();
            assert_eq!(fl.expand(field), f.monic(), "p={p} f={f}");
            for (i, (g, m)) in fl.iter().enumerate() {
                assert!(*m >= 1);
                assert!(g.is_monic());
                assert!(ddf_irreducible(g), "p={p} factor {g} of {f}");
                for (h, _) in fl.iter().skip(i + 1) {
                    assert_ne!(g, h);
                }
            }
        }
    }
}

fn matrix_strategy() -> impl Strategy<Value = FpMatrix> {
    (prop::sample::select(PRIMES.to_vec()), 1usize..9, 1usize..9).prop_flat_map(|(p, r, c)| {
        prop::collection::vec(0..p, r * c)
            .prop_map(move |data| FpMatrix::from_vec(PrimeField::new(p).unwrap(), r, c, data).unwrap())
    })
}

fn square_strategy() -> impl Strategy<Value = FpMatrix> {
    (prop::sample::select(PRIMES.to_vec()), 1usize..10).prop_flat_map(|(p, n)| {
        prop::collection::vec(0..p, n * n)
            .prop_map(move |data| FpMatrix::from_vec(PrimeField::new(p).unwrap(), n, n, data).unwrap())
    })
}

proptest! {
    #[test]
    fn rref_is_idempotent(m in matrix_strategy()) {
        let once = m.rref().matrix;
        prop_assert_eq!(once.rref().matrix, once);
    }

    #[test]
    fn rank_nullity(m in matrix_strategy()) {
        let k = m.kernel_basis();
        prop_assert_eq!(m.rank() + k.rows(), m.cols());
        prop_assert_eq!(k.rank(), k.rows());
        for i in 0..k.rows() {
            prop_assert!(m.mul_vec(k.row(i)).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn cayley_hamilton(m in square_strategy()) {
        let cp = m.char_poly().unwrap();
        prop_assert!(cp.is_monic());
        prop_assert_eq!(cp.degree(), Some(m.rows()));
        prop_assert!(m.eval_poly(&cp).unwrap().is_zero());
        let mp = m.min_poly().unwrap();
        prop_assert!(m.eval_poly(&mp).unwrap().is_zero());
        prop_assert!(cp.rem(&mp).unwrap().is_zero());
        // no proper monic divisor of the min poly of smaller degree annihilates m
        for (g, _) in factor(&mp).unwrap().iter() {
            let smaller = mp.div_exact(g).unwrap();
            prop_assert!(!m.eval_poly(&smaller).unwrap().is_zero());
        }
    }
}
