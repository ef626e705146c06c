mod common;

use common::{random_invertible, scrambled_product};
use heckestat::ffalg::PrimeField;
use heckestat::localdec::{decompose, is_semisimple, residue_degree_sum};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn sorted(mut v: Vec<(usize, usize)>) -> Vec<(usize, usize)> {
    v.sort_unstable();
    v
}

#[test]
fn recovers_scrambled_products() {
    for p in [2u64, 3, 5] {
        let f = PrimeField::new(p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(p);
        for _ in 0..100 {
            let (gens, truth) = scrambled_product(f, 14, &mut rng);
            let d = decompose(&gens).unwrap();
            assert_eq!(sorted(d.signature()), truth);
            let a = residue_degree_sum(&d);
            assert!(a <= d.ambient_dimension);
            assert_eq!(is_semisimple(&d), a == d.ambient_dimension);
            for factor in &d.factors {
                assert!(factor.residue_degree <= factor.dimension);
                for g in &factor.irreducibles {
                    assert!(g.is_irreducible());
                    assert_eq!(factor.residue_degree % g.degree().unwrap(), 0);
                }
            }
        }
    }
}

#[test]
fn fields_have_full_residue_degree() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for p in [2u64, 3, 5, 7] {
        let f = PrimeField::new(p).unwrap();
        for n in 1..8 {
            let g = common::random_irreducible(f, n, &mut rng);
            let d = decompose(&[heckestat::ffalg::FpMatrix::companion(&g)]).unwrap();
            assert_eq!(d.signature(), vec![(n, n)]);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn basis_and_order_invariance(seed in any::<u64>(), pi in 0usize..3) {
        let f = PrimeField::new([2, 3, 5][pi]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (gens, truth) = scrambled_product(f, 10, &mut rng);
        let n = gens[0].rows();
        let q = random_invertible(f, n, &mut rng);
        let qinv = q.inverse().unwrap();
        let mut conj: Vec<_> = gens.iter().map(|g| q.mul(g).unwrap().mul(&qinv).unwrap()).collect();
        conj.shuffle(&mut rng);
        let before = sorted(decompose(&gens).unwrap().signature());
        let after = sorted(decompose(&conj).unwrap().signature());
        prop_assert_eq!(&before, &truth);
        prop_assert_eq!(after, truth);
    }
}
