//! The Hecke algebra as a lattice of operators, its reductions modulo p, and
//! a direct mod-p construction.

mod direct;
mod integral;

pub use direct::build_residual_direct;
pub use integral::{build_integral, is_semisimple_char0, IntegralHeckeAlgebra};

use serde::{Deserialize, Serialize};

use crate::arith::{factorize, primes_between};
use crate::error::{Error, Result};
use crate::ffalg::{FpMatrix, PrimeField};

/// Which construction produced a residual algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pipeline {
    /// Reduction of the integral Hecke algebra.
    A,
    /// Subalgebra of the endomorphisms of mod-p modular symbols.
    B,
}

impl std::fmt::Display for Pipeline {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::A => "A",
            Self::B => "B",
        })
    }
}

/// A commutative unital algebra over `F_p` given by structure constants, with
/// the images of `T_1..T_B`.
///
/// `structure[(a * d + b) * d + c]` is the coefficient of `e_c` in
/// `e_b * e_a`; so `S_a` (the `d x d` block at `a`) is the matrix of
/// multiplication by `e_a` acting on row vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidualHeckeAlgebra {
    pub field: PrimeField,
    pub level: u64,
    pub weight: u32,
    pub dimension: usize,
    pub structure: Vec<u64>,
    /// Row `n - 1` holds the coordinates of `T_n`.
    pub generator_coords: Vec<Vec<u64>>,
    pub pipeline: Pipeline,
}

impl ResidualHeckeAlgebra {
    pub fn sturm(&self) -> u64 {
        self.generator_coords.len() as u64
    }

    /// Matrix of multiplication by the element with coordinates `x`.
    pub fn multiplication_matrix(&self, x: &[u64]) -> FpMatrix {
        let f = self.field;
        let d = self.dimension;
        let mut data = vec![0u64; d * d];
        for (a, &xa) in x.iter().enumerate() {
            if xa == 0 {
                continue;
            }
            let block = &self.structure[a * d * d..(a + 1) * d * d];
            for (o, &s) in data.iter_mut().zip(block) {
                *o = f.add(*o, f.mul(xa, s));
            }
        }
        FpMatrix::from_vec(f, d, d, data).expect("square")
    }

    /// Product of two elements in coordinates.
    pub fn multiply(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        self.multiplication_matrix(y).vec_mul(x)
    }
}

/// Multiplication matrices of `T_1` and of `T_l` for the primes `l <= B`.
/// These generate the algebra, since every `T_n` is a polynomial in them.
pub fn regular_representation(alg: &ResidualHeckeAlgebra) -> Vec<FpMatrix> {
    std::iter::once(1)
        .chain(primes_between(2, alg.sturm()))
        .map(|l| alg.multiplication_matrix(&alg.generator_coords[l as usize - 1]))
        .collect()
}

/// Reduce the integral algebra modulo `p`.
pub fn reduce_mod_p(alg: &IntegralHeckeAlgebra, p: u64) -> Result<ResidualHeckeAlgebra> {
    let f = PrimeField::new(p)?;
    Ok(ResidualHeckeAlgebra {
        field: f,
        level: alg.level(),
        weight: alg.weight(),
        dimension: alg.rank(),
        structure: alg.structure().iter().map(|x| f.from_bigint(x)).collect(),
        generator_coords: (1..=alg.sturm())
            .map(|n| alg.generator_coordinates(n).iter().map(|x| f.from_bigint(x)).collect())
            .collect(),
        pipeline: Pipeline::A,
    })
}

/// Runs `x_n = x_(n/l) T_l - [l does not divide N] l^(k-1) x_(n/l^2)` for
/// `n = 1..=b`, where `l` is the smallest prime factor of `n` and the second
/// term is present only when `l^2 | n`. `step(x, l)` applies `T_l` and
/// `correct(x, l, older)` subtracts the scaled older term.
pub(crate) fn hecke_sequence<V>(
    b: u64,
    level: u64,
    x1: V,
    mut step: impl FnMut(&V, u64) -> Result<V>,
    mut correct: impl FnMut(V, u64, &V) -> Result<V>,
) -> Result<Vec<V>> {
    let mut out: Vec<V> = Vec::with_capacity(b as usize);
    if b == 0 {
        return Ok(out);
    }
    out.push(x1);
    for n in 2..=b {
        let (l, r) = factorize(n)[0];
        let mut x = step(&out[(n / l - 1) as usize], l)?;
        if r >= 2 && level % l != 0 {
            x = correct(x, l, &out[(n / (l * l) - 1) as usize])?;
        }
        out.push(x);
    }
    Ok(out)
}

/// `l^(k-1)`, failing on overflow.
pub(crate) fn hecke_scale(l: u64, k: u32) -> Result<u64> {
    l.checked_pow(k - 1).ok_or(Error::Overflow("l^(k-1)"))
}
