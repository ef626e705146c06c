use super::{hecke_sequence, Pipeline, ResidualHeckeAlgebra};
use crate::arith::primes_between;
use crate::error::{Error, Result};
use crate::ffalg::Echelon;
use crate::ffalg::FpMatrix;
use crate::modsym::{hecke_operators, CuspBasis, CuspidalSubspace};

/// Image of the Hecke algebra in the endomorphisms of mod-p cuspidal
/// modular symbols, generated by `T_l` for primes `l <= b`.
///
/// An algebra element `t` is represented by `(v_1 t, ..., v_m t)` for module
/// generators `v_i` of the symbol space; this is faithful because the algebra
/// is commutative. The span is grown from `1` by multiplying basis elements
/// with the generators until it closes.
pub fn build_residual_direct(cusp: &CuspidalSubspace, b: u64) -> Result<ResidualHeckeAlgebra> {
    let CuspBasis::Modular(basis) = cusp.basis() else {
        return Err(Error::Inconsistent("direct construction needs a mod-p space".into()));
    };
    let f = basis.field();
    let space = cusp.space();
    let (level, weight) = (space.level(), space.weight());
    let dim = cusp.dimension();
    let primes = primes_between(2, b);
    let ops: Vec<FpMatrix> = hecke_operators(cusp, &primes)?
        .into_iter()
        .map(|op| op.matrix.as_modular().cloned().expect("modular"))
        .collect();

    let gens = crate::localdec::module_generators(f, dim, &ops);
    let apply = |image: &[u64], t: &FpMatrix| -> Vec<u64> {
        image.chunks(dim.max(1)).flat_map(|block| t.vec_mul(block)).collect()
    };

    // spin the algebra from the identity
    let mut echelon = Echelon::new(f);
    let identity: Vec<u64> = gens.concat();
    let mut images: Vec<Vec<u64>> = Vec::new();
    let mut parents: Vec<(usize, usize)> = Vec::new();
    let mut rows: Vec<Vec<Vec<u64>>> = vec![Vec::new(); ops.len()];
    if dim > 0 {
        echelon.locate_or_insert(&identity).expect_err("identity is nonzero");
        images.push(identity);
        parents.push((0, usize::MAX));
    }
    let mut j = 0;
    while j < images.len() {
        for (g, t) in ops.iter().enumerate() {
            let cand = apply(&images[j], t);
            let coords = match echelon.locate_or_insert(&cand) {
                Ok(c) => c,
                Err(idx) => {
                    images.push(cand);
                    parents.push((j, g));
                    let mut c = vec![0u64; idx + 1];
                    c[idx] = 1;
                    c
                }
            };
            rows[g].push(coords);
        }
        j += 1;
    }
    let d = images.len();
    let pad = |mut v: Vec<u64>| {
        v.resize(d, 0);
        v
    };
    let mult: Vec<FpMatrix> = rows
        .into_iter()
        .map(|r| FpMatrix::from_vec(f, d, d, r.into_iter().flat_map(pad).collect()))
        .collect::<Result<_>>()?;

    // S_a = R(e_a) with R(e_j) = R(e_parent) R(T_l)
    let mut structure = Vec::with_capacity(d * d * d);
    let mut regs: Vec<FpMatrix> = Vec::with_capacity(d);
    for &(parent, g) in &parents {
        let r = if g == usize::MAX { FpMatrix::identity(f, d) } else { regs[parent].mul(&mult[g])? };
        structure.extend_from_slice(r.data());
        regs.push(r);
    }

    let mut one = vec![0u64; d];
    if d > 0 {
        one[0] = 1;
    }
    let index_of = |l: u64| primes.iter().position(|&q| q == l).expect("prime generator");
    let generator_coords = hecke_sequence(
        b,
        level,
        one,
        |x, l| Ok(mult[index_of(l)].vec_mul(x)),
        |x, l, older| {
            let c = f.pow(l % f.characteristic(), weight as u64 - 1);
            Ok(x.iter().zip(older).map(|(&a, &o)| f.sub(a, f.mul(c, o))).collect())
        },
    )?;

    Ok(ResidualHeckeAlgebra {
        field: f,
        level,
        weight,
        dimension: d,
        structure,
        generator_coords,
        pipeline: Pipeline::B,
    })
}
