//! Splitting a commutative finite-dimensional algebra over `F_p` into local
//! factors and reading off their residue degrees.

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::ffalg::{factor, Echelon, FpMatrix, FpPolynomial, PrimeField};

const COMMUTE_PROBES: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalFactor {
    pub dimension: usize,
    pub residue_degree: usize,
    /// Rows span the factor inside the ambient space (reduced echelon form).
    pub basis: FpMatrix,
    /// Irreducible polynomial of each generator on this factor.
    pub irreducibles: Vec<FpPolynomial>,
}

impl LocalFactor {
    pub fn is_field(&self) -> bool {
        self.residue_degree == self.dimension
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub factors: Vec<LocalFactor>,
    pub ambient_dimension: usize,
}

impl Decomposition {
    /// `(dimension, residue degree)` of every factor, in canonical order.
    pub fn signature(&self) -> Vec<(usize, usize)> {
        self.factors.iter().map(|f| (f.dimension, f.residue_degree)).collect()
    }

    /// Residue degrees sorted ascending.
    pub fn residue_degrees(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.factors.iter().map(|f| f.residue_degree).collect();
        v.sort_unstable();
        v
    }

    /// Factor dimensions sorted ascending.
    pub fn local_dimensions(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.factors.iter().map(|f| f.dimension).collect();
        v.sort_unstable();
        v
    }
}

/// Sum of the residue degrees over all local factors.
pub fn residue_degree_sum(d: &Decomposition) -> usize {
    d.factors.iter().map(|f| f.residue_degree).sum()
}

/// Whether the algebra is a product of fields.
pub fn is_semisimple(d: &Decomposition) -> bool {
    d.factors.iter().all(LocalFactor::is_field)
}

/// An invariant subspace together with the generators restricted to it.
struct Piece {
    basis: FpMatrix,
    ops: Vec<FpMatrix>,
}

/// Decompose `F_p^n` under commuting generators (acting on row vectors) into
/// the pieces belonging to the maximal ideals of the algebra they generate.
///
/// Pieces are split along the primary decomposition of each generator's
/// characteristic polynomial. A piece where every generator has a single
/// irreducible factor but the residue degree exceeds 1 can still hold
/// several maximal ideals with conjugate eigenvalues; those are separated
/// with an element fixed by Frobenius.
pub fn decompose(generators: &[FpMatrix]) -> Result<Decomposition> {
    let Some(first) = generators.first() else {
        return Ok(Decomposition { factors: Vec::new(), ambient_dimension: 0 });
    };
    let f = first.field();
    let n = first.rows();
    for g in generators {
        if !g.is_square() {
            return Err(Error::NotSquare { rows: g.rows(), cols: g.cols() });
        }
        if g.rows() != n {
            return Err(Error::DimensionMismatch(format!("generator of size {} vs {n}", g.rows())));
        }
        if g.field() != f {
            return Err(Error::FieldMismatch { left: f.characteristic(), right: g.field().characteristic() });
        }
    }
    check_commuting(generators)?;

    let mut work = VecDeque::from([Piece { basis: FpMatrix::identity(f, n), ops: generators.to_vec() }]);
    let mut factors = Vec::new();
    while let Some(piece) = work.pop_front() {
        if piece.basis.rows() == 0 {
            continue;
        }
        let mut parts = None;
        for op in &piece.ops {
            parts = split_by(&piece, op)?;
            if parts.is_some() {
                break;
            }
        }
        let mut irreducibles = Vec::new();
        if parts.is_none() {
            irreducibles = piece.ops.iter().map(single_irreducible).collect::<Result<_>>()?;
            let degree = residue_degree(&irreducibles);
            if degree > 1 {
                parts = frobenius_split(&piece)?;
            }
        }
        match parts {
            Some(p) => work.extend(p),
            None => {
                let residue_degree = residue_degree(&irreducibles);
                let basis = canonical_rows(&piece.basis);
                factors.push(LocalFactor { dimension: basis.rows(), residue_degree, basis, irreducibles });
            }
        }
    }
    factors.sort_by(|a, b| {
        (a.dimension, a.residue_degree)
            .cmp(&(b.dimension, b.residue_degree))
            .then_with(|| a.basis.data().cmp(b.basis.data()))
    });

    let total: usize = factors.iter().map(|x| x.dimension).sum();
    let stacked: Vec<Vec<u64>> =
        factors.iter().flat_map(|x| (0..x.dimension).map(move |i| x.basis.row(i).to_vec())).collect();
    if total != n || FpMatrix::from_rows_slice(f, n, &stacked).rank() != n {
        return Err(Error::Inconsistent("local factors do not partition the space".into()));
    }
    Ok(Decomposition { factors, ambient_dimension: n })
}

fn residue_degree(irreducibles: &[FpPolynomial]) -> usize {
    irreducibles.iter().map(|g| g.degree().unwrap_or(0).max(1)).fold(1, num_integer::lcm)
}

fn single_irreducible(op: &FpMatrix) -> Result<FpPolynomial> {
    let fl = factor(&op.char_poly()?)?;
    Ok(fl.factors.into_iter().next().map_or_else(|| FpPolynomial::one(op.field()), |(g, _)| g))
}

fn check_commuting(gens: &[FpMatrix]) -> Result<()> {
    let f = gens[0].field();
    let n = gens[0].rows();
    let mut rng = ChaCha8Rng::seed_from_u64(0xc0_77e);
    if n == 0 {
        return Ok(());
    }
    for _ in 0..COMMUTE_PROBES {
        let u: Vec<u64> = (0..n).map(|_| rng.gen_range(0..f.characteristic())).collect();
        let images: Vec<Vec<u64>> = gens.iter().map(|g| g.vec_mul(&u)).collect();
        for (i, a) in gens.iter().enumerate() {
            for (j, b) in gens.iter().enumerate().skip(i + 1) {
                if b.vec_mul(&images[i]) != a.vec_mul(&images[j]) {
                    return Err(Error::NonCommuting);
                }
            }
        }
    }
    Ok(())
}

/// Primary pieces of `piece` under `a`, or `None` if `a` has a single
/// irreducible factor there.
fn split_by(piece: &Piece, a: &FpMatrix) -> Result<Option<Vec<Piece>>> {
    let fl = factor(&a.char_poly()?)?;
    if fl.len() <= 1 {
        return Ok(None);
    }
    let mut parts = Vec::with_capacity(fl.len());
    for (g, m) in fl.iter() {
        let k = a.eval_poly(g)?.pow(*m as u64)?;
        let (kernel, keys) = left_kernel_with_keys(&k);
        let basis = kernel.mul(&piece.basis)?;
        let ops = piece.ops.iter().map(|op| restrict(&kernel, &keys, op)).collect::<Result<Vec<_>>>()?;
        parts.push(Piece { basis, ops });
    }
    Ok(Some(parts))
}

/// Rows spanning `{x : x M = 0}`; row `i` has a 1 in column `keys[i]` and 0
/// in the other key columns.
fn left_kernel_with_keys(m: &FpMatrix) -> (FpMatrix, Vec<usize>) {
    let t = m.transpose();
    let pivots = t.rref().pivots;
    let keys = (0..t.cols()).filter(|c| !pivots.contains(c)).collect();
    (t.kernel_basis(), keys)
}

/// Matrix of `op` on the invariant subspace spanned by `kernel`.
fn restrict(kernel: &FpMatrix, keys: &[usize], op: &FpMatrix) -> Result<FpMatrix> {
    let image = kernel.mul(op)?;
    let f = op.field();
    let d = keys.len();
    let data = (0..d).flat_map(|i| keys.iter().map(move |&c| (i, c))).map(|(i, c)| image.get(i, c)).collect();
    FpMatrix::from_vec(f, d, d, data)
}

fn canonical_rows(m: &FpMatrix) -> FpMatrix {
    let r = m.rref();
    r.matrix.select_rows(&(0..r.rank).collect::<Vec<_>>())
}

/// Split a piece whose generators each have one irreducible factor but which
/// still contains several maximal ideals, using an element `x` of the
/// generated algebra with `x^p = x` that is not a scalar.
fn frobenius_split(piece: &Piece) -> Result<Option<Vec<Piece>>> {
    let f = piece.ops[0].field();
    let m = piece.basis.rows();
    let (elements, echelon) = spin_algebra(f, m, &piece.ops)?;
    let dim = elements.len();
    if dim <= 1 {
        return Ok(None);
    }
    let p = f.characteristic();
    let mut phi = Vec::with_capacity(dim * dim);
    for e in &elements {
        let image = faithful_image(&e.pow(p)?, &echelon.1);
        let coords = echelon
            .0
            .coordinates(&image)
            .ok_or_else(|| Error::Inconsistent("Frobenius image outside the generated algebra".into()))?;
        phi.extend(coords);
    }
    let phi = FpMatrix::from_vec(f, dim, dim, phi)?.sub(&FpMatrix::identity(f, dim))?;
    let fixed = phi.left_kernel_basis();
    let Some(row) = (0..fixed.rows()).find(|&i| fixed.row(i)[1..].iter().any(|&x| x != 0)) else {
        return Ok(None);
    };
    let mut x = FpMatrix::zeros(f, m, m);
    for (c, e) in fixed.row(row).iter().zip(&elements) {
        if *c != 0 {
            x = x.add(&e.scale(*c))?;
        }
    }
    match split_by(piece, &x)? {
        Some(parts) => Ok(Some(parts)),
        None => Err(Error::Inconsistent("idempotent-type element failed to split".into())),
    }
}

/// A basis of the algebra generated by `ops` (starting from the identity),
/// with an echelon form of its faithful images.
#[allow(clippy::type_complexity)]
fn spin_algebra(f: PrimeField, m: usize, ops: &[FpMatrix]) -> Result<(Vec<FpMatrix>, (Echelon, Vec<Vec<u64>>))> {
    let gens = module_generators(f, m, ops);
    let mut echelon = Echelon::new(f);
    let one = FpMatrix::identity(f, m);
    let _ = echelon.locate_or_insert(&faithful_image(&one, &gens));
    let mut elements = vec![one];
    let mut j = 0;
    while j < elements.len() {
        for op in ops {
            let cand = elements[j].mul(op)?;
            if echelon.locate_or_insert(&faithful_image(&cand, &gens)).is_err() {
                elements.push(cand);
            }
        }
        j += 1;
    }
    Ok((elements, (echelon, gens)))
}

fn faithful_image(x: &FpMatrix, gens: &[Vec<u64>]) -> Vec<u64> {
    gens.iter().flat_map(|v| x.vec_mul(v)).collect()
}

/// Standard basis vectors whose cyclic submodules span `F_p^m`.
pub(crate) fn module_generators(f: PrimeField, m: usize, ops: &[FpMatrix]) -> Vec<Vec<u64>> {
    let mut span = Echelon::new(f);
    let mut gens = Vec::new();
    for i in 0..m {
        if span.len() == m {
            break;
        }
        let mut e = vec![0u64; m];
        e[i] = 1;
        if span.coordinates(&e).is_some() {
            continue;
        }
        gens.push(e.clone());
        let mut queue = vec![e];
        while let Some(v) = queue.pop() {
            if span.locate_or_insert(&v).is_ok() {
                continue;
            }
            queue.extend(ops.iter().map(|t| t.vec_mul(&v)));
        }
    }
    gens
}
