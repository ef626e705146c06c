use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{hecke_scale, hecke_sequence};
use crate::arith::{factorize, is_prime, primes_between};
use crate::error::{Error, Result};
use crate::exactint::crt::{crt_primes, CrtVector};
use crate::exactint::{fp_determinant, hnf, lattice_coordinates, pivot_columns, IntegerMatrix};
use crate::ffalg::{FpMatrix, PrimeField};
use crate::modsym::{dim_oracle, CuspBasis, CuspidalSubspace, IntOperator};

const PROBE_ATTEMPTS: u64 = 5;
const MAX_CRT_PRIMES: usize = 4000;

/// The Hecke algebra `T = Z[T_1, ..., T_B]` as a lattice with integral
/// structure constants.
///
/// The lattice is realised through a probe vector `v` in the cuspidal
/// subspace: `T -> v T` is injective for generic `v`, so the rows of
/// [`Self::basis`] (an HNF basis of the span of the `v T_n`) give a `Z`-basis
/// `e_1..e_d` of `T`. `structure()[(a * d + b) * d + c]` is the coefficient
/// of `e_c` in `e_b e_a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralHeckeAlgebra {
    level: u64,
    weight: u32,
    rank: usize,
    basis: IntegerMatrix,
    coords: Vec<Vec<BigInt>>,
    structure: Vec<BigInt>,
}

impl IntegralHeckeAlgebra {
    /// An algebra given directly by structure constants and the coordinates
    /// of `T_1..T_B`; checks commutativity and that `T_1` is the identity.
    pub fn from_structure(
        level: u64,
        weight: u32,
        rank: usize,
        structure: Vec<BigInt>,
        coords: Vec<Vec<BigInt>>,
    ) -> Result<Self> {
        if structure.len() != rank * rank * rank || coords.iter().any(|c| c.len() != rank) {
            return Err(Error::DimensionMismatch("structure constants do not match the rank".into()));
        }
        let alg = Self { level, weight, rank, basis: IntegerMatrix::zeros(rank, 0), coords, structure };
        alg.check_commutative()?;
        if let Some(one) = alg.coords.first() {
            if alg.multiplication_matrix(one) != IntegerMatrix::identity(rank) {
                return Err(Error::Inconsistent("T_1 is not the identity".into()));
            }
        }
        Ok(alg)
    }

    pub fn level(&self) -> u64 {
        self.level
    }
    pub fn weight(&self) -> u32 {
        self.weight
    }
    pub fn rank(&self) -> usize {
        self.rank
    }
    pub fn sturm(&self) -> u64 {
        self.coords.len() as u64
    }
    /// HNF rows of the probe embedding.
    pub fn basis(&self) -> &IntegerMatrix {
        &self.basis
    }
    pub fn structure(&self) -> &[BigInt] {
        &self.structure
    }
    pub fn structure_constant(&self, a: usize, b: usize, c: usize) -> &BigInt {
        &self.structure[(a * self.rank + b) * self.rank + c]
    }
    /// Coordinates of `T_n`, `1 <= n <= B`.
    pub fn generator_coordinates(&self, n: u64) -> &[BigInt] {
        &self.coords[n as usize - 1]
    }

    /// Matrix of multiplication by the element with coordinates `x`, acting
    /// on row vectors.
    pub fn multiplication_matrix(&self, x: &[BigInt]) -> IntegerMatrix {
        let d = self.rank;
        let mut data = vec![BigInt::zero(); d * d];
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (o, s) in data.iter_mut().zip(&self.structure[a * d * d..(a + 1) * d * d]) {
                if !s.is_zero() {
                    *o += xa * s;
                }
            }
        }
        IntegerMatrix::from_vec(d, d, data).expect("square")
    }

    /// Gram matrix of the trace form `(a, b) -> Tr(e_a e_b)`.
    pub fn trace_form(&self) -> IntegerMatrix {
        let d = self.rank;
        let traces: Vec<BigInt> = (0..d).map(|c| (0..d).map(|i| self.structure_constant(c, i, i)).sum()).collect();
        let mut g = IntegerMatrix::zeros(d, d);
        for a in 0..d {
            for b in a..d {
                let x: BigInt = (0..d).map(|c| self.structure_constant(a, b, c) * &traces[c]).sum();
                g.set(b, a, x.clone());
                g.set(a, b, x);
            }
        }
        g
    }

    /// Whether `T tensor Q` is semisimple, i.e. the trace form is
    /// nondegenerate.
    pub fn is_semisimple_char0(&self) -> Result<bool> {
        if self.rank == 0 {
            return Ok(true);
        }
        let g = self.trace_form();
        for f in crt_primes(&BigInt::zero()).take(3) {
            if fp_determinant(&g.reduce(f)) != 0 {
                return Ok(true);
            }
        }
        Ok(!g.determinant()?.is_zero())
    }

    fn check_commutative(&self) -> Result<()> {
        let d = self.rank;
        for a in 0..d {
            for b in a + 1..d {
                for c in 0..d {
                    if self.structure_constant(a, b, c) != self.structure_constant(b, a, c) {
                        return Err(Error::NonCommuting);
                    }
                }
            }
        }
        Ok(())
    }
}

/// Whether the algebra tensored with `Q` is a product of fields.
pub fn is_semisimple_char0(alg: &IntegralHeckeAlgebra) -> Result<bool> {
    alg.is_semisimple_char0()
}

/// Build the integral Hecke algebra on a rational cuspidal subspace from
/// `T_1..T_b`.
pub fn build_integral(cusp: &CuspidalSubspace, b: u64) -> Result<IntegralHeckeAlgebra> {
    let CuspBasis::Rational(cusp_basis) = cusp.basis() else {
        return Err(Error::Inconsistent("integral algebra needs a rational space".into()));
    };
    let space = cusp.space();
    let (level, weight) = (space.level(), space.weight());
    let expected = if is_prime(level) { dim_oracle(level, weight)? as usize } else { cusp.dimension() / 2 };
    if cusp.dimension() != 2 * expected {
        return Err(Error::RankMismatch { computed: cusp.dimension(), expected: 2 * expected });
    }
    if expected == 0 {
        return Ok(IntegralHeckeAlgebra {
            level,
            weight,
            rank: 0,
            basis: IntegerMatrix::zeros(0, space.dimension()),
            coords: vec![Vec::new(); b as usize],
            structure: Vec::new(),
        });
    }
    let primes = primes_between(2, b);
    let ops: Vec<IntOperator> = primes.iter().map(|&l| space.hecke_prime_rational(l)).collect::<Result<_>>()?;
    let ctx = Context { level, weight, b, delta: space.denominator(), primes, ops };

    let mut computed = 0;
    for attempt in 0..PROBE_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(level ^ ((weight as u64) << 32) ^ (attempt << 48));
        let v = probe_vector(cusp_basis.rows(), |i| cusp_basis.row(i), &mut rng)?;
        let images = ctx.probe_images(&v)?;
        let q = space.dimension();
        let rows: Vec<Vec<BigInt>> = images.iter().map(|x| x.iter().map(|&y| BigInt::from(y)).collect()).collect();
        let (h, r) = hnf(&IntegerMatrix::from_rows(q, rows.clone())?);
        if r == expected {
            return ctx.finish(h, &rows);
        }
        if r > expected {
            return Err(Error::RankMismatch { computed: r, expected });
        }
        computed = r;
        log::debug!("probe vector {attempt} at N = {level} gave rank {r} < {expected}");
    }
    Err(Error::RankMismatch { computed, expected })
}

/// A random small combination of the given rational rows, scaled to a
/// primitive integer vector.
fn probe_vector<'a>(count: usize, row: impl Fn(usize) -> &'a [BigRational], rng: &mut ChaCha8Rng) -> Result<Vec<i128>> {
    let len = row(0).len();
    let mut v = vec![BigRational::zero(); len];
    for i in 0..count {
        let mut c = 0i64;
        while c == 0 {
            c = rng.gen_range(-3..=3);
        }
        let c = BigRational::from_integer(BigInt::from(c));
        for (x, y) in v.iter_mut().zip(row(i)) {
            if !y.is_zero() {
                *x += &c * y;
            }
        }
    }
    let den = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&den / x.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    ints.iter().map(|x| (x / &g).to_i128().ok_or(Error::Overflow("probe vector"))).collect()
}

struct Context {
    level: u64,
    weight: u32,
    b: u64,
    delta: i64,
    primes: Vec<u64>,
    ops: Vec<IntOperator>,
}

fn omega(n: u64) -> u32 {
    factorize(n).iter().map(|&(_, e)| e).sum()
}

impl Context {
    fn op(&self, l: u64) -> &IntOperator {
        &self.ops[self.primes.iter().position(|&q| q == l).expect("prime below the bound")]
    }

    /// `delta^(w_max) v T_n` for `n = 1..=b`, where `T_l` is stored as
    /// integer numerators over `delta` and `w_max` is the largest number of
    /// prime factors of any `n <= b`.
    fn probe_images(&self, v: &[i128]) -> Result<Vec<Vec<i128>>> {
        let overflow = || Error::Overflow("probe images");
        let d2 = (self.delta as i128).checked_mul(self.delta as i128).ok_or_else(overflow)?;
        let scaled = hecke_sequence(
            self.b,
            self.level,
            v.to_vec(),
            |x, l| {
                let t = self.op(l);
                let mut out = vec![0i128; t.dim];
                for (i, &xi) in x.iter().enumerate() {
                    if xi == 0 {
                        continue;
                    }
                    for (o, &y) in out.iter_mut().zip(t.row(i)) {
                        if y != 0 {
                            *o = xi.checked_mul(y as i128).and_then(|p| o.checked_add(p)).ok_or_else(overflow)?;
                        }
                    }
                }
                Ok(out)
            },
            |x, l, older| {
                let c = (hecke_scale(l, self.weight)? as i128).checked_mul(d2).ok_or_else(overflow)?;
                x.iter()
                    .zip(older)
                    .map(|(&a, &o)| c.checked_mul(o).and_then(|p| a.checked_sub(p)).ok_or_else(overflow))
                    .collect()
            },
        )?;
        let wmax = (1..=self.b).map(omega).max().unwrap_or(0);
        scaled
            .into_iter()
            .enumerate()
            .map(|(i, x)| {
                let s = (self.delta as i128).checked_pow(wmax - omega(i as u64 + 1)).ok_or_else(overflow)?;
                x.into_iter().map(|y| y.checked_mul(s).ok_or_else(overflow)).collect()
            })
            .collect()
    }

    /// Structure constants by CRT from the regular representations of the
    /// prime operators modulo word-sized primes.
    fn finish(&self, h: IntegerMatrix, images: &[Vec<BigInt>]) -> Result<IntegralHeckeAlgebra> {
        let d = h.rows();
        let coords: Vec<Vec<BigInt>> = images.iter().map(|x| lattice_coordinates(&h, x)).collect::<Result<_>>()?;
        let cols = pivot_columns(&h);
        // numerators of T_l restricted to the pivot columns
        let op_cols: Vec<Vec<i64>> = self
            .ops
            .iter()
            .map(|t| (0..t.dim).flat_map(|i| cols.iter().map(move |&c| t.row(i)[c])).collect())
            .collect();
        let key = self.key_indices(&coords, d)?;
        let need = key.iter().max().map_or(1, |&i| i as u64 + 1);

        // the algebra is commutative, so only the blocks S_a rows b >= a are
        // solved for; the randomised check below covers the mirrored rows
        let mut crt = CrtVector::new(d * d * (d + 1) / 2);
        let mut stable_runs = 0;
        let delta = BigInt::from(self.delta);
        let mut primes = crt_primes(&delta);
        for _ in 0..MAX_CRT_PRIMES {
            let f = primes.next().expect("infinitely many primes");
            let Some(reg) = self.prime_regulars(f, &h, &cols, &op_cols, need)? else {
                continue;
            };
            let Ok(kinv) = select_coords(f, &coords, &key).inverse() else {
                continue;
            };
            let reg_n = self.regular_sequence(f, d, &reg, need)?;
            let keyed: Vec<&FpMatrix> = key.iter().map(|&i| &reg_n[i]).collect();
            let half = upper_blocks(f, &kinv, &keyed);
            if crt.absorb(f, &half) {
                stable_runs += 1;
            } else {
                stable_runs = 0;
            }
            if stable_runs < 1 {
                continue;
            }
            let structure = mirror(d, crt.values());
            let verifier = primes.next().expect("infinitely many primes");
            if self.verify(verifier, &h, &cols, &op_cols, &coords, &structure)? {
                let alg = IntegralHeckeAlgebra {
                    level: self.level,
                    weight: self.weight,
                    rank: d,
                    basis: h,
                    coords,
                    structure,
                };
                alg.check_commutative()?;
                return Ok(alg);
            }
            stable_runs = 0;
        }
        Err(Error::Inconsistent(format!("structure constants did not stabilise at N = {}", self.level)))
    }

    /// Indices `n - 1` of `d` generators `T_n` whose coordinates are
    /// independent.
    fn key_indices(&self, coords: &[Vec<BigInt>], d: usize) -> Result<Vec<usize>> {
        for f in crt_primes(&BigInt::zero()).take(4) {
            let all: Vec<usize> = (0..coords.len()).collect();
            let pivots = select_coords(f, coords, &all).transpose().rref().pivots;
            if pivots.len() == d {
                return Ok(pivots);
            }
        }
        Err(Error::Inconsistent("generator coordinates do not span".into()))
    }

    /// `R(T_l)` modulo `f` for the primes `l <= need`, or `None` when the
    /// prime divides the pivot determinant.
    fn prime_regulars(
        &self,
        f: PrimeField,
        h: &IntegerMatrix,
        cols: &[usize],
        op_cols: &[Vec<i64>],
        need: u64,
    ) -> Result<Option<Vec<FpMatrix>>> {
        let d = h.rows();
        let hq = h.reduce(f);
        let block = (0..d).flat_map(|i| cols.iter().map(move |&c| (i, c))).map(|(i, c)| hq.get(i, c)).collect();
        let Ok(hj_inv) = FpMatrix::from_vec(f, d, d, block)?.inverse() else {
            return Ok(None);
        };
        let dinv = f.inv(f.from_i64(self.delta));
        let q = hq.cols();
        let mut out = Vec::new();
        for (idx, &l) in self.primes.iter().enumerate() {
            if l > need {
                break;
            }
            let t = FpMatrix::from_vec(f, q, d, op_cols[idx].iter().map(|&x| f.from_i64(x)).collect())?;
            out.push(hq.mul(&t)?.mul(&hj_inv)?.scale(dinv));
        }
        Ok(Some(out))
    }

    /// `R(T_n)` modulo `f` for `n <= need`.
    fn regular_sequence(&self, f: PrimeField, d: usize, reg: &[FpMatrix], need: u64) -> Result<Vec<FpMatrix>> {
        hecke_sequence(
            need,
            self.level,
            FpMatrix::identity(f, d),
            |x, l| x.mul(&reg[self.primes.iter().position(|&q| q == l).expect("prime")]),
            |x, l, older| x.sub(&older.scale(f.pow(l % f.characteristic(), self.weight as u64 - 1))),
        )
    }

    /// Randomised check modulo a fresh prime that the structure constants
    /// reproduce `u R(T_n)` for every `n <= b`.
    fn verify(
        &self,
        f: PrimeField,
        h: &IntegerMatrix,
        cols: &[usize],
        op_cols: &[Vec<i64>],
        coords: &[Vec<BigInt>],
        structure: &[BigInt],
    ) -> Result<bool> {
        let d = h.rows();
        let Some(reg) = self.prime_regulars(f, h, cols, op_cols, self.b)? else {
            return Ok(false);
        };
        let mut rng = ChaCha8Rng::seed_from_u64(f.characteristic());
        let u: Vec<u64> = (0..d).map(|_| rng.gen_range(0..f.characteristic())).collect();
        let s: Vec<u64> = structure.iter().map(|x| f.from_bigint(x)).collect();
        let us: Vec<Vec<u64>> = (0..d)
            .map(|a| FpMatrix::from_vec(f, d, d, s[a * d * d..(a + 1) * d * d].to_vec()).map(|m| m.vec_mul(&u)))
            .collect::<Result<_>>()?;
        let w = hecke_sequence(
            self.b,
            self.level,
            u.clone(),
            |x, l| Ok(reg[self.primes.iter().position(|&q| q == l).expect("prime")].vec_mul(x)),
            |x, l, older| {
                let c = f.pow(l % f.characteristic(), self.weight as u64 - 1);
                Ok(x.iter().zip(older).map(|(&a, &o)| f.sub(a, f.mul(c, o))).collect())
            },
        )?;
        for (n, wn) in w.iter().enumerate() {
            let mut acc = vec![0u64; d];
            for (a, x) in coords[n].iter().enumerate() {
                let x = f.from_bigint(x);
                if x == 0 {
                    continue;
                }
                for (o, &y) in acc.iter_mut().zip(&us[a]) {
                    *o = f.add(*o, f.mul(x, y));
                }
            }
            if acc != *wn {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Rows `b >= a` of `S_a = sum_i kinv[a][i] R_i` for every `a`, concatenated.
fn upper_blocks(f: PrimeField, kinv: &FpMatrix, regs: &[&FpMatrix]) -> Vec<u64> {
    let d = kinv.rows();
    let p = f.characteristic();
    let batch = (u64::MAX / ((p - 1) * (p - 1))).max(1);
    let mut out = Vec::with_capacity(d * d * (d + 1) / 2);
    for a in 0..d {
        let mut acc = vec![0u64; (d - a) * d];
        let mut pending = 0;
        for (i, r) in regs.iter().enumerate() {
            let k = kinv.get(a, i);
            if k == 0 {
                continue;
            }
            for (x, &y) in acc.iter_mut().zip(&r.data()[a * d..]) {
                *x += k * y;
            }
            pending += 1;
            if pending == batch {
                acc.iter_mut().for_each(|x| *x %= p);
                pending = 0;
            }
        }
        out.extend(acc.into_iter().map(|x| x % p));
    }
    out
}

/// Expand the output of [`upper_blocks`] to all `d^3` constants.
fn mirror(d: usize, half: Vec<BigInt>) -> Vec<BigInt> {
    let mut offset = vec![0usize; d];
    for a in 1..d {
        offset[a] = offset[a - 1] + (d - (a - 1)) * d;
    }
    let mut out = Vec::with_capacity(d * d * d);
    for a in 0..d {
        for b in 0..d {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let base = offset[lo] + (hi - lo) * d;
            out.extend_from_slice(&half[base..base + d]);
        }
    }
    out
}

fn select_coords(f: PrimeField, coords: &[Vec<BigInt>], idx: &[usize]) -> FpMatrix {
    let d = coords.first().map_or(0, Vec::len);
    let data = idx.iter().flat_map(|&i| coords[i].iter().map(|x| f.from_bigint(x))).collect();
    FpMatrix::from_vec(f, idx.len(), d, data).expect("shape")
}
