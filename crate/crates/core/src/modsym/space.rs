use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::heilbronn::{heilbronn, HeilbronnKind};
use super::p1::P1List;
use crate::error::{Error, Result};
use crate::exactint::crt::{crt_primes, rational_reconstruction, CrtVector};
use crate::ffalg::{FpMatrix, PrimeField};

const NONE: u32 = u32::MAX;

pub(crate) const SIGMA: [i64; 4] = [0, -1, 1, 0];
pub(crate) const TAU: [i64; 4] = [0, -1, 1, -1];
pub(crate) const TAU2: [i64; 4] = [-1, 1, -1, 0];

/// Coefficient domain of a modular symbol space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Domain {
    Rational,
    Prime(PrimeField),
}

/// Manin-symbol presentation of weight-k modular symbols for `Gamma0(N)`.
///
/// Generator `g` is the symbol `[X^i Y^(k-2-i), (c:d)]` with
/// `g = index(c:d) * (k-1) + i`. A matrix `h = [a b; c d]` acts on the right
/// by `P(X, Y) -> P(aX + bY, cX + dY)` on the polynomial and
/// `(u:v) -> (ua + vc : ub + vd)` on the projective line; this is the
/// symmetric-power action of `h^-1` on the left, transposed to a right action.
#[derive(Clone, Debug)]
pub struct ManinSymbolSpace {
    level: u64,
    weight: u32,
    domain: Domain,
    p1: Arc<P1List>,
    free: Vec<usize>,
    projection: Vec<Vec<(u32, i64)>>,
    denominator: i64,
    relation_rank: usize,
}

/// A square operator on the quotient with integer numerators over a common
/// denominator, acting on row vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntOperator {
    pub dim: usize,
    pub denominator: i64,
    pub numerators: Vec<i64>,
}

impl IntOperator {
    pub fn row(&self, i: usize) -> &[i64] {
        &self.numerators[i * self.dim..(i + 1) * self.dim]
    }

    pub fn to_rational(&self) -> crate::exactint::RationalMatrix {
        let den = BigInt::from(self.denominator);
        let rows = (0..self.dim)
            .map(|i| self.row(i).iter().map(|&x| BigRational::new(BigInt::from(x), den.clone())).collect())
            .collect();
        crate::exactint::RationalMatrix::from_rows(self.dim, rows).expect("square")
    }
}

/// Build the Manin-symbol quotient for level `n`, weight `k`.
pub fn build_space(n: u64, k: u32, domain: Domain) -> Result<ManinSymbolSpace> {
    ManinSymbolSpace::new(n, k, domain)
}

impl ManinSymbolSpace {
    pub fn new(n: u64, k: u32, domain: Domain) -> Result<Self> {
        if k < 2 || k % 2 == 1 {
            return Err(Error::InvalidWeight(k));
        }
        if n == 0 || n > u32::MAX as u64 {
            return Err(Error::InvalidLevel(n));
        }
        let p1 = Arc::new(P1List::new(n));
        let mut space = Self {
            level: n,
            weight: k,
            domain,
            p1,
            free: Vec::new(),
            projection: Vec::new(),
            denominator: 1,
            relation_rank: 0,
        };
        let relations = space.relations()?;
        match domain {
            Domain::Prime(f) => {
                let elim = Eliminator::run(f, space.generator_count(), &relations);
                space.relation_rank = elim.rows.len();
                let (free, proj) = elim.projection();
                space.free = free;
                space.projection =
                    proj.into_iter().map(|row| row.into_iter().map(|(c, x)| (c, x as i64)).collect()).collect();
            }
            Domain::Rational => {
                let (free, projection, den, rank) = rational_presentation(space.generator_count(), &relations)?;
                space.relation_rank = rank;
                space.free = free;
                space.projection = projection;
                space.denominator = den;
            }
        }
        Ok(space)
    }

    pub fn level(&self) -> u64 {
        self.level
    }
    pub fn weight(&self) -> u32 {
        self.weight
    }
    pub fn domain(&self) -> Domain {
        self.domain
    }
    pub fn p1(&self) -> &P1List {
        &self.p1
    }
    /// Number of Manin symbols, `(k-1) * #P1(Z/N)`.
    pub fn generator_count(&self) -> usize {
        (self.weight as usize - 1) * self.p1.len()
    }
    /// Dimension of the quotient by the relations.
    pub fn dimension(&self) -> usize {
        self.free.len()
    }
    pub fn relation_rank(&self) -> usize {
        self.relation_rank
    }
    /// Generator indices forming the quotient basis.
    pub fn free_generators(&self) -> &[usize] {
        &self.free
    }
    /// Quotient coordinates of generator `g`: sparse numerators over
    /// [`Self::denominator`] for rational spaces, residues for modular ones.
    pub fn projection(&self, g: usize) -> &[(u32, i64)] {
        &self.projection[g]
    }
    pub fn denominator(&self) -> i64 {
        self.denominator
    }

    /// `(i, p1 index)` of generator `g`.
    pub fn symbol(&self, g: usize) -> (usize, usize) {
        let w = self.weight as usize - 1;
        (g % w, g / w)
    }

    /// Right action of `h` on generator `g`, reported as `(generator,
    /// coefficient)` terms; nothing is reported when the image of the
    /// projective point is not in `P1(Z/N)`.
    pub fn act(&self, g: usize, h: [i64; 4], mut emit: impl FnMut(usize, i128)) -> Result<()> {
        let (i, pi) = self.symbol(g);
        let (u, v) = self.p1.get(pi);
        let (u, v) = (u as i64, v as i64);
        let [a, b, c, d] = h;
        let Some(target) = self.p1.index(u * a + v * c, u * b + v * d) else {
            return Ok(());
        };
        let w = self.weight as usize - 1;
        if w == 1 {
            emit(target, 1);
            return Ok(());
        }
        let j = w - 1 - i;
        let left = binomial_expansion(a, b, i)?;
        let right = binomial_expansion(c, d, j)?;
        for (s, x) in left.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            for (t, y) in right.iter().enumerate() {
                if *y == 0 {
                    continue;
                }
                let coeff = x.checked_mul(*y).ok_or(Error::Overflow("symbol action"))?;
                emit(target * w + s + t, coeff);
            }
        }
        Ok(())
    }

    fn relations(&self) -> Result<Vec<Vec<(usize, i128)>>> {
        let w = self.weight as usize - 1;
        let n1 = self.p1.len();
        let mut out = Vec::new();
        let mut seen = vec![false; n1];
        for pi in 0..n1 {
            if seen[pi] {
                continue;
            }
            seen[self.image(pi, SIGMA)] = true;
            seen[pi] = true;
            for i in 0..w {
                let g = pi * w + i;
                let mut rel = vec![(g, 1i128)];
                self.act(g, SIGMA, |t, c| rel.push((t, c)))?;
                out.push(rel);
            }
        }
        let mut seen = vec![false; n1];
        for pi in 0..n1 {
            if seen[pi] {
                continue;
            }
            seen[pi] = true;
            seen[self.image(pi, TAU)] = true;
            seen[self.image(pi, TAU2)] = true;
            for i in 0..w {
                let g = pi * w + i;
                let mut rel = vec![(g, 1i128)];
                self.act(g, TAU, |t, c| rel.push((t, c)))?;
                self.act(g, TAU2, |t, c| rel.push((t, c)))?;
                out.push(rel);
            }
        }
        Ok(out)
    }

    fn image(&self, pi: usize, h: [i64; 4]) -> usize {
        let (u, v) = self.p1.get(pi);
        let (u, v) = (u as i64, v as i64);
        self.p1.index(u * h[0] + v * h[2], u * h[1] + v * h[3]).expect("invertible matrix preserves P1")
    }

    fn heilbronn_for(&self, ell: u64) -> super::heilbronn::Heilbronn {
        if self.weight == 2 && self.level % ell != 0 {
            heilbronn(HeilbronnKind::Cremona, ell)
        } else {
            heilbronn(HeilbronnKind::Merel, ell)
        }
    }

    /// Image of free generator `j` under `T_ell` as generator multiplicities.
    fn hecke_counts(&self, j: usize, mats: &[[i64; 4]], acc: &mut [i128], touched: &mut Vec<usize>) -> Result<()> {
        let g = self.free[j];
        for &h in mats {
            self.act(g, h, |t, c| {
                if acc[t] == 0 {
                    touched.push(t);
                }
                acc[t] += c;
            })?;
        }
        Ok(())
    }

    /// `T_ell` for a prime `ell` on a rational space, as integer numerators
    /// over the presentation denominator.
    pub fn hecke_prime_rational(&self, ell: u64) -> Result<IntOperator> {
        if self.domain != Domain::Rational {
            return Err(Error::Inconsistent("rational operator requested on a modular space".into()));
        }
        let dim = self.dimension();
        let mats = self.heilbronn_for(ell);
        let mut acc = vec![0i128; self.generator_count()];
        let mut touched = Vec::new();
        let mut numerators = vec![0i64; dim * dim];
        let mut row = vec![0i128; dim];
        for j in 0..dim {
            touched.clear();
            self.hecke_counts(j, &mats, &mut acc, &mut touched)?;
            row.iter_mut().for_each(|x| *x = 0);
            for &t in &touched {
                let c = std::mem::take(&mut acc[t]);
                if c == 0 {
                    continue;
                }
                for &(pos, x) in &self.projection[t] {
                    row[pos as usize] += c * x as i128;
                }
            }
            for (out, &x) in numerators[j * dim..(j + 1) * dim].iter_mut().zip(&row) {
                *out = i64::try_from(x).map_err(|_| Error::Overflow("Hecke operator entry"))?;
            }
        }
        Ok(IntOperator { dim, denominator: self.denominator, numerators })
    }

    /// `T_ell` for a prime `ell` on a modular space.
    pub fn hecke_prime_modular(&self, ell: u64) -> Result<FpMatrix> {
        let Domain::Prime(f) = self.domain else {
            return Err(Error::Inconsistent("modular operator requested on a rational space".into()));
        };
        let p = f.characteristic() as i128;
        let dim = self.dimension();
        let mats = self.heilbronn_for(ell);
        let mut acc = vec![0i128; self.generator_count()];
        let mut touched = Vec::new();
        let mut data = vec![0u64; dim * dim];
        let mut row = vec![0u64; dim];
        for j in 0..dim {
            touched.clear();
            self.hecke_counts(j, &mats, &mut acc, &mut touched)?;
            row.iter_mut().for_each(|x| *x = 0);
            for &t in &touched {
                let c = std::mem::take(&mut acc[t]).rem_euclid(p) as u64;
                if c == 0 {
                    continue;
                }
                for &(pos, x) in &self.projection[t] {
                    row[pos as usize] = f.add(row[pos as usize], f.mul(c, x as u64));
                }
            }
            data[j * dim..(j + 1) * dim].copy_from_slice(&row);
        }
        FpMatrix::from_vec(f, dim, dim, data)
    }
}

fn binomial_expansion(a: i64, b: i64, n: usize) -> Result<Vec<i128>> {
    // coefficients of X^s Y^(n-s) in (aX + bY)^n
    let mut out = vec![0i128; n + 1];
    out[0] = 1;
    for step in 0..n {
        for s in (0..=step + 1).rev() {
            let from_x = if s > 0 { out[s - 1].checked_mul(a as i128) } else { Some(0) };
            let from_y = out[s].checked_mul(b as i128);
            out[s] = match (from_x, from_y) {
                (Some(x), Some(y)) => x.checked_add(y).ok_or(Error::Overflow("binomial expansion"))?,
                _ => return Err(Error::Overflow("binomial expansion")),
            };
        }
    }
    Ok(out)
}

/// Incremental sparse reduced echelon form over a prime field. Each stored
/// row has a unit pivot and otherwise only non-pivot columns.
struct Eliminator {
    f: PrimeField,
    ncols: usize,
    rows: Vec<(u32, Vec<(u32, u64)>)>,
    pivot_of: Vec<u32>,
    occ: Vec<Vec<u32>>,
    acc: Vec<u64>,
    touched: Vec<u32>,
    marked: Vec<bool>,
}

impl Eliminator {
    fn run(f: PrimeField, ncols: usize, relations: &[Vec<(usize, i128)>]) -> Self {
        let mut e = Self {
            f,
            ncols,
            rows: Vec::new(),
            pivot_of: vec![NONE; ncols],
            occ: vec![Vec::new(); ncols],
            acc: vec![0; ncols],
            touched: Vec::new(),
            marked: vec![false; ncols],
        };
        for rel in relations {
            e.add(rel);
        }
        e
    }

    fn touch(&mut self, c: usize) {
        if !self.marked[c] {
            self.marked[c] = true;
            self.touched.push(c as u32);
        }
    }

    fn add(&mut self, rel: &[(usize, i128)]) {
        let f = self.f;
        let p = f.characteristic() as i128;
        for &(c, a) in rel {
            let a = a.rem_euclid(p) as u64;
            if a != 0 {
                self.acc[c] = f.add(self.acc[c], a);
                self.touch(c);
            }
        }
        let initial = self.touched.len();
        for t in 0..initial {
            let c = self.touched[t] as usize;
            let rid = self.pivot_of[c];
            if rid == NONE || self.acc[c] == 0 {
                continue;
            }
            let a = std::mem::take(&mut self.acc[c]);
            for k in 0..self.rows[rid as usize].1.len() {
                let (c2, b) = self.rows[rid as usize].1[k];
                self.acc[c2 as usize] = f.sub(self.acc[c2 as usize], f.mul(a, b));
                self.touch(c2 as usize);
            }
        }
        let mut v: Vec<(u32, u64)> = Vec::new();
        for &c in &self.touched {
            let x = std::mem::take(&mut self.acc[c as usize]);
            self.marked[c as usize] = false;
            if x != 0 {
                v.push((c, x));
            }
        }
        self.touched.clear();
        if v.is_empty() {
            return;
        }
        v.sort_unstable_by_key(|e| e.0);
        let unit = v.iter().rev().find(|&&(_, x)| f.lift_signed(x).abs() == 1);
        let (pc, pv) = *unit.unwrap_or(v.last().unwrap());
        let inv = f.inv(pv);
        let entries: Vec<(u32, u64)> =
            v.into_iter().filter(|&(c, _)| c != pc).map(|(c, x)| (c, f.mul(x, inv))).collect();
        for rid in std::mem::take(&mut self.occ[pc as usize]) {
            let row = &mut self.rows[rid as usize].1;
            let Ok(pos) = row.binary_search_by_key(&pc, |e| e.0) else {
                continue;
            };
            let e = row.remove(pos).1;
            let merged = merge_scaled(f, row, &entries, f.neg(e));
            for &(c, _) in &entries {
                if row.binary_search_by_key(&c, |x| x.0).is_err() {
                    self.occ[c as usize].push(rid);
                }
            }
            self.rows[rid as usize].1 = merged;
        }
        let rid = self.rows.len() as u32;
        for &(c, _) in &entries {
            self.occ[c as usize].push(rid);
        }
        self.pivot_of[pc as usize] = rid;
        self.rows.push((pc, entries));
    }

    /// Free columns and, per column, its coordinates on the free columns.
    fn projection(&self) -> (Vec<usize>, Vec<Vec<(u32, u64)>>) {
        let free: Vec<usize> = (0..self.ncols).filter(|&c| self.pivot_of[c] == NONE).collect();
        let mut pos = vec![NONE; self.ncols];
        for (i, &c) in free.iter().enumerate() {
            pos[c] = i as u32;
        }
        let proj = (0..self.ncols)
            .map(|c| match self.pivot_of[c] {
                NONE => vec![(pos[c], 1)],
                rid => self.rows[rid as usize].1.iter().map(|&(c2, x)| (pos[c2 as usize], self.f.neg(x))).collect(),
            })
            .collect();
        (free, proj)
    }
}

fn merge_scaled(f: PrimeField, a: &[(u32, u64)], b: &[(u32, u64)], s: u64) -> Vec<(u32, u64)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j == b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i == a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i]);
            i += 1;
        } else if take_b {
            out.push((b[j].0, f.mul(s, b[j].1)));
            j += 1;
        } else {
            let x = f.add(a[i].1, f.mul(s, b[j].1));
            if x != 0 {
                out.push((a[i].0, x));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

type Presentation = (Vec<usize>, Vec<Vec<(u32, i64)>>, i64, usize);

/// Eliminate modulo word-sized primes, lift the projection to rationals by
/// CRT and reconstruction, and accept it once every relation maps to zero.
fn rational_presentation(ncols: usize, relations: &[Vec<(usize, i128)>]) -> Result<Presentation> {
    type Shape = (Vec<usize>, Vec<Vec<u32>>);
    let mut shape: Option<Shape> = None;
    let mut crt = CrtVector::new(0);
    for f in crt_primes(&BigInt::zero()).take(16) {
        let elim = Eliminator::run(f, ncols, relations);
        let rank = elim.rows.len();
        let (free, proj) = elim.projection();
        let this: Shape = (free, proj.iter().map(|r| r.iter().map(|e| e.0).collect()).collect());
        match &shape {
            None => {
                crt = CrtVector::new(proj.iter().map(Vec::len).sum());
                shape = Some(this);
            }
            Some(s) if *s != this => continue,
            Some(_) => {}
        }
        let residues: Vec<u64> = proj.iter().flatten().map(|e| e.1).collect();
        crt.absorb(f, &residues);
        let Some((den, flat)) = reconstruct(&crt) else {
            continue;
        };
        let (free, cols) = shape.as_ref().expect("shape recorded");
        let mut it = flat.into_iter();
        let nums: Vec<Vec<(u32, i64)>> =
            cols.iter().map(|r| r.iter().map(|&c| (c, it.next().expect("flat length"))).collect()).collect();
        if verify_relations(relations, &nums, free.len()) {
            return Ok((free.clone(), nums, den, rank));
        }
    }
    Err(Error::Inconsistent("no rational presentation verified".into()))
}

/// Common denominator and numerators of the reconstructed fractions, if they
/// all exist and fit in 64 bits.
fn reconstruct(crt: &CrtVector) -> Option<(i64, Vec<i64>)> {
    let m = crt.modulus();
    let values = crt.values();
    let mut fracs = Vec::with_capacity(values.len());
    let mut den = BigInt::one();
    for x in &values {
        let (n, d) = rational_reconstruction(x, &m)?;
        den = den.lcm(&d);
        fracs.push((n, d));
    }
    let den64 = i64::try_from(&den).ok()?;
    let nums = fracs.into_iter().map(|(n, d)| i64::try_from(n * (&den / d)).ok()).collect::<Option<Vec<_>>>()?;
    Some((den64, nums))
}

fn verify_relations(relations: &[Vec<(usize, i128)>], proj: &[Vec<(u32, i64)>], dim: usize) -> bool {
    let mut acc = vec![0i128; dim];
    for rel in relations {
        for &(g, a) in rel {
            for &(c, x) in &proj[g] {
                acc[c as usize] += a * x as i128;
            }
        }
        if acc.iter().any(|&x| x != 0) {
            return false;
        }
    }
    true
}
