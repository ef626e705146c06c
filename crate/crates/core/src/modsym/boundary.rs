use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::p1::lift_to_sl2z;
use super::space::{Domain, ManinSymbolSpace};
use crate::arith::{gcd, inverse_mod, is_prime};
use crate::error::Result;
use crate::exactint::RationalMatrix;
use crate::ffalg::FpMatrix;

/// Basis of the cuspidal subspace in quotient coordinates.
#[derive(Clone, Debug)]
pub enum CuspBasis {
    Rational(RationalMatrix),
    Modular(FpMatrix),
}

/// Kernel of the boundary map on a Manin-symbol quotient. Basis row `i` has
/// a 1 in column `key_columns()[i]` and 0 in every other key column.
#[derive(Clone, Debug)]
pub struct CuspidalSubspace {
    space: Arc<ManinSymbolSpace>,
    basis: CuspBasis,
    keys: Vec<usize>,
    cusp_count: usize,
}

impl CuspidalSubspace {
    pub fn space(&self) -> &ManinSymbolSpace {
        &self.space
    }
    pub fn space_arc(&self) -> &Arc<ManinSymbolSpace> {
        &self.space
    }
    pub fn basis(&self) -> &CuspBasis {
        &self.basis
    }
    pub fn key_columns(&self) -> &[usize] {
        &self.keys
    }
    pub fn dimension(&self) -> usize {
        self.keys.len()
    }
    /// Number of `Gamma0(N)` cusp classes met by the boundary map.
    pub fn cusp_count(&self) -> usize {
        self.cusp_count
    }
}

/// Cusp classes of `Gamma0(N)`, found on demand.
struct Cusps {
    n: i64,
    reps: Vec<(i64, i64)>,
}

impl Cusps {
    fn new(n: u64) -> Self {
        Self { n: n as i64, reps: Vec::new() }
    }

    /// Class index of the cusp `a/c`.
    fn index(&mut self, a: i64, c: i64) -> usize {
        let g = gcd(a, c);
        let (mut a, mut c) = (a / g, c / g);
        if c < 0 || (c == 0 && a < 0) {
            a = -a;
            c = -c;
        }
        if is_prime(self.n as u64) {
            // two cusps: infinity and 0
            let class = if c % self.n == 0 { (1, 0) } else { (0, 1) };
            return self.find_or_push(class, |r| *r == class);
        }
        let n = self.n;
        let s = cusp_s(a, c);
        self.find_or_push((a, c), |&(a2, c2)| {
            let s2 = cusp_s(a2, c2);
            let m = gcd(((c as i128 * c2 as i128) % n as i128) as i64, n);
            ((s as i128 * c2 as i128 - s2 as i128 * c as i128).rem_euclid(m as i128)) == 0
        })
    }

    fn find_or_push(&mut self, rep: (i64, i64), eq: impl Fn(&(i64, i64)) -> bool) -> usize {
        if let Some(i) = self.reps.iter().position(eq) {
            return i;
        }
        self.reps.push(rep);
        self.reps.len() - 1
    }
}

fn cusp_s(a: i64, c: i64) -> i64 {
    match c {
        0 | 1 => 1,
        _ => inverse_mod(a, c).expect("cusp in lowest terms"),
    }
}

/// Boundary of every quotient generator as `(cusp, coefficient)` terms.
fn boundary_terms(space: &ManinSymbolSpace) -> (Vec<Vec<(usize, i64)>>, usize) {
    let k = space.weight() as usize;
    let mut cusps = Cusps::new(space.level());
    let mut out = Vec::with_capacity(space.dimension());
    for &g in space.free_generators() {
        let (i, pi) = space.symbol(g);
        let (u, v) = space.p1().get(pi);
        let [a, b, c, d] = lift_to_sl2z(u as i64, v as i64, space.level());
        let mut terms = Vec::new();
        if i == 0 {
            terms.push((cusps.index(b, d), 1));
        }
        if i == k - 2 {
            terms.push((cusps.index(a, c), -1));
        }
        out.push(terms);
    }
    (out, cusps.reps.len())
}

/// Cut out the cuspidal subspace as the kernel of the boundary map.
pub fn cuspidal_subspace(space: Arc<ManinSymbolSpace>) -> Result<CuspidalSubspace> {
    let (terms, ncusps) = boundary_terms(&space);
    let dim = space.dimension();
    match space.domain() {
        Domain::Rational => {
            let mut t = RationalMatrix::zeros(ncusps, dim);
            for (j, row) in terms.iter().enumerate() {
                for &(c, x) in row {
                    let v = t.get(c, j) + BigRational::from_integer(BigInt::from(x));
                    t.set(c, j, v);
                }
            }
            let (r, pivots) = t.rref();
            let keys: Vec<usize> = (0..dim).filter(|c| !pivots.contains(c)).collect();
            let mut basis = RationalMatrix::zeros(keys.len(), dim);
            for (i, &fc) in keys.iter().enumerate() {
                basis.set(i, fc, BigRational::one());
                for (row, &pc) in pivots.iter().enumerate() {
                    let x = r.get(row, fc);
                    if !x.is_zero() {
                        basis.set(i, pc, -x.clone());
                    }
                }
            }
            Ok(CuspidalSubspace { space, basis: CuspBasis::Rational(basis), keys, cusp_count: ncusps })
        }
        Domain::Prime(f) => {
            let mut t = FpMatrix::zeros(f, ncusps, dim);
            for (j, row) in terms.iter().enumerate() {
                for &(c, x) in row {
                    t.set(c, j, f.add(t.get(c, j), f.from_i64(x)));
                }
            }
            let pivots = t.rref().pivots;
            let keys: Vec<usize> = (0..dim).filter(|c| !pivots.contains(c)).collect();
            let basis = t.kernel_basis();
            Ok(CuspidalSubspace { space, basis: CuspBasis::Modular(basis), keys, cusp_count: ncusps })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modsym::build_space;

    #[test]
    fn general_level_cusp_counts() {
        // number of cusps of Gamma0(N) is sum over d | N of phi(gcd(d, N/d))
        for (n, expected) in [(1u64, 1usize), (4, 3), (6, 4), (8, 4), (9, 4), (12, 6), (25, 6)] {
            let mut cusps = Cusps::new(n);
            for c in 0..=(2 * n as i64) {
                for a in -(n as i64)..=(n as i64) {
                    if gcd(a, c) == 1 {
                        cusps.index(a, c);
                    }
                }
            }
            assert_eq!(cusps.reps.len(), expected, "N = {n}");
        }
    }

    #[test]
    fn cuspidal_dimensions() {
        for (n, k, d) in [(11, 2, 2), (2, 2, 0), (23, 2, 4), (11, 4, 4), (37, 2, 4), (1, 12, 2)] {
            let s = Arc::new(build_space(n, k, Domain::Rational).unwrap());
            assert_eq!(cuspidal_subspace(s).unwrap().dimension(), d, "N = {n}, k = {k}");
        }
    }
}
