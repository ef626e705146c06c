//! Factorisation over `F_p`: square-free decomposition, distinct-degree
//! splitting, then Cantor-Zassenhaus equal-degree splitting.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::field::PrimeField;
use super::poly::FpPolynomial;
use crate::error::{Error, Result};

const SPLIT_SEED: u64 = 0x5eed_4ec4e;

/// Monic irreducible factors with multiplicities, sorted canonically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorList {
    pub factors: Vec<(FpPolynomial, u32)>,
}

impl FactorList {
    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(FpPolynomial, u32)> {
        self.factors.iter()
    }

    /// Product of `factor^multiplicity`; the monic part of the input.
    pub fn expand(&self, field: PrimeField) -> FpPolynomial {
        self.factors.iter().fold(FpPolynomial::one(field), |acc, (g, m)| acc.mul(&g.pow(*m as u64)))
    }
}

/// Factor a nonzero polynomial into monic irreducibles.
pub fn factor(f: &FpPolynomial) -> Result<FactorList> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SPLIT_SEED);
    let mut out: Vec<(FpPolynomial, u32)> = Vec::new();
    for (sqf, mult) in squarefree_decomposition(&f.monic()) {
        for (block, degree) in distinct_degree(&sqf) {
            for g in equal_degree(&block, degree, &mut rng) {
                out.push((g, mult));
            }
        }
    }
    // squarefree parts are coprime, so no factor can appear twice
    out.sort_by(|a, b| a.0.coeffs().cmp(b.0.coeffs()).then(a.1.cmp(&b.1)));
    Ok(FactorList { factors: out })
}

/// `f = prod g_i^i` with each `g_i` squarefree and pairwise coprime; trivial
/// parts are omitted. Input must be monic and nonzero.
pub fn squarefree_decomposition(f: &FpPolynomial) -> Vec<(FpPolynomial, u32)> {
    let field = f.field();
    let p = field.characteristic() as u32;
    let mut out = Vec::new();
    if f.degree() == Some(0) {
        return out;
    }
    let df = f.derivative();
    if df.is_zero() {
        for (g, m) in squarefree_decomposition(&f.pth_root()) {
            out.push((g, m * p));
        }
        return out;
    }
    let mut c = f.gcd(&df);
    let mut w = f.div_exact(&c).expect("gcd divides");
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c);
        let fac = w.div_exact(&y).expect("gcd divides");
        if !fac.is_one() {
            out.push((fac, i));
        }
        i += 1;
        w = y;
        c = c.div_exact(&w).expect("gcd divides");
    }
    if !c.is_one() {
        for (g, m) in squarefree_decomposition(&c.pth_root()) {
            out.push((g, m * p));
        }
    }
    merge_equal(out)
}

fn merge_equal(mut parts: Vec<(FpPolynomial, u32)>) -> Vec<(FpPolynomial, u32)> {
    // parts with equal multiplicity from the recursive branch multiply together
    parts.sort_by_key(|(_, m)| *m);
    let mut out: Vec<(FpPolynomial, u32)> = Vec::new();
    for (g, m) in parts {
        match out.last_mut() {
            Some((h, mm)) if *mm == m => *h = h.mul(&g),
            _ => out.push((g, m)),
        }
    }
    out
}

/// Split a monic squarefree polynomial into products of irreducibles of a
/// common degree, returned as `(product, degree)`.
pub fn distinct_degree(f: &FpPolynomial) -> Vec<(FpPolynomial, usize)> {
    let field = f.field();
    let p = field.characteristic();
    let x = FpPolynomial::x(field);
    let mut rest = f.clone();
    let mut out = Vec::new();
    let mut h = x.rem(&rest).unwrap_or_else(|_| x.clone());
    let mut i = 0;
    while let Some(deg) = rest.degree() {
        if deg < 2 * (i + 1) {
            break;
        }
        i += 1;
        h = h.pow_mod(p, &rest);
        let g = h.sub(&x).gcd(&rest);
        if !g.is_one() {
            rest = rest.div_exact(&g).expect("gcd divides");
            h = h.rem(&rest).unwrap_or(h);
            out.push((g, i));
        }
    }
    if let Some(deg) = rest.degree() {
        if deg > 0 {
            out.push((rest, deg));
        }
    }
    out
}

/// Split a monic product of distinct irreducibles of degree `degree`.
pub fn equal_degree(f: &FpPolynomial, degree: usize, rng: &mut ChaCha8Rng) -> Vec<FpPolynomial> {
    let n = f.degree().unwrap_or(0);
    if n == degree {
        return vec![f.clone()];
    }
    let field = f.field();
    let p = field.characteristic();
    loop {
        let a = FpPolynomial::new(field, (0..n).map(|_| rng.gen_range(0..p)).collect());
        if a.degree().map_or(true, |d| d == 0) {
            continue;
        }
        let g = a.gcd(f);
        if !g.is_one() && g.degree() != Some(n) {
            return split_both(f, &g, degree, rng);
        }
        let b = if p == 2 {
            // absolute trace a + a^2 + ... + a^(2^(degree-1))
            let mut t = a.rem(f).unwrap();
            let mut acc = t.clone();
            for _ in 1..degree {
                t = t.mul_mod(&t, f);
                acc = acc.add(&t);
            }
            acc
        } else {
            // a^((p^degree - 1)/2) = (a^(1 + p + ... + p^(degree-1)))^((p-1)/2)
            let mut t = a.rem(f).unwrap();
            let mut norm = t.clone();
            for _ in 1..degree {
                t = t.pow_mod(p, f);
                norm = norm.mul_mod(&t, f);
            }
            norm.pow_mod((p - 1) / 2, f).sub(&FpPolynomial::one(field))
        };
        let g = b.gcd(f);
        if !g.is_one() && g.degree() != Some(n) {
            return split_both(f, &g, degree, rng);
        }
    }
}

fn split_both(f: &FpPolynomial, g: &FpPolynomial, degree: usize, rng: &mut ChaCha8Rng) -> Vec<FpPolynomial> {
    let h = f.div_exact(g).expect("gcd divides");
    let mut out = equal_degree(g, degree, rng);
    out.extend(equal_degree(&h, degree, rng));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn x2_x_1_over_f2_is_irreducible() {
        let f = FpPolynomial::from_i64(fp(2), &[1, 1, 1]);
        let fl = factor(&f).unwrap();
        assert_eq!(fl.factors, vec![(f, 1)]);
    }

    #[test]
    fn x2_minus_1_over_f3() {
        let f3 = fp(3);
        let fl = factor(&FpPolynomial::from_i64(f3, &[-1, 0, 1])).unwrap();
        assert_eq!(
            fl.factors,
            vec![(FpPolynomial::from_i64(f3, &[1, 1]), 1), (FpPolynomial::from_i64(f3, &[2, 1]), 1)]
        );
    }

    #[test]
    fn x4_plus_1_over_f2() {
        let f2 = fp(2);
        let fl = factor(&FpPolynomial::from_i64(f2, &[1, 0, 0, 0, 1])).unwrap();
        assert_eq!(fl.factors, vec![(FpPolynomial::from_i64(f2, &[1, 1]), 4)]);
    }

    #[test]
    fn zero_is_rejected() {
        assert!(matches!(factor(&FpPolynomial::zero(fp(5))), Err(Error::ZeroPolynomial)));
    }

    #[test]
    fn constants_have_no_factors() {
        let fl = factor(&FpPolynomial::from_i64(fp(5), &[3])).unwrap();
        assert!(fl.is_empty());
    }

    #[test]
    fn mixed_multiplicities_with_pth_powers() {
        // (x+1)^3 (x^2+x+2)^2 x over F_3: derivative pieces vanish
        let f3 = fp(3);
        let a = FpPolynomial::from_i64(f3, &[1, 1]);
        let b = FpPolynomial::from_i64(f3, &[2, 1, 1]);
        let x = FpPolynomial::x(f3);
        let f = a.pow(3).mul(&b.pow(2)).mul(&x);
        let fl = factor(&f).unwrap();
        assert_eq!(fl.expand(f3), f);
        assert_eq!(fl.len(), 3);
        assert!(fl.iter().all(|(g, _)| g.is_irreducible()));
    }
}
