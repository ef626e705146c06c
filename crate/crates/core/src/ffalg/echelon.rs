use super::PrimeField;

/// Semi-echelon basis over `F_p` built one vector at a time. Each stored row
/// is kept together with its expression in the inserted vectors, so any
/// vector in the span can be written in terms of the inserted ones.
pub(crate) struct Echelon {
    f: PrimeField,
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
    combos: Vec<Vec<u64>>,
}

impl Echelon {
    pub fn new(f: PrimeField) -> Self {
        Self { f, rows: Vec::new(), pivots: Vec::new(), combos: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    /// Reduce `v` in place; returns its coordinates (in the inserted vectors)
    /// of the part that was removed.
    fn reduce(&self, v: &mut [u64]) -> Vec<u64> {
        let f = self.f;
        let mut coords = vec![0u64; self.rows.len()];
        for (i, (row, &pc)) in self.rows.iter().zip(&self.pivots).enumerate() {
            let a = v[pc];
            if a == 0 {
                continue;
            }
            let na = f.neg(a);
            for (x, &y) in v[pc..].iter_mut().zip(&row[pc..]) {
                if y != 0 {
                    *x = f.add(*x, f.mul(na, y));
                }
            }
            for (c, &m) in coords.iter_mut().zip(&self.combos[i]) {
                if m != 0 {
                    *c = f.add(*c, f.mul(a, m));
                }
            }
        }
        coords
    }

    /// Coordinates of `v` in the inserted vectors, or `None` outside the span.
    pub fn coordinates(&self, v: &[u64]) -> Option<Vec<u64>> {
        let mut r = v.to_vec();
        let coords = self.reduce(&mut r);
        r.iter().all(|&x| x == 0).then_some(coords)
    }

    /// Coordinates of `v` if it lies in the span; otherwise `v` is inserted
    /// and its index returned.
    pub fn locate_or_insert(&mut self, v: &[u64]) -> Result<Vec<u64>, usize> {
        let f = self.f;
        let mut r = v.to_vec();
        let coords = self.reduce(&mut r);
        let Some(pc) = r.iter().position(|&x| x != 0) else {
            return Ok(coords);
        };
        let inv = f.inv(r[pc]);
        let mut combo: Vec<u64> = coords.iter().map(|&c| f.mul(f.neg(c), inv)).collect();
        combo.push(inv);
        for x in r.iter_mut() {
            *x = f.mul(*x, inv);
        }
        for c in self.combos.iter_mut() {
            c.push(0);
        }
        self.rows.push(r);
        self.pivots.push(pc);
        self.combos.push(combo);
        Err(self.rows.len() - 1)
    }
}
