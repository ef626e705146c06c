use crate::arith::{gcd, xgcd};

const NONE: u32 = u32::MAX;

/// The projective line over `Z/N`: pairs `(c:d)` with `gcd(c, d, N) = 1`
/// modulo scaling by units.
///
/// Each class is represented by its lexicographically smallest member, and
/// an `N x N` table maps every admissible pair to its class index.
#[derive(Clone, Debug)]
pub struct P1List {
    n: u64,
    elements: Vec<(u32, u32)>,
    table: Vec<u32>,
}

impl P1List {
    pub fn new(n: u64) -> Self {
        assert!(n >= 1, "level must be positive");
        let nn = n as usize;
        let units: Vec<usize> = (1..nn.max(2)).filter(|&u| gcd(u as i64, n as i64) == 1).collect();
        let units = if nn == 1 { vec![0] } else { units };
        let mut table = vec![NONE; nn * nn];
        let mut elements = Vec::new();
        for c in 0..nn {
            for d in 0..nn {
                if table[c * nn + d] != NONE || gcd(gcd(c as i64, d as i64), n as i64) != 1 {
                    continue;
                }
                let idx = elements.len() as u32;
                elements.push((c as u32, d as u32));
                for &u in &units {
                    table[(u * c % nn) * nn + u * d % nn] = idx;
                }
            }
        }
        Self { n, elements, table }
    }

    pub fn level(&self) -> u64 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn get(&self, i: usize) -> (u32, u32) {
        self.elements[i]
    }

    pub fn elements(&self) -> &[(u32, u32)] {
        &self.elements
    }

    /// Class index of `(c:d)`, or `None` when `gcd(c, d, N) > 1`.
    #[inline]
    pub fn index(&self, c: i64, d: i64) -> Option<usize> {
        let n = self.n as i64;
        let (c, d) = (c.rem_euclid(n) as usize, d.rem_euclid(n) as usize);
        let idx = self.table[c * self.n as usize + d];
        (idx != NONE).then_some(idx as usize)
    }
}

/// A matrix `[a, b, c, d]` in `SL2(Z)` whose bottom row reduces to `(c, d)`
/// modulo `n`.
pub fn lift_to_sl2z(c: i64, d: i64, n: u64) -> [i64; 4] {
    let n = n as i64;
    if n == 1 {
        return [1, 0, 0, 1];
    }
    let mut c = c.rem_euclid(n);
    let d = d.rem_euclid(n);
    if c == 0 {
        c = n;
    }
    let mut dd = d;
    while gcd(c, dd) != 1 {
        dd += n;
    }
    let (_, x, y) = xgcd(dd, c);
    // x*dd + y*c = 1, so [x, -y; c, dd] has determinant 1
    [x, -y, c, dd]
}
