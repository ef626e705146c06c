//! Sets of integer matrices of determinant `n` whose right action on Manin
//! symbols realises the Hecke operator `T_n`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

pub type Heilbronn = Arc<Vec<[i64; 4]>>;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum HeilbronnKind {
    /// Cremona's continued-fraction set for a prime; weight 2 only.
    Cremona,
    /// Merel's set `ad - bc = n`, `a > b >= 0`, `d > c >= 0`; any weight.
    Merel,
}

fn cache() -> &'static Mutex<HashMap<(HeilbronnKind, u64), Heilbronn>> {
    static CACHE: OnceLock<Mutex<HashMap<(HeilbronnKind, u64), Heilbronn>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Cached Heilbronn set of the given kind.
pub fn heilbronn(kind: HeilbronnKind, n: u64) -> Heilbronn {
    if let Some(h) = cache().lock().unwrap().get(&(kind, n)) {
        return h.clone();
    }
    let h = Arc::new(match kind {
        HeilbronnKind::Cremona => cremona(n),
        HeilbronnKind::Merel => merel(n),
    });
    cache().lock().unwrap().entry((kind, n)).or_insert(h).clone()
}

/// Cremona's Heilbronn matrices for a prime `p`.
pub fn cremona(p: u64) -> Vec<[i64; 4]> {
    if p == 2 {
        return vec![[1, 0, 0, 2], [2, 0, 0, 1], [2, 1, 0, 1], [1, 0, 1, 2]];
    }
    let p = p as i64;
    let mut out = vec![[1, 0, 0, p]];
    let half = p / 2;
    for r in -half..=half {
        let (mut x1, mut x2, mut y1, mut y2) = (p, -r, 0i64, 1i64);
        let (mut a, mut b) = (-p, r);
        out.push([x1, x2, y1, y2]);
        while b != 0 {
            let q = (a as f64 / b as f64).round() as i64;
            let c = a - b * q;
            a = -b;
            b = c;
            let x3 = q * x2 - x1;
            x1 = x2;
            x2 = x3;
            let y3 = q * y2 - y1;
            y1 = y2;
            y2 = y3;
            out.push([x1, x2, y1, y2]);
        }
    }
    out
}

/// Merel's Heilbronn matrices of determinant `n`.
pub fn merel(n: u64) -> Vec<[i64; 4]> {
    let n = n as i64;
    let mut out = Vec::new();
    for a in 1..=n {
        let q = n / a;
        if q * a == n {
            let d = q;
            for b in 0..a {
                out.push([a, b, 0, d]);
            }
            for c in 1..d {
                out.push([a, 0, c, d]);
            }
        }
        for d in q + 1..=n {
            let bc = a * d - n;
            for c in bc / a + 1..d {
                if bc % c == 0 {
                    out.push([a, bc / c, c, d]);
                }
            }
        }
    }
    out
}
