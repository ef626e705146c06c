use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::record::LevelRecord;
use crate::error::{Error, Result};

/// The statistic plotted against `d(N)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stat {
    /// Sum of the residue degrees.
    A,
    /// Average residue degree.
    B,
    /// Maximal residue degree.
    C,
}

impl Stat {
    pub fn of(self, r: &LevelRecord) -> BigRational {
        match self {
            Self::A => BigRational::from_integer(r.a.into()),
            Self::B => r.b(),
            Self::C => BigRational::from_integer(r.c.into()),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::A => "a",
            Self::B => "b",
            Self::C => "c",
        }
    }

    /// Render a value of this statistic for a data file.
    pub fn render(self, v: &BigRational) -> String {
        match self {
            Self::B => format_decimal(v, 6),
            _ => v.to_string(),
        }
    }
}

impl std::str::FromStr for Stat {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "a" => Ok(Self::A),
            "b" => Ok(Self::B),
            "c" => Ok(Self::C),
            _ => Err(format!("unknown statistic {s:?}; expected a, b or c")),
        }
    }
}

impl std::fmt::Display for Stat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Least-squares line `y = alpha x` through the origin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FitResult {
    pub alpha: BigRational,
    pub points: usize,
    pub sum_xy: BigRational,
    pub sum_xx: BigRational,
}

impl FitResult {
    pub fn alpha_f64(&self) -> f64 {
        self.alpha.to_f64().unwrap_or(f64::NAN)
    }
}

/// `alpha = sum(x y) / sum(x^2)`, exactly.
pub fn fit_origin_line(points: &[(BigRational, BigRational)]) -> Result<FitResult> {
    let mut sum_xy = BigRational::zero();
    let mut sum_xx = BigRational::zero();
    for (x, y) in points {
        sum_xy += x * y;
        sum_xx += x * x;
    }
    if sum_xx.is_zero() {
        return Err(Error::DegenerateFit);
    }
    Ok(FitResult { alpha: &sum_xy / &sum_xx, points: points.len(), sum_xy, sum_xx })
}

/// Fit of a statistic against `d` over some records.
pub fn fit_records<'a>(records: impl IntoIterator<Item = &'a LevelRecord>, stat: Stat) -> Result<FitResult> {
    let pts: Vec<_> = records.into_iter().map(|r| (BigRational::from_integer(r.d.into()), stat.of(r))).collect();
    fit_origin_line(&pts)
}

/// `v` rounded half away from zero to `places` decimals.
pub fn format_decimal(v: &BigRational, places: usize) -> String {
    let scale = BigInt::from(10u32).pow(places as u32);
    let num = v.numer() * &scale;
    let den = v.denom();
    let (q, r) = num.abs().div_rem(den);
    let q = if &r * 2 >= *den { q + 1 } else { q };
    let digits = q.to_string();
    let digits = format!("{digits:0>width$}", width = places + 1);
    let (int, frac) = digits.split_at(digits.len() - places);
    let sign = if v.is_negative() && q_nonzero(&digits) { "-" } else { "" };
    if places == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac}")
    }
}

fn q_nonzero(digits: &str) -> bool {
    digits.bytes().any(|b| b != b'0')
}

/// Ranks starting at 1, ties sharing their average rank.
fn ranks(xs: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..xs.len()).collect();
    idx.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let mut out = vec![0.0; xs.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && xs[idx[j + 1]] == xs[idx[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &t in &idx[i..=j] {
            out[t] = avg;
        }
        i = j + 1;
    }
    out
}

/// Spearman rank correlation; `None` for fewer than two points or when a
/// coordinate is constant.
pub fn spearman(xs: &[f64], ys: &[f64]) -> Option<f64> {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len();
    if n < 2 {
        return None;
    }
    let (rx, ry) = (ranks(xs), ranks(ys));
    let mean = (n as f64 + 1.0) / 2.0;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in rx.iter().zip(&ry) {
        sxy += (a - mean) * (b - mean);
        sxx += (a - mean).powi(2);
        syy += (b - mean).powi(2);
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some(sxy / (sxx * syy).sqrt())
}
