//! The growth inequalities for `a`, `b` and `c`, checked level by level.

use serde::Serialize;

use super::cache::Cache;
use super::record::LevelRecord;
use super::stats::{fit_records, Stat};
use crate::error::{Error, Result};
use crate::hecke::Pipeline;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum QuestionId {
    /// `a(N) > (1 - eps) d(N) - C` for odd `p`.
    #[serde(rename = "4.1")]
    Q41,
    /// `alpha d(N) + C > a(N) > beta d(N) - D` for `p = 2`.
    #[serde(rename = "4.2")]
    Q42,
    /// `C1 + alpha d/log d <= b(N) <= C2 + beta d`.
    #[serde(rename = "4.3")]
    Q43,
    /// `C1 + alpha d <= c(N) <= C2 + beta d`.
    #[serde(rename = "4.4")]
    Q44,
}

impl std::str::FromStr for QuestionId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "4.1" => Ok(Self::Q41),
            "4.2" => Ok(Self::Q42),
            "4.3" => Ok(Self::Q43),
            "4.4" => Ok(Self::Q44),
            _ => Err(Error::UnknownQuestion(s.to_string())),
        }
    }
}

impl std::fmt::Display for QuestionId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Q41 => "4.1",
            Self::Q42 => "4.2",
            Self::Q43 => "4.3",
            Self::Q44 => "4.4",
        })
    }
}

/// Constants supplied to a question; which are required depends on the id.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct Constants {
    pub epsilon: Option<f64>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub c1: Option<f64>,
    pub c2: Option<f64>,
    pub big_c: Option<f64>,
    pub big_d: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelVerdict {
    #[serde(rename = "N")]
    pub n: u64,
    pub d: usize,
    pub value: f64,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuestionReport {
    pub id: QuestionId,
    pub p: u64,
    pub k: u32,
    pub pipeline: Pipeline,
    pub constants: Constants,
    pub verdicts: Vec<LevelVerdict>,
    pub counterexamples: Vec<u64>,
    /// Levels in the slice that were not evaluated, with the reason.
    pub excluded: Vec<(u64, String)>,
    /// Slope of the origin fit of `a` against `d` (question 4.2 only).
    pub fitted_slope: Option<f64>,
    pub notes: Vec<String>,
}

impl QuestionReport {
    pub fn all_pass(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuestionOptions {
    pub pipeline: Pipeline,
    pub include_level_equals_p: bool,
}

impl Default for QuestionOptions {
    fn default() -> Self {
        Self { pipeline: Pipeline::A, include_level_equals_p: false }
    }
}

fn need(v: Option<f64>, name: &'static str) -> Result<f64> {
    v.ok_or(Error::MissingConstant(name))
}

/// `(value, strict lower bound?, lower, upper)` for one record. The bounds
/// of 4.1 and 4.2 are strict; those of 4.3 and 4.4 are not.
fn bounds(id: QuestionId, c: &Constants, r: &LevelRecord) -> Result<(f64, Option<f64>, Option<f64>)> {
    let d = r.d as f64;
    let upper = |stat_upper: bool| -> Option<f64> {
        match (c.c2, c.beta) {
            (Some(c2), Some(beta)) if stat_upper => Some(c2 + beta * d),
            _ => None,
        }
    };
    Ok(match id {
        QuestionId::Q41 => (r.a as f64, Some((1.0 - need(c.epsilon, "epsilon")?) * d - need(c.big_c, "C")?), None),
        QuestionId::Q42 => (
            r.a as f64,
            Some(need(c.beta, "beta")? * d - need(c.big_d, "D")?),
            Some(need(c.alpha, "alpha")? * d + need(c.big_c, "C")?),
        ),
        QuestionId::Q43 => (r.b_f64(), Some(need(c.c1, "C1")? + need(c.alpha, "alpha")? * d / d.ln()), upper(true)),
        QuestionId::Q44 => (r.c as f64, Some(need(c.c1, "C1")? + need(c.alpha, "alpha")? * d), upper(true)),
    })
}

/// Evaluate a question on every cached level of the `(p, k)` slice.
///
/// Levels with `d = 0` carry no residue degrees and are excluded, as are
/// `N = p` unless requested; question 4.3 also excludes `d = 1`, where
/// `log d` vanishes.
pub fn evaluate_question(
    cache: &Cache,
    id: QuestionId,
    p: u64,
    k: u32,
    constants: &Constants,
    opts: QuestionOptions,
) -> Result<QuestionReport> {
    let slice = cache.slice(p, k, opts.pipeline);
    if slice.is_empty() {
        return Err(Error::EmptySlice { p, k });
    }
    let mut report = QuestionReport {
        id,
        p,
        k,
        pipeline: opts.pipeline,
        constants: *constants,
        verdicts: Vec::new(),
        counterexamples: Vec::new(),
        excluded: Vec::new(),
        fitted_slope: None,
        notes: Vec::new(),
    };
    let mut used = Vec::new();
    for r in slice {
        if r.level_equals_p && !opts.include_level_equals_p {
            report.excluded.push((r.n, "N = p".into()));
            continue;
        }
        if r.d == 0 {
            report.excluded.push((r.n, "d = 0".into()));
            continue;
        }
        if id == QuestionId::Q43 && r.d == 1 {
            report.excluded.push((r.n, "log d = 0".into()));
            continue;
        }
        let (value, lower, upper) = bounds(id, constants, r)?;
        let strict = matches!(id, QuestionId::Q41 | QuestionId::Q42);
        let lower_ok = lower.is_none_or(|l| if strict { value > l } else { value >= l });
        let upper_ok = upper.is_none_or(|u| if strict { value < u } else { value <= u });
        let pass = lower_ok && upper_ok;
        if !pass {
            report.counterexamples.push(r.n);
        }
        report.verdicts.push(LevelVerdict { n: r.n, d: r.d, value, lower, upper, pass });
        used.push(r);
    }
    match id {
        QuestionId::Q41 if p == 2 => report.notes.push("question 4.1 concerns odd p".into()),
        QuestionId::Q42 => {
            if p != 2 {
                report.notes.push("question 4.2 concerns p = 2".into());
            }
            if let Ok(fit) = fit_records(used.iter().copied(), Stat::A) {
                let s = fit.alpha_f64();
                report.fitted_slope = Some(s);
                report.notes.push(format!(
                    "fitted slope of a against d is {s:.4}, {} 1/2 by {:.4}",
                    if s >= 0.5 { "above" } else { "below" },
                    (s - 0.5).abs()
                ));
            }
        }
        QuestionId::Q43 | QuestionId::Q44 if constants.c2.is_none() || constants.beta.is_none() => {
            report.notes.push("upper bound not checked: supply both C2 and beta".into())
        }
        _ => {}
    }
    Ok(report)
}
