use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hecke::Pipeline;
use crate::localdec::Decomposition;

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Residue-degree statistics of the residual Hecke algebra at one level.
///
/// When the algebra is zero there are no maximal ideals; `b` is then stored
/// as `0/1` so that `b * #Spec = a` still holds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelRecord {
    pub schema: u32,
    pub p: u64,
    pub k: u32,
    #[serde(rename = "N")]
    pub n: u64,
    pub level_equals_p: bool,
    pub pipeline: Pipeline,
    pub d: usize,
    pub num_max_ideals: usize,
    pub residue_degrees: Vec<usize>,
    pub local_dims: Vec<usize>,
    pub a: usize,
    pub b_num: u64,
    pub b_den: u64,
    pub c: usize,
    pub semisimple: bool,
    pub tool_version: String,
    pub wall_time_ms: u64,
}

/// Identifies a record in the cache.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RecordKey {
    pub p: u64,
    pub k: u32,
    pub n: u64,
    pub pipeline: Pipeline,
}

impl LevelRecord {
    pub fn from_decomposition(
        p: u64,
        k: u32,
        n: u64,
        pipeline: Pipeline,
        dec: &Decomposition,
        wall_time_ms: u64,
    ) -> Result<Self> {
        let mut residue_degrees = dec.residue_degrees();
        residue_degrees.sort_unstable();
        let local_dims = dec.local_dimensions();
        let a: usize = residue_degrees.iter().sum();
        let num_max_ideals = residue_degrees.len();
        let (b_num, b_den) = if num_max_ideals == 0 {
            (0, 1)
        } else {
            let g = num_integer::gcd(a, num_max_ideals);
            ((a / g) as u64, (num_max_ideals / g) as u64)
        };
        let rec = Self {
            schema: SCHEMA_VERSION,
            p,
            k,
            n,
            level_equals_p: n == p,
            pipeline,
            d: dec.ambient_dimension,
            num_max_ideals,
            c: residue_degrees.iter().copied().max().unwrap_or(0),
            residue_degrees,
            local_dims,
            a,
            b_num,
            b_den,
            semisimple: dec.factors.iter().all(|f| f.is_field()),
            tool_version: TOOL_VERSION.to_string(),
            wall_time_ms,
        };
        rec.validate()?;
        Ok(rec)
    }

    pub fn key(&self) -> RecordKey {
        RecordKey { p: self.p, k: self.k, n: self.n, pipeline: self.pipeline }
    }

    pub fn b(&self) -> BigRational {
        BigRational::new(BigInt::from(self.b_num), BigInt::from(self.b_den))
    }

    pub fn b_f64(&self) -> f64 {
        self.b_num as f64 / self.b_den as f64
    }

    /// Copy with the timing zeroed, for comparisons between runs.
    pub fn without_timing(&self) -> Self {
        Self { wall_time_ms: 0, ..self.clone() }
    }

    /// Check the record-level invariants; returns the first violation.
    pub fn validate(&self) -> Result<()> {
        let fail =
            |what: &str| Err(Error::Inconsistent(format!("record p={} k={} N={}: {what}", self.p, self.k, self.n)));
        if self.schema != SCHEMA_VERSION {
            return fail("unsupported schema");
        }
        if self.b_den == 0 {
            return fail("zero denominator in b");
        }
        if self.residue_degrees.len() != self.num_max_ideals || self.local_dims.len() != self.num_max_ideals {
            return fail("multiset sizes differ from #Spec");
        }
        if !self.residue_degrees.windows(2).all(|w| w[0] <= w[1]) || !self.local_dims.windows(2).all(|w| w[0] <= w[1]) {
            return fail("multisets not sorted");
        }
        if self.residue_degrees.iter().sum::<usize>() != self.a {
            return fail("a is not the sum of the residue degrees");
        }
        if self.residue_degrees.iter().copied().max().unwrap_or(0) != self.c {
            return fail("c is not the maximal residue degree");
        }
        if self.a > self.d {
            return fail("a > d");
        }
        if self.c > self.a {
            return fail("c > a");
        }
        if self.b_num as u128 * self.num_max_ideals as u128 != self.a as u128 * self.b_den as u128 {
            return fail("b * #Spec != a");
        }
        if self.local_dims.iter().sum::<usize>() != self.d {
            return fail("local dimensions do not sum to d");
        }
        if self.semisimple != (self.a == self.d) {
            return fail("semisimple does not match a = d");
        }
        if self.level_equals_p != (self.n == self.p) {
            return fail("level_equals_p flag is wrong");
        }
        Ok(())
    }
}
