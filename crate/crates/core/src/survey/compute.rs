use std::time::Instant;

use log::{info, warn};

use super::record::LevelRecord;
use crate::arith::is_prime;
use crate::error::{Error, Result};
use crate::ffalg::PrimeField;
use crate::hecke::{
    build_integral, build_residual_direct, reduce_mod_p, regular_representation, Pipeline, ResidualHeckeAlgebra,
};
use crate::localdec::decompose;
use crate::modsym::{cuspidal, dim_oracle, sturm_bound, Domain};

/// Whether eigenforms of lower weight can reappear in weight `k` modulo `p`
/// through multiplication by the Hasse invariant, i.e. `k - (p - 1) >= 2`.
/// Weight 2 is never refused; `p = 2` there is the case under study.
pub fn lower_weight_contributions(p: u64, k: u32) -> bool {
    k > 2 && k as u64 > p
}

fn check_inputs(primes: &[u64], k: u32, n: u64, allow_lower_weight: bool) -> Result<()> {
    if k < 2 || k % 2 == 1 {
        return Err(Error::InvalidWeight(k));
    }
    if n == 0 {
        return Err(Error::InvalidLevel(n));
    }
    if !is_prime(n) {
        return Err(Error::CompositeLevel(n));
    }
    for &p in primes {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if !allow_lower_weight && lower_weight_contributions(p, k) {
            return Err(Error::Refused(format!(
                "weight {k} modulo {p} mixes in forms of lower weight; pass the override to compute it anyway"
            )));
        }
    }
    Ok(())
}

fn record_for(alg: &ResidualHeckeAlgebra, p: u64, start: Instant, shared_ms: u64) -> Result<LevelRecord> {
    let dec = decompose(&regular_representation(alg))?;
    let ms = shared_ms + start.elapsed().as_millis() as u64;
    LevelRecord::from_decomposition(p, alg.weight, alg.level, alg.pipeline, &dec, ms)
}

/// Records for every `(p, pipeline)` pair at one prime level. The integral
/// Hecke algebra is built once and reduced modulo each `p`.
///
/// Pipeline A fails if its dimension differs from the dimension formula.
/// Pipeline B may legitimately exceed it modulo 2 and 3, where the mod-p
/// symbols pick up torsion; that is logged, not rejected.
pub fn compute_levels(
    primes: &[u64],
    k: u32,
    n: u64,
    pipelines: &[Pipeline],
    allow_lower_weight: bool,
) -> Result<Vec<LevelRecord>> {
    check_inputs(primes, k, n, allow_lower_weight)?;
    let expected = dim_oracle(n, k)? as usize;
    let b = sturm_bound(n, k);
    let mut out = Vec::new();
    for &pipeline in pipelines {
        match pipeline {
            Pipeline::A => {
                let start = Instant::now();
                let cusp = cuspidal(n, k, Domain::Rational)?;
                let integral = build_integral(&cusp, b)?;
                if integral.rank() != expected {
                    return Err(Error::RankMismatch { computed: integral.rank(), expected });
                }
                let shared = start.elapsed().as_millis() as u64;
                for &p in primes {
                    let start = Instant::now();
                    out.push(record_for(&reduce_mod_p(&integral, p)?, p, start, shared)?);
                }
            }
            Pipeline::B => {
                for &p in primes {
                    let start = Instant::now();
                    let cusp = cuspidal(n, k, Domain::Prime(PrimeField::new(p)?))?;
                    let alg = build_residual_direct(&cusp, b)?;
                    if alg.dimension != expected {
                        warn!(
                            "pipeline B at p={p} k={k} N={n}: dimension {} vs {expected} in characteristic 0",
                            alg.dimension
                        );
                    }
                    out.push(record_for(&alg, p, start, 0)?);
                }
            }
        }
    }
    info!("N={n} k={k}: {} records", out.len());
    Ok(out)
}

/// The record of a single `(p, k, N)` via one pipeline.
pub fn compute_level(p: u64, k: u32, n: u64, pipeline: Pipeline) -> Result<LevelRecord> {
    compute_level_with(p, k, n, pipeline, false)
}

/// As [`compute_level`], optionally lifting the refusal of weights where
/// lower-weight forms contribute.
pub fn compute_level_with(p: u64, k: u32, n: u64, pipeline: Pipeline, allow_lower_weight: bool) -> Result<LevelRecord> {
    let mut v = compute_levels(&[p], k, n, &[pipeline], allow_lower_weight)?;
    Ok(v.pop().expect("one record"))
}
