use std::collections::HashSet;
use std::path::PathBuf;
use std::sync::mpsc;

use log::{error, info};
use rayon::prelude::*;

use super::cache::{Cache, CacheWriter};
use super::compute::compute_levels;
use super::record::{LevelRecord, RecordKey};
use crate::error::{Error, Result};
use crate::hecke::Pipeline;

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub primes: Vec<u64>,
    pub k: u32,
    pub levels: Vec<u64>,
    pub pipelines: Vec<Pipeline>,
    pub jobs: usize,
    pub cache: PathBuf,
    pub allow_lower_weight: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SweepReport {
    pub computed: usize,
    pub already_cached: usize,
    pub failed: Vec<(u64, String)>,
    pub corrupt_lines: usize,
}

/// Compute every missing `(p, k, N, pipeline)` record and append it to the
/// cache. Levels run in parallel on `jobs` threads; finished records go
/// through a channel to the single writer on the calling thread.
pub fn sweep(cfg: &SweepConfig) -> Result<SweepReport> {
    let cache = Cache::load(&cfg.cache)?;
    let mut report = SweepReport { corrupt_lines: cache.skipped.len(), ..Default::default() };
    let mut tasks: Vec<(u64, Vec<u64>, Vec<Pipeline>)> = Vec::new();
    let mut missing = HashSet::new();
    for &n in &cfg.levels {
        let mut primes = Vec::new();
        let mut pipelines = Vec::new();
        for &pipeline in &cfg.pipelines {
            for &p in &cfg.primes {
                let key = RecordKey { p, k: cfg.k, n, pipeline };
                if cache.contains(&key) {
                    report.already_cached += 1;
                } else {
                    missing.insert(key);
                    if !primes.contains(&p) {
                        primes.push(p);
                    }
                    if !pipelines.contains(&pipeline) {
                        pipelines.push(pipeline);
                    }
                }
            }
        }
        if !primes.is_empty() {
            tasks.push((n, primes, pipelines));
        }
    }
    drop(cache);
    // large levels first so the tail of the run stays parallel
    tasks.sort_by_key(|t| std::cmp::Reverse(t.0));
    if tasks.is_empty() {
        return Ok(report);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs.max(1))
        .build()
        .map_err(|e| Error::Inconsistent(format!("thread pool: {e}")))?;
    let mut writer = CacheWriter::open(&cfg.cache)?;
    let (tx, rx) = mpsc::channel::<(u64, Result<Vec<LevelRecord>>)>();
    let k = cfg.k;
    let allow = cfg.allow_lower_weight;
    let written = std::thread::scope(|s| -> Result<()> {
        s.spawn(move || {
            pool.install(|| {
                tasks.into_par_iter().for_each_with(tx, |tx, (n, primes, pipelines)| {
                    let res = compute_levels(&primes, k, n, &pipelines, allow);
                    let _ = tx.send((n, res));
                });
            });
        });
        for (n, res) in rx {
            match res {
                Ok(records) => {
                    for r in records {
                        // a task may cover pairs that were already cached
                        if !missing.contains(&r.key()) {
                            continue;
                        }
                        writer.append(&r)?;
                        report.computed += 1;
                    }
                }
                Err(e) => {
                    error!("level {n} failed: {e}");
                    report.failed.push((n, e.to_string()));
                }
            }
        }
        Ok(())
    });
    written?;
    report.failed.sort();
    info!("sweep: {} computed, {} cached, {} failed", report.computed, report.already_cached, report.failed.len());
    Ok(report)
}
