//! Append-only JSON-lines store of [`LevelRecord`]s.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use log::warn;

use super::record::{LevelRecord, RecordKey};
use crate::error::Result;

/// A line of the cache that was not loaded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkippedLine {
    pub line: usize,
    pub reason: String,
}

#[derive(Clone, Debug, Default)]
pub struct Cache {
    records: BTreeMap<RecordKey, LevelRecord>,
    pub skipped: Vec<SkippedLine>,
}

impl Cache {
    /// Read a cache file; a missing file is an empty cache. Lines that fail to
    /// parse or violate the record invariants are skipped with a warning. A
    /// later duplicate of a key replaces the earlier one.
    pub fn load(path: &Path) -> Result<Self> {
        let mut cache = Self::default();
        let file = match File::open(path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(cache),
            Err(e) => return Err(e.into()),
        };
        for (i, line) in BufReader::new(file).lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let parsed = serde_json::from_str::<LevelRecord>(&line)
                .map_err(|e| e.to_string())
                .and_then(|r| r.validate().map(|_| r).map_err(|e| e.to_string()));
            match parsed {
                Ok(r) => {
                    cache.records.insert(r.key(), r);
                }
                Err(reason) => {
                    warn!("{}:{}: skipping cache line: {reason}", path.display(), i + 1);
                    cache.skipped.push(SkippedLine { line: i + 1, reason });
                }
            }
        }
        Ok(cache)
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn contains(&self, key: &RecordKey) -> bool {
        self.records.contains_key(key)
    }

    pub fn get(&self, key: &RecordKey) -> Option<&LevelRecord> {
        self.records.get(key)
    }

    pub fn insert(&mut self, r: LevelRecord) {
        self.records.insert(r.key(), r);
    }

    /// All records, ordered by `(p, k, N, pipeline)`.
    pub fn records(&self) -> impl Iterator<Item = &LevelRecord> {
        self.records.values()
    }

    /// Records for one `(p, k)` and pipeline, sorted by level.
    pub fn slice(&self, p: u64, k: u32, pipeline: crate::hecke::Pipeline) -> Vec<&LevelRecord> {
        self.records.values().filter(|r| r.p == p && r.k == k && r.pipeline == pipeline).collect()
    }
}

/// Writes one record per line, flushing after each so an interrupted sweep
/// leaves at most a truncated last line.
pub struct CacheWriter {
    file: File,
}

impl CacheWriter {
    pub fn open(path: &Path) -> Result<Self> {
        if let Some(dir) = path.parent() {
            if !dir.as_os_str().is_empty() {
                std::fs::create_dir_all(dir)?;
            }
        }
        let mut file = OpenOptions::new().create(true).append(true).read(true).open(path)?;
        // a previous run killed mid-line would otherwise glue two records
        let len = file.metadata()?.len();
        if len > 0 {
            use std::io::{Read, Seek, SeekFrom};
            let mut last = [0u8; 1];
            file.seek(SeekFrom::Start(len - 1))?;
            file.read_exact(&mut last)?;
            if last[0] != b'\n' {
                file.write_all(b"\n")?;
            }
        }
        Ok(Self { file })
    }

    pub fn append(&mut self, r: &LevelRecord) -> Result<()> {
        let mut line = serde_json::to_string(r)?;
        line.push('\n');
        self.file.write_all(line.as_bytes())?;
        self.file.flush()?;
        Ok(())
    }
}
