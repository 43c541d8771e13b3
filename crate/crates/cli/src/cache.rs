//! On-disk cache of prime records and reports.
//!
//! Every file name carries a prefix of the constants hash, so changing the
//! field data invalidates everything while a new tool version does not.
//! Files are written to a temporary name and renamed into place.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use spin16::arith::primes_up_to;
use spin16::classgroup::{records_in_range, PrimeRecord, CSV_HEADER};
use spin16::FieldConstants;

use crate::CliError;

pub struct Cache {
    dir: PathBuf,
    tag: String,
}

impl Cache {
    pub fn new(dir: &Path, constants_hash: &str) -> Self {
        Cache { dir: dir.to_path_buf(), tag: constants_hash.chars().take(16).collect() }
    }

    pub fn path(&self, key: &str, seed: u64, ext: &str) -> PathBuf {
        self.dir.join(format!("{key}_seed{seed}_{}.{ext}", self.tag))
    }

    pub fn read(&self, path: &Path) -> Option<String> {
        fs::read_to_string(path).ok()
    }

    pub fn write(&self, path: &Path, contents: &str) -> Result<(), CliError> {
        let io_err = |e: io::Error| CliError::Failed(format!("cannot write {}: {e}", path.display()));
        fs::create_dir_all(&self.dir).map_err(io_err)?;
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        fs::write(&tmp, contents).map_err(io_err)?;
        fs::rename(&tmp, path).map_err(io_err)
    }

    fn records_path(&self, lo: u64, hi: u64) -> PathBuf {
        self.dir.join(format!("records_{lo}-{hi}_{}.csv", self.tag))
    }

    /// Records for the odd primes in [lo, hi], from the cache when a complete
    /// file exists and recomputed otherwise.
    pub fn records(&self, fc: &FieldConstants, lo: u64, hi: u64) -> Result<Vec<PrimeRecord>, CliError> {
        let path = self.records_path(lo, hi);
        let expected = primes_up_to(hi).into_iter().filter(|&p| p >= lo.max(3)).count();
        if let Some(text) = self.read(&path) {
            match parse_records(&text) {
                Some(recs) if recs.len() == expected => return Ok(recs),
                _ => eprintln!("spin16: discarding incomplete record cache {}", path.display()),
            }
        }
        let recs = records_in_range(fc, lo, hi).map_err(|e| CliError::Failed(e.to_string()))?;
        let mut out = String::with_capacity(recs.len() * 32);
        out.push_str(CSV_HEADER);
        out.push('\n');
        for r in &recs {
            out.push_str(&r.to_csv());
            out.push('\n');
        }
        self.write(&path, &out)?;
        Ok(recs)
    }
}

fn parse_records(text: &str) -> Option<Vec<PrimeRecord>> {
    let mut lines = text.lines();
    if lines.next()? != CSV_HEADER {
        return None;
    }
    lines.filter(|l| !l.is_empty()).map(|l| PrimeRecord::from_csv(l).ok()).collect()
}
