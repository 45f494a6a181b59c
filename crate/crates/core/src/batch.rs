//! Row types shared by the file-driven batch drivers.

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{DcaError, Result};

/// One input image of a batch. Extra manifest columns are ignored.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceRow {
    pub image_id: String,
    pub path: String,
}

impl SourceRow {
    pub fn new(image_id: impl Into<String>, path: impl Into<String>) -> Self {
        Self {
            image_id: image_id.into(),
            path: path.into(),
        }
    }

    /// The image path, taken relative to `base` unless already absolute.
    pub fn resolve(&self, base: Option<&Path>) -> PathBuf {
        let p = Path::new(&self.path);
        match base {
            Some(b) if p.is_relative() => b.join(p),
            _ => p.to_path_buf(),
        }
    }
}

/// A row that failed; the batch carries on without it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowError {
    pub image_id: String,
    pub error: String,
}

/// Runs `f(index, row)` over all rows in parallel. Results keep row order;
/// repeated ids fail with [`DcaError::DuplicateKey`] without calling `f`.
pub(crate) fn run_rows<R, T, F>(rows: &[R], id: impl Fn(&R) -> &str + Sync, f: F) -> (Vec<T>, Vec<RowError>)
where
    R: Sync,
    T: Send,
    F: Fn(usize, &R) -> Result<T> + Sync,
{
    let mut seen = HashSet::new();
    let dupes: Vec<bool> = rows.iter().map(|r| !seen.insert(id(r))).collect();
    let results: Vec<_> = rows
        .par_iter()
        .enumerate()
        .map(|(i, row)| {
            let res = if dupes[i] {
                Err(DcaError::DuplicateKey(id(row).to_string()))
            } else {
                f(i, row)
            };
            res.map_err(|e| RowError {
                image_id: id(row).to_string(),
                error: e.to_string(),
            })
        })
        .collect();
    let mut ok = Vec::new();
    let mut errors = Vec::new();
    for r in results {
        match r {
            Ok(v) => ok.push(v),
            Err(e) => errors.push(e),
        }
    }
    (ok, errors)
}

/// The error for a batch where every row failed.
pub(crate) fn all_failed(what: &str, errors: &[RowError]) -> DcaError {
    match errors.first() {
        Some(e) => DcaError::Data(format!(
            "no rows {what}; first failure: {}: {}",
            e.image_id, e.error
        )),
        None => DcaError::EmptyInput(format!("no rows {what}")),
    }
}

pub(crate) fn create_dir(path: &Path) -> Result<()> {
    std::fs::create_dir_all(path).map_err(|source| DcaError::Io {
        path: path.to_path_buf(),
        source,
    })
}
