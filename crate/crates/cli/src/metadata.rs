//! Run metadata written next to every output.

use std::path::{Path, PathBuf};

use dca_forge::io::{file_digest, files_digest, list_files};
use serde::Serialize;
use serde_json::Value;

use crate::args::Command;

pub const METADATA_FILE: &str = "run_metadata.json";

/// Digest of one input. Directories and manifest-referenced file sets get a
/// combined digest over their files; `error` is set when hashing failed.
#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub path: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sha256: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub files: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl InputDigest {
    pub fn file(path: &Path) -> Self {
        let (sha256, error) = split(file_digest(path));
        Self {
            path: path.display().to_string(),
            sha256,
            files: None,
            error,
        }
    }

    pub fn dir(path: &Path) -> Self {
        match list_files(path) {
            Ok(files) => Self::set(path.display().to_string(), &files),
            Err(e) => Self {
                path: path.display().to_string(),
                sha256: None,
                files: None,
                error: Some(e.to_string()),
            },
        }
    }

    pub fn set(label: String, files: &[PathBuf]) -> Self {
        let (sha256, error) = split(files_digest(files));
        Self {
            path: label,
            sha256,
            files: Some(files.len()),
            error,
        }
    }
}

fn split(r: dca_forge::Result<String>) -> (Option<String>, Option<String>) {
    match r {
        Ok(d) => (Some(d), None),
        Err(e) => (None, Some(e.to_string())),
    }
}

#[derive(Debug, Serialize)]
pub struct RunMetadata<'a> {
    pub tool: &'static str,
    pub version: &'static str,
    pub subcommand: &'static str,
    pub status: &'static str,
    pub exit_code: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub parameters: &'a Command,
    pub inputs: Vec<InputDigest>,
    pub outputs: Vec<String>,
    pub summary: Value,
}

impl RunMetadata<'_> {
    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            std::fs::create_dir_all(parent)?;
        }
        let mut text = serde_json::to_string_pretty(self).map_err(std::io::Error::other)?;
        text.push('\n');
        std::fs::write(path, text)
    }
}

/// Default metadata location: inside output directories, beside output files.
pub fn default_path(command: &Command) -> PathBuf {
    let beside = |file: &Path| file.with_extension("run_metadata.json");
    match command {
        Command::Mask(a) => a.out_dir.join(METADATA_FILE),
        Command::Categorize(a) => a.out_dir.join(METADATA_FILE),
        Command::Synth(a) => a.out_dir.join(METADATA_FILE),
        Command::Inpaint(a) => a.out_dir.join(METADATA_FILE),
        Command::HeatmapStats(a) => beside(&a.out),
        Command::DatasetBuild(a) => beside(&a.out),
        Command::ContrastProbe(a) => beside(&a.out),
        Command::Metrics(a) => a
            .out
            .as_deref()
            .map(beside)
            .unwrap_or_else(|| PathBuf::from(METADATA_FILE)),
    }
}
