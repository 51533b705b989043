//! Batch processing over SVG corpora and JSONL record files.

mod commands;
mod config;
mod curriculum;
mod stats;

use std::fs;
use std::io::{self, BufRead, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;
use walkdir::WalkDir;

pub use commands::{
    run_augment, run_classify, run_curriculum, run_normalize, run_score, run_stats, run_verify,
    to_jsonl, AugmentOptions, CommandOutcome, NormalizeOptions, NormalizeSummary, VerifyRow,
};
pub use config::{ConfigError, PartialSettings, Settings, ENV_PREFIX};
pub use curriculum::{build_curriculum, CurriculumManifest, CurriculumStage, DEFAULT_EPOCHS};
pub use stats::{compute_stats, CategoryStats, LevelShare, StatsSummary, HISTOGRAM_BIN_WIDTH};

use crate::augment::AugmentError;
use crate::classify::{classify, Classification};
use crate::model::Document;
use crate::normalize::{normalize_document, NormalizeError, NormalizeReport};
use crate::parser::{parse_document, serialize_document, ParseError, SerializeError};
use crate::rewards::RewardError;
use crate::verify::VerifyError;

/// Process exit status of a subcommand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ExitStatus {
    Success = 0,
    PartialFailure = 1,
    UsageOrIo = 2,
    VerificationFailed = 3,
}

impl ExitStatus {
    pub fn code(self) -> u8 {
        self as u8
    }
}

/// A failure confined to one input file or row.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ItemError {
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Normalize(#[from] NormalizeError),
    #[error(transparent)]
    Serialize(#[from] SerializeError),
    #[error("{0}")]
    Schema(String),
    #[error(transparent)]
    Reward(#[from] RewardError),
    #[error(transparent)]
    Augment(#[from] AugmentError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error("no counterpart at {0}")]
    MissingCounterpart(String),
}

impl ItemError {
    /// Stable name of the failure, used in error rows.
    pub fn kind(&self) -> &'static str {
        match self {
            ItemError::Io(_) => "Io",
            ItemError::Parse(ParseError::MalformedXml(_)) => "MalformedXml",
            ItemError::Parse(ParseError::MissingRoot) => "MissingRoot",
            ItemError::Parse(ParseError::NoCanvas) => "NoCanvas",
            ItemError::Normalize(e) => match e {
                NormalizeError::NoCurrentPoint { .. } => "NoCurrentPoint",
                NormalizeError::DegenerateShape(_) => "DegenerateShape",
                NormalizeError::SingularTransform(_) => "SingularTransform",
                NormalizeError::PathData { .. } => "PathSyntax",
                NormalizeError::EmptyDocument => "EmptyDocument",
                NormalizeError::Model(_) => "InvalidGeometry",
            },
            ItemError::Serialize(_) => "NotNormalized",
            ItemError::Schema(_) => "SchemaError",
            ItemError::Reward(RewardError::InvalidReference) => "InvalidReference",
            ItemError::Reward(RewardError::Unparseable) => "Unparseable",
            ItemError::Reward(RewardError::InvalidParams { .. }) => "InvalidParams",
            ItemError::Augment(e) => match e {
                AugmentError::TooFewPaths(_) => "TooFewPaths",
                AugmentError::PaletteTooSmall { .. } => "PaletteTooSmall",
                AugmentError::NoSwapAvailable => "NoSwapAvailable",
                AugmentError::NoVariants | AugmentError::PaletteTooShort(_) => "InvalidSpec",
                AugmentError::NotNormalized => "NotNormalized",
            },
            ItemError::Verify(VerifyError::PathCountMismatch { .. }) => "PathCountMismatch",
            ItemError::Verify(_) => "VerifyError",
            ItemError::MissingCounterpart(_) => "MissingCounterpart",
        }
    }

    pub fn row(&self, id: &str) -> ErrorRow {
        ErrorRow {
            id: id.to_owned(),
            kind: self.kind().to_owned(),
            message: self.to_string(),
        }
    }
}

/// One line of an `errors.jsonl` sidecar.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorRow {
    pub id: String,
    pub kind: String,
    pub message: String,
}

/// A failure that stops a whole subcommand.
#[derive(Debug, Error)]
pub enum CommandError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}:{line}: {message}")]
    Schema {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("{0}")]
    Usage(String),
    #[error("--strict: {id}: {source}")]
    Strict { id: String, source: ItemError },
}

impl CommandError {
    pub(crate) fn io(path: &Path, source: io::Error) -> Self {
        CommandError::Io {
            path: path.to_owned(),
            source,
        }
    }
}

/// The SVG-side record of the dataset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetRecord {
    pub id: String,
    pub svg: String,
    pub color_category: String,
    pub difficulty_level: String,
    pub command_count: usize,
    pub path_count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub augmented_from: Option<String>,
    /// Set when the source was not already in canonical form.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub auto_normalized: bool,
}

impl DatasetRecord {
    pub fn new(id: String, svg: String, c: &Classification) -> Self {
        Self {
            id,
            svg,
            color_category: c.color_category.as_str().to_owned(),
            difficulty_level: c.level.as_str().to_owned(),
            command_count: c.command_count,
            path_count: c.path_count,
            augmented_from: None,
            auto_normalized: false,
        }
    }

    /// Re-derives the metadata from `svg` and compares it with the stored fields.
    pub fn self_check(&self) -> Result<bool, ItemError> {
        let normalized = normalize_text(&self.svg)?;
        let c = classify(&normalized.document);
        Ok(c.color_category.as_str() == self.color_category
            && c.level.as_str() == self.difficulty_level
            && c.command_count == self.command_count
            && c.path_count == self.path_count)
    }
}

/// Stable record id: relative path without extension, separators as `__`.
pub fn record_id(relative: &Path) -> String {
    let stem = relative.with_extension("");
    stem.components()
        .map(|c| c.as_os_str().to_string_lossy().into_owned())
        .collect::<Vec<_>>()
        .join("__")
}

/// Relative paths of every `.svg` file below `root`, sorted.
pub fn discover_svgs(root: &Path) -> Result<Vec<PathBuf>, CommandError> {
    let mut out = Vec::new();
    for entry in WalkDir::new(root).sort_by_file_name() {
        let entry = entry.map_err(|e| {
            let path = e.path().unwrap_or(root).to_owned();
            CommandError::Io {
                path,
                source: e.into_io_error().unwrap_or_else(|| io::Error::other("directory walk failed")),
            }
        })?;
        let is_svg = entry.path().extension().is_some_and(|e| e.eq_ignore_ascii_case("svg"));
        if entry.file_type().is_file() && is_svg {
            let rel = entry.path().strip_prefix(root).expect("walkdir yields paths under root");
            out.push(rel.to_owned());
        }
    }
    out.sort();
    Ok(out)
}

/// A normalized document with its canonical text.
#[derive(Debug, Clone)]
pub struct Normalized {
    pub document: Document,
    pub svg: String,
    pub report: NormalizeReport,
}

/// Parses, normalizes and serializes one SVG text.
pub fn normalize_text(text: &str) -> Result<Normalized, ItemError> {
    let (raw, _) = parse_document(text)?;
    let (document, report) = normalize_document(&raw)?;
    let svg = serialize_document(&document)?;
    Ok(Normalized { document, svg, report })
}

/// Normalizes and classifies one SVG text into a record.
pub fn record_from_svg(id: String, text: &str) -> Result<DatasetRecord, ItemError> {
    let normalized = normalize_text(text)?;
    let mut record = DatasetRecord::new(id, normalized.svg.clone(), &classify(&normalized.document));
    record.auto_normalized = text.trim_end() != normalized.svg;
    Ok(record)
}

/// Sibling of `path` holding its error rows: `records.jsonl` → `records.errors.jsonl`.
pub fn sidecar_path(path: &Path) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}.errors.jsonl"))
}

/// Reads one JSON object per non-empty line.
pub fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>, CommandError> {
    let file = fs::File::open(path).map_err(|e| CommandError::io(path, e))?;
    let mut rows = Vec::new();
    for (i, line) in io::BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| CommandError::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let row = serde_json::from_str(&line).map_err(|e| CommandError::Schema {
            path: path.to_owned(),
            line: i + 1,
            message: e.to_string(),
        })?;
        rows.push(row);
    }
    Ok(rows)
}

/// Writes one JSON object per line, creating parent directories.
pub fn write_jsonl<T: Serialize>(path: &Path, rows: &[T]) -> Result<(), CommandError> {
    let text = jsonl_string(rows);
    write_file(path, text.as_bytes())
}

pub(crate) fn jsonl_string<T: Serialize>(rows: &[T]) -> String {
    let mut out = String::new();
    for row in rows {
        out.push_str(&serde_json::to_string(row).expect("records serialize to JSON"));
        out.push('\n');
    }
    out
}

pub(crate) fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CommandError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| CommandError::io(parent, e))?;
    }
    let file = fs::File::create(path).map_err(|e| CommandError::io(path, e))?;
    let mut w = BufWriter::new(file);
    w.write_all(bytes)
        .and_then(|_| w.flush())
        .map_err(|e| CommandError::io(path, e))
}

/// Runs `f` on a pool of `jobs` threads (0 = one per core).
pub(crate) fn with_pool<R: Send>(jobs: usize, f: impl FnOnce() -> R + Send) -> Result<R, CommandError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CommandError::Usage(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(f))
}
