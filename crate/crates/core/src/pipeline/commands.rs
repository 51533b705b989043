use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use super::{
    build_curriculum, compute_stats, discover_svgs, jsonl_string, normalize_text, read_jsonl, record_from_svg,
    record_id, sidecar_path, with_pool, write_file, write_jsonl, CommandError, DatasetRecord, ErrorRow, ExitStatus,
    ItemError,
};
use crate::augment::{augment_document, variant_seed, AugmentOps, AugmentSpec};
use crate::classify::classify;
use crate::normalize::{normalize_document, NormalizeReport};
use crate::parser::{parse_document, serialize_document};
use crate::rewards::{breakdown, path_count, RewardError, RewardParams};
use crate::verify::{describe, verify_normalization};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandOutcome {
    pub status: ExitStatus,
    /// Items written successfully.
    pub succeeded: usize,
    /// Items that became error rows.
    pub failed: usize,
    pub message: String,
}

impl CommandOutcome {
    fn from_counts(succeeded: usize, failed: usize, message: String) -> Self {
        let status = if failed == 0 {
            ExitStatus::Success
        } else {
            ExitStatus::PartialFailure
        };
        Self {
            status,
            succeeded,
            failed,
            message,
        }
    }
}

fn read_text(path: &Path) -> Result<String, ItemError> {
    fs::read_to_string(path).map_err(|e| ItemError::Io(format!("{}: {e}", path.display())))
}

#[derive(Debug, Clone, Default)]
pub struct NormalizeOptions {
    pub strict: bool,
    pub report: Option<PathBuf>,
    pub jobs: usize,
}

/// Aggregate written by `normalize --report`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct NormalizeSummary {
    pub files: usize,
    pub normalized: usize,
    pub failed: usize,
    pub report: NormalizeReport,
}

/// Normalizes every `.svg` below `input` into the same relative path below
/// `output`. Failures go to `output/errors.jsonl`; `strict` stops at the first.
pub fn run_normalize(input: &Path, output: &Path, options: &NormalizeOptions) -> Result<CommandOutcome, CommandError> {
    let files = discover_svgs(input)?;
    let results: Vec<_> = with_pool(options.jobs, || {
        files
            .par_iter()
            .map(|rel| read_text(&input.join(rel)).and_then(|t| normalize_text(&t)))
            .collect()
    })?;

    let mut summary = NormalizeSummary {
        files: files.len(),
        ..Default::default()
    };
    let mut errors = Vec::new();
    for (rel, result) in files.iter().zip(results) {
        let id = record_id(rel);
        match result {
            Ok(n) => {
                write_file(&output.join(rel), format!("{}\n", n.svg).as_bytes())?;
                summary.report.merge(&n.report);
                summary.normalized += 1;
            }
            Err(e) if options.strict => return Err(CommandError::Strict { id, source: e }),
            Err(e) => {
                log::warn!("{}: {e}", rel.display());
                errors.push(e.row(&id));
            }
        }
    }
    summary.failed = errors.len();
    write_jsonl(&output.join("errors.jsonl"), &errors)?;
    if let Some(report) = &options.report {
        let json = serde_json::to_string_pretty(&summary).expect("summary serializes");
        write_file(report, format!("{json}\n").as_bytes())?;
    }
    Ok(CommandOutcome::from_counts(
        summary.normalized,
        summary.failed,
        format!("normalized {} of {} files", summary.normalized, summary.files),
    ))
}

/// Classifies every `.svg` below `input` into `out` as dataset records sorted by id.
pub fn run_classify(input: &Path, out: &Path, jobs: usize) -> Result<CommandOutcome, CommandError> {
    let files = discover_svgs(input)?;
    let mut results: Vec<(String, Result<DatasetRecord, ItemError>)> = with_pool(jobs, || {
        files
            .par_iter()
            .map(|rel| {
                let id = record_id(rel);
                let record = read_text(&input.join(rel)).and_then(|t| record_from_svg(id.clone(), &t));
                (id, record)
            })
            .collect()
    })?;
    results.sort_by(|a, b| a.0.cmp(&b.0));
    let (records, errors) = split(results);
    write_jsonl(out, &records)?;
    write_jsonl(&sidecar_path(out), &errors)?;
    Ok(CommandOutcome::from_counts(
        records.len(),
        errors.len(),
        format!("classified {} files", records.len()),
    ))
}

fn split<T>(results: Vec<(String, Result<T, ItemError>)>) -> (Vec<T>, Vec<ErrorRow>) {
    let mut ok = Vec::new();
    let mut errors = Vec::new();
    for (id, r) in results {
        match r {
            Ok(v) => ok.push(v),
            Err(e) => {
                log::warn!("{id}: {e}");
                errors.push(e.row(&id));
            }
        }
    }
    (ok, errors)
}

/// Histogram and level proportions of a record file, as pretty JSON.
pub fn run_stats(records: &Path, out: Option<&Path>) -> Result<String, CommandError> {
    let rows: Vec<DatasetRecord> = read_jsonl(records)?;
    let summary = compute_stats(&rows).map_err(|(i, e)| CommandError::Schema {
        path: records.to_owned(),
        line: i + 1,
        message: e.to_string(),
    })?;
    let json = serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n";
    if let Some(out) = out {
        write_file(out, json.as_bytes())?;
    }
    Ok(json)
}

/// Curriculum manifest of a record file, as pretty JSON.
pub fn run_curriculum(
    records: &Path,
    epochs: [u32; 4],
    extension: Option<(&str, u32)>,
    out: Option<&Path>,
) -> Result<String, CommandError> {
    let rows: Vec<DatasetRecord> = read_jsonl(records)?;
    let manifest = build_curriculum(&rows, epochs, extension).map_err(|message| CommandError::Schema {
        path: records.to_owned(),
        line: 0,
        message,
    })?;
    let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
    if let Some(out) = out {
        write_file(out, json.as_bytes())?;
    }
    Ok(json)
}

type ScoredRow = (String, Result<Map<String, Value>, ItemError>);

fn score_row(row: &Map<String, Value>, params: &RewardParams) -> Result<Map<String, Value>, ItemError> {
    let field = |name: &str| {
        row.get(name)
            .and_then(Value::as_str)
            .ok_or_else(|| ItemError::Schema(format!("missing string field {name:?}")))
    };
    let generated = field("generated")?;
    let reference = field("reference")?;
    let n_reference = path_count(reference).map_err(|_| RewardError::InvalidReference)?;
    let b = breakdown(path_count(generated).ok(), n_reference, params);
    let mut out = row.clone();
    out.insert("integrity".into(), b.integrity.into());
    out.insert("match".into(), b.match_.into());
    out.insert("total".into(), b.total.into());
    out.insert("n_generated".into(), b.n_generated.into());
    out.insert("n_reference".into(), b.n_reference.into());
    Ok(out)
}

/// Appends reward fields to each `{id, generated, reference}` row, keeping input order.
pub fn run_score(pairs: &Path, out: &Path, params: &RewardParams, jobs: usize) -> Result<CommandOutcome, CommandError> {
    let rows: Vec<Value> = read_jsonl(pairs)?;
    let results: Vec<ScoredRow> = with_pool(jobs, || {
        rows.par_iter()
            .enumerate()
            .map(|(i, row)| {
                let id = row
                    .get("id")
                    .and_then(Value::as_str)
                    .map_or_else(|| format!("line{}", i + 1), str::to_owned);
                let scored = match row.as_object() {
                    Some(obj) => score_row(obj, params),
                    None => Err(ItemError::Schema("row is not a JSON object".into())),
                };
                (id, scored)
            })
            .collect()
    })?;
    let (scored, errors) = split(results);
    write_jsonl(out, &scored)?;
    write_jsonl(&sidecar_path(out), &errors)?;
    Ok(CommandOutcome::from_counts(
        scored.len(),
        errors.len(),
        format!("scored {} rows", scored.len()),
    ))
}

#[derive(Debug, Clone)]
pub struct AugmentOptions {
    pub spec: AugmentSpec,
    pub ops: AugmentOps,
    pub jobs: usize,
}

fn augment_record(
    record: &DatasetRecord,
    options: &AugmentOptions,
) -> Vec<(String, Result<DatasetRecord, ItemError>)> {
    let source = normalize_text(&record.svg);
    (0..options.spec.n_variants())
        .map(|v| {
            let id = format!("{}__aug{v}", record.id);
            let result = source.clone().and_then(|src| {
                let spec = options.spec.with_seed(variant_seed(options.spec.seed(), &record.id, v));
                let doc = augment_document(&src.document, &spec, options.ops)?;
                let svg = serialize_document(&doc)?;
                let mut out = DatasetRecord::new(id.clone(), svg, &classify(&doc));
                out.augmented_from = Some(record.id.clone());
                Ok(out)
            });
            (id, result)
        })
        .collect()
}

/// Emits `n_variants` augmented records per input record.
pub fn run_augment(records: &Path, out: &Path, options: &AugmentOptions) -> Result<CommandOutcome, CommandError> {
    let rows: Vec<DatasetRecord> = read_jsonl(records)?;
    let results: Vec<Vec<_>> = with_pool(options.jobs, || {
        rows.par_iter().map(|r| augment_record(r, options)).collect()
    })?;
    let (augmented, errors) = split(results.into_iter().flatten().collect());
    write_jsonl(out, &augmented)?;
    write_jsonl(&sidecar_path(out), &errors)?;
    Ok(CommandOutcome::from_counts(
        augmented.len(),
        errors.len(),
        format!(
            "{} variants from {} records ({} skipped)",
            augmented.len(),
            rows.len(),
            errors.len()
        ),
    ))
}

/// One line of the verification report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyRow {
    pub id: String,
    pub pass: bool,
    pub worst_path_deviation: f64,
}

fn verify_pair(raw_path: &Path, normalized_path: &Path, tolerance: f64) -> Result<(VerifyRow, String), ItemError> {
    let raw_text = read_text(raw_path)?;
    if !normalized_path.is_file() {
        return Err(ItemError::MissingCounterpart(normalized_path.display().to_string()));
    }
    let normalized_text = read_text(normalized_path)?;
    let (raw, _) = parse_document(&raw_text)?;
    let (converted, _) = parse_document(&normalized_text)?;
    let (doc, _) = normalize_document(&converted)?;
    let report = verify_normalization(&raw, &doc, tolerance)?;
    let worst = report.worst().map(|(i, r)| format!("path {i}: {}", describe(r))).unwrap_or_default();
    Ok((
        VerifyRow {
            id: String::new(),
            pass: report.passed,
            worst_path_deviation: report.worst_deviation(),
        },
        worst,
    ))
}

/// Verifies each normalized file against its raw source.
///
/// Exit status is 3 if any document exceeds `tolerance`, otherwise 1 if any
/// pair could not be checked.
pub fn run_verify(
    raw_dir: &Path,
    normalized_dir: &Path,
    tolerance: f64,
    out: Option<&Path>,
    jobs: usize,
) -> Result<(CommandOutcome, Vec<VerifyRow>), CommandError> {
    if !(tolerance.is_finite() && tolerance > 0.0) {
        return Err(CommandError::Usage(format!("tolerance must be positive, got {tolerance}")));
    }
    let files = discover_svgs(raw_dir)?;
    let results: Vec<_> = with_pool(jobs, || {
        files
            .par_iter()
            .map(|rel| {
                let id = record_id(rel);
                let r = verify_pair(&raw_dir.join(rel), &normalized_dir.join(rel), tolerance).map(|(mut row, worst)| {
                    row.id = id.clone();
                    (row, worst)
                });
                (id, r)
            })
            .collect()
    })?;
    let (checked, errors) = split(results);
    let rows: Vec<VerifyRow> = checked.iter().map(|(row, _)| row.clone()).collect();
    if let Some(out) = out {
        write_jsonl(out, &rows)?;
        write_jsonl(&sidecar_path(out), &errors)?;
    }
    let failures = rows.iter().filter(|r| !r.pass).count();
    let worst = checked
        .iter()
        .max_by(|a, b| a.0.worst_path_deviation.total_cmp(&b.0.worst_path_deviation));
    let mut message = format!("{} of {} documents within tolerance {tolerance}", rows.len() - failures, files.len());
    if let Some((row, detail)) = worst {
        message.push_str(&format!("; worst {}: {detail}", row.id));
    }
    let mut outcome = CommandOutcome::from_counts(rows.len() - failures, errors.len() + failures, message);
    if failures > 0 {
        outcome.status = ExitStatus::VerificationFailed;
    }
    Ok((outcome, rows))
}

/// JSONL text of rows, for callers that print instead of writing files.
pub fn to_jsonl<T: Serialize>(rows: &[T]) -> String {
    jsonl_string(rows)
}
