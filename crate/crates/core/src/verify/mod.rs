//! Geometric checks that normalization preserved every outline.

mod deviation;
mod flatten;
mod sample;

use serde::Serialize;
use thiserror::Error;

pub use deviation::{max_deviation, outline_deviation, DeviationReport};
pub use flatten::{flatten_cubic, point_segment_distance, Polyline};
pub use sample::{flatten_path, sample_outline, sample_outline_with, Outline, OutlineSource, SampleOptions};

use crate::model::{AffineTransform, Document, Paint, Point};
use crate::parser::{ElementKind, PathDataError, RawDocument};

/// Default pass threshold in canvas units.
pub const DEFAULT_TOLERANCE: f64 = 0.5;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VerifyError {
    #[error("degenerate <{0}>")]
    DegenerateShape(&'static str),
    #[error("at least 2 samples per segment are required, got {0}")]
    SampleCount(usize),
    #[error("tolerance must be finite and positive, got {0}")]
    Tolerance(f64),
    #[error("source has {expected} drawable elements but the normalized document has {actual} paths")]
    PathCountMismatch { expected: usize, actual: usize },
    #[error(transparent)]
    PathData(#[from] PathDataError),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub passed: bool,
    pub tolerance: f64,
    /// One entry per normalized path, in document order.
    pub paths: Vec<DeviationReport>,
}

impl VerificationReport {
    /// Index and report of the path with the largest deviation.
    pub fn worst(&self) -> Option<(usize, &DeviationReport)> {
        self.paths
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.max_deviation.total_cmp(&b.1.max_deviation))
    }

    pub fn worst_deviation(&self) -> f64 {
        self.worst().map_or(0.0, |(_, r)| r.max_deviation)
    }
}

/// How densely the original geometry is sampled during verification.
const SAMPLES_PER_SEGMENT: usize = 8;
const MAX_SAMPLE_SPACING: f64 = 2.0;
/// Finer flattening only costs time: sampling already limits resolution.
const MIN_FLATTEN_TOLERANCE: f64 = 1e-3;

/// Viewport mapping recomputed from the view box alone.
fn viewport(raw: &RawDocument) -> AffineTransform {
    let vb = raw.view_box;
    let side = vb.width.max(vb.height);
    let s = 1024.0 / side;
    AffineTransform {
        a: s,
        b: 0.0,
        c: 0.0,
        d: s,
        e: (side - vb.width) * s / 2.0 - vb.min_x * s,
        f: (side - vb.height) * s / 2.0 - vb.min_y * s,
    }
}

/// Compares every drawable of `raw` with the path it became in `normalized`.
///
/// Elements without fill, degenerate shapes, singular transforms and path
/// data that draws nothing are expected to have been dropped; any other
/// difference in element count is reported as a mismatch.
pub fn verify_normalization(
    raw: &RawDocument,
    normalized: &Document,
    tolerance: f64,
) -> Result<VerificationReport, VerifyError> {
    if !(tolerance.is_finite() && tolerance > 0.0) {
        return Err(VerifyError::Tolerance(tolerance));
    }
    let canvas = viewport(raw);
    let mut originals = Vec::new();
    for element in &raw.elements {
        let transform = canvas * element.transform;
        let options = SampleOptions {
            n_per_segment: SAMPLES_PER_SEGMENT,
            max_spacing: Some(MAX_SAMPLE_SPACING),
            transform,
        };
        let source = match &element.kind {
            ElementKind::Path { d } => OutlineSource::PathData(d),
            ElementKind::Shape(shape) => OutlineSource::Shape(shape),
        };
        let outline = match sample_outline_with(source, &options) {
            Ok(o) => o,
            Err(VerifyError::DegenerateShape(_)) => continue,
            Err(e) => return Err(e),
        };
        let unfilled = element.fill == Some(Paint::None);
        let singular = element.transform.determinant().abs() < 1e-12;
        if unfilled || singular || outline.segments == 0 {
            continue;
        }
        originals.push(outline);
    }
    if originals.len() != normalized.paths().len() {
        return Err(VerifyError::PathCountMismatch {
            expected: originals.len(),
            actual: normalized.paths().len(),
        });
    }

    let flatten_tolerance = (tolerance / 50.0).clamp(MIN_FLATTEN_TOLERANCE, 0.01);
    let paths: Vec<DeviationReport> = originals
        .iter()
        .zip(normalized.paths())
        .map(|(original, path)| {
            let converted = flatten_path(path, &AffineTransform::IDENTITY, flatten_tolerance);
            outline_deviation(&original.subpaths, &converted.subpaths)
        })
        .collect();
    let passed = paths.iter().all(|r| r.max_deviation <= tolerance);
    Ok(VerificationReport {
        passed,
        tolerance,
        paths,
    })
}

/// Witness point of a report, for display.
pub fn describe(report: &DeviationReport) -> String {
    let Point { x, y } = report.argmax_point;
    format!("{:.4} at ({x:.3}, {y:.3})", report.max_deviation)
}
