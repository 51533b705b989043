//! Path unification: every drawable becomes an absolute M/L/C path on the
//! 1024×1024 canvas with transforms flattened into the coordinates.

mod absolute;
mod arc;
mod shapes;
mod simplify;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use absolute::to_absolute;
pub use arc::{arc_to_cubics, handle_length};
pub use shapes::shape_to_path;
pub use simplify::{simplify_commands, CLOSURE_EPSILON};

use crate::model::{
    AffineTransform, Document, ModelError, Paint, PathElement, Rgb, ViewBox, CANVAS_SIZE,
};
use crate::parser::{parse_path_data, ElementKind, PathDataError, RawDocument};

/// Transforms with a smaller determinant collapse geometry and are rejected.
pub const SINGULAR_DETERMINANT: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NormalizeError {
    #[error("relative command at index {index} has no current point")]
    NoCurrentPoint { index: usize },
    #[error("degenerate <{0}>")]
    DegenerateShape(&'static str),
    #[error("singular transform (determinant {0:e})")]
    SingularTransform(f64),
    #[error("path data of element at byte {element_offset}: {source}")]
    PathData {
        element_offset: usize,
        source: PathDataError,
    },
    #[error("no drawable path survived normalization")]
    EmptyDocument,
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Counters describing what normalization did, summable across documents.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizeReport {
    pub shapes_converted: BTreeMap<String, u64>,
    pub arcs_converted: u64,
    pub relative_resolved: u64,
    pub transforms_flattened: u64,
    pub closures_materialized: u64,
    /// Elements that produced no output, by reason.
    pub paths_dropped: BTreeMap<String, u64>,
    /// Documents whose non-square canvas was letterboxed.
    pub letterboxed: u64,
    pub gradients_flattened: u64,
}

impl NormalizeReport {
    pub fn merge(&mut self, other: &NormalizeReport) {
        for (k, v) in &other.shapes_converted {
            *self.shapes_converted.entry(k.clone()).or_default() += v;
        }
        for (k, v) in &other.paths_dropped {
            *self.paths_dropped.entry(k.clone()).or_default() += v;
        }
        self.arcs_converted += other.arcs_converted;
        self.relative_resolved += other.relative_resolved;
        self.transforms_flattened += other.transforms_flattened;
        self.closures_materialized += other.closures_materialized;
        self.letterboxed += other.letterboxed;
        self.gradients_flattened += other.gradients_flattened;
    }

    fn dropped(&mut self, reason: &str) {
        *self.paths_dropped.entry(reason.to_owned()).or_default() += 1;
    }
}

/// Maps every anchor and control point through `m`.
pub fn apply_transform(path: &PathElement, m: &AffineTransform) -> Result<PathElement, NormalizeError> {
    let det = m.determinant();
    if det.is_nan() || det.abs() < SINGULAR_DETERMINANT {
        return Err(NormalizeError::SingularTransform(det));
    }
    Ok(path.map_points(|p| m.apply(p))?)
}

/// The uniform scale and centering translation taking `view_box` onto the canvas.
pub fn canvas_transform(view_box: ViewBox) -> AffineTransform {
    let s = CANVAS_SIZE / view_box.width.max(view_box.height);
    let margin_x = (CANVAS_SIZE - view_box.width * s) / 2.0;
    let margin_y = (CANVAS_SIZE - view_box.height * s) / 2.0;
    AffineTransform {
        a: s,
        b: 0.0,
        c: 0.0,
        d: s,
        e: margin_x - view_box.min_x * s,
        f: margin_y - view_box.min_y * s,
    }
}

/// Rescales a document onto the (0, 0, 1024, 1024) canvas, letterboxing
/// non-square view boxes.
pub fn normalize_canvas(doc: &Document) -> Document {
    let view_box = doc.view_box();
    if view_box == ViewBox::CANVAS {
        return doc.clone();
    }
    let m = canvas_transform(view_box);
    let paths = doc
        .paths()
        .iter()
        .map(|p| p.map_points(|q| m.apply(q)).expect("canvas scale keeps points finite"))
        .collect();
    let on_canvas = Document::new(ViewBox::CANVAS, paths);
    if doc.is_normalized() {
        on_canvas.into_normalized().unwrap_or_else(|_| unreachable!())
    } else {
        on_canvas
    }
}

/// Runs the full pipeline: shapes and path data become M/L/C, transforms are
/// applied, the canvas is normalized and fills are resolved.
///
/// Elements with `fill="none"`, degenerate shapes, singular transforms and
/// paths with no drawing commands are dropped and counted in the report.
pub fn normalize_document(raw: &RawDocument) -> Result<(Document, NormalizeReport), NormalizeError> {
    let mut report = NormalizeReport::default();
    let mut paths = Vec::with_capacity(raw.elements.len());

    for element in &raw.elements {
        let commands = match &element.kind {
            ElementKind::Path { d } => {
                let parsed = parse_path_data(d).map_err(|source| NormalizeError::PathData {
                    element_offset: element.offset,
                    source,
                })?;
                report.relative_resolved += parsed.iter().filter(|c| c.is_relative()).count() as u64;
                let absolute = to_absolute(&parsed)?;
                let (cmds, stats) = simplify::simplify_with_stats(&absolute);
                report.arcs_converted += stats.arcs as u64;
                report.closures_materialized += stats.closures as u64;
                cmds
            }
            ElementKind::Shape(shape) => match shapes::shape_commands(shape) {
                Ok(cmds) => {
                    *report
                        .shapes_converted
                        .entry(shape.element_name().to_owned())
                        .or_default() += 1;
                    cmds
                }
                Err(NormalizeError::DegenerateShape(_)) => {
                    report.dropped("degenerate");
                    continue;
                }
                Err(e) => return Err(e),
            },
        };

        let fill = match &element.fill {
            None => Rgb::BLACK,
            Some(Paint::Hex(c)) => *c,
            Some(Paint::None) => {
                report.dropped("fill_none");
                continue;
            }
            Some(Paint::Reference(id)) => {
                report.gradients_flattened += 1;
                raw.paint_servers.get(id).copied().flatten().unwrap_or(Rgb::BLACK)
            }
        };
        if commands.len() < 2 {
            report.dropped("empty");
            continue;
        }
        let mut path = PathElement::new(commands, Paint::Hex(fill))?;
        if !element.transform.is_identity() {
            match apply_transform(&path, &element.transform) {
                Ok(mapped) => path = mapped,
                Err(NormalizeError::SingularTransform(_)) => {
                    report.dropped("singular_transform");
                    continue;
                }
                Err(e) => return Err(e),
            }
            report.transforms_flattened += 1;
        }
        paths.push(path);
    }

    if paths.is_empty() {
        return Err(NormalizeError::EmptyDocument);
    }
    let view_box = raw.view_box;
    if view_box.width != view_box.height {
        report.letterboxed += 1;
    }
    let doc = normalize_canvas(&Document::new(view_box, paths)).into_normalized()?;
    Ok((doc, report))
}

/// Re-normalizes an already normalized document.
pub fn renormalize(doc: &Document) -> Result<(Document, NormalizeReport), NormalizeError> {
    normalize_document(&RawDocument::from_document(doc))
}
