//! Compact output format for normalized documents.

use std::fmt::Write as _;

use thiserror::Error;

use crate::model::{Document, Paint};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SerializeError {
    #[error("only normalized documents can be serialized")]
    NotNormalized,
}

pub const SVG_OPEN: &str = r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 1024 1024">"#;

/// Canonical number text: at most two fractional digits, no trailing zeros, no `-0`.
pub fn format_number(v: f64) -> String {
    let mut s = format!("{v:.2}");
    if s.contains('.') {
        let trimmed = s.trim_end_matches('0').trim_end_matches('.').len();
        s.truncate(trimmed);
    }
    if s == "-0" {
        s = "0".to_owned();
    }
    s
}

/// Writes `<svg ...>` with one `<path d=".." fill=".."/>` per path.
pub fn serialize_document(doc: &Document) -> Result<String, SerializeError> {
    if !doc.is_normalized() {
        return Err(SerializeError::NotNormalized);
    }
    let mut out = String::with_capacity(64 + doc.paths().len() * 128);
    out.push_str(SVG_OPEN);
    for path in doc.paths() {
        out.push_str(r#"<path d=""#);
        for cmd in path.commands() {
            out.push(cmd.letter());
            let mut first = true;
            for p in cmd.points() {
                for v in [p.x, p.y] {
                    if !first {
                        out.push(' ');
                    }
                    first = false;
                    out.push_str(&format_number(v));
                }
            }
        }
        out.push_str(r#"" fill=""#);
        match path.fill() {
            Paint::Hex(c) => {
                let _ = write!(out, "{c}");
            }
            Paint::None => out.push_str("none"),
            // Normalized documents cannot hold references.
            Paint::Reference(id) => {
                let _ = write!(out, "url(#{id})");
            }
        }
        out.push_str(r#""/>"#);
    }
    out.push_str("</svg>");
    Ok(out)
}
