//! SVG text in, SVG text out.

mod color;
mod document;
mod path_data;
mod serialize;
mod transform;

pub use color::{parse_color, parse_paint, PaintValue};
pub use document::{
    parse_document, ElementKind, ParseDiagnostics, ParseError, RawDocument, RawElement, Shape,
    Warning,
};
pub use path_data::{parse_path_data, PathDataError};
pub use serialize::{format_number, serialize_document, SerializeError, SVG_OPEN};
pub use transform::parse_transform;
