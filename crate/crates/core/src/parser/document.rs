//! XML ingestion: turns SVG text into a [`RawDocument`] of drawable elements.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use roxmltree::{Node, NodeType};
use thiserror::Error;

use super::color::{parse_color, parse_paint, PaintValue};
use super::path_data::parse_number_list;
use super::transform::parse_transform;
use crate::model::{AffineTransform, Document, Paint, Point, Rgb, ViewBox};

const SVG_NS: &str = "http://www.w3.org/2000/svg";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("malformed XML: {0}")]
    MalformedXml(String),
    #[error("no <svg> root element")]
    MissingRoot,
    #[error("neither a usable viewBox nor width/height on the root element")]
    NoCanvas,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Warning {
    pub offset: usize,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParseDiagnostics {
    pub warnings: Vec<Warning>,
    /// Every element below the root by local name; comments count as `#comment`.
    pub element_counts: BTreeMap<String, usize>,
}

impl ParseDiagnostics {
    fn warn(&mut self, offset: usize, message: impl Into<String>) {
        self.warnings.push(Warning {
            offset,
            message: message.into(),
        });
    }
}

/// A basic shape with its geometry attributes, SVG defaults already applied.
#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    Rect {
        x: f64,
        y: f64,
        width: f64,
        height: f64,
        rx: Option<f64>,
        ry: Option<f64>,
    },
    Circle {
        cx: f64,
        cy: f64,
        r: f64,
    },
    Ellipse {
        cx: f64,
        cy: f64,
        rx: f64,
        ry: f64,
    },
    Line {
        x1: f64,
        y1: f64,
        x2: f64,
        y2: f64,
    },
    Polyline(Vec<Point>),
    Polygon(Vec<Point>),
}

impl Shape {
    pub fn element_name(&self) -> &'static str {
        match self {
            Shape::Rect { .. } => "rect",
            Shape::Circle { .. } => "circle",
            Shape::Ellipse { .. } => "ellipse",
            Shape::Line { .. } => "line",
            Shape::Polyline(_) => "polyline",
            Shape::Polygon(_) => "polygon",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ElementKind {
    /// Path data is kept as text; it is parsed during normalization.
    Path { d: String },
    Shape(Shape),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RawElement {
    pub kind: ElementKind,
    /// `None` when no fill was specified anywhere up the tree.
    pub fill: Option<Paint>,
    /// Composition of every ancestor transform and the element's own.
    pub transform: AffineTransform,
    /// Byte offset of the element in the source text.
    pub offset: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RawDocument {
    pub view_box: ViewBox,
    pub elements: Vec<RawElement>,
    /// First stop color of each gradient, keyed by id.
    pub paint_servers: BTreeMap<String, Option<Rgb>>,
}

impl RawDocument {
    /// Re-expresses a document as raw path elements with full-precision path data.
    pub fn from_document(doc: &Document) -> RawDocument {
        let elements = doc
            .paths()
            .iter()
            .map(|path| {
                let mut d = String::new();
                for cmd in path.commands() {
                    d.push(cmd.letter());
                    let mut first = true;
                    for p in cmd.points() {
                        for v in [p.x, p.y] {
                            if !first {
                                d.push(' ');
                            }
                            first = false;
                            let _ = write!(d, "{v}");
                        }
                    }
                }
                RawElement {
                    kind: ElementKind::Path { d },
                    fill: Some(path.fill().clone()),
                    transform: AffineTransform::IDENTITY,
                    offset: 0,
                }
            })
            .collect();
        RawDocument {
            view_box: doc.view_box(),
            elements,
            paint_servers: BTreeMap::new(),
        }
    }
}

/// Parses SVG text into drawable elements in document order.
///
/// Groups propagate their transform and fill to children. Metadata and
/// comments are dropped; unsupported elements are dropped with a warning.
pub fn parse_document(text: &str) -> Result<(RawDocument, ParseDiagnostics), ParseError> {
    let options = roxmltree::ParsingOptions {
        allow_dtd: true,
        ..Default::default()
    };
    let xml = roxmltree::Document::parse_with_options(text, options).map_err(|e| match e {
        roxmltree::Error::NoRootNode => ParseError::MissingRoot,
        other => ParseError::MalformedXml(other.to_string()),
    })?;
    let root = xml.root_element();
    if !is_svg_element(root, "svg") {
        return Err(ParseError::MissingRoot);
    }

    let mut diag = ParseDiagnostics::default();
    for node in root.descendants().skip(1) {
        let key = match node.node_type() {
            NodeType::Element => node.tag_name().name().to_owned(),
            NodeType::Comment => "#comment".to_owned(),
            _ => continue,
        };
        *diag.element_counts.entry(key).or_default() += 1;
    }

    let view_box = canvas(root, &mut diag)?;
    let paint_servers = collect_paint_servers(root);

    let mut walker = Walker {
        elements: Vec::new(),
        diag,
    };
    let root_style = Inherited::default().child(root, &mut walker.diag);
    for child in root.children() {
        walker.walk(child, &root_style);
    }
    let Walker { elements, diag } = walker;
    Ok((
        RawDocument {
            view_box,
            elements,
            paint_servers,
        },
        diag,
    ))
}

fn is_svg_element(node: Node, name: &str) -> bool {
    node.is_element()
        && node.tag_name().name() == name
        && matches!(node.tag_name().namespace(), None | Some(SVG_NS))
}

fn canvas(root: Node, diag: &mut ParseDiagnostics) -> Result<ViewBox, ParseError> {
    if let Some(vb) = root.attribute("viewBox") {
        let nums = parse_number_list(vb).unwrap_or_default();
        if let [x, y, w, h] = nums[..] {
            if let Ok(view_box) = ViewBox::new(x, y, w, h) {
                return Ok(view_box);
            }
        }
        diag.warn(root.range().start, format!("ignoring unusable viewBox {vb:?}"));
    }
    let width = root.attribute("width").and_then(parse_length);
    let height = root.attribute("height").and_then(parse_length);
    match (width, height) {
        (Some(w), Some(h)) => ViewBox::new(0.0, 0.0, w, h).map_err(|_| ParseError::NoCanvas),
        _ => Err(ParseError::NoCanvas),
    }
}

fn collect_paint_servers(root: Node) -> BTreeMap<String, Option<Rgb>> {
    root.descendants()
        .filter(|n| is_svg_element(*n, "linearGradient") || is_svg_element(*n, "radialGradient"))
        .filter_map(|gradient| {
            let id = gradient.attribute("id")?;
            let first_stop = gradient
                .children()
                .find(|n| is_svg_element(*n, "stop"))
                .and_then(|stop| {
                    stop.attribute("stop-color")
                        .or_else(|| style_property(stop.attribute("style")?, "stop-color"))
                        .and_then(parse_color)
                });
            Some((id.to_owned(), first_stop))
        })
        .collect()
}

/// A plain number with an optional `px` suffix.
fn parse_length(value: &str) -> Option<f64> {
    let v = value.trim();
    let v = v.strip_suffix("px").unwrap_or(v).trim_end();
    v.parse::<f64>().ok().filter(|n| n.is_finite())
}

fn style_property<'a>(style: &'a str, name: &str) -> Option<&'a str> {
    style.split(';').find_map(|decl| {
        let (key, value) = decl.split_once(':')?;
        (key.trim() == name).then(|| value.trim().trim_end_matches("!important").trim())
    })
}

#[derive(Debug, Clone, Default)]
struct Inherited {
    transform: AffineTransform,
    fill: Option<Paint>,
    color: Option<Rgb>,
}

impl Inherited {
    /// Applies an element's own transform and presentation attributes.
    fn child(&self, node: Node, diag: &mut ParseDiagnostics) -> Inherited {
        let mut next = self.clone();
        if let Some(color) = node.attribute("color") {
            match parse_color(color) {
                Some(c) => next.color = Some(c),
                None if color.trim() == "inherit" || color.trim() == "currentColor" => {}
                None => diag.warn(node.range().start, format!("ignoring invalid color {color:?}")),
            }
        }
        // The presentation attribute wins over the style declaration.
        let declared = node
            .attribute("fill")
            .and_then(|v| self.resolve_fill(v, &next, node, diag))
            .or_else(|| {
                let v = style_property(node.attribute("style")?, "fill")?;
                self.resolve_fill(v, &next, node, diag)
            });
        if let Some(fill) = declared {
            next.fill = Some(fill);
        }
        if let Some(t) = node.attribute("transform") {
            match parse_transform(t) {
                Ok(m) => next.transform = self.transform * m,
                Err(msg) => diag.warn(node.range().start, format!("ignoring transform: {msg}")),
            }
        }
        next
    }

    fn resolve_fill(
        &self,
        value: &str,
        next: &Inherited,
        node: Node,
        diag: &mut ParseDiagnostics,
    ) -> Option<Paint> {
        match parse_paint(value) {
            Some(PaintValue::Paint(p)) => Some(p),
            Some(PaintValue::CurrentColor) => Some(Paint::Hex(next.color.unwrap_or(Rgb::BLACK))),
            Some(PaintValue::Inherit) => None,
            None => {
                diag.warn(node.range().start, format!("ignoring invalid fill {value:?}"));
                None
            }
        }
    }
}

struct Walker {
    elements: Vec<RawElement>,
    diag: ParseDiagnostics,
}

impl Walker {
    fn walk(&mut self, node: Node, parent: &Inherited) {
        if !node.is_element() {
            return;
        }
        let offset = node.range().start;
        let name = node.tag_name().name();
        let in_svg_ns = matches!(node.tag_name().namespace(), None | Some(SVG_NS));
        if !in_svg_ns {
            self.diag.warn(offset, format!("dropping foreign element <{name}>"));
            return;
        }
        if node.attribute("display").map(str::trim) == Some("none") {
            self.diag.warn(offset, format!("dropping hidden <{name}>"));
            return;
        }
        match name {
            "title" | "desc" | "metadata" => {}
            // Gradients were harvested up front.
            "linearGradient" | "radialGradient" => {}
            "g" | "a" => {
                let style = parent.child(node, &mut self.diag);
                for child in node.children() {
                    self.walk(child, &style);
                }
            }
            "path" | "rect" | "circle" | "ellipse" | "line" | "polyline" | "polygon" => {
                let style = parent.child(node, &mut self.diag);
                match element_kind(node, name) {
                    Ok(kind) => self.elements.push(RawElement {
                        kind,
                        fill: style.fill,
                        transform: style.transform,
                        offset,
                    }),
                    Err(msg) => self.diag.warn(offset, format!("dropping <{name}>: {msg}")),
                }
            }
            _ => self.diag.warn(offset, format!("dropping unsupported <{name}>")),
        }
    }
}

fn element_kind(node: Node, name: &str) -> Result<ElementKind, String> {
    let num = |attr: &str| -> Result<f64, String> {
        match node.attribute(attr) {
            None => Ok(0.0),
            Some(v) => parse_length(v).ok_or_else(|| format!("unusable {attr}={v:?}")),
        }
    };
    let opt = |attr: &str| -> Result<Option<f64>, String> {
        match node.attribute(attr) {
            None => Ok(None),
            Some(v) if v.trim() == "auto" => Ok(None),
            Some(v) => parse_length(v)
                .map(Some)
                .ok_or_else(|| format!("unusable {attr}={v:?}")),
        }
    };
    let points = || -> Result<Vec<Point>, String> {
        let nums = parse_number_list(node.attribute("points").unwrap_or(""))
            .map_err(|e| format!("bad points list: {e}"))?;
        Ok(nums
            .chunks_exact(2)
            .map(|xy| Point::new(xy[0], xy[1]))
            .collect())
    };
    Ok(match name {
        "path" => ElementKind::Path {
            d: node.attribute("d").unwrap_or("").to_owned(),
        },
        "rect" => ElementKind::Shape(Shape::Rect {
            x: num("x")?,
            y: num("y")?,
            width: num("width")?,
            height: num("height")?,
            rx: opt("rx")?,
            ry: opt("ry")?,
        }),
        "circle" => ElementKind::Shape(Shape::Circle {
            cx: num("cx")?,
            cy: num("cy")?,
            r: num("r")?,
        }),
        "ellipse" => ElementKind::Shape(Shape::Ellipse {
            cx: num("cx")?,
            cy: num("cy")?,
            rx: num("rx")?,
            ry: num("ry")?,
        }),
        "line" => ElementKind::Shape(Shape::Line {
            x1: num("x1")?,
            y1: num("y1")?,
            x2: num("x2")?,
            y2: num("y2")?,
        }),
        "polyline" => ElementKind::Shape(Shape::Polyline(points()?)),
        "polygon" => ElementKind::Shape(Shape::Polygon(points()?)),
        _ => unreachable!("caller filters element names"),
    })
}
