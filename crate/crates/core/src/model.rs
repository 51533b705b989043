//! Geometry and styling types shared by every stage of the pipeline.
//!
//! Coordinates are kept at full `f64` precision. The only place numbers are
//! rounded is the serializer, and [`document_equal`] compares through the
//! same canonical formatting so that equality survives a text roundtrip.

use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::parser::format_number;

/// Side length of the normalized square canvas.
pub const CANVAS_SIZE: f64 = 1024.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("non-finite coordinate")]
    NonFiniteCoordinate,
    #[error("viewBox width and height must be positive and finite, got {width} x {height}")]
    InvalidViewBox { width: f64, height: f64 },
    #[error("`{opcode}` takes {expected} arguments, got {got}")]
    ArgumentCount {
        opcode: char,
        expected: usize,
        got: usize,
    },
    #[error("arc flag must be 0 or 1, got {0}")]
    ArcFlag(f64),
    #[error("path must start with a MoveTo")]
    MissingInitialMoveTo,
    #[error("consecutive MoveTo commands at index {0}")]
    ConsecutiveMoveTo(usize),
    #[error("normalized documents use the 0 0 1024 1024 viewBox")]
    NormalizedViewBox,
    #[error("normalized documents only carry flat fills, found a paint server reference")]
    NormalizedFill,
    #[error("transform has non-finite coefficients")]
    NonFiniteTransform,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn distance(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn lerp(self, other: Point, t: f64) -> Point {
        Point::new(
            self.x + (other.x - self.x) * t,
            self.y + (other.y - self.y) * t,
        )
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// The command families of the SVG 1.1 path grammar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Opcode {
    MoveTo,
    LineTo,
    HorizontalTo,
    VerticalTo,
    CubicTo,
    SmoothCubicTo,
    QuadTo,
    SmoothQuadTo,
    ArcTo,
    ClosePath,
}

impl Opcode {
    pub const ALL: [Opcode; 10] = [
        Opcode::MoveTo,
        Opcode::LineTo,
        Opcode::HorizontalTo,
        Opcode::VerticalTo,
        Opcode::CubicTo,
        Opcode::SmoothCubicTo,
        Opcode::QuadTo,
        Opcode::SmoothQuadTo,
        Opcode::ArcTo,
        Opcode::ClosePath,
    ];

    /// Number of numeric parameters consumed by one repetition.
    pub fn arity(self) -> usize {
        match self {
            Opcode::MoveTo | Opcode::LineTo | Opcode::SmoothQuadTo => 2,
            Opcode::HorizontalTo | Opcode::VerticalTo => 1,
            Opcode::CubicTo => 6,
            Opcode::SmoothCubicTo | Opcode::QuadTo => 4,
            Opcode::ArcTo => 7,
            Opcode::ClosePath => 0,
        }
    }

    pub fn letter(self, relative: bool) -> char {
        let upper = match self {
            Opcode::MoveTo => 'M',
            Opcode::LineTo => 'L',
            Opcode::HorizontalTo => 'H',
            Opcode::VerticalTo => 'V',
            Opcode::CubicTo => 'C',
            Opcode::SmoothCubicTo => 'S',
            Opcode::QuadTo => 'Q',
            Opcode::SmoothQuadTo => 'T',
            Opcode::ArcTo => 'A',
            Opcode::ClosePath => 'Z',
        };
        if relative {
            upper.to_ascii_lowercase()
        } else {
            upper
        }
    }

    /// Maps a command letter to its opcode and relative flag.
    pub fn from_letter(letter: char) -> Option<(Opcode, bool)> {
        let op = match letter.to_ascii_uppercase() {
            'M' => Opcode::MoveTo,
            'L' => Opcode::LineTo,
            'H' => Opcode::HorizontalTo,
            'V' => Opcode::VerticalTo,
            'C' => Opcode::CubicTo,
            'S' => Opcode::SmoothCubicTo,
            'Q' => Opcode::QuadTo,
            'T' => Opcode::SmoothQuadTo,
            'A' => Opcode::ArcTo,
            'Z' => Opcode::ClosePath,
            _ => return None,
        };
        Some((op, letter.is_ascii_lowercase()))
    }
}

/// One command as written in path data, before any simplification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RawCommand {
    opcode: Opcode,
    relative: bool,
    args: [f64; 7],
}

impl RawCommand {
    pub fn new(opcode: Opcode, relative: bool, args: &[f64]) -> Result<Self, ModelError> {
        if args.len() != opcode.arity() {
            return Err(ModelError::ArgumentCount {
                opcode: opcode.letter(relative),
                expected: opcode.arity(),
                got: args.len(),
            });
        }
        if args.iter().any(|v| !v.is_finite()) {
            return Err(ModelError::NonFiniteCoordinate);
        }
        if opcode == Opcode::ArcTo {
            for &flag in &args[3..5] {
                if flag != 0.0 && flag != 1.0 {
                    return Err(ModelError::ArcFlag(flag));
                }
            }
        }
        let mut stored = [0.0; 7];
        stored[..args.len()].copy_from_slice(args);
        Ok(Self {
            opcode,
            relative,
            args: stored,
        })
    }

    /// Builds a command from its letter, e.g. `RawCommand::from_letter('q', &[..])`.
    pub fn from_letter(letter: char, args: &[f64]) -> Result<Self, ModelError> {
        let (opcode, relative) = Opcode::from_letter(letter).ok_or(ModelError::ArgumentCount {
            opcode: letter,
            expected: 0,
            got: args.len(),
        })?;
        Self::new(opcode, relative, args)
    }

    pub fn opcode(&self) -> Opcode {
        self.opcode
    }

    pub fn is_relative(&self) -> bool {
        self.relative
    }

    pub fn letter(&self) -> char {
        self.opcode.letter(self.relative)
    }

    pub fn args(&self) -> &[f64] {
        &self.args[..self.opcode.arity()]
    }
}

impl fmt::Display for RawCommand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())?;
        for (i, v) in self.args().iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// A drawing instruction in the normalized M/L/C alphabet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PathCommand {
    MoveTo(Point),
    LineTo(Point),
    CubicTo(Point, Point, Point),
}

impl PathCommand {
    pub fn end(&self) -> Point {
        match *self {
            PathCommand::MoveTo(p) | PathCommand::LineTo(p) => p,
            PathCommand::CubicTo(_, _, p) => p,
        }
    }

    pub fn letter(&self) -> char {
        match self {
            PathCommand::MoveTo(_) => 'M',
            PathCommand::LineTo(_) => 'L',
            PathCommand::CubicTo(..) => 'C',
        }
    }

    /// Anchor and control points in drawing order.
    pub fn points(&self) -> impl Iterator<Item = Point> {
        let (buf, n) = match *self {
            PathCommand::MoveTo(p) | PathCommand::LineTo(p) => ([p, p, p], 1),
            PathCommand::CubicTo(a, b, c) => ([a, b, c], 3),
        };
        buf.into_iter().take(n)
    }

    pub fn map_points(&self, mut f: impl FnMut(Point) -> Point) -> PathCommand {
        match *self {
            PathCommand::MoveTo(p) => PathCommand::MoveTo(f(p)),
            PathCommand::LineTo(p) => PathCommand::LineTo(f(p)),
            PathCommand::CubicTo(a, b, c) => PathCommand::CubicTo(f(a), f(b), f(c)),
        }
    }
}

/// A 24-bit sRGB color.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rgb(pub [u8; 3]);

impl Rgb {
    pub const BLACK: Rgb = Rgb([0, 0, 0]);

    pub fn from_u32(v: u32) -> Self {
        Rgb([(v >> 16) as u8, (v >> 8) as u8, v as u8])
    }

    pub fn to_u32(self) -> u32 {
        let [r, g, b] = self.0;
        (u32::from(r) << 16) | (u32::from(g) << 8) | u32::from(b)
    }

    /// Parses exactly six hex digits, with or without a leading `#`.
    pub fn from_hex(s: &str) -> Option<Self> {
        let s = s.strip_prefix('#').unwrap_or(s);
        if s.len() != 6 || !s.bytes().all(|b| b.is_ascii_hexdigit()) {
            return None;
        }
        u32::from_str_radix(s, 16).ok().map(Rgb::from_u32)
    }
}

impl fmt::Display for Rgb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [r, g, b] = self.0;
        write!(f, "#{r:02x}{g:02x}{b:02x}")
    }
}

impl Serialize for Rgb {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rgb {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Rgb::from_hex(&s).ok_or_else(|| serde::de::Error::custom(format!("invalid hex color {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Paint {
    Hex(Rgb),
    None,
    /// `url(#id)` pointing at a gradient or pattern.
    Reference(String),
}

impl fmt::Display for Paint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Paint::Hex(c) => c.fmt(f),
            Paint::None => f.write_str("none"),
            Paint::Reference(id) => write!(f, "url(#{id})"),
        }
    }
}

/// Maps `(x, y)` to `(a·x + c·y + e, b·x + d·y + f)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineTransform {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub f: f64,
}

impl Default for AffineTransform {
    fn default() -> Self {
        Self::IDENTITY
    }
}

impl AffineTransform {
    pub const IDENTITY: AffineTransform = AffineTransform {
        a: 1.0,
        b: 0.0,
        c: 0.0,
        d: 1.0,
        e: 0.0,
        f: 0.0,
    };

    pub fn new(a: f64, b: f64, c: f64, d: f64, e: f64, f: f64) -> Result<Self, ModelError> {
        let m = Self { a, b, c, d, e, f };
        if [a, b, c, d, e, f].iter().all(|v| v.is_finite()) && m.determinant().is_finite() {
            Ok(m)
        } else {
            Err(ModelError::NonFiniteTransform)
        }
    }

    pub fn translate(tx: f64, ty: f64) -> Self {
        Self {
            e: tx,
            f: ty,
            ..Self::IDENTITY
        }
    }

    pub fn scale(sx: f64, sy: f64) -> Self {
        Self {
            a: sx,
            d: sy,
            ..Self::IDENTITY
        }
    }

    /// Rotation by `degrees`, positive turning +x towards +y.
    pub fn rotate(degrees: f64) -> Self {
        let (sin, cos) = degrees.to_radians().sin_cos();
        Self {
            a: cos,
            b: sin,
            c: -sin,
            d: cos,
            e: 0.0,
            f: 0.0,
        }
    }

    pub fn skew_x(degrees: f64) -> Self {
        Self {
            c: degrees.to_radians().tan(),
            ..Self::IDENTITY
        }
    }

    pub fn skew_y(degrees: f64) -> Self {
        Self {
            b: degrees.to_radians().tan(),
            ..Self::IDENTITY
        }
    }

    pub fn determinant(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }

    pub fn is_finite(&self) -> bool {
        [self.a, self.b, self.c, self.d, self.e, self.f]
            .iter()
            .all(|v| v.is_finite())
    }

    pub fn apply(&self, p: Point) -> Point {
        Point::new(
            self.a * p.x + self.c * p.y + self.e,
            self.b * p.x + self.d * p.y + self.f,
        )
    }

    /// Upper bound on how much the linear part stretches any vector.
    pub fn max_stretch(&self) -> f64 {
        (self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d).sqrt()
    }
}

/// `outer * inner` applies `inner` first.
impl Mul for AffineTransform {
    type Output = AffineTransform;

    fn mul(self, inner: AffineTransform) -> AffineTransform {
        let o = self;
        AffineTransform {
            a: o.a * inner.a + o.c * inner.b,
            b: o.b * inner.a + o.d * inner.b,
            c: o.a * inner.c + o.c * inner.d,
            d: o.b * inner.c + o.d * inner.d,
            e: o.a * inner.e + o.c * inner.f + o.e,
            f: o.b * inner.e + o.d * inner.f + o.f,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ViewBox {
    pub min_x: f64,
    pub min_y: f64,
    pub width: f64,
    pub height: f64,
}

impl ViewBox {
    pub const CANVAS: ViewBox = ViewBox {
        min_x: 0.0,
        min_y: 0.0,
        width: CANVAS_SIZE,
        height: CANVAS_SIZE,
    };

    pub fn new(min_x: f64, min_y: f64, width: f64, height: f64) -> Result<Self, ModelError> {
        if !(min_x.is_finite() && min_y.is_finite()) {
            return Err(ModelError::NonFiniteCoordinate);
        }
        if !(width.is_finite() && height.is_finite() && width > 0.0 && height > 0.0) {
            return Err(ModelError::InvalidViewBox { width, height });
        }
        Ok(Self {
            min_x,
            min_y,
            width,
            height,
        })
    }
}

/// A filled path in the M/L/C alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct PathElement {
    commands: Vec<PathCommand>,
    fill: Paint,
}

impl PathElement {
    pub fn new(commands: Vec<PathCommand>, fill: Paint) -> Result<Self, ModelError> {
        if let Some(first) = commands.first() {
            if !matches!(first, PathCommand::MoveTo(_)) {
                return Err(ModelError::MissingInitialMoveTo);
            }
        }
        for (i, pair) in commands.windows(2).enumerate() {
            if matches!(pair, [PathCommand::MoveTo(_), PathCommand::MoveTo(_)]) {
                return Err(ModelError::ConsecutiveMoveTo(i + 1));
            }
        }
        if commands.iter().flat_map(|c| c.points()).any(|p| !p.is_finite()) {
            return Err(ModelError::NonFiniteCoordinate);
        }
        Ok(Self { commands, fill })
    }

    pub fn commands(&self) -> &[PathCommand] {
        &self.commands
    }

    pub fn fill(&self) -> &Paint {
        &self.fill
    }

    /// Same geometry, different fill.
    pub fn with_fill(&self, fill: Paint) -> PathElement {
        PathElement {
            commands: self.commands.clone(),
            fill,
        }
    }

    /// Maps every anchor and control point; fails only if the result is non-finite.
    pub fn map_points(&self, f: impl FnMut(Point) -> Point + Copy) -> Result<PathElement, ModelError> {
        let commands = self.commands.iter().map(|c| c.map_points(f)).collect();
        PathElement::new(commands, self.fill.clone())
    }

    /// Axis-aligned bounds over anchors and control points.
    pub fn control_bounds(&self) -> Option<(Point, Point)> {
        let mut pts = self.commands.iter().flat_map(|c| c.points());
        let first = pts.next()?;
        Some(pts.fold((first, first), |(lo, hi), p| {
            (
                Point::new(lo.x.min(p.x), lo.y.min(p.y)),
                Point::new(hi.x.max(p.x), hi.y.max(p.y)),
            )
        }))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    view_box: ViewBox,
    paths: Vec<PathElement>,
    normalized: bool,
}

impl Document {
    /// A document on an arbitrary canvas, not yet normalized.
    pub fn new(view_box: ViewBox, paths: Vec<PathElement>) -> Self {
        Self {
            view_box,
            paths,
            normalized: false,
        }
    }

    /// A document on the 1024 canvas with flat fills only.
    pub fn new_normalized(paths: Vec<PathElement>) -> Result<Self, ModelError> {
        if paths
            .iter()
            .any(|p| matches!(p.fill(), Paint::Reference(_)))
        {
            return Err(ModelError::NormalizedFill);
        }
        Ok(Self {
            view_box: ViewBox::CANVAS,
            paths,
            normalized: true,
        })
    }

    /// Marks an already-conforming document as normalized.
    pub fn into_normalized(self) -> Result<Self, ModelError> {
        if self.view_box != ViewBox::CANVAS {
            return Err(ModelError::NormalizedViewBox);
        }
        Self::new_normalized(self.paths)
    }

    pub fn empty() -> Self {
        Self {
            view_box: ViewBox::CANVAS,
            paths: Vec::new(),
            normalized: true,
        }
    }

    pub fn view_box(&self) -> ViewBox {
        self.view_box
    }

    pub fn paths(&self) -> &[PathElement] {
        &self.paths
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn into_paths(self) -> Vec<PathElement> {
        self.paths
    }

    /// Replaces the path list, keeping canvas and normalization state.
    pub fn with_paths(&self, paths: Vec<PathElement>) -> Result<Document, ModelError> {
        if self.normalized {
            Document::new_normalized(paths)
        } else {
            Ok(Document::new(self.view_box, paths))
        }
    }
}

/// Structural equality with coordinates compared after canonical rounding.
pub fn document_equal(a: &Document, b: &Document) -> bool {
    let same_num = |x: f64, y: f64| format_number(x) == format_number(y);
    let same_point = |p: Point, q: Point| same_num(p.x, q.x) && same_num(p.y, q.y);
    let (va, vb) = (a.view_box, b.view_box);
    if !(same_num(va.min_x, vb.min_x)
        && same_num(va.min_y, vb.min_y)
        && same_num(va.width, vb.width)
        && same_num(va.height, vb.height))
    {
        return false;
    }
    a.paths.len() == b.paths.len()
        && a.paths.iter().zip(&b.paths).all(|(pa, pb)| {
            pa.fill == pb.fill
                && pa.commands.len() == pb.commands.len()
                && pa.commands.iter().zip(&pb.commands).all(|(ca, cb)| {
                    ca.letter() == cb.letter()
                        && ca.points().zip(cb.points()).all(|(p, q)| same_point(p, q))
                })
        })
}

/// The four curriculum classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DifficultyLevel {
    #[serde(rename = "Monocolor_easy")]
    MonocolorEasy,
    #[serde(rename = "Monocolor_difficult")]
    MonocolorDifficult,
    #[serde(rename = "Multicolor_easy")]
    MulticolorEasy,
    #[serde(rename = "Multicolor_difficult")]
    MulticolorDifficult,
}

impl DifficultyLevel {
    /// Curriculum order, simplest first.
    pub const ALL: [DifficultyLevel; 4] = [
        DifficultyLevel::MonocolorEasy,
        DifficultyLevel::MonocolorDifficult,
        DifficultyLevel::MulticolorEasy,
        DifficultyLevel::MulticolorDifficult,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            DifficultyLevel::MonocolorEasy => "Monocolor_easy",
            DifficultyLevel::MonocolorDifficult => "Monocolor_difficult",
            DifficultyLevel::MulticolorEasy => "Multicolor_easy",
            DifficultyLevel::MulticolorDifficult => "Multicolor_difficult",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|l| l.as_str() == s)
    }
}

impl fmt::Display for DifficultyLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}
