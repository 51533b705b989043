//! Analytic sampling of original SVG geometry.
//!
//! Path data is interpreted here from scratch (relative coordinates, smooth
//! reflections, arcs via their own center parameterization) so that the
//! normalizer is checked against an independent reading of the source.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use super::flatten::{flatten_cubic_into, Polyline};
use super::VerifyError;
use crate::model::{AffineTransform, PathCommand, PathElement, Point};
use crate::parser::{parse_path_data, Shape};

/// Geometry to sample.
#[derive(Debug, Clone, Copy)]
pub enum OutlineSource<'a> {
    Shape(&'a Shape),
    PathData(&'a str),
    Path(&'a PathElement),
}

/// Sampled geometry, one polyline per subpath.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Outline {
    pub subpaths: Vec<Polyline>,
    /// Number of drawn segments; zero means the source draws nothing.
    pub segments: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleOptions {
    pub n_per_segment: usize,
    /// Upper bound on the distance between consecutive curve samples, in
    /// output units. Lines are never densified.
    pub max_spacing: Option<f64>,
    /// Applied to every sample.
    pub transform: AffineTransform,
}

impl SampleOptions {
    pub fn new(n_per_segment: usize) -> Self {
        Self {
            n_per_segment,
            max_spacing: None,
            transform: AffineTransform::IDENTITY,
        }
    }

    fn count_for(&self, local_length: f64) -> usize {
        let spacing_count = match self.max_spacing {
            Some(s) if s > 0.0 => (local_length * self.transform.max_stretch() / s).ceil() as usize,
            _ => 0,
        };
        self.n_per_segment.max(spacing_count).max(2)
    }
}

/// Samples `source` with `n_per_segment` points per segment.
pub fn sample_outline(source: OutlineSource<'_>, n_per_segment: usize) -> Result<Outline, VerifyError> {
    sample_outline_with(source, &SampleOptions::new(n_per_segment))
}

pub fn sample_outline_with(source: OutlineSource<'_>, options: &SampleOptions) -> Result<Outline, VerifyError> {
    if options.n_per_segment < 2 {
        return Err(VerifyError::SampleCount(options.n_per_segment));
    }
    let mut pen = Pen::new(options);
    match source {
        OutlineSource::Shape(shape) => sample_shape(shape, &mut pen)?,
        OutlineSource::PathData(d) => interpret(d, &mut pen)?,
        OutlineSource::Path(path) => sample_path(path, &mut pen),
    }
    Ok(pen.finish())
}

/// Flattens an M/L/C path adaptively to within `tolerance` after `transform`.
pub fn flatten_path(path: &PathElement, transform: &AffineTransform, tolerance: f64) -> Outline {
    let mut subpaths = Vec::new();
    let mut current: Vec<Point> = Vec::new();
    let mut segments = 0;
    let mut last = Point::default();
    for cmd in path.commands() {
        let cmd = cmd.map_points(|p| transform.apply(p));
        match cmd {
            PathCommand::MoveTo(p) => {
                subpaths.extend(Polyline::new(std::mem::take(&mut current)));
                current.push(p);
            }
            PathCommand::LineTo(p) => {
                current.push(p);
                segments += 1;
            }
            PathCommand::CubicTo(c1, c2, p) => {
                flatten_cubic_into(last, c1, c2, p, tolerance, &mut current);
                segments += 1;
            }
        }
        last = cmd.end();
    }
    subpaths.extend(Polyline::new(current));
    Outline { subpaths, segments }
}

struct Pen<'o> {
    options: &'o SampleOptions,
    subpaths: Vec<Polyline>,
    current: Vec<Point>,
    segments: usize,
}

impl<'o> Pen<'o> {
    fn new(options: &'o SampleOptions) -> Self {
        Self {
            options,
            subpaths: Vec::new(),
            current: Vec::new(),
            segments: 0,
        }
    }

    fn start(&mut self, p: Point) {
        self.flush();
        self.current.push(self.options.transform.apply(p));
    }

    fn flush(&mut self) {
        if self.current.len() > 1 {
            self.subpaths.extend(Polyline::new(std::mem::take(&mut self.current)));
        } else {
            self.current.clear();
        }
    }

    /// Adds samples at `t = 1/n … 1` of a parametric piece starting at the pen.
    fn trace(&mut self, n: usize, f: impl Fn(f64) -> Point) {
        for i in 1..=n {
            let p = f(i as f64 / n as f64);
            self.current.push(self.options.transform.apply(p));
        }
        self.segments += 1;
    }

    fn line(&mut self, from: Point, to: Point) {
        let n = self.options.n_per_segment;
        self.trace(n, |t| from.lerp(to, t));
    }

    fn cubic(&mut self, p0: Point, c1: Point, c2: Point, p1: Point) {
        let n = self.options.count_for(p0.distance(c1) + c1.distance(c2) + c2.distance(p1));
        self.trace(n, |t| {
            let mt = 1.0 - t;
            let (w0, w1, w2, w3) = (mt * mt * mt, 3.0 * mt * mt * t, 3.0 * mt * t * t, t * t * t);
            Point::new(
                w0 * p0.x + w1 * c1.x + w2 * c2.x + w3 * p1.x,
                w0 * p0.y + w1 * c1.y + w2 * c2.y + w3 * p1.y,
            )
        });
    }

    fn quad(&mut self, p0: Point, q: Point, p1: Point) {
        let n = self.options.count_for(p0.distance(q) + q.distance(p1));
        self.trace(n, |t| {
            let mt = 1.0 - t;
            let (w0, w1, w2) = (mt * mt, 2.0 * mt * t, t * t);
            Point::new(w0 * p0.x + w1 * q.x + w2 * p1.x, w0 * p0.y + w1 * q.y + w2 * p1.y)
        });
    }

    /// Elliptical sweep from `theta0` by `delta`, sampled per quarter turn.
    fn ellipse_arc(&mut self, e: &Ellipse, theta0: f64, delta: f64) {
        let quarters = (delta.abs() / FRAC_PI_2).ceil().max(1.0);
        let by_quarter = self.options.n_per_segment * quarters as usize;
        let n = by_quarter.max(self.options.count_for(e.rx.max(e.ry) * delta.abs()));
        self.trace(n, |t| e.at(theta0 + delta * t));
    }

    fn finish(mut self) -> Outline {
        self.flush();
        Outline {
            subpaths: self.subpaths,
            segments: self.segments,
        }
    }
}

struct Ellipse {
    center: Point,
    rx: f64,
    ry: f64,
    cos_phi: f64,
    sin_phi: f64,
}

impl Ellipse {
    fn axis_aligned(center: Point, rx: f64, ry: f64) -> Self {
        Self {
            center,
            rx,
            ry,
            cos_phi: 1.0,
            sin_phi: 0.0,
        }
    }

    fn at(&self, theta: f64) -> Point {
        let (u, v) = (self.rx * theta.cos(), self.ry * theta.sin());
        Point::new(
            self.center.x + u * self.cos_phi - v * self.sin_phi,
            self.center.y + u * self.sin_phi + v * self.cos_phi,
        )
    }
}

fn sample_shape(shape: &Shape, pen: &mut Pen<'_>) -> Result<(), VerifyError> {
    let degenerate = || VerifyError::DegenerateShape(shape.element_name());
    let p = Point::new;
    match *shape {
        Shape::Rect {
            x,
            y,
            width,
            height,
            rx,
            ry,
        } => {
            if !(width > 0.0 && height > 0.0) {
                return Err(degenerate());
            }
            let pick = |r: Option<f64>| r.filter(|v| *v > 0.0);
            let (mut rx, mut ry) = match (pick(rx), pick(ry)) {
                (Some(a), Some(b)) => (a, b),
                (Some(a), None) if ry.is_none() => (a, a),
                (None, Some(b)) if rx.is_none() => (b, b),
                _ => (0.0, 0.0),
            };
            rx = rx.min(width / 2.0);
            ry = ry.min(height / 2.0);
            let (x1, y1) = (x + width, y + height);
            if rx == 0.0 || ry == 0.0 {
                let corners = [p(x, y), p(x1, y), p(x1, y1), p(x, y1), p(x, y)];
                pen.start(corners[0]);
                for w in corners.windows(2) {
                    pen.line(w[0], w[1]);
                }
            } else {
                let corner = |cx: f64, cy: f64| Ellipse::axis_aligned(p(cx, cy), rx, ry);
                pen.start(p(x + rx, y));
                pen.line(p(x + rx, y), p(x1 - rx, y));
                pen.ellipse_arc(&corner(x1 - rx, y + ry), -FRAC_PI_2, FRAC_PI_2);
                pen.line(p(x1, y + ry), p(x1, y1 - ry));
                pen.ellipse_arc(&corner(x1 - rx, y1 - ry), 0.0, FRAC_PI_2);
                pen.line(p(x1 - rx, y1), p(x + rx, y1));
                pen.ellipse_arc(&corner(x + rx, y1 - ry), FRAC_PI_2, FRAC_PI_2);
                pen.line(p(x, y1 - ry), p(x, y + ry));
                pen.ellipse_arc(&corner(x + rx, y + ry), PI, FRAC_PI_2);
            }
        }
        Shape::Circle { cx, cy, r } => {
            if r.is_nan() || r <= 0.0 {
                return Err(degenerate());
            }
            pen.start(p(cx + r, cy));
            pen.ellipse_arc(&Ellipse::axis_aligned(p(cx, cy), r, r), 0.0, TAU);
        }
        Shape::Ellipse { cx, cy, rx, ry } => {
            if !(rx > 0.0 && ry > 0.0) {
                return Err(degenerate());
            }
            pen.start(p(cx + rx, cy));
            pen.ellipse_arc(&Ellipse::axis_aligned(p(cx, cy), rx, ry), 0.0, TAU);
        }
        Shape::Line { x1, y1, x2, y2 } => {
            pen.start(p(x1, y1));
            pen.line(p(x1, y1), p(x2, y2));
        }
        Shape::Polyline(ref pts) | Shape::Polygon(ref pts) => {
            if pts.len() < 2 {
                return Err(degenerate());
            }
            pen.start(pts[0]);
            for w in pts.windows(2) {
                pen.line(w[0], w[1]);
            }
            if matches!(shape, Shape::Polygon(_)) {
                pen.line(pts[pts.len() - 1], pts[0]);
            }
        }
    }
    Ok(())
}

fn sample_path(path: &PathElement, pen: &mut Pen<'_>) {
    let mut at = Point::default();
    for cmd in path.commands() {
        match *cmd {
            PathCommand::MoveTo(p) => pen.start(p),
            PathCommand::LineTo(p) => pen.line(at, p),
            PathCommand::CubicTo(c1, c2, p) => pen.cubic(at, c1, c2, p),
        }
        at = cmd.end();
    }
}

/// What the previous command left behind for S/s and T/t.
#[derive(Clone, Copy)]
enum Smooth {
    Cubic(Point),
    Quad(Point),
    Neither,
}

fn interpret(d: &str, pen: &mut Pen<'_>) -> Result<(), VerifyError> {
    let commands = parse_path_data(d).map_err(VerifyError::PathData)?;
    let mut at = Point::default();
    let mut subpath_start = Point::default();
    let mut open = false;
    let mut smooth = Smooth::Neither;

    for cmd in &commands {
        let a = cmd.args();
        let rel = cmd.is_relative();
        let base = if rel { at } else { Point::default() };
        let abs = |i: usize| Point::new(base.x + a[i], base.y + a[i + 1]);
        let letter = cmd.letter().to_ascii_uppercase();
        if letter != 'M' && letter != 'Z' && !open {
            pen.start(at);
            open = true;
        }
        let mut next_smooth = Smooth::Neither;
        match letter {
            'M' => {
                at = abs(0);
                subpath_start = at;
                pen.start(at);
                open = true;
            }
            'L' => {
                let to = abs(0);
                pen.line(at, to);
                at = to;
            }
            'H' => {
                let to = Point::new(if rel { at.x + a[0] } else { a[0] }, at.y);
                pen.line(at, to);
                at = to;
            }
            'V' => {
                let to = Point::new(at.x, if rel { at.y + a[0] } else { a[0] });
                pen.line(at, to);
                at = to;
            }
            'C' => {
                let (c1, c2, to) = (abs(0), abs(2), abs(4));
                pen.cubic(at, c1, c2, to);
                next_smooth = Smooth::Cubic(c2);
                at = to;
            }
            'S' => {
                let c1 = match smooth {
                    Smooth::Cubic(c) => Point::new(2.0 * at.x - c.x, 2.0 * at.y - c.y),
                    _ => at,
                };
                let (c2, to) = (abs(0), abs(2));
                pen.cubic(at, c1, c2, to);
                next_smooth = Smooth::Cubic(c2);
                at = to;
            }
            'Q' => {
                let (q, to) = (abs(0), abs(2));
                pen.quad(at, q, to);
                next_smooth = Smooth::Quad(q);
                at = to;
            }
            'T' => {
                let q = match smooth {
                    Smooth::Quad(c) => Point::new(2.0 * at.x - c.x, 2.0 * at.y - c.y),
                    _ => at,
                };
                let to = abs(0);
                pen.quad(at, q, to);
                next_smooth = Smooth::Quad(q);
                at = to;
            }
            'A' => {
                let to = abs(5);
                arc(pen, at, a[0], a[1], a[2], a[3] != 0.0, a[4] != 0.0, to);
                at = to;
            }
            'Z' => {
                if open && at != subpath_start {
                    pen.line(at, subpath_start);
                }
                at = subpath_start;
                open = false;
            }
            other => unreachable!("parser produced unknown command {other}"),
        }
        smooth = next_smooth;
    }
    Ok(())
}

/// Signed angle from `u` to `v`.
fn angle_between(u: (f64, f64), v: (f64, f64)) -> f64 {
    (u.0 * v.1 - u.1 * v.0).atan2(u.0 * v.0 + u.1 * v.1)
}

#[allow(clippy::too_many_arguments)]
fn arc(pen: &mut Pen<'_>, from: Point, rx: f64, ry: f64, rotation: f64, large: bool, sweep: bool, to: Point) {
    if from == to {
        return;
    }
    let (mut rx, mut ry) = (rx.abs(), ry.abs());
    if rx == 0.0 || ry == 0.0 {
        pen.line(from, to);
        return;
    }
    let (sin_phi, cos_phi) = rotation.to_radians().sin_cos();
    // Midpoint frame: rotate the half-chord into the ellipse axes.
    let hx = (from.x - to.x) / 2.0;
    let hy = (from.y - to.y) / 2.0;
    let x1 = cos_phi * hx + sin_phi * hy;
    let y1 = -sin_phi * hx + cos_phi * hy;
    let lambda = (x1 / rx).powi(2) + (y1 / ry).powi(2);
    if lambda > 1.0 {
        rx *= lambda.sqrt();
        ry *= lambda.sqrt();
    }
    let num = rx * rx * ry * ry - rx * rx * y1 * y1 - ry * ry * x1 * x1;
    let den = rx * rx * y1 * y1 + ry * ry * x1 * x1;
    let mut factor = (num / den).max(0.0).sqrt();
    if large == sweep {
        factor = -factor;
    }
    let cxp = factor * rx * y1 / ry;
    let cyp = -factor * ry * x1 / rx;
    let center = Point::new(
        cos_phi * cxp - sin_phi * cyp + (from.x + to.x) / 2.0,
        sin_phi * cxp + cos_phi * cyp + (from.y + to.y) / 2.0,
    );
    let u = ((x1 - cxp) / rx, (y1 - cyp) / ry);
    let v = ((-x1 - cxp) / rx, (-y1 - cyp) / ry);
    let theta0 = angle_between((1.0, 0.0), u);
    let mut delta = angle_between(u, v);
    if sweep && delta < 0.0 {
        delta += TAU;
    } else if !sweep && delta > 0.0 {
        delta -= TAU;
    }
    let e = Ellipse {
        center,
        rx,
        ry,
        cos_phi,
        sin_phi,
    };
    pen.ellipse_arc(&e, theta0, delta);
    // Pin the final sample to the exact endpoint.
    if let Some(last) = pen.current.last_mut() {
        *last = pen.options.transform.apply(to);
    }
}
