use super::arc::{arc_to_cubics, handle_length};
use super::NormalizeError;
use crate::model::{Paint, PathCommand, PathElement, Point};
use crate::parser::Shape;

/// Converts a basic shape into an equivalent M/L/C path.
pub fn shape_to_path(shape: &Shape, fill: Paint) -> Result<PathElement, NormalizeError> {
    let commands = shape_commands(shape)?;
    PathElement::new(commands, fill).map_err(NormalizeError::Model)
}

pub(crate) fn shape_commands(shape: &Shape) -> Result<Vec<PathCommand>, NormalizeError> {
    let degenerate = || NormalizeError::DegenerateShape(shape.element_name());
    let p = Point::new;
    Ok(match *shape {
        Shape::Rect {
            x,
            y,
            width: w,
            height: h,
            rx,
            ry,
        } => {
            if !(w > 0.0 && h > 0.0) {
                return Err(degenerate());
            }
            let (rx, ry) = corner_radii(rx, ry, w, h);
            if rx == 0.0 || ry == 0.0 {
                vec![
                    PathCommand::MoveTo(p(x, y)),
                    PathCommand::LineTo(p(x + w, y)),
                    PathCommand::LineTo(p(x + w, y + h)),
                    PathCommand::LineTo(p(x, y + h)),
                    PathCommand::LineTo(p(x, y)),
                ]
            } else {
                rounded_rect(x, y, w, h, rx, ry)
            }
        }
        Shape::Circle { cx, cy, r } => {
            if r.is_nan() || r <= 0.0 {
                return Err(degenerate());
            }
            ellipse(cx, cy, r, r)
        }
        Shape::Ellipse { cx, cy, rx, ry } => {
            if !(rx > 0.0 && ry > 0.0) {
                return Err(degenerate());
            }
            ellipse(cx, cy, rx, ry)
        }
        Shape::Line { x1, y1, x2, y2 } => {
            vec![PathCommand::MoveTo(p(x1, y1)), PathCommand::LineTo(p(x2, y2))]
        }
        Shape::Polyline(ref pts) | Shape::Polygon(ref pts) => {
            if pts.len() < 2 {
                return Err(degenerate());
            }
            let mut cmds = Vec::with_capacity(pts.len() + 1);
            cmds.push(PathCommand::MoveTo(pts[0]));
            cmds.extend(pts[1..].iter().map(|&q| PathCommand::LineTo(q)));
            if matches!(shape, Shape::Polygon(_)) && pts[pts.len() - 1] != pts[0] {
                cmds.push(PathCommand::LineTo(pts[0]));
            }
            cmds
        }
    })
}

/// SVG rules: a missing radius copies the other, negatives count as zero,
/// and radii are clamped to half the side.
fn corner_radii(rx: Option<f64>, ry: Option<f64>, w: f64, h: f64) -> (f64, f64) {
    let (rx, ry) = match (rx, ry) {
        (None, None) => (0.0, 0.0),
        (Some(r), None) | (None, Some(r)) => (r, r),
        (Some(a), Some(b)) => (a, b),
    };
    (rx.max(0.0).min(w / 2.0), ry.max(0.0).min(h / 2.0))
}

fn rounded_rect(x: f64, y: f64, w: f64, h: f64, rx: f64, ry: f64) -> Vec<PathCommand> {
    let p = Point::new;
    let mut cmds = vec![PathCommand::MoveTo(p(x + rx, y))];
    let mut current = p(x + rx, y);
    let line = |cmds: &mut Vec<PathCommand>, current: &mut Point, to: Point| {
        if *current != to {
            cmds.push(PathCommand::LineTo(to));
            *current = to;
        }
    };
    let corner = |cmds: &mut Vec<PathCommand>, current: &mut Point, to: Point| {
        cmds.extend(arc_to_cubics(*current, rx, ry, 0.0, false, true, to));
        *current = to;
    };
    line(&mut cmds, &mut current, p(x + w - rx, y));
    corner(&mut cmds, &mut current, p(x + w, y + ry));
    line(&mut cmds, &mut current, p(x + w, y + h - ry));
    corner(&mut cmds, &mut current, p(x + w - rx, y + h));
    line(&mut cmds, &mut current, p(x + rx, y + h));
    corner(&mut cmds, &mut current, p(x, y + h - ry));
    line(&mut cmds, &mut current, p(x, y + ry));
    corner(&mut cmds, &mut current, p(x + rx, y));
    cmds
}

/// Four quarter cubics starting at the rightmost point, in the direction of
/// increasing angle (clockwise on screen).
fn ellipse(cx: f64, cy: f64, rx: f64, ry: f64) -> Vec<PathCommand> {
    let k = handle_length(std::f64::consts::FRAC_PI_2);
    let (kx, ky) = (k * rx, k * ry);
    let p = Point::new;
    vec![
        PathCommand::MoveTo(p(cx + rx, cy)),
        PathCommand::CubicTo(p(cx + rx, cy + ky), p(cx + kx, cy + ry), p(cx, cy + ry)),
        PathCommand::CubicTo(p(cx - kx, cy + ry), p(cx - rx, cy + ky), p(cx - rx, cy)),
        PathCommand::CubicTo(p(cx - rx, cy - ky), p(cx - kx, cy - ry), p(cx, cy - ry)),
        PathCommand::CubicTo(p(cx + kx, cy - ry), p(cx + rx, cy - ky), p(cx + rx, cy)),
    ]
}
