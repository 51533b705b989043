//! Elliptical arcs as cubic Béziers.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::model::{PathCommand, Point};

/// Handle length, relative to the radius, for a cubic spanning `sweep` radians.
pub fn handle_length(sweep: f64) -> f64 {
    4.0 / 3.0 * (sweep / 4.0).tan()
}

/// An arc in center parameterization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct CenterArc {
    pub center: Point,
    pub rx: f64,
    pub ry: f64,
    /// x-axis rotation in radians.
    pub phi: f64,
    pub start_angle: f64,
    pub sweep_angle: f64,
}

impl CenterArc {
    pub fn point_at(&self, theta: f64) -> Point {
        let (sin_phi, cos_phi) = self.phi.sin_cos();
        let (sin, cos) = theta.sin_cos();
        Point::new(
            self.center.x + self.rx * cos * cos_phi - self.ry * sin * sin_phi,
            self.center.y + self.rx * cos * sin_phi + self.ry * sin * cos_phi,
        )
    }

    fn derivative_at(&self, theta: f64) -> Point {
        let (sin_phi, cos_phi) = self.phi.sin_cos();
        let (sin, cos) = theta.sin_cos();
        Point::new(
            -self.rx * sin * cos_phi - self.ry * cos * sin_phi,
            -self.rx * sin * sin_phi + self.ry * cos * cos_phi,
        )
    }
}

/// Endpoint to center conversion following the SVG implementation notes.
/// Returns `None` for arcs that degenerate (coincident endpoints, zero radius).
pub(crate) fn center_parameterization(
    start: Point,
    mut rx: f64,
    mut ry: f64,
    x_rotation_deg: f64,
    large_arc: bool,
    sweep: bool,
    end: Point,
) -> Option<CenterArc> {
    if start == end {
        return None;
    }
    rx = rx.abs();
    ry = ry.abs();
    if rx == 0.0 || ry == 0.0 {
        return None;
    }
    let phi = (x_rotation_deg % 360.0).to_radians();
    let (sin_phi, cos_phi) = phi.sin_cos();
    let hx = (start.x - end.x) / 2.0;
    let hy = (start.y - end.y) / 2.0;
    let x1 = cos_phi * hx + sin_phi * hy;
    let y1 = -sin_phi * hx + cos_phi * hy;

    let lambda = (x1 * x1) / (rx * rx) + (y1 * y1) / (ry * ry);
    if lambda > 1.0 {
        let s = lambda.sqrt();
        rx *= s;
        ry *= s;
    }
    let (rx2, ry2) = (rx * rx, ry * ry);
    let num = rx2 * ry2 - rx2 * y1 * y1 - ry2 * x1 * x1;
    let den = rx2 * y1 * y1 + ry2 * x1 * x1;
    let mut coef = (num / den).max(0.0).sqrt();
    if large_arc == sweep {
        coef = -coef;
    }
    let cxp = coef * rx * y1 / ry;
    let cyp = -coef * ry * x1 / rx;
    let center = Point::new(
        cos_phi * cxp - sin_phi * cyp + (start.x + end.x) / 2.0,
        sin_phi * cxp + cos_phi * cyp + (start.y + end.y) / 2.0,
    );

    let angle = |ux: f64, uy: f64, vx: f64, vy: f64| (ux * vy - uy * vx).atan2(ux * vx + uy * vy);
    let (ux, uy) = ((x1 - cxp) / rx, (y1 - cyp) / ry);
    let (vx, vy) = ((-x1 - cxp) / rx, (-y1 - cyp) / ry);
    let start_angle = angle(1.0, 0.0, ux, uy);
    let mut sweep_angle = angle(ux, uy, vx, vy) % TAU;
    if !sweep && sweep_angle > 0.0 {
        sweep_angle -= TAU;
    } else if sweep && sweep_angle < 0.0 {
        sweep_angle += TAU;
    }
    if !sweep_angle.is_finite() || !center.is_finite() {
        return None;
    }
    Some(CenterArc {
        center,
        rx,
        ry,
        phi,
        start_angle,
        sweep_angle,
    })
}

/// Converts an endpoint-parameterized arc into at most four cubics of ≤ 90° each.
///
/// Coincident endpoints produce nothing and a zero radius produces a single
/// line. The first cubic starts at `start` and the last ends exactly at `end`.
pub fn arc_to_cubics(
    start: Point,
    rx: f64,
    ry: f64,
    x_rotation_deg: f64,
    large_arc: bool,
    sweep: bool,
    end: Point,
) -> Vec<PathCommand> {
    if start == end {
        return Vec::new();
    }
    let Some(arc) = center_parameterization(start, rx, ry, x_rotation_deg, large_arc, sweep, end)
    else {
        return vec![PathCommand::LineTo(end)];
    };
    let segments = ((arc.sweep_angle.abs() / FRAC_PI_2) - 1e-9).ceil().max(1.0) as usize;
    debug_assert!(segments <= 4 && arc.sweep_angle.abs() <= 2.0 * PI + 1e-9);
    let delta = arc.sweep_angle / segments as f64;
    let k = handle_length(delta);

    let mut out = Vec::with_capacity(segments);
    let mut from = start;
    let mut theta = arc.start_angle;
    for i in 0..segments {
        let next = theta + delta;
        let to = if i + 1 == segments {
            end
        } else {
            arc.point_at(next)
        };
        let d0 = arc.derivative_at(theta);
        let d1 = arc.derivative_at(next);
        let c1 = Point::new(from.x + k * d0.x, from.y + k * d0.y);
        let c2 = Point::new(to.x - k * d1.x, to.y - k * d1.y);
        out.push(PathCommand::CubicTo(c1, c2, to));
        from = to;
        theta = next;
    }
    out
}
