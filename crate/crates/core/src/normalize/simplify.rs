use super::arc::arc_to_cubics;
use crate::model::{Opcode, PathCommand, Point, RawCommand};

/// Closing segments shorter than this are treated as already closed.
pub const CLOSURE_EPSILON: f64 = 1e-9;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub(crate) struct SimplifyStats {
    pub arcs: usize,
    pub closures: usize,
}

/// Rewrites absolute commands into the M/L/C alphabet.
///
/// The output never has two MoveTo commands in a row and never ends with a
/// MoveTo. A drawing command after Z opens a new subpath at the old start.
pub fn simplify_commands(cmds: &[RawCommand]) -> Vec<PathCommand> {
    simplify_with_stats(cmds).0
}

pub(crate) fn simplify_with_stats(cmds: &[RawCommand]) -> (Vec<PathCommand>, SimplifyStats) {
    let mut out = Builder::default();
    let mut stats = SimplifyStats::default();
    let mut current = Point::default();
    let mut start = Point::default();
    let mut needs_move = true;
    let mut prev_cubic_ctrl: Option<Point> = None;
    let mut prev_quad_ctrl: Option<Point> = None;

    for cmd in cmds {
        debug_assert!(!cmd.is_relative(), "simplify expects absolute commands");
        let a = cmd.args();
        let pt = |i: usize| Point::new(a[i], a[i + 1]);
        let op = cmd.opcode();
        if !matches!(op, Opcode::MoveTo | Opcode::ClosePath) && needs_move {
            out.move_to(current);
            needs_move = false;
        }
        let mut cubic_ctrl = None;
        let mut quad_ctrl = None;
        match op {
            Opcode::MoveTo => {
                current = pt(0);
                start = current;
                out.move_to(current);
                needs_move = false;
            }
            Opcode::LineTo => {
                current = pt(0);
                out.push(PathCommand::LineTo(current));
            }
            Opcode::HorizontalTo => {
                current = Point::new(a[0], current.y);
                out.push(PathCommand::LineTo(current));
            }
            Opcode::VerticalTo => {
                current = Point::new(current.x, a[0]);
                out.push(PathCommand::LineTo(current));
            }
            Opcode::CubicTo => {
                let (c1, c2, end) = (pt(0), pt(2), pt(4));
                out.push(PathCommand::CubicTo(c1, c2, end));
                cubic_ctrl = Some(c2);
                current = end;
            }
            Opcode::SmoothCubicTo => {
                let c1 = reflect(prev_cubic_ctrl, current);
                let (c2, end) = (pt(0), pt(2));
                out.push(PathCommand::CubicTo(c1, c2, end));
                cubic_ctrl = Some(c2);
                current = end;
            }
            Opcode::QuadTo => {
                let (q, end) = (pt(0), pt(2));
                out.push(elevate(current, q, end));
                quad_ctrl = Some(q);
                current = end;
            }
            Opcode::SmoothQuadTo => {
                let q = reflect(prev_quad_ctrl, current);
                let end = pt(0);
                out.push(elevate(current, q, end));
                quad_ctrl = Some(q);
                current = end;
            }
            Opcode::ArcTo => {
                let end = pt(5);
                stats.arcs += 1;
                for seg in arc_to_cubics(current, a[0], a[1], a[2], a[3] != 0.0, a[4] != 0.0, end) {
                    out.push(seg);
                }
                current = end;
            }
            Opcode::ClosePath => {
                if !needs_move {
                    let gap = (current.x - start.x).abs().max((current.y - start.y).abs());
                    if gap > CLOSURE_EPSILON {
                        out.push(PathCommand::LineTo(start));
                        stats.closures += 1;
                    }
                }
                current = start;
                needs_move = true;
            }
        }
        prev_cubic_ctrl = cubic_ctrl;
        prev_quad_ctrl = quad_ctrl;
    }
    (out.finish(), stats)
}

fn reflect(ctrl: Option<Point>, about: Point) -> Point {
    match ctrl {
        Some(c) => Point::new(2.0 * about.x - c.x, 2.0 * about.y - c.y),
        None => about,
    }
}

/// Exact degree elevation of a quadratic.
fn elevate(p0: Point, q: Point, p2: Point) -> PathCommand {
    const TWO_THIRDS: f64 = 2.0 / 3.0;
    PathCommand::CubicTo(
        Point::new(p0.x + TWO_THIRDS * (q.x - p0.x), p0.y + TWO_THIRDS * (q.y - p0.y)),
        Point::new(p2.x + TWO_THIRDS * (q.x - p2.x), p2.y + TWO_THIRDS * (q.y - p2.y)),
        p2,
    )
}

#[derive(Default)]
struct Builder {
    cmds: Vec<PathCommand>,
}

impl Builder {
    fn move_to(&mut self, p: Point) {
        if let Some(PathCommand::MoveTo(last)) = self.cmds.last_mut() {
            *last = p;
        } else {
            self.cmds.push(PathCommand::MoveTo(p));
        }
    }

    fn push(&mut self, cmd: PathCommand) {
        self.cmds.push(cmd);
    }

    fn finish(mut self) -> Vec<PathCommand> {
        if matches!(self.cmds.last(), Some(PathCommand::MoveTo(_))) {
            self.cmds.pop();
        }
        self.cmds
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normalize::to_absolute;
    use crate::parser::parse_path_data;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    fn cmd(letter: char, args: &[f64]) -> RawCommand {
        RawCommand::from_letter(letter, args).unwrap()
    }

    fn simplify_text(d: &str) -> Vec<PathCommand> {
        simplify_commands(&to_absolute(&parse_path_data(d).unwrap()).unwrap())
    }

    #[test]
    fn axis_projection() {
        assert_eq!(
            simplify_commands(&[cmd('M', &[0.0, 0.0]), cmd('H', &[10.0])]),
            vec![PathCommand::MoveTo(p(0.0, 0.0)), PathCommand::LineTo(p(10.0, 0.0))]
        );
        assert_eq!(
            simplify_text("M3 4V-1")[1],
            PathCommand::LineTo(p(3.0, -1.0))
        );
    }

    #[test]
    fn quadratic_degree_elevation() {
        let out = simplify_commands(&[cmd('M', &[0.0, 0.0]), cmd('Q', &[5.0, 10.0, 10.0, 0.0])]);
        let PathCommand::CubicTo(c1, c2, end) = out[1] else {
            panic!("expected cubic")
        };
        assert!(c1.distance(p(10.0 / 3.0, 20.0 / 3.0)) < 1e-12);
        assert!(c2.distance(p(20.0 / 3.0, 20.0 / 3.0)) < 1e-12);
        assert_eq!(end, p(10.0, 0.0));
        // The elevated cubic traces the quadratic: compare the t = 0.5 points.
        let quad_mid = p(0.25 * 0.0 + 0.5 * 5.0 + 0.25 * 10.0, 0.5 * 10.0);
        let cubic_mid = p(
            0.125 * 0.0 + 0.375 * c1.x + 0.375 * c2.x + 0.125 * end.x,
            0.375 * c1.y + 0.375 * c2.y,
        );
        assert!(quad_mid.distance(cubic_mid) < 1e-9);
    }

    #[test]
    fn closure_materialization() {
        assert_eq!(
            simplify_commands(&[cmd('M', &[0.0, 0.0]), cmd('L', &[10.0, 0.0]), cmd('Z', &[])]),
            vec![
                PathCommand::MoveTo(p(0.0, 0.0)),
                PathCommand::LineTo(p(10.0, 0.0)),
                PathCommand::LineTo(p(0.0, 0.0)),
            ]
        );
        // Already closed: the Z vanishes.
        assert_eq!(simplify_text("M0 0L5 0L0 0Z").len(), 3);
    }

    #[test]
    fn drawing_after_close_starts_a_new_subpath() {
        assert_eq!(
            simplify_text("M1 1L5 1Zl2 2"),
            vec![
                PathCommand::MoveTo(p(1.0, 1.0)),
                PathCommand::LineTo(p(5.0, 1.0)),
                PathCommand::LineTo(p(1.0, 1.0)),
                PathCommand::MoveTo(p(1.0, 1.0)),
                PathCommand::LineTo(p(3.0, 3.0)),
            ]
        );
    }

    #[test]
    fn smooth_cubic_reflection() {
        let out = simplify_text("M0 0C1 1 2 1 3 0S5 -1 6 0");
        assert_eq!(out[2], PathCommand::CubicTo(p(4.0, -1.0), p(5.0, -1.0), p(6.0, 0.0)));
        // Previous command is a line: first control point is the current point.
        let out = simplify_text("M0 0L3 0S5 -1 6 0");
        assert_eq!(out[2], PathCommand::CubicTo(p(3.0, 0.0), p(5.0, -1.0), p(6.0, 0.0)));
    }

    #[test]
    fn smooth_quadratic_reflection_chain() {
        // Q control (1, 2) reflected about (2, 0) gives T control (3, -2).
        let out = simplify_text("M0 0Q1 2 2 0T4 0");
        let expected = elevate(p(2.0, 0.0), p(3.0, -2.0), p(4.0, 0.0));
        assert_eq!(out[2], expected);
        // T after a cubic does not reflect.
        let out = simplify_text("M0 0C0 1 1 1 1 0T2 0");
        assert_eq!(out[2], elevate(p(1.0, 0.0), p(1.0, 0.0), p(2.0, 0.0)));
    }

    #[test]
    fn consecutive_and_trailing_moves_collapse() {
        assert_eq!(
            simplify_text("M0 0M5 5L6 6M9 9"),
            vec![PathCommand::MoveTo(p(5.0, 5.0)), PathCommand::LineTo(p(6.0, 6.0))]
        );
        assert!(simplify_text("M0 0").is_empty());
        assert!(simplify_text("M0 0Z").is_empty());
    }

    #[test]
    fn arc_counts_and_endpoint() {
        let abs = to_absolute(&parse_path_data("M0 0A5 5 0 0 1 10 0").unwrap()).unwrap();
        let (out, stats) = simplify_with_stats(&abs);
        assert_eq!(stats.arcs, 1);
        assert_eq!(out.len(), 3);
        assert_eq!(out.last().unwrap().end(), p(10.0, 0.0));
    }

    #[test]
    fn alphabet_closure_for_every_opcode() {
        let out = simplify_text(
            "M0 0m1 1L2 2l1 1H3h1V4v1C1 1 2 2 3 3c1 1 2 2 3 3S1 1 2 2s1 1 2 2Q1 1 2 2q1 1 2 2T5 5t1 1A1 1 0 0 1 9 9a1 1 0 1 0 1 1Zz",
        );
        assert!(matches!(out[0], PathCommand::MoveTo(_)));
        assert!(out.len() > 15);
    }
}
