use super::NormalizeError;
use crate::model::{Opcode, Point, RawCommand};

/// Rewrites every relative command as its absolute equivalent.
///
/// H and V stay axis commands; only their coordinate is offset. For arcs only
/// the endpoint is relative. After Z the current point returns to the start
/// of the subpath. A leading `m` is measured from the origin.
pub fn to_absolute(cmds: &[RawCommand]) -> Result<Vec<RawCommand>, NormalizeError> {
    let mut out = Vec::with_capacity(cmds.len());
    let mut current: Option<Point> = None;
    let mut subpath_start = Point::default();

    for (index, cmd) in cmds.iter().enumerate() {
        let op = cmd.opcode();
        let base = match current {
            Some(p) => p,
            None if op == Opcode::MoveTo => Point::default(),
            None if cmd.is_relative() => return Err(NormalizeError::NoCurrentPoint { index }),
            None => Point::default(),
        };
        let a = cmd.args();
        let (dx, dy) = if cmd.is_relative() {
            (base.x, base.y)
        } else {
            (0.0, 0.0)
        };
        let args: Vec<f64> = match op {
            Opcode::HorizontalTo => vec![a[0] + dx],
            Opcode::VerticalTo => vec![a[0] + dy],
            Opcode::ArcTo => vec![a[0], a[1], a[2], a[3], a[4], a[5] + dx, a[6] + dy],
            Opcode::ClosePath => Vec::new(),
            _ => a
                .chunks_exact(2)
                .flat_map(|xy| [xy[0] + dx, xy[1] + dy])
                .collect(),
        };
        let abs = RawCommand::new(op, false, &args).expect("arity preserved");
        current = Some(match op {
            Opcode::ClosePath => subpath_start,
            Opcode::HorizontalTo => Point::new(args[0], base.y),
            Opcode::VerticalTo => Point::new(base.x, args[0]),
            _ => Point::new(args[args.len() - 2], args[args.len() - 1]),
        });
        if op == Opcode::MoveTo {
            subpath_start = current.expect("just set");
        }
        out.push(abs);
    }
    Ok(out)
}
