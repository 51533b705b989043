//! The `transform` attribute list syntax.

use crate::model::AffineTransform;

/// Parses a transform list; the leftmost function is the outermost transform.
pub fn parse_transform(value: &str) -> Result<AffineTransform, String> {
    let mut rest = value.trim_start();
    let mut total = AffineTransform::IDENTITY;
    while !rest.is_empty() {
        let open = rest
            .find('(')
            .ok_or_else(|| format!("expected '(' in transform {value:?}"))?;
        let name = rest[..open].trim().trim_start_matches(',').trim();
        let close = rest[open..]
            .find(')')
            .map(|i| open + i)
            .ok_or_else(|| format!("unterminated transform function {name:?}"))?;
        let args = rest[open + 1..close]
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<f64>().map_err(|_| format!("bad number {s:?} in {name}")))
            .collect::<Result<Vec<f64>, String>>()?;
        let m = match (name, args.as_slice()) {
            ("matrix", &[a, b, c, d, e, f]) => AffineTransform { a, b, c, d, e, f },
            ("translate", &[tx]) => AffineTransform::translate(tx, 0.0),
            ("translate", &[tx, ty]) => AffineTransform::translate(tx, ty),
            ("scale", &[s]) => AffineTransform::scale(s, s),
            ("scale", &[sx, sy]) => AffineTransform::scale(sx, sy),
            ("rotate", &[a]) => AffineTransform::rotate(a),
            ("rotate", &[a, cx, cy]) => {
                AffineTransform::translate(cx, cy)
                    * AffineTransform::rotate(a)
                    * AffineTransform::translate(-cx, -cy)
            }
            ("skewX", &[a]) => AffineTransform::skew_x(a),
            ("skewY", &[a]) => AffineTransform::skew_y(a),
            _ => {
                return Err(format!(
                    "unsupported transform {name}({} arguments)",
                    args.len()
                ))
            }
        };
        total = total * m;
        rest = rest[close + 1..].trim_start();
        rest = rest.strip_prefix(',').unwrap_or(rest).trim_start();
    }
    if total.is_finite() && total.determinant().is_finite() {
        Ok(total)
    } else {
        Err(format!("transform {value:?} is not finite"))
    }
}
