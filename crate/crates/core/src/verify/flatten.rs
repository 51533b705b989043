use crate::model::Point;

/// Subdivision stops at this depth even if the flatness target is not met.
const MAX_DEPTH: u32 = 24;

/// An ordered point sequence without consecutive duplicates.
///
/// A polyline always keeps its two endpoints, so a zero-length piece is
/// stored as two equal points rather than one.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    points: Vec<Point>,
}

impl Polyline {
    /// `None` when `points` is empty.
    pub fn new(points: Vec<Point>) -> Option<Polyline> {
        let last = *points.last()?;
        let mut deduped: Vec<Point> = Vec::with_capacity(points.len());
        for p in points {
            if deduped.last() != Some(&p) {
                deduped.push(p);
            }
        }
        if deduped.len() == 1 {
            deduped.push(last);
        }
        Some(Polyline { points: deduped })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn segments(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        self.points.windows(2).map(|w| (w[0], w[1]))
    }

    pub fn map(&self, f: impl Fn(Point) -> Point) -> Polyline {
        Polyline::new(self.points.iter().map(|&p| f(p)).collect()).expect("mapping keeps the point count")
    }
}

/// Distance from `p` to the closed segment `a`–`b`.
pub fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    if p == a || p == b {
        return 0.0;
    }
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let len2 = dx * dx + dy * dy;
    if len2 == 0.0 {
        return p.distance(a);
    }
    let t = (((p.x - a.x) * dx + (p.y - a.y) * dy) / len2).clamp(0.0, 1.0);
    p.distance(Point::new(a.x + t * dx, a.y + t * dy))
}

/// Flattens a cubic Bézier by recursive midpoint subdivision until every
/// piece's control points lie within `tolerance` of its chord.
pub fn flatten_cubic(p0: Point, c1: Point, c2: Point, p1: Point, tolerance: f64) -> Polyline {
    let mut out = vec![p0];
    subdivide(p0, c1, c2, p1, tolerance, 0, &mut out);
    Polyline::new(out).expect("flattening emits at least the start point")
}

pub(crate) fn flatten_cubic_into(p0: Point, c1: Point, c2: Point, p1: Point, tolerance: f64, out: &mut Vec<Point>) {
    subdivide(p0, c1, c2, p1, tolerance, 0, out);
}

fn subdivide(p0: Point, c1: Point, c2: Point, p1: Point, tolerance: f64, depth: u32, out: &mut Vec<Point>) {
    let flatness = point_segment_distance(c1, p0, p1).max(point_segment_distance(c2, p0, p1));
    if flatness <= tolerance || depth >= MAX_DEPTH {
        out.push(p1);
        return;
    }
    let ab = p0.lerp(c1, 0.5);
    let bc = c1.lerp(c2, 0.5);
    let cd = c2.lerp(p1, 0.5);
    let abc = ab.lerp(bc, 0.5);
    let bcd = bc.lerp(cd, 0.5);
    let mid = abc.lerp(bcd, 0.5);
    subdivide(p0, ab, abc, mid, tolerance, depth + 1, out);
    subdivide(mid, bcd, cd, p1, tolerance, depth + 1, out);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::max_deviation;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    fn quarter() -> [Point; 4] {
        let k = 4.0 / 3.0 * (std::f64::consts::PI / 8.0).tan();
        [p(1.0, 0.0), p(1.0, k), p(k, 1.0), p(0.0, 1.0)]
    }

    fn bezier(q: [Point; 4], t: f64) -> Point {
        let mt = 1.0 - t;
        let w = [mt * mt * mt, 3.0 * mt * mt * t, 3.0 * mt * t * t, t * t * t];
        p(
            q.iter().zip(w).map(|(a, w)| a.x * w).sum(),
            q.iter().zip(w).map(|(a, w)| a.y * w).sum(),
        )
    }

    #[test]
    fn straight_cubic_is_two_points() {
        for tol in [1.0, 1e-3, 1e-9] {
            let line = flatten_cubic(p(0.0, 0.0), p(1.0, 1.0), p(2.0, 2.0), p(3.0, 3.0), tol);
            assert_eq!(line.points(), &[p(0.0, 0.0), p(3.0, 3.0)]);
        }
    }

    #[test]
    fn quarter_circle_vertices_near_unit_circle() {
        let [a, b, c, d] = quarter();
        let line = flatten_cubic(a, b, c, d, 1e-3);
        assert_eq!(line.points()[0], a);
        assert_eq!(*line.points().last().unwrap(), d);
        for q in line.points() {
            assert!((q.x.hypot(q.y) - 1.0).abs() <= 1e-3 + 2.8e-4);
        }
    }

    #[test]
    fn refinement_is_monotone_and_converges() {
        let q = quarter();
        let truth = Polyline::new((0..=4000).map(|i| bezier(q, i as f64 / 4000.0)).collect()).unwrap();
        let mut last_count = 0;
        let mut last_dev = f64::INFINITY;
        for tol in [1e-1, 1e-2, 1e-3] {
            let line = flatten_cubic(q[0], q[1], q[2], q[3], tol);
            assert!(line.len() >= last_count);
            let dev = max_deviation(&line, &truth).max_deviation;
            assert!(dev <= last_dev, "{dev} > {last_dev}");
            assert!(dev <= tol + 1e-6);
            last_count = line.len();
            last_dev = dev;
        }
    }

    #[test]
    fn polyline_dedup_keeps_endpoints() {
        let line = Polyline::new(vec![p(0.0, 0.0), p(0.0, 0.0), p(1.0, 0.0), p(1.0, 0.0)]).unwrap();
        assert_eq!(line.points(), &[p(0.0, 0.0), p(1.0, 0.0)]);
        let dot = Polyline::new(vec![p(2.0, 2.0), p(2.0, 2.0)]).unwrap();
        assert_eq!(dot.len(), 2);
        assert!(Polyline::new(vec![]).is_none());
    }

    #[test]
    fn segment_distance() {
        assert_eq!(point_segment_distance(p(0.5, 1.0), p(0.0, 0.0), p(1.0, 0.0)), 1.0);
        assert_eq!(point_segment_distance(p(3.0, 4.0), p(0.0, 0.0), p(0.0, 0.0)), 5.0);
        assert_eq!(point_segment_distance(p(-3.0, 4.0), p(0.0, 0.0), p(1.0, 0.0)), 5.0);
    }
}
