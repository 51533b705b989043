use serde::Serialize;

use super::flatten::{point_segment_distance, Polyline};
use crate::model::Point;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeviationReport {
    pub max_deviation: f64,
    /// The sample point realizing the maximum.
    pub argmax_point: Point,
    /// Sample points examined across both sides.
    pub samples_used: usize,
}

/// Symmetric discrete Hausdorff-style distance: the largest distance from a
/// vertex of either polyline to the nearest segment of the other.
pub fn max_deviation(a: &Polyline, b: &Polyline) -> DeviationReport {
    outline_deviation(std::slice::from_ref(a), std::slice::from_ref(b))
}

/// [`max_deviation`] over outlines made of several subpaths.
///
/// An empty side against a non-empty one yields an infinite deviation.
pub fn outline_deviation(a: &[Polyline], b: &[Polyline]) -> DeviationReport {
    let (da, pa, na) = directed(a, b);
    let (db, pb, nb) = directed(b, a);
    let (max_deviation, argmax_point) = if db > da { (db, pb) } else { (da, pa) };
    DeviationReport {
        max_deviation,
        argmax_point,
        samples_used: na + nb,
    }
}

fn directed(from: &[Polyline], to: &[Polyline]) -> (f64, Point, usize) {
    let mut worst = 0.0f64;
    let mut witness = from
        .first()
        .map(|l| l.points()[0])
        .unwrap_or_default();
    let mut count = 0;
    for p in from.iter().flat_map(|l| l.points().iter().copied()) {
        count += 1;
        let nearest = to
            .iter()
            .flat_map(|l| l.segments())
            .map(|(s, e)| point_segment_distance(p, s, e))
            .fold(f64::INFINITY, f64::min);
        if nearest > worst {
            worst = nearest;
            witness = p;
        }
    }
    (worst, witness, count)
}
