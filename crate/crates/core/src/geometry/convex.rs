//! Strictly convex CCW polygons and the low-level predicates the rest of
//! the geometry stack is built on.

use nalgebra::Vector2;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::TOL_GEOM;
use crate::error::{Error, Result};
use crate::se2::Pose;

pub type Point = Vector2<f64>;

pub fn cross(a: Point, b: Point) -> f64 {
    a.x * b.y - a.y * b.x
}

/// A strictly convex polygon with counter-clockwise vertex order.
///
/// Vertex order is preserved exactly as supplied, so edge `i` (from
/// vertex `i` to vertex `i + 1`, cyclically) is stable and addressable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexPolygon {
    vertices: Vec<Point>,
}

impl ConvexPolygon {
    /// Validates ≥3 vertices, CCW orientation and strict convexity
    /// (every consecutive edge cross product above `TOL_GEOM`).
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::InvalidGeometry(format!(
                "polygon needs at least 3 vertices, got {}",
                vertices.len()
            )));
        }
        for v in &vertices {
            if !v.x.is_finite() || !v.y.is_finite() {
                return Err(Error::InvalidGeometry("non-finite vertex".into()));
            }
        }
        let n = vertices.len();
        for i in 0..n {
            let a = vertices[i];
            let b = vertices[(i + 1) % n];
            let c = vertices[(i + 2) % n];
            let turn = cross(b - a, c - b);
            if turn <= TOL_GEOM {
                return Err(Error::InvalidGeometry(format!(
                    "vertices {}..{} are collinear or wound clockwise (turn {:e})",
                    i,
                    (i + 2) % n,
                    turn
                )));
            }
        }
        Ok(ConvexPolygon { vertices })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn edge(&self, i: usize) -> (Point, Point) {
        let n = self.vertices.len();
        (self.vertices[i % n], self.vertices[(i + 1) % n])
    }

    /// Unit normal of edge `i` pointing out of the polygon.
    pub fn edge_outward_normal(&self, i: usize) -> Point {
        let (a, b) = self.edge(i);
        let d = b - a;
        Vector2::new(d.y, -d.x).normalize()
    }

    pub fn signed_area(&self) -> f64 {
        let n = self.vertices.len();
        let mut s = 0.0;
        for i in 0..n {
            let (a, b) = self.edge(i);
            s += cross(a, b);
        }
        s * 0.5
    }

    pub fn centroid(&self) -> Point {
        let n = self.vertices.len();
        let mut acc = Vector2::zeros();
        let mut area = 0.0;
        for i in 0..n {
            let (a, b) = self.edge(i);
            let w = cross(a, b);
            acc += (a + b) * w;
            area += w;
        }
        acc / (3.0 * area)
    }

    /// Largest outward-signed distance from `p` to any edge line, with the
    /// index of the maximizing edge. Negative inside, positive outside;
    /// for shallow penetrations `-value` is the depth and the maximizing
    /// edge is the exit face.
    pub fn max_edge_signed_distance(&self, p: Point) -> (f64, usize) {
        let mut best = f64::NEG_INFINITY;
        let mut best_i = 0;
        for i in 0..self.vertices.len() {
            let (a, _) = self.edge(i);
            let d = self.edge_outward_normal(i).dot(&(p - a));
            if d > best {
                best = d;
                best_i = i;
            }
        }
        (best, best_i)
    }

    /// Inclusive containment within `tol` of the boundary.
    pub fn contains_point(&self, p: Point, tol: f64) -> bool {
        self.max_edge_signed_distance(p).0 <= tol
    }

    /// Point reflection through the origin. Vertex `i` maps to `-v[i]`
    /// and edge `i` to the reflected edge `i` (reflection is a rotation
    /// by pi, so orientation and indexing are preserved).
    pub fn reflected(&self) -> ConvexPolygon {
        ConvexPolygon {
            vertices: self.vertices.iter().map(|v| -v).collect(),
        }
    }

    pub fn transformed(&self, pose: &Pose) -> ConvexPolygon {
        ConvexPolygon {
            vertices: self.vertices.iter().map(|v| pose.apply(*v)).collect(),
        }
    }

    /// Axis-aligned bounding box as `(min, max)`.
    pub fn aabb(&self) -> (Point, Point) {
        let mut lo = self.vertices[0];
        let mut hi = self.vertices[0];
        for v in &self.vertices {
            lo.x = lo.x.min(v.x);
            lo.y = lo.y.min(v.y);
            hi.x = hi.x.max(v.x);
            hi.y = hi.y.max(v.y);
        }
        (lo, hi)
    }
}

pub fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_squared();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a).dot(&ab) / len2).clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

/// Distance between two segments; zero when they intersect.
pub fn segment_segment_distance(a1: Point, a2: Point, b1: Point, b2: Point) -> f64 {
    if segments_properly_intersect(a1, a2, b1, b2) {
        return 0.0;
    }
    point_segment_distance(a1, b1, b2)
        .min(point_segment_distance(a2, b1, b2))
        .min(point_segment_distance(b1, a1, a2))
        .min(point_segment_distance(b2, a1, a2))
}

fn segments_properly_intersect(a1: Point, a2: Point, b1: Point, b2: Point) -> bool {
    let d1 = cross(a2 - a1, b1 - a1);
    let d2 = cross(a2 - a1, b2 - a1);
    let d3 = cross(b2 - b1, a1 - b1);
    let d4 = cross(b2 - b1, a2 - b1);
    ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
}

/// Penetration depth (minimum translation distance) between two convex
/// polygons via the separating-axis test over both polygons' edge
/// normals. Returns 0 when separated or merely touching.
pub fn sat_penetration(a: &ConvexPolygon, b: &ConvexPolygon) -> f64 {
    let mut min_overlap = f64::INFINITY;
    for (poly, other) in [(a, b), (b, a)] {
        for i in 0..poly.len() {
            let axis = poly.edge_outward_normal(i);
            let (a_lo, a_hi) = project(a, axis);
            let (b_lo, b_hi) = project(b, axis);
            let overlap = a_hi.min(b_hi) - a_lo.max(b_lo);
            if overlap <= 0.0 {
                return 0.0;
            }
            min_overlap = min_overlap.min(overlap);
            let _ = other;
        }
    }
    min_overlap
}

fn project(p: &ConvexPolygon, axis: Point) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for v in p.vertices() {
        let d = axis.dot(v);
        lo = lo.min(d);
        hi = hi.max(d);
    }
    (lo, hi)
}

/// Strictly convex hull (Andrew monotone chain, collinear points dropped).
pub fn convex_hull(mut points: Vec<Point>) -> Result<ConvexPolygon> {
    points.sort_by(|p, q| p.x.partial_cmp(&q.x).unwrap().then(p.y.partial_cmp(&q.y).unwrap()));
    points.dedup_by(|p, q| (*p - *q).norm() <= TOL_GEOM);
    if points.len() < 3 {
        return Err(Error::InvalidGeometry("hull of fewer than 3 points".into()));
    }
    let mut build = |iter: &mut dyn Iterator<Item = &Point>| {
        let mut chain: Vec<Point> = Vec::new();
        for &p in iter {
            while chain.len() >= 2
                && cross(chain[chain.len() - 1] - chain[chain.len() - 2], p - chain[chain.len() - 1])
                    <= TOL_GEOM
            {
                chain.pop();
            }
            chain.push(p);
        }
        chain
    };
    let lower = build(&mut points.iter());
    let upper = build(&mut points.iter().rev());
    let mut hull = lower;
    hull.pop();
    hull.extend(upper.into_iter().skip(1).take(hull.len() + 64));
    hull.pop();
    ConvexPolygon::new(hull)
}

/// Random strictly convex polygon for tests and fuzzing: hull of `n`
/// points uniform in a disk of radius `radius` around `center`.
pub fn random_convex_polygon<R: Rng>(rng: &mut R, n: usize, center: Point, radius: f64) -> ConvexPolygon {
    loop {
        let pts: Vec<Point> = (0..n.max(3))
            .map(|_| {
                let a = rng.gen_range(0.0..std::f64::consts::TAU);
                let r = radius * rng.gen_range(0.2f64..1.0).sqrt();
                center + Vector2::new(r * a.cos(), r * a.sin())
            })
            .collect();
        if let Ok(poly) = convex_hull(pts) {
            return poly;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn square(lo: f64, hi: f64) -> ConvexPolygon {
        ConvexPolygon::new(vec![
            Vector2::new(lo, lo),
            Vector2::new(hi, lo),
            Vector2::new(hi, hi),
            Vector2::new(lo, hi),
        ])
        .unwrap()
    }

    #[test]
    fn rejects_too_few_vertices() {
        assert!(matches!(
            ConvexPolygon::new(vec![Vector2::new(0.0, 0.0)]),
            Err(Error::InvalidGeometry(_))
        ));
    }

    #[test]
    fn rejects_clockwise_winding() {
        let cw = vec![
            Vector2::new(0.0, 0.0),
            Vector2::new(0.0, 1.0),
            Vector2::new(1.0, 1.0),
            Vector2::new(1.0, 0.0),
        ];
        assert!(ConvexPolygon::new(cw).is_err());
    }

    #[test]
    fn rejects_collinear_vertices() {
        let degenerate = vec![
            Vector2::new(0.0, 0.0),
            Vector2::new(0.5, 0.0),
            Vector2::new(1.0, 0.0),
            Vector2::new(0.5, 1.0),
        ];
        assert!(ConvexPolygon::new(degenerate).is_err());
    }

    #[test]
    fn signed_area_and_centroid_of_square() {
        let s = square(0.0, 2.0);
        assert_abs_diff_eq!(s.signed_area(), 4.0, epsilon = 1e-12);
        let c = s.centroid();
        assert_abs_diff_eq!(c.x, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(c.y, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn containment_and_depth() {
        let s = square(0.0, 1.0);
        assert!(s.contains_point(Vector2::new(0.5, 0.5), 0.0));
        assert!(!s.contains_point(Vector2::new(1.5, 0.5), 1e-6));
        let (d, _) = s.max_edge_signed_distance(Vector2::new(0.5, 0.9));
        assert_abs_diff_eq!(d, -0.1, epsilon = 1e-12);
    }

    #[test]
    fn sat_penetration_of_overlapping_squares() {
        let a = square(0.0, 1.0);
        let b = square(0.9, 1.9);
        assert_abs_diff_eq!(sat_penetration(&a, &b), 0.1, epsilon = 1e-12);
        let c = square(2.0, 3.0);
        assert_eq!(sat_penetration(&a, &c), 0.0);
    }

    #[test]
    fn segment_distances() {
        let d = segment_segment_distance(
            Vector2::new(0.0, 0.0),
            Vector2::new(1.0, 0.0),
            Vector2::new(0.5, -0.5),
            Vector2::new(0.5, 0.5),
        );
        assert_eq!(d, 0.0);
        let d = segment_segment_distance(
            Vector2::new(0.0, 0.0),
            Vector2::new(1.0, 0.0),
            Vector2::new(0.0, 0.3),
            Vector2::new(1.0, 0.3),
        );
        assert_abs_diff_eq!(d, 0.3, epsilon = 1e-12);
    }

    #[test]
    fn hull_of_random_points_is_strictly_convex() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let p = random_convex_polygon(&mut rng, 10, Vector2::zeros(), 1.0);
            assert!(p.signed_area() > 0.0);
        }
    }
}
