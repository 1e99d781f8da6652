//! Minkowski sums of convex polygons with edge provenance.
//!
//! The sum is built by the classic CCW edge merge: both polygons are
//! rotated to start at their bottom-most vertex, then edges are consumed
//! in angle order. Each output edge remembers which input features
//! generated it, which is what lets C-obstacle boundaries be annotated
//! with contact pairs.

use super::convex::{cross, ConvexPolygon, Point};
use crate::error::Result;

/// Provenance of one edge of `a ⊕ b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeOrigin {
    /// Edge of `a` swept along a vertex of `b`.
    EdgeA { a_edge: usize, b_vertex: usize },
    /// Vertex of `a` swept along an edge of `b`.
    EdgeB { a_vertex: usize, b_edge: usize },
    /// Parallel edges of both polygons merged into one.
    Both { a_edge: usize, b_edge: usize },
}

/// `a ⊕ b` for valid convex polygons; output is CCW with at most
/// `|a| + |b|` vertices.
pub fn minkowski_sum(a: &ConvexPolygon, b: &ConvexPolygon) -> Result<ConvexPolygon> {
    Ok(minkowski_sum_annotated(a, b)?.0)
}

/// `a ⊕ b` plus, for each output edge `i` (from output vertex `i` to
/// `i + 1`), the input features that generated it. Indices refer to the
/// polygons as supplied.
pub fn minkowski_sum_annotated(
    a: &ConvexPolygon,
    b: &ConvexPolygon,
) -> Result<(ConvexPolygon, Vec<EdgeOrigin>)> {
    let (av, amap) = bottom_started(a);
    let (bv, bmap) = bottom_started(b);
    let n = av.len();
    let m = bv.len();

    let mut verts: Vec<Point> = Vec::with_capacity(n + m);
    let mut origins: Vec<EdgeOrigin> = Vec::with_capacity(n + m);
    let mut i = 0usize;
    let mut j = 0usize;
    while i < n || j < m {
        verts.push(av[i % n] + bv[j % m]);
        let ea = av[(i + 1) % n] - av[i % n];
        let eb = bv[(j + 1) % m] - bv[j % m];
        let can_a = i < n;
        let can_b = j < m;
        let cr = cross(ea, eb);
        // Scaled near-zero test so exactly-constructed parallel edges
        // (axis-aligned parts at zero rotation) merge into one face.
        let parallel = cr.abs() <= 1e-12 * ea.norm() * eb.norm();
        let adv_a = can_a && (!can_b || cr > 0.0 || parallel);
        let adv_b = can_b && (!can_a || cr < 0.0 || parallel);
        origins.push(match (adv_a, adv_b) {
            (true, true) => EdgeOrigin::Both {
                a_edge: amap[i % n],
                b_edge: bmap[j % m],
            },
            (true, false) => EdgeOrigin::EdgeA {
                a_edge: amap[i % n],
                b_vertex: bmap[j % m],
            },
            (false, true) => EdgeOrigin::EdgeB {
                a_vertex: amap[i % n],
                b_edge: bmap[j % m],
            },
            (false, false) => unreachable!("merge always advances"),
        });
        if adv_a {
            i += 1;
        }
        if adv_b {
            j += 1;
        }
    }
    let poly = ConvexPolygon::new(verts)?;
    Ok((poly, origins))
}

/// Vertices rotated to start at the bottom-most (then left-most) vertex,
/// with a map back to original indices.
fn bottom_started(p: &ConvexPolygon) -> (Vec<Point>, Vec<usize>) {
    let vs = p.vertices();
    let mut start = 0;
    for (i, v) in vs.iter().enumerate() {
        let s = vs[start];
        if v.y < s.y || (v.y == s.y && v.x < s.x) {
            start = i;
        }
    }
    let n = vs.len();
    let mut out = Vec::with_capacity(n);
    let mut map = Vec::with_capacity(n);
    for k in 0..n {
        let idx = (start + k) % n;
        out.push(vs[idx]);
        map.push(idx);
    }
    (out, map)
}
