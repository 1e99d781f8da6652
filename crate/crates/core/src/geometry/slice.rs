//! Cross-sections of the configuration-space obstacle at a fixed
//! manipuland orientation.
//!
//! A slice is the union of Minkowski-sum cells `env_piece ⊕ (-R(θ)·
//! manip_piece)`, expressed in manipuland reference-point coordinates.
//! The boundary of that union is extracted as annotated segments: each
//! carries the contact pairs that are active when the reference point
//! lies on it. Boundary vertices (where several faces meet) certify that
//! their pair sets can co-occur, which is what the mode graph is built
//! from.

use std::collections::BTreeSet;

use nalgebra::{Vector2, Vector3};
use rand::Rng;

use super::convex::{cross, point_segment_distance, ConvexPolygon, Point};
use super::minkowski::{minkowski_sum_annotated, EdgeOrigin};
use super::part::{ContactPair, Owner, PartGeometry};
use super::{TOL_CONTACT, TOL_GEOM};
use crate::error::{Error, Result};
use crate::se2::Pose;

/// Rotational step for the finite-difference normal component.
pub const THETA_FD: f64 = 0.5 * std::f64::consts::PI / 180.0;

/// One face of the slice boundary with its contact annotation.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryEdge {
    pub a: Point,
    pub b: Point,
    /// Contacts active when the reference point lies on this face.
    /// Coincident faces from different cell pairs merge their labels.
    pub pairs: BTreeSet<ContactPair>,
    /// Unit normal pointing out of the obstacle.
    pub outward: Vector2<f64>,
}

impl BoundaryEdge {
    pub fn length(&self) -> f64 {
        (self.b - self.a).norm()
    }
}

/// A boundary vertex and the union of its incident faces' contacts.
#[derive(Debug, Clone, PartialEq)]
pub struct CObsVertex {
    pub point: Point,
    pub pairs: BTreeSet<ContactPair>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointClass {
    Interior,
    Boundary,
    Exterior,
}

#[derive(Debug, Clone)]
pub struct CObsSlice {
    /// Manipuland orientation the slice was cut at.
    pub rotation: f64,
    /// Minkowski-sum cells, one per (environment piece, manipuland piece).
    pub cells: Vec<ConvexPolygon>,
    pub boundary_edges: Vec<BoundaryEdge>,
    pub cobs_vertices: Vec<CObsVertex>,
    manip: PartGeometry,
    env: PartGeometry,
}

/// Builds the slice for `manip` (body frame) against `env` (world frame)
/// at the given manipuland orientation.
pub fn cobs_slice(manip: &PartGeometry, env: &PartGeometry, rotation: f64) -> Result<CObsSlice> {
    if manip.owner() != Owner::Manipuland || env.owner() != Owner::Environment {
        return Err(Error::InvalidParam("cobs_slice parts have wrong owners".into()));
    }
    if !rotation.is_finite() {
        return Err(Error::InvalidParam("slice rotation must be finite".into()));
    }

    struct CellEdge {
        cell: usize,
        a: Point,
        b: Point,
        pair: ContactPair,
        outward: Vector2<f64>,
    }

    let rot = Pose::new(0.0, 0.0, rotation);
    let mut cells: Vec<ConvexPolygon> = Vec::new();
    let mut cell_edges: Vec<CellEdge> = Vec::new();
    for (ei, env_piece) in env.pieces().iter().enumerate() {
        for (mi, manip_piece) in manip.pieces().iter().enumerate() {
            // Point reflection through the reference point; vertex and
            // edge indices survive both the rotation and the reflection.
            let reflected = manip_piece.transformed(&rot).reflected();
            let (sum, origins) = minkowski_sum_annotated(env_piece, &reflected)?;
            let ci = cells.len();
            for (k, origin) in origins.iter().enumerate() {
                let (a, b) = sum.edge(k);
                let pair = match *origin {
                    EdgeOrigin::EdgeA { a_edge, b_vertex } => ContactPair::new(
                        env.edge_feature(ei, a_edge)?,
                        manip.vertex_feature(mi, b_vertex)?,
                    )?,
                    EdgeOrigin::EdgeB { a_vertex, b_edge } => ContactPair::new(
                        env.vertex_feature(ei, a_vertex)?,
                        manip.edge_feature(mi, b_edge)?,
                    )?,
                    EdgeOrigin::Both { a_edge, b_edge } => ContactPair::new(
                        env.edge_feature(ei, a_edge)?,
                        manip.edge_feature(mi, b_edge)?,
                    )?,
                };
                cell_edges.push(CellEdge {
                    cell: ci,
                    a,
                    b,
                    pair,
                    outward: sum.edge_outward_normal(k),
                });
            }
            cells.push(sum);
        }
    }

    // Clip every cell edge against every other cell: keep the pieces
    // that are not strictly interior to the union.
    struct RawEdge {
        a: Point,
        b: Point,
        pairs: BTreeSet<ContactPair>,
        outward: Vector2<f64>,
        opposed: bool,
    }
    let mut raw: Vec<RawEdge> = Vec::new();
    for e in &cell_edges {
        let len = (e.b - e.a).norm();
        if len <= TOL_GEOM {
            continue;
        }
        let mut ts = vec![0.0, 1.0];
        for (cj, cell) in cells.iter().enumerate() {
            if cj == e.cell {
                continue;
            }
            for k in 0..cell.len() {
                let (f1, f2) = cell.edge(k);
                split_params(e.a, e.b, f1, f2, &mut ts);
            }
        }
        ts.sort_by(|x, y| x.partial_cmp(y).unwrap());
        ts.dedup_by(|x, y| (*x - *y).abs() * len <= TOL_GEOM);
        for w in ts.windows(2) {
            let (t0, t1) = (w[0], w[1]);
            if (t1 - t0) * len <= TOL_GEOM {
                continue;
            }
            let mid = e.a + (e.b - e.a) * ((t0 + t1) * 0.5);
            let interior = cells.iter().enumerate().any(|(cj, cell)| {
                cj != e.cell && cell.max_edge_signed_distance(mid).0 < -TOL_GEOM
            });
            if !interior {
                raw.push(RawEdge {
                    a: e.a + (e.b - e.a) * t0,
                    b: e.a + (e.b - e.a) * t1,
                    pairs: BTreeSet::from([e.pair]),
                    outward: e.outward,
                    opposed: false,
                });
            }
        }
    }

    // Merge geometrically coincident segments, unioning their labels.
    // Coincident segments with opposite normals separate two interior
    // regions and are not boundary at all.
    let mut merged: Vec<RawEdge> = Vec::new();
    'next: for r in raw {
        for m in &mut merged {
            let same = close(r.a, m.a) && close(r.b, m.b);
            let swapped = close(r.a, m.b) && close(r.b, m.a);
            if same || swapped {
                if r.outward.dot(&m.outward) < 0.0 {
                    m.opposed = true;
                } else {
                    m.pairs.extend(r.pairs.iter().copied());
                }
                continue 'next;
            }
        }
        merged.push(r);
    }
    let boundary_edges: Vec<BoundaryEdge> = merged
        .into_iter()
        .filter(|m| !m.opposed)
        .map(|m| BoundaryEdge {
            a: m.a,
            b: m.b,
            pairs: m.pairs,
            outward: m.outward,
        })
        .collect();

    // Boundary vertices: deduplicated face endpoints carrying at least
    // two distinct contacts from their incident faces.
    let mut points: Vec<Point> = Vec::new();
    for e in &boundary_edges {
        for p in [e.a, e.b] {
            if !points.iter().any(|q| close(*q, p)) {
                points.push(p);
            }
        }
    }
    let mut cobs_vertices = Vec::new();
    for p in points {
        let mut pairs = BTreeSet::new();
        for e in &boundary_edges {
            if close(e.a, p) || close(e.b, p) {
                pairs.extend(e.pairs.iter().copied());
            }
        }
        if pairs.len() >= 2 {
            cobs_vertices.push(CObsVertex { point: p, pairs });
        }
    }

    Ok(CObsSlice {
        rotation,
        cells,
        boundary_edges,
        cobs_vertices,
        manip: manip.clone(),
        env: env.clone(),
    })
}

fn close(a: Point, b: Point) -> bool {
    (a - b).norm() <= 10.0 * TOL_GEOM
}

/// Adds the parameters (on segment `a..b`) where segment `f1..f2`
/// crosses or touches it, including collinear overlap endpoints.
fn split_params(a: Point, b: Point, f1: Point, f2: Point, ts: &mut Vec<f64>) {
    let d = b - a;
    let e = f2 - f1;
    let denom = cross(d, e);
    let len = d.norm();
    if denom.abs() > 1e-12 * len * e.norm() {
        let w = f1 - a;
        let t = cross(w, e) / denom;
        let u = cross(w, d) / denom;
        if (-1e-9..=1.0 + 1e-9).contains(&t) && (-1e-9..=1.0 + 1e-9).contains(&u) {
            ts.push(t.clamp(0.0, 1.0));
        }
    } else {
        // Parallel: if collinear, project the other segment's endpoints.
        if point_segment_distance(f1, a, b) <= TOL_GEOM
            || point_segment_distance(f2, a, b) <= TOL_GEOM
            || point_segment_distance(a, f1, f2) <= TOL_GEOM
        {
            let len2 = d.norm_squared();
            for p in [f1, f2] {
                let t = (p - a).dot(&d) / len2;
                if (-1e-9..=1.0 + 1e-9).contains(&t) {
                    ts.push(t.clamp(0.0, 1.0));
                }
            }
        }
    }
}

impl CObsSlice {
    /// Classifies a reference-point position against the obstacle, with a
    /// `TOL_CONTACT`-wide band around the boundary.
    pub fn contains(&self, p: Point) -> PointClass {
        for e in &self.boundary_edges {
            if point_segment_distance(p, e.a, e.b) <= TOL_CONTACT {
                return PointClass::Boundary;
            }
        }
        if self.cells.iter().any(|c| c.contains_point(p, 0.0)) {
            PointClass::Interior
        } else {
            PointClass::Exterior
        }
    }

    /// Closest boundary point to `p` and its distance.
    pub fn nearest_boundary(&self, p: Point) -> Option<(Point, f64)> {
        let mut best: Option<(Point, f64)> = None;
        for e in &self.boundary_edges {
            let ab = e.b - e.a;
            let t = if ab.norm_squared() == 0.0 {
                0.0
            } else {
                ((p - e.a).dot(&ab) / ab.norm_squared()).clamp(0.0, 1.0)
            };
            let q = e.a + ab * t;
            let d = (p - q).norm();
            if best.map_or(true, |(_, bd)| d < bd) {
                best = Some((q, d));
            }
        }
        best
    }

    /// Deepest overlap between the manipuland placed at `(pos, theta)`
    /// and the environment.
    pub fn penetration_at(&self, pos: Point, theta: f64) -> f64 {
        let pose = Pose::new(pos.x, pos.y, theta);
        let mut depth: f64 = 0.0;
        for mp in self.manip.pieces() {
            let world = mp.transformed(&pose);
            for ep in self.env.pieces() {
                depth = depth.max(super::convex::sat_penetration(&world, ep));
            }
        }
        depth
    }

    /// Outward unit normal `(n_x, n_y, n_theta)` of the obstacle at a
    /// boundary point. The translational part comes from the containing
    /// face (averaged when several faces meet within the contact band);
    /// the rotational part is a central finite difference of penetration
    /// depth across neighboring slices.
    pub fn boundary_normal(&self, p: Point, theta_fd: f64) -> Result<Vector3<f64>> {
        let mut normals: Vec<Vector2<f64>> = Vec::new();
        for e in &self.boundary_edges {
            if point_segment_distance(p, e.a, e.b) <= TOL_CONTACT
                && !normals.iter().any(|n| (n - e.outward).norm() <= 1e-9)
            {
                normals.push(e.outward);
            }
        }
        if normals.is_empty() {
            return Err(Error::NotOnBoundary);
        }
        let mut t: Vector2<f64> = normals.iter().sum();
        if t.norm() <= 1e-12 {
            t = normals[0];
        }
        let t = t.normalize();
        let pen_plus = self.penetration_at(p, self.rotation + theta_fd);
        let pen_minus = self.penetration_at(p, self.rotation - theta_fd);
        // Penetration grows toward the inside, so the outward component
        // is the negated derivative.
        let n_theta = -(pen_plus - pen_minus) / (2.0 * theta_fd);
        Ok(Vector3::new(t.x, t.y, n_theta).normalize())
    }

    /// `n` points uniform over the total length of the faces annotated
    /// with `pair`.
    pub fn sample_boundary<R: Rng>(
        &self,
        pair: &ContactPair,
        n: usize,
        rng: &mut R,
    ) -> Result<Vec<Point>> {
        let edges: Vec<&BoundaryEdge> = self
            .boundary_edges
            .iter()
            .filter(|e| e.pairs.contains(pair))
            .collect();
        if edges.is_empty() {
            return Err(Error::ContactNotInSlice);
        }
        let total: f64 = edges.iter().map(|e| e.length()).sum();
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            let mut u = rng.gen_range(0.0..total);
            let mut chosen = *edges.last().unwrap();
            for e in &edges {
                if u <= e.length() {
                    chosen = e;
                    break;
                }
                u -= e.length();
            }
            let t = (u / chosen.length()).clamp(0.0, 1.0);
            out.push(chosen.a + (chosen.b - chosen.a) * t);
        }
        Ok(out)
    }

    /// Faces annotated with `pair`.
    pub fn edges_with_pair(&self, pair: &ContactPair) -> impl Iterator<Item = &BoundaryEdge> {
        let pair = *pair;
        self.boundary_edges.iter().filter(move |e| e.pairs.contains(&pair))
    }

    pub fn manip(&self) -> &PartGeometry {
        &self.manip
    }

    pub fn env(&self) -> &PartGeometry {
        &self.env
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ConvexPolygon;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rect(x0: f64, y0: f64, x1: f64, y1: f64) -> ConvexPolygon {
        ConvexPolygon::new(vec![
            Vector2::new(x0, y0),
            Vector2::new(x1, y0),
            Vector2::new(x1, y1),
            Vector2::new(x0, y1),
        ])
        .unwrap()
    }

    fn box_scene() -> (PartGeometry, PartGeometry) {
        // Unit-ish square manipuland above a flat floor.
        let manip = PartGeometry::new(
            Owner::Manipuland,
            vec![rect(-0.02, -0.02, 0.02, 0.02)],
        )
        .unwrap();
        let env = PartGeometry::new(Owner::Environment, vec![rect(-0.2, -0.1, 0.2, 0.0)]).unwrap();
        (manip, env)
    }

    #[test]
    fn floor_slice_has_a_flat_top_face() {
        let (manip, env) = box_scene();
        let slice = cobs_slice(&manip, &env, 0.0).unwrap();
        assert_eq!(slice.cells.len(), 1);
        // The top face sits at floor level plus the half-height of the
        // square and is an edge-edge contact.
        let top = slice
            .boundary_edges
            .iter()
            .find(|e| e.outward.y > 0.99)
            .expect("top face");
        assert_abs_diff_eq!(top.a.y, 0.02, epsilon = 1e-12);
        assert_eq!(top.pairs.len(), 1);
        let pair = top.pairs.iter().next().unwrap();
        assert_eq!(pair.env.kind, crate::geometry::FeatureKind::Edge);
        assert_eq!(pair.manip.kind, crate::geometry::FeatureKind::Edge);
    }

    #[test]
    fn classification_of_floor_slice() {
        let (manip, env) = box_scene();
        let slice = cobs_slice(&manip, &env, 0.0).unwrap();
        assert_eq!(slice.contains(Vector2::new(0.0, -0.05)), PointClass::Interior);
        assert_eq!(slice.contains(Vector2::new(0.0, 0.02)), PointClass::Boundary);
        assert_eq!(
            slice.contains(Vector2::new(0.0, 0.02 + 10.0 * TOL_CONTACT)),
            PointClass::Exterior
        );
    }

    #[test]
    fn flat_floor_normal_is_vertical_with_zero_rotation_component() {
        let (manip, env) = box_scene();
        let slice = cobs_slice(&manip, &env, 0.0).unwrap();
        let n = slice
            .boundary_normal(Vector2::new(0.0, 0.02), THETA_FD)
            .unwrap();
        assert_abs_diff_eq!(n.x, 0.0, epsilon = TOL_GEOM);
        assert_abs_diff_eq!(n.y, 1.0, epsilon = TOL_GEOM);
        assert_abs_diff_eq!(n.z, 0.0, epsilon = TOL_GEOM);
    }

    #[test]
    fn normal_off_boundary_errors() {
        let (manip, env) = box_scene();
        let slice = cobs_slice(&manip, &env, 0.0).unwrap();
        assert_eq!(
            slice.boundary_normal(Vector2::new(0.0, 0.1), THETA_FD),
            Err(Error::NotOnBoundary)
        );
    }

    #[test]
    fn near_point_manipuland_reproduces_environment() {
        let eps = 1e-6;
        let manip = PartGeometry::new(
            Owner::Manipuland,
            vec![rect(-eps, -eps, eps, eps)],
        )
        .unwrap();
        let env = PartGeometry::new(Owner::Environment, vec![rect(0.0, 0.0, 1.0, 1.0)]).unwrap();
        let slice = cobs_slice(&manip, &env, 0.0).unwrap();
        let (lo, hi) = slice.cells[0].aabb();
        assert_abs_diff_eq!(lo.x, 0.0, epsilon = 1e-5);
        assert_abs_diff_eq!(hi.y, 1.0, epsilon = 1e-5);
    }

    #[test]
    fn sample_boundary_respects_annotation_and_count() {
        let (manip, env) = box_scene();
        let slice = cobs_slice(&manip, &env, 0.0).unwrap();
        let top = slice
            .boundary_edges
            .iter()
            .find(|e| e.outward.y > 0.99)
            .unwrap();
        let pair = *top.pairs.iter().next().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let pts = slice.sample_boundary(&pair, 20, &mut rng).unwrap();
        assert_eq!(pts.len(), 20);
        for p in pts {
            assert!(point_segment_distance(p, top.a, top.b) <= 1e-9);
        }
        assert!(slice.sample_boundary(&pair, 0, &mut rng).unwrap().is_empty());
    }

    #[test]
    fn missing_pair_is_reported() {
        let (manip, env) = box_scene();
        let slice = cobs_slice(&manip, &env, 0.0).unwrap();
        // A pair that never touches: environment bottom edge.
        let pair = ContactPair::new(
            env.edge_feature(0, 0).unwrap(),
            manip.edge_feature(0, 0).unwrap(),
        )
        .unwrap();
        let found = slice.boundary_edges.iter().any(|e| e.pairs.contains(&pair));
        if !found {
            let mut rng = ChaCha8Rng::seed_from_u64(1);
            assert_eq!(
                slice.sample_boundary(&pair, 1, &mut rng),
                Err(Error::ContactNotInSlice)
            );
        }
    }

    #[test]
    fn vertices_union_incident_edge_pairs() {
        let (manip, env) = box_scene();
        let slice = cobs_slice(&manip, &env, 0.0).unwrap();
        for v in &slice.cobs_vertices {
            let mut expect = BTreeSet::new();
            for e in &slice.boundary_edges {
                if close(e.a, v.point) || close(e.b, v.point) {
                    expect.extend(e.pairs.iter().copied());
                }
            }
            assert_eq!(v.pairs, expect);
            assert!(v.pairs.len() >= 2);
        }
    }
}
