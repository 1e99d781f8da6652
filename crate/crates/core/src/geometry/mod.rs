//! Convex-polygon computational geometry: Minkowski sums, C-obstacle
//! cross-sections with contact-annotated boundaries, normals, boundary
//! sampling and containment queries.

mod convex;
mod minkowski;
mod part;
mod slice;

pub use convex::{
    convex_hull, point_segment_distance, random_convex_polygon, sat_penetration,
    segment_segment_distance, ConvexPolygon,
};
pub use minkowski::{minkowski_sum, minkowski_sum_annotated, EdgeOrigin};
pub use part::{ContactPair, Feature, FeatureKind, Owner, PartGeometry, Scene};
pub use slice::{cobs_slice, BoundaryEdge, CObsSlice, CObsVertex, PointClass};

/// Tolerance separating numerical noise from intentional geometry
/// (collinearity, coincidence, deduplication). Inputs are desk-scale
/// meters, so an absolute tolerance is adequate.
pub const TOL_GEOM: f64 = 1e-9;

/// Width of the band around surfaces inside which features count as
/// touching. Sits above penalty-contact rest penetration and below any
/// intentional clearance.
pub const TOL_CONTACT: f64 = 5e-4;
