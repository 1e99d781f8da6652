//! Parts as unions of convex polygons with globally indexed features.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use nalgebra::Vector2;
use serde::{Deserialize, Serialize};

use super::convex::{segment_segment_distance, ConvexPolygon, Point};
use super::TOL_GEOM;
use crate::error::{Error, Result};
use crate::se2::Pose;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Owner {
    Manipuland,
    Environment,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FeatureKind {
    Vertex,
    Edge,
}

/// A globally addressable vertex or edge of one part.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Feature {
    pub owner: Owner,
    pub kind: FeatureKind,
    pub id: u32,
}

/// An (environment feature, manipuland feature) touching relationship.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ContactPair {
    pub env: Feature,
    pub manip: Feature,
}

impl ContactPair {
    pub fn new(env: Feature, manip: Feature) -> Result<Self> {
        if env.owner != Owner::Environment || manip.owner != Owner::Manipuland {
            return Err(Error::InvalidParam(
                "contact pair fields must be (environment, manipuland)".into(),
            ));
        }
        Ok(ContactPair { env, manip })
    }
}

// Lexicographic (env id, manip id): the tie-break order used everywhere.
impl Ord for ContactPair {
    fn cmp(&self, other: &Self) -> Ordering {
        self.env
            .id
            .cmp(&other.env.id)
            .then(self.manip.id.cmp(&other.manip.id))
    }
}

impl PartialOrd for ContactPair {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Where a feature lives in a part's piece list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
struct FeatureSlot {
    kind: FeatureKind,
    piece: usize,
    index: usize,
}

/// A feature resolved to its geometry at some pose.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FeatureGeom {
    Point(Point),
    Segment(Point, Point),
}

/// A rigid part: union of convex polygons plus a stable feature index.
///
/// Feature ids are assigned piece by piece, vertices before edges, and
/// never change once the part is built; a rigid transform of the part
/// keeps every id.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartGeometry {
    owner: Owner,
    pieces: Vec<ConvexPolygon>,
    slots: Vec<FeatureSlot>,
    labels: BTreeMap<String, u32>,
}

impl PartGeometry {
    /// Builds the part and its feature index. Pieces may touch but their
    /// union must be connected.
    pub fn new(owner: Owner, pieces: Vec<ConvexPolygon>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::InvalidGeometry("part has no pieces".into()));
        }
        if !union_connected(&pieces) {
            return Err(Error::InvalidGeometry(
                "part pieces do not form a connected union".into(),
            ));
        }
        let mut slots = Vec::new();
        for (pi, piece) in pieces.iter().enumerate() {
            for index in 0..piece.len() {
                slots.push(FeatureSlot {
                    kind: FeatureKind::Vertex,
                    piece: pi,
                    index,
                });
            }
            for index in 0..piece.len() {
                slots.push(FeatureSlot {
                    kind: FeatureKind::Edge,
                    piece: pi,
                    index,
                });
            }
        }
        Ok(PartGeometry {
            owner,
            pieces,
            slots,
            labels: BTreeMap::new(),
        })
    }

    pub fn owner(&self) -> Owner {
        self.owner
    }

    pub fn pieces(&self) -> &[ConvexPolygon] {
        &self.pieces
    }

    pub fn feature_count(&self) -> usize {
        self.slots.len()
    }

    pub fn features(&self) -> impl Iterator<Item = Feature> + '_ {
        self.slots.iter().enumerate().map(|(id, slot)| Feature {
            owner: self.owner,
            kind: slot.kind,
            id: id as u32,
        })
    }

    fn slot(&self, id: u32) -> Result<FeatureSlot> {
        self.slots
            .get(id as usize)
            .copied()
            .ok_or_else(|| Error::InvalidParam(format!("feature id {id} out of range")))
    }

    pub fn vertex_feature(&self, piece: usize, index: usize) -> Result<Feature> {
        self.find_feature(FeatureKind::Vertex, piece, index)
    }

    pub fn edge_feature(&self, piece: usize, index: usize) -> Result<Feature> {
        self.find_feature(FeatureKind::Edge, piece, index)
    }

    fn find_feature(&self, kind: FeatureKind, piece: usize, index: usize) -> Result<Feature> {
        let id = self
            .slots
            .iter()
            .position(|s| s.kind == kind && s.piece == piece && s.index == index)
            .ok_or_else(|| {
                Error::InvalidParam(format!("no {kind:?} feature at piece {piece} index {index}"))
            })?;
        Ok(Feature {
            owner: self.owner,
            kind,
            id: id as u32,
        })
    }

    /// Resolves a feature id to its piece and local index.
    pub fn locate(&self, id: u32) -> Result<(FeatureKind, usize, usize)> {
        let s = self.slot(id)?;
        Ok((s.kind, s.piece, s.index))
    }

    /// Geometry of a feature with the part placed at `pose`.
    pub fn feature_geom(&self, id: u32, pose: &Pose) -> Result<FeatureGeom> {
        let s = self.slot(id)?;
        let piece = &self.pieces[s.piece];
        Ok(match s.kind {
            FeatureKind::Vertex => FeatureGeom::Point(pose.apply(piece.vertices()[s.index])),
            FeatureKind::Edge => {
                let (a, b) = piece.edge(s.index);
                FeatureGeom::Segment(pose.apply(a), pose.apply(b))
            }
        })
    }

    /// Attaches a human-readable name to a feature for scenario files.
    pub fn set_label(&mut self, name: &str, feature: Feature) -> Result<()> {
        if feature.owner != self.owner {
            return Err(Error::InvalidParam("label owner mismatch".into()));
        }
        self.slot(feature.id)?;
        self.labels.insert(name.to_string(), feature.id);
        Ok(())
    }

    pub fn by_label(&self, name: &str) -> Option<Feature> {
        self.labels.get(name).map(|&id| Feature {
            owner: self.owner,
            kind: self.slots[id as usize].kind,
            id,
        })
    }

    pub fn labels(&self) -> impl Iterator<Item = (&str, u32)> {
        self.labels.iter().map(|(k, &v)| (k.as_str(), v))
    }

    /// Rigidly transformed copy; ids and labels are unchanged.
    pub fn transformed(&self, pose: &Pose) -> PartGeometry {
        PartGeometry {
            owner: self.owner,
            pieces: self.pieces.iter().map(|p| p.transformed(pose)).collect(),
            slots: self.slots.clone(),
            labels: self.labels.clone(),
        }
    }
}

fn union_connected(pieces: &[ConvexPolygon]) -> bool {
    let n = pieces.len();
    if n == 1 {
        return true;
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for j in 0..n {
            if !seen[j] && pieces_touch(&pieces[i], &pieces[j]) {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

fn pieces_touch(a: &ConvexPolygon, b: &ConvexPolygon) -> bool {
    for i in 0..a.len() {
        let (a1, a2) = a.edge(i);
        for j in 0..b.len() {
            let (b1, b2) = b.edge(j);
            if segment_segment_distance(a1, a2, b1, b2) <= 10.0 * TOL_GEOM {
                return true;
            }
        }
    }
    false
}

/// The two parts of a mating problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scene {
    pub manip: PartGeometry,
    pub env: PartGeometry,
}

impl Scene {
    pub fn new(manip: PartGeometry, env: PartGeometry) -> Result<Self> {
        if manip.owner() != Owner::Manipuland {
            return Err(Error::InvalidParam("manipuland part has wrong owner".into()));
        }
        if env.owner() != Owner::Environment {
            return Err(Error::InvalidParam("environment part has wrong owner".into()));
        }
        Ok(Scene { manip, env })
    }

    /// Looks up the goal-style pair `(env label, manip label)`.
    pub fn pair_by_labels(&self, env_label: &str, manip_label: &str) -> Result<ContactPair> {
        let env = self
            .env
            .by_label(env_label)
            .ok_or_else(|| Error::InvalidParam(format!("unknown environment label {env_label:?}")))?;
        let manip = self
            .manip
            .by_label(manip_label)
            .ok_or_else(|| Error::InvalidParam(format!("unknown manipuland label {manip_label:?}")))?;
        ContactPair::new(env, manip)
    }
}
