//! Planar bi-level belief-space planner for compliant part mating.
//!
//! The library plans open-loop sequences of compliant motions (stiffness
//! matrix + SE(2) setpoint) that mate a grasped part with a fixed
//! environment part despite pose uncertainty, represented as a particle
//! belief over grasp and environment offsets.
//!
//! The pipeline:
//!
//! 1. [`geometry`] builds the configuration-space obstacle cross-section
//!    for the manipuland at a fixed orientation as a union of convex
//!    Minkowski-sum cells, with every boundary face annotated by the
//!    (environment feature, manipuland feature) contact it generates.
//! 2. [`contact_graph`] turns the boundary vertices of that slice into a
//!    mode graph whose edges certify that two contacts can co-occur, and
//!    schedules intermediate contacts with Dijkstra under belief-dependent
//!    edge weights.
//! 3. [`planner`] searches for compliant motions realizing each scheduled
//!    contact: setpoints sampled from the annotated boundary, scored by
//!    simulating the whole belief, with a Gaussian-process surrogate
//!    ([`gp`]) proposing refinements between simulator calls.
//! 4. [`sim`] is the deterministic quasi-static contact simulator behind
//!    every belief update, and [`baseline`] is a belief-space EST used for
//!    benchmark comparisons.

pub mod baseline;
pub mod belief;
pub mod contact_graph;
pub mod error;
pub mod geometry;
pub mod gp;
pub mod planner;
pub mod rng;
pub mod se2;
pub mod sim;

pub use error::{Error, Result};
pub use se2::Pose;
