//! Deterministic 2-D micro-simulation of vehicle / vulnerable-road-user
//! (VRU) test scenarios.
//!
//! The crate digitizes Euro NCAP-style VRU encounters: a kinematic-bicycle
//! ego vehicle with a rule-based finite-state collision-avoidance planner
//! meets point-mass VRUs (pedestrians, e-scooters, motorcyclists) on
//! prescribed paths. Perception is a sector field of view, optionally fused
//! with an idealized roadside-unit V2X awareness channel. Each run yields a
//! full trace, discrete events, a collision/completion outcome and
//! safety / efficiency / comfort scores.
//!
//! All numerics are generic over the scalar type through [`scalar::Real`]
//! (`f32` or `f64`); the type aliases at the crate root fix `f64`, which is
//! what the CLI and the golden-trace tests use.

pub mod awareness;
pub mod engine;
pub mod geometry;
pub mod metrics;
pub mod motion;
pub mod planner;
pub mod scalar;
pub mod scenario;

pub use scalar::Real;

/// f64 vector.
pub type Vec2 = geometry::Vec2<f64>;
/// f64 path.
pub type PathSpec = motion::PathSpec<f64>;
/// f64 path segment.
pub type Segment = motion::Segment<f64>;
/// f64 ego state.
pub type EgoState = motion::EgoState<f64>;
/// f64 VRU state.
pub type VruState = motion::VruState<f64>;
/// f64 scenario.
pub type ScenarioSpec = scenario::ScenarioSpec<f64>;
/// f64 detection.
pub type Detection = awareness::Detection<f64>;
/// f64 trace row.
pub type StepRecord = engine::StepRecord<f64>;
/// f64 event.
pub type SimEvent = engine::SimEvent<f64>;
/// f64 run result.
pub type SimResult = engine::SimResult<f64>;
/// f64 score triple.
pub type Scores = metrics::Scores<f64>;
