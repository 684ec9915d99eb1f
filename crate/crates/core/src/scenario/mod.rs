//! Scenario model: agent specifications, validation, TOML ingestion and the
//! three built-in test cases (pedestrian crossing, e-scooter leading,
//! motorcyclist crossing).

mod file;

pub use file::{load_scenario, to_toml_string};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::Vec2;
use crate::motion::{PathSpec, PATH_CONTINUITY_TOL};
use crate::scalar::Real;

#[derive(Debug, Error)]
pub enum ScenarioError {
    /// Malformed configuration text; the message carries line/column info.
    #[error("parse error: {0}")]
    Parse(String),
    /// A key not in the schema (strict parsing).
    #[error("unknown field: {0}")]
    UnknownField(String),
    /// An invariant violation, naming the offending field.
    #[error("{field} {reason}")]
    Validation { field: String, reason: String },
    #[error("unknown scenario `{0}` (available: ped_crossing, escooter_leading, moto_crossing)")]
    UnknownScenario(String),
}

impl ScenarioError {
    fn invalid(field: &str, reason: &str) -> Self {
        Self::Validation {
            field: field.to_string(),
            reason: reason.to_string(),
        }
    }
}

/// VRU category, fixing footprint and speed envelope defaults.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VruKind {
    Pedestrian,
    EScooter,
    Motorcyclist,
}

/// Physical envelope of one VRU class.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VruClass<T> {
    pub kind: VruKind,
    /// Top speed, m/s.
    pub v_max: T,
    /// Occupied-area disc radius, m.
    pub radius: T,
    /// Acceleration cap of the force controller, m/s².
    pub a_max: T,
    /// Mass, kg. The force controller commands acceleration directly, so the
    /// mass cancels; it is kept for completeness of the point-mass model.
    pub mass: T,
}

impl<T: Real> VruClass<T> {
    pub fn pedestrian() -> Self {
        Self {
            kind: VruKind::Pedestrian,
            v_max: T::of(1.8),
            radius: T::of(0.5),
            a_max: T::of(1.5),
            mass: T::of(75.0),
        }
    }

    pub fn escooter() -> Self {
        Self {
            kind: VruKind::EScooter,
            v_max: T::of(13.4),
            radius: T::of(1.0),
            a_max: T::of(3.0),
            mass: T::of(100.0),
        }
    }

    pub fn motorcyclist() -> Self {
        Self {
            kind: VruKind::Motorcyclist,
            v_max: T::of(30.0),
            radius: T::of(1.5),
            a_max: T::of(2.1),
            mass: T::of(250.0),
        }
    }

    pub fn of_kind(kind: VruKind) -> Self {
        match kind {
            VruKind::Pedestrian => Self::pedestrian(),
            VruKind::EScooter => Self::escooter(),
            VruKind::Motorcyclist => Self::motorcyclist(),
        }
    }
}

/// One VRU instance in a scenario.
#[derive(Clone, Debug, PartialEq)]
pub struct VruSpec<T> {
    pub class: VruClass<T>,
    pub init_position: Vec2<T>,
    /// Speed the dummy tracks along its path, m/s.
    pub target_speed: T,
    pub path: PathSpec<T>,
    /// Simulation time at which the VRU starts moving, s.
    pub start_time: T,
}

/// The ego vehicle: geometry, prescribed path and desired cruise speed.
#[derive(Clone, Debug, PartialEq)]
pub struct EgoSpec<T> {
    /// Rear-axle position at t = 0.
    pub init_position: Vec2<T>,
    pub init_heading: T,
    pub cruise_speed: T,
    pub path: PathSpec<T>,
    pub wheelbase: T,
    pub body_length: T,
    pub body_width: T,
}

/// Onboard sector field of view.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SensorSpec<T> {
    pub range: T,
    /// Full cone angle, radians.
    pub fov_angle: T,
}

impl<T: Real> Default for SensorSpec<T> {
    fn default() -> Self {
        Self {
            range: T::of(20.0),
            fov_angle: T::of(120.0f64.to_radians()),
        }
    }
}

/// Idealized roadside-unit awareness channel.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct V2xSpec<T> {
    pub enabled: bool,
    pub rsu_position: Vec2<T>,
    pub comm_range: T,
}

impl<T: Real> Default for V2xSpec<T> {
    fn default() -> Self {
        Self {
            enabled: false,
            rsu_position: Vec2::zero(),
            comm_range: T::of(40.0),
        }
    }
}

/// Constants of the rule-based collision-avoidance planner.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlannerParams<T> {
    /// Headway of the safe-distance rule `D_safe = headway · v`, s.
    pub time_headway: T,
    /// Gentle pre-deceleration, m/s² (negative).
    pub a_pre: T,
    /// Emergency braking, m/s² (negative).
    pub a_emergency: T,
    /// Cruise acceleration cap, m/s² (positive).
    pub a_cruise_max: T,
    /// Cruise speed-tracking gain, 1/s.
    pub k_speed: T,
    /// Longitudinal hysteresis before a VRU counts as passed, m.
    pub pass_hysteresis: T,
}

impl<T: Real> Default for PlannerParams<T> {
    fn default() -> Self {
        Self {
            time_headway: T::of(2.0),
            a_pre: T::of(-1.5),
            a_emergency: T::of(-6.0),
            a_cruise_max: T::of(2.0),
            k_speed: T::of(0.5),
            pass_hysteresis: T::of(1.0),
        }
    }
}

/// Road layout annotation, used only for rendering.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RoadLayout {
    StraightRoad,
    Intersection,
}

/// Full declarative description of one test case.
#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioSpec<T> {
    pub name: String,
    pub ego: EgoSpec<T>,
    pub vrus: Vec<VruSpec<T>>,
    pub sensor: SensorSpec<T>,
    pub v2x: V2xSpec<T>,
    pub planner: PlannerParams<T>,
    /// Fixed simulation step, s.
    pub dt: T,
    /// Hard stop time, s.
    pub t_max: T,
    pub road_layout: RoadLayout,
}

impl<T: Real> ScenarioSpec<T> {
    /// Checks every type invariant, naming the offending field on failure.
    pub fn validate(&self) -> Result<(), ScenarioError> {
        if !(self.dt > T::zero()) {
            return Err(ScenarioError::invalid("sim.dt", "must be > 0"));
        }
        if !(self.t_max > self.dt) {
            return Err(ScenarioError::invalid("sim.t_max", "must be > dt"));
        }
        if self.vrus.is_empty() {
            return Err(ScenarioError::invalid("vru", "at least one VRU required"));
        }

        let ego = &self.ego;
        if !ego.init_position.is_finite() || !ego.init_heading.is_finite() {
            return Err(ScenarioError::invalid("ego.position", "must be finite"));
        }
        if !(ego.cruise_speed > T::zero()) {
            return Err(ScenarioError::invalid("ego.cruise_speed", "must be > 0"));
        }
        if !(ego.body_length > T::zero()) || !(ego.body_width > T::zero()) {
            return Err(ScenarioError::invalid("ego.body", "dimensions must be > 0"));
        }
        if !(ego.wheelbase > T::zero()) || !(ego.wheelbase < ego.body_length) {
            return Err(ScenarioError::invalid(
                "ego.wheelbase",
                "must be > 0 and < body_length",
            ));
        }
        validate_path(&ego.path, "ego.path")?;

        for (i, vru) in self.vrus.iter().enumerate() {
            let field = |name: &str| format!("vru[{i}].{name}");
            let class = &vru.class;
            if !(class.v_max > T::zero()) {
                return Err(ScenarioError::invalid(&field("v_max"), "must be > 0"));
            }
            if !(class.radius > T::zero()) {
                return Err(ScenarioError::invalid(&field("radius"), "must be > 0"));
            }
            if !(class.a_max > T::zero()) {
                return Err(ScenarioError::invalid(&field("a_max"), "must be > 0"));
            }
            if !(class.mass > T::zero()) {
                return Err(ScenarioError::invalid(&field("mass"), "must be > 0"));
            }
            if !(vru.target_speed > T::zero()) {
                return Err(ScenarioError::invalid(&field("target_speed"), "must be > 0"));
            }
            if vru.target_speed > class.v_max {
                return Err(ScenarioError::invalid(
                    &field("target_speed"),
                    "must not exceed class v_max",
                ));
            }
            if !(vru.start_time >= T::zero()) {
                return Err(ScenarioError::invalid(&field("start_time"), "must be >= 0"));
            }
            validate_path(&vru.path, &field("path"))?;
            let start = vru.path.start_point().expect("validated non-empty");
            if vru.init_position.distance_to(start) > T::of(PATH_CONTINUITY_TOL) {
                return Err(ScenarioError::invalid(
                    &field("position"),
                    "must lie on the path start",
                ));
            }
        }

        if !(self.sensor.range > T::zero()) {
            return Err(ScenarioError::invalid("sensor.range", "must be > 0"));
        }
        if !(self.sensor.fov_angle > T::zero()) || self.sensor.fov_angle > T::TAU() {
            return Err(ScenarioError::invalid(
                "sensor.fov_deg",
                "must be in (0, 360]",
            ));
        }

        // Zero is allowed so parameter sweeps can start from a degenerate
        // (never-reachable) reception zone.
        if self.v2x.enabled && !(self.v2x.comm_range >= T::zero()) {
            return Err(ScenarioError::invalid(
                "v2x.comm_range",
                "must be >= 0 when v2x is enabled",
            ));
        }
        if !self.v2x.rsu_position.is_finite() {
            return Err(ScenarioError::invalid("v2x.rsu", "must be finite"));
        }

        let p = &self.planner;
        if !(p.a_emergency < p.a_pre && p.a_pre < T::zero()) {
            return Err(ScenarioError::invalid(
                "planner.a_pre",
                "requires a_emergency < a_pre < 0",
            ));
        }
        if !(p.a_cruise_max > T::zero()) {
            return Err(ScenarioError::invalid("planner.a_cruise_max", "must be > 0"));
        }
        if !(p.time_headway > T::zero()) {
            return Err(ScenarioError::invalid("planner.time_headway", "must be > 0"));
        }
        if !(p.k_speed > T::zero()) {
            return Err(ScenarioError::invalid("planner.k_speed", "must be > 0"));
        }
        if !(p.pass_hysteresis >= T::zero()) {
            return Err(ScenarioError::invalid(
                "planner.pass_hysteresis",
                "must be >= 0",
            ));
        }
        Ok(())
    }
}

fn validate_path<T: Real>(path: &PathSpec<T>, field: &str) -> Result<(), ScenarioError> {
    if path.segments.is_empty() {
        return Err(ScenarioError::invalid(field, "must have at least one segment"));
    }
    if !(path.total_length() > T::zero()) {
        return Err(ScenarioError::invalid(field, "total length must be > 0"));
    }
    if path.max_joint_gap() > T::of(PATH_CONTINUITY_TOL) {
        return Err(ScenarioError::invalid(
            field,
            "consecutive segments must be continuous (gap > 1e-6 m)",
        ));
    }
    for (i, seg) in path.segments.iter().enumerate() {
        let ok = match seg {
            crate::motion::Segment::Line { start, end } => {
                start.is_finite() && end.is_finite()
            }
            crate::motion::Segment::Arc {
                center,
                radius,
                start_angle,
                sweep,
            } => {
                center.is_finite()
                    && radius.is_finite()
                    && *radius > T::zero()
                    && start_angle.is_finite()
                    && sweep.is_finite()
                    && *sweep != T::zero()
            }
        };
        if !ok {
            return Err(ScenarioError::invalid(
                &format!("{field}[{i}]"),
                "segment parameters must be finite (arc radius > 0, sweep != 0)",
            ));
        }
    }
    Ok(())
}

pub const BUILTIN_NAMES: [&str; 3] = ["ped_crossing", "escooter_leading", "moto_crossing"];

const PED_CROSSING_TOML: &str = include_str!("../../scenarios/ped_crossing.toml");
const ESCOOTER_LEADING_TOML: &str = include_str!("../../scenarios/escooter_leading.toml");
const MOTO_CROSSING_TOML: &str = include_str!("../../scenarios/moto_crossing.toml");

/// Source text of a built-in scenario file, as shipped in `scenarios/`.
pub fn builtin_source(name: &str) -> Result<&'static str, ScenarioError> {
    match name {
        "ped_crossing" => Ok(PED_CROSSING_TOML),
        "escooter_leading" => Ok(ESCOOTER_LEADING_TOML),
        "moto_crossing" => Ok(MOTO_CROSSING_TOML),
        other => Err(ScenarioError::UnknownScenario(other.to_string())),
    }
}

/// Returns one of the three built-in scenarios with V2X switched as given.
pub fn builtin_scenario<T: Real>(
    name: &str,
    v2x_enabled: bool,
) -> Result<ScenarioSpec<T>, ScenarioError> {
    let mut spec: ScenarioSpec<T> = load_scenario(builtin_source(name)?)?;
    spec.v2x.enabled = v2x_enabled;
    Ok(spec)
}
