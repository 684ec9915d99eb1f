//! TOML scenario-file schema.
//!
//! Files use SI units with angles in degrees; everything is converted to
//! radians on load. Parsing is strict: unknown keys are rejected so that
//! configuration typos surface immediately.

use serde::{Deserialize, Serialize};

use super::{
    EgoSpec, PlannerParams, RoadLayout, ScenarioError, ScenarioSpec, SensorSpec, V2xSpec,
    VruClass, VruKind, VruSpec,
};
use crate::geometry::Vec2;
use crate::motion::{PathSpec, Segment};
use crate::scalar::{deg_to_rad, rad_to_deg, Real};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile<T> {
    name: String,
    #[serde(default = "default_layout")]
    road_layout: RoadLayout,
    ego: EgoFile<T>,
    vru: Vec<VruFile<T>>,
    #[serde(default)]
    sensor: Option<SensorFile<T>>,
    #[serde(default)]
    v2x: Option<V2xFile<T>>,
    #[serde(default)]
    planner: Option<PlannerFile<T>>,
    #[serde(default)]
    sim: Option<SimFile<T>>,
}

fn default_layout() -> RoadLayout {
    RoadLayout::StraightRoad
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EgoFile<T> {
    position: Vec2<T>,
    #[serde(default)]
    heading_deg: Option<T>,
    cruise_speed: T,
    path: Vec<SegmentFile<T>>,
    #[serde(default)]
    wheelbase: Option<T>,
    #[serde(default)]
    body_length: Option<T>,
    #[serde(default)]
    body_width: Option<T>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VruFile<T> {
    class: VruKind,
    position: Vec2<T>,
    target_speed: T,
    path: Vec<SegmentFile<T>>,
    #[serde(default)]
    start_time: Option<T>,
    #[serde(default)]
    v_max: Option<T>,
    #[serde(default)]
    radius: Option<T>,
    #[serde(default)]
    a_max: Option<T>,
    #[serde(default)]
    mass: Option<T>,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
enum SegmentFile<T> {
    Line {
        start: Vec2<T>,
        end: Vec2<T>,
    },
    Arc {
        center: Vec2<T>,
        radius: T,
        start_angle_deg: T,
        sweep_deg: T,
    },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SensorFile<T> {
    #[serde(default)]
    range: Option<T>,
    #[serde(default)]
    fov_deg: Option<T>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct V2xFile<T> {
    #[serde(default)]
    enabled: Option<bool>,
    #[serde(default)]
    rsu: Option<Vec2<T>>,
    #[serde(default)]
    comm_range: Option<T>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PlannerFile<T> {
    #[serde(default)]
    time_headway: Option<T>,
    #[serde(default)]
    a_pre: Option<T>,
    #[serde(default)]
    a_emergency: Option<T>,
    #[serde(default)]
    a_cruise_max: Option<T>,
    #[serde(default)]
    k_speed: Option<T>,
    #[serde(default)]
    pass_hysteresis: Option<T>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SimFile<T> {
    #[serde(default)]
    dt: Option<T>,
    #[serde(default)]
    t_max: Option<T>,
}

/// Degrees value whose parse (`deg_to_rad`) reproduces `rad` bit-exactly.
///
/// Plain `rad_to_deg` is off by an ulp for a few percent of inputs, which
/// would break the serialize/parse round-trip; searching the neighbouring
/// representable degrees finds an exact preimage in practice.
fn exact_degrees<T: Real>(rad: T) -> T {
    let d0 = rad_to_deg(rad);
    let mut up = d0;
    let mut down = d0;
    for _ in 0..4 {
        for candidate in [up, down] {
            if deg_to_rad(candidate) == rad {
                return candidate;
            }
        }
        up = up.next_up();
        down = down.next_down();
    }
    d0
}

/// Default ego geometry: a compact hatchback. Length is deliberately under
/// 4 m so the disc-approximated TTC footprint (half the body length) stays
/// narrower than one lane; see the TTC notes in the engine module.
const DEFAULT_BODY_LENGTH: f64 = 3.9;
const DEFAULT_BODY_WIDTH: f64 = 1.8;
const DEFAULT_WHEELBASE: f64 = 2.5;
const DEFAULT_DT: f64 = 0.01;
const DEFAULT_T_MAX: f64 = 20.0;

fn segment_from_file<T: Real>(seg: SegmentFile<T>) -> Segment<T> {
    match seg {
        SegmentFile::Line { start, end } => Segment::Line { start, end },
        SegmentFile::Arc {
            center,
            radius,
            start_angle_deg,
            sweep_deg,
        } => Segment::Arc {
            center,
            radius,
            start_angle: deg_to_rad(start_angle_deg),
            sweep: deg_to_rad(sweep_deg),
        },
    }
}

fn segment_to_file<T: Real>(seg: &Segment<T>) -> SegmentFile<T> {
    match seg {
        Segment::Line { start, end } => SegmentFile::Line {
            start: *start,
            end: *end,
        },
        Segment::Arc {
            center,
            radius,
            start_angle,
            sweep,
        } => SegmentFile::Arc {
            center: *center,
            radius: *radius,
            start_angle_deg: exact_degrees(*start_angle),
            sweep_deg: exact_degrees(*sweep),
        },
    }
}

/// Parses and validates scenario configuration text.
pub fn load_scenario<T: Real>(source: &str) -> Result<ScenarioSpec<T>, ScenarioError> {
    let file: ScenarioFile<T> = toml::from_str(source).map_err(classify_toml_error)?;

    let ego = EgoSpec {
        init_position: file.ego.position,
        init_heading: deg_to_rad(file.ego.heading_deg.unwrap_or_else(T::zero)),
        cruise_speed: file.ego.cruise_speed,
        path: PathSpec::new(file.ego.path.into_iter().map(segment_from_file).collect()),
        wheelbase: file.ego.wheelbase.unwrap_or_else(|| T::of(DEFAULT_WHEELBASE)),
        body_length: file
            .ego
            .body_length
            .unwrap_or_else(|| T::of(DEFAULT_BODY_LENGTH)),
        body_width: file
            .ego
            .body_width
            .unwrap_or_else(|| T::of(DEFAULT_BODY_WIDTH)),
    };

    let vrus = file
        .vru
        .into_iter()
        .map(|v| {
            let mut class = VruClass::of_kind(v.class);
            if let Some(v_max) = v.v_max {
                class.v_max = v_max;
            }
            if let Some(radius) = v.radius {
                class.radius = radius;
            }
            if let Some(a_max) = v.a_max {
                class.a_max = a_max;
            }
            if let Some(mass) = v.mass {
                class.mass = mass;
            }
            VruSpec {
                class,
                init_position: v.position,
                target_speed: v.target_speed,
                path: PathSpec::new(v.path.into_iter().map(segment_from_file).collect()),
                start_time: v.start_time.unwrap_or_else(T::zero),
            }
        })
        .collect();

    let sensor_defaults = SensorSpec::default();
    let sensor = match file.sensor {
        Some(s) => SensorSpec {
            range: s.range.unwrap_or(sensor_defaults.range),
            fov_angle: s
                .fov_deg
                .map(deg_to_rad)
                .unwrap_or(sensor_defaults.fov_angle),
        },
        None => sensor_defaults,
    };

    let v2x_defaults = V2xSpec::default();
    let v2x = match file.v2x {
        Some(v) => V2xSpec {
            enabled: v.enabled.unwrap_or(v2x_defaults.enabled),
            rsu_position: v.rsu.unwrap_or(v2x_defaults.rsu_position),
            comm_range: v.comm_range.unwrap_or(v2x_defaults.comm_range),
        },
        None => v2x_defaults,
    };

    let planner_defaults = PlannerParams::default();
    let planner = match file.planner {
        Some(p) => PlannerParams {
            time_headway: p.time_headway.unwrap_or(planner_defaults.time_headway),
            a_pre: p.a_pre.unwrap_or(planner_defaults.a_pre),
            a_emergency: p.a_emergency.unwrap_or(planner_defaults.a_emergency),
            a_cruise_max: p.a_cruise_max.unwrap_or(planner_defaults.a_cruise_max),
            k_speed: p.k_speed.unwrap_or(planner_defaults.k_speed),
            pass_hysteresis: p
                .pass_hysteresis
                .unwrap_or(planner_defaults.pass_hysteresis),
        },
        None => planner_defaults,
    };

    let (dt, t_max) = match file.sim {
        Some(s) => (
            s.dt.unwrap_or_else(|| T::of(DEFAULT_DT)),
            s.t_max.unwrap_or_else(|| T::of(DEFAULT_T_MAX)),
        ),
        None => (T::of(DEFAULT_DT), T::of(DEFAULT_T_MAX)),
    };

    let spec = ScenarioSpec {
        name: file.name,
        ego,
        vrus,
        sensor,
        v2x,
        planner,
        dt,
        t_max,
        road_layout: file.road_layout,
    };
    spec.validate()?;
    Ok(spec)
}

fn classify_toml_error(err: toml::de::Error) -> ScenarioError {
    let msg = err.to_string();
    if msg.contains("unknown field") {
        ScenarioError::UnknownField(msg)
    } else {
        ScenarioError::Parse(msg)
    }
}

/// Serializes a scenario back to configuration text. The output parses back
/// to an identical `ScenarioSpec`.
pub fn to_toml_string<T: Real>(spec: &ScenarioSpec<T>) -> Result<String, ScenarioError> {
    let file = ScenarioFile {
        name: spec.name.clone(),
        road_layout: spec.road_layout,
        ego: EgoFile {
            position: spec.ego.init_position,
            heading_deg: Some(exact_degrees(spec.ego.init_heading)),
            cruise_speed: spec.ego.cruise_speed,
            path: spec.ego.path.segments.iter().map(segment_to_file).collect(),
            wheelbase: Some(spec.ego.wheelbase),
            body_length: Some(spec.ego.body_length),
            body_width: Some(spec.ego.body_width),
        },
        vru: spec
            .vrus
            .iter()
            .map(|v| VruFile {
                class: v.class.kind,
                position: v.init_position,
                target_speed: v.target_speed,
                path: v.path.segments.iter().map(segment_to_file).collect(),
                start_time: Some(v.start_time),
                v_max: Some(v.class.v_max),
                radius: Some(v.class.radius),
                a_max: Some(v.class.a_max),
                mass: Some(v.class.mass),
            })
            .collect(),
        sensor: Some(SensorFile {
            range: Some(spec.sensor.range),
            fov_deg: Some(exact_degrees(spec.sensor.fov_angle)),
        }),
        v2x: Some(V2xFile {
            enabled: Some(spec.v2x.enabled),
            rsu: Some(spec.v2x.rsu_position),
            comm_range: Some(spec.v2x.comm_range),
        }),
        planner: Some(PlannerFile {
            time_headway: Some(spec.planner.time_headway),
            a_pre: Some(spec.planner.a_pre),
            a_emergency: Some(spec.planner.a_emergency),
            a_cruise_max: Some(spec.planner.a_cruise_max),
            k_speed: Some(spec.planner.k_speed),
            pass_hysteresis: Some(spec.planner.pass_hysteresis),
        }),
        sim: Some(SimFile {
            dt: Some(spec.dt),
            t_max: Some(spec.t_max),
        }),
    };
    toml::to_string(&file).map_err(|e| ScenarioError::Parse(e.to_string()))
}
