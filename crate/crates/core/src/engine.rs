//! Fixed-step simulation loop.
//!
//! Update order per step: perceive → plan → advance agents, with the planner
//! acting on the previous step's positions. Each trace row holds the states
//! at time `t` together with the decisions made from them; the commanded
//! acceleration applies over `[t, t + dt)`. This ordering is fixed to keep
//! runs bit-for-bit reproducible.
//!
//! Collision uses the exact disc-versus-oriented-rectangle test, while TTC
//! uses the standard disc-disc approximation (ego disc of radius
//! `body_length / 2` centred mid-body).

use serde::Serialize;

use crate::awareness::{perceive, v2x_aware, DetectionSource, Detection};
use crate::geometry::Vec2;
use crate::motion::{step_ego, step_vru, EgoState, VruState};
use crate::planner::{plan, PlannerMode, PlannerState};
use crate::scalar::Real;
use crate::scenario::{EgoSpec, ScenarioError, ScenarioSpec};

/// Everything recorded about one simulation step.
#[derive(Clone, Debug, PartialEq)]
pub struct StepRecord<T> {
    pub t: T,
    pub ego: EgoState<T>,
    pub mode: PlannerMode,
    pub accel_cmd: T,
    pub vrus: Vec<VruState<T>>,
    pub detections: Vec<Detection<T>>,
    /// Smallest time-to-collision over all VRUs still in the scene.
    pub ttc: Option<T>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EventKind {
    FirstOnboardDetection,
    V2xZoneEntry,
    ModeChange,
    Collision,
    VruPassed,
    TripComplete,
}

/// Discrete event with the step time it occurred at.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimEvent<T> {
    pub t: T,
    pub kind: EventKind,
    pub detail: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Outcome {
    Collision,
    Completed,
    Timeout,
}

impl Outcome {
    pub fn as_str(&self) -> &'static str {
        match self {
            Outcome::Collision => "Collision",
            Outcome::Completed => "Completed",
            Outcome::Timeout => "Timeout",
        }
    }
}

/// Result of one simulation run.
#[derive(Clone, Debug, PartialEq)]
pub struct SimResult<T> {
    pub outcome: Outcome,
    pub trace: Vec<StepRecord<T>>,
    pub events: Vec<SimEvent<T>>,
    /// Present iff the run completed.
    pub trip_time: Option<T>,
    /// Smallest finite TTC seen anywhere in the trace.
    pub min_ttc: Option<T>,
}

/// Distance from a point to the ego body rectangle (rear axle at
/// `ego.position`, extending `body_length` forward, `body_width` wide).
pub fn distance_to_body<T: Real>(ego: &EgoState<T>, spec: &EgoSpec<T>, p: Vec2<T>) -> T {
    let rel = ego.body_frame(p);
    let half_width = spec.body_width / T::of(2.0);
    let dx = (-rel.x).max(rel.x - spec.body_length).max(T::zero());
    let dy = (rel.y.abs() - half_width).max(T::zero());
    (dx * dx + dy * dy).sqrt()
}

/// True iff the VRU disc touches the ego's oriented body rectangle.
pub fn check_collision<T: Real>(
    ego: &EgoState<T>,
    ego_spec: &EgoSpec<T>,
    vru: &VruState<T>,
    radius: T,
) -> bool {
    distance_to_body(ego, ego_spec, vru.position) <= radius
}

/// Constant-velocity time to collision under the disc-disc approximation.
///
/// Solves `‖Δp + Δv·t‖ = r_e + radius` for the smallest `t ≥ 0`, with the
/// ego disc (radius `body_length / 2`) centred mid-body. Returns 0 when the
/// discs already overlap and `None` when they never meet.
pub fn ttc<T: Real>(
    ego: &EgoState<T>,
    ego_spec: &EgoSpec<T>,
    vru: &VruState<T>,
    radius: T,
) -> Option<T> {
    let r_ego = ego_spec.body_length / T::of(2.0);
    let centre = ego.position + ego.heading_dir().scaled(r_ego);
    let dp = vru.position - centre;
    let dv = vru.velocity - ego.heading_dir().scaled(ego.speed);
    let r_sum = r_ego + radius;

    let c = dp.norm_sq() - r_sum * r_sum;
    if c <= T::zero() {
        return Some(T::zero());
    }
    let a = dv.norm_sq();
    if a == T::zero() {
        return None;
    }
    let b = T::of(2.0) * dp.dot(dv);
    let disc = b * b - T::of(4.0) * a * c;
    if disc < T::zero() {
        return None;
    }
    let t = (-b - disc.sqrt()) / (T::of(2.0) * a);
    if t >= T::zero() {
        Some(t)
    } else {
        None
    }
}

struct EventLog<T> {
    events: Vec<SimEvent<T>>,
    saw_onboard: bool,
    saw_zone: bool,
    passed: Vec<bool>,
    prev_conflicting: Vec<bool>,
}

impl<T: Real> EventLog<T> {
    fn new(n_vrus: usize) -> Self {
        Self {
            events: Vec::new(),
            saw_onboard: false,
            saw_zone: false,
            passed: vec![false; n_vrus],
            prev_conflicting: vec![false; n_vrus],
        }
    }

    fn push(&mut self, t: T, kind: EventKind, detail: String) {
        self.events.push(SimEvent { t, kind, detail });
    }
}

/// Runs one scenario to completion, collision or timeout.
///
/// Deterministic: the same spec always produces an identical trace.
pub fn run<T: Real>(spec: &ScenarioSpec<T>) -> Result<SimResult<T>, ScenarioError> {
    spec.validate()?;

    let ego_spec = &spec.ego;
    let path_length = ego_spec.path.total_length();
    let mut ego = EgoState::at_start(ego_spec);
    let mut vrus: Vec<VruState<T>> = spec.vrus.iter().map(VruState::at_start).collect();
    let mut planner_state = PlannerState::default();
    let mut log = EventLog::new(vrus.len());
    let mut trace: Vec<StepRecord<T>> = Vec::new();

    let max_steps = (spec.t_max / spec.dt).as_f64().round() as usize;
    let mut outcome = Outcome::Timeout;
    let mut trip_time = None;

    for step in 0..=max_steps {
        let t = T::of(step as f64) * spec.dt;

        let detections = perceive(&ego, &vrus, &spec.sensor, &spec.v2x);
        let (next_planner, accel_cmd) = plan(
            &planner_state,
            &ego,
            ego_spec,
            &detections,
            &spec.vrus,
            &spec.planner,
        );

        if !log.saw_zone && v2x_aware(&ego, &spec.v2x) {
            log.saw_zone = true;
            log.push(
                t,
                EventKind::V2xZoneEntry,
                "ego entered the roadside-unit reception zone".into(),
            );
        }
        if !log.saw_onboard {
            if let Some(det) = detections
                .iter()
                .find(|d| d.source == DetectionSource::Onboard)
            {
                log.saw_onboard = true;
                log.push(
                    t,
                    EventKind::FirstOnboardDetection,
                    format!("vru {} entered the field of view", det.vru_index),
                );
            }
        }
        if next_planner.mode != planner_state.mode {
            log.push(
                t,
                EventKind::ModeChange,
                format!(
                    "{} -> {}",
                    planner_state.mode.as_str(),
                    next_planner.mode.as_str()
                ),
            );
        }
        for (i, vru) in vrus.iter().enumerate() {
            if log.passed[i] {
                continue;
            }
            if vru.departed {
                log.passed[i] = true;
                log.push(t, EventKind::VruPassed, format!("vru {i} left the scene"));
                continue;
            }
            let conflicting =
                ego.body_frame(vru.position).x >= -spec.planner.pass_hysteresis;
            if log.prev_conflicting[i] && !conflicting {
                log.passed[i] = true;
                log.push(t, EventKind::VruPassed, format!("vru {i} passed behind the ego"));
            }
            log.prev_conflicting[i] = conflicting;
        }

        let step_ttc = vrus
            .iter()
            .zip(&spec.vrus)
            .filter(|(state, _)| !state.departed)
            .filter_map(|(state, vspec)| ttc(&ego, ego_spec, state, vspec.class.radius))
            .fold(None, |best: Option<T>, t| {
                Some(best.map_or(t, |b| b.min(t)))
            });

        planner_state = next_planner;
        trace.push(StepRecord {
            t,
            ego,
            mode: planner_state.mode,
            accel_cmd,
            vrus: vrus.clone(),
            detections,
            ttc: step_ttc,
        });

        let hit = vrus
            .iter()
            .zip(&spec.vrus)
            .enumerate()
            .find(|(_, (state, vspec))| {
                !state.departed && check_collision(&ego, ego_spec, state, vspec.class.radius)
            });
        if let Some((i, _)) = hit {
            log.push(t, EventKind::Collision, format!("ego body contacted vru {i}"));
            outcome = Outcome::Collision;
            break;
        }
        if ego.path_progress >= path_length - T::of(1e-9) {
            log.push(t, EventKind::TripComplete, "ego reached the end of its path".into());
            outcome = Outcome::Completed;
            trip_time = Some(t);
            break;
        }
        if step == max_steps {
            outcome = Outcome::Timeout;
            break;
        }

        ego = step_ego(&ego, accel_cmd, ego_spec, spec.dt);
        for (state, vspec) in vrus.iter_mut().zip(&spec.vrus) {
            *state = step_vru(state, vspec, t, spec.dt);
        }
    }

    let min_ttc = trace
        .iter()
        .filter_map(|row| row.ttc)
        .fold(None, |best: Option<T>, t| {
            Some(best.map_or(t, |b| b.min(t)))
        });

    Ok(SimResult {
        outcome,
        trace,
        events: log.events,
        trip_time,
        min_ttc,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::motion::PathSpec;
    use crate::scenario::{
        builtin_scenario, PlannerParams, RoadLayout, SensorSpec, V2xSpec, VruClass, VruSpec,
    };
    use approx::assert_relative_eq;

    fn ego_spec_48() -> EgoSpec<f64> {
        EgoSpec {
            init_position: Vec2::zero(),
            init_heading: 0.0,
            cruise_speed: 15.0,
            path: PathSpec::line(Vec2::zero(), Vec2::new(200.0, 0.0)),
            wheelbase: 2.8,
            body_length: 4.8,
            body_width: 1.8,
        }
    }

    fn ego_at_origin(speed: f64) -> EgoState<f64> {
        EgoState {
            position: Vec2::zero(),
            heading: 0.0,
            speed,
            accel: 0.0,
            path_progress: 0.0,
        }
    }

    fn vru_at(x: f64, y: f64, vx: f64, vy: f64) -> VruState<f64> {
        VruState {
            position: Vec2::new(x, y),
            velocity: Vec2::new(vx, vy),
            path_progress: 0.0,
            departed: false,
        }
    }

    #[test]
    fn collision_point_inside_rectangle() {
        let ego = ego_at_origin(0.0);
        let spec = ego_spec_48();
        assert!(check_collision(&ego, &spec, &vru_at(2.0, 0.3, 0.0, 0.0), 0.5));
    }

    #[test]
    fn collision_clearance_ahead_of_nose() {
        // Rectangle x ∈ [0, 4.8], y ∈ [-0.9, 0.9]; point (5.9, 0) is 1.1 m
        // from the face, more than the 0.5 m radius.
        let ego = ego_at_origin(0.0);
        let spec = ego_spec_48();
        assert!(!check_collision(&ego, &spec, &vru_at(5.9, 0.0, 0.0, 0.0), 0.5));
        assert!(check_collision(&ego, &spec, &vru_at(5.2, 0.0, 0.0, 0.0), 0.5));
    }

    #[test]
    fn collision_respects_heading() {
        let mut ego = ego_at_origin(0.0);
        ego.heading = std::f64::consts::FRAC_PI_2;
        let spec = ego_spec_48();
        // Body now points +y: (0, 4.7) is inside, (4.7, 0) is not.
        assert!(check_collision(&ego, &spec, &vru_at(0.0, 4.7, 0.0, 0.0), 0.5));
        assert!(!check_collision(&ego, &spec, &vru_at(4.7, 0.0, 0.0, 0.0), 0.5));
    }

    #[test]
    fn ttc_head_on_quadratic() {
        // Centres 30 m apart, closing at 15 m/s, r_sum 2.9:
        // t = (30 - 2.9) / 15 ≈ 1.807 s.
        let ego = ego_at_origin(15.0);
        let spec = ego_spec_48();
        let vru = vru_at(32.4, 0.0, 0.0, 0.0);
        let t = ttc(&ego, &spec, &vru, 0.5).unwrap();
        assert_relative_eq!(t, (30.0 - 2.9) / 15.0, epsilon = 1e-9);
    }

    #[test]
    fn ttc_parallel_never_closes() {
        let ego = ego_at_origin(10.0);
        let spec = ego_spec_48();
        let vru = vru_at(30.0, 0.0, 10.0, 0.0);
        assert_eq!(ttc(&ego, &spec, &vru, 0.5), None);
    }

    #[test]
    fn ttc_zero_when_overlapping() {
        let ego = ego_at_origin(10.0);
        let spec = ego_spec_48();
        let vru = vru_at(3.0, 0.0, 0.0, 0.0);
        assert_eq!(ttc(&ego, &spec, &vru, 0.5), Some(0.0));
    }

    #[test]
    fn ttc_receding_is_none() {
        let ego = ego_at_origin(5.0);
        let spec = ego_spec_48();
        let vru = vru_at(30.0, 0.0, 20.0, 0.0);
        assert_eq!(ttc(&ego, &spec, &vru, 0.5), None);
    }

    fn quiet_scenario() -> ScenarioSpec<f64> {
        // Single dormant VRU far off the road; the ego just cruises through.
        ScenarioSpec {
            name: "quiet".into(),
            ego: EgoSpec {
                init_position: Vec2::new(0.0, 0.0),
                init_heading: 0.0,
                cruise_speed: 15.0,
                path: PathSpec::line(Vec2::zero(), Vec2::new(120.0, 0.0)),
                wheelbase: 2.5,
                body_length: 3.9,
                body_width: 1.8,
            },
            vrus: vec![VruSpec {
                class: VruClass::pedestrian(),
                init_position: Vec2::new(0.0, 500.0),
                target_speed: 1.8,
                path: PathSpec::line(Vec2::new(0.0, 500.0), Vec2::new(0.0, 510.0)),
                start_time: 1000.0,
            }],
            sensor: SensorSpec::default(),
            v2x: V2xSpec::default(),
            planner: PlannerParams::default(),
            dt: 0.01,
            t_max: 20.0,
            road_layout: RoadLayout::StraightRoad,
        }
    }

    #[test]
    fn unobstructed_cruise_completes_on_time() {
        let spec = quiet_scenario();
        let result = run(&spec).unwrap();
        assert_eq!(result.outcome, Outcome::Completed);
        let trip = result.trip_time.unwrap();
        assert_relative_eq!(trip, 120.0 / 15.0, epsilon = 0.05);
        assert!(result
            .events
            .iter()
            .all(|e| matches!(e.kind, EventKind::TripComplete | EventKind::VruPassed)));
        assert_eq!(
            result
                .events
                .iter()
                .filter(|e| e.kind == EventKind::TripComplete)
                .count(),
            1
        );
    }

    #[test]
    fn trace_rows_step_by_dt() {
        let spec = quiet_scenario();
        let result = run(&spec).unwrap();
        for (k, row) in result.trace.iter().enumerate() {
            assert_relative_eq!(row.t, k as f64 * spec.dt, epsilon = 1e-9);
        }
    }

    #[test]
    fn runs_are_bitwise_identical() {
        let spec = builtin_scenario::<f64>("ped_crossing", true).unwrap();
        let a = run(&spec).unwrap();
        let b = run(&spec).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn timeout_when_path_never_ends() {
        let mut spec = quiet_scenario();
        spec.ego.path = PathSpec::line(Vec2::zero(), Vec2::new(1e5, 0.0));
        spec.t_max = 1.0;
        let result = run(&spec).unwrap();
        assert_eq!(result.outcome, Outcome::Timeout);
        assert_eq!(result.trace.len(), 101);
        assert_eq!(result.trip_time, None);
    }

    #[test]
    fn invalid_spec_is_rejected() {
        let mut spec = quiet_scenario();
        spec.dt = 0.0;
        assert!(run(&spec).is_err());
    }

    #[test]
    fn f32_run_reaches_same_outcome() {
        let spec = builtin_scenario::<f32>("ped_crossing", false).unwrap();
        let result = run(&spec).unwrap();
        assert_eq!(result.outcome, Outcome::Collision);
    }
}
