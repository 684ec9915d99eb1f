//! Agent motion: piecewise path geometry, point-mass VRU integration and
//! kinematic-bicycle ego integration with pure-pursuit steering.
//!
//! Both integrators are semi-implicit Euler; with the default 10 ms step this
//! is more than accurate enough for first-order kinematics and it keeps runs
//! bit-for-bit reproducible.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{wrap_angle, Vec2};
use crate::scalar::Real;
use crate::scenario::{EgoSpec, VruSpec};

/// Velocity-tracking gain of the VRU force controller, 1/s.
pub const VRU_TRACK_GAIN: f64 = 2.0;
/// Steering angle limit for the ego, radians.
pub const STEER_LIMIT: f64 = 0.6;
/// Minimum pure-pursuit lookahead, metres.
const MIN_LOOKAHEAD: f64 = 3.0;
/// Speed-proportional lookahead factor, seconds.
const LOOKAHEAD_SPEED_FACTOR: f64 = 0.5;
/// Forward search window for path projection, metres.
const PROJECT_WINDOW: f64 = 5.0;
/// Maximum endpoint gap between consecutive segments, metres.
pub const PATH_CONTINUITY_TOL: f64 = 1e-6;

#[derive(Debug, Error, PartialEq)]
pub enum PathError {
    #[error("arc length {s} outside path [0, {length}]")]
    OutOfRange { s: f64, length: f64 },
    #[error("path has no segments")]
    Empty,
}

/// One piece of a prescribed path.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Segment<T> {
    Line {
        start: Vec2<T>,
        end: Vec2<T>,
    },
    /// Circular arc; `sweep` is signed, counter-clockwise positive.
    Arc {
        center: Vec2<T>,
        radius: T,
        start_angle: T,
        sweep: T,
    },
}

impl<T: Real> Segment<T> {
    pub fn length(&self) -> T {
        match self {
            Segment::Line { start, end } => start.distance_to(*end),
            Segment::Arc { radius, sweep, .. } => *radius * sweep.abs(),
        }
    }

    pub fn start_point(&self) -> Vec2<T> {
        match self {
            Segment::Line { start, .. } => *start,
            Segment::Arc {
                center,
                radius,
                start_angle,
                ..
            } => point_on_circle(*center, *radius, *start_angle),
        }
    }

    pub fn end_point(&self) -> Vec2<T> {
        match self {
            Segment::Line { end, .. } => *end,
            Segment::Arc {
                center,
                radius,
                start_angle,
                sweep,
            } => point_on_circle(*center, *radius, *start_angle + *sweep),
        }
    }

    /// Point and unit tangent at local arc length `s` (not range-checked).
    fn point_at(&self, s: T) -> (Vec2<T>, Vec2<T>) {
        match self {
            Segment::Line { start, end } => {
                let dir = *end - *start;
                let len = dir.norm();
                let unit = if len > T::zero() {
                    dir.scaled(T::one() / len)
                } else {
                    Vec2::new(T::one(), T::zero())
                };
                (*start + unit.scaled(s), unit)
            }
            Segment::Arc {
                center,
                radius,
                start_angle,
                sweep,
            } => {
                let dir = if *sweep >= T::zero() { T::one() } else { -T::one() };
                let theta = *start_angle + dir * s / *radius;
                let point = point_on_circle(*center, *radius, theta);
                let tangent = Vec2::new(-theta.sin(), theta.cos()).scaled(dir);
                (point, tangent)
            }
        }
    }

    /// Candidate local arc lengths closest to `p`, clamped to `[lo, hi]`.
    fn project_candidates(&self, p: Vec2<T>, lo: T, hi: T) -> [T; 3] {
        let nearest = match self {
            Segment::Line { start, end } => {
                let dir = *end - *start;
                let len = dir.norm();
                if len > T::zero() {
                    (p - *start).dot(dir) / len
                } else {
                    T::zero()
                }
            }
            Segment::Arc {
                center,
                radius,
                start_angle,
                sweep,
            } => {
                let dir = if *sweep >= T::zero() { T::one() } else { -T::one() };
                let theta = (p - *center).angle();
                // Angle travelled from the segment start, folded into [0, 2π).
                let mut travelled = (theta - *start_angle) * dir;
                let tau = T::TAU();
                travelled = travelled - tau * (travelled / tau).floor();
                travelled * *radius
            }
        };
        [nearest.max(lo).min(hi), lo, hi]
    }
}

fn point_on_circle<T: Real>(center: Vec2<T>, radius: T, theta: T) -> Vec2<T> {
    center + Vec2::new(theta.cos(), theta.sin()).scaled(radius)
}

/// Prescribed path as an ordered list of C0-continuous segments.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathSpec<T> {
    pub segments: Vec<Segment<T>>,
}

impl<T: Real> PathSpec<T> {
    pub fn new(segments: Vec<Segment<T>>) -> Self {
        Self { segments }
    }

    pub fn line(start: Vec2<T>, end: Vec2<T>) -> Self {
        Self::new(vec![Segment::Line { start, end }])
    }

    pub fn total_length(&self) -> T {
        self.segments
            .iter()
            .fold(T::zero(), |acc, seg| acc + seg.length())
    }

    pub fn start_point(&self) -> Option<Vec2<T>> {
        self.segments.first().map(|s| s.start_point())
    }

    /// Largest endpoint gap between consecutive segments, if any.
    pub fn max_joint_gap(&self) -> T {
        let mut worst = T::zero();
        for pair in self.segments.windows(2) {
            let gap = pair[0].end_point().distance_to(pair[1].start_point());
            if gap > worst {
                worst = gap;
            }
        }
        worst
    }

    /// Point and unit tangent at arc length `s` from the path start.
    pub fn point_at(&self, s: T) -> Result<(Vec2<T>, Vec2<T>), PathError> {
        if self.segments.is_empty() {
            return Err(PathError::Empty);
        }
        let total = self.total_length();
        let eps = T::of(1e-9);
        if s < -eps || s > total + eps {
            return Err(PathError::OutOfRange {
                s: s.as_f64(),
                length: total.as_f64(),
            });
        }
        Ok(self.point_at_unchecked(s.max(T::zero()).min(total)))
    }

    /// Like [`point_at`](Self::point_at) but clamps `s` into range.
    pub fn point_at_clamped(&self, s: T) -> (Vec2<T>, Vec2<T>) {
        let total = self.total_length();
        self.point_at_unchecked(s.max(T::zero()).min(total))
    }

    fn point_at_unchecked(&self, s: T) -> (Vec2<T>, Vec2<T>) {
        let mut remaining = s;
        let last = self.segments.len() - 1;
        for (i, seg) in self.segments.iter().enumerate() {
            let len = seg.length();
            if remaining <= len || i == last {
                return seg.point_at(remaining.min(len));
            }
            remaining = remaining - len;
        }
        unreachable!("point_at_unchecked called on empty path");
    }

    /// Arc length of the path point nearest to `p`, searching forward from
    /// `hint` within a fixed window. Clamps to the path end.
    pub fn project(&self, p: Vec2<T>, hint: T) -> T {
        let total = self.total_length();
        let lo = hint.max(T::zero()).min(total);
        let hi = (lo + T::of(PROJECT_WINDOW)).min(total);
        let mut best_s = lo;
        let mut best_d = T::infinity();
        let mut seg_start = T::zero();
        for seg in &self.segments {
            let len = seg.length();
            let seg_lo = (lo - seg_start).max(T::zero());
            let seg_hi = (hi - seg_start).min(len);
            if seg_lo <= seg_hi {
                for cand in seg.project_candidates(p, seg_lo, seg_hi) {
                    let (point, _) = seg.point_at(cand);
                    let d = point.distance_to(p);
                    if d < best_d {
                        best_d = d;
                        best_s = seg_start + cand;
                    }
                }
            }
            seg_start = seg_start + len;
        }
        best_s
    }
}

/// Kinematic state of one VRU.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VruState<T> {
    pub position: Vec2<T>,
    pub velocity: Vec2<T>,
    /// Arc length of the projected position along the prescribed path.
    pub path_progress: T,
    /// Set once the VRU has run its full path and left the scene.
    pub departed: bool,
}

impl<T: Real> VruState<T> {
    pub fn at_start(spec: &VruSpec<T>) -> Self {
        let progress = spec.path.project(spec.init_position, T::zero());
        Self {
            position: spec.init_position,
            velocity: Vec2::zero(),
            path_progress: progress,
            departed: false,
        }
    }

    pub fn speed(&self) -> T {
        self.velocity.norm()
    }
}

/// Kinematic state of the ego vehicle. `position` is the rear-axle point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EgoState<T> {
    pub position: Vec2<T>,
    /// Heading, normalized to (−π, π].
    pub heading: T,
    pub speed: T,
    /// Last applied longitudinal acceleration command.
    pub accel: T,
    pub path_progress: T,
}

impl<T: Real> EgoState<T> {
    pub fn at_start(spec: &EgoSpec<T>) -> Self {
        let progress = spec.path.project(spec.init_position, T::zero());
        Self {
            position: spec.init_position,
            heading: wrap_angle(spec.init_heading),
            speed: spec.cruise_speed,
            accel: T::zero(),
            path_progress: progress,
        }
    }

    /// Unit vector along the heading.
    pub fn heading_dir(&self) -> Vec2<T> {
        Vec2::new(self.heading.cos(), self.heading.sin())
    }

    /// Expresses a world point in the ego body frame (x forward, y left).
    pub fn body_frame(&self, p: Vec2<T>) -> Vec2<T> {
        (p - self.position).rotated(-self.heading)
    }
}

/// Advances one VRU by `dt`. Dormant (`t < start_time`) and departed VRUs
/// are returned unchanged.
///
/// The dummy rider tracks `target_speed` along the path tangent with a
/// saturated force controller: `f = m·k·(v_des − v)`, `|f| ≤ m·a_max`.
pub fn step_vru<T: Real>(state: &VruState<T>, spec: &VruSpec<T>, t: T, dt: T) -> VruState<T> {
    if t < spec.start_time || state.departed {
        return *state;
    }
    let total = spec.path.total_length();
    let (_, tangent) = spec.path.point_at_clamped(state.path_progress);
    let v_des = tangent.scaled(spec.target_speed);

    let mut accel = (v_des - state.velocity).scaled(T::of(VRU_TRACK_GAIN));
    let accel_norm = accel.norm();
    if accel_norm > spec.class.a_max {
        accel = accel.scaled(spec.class.a_max / accel_norm);
    }

    let mut velocity = state.velocity + accel.scaled(dt);
    let speed = velocity.norm();
    if speed > spec.class.v_max {
        velocity = velocity.scaled(spec.class.v_max / speed);
    }

    let position = state.position + velocity.scaled(dt);
    let path_progress = spec.path.project(position, state.path_progress);
    let departed = path_progress >= total - T::of(1e-9);
    VruState {
        position,
        velocity,
        path_progress,
        departed,
    }
}

/// Advances the ego by `dt` under a longitudinal acceleration command,
/// steering along the prescribed path. Speed never goes negative.
pub fn step_ego<T: Real>(
    state: &EgoState<T>,
    accel_cmd: T,
    spec: &EgoSpec<T>,
    dt: T,
) -> EgoState<T> {
    let steer = pure_pursuit_steer(state, spec);
    let speed = (state.speed + accel_cmd * dt).max(T::zero());
    let heading = wrap_angle(state.heading + speed / spec.wheelbase * steer.tan() * dt);
    let position = state.position + Vec2::new(heading.cos(), heading.sin()).scaled(speed * dt);
    let path_progress = spec.path.project(position, state.path_progress);
    EgoState {
        position,
        heading,
        speed,
        accel: accel_cmd,
        path_progress,
    }
}

/// Pure-pursuit steering angle toward a lookahead point on the path.
///
/// The lookahead sits `max(3 m, 0.5·speed)` ahead of the current progress;
/// the command is `atan2(2·L·sin(α), L_d)` clamped to ±[`STEER_LIMIT`].
pub fn pure_pursuit_steer<T: Real>(state: &EgoState<T>, spec: &EgoSpec<T>) -> T {
    let lookahead = T::of(MIN_LOOKAHEAD).max(T::of(LOOKAHEAD_SPEED_FACTOR) * state.speed);
    let total = spec.path.total_length();
    let target_s = (state.path_progress + lookahead).min(total);
    let (target, _) = spec.path.point_at_clamped(target_s);
    let to_target = target - state.position;
    if to_target.norm() < T::of(1e-9) {
        return T::zero();
    }
    let alpha = wrap_angle(to_target.angle() - state.heading);
    let steer = (T::of(2.0) * spec.wheelbase * alpha.sin()).atan2(lookahead);
    steer.max(-T::of(STEER_LIMIT)).min(T::of(STEER_LIMIT))
}
