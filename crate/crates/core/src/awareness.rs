//! Perception: onboard sector field of view plus the idealized zero-latency
//! V2X awareness channel, fused into one detection list per step.

use serde::Serialize;

use crate::geometry::Vec2;
use crate::motion::{EgoState, VruState};
use crate::scalar::Real;
use crate::scenario::{SensorSpec, V2xSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DetectionSource {
    Onboard,
    V2x,
}

/// One perceived VRU. States are exact: the channel models no noise.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Detection<T> {
    pub vru_index: usize,
    pub position: Vec2<T>,
    pub velocity: Vec2<T>,
    pub source: DetectionSource,
}

/// True iff `p` lies inside the closed sector field of view.
pub fn in_fov<T: Real>(ego: &EgoState<T>, sensor: &SensorSpec<T>, p: Vec2<T>) -> bool {
    let rel = ego.body_frame(p);
    if rel.norm() > sensor.range {
        return false;
    }
    let bearing = rel.y.atan2(rel.x);
    bearing.abs() <= sensor.fov_angle / T::of(2.0)
}

/// True iff the ego currently receives roadside-unit broadcasts.
pub fn v2x_aware<T: Real>(ego: &EgoState<T>, v2x: &V2xSpec<T>) -> bool {
    v2x.enabled && ego.position.distance_to(v2x.rsu_position) <= v2x.comm_range
}

/// Fuses onboard and V2X detections over all VRUs still in the scene.
///
/// A VRU seen by both channels yields a single detection with source
/// `Onboard`. Inside the reception zone the roadside unit broadcasts every
/// VRU state, including dormant ones; departed VRUs are gone.
pub fn perceive<T: Real>(
    ego: &EgoState<T>,
    vrus: &[VruState<T>],
    sensor: &SensorSpec<T>,
    v2x: &V2xSpec<T>,
) -> Vec<Detection<T>> {
    let aware = v2x_aware(ego, v2x);
    let mut detections = Vec::new();
    for (i, vru) in vrus.iter().enumerate() {
        if vru.departed {
            continue;
        }
        let source = if in_fov(ego, sensor, vru.position) {
            Some(DetectionSource::Onboard)
        } else if aware {
            Some(DetectionSource::V2x)
        } else {
            None
        };
        if let Some(source) = source {
            detections.push(Detection {
                vru_index: i,
                position: vru.position,
                velocity: vru.velocity,
                source,
            });
        }
    }
    detections
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ego_at_origin() -> EgoState<f64> {
        EgoState {
            position: Vec2::zero(),
            heading: 0.0,
            speed: 10.0,
            accel: 0.0,
            path_progress: 0.0,
        }
    }

    fn sensor() -> SensorSpec<f64> {
        SensorSpec {
            range: 20.0,
            fov_angle: 120.0f64.to_radians(),
        }
    }

    fn vru_at(x: f64, y: f64) -> VruState<f64> {
        VruState {
            position: Vec2::new(x, y),
            velocity: Vec2::zero(),
            path_progress: 0.0,
            departed: false,
        }
    }

    #[test]
    fn dead_ahead_in_range() {
        assert!(in_fov(&ego_at_origin(), &sensor(), Vec2::new(10.0, 0.0)));
    }

    #[test]
    fn ninety_degrees_off_axis_is_out() {
        assert!(!in_fov(&ego_at_origin(), &sensor(), Vec2::new(0.0, 10.0)));
    }

    #[test]
    fn oblique_point_inside_cone() {
        // distance ≈ 19.65 ≤ 20, bearing ≈ 14.7° ≤ 60°
        assert!(in_fov(&ego_at_origin(), &sensor(), Vec2::new(19.0, 5.0)));
    }

    #[test]
    fn closed_boundary_counts_as_detected() {
        let ego = ego_at_origin();
        let s = sensor();
        assert!(in_fov(&ego, &s, Vec2::new(20.0, 0.0)));
        // Exactly on the cone edge at 60°.
        let p = Vec2::new(10.0 * 60.0f64.to_radians().cos(), 10.0 * 60.0f64.to_radians().sin());
        let rel = ego.body_frame(p);
        assert!(rel.y.atan2(rel.x) <= s.fov_angle / 2.0);
        assert!(in_fov(&ego, &s, p));
    }

    fn v2x(enabled: bool, comm_range: f64) -> V2xSpec<f64> {
        V2xSpec {
            enabled,
            rsu_position: Vec2::new(10.0, 0.0),
            comm_range,
        }
    }

    #[test]
    fn v2x_disabled_is_never_aware() {
        assert!(!v2x_aware(&ego_at_origin(), &v2x(false, 1000.0)));
    }

    #[test]
    fn v2x_inside_zone() {
        assert!(v2x_aware(&ego_at_origin(), &v2x(true, 40.0)));
    }

    #[test]
    fn v2x_boundary_is_strict_outside() {
        let mut spec = v2x(true, 40.0);
        spec.rsu_position = Vec2::new(40.001, 0.0);
        assert!(!v2x_aware(&ego_at_origin(), &spec));
        spec.rsu_position = Vec2::new(40.0, 0.0);
        assert!(v2x_aware(&ego_at_origin(), &spec));
    }

    #[test]
    fn nothing_sees_a_vru_behind_without_v2x() {
        let dets = perceive(
            &ego_at_origin(),
            &[vru_at(-10.0, 0.0)],
            &sensor(),
            &v2x(false, 40.0),
        );
        assert!(dets.is_empty());
    }

    #[test]
    fn v2x_reports_vrus_outside_fov() {
        let dets = perceive(
            &ego_at_origin(),
            &[vru_at(100.0, 0.0)],
            &sensor(),
            &v2x(true, 40.0),
        );
        assert_eq!(dets.len(), 1);
        assert_eq!(dets[0].source, DetectionSource::V2x);
    }

    #[test]
    fn onboard_wins_the_merge() {
        let dets = perceive(
            &ego_at_origin(),
            &[vru_at(10.0, 0.0)],
            &sensor(),
            &v2x(true, 40.0),
        );
        assert_eq!(dets.len(), 1);
        assert_eq!(dets[0].source, DetectionSource::Onboard);
    }

    #[test]
    fn departed_vrus_are_invisible() {
        let mut vru = vru_at(10.0, 0.0);
        vru.departed = true;
        let dets = perceive(&ego_at_origin(), &[vru], &sensor(), &v2x(true, 40.0));
        assert!(dets.is_empty());
    }
}
