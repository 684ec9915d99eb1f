//! Engine-level properties: collision-test rigid-motion invariance, TTC at
//! the collision step, and the event ordering V2X awareness produces.

use proptest::prelude::*;

use vrusim_core::engine::{check_collision, distance_to_body, run, EventKind, Outcome};
use vrusim_core::geometry::Vec2;
use vrusim_core::motion::{EgoState, PathSpec, VruState};
use vrusim_core::scenario::{builtin_scenario, EgoSpec};

fn ego_spec() -> EgoSpec<f64> {
    EgoSpec {
        init_position: Vec2::new(0.0, 0.0),
        init_heading: 0.0,
        cruise_speed: 15.0,
        path: PathSpec::line(Vec2::new(0.0, 0.0), Vec2::new(100.0, 0.0)),
        wheelbase: 2.8,
        body_length: 4.8,
        body_width: 1.8,
    }
}

fn ego_pose(x: f64, y: f64, heading: f64) -> EgoState<f64> {
    EgoState {
        position: Vec2::new(x, y),
        heading,
        speed: 5.0,
        accel: 0.0,
        path_progress: 0.0,
    }
}

fn vru_at(p: Vec2<f64>) -> VruState<f64> {
    VruState {
        position: p,
        velocity: Vec2::zero(),
        path_progress: 0.0,
        departed: false,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn collision_test_survives_rigid_motion(
        ego_x in -20.0f64..20.0,
        ego_y in -20.0f64..20.0,
        ego_h in -3.1f64..3.1,
        px in -30.0f64..30.0,
        py in -30.0f64..30.0,
        shift_x in -50.0f64..50.0,
        shift_y in -50.0f64..50.0,
        rot in -3.1f64..3.1,
    ) {
        let spec = ego_spec();
        let ego = ego_pose(ego_x, ego_y, ego_h);
        let p = Vec2::new(px, py);
        let radius = 0.5;

        // Skip configurations within a hair of the contact boundary, where
        // the transformed arithmetic may legitimately round the other way.
        let margin = (distance_to_body(&ego, &spec, p) - radius).abs();
        prop_assume!(margin > 1e-6);

        let before = check_collision(&ego, &spec, &vru_at(p), radius);

        let shift = Vec2::new(shift_x, shift_y);
        let moved_ego = ego_pose(
            ego.position.rotated(rot).x + shift.x,
            ego.position.rotated(rot).y + shift.y,
            ego.heading + rot,
        );
        let moved_p = p.rotated(rot) + shift;
        let after = check_collision(&moved_ego, &spec, &vru_at(moved_p), radius);

        prop_assert_eq!(before, after);
    }
}

#[test]
fn collision_runs_end_with_zero_ttc() {
    for name in ["ped_crossing", "moto_crossing"] {
        let spec = builtin_scenario::<f64>(name, false).unwrap();
        let result = run(&spec).unwrap();
        assert_eq!(result.outcome, Outcome::Collision, "{name}");
        let last = result.trace.last().unwrap();
        assert_eq!(last.ttc, Some(0.0), "{name}: ttc at collision step");
        assert_eq!(result.min_ttc, Some(0.0), "{name}: trace minimum");
    }
}

#[test]
fn v2x_zone_entry_precedes_onboard_detection_for_the_crossing_pedestrian() {
    let spec = builtin_scenario::<f64>("ped_crossing", true).unwrap();
    let result = run(&spec).unwrap();
    let zone = result
        .events
        .iter()
        .find(|e| e.kind == EventKind::V2xZoneEntry)
        .expect("zone entry event");
    let onboard = result
        .events
        .iter()
        .find(|e| e.kind == EventKind::FirstOnboardDetection)
        .expect("onboard detection event");
    assert!(
        zone.t < onboard.t,
        "zone entry {} not before onboard {}",
        zone.t,
        onboard.t
    );
}

#[test]
fn events_are_time_ordered() {
    for name in ["ped_crossing", "escooter_leading", "moto_crossing"] {
        for v2x in [false, true] {
            let spec = builtin_scenario::<f64>(name, v2x).unwrap();
            let result = run(&spec).unwrap();
            for pair in result.events.windows(2) {
                assert!(pair[0].t <= pair[1].t, "{name} v2x={v2x}: events out of order");
            }
        }
    }
}

#[test]
fn collision_outcome_iff_collision_event() {
    for name in ["ped_crossing", "escooter_leading", "moto_crossing"] {
        for v2x in [false, true] {
            let spec = builtin_scenario::<f64>(name, v2x).unwrap();
            let result = run(&spec).unwrap();
            let has_event = result.events.iter().any(|e| e.kind == EventKind::Collision);
            assert_eq!(result.outcome == Outcome::Collision, has_event);
            assert_eq!(result.outcome == Outcome::Completed, result.trip_time.is_some());
        }
    }
}
