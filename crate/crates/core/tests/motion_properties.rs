//! Motion-layer property suite: speed caps, straight-line fidelity, tracking
//! convergence, pure-pursuit stability and time-step consistency.

use proptest::prelude::*;

use vrusim_core::geometry::Vec2;
use vrusim_core::motion::{pure_pursuit_steer, step_ego, step_vru, EgoState, PathSpec, VruState};
use vrusim_core::scenario::{EgoSpec, VruClass, VruSpec};

fn straight_ego_spec(length: f64, cruise: f64) -> EgoSpec<f64> {
    EgoSpec {
        init_position: Vec2::new(0.0, 0.0),
        init_heading: 0.0,
        cruise_speed: cruise,
        path: PathSpec::line(Vec2::new(0.0, 0.0), Vec2::new(length, 0.0)),
        wheelbase: 2.5,
        body_length: 3.9,
        body_width: 1.8,
    }
}

fn vru_spec(class: VruClass<f64>, target: f64, length: f64) -> VruSpec<f64> {
    VruSpec {
        class,
        init_position: Vec2::new(0.0, 0.0),
        target_speed: target,
        path: PathSpec::line(Vec2::new(0.0, 0.0), Vec2::new(length, 0.0)),
        start_time: 0.0,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn vru_speed_never_exceeds_cap(
        v_max in 0.5f64..30.0,
        target_frac in 0.1f64..1.0,
        a_max in 0.5f64..5.0,
        dt in 0.002f64..0.05,
        vx0_frac in -1.0f64..1.0,
        vy0_frac in -1.0f64..1.0,
    ) {
        let mut class = VruClass::pedestrian();
        class.v_max = v_max;
        class.a_max = a_max;
        let spec = vru_spec(class, target_frac * v_max, 10_000.0);
        let mut state = VruState::at_start(&spec);
        // Admissible initial velocity anywhere inside the cap.
        let v0 = Vec2::new(vx0_frac, vy0_frac) * (v_max / 2.0_f64.sqrt());
        state.velocity = v0;
        let mut t = 0.0;
        for _ in 0..300 {
            state = step_vru(&state, &spec, t, dt);
            t += dt;
            prop_assert!(state.speed() <= v_max + 1e-9,
                "speed {} exceeded cap {}", state.speed(), v_max);
        }
    }
}

#[test]
fn ego_holds_a_straight_line_for_ten_seconds() {
    let spec = straight_ego_spec(400.0, 15.0);
    let mut state = EgoState::at_start(&spec);
    let dt = 0.01;
    for _ in 0..1000 {
        state = step_ego(&state, 0.0, &spec, dt);
        assert!(
            state.position.y.abs() < 1e-6,
            "lateral drift {} m",
            state.position.y
        );
    }
    assert!((state.position.x - 150.0).abs() < 1e-6);
}

#[test]
fn vru_reaches_target_speed_in_bounded_time() {
    for class in [
        VruClass::pedestrian(),
        VruClass::escooter(),
        VruClass::motorcyclist(),
    ] {
        let target = class.v_max.min(18.0);
        let spec = vru_spec(class, target, 10_000.0);
        let mut state = VruState::at_start(&spec);
        let dt = 0.01;
        let bound = target / class.a_max + 1.0;
        let steps = (bound / dt).ceil() as usize;
        let mut prev_speed = 0.0;
        let mut t = 0.0;
        for _ in 0..steps {
            state = step_vru(&state, &spec, t, dt);
            t += dt;
            let speed = state.speed();
            assert!(
                speed >= prev_speed - 1e-12,
                "{:?}: speed decreased {prev_speed} -> {speed}",
                spec.class.kind
            );
            prev_speed = speed;
        }
        // Exponential tail of the tracking controller: within 2.5 % of the
        // target counts as converged.
        assert!(
            prev_speed >= 0.975 * target,
            "{:?}: only reached {prev_speed} of {target} within {bound} s",
            spec.class.kind
        );
    }
}

#[test]
fn pure_pursuit_recovers_from_one_metre_offset() {
    let spec = straight_ego_spec(400.0, 15.0);
    let mut state = EgoState::at_start(&spec);
    state.position = Vec2::new(0.0, 1.0);
    state.path_progress = spec.path.project(state.position, 0.0);
    let dt = 0.01;
    let mut worst_after_settle = 0.0f64;
    for k in 0..1000 {
        state = step_ego(&state, 0.0, &spec, dt);
        assert!(
            state.position.y.abs() < 1.5,
            "divergence: offset {} m at step {k}",
            state.position.y
        );
        if k >= 500 {
            worst_after_settle = worst_after_settle.max(state.position.y.abs());
        }
    }
    assert!(
        worst_after_settle < 0.05,
        "offset still {worst_after_settle} m after 5 s"
    );
}

#[test]
fn halving_dt_barely_moves_a_nominal_run() {
    // Ten seconds of coupled transients: the ego accelerates then brakes on
    // its path while an e-scooter pulls away from rest.
    let ego_spec = straight_ego_spec(600.0, 15.0);
    let scooter = vru_spec(VruClass::escooter(), 13.4, 600.0);

    let run = |dt: f64| -> (Vec2<f64>, Vec2<f64>) {
        let mut ego = EgoState::at_start(&ego_spec);
        ego.speed = 10.0;
        let mut vru = VruState::at_start(&scooter);
        let steps = (10.0 / dt).round() as usize;
        for k in 0..steps {
            let t = k as f64 * dt;
            let accel = if t < 5.0 { 1.0 } else { -1.0 };
            ego = step_ego(&ego, accel, &ego_spec, dt);
            vru = step_vru(&vru, &scooter, t, dt);
        }
        (ego.position, vru.position)
    };

    let (ego_a, vru_a) = run(0.01);
    let (ego_b, vru_b) = run(0.005);
    assert!(
        ego_a.distance_to(ego_b) < 0.05,
        "ego drifted {} m between dt levels",
        ego_a.distance_to(ego_b)
    );
    assert!(
        vru_a.distance_to(vru_b) < 0.05,
        "vru drifted {} m between dt levels",
        vru_a.distance_to(vru_b)
    );
}

#[test]
fn steering_always_within_limits() {
    let spec = straight_ego_spec(100.0, 15.0);
    for y in [-20.0, -1.0, 0.0, 0.4, 3.0, 50.0] {
        for heading in [-3.0, -1.0, 0.0, 0.7, 2.5] {
            let state = EgoState {
                position: Vec2::new(10.0, y),
                heading,
                speed: 12.0,
                accel: 0.0,
                path_progress: 10.0,
            };
            let steer = pure_pursuit_steer(&state, &spec);
            assert!(steer.abs() <= 0.6 + 1e-12);
        }
    }
}
