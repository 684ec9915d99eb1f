//! Rule-based finite-state collision-avoidance planner.
//!
//! Three modes: nominal cruise, gentle pre-deceleration once a conflicting
//! VRU is perceived beyond the safe distance, and emergency braking inside
//! it. The safe distance follows the two-second rule `D_safe = headway · v`.
//! The planner returns to cruise only when no conflicting VRU remains.

use serde::Serialize;

use crate::awareness::Detection;
use crate::motion::EgoState;
use crate::scalar::Real;
use crate::scenario::{EgoSpec, PlannerParams, VruSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PlannerMode {
    Cruise,
    PreSlow,
    EmergencyBrake,
}

impl PlannerMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            PlannerMode::Cruise => "Cruise",
            PlannerMode::PreSlow => "PreSlow",
            PlannerMode::EmergencyBrake => "EmergencyBrake",
        }
    }
}

/// Planner state carried between steps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PlannerState {
    pub mode: PlannerMode,
    /// Index of the VRU currently driving the avoidance behavior; present
    /// exactly when the mode is not `Cruise`.
    pub engaged_vru: Option<usize>,
}

impl Default for PlannerState {
    fn default() -> Self {
        Self {
            mode: PlannerMode::Cruise,
            engaged_vru: None,
        }
    }
}

/// Two-second-rule safe distance for the current speed.
pub fn safe_distance<T: Real>(v: T, params: &PlannerParams<T>) -> T {
    params.time_headway * v
}

/// Body-to-body gap between the ego and a detection, clamped at zero.
///
/// Centre distance minus the VRU disc radius and half the ego body length.
pub fn gap_to<T: Real>(
    ego: &EgoState<T>,
    spec: &EgoSpec<T>,
    det: &Detection<T>,
    vru_radius: T,
) -> T {
    let centre_distance = ego.position.distance_to(det.position);
    (centre_distance - vru_radius - spec.body_length / T::of(2.0)).max(T::zero())
}

/// True while the detection still lies ahead of the ego: its longitudinal
/// body-frame coordinate has not dropped below `-pass_hysteresis`.
pub fn is_conflicting<T: Real>(
    ego: &EgoState<T>,
    det: &Detection<T>,
    params: &PlannerParams<T>,
) -> bool {
    ego.body_frame(det.position).x >= -params.pass_hysteresis
}

/// One planner step: classifies the detections and produces the next mode
/// plus a longitudinal acceleration command.
///
/// Pure function of its inputs; the caller threads the state through.
pub fn plan<T: Real>(
    _state: &PlannerState,
    ego: &EgoState<T>,
    ego_spec: &EgoSpec<T>,
    detections: &[Detection<T>],
    vru_specs: &[VruSpec<T>],
    params: &PlannerParams<T>,
) -> (PlannerState, T) {
    let mut nearest: Option<(usize, T)> = None;
    for det in detections {
        if !is_conflicting(ego, det, params) {
            continue;
        }
        let radius = vru_specs
            .get(det.vru_index)
            .map(|v| v.class.radius)
            .unwrap_or_else(T::zero);
        let gap = gap_to(ego, ego_spec, det, radius);
        let closer = match nearest {
            Some((_, best)) => gap < best,
            None => true,
        };
        if closer {
            nearest = Some((det.vru_index, gap));
        }
    }

    match nearest {
        None => {
            let accel = (params.k_speed * (ego_spec.cruise_speed - ego.speed))
                .max(-params.a_pre.abs())
                .min(params.a_cruise_max);
            (PlannerState::default(), accel)
        }
        Some((index, gap)) => {
            if gap > safe_distance(ego.speed, params) {
                (
                    PlannerState {
                        mode: PlannerMode::PreSlow,
                        engaged_vru: Some(index),
                    },
                    params.a_pre,
                )
            } else {
                (
                    PlannerState {
                        mode: PlannerMode::EmergencyBrake,
                        engaged_vru: Some(index),
                    },
                    params.a_emergency,
                )
            }
        }
    }
}
