//! Sustainability scores: safety / efficiency / comfort, each in [0, 1],
//! with a hard collision penalty zeroing all three.
//!
//! Safety compares the worst time-to-collision against the planner headway,
//! efficiency compares free-flow trip time against the actual one, and
//! comfort penalizes RMS acceleration and RMS jerk. Commanded acceleration
//! steps are rate-limited for the jerk accounting so instantaneous planner
//! mode switches produce finite, comparable penalties.

use serde::Serialize;
use thiserror::Error;

use crate::engine::{Outcome, SimResult};
use crate::scalar::Real;
use crate::scenario::ScenarioSpec;

/// Reference acceleration for the comfort score, m/s².
pub const ACCEL_REF: f64 = 3.0;
/// Reference jerk for the comfort score, m/s³.
pub const JERK_REF: f64 = 10.0;
/// Rate limit applied to commanded-acceleration steps for jerk accounting, m/s³.
pub const JERK_RATE_CAP: f64 = 20.0;

#[derive(Debug, Error, PartialEq)]
pub enum MetricsError {
    #[error("cannot score an empty trace")]
    EmptyTrace,
}

/// Safety / efficiency / comfort triple.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Scores<T> {
    pub safety: T,
    pub efficiency: T,
    pub comfort: T,
}

impl<T: Real> Scores<T> {
    pub fn zero() -> Self {
        Self {
            safety: T::zero(),
            efficiency: T::zero(),
            comfort: T::zero(),
        }
    }
}

fn clamp01<T: Real>(x: T) -> T {
    x.max(T::zero()).min(T::one())
}

/// Scores one simulation run.
pub fn score<T: Real>(
    result: &SimResult<T>,
    spec: &ScenarioSpec<T>,
) -> Result<Scores<T>, MetricsError> {
    if result.trace.is_empty() {
        return Err(MetricsError::EmptyTrace);
    }
    if result.outcome == Outcome::Collision {
        return Ok(Scores::zero());
    }

    let tau_safe = spec.planner.time_headway;
    let safety = match result.min_ttc {
        Some(min_ttc) => clamp01(min_ttc / tau_safe),
        None => T::one(),
    };

    let efficiency = match (result.outcome, result.trip_time) {
        (Outcome::Completed, Some(trip_time)) if trip_time > T::zero() => {
            let t_free = spec.ego.path.total_length() / spec.ego.cruise_speed;
            clamp01(t_free / trip_time)
        }
        _ => T::zero(),
    };

    let accel_rms = rms(result.trace.iter().map(|row| row.accel_cmd));
    let jerk_rms = rms(rate_limited_jerk(
        result.trace.iter().map(|row| row.accel_cmd),
        spec.dt,
    ));
    let comfort = clamp01(
        T::one()
            - T::of(0.5) * (accel_rms / T::of(ACCEL_REF))
            - T::of(0.5) * (jerk_rms / T::of(JERK_REF)),
    );

    Ok(Scores {
        safety,
        efficiency,
        comfort,
    })
}

fn rms<T: Real>(samples: impl Iterator<Item = T>) -> T {
    let mut sum_sq = T::zero();
    let mut n = 0usize;
    for s in samples {
        sum_sq += s * s;
        n += 1;
    }
    if n == 0 {
        T::zero()
    } else {
        (sum_sq / T::of(n as f64)).sqrt()
    }
}

/// First-difference jerk of the commanded acceleration, with the command
/// series rate-limited at ±[`JERK_RATE_CAP`] first.
fn rate_limited_jerk<T: Real>(
    accel: impl Iterator<Item = T>,
    dt: T,
) -> impl Iterator<Item = T> {
    let max_step = T::of(JERK_RATE_CAP) * dt;
    let mut prev: Option<T> = None;
    accel.filter_map(move |cmd| match prev {
        None => {
            prev = Some(cmd);
            None
        }
        Some(limited) => {
            let step = (cmd - limited).max(-max_step).min(max_step);
            prev = Some(limited + step);
            Some(step / dt)
        }
    })
}
