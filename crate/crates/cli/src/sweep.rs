//! Parameter sweeps: address a numeric scenario field by dotted path, run
//! one simulation per value and collect outcome plus scores per row.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::{bail, Context, Result};
use rayon::prelude::*;

use vrusim_core::engine::run;
use vrusim_core::metrics::score;
use vrusim_core::scalar::deg_to_rad;
use vrusim_core::{ScenarioSpec, SimResult};

/// Sets a numeric scenario field addressed by a dotted path such as
/// `v2x.comm_range`, `planner.a_pre` or `vru.0.target_speed`.
pub fn set_param(spec: &mut ScenarioSpec, path: &str, value: f64) -> Result<()> {
    let parts: Vec<&str> = path.split('.').collect();
    let slot: &mut f64 = match parts.as_slice() {
        ["ego", "cruise_speed"] => &mut spec.ego.cruise_speed,
        ["ego", "wheelbase"] => &mut spec.ego.wheelbase,
        ["ego", "body_length"] => &mut spec.ego.body_length,
        ["ego", "body_width"] => &mut spec.ego.body_width,
        ["sensor", "range"] => &mut spec.sensor.range,
        ["sensor", "fov_deg"] => {
            spec.sensor.fov_angle = deg_to_rad(value);
            return Ok(());
        }
        ["v2x", "comm_range"] => &mut spec.v2x.comm_range,
        ["planner", "time_headway"] => &mut spec.planner.time_headway,
        ["planner", "a_pre"] => &mut spec.planner.a_pre,
        ["planner", "a_emergency"] => &mut spec.planner.a_emergency,
        ["planner", "a_cruise_max"] => &mut spec.planner.a_cruise_max,
        ["planner", "k_speed"] => &mut spec.planner.k_speed,
        ["planner", "pass_hysteresis"] => &mut spec.planner.pass_hysteresis,
        ["sim", "dt"] => &mut spec.dt,
        ["sim", "t_max"] => &mut spec.t_max,
        ["vru", index, field] => {
            let i: usize = index
                .parse()
                .with_context(|| format!("bad VRU index in `{path}`"))?;
            let Some(vru) = spec.vrus.get_mut(i) else {
                bail!("unknown parameter path `{path}`: VRU {i} does not exist");
            };
            match *field {
                "target_speed" => &mut vru.target_speed,
                "start_time" => &mut vru.start_time,
                "v_max" => &mut vru.class.v_max,
                "radius" => &mut vru.class.radius,
                "a_max" => &mut vru.class.a_max,
                "mass" => &mut vru.class.mass,
                _ => bail!("unknown parameter path `{path}`"),
            }
        }
        _ => bail!("unknown parameter path `{path}`"),
    };
    *slot = value;
    Ok(())
}

/// Parses an inclusive `start:stop:step` range. An empty range (start beyond
/// stop) yields no values.
pub fn parse_range(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    let [start, stop, step] = parts.as_slice() else {
        bail!("range must be start:stop:step, got `{text}`");
    };
    let start: f64 = start.parse().context("bad range start")?;
    let stop: f64 = stop.parse().context("bad range stop")?;
    let step: f64 = step.parse().context("bad range step")?;
    if !(step > 0.0) {
        bail!("range step must be > 0, got {step}");
    }
    let mut values = Vec::new();
    let mut k = 0usize;
    loop {
        let v = start + step * k as f64;
        if v > stop + 1e-9 {
            break;
        }
        values.push(v);
        k += 1;
    }
    Ok(values)
}

/// One sweep result row.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub value: f64,
    pub outcome: &'static str,
    pub trip_time: Option<f64>,
    pub min_ttc: Option<f64>,
    pub safety: f64,
    pub efficiency: f64,
    pub comfort: f64,
}

fn run_one(base: &ScenarioSpec, param: &str, value: f64) -> Result<SweepRow> {
    let mut spec = base.clone();
    set_param(&mut spec, param, value)?;
    let result: SimResult = run(&spec)?;
    let scores = score(&result, &spec)?;
    Ok(SweepRow {
        value,
        outcome: result.outcome.as_str(),
        trip_time: result.trip_time,
        min_ttc: result.min_ttc,
        safety: scores.safety,
        efficiency: scores.efficiency,
        comfort: scores.comfort,
    })
}

/// Runs the sweep, one simulation per value, in parallel. Row order follows
/// the value order.
pub fn run_sweep(base: &ScenarioSpec, param: &str, values: &[f64]) -> Result<Vec<SweepRow>> {
    // Fail fast on a bad path before spawning workers.
    if let Some(&first) = values.first() {
        set_param(&mut base.clone(), param, first)?;
    }
    values
        .par_iter()
        .map(|&v| run_one(base, param, v))
        .collect()
}

/// Renders sweep rows as CSV text (header plus one line per run).
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("value,outcome,trip_time,min_ttc,safety,efficiency,comfort\n");
    for row in rows {
        let _ = write!(out, "{},{}", row.value, row.outcome);
        match row.trip_time {
            Some(t) => {
                let _ = write!(out, ",{t}");
            }
            None => out.push(','),
        }
        match row.min_ttc {
            Some(t) => {
                let _ = write!(out, ",{t}");
            }
            None => out.push(','),
        }
        let _ = writeln!(out, ",{},{},{}", row.safety, row.efficiency, row.comfort);
    }
    out
}

/// Appends rows to `sweep.csv` in `out_dir`, writing the header first when
/// the file does not exist yet.
pub fn append_sweep_csv(out_dir: &Path, rows: &[SweepRow]) -> Result<()> {
    std::fs::create_dir_all(out_dir)?;
    let path = out_dir.join("sweep.csv");
    let text = sweep_csv(rows);
    if path.exists() {
        let body = text.splitn(2, '\n').nth(1).unwrap_or("").to_string();
        let mut existing = std::fs::read_to_string(&path)?;
        existing.push_str(&body);
        std::fs::write(&path, existing)?;
    } else {
        std::fs::write(&path, text)?;
    }
    Ok(())
}
