//! Serialization of run artifacts: trace.csv, events.jsonl, scores.json and
//! the one-line console summary.
//!
//! trace.csv columns, in order: t, ego_x, ego_y, ego_heading, ego_speed,
//! accel_cmd, mode, then per-VRU (vru<i>_x, vru<i>_y, vru<i>_vx, vru<i>_vy),
//! then ttc (empty when undefined). Floats print in shortest round-trip
//! form, so two runs of the same scenario produce byte-identical files.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{Context, Result};

use vrusim_core::{Scores, SimResult};

/// Renders the full trace as CSV text.
pub fn trace_csv(result: &SimResult) -> String {
    let n_vrus = result
        .trace
        .first()
        .map(|row| row.vrus.len())
        .unwrap_or(0);
    let mut out = String::new();
    out.push_str("t,ego_x,ego_y,ego_heading,ego_speed,accel_cmd,mode");
    for i in 0..n_vrus {
        let _ = write!(out, ",vru{i}_x,vru{i}_y,vru{i}_vx,vru{i}_vy");
    }
    out.push_str(",ttc\n");

    for row in &result.trace {
        let _ = write!(
            out,
            "{},{},{},{},{},{},{}",
            row.t,
            row.ego.position.x,
            row.ego.position.y,
            row.ego.heading,
            row.ego.speed,
            row.accel_cmd,
            row.mode.as_str()
        );
        for vru in &row.vrus {
            let _ = write!(
                out,
                ",{},{},{},{}",
                vru.position.x, vru.position.y, vru.velocity.x, vru.velocity.y
            );
        }
        match row.ttc {
            Some(ttc) => {
                let _ = write!(out, ",{ttc}");
            }
            None => out.push(','),
        }
        out.push('\n');
    }
    out
}

/// Renders the event list as JSON lines (one object per event).
pub fn events_jsonl(result: &SimResult) -> String {
    let mut out = String::new();
    for event in &result.events {
        out.push_str(&serde_json::to_string(event).expect("event serializes"));
        out.push('\n');
    }
    out
}

/// Renders the score triple as a JSON object.
pub fn scores_json(scores: &Scores) -> String {
    serde_json::to_string(scores).expect("scores serialize")
}

/// One-line human summary of a run.
pub fn summary_line(name: &str, v2x_enabled: bool, result: &SimResult, scores: &Scores) -> String {
    let end = result.trace.last().map(|r| r.t).unwrap_or(0.0);
    format!(
        "{name} [v2x {}]: {} at t={end:.2} s | safety {:.3} efficiency {:.3} comfort {:.3}",
        if v2x_enabled { "on" } else { "off" },
        result.outcome.as_str(),
        scores.safety,
        scores.efficiency,
        scores.comfort
    )
}

/// Writes all standard run artifacts into `out_dir`.
pub fn write_run_artifacts(
    out_dir: &Path,
    result: &SimResult,
    scores: &Scores,
) -> Result<()> {
    fs::create_dir_all(out_dir)
        .with_context(|| format!("cannot create output directory {}", out_dir.display()))?;
    fs::write(out_dir.join("trace.csv"), trace_csv(result)).context("writing trace.csv")?;
    fs::write(out_dir.join("events.jsonl"), events_jsonl(result))
        .context("writing events.jsonl")?;
    fs::write(out_dir.join("scores.json"), scores_json(scores)).context("writing scores.json")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use vrusim_core::engine::run;
    use vrusim_core::metrics::score;
    use vrusim_core::scenario::builtin_scenario;

    #[test]
    fn csv_row_count_matches_trace() {
        let spec = builtin_scenario("ped_crossing", false).unwrap();
        let result = run(&spec).unwrap();
        let csv = trace_csv(&result);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), result.trace.len() + 1);
        assert!(lines[0].starts_with("t,ego_x,ego_y"));
        assert!(lines[0].ends_with(",ttc"));
    }

    #[test]
    fn csv_timestamps_step_by_dt() {
        let spec = builtin_scenario("ped_crossing", false).unwrap();
        let result = run(&spec).unwrap();
        let csv = trace_csv(&result);
        let mut prev: Option<f64> = None;
        for line in csv.lines().skip(1) {
            let t: f64 = line.split(',').next().unwrap().parse().unwrap();
            if let Some(p) = prev {
                assert!((t - p - spec.dt).abs() < 1e-9);
            }
            prev = Some(t);
        }
    }

    #[test]
    fn scores_round_trip_exactly() {
        let spec = builtin_scenario("ped_crossing", true).unwrap();
        let result = run(&spec).unwrap();
        let scores = score(&result, &spec).unwrap();
        let json = scores_json(&scores);
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        for (field, expected) in [
            ("safety", scores.safety),
            ("efficiency", scores.efficiency),
            ("comfort", scores.comfort),
        ] {
            let got = value[field].as_f64().unwrap();
            assert!((got - expected).abs() <= 1e-9, "{field}: {got} vs {expected}");
        }
    }

    #[test]
    fn events_are_one_json_object_per_line() {
        let spec = builtin_scenario("ped_crossing", true).unwrap();
        let result = run(&spec).unwrap();
        let jsonl = events_jsonl(&result);
        let mut count = 0;
        for line in jsonl.lines() {
            let value: serde_json::Value = serde_json::from_str(line).unwrap();
            assert!(value["t"].is_number());
            assert!(value["kind"].is_string());
            count += 1;
        }
        assert_eq!(count, result.events.len());
        assert!(count > 0);
    }
}
