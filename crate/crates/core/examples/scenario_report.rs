//! Prints outcome, key events and scores for every built-in scenario.
//!
//! Run with `cargo run -p vrusim-core --example scenario_report`.

use vrusim_core::engine::{run, EventKind, Outcome};
use vrusim_core::metrics::score;
use vrusim_core::scenario::{builtin_scenario, BUILTIN_NAMES};

fn main() {
    for name in BUILTIN_NAMES {
        for v2x in [false, true] {
            let spec = builtin_scenario::<f64>(name, v2x).unwrap();
            let result = run(&spec).unwrap();
            let scores = score(&result, &spec).unwrap();
            let end_t = result.trace.last().map(|r| r.t).unwrap_or(0.0);
            let ttc_argmin = result
                .trace
                .iter()
                .filter(|r| r.ttc.is_some())
                .min_by(|a, b| a.ttc.partial_cmp(&b.ttc).unwrap())
                .map(|r| (r.t, r.ego.position.x, r.ego.speed));
            println!(
                "{name} v2x={v2x}: {} at t={end_t:.2} rows={} min_ttc={:?} argmin={:?}",
                result.outcome.as_str(),
                result.trace.len(),
                result.min_ttc.map(|t| (t * 1000.0).round() / 1000.0),
                ttc_argmin.map(|(t, x, v)| (
                    (t * 100.0).round() / 100.0,
                    (x * 100.0).round() / 100.0,
                    (v * 100.0).round() / 100.0
                )),
            );
            println!(
                "    scores: safety={:.3} efficiency={:.3} comfort={:.3}",
                scores.safety, scores.efficiency, scores.comfort
            );
            let mut mode_changes = 0;
            for e in &result.events {
                match e.kind {
                    EventKind::ModeChange => mode_changes += 1,
                    _ => println!("    t={:6.2}  {:?}: {}", e.t, e.kind, e.detail),
                }
            }
            println!("    mode changes: {mode_changes}");
            if result.outcome == Outcome::Completed {
                let final_rows: Vec<_> = result
                    .trace
                    .iter()
                    .filter(|r| r.t >= end_t - 2.0)
                    .collect();
                let speeds: Vec<f64> = final_rows.iter().map(|r| r.ego.speed).collect();
                let (vmin, vmax) = speeds
                    .iter()
                    .fold((f64::MAX, f64::MIN), |(lo, hi), &v| (lo.min(v), hi.max(v)));
                println!("    final 2 s ego speed in [{vmin:.2}, {vmax:.2}]");
            }
        }
    }
}
