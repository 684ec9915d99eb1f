//! `vrusim` — run VRU test scenarios, sweep parameters and render frames.
//!
//! Exit codes for `run`: 0 completed, 2 collision, 3 timeout; 1 on errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use vrusim_cli::output::{summary_line, write_run_artifacts};
use vrusim_cli::render::{nearest_row_index, render_frame};
use vrusim_cli::resolve::resolve_scenario;
use vrusim_cli::sweep::{append_sweep_csv, parse_range, run_sweep};
use vrusim_core::engine::{run, Outcome};
use vrusim_core::metrics::score;
use vrusim_core::scenario::{builtin_scenario, BUILTIN_NAMES};

#[derive(Parser)]
#[command(name = "vrusim", version, about = "Deterministic VRU scenario simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and write trace, events, scores and frames.
    Run(RunArgs),
    /// Run a scenario once per value of a swept numeric parameter.
    Sweep(SweepArgs),
    /// List the built-in scenarios.
    List,
}

#[derive(Args)]
struct RunArgs {
    /// Built-in scenario name or path to a scenario TOML file.
    #[arg(long)]
    scenario: String,
    /// Override the scenario's V2X switch.
    #[arg(long, value_parser = parse_on_off)]
    v2x: Option<bool>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Comma-separated times (s) to render as SVG frames.
    #[arg(long, value_delimiter = ',')]
    frames: Vec<f64>,
}

#[derive(Args)]
struct SweepArgs {
    /// Built-in scenario name or path to a scenario TOML file.
    #[arg(long)]
    scenario: String,
    /// Override the scenario's V2X switch.
    #[arg(long, value_parser = parse_on_off)]
    v2x: Option<bool>,
    /// Dotted path of the swept numeric field, e.g. v2x.comm_range.
    #[arg(long)]
    param: String,
    /// Inclusive range start:stop:step.
    #[arg(long)]
    range: String,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

fn parse_on_off(value: &str) -> Result<bool, String> {
    match value {
        "on" => Ok(true),
        "off" => Ok(false),
        other => Err(format!("expected `on` or `off`, got `{other}`")),
    }
}

fn cmd_run(args: &RunArgs) -> anyhow::Result<ExitCode> {
    let spec = resolve_scenario(&args.scenario, args.v2x)?;
    let result = run(&spec)?;
    let scores = score(&result, &spec)?;
    write_run_artifacts(&args.out, &result, &scores)?;
    for &t in &args.frames {
        let idx = nearest_row_index(spec.dt, result.trace.len(), t);
        let svg = render_frame(&spec, &result.trace[idx]);
        std::fs::write(args.out.join(format!("frame_{t}.svg")), svg)?;
    }
    println!("{}", summary_line(&spec.name, spec.v2x.enabled, &result, &scores));
    Ok(match result.outcome {
        Outcome::Completed => ExitCode::SUCCESS,
        Outcome::Collision => ExitCode::from(2),
        Outcome::Timeout => ExitCode::from(3),
    })
}

fn cmd_sweep(args: &SweepArgs) -> anyhow::Result<ExitCode> {
    let spec = resolve_scenario(&args.scenario, args.v2x)?;
    let values = parse_range(&args.range)?;
    let rows = run_sweep(&spec, &args.param, &values)?;
    append_sweep_csv(&args.out, &rows)?;
    println!(
        "swept {} over {} values -> {}",
        args.param,
        rows.len(),
        args.out.join("sweep.csv").display()
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_list() -> ExitCode {
    for name in BUILTIN_NAMES {
        let spec = builtin_scenario::<f64>(name, true).expect("built-in loads");
        let vru = &spec.vrus[0];
        println!(
            "{name}: ego v={:.1} m/s, vru v={:.1} m/s, sensor {:.0} m/{:.0} deg, ego init ({:.2}, {:.2}), vru init ({:.2}, {:.2})",
            spec.ego.cruise_speed,
            vru.target_speed,
            spec.sensor.range,
            spec.sensor.fov_angle.to_degrees(),
            spec.ego.init_position.x,
            spec.ego.init_position.y,
            vru.init_position.x,
            vru.init_position.y,
        );
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Keep exit code 2 reserved for collision outcomes.
            let _ = err.print();
            return ExitCode::from(if err.use_stderr() { 1 } else { 0 });
        }
    };
    let outcome = match &cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::List => Ok(cmd_list()),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
