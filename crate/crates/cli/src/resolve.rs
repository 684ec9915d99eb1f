//! Turns a `--scenario` argument into a validated scenario: built-in names
//! first, then file paths.

use std::path::Path;

use anyhow::{Context, Result};

use vrusim_core::scenario::{builtin_scenario, load_scenario, BUILTIN_NAMES};
use vrusim_core::ScenarioSpec;

/// Resolves a scenario identifier (built-in name or TOML file path) and
/// applies an optional V2X override.
pub fn resolve_scenario(ident: &str, v2x_override: Option<bool>) -> Result<ScenarioSpec> {
    let mut spec = if BUILTIN_NAMES.contains(&ident) {
        builtin_scenario(ident, true)?
    } else {
        let text = std::fs::read_to_string(Path::new(ident))
            .with_context(|| format!("cannot read scenario file `{ident}`"))?;
        load_scenario(&text).with_context(|| format!("invalid scenario file `{ident}`"))?
    };
    if let Some(enabled) = v2x_override {
        spec.v2x.enabled = enabled;
    }
    Ok(spec)
}
