//! Library half of the `vrusim` command-line tool: scenario resolution,
//! trace/event/score serialization, SVG frame rendering and parameter sweeps.

pub mod output;
pub mod render;
pub mod resolve;
pub mod sweep;
