//! Top-down SVG rendering of single simulation frames: road band, ego body
//! rectangle, VRU discs, the sensor field-of-view sector and the V2X
//! reception zone.

use std::fmt::Write as _;

use vrusim_core::awareness::v2x_aware;
use vrusim_core::scenario::RoadLayout;
use vrusim_core::{PathSpec, ScenarioSpec, StepRecord, Vec2};

const ROAD_HALF_WIDTH: f64 = 3.5;
const MARGIN: f64 = 8.0;
const PIXELS_PER_METRE: f64 = 8.0;

struct Bounds {
    min_x: f64,
    min_y: f64,
    max_x: f64,
    max_y: f64,
}

impl Bounds {
    fn new() -> Self {
        Self {
            min_x: f64::MAX,
            min_y: f64::MAX,
            max_x: f64::MIN,
            max_y: f64::MIN,
        }
    }

    fn include(&mut self, p: Vec2) {
        self.min_x = self.min_x.min(p.x);
        self.min_y = self.min_y.min(p.y);
        self.max_x = self.max_x.max(p.x);
        self.max_y = self.max_y.max(p.y);
    }

    fn include_path(&mut self, path: &PathSpec) {
        let total = path.total_length();
        let mut s = 0.0;
        while s <= total {
            self.include(path.point_at_clamped(s).0);
            s += 2.0;
        }
        self.include(path.point_at_clamped(total).0);
    }
}

fn sample_path(path: &PathSpec) -> Vec<Vec2> {
    let total = path.total_length();
    let mut pts = Vec::new();
    let mut s = 0.0;
    while s < total {
        pts.push(path.point_at_clamped(s).0);
        s += 1.0;
    }
    pts.push(path.point_at_clamped(total).0);
    pts
}

fn polyline_points(pts: &[Vec2]) -> String {
    let mut out = String::new();
    for (i, p) in pts.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        let _ = write!(out, "{:.2},{:.2}", p.x, p.y);
    }
    out
}

/// Renders one trace row as a standalone SVG document.
pub fn render_frame(spec: &ScenarioSpec, row: &StepRecord) -> String {
    let mut bounds = Bounds::new();
    bounds.include_path(&spec.ego.path);
    for vru in &spec.vrus {
        bounds.include_path(&vru.path);
    }
    bounds.include(row.ego.position);
    if spec.v2x.enabled {
        bounds.include(spec.v2x.rsu_position + Vec2::new(spec.v2x.comm_range, 0.0));
        bounds.include(spec.v2x.rsu_position - Vec2::new(spec.v2x.comm_range, 0.0));
    }
    let min_x = bounds.min_x - MARGIN;
    let max_x = bounds.max_x + MARGIN;
    let min_y = bounds.min_y.min(-ROAD_HALF_WIDTH) - MARGIN;
    let max_y = bounds.max_y.max(ROAD_HALF_WIDTH) + MARGIN;
    let width = max_x - min_x;
    let height = max_y - min_y;

    let mut svg = String::new();
    let _ = write!(
        svg,
        r##"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {width:.1} {height:.1}" width="{:.0}" height="{:.0}">"##,
        width * PIXELS_PER_METRE,
        height * PIXELS_PER_METRE
    );
    svg.push('\n');
    let _ = write!(
        svg,
        r##"<rect x="0" y="0" width="{width:.1}" height="{height:.1}" fill="#f3f4ef"/>"##
    );
    svg.push('\n');
    // World frame: y up, metres.
    let _ = write!(
        svg,
        r##"<g transform="translate({:.2} {:.2}) scale(1 -1)">"##,
        -min_x, max_y
    );
    svg.push('\n');

    // Road surface.
    let _ = write!(
        svg,
        r##"<rect x="{min_x:.1}" y="{:.1}" width="{width:.1}" height="{:.1}" fill="#cfd2d6"/>"##,
        -ROAD_HALF_WIDTH,
        2.0 * ROAD_HALF_WIDTH
    );
    svg.push('\n');
    if spec.road_layout == RoadLayout::Intersection {
        let _ = write!(
            svg,
            r##"<rect x="{:.1}" y="{min_y:.1}" width="{:.1}" height="{height:.1}" fill="#cfd2d6"/>"##,
            -ROAD_HALF_WIDTH,
            2.0 * ROAD_HALF_WIDTH
        );
        svg.push('\n');
        let _ = write!(
            svg,
            r##"<line x1="0" y1="{min_y:.1}" x2="0" y2="{max_y:.1}" stroke="#ffffff" stroke-width="0.15" stroke-dasharray="3 3"/>"##
        );
        svg.push('\n');
    }
    let _ = write!(
        svg,
        r##"<line x1="{min_x:.1}" y1="0" x2="{max_x:.1}" y2="0" stroke="#ffffff" stroke-width="0.15" stroke-dasharray="3 3"/>"##
    );
    svg.push('\n');

    // V2X reception zone and roadside unit.
    if spec.v2x.enabled {
        let rsu = spec.v2x.rsu_position;
        let fill = if v2x_aware(&row.ego, &spec.v2x) {
            "#8fd18f33"
        } else {
            "#8fb7d133"
        };
        let _ = write!(
            svg,
            r##"<circle class="v2x-zone" cx="{:.2}" cy="{:.2}" r="{:.2}" fill="{fill}" stroke="#4f7fa0" stroke-width="0.2" stroke-dasharray="1.5 1.5"/>"##,
            rsu.x, rsu.y, spec.v2x.comm_range
        );
        svg.push('\n');
        let _ = write!(
            svg,
            r##"<rect class="rsu" x="{:.2}" y="{:.2}" width="1.2" height="1.2" fill="#2f5d7c"/>"##,
            rsu.x - 0.6,
            rsu.y - 0.6
        );
        svg.push('\n');
    }

    // Prescribed ego path.
    let _ = write!(
        svg,
        r##"<polyline points="{}" fill="none" stroke="#8a8f98" stroke-width="0.12" stroke-dasharray="0.8 0.8"/>"##,
        polyline_points(&sample_path(&spec.ego.path))
    );
    svg.push('\n');

    // Sensor field of view as a sampled sector wedge.
    {
        let ego = row.ego.position;
        let half = spec.sensor.fov_angle / 2.0;
        let mut d = format!("M {:.2} {:.2}", ego.x, ego.y);
        let steps = 24;
        for k in 0..=steps {
            let angle = row.ego.heading - half + spec.sensor.fov_angle * k as f64 / steps as f64;
            let p = ego + Vec2::new(angle.cos(), angle.sin()) * spec.sensor.range;
            let _ = write!(d, " L {:.2} {:.2}", p.x, p.y);
        }
        d.push_str(" Z");
        let _ = write!(
            svg,
            r##"<path class="fov" d="{d}" fill="#5b9bd533" stroke="#5b9bd5" stroke-width="0.1"/>"##
        );
        svg.push('\n');
    }

    // Ego body rectangle, rear axle at the pose point.
    let _ = write!(
        svg,
        r##"<rect id="ego" x="0" y="{:.2}" width="{:.2}" height="{:.2}" fill="#3a6ea5" stroke="#1d3a57" stroke-width="0.12" transform="translate({:.3} {:.3}) rotate({:.3})"/>"##,
        -spec.ego.body_width / 2.0,
        spec.ego.body_length,
        spec.ego.body_width,
        row.ego.position.x,
        row.ego.position.y,
        row.ego.heading.to_degrees()
    );
    svg.push('\n');

    // VRU discs with a heading tick.
    for (vru, vspec) in row.vrus.iter().zip(&spec.vrus) {
        let color = if vru.departed { "#b9bdb9" } else { "#c0504d" };
        let _ = write!(
            svg,
            r##"<circle class="vru" cx="{:.3}" cy="{:.3}" r="{:.2}" fill="{color}" stroke="#6e2b29" stroke-width="0.1"/>"##,
            vru.position.x, vru.position.y, vspec.class.radius
        );
        svg.push('\n');
        let speed = vru.speed();
        if speed > 0.01 {
            let tip = vru.position + vru.velocity * (vspec.class.radius / speed + 0.5 / speed);
            let _ = write!(
                svg,
                r##"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="#6e2b29" stroke-width="0.12"/>"##,
                vru.position.x, vru.position.y, tip.x, tip.y
            );
            svg.push('\n');
        }
    }

    svg.push_str("</g>\n");
    let _ = write!(
        svg,
        r##"<text x="10" y="20" font-family="sans-serif" font-size="14" fill="#333">{} | t = {:.2} s | mode {} | v = {:.2} m/s</text>"##,
        spec.name,
        row.t,
        row.mode.as_str(),
        row.ego.speed
    );
    svg.push('\n');
    svg.push_str("</svg>\n");
    svg
}

/// Index of the trace row nearest to time `t`.
pub fn nearest_row_index(dt: f64, len: usize, t: f64) -> usize {
    if len == 0 {
        return 0;
    }
    let idx = (t / dt).round();
    (idx.max(0.0) as usize).min(len - 1)
}
