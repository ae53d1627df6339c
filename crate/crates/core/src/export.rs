//! CSV and SVG writers, plus the lumen path reader.
//!
//! Numbers in CSV files carry 12 significant digits; SVG coordinates carry 12
//! decimals. Output depends only on the input values.

use std::fmt::Write as _;

use thiserror::Error;

use crate::chain::{AuditReport, Workspace};
use crate::geom::{Vec2, Vec3};
use crate::lumen::{LumenError, LumenPath, SteerRow};
use crate::profile::JointProfile;
use crate::spin::CoveragePlan;

#[derive(Debug, Error)]
pub enum ExportError {
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("path file row {row}: {message}")]
    Row { row: usize, message: String },
    #[error(transparent)]
    Lumen(#[from] LumenError),
}

/// `%.12g`: 12 significant digits, trailing zeros dropped, exponent form
/// outside `[1e-5, 1e12)`.
pub fn fmt_g(v: f64) -> String {
    const SIG: i32 = 12;
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let sci = format!("{:.*e}", (SIG - 1) as usize, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..SIG).contains(&exp) {
        let decimals = (SIG - 1 - exp).max(0) as usize;
        trim_zeros(format!("{v:.decimals$}"))
    } else {
        let m = trim_zeros(mantissa.to_string());
        format!("{m}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// Fixed 12-decimal coordinate with negative zero folded to zero.
fn coord(v: f64) -> String {
    format!("{:.12}", v + 0.0)
}

fn write_csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String, ExportError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    let bytes = w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("ascii output"))
}

pub fn profile_csv(p: &JointProfile<f64>) -> Result<String, ExportError> {
    let rows = p.theta_samples.iter().zip(&p.branch_l).zip(&p.branch_r).map(|((&t, l), r)| {
        vec![fmt_g(t), fmt_g(l.x), fmt_g(l.y), fmt_g(r.x), fmt_g(r.y)]
    });
    write_csv(&["theta_rad", "pl_x", "pl_y", "pr_x", "pr_y"], rows)
}

pub fn workspace_csv(w: &Workspace<f64>) -> Result<String, ExportError> {
    let rows = w.points.iter().map(|p| {
        vec![fmt_g(p.alpha[0]), fmt_g(p.alpha[1]), fmt_g(p.tip.x), fmt_g(p.tip.y), fmt_g(p.tip.z)]
    });
    write_csv(&["alpha1_rad", "alpha2_rad", "tip_x_mm", "tip_y_mm", "tip_z_mm"], rows)
}

pub fn audit_csv(r: &AuditReport<f64>) -> Result<String, ExportError> {
    let rows = r.rows.iter().map(|row| {
        vec![row.config_id.to_string(), fmt_g(row.length), fmt_g(row.circular_length), fmt_g(row.deviation)]
    });
    write_csv(&["config_id", "length_mm", "circular_length_mm", "deviation_mm"], rows)
}

pub fn trace_csv(rows: &[SteerRow<f64>]) -> Result<String, ExportError> {
    let rows = rows.iter().map(|r| {
        vec![fmt_g(r.depth), fmt_g(r.alpha[0]), fmt_g(r.alpha[1]), fmt_g(r.clearance), r.passable.to_string()]
    });
    write_csv(&["depth_mm", "alpha1_rad", "alpha2_rad", "clearance_mm", "passable"], rows)
}

pub fn schedule_csv(plan: &CoveragePlan<f64>) -> Result<String, ExportError> {
    let rows = plan.waypoints.iter().map(|w| {
        let (cx, cy, a, b) = match &w.footprint {
            Some(f) => (fmt_g(f.center.x), fmt_g(f.center.y), fmt_g(f.semi_major), fmt_g(f.semi_minor)),
            None => (String::new(), String::new(), String::new(), String::new()),
        };
        vec![
            w.id.to_string(),
            fmt_g(w.alpha[0]),
            fmt_g(w.alpha[1]),
            w.steps[0].to_string(),
            w.steps[1].to_string(),
            cx,
            cy,
            a,
            b,
            w.reachable.to_string(),
        ]
    });
    write_csv(
        &["waypoint_id", "alpha1_rad", "alpha2_rad", "steps1", "steps2", "footprint_cx", "footprint_cy", "a_mm", "b_mm", "reachable"],
        rows,
    )
}

pub fn path_csv(p: &LumenPath<f64>) -> Result<String, ExportError> {
    let rows = p.vertices.iter().zip(&p.radii).map(|(v, &r)| vec![fmt_g(v.x), fmt_g(v.y), fmt_g(v.z), fmt_g(r)]);
    write_csv(&["x_mm", "y_mm", "z_mm", "radius_mm"], rows)
}

/// Reads `x_mm,y_mm,z_mm,radius_mm` rows (header required).
pub fn parse_path_csv(text: &str) -> Result<LumenPath<f64>, ExportError> {
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header != ["x_mm", "y_mm", "z_mm", "radius_mm"] {
        return Err(ExportError::Row { row: 0, message: format!("expected header x_mm,y_mm,z_mm,radius_mm, got {}", header.join(",")) });
    }
    let mut vertices = Vec::new();
    let mut radii = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let vals: Result<Vec<f64>, _> = rec.iter().map(str::parse::<f64>).collect();
        let vals = vals.map_err(|e| ExportError::Row { row: i + 1, message: e.to_string() })?;
        if vals.len() != 4 {
            return Err(ExportError::Row { row: i + 1, message: format!("expected 4 fields, got {}", vals.len()) });
        }
        vertices.push(Vec3::new(vals[0], vals[1], vals[2]));
        radii.push(vals[3]);
    }
    Ok(LumenPath::new(vertices, radii)?)
}

fn points_attr(pts: &[Vec2<f64>]) -> String {
    pts.iter().map(|p| format!("{},{}", coord(p.x), coord(p.y))).collect::<Vec<_>>().join(" ")
}

/// Extents `(min, max)` of both contact branches.
pub fn branch_extents(p: &JointProfile<f64>) -> (Vec2<f64>, Vec2<f64>) {
    let mut lo = Vec2::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for q in p.branch_l.iter().chain(&p.branch_r) {
        lo = Vec2::new(lo.x.min(q.x), lo.y.min(q.y));
        hi = Vec2::new(hi.x.max(q.x), hi.y.max(q.y));
    }
    (lo, hi)
}

/// Joint contour drawing in millimetres, `+y` up.
///
/// Holds both contact branches as polylines and, when the contour closes, the
/// closed head contour as a path. The view box is the branch extent.
pub fn profile_svg(p: &JointProfile<f64>) -> String {
    let (lo, hi) = branch_extents(p);
    let (w, h) = (hi.x - lo.x, hi.y - lo.y);
    let d = &p.design;
    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}mm\" height=\"{}mm\" viewBox=\"{} {} {} {}\">",
        coord(w),
        coord(h),
        coord(lo.x),
        coord(-hi.y),
        coord(w),
        coord(h)
    );
    let _ = writeln!(
        s,
        "<!-- joint contour: L={} mm N={} theta_max={} rad sweep={} rad samples={} -->",
        fmt_g(d.half_pitch),
        fmt_g(d.norm_factor),
        fmt_g(d.theta_max),
        fmt_g(p.sweep),
        p.theta_samples.len()
    );
    s.push_str("<g transform=\"scale(1,-1)\" fill=\"none\" stroke-width=\"0.02\">\n");
    if let Some(c) = p.closed_contour() {
        let mut path = String::new();
        for (i, q) in c.iter().enumerate() {
            let _ = write!(path, "{}{},{} ", if i == 0 { 'M' } else { 'L' }, coord(q.x), coord(q.y));
        }
        path.push('Z');
        let _ = writeln!(s, "<path id=\"closed-contour\" stroke=\"black\" d=\"{path}\"/>");
    }
    let _ = writeln!(s, "<polyline id=\"branch-l\" stroke=\"blue\" points=\"{}\"/>", points_attr(&p.branch_l));
    let _ = writeln!(s, "<polyline id=\"branch-r\" stroke=\"red\" points=\"{}\"/>", points_attr(&p.branch_r));
    s.push_str("</g>\n</svg>\n");
    s
}

/// Points of the element with the given `id` (`points` attribute), for re-import.
pub fn svg_polyline_points(svg: &str, id: &str) -> Option<Vec<Vec2<f64>>> {
    let tag_start = svg.find(&format!("id=\"{id}\""))?;
    let rest = &svg[tag_start..];
    let attr = rest.find("points=\"")? + "points=\"".len();
    let end = rest[attr..].find('"')?;
    rest[attr..attr + end]
        .split_whitespace()
        .map(|pair| {
            let (x, y) = pair.split_once(',')?;
            Some(Vec2::new(x.parse().ok()?, y.parse().ok()?))
        })
        .collect()
}

/// View box `(min_x, min_y, width, height)` of an SVG document.
pub fn svg_view_box(svg: &str) -> Option<[f64; 4]> {
    let start = svg.find("viewBox=\"")? + "viewBox=\"".len();
    let end = svg[start..].find('"')?;
    let v: Vec<f64> = svg[start..start + end].split_whitespace().filter_map(|t| t.parse().ok()).collect();
    v.try_into().ok()
}
