//! JSON spec document driving every command.
//!
//! Lengths are millimetres. Angles are radians, or degrees when the key carries
//! a `_deg` suffix; a key and its `_deg` twin may not both appear. Missing keys
//! take the defaults of the bundled document. Unknown keys are rejected, and
//! loading reports every violation found, not just the first.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::chain::ManipulatorSpec;
use crate::profile::{find_critical_n, JointDesign, ProfileError};
use crate::spin::SpinParams;

/// Bundled default document.
pub const DEFAULT_SPEC_JSON: &str = include_str!("../data/default_spec.json");

pub const SPEC_VERSION: u64 = 1;

/// Bisection tolerance used when `N` is `"critical"`.
pub const CRITICAL_N_TOLERANCE: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// Dotted path to the offending field, e.g. `joint.N`.
    pub path: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.path, self.message)
    }
}

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("malformed JSON: {0}")]
    Parse(String),
    #[error("{} violation(s):\n{}", .0.len(), .0.iter().map(|v| format!("  {v}")).collect::<Vec<_>>().join("\n"))]
    Invalid(Vec<Violation>),
    #[error(transparent)]
    Profile(#[from] ProfileError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormFactor {
    Value(f64),
    /// Resolved with the critical-N search at load time of the design.
    Critical,
}

#[derive(Debug, Clone, PartialEq)]
pub struct JointBlock {
    pub half_pitch: f64,
    pub norm_factor: NormFactor,
    pub theta_max: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ManipulatorBlock {
    pub segment_count: usize,
    pub section1_joints: Vec<usize>,
    pub section2_joints: Vec<usize>,
    pub outer_diameter: f64,
    pub lumen_diameter: f64,
    pub tendon_radius: f64,
    pub rigid_extra: f64,
    pub motor_step: f64,
    pub wheel_radius: f64,
    pub section_limit: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpinBlock {
    pub half_angle: f64,
    pub range: f64,
    pub voltage_kv: f64,
    pub feed_ml_per_h: f64,
    pub solution: String,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnvironmentBlock {
    /// Lumen path CSV, relative to the spec file. `None` selects the demo airway.
    pub path: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpecFile {
    pub version: u64,
    pub joint: JointBlock,
    pub manipulator: ManipulatorBlock,
    pub spin: SpinBlock,
    pub environment: EnvironmentBlock,
}

impl Default for SpecFile {
    fn default() -> Self {
        parse_spec(DEFAULT_SPEC_JSON).expect("bundled spec is valid")
    }
}

/// Reads and validates a spec file; `"default"` selects the bundled document.
pub fn load_spec(path: &str) -> Result<SpecFile, SpecError> {
    if path == "default" {
        return Ok(SpecFile::default());
    }
    let text = std::fs::read_to_string(Path::new(path))
        .map_err(|e| SpecError::Io { path: path.to_string(), message: e.to_string() })?;
    parse_spec(&text)
}

pub fn parse_spec(text: &str) -> Result<SpecFile, SpecError> {
    let root: Value = serde_json::from_str(text).map_err(|e| SpecError::Parse(e.to_string()))?;
    let mut errs = Vec::new();
    let spec = read_document(&root, &mut errs);
    if errs.is_empty() {
        Ok(spec.expect("document read without violations"))
    } else {
        Err(SpecError::Invalid(errs))
    }
}

struct Block<'a> {
    path: &'static str,
    map: Option<&'a Map<String, Value>>,
    seen: BTreeSet<&'static str>,
}

impl<'a> Block<'a> {
    fn new(root: &'a Map<String, Value>, path: &'static str, errs: &mut Vec<Violation>) -> Self {
        let map = match root.get(path) {
            None => None,
            Some(Value::Object(m)) => Some(m),
            Some(_) => {
                errs.push(violation(path, "must be an object"));
                None
            }
        };
        Self { path, map, seen: BTreeSet::new() }
    }

    fn field(&self, key: &str) -> String {
        format!("{}.{}", self.path, key)
    }

    fn raw(&mut self, key: &'static str) -> Option<&'a Value> {
        self.seen.insert(key);
        self.map.and_then(|m| m.get(key))
    }

    fn number(&mut self, key: &'static str, default: f64, errs: &mut Vec<Violation>) -> f64 {
        match self.raw(key) {
            None => default,
            Some(v) => v.as_f64().unwrap_or_else(|| {
                errs.push(violation(&self.field(key), "must be a number"));
                default
            }),
        }
    }

    /// Angle given either in radians under `key` or in degrees under `deg_key`.
    fn angle(&mut self, key: &'static str, deg_key: &'static str, default: f64, errs: &mut Vec<Violation>) -> f64 {
        let rad = self.raw(key).is_some();
        let deg = self.raw(deg_key).is_some();
        if rad && deg {
            errs.push(violation(&self.field(key), &format!("mutually exclusive with {}", self.field(deg_key))));
            return default;
        }
        if deg {
            self.number(deg_key, default.to_degrees(), errs).to_radians()
        } else {
            self.number(key, default, errs)
        }
    }

    fn count(&mut self, key: &'static str, default: usize, errs: &mut Vec<Violation>) -> usize {
        match self.raw(key) {
            None => default,
            Some(v) => v.as_u64().map(|n| n as usize).unwrap_or_else(|| {
                errs.push(violation(&self.field(key), "must be a non-negative integer"));
                default
            }),
        }
    }

    fn indices(&mut self, key: &'static str, default: &[usize], errs: &mut Vec<Violation>) -> Vec<usize> {
        match self.raw(key) {
            None => default.to_vec(),
            Some(Value::Array(items)) => {
                let parsed: Option<Vec<usize>> = items.iter().map(|i| i.as_u64().map(|n| n as usize)).collect();
                parsed.unwrap_or_else(|| {
                    errs.push(violation(&self.field(key), "must hold non-negative integers"));
                    default.to_vec()
                })
            }
            Some(_) => {
                errs.push(violation(&self.field(key), "must be an array"));
                default.to_vec()
            }
        }
    }

    fn text(&mut self, key: &'static str, default: &str, errs: &mut Vec<Violation>) -> String {
        match self.raw(key) {
            None => default.to_string(),
            Some(Value::String(s)) => s.clone(),
            Some(_) => {
                errs.push(violation(&self.field(key), "must be a string"));
                default.to_string()
            }
        }
    }

    fn finish(self, errs: &mut Vec<Violation>) {
        if let Some(m) = self.map {
            for key in m.keys() {
                if !self.seen.contains(key.as_str()) {
                    errs.push(violation(&self.field(key), "unknown key"));
                }
            }
        }
    }
}

fn violation(path: &str, message: &str) -> Violation {
    Violation { path: path.to_string(), message: message.to_string() }
}

const BLOCKS: [&str; 5] = ["version", "joint", "manipulator", "spin", "environment"];

fn read_document(root: &Value, errs: &mut Vec<Violation>) -> Option<SpecFile> {
    let Value::Object(root) = root else {
        errs.push(violation("$", "document must be an object"));
        return None;
    };
    for key in root.keys() {
        if !BLOCKS.contains(&key.as_str()) {
            errs.push(violation(key, "unknown key"));
        }
    }
    let version = match root.get("version") {
        Some(v) => match v.as_u64() {
            Some(SPEC_VERSION) => SPEC_VERSION,
            _ => {
                errs.push(violation("version", &format!("must be {SPEC_VERSION}")));
                SPEC_VERSION
            }
        },
        None => {
            errs.push(violation("version", "is required"));
            SPEC_VERSION
        }
    };

    let joint = read_joint(root, errs);
    let manipulator = read_manipulator(root, errs);
    let spin = read_spin(root, errs);

    let mut env = Block::new(root, "environment", errs);
    let path = match env.raw("path") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(s.clone()),
        Some(_) => {
            errs.push(violation("environment.path", "must be a string or null"));
            None
        }
    };
    env.finish(errs);

    let doc = SpecFile { version, joint, manipulator, spin, environment: EnvironmentBlock { path } };
    if errs.is_empty() {
        // cross-field rules, once every field is individually sound
        if let Err(e) = doc.manipulator_with(JointDesign { half_pitch: doc.joint.half_pitch, norm_factor: 1.0, theta_max: doc.joint.theta_max })
            .validate()
        {
            errs.push(violation("manipulator", &e.to_string()));
        }
    }
    Some(doc)
}

fn read_joint(root: &Map<String, Value>, errs: &mut Vec<Violation>) -> JointBlock {
    let mut b = Block::new(root, "joint", errs);
    let half_pitch = b.number("L", 3.5, errs);
    if !(half_pitch > 0.0 && half_pitch.is_finite()) {
        errs.push(violation("joint.L", "must be positive"));
    }
    let has_n = b.raw("N").is_some();
    let critical_flag = match b.raw("critical") {
        None => None,
        Some(Value::Bool(f)) => Some(*f),
        Some(_) => {
            errs.push(violation("joint.critical", "must be a boolean"));
            None
        }
    };
    let norm_factor = match b.raw("N") {
        None => NormFactor::Value(0.6),
        Some(Value::String(s)) if s == "critical" => NormFactor::Critical,
        Some(v) => match v.as_f64() {
            Some(n) => {
                if !(n > 0.0 && n < 2.0) {
                    errs.push(violation("joint.N", "out of (0,2)"));
                }
                NormFactor::Value(n)
            }
            None => {
                errs.push(violation("joint.N", "must be a number or \"critical\""));
                NormFactor::Value(0.6)
            }
        },
    };
    let norm_factor = match (has_n, critical_flag) {
        (true, Some(_)) => {
            errs.push(violation("joint.N", "and joint.critical are mutually exclusive"));
            norm_factor
        }
        (false, Some(true)) => NormFactor::Critical,
        _ => norm_factor,
    };
    let theta_max = b.angle("theta_max", "theta_max_deg", std::f64::consts::FRAC_PI_4, errs);
    if !(theta_max > 0.0 && theta_max <= std::f64::consts::FRAC_PI_2) {
        errs.push(violation("joint.theta_max", "out of (0, pi/2]"));
    }
    b.finish(errs);
    JointBlock { half_pitch, norm_factor, theta_max }
}

fn read_manipulator(root: &Map<String, Value>, errs: &mut Vec<Violation>) -> ManipulatorBlock {
    let d = ManipulatorSpec::<f64>::table_default();
    let mut b = Block::new(root, "manipulator", errs);
    let block = ManipulatorBlock {
        segment_count: b.count("segment_count", d.segment_count, errs),
        section1_joints: b.indices("section1_joints", &d.section1_joints, errs),
        section2_joints: b.indices("section2_joints", &d.section2_joints, errs),
        outer_diameter: b.number("outer_diameter", d.outer_diameter, errs),
        lumen_diameter: b.number("lumen_diameter", d.lumen_diameter, errs),
        tendon_radius: b.number("tendon_radius", d.tendon_radius, errs),
        rigid_extra: b.number("rigid_extra", d.rigid_extra, errs),
        motor_step: b.angle("motor_step", "motor_step_deg", d.motor_step, errs),
        wheel_radius: b.number("wheel_radius", d.wheel_radius, errs),
        section_limit: b.angle("section_limit", "section_limit_deg", d.section_limit, errs),
    };
    for (key, v) in [
        ("outer_diameter", block.outer_diameter),
        ("lumen_diameter", block.lumen_diameter),
        ("tendon_radius", block.tendon_radius),
        ("motor_step", block.motor_step),
        ("wheel_radius", block.wheel_radius),
        ("section_limit", block.section_limit),
    ] {
        if !(v > 0.0 && v.is_finite()) {
            errs.push(violation(&format!("manipulator.{key}"), "must be positive"));
        }
    }
    if !(block.rigid_extra >= 0.0 && block.rigid_extra.is_finite()) {
        errs.push(violation("manipulator.rigid_extra", "must be non-negative"));
    }
    b.finish(errs);
    block
}

fn read_spin(root: &Map<String, Value>, errs: &mut Vec<Violation>) -> SpinBlock {
    let d = SpinParams::<f64>::default();
    let mut b = Block::new(root, "spin", errs);
    let block = SpinBlock {
        half_angle: b.angle("half_angle", "half_angle_deg", 5f64.to_radians(), errs),
        range: b.number("range", 120.0, errs),
        voltage_kv: b.number("voltage_kv", d.voltage_kv, errs),
        feed_ml_per_h: b.number("feed_ml_per_h", d.feed_ml_per_h, errs),
        solution: b.text("solution", &d.solution, errs),
        distance: b.number("distance", d.distance_mm, errs),
    };
    if !(block.half_angle > 0.0 && block.half_angle < std::f64::consts::FRAC_PI_2) {
        errs.push(violation("spin.half_angle", "out of (0, pi/2)"));
    }
    for (key, v) in [
        ("range", block.range),
        ("voltage_kv", block.voltage_kv),
        ("feed_ml_per_h", block.feed_ml_per_h),
        ("distance", block.distance),
    ] {
        if !(v > 0.0 && v.is_finite()) {
            errs.push(violation(&format!("spin.{key}"), "must be positive"));
        }
    }
    b.finish(errs);
    block
}

impl SpecFile {
    /// Joint design, running the critical-N search when `N` is `"critical"`.
    pub fn joint_design(&self) -> Result<JointDesign<f64>, SpecError> {
        let j = &self.joint;
        let n = match j.norm_factor {
            NormFactor::Value(n) => n,
            NormFactor::Critical => find_critical_n(j.half_pitch, j.theta_max, CRITICAL_N_TOLERANCE)?.value,
        };
        Ok(JointDesign::new(j.half_pitch, n, j.theta_max)?)
    }

    pub fn manipulator_spec(&self) -> Result<ManipulatorSpec<f64>, SpecError> {
        Ok(self.manipulator_with(self.joint_design()?))
    }

    fn manipulator_with(&self, design: JointDesign<f64>) -> ManipulatorSpec<f64> {
        let m = &self.manipulator;
        ManipulatorSpec {
            segment_count: m.segment_count,
            section1_joints: m.section1_joints.clone(),
            section2_joints: m.section2_joints.clone(),
            joint_design: design,
            outer_diameter: m.outer_diameter,
            lumen_diameter: m.lumen_diameter,
            tendon_radius: m.tendon_radius,
            rigid_extra: m.rigid_extra,
            motor_step: m.motor_step,
            wheel_radius: m.wheel_radius,
            section_limit: m.section_limit,
        }
    }

    pub fn spin_params(&self) -> SpinParams<f64> {
        SpinParams {
            voltage_kv: self.spin.voltage_kv,
            feed_ml_per_h: self.spin.feed_ml_per_h,
            solution: self.spin.solution.clone(),
            distance_mm: self.spin.distance,
        }
    }

    /// Canonical form: every key spelled out, angles in radians.
    pub fn to_value(&self) -> Value {
        let j = &self.joint;
        let m = &self.manipulator;
        let s = &self.spin;
        let n = match j.norm_factor {
            NormFactor::Value(n) => json!(n),
            NormFactor::Critical => json!("critical"),
        };
        json!({
            "version": self.version,
            "joint": { "L": j.half_pitch, "N": n, "theta_max": j.theta_max },
            "manipulator": {
                "segment_count": m.segment_count,
                "section1_joints": m.section1_joints,
                "section2_joints": m.section2_joints,
                "outer_diameter": m.outer_diameter,
                "lumen_diameter": m.lumen_diameter,
                "tendon_radius": m.tendon_radius,
                "rigid_extra": m.rigid_extra,
                "motor_step": m.motor_step,
                "wheel_radius": m.wheel_radius,
                "section_limit": m.section_limit,
            },
            "spin": {
                "half_angle": s.half_angle,
                "range": s.range,
                "voltage_kv": s.voltage_kv,
                "feed_ml_per_h": s.feed_ml_per_h,
                "solution": s.solution,
                "distance": s.distance,
            },
            "environment": { "path": self.environment.path },
        })
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("plain JSON values");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn violations(text: &str) -> Vec<String> {
        match parse_spec(text) {
            Err(SpecError::Invalid(v)) => v.iter().map(|v| v.to_string()).collect(),
            other => panic!("expected violations, got {other:?}"),
        }
    }

    #[test]
    fn default_loads_clean() {
        let s = SpecFile::default();
        assert_eq!(s.manipulator.segment_count, 13);
        assert_eq!(s.joint.norm_factor, NormFactor::Value(0.6));
        assert_eq!(s.joint.theta_max, std::f64::consts::FRAC_PI_4);
        let m = s.manipulator_spec().unwrap();
        assert_eq!(m, ManipulatorSpec::table_default());
    }

    #[test]
    fn n_out_of_range() {
        let v = violations(r#"{"version": 1, "joint": {"N": 2.5}}"#);
        assert_eq!(v, vec!["joint.N out of (0,2)"]);
    }

    #[test]
    fn n_and_critical_conflict() {
        let v = violations(r#"{"version": 1, "joint": {"N": 0.6, "critical": true}}"#);
        assert!(v.iter().any(|m| m.contains("mutually exclusive")), "{v:?}");
    }

    #[test]
    fn every_violation_is_reported() {
        let v = violations(
            r#"{"version": 2, "joint": {"L": -1, "theta_max": 0.5, "theta_max_deg": 20},
                "manipulator": {"tendon_radius": "x", "colour": 3}, "extra": {}}"#,
        );
        for needle in ["version must be 1", "joint.L must be positive", "mutually exclusive", "manipulator.tendon_radius must be a number", "manipulator.colour unknown key", "extra unknown key"] {
            assert!(v.iter().any(|m| m.contains(needle)), "missing {needle:?} in {v:?}");
        }
    }

    #[test]
    fn cross_field_rules() {
        let v = violations(r#"{"version": 1, "manipulator": {"section2_joints": [5, 6]}}"#);
        assert_eq!(v.len(), 1);
        assert!(v[0].starts_with("manipulator "));
    }

    #[test]
    fn critical_keyword_resolves() {
        let s = parse_spec(r#"{"version": 1, "joint": {"N": "critical"}}"#).unwrap();
        assert_eq!(s.joint.norm_factor, NormFactor::Critical);
        let d = s.joint_design().unwrap();
        assert!((d.norm_factor - 0.4196).abs() < 1e-3);
        let flag = parse_spec(r#"{"version": 1, "joint": {"critical": true}}"#).unwrap();
        assert_eq!(flag.joint.norm_factor, NormFactor::Critical);
    }

    #[test]
    fn round_trip_is_identical() {
        let a = SpecFile::default();
        let text = a.to_json_string();
        let b = parse_spec(&text).unwrap();
        assert_eq!(a, b);
        assert_eq!(text, b.to_json_string());
    }

    #[test]
    fn unreadable_file_is_io() {
        assert!(matches!(load_spec("/nonexistent/spec.json"), Err(SpecError::Io { .. })));
        assert!(matches!(parse_spec("{"), Err(SpecError::Parse(_))));
    }
}
