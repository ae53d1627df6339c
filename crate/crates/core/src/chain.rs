//! Two-section manipulator: joint composition, tendon routing and actuation.
//!
//! The base frame has `+z` along the straight manipulator. Section 1 bends in
//! the y–z plane (positive angle toward `+y`, "up"), section 2 in the x–z
//! plane (positive angle toward `+x`, "right").

use serde::Serialize;
use thiserror::Error;

use crate::geom::{Pose3, Rot3, Vec3};
use crate::profile::{self, circular_baseline, JointDesign, ProfileError};
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChainError {
    #[error("config has {got} joint angles, manipulator has {expected} joints")]
    SizeMismatch { expected: usize, got: usize },
    #[error("joint {index} angle {angle} rad exceeds theta_max {limit} rad")]
    JointLimit { index: usize, angle: f64, limit: f64 },
    #[error("section {section} angle {angle} rad outside the section limit +/-{limit} rad")]
    SectionLimit { section: usize, angle: f64, limit: f64 },
    #[error("invalid manipulator: {0}")]
    InvalidSpec(String),
    #[error("tendon model is not monotone on section {0}")]
    NonMonotone(usize),
    #[error(transparent)]
    Profile(#[from] ProfileError),
}

/// Bending plane of a section, named by its positive direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BendPlane {
    /// y–z plane, positive toward `+y`.
    UpDown,
    /// x–z plane, positive toward `+x`.
    LeftRight,
}

impl BendPlane {
    /// Unit vector of the positive bending direction.
    pub fn positive<T: Scalar>(self) -> Vec3<T> {
        match self {
            BendPlane::UpDown => Vec3::unit_y(),
            BendPlane::LeftRight => Vec3::unit_x(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ManipulatorSpec<T> {
    pub segment_count: usize,
    pub section1_joints: Vec<usize>,
    pub section2_joints: Vec<usize>,
    pub joint_design: JointDesign<T>,
    /// mm
    pub outer_diameter: T,
    /// mm
    pub lumen_diameter: T,
    /// Radial offset of the tendon guide holes, mm.
    pub tendon_radius: T,
    /// Rigid length appended beyond the last segment origin, mm.
    pub rigid_extra: T,
    /// Motor step, rad.
    pub motor_step: T,
    /// Tendon wheel radius, mm.
    pub wheel_radius: T,
    /// Symmetric limit on each section angle, rad.
    pub section_limit: T,
}

impl<T: Scalar> ManipulatorSpec<T> {
    /// Thirteen segments, six joints per section.
    pub fn table_default() -> Self {
        let design = JointDesign::new(T::lit(3.5), T::lit(0.6), T::FRAC_PI_4()).expect("default joint design");
        Self {
            segment_count: 13,
            section1_joints: (0..6).collect(),
            section2_joints: (6..12).collect(),
            joint_design: design,
            outer_diameter: T::lit(5.0),
            lumen_diameter: T::lit(1.2),
            tendon_radius: T::lit(1.75),
            rigid_extra: T::lit(3.0),
            motor_step: T::lit(0.4).to_radians(),
            // one step pulls 0.01 mm of tendon
            wheel_radius: T::lit(0.01) / T::lit(0.4).to_radians(),
            section_limit: T::lit(30.0).to_radians(),
        }
    }

    pub fn joint_count(&self) -> usize {
        self.segment_count.saturating_sub(1)
    }

    pub fn section_joints(&self, section: usize) -> &[usize] {
        if section == 0 {
            &self.section1_joints
        } else {
            &self.section2_joints
        }
    }

    pub fn section_plane(section: usize) -> BendPlane {
        if section == 0 {
            BendPlane::UpDown
        } else {
            BendPlane::LeftRight
        }
    }

    /// Plane of the joint at `index`.
    pub fn joint_plane(&self, index: usize) -> BendPlane {
        if self.section1_joints.contains(&index) {
            BendPlane::UpDown
        } else {
            BendPlane::LeftRight
        }
    }

    /// Straight origin-to-tip length, mm.
    pub fn straight_length(&self) -> T {
        T::lit(self.joint_count() as f64) * self.joint_design.span() + self.rigid_extra
    }

    /// Tendon travel per motor step, mm.
    pub fn step_travel(&self) -> T {
        self.motor_step * self.wheel_radius
    }

    pub fn validate(&self) -> Result<(), ChainError> {
        let bad = |m: String| Err(ChainError::InvalidSpec(m));
        if self.segment_count < 2 {
            return bad(format!("segment_count must be at least 2, got {}", self.segment_count));
        }
        let n = self.joint_count();
        for (name, set) in [("section1_joints", &self.section1_joints), ("section2_joints", &self.section2_joints)] {
            if set.is_empty() {
                return bad(format!("{name} is empty"));
            }
            if set.windows(2).any(|w| w[0] >= w[1]) {
                return bad(format!("{name} must be strictly increasing"));
            }
            if let Some(&j) = set.iter().find(|&&j| j >= n) {
                return bad(format!("{name} references joint {j}, only {n} joints exist"));
            }
        }
        if self.section1_joints.iter().any(|j| self.section2_joints.contains(j)) {
            return bad("section joint sets overlap".into());
        }
        if self.section1_joints.len() + self.section2_joints.len() != n {
            return bad(format!("sections must cover all {n} joints"));
        }
        if !(self.outer_diameter > T::zero()) {
            return bad("outer_diameter must be positive".into());
        }
        if !(self.lumen_diameter > T::zero() && self.lumen_diameter < self.outer_diameter) {
            return bad("lumen_diameter must lie in (0, outer_diameter)".into());
        }
        if !(self.tendon_radius > T::zero() && self.tendon_radius < self.outer_diameter / T::lit(2.0)) {
            return bad("tendon_radius must lie in (0, outer_diameter/2)".into());
        }
        if !(self.rigid_extra >= T::zero()) {
            return bad("rigid_extra must be non-negative".into());
        }
        if !(self.motor_step > T::zero() && self.wheel_radius > T::zero()) {
            return bad("motor_step and wheel_radius must be positive".into());
        }
        if !(self.section_limit > T::zero()) {
            return bad("section_limit must be positive".into());
        }
        Ok(())
    }
}

/// Per-joint deflections, rad.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfigState<T> {
    pub joint_angles: Vec<T>,
}

impl<T: Scalar> ConfigState<T> {
    pub fn straight(spec: &ManipulatorSpec<T>) -> Self {
        Self { joint_angles: vec![T::zero(); spec.joint_count()] }
    }

    /// Spreads each section angle evenly over that section's joints.
    pub fn from_sections(spec: &ManipulatorSpec<T>, alpha: [T; 2]) -> Self {
        let mut c = Self::straight(spec);
        for (s, &a) in alpha.iter().enumerate() {
            let joints = spec.section_joints(s);
            let per = a / T::lit(joints.len() as f64);
            for &j in joints {
                c.joint_angles[j] = per;
            }
        }
        c
    }

    pub fn section_angles(&self, spec: &ManipulatorSpec<T>) -> [T; 2] {
        let sum = |s: usize| spec.section_joints(s).iter().fold(T::zero(), |acc, &j| acc + self.joint_angles[j]);
        [sum(0), sum(1)]
    }

    pub fn validate(&self, spec: &ManipulatorSpec<T>) -> Result<(), ChainError> {
        if self.joint_angles.len() != spec.joint_count() {
            return Err(ChainError::SizeMismatch { expected: spec.joint_count(), got: self.joint_angles.len() });
        }
        let limit = spec.joint_design.theta_max;
        for (index, &a) in self.joint_angles.iter().enumerate() {
            if !(a.abs() <= limit) {
                return Err(ChainError::JointLimit { index, angle: a.to_f64_lossy(), limit: limit.to_f64_lossy() });
            }
        }
        Ok(())
    }
}

/// Relative pose of the upper segment frame across one joint.
pub fn joint_transform<T: Scalar>(half_pitch: T, plane: BendPlane, theta: T) -> Pose3<T> {
    let planar = profile::upper_pose_unchecked(half_pitch, theta);
    let z = Vec3::unit_z();
    // planar x runs opposite the positive bending direction
    let lateral = -plane.positive::<T>();
    let axis = lateral.cross(z);
    let trans = lateral.scale(planar.position.x) + z.scale(planar.position.y);
    Pose3::new(Rot3::from_axis_angle(axis, theta), trans)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForwardKinematics<T> {
    /// One pose per segment origin, base segment first.
    pub segment_poses: Vec<Pose3<T>>,
    pub tip: Pose3<T>,
    /// Centerline arc length from the base origin to the tip, mm.
    pub centerline_length: T,
}

pub fn forward_kinematics<T: Scalar>(
    spec: &ManipulatorSpec<T>,
    config: &ConfigState<T>,
) -> Result<ForwardKinematics<T>, ChainError> {
    config.validate(spec)?;
    let design = &spec.joint_design;
    let mut poses = Vec::with_capacity(spec.segment_count);
    let mut pose = Pose3::identity();
    poses.push(pose);
    let mut length = T::zero();
    for (j, &theta) in config.joint_angles.iter().enumerate() {
        pose = pose.compose(&joint_transform(design.half_pitch, spec.joint_plane(j), theta));
        poses.push(pose);
        length = length + profile::centerline_span(design, theta)?;
    }
    let tip = pose.compose(&Pose3::from_translation(Vec3::unit_z().scale(spec.rigid_extra)));
    Ok(ForwardKinematics { segment_poses: poses, tip, centerline_length: length + spec.rigid_extra })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Tendon {
    Up,
    Down,
    Left,
    Right,
}

impl Tendon {
    pub const ALL: [Tendon; 4] = [Tendon::Up, Tendon::Down, Tendon::Left, Tendon::Right];

    pub fn section(self) -> usize {
        match self {
            Tendon::Up | Tendon::Down => 0,
            Tendon::Left | Tendon::Right => 1,
        }
    }

    /// Guide-hole direction in every segment frame.
    pub fn hole_direction<T: Scalar>(self) -> Vec3<T> {
        match self {
            Tendon::Up => Vec3::unit_y(),
            Tendon::Down => -Vec3::unit_y(),
            Tendon::Right => Vec3::unit_x(),
            Tendon::Left => -Vec3::unit_x(),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Tendon::Up => "up",
            Tendon::Down => "down",
            Tendon::Left => "left",
            Tendon::Right => "right",
        }
    }
}

/// Path lengths and displacements from straight, indexed like [`Tendon::ALL`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TendonState<T> {
    pub lengths: [T; 4],
    pub displacements: [T; 4],
}

impl<T: Scalar> TendonState<T> {
    pub fn length(&self, t: Tendon) -> T {
        self.lengths[t as usize]
    }

    pub fn displacement(&self, t: Tendon) -> T {
        self.displacements[t as usize]
    }
}

/// Last segment a section's tendons are anchored to.
fn anchor_segment<T: Scalar>(spec: &ManipulatorSpec<T>, section: usize) -> usize {
    spec.section_joints(section).last().map_or(0, |&j| j + 1)
}

fn path_length<T: Scalar>(spec: &ManipulatorSpec<T>, poses: &[Pose3<T>], tendon: Tendon) -> T {
    let offset = tendon.hole_direction::<T>().scale(spec.tendon_radius);
    let end = anchor_segment(spec, tendon.section());
    poses[..=end]
        .windows(2)
        .fold(T::zero(), |acc, w| acc + w[0].transform_point(offset).dist(w[1].transform_point(offset)))
}

/// Tendon paths as chords between guide holes on consecutive segment discs.
pub fn tendon_lengths<T: Scalar>(spec: &ManipulatorSpec<T>, config: &ConfigState<T>) -> Result<TendonState<T>, ChainError> {
    let bent = forward_kinematics(spec, config)?;
    let straight = forward_kinematics(spec, &ConfigState::straight(spec))?;
    let mut lengths = [T::zero(); 4];
    let mut displacements = [T::zero(); 4];
    for t in Tendon::ALL {
        let l = path_length(spec, &bent.segment_poses, t);
        lengths[t as usize] = l;
        displacements[t as usize] = l - path_length(spec, &straight.segment_poses, t);
    }
    Ok(TendonState { lengths, displacements })
}

/// Displacement of a section's pulling tendon with that section at `alpha`
/// and the other section straight.
pub fn section_pull<T: Scalar>(spec: &ManipulatorSpec<T>, section: usize, alpha: T) -> Result<T, ChainError> {
    let mut sections = [T::zero(); 2];
    sections[section] = alpha;
    let state = tendon_lengths(spec, &ConfigState::from_sections(spec, sections))?;
    let pull = if section == 0 { Tendon::Up } else { Tendon::Right };
    Ok(state.displacement(pull))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Actuation<T> {
    pub config: ConfigState<T>,
    /// Commanded pull per section, mm.
    pub displacement: [T; 2],
    pub saturated: [bool; 2],
}

/// Motor steps to joint angles.
pub fn actuate<T: Scalar>(spec: &ManipulatorSpec<T>, steps: [i64; 2]) -> Result<Actuation<T>, ChainError> {
    let travel = spec.step_travel();
    actuate_displacement(spec, [travel * T::lit(steps[0] as f64), travel * T::lit(steps[1] as f64)])
}

/// Pulls each section's tendon by `pull` mm (negative releases it) and solves
/// the equal-distribution section angle.
///
/// Each section is solved with the other section straight. Sections bend in
/// perpendicular planes, so one section's tendons see the other section's
/// joints only through the shared centerline chord, which is the same for
/// both tendons of the pair.
pub fn actuate_displacement<T: Scalar>(spec: &ManipulatorSpec<T>, pull: [T; 2]) -> Result<Actuation<T>, ChainError> {
    spec.validate()?;
    let mut alpha = [T::zero(); 2];
    let mut saturated = [false; 2];
    for s in 0..2 {
        let target = -pull[s];
        if target == T::zero() {
            continue;
        }
        let limit = spec.joint_design.theta_max * T::lit(spec.section_joints(s).len() as f64);
        let f = |a: T| section_pull(spec, s, a).map(|d| d - target);
        let (f_lo, f_hi) = (f(-limit)?, f(limit)?);
        // pull displacement falls as the section angle grows
        if !(f_lo > f_hi) {
            return Err(ChainError::NonMonotone(s));
        }
        if f_hi >= T::zero() {
            alpha[s] = limit;
            saturated[s] = f_hi > T::zero();
            continue;
        }
        if f_lo <= T::zero() {
            alpha[s] = -limit;
            saturated[s] = f_lo < T::zero();
            continue;
        }
        let (mut lo, mut hi) = (-limit, limit);
        for _ in 0..200 {
            let mid = (lo + hi) / T::lit(2.0);
            if mid <= lo || mid >= hi {
                break;
            }
            if f(mid)? > T::zero() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        alpha[s] = (lo + hi) / T::lit(2.0);
    }
    let mut config = ConfigState::from_sections(spec, alpha);
    let limit = spec.joint_design.theta_max;
    for a in config.joint_angles.iter_mut() {
        *a = a.max(-limit).min(limit);
    }
    Ok(Actuation { config, displacement: pull, saturated })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditRow<T> {
    pub config_id: usize,
    pub length: T,
    /// Length a circular-joint chain would have at the same joint angles.
    pub circular_length: T,
    /// `length − straight length`.
    pub deviation: T,
    pub circular_deviation: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport<T> {
    pub straight_length: T,
    pub rows: Vec<AuditRow<T>>,
    pub max_deviation: T,
    pub max_circular_deviation: T,
}

pub fn centerline_audit<T: Scalar>(spec: &ManipulatorSpec<T>, configs: &[ConfigState<T>]) -> Result<AuditReport<T>, ChainError> {
    let straight = spec.straight_length();
    let l = spec.joint_design.half_pitch;
    let mut rows = Vec::with_capacity(configs.len());
    let (mut max_dev, mut max_circ) = (T::zero(), T::zero());
    for (config_id, c) in configs.iter().enumerate() {
        let fk = forward_kinematics(spec, c)?;
        let mut shortening = T::zero();
        for &a in &c.joint_angles {
            shortening = shortening + circular_baseline(l, a)?.shortening;
        }
        let circular_length = straight - shortening;
        let deviation = fk.centerline_length - straight;
        let circular_deviation = circular_length - straight;
        max_dev = max_dev.max(deviation.abs());
        max_circ = max_circ.max(circular_deviation.abs());
        rows.push(AuditRow { config_id, length: fk.centerline_length, circular_length, deviation, circular_deviation });
    }
    Ok(AuditReport { straight_length: straight, rows, max_deviation: max_dev, max_circular_deviation: max_circ })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WorkspacePoint<T> {
    pub alpha: [T; 2],
    pub tip: Vec3<T>,
}

/// Largest bend reached toward each direction, rad.
///
/// The tip axis is decomposed into the two section angles: the up/down angle is
/// its inclination in the y–z plane, the left/right angle its elevation out of it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BendReport<T> {
    pub up: T,
    pub down: T,
    pub left: T,
    pub right: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Workspace<T> {
    /// Row-major over (alpha1, alpha2).
    pub points: Vec<WorkspacePoint<T>>,
    pub max_bend: BendReport<T>,
}

pub fn workspace<T: Scalar>(spec: &ManipulatorSpec<T>, alpha1: &[T], alpha2: &[T]) -> Result<Workspace<T>, ChainError> {
    let limit = spec.section_limit;
    for (section, grid) in [(0, alpha1), (1, alpha2)] {
        if let Some(&a) = grid.iter().find(|a| !(a.abs() <= limit)) {
            return Err(ChainError::SectionLimit { section, angle: a.to_f64_lossy(), limit: limit.to_f64_lossy() });
        }
    }
    let zero = T::zero();
    let mut bend = BendReport { up: zero, down: zero, left: zero, right: zero };
    let mut points = Vec::with_capacity(alpha1.len() * alpha2.len());
    for &a1 in alpha1 {
        for &a2 in alpha2 {
            let fk = forward_kinematics(spec, &ConfigState::from_sections(spec, [a1, a2]))?;
            let t = fk.tip.axis();
            let vertical = t.y.atan2(t.z);
            let lateral = t.x.max(-T::one()).min(T::one()).asin();
            bend.up = bend.up.max(vertical);
            bend.down = bend.down.max(-vertical);
            bend.right = bend.right.max(lateral);
            bend.left = bend.left.max(-lateral);
            points.push(WorkspacePoint { alpha: [a1, a2], tip: fk.tip.trans });
        }
    }
    Ok(Workspace { points, max_bend: bend })
}

/// Uniform grid of `n` angles over `[-limit, limit]`.
pub fn symmetric_grid<T: Scalar>(limit: T, n: usize) -> Vec<T> {
    if n <= 1 {
        return vec![T::zero()];
    }
    let h = T::lit((n - 1) as f64);
    (0..n).map(|i| limit * (T::lit(2.0 * i as f64) - h) / h).collect()
}
