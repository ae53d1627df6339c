//! Tubular environment: clearance of the manipulator backbone inside a lumen
//! and exhaustive section-angle search along an insertion.
//!
//! The lumen is the union of spheres swept along a polyline, with the radius
//! interpolated linearly between vertices.

use std::cmp::Ordering;

use serde::Serialize;
use thiserror::Error;

use crate::chain::{forward_kinematics, ChainError, ConfigState, ManipulatorSpec};
use crate::geom::{Pose3, Rot3, Vec3};
use crate::scalar::{sinc, Scalar};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LumenError {
    #[error("lumen path needs at least 2 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("lumen path has {vertices} vertices but {radii} radii")]
    RadiiMismatch { vertices: usize, radii: usize },
    #[error("radius at vertex {0} must be positive")]
    Radius(usize),
    #[error("vertices {0} and {} coincide", .0 + 1)]
    DuplicateVertex(usize),
    #[error("insertion depth must be non-negative and finite, got {0}")]
    Depth(f64),
    #[error("at least 2 samples per joint are required, got {0}")]
    Samples(usize),
    #[error("angle grid is empty")]
    EmptyGrid,
    #[error("depths must be ascending")]
    DepthOrder,
    #[error(transparent)]
    Chain(#[from] ChainError),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LumenPath<T> {
    pub vertices: Vec<Vec3<T>>,
    pub radii: Vec<T>,
}

impl<T: Scalar> LumenPath<T> {
    pub fn new(vertices: Vec<Vec3<T>>, radii: Vec<T>) -> Result<Self, LumenError> {
        if vertices.len() < 2 {
            return Err(LumenError::TooFewVertices(vertices.len()));
        }
        if radii.len() != vertices.len() {
            return Err(LumenError::RadiiMismatch { vertices: vertices.len(), radii: radii.len() });
        }
        if let Some(i) = radii.iter().position(|r| !(*r > T::zero() && r.is_finite())) {
            return Err(LumenError::Radius(i));
        }
        if let Some(i) = vertices.windows(2).position(|w| w[0] == w[1]) {
            return Err(LumenError::DuplicateVertex(i));
        }
        Ok(Self { vertices, radii })
    }

    /// Straight tube along `+z` from the origin.
    pub fn straight(length: T, radius: T) -> Result<Self, LumenError> {
        Self::new(vec![Vec3::zero(), Vec3::new(T::zero(), T::zero(), length)], vec![radius, radius])
    }

    /// Illustrative airway: a trachea-like trunk followed by a bend into one
    /// bronchus, narrowing along the way.
    pub fn demo_bronchus() -> Self {
        let v = |x: f64, y: f64, z: f64| Vec3::new(T::lit(x), T::lit(y), T::lit(z));
        let vertices = vec![
            v(0.0, 0.0, 0.0),
            v(0.0, 0.0, 60.0),
            v(0.0, 0.0, 100.0),
            v(0.0, 6.0, 120.0),
            v(0.0, 16.0, 136.0),
            v(4.0, 28.0, 150.0),
            v(10.0, 40.0, 160.0),
        ];
        let radii = [9.0, 9.0, 8.0, 6.5, 5.5, 4.5, 4.0].iter().map(|&r| T::lit(r)).collect();
        Self::new(vertices, radii).expect("demo path is valid")
    }

    pub fn first_tangent(&self) -> Vec3<T> {
        (self.vertices[1] - self.vertices[0]).normalized().expect("distinct vertices")
    }

    /// Largest `r(t) − |p − c(t)|` over the segments, with `c(t)` the closest
    /// point of each segment and `r(t)` the interpolated radius there.
    pub fn wall_margin(&self, p: Vec3<T>) -> T {
        let mut best = T::neg_infinity();
        for (w, r) in self.vertices.windows(2).zip(self.radii.windows(2)) {
            let d = w[1] - w[0];
            let ap = p - w[0];
            let t = ap.dot(d) / d.dot(d);
            let (t, dist) = if t <= T::zero() {
                (T::zero(), ap.norm())
            } else if t >= T::one() {
                (T::one(), p.dist(w[1]))
            } else {
                // perpendicular distance; exact zero on the centerline
                (t, ap.cross(d).norm() / d.norm())
            };
            let radius = r[0] + (r[1] - r[0]) * t;
            best = best.max(radius - dist);
        }
        best
    }

    /// Same path with every radius grown by `delta`.
    pub fn inflated(&self, delta: T) -> Self {
        Self { vertices: self.vertices.clone(), radii: self.radii.iter().map(|&r| r + delta).collect() }
    }

    pub fn transformed(&self, pose: &Pose3<T>) -> Self {
        Self { vertices: self.vertices.iter().map(|&v| pose.transform_point(v)).collect(), radii: self.radii.clone() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InsertionState<T> {
    /// Distance the base origin has advanced along the approach axis, mm.
    pub depth: T,
    pub base: Pose3<T>,
    pub config: ConfigState<T>,
}

impl<T: Scalar> InsertionState<T> {
    /// Base advanced `depth` along the first path segment, base `+z` on its tangent.
    pub fn along(path: &LumenPath<T>, depth: T, config: ConfigState<T>) -> Result<Self, LumenError> {
        if !(depth >= T::zero() && depth.is_finite()) {
            return Err(LumenError::Depth(depth.to_f64_lossy()));
        }
        let t = path.first_tangent();
        let base = Pose3::new(Rot3::between(Vec3::unit_z(), t), path.vertices[0] + t.scale(depth));
        Ok(Self { depth, base, config })
    }
}

/// Point on the robot centerline, base frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BackbonePoint<T> {
    pub position: Vec3<T>,
    /// Centerline arc length from the base origin, mm.
    pub arc: T,
}

/// Dense centerline samples: `samples_per_joint` per joint arc (ends included)
/// and the same number along the rigid tip extension.
pub fn backbone<T: Scalar>(
    spec: &ManipulatorSpec<T>,
    config: &ConfigState<T>,
    samples_per_joint: usize,
) -> Result<Vec<BackbonePoint<T>>, LumenError> {
    if samples_per_joint < 2 {
        return Err(LumenError::Samples(samples_per_joint));
    }
    let fk = forward_kinematics(spec, config)?;
    let span = spec.joint_design.span();
    let two = T::lit(2.0);
    let last = T::lit((samples_per_joint - 1) as f64);
    let mut pts = vec![BackbonePoint { position: Vec3::zero(), arc: T::zero() }];
    let mut arc = T::zero();
    for (j, &theta) in config.joint_angles.iter().enumerate() {
        let pose = &fk.segment_poses[j];
        let lateral = -spec.joint_plane(j).positive::<T>();
        for k in 1..samples_per_joint {
            let u = T::lit(k as f64) / last;
            let s = span * u;
            let phi = theta * u;
            let h = sinc(phi / two);
            // arc of length s turning through phi
            let local = lateral.scale(-s * phi / two * h * h) + Vec3::unit_z().scale(s * sinc(phi));
            pts.push(BackbonePoint { position: pose.transform_point(local), arc: arc + s });
        }
        arc = arc + span;
    }
    let end = fk.segment_poses.last().expect("at least one segment");
    if spec.rigid_extra > T::zero() {
        for k in 1..samples_per_joint {
            let s = spec.rigid_extra * T::lit(k as f64) / last;
            pts.push(BackbonePoint { position: end.transform_point(Vec3::unit_z().scale(s)), arc: arc + s });
        }
    }
    Ok(pts)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Clearance<T> {
    /// Smallest wall margin minus the outer radius, mm. Negative is a collision.
    pub min_clearance: T,
    /// Where it occurs, world frame.
    pub location: Vec3<T>,
    /// Centerline arc length from the base at that point, mm.
    pub arc: T,
}

pub fn clearance<T: Scalar>(
    path: &LumenPath<T>,
    spec: &ManipulatorSpec<T>,
    state: &InsertionState<T>,
    samples_per_joint: usize,
) -> Result<Clearance<T>, LumenError> {
    let half_od = spec.outer_diameter / T::lit(2.0);
    let mut best: Option<Clearance<T>> = None;
    for p in backbone(spec, &state.config, samples_per_joint)? {
        let world = state.base.transform_point(p.position);
        let c = path.wall_margin(world) - half_od;
        if best.is_none_or(|b| c < b.min_clearance) {
            best = Some(Clearance { min_clearance: c, location: world, arc: p.arc });
        }
    }
    Ok(best.expect("backbone is never empty"))
}

/// Candidate section angles for the search.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AngleGrid<T> {
    pub alpha1: Vec<T>,
    pub alpha2: Vec<T>,
}

impl<T: Scalar> AngleGrid<T> {
    /// `-limit_deg..=limit_deg` in `step_deg` increments on both sections.
    pub fn degrees(limit_deg: f64, step_deg: f64) -> Self {
        let n = (2.0 * limit_deg / step_deg).round() as i64;
        let axis: Vec<T> = (0..=n).map(|i| T::lit(-limit_deg + step_deg * i as f64).to_radians()).collect();
        Self { alpha1: axis.clone(), alpha2: axis }
    }

    /// −30° to 30° in 1° steps.
    pub fn default_grid() -> Self {
        Self::degrees(30.0, 1.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SteerRow<T> {
    pub depth: T,
    pub alpha: [T; 2],
    pub clearance: T,
    pub passable: bool,
}

fn rank<T: Scalar>(a: &(T, [T; 2]), b: &(T, [T; 2])) -> Ordering {
    let mag = |x: &[T; 2]| x[0].abs() + x[1].abs();
    b.0.partial_cmp(&a.0)
        .unwrap_or(Ordering::Equal)
        .then_with(|| mag(&a.1).partial_cmp(&mag(&b.1)).unwrap_or(Ordering::Equal))
        .then_with(|| a.1[0].partial_cmp(&b.1[0]).unwrap_or(Ordering::Equal))
        .then_with(|| a.1[1].partial_cmp(&b.1[1]).unwrap_or(Ordering::Equal))
}

/// At every depth, the grid point with the largest clearance. Ties go to the
/// smaller `|alpha1| + |alpha2|`, then to the lexicographically smaller pair,
/// so the result does not depend on grid order.
pub fn auto_steer<T: Scalar>(
    path: &LumenPath<T>,
    spec: &ManipulatorSpec<T>,
    depths: &[T],
    grid: &AngleGrid<T>,
    samples_per_joint: usize,
) -> Result<Vec<SteerRow<T>>, LumenError> {
    if grid.alpha1.is_empty() || grid.alpha2.is_empty() {
        return Err(LumenError::EmptyGrid);
    }
    if depths.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(LumenError::DepthOrder);
    }
    let mut rows = Vec::with_capacity(depths.len());
    for &depth in depths {
        let mut best: Option<(T, [T; 2])> = None;
        for &a1 in &grid.alpha1 {
            for &a2 in &grid.alpha2 {
                let config = ConfigState::from_sections(spec, [a1, a2]);
                let state = InsertionState::along(path, depth, config)?;
                let c = clearance(path, spec, &state, samples_per_joint)?.min_clearance;
                let cand = (c, [a1, a2]);
                if best.as_ref().is_none_or(|b| rank(&cand, b) == Ordering::Less) {
                    best = Some(cand);
                }
            }
        }
        let (c, alpha) = best.expect("grid is not empty");
        rows.push(SteerRow { depth, alpha, clearance: c, passable: c >= T::zero() });
    }
    Ok(rows)
}
