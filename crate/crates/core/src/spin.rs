//! Electrospinning jet: cone footprint on a target plane, tip aiming and
//! coverage scheduling.
//!
//! Deposition is purely geometric: uniform inside the footprint, nothing outside.

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::chain::{self, actuate, forward_kinematics, ChainError, ConfigState, ManipulatorSpec};
use crate::geom::{Pose3, Vec2, Vec3};
use crate::polygon;
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpinError {
    #[error("half angle must lie in (0, pi/2), got {0}")]
    HalfAngle(f64),
    #[error("range must be positive, got {0}")]
    Range(f64),
    #[error("plane normal must be non-zero")]
    Normal,
    #[error("plane behind apex")]
    PlaneBehindApex,
    #[error("grazing incidence: the footprint is unbounded")]
    GrazingIncidence,
    #[error("plane lies {distance} mm along the axis, beyond the jet range {range} mm")]
    OutOfRange { distance: f64, range: f64 },
    #[error("target coincides with the tip")]
    TargetAtTip,
    #[error("no targets given")]
    NoTargets,
    #[error("region polygon needs at least 3 vertices")]
    Region,
    #[error("raster cell must be positive, got {0}")]
    Cell(f64),
    #[error(transparent)]
    Chain(#[from] ChainError),
}

/// Jet restrained to a cone at the tip.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JetCone<T> {
    /// Apex pose; the jet runs along its local `+z`.
    pub apex: Pose3<T>,
    pub half_angle: T,
    /// Spun distance, mm.
    pub range: T,
}

impl<T: Scalar> JetCone<T> {
    pub fn new(apex: Pose3<T>, half_angle: T, range: T) -> Result<Self, SpinError> {
        if !(half_angle > T::zero() && half_angle < T::FRAC_PI_2()) {
            return Err(SpinError::HalfAngle(half_angle.to_f64_lossy()));
        }
        if !(range > T::zero() && range.is_finite()) {
            return Err(SpinError::Range(range.to_f64_lossy()));
        }
        Ok(Self { apex, half_angle, range })
    }

    pub fn axis(&self) -> Vec3<T> {
        self.apex.axis()
    }

    pub fn contains(&self, p: Vec3<T>) -> bool {
        let d = p - self.apex.trans;
        d.dot(self.axis()) >= self.half_angle.cos() * d.norm()
    }
}

/// Plane with an in-plane coordinate frame anchored at `origin`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TargetPlane<T> {
    pub origin: Vec3<T>,
    pub normal: Vec3<T>,
    pub u: Vec3<T>,
    pub v: Vec3<T>,
}

impl<T: Scalar> TargetPlane<T> {
    /// `u` is the projection of `+x` (or `+y` when the normal is near `x`), `v = n × u`.
    pub fn new(origin: Vec3<T>, normal: Vec3<T>) -> Result<Self, SpinError> {
        let n = normal.normalized().ok_or(SpinError::Normal)?;
        let seed = if n.x.abs() < T::lit(0.9) { Vec3::unit_x() } else { Vec3::unit_y() };
        let u = (seed - n.scale(seed.dot(n))).normalized().ok_or(SpinError::Normal)?;
        Ok(Self { origin, normal: n, u, v: n.cross(u) })
    }

    pub fn to_local(&self, p: Vec3<T>) -> Vec2<T> {
        let d = p - self.origin;
        Vec2::new(d.dot(self.u), d.dot(self.v))
    }

    pub fn to_world(&self, q: Vec2<T>) -> Vec3<T> {
        self.origin + self.u.scale(q.x) + self.v.scale(q.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ConicKind {
    Ellipse,
    /// Zero-aperture limit: a single point.
    Degenerate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FootprintConic<T> {
    pub kind: ConicKind,
    /// Plane coordinates, mm.
    pub center: Vec2<T>,
    pub semi_major: T,
    pub semi_minor: T,
    /// Unit major-axis direction in plane coordinates.
    pub major_dir: Vec2<T>,
    /// Where the cone axis pierces the plane.
    pub axis_point: Vec2<T>,
    pub area: T,
    /// Inscribed polygon, anticlockwise.
    pub polygon: Vec<Vec2<T>>,
}

impl<T: Scalar> FootprintConic<T> {
    pub fn contains(&self, q: Vec2<T>) -> bool {
        if self.kind == ConicKind::Degenerate {
            return false;
        }
        let d = q - self.center;
        let x = d.dot(self.major_dir) / self.semi_major;
        let y = d.cross(self.major_dir) / self.semi_minor;
        x * x + y * y <= T::one()
    }

    /// Axis-aligned bounds `(min, max)` of the ellipse.
    pub fn bounds(&self) -> (Vec2<T>, Vec2<T>) {
        let (c, s) = (self.major_dir.x, self.major_dir.y);
        let (a, b) = (self.semi_major, self.semi_minor);
        let hx = (a * a * c * c + b * b * s * s).sqrt();
        let hy = (a * a * s * s + b * b * c * c).sqrt();
        (Vec2::new(self.center.x - hx, self.center.y - hy), Vec2::new(self.center.x + hx, self.center.y + hy))
    }
}

pub const FOOTPRINT_VERTICES: usize = 128;

/// Exact cone–plane intersection.
///
/// With `h` the apex–plane distance, `γ` the incidence angle and `β` the half
/// angle, `k = cos²β − sin²γ`; the ellipse has semi-axes `h·sinβ·cosβ/k` and
/// `h·sinβ/√k`, centred `h·sinγ·cosγ/k` from the apex foot along the tilt.
pub fn footprint<T: Scalar>(cone: &JetCone<T>, plane: &TargetPlane<T>) -> Result<FootprintConic<T>, SpinError> {
    let axis = cone.axis();
    let n = plane.normal;
    let apex = cone.apex.trans;
    let denom = axis.dot(n);
    let offset = (plane.origin - apex).dot(n);
    let tiny = T::lit(1e-12);
    if denom.abs() < tiny {
        return Err(if offset.abs() < tiny { SpinError::PlaneBehindApex } else { SpinError::GrazingIncidence });
    }
    let along = offset / denom;
    if !(along > T::zero()) {
        return Err(SpinError::PlaneBehindApex);
    }
    if along > cone.range * (T::one() + T::lit(1e-9)) {
        return Err(SpinError::OutOfRange { distance: along.to_f64_lossy(), range: cone.range.to_f64_lossy() });
    }
    let h = offset.abs();
    let cos_g = denom.abs().min(T::one());
    let sin_g = (T::one() - cos_g * cos_g).max(T::zero()).sqrt();
    let (sin_b, cos_b) = cone.half_angle.sin_cos();
    let k = cos_b * cos_b - sin_g * sin_g;
    if !(k > T::lit(1e-9)) {
        return Err(SpinError::GrazingIncidence);
    }

    let foot = plane.to_local(apex + n.scale(offset));
    let axis_point = plane.to_local(apex + axis.scale(along));
    let tilt = axis_point - foot;
    let major_dir = if tilt.norm() > h * T::lit(1e-12) { tilt.scale(T::one() / tilt.norm()) } else { Vec2::new(T::one(), T::zero()) };

    let semi_major = h * sin_b * cos_b / k;
    let semi_minor = h * sin_b / k.sqrt();
    let center = foot + major_dir.scale(h * sin_g * cos_g / k);
    let degenerate = semi_minor <= h.max(T::one()) * T::lit(1e-12);
    let kind = if degenerate { ConicKind::Degenerate } else { ConicKind::Ellipse };
    let minor_dir = Vec2::new(-major_dir.y, major_dir.x);
    let polygon = (0..FOOTPRINT_VERTICES)
        .map(|i| {
            let phi = T::TAU() * T::lit(i as f64) / T::lit(FOOTPRINT_VERTICES as f64);
            center + major_dir.scale(semi_major * phi.cos()) + minor_dir.scale(semi_minor * phi.sin())
        })
        .collect();
    Ok(FootprintConic {
        kind,
        center: if degenerate { axis_point } else { center },
        semi_major,
        semi_minor,
        major_dir,
        axis_point,
        area: T::PI() * semi_major * semi_minor,
        polygon,
    })
}

/// Footprint area estimated by testing uniform plane samples for cone membership.
pub fn monte_carlo_area<R: Rng>(cone: &JetCone<f64>, plane: &TargetPlane<f64>, samples: usize, rng: &mut R) -> Result<f64, SpinError> {
    let fp = footprint(cone, plane)?;
    let (lo, hi) = fp.bounds();
    let pad = Vec2::new(0.05 * (hi.x - lo.x), 0.05 * (hi.y - lo.y));
    let (lo, hi) = (lo - pad, hi + pad);
    let mut hits = 0usize;
    for _ in 0..samples {
        let q = Vec2::new(rng.gen_range(lo.x..hi.x), rng.gen_range(lo.y..hi.y));
        if cone.contains(plane.to_world(q)) {
            hits += 1;
        }
    }
    Ok((hi.x - lo.x) * (hi.y - lo.y) * hits as f64 / samples as f64)
}

/// Area of a union of footprints estimated from uniform samples over their bounds.
pub fn monte_carlo_union_area<R: Rng>(footprints: &[FootprintConic<f64>], samples: usize, rng: &mut R) -> f64 {
    let Some((lo, hi)) = union_bounds(footprints) else {
        return 0.0;
    };
    let mut hits = 0usize;
    for _ in 0..samples {
        let q = Vec2::new(rng.gen_range(lo.x..hi.x), rng.gen_range(lo.y..hi.y));
        if footprints.iter().any(|f| f.contains(q)) {
            hits += 1;
        }
    }
    (hi.x - lo.x) * (hi.y - lo.y) * hits as f64 / samples as f64
}

fn union_bounds<T: Scalar>(footprints: &[FootprintConic<T>]) -> Option<(Vec2<T>, Vec2<T>)> {
    footprints.iter().map(|f| f.bounds()).reduce(|(a0, a1), (b0, b1)| {
        (Vec2::new(a0.x.min(b0.x), a0.y.min(b0.y)), Vec2::new(a1.x.max(b1.x), a1.y.max(b1.y)))
    })
}

/// Process parameters carried into reports.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpinParams<T> {
    pub voltage_kv: T,
    pub feed_ml_per_h: T,
    pub solution: String,
    pub distance_mm: T,
}

impl<T: Scalar> Default for SpinParams<T> {
    fn default() -> Self {
        Self {
            voltage_kv: T::lit(10.0),
            feed_ml_per_h: T::lit(0.5),
            solution: "PVP 15 wt% in ethanol".into(),
            distance_mm: T::lit(120.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AimOptions<T> {
    /// Convergence threshold on the pointing error, rad.
    pub tolerance: T,
    pub max_iterations: usize,
    /// Central-difference step, rad.
    pub fd_step: T,
}

impl<T: Scalar> Default for AimOptions<T> {
    fn default() -> Self {
        Self { tolerance: T::lit(1e-4), max_iterations: 100, fd_step: T::lit(1e-5) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AimResult<T> {
    pub alpha: [T; 2],
    pub config: ConfigState<T>,
    /// Angle between the tip axis and the direction to the target, rad.
    pub residual: T,
    pub reachable: bool,
    pub iterations: usize,
}

/// Pointing error in the tip frame: the transverse components of the unit
/// direction to the target, and the angle they imply.
fn pointing<T: Scalar>(spec: &ManipulatorSpec<T>, alpha: [T; 2], target: Vec3<T>) -> Result<([T; 2], T), SpinError> {
    let fk = forward_kinematics(spec, &ConfigState::from_sections(spec, alpha))?;
    let local = fk.tip.rot.transpose().apply(target - fk.tip.trans);
    let w = local.normalized().ok_or(SpinError::TargetAtTip)?;
    let angle = Vec3::unit_z().angle_to(w);
    Ok(([w.x, w.y], angle))
}

/// Largest usable section angle.
pub fn section_bound<T: Scalar>(spec: &ManipulatorSpec<T>, section: usize) -> T {
    let joints = T::lit(spec.section_joints(section).len() as f64);
    spec.section_limit.min(spec.joint_design.theta_max * joints)
}

/// Points the tip axis at `target` with projected Levenberg–Marquardt steps over
/// the two section angles.
pub fn aim_at<T: Scalar>(
    spec: &ManipulatorSpec<T>,
    target: Vec3<T>,
    initial: &ConfigState<T>,
    opts: &AimOptions<T>,
) -> Result<AimResult<T>, SpinError> {
    spec.validate()?;
    let bound = [section_bound(spec, 0), section_bound(spec, 1)];
    let clamp = |a: [T; 2]| [a[0].max(-bound[0]).min(bound[0]), a[1].max(-bound[1]).min(bound[1])];
    let mut alpha = clamp(initial.section_angles(spec));
    let (mut r, mut err) = pointing(spec, alpha, target)?;
    let mut lambda = T::lit(1e-3);
    let mut iterations = 0;
    let two = T::lit(2.0);

    while err >= opts.tolerance && iterations < opts.max_iterations {
        iterations += 1;
        let mut jac = [[T::zero(); 2]; 2];
        for c in 0..2 {
            let (mut ap, mut am) = (alpha, alpha);
            ap[c] = ap[c] + opts.fd_step;
            am[c] = am[c] - opts.fd_step;
            let (rp, _) = pointing(spec, ap, target)?;
            let (rm, _) = pointing(spec, am, target)?;
            for row in 0..2 {
                jac[row][c] = (rp[row] - rm[row]) / (two * opts.fd_step);
            }
        }
        // normal equations (JᵀJ + λ·diag) δ = −Jᵀr
        let g = [
            jac[0][0] * r[0] + jac[1][0] * r[1],
            jac[0][1] * r[0] + jac[1][1] * r[1],
        ];
        let a00 = jac[0][0] * jac[0][0] + jac[1][0] * jac[1][0];
        let a01 = jac[0][0] * jac[0][1] + jac[1][0] * jac[1][1];
        let a11 = jac[0][1] * jac[0][1] + jac[1][1] * jac[1][1];
        let mut improved = false;
        for _ in 0..30 {
            let (m00, m11) = (a00 + lambda * (a00 + T::lit(1e-12)), a11 + lambda * (a11 + T::lit(1e-12)));
            let det = m00 * m11 - a01 * a01;
            if !(det.abs() > T::zero()) {
                lambda = lambda * T::lit(10.0);
                continue;
            }
            let step = [-(m11 * g[0] - a01 * g[1]) / det, -(m00 * g[1] - a01 * g[0]) / det];
            let cand = clamp([alpha[0] + step[0], alpha[1] + step[1]]);
            let (rc, ec) = pointing(spec, cand, target)?;
            if ec < err {
                alpha = cand;
                r = rc;
                err = ec;
                lambda = (lambda / T::lit(3.0)).max(T::lit(1e-12));
                improved = true;
                break;
            }
            lambda = lambda * T::lit(4.0);
        }
        if !improved {
            break;
        }
    }
    Ok(AimResult {
        alpha,
        config: ConfigState::from_sections(spec, alpha),
        residual: err,
        reachable: err < opts.tolerance,
        iterations,
    })
}

/// Nearest motor-step counts for the given section angles.
pub fn quantize_steps<T: Scalar>(spec: &ManipulatorSpec<T>, alpha: [T; 2]) -> Result<[i64; 2], SpinError> {
    let travel = spec.step_travel();
    let mut steps = [0i64; 2];
    for (s, out) in steps.iter_mut().enumerate() {
        let pull = -chain::section_pull(spec, s, alpha[s])?;
        *out = (pull / travel).round().to_i64().unwrap_or(0);
    }
    Ok(steps)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Waypoint<T> {
    pub id: usize,
    pub target: Vec3<T>,
    pub reachable: bool,
    pub residual: T,
    /// Angles after step quantization.
    pub alpha: [T; 2],
    pub steps: [i64; 2],
    pub footprint: Option<FootprintConic<T>>,
    /// Feed × dwell, mL.
    pub volume_ml: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoveragePlan<T> {
    pub waypoints: Vec<Waypoint<T>>,
    pub unreachable: Vec<usize>,
    pub region_area: T,
    /// Fraction of the region under at least one footprint.
    pub coverage: T,
    /// Footprint area falling outside the region, mm².
    pub overspray: T,
    /// Area of the union of footprints, mm².
    pub union_area: T,
    pub cell: T,
    pub params: SpinParams<T>,
}

/// Plan inputs that stay fixed across waypoints.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageSetup<T> {
    pub plane: TargetPlane<T>,
    pub half_angle: T,
    pub range: T,
    /// Target region, plane coordinates.
    pub region: Vec<Vec2<T>>,
    /// Dwell per waypoint, s.
    pub dwell_s: T,
    /// Raster cell edge, mm.
    pub cell: T,
    pub params: SpinParams<T>,
}

pub fn plan_coverage<T: Scalar>(
    spec: &ManipulatorSpec<T>,
    targets: &[Vec3<T>],
    setup: &CoverageSetup<T>,
) -> Result<CoveragePlan<T>, SpinError> {
    if targets.is_empty() {
        return Err(SpinError::NoTargets);
    }
    if setup.region.len() < 3 {
        return Err(SpinError::Region);
    }
    if !(setup.cell > T::zero()) {
        return Err(SpinError::Cell(setup.cell.to_f64_lossy()));
    }
    let opts = AimOptions::default();
    let volume = setup.params.feed_ml_per_h * setup.dwell_s / T::lit(3600.0);
    let mut waypoints = Vec::with_capacity(targets.len());
    let mut unreachable = Vec::new();
    let mut previous = ConfigState::straight(spec);
    for (id, &target) in targets.iter().enumerate() {
        let aim = aim_at(spec, target, &previous, &opts)?;
        let steps = quantize_steps(spec, aim.alpha)?;
        let quantized = actuate(spec, steps)?;
        let alpha = quantized.config.section_angles(spec);
        let fk = forward_kinematics(spec, &quantized.config)?;
        let cone = JetCone::new(fk.tip, setup.half_angle, setup.range)?;
        let fp = if aim.reachable { footprint(&cone, &setup.plane).ok() } else { None };
        if !aim.reachable || fp.is_none() {
            unreachable.push(id);
        }
        previous = aim.config.clone();
        waypoints.push(Waypoint {
            id,
            target,
            reachable: aim.reachable && fp.is_some(),
            residual: aim.residual,
            alpha,
            steps,
            footprint: fp,
            volume_ml: volume,
        });
    }

    let prints: Vec<FootprintConic<T>> = waypoints.iter().filter_map(|w| w.footprint.clone()).collect();
    let raster = rasterize(&setup.region, &prints, setup.cell);
    Ok(CoveragePlan {
        waypoints,
        unreachable,
        region_area: polygon::area(&setup.region),
        coverage: raster.coverage,
        overspray: raster.overspray,
        union_area: raster.union_area,
        cell: setup.cell,
        params: setup.params.clone(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RasterCoverage<T> {
    pub coverage: T,
    pub overspray: T,
    pub union_area: T,
}

/// Cell-centre rasterization of region and footprint union.
pub fn rasterize<T: Scalar>(region: &[Vec2<T>], prints: &[FootprintConic<T>], cell: T) -> RasterCoverage<T> {
    let mut lo = region[0];
    let mut hi = region[0];
    for p in region {
        lo = Vec2::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Vec2::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    if let Some((a, b)) = union_bounds(prints) {
        lo = Vec2::new(lo.x.min(a.x), lo.y.min(a.y));
        hi = Vec2::new(hi.x.max(b.x), hi.y.max(b.y));
    }
    // cells aligned to the global grid so refinements nest
    let i0 = (lo.x / cell).floor().to_i64().unwrap_or(0);
    let i1 = (hi.x / cell).ceil().to_i64().unwrap_or(0);
    let j0 = (lo.y / cell).floor().to_i64().unwrap_or(0);
    let j1 = (hi.y / cell).ceil().to_i64().unwrap_or(0);
    let half = T::lit(0.5);
    let (mut region_cells, mut covered, mut outside, mut union) = (0u64, 0u64, 0u64, 0u64);
    for i in i0..i1 {
        let x = (T::lit(i as f64) + half) * cell;
        for j in j0..j1 {
            let q = Vec2::new(x, (T::lit(j as f64) + half) * cell);
            let in_region = polygon::contains(region, q);
            let in_print = prints.iter().any(|f| f.contains(q));
            region_cells += in_region as u64;
            covered += (in_region && in_print) as u64;
            outside += (!in_region && in_print) as u64;
            union += in_print as u64;
        }
    }
    let cell_area = cell * cell;
    let coverage = if region_cells == 0 { T::zero() } else { T::lit(covered as f64) / T::lit(region_cells as f64) };
    RasterCoverage {
        coverage,
        overspray: T::lit(outside as f64) * cell_area,
        union_area: T::lit(union as f64) * cell_area,
    }
}

/// Plane facing the straight tip at `distance` beyond it.
pub fn default_target_plane<T: Scalar>(spec: &ManipulatorSpec<T>, distance: T) -> TargetPlane<T> {
    let z = spec.straight_length() + distance;
    TargetPlane::new(Vec3::new(T::zero(), T::zero(), z), -Vec3::unit_z()).expect("unit normal")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Rot3;

    fn perpendicular_cone(half_deg: f64) -> (JetCone<f64>, TargetPlane<f64>) {
        let cone = JetCone::new(Pose3::identity(), half_deg.to_radians(), 120.0).unwrap();
        let plane = TargetPlane::new(Vec3::new(0.0, 0.0, 120.0), Vec3::unit_z()).unwrap();
        (cone, plane)
    }

    #[test]
    fn perpendicular_circle() {
        let (cone, plane) = perpendicular_cone(5.0);
        let f = footprint(&cone, &plane).unwrap();
        assert!((f.semi_major - 10.498_639_623_110_881).abs() < 1e-9);
        assert!((f.semi_minor - f.semi_major).abs() < 1e-12);
        assert!(f.center.norm() < 1e-12);
        assert!((f.area - 346.270_847_121_325_1).abs() < 1e-8);
        assert_eq!(f.polygon.len(), FOOTPRINT_VERTICES);
    }

    #[test]
    fn tilted_ellipse() {
        let rot = Rot3::from_axis_angle(Vec3::unit_y(), 30f64.to_radians());
        let cone = JetCone::new(Pose3::new(rot, Vec3::zero()), 5f64.to_radians(), 200.0).unwrap();
        // 120 mm along the axis
        let plane = TargetPlane::new(Vec3::new(0.0, 0.0, 120.0 * 30f64.to_radians().cos()), Vec3::unit_z()).unwrap();
        let f = footprint(&cone, &plane).unwrap();
        assert!((f.semi_major - 12.153_794_284_170_78).abs() < 1e-9);
        assert!((f.semi_minor - 10.512_058_537_044_364).abs() < 1e-9);
        assert!((f.area - 401.374_266_109_440_3).abs() < 1e-7);
        assert!((f.center.x - 60.613_907_637_145_818).abs() < 1e-9);
    }

    #[test]
    fn footprint_errors() {
        let (cone, _) = perpendicular_cone(5.0);
        let behind = TargetPlane::new(Vec3::new(0.0, 0.0, -10.0), Vec3::unit_z()).unwrap();
        assert_eq!(footprint(&cone, &behind), Err(SpinError::PlaneBehindApex));
        let parallel = TargetPlane::new(Vec3::new(5.0, 0.0, 0.0), Vec3::unit_x()).unwrap();
        assert_eq!(footprint(&cone, &parallel), Err(SpinError::GrazingIncidence));
        let far = TargetPlane::new(Vec3::new(0.0, 0.0, 500.0), Vec3::unit_z()).unwrap();
        assert!(matches!(footprint(&cone, &far), Err(SpinError::OutOfRange { .. })));
        let steep = JetCone::new(Pose3::new(Rot3::from_axis_angle(Vec3::unit_y(), 1.5), Vec3::zero()), 0.2, 1e4).unwrap();
        let plane = TargetPlane::new(Vec3::new(0.0, 0.0, 120.0), Vec3::unit_z()).unwrap();
        assert_eq!(footprint(&steep, &plane), Err(SpinError::GrazingIncidence));
        assert!(JetCone::new(Pose3::<f64>::identity(), 0.0, 1.0).is_err());
    }

    #[test]
    fn zero_aperture_limit() {
        let cone = JetCone::new(Pose3::identity(), 1e-15, 120.0).unwrap();
        let plane = TargetPlane::new(Vec3::new(0.0, 0.0, 120.0), Vec3::unit_z()).unwrap();
        let f = footprint(&cone, &plane).unwrap();
        assert_eq!(f.kind, ConicKind::Degenerate);
        assert!(f.center.norm() < 1e-12);
    }

    #[test]
    fn aim_on_axis() {
        let s = ManipulatorSpec::<f64>::table_default();
        let r = aim_at(&s, Vec3::new(0.0, 0.0, 300.0), &ConfigState::straight(&s), &AimOptions::default()).unwrap();
        assert_eq!(r.alpha, [0.0, 0.0]);
        assert_eq!(r.residual, 0.0);
        assert!(r.reachable);
    }

    #[test]
    fn aim_round_trip() {
        let s = ManipulatorSpec::<f64>::table_default();
        let c = ConfigState::from_sections(&s, [0.3, -0.2]);
        let fk = forward_kinematics(&s, &c).unwrap();
        let target = fk.tip.trans + fk.tip.axis().scale(120.0);
        let r = aim_at(&s, target, &ConfigState::straight(&s), &AimOptions::default()).unwrap();
        assert!(r.reachable);
        assert!((r.alpha[0] - 0.3).abs() < 1e-3 && (r.alpha[1] + 0.2).abs() < 1e-3);
    }

    #[test]
    fn aim_unreachable() {
        let s = ManipulatorSpec::<f64>::table_default();
        let r = aim_at(&s, Vec3::new(200.0, 0.0, 87.0), &ConfigState::straight(&s), &AimOptions::default()).unwrap();
        assert!(!r.reachable);
        assert!((r.alpha[1] - s.section_limit).abs() < 1e-12);
        let tip = Vec3::new(0.0, 0.0, 87.0);
        assert_eq!(aim_at(&s, tip, &ConfigState::straight(&s), &AimOptions::default()), Err(SpinError::TargetAtTip));
    }

    #[test]
    fn single_waypoint_self_cover() {
        let s = ManipulatorSpec::<f64>::table_default();
        let plane = default_target_plane(&s, 120.0);
        let fk = forward_kinematics(&s, &ConfigState::straight(&s)).unwrap();
        let cone = JetCone::new(fk.tip, 5f64.to_radians(), 120.0).unwrap();
        let region = footprint(&cone, &plane).unwrap().polygon;
        let setup = CoverageSetup {
            plane,
            half_angle: 5f64.to_radians(),
            range: 120.0,
            region,
            dwell_s: 60.0,
            cell: 0.5,
            params: SpinParams::default(),
        };
        let plan = plan_coverage(&s, &[Vec3::new(0.0, 0.0, 207.0)], &setup).unwrap();
        assert_eq!(plan.waypoints.len(), 1);
        assert_eq!(plan.waypoints[0].steps, [0, 0]);
        assert!((plan.coverage - 1.0).abs() < 1e-12);
        assert!(plan.overspray < 0.01 * plan.region_area);
        assert!((plan.waypoints[0].volume_ml - 0.5 / 60.0).abs() < 1e-15);
    }
}
