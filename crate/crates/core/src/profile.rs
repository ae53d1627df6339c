//! Non-circular rolling-joint contour.
//!
//! Two adjacent segments carry frames whose origins sit a straight distance `2L`
//! apart. Under a relative deflection `θ` the centerline between the origins is
//! kept as a circular arc of length `2L` (radius `2L/θ`). The contact chord of
//! length `S = N·L` perpendicularly bisects that arc at its midpoint; its two
//! endpoints, swept over `θ`, are the joint contour.
//!
//! Conventions: lower segment origin at `(0, 0)`, straight axis `+y`, positive
//! `θ` is anticlockwise and bends the upper segment toward `−x`.
//!
//! Every angle-dependent ratio is evaluated through `sinc` so the straight state
//! is reached continuously; no infinite radius is ever formed.

use serde::Serialize;
use thiserror::Error;

use crate::geom::Vec2;
use crate::polygon;
use crate::scalar::{sinc, x_over_tan, Scalar};

/// Reference normalization factor reported for `L = 3.5 mm`.
pub const REFERENCE_N: f64 = 0.60;

/// Default number of contour samples over the sweep.
pub const DEFAULT_SAMPLES: usize = 256;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProfileError {
    #[error("half pitch L must be positive and finite, got {0}")]
    HalfPitch(f64),
    #[error("normalization factor N must lie in (0, 2), got {0}")]
    Normalization(f64),
    #[error("theta_max must lie in (0, pi/2], got {0}")]
    ThetaMax(f64),
    #[error("deflection {theta} rad outside the admissible range +/-{limit} rad")]
    AngleOutOfRange { theta: f64, limit: f64 },
    #[error("at least 16 samples are required, got {0}")]
    TooFewSamples(usize),
    #[error("sweep {sweep} rad must cover theta_max {theta_max} rad and not exceed pi/2")]
    Sweep { sweep: f64, theta_max: f64 },
    #[error("no apex in sweep: P_R.x does not change sign in (0, {0}] rad")]
    NoApexInSweep(f64),
    #[error("tolerance must be at least 1e-6, got {0}")]
    Tolerance(f64),
    #[error("closure criterion never satisfied for N in (0, 2)")]
    NeverSatisfied,
    #[error("closure criterion always satisfied for N in (0, 2)")]
    AlwaysSatisfied,
    #[error("malformed polygon: {0} is self-intersecting")]
    Structural(&'static str),
}

fn check_angle<T: Scalar>(theta: T, limit: T) -> Result<(), ProfileError> {
    if theta.is_finite() && theta.abs() <= limit {
        Ok(())
    } else {
        Err(ProfileError::AngleOutOfRange { theta: theta.to_f64_lossy(), limit: limit.to_f64_lossy() })
    }
}

/// Scalar design parameters of one joint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JointDesign<T> {
    /// `L`, mm. The straight origin-to-origin span is `2L`.
    pub half_pitch: T,
    /// `N`, dimensionless.
    pub norm_factor: T,
    /// Largest admissible per-joint deflection, rad.
    pub theta_max: T,
}

impl<T: Scalar> JointDesign<T> {
    pub fn new(half_pitch: T, norm_factor: T, theta_max: T) -> Result<Self, ProfileError> {
        if !(half_pitch.is_finite() && half_pitch > T::zero()) {
            return Err(ProfileError::HalfPitch(half_pitch.to_f64_lossy()));
        }
        if !(norm_factor > T::zero() && norm_factor < T::lit(2.0)) {
            return Err(ProfileError::Normalization(norm_factor.to_f64_lossy()));
        }
        if !(theta_max > T::zero() && theta_max <= T::FRAC_PI_2()) {
            return Err(ProfileError::ThetaMax(theta_max.to_f64_lossy()));
        }
        Ok(Self { half_pitch, norm_factor, theta_max })
    }

    /// `S = N·L`, mm.
    pub fn contact_chord(&self) -> T {
        self.norm_factor * self.half_pitch
    }

    /// `2L`, mm.
    pub fn span(&self) -> T {
        self.half_pitch + self.half_pitch
    }
}

/// Circular-joint reference geometry (chord `L` between origins).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CircularBaseline<T> {
    /// Bend radius; `None` in the straight state.
    pub radius: Option<T>,
    pub arc_len: T,
    pub tip: Vec2<T>,
    /// `L − arc_len`, never negative.
    pub shortening: T,
}

pub fn circular_baseline<T: Scalar>(half_pitch: T, theta: T) -> Result<CircularBaseline<T>, ProfileError> {
    check_angle(theta, T::FRAC_PI_2())?;
    let two = T::lit(2.0);
    let half = theta / two;
    let radius = if theta.abs() < T::angle_eps() { None } else { Some(half_pitch / (two * half.tan())) };
    // Lθ / (2 tan(θ/2)) and the tip reduced to −(L/2)·sinθ, L·cos²(θ/2)
    let arc_len = half_pitch * x_over_tan(half);
    let tip = Vec2::new(-half_pitch / two * theta.sin(), half_pitch * half.cos() * half.cos());
    Ok(CircularBaseline { radius, arc_len, tip, shortening: half_pitch - arc_len })
}

/// Straight span of a circular joint rescaled to the `2L` convention.
pub fn circular_span<T: Scalar>(half_pitch: T, theta: T) -> Result<T, ProfileError> {
    Ok(T::lit(2.0) * circular_baseline(half_pitch, theta)?.arc_len)
}

/// Contact geometry at one deflection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContactPair<T> {
    /// Constant-arc radius `2L/θ`; `None` in the straight state.
    pub radius: Option<T>,
    pub midpoint: Vec2<T>,
    pub left: Vec2<T>,
    pub right: Vec2<T>,
}

/// Arc midpoint between adjacent origins at deflection `theta`.
fn arc_midpoint<T: Scalar>(half_pitch: T, theta: T) -> Vec2<T> {
    let q = theta / T::lit(4.0);
    let s = sinc(q);
    // R*(cos(θ/2) − 1) = −(Lθ/4)·sinc²(θ/4);  R*·sin(θ/2) = L·sinc(θ/2)
    Vec2::new(-half_pitch * q * s * s, half_pitch * sinc(theta / T::lit(2.0)))
}

pub fn contact_pair<T: Scalar>(design: &JointDesign<T>, theta: T) -> Result<ContactPair<T>, ProfileError> {
    check_angle(theta, T::FRAC_PI_2())?;
    Ok(contact_pair_unchecked(design, theta))
}

fn contact_pair_unchecked<T: Scalar>(design: &JointDesign<T>, theta: T) -> ContactPair<T> {
    let l = design.half_pitch;
    let radius = if theta.abs() < T::angle_eps() { None } else { Some(design.span() / theta) };
    let midpoint = arc_midpoint(l, theta);
    let half_chord = Vec2::from_angle(theta / T::lit(2.0)).scale(design.contact_chord() / T::lit(2.0));
    ContactPair { radius, midpoint, left: midpoint - half_chord, right: midpoint + half_chord }
}

/// Homogeneous 3×3 planar transform.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlanarTransform<T> {
    pub m: [[T; 3]; 3],
}

impl<T: Scalar> PlanarTransform<T> {
    pub fn from_rotation_translation(angle: T, t: Vec2<T>) -> Self {
        let (s, c) = angle.sin_cos();
        let (z, o) = (T::zero(), T::one());
        Self { m: [[c, -s, t.x], [s, c, t.y], [z, z, o]] }
    }

    pub fn apply(&self, p: Vec2<T>) -> Vec2<T> {
        let m = &self.m;
        Vec2::new(m[0][0] * p.x + m[0][1] * p.y + m[0][2], m[1][0] * p.x + m[1][1] * p.y + m[1][2])
    }

    pub fn rotation_det(&self) -> T {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn translation(&self) -> Vec2<T> {
        Vec2::new(self.m[0][2], self.m[1][2])
    }

    /// Inverse of a rigid transform (rotation block transposed).
    pub fn inverse(&self) -> Self {
        let m = &self.m;
        let (z, o) = (T::zero(), T::one());
        let tx = -(m[0][0] * m[0][2] + m[1][0] * m[1][2]);
        let ty = -(m[0][1] * m[0][2] + m[1][1] * m[1][2]);
        Self { m: [[m[0][0], m[1][0], tx], [m[0][1], m[1][1], ty], [z, z, o]] }
    }

    pub fn compose(&self, o: &Self) -> Self {
        let mut m = [[T::zero(); 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = self.m[i][0] * o.m[0][j] + self.m[i][1] * o.m[1][j] + self.m[i][2] * o.m[2][j];
            }
        }
        Self { m }
    }
}

/// Maps straight-state contact coordinates, taken relative to the straight
/// contact midpoint, to their deflected position in the lower frame: rotation by
/// `θ/2` and translation to the arc midpoint.
pub fn deflect_transform<T: Scalar>(half_pitch: T, theta: T) -> Result<PlanarTransform<T>, ProfileError> {
    check_angle(theta, T::FRAC_PI_2())?;
    Ok(PlanarTransform::from_rotation_translation(theta / T::lit(2.0), arc_midpoint(half_pitch, theta)))
}

/// Planar pose of one segment frame relative to another.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlanarPose<T> {
    pub position: Vec2<T>,
    pub orientation: T,
}

impl<T: Scalar> PlanarPose<T> {
    pub fn to_transform(&self) -> PlanarTransform<T> {
        PlanarTransform::from_rotation_translation(self.orientation, self.position)
    }
}

/// Upper segment origin and orientation in the lower frame.
pub fn upper_segment_pose<T: Scalar>(half_pitch: T, theta: T) -> Result<PlanarPose<T>, ProfileError> {
    check_angle(theta, T::FRAC_PI_2())?;
    Ok(upper_pose_unchecked(half_pitch, theta))
}

pub(crate) fn upper_pose_unchecked<T: Scalar>(half_pitch: T, theta: T) -> PlanarPose<T> {
    let h = theta / T::lit(2.0);
    let s = sinc(h);
    // R*(cosθ − 1) = −Lθ·sinc²(θ/2);  R*·sinθ = 2L·sinc θ
    PlanarPose {
        position: Vec2::new(-half_pitch * theta * s * s, T::lit(2.0) * half_pitch * sinc(theta)),
        orientation: theta,
    }
}

/// Centerline arc length between adjacent origins. Identically `2L`.
pub fn centerline_span<T: Scalar>(design: &JointDesign<T>, theta: T) -> Result<T, ProfileError> {
    check_angle(theta, T::FRAC_PI_2())?;
    let span = design.span();
    if theta.abs() < T::angle_eps() {
        return Ok(span);
    }
    // radius × subtended angle
    Ok(span / theta * theta)
}

/// Sampled contour of one joint.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JointProfile<T> {
    pub design: JointDesign<T>,
    pub sweep: T,
    pub theta_samples: Vec<T>,
    /// `P_R(θ)` at every sample, lower-segment frame.
    pub branch_r: Vec<Vec2<T>>,
    /// `P_L(θ)` at every sample.
    pub branch_l: Vec<Vec2<T>>,
    /// Smallest `θ > 0` with `P_R.x(θ) = 0`.
    pub theta_apex: Option<T>,
    pub closed: bool,
    pub simple: bool,
}

fn apex_tolerance<T: Scalar>() -> T {
    T::lit(1e-10).max(T::epsilon() * T::lit(8.0))
}

/// Symmetric θ grid. The count is bumped to the next odd number so that the
/// straight state is always a sample.
fn theta_grid<T: Scalar>(sweep: T, n_samples: usize) -> Vec<T> {
    let n = if n_samples.is_multiple_of(2) { n_samples + 1 } else { n_samples };
    let half = (n - 1) / 2;
    let h = T::lit(half as f64);
    (0..n)
        .map(|i| {
            let k = i as f64 - half as f64;
            sweep * T::lit(k) / h
        })
        .collect()
}

pub fn generate_profile<T: Scalar>(
    design: &JointDesign<T>,
    sweep: T,
    n_samples: usize,
) -> Result<JointProfile<T>, ProfileError> {
    if n_samples < 16 {
        return Err(ProfileError::TooFewSamples(n_samples));
    }
    if !(sweep >= design.theta_max && sweep <= T::FRAC_PI_2()) {
        return Err(ProfileError::Sweep { sweep: sweep.to_f64_lossy(), theta_max: design.theta_max.to_f64_lossy() });
    }
    let theta_samples = theta_grid(sweep, n_samples);
    let pairs: Vec<_> = theta_samples.iter().map(|&t| contact_pair_unchecked(design, t)).collect();
    let branch_r: Vec<_> = pairs.iter().map(|p| p.right).collect();
    let branch_l: Vec<_> = pairs.iter().map(|p| p.left).collect();

    let theta_apex = find_apex(design, &theta_samples, &branch_r);
    let simple = polygon::polyline_is_simple(&branch_r) && polygon::polyline_is_simple(&branch_l);

    let mut profile =
        JointProfile { design: *design, sweep, theta_samples, branch_r, branch_l, theta_apex, closed: false, simple };
    profile.closed = profile.closure_holds();
    Ok(profile)
}

/// First sign change of `P_R.x` on the positive half of the grid, refined by bisection.
fn find_apex<T: Scalar>(design: &JointDesign<T>, thetas: &[T], branch_r: &[Vec2<T>]) -> Option<T> {
    let x_at = |t: T| contact_pair_unchecked(design, t).right.x;
    let zero = T::zero();
    let mut prev: Option<T> = None;
    for (&t, p) in thetas.iter().zip(branch_r) {
        if t <= zero {
            continue;
        }
        if p.x <= zero {
            let mut lo = prev.unwrap_or(zero);
            let mut hi = t;
            let tol = apex_tolerance::<T>();
            while hi - lo > tol {
                let mid = (lo + hi) / T::lit(2.0);
                if mid <= lo || mid >= hi {
                    break;
                }
                if x_at(mid) > zero {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return Some((lo + hi) / T::lit(2.0));
        }
        prev = Some(t);
    }
    None
}

impl<T: Scalar> JointProfile<T> {
    pub fn apex(&self) -> Result<T, ProfileError> {
        self.theta_apex.ok_or(ProfileError::NoApexInSweep(self.sweep.to_f64_lossy()))
    }

    /// Apex point on the segment axis.
    pub fn apex_point(&self) -> Option<Vec2<T>> {
        self.theta_apex.map(|t| {
            let p = contact_pair_unchecked(&self.design, t).right;
            Vec2::new(T::zero(), p.y)
        })
    }

    /// Right branch from the straight state up to (excluding) the apex, then the apex.
    fn right_arch(&self) -> Option<Vec<Vec2<T>>> {
        let apex_t = self.theta_apex?;
        let mut pts: Vec<_> = self
            .theta_samples
            .iter()
            .zip(&self.branch_r)
            .filter(|(&t, _)| t >= T::zero() && t < apex_t)
            .map(|(_, &p)| p)
            .collect();
        pts.push(self.apex_point()?);
        Some(pts)
    }

    /// Closed loop formed by the two branches meeting at the apex, completed by the
    /// straight-state contact chord. `None` when there is no apex.
    pub fn closed_contour(&self) -> Option<Vec<Vec2<T>>> {
        let arch = self.right_arch()?;
        let mut loop_pts = arch.clone();
        // left half is the mirror image, walked back down from the apex
        loop_pts.extend(arch.iter().rev().skip(1).map(|p| p.mirror_x()));
        Some(loop_pts)
    }

    /// Closure criterion: an apex inside the sweep, a simple right arch that stays
    /// strictly on `x > 0` before the apex, and a simple closed loop.
    fn closure_holds(&self) -> bool {
        let Some(arch) = self.right_arch() else {
            return false;
        };
        let before_apex = &arch[..arch.len() - 1];
        if !before_apex.iter().all(|p| p.x > T::zero()) {
            return false;
        }
        if !polygon::polyline_is_simple(&arch) {
            return false;
        }
        self.closed_contour().is_some_and(|c| polygon::is_simple(&c))
    }

    /// Load-bearing outline of the lower segment's head over `±theta_max`.
    ///
    /// Bending toward `−x` puts the load on `P_L`, bending toward `+x` on `P_R`,
    /// so the outline runs along `P_R(θ ≤ 0)`, across the straight-state contact
    /// chord, down `P_L(θ ≥ 0)`, and closes through the body to the origin plane.
    /// Returned anticlockwise.
    pub fn head_outline(&self) -> Vec<Vec2<T>> {
        let tmax = self.design.theta_max;
        let mut right: Vec<Vec2<T>> = Vec::new();
        right.push(contact_pair_unchecked(&self.design, -tmax).right);
        for (&t, &p) in self.theta_samples.iter().zip(&self.branch_r) {
            if t > -tmax && t <= T::zero() {
                right.push(p);
            }
        }
        let bottom = right[0];
        let mut pts = vec![Vec2::new(bottom.x, T::zero())];
        pts.extend(right.iter().copied());
        // left shoulder is the mirror image, walked from the chord end outward
        pts.extend(right.iter().rev().map(|p| p.mirror_x()));
        pts.push(Vec2::new(-bottom.x, T::zero()));
        pts
    }

    /// Upper segment's mating outline in its own frame: each lower contact point
    /// carried into the upper frame at the deflection it is in contact.
    pub fn mating_outline(&self) -> Vec<Vec2<T>> {
        self.head_outline().iter().map(|p| p.mirror_y()).collect()
    }
}

/// Expresses a lower-frame point in the upper segment's frame at deflection `theta`.
pub fn to_upper_frame<T: Scalar>(half_pitch: T, theta: T, p: Vec2<T>) -> Vec2<T> {
    upper_pose_unchecked(half_pitch, theta).to_transform().inverse().apply(p)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InterferenceReport<T> {
    pub theta: T,
    /// Area shared by the two solids, mm².
    pub overlap_area: T,
    /// Deepest vertex of either outline inside the other, mm.
    pub max_penetration: T,
    pub lower: Vec<Vec2<T>>,
    pub upper: Vec<Vec2<T>>,
}

impl<T: Scalar> InterferenceReport<T> {
    /// Overlap at or below the touching tolerance.
    pub fn is_clear(&self) -> bool {
        self.overlap_area <= T::lit(TOUCH_AREA)
    }
}

/// Overlap area below which two solids are considered merely touching, mm².
pub const TOUCH_AREA: f64 = 1e-9;

pub fn check_interference<T: Scalar>(profile: &JointProfile<T>, theta: T) -> Result<InterferenceReport<T>, ProfileError> {
    check_angle(theta, profile.design.theta_max)?;
    let lower = profile.head_outline();
    if !polygon::is_simple(&lower) {
        return Err(ProfileError::Structural("head outline"));
    }
    let placement = upper_pose_unchecked(profile.design.half_pitch, theta).to_transform();
    let upper: Vec<_> = profile.mating_outline().iter().map(|&p| placement.apply(p)).collect();
    if !polygon::is_simple(&upper) {
        return Err(ProfileError::Structural("mating outline"));
    }
    let overlap_area = polygon::intersection_area(&lower, &upper);
    let max_penetration = polygon::max_penetration(&lower, &upper);
    Ok(InterferenceReport { theta, overlap_area, max_penetration, lower, upper })
}

/// Outcome of the critical normalization-factor search.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalN<T> {
    pub value: T,
    pub tolerance: T,
    pub half_pitch: T,
    pub theta_max: T,
    pub reference: f64,
    /// `value − reference`.
    pub deviation: f64,
    /// Contour closure angle at the reference value, rad.
    pub reference_apex: Option<f64>,
    pub evaluations: usize,
    pub criterion: &'static str,
}

pub const CLOSURE_CRITERION: &str = "closed: P_R.x(theta) changes sign at some theta_apex in (0, theta_max]; \
the right arch P_R([0, theta_apex]) is a simple polyline and stays on x > 0 before the apex; \
the loop arch + mirrored arch + straight contact chord is a simple polygon. \
N* is the supremum of N in (0, 2) for which the contour swept over +/-theta_max is closed.";

/// Bisects the largest `N` whose contour, swept over `±theta_max`, closes.
///
/// A coarse scan brackets the boundary; bisection then shrinks it below
/// `tolerance`. The returned value is the valid end of the final bracket.
pub fn find_critical_n<T: Scalar>(half_pitch: T, theta_max: T, tolerance: T) -> Result<CriticalN<T>, ProfileError> {
    if !(tolerance >= T::lit(1e-6)) {
        return Err(ProfileError::Tolerance(tolerance.to_f64_lossy()));
    }
    JointDesign::new(half_pitch, T::one(), theta_max)?;
    let mut evaluations = 0usize;
    let mut closed = |n: T| -> Result<bool, ProfileError> {
        evaluations += 1;
        let design = JointDesign::new(half_pitch, n, theta_max)?;
        Ok(generate_profile(&design, theta_max, DEFAULT_SAMPLES)?.closed)
    };

    const GRID: usize = 64;
    let step = T::lit(2.0 / GRID as f64);
    let mut lo = None;
    let mut hi = None;
    for k in 1..GRID {
        let n = step * T::lit(k as f64);
        let ok = closed(n)?;
        match (ok, lo) {
            (true, _) => lo = Some(n),
            (false, Some(_)) => {
                hi = Some(n);
                break;
            }
            (false, None) => {}
        }
    }
    let mut lo = lo.ok_or(ProfileError::NeverSatisfied)?;
    let mut hi = hi.ok_or(ProfileError::AlwaysSatisfied)?;
    while hi - lo > tolerance {
        let mid = (lo + hi) / T::lit(2.0);
        if closed(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    let reference_apex = JointDesign::new(half_pitch, T::lit(REFERENCE_N), T::FRAC_PI_2())
        .and_then(|d| generate_profile(&d, T::FRAC_PI_2(), DEFAULT_SAMPLES))
        .ok()
        .and_then(|p| p.theta_apex)
        .map(|t| t.to_f64_lossy());

    Ok(CriticalN {
        value: lo,
        tolerance,
        half_pitch,
        theta_max,
        reference: REFERENCE_N,
        deviation: lo.to_f64_lossy() - REFERENCE_N,
        reference_apex,
        evaluations,
        criterion: CLOSURE_CRITERION,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_6};

    fn design(n: f64) -> JointDesign<f64> {
        JointDesign::new(3.5, n, FRAC_PI_4).unwrap()
    }

    #[test]
    fn design_validation() {
        assert!(JointDesign::new(0.0, 0.6, FRAC_PI_4).is_err());
        assert!(matches!(JointDesign::new(3.5, 2.0, FRAC_PI_4), Err(ProfileError::Normalization(_))));
        assert!(matches!(JointDesign::new(3.5, 0.6, 1.6), Err(ProfileError::ThetaMax(_))));
        assert_eq!(design(0.6).contact_chord(), 0.6 * 3.5);
    }

    #[test]
    fn circular_baseline_values() {
        let b = circular_baseline(3.5, FRAC_PI_6).unwrap();
        assert!((b.radius.unwrap() - 6.531_088_913_245_535).abs() < 1e-12);
        assert!((b.arc_len - 3.419_670_158_298_987).abs() < 1e-12);
        assert!((b.tip.x + 0.875).abs() < 1e-12);
        assert!((b.tip.y - 3.265_544_456_622_768).abs() < 1e-12);
        assert!((b.shortening - 0.080_329_841_701_013).abs() < 1e-12);

        let s = circular_baseline(3.5, 0.0).unwrap();
        assert_eq!(s.radius, None);
        assert_eq!(s.arc_len, 3.5);
        assert_eq!(s.tip, Vec2::new(0.0, 3.5));

        let m = circular_baseline(3.5, -FRAC_PI_6).unwrap();
        assert_eq!(m.arc_len, b.arc_len);
        assert_eq!(m.tip, b.tip.mirror_x());
        assert!(circular_baseline(3.5, 1.6).is_err());
    }

    #[test]
    fn circular_closed_forms_match_radius_form() {
        for k in 1..40 {
            let t = k as f64 * 0.039;
            let b = circular_baseline(3.5, t).unwrap();
            let r = b.radius.unwrap();
            assert!((b.tip.x - r * (t.cos() - 1.0)).abs() < 1e-12);
            assert!((b.tip.y - r * t.sin()).abs() < 1e-12);
            assert!(b.shortening >= 0.0 && b.tip.x <= 0.0);
        }
    }

    #[test]
    fn contact_pair_values() {
        let c = contact_pair(&design(0.6), FRAC_PI_6).unwrap();
        assert!((c.midpoint.x + 0.455_538_146_940_802).abs() < 1e-12);
        assert!((c.midpoint.y - 3.460_155_753_128_792).abs() < 1e-12);
        assert!((c.left.x + 1.469_760_264_544_324).abs() < 1e-12);
        assert!((c.left.y - 3.188_395_755_771_146).abs() < 1e-12);
        assert!((c.right.x - 0.558_683_970_662_719).abs() < 1e-12);
        assert!((c.right.y - 3.731_915_750_486_439).abs() < 1e-12);
        assert!((c.right.dist(c.left) - 2.1).abs() < 1e-12);

        let straight = contact_pair(&design(0.6), 0.0).unwrap();
        assert_eq!(straight.left, Vec2::new(-1.05, 3.5));
        assert_eq!(straight.right, Vec2::new(1.05, 3.5));
        assert_eq!(straight.radius, None);

        let neg = contact_pair(&design(0.6), -FRAC_PI_6).unwrap();
        assert_eq!(neg.left, c.right.mirror_x());
    }

    #[test]
    fn deflect_transform_reproduces_contacts() {
        let d = design(0.6);
        let h = d.contact_chord() / 2.0;
        for &t in &[0.0, 1e-7, 0.2, FRAC_PI_6, -1.1, FRAC_PI_2] {
            let tf = deflect_transform(d.half_pitch, t).unwrap();
            let c = contact_pair(&d, t).unwrap();
            assert!(tf.apply(Vec2::new(h, 0.0)).dist(c.right) <= 1e-12);
            assert!(tf.apply(Vec2::new(-h, 0.0)).dist(c.left) <= 1e-12);
            assert!((tf.rotation_det() - 1.0).abs() < 1e-15);
        }
        let id = deflect_transform(3.5, 0.0).unwrap();
        assert_eq!(id.translation(), Vec2::new(0.0, 3.5));
        assert_eq!(id.m[0][0], 1.0);
        assert_eq!(id.m[0][1], 0.0);
    }

    #[test]
    fn upper_pose_values() {
        let p = upper_segment_pose(3.5, FRAC_PI_6).unwrap();
        assert!((p.position.x + 1.791_108_415_861_575).abs() < 1e-12);
        assert!((p.position.y - 6.684_507_609_859_604).abs() < 1e-12);
        assert!((p.position.norm() - 6.920_311_506_257_585).abs() < 1e-12);
        assert_eq!(p.orientation, FRAC_PI_6);
        let s = upper_segment_pose(3.5, 0.0).unwrap();
        assert_eq!(s.position, Vec2::new(0.0, 7.0));
    }

    #[test]
    fn centerline_span_is_two_l() {
        let d = design(0.6);
        assert_eq!(centerline_span(&d, 0.0).unwrap(), 7.0);
        for &t in &[FRAC_PI_6, FRAC_PI_4, -0.3, 1e-5] {
            assert!((centerline_span(&d, t).unwrap() - 7.0).abs() <= 1e-14);
        }
        assert!((circular_span(3.5, FRAC_PI_6).unwrap() - 6.839_340_316_597_973).abs() < 1e-12);
        assert!((circular_span(3.5, FRAC_PI_4).unwrap() - 6.636_416_142_779_64).abs() < 1e-12);
    }

    #[test]
    fn profile_apex_and_closure() {
        // P_R.x changes sign between 1.0 and 1.1 rad
        let d = design(0.6);
        let x = |t: f64| contact_pair(&d, t).unwrap().right.x;
        assert!(x(1.0) > 0.0 && x(1.1) < 0.0);

        let p = generate_profile(&d, FRAC_PI_2, 256).unwrap();
        let apex = p.apex().unwrap();
        assert!((apex - 1.059_959_607_921_465).abs() < 1e-9);
        assert!(p.closed && p.simple);
        let mid = p.theta_samples.len() / 2;
        assert_eq!(p.theta_samples[mid], 0.0);
        assert_eq!(p.branch_r[mid], Vec2::new(1.05, 3.5));
        assert_eq!(p.branch_l[mid], Vec2::new(-1.05, 3.5));
    }

    #[test]
    fn branches_are_exact_mirrors() {
        let p = generate_profile(&design(0.6), FRAC_PI_2, 256).unwrap();
        let n = p.theta_samples.len();
        for i in 0..n {
            assert_eq!(p.theta_samples[i], -p.theta_samples[n - 1 - i]);
            assert_eq!(p.branch_l[i], p.branch_r[n - 1 - i].mirror_x());
        }
    }

    #[test]
    fn no_apex_in_short_sweep() {
        let p = generate_profile(&design(0.6), FRAC_PI_4, 256).unwrap();
        assert!(p.theta_apex.is_none());
        assert!(!p.closed);
        assert!(matches!(p.apex(), Err(ProfileError::NoApexInSweep(_))));
        assert!(p.closed_contour().is_none());
    }

    #[test]
    fn profile_argument_errors() {
        let d = design(0.6);
        assert!(matches!(generate_profile(&d, FRAC_PI_2, 8), Err(ProfileError::TooFewSamples(8))));
        assert!(matches!(generate_profile(&d, 0.5, 64), Err(ProfileError::Sweep { .. })));
    }

    #[test]
    fn critical_n_against_closed_form() {
        // contour over ±θmax closes exactly when P_R.x(θmax) = 0:
        // N = 4(1 − cos(θmax/2)) / (θmax·cos(θmax/2))
        let c = find_critical_n(3.5, FRAC_PI_4, 1e-4).unwrap();
        assert!((c.value - 0.419_620_030_360_064).abs() < 1e-4);
        assert!(c.value <= 0.419_620_030_360_064 + 1e-12);
        let c2 = find_critical_n(7.0, FRAC_PI_4, 1e-4).unwrap();
        assert_eq!(c.value, c2.value);
        assert!((c.reference_apex.unwrap() - 1.059_959_607_921_465).abs() < 1e-9);
    }

    #[test]
    fn critical_n_boundary() {
        let c = find_critical_n(3.5, FRAC_PI_4, 1e-4).unwrap();
        let above = JointDesign::new(3.5, c.value + 0.1, FRAC_PI_4).unwrap();
        assert!(!generate_profile(&above, FRAC_PI_4, 256).unwrap().closed);
        let at = JointDesign::new(3.5, c.value, FRAC_PI_4).unwrap();
        assert!(generate_profile(&at, FRAC_PI_4, 256).unwrap().closed);
    }

    #[test]
    fn critical_n_argument_errors() {
        assert!(matches!(find_critical_n(3.5, FRAC_PI_4, 1e-8), Err(ProfileError::Tolerance(_))));
        assert!(find_critical_n(-1.0, FRAC_PI_4, 1e-4).is_err());
    }

    #[test]
    fn straight_state_touches_only() {
        let p = generate_profile(&design(0.6), FRAC_PI_2, 256).unwrap();
        let r = check_interference(&p, 0.0).unwrap();
        assert!(r.overlap_area <= TOUCH_AREA, "{}", r.overlap_area);
        assert!(r.is_clear());
    }

    #[test]
    fn over_wide_contour_interferes() {
        let p = generate_profile(&design(1.5), FRAC_PI_2, 256).unwrap();
        let r = check_interference(&p, FRAC_PI_4).unwrap();
        assert!(r.overlap_area > 0.0 && r.max_penetration > 0.0);
    }

    #[test]
    fn interference_angle_is_bounded_by_theta_max() {
        let p = generate_profile(&design(0.6), FRAC_PI_2, 256).unwrap();
        assert!(matches!(check_interference(&p, 0.9), Err(ProfileError::AngleOutOfRange { .. })));
    }

    #[test]
    fn contact_points_lie_on_mating_outline() {
        let d = design(0.6);
        let p = generate_profile(&d, FRAC_PI_2, 256).unwrap();
        let mating = p.mating_outline();
        for (&t, &pr) in p.theta_samples.iter().zip(&p.branch_r) {
            if t < -d.theta_max || t > 0.0 {
                continue;
            }
            let q = to_upper_frame(d.half_pitch, t, pr);
            let (dist, _) = polygon::dist_to_boundary(q, &mating);
            assert!(dist <= 1e-6 * d.half_pitch, "θ={t} dist={dist}");
        }
    }

    #[test]
    fn single_precision_instance() {
        let d = JointDesign::new(3.5_f32, 0.6, std::f32::consts::FRAC_PI_4).unwrap();
        let c = contact_pair(&d, std::f32::consts::FRAC_PI_6).unwrap();
        assert!((c.right.dist(c.left) - 2.1).abs() < 1e-5);
        assert!((c.right.x - 0.558_684).abs() < 1e-5);
    }
}
