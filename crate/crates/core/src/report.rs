//! One-shot regeneration of every reference artifact from a spec document.
//!
//! Output is a list of `(file name, bytes)` that depends only on the spec, the
//! lumen path and the seed.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::chain::{
    centerline_audit, symmetric_grid, tendon_lengths, workspace, ChainError, ConfigState, ManipulatorSpec, Tendon,
};
use crate::export::{self, fmt_g, ExportError};
use crate::geom::{Pose3, Rot3, Vec2, Vec3};
use crate::lumen::{auto_steer, AngleGrid, LumenError, LumenPath};
use crate::profile::{check_interference, find_critical_n, generate_profile, ProfileError, DEFAULT_SAMPLES};
use crate::specfile::{SpecError, SpecFile};
use crate::spin::{
    default_target_plane, footprint, monte_carlo_area, monte_carlo_union_area, plan_coverage, CoverageSetup, JetCone,
    SpinError, TargetPlane,
};

#[derive(Debug, Error)]
pub enum ReportError {
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Lumen(#[from] LumenError),
    #[error(transparent)]
    Spin(#[from] SpinError),
    #[error(transparent)]
    Export(#[from] ExportError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifact {
    pub name: &'static str,
    pub bytes: Vec<u8>,
}

/// Monte-Carlo sample count for the area oracles.
pub const MC_SAMPLES: usize = 100_000;

/// Interference scan step, degrees.
pub const INTERFERENCE_STEP_DEG: f64 = 0.5;

pub fn generate(spec_file: &SpecFile, path: &LumenPath<f64>, seed: u64) -> Result<Vec<Artifact>, ReportError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spec = spec_file.manipulator_spec()?;
    let design = spec.joint_design;
    let mut out = Vec::new();
    let mut summary = String::new();
    let _ = writeln!(summary, "seed {seed}");

    let profile = generate_profile(&design, std::f64::consts::FRAC_PI_2, DEFAULT_SAMPLES)?;
    out.push(Artifact { name: "profile.svg", bytes: export::profile_svg(&profile).into_bytes() });
    out.push(Artifact { name: "profile.csv", bytes: export::profile_csv(&profile)?.into_bytes() });
    let _ = writeln!(
        summary,
        "profile: L={} N={} apex_rad={} closed={}",
        fmt_g(design.half_pitch),
        fmt_g(design.norm_factor),
        profile.theta_apex.map_or("none".into(), fmt_g),
        profile.closed
    );

    let crit = find_critical_n(design.half_pitch, design.theta_max, 1e-4)?;
    let mut text = String::new();
    let _ = writeln!(text, "N* = {}", fmt_g(crit.value));
    let _ = writeln!(text, "reference N = {}", fmt_g(crit.reference));
    let _ = writeln!(text, "deviation = {}", fmt_g(crit.deviation));
    let _ = writeln!(text, "tolerance = {}", fmt_g(crit.tolerance));
    let _ = writeln!(text, "theta_max = {} rad", fmt_g(crit.theta_max));
    if let Some(a) = crit.reference_apex {
        let _ = writeln!(text, "reference N closes at theta = {} rad ({} deg)", fmt_g(a), fmt_g(a.to_degrees()));
    }
    let _ = writeln!(text, "criterion: {}", crit.criterion);
    out.push(Artifact { name: "critical_n.txt", bytes: text.into_bytes() });
    let _ = writeln!(summary, "critical N: {} (reference {})", fmt_g(crit.value), fmt_g(crit.reference));

    let mut rows = String::from("theta_deg,overlap_mm2,penetration_mm\n");
    let steps = (design.theta_max.to_degrees() / INTERFERENCE_STEP_DEG).round() as i64;
    let mut worst = 0.0f64;
    for k in -steps..=steps {
        let deg = k as f64 * INTERFERENCE_STEP_DEG;
        let theta = deg.to_radians().clamp(-design.theta_max, design.theta_max);
        let r = check_interference(&profile, theta)?;
        worst = worst.max(r.overlap_area);
        let _ = writeln!(rows, "{},{},{}", fmt_g(deg), fmt_g(r.overlap_area), fmt_g(r.max_penetration));
    }
    out.push(Artifact { name: "interference.csv", bytes: rows.into_bytes() });
    let _ = writeln!(summary, "interference: max overlap {} mm2", fmt_g(worst));

    let grid = symmetric_grid(spec.section_limit, 13);
    let ws = workspace(&spec, &grid, &grid)?;
    out.push(Artifact { name: "workspace.csv", bytes: export::workspace_csv(&ws)?.into_bytes() });
    let b = ws.max_bend;
    let _ = writeln!(
        summary,
        "workspace max bend deg: up {} down {} left {} right {}",
        fmt_g(b.up.to_degrees()),
        fmt_g(b.down.to_degrees()),
        fmt_g(b.left.to_degrees()),
        fmt_g(b.right.to_degrees())
    );

    let mut configs = vec![
        ConfigState::straight(&spec),
        ConfigState::from_sections(&spec, [spec.section_limit, 0.0]),
        ConfigState::from_sections(&spec, [0.0, spec.section_limit]),
    ];
    configs.extend(random_configs(&spec, 100, &mut rng));
    let audit = centerline_audit(&spec, &configs)?;
    out.push(Artifact { name: "audit.csv", bytes: export::audit_csv(&audit)?.into_bytes() });
    let _ = writeln!(
        summary,
        "audit: max deviation {} mm, circular section bend {} mm",
        fmt_g(audit.max_deviation),
        fmt_g(audit.rows[1].circular_deviation)
    );

    let mut rows = String::from("section,alpha_rad,up_mm,down_mm,left_mm,right_mm\n");
    for s in 0..2 {
        for a in symmetric_grid(spec.section_limit, 61) {
            let mut alpha = [0.0; 2];
            alpha[s] = a;
            let t = tendon_lengths(&spec, &ConfigState::from_sections(&spec, alpha))?;
            let d: Vec<String> = Tendon::ALL.iter().map(|&k| fmt_g(t.displacement(k))).collect();
            let _ = writeln!(rows, "{},{},{}", s + 1, fmt_g(a), d.join(","));
        }
    }
    out.push(Artifact { name: "tendon.csv", bytes: rows.into_bytes() });

    let half = spec_file.spin.half_angle;
    let range = spec_file.spin.range;
    let mut text = String::new();
    let square = JetCone::new(Pose3::identity(), half, range)?;
    let plane = TargetPlane::new(Vec3::new(0.0, 0.0, range), Vec3::unit_z())?;
    let fp = footprint(&square, &plane)?;
    let _ = writeln!(text, "perpendicular: distance {} mm radius {} mm area {} mm2", fmt_g(range), fmt_g(fp.semi_major), fmt_g(fp.area));
    let tilt = 30f64.to_radians();
    let tilted = JetCone::new(Pose3::new(Rot3::from_axis_angle(Vec3::unit_y(), tilt), Vec3::zero()), half, range)?;
    let plane = TargetPlane::new(Vec3::new(0.0, 0.0, range * tilt.cos()), Vec3::unit_z())?;
    let fp = footprint(&tilted, &plane)?;
    let mc = monte_carlo_area(&tilted, &plane, MC_SAMPLES, &mut rng)?;
    let _ = writeln!(
        text,
        "tilted 30 deg: a {} mm b {} mm area {} mm2 monte_carlo {} mm2 relative_error {}",
        fmt_g(fp.semi_major),
        fmt_g(fp.semi_minor),
        fmt_g(fp.area),
        fmt_g(mc),
        fmt_g((mc - fp.area).abs() / fp.area)
    );
    out.push(Artifact { name: "footprint.txt", bytes: text.into_bytes() });

    let (targets, setup) = line_sweep(&spec, spec_file, 5)?;
    let plan = plan_coverage(&spec, &targets, &setup)?;
    out.push(Artifact { name: "schedule.csv", bytes: export::schedule_csv(&plan)?.into_bytes() });
    let prints: Vec<_> = plan.waypoints.iter().filter_map(|w| w.footprint.clone()).collect();
    let mc_union = monte_carlo_union_area(&prints, MC_SAMPLES, &mut rng);
    let mut text = String::new();
    let _ = writeln!(text, "waypoints {} unreachable {:?}", plan.waypoints.len(), plan.unreachable);
    let _ = writeln!(text, "region_area_mm2 {}", fmt_g(plan.region_area));
    let _ = writeln!(text, "coverage {}", fmt_g(plan.coverage));
    let _ = writeln!(text, "overspray_mm2 {}", fmt_g(plan.overspray));
    let _ = writeln!(text, "union_area_raster_mm2 {}", fmt_g(plan.union_area));
    let _ = writeln!(text, "union_area_monte_carlo_mm2 {}", fmt_g(mc_union));
    let _ = writeln!(text, "sum_of_areas_mm2 {}", fmt_g(prints.iter().map(|f| f.area).sum::<f64>()));
    let _ = writeln!(text, "cell_mm {}", fmt_g(plan.cell));
    let _ = writeln!(
        text,
        "params {} kV, {} mL/h, {}, {} mm",
        fmt_g(plan.params.voltage_kv),
        fmt_g(plan.params.feed_ml_per_h),
        plan.params.solution,
        fmt_g(plan.params.distance_mm)
    );
    out.push(Artifact { name: "coverage.txt", bytes: text.into_bytes() });
    let _ = writeln!(summary, "coverage: {} of region, union {} mm2", fmt_g(plan.coverage), fmt_g(plan.union_area));

    let depths: Vec<f64> = (0..5).map(|i| 10.0 * i as f64).collect();
    let trace = auto_steer(path, &spec, &depths, &AngleGrid::degrees(30.0, 2.0), 4)?;
    out.push(Artifact { name: "trace.csv", bytes: export::trace_csv(&trace)?.into_bytes() });
    let passable = trace.iter().filter(|r| r.passable).count();
    let _ = writeln!(summary, "autosteer: {passable}/{} depths passable", trace.len());

    out.push(Artifact { name: "summary.txt", bytes: summary.into_bytes() });
    Ok(out)
}

/// Configs with every joint drawn uniformly within its limit.
pub fn random_configs<R: Rng>(spec: &ManipulatorSpec<f64>, count: usize, rng: &mut R) -> Vec<ConfigState<f64>> {
    let limit = spec.joint_design.theta_max;
    (0..count)
        .map(|_| ConfigState { joint_angles: (0..spec.joint_count()).map(|_| rng.gen_range(-limit..=limit)).collect() })
        .collect()
}

/// [`random_configs`] drawn from a fresh seeded generator.
pub fn seeded_configs(spec: &ManipulatorSpec<f64>, count: usize, seed: u64) -> Vec<ConfigState<f64>> {
    random_configs(spec, count, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// `n` targets on a line across the default target plane, spaced one footprint
/// radius apart so neighbouring footprints overlap by about half, and a
/// rectangular region around them.
pub fn line_sweep(
    spec: &ManipulatorSpec<f64>,
    spec_file: &SpecFile,
    n: usize,
) -> Result<(Vec<Vec3<f64>>, CoverageSetup<f64>), ReportError> {
    let distance = spec_file.spin.distance;
    let half = spec_file.spin.half_angle;
    let plane = default_target_plane(spec, distance);
    let radius = distance * half.tan();
    let mid = (n as f64 - 1.0) / 2.0;
    let targets = (0..n).map(|i| plane.to_world(Vec2::new((i as f64 - mid) * radius, 0.0))).collect();
    let x = (mid + 0.5) * radius;
    let y = 0.6 * radius;
    let region = vec![Vec2::new(-x, -y), Vec2::new(x, -y), Vec2::new(x, y), Vec2::new(-x, y)];
    let setup = CoverageSetup {
        plane,
        half_angle: half,
        // off-axis waypoints sit slightly beyond the nominal spun distance
        range: spec_file.spin.range * 1.5,
        region,
        dwell_s: 60.0,
        cell: 0.5,
        params: spec_file.spin_params(),
    };
    Ok((targets, setup))
}
