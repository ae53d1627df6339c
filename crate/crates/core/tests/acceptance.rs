//! Acceptance checks. Each test prints one `PASS`/`FAIL` line and then asserts.
//!
//! Run with `cargo test -p ncjoint --test acceptance -- --nocapture --test-threads 1`
//! to see the lines in order.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_6};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ncjoint::chain::{
    actuate, actuate_displacement, centerline_audit, forward_kinematics, section_pull, symmetric_grid, tendon_lengths,
    ConfigState, ManipulatorSpec, Tendon,
};
use ncjoint::lumen::{auto_steer, clearance, AngleGrid, InsertionState, LumenPath};
use ncjoint::profile::{
    check_interference, circular_baseline, contact_pair, deflect_transform, find_critical_n, generate_profile, JointDesign,
    CLOSURE_CRITERION, DEFAULT_SAMPLES, REFERENCE_N,
};
use ncjoint::report::{self, line_sweep, seeded_configs, MC_SAMPLES};
use ncjoint::specfile::SpecFile;
use ncjoint::spin::{
    aim_at, footprint, monte_carlo_area, monte_carlo_union_area, plan_coverage, rasterize, AimOptions, JetCone, TargetPlane,
};
use ncjoint::{Pose3, Rot3, Vec2, Vec3};

const L: f64 = 3.5;
const N: f64 = 0.6;
const SEED: u64 = 1;

fn verdict(id: u32, title: &str, ok: bool, detail: String) {
    println!("{} {id:>2} {title}: {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "{title}: {detail}");
}

fn design() -> JointDesign<f64> {
    JointDesign::new(L, N, FRAC_PI_4).unwrap()
}

fn spec() -> ManipulatorSpec<f64> {
    ManipulatorSpec::table_default()
}

/// 1000 angles from 1e-4 to π/2 inclusive.
fn grid() -> Vec<f64> {
    let (a, b) = (1e-4, FRAC_PI_2);
    (0..1000).map(|i| a + (b - a) * i as f64 / 999.0).collect()
}

#[test]
fn c01_chord_constancy() {
    let d = design();
    let start = Instant::now();
    let mut worst = 0.0f64;
    for t in grid() {
        let p = contact_pair(&d, t).unwrap();
        worst = worst.max((p.right.dist(p.left) - 2.1).abs() / 2.1);
    }
    let elapsed = start.elapsed();
    verdict(
        1,
        "chord constancy",
        worst <= 1e-12 && elapsed < Duration::from_secs(1),
        format!("max relative error {worst:.3e} (<= 1e-12), {:.3} s (< 1 s)", elapsed.as_secs_f64()),
    );
}

#[test]
fn c02_perpendicular_bisection() {
    let d = design();
    let (mut dot, mut arc) = (0.0f64, 0.0f64);
    for t in grid() {
        let p = contact_pair(&d, t).unwrap();
        let chord = p.right - p.left;
        let tangent = Vec2::new(-(t / 2.0).sin(), (t / 2.0).cos());
        dot = dot.max((chord.dot(tangent) / chord.norm()).abs());
        let r = p.radius.expect("bent state has a radius");
        arc = arc.max((r * t / 2.0 - L).abs());
    }
    verdict(
        2,
        "perpendicular bisection",
        dot <= 1e-12 && arc <= 1e-12,
        format!("max |normalized dot| {dot:.3e}, max |arc to midpoint - L| {arc:.3e} mm (<= 1e-12)"),
    );
}

#[test]
fn c03_transform_consistency() {
    let d = design();
    let half = d.contact_chord() / 2.0;
    let mut worst = 0.0f64;
    for t in grid() {
        let p = contact_pair(&d, t).unwrap();
        let m = deflect_transform(L, t).unwrap();
        let r = m.apply(Vec2::new(half, 0.0)) - p.right;
        let l = m.apply(Vec2::new(-half, 0.0)) - p.left;
        worst = worst.max(r.x.abs()).max(r.y.abs()).max(l.x.abs()).max(l.y.abs());
    }
    verdict(3, "deflection transform vs contact loci", worst <= 1e-12, format!("max component error {worst:.3e} mm (<= 1e-12)"));
}

#[test]
fn c04_contact_spot_values() {
    let p = contact_pair(&design(), FRAC_PI_6).unwrap();
    let err = [
        (p.left.x + 1.4698).abs(),
        (p.left.y - 3.1884).abs(),
        (p.right.x - 0.5587).abs(),
        (p.right.y - 3.7319).abs(),
    ]
    .into_iter()
    .fold(0.0f64, f64::max);
    verdict(
        4,
        "contact points at 30 deg",
        err <= 5e-4,
        format!(
            "P_L ({:.6}, {:.6}) P_R ({:.6}, {:.6}), max error {err:.2e} mm (<= 5e-4)",
            p.left.x, p.left.y, p.right.x, p.right.y
        ),
    );
}

#[test]
fn c05_circular_baseline_defect() {
    let b = circular_baseline(L, FRAC_PI_6).unwrap();
    let straight = circular_baseline(L, 0.0).unwrap();
    let e1 = (b.shortening - 0.08033).abs();
    let e2 = (straight.arc_len - L).abs();
    verdict(
        5,
        "circular-joint shortening",
        e1 <= 1e-5 && e2 <= 1e-8,
        format!("shortening {:.7} mm (error {e1:.1e} <= 1e-5), straight arc error {e2:.1e} mm (<= 1e-8)", b.shortening),
    );
}

#[test]
fn c06_critical_n_search() {
    let start = Instant::now();
    let c = find_critical_n(L, FRAC_PI_4, 1e-4).unwrap();
    let elapsed = start.elapsed();
    let ok = c.value > 0.0 && c.value < 2.0 && elapsed < Duration::from_secs(5);
    println!("     criterion: {CLOSURE_CRITERION}");
    verdict(
        6,
        "critical N search",
        ok,
        format!(
            "N* = {:.6} vs reference {REFERENCE_N} (deviation {:+.4}, documented finding), {:.3} s (< 5 s)",
            c.value,
            c.deviation,
            elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn c07_interference_free_quarter_turn() {
    let d = design();
    let start = Instant::now();
    let profile = generate_profile(&d, FRAC_PI_2, DEFAULT_SAMPLES).unwrap();
    let (mut worst, mut at) = (0.0f64, 0.0f64);
    for k in -90..=90 {
        let deg = k as f64 * 0.5;
        let r = check_interference(&profile, deg.to_radians().clamp(-FRAC_PI_4, FRAC_PI_4)).unwrap();
        if r.overlap_area > worst {
            worst = r.overlap_area;
            at = deg;
        }
    }
    let elapsed = start.elapsed();
    verdict(
        7,
        "interference-free over +/-45 deg",
        worst <= 1e-6 && elapsed < Duration::from_secs(10),
        format!("max overlap {worst:.6e} mm2 at {at} deg (<= 1e-6), {:.3} s (< 10 s)", elapsed.as_secs_f64()),
    );
}

#[test]
fn c08_centerline_audit() {
    let s = spec();
    let random = centerline_audit(&s, &seeded_configs(&s, 100, SEED)).unwrap();
    let bent = centerline_audit(&s, &[ConfigState::from_sections(&s, [30f64.to_radians(), 0.0])]).unwrap();
    let circ = bent.rows[0].circular_deviation.abs();
    let ok = random.max_deviation <= 1e-9 && (circ - 0.0133).abs() <= 1e-4 && bent.max_deviation <= 1e-9;
    verdict(
        8,
        "centerline length audit",
        ok,
        format!(
            "max deviation {:.3e} mm over 100 configs (<= 1e-9), circular 6x5 deg shortening {circ:.6} mm (0.0133 +/- 1e-4)",
            random.max_deviation
        ),
    );
}

/// Closed-form tip of a chain whose joints `first..first + m` all bend by
/// `theta` in one plane: straight run, one arc of angle `m·θ`, straight run.
fn arc_chain_tip(s: &ManipulatorSpec<f64>, section: usize, m: usize, theta: f64) -> Vec3<f64> {
    let sinc = |x: f64| if x == 0.0 { 1.0 } else { x.sin() / x };
    let pitch = 2.0 * L;
    let before = pitch * (section * 6) as f64;
    let arc = pitch * m as f64;
    let after = pitch * (12 - section * 6 - m) as f64 + s.rigid_extra;
    let phi = m as f64 * theta;
    // planar: x opposite the bend direction, y along the straight axis
    let x = -arc * (phi / 2.0) * sinc(phi / 2.0).powi(2) - after * phi.sin();
    let y = before + arc * sinc(phi) + after * phi.cos();
    if section == 0 {
        Vec3::new(0.0, -x, y)
    } else {
        Vec3::new(-x, 0.0, y)
    }
}

#[test]
fn c09_constant_curvature_fk() {
    let s = spec();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let section = rng.gen_range(0..2usize);
        let m = rng.gen_range(1..=6usize);
        let theta = rng.gen_range(-FRAC_PI_4..=FRAC_PI_4);
        let mut c = ConfigState::straight(&s);
        for j in 0..m {
            c.joint_angles[section * 6 + j] = theta;
        }
        let tip = forward_kinematics(&s, &c).unwrap().tip.trans;
        worst = worst.max(tip.dist(arc_chain_tip(&s, section, m, theta)));
    }
    // extended-precision matrix composition, frozen
    let frozen = [
        (0, 6, 5.0, Vec3::new(0.0, 33.246_650_495_169_45, 79.078_188_829_457_36)),
        (1, 6, -7.5, Vec3::new(-17.784_095_943_838_02, 0.0, 81.934_605_622_158_1)),
        (0, 3, 12.0, Vec3::new(0.0, 45.176_963_423_575_84, 73.040_396_588_307_96)),
    ];
    let mut frozen_worst = 0.0f64;
    for (section, m, deg, want) in frozen {
        let mut c = ConfigState::straight(&s);
        for j in 0..m {
            c.joint_angles[section * 6 + j] = f64::to_radians(deg);
        }
        frozen_worst = frozen_worst.max(forward_kinematics(&s, &c).unwrap().tip.trans.dist(want));
    }
    verdict(
        9,
        "constant-curvature forward kinematics",
        worst <= 1e-9 && frozen_worst <= 1e-9,
        format!("max tip error {worst:.3e} mm over 50 cases, {frozen_worst:.3e} mm on frozen cases (<= 1e-9)"),
    );
}

#[test]
fn c10_tendon_properties() {
    let s = spec();
    let g = symmetric_grid(30f64.to_radians(), 61);
    let pairs = [(0usize, Tendon::Up, Tendon::Down), (1, Tendon::Right, Tendon::Left)];
    let mut antisymmetric = true;
    let mut monotone = true;
    let mut round_trip = 0.0f64;
    for (section, pull, antagonist) in pairs {
        let mut prev: Option<(f64, f64)> = None;
        for &a in &g {
            let mut alpha = [0.0; 2];
            alpha[section] = a;
            let plus = tendon_lengths(&s, &ConfigState::from_sections(&s, alpha)).unwrap();
            alpha[section] = -a;
            let minus = tendon_lengths(&s, &ConfigState::from_sections(&s, alpha)).unwrap();
            antisymmetric &= plus.displacement(pull) == minus.displacement(antagonist);
            let cur = (plus.displacement(pull), plus.displacement(antagonist));
            if let Some(p) = prev {
                monotone &= cur.0 < p.0 && cur.1 > p.1;
            }
            prev = Some(cur);

            let mut cmd = [0.0; 2];
            cmd[section] = -section_pull(&s, section, a).unwrap();
            let back = actuate_displacement(&s, cmd).unwrap().config.section_angles(&s);
            round_trip = round_trip.max((back[section] - a).abs()).max(back[1 - section].abs());
        }
    }
    let k = 37;
    let there = actuate::<f64>(&s, [k, -k]).unwrap();
    let home = actuate::<f64>(&s, [k - k, -k + k]).unwrap();
    let returns = home.config.joint_angles.iter().all(|a| a.abs() <= 1e-9) && there.config.joint_angles.iter().any(|a| *a != 0.0);
    verdict(
        10,
        "tendon antisymmetry, monotonicity, actuation round trip",
        antisymmetric && monotone && round_trip <= 1e-9 && returns,
        format!(
            "antisymmetric exactly: {antisymmetric}, strictly monotone: {monotone}, round trip {round_trip:.3e} rad (<= 1e-9), +k/-k home: {returns}"
        ),
    );
}

#[test]
fn c11_aiming() {
    let s = spec();
    let limit = s.section_limit;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let opts = AimOptions::default();
    let start = Instant::now();
    let (mut worst, mut all_reachable) = (0.0f64, true);
    for _ in 0..100 {
        let alpha = [rng.gen_range(-limit..=limit), rng.gen_range(-limit..=limit)];
        let tip = forward_kinematics(&s, &ConfigState::from_sections(&s, alpha)).unwrap().tip;
        let target = tip.trans + tip.axis().scale(120.0);
        let r = aim_at(&s, target, &ConfigState::straight(&s), &opts).unwrap();
        worst = worst.max(r.residual);
        all_reachable &= r.reachable;
    }
    let elapsed = start.elapsed();
    // 90 deg off the straight axis, far outside the section limits
    let side = aim_at(&s, Vec3::new(0.0, 150.0, s.straight_length()), &ConfigState::straight(&s), &opts).unwrap();
    let flagged = !side.reachable && (side.alpha[0].abs() - limit).abs() <= 1e-12;
    verdict(
        11,
        "aiming",
        worst < 1e-3 && all_reachable && flagged && elapsed < Duration::from_secs(5),
        format!(
            "max residual {worst:.3e} rad (< 1e-3), all reachable: {all_reachable}, off-axis flagged at limit: {flagged} (residual {:.3} rad), {:.3} s (< 5 s)",
            side.residual,
            elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn c12_footprint() {
    let half = 5f64.to_radians();
    let cone = JetCone::new(Pose3::identity(), half, 120.0).unwrap();
    let plane = TargetPlane::new(Vec3::new(0.0, 0.0, 120.0), Vec3::unit_z()).unwrap();
    let fp = footprint(&cone, &plane).unwrap();
    let radius_err = (fp.semi_major - 10.499).abs().max((fp.semi_minor - 10.499).abs());

    let tilt = 30f64.to_radians();
    let tilted = JetCone::new(Pose3::new(Rot3::from_axis_angle(Vec3::unit_y(), tilt), Vec3::zero()), half, 120.0).unwrap();
    let plane = TargetPlane::new(Vec3::new(0.0, 0.0, 120.0 * tilt.cos()), Vec3::unit_z()).unwrap();
    let ft = footprint(&tilted, &plane).unwrap();
    let mc = monte_carlo_area(&tilted, &plane, MC_SAMPLES, &mut ChaCha8Rng::seed_from_u64(SEED)).unwrap();
    let rel = (mc - ft.area).abs() / ft.area;
    verdict(
        12,
        "jet footprint",
        radius_err <= 1e-3 && rel <= 0.01 && ft.semi_major > ft.semi_minor && ft.area > fp.area,
        format!(
            "radius {:.6} mm (10.499 +/- 1e-3), tilted area {:.4} mm2 vs Monte Carlo {mc:.4} mm2 (relative {rel:.2e} <= 1e-2)",
            fp.semi_major, ft.area
        ),
    );
}

#[test]
fn c13_coverage() {
    let s = spec();
    let doc = SpecFile::default();
    let (targets, setup) = line_sweep(&s, &doc, 5).unwrap();
    let plan = plan_coverage(&s, &targets, &setup).unwrap();
    let prints: Vec<_> = plan.waypoints.iter().filter_map(|w| w.footprint.clone()).collect();
    let sum: f64 = prints.iter().map(|f| f.area).sum();
    let mc = monte_carlo_union_area(&prints, MC_SAMPLES, &mut ChaCha8Rng::seed_from_u64(SEED));
    let rel = (plan.union_area - mc).abs() / mc;
    let fine = rasterize(&setup.region, &prints, setup.cell / 2.0);
    let change = (fine.coverage - plan.coverage).abs();
    verdict(
        13,
        "coverage",
        prints.len() == 5 && plan.union_area < sum && rel <= 0.01 && change < 0.01,
        format!(
            "union {:.3} mm2 vs Monte Carlo {mc:.3} mm2 (relative {rel:.2e} <= 1e-2), sum {sum:.3} mm2, coverage change on halving {change:.2e} (< 1e-2)",
            plan.union_area
        ),
    );
}

#[test]
fn c14_environment() {
    let s = spec();
    let tube = LumenPath::straight(200.0, 5.0).unwrap();
    let st = InsertionState::along(&tube, 10.0, ConfigState::straight(&s)).unwrap();
    let coaxial = clearance(&tube, &s, &st, 8).unwrap().min_clearance;

    let depths = [0.0, 20.0, 40.0];
    let grid = AngleGrid::degrees(30.0, 5.0);
    let rows = auto_steer(&tube, &s, &depths, &grid, 4).unwrap();
    let zero = rows.iter().all(|r| r.alpha == [0.0, 0.0]);

    let path = LumenPath::demo_bronchus();
    let forward = auto_steer(&path, &s, &depths, &grid, 4).unwrap();
    let mut shuffled = grid.clone();
    shuffled.alpha1.reverse();
    shuffled.alpha2.rotate_left(5);
    let permuted = auto_steer(&path, &s, &depths, &shuffled, 4).unwrap();
    let same = forward == permuted;
    verdict(
        14,
        "lumen clearance and steering",
        coaxial == 2.5 && zero && same,
        format!("coaxial clearance {coaxial} mm (exactly 2.5), straight tube best (0,0): {zero}, order independent: {same}"),
    );
}

#[test]
fn c15_report_reproducible() {
    let doc = SpecFile::default();
    let path = LumenPath::demo_bronchus();
    let a = report::generate(&doc, &path, SEED).unwrap();
    let b = report::generate(&doc, &path, SEED).unwrap();
    let find = |n: &str| a.iter().find(|x| x.name == n).map(|x| String::from_utf8_lossy(&x.bytes).into_owned());
    let svg = find("profile.svg").unwrap_or_default();
    let ws = find("workspace.csv").unwrap_or_default();
    let ok = a == b && svg.contains("<path") && ws.lines().count() == 1 + 13 * 13;
    verdict(
        15,
        "reproducible report",
        ok,
        format!(
            "{} artifacts byte-identical: {}, profile.svg {} bytes, workspace.csv {} rows",
            a.len(),
            a == b,
            svg.len(),
            ws.lines().count().saturating_sub(1)
        ),
    );
}
