//! `ncjoint` command-line front end.
//!
//! Exit codes: 0 success, 1 domain or validation error (including bad usage),
//! 2 I/O error.

// `!(x > 0)` is how validation rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ncjoint::chain::{
    actuate, centerline_audit, forward_kinematics, symmetric_grid, tendon_lengths, workspace, ConfigState, Tendon,
};
use ncjoint::export::{self, fmt_g};
use ncjoint::geom::{Pose3, Rot3, Vec3};
use ncjoint::lumen::{auto_steer, clearance, AngleGrid, InsertionState, LumenPath};
use ncjoint::profile::{check_interference, find_critical_n, generate_profile, DEFAULT_SAMPLES};
use ncjoint::report;
use ncjoint::specfile::{load_spec, SpecError, SpecFile};
use ncjoint::spin::{aim_at, footprint, plan_coverage, AimOptions, JetCone, TargetPlane};

#[derive(Parser, Debug)]
#[command(name = "ncjoint", version, about = "Non-circular joint synthesis, manipulator kinematics and jet targeting")]
struct Cli {
    /// Spec file, or `default` for the bundled document.
    #[arg(long, global = true, default_value = "default")]
    spec: String,
    /// Output directory for written artifacts.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Artifact format where a command offers a choice.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    #[command(subcommand)]
    command: Group,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Svg,
}

#[derive(Subcommand, Debug)]
enum Group {
    /// Joint contour synthesis and checks.
    #[command(subcommand)]
    Profile(ProfileCmd),
    /// Manipulator kinematics and tendons.
    #[command(subcommand)]
    Kin(KinCmd),
    /// Lumen clearance and steering.
    #[command(subcommand)]
    Env(EnvCmd),
    /// Jet footprint, aiming and coverage.
    #[command(subcommand)]
    Spin(SpinCmd),
    /// Artifact regeneration.
    #[command(subcommand)]
    Report(ReportCmd),
}

#[derive(Subcommand, Debug)]
enum ProfileCmd {
    /// Sample the contact branches and report apex and closure.
    Synth(SweepArgs),
    /// Scan interference over +/-theta_max.
    Check {
        #[arg(long, default_value_t = 0.5)]
        step_deg: f64,
    },
    /// Search the critical normalization factor.
    CriticalN {
        #[arg(long, default_value_t = 1e-4)]
        tolerance: f64,
    },
    /// Write the contour as SVG (default) or CSV.
    Export(SweepArgs),
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Sweep half-range, degrees.
    #[arg(long, default_value_t = 90.0)]
    sweep_deg: f64,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
}

#[derive(Args, Debug, Clone, Copy)]
struct SectionArgs {
    /// Section 1 angle, degrees (positive bends up).
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    alpha1_deg: f64,
    /// Section 2 angle, degrees (positive bends right).
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    alpha2_deg: f64,
}

impl SectionArgs {
    fn radians(self) -> [f64; 2] {
        [self.alpha1_deg.to_radians(), self.alpha2_deg.to_radians()]
    }
}

#[derive(Subcommand, Debug)]
enum KinCmd {
    /// Tip pose for the given section angles.
    Fk(SectionArgs),
    /// Tendon displacements for the given section angles, or for motor steps.
    Tendon {
        #[command(flatten)]
        angles: SectionArgs,
        /// Motor steps per section; overrides the angles.
        #[arg(long, num_args = 2, allow_hyphen_values = true, value_names = ["STEPS1", "STEPS2"])]
        steps: Option<Vec<i64>>,
    },
    /// Tip point cloud over the section limits.
    Workspace {
        #[arg(long, default_value_t = 13)]
        points: usize,
    },
    /// Centerline length audit over bends and random configs.
    Audit {
        #[arg(long, default_value_t = 100)]
        random: usize,
    },
}

#[derive(Subcommand, Debug)]
enum EnvCmd {
    /// Minimum clearance at one insertion state.
    Clearance {
        #[arg(long, default_value_t = 0.0)]
        depth: f64,
        #[command(flatten)]
        angles: SectionArgs,
        #[arg(long, default_value_t = 8)]
        samples_per_joint: usize,
    },
    /// Grid search of section angles along the insertion.
    Autosteer {
        /// Comma-separated depths, mm.
        #[arg(long, value_delimiter = ',', default_value = "0,10,20,30,40")]
        depths: Vec<f64>,
        #[arg(long, default_value_t = 1.0)]
        step_deg: f64,
        #[arg(long, default_value_t = 4)]
        samples_per_joint: usize,
    },
}

#[derive(Subcommand, Debug)]
enum SpinCmd {
    /// Footprint of the jet on a plane at the spun distance.
    Footprint {
        /// Axis tilt from the plane normal, degrees.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        tilt_deg: f64,
    },
    /// Point the tip at a target.
    Aim {
        #[arg(long, allow_hyphen_values = true)]
        x: f64,
        #[arg(long, allow_hyphen_values = true)]
        y: f64,
        #[arg(long, allow_hyphen_values = true)]
        z: f64,
    },
    /// Line-sweep coverage schedule on the default target plane.
    Plan {
        #[arg(long, default_value_t = 5)]
        waypoints: usize,
    },
}

#[derive(Subcommand, Debug)]
enum ReportCmd {
    /// Regenerate every reference artifact.
    Paper,
}

enum Failure {
    Domain(String),
    Io(String),
}

impl Failure {
    fn domain(e: impl std::fmt::Display) -> Self {
        Failure::Domain(e.to_string())
    }
}

impl From<SpecError> for Failure {
    fn from(e: SpecError) -> Self {
        match e {
            SpecError::Io { .. } => Failure::Io(e.to_string()),
            other => Failure::Domain(other.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Io(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    let doc = load_spec(&cli.spec)?;
    match &cli.command {
        Group::Profile(c) => profile_cmd(cli, &doc, c),
        Group::Kin(c) => kin_cmd(cli, &doc, c),
        Group::Env(c) => env_cmd(cli, &doc, c),
        Group::Spin(c) => spin_cmd(cli, &doc, c),
        Group::Report(ReportCmd::Paper) => report_cmd(cli, &doc),
    }
}

fn write_artifact(dir: &Path, name: &str, bytes: &[u8]) -> Outcome {
    fs::create_dir_all(dir).map_err(|e| Failure::Io(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, bytes).map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))?;
    println!("wrote {}", path.display());
    Ok(())
}

/// Writes to `--out` when given, otherwise prints.
fn emit(cli: &Cli, name: &str, text: &str) -> Outcome {
    match &cli.out {
        Some(dir) => write_artifact(dir, name, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn profile_cmd(cli: &Cli, doc: &SpecFile, cmd: &ProfileCmd) -> Outcome {
    let design = doc.joint_design()?;
    match cmd {
        ProfileCmd::Synth(a) | ProfileCmd::Export(a) => {
            let p = generate_profile(&design, a.sweep_deg.to_radians(), a.samples).map_err(Failure::domain)?;
            if let ProfileCmd::Export(_) = cmd {
                return match cli.format.unwrap_or(Format::Svg) {
                    Format::Svg => emit(cli, "profile.svg", &export::profile_svg(&p)),
                    Format::Csv => emit(cli, "profile.csv", &export::profile_csv(&p).map_err(Failure::domain)?),
                };
            }
            println!("L = {} mm, N = {}, S = {} mm", fmt_g(design.half_pitch), fmt_g(design.norm_factor), fmt_g(design.contact_chord()));
            println!("samples = {}, sweep = +/-{} rad", p.theta_samples.len(), fmt_g(p.sweep));
            match p.theta_apex {
                Some(t) => println!("apex at theta = {} rad ({} deg)", fmt_g(t), fmt_g(t.to_degrees())),
                None => println!("no apex in sweep"),
            }
            println!("closed = {}, simple = {}", p.closed, p.simple);
            if cli.out.is_some() {
                let (name, text) = match cli.format.unwrap_or(Format::Csv) {
                    Format::Csv => ("profile.csv", export::profile_csv(&p).map_err(Failure::domain)?),
                    Format::Svg => ("profile.svg", export::profile_svg(&p)),
                };
                emit(cli, name, &text)?;
            }
            Ok(())
        }
        ProfileCmd::Check { step_deg } => {
            if !(*step_deg > 0.0) {
                return Err(Failure::Domain("--step-deg must be positive".into()));
            }
            let p = generate_profile(&design, std::f64::consts::FRAC_PI_2, DEFAULT_SAMPLES).map_err(Failure::domain)?;
            let n = (design.theta_max.to_degrees() / step_deg).floor() as i64;
            let mut csv = String::from("theta_deg,overlap_mm2,penetration_mm\n");
            let mut worst = (0.0f64, 0.0f64);
            for k in -n..=n {
                let deg = k as f64 * step_deg;
                let r = check_interference(&p, deg.to_radians().clamp(-design.theta_max, design.theta_max)).map_err(Failure::domain)?;
                if r.overlap_area > worst.1 {
                    worst = (deg, r.overlap_area);
                }
                csv.push_str(&format!("{},{},{}\n", fmt_g(deg), fmt_g(r.overlap_area), fmt_g(r.max_penetration)));
            }
            if cli.out.is_some() {
                emit(cli, "interference.csv", &csv)?;
            }
            println!("max overlap {} mm2 at {} deg", fmt_g(worst.1), fmt_g(worst.0));
            if worst.1 > 1e-6 {
                return Err(Failure::Domain("contour interferes within +/-theta_max".into()));
            }
            println!("interference-free over +/-{} deg", fmt_g(design.theta_max.to_degrees()));
            Ok(())
        }
        ProfileCmd::CriticalN { tolerance } => {
            let c = find_critical_n(doc.joint.half_pitch, doc.joint.theta_max, *tolerance).map_err(Failure::domain)?;
            println!("N* = {}", fmt_g(c.value));
            println!("reference N = {} (deviation {})", fmt_g(c.reference), fmt_g(c.deviation));
            if let Some(a) = c.reference_apex {
                println!("reference N closes at {} deg", fmt_g(a.to_degrees()));
            }
            println!("criterion: {}", c.criterion);
            Ok(())
        }
    }
}

fn kin_cmd(cli: &Cli, doc: &SpecFile, cmd: &KinCmd) -> Outcome {
    let spec = doc.manipulator_spec()?;
    match cmd {
        KinCmd::Fk(a) => {
            let c = ConfigState::from_sections(&spec, a.radians());
            let fk = forward_kinematics(&spec, &c).map_err(Failure::domain)?;
            let t = fk.tip.trans;
            let z = fk.tip.axis();
            println!("tip position mm: {} {} {}", fmt_g(t.x), fmt_g(t.y), fmt_g(t.z));
            println!("tip axis: {} {} {}", fmt_g(z.x), fmt_g(z.y), fmt_g(z.z));
            println!("centerline length mm: {}", fmt_g(fk.centerline_length));
            Ok(())
        }
        KinCmd::Tendon { angles, steps } => {
            let config = match steps {
                Some(s) => {
                    let a = actuate(&spec, [s[0], s[1]]).map_err(Failure::domain)?;
                    let alpha = a.config.section_angles(&spec);
                    println!(
                        "section angles deg: {} {} saturated: {} {}",
                        fmt_g(alpha[0].to_degrees()),
                        fmt_g(alpha[1].to_degrees()),
                        a.saturated[0],
                        a.saturated[1]
                    );
                    a.config
                }
                None => ConfigState::from_sections(&spec, angles.radians()),
            };
            let t = tendon_lengths(&spec, &config).map_err(Failure::domain)?;
            for k in Tendon::ALL {
                println!("{:<5} length {} mm displacement {} mm", k.label(), fmt_g(t.length(k)), fmt_g(t.displacement(k)));
            }
            Ok(())
        }
        KinCmd::Workspace { points } => {
            let g = symmetric_grid(spec.section_limit, *points);
            let ws = workspace(&spec, &g, &g).map_err(Failure::domain)?;
            let b = ws.max_bend;
            eprintln!(
                "max bend deg: up {} down {} left {} right {}",
                fmt_g(b.up.to_degrees()),
                fmt_g(b.down.to_degrees()),
                fmt_g(b.left.to_degrees()),
                fmt_g(b.right.to_degrees())
            );
            emit(cli, "workspace.csv", &export::workspace_csv(&ws).map_err(Failure::domain)?)
        }
        KinCmd::Audit { random } => {
            let mut cs = vec![
                ConfigState::straight(&spec),
                ConfigState::from_sections(&spec, [spec.section_limit, 0.0]),
                ConfigState::from_sections(&spec, [0.0, spec.section_limit]),
            ];
            cs.extend(report::seeded_configs(&spec, *random, cli.seed));
            let r = centerline_audit(&spec, &cs).map_err(Failure::domain)?;
            println!("configs: {}", r.rows.len());
            println!("straight length: {:.6} mm", r.straight_length);
            println!("deviation {:.6} mm", r.max_deviation);
            println!("circular-joint deviation {:.6} mm", r.max_circular_deviation);
            if cli.out.is_some() {
                emit(cli, "audit.csv", &export::audit_csv(&r).map_err(Failure::domain)?)?;
            }
            Ok(())
        }
    }
}

fn lumen_path(doc: &SpecFile, spec_arg: &str) -> Result<LumenPath<f64>, Failure> {
    let Some(rel) = &doc.environment.path else {
        return Ok(LumenPath::demo_bronchus());
    };
    let base = if spec_arg == "default" { Path::new(".") } else { Path::new(spec_arg).parent().unwrap_or(Path::new(".")) };
    let file = base.join(rel);
    let text = fs::read_to_string(&file).map_err(|e| Failure::Io(format!("cannot read {}: {e}", file.display())))?;
    export::parse_path_csv(&text).map_err(Failure::domain)
}

fn env_cmd(cli: &Cli, doc: &SpecFile, cmd: &EnvCmd) -> Outcome {
    let spec = doc.manipulator_spec()?;
    let path = lumen_path(doc, &cli.spec)?;
    match cmd {
        EnvCmd::Clearance { depth, angles, samples_per_joint } => {
            let c = ConfigState::from_sections(&spec, angles.radians());
            let st = InsertionState::along(&path, *depth, c).map_err(Failure::domain)?;
            let r = clearance(&path, &spec, &st, *samples_per_joint).map_err(Failure::domain)?;
            println!("min clearance {} mm at arc {} mm", fmt_g(r.min_clearance), fmt_g(r.arc));
            println!("location mm: {} {} {}", fmt_g(r.location.x), fmt_g(r.location.y), fmt_g(r.location.z));
            println!("{}", if r.min_clearance >= 0.0 { "clear" } else { "collision" });
            Ok(())
        }
        EnvCmd::Autosteer { depths, step_deg, samples_per_joint } => {
            if !(*step_deg > 0.0) {
                return Err(Failure::Domain("--step-deg must be positive".into()));
            }
            let grid = AngleGrid::degrees(spec.section_limit.to_degrees(), *step_deg);
            let rows = auto_steer(&path, &spec, depths, &grid, *samples_per_joint).map_err(Failure::domain)?;
            emit(cli, "trace.csv", &export::trace_csv(&rows).map_err(Failure::domain)?)
        }
    }
}

fn spin_cmd(cli: &Cli, doc: &SpecFile, cmd: &SpinCmd) -> Outcome {
    let spec = doc.manipulator_spec()?;
    match cmd {
        SpinCmd::Footprint { tilt_deg } => {
            let tilt = tilt_deg.to_radians();
            let apex = Pose3::new(Rot3::from_axis_angle(Vec3::unit_y(), tilt), Vec3::zero());
            let cone = JetCone::new(apex, doc.spin.half_angle, doc.spin.range).map_err(Failure::domain)?;
            let plane = TargetPlane::new(Vec3::new(0.0, 0.0, doc.spin.distance * tilt.cos()), Vec3::unit_z()).map_err(Failure::domain)?;
            let f = footprint(&cone, &plane).map_err(Failure::domain)?;
            println!("kind {:?}", f.kind);
            println!("semi-axes mm: {} {}", fmt_g(f.semi_major), fmt_g(f.semi_minor));
            println!("center mm: {} {}", fmt_g(f.center.x), fmt_g(f.center.y));
            println!("area mm2: {}", fmt_g(f.area));
            Ok(())
        }
        SpinCmd::Aim { x, y, z } => {
            let r = aim_at(&spec, Vec3::new(*x, *y, *z), &ConfigState::straight(&spec), &AimOptions::default())
                .map_err(Failure::domain)?;
            println!("section angles deg: {} {}", fmt_g(r.alpha[0].to_degrees()), fmt_g(r.alpha[1].to_degrees()));
            println!("residual rad: {} after {} iterations", fmt_g(r.residual), r.iterations);
            if !r.reachable {
                return Err(Failure::Domain("target unreachable within the section limits".into()));
            }
            Ok(())
        }
        SpinCmd::Plan { waypoints } => {
            let (targets, setup) = report::line_sweep(&spec, doc, *waypoints).map_err(Failure::domain)?;
            let plan = plan_coverage(&spec, &targets, &setup).map_err(Failure::domain)?;
            eprintln!(
                "coverage {} overspray {} mm2 union {} mm2 unreachable {:?}",
                fmt_g(plan.coverage),
                fmt_g(plan.overspray),
                fmt_g(plan.union_area),
                plan.unreachable
            );
            emit(cli, "schedule.csv", &export::schedule_csv(&plan).map_err(Failure::domain)?)
        }
    }
}

fn report_cmd(cli: &Cli, doc: &SpecFile) -> Outcome {
    let path = lumen_path(doc, &cli.spec)?;
    let arts = report::generate(doc, &path, cli.seed).map_err(Failure::domain)?;
    let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("report"));
    for a in arts {
        write_artifact(&dir, a.name, &a.bytes)?;
    }
    Ok(())
}
