//! Geometry, kinematics and planning for a tendon-driven manipulator built
//! from non-circular rolling joints.
//!
//! The numeric core is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix it to one precision. File formats and reports work in `f64`.

// `!(x > 0)` is how validation rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod chain;
pub mod export;
pub mod geom;
pub mod lumen;
pub mod polygon;
pub mod profile;
pub mod report;
pub mod scalar;
pub mod specfile;
pub mod spin;

pub use geom::{Pose3, Rot3, Vec2, Vec3};
pub use scalar::Scalar;

pub type JointDesign64 = profile::JointDesign<f64>;
pub type JointDesign32 = profile::JointDesign<f32>;
pub type JointProfile64 = profile::JointProfile<f64>;
pub type JointProfile32 = profile::JointProfile<f32>;
pub type ManipulatorSpec64 = chain::ManipulatorSpec<f64>;
pub type ManipulatorSpec32 = chain::ManipulatorSpec<f32>;
pub type ConfigState64 = chain::ConfigState<f64>;
pub type ConfigState32 = chain::ConfigState<f32>;
pub type LumenPath64 = lumen::LumenPath<f64>;
pub type LumenPath32 = lumen::LumenPath<f32>;
pub type JetCone64 = spin::JetCone<f64>;
pub type JetCone32 = spin::JetCone<f32>;
pub type Pose3d = Pose3<f64>;
pub type Pose3f = Pose3<f32>;
