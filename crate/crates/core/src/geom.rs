//! Small fixed-size vector, rotation and rigid-pose types.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec2<T> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> Vec2<T> {
    #[inline]
    pub fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    #[inline]
    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero())
    }

    /// Unit vector at angle `a` from +x.
    #[inline]
    pub fn from_angle(a: T) -> Self {
        Self::new(a.cos(), a.sin())
    }

    #[inline]
    pub fn dot(self, o: Self) -> T {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3D cross product.
    #[inline]
    pub fn cross(self, o: Self) -> T {
        self.x * o.y - self.y * o.x
    }

    #[inline]
    pub fn norm(self) -> T {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn scale(self, k: T) -> Self {
        Self::new(self.x * k, self.y * k)
    }

    /// Reflection across the y axis.
    #[inline]
    pub fn mirror_x(self) -> Self {
        Self::new(-self.x, self.y)
    }

    /// Reflection across the x axis.
    #[inline]
    pub fn mirror_y(self) -> Self {
        Self::new(self.x, -self.y)
    }

    /// Anticlockwise rotation by `a`.
    #[inline]
    pub fn rotate(self, a: T) -> Self {
        let (s, c) = a.sin_cos();
        Self::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    #[inline]
    pub fn dist(self, o: Self) -> T {
        (self - o).norm()
    }
}

impl<T: Scalar> Add for Vec2<T> {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y)
    }
}

impl<T: Scalar> Sub for Vec2<T> {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y)
    }
}

impl<T: Scalar> Neg for Vec2<T> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec3<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Scalar> Vec3<T> {
    #[inline]
    pub fn new(x: T, y: T, z: T) -> Self {
        Self { x, y, z }
    }

    #[inline]
    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero())
    }

    #[inline]
    pub fn unit_x() -> Self {
        Self::new(T::one(), T::zero(), T::zero())
    }

    #[inline]
    pub fn unit_y() -> Self {
        Self::new(T::zero(), T::one(), T::zero())
    }

    #[inline]
    pub fn unit_z() -> Self {
        Self::new(T::zero(), T::zero(), T::one())
    }

    #[inline]
    pub fn dot(self, o: Self) -> T {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    #[inline]
    pub fn cross(self, o: Self) -> Self {
        Self::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    #[inline]
    pub fn norm(self) -> T {
        self.dot(self).sqrt()
    }

    #[inline]
    pub fn scale(self, k: T) -> Self {
        Self::new(self.x * k, self.y * k, self.z * k)
    }

    /// Returns `None` for a (numerically) zero vector.
    pub fn normalized(self) -> Option<Self> {
        let n = self.norm();
        if n > T::epsilon() {
            Some(self.scale(T::one() / n))
        } else {
            None
        }
    }

    #[inline]
    pub fn dist(self, o: Self) -> T {
        (self - o).norm()
    }

    /// Angle between two non-zero vectors, robust near 0 and π.
    pub fn angle_to(self, o: Self) -> T {
        self.cross(o).norm().atan2(self.dot(o))
    }
}

impl<T: Scalar> Add for Vec3<T> {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl<T: Scalar> Sub for Vec3<T> {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl<T: Scalar> Neg for Vec3<T> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y, -self.z)
    }
}

/// Row-major 3×3 rotation matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rot3<T> {
    pub m: [[T; 3]; 3],
}

impl<T: Scalar> Rot3<T> {
    pub fn identity() -> Self {
        let (o, z) = (T::one(), T::zero());
        Self { m: [[o, z, z], [z, o, z], [z, z, o]] }
    }

    /// Rodrigues rotation about a unit axis.
    pub fn from_axis_angle(axis: Vec3<T>, angle: T) -> Self {
        let (s, c) = angle.sin_cos();
        let t = T::one() - c;
        let Vec3 { x, y, z } = axis;
        Self {
            m: [
                [t * x * x + c, t * x * y - s * z, t * x * z + s * y],
                [t * x * y + s * z, t * y * y + c, t * y * z - s * x],
                [t * x * z - s * y, t * y * z + s * x, t * z * z + c],
            ],
        }
    }

    /// Builds a rotation from its three columns.
    pub fn from_columns(c0: Vec3<T>, c1: Vec3<T>, c2: Vec3<T>) -> Self {
        Self { m: [[c0.x, c1.x, c2.x], [c0.y, c1.y, c2.y], [c0.z, c1.z, c2.z]] }
    }

    /// Smallest rotation carrying unit vector `from` onto unit vector `to`.
    pub fn between(from: Vec3<T>, to: Vec3<T>) -> Self {
        let axis = from.cross(to);
        let c = from.dot(to);
        match axis.normalized() {
            Some(a) => Self::from_axis_angle(a, axis.norm().atan2(c)),
            None if c > T::zero() => Self::identity(),
            None => {
                // antiparallel: any perpendicular axis
                let trial = if from.x.abs() < T::lit(0.9) { Vec3::unit_x() } else { Vec3::unit_y() };
                let a = from.cross(trial).normalized().unwrap_or(Vec3::unit_z());
                Self::from_axis_angle(a, T::PI())
            }
        }
    }

    pub fn col(&self, j: usize) -> Vec3<T> {
        Vec3::new(self.m[0][j], self.m[1][j], self.m[2][j])
    }

    pub fn transpose(&self) -> Self {
        let m = &self.m;
        Self {
            m: [
                [m[0][0], m[1][0], m[2][0]],
                [m[0][1], m[1][1], m[2][1]],
                [m[0][2], m[1][2], m[2][2]],
            ],
        }
    }

    pub fn apply(&self, v: Vec3<T>) -> Vec3<T> {
        let m = &self.m;
        Vec3::new(
            m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
            m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
            m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z,
        )
    }

    pub fn det(&self) -> T {
        self.col(0).dot(self.col(1).cross(self.col(2)))
    }

    /// Largest entry of `|RᵀR − I|`.
    pub fn orthonormality_error(&self) -> T {
        let p = self.transpose() * *self;
        let mut worst = T::zero();
        for i in 0..3 {
            for j in 0..3 {
                let target = if i == j { T::one() } else { T::zero() };
                worst = worst.max((p.m[i][j] - target).abs());
            }
        }
        worst
    }
}

impl<T: Scalar> Mul for Rot3<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let mut m = [[T::zero(); 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = self.m[i][0] * o.m[0][j] + self.m[i][1] * o.m[1][j] + self.m[i][2] * o.m[2][j];
            }
        }
        Self { m }
    }
}

/// Rigid transform: `p ↦ rot·p + trans`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pose3<T> {
    pub rot: Rot3<T>,
    pub trans: Vec3<T>,
}

impl<T: Scalar> Pose3<T> {
    pub fn identity() -> Self {
        Self { rot: Rot3::identity(), trans: Vec3::zero() }
    }

    pub fn new(rot: Rot3<T>, trans: Vec3<T>) -> Self {
        Self { rot, trans }
    }

    pub fn from_translation(trans: Vec3<T>) -> Self {
        Self { rot: Rot3::identity(), trans }
    }

    /// `self ∘ other`: apply `other` first, expressed in `self`'s frame.
    pub fn compose(&self, other: &Self) -> Self {
        Self { rot: self.rot * other.rot, trans: self.rot.apply(other.trans) + self.trans }
    }

    pub fn inverse(&self) -> Self {
        let rt = self.rot.transpose();
        Self { rot: rt, trans: -rt.apply(self.trans) }
    }

    pub fn transform_point(&self, p: Vec3<T>) -> Vec3<T> {
        self.rot.apply(p) + self.trans
    }

    pub fn transform_vector(&self, v: Vec3<T>) -> Vec3<T> {
        self.rot.apply(v)
    }

    /// Local +z axis in the parent frame.
    pub fn axis(&self) -> Vec3<T> {
        self.rot.col(2)
    }
}
