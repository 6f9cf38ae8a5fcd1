//! Small f64 linear-algebra kit shared by every module.
//!
//! Everything here is plain-old-data with value semantics. Simulation and
//! rendering both run in f64 so that results are reproducible bit-for-bit
//! across thread counts and runs.

use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

pub const fn vec2(x: f64, y: f64) -> Vec2 {
    Vec2 { x, y }
}

impl Vec2 {
    pub const ZERO: Vec2 = vec2(0.0, 0.0);

    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn length(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn normalized(self) -> Vec2 {
        let len = self.length();
        if len <= f64::EPSILON {
            Vec2::ZERO
        } else {
            self / len
        }
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        vec2(self.x + o.x, self.y + o.y)
    }
}

impl AddAssign for Vec2 {
    fn add_assign(&mut self, o: Vec2) {
        *self = *self + o;
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        vec2(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, s: f64) -> Vec2 {
        vec2(self.x * s, self.y * s)
    }
}

impl Div<f64> for Vec2 {
    type Output = Vec2;
    fn div(self, s: f64) -> Vec2 {
        vec2(self.x / s, self.y / s)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        vec2(-self.x, -self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

pub const fn vec3(x: f64, y: f64, z: f64) -> Vec3 {
    Vec3 { x, y, z }
}

impl Vec3 {
    pub const ZERO: Vec3 = vec3(0.0, 0.0, 0.0);
    pub const UP: Vec3 = vec3(0.0, 1.0, 0.0);

    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Vec3) -> Vec3 {
        vec3(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn length_squared(self) -> f64 {
        self.dot(self)
    }

    pub fn length(self) -> f64 {
        self.length_squared().sqrt()
    }

    pub fn normalized(self) -> Vec3 {
        let len = self.length();
        if len <= f64::EPSILON {
            Vec3::ZERO
        } else {
            self / len
        }
    }

    /// Horizontal (xz-plane) distance between two points.
    pub fn horizontal_distance(self, o: Vec3) -> f64 {
        let dx = self.x - o.x;
        let dz = self.z - o.z;
        (dx * dx + dz * dz).sqrt()
    }

    pub fn min(self, o: Vec3) -> Vec3 {
        vec3(self.x.min(o.x), self.y.min(o.y), self.z.min(o.z))
    }

    pub fn max(self, o: Vec3) -> Vec3 {
        vec3(self.x.max(o.x), self.y.max(o.y), self.z.max(o.z))
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        vec3(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Vec3 {
    fn add_assign(&mut self, o: Vec3) {
        *self = *self + o;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        vec3(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl SubAssign for Vec3 {
    fn sub_assign(&mut self, o: Vec3) {
        *self = *self - o;
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        vec3(self.x * s, self.y * s, self.z * s)
    }
}

impl Div<f64> for Vec3 {
    type Output = Vec3;
    fn div(self, s: f64) -> Vec3 {
        vec3(self.x / s, self.y / s, self.z / s)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        vec3(-self.x, -self.y, -self.z)
    }
}

/// Mirror `incident` about the plane with unit normal `n`.
pub fn reflect(incident: Vec3, n: Vec3) -> Vec3 {
    incident - n * (2.0 * incident.dot(n))
}

/// Unit quaternion, scalar-last storage `(x, y, z, w)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quat {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub w: f64,
}

impl Quat {
    pub const IDENTITY: Quat = Quat { x: 0.0, y: 0.0, z: 0.0, w: 1.0 };

    pub fn new(w: f64, x: f64, y: f64, z: f64) -> Quat {
        Quat { x, y, z, w }
    }

    pub fn from_axis_angle(axis: Vec3, angle: f64) -> Quat {
        let axis = axis.normalized();
        let (s, c) = (angle * 0.5).sin_cos();
        Quat { x: axis.x * s, y: axis.y * s, z: axis.z * s, w: c }
    }

    /// Orientation that looks along `forward` with `up` as the vertical hint.
    pub fn look_rotation(forward: Vec3, up: Vec3) -> Quat {
        let f = forward.normalized();
        let r = up.cross(f).normalized();
        let r = if r.length_squared() <= f64::EPSILON {
            // forward collinear with up; pick an arbitrary right axis
            vec3(1.0, 0.0, 0.0)
        } else {
            r
        };
        let u = f.cross(r);
        // Column-major basis (right, up, forward) -> quaternion.
        let m = [
            [r.x, r.y, r.z],
            [u.x, u.y, u.z],
            [f.x, f.y, f.z],
        ];
        Quat::from_basis(m)
    }

    /// Rows are the images of the world axes: m[0] = right, m[1] = up, m[2] = forward.
    pub fn from_basis(m: [[f64; 3]; 3]) -> Quat {
        // Shepperd's method on the column-major rotation matrix whose columns
        // are right/up/forward.
        let (r, u, f) = (m[0], m[1], m[2]);
        let trace = r[0] + u[1] + f[2];
        let q = if trace > 0.0 {
            let s = (trace + 1.0).sqrt() * 2.0;
            Quat {
                w: 0.25 * s,
                x: (u[2] - f[1]) / s,
                y: (f[0] - r[2]) / s,
                z: (r[1] - u[0]) / s,
            }
        } else if r[0] > u[1] && r[0] > f[2] {
            let s = (1.0 + r[0] - u[1] - f[2]).sqrt() * 2.0;
            Quat {
                w: (u[2] - f[1]) / s,
                x: 0.25 * s,
                y: (u[0] + r[1]) / s,
                z: (f[0] + r[2]) / s,
            }
        } else if u[1] > f[2] {
            let s = (1.0 + u[1] - r[0] - f[2]).sqrt() * 2.0;
            Quat {
                w: (f[0] - r[2]) / s,
                x: (u[0] + r[1]) / s,
                y: 0.25 * s,
                z: (f[1] + u[2]) / s,
            }
        } else {
            let s = (1.0 + f[2] - r[0] - u[1]).sqrt() * 2.0;
            Quat {
                w: (r[1] - u[0]) / s,
                x: (f[0] + r[2]) / s,
                y: (f[1] + u[2]) / s,
                z: 0.25 * s,
            }
        };
        q.normalized()
    }

    pub fn normalized(self) -> Quat {
        let n = (self.x * self.x + self.y * self.y + self.z * self.z + self.w * self.w).sqrt();
        Quat { x: self.x / n, y: self.y / n, z: self.z / n, w: self.w / n }
    }

    pub fn conjugate(self) -> Quat {
        Quat { x: -self.x, y: -self.y, z: -self.z, w: self.w }
    }

    pub fn dot(self, o: Quat) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z + self.w * o.w
    }

    pub fn mul(self, o: Quat) -> Quat {
        Quat {
            w: self.w * o.w - self.x * o.x - self.y * o.y - self.z * o.z,
            x: self.w * o.x + self.x * o.w + self.y * o.z - self.z * o.y,
            y: self.w * o.y - self.x * o.z + self.y * o.w + self.z * o.x,
            z: self.w * o.z + self.x * o.y - self.y * o.x + self.z * o.w,
        }
    }

    pub fn rotate(self, v: Vec3) -> Vec3 {
        let qv = vec3(self.x, self.y, self.z);
        let uv = qv.cross(v);
        let uuv = qv.cross(uv);
        v + (uv * self.w + uuv) * 2.0
    }

    /// Rotation angle in radians, in [0, pi].
    pub fn angle(self) -> f64 {
        2.0 * self.w.abs().min(1.0).acos()
    }

    /// Shortest-arc spherical interpolation. Antipodal ties are broken by
    /// preferring the representative with a positive scalar part.
    pub fn slerp(self, other: Quat, t: f64) -> Quat {
        let mut b = other;
        let mut d = self.dot(other);
        if d < 0.0 {
            b = Quat { x: -b.x, y: -b.y, z: -b.z, w: -b.w };
            d = -d;
        }
        if d > 0.9995 {
            // nearly parallel: lerp + renormalize
            return Quat {
                x: self.x + (b.x - self.x) * t,
                y: self.y + (b.y - self.y) * t,
                z: self.z + (b.z - self.z) * t,
                w: self.w + (b.w - self.w) * t,
            }
            .normalized();
        }
        let theta = d.min(1.0).acos();
        let (s0, s1) = (((1.0 - t) * theta).sin(), (t * theta).sin());
        let inv = 1.0 / theta.sin();
        Quat {
            x: (self.x * s0 + b.x * s1) * inv,
            y: (self.y * s0 + b.y * s1) * inv,
            z: (self.z * s0 + b.z * s1) * inv,
            w: (self.w * s0 + b.w * s1) * inv,
        }
    }
}

/// Row-major 4x4 matrix; vectors transform as column vectors (`m * v`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat4 {
    pub m: [[f64; 4]; 4],
}

impl Mat4 {
    pub const IDENTITY: Mat4 = Mat4 {
        m: [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ],
    };

    pub fn mul(self, o: Mat4) -> Mat4 {
        let mut r = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                r[i][j] = (0..4).map(|k| self.m[i][k] * o.m[k][j]).sum();
            }
        }
        Mat4 { m: r }
    }

    /// Transform a point, returning homogeneous (x, y, z, w).
    pub fn transform_point(self, v: Vec3) -> [f64; 4] {
        let p = [v.x, v.y, v.z, 1.0];
        let mut out = [0.0; 4];
        for (i, row) in self.m.iter().enumerate() {
            out[i] = row[0] * p[0] + row[1] * p[1] + row[2] * p[2] + row[3] * p[3];
        }
        out
    }

    pub fn transform_direction(self, v: Vec3) -> Vec3 {
        vec3(
            self.m[0][0] * v.x + self.m[0][1] * v.y + self.m[0][2] * v.z,
            self.m[1][0] * v.x + self.m[1][1] * v.y + self.m[1][2] * v.z,
            self.m[2][0] * v.x + self.m[2][1] * v.y + self.m[2][2] * v.z,
        )
    }
}

/// Axis-aligned bounding box.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Aabb {
    pub min: Vec3,
    pub max: Vec3,
}

impl Aabb {
    pub fn new(min: Vec3, max: Vec3) -> Aabb {
        Aabb { min, max }
    }

    pub fn from_center_half_extent(center: Vec3, half: Vec3) -> Aabb {
        Aabb { min: center - half, max: center + half }
    }

    pub fn center(self) -> Vec3 {
        (self.min + self.max) * 0.5
    }

    pub fn contains(self, p: Vec3) -> bool {
        p.x >= self.min.x
            && p.x <= self.max.x
            && p.y >= self.min.y
            && p.y <= self.max.y
            && p.z >= self.min.z
            && p.z <= self.max.z
    }

    pub fn corners(self) -> [Vec3; 8] {
        let (a, b) = (self.min, self.max);
        [
            vec3(a.x, a.y, a.z),
            vec3(b.x, a.y, a.z),
            vec3(a.x, b.y, a.z),
            vec3(b.x, b.y, a.z),
            vec3(a.x, a.y, b.z),
            vec3(b.x, a.y, b.z),
            vec3(a.x, b.y, b.z),
            vec3(b.x, b.y, b.z),
        ]
    }
}

pub fn lerp(a: f64, b: f64, t: f64) -> f64 {
    a + (b - a) * t
}

pub fn lerp_vec3(a: Vec3, b: Vec3, t: f64) -> Vec3 {
    a + (b - a) * t
}

pub fn clamp01(x: f64) -> f64 {
    x.clamp(0.0, 1.0)
}

/// Hermite smoothstep of `x` between `edge0` and `edge1`.
pub fn smoothstep(edge0: f64, edge1: f64, x: f64) -> f64 {
    let t = clamp01((x - edge0) / (edge1 - edge0));
    t * t * (3.0 - 2.0 * t)
}

/// Move `current` toward `target` by at most `max_delta`, without overshoot.
pub fn move_toward(current: f64, target: f64, max_delta: f64) -> f64 {
    let d = target - current;
    if d.abs() <= max_delta {
        target
    } else {
        current + max_delta * d.signum()
    }
}

/// Wrap an angle in degrees to [0, 360).
pub fn wrap_degrees(deg: f64) -> f64 {
    let w = deg % 360.0;
    if w < 0.0 {
        w + 360.0
    } else {
        w
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cross_follows_right_hand_rule() {
        let c = vec3(1.0, 0.0, 0.0).cross(vec3(0.0, 1.0, 0.0));
        assert_eq!(c, vec3(0.0, 0.0, 1.0));
    }

    #[test]
    fn reflect_mirrors_about_normal() {
        let r = reflect(vec3(1.0, -1.0, 0.0).normalized(), Vec3::UP);
        let expect = vec3(1.0, 1.0, 0.0).normalized();
        assert!((r - expect).length() < 1e-12);
    }

    #[test]
    fn quat_rotates_vector() {
        let q = Quat::from_axis_angle(Vec3::UP, std::f64::consts::FRAC_PI_2);
        let v = q.rotate(vec3(1.0, 0.0, 0.0));
        assert!((v - vec3(0.0, 0.0, 1.0)).length() < 1e-12);
    }

    #[test]
    fn slerp_endpoints() {
        let a = Quat::from_axis_angle(Vec3::UP, 0.3);
        let b = Quat::from_axis_angle(Vec3::UP, 1.1);
        assert!((a.slerp(b, 0.0).dot(a) - 1.0).abs() < 1e-12);
        assert!((a.slerp(b, 1.0).dot(b).abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn slerp_midpoint_is_half_angle() {
        let a = Quat::IDENTITY;
        let b = Quat::from_axis_angle(Vec3::UP, 1.0);
        let mid = a.slerp(b, 0.5);
        let v = mid.rotate(vec3(1.0, 0.0, 0.0));
        let half = Quat::from_axis_angle(Vec3::UP, 0.5).rotate(vec3(1.0, 0.0, 0.0));
        assert!((v - half).length() < 1e-12);
    }

    #[test]
    fn slerp_takes_shortest_arc() {
        let a = Quat::from_axis_angle(Vec3::UP, 0.1);
        // Same orientation as rotating by -0.1 but represented negated.
        let b = Quat::from_axis_angle(Vec3::UP, -0.1);
        let neg_b = Quat { x: -b.x, y: -b.y, z: -b.z, w: -b.w };
        let mid = a.slerp(neg_b, 0.5);
        // Midpoint should be identity-ish, not a half-turn.
        assert!(mid.angle() < 0.11);
    }

    #[test]
    fn look_rotation_faces_target() {
        let q = Quat::look_rotation(vec3(0.0, 0.0, -1.0), Vec3::UP);
        let f = q.rotate(vec3(0.0, 0.0, 1.0));
        // rotating local +z (forward convention handled by camera) keeps unit length
        assert!((f.length() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn move_toward_clamps_at_target() {
        assert_eq!(move_toward(0.0, 1.0, 0.25), 0.25);
        assert_eq!(move_toward(0.9, 1.0, 0.25), 1.0);
        assert_eq!(move_toward(1.0, 1.0, 0.25), 1.0);
    }

    #[test]
    fn smoothstep_symmetry() {
        assert_eq!(smoothstep(0.0, 1.0, 0.5), 0.5);
        assert_eq!(smoothstep(2.0, 4.0, 3.0), 0.5);
    }
}
