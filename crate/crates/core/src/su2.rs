//! Unit-quaternion model of SU(2), its Lie algebra su₂, the adjoint action
//! and the Killing pairing.
//!
//! The quaternion `a + b i + c j + d k` is identified with the unitary matrix
//!
//! ```text
//! [[ a + b i,  c + d i],
//!  [-c + d i,  a - b i]]
//! ```
//!
//! and a vector `(p, q, r)` of su₂ with the trace-free skew-Hermitian matrix
//! `p·i + q·j + r·k` under the same embedding. With this identification the
//! Killing pairing `−½ tr(XY)` is the Euclidean dot product of the
//! coordinate vectors, and `Ad(A)` is the rotation `v ↦ A v A⁻¹`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{Matrix2, Matrix3, Vector3};
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::Su2Error;

/// Traces closer than this to ±2 are treated as central.
pub const CENTRAL_TOL: f64 = 1e-9;
/// Cross products of rotation axes below this are treated as parallel.
pub const IRREDUCIBLE_TOL: f64 = 1e-8;

/// An element of SU(2) stored as a unit quaternion `(a, b, c, d)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Su2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

/// A vector of the Lie algebra su₂ in the `(i, j, k)` basis.
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct Su2Vector(pub [f64; 3]);

/// Axis–angle data `A = I cos θ + P sin θ` with `θ ∈ (0, π)` and `|P| = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AxisAngle {
    pub theta: f64,
    pub axis: Su2Vector,
}

impl Su2 {
    pub const IDENTITY: Su2 = Su2 { a: 1.0, b: 0.0, c: 0.0, d: 0.0 };

    /// Builds an element from raw components and renormalizes.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Su2 {
        Su2 { a, b, c, d }.normalized()
    }

    pub fn normalized(self) -> Su2 {
        let n = self.norm_sq().sqrt();
        Su2 { a: self.a / n, b: self.b / n, c: self.c / n, d: self.d / n }
    }

    pub fn norm_sq(&self) -> f64 {
        self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d
    }

    pub fn from_axis_angle(theta: f64, axis: Su2Vector) -> Su2 {
        let n = axis.unit();
        let s = theta.sin();
        Su2 { a: theta.cos(), b: s * n.0[0], c: s * n.0[1], d: s * n.0[2] }
    }

    /// `exp(v) = cos|v| + sin|v| v/|v|`.
    pub fn exp(v: Su2Vector) -> Su2 {
        let t = v.norm();
        if t < 1e-300 {
            return Su2::IDENTITY;
        }
        Su2::from_axis_angle(t, v)
    }

    /// Principal logarithm; the rotation vector of length in `[0, π]`.
    pub fn log(&self) -> Su2Vector {
        let im = self.imag();
        let s = im.norm();
        if s < 1e-300 {
            return Su2Vector::ZERO;
        }
        let theta = s.atan2(self.a);
        im.scale(theta / s)
    }

    pub fn imag(&self) -> Su2Vector {
        Su2Vector([self.b, self.c, self.d])
    }

    pub fn inverse(&self) -> Su2 {
        Su2 { a: self.a, b: -self.b, c: -self.c, d: -self.d }
    }

    pub fn trace(&self) -> f64 {
        2.0 * self.a
    }

    pub fn pow(&self, e: i64) -> Su2 {
        let base = if e < 0 { self.inverse() } else { *self };
        (0..e.unsigned_abs()).fold(Su2::IDENTITY, |acc, _| acc * base)
    }

    /// `self · v · self⁻¹` acting on a vector of su₂.
    pub fn conjugate_vector(&self, v: Su2Vector) -> Su2Vector {
        adjoint(self) * v
    }

    pub fn to_matrix(&self) -> Matrix2<Complex64> {
        let c = Complex64::new;
        Matrix2::new(
            c(self.a, self.b),
            c(self.c, self.d),
            c(-self.c, self.d),
            c(self.a, -self.b),
        )
    }

    pub fn distance(&self, other: &Su2) -> f64 {
        ((self.a - other.a).powi(2)
            + (self.b - other.b).powi(2)
            + (self.c - other.c).powi(2)
            + (self.d - other.d).powi(2))
        .sqrt()
    }

    pub fn is_central(&self) -> bool {
        self.trace().abs() >= 2.0 - CENTRAL_TOL
    }

    /// Haar-random element.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Su2 {
        loop {
            let v: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
            let n2: f64 = v.iter().map(|x| x * x).sum();
            if n2 > 1e-4 && n2 <= 1.0 {
                return Su2::new(v[0], v[1], v[2], v[3]);
            }
        }
    }
}

impl Mul for Su2 {
    type Output = Su2;
    fn mul(self, q: Su2) -> Su2 {
        let p = self;
        Su2 {
            a: p.a * q.a - p.b * q.b - p.c * q.c - p.d * q.d,
            b: p.a * q.b + p.b * q.a + p.c * q.d - p.d * q.c,
            c: p.a * q.c - p.b * q.d + p.c * q.a + p.d * q.b,
            d: p.a * q.d + p.b * q.c - p.c * q.b + p.d * q.a,
        }
    }
}

impl Neg for Su2 {
    type Output = Su2;
    fn neg(self) -> Su2 {
        Su2 { a: -self.a, b: -self.b, c: -self.c, d: -self.d }
    }
}

impl fmt::Display for Su2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+.6} {:+.6}i {:+.6}j {:+.6}k", self.a, self.b, self.c, self.d)
    }
}

impl Su2Vector {
    pub const ZERO: Su2Vector = Su2Vector([0.0; 3]);
    pub const E1: Su2Vector = Su2Vector([1.0, 0.0, 0.0]);
    pub const E2: Su2Vector = Su2Vector([0.0, 1.0, 0.0]);
    pub const E3: Su2Vector = Su2Vector([0.0, 0.0, 1.0]);

    pub fn new(p: f64, q: f64, r: f64) -> Su2Vector {
        Su2Vector([p, q, r])
    }

    pub fn norm(&self) -> f64 {
        killing(*self, *self).sqrt()
    }

    pub fn unit(&self) -> Su2Vector {
        self.scale(1.0 / self.norm())
    }

    pub fn scale(&self, s: f64) -> Su2Vector {
        Su2Vector(self.0.map(|x| x * s))
    }

    pub fn cross(&self, o: &Su2Vector) -> Su2Vector {
        let (a, b) = (self.0, o.0);
        Su2Vector([
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ])
    }

    pub fn to_vector3(&self) -> Vector3<f64> {
        Vector3::from(self.0)
    }

    pub fn from_vector3(v: &Vector3<f64>) -> Su2Vector {
        Su2Vector([v[0], v[1], v[2]])
    }

    /// The skew-Hermitian 2×2 matrix this vector stands for.
    pub fn to_matrix(&self) -> Matrix2<Complex64> {
        let [p, q, r] = self.0;
        let c = Complex64::new;
        Matrix2::new(c(0.0, p), c(q, r), c(-q, r), c(0.0, -p))
    }

    pub fn from_matrix(m: &Matrix2<Complex64>) -> Su2Vector {
        Su2Vector([m[(0, 0)].im, m[(0, 1)].re, m[(0, 1)].im])
    }
}

impl Add for Su2Vector {
    type Output = Su2Vector;
    fn add(self, o: Su2Vector) -> Su2Vector {
        Su2Vector(std::array::from_fn(|i| self.0[i] + o.0[i]))
    }
}

impl Sub for Su2Vector {
    type Output = Su2Vector;
    fn sub(self, o: Su2Vector) -> Su2Vector {
        Su2Vector(std::array::from_fn(|i| self.0[i] - o.0[i]))
    }
}

impl Neg for Su2Vector {
    type Output = Su2Vector;
    fn neg(self) -> Su2Vector {
        self.scale(-1.0)
    }
}

impl Mul<Su2Vector> for Matrix3<f64> {
    type Output = Su2Vector;
    fn mul(self, v: Su2Vector) -> Su2Vector {
        Su2Vector::from_vector3(&(self * v.to_vector3()))
    }
}

/// The adjoint representation `Ad(A) ∈ SO(3)`: the rotation matrix of `v ↦ A v A⁻¹`.
pub fn adjoint(q: &Su2) -> Matrix3<f64> {
    let Su2 { a, b, c, d } = *q;
    Matrix3::new(
        a * a + b * b - c * c - d * d,
        2.0 * (b * c - a * d),
        2.0 * (b * d + a * c),
        2.0 * (b * c + a * d),
        a * a - b * b + c * c - d * d,
        2.0 * (c * d - a * b),
        2.0 * (b * d - a * c),
        2.0 * (c * d + a * b),
        a * a - b * b - c * c + d * d,
    )
}

/// Killing pairing normalized as `−½ tr(XY)`; positive definite.
pub fn killing(x: Su2Vector, y: Su2Vector) -> f64 {
    x.0[0] * y.0[0] + x.0[1] * y.0[1] + x.0[2] * y.0[2]
}

/// Unique `(θ, P)` with `A = I cos θ + P sin θ`, `θ ∈ (0, π)`.
pub fn extract_axis_angle(a: &Su2) -> Result<AxisAngle, Su2Error> {
    if a.is_central() {
        return Err(Su2Error::CentralElement { trace: a.trace() });
    }
    let theta = a.a.clamp(-1.0, 1.0).acos();
    let axis = a.imag().unit();
    Ok(AxisAngle { theta, axis })
}

/// Result of the irreducibility test, with a warning band above the tolerance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Irreducibility {
    pub irreducible: bool,
    pub near_reducible: bool,
}

/// A set of SU(2) elements generates a non-abelian group iff the rotation
/// axes of its non-central members are not all parallel.
pub fn is_irreducible(images: &[Su2]) -> Irreducibility {
    let axes: Vec<Su2Vector> = images
        .iter()
        .filter(|g| !g.is_central())
        .map(|g| g.imag().unit())
        .collect();
    let mut spread = 0.0f64;
    for (i, u) in axes.iter().enumerate() {
        for v in &axes[i + 1..] {
            spread = spread.max(u.cross(v).norm());
        }
    }
    Irreducibility {
        irreducible: spread >= IRREDUCIBLE_TOL,
        near_reducible: (IRREDUCIBLE_TOL..10.0 * IRREDUCIBLE_TOL).contains(&spread),
    }
}

/// The rotation taking `from` to `to` (both nonzero), as an SU(2) element.
pub fn rotation_between(from: Su2Vector, to: Su2Vector) -> Su2 {
    let (u, v) = (from.unit(), to.unit());
    let dot = killing(u, v);
    if dot < -1.0 + 1e-14 {
        // antiparallel: half-turn about any axis orthogonal to u
        let trial = if u.0[0].abs() < 0.9 { Su2Vector::E1 } else { Su2Vector::E2 };
        let perp = u.cross(&trial).unit();
        return Su2::from_axis_angle(std::f64::consts::FRAC_PI_2, perp);
    }
    // q = (1 + v u*) normalized rotates u onto v
    let w = u.cross(&v);
    Su2::new(1.0 + dot, w.0[0], w.0[1], w.0[2])
}
