//! Quaternions, dual quaternions, and their action on points of P³(ℝ).

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::dualnum::DualNumber;
use crate::error::{Error, Result};
use crate::tol::tolerance;

/// Real quaternion `w + x𝐢 + y𝐣 + z𝐤`, serialized as `[w, x, y, z]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl From<[f64; 4]> for Quaternion {
    fn from(c: [f64; 4]) -> Self {
        Self::new(c[0], c[1], c[2], c[3])
    }
}

impl From<Quaternion> for [f64; 4] {
    fn from(q: Quaternion) -> Self {
        q.to_array()
    }
}

impl Quaternion {
    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Self = Self::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Self = Self::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Self = Self::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Self = Self::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self { w, x, y, z }
    }

    pub const fn scalar(w: f64) -> Self {
        Self::new(w, 0.0, 0.0, 0.0)
    }

    pub fn pure(v: [f64; 3]) -> Self {
        Self::new(0.0, v[0], v[1], v[2])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    pub fn vector(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn conj(self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    /// `q q̄ = w² + x² + y² + z²`.
    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Euclidean inner product of coefficient vectors, `(p q̄ + q p̄)/2`.
    pub fn dot(self, o: Self) -> f64 {
        self.w * o.w + self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }

    pub fn inv(self) -> Option<Self> {
        let n = self.norm_sq();
        (n > tolerance() * tolerance()).then(|| self.conj().scale(1.0 / n))
    }

    pub fn max_abs(self) -> f64 {
        self.to_array().iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Unit rotation quaternion for angle `angle` about `axis` (normalized here).
    pub fn rotation(axis: [f64; 3], angle: f64) -> Self {
        let n = axis.iter().map(|v| v * v).sum::<f64>().sqrt();
        let (s, c) = (angle / 2.0).sin_cos();
        let s = if n > 0.0 { s / n } else { 0.0 };
        Self::new(c, s * axis[0], s * axis[1], s * axis[2])
    }

    /// Rotates a 3-vector by the unit quaternion `self` (`q v q̄`).
    pub fn rotate(self, v: [f64; 3]) -> [f64; 3] {
        (self * Quaternion::pure(v) * self.conj()).vector()
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:+}i{:+}j{:+}k", self.w, self.x, self.y, self.z)
    }
}

impl Add for Quaternion {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Quaternion {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Quaternion {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

impl AddAssign for Quaternion {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl Mul for Quaternion {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(
            self.w * o.w - self.x * o.x - self.y * o.y - self.z * o.z,
            self.w * o.x + self.x * o.w + self.y * o.z - self.z * o.y,
            self.w * o.y - self.x * o.z + self.y * o.w + self.z * o.x,
            self.w * o.z + self.x * o.y - self.y * o.x + self.z * o.w,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        self.scale(s)
    }
}

/// Dual quaternion `p + εd`, serialized as `{"primal": [..], "dual": [..]}`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DualQuaternion {
    pub primal: Quaternion,
    pub dual: Quaternion,
}

/// Position of a dual quaternion relative to the Study quadric and the null cone.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PoseClass {
    StudyRegular,
    OffStudy,
    NullCone,
    ExceptionalGenerator,
}

/// Which conjugation `dq_conj` applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConjKind {
    /// `q̄`: negates the 𝐢, 𝐣, 𝐤 coordinates.
    Quaternion,
    /// `q_ε = p − εd`.
    Epsilon,
}

impl DualQuaternion {
    pub const ZERO: Self = Self::new(Quaternion::ZERO, Quaternion::ZERO);
    pub const ONE: Self = Self::new(Quaternion::ONE, Quaternion::ZERO);
    pub const I: Self = Self::new(Quaternion::I, Quaternion::ZERO);
    pub const J: Self = Self::new(Quaternion::J, Quaternion::ZERO);
    pub const K: Self = Self::new(Quaternion::K, Quaternion::ZERO);
    pub const EPS: Self = Self::new(Quaternion::ZERO, Quaternion::ONE);

    pub const fn new(primal: Quaternion, dual: Quaternion) -> Self {
        Self { primal, dual }
    }

    pub fn from_arrays(primal: [f64; 4], dual: [f64; 4]) -> Self {
        Self::new(primal.into(), dual.into())
    }

    pub fn from_dual_number(a: DualNumber) -> Self {
        Self::new(Quaternion::scalar(a.primal), Quaternion::scalar(a.dual))
    }

    pub fn real(p: Quaternion) -> Self {
        Self::new(p, Quaternion::ZERO)
    }

    /// `ε·q`, which keeps only the primal part, moved into the dual slot.
    pub fn times_eps(self) -> Self {
        Self::new(Quaternion::ZERO, self.primal)
    }

    /// The four dual-number coordinates `q0..q3`.
    pub fn coords(self) -> [DualNumber; 4] {
        let p = self.primal.to_array();
        let d = self.dual.to_array();
        std::array::from_fn(|i| DualNumber::new(p[i], d[i]))
    }

    pub fn coord(self, i: usize) -> DualNumber {
        self.coords()[i]
    }

    pub fn from_coords(c: [DualNumber; 4]) -> Self {
        Self::from_arrays(c.map(|x| x.primal), c.map(|x| x.dual))
    }

    /// Coordinates as a real 8-vector `[p0..p3, d0..d3]`.
    pub fn to_vec8(self) -> [f64; 8] {
        let p = self.primal.to_array();
        let d = self.dual.to_array();
        [p[0], p[1], p[2], p[3], d[0], d[1], d[2], d[3]]
    }

    pub fn from_vec8(v: &[f64]) -> Self {
        Self::from_arrays([v[0], v[1], v[2], v[3]], [v[4], v[5], v[6], v[7]])
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(self.primal.scale(s), self.dual.scale(s))
    }

    /// Multiplication by a (central) dual number.
    pub fn scale_dual(self, a: DualNumber) -> Self {
        Self::new(
            self.primal.scale(a.primal),
            self.dual.scale(a.primal) + self.primal.scale(a.dual),
        )
    }

    pub fn conj(self) -> Self {
        Self::new(self.primal.conj(), self.dual.conj())
    }

    pub fn eps_conj(self) -> Self {
        Self::new(self.primal, -self.dual)
    }

    pub fn conjugate(self, kind: ConjKind) -> Self {
        match kind {
            ConjKind::Quaternion => self.conj(),
            ConjKind::Epsilon => self.eps_conj(),
        }
    }

    /// `q q̄ = p p̄ + ε(p d̄ + d p̄)`.
    pub fn norm(self) -> DualNumber {
        DualNumber::new(
            self.primal.norm_sq(),
            2.0 * self.primal.dot(self.dual),
        )
    }

    /// Symmetric bilinear form associated with the Study quadric:
    /// `S(x, y) = x′·y″ + x″·y′`, so that `S(q, q)` is the dual part of the norm.
    pub fn study_form(self, o: Self) -> f64 {
        self.primal.dot(o.dual) + self.dual.dot(o.primal)
    }

    pub fn is_invertible(self) -> bool {
        self.norm().is_invertible()
    }

    /// `q⁻¹ = (q q̄)⁻¹ q̄`.
    pub fn inv(self) -> Result<Self> {
        let n = self.norm().inv().map_err(|_| Error::NullConeElement)?;
        Ok(self.conj().scale_dual(n))
    }

    pub fn max_abs(self) -> f64 {
        self.primal.max_abs().max(self.dual.max_abs())
    }

    pub fn approx_eq(self, o: Self, tol: f64) -> bool {
        (self - o).max_abs() <= tol
    }

    /// Classifies `q` against the Study quadric, null cone, and exceptional generator.
    pub fn classify(self) -> Result<PoseClass> {
        let tol = tolerance();
        if self.max_abs() <= tol {
            return Err(Error::ZeroElement);
        }
        let n = self.norm();
        if n.primal <= tol {
            if self.primal.norm() <= tol {
                return Ok(PoseClass::ExceptionalGenerator);
            }
            return Ok(PoseClass::NullCone);
        }
        if n.dual.abs() <= tol * n.primal.max(1.0) {
            Ok(PoseClass::StudyRegular)
        } else {
            Ok(PoseClass::OffStudy)
        }
    }

    /// Acts on the homogeneous point `[x0 : x1 : x2 : x3]` via
    /// `[x0 + ε(x1𝐢 + x2𝐣 + x3𝐤)] ↦ [(p − εd) x (p̄ + εd̄)]`.
    pub fn act_on_point(self, x: [f64; 4]) -> Result<[f64; 4]> {
        if !self.is_invertible() {
            return Err(Error::NullConeElement);
        }
        Ok(self.act_unchecked(x))
    }

    /// The sandwich product without the invertibility check. On the null cone
    /// this still yields the polynomial homogeneous coordinates.
    pub fn act_unchecked(self, x: [f64; 4]) -> [f64; 4] {
        let xq = Self::new(Quaternion::scalar(x[0]), Quaternion::new(0.0, x[1], x[2], x[3]));
        let y = self.eps_conj() * xq * self.conj();
        [y.primal.w, y.dual.x, y.dual.y, y.dual.z]
    }

    /// Affine image of an affine point.
    pub fn transform_point(self, x: [f64; 3]) -> Result<[f64; 3]> {
        let y = self.act_on_point([1.0, x[0], x[1], x[2]])?;
        Ok([y[1] / y[0], y[2] / y[0], y[3] / y[0]])
    }

    /// Unit translation `1 − ½ε v` moving the origin to `v`.
    pub fn translation(v: [f64; 3]) -> Self {
        Self::new(Quaternion::ONE, Quaternion::pure(v).scale(-0.5))
    }

    pub fn rotation(axis: [f64; 3], angle: f64) -> Self {
        Self::real(Quaternion::rotation(axis, angle))
    }
}

impl fmt::Display for DualQuaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + ε({})", self.primal, self.dual)
    }
}

impl Add for DualQuaternion {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.primal + o.primal, self.dual + o.dual)
    }
}

impl Sub for DualQuaternion {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.primal - o.primal, self.dual - o.dual)
    }
}

impl Neg for DualQuaternion {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale(-1.0)
    }
}

impl AddAssign for DualQuaternion {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl SubAssign for DualQuaternion {
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl Mul for DualQuaternion {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(
            self.primal * o.primal,
            self.primal * o.dual + self.dual * o.primal,
        )
    }
}

impl Mul<f64> for DualQuaternion {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        self.scale(s)
    }
}

impl Mul<DualQuaternion> for DualNumber {
    type Output = DualQuaternion;
    fn mul(self, q: DualQuaternion) -> DualQuaternion {
        q.scale_dual(self)
    }
}

impl From<DualNumber> for DualQuaternion {
    fn from(a: DualNumber) -> Self {
        Self::from_dual_number(a)
    }
}

pub fn dq_mul(q: DualQuaternion, r: DualQuaternion) -> DualQuaternion {
    q * r
}

pub fn dq_conj(q: DualQuaternion, kind: ConjKind) -> DualQuaternion {
    q.conjugate(kind)
}

pub fn dq_norm(q: DualQuaternion) -> DualNumber {
    q.norm()
}
