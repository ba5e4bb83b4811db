//! Dual numbers `a + εb` with `ε² = 0`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tol::tolerance;

/// Element of the ring ℝ[ε]/⟨ε²⟩.
///
/// Serialized as `{"p": primal, "d": dual}`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DualNumber {
    #[serde(rename = "p")]
    pub primal: f64,
    #[serde(rename = "d")]
    pub dual: f64,
}

impl DualNumber {
    pub const ZERO: Self = Self::new(0.0, 0.0);
    pub const ONE: Self = Self::new(1.0, 0.0);
    pub const EPSILON: Self = Self::new(0.0, 1.0);

    pub const fn new(primal: f64, dual: f64) -> Self {
        Self { primal, dual }
    }

    pub const fn real(primal: f64) -> Self {
        Self { primal, dual: 0.0 }
    }

    /// Invertible iff the primal part exceeds the global tolerance.
    pub fn is_invertible(self) -> bool {
        self.primal.abs() > tolerance()
    }

    /// `(a + εb)⁻¹ = a⁻¹ − εba⁻²`.
    pub fn inv(self) -> Result<Self> {
        if !self.is_invertible() {
            return Err(Error::NotInvertible(self.primal));
        }
        let a = self.primal;
        Ok(Self::new(1.0 / a, -self.dual / (a * a)))
    }

    /// The ε-conjugate `a − εb`.
    pub fn eps_conj(self) -> Self {
        Self::new(self.primal, -self.dual)
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(self.primal * s, self.dual * s)
    }

    /// Square root of a dual number with positive primal part.
    pub fn sqrt(self) -> Result<Self> {
        if self.primal <= tolerance() {
            return Err(Error::NotInvertible(self.primal));
        }
        let r = self.primal.sqrt();
        Ok(Self::new(r, self.dual / (2.0 * r)))
    }

    pub fn approx_eq(self, other: Self, tol: f64) -> bool {
        (self.primal - other.primal).abs() <= tol && (self.dual - other.dual).abs() <= tol
    }
}

impl From<f64> for DualNumber {
    fn from(v: f64) -> Self {
        Self::real(v)
    }
}

impl fmt::Display for DualNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:+}ε", self.primal, self.dual)
    }
}

impl Add for DualNumber {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.primal + rhs.primal, self.dual + rhs.dual)
    }
}

impl Sub for DualNumber {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.primal - rhs.primal, self.dual - rhs.dual)
    }
}

impl Mul for DualNumber {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::new(
            self.primal * rhs.primal,
            self.primal * rhs.dual + self.dual * rhs.primal,
        )
    }
}

impl Mul<f64> for DualNumber {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        self.scale(rhs)
    }
}

impl Neg for DualNumber {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.primal, -self.dual)
    }
}

impl AddAssign for DualNumber {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl SubAssign for DualNumber {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl MulAssign for DualNumber {
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

/// Binary operation selector used by the bindings and the CLI.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DualOp {
    Add,
    Sub,
    Mul,
}

pub fn dual_arith(x: DualNumber, y: DualNumber, op: DualOp) -> DualNumber {
    match op {
        DualOp::Add => x + y,
        DualOp::Sub => x - y,
        DualOp::Mul => x * y,
    }
}
