//! Truncated Taylor series (jets) over ℝ, 𝔻 and 𝔻ℍ.
//!
//! A series of order `n` stores the coefficients `f⁽ᵏ⁾(t₀)/k!` for `k = 0..=n`.

use crate::dualnum::DualNumber;
use crate::dualquat::DualQuaternion;

/// Real truncated power series.
#[derive(Clone, Debug, PartialEq)]
pub struct Series(pub Vec<f64>);

impl Series {
    pub fn constant(c: f64, order: usize) -> Self {
        let mut v = vec![0.0; order + 1];
        v[0] = c;
        Self(v)
    }

    /// The series of `t₀ + s`.
    pub fn variable(t0: f64, order: usize) -> Self {
        let mut v = Self::constant(t0, order);
        if order > 0 {
            v.0[1] = 1.0;
        }
        v
    }

    pub fn order(&self) -> usize {
        self.0.len() - 1
    }

    pub fn add(&self, o: &Self) -> Self {
        Self(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.iter().map(|a| a * s).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.0.len();
        Self(
            (0..n)
                .map(|k| (0..=k).map(|j| self.0[j] * o.0[k - j]).sum())
                .collect(),
        )
    }

    /// `1/self`, requires a nonzero constant term.
    pub fn recip(&self) -> Self {
        let n = self.0.len();
        let mut r = vec![0.0; n];
        r[0] = 1.0 / self.0[0];
        for k in 1..n {
            let s: f64 = (1..=k).map(|j| self.0[j] * r[k - j]).sum();
            r[k] = -s * r[0];
        }
        Self(r)
    }

    /// `(sin u, cos u)` via `S' = C u'`, `C' = −S u'`.
    pub fn sin_cos(&self) -> (Self, Self) {
        let n = self.0.len();
        let mut s = vec![0.0; n];
        let mut c = vec![0.0; n];
        (s[0], c[0]) = self.0[0].sin_cos();
        for k in 1..n {
            let mut sk = 0.0;
            let mut ck = 0.0;
            for j in 1..=k {
                let w = j as f64 * self.0[j];
                sk += w * c[k - j];
                ck -= w * s[k - j];
            }
            s[k] = sk / k as f64;
            c[k] = ck / k as f64;
        }
        (Self(s), Self(c))
    }

    /// Substitutes this series into the polynomial with ascending coefficients.
    pub fn compose_poly(&self, coeffs: &[f64]) -> Self {
        let order = self.order();
        coeffs
            .iter()
            .rev()
            .fold(Self::constant(0.0, order), |acc, &c| {
                acc.mul(self).add(&Self::constant(c, order))
            })
    }

    /// `k`-th derivative value, `k! · a_k`.
    pub fn derivative(&self, k: usize) -> f64 {
        self.0[k] * factorial(k)
    }
}

pub fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// Series with dual-number coefficients.
pub fn dual_series_recip(a: &[DualNumber]) -> Option<Vec<DualNumber>> {
    let inv0 = a[0].inv().ok()?;
    let mut r = vec![DualNumber::ZERO; a.len()];
    r[0] = inv0;
    for k in 1..a.len() {
        let mut s = DualNumber::ZERO;
        for j in 1..=k {
            s += a[j] * r[k - j];
        }
        r[k] = -(s * inv0);
    }
    Some(r)
}

/// Convolution of dual-quaternion series (order preserved, noncommutative).
pub fn dq_series_mul(a: &[DualQuaternion], b: &[DualQuaternion]) -> Vec<DualQuaternion> {
    let n = a.len().min(b.len());
    (0..n)
        .map(|k| {
            (0..=k).fold(DualQuaternion::ZERO, |acc, j| acc + a[j] * b[k - j])
        })
        .collect()
}

/// Product of a dual-number series with a dual-quaternion series.
pub fn dq_series_scale(a: &[DualNumber], q: &[DualQuaternion]) -> Vec<DualQuaternion> {
    let n = a.len().min(q.len());
    (0..n)
        .map(|k| {
            (0..=k).fold(DualQuaternion::ZERO, |acc, j| acc + q[k - j].scale_dual(a[j]))
        })
        .collect()
}

/// Substitutes a real series `t(s)` (with `t(0) = t₀`) into a curve whose Taylor
/// coefficients at `t₀` are `f`.
pub fn dq_series_compose(f: &[DualQuaternion], inner: &Series) -> Vec<DualQuaternion> {
    let order = inner.order().min(f.len() - 1);
    let mut shifted = inner.0.clone();
    shifted[0] = 0.0;
    let shifted = Series(shifted[..=order].to_vec());
    let mut out = vec![DualQuaternion::ZERO; order + 1];
    let mut power = Series::constant(1.0, order);
    for fk in f.iter().take(order + 1) {
        for (o, &p) in out.iter_mut().zip(&power.0) {
            *o += fk.scale(p);
        }
        power = power.mul(&shifted);
    }
    out
}
