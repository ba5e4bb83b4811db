//! Motion polynomials, the basic trigonometric motions, and point trajectories.

use std::fmt::Write as _;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::dualnum::DualNumber;
use crate::dualquat::{DualQuaternion, Quaternion};
use crate::error::{Error, Result};
use crate::poly::{DualPoly, RealPoly};
use crate::projd::CurveEvaluator;
use crate::series::Series;
use crate::tol::tolerance;

/// Polynomial in a central real indeterminate `t` with dual-quaternion
/// coefficients in ascending powers.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MotionPoly {
    pub coeffs: Vec<DualQuaternion>,
}

impl MotionPoly {
    pub fn new(mut coeffs: Vec<DualQuaternion>) -> Self {
        while coeffs.last() == Some(&DualQuaternion::ZERO) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(q: DualQuaternion) -> Self {
        Self::new(vec![q])
    }

    /// `t − h`
    pub fn linear(h: DualQuaternion) -> Self {
        Self::new(vec![-h, DualQuaternion::ONE])
    }

    /// Scalar polynomial with dual-number coefficients.
    pub fn from_dual_poly(p: &DualPoly) -> Self {
        let n = p.degree().map_or(0, |d| d + 1);
        Self::new((0..n).map(|i| DualQuaternion::from_dual_number(p.coeff(i))).collect())
    }

    pub fn from_real_poly(p: &RealPoly) -> Self {
        Self::from_dual_poly(&DualPoly::real(p.clone()))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; zero for the zero polynomial.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, i: usize) -> DualQuaternion {
        self.coeffs.get(i).copied().unwrap_or(DualQuaternion::ZERO)
    }

    pub fn leading(&self) -> DualQuaternion {
        self.coeffs.last().copied().unwrap_or(DualQuaternion::ZERO)
    }

    /// Drops leading coefficients whose entries are all below `tol`.
    pub fn trimmed(&self, tol: f64) -> Self {
        let mut c = self.coeffs.clone();
        while c.last().is_some_and(|q| q.max_abs() <= tol) {
            c.pop();
        }
        Self { coeffs: c }
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, q| m.max(q.max_abs()))
    }

    pub fn approx_eq(&self, o: &Self, tol: f64) -> bool {
        let n = self.coeffs.len().max(o.coeffs.len());
        (0..n).all(|i| self.coeff(i).approx_eq(o.coeff(i), tol))
    }

    /// `Σ cᵢ t₀ⁱ`
    pub fn eval(&self, t: f64) -> DualQuaternion {
        self.coeffs
            .iter()
            .rev()
            .fold(DualQuaternion::ZERO, |acc, &c| acc.scale(t) + c)
    }

    /// Value at `t = ∞`, the leading coefficient.
    pub fn eval_inf(&self) -> DualQuaternion {
        self.leading()
    }

    /// `Σ cᵢ hⁱ` with powers of `h` on the right. `t − h` is a right factor iff
    /// this vanishes.
    pub fn eval_right(&self, h: DualQuaternion) -> DualQuaternion {
        self.coeffs
            .iter()
            .rev()
            .fold(DualQuaternion::ZERO, |acc, &c| acc * h + c)
    }

    /// `Σ hⁱ cᵢ` with powers of `h` on the left.
    pub fn eval_left(&self, h: DualQuaternion) -> DualQuaternion {
        self.coeffs
            .iter()
            .rev()
            .fold(DualQuaternion::ZERO, |acc, &c| h * acc + c)
    }

    pub fn conj(&self) -> Self {
        Self::new(self.coeffs.iter().map(|q| q.conj()).collect())
    }

    pub fn eps_conj(&self) -> Self {
        Self::new(self.coeffs.iter().map(|q| q.eps_conj()).collect())
    }

    /// `f f̄`, a polynomial with dual-number coefficients.
    pub fn norm(&self) -> DualPoly {
        let prod = self * &self.conj();
        let scale = prod.max_abs().max(1.0);
        debug_assert!(
            prod.coeffs.iter().all(|q| {
                let p = q.primal.vector();
                let d = q.dual.vector();
                p.iter().chain(d.iter()).all(|v| v.abs() <= 1e-8 * scale)
            }),
            "norm polynomial has vector parts"
        );
        DualPoly::new(
            RealPoly::new(prod.coeffs.iter().map(|q| q.primal.w).collect()),
            RealPoly::new(prod.coeffs.iter().map(|q| q.dual.w).collect()),
        )
    }

    /// Whether the dual part of the norm vanishes identically.
    pub fn is_study(&self, tol: f64) -> bool {
        self.norm().is_real(tol)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.coeffs.iter().map(|q| q.scale(s)).collect())
    }

    /// Product with a central polynomial with dual-number coefficients.
    pub fn scale_poly(&self, p: &DualPoly) -> Self {
        &Self::from_dual_poly(p) * self
    }

    /// Left multiplication by a constant.
    pub fn left_mul(&self, q: DualQuaternion) -> Self {
        Self::new(self.coeffs.iter().map(|&c| q * c).collect())
    }

    /// Right multiplication by a constant.
    pub fn right_mul(&self, q: DualQuaternion) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * q).collect())
    }

    /// Right division `self = Q·g + R` with `deg R < deg g`. The leading
    /// coefficient of `g` must be invertible.
    pub fn div_rem_right(&self, g: &Self) -> Result<(Self, Self)> {
        let lead_inv = g.leading().inv()?;
        let dg = g.degree();
        let mut r = self.coeffs.clone();
        if r.len() <= dg {
            return Ok((Self::zero(), self.clone()));
        }
        let mut q = vec![DualQuaternion::ZERO; r.len() - dg];
        for k in (0..q.len()).rev() {
            let coef = r[k + dg] * lead_inv;
            q[k] = coef;
            for (j, &gj) in g.coeffs.iter().enumerate() {
                r[k + j] -= coef * gj;
            }
        }
        r.truncate(dg);
        Ok((Self::new(q), Self::new(r)))
    }

    /// Remainder modulo a central polynomial with invertible leading coefficient.
    pub fn rem_central(&self, m: &DualPoly) -> Result<Self> {
        let (_, r) = self.div_rem_right(&Self::from_dual_poly(m))?;
        Ok(r)
    }

    /// Coefficients of `f⁽ᵏ⁾(t)/k!` for `k = 0..=order`.
    pub fn taylor_coeffs(&self, t: f64, order: usize) -> Vec<DualQuaternion> {
        (0..=order)
            .map(|k| {
                self.coeffs
                    .iter()
                    .enumerate()
                    .skip(k)
                    .fold(DualQuaternion::ZERO, |acc, (i, &c)| {
                        acc + c.scale(binomial(i, k) * t.powi((i - k) as i32))
                    })
            })
            .collect()
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

impl CurveEvaluator for MotionPoly {
    fn eval(&self, t: f64) -> DualQuaternion {
        MotionPoly::eval(self, t)
    }

    fn taylor(&self, t: f64, order: usize) -> Option<Vec<DualQuaternion>> {
        Some(self.taylor_coeffs(t, order))
    }
}

impl Mul for &MotionPoly {
    type Output = MotionPoly;
    fn mul(self, o: &MotionPoly) -> MotionPoly {
        if self.is_zero() || o.is_zero() {
            return MotionPoly::zero();
        }
        let mut c = vec![DualQuaternion::ZERO; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in o.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        MotionPoly::new(c)
    }
}

impl Add for &MotionPoly {
    type Output = MotionPoly;
    fn add(self, o: &MotionPoly) -> MotionPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        MotionPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl Sub for &MotionPoly {
    type Output = MotionPoly;
    fn sub(self, o: &MotionPoly) -> MotionPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        MotionPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl Neg for &MotionPoly {
    type Output = MotionPoly;
    fn neg(self) -> MotionPoly {
        self.scale(-1.0)
    }
}

pub fn mp_mul(f: &MotionPoly, g: &MotionPoly) -> MotionPoly {
    f * g
}

pub fn mp_eval(f: &MotionPoly, t: f64) -> DualQuaternion {
    f.eval(t)
}

pub fn mp_eval_right(f: &MotionPoly, h: DualQuaternion) -> DualQuaternion {
    f.eval_right(h)
}

pub fn mp_norm(f: &MotionPoly) -> DualPoly {
    f.norm()
}

/// Taylor coefficients of `r(θ)·(1 − ½ε z 𝐤)` with `r(θ) = cos(θ/2) + sin(θ/2)𝐤`,
/// given the series of `θ` and `z` about a common parameter value.
pub fn cylinder_taylor(theta: &Series, z: &Series) -> Vec<DualQuaternion> {
    let (s, c) = theta.scale(0.5).sin_cos();
    let zs = z.mul(&s);
    let zc = z.mul(&c);
    (0..=theta.order())
        .map(|k| {
            DualQuaternion::from_arrays(
                [c.0[k], 0.0, 0.0, s.0[k]],
                [0.5 * zs.0[k], 0.0, 0.0, -0.5 * zc.0[k]],
            )
        })
        .collect()
}

/// Basic one-parameter motions about (or along) the 𝐤 axis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum TrigKind {
    /// `cos(ω/2) + sin(ω/2)𝐤`
    Rotation,
    /// `1 − ½εω·v`, unit speed along `direction` scaled by `speed`.
    Translation { direction: [f64; 3], speed: f64 },
    /// Rotation by `ω` with translation `pω` along the axis.
    Helical { pitch: f64 },
    /// Rotation by `ω` with translation `c sin ω` along the axis.
    Darboux { amplitude: f64 },
}

/// Trigonometric motion `ω ↦ F·h(ω)·F⁻¹` where `h` is a [`TrigKind`] motion and
/// `F` a fixed unit dual quaternion placing the axis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrigMotion {
    pub kind: TrigKind,
    pub frame: DualQuaternion,
}

impl TrigMotion {
    pub fn new(kind: TrigKind) -> Self {
        Self { kind, frame: DualQuaternion::ONE }
    }

    pub fn rotation() -> Self {
        Self::new(TrigKind::Rotation)
    }

    pub fn translation(direction: [f64; 3], speed: f64) -> Self {
        Self::new(TrigKind::Translation { direction, speed })
    }

    pub fn helical(pitch: f64) -> Self {
        Self::new(TrigKind::Helical { pitch })
    }

    pub fn darboux(amplitude: f64) -> Self {
        Self::new(TrigKind::Darboux { amplitude })
    }

    /// Same motion with its axis moved by the unit dual quaternion `frame`.
    pub fn with_frame(mut self, frame: DualQuaternion) -> Result<Self> {
        let n = frame.norm();
        if (n.primal - 1.0).abs() > 1e-9 || n.dual.abs() > 1e-9 {
            return Err(Error::InvalidParams("frame must be a unit dual quaternion".into()));
        }
        self.frame = frame;
        Ok(self)
    }

    fn place(&self, q: DualQuaternion) -> DualQuaternion {
        if self.frame == DualQuaternion::ONE {
            q
        } else {
            self.frame * q * self.frame.conj()
        }
    }

    /// Taylor coefficients `h⁽ᵏ⁾(ω)/k!`.
    pub fn taylor_coeffs(&self, omega: f64, order: usize) -> Vec<DualQuaternion> {
        let w = Series::variable(omega, order);
        let raw = match self.kind {
            TrigKind::Translation { direction, speed } => {
                let v = Quaternion::pure(direction).scale(-0.5 * speed);
                w.0.iter()
                    .enumerate()
                    .map(|(k, &wk)| {
                        let p = if k == 0 { Quaternion::ONE } else { Quaternion::ZERO };
                        DualQuaternion::new(p, v.scale(wk))
                    })
                    .collect()
            }
            TrigKind::Rotation => cylinder_taylor(&w, &Series::constant(0.0, order)),
            TrigKind::Helical { pitch } => cylinder_taylor(&w, &w.scale(pitch)),
            TrigKind::Darboux { amplitude } => {
                let (s, _) = w.sin_cos();
                cylinder_taylor(&w, &s.scale(amplitude))
            }
        };
        raw.into_iter().map(|q| self.place(q)).collect()
    }

    /// `k`-th derivative with respect to `ω`.
    pub fn derivative(&self, omega: f64, k: usize) -> DualQuaternion {
        self.taylor_coeffs(omega, k)[k].scale(crate::series::factorial(k))
    }
}

impl CurveEvaluator for TrigMotion {
    fn eval(&self, omega: f64) -> DualQuaternion {
        self.taylor_coeffs(omega, 0)[0]
    }

    fn taylor(&self, omega: f64, order: usize) -> Option<Vec<DualQuaternion>> {
        Some(self.taylor_coeffs(omega, order))
    }
}

/// Result of [`make_basic_motion`]; Darboux motions also carry the linear
/// motion polynomial `(1 + cε) + t𝐤` in the parameter `t = tan(ω/2)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasicMotion {
    pub trig: TrigMotion,
    pub poly: Option<MotionPoly>,
}

pub fn make_basic_motion(kind: TrigKind) -> Result<BasicMotion> {
    let finite = |v: f64| {
        if v.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidParams(format!("non-finite parameter {v}")))
        }
    };
    let poly = match kind {
        TrigKind::Rotation => None,
        TrigKind::Translation { direction, speed } => {
            direction.iter().try_for_each(|&v| finite(v))?;
            finite(speed)?;
            if direction.iter().all(|&v| v == 0.0) {
                return Err(Error::InvalidParams("zero translation direction".into()));
            }
            None
        }
        TrigKind::Helical { pitch } => {
            finite(pitch)?;
            None
        }
        TrigKind::Darboux { amplitude } => {
            finite(amplitude)?;
            Some(darboux_line(amplitude))
        }
    };
    Ok(BasicMotion { trig: TrigMotion::new(kind), poly })
}

/// `(1 + cε) + t𝐤`, the Darboux motion as a straight line in P³(𝔻).
pub fn darboux_line(c: f64) -> MotionPoly {
    MotionPoly::new(vec![
        DualQuaternion::from_dual_number(DualNumber::new(1.0, c)),
        DualQuaternion::K,
    ])
}

/// Sampled homogeneous trajectory `[y0 : y1 : y2 : y3]` of a point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub params: Vec<f64>,
    pub points: Vec<[f64; 4]>,
}

impl Trajectory {
    /// CSV with header `t,y0,y1,y2,y3`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,y0,y1,y2,y3\n");
        for (t, y) in self.params.iter().zip(&self.points) {
            let _ = writeln!(out, "{},{},{},{},{}", t, y[0], y[1], y[2], y[3]);
        }
        out
    }

    /// Affine points `y/y0`.
    pub fn affine(&self) -> Vec<[f64; 3]> {
        self.points.iter().map(|y| [y[1] / y[0], y[2] / y[0], y[3] / y[0]]).collect()
    }
}

/// Applies the motion to the affine point `x` at each sample parameter.
pub fn trajectory_of_point<C: CurveEvaluator + ?Sized>(
    m: &C,
    x: [f64; 3],
    samples: &[f64],
) -> Result<Trajectory> {
    let mut points = Vec::with_capacity(samples.len());
    for &t in samples {
        let q = m.eval(t);
        let y = q
            .act_on_point([1.0, x[0], x[1], x[2]])
            .map_err(|_| Error::NullConeParameter(t))?;
        points.push(y);
    }
    Ok(Trajectory { params: samples.to_vec(), points })
}

/// Homogeneous trajectory coordinates without the invertibility check; on the
/// null cone this yields `y0 = 0`.
pub fn trajectory_unchecked<C: CurveEvaluator + ?Sized>(
    m: &C,
    x: [f64; 3],
    samples: &[f64],
) -> Trajectory {
    Trajectory {
        params: samples.to_vec(),
        points: samples.iter().map(|&t| m.eval(t).act_unchecked([1.0, x[0], x[1], x[2]])).collect(),
    }
}

/// Rank threshold for degree estimation, relative to the largest singular value.
pub const DEGREE_RANK_TOL: f64 = 1e-7;

/// Smallest `k ≤ max_degree` such that polynomials `Y0..Y3` of degree `k`
/// interpolate the samples projectively: `Yⱼ(tᵢ) y_i0 − Y0(tᵢ) y_ij = 0`.
/// Returns `None` when no such degree exists.
pub fn estimate_trajectory_degree(params: &[f64], points: &[[f64; 4]], max_degree: usize) -> Option<usize> {
    let lo = params.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = params.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mid = 0.5 * (lo + hi);
    let half = (0.5 * (hi - lo)).max(1e-12);
    let scaled: Vec<f64> = params.iter().map(|t| (t - mid) / half).collect();
    let unit: Vec<[f64; 4]> = points
        .iter()
        .map(|y| {
            let n = y.iter().map(|v| v * v).sum::<f64>().sqrt();
            y.map(|v| v / n)
        })
        .collect();
    for k in 0..=max_degree {
        let nb = k + 1;
        let ncols = 4 * nb;
        let nrows = 3 * params.len();
        if nrows < ncols {
            return None;
        }
        let mut a = DMatrix::<f64>::zeros(nrows, ncols);
        for (i, (&s, y)) in scaled.iter().zip(&unit).enumerate() {
            let basis = chebyshev(s, nb);
            for j in 1..4 {
                let row = 3 * i + j - 1;
                for (b, &tb) in basis.iter().enumerate() {
                    a[(row, j * nb + b)] = tb * y[0];
                    a[(row, b)] = -tb * y[j];
                }
            }
        }
        let sv = a.svd(false, false).singular_values;
        let max = sv.max();
        let min = sv.min();
        if min <= DEGREE_RANK_TOL * max {
            return Some(k);
        }
    }
    None
}

fn chebyshev(s: f64, n: usize) -> Vec<f64> {
    let mut t = vec![1.0; n];
    if n > 1 {
        t[1] = s;
    }
    for i in 2..n {
        t[i] = 2.0 * s * t[i - 1] - t[i - 2];
    }
    t
}

/// `tan(ω/2)` as a series about `ω`.
pub fn tan_half_series(omega: f64, order: usize) -> Series {
    let (s, c) = Series::variable(omega, order).scale(0.5).sin_cos();
    s.mul(&c.recip())
}

/// Degree of the trajectory of `x` under a motion polynomial, sampled over `range`.
pub fn poly_trajectory_degree(m: &MotionPoly, x: [f64; 3], range: (f64, f64), n: usize) -> Result<Option<usize>> {
    let samples: Vec<f64> = (0..n)
        .map(|i| range.0 + (range.1 - range.0) * i as f64 / (n - 1) as f64)
        .collect();
    let tr = trajectory_of_point(m, x, &samples)?;
    Ok(estimate_trajectory_degree(&tr.params, &tr.points, 2 * m.degree() + 1))
}

/// Degree of the trajectory of `x` under a trigonometric motion, as a rational
/// curve in `τ = tan(ω/2)`, sampled on `ω ∈ (−π, π)`.
pub fn trig_trajectory_degree(m: &TrigMotion, x: [f64; 3], n: usize) -> Result<Option<usize>> {
    let omegas: Vec<f64> = (0..n).map(|i| -2.5 + 5.0 * i as f64 / (n - 1) as f64).collect();
    let tr = trajectory_of_point(m, x, &omegas)?;
    let taus: Vec<f64> = omegas.iter().map(|w| (w / 2.0).tan()).collect();
    Ok(estimate_trajectory_degree(&taus, &tr.points, 8))
}

/// Whether the primal norm is non-invertible at `t` within tolerance.
pub fn is_null_parameter(m: &MotionPoly, t: f64) -> bool {
    m.norm().primal.eval(t).abs() <= tolerance() * m.max_abs().powi(2).max(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projd::{contact_order, same_point};

    const ONE: DualQuaternion = DualQuaternion::ONE;
    const I: DualQuaternion = DualQuaternion::I;
    const J: DualQuaternion = DualQuaternion::J;
    const K: DualQuaternion = DualQuaternion::K;
    const E: DualQuaternion = DualQuaternion::EPS;

    fn dq(p: [f64; 4], d: [f64; 4]) -> DualQuaternion {
        DualQuaternion::from_arrays(p, d)
    }

    fn example_factors() -> [MotionPoly; 2] {
        let r3 = 3f64.sqrt();
        let f1 = MotionPoly::linear(-dq([0.0, r3 / 2.0, 0.0, -0.5], [0.0, -1.0 / 3.0, 1.0, -r3 / 3.0]));
        let f2 = MotionPoly::linear(-dq([0.0, -r3 / 2.0, 0.0, 0.5], [r3, 1.0 / 3.0, 0.0, r3 / 3.0]));
        [f1, f2]
    }

    fn example_c() -> MotionPoly {
        let r3 = 3f64.sqrt();
        MotionPoly::new(vec![ONE + E * I.scale(2.0), E.scale(r3) + E * J, ONE])
    }

    #[test]
    fn product_of_linear_factors() {
        let f = MotionPoly::linear(I);
        let g = MotionPoly::linear(J);
        let p = &f * &g;
        assert_eq!(p.coeffs, vec![K, -(I + J), ONE]);
        let one = MotionPoly::constant(ONE);
        assert_eq!(&f * &one, f);
    }

    #[test]
    fn example_product() {
        let [f1, f2] = example_factors();
        assert!((&f1 * &f2).approx_eq(&example_c(), 1e-14));
    }

    #[test]
    fn evaluation() {
        let p = MotionPoly::from_real_poly(&RealPoly::new(vec![1.0, 0.0, 1.0]));
        assert_eq!(p.eval(2.0), ONE.scale(5.0));
        let c = example_c();
        assert_eq!(c.eval_inf(), ONE);
        let h = dq([0.3, -1.2, 0.5, 2.0], [0.1, 0.7, -0.4, 0.9]);
        assert!(MotionPoly::linear(h).eval_right(h).max_abs() < 1e-15);
    }

    #[test]
    fn right_root_iff_right_factor() {
        let [f1, f2] = example_factors();
        let c = example_c();
        let h = -f2.coeff(0);
        assert!(c.eval_right(h).max_abs() < 1e-14);
        let (q, r) = c.div_rem_right(&f2).unwrap();
        assert!(r.max_abs() < 1e-14);
        assert!(q.approx_eq(&f1, 1e-14));
    }

    #[test]
    fn norms() {
        let n = MotionPoly::linear(K).norm();
        assert_eq!(n, DualPoly::real(RealPoly::new(vec![1.0, 0.0, 1.0])));
        // (t²+1)² + ε·2(t²+1)√3 t
        let r3 = 3f64.sqrt();
        let n = example_c().norm();
        let expect_p = [1.0, 0.0, 2.0, 0.0, 1.0];
        let expect_d = [0.0, 2.0 * r3, 0.0, 2.0 * r3];
        for i in 0..5 {
            assert!((n.primal.coeff(i) - expect_p[i]).abs() < 1e-14);
            assert!((n.dual.coeff(i) - expect_d.get(i).copied().unwrap_or(0.0)).abs() < 1e-14);
        }
    }

    #[test]
    fn norm_is_multiplicative() {
        let f = MotionPoly::new(vec![dq([1.0, 2.0, -1.0, 0.5], [0.3, 0.0, 1.0, -2.0]), dq([0.5, 0.0, 1.0, 1.0], [1.0, 1.0, 0.0, 0.0])]);
        let g = MotionPoly::new(vec![dq([0.0, 1.0, 1.0, 0.0], [2.0, 0.0, -1.0, 0.4]), ONE, dq([0.2, 0.0, 0.0, 1.0], [0.0, 0.5, 0.5, 0.0])]);
        let lhs = (&f * &g).norm();
        let rhs = &f.norm() * &g.norm();
        for i in 0..7 {
            assert!((lhs.primal.coeff(i) - rhs.primal.coeff(i)).abs() < 1e-12);
            assert!((lhs.dual.coeff(i) - rhs.dual.coeff(i)).abs() < 1e-12);
        }
    }

    #[test]
    fn study_polynomials_compose() {
        // t − h is Study when h is a line: pure, with orthogonal primal and dual parts
        let a = MotionPoly::linear(K + E * I.scale(2.0));
        let b = MotionPoly::linear(I.scale(0.5) + E * (J - K));
        assert!(a.is_study(1e-12) && b.is_study(1e-12));
        assert!((&a * &b).is_study(1e-12));
    }

    #[test]
    fn helical_derivatives_at_zero() {
        let p = 0.7;
        let h = TrigMotion::helical(p);
        assert!(h.derivative(0.0, 1).approx_eq(K.scale(0.5) - E * K.scale(0.5 * p), 1e-15));
        assert!(h.derivative(0.0, 2).approx_eq(ONE.scale(-0.25) + E.scale(0.5 * p), 1e-15));
        assert!(h.derivative(0.0, 3).approx_eq(K.scale(-0.125) + E * K.scale(0.375 * p), 1e-15));
        let d = TrigMotion::darboux(p);
        assert!(d.derivative(0.0, 3).approx_eq(K.scale(-0.125) + E * K.scale(0.875 * p), 1e-15));
        assert_eq!(h.eval(0.0), ONE);
        assert_eq!(d.eval(0.0), ONE);
    }

    #[test]
    fn helical_matches_closed_form() {
        let p = 1.3;
        let w = 0.9f64;
        let (s, c) = (w / 2.0).sin_cos();
        let expect = ONE.scale(c) + K.scale(s) + E.scale(0.5 * p * w * s) - E * K.scale(0.5 * p * w * c);
        assert!(TrigMotion::helical(p).eval(w).approx_eq(expect, 1e-15));
    }

    #[test]
    fn translation_moves_points() {
        let m = TrigMotion::translation([0.0, 0.0, 1.0], 2.0);
        let y = m.eval(0.5).transform_point([1.0, 0.0, 0.0]).unwrap();
        assert!((y[2] - 1.0).abs() < 1e-15 && (y[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn darboux_line_matches_trig_motion() {
        let c = 0.8;
        let line = darboux_line(c);
        let d = TrigMotion::darboux(c);
        for &w in &[-2.0, -0.3, 0.0, 1.1, 2.9] {
            assert!(same_point(line.eval((w / 2.0f64).tan()), d.eval(w), 1e-12));
        }
        let b = make_basic_motion(TrigKind::Darboux { amplitude: c }).unwrap();
        assert_eq!(b.poly, Some(line));
        assert!(make_basic_motion(TrigKind::Helical { pitch: f64::NAN }).is_err());
    }

    #[test]
    fn framed_motion_is_conjugate() {
        let f = DualQuaternion::translation([1.0, 2.0, 0.0]) * DualQuaternion::rotation([1.0, 0.0, 0.0], 0.4);
        let m = TrigMotion::helical(0.5).with_frame(f).unwrap();
        let base = TrigMotion::helical(0.5);
        let w = 1.2;
        assert!(m.eval(w).approx_eq(f * base.eval(w) * f.conj(), 1e-14));
        assert_eq!(contact_order(&m, &m, w, w, 3).unwrap(), 3);
    }

    #[test]
    fn taylor_matches_finite_differences() {
        let m = TrigMotion::darboux(1.5).with_frame(DualQuaternion::rotation([0.0, 1.0, 1.0], 0.7)).unwrap();
        let exact = m.taylor_coeffs(0.4, 3);
        let fd = crate::projd::finite_difference_taylor(&|w: f64| m.eval(w), 0.4, 3);
        for k in 0..=3 {
            assert!((exact[k] - fd[k]).max_abs() < 1e-6, "order {k}");
        }
        let c = example_c();
        let exact = c.taylor_coeffs(0.7, 2);
        assert!((exact[1] - (c.coeff(1) + c.coeff(2).scale(1.4))).max_abs() < 1e-15);
        assert_eq!(exact[2], c.coeff(2));
    }

    #[test]
    fn darboux_trajectories_are_conics() {
        let d = TrigMotion::darboux(0.8);
        // point on the axis: straight segment
        assert_eq!(trig_trajectory_degree(&d, [0.0, 0.0, 0.5], 40).unwrap(), Some(2));
        // generic point: ellipse
        assert_eq!(trig_trajectory_degree(&d, [1.0, -0.5, 0.3], 40).unwrap(), Some(2));
    }

    #[test]
    fn dual_scalar_multiple_has_same_trajectories() {
        let c = example_c();
        let lambda = DualPoly::new(RealPoly::new(vec![1.0, 0.0, 1.0]), RealPoly::new(vec![0.5, -1.0]));
        let lc = c.scale_poly(&lambda);
        let ts = [-1.0, -0.2, 0.4, 2.0];
        let a = trajectory_of_point(&c, [0.3, 1.0, -2.0], &ts).unwrap().affine();
        let b = trajectory_of_point(&lc, [0.3, 1.0, -2.0], &ts).unwrap().affine();
        for (p, q) in a.iter().zip(&b) {
            for i in 0..3 {
                assert!((p[i] - q[i]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn translational_quadratic_has_conic_trajectories() {
        let c = example_c();
        assert_eq!(poly_trajectory_degree(&c, [0.4, -1.0, 2.0], (-3.0, 3.0), 30).unwrap(), Some(2));
    }

    #[test]
    fn null_parameter_is_reported() {
        let m = MotionPoly::new(vec![E, ONE]);
        assert!(is_null_parameter(&m, 0.0));
        assert_eq!(
            trajectory_of_point(&m, [0.0; 3], &[1.0, 0.0]),
            Err(Error::NullConeParameter(0.0))
        );
    }

    #[test]
    fn csv_export() {
        let tr = trajectory_of_point(&TrigMotion::rotation(), [1.0, 0.0, 0.0], &[0.0]).unwrap();
        assert_eq!(tr.to_csv(), "t,y0,y1,y2,y3\n0,1,1,0,0\n");
    }

    #[test]
    fn json_shape() {
        let v: serde_json::Value = serde_json::to_value(&MotionPoly::linear(K)).unwrap();
        assert_eq!(v["coeffs"].as_array().unwrap().len(), 2);
    }
}
