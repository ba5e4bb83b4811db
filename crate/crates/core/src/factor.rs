//! Factorization of quadratic motion polynomials into linear factors.

use std::collections::BTreeMap;

use nalgebra::{Complex, Matrix3, Rotation3, UnitQuaternion};
use serde::{Deserialize, Serialize};

use crate::dualnum::DualNumber;
use crate::dualquat::{DualQuaternion, Quaternion};
use crate::error::{Error, Result};
use crate::motionpoly::MotionPoly;
use crate::poly::{quadratic_roots, DualPoly, RealPoly};
use crate::projd::projective_distance;

/// Relative tolerance for detecting double and quadruple roots of the primal norm.
pub const ROOT_TOL: f64 = 1e-7;
/// Relative tolerance for exact divisions and product checks.
const CHECK_TOL: f64 = 1e-8;

/// Which kind of null-cone conic a quadratic motion polynomial is.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NullConeCase {
    /// The primal part has no real polynomial factor.
    NoRealFactor,
    /// The primal part is an irreducible real quadratic: a bounded translation.
    IrreducibleQuadratic,
    /// The primal part is a product of two distinct real linear factors: a
    /// translation along a hyperbola.
    TwoRealLinear,
    NotNullCone,
}

impl NullConeCase {
    pub fn label(self) -> &'static str {
        match self {
            Self::NoRealFactor => "a",
            Self::IrreducibleQuadratic => "b",
            Self::TwoRealLinear => "c",
            Self::NotNullCone => "none",
        }
    }
}

/// Case together with the double roots of `p p̄ = σ²`.
#[derive(Clone, Debug, PartialEq)]
pub struct CaseInfo {
    pub case: NullConeCase,
    pub roots: [Complex<f64>; 2],
    /// Monic `σ` with `p p̄ = |c₂|² σ²`.
    pub sigma: RealPoly,
}

/// Scalar factor `1 + ελ/(t − root)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Prefactor {
    pub lambda: f64,
    pub root: f64,
}

impl Prefactor {
    pub fn eval(&self, t: f64) -> DualNumber {
        DualNumber::new(1.0, self.lambda / (t - self.root))
    }
}

/// `c = (∏ prefactors)·F₁·F₂`. The prefactors are central, so their position in
/// the product does not matter.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FactorizationResult {
    #[serde(default)]
    pub prefactors: Vec<Prefactor>,
    pub factors: Vec<MotionPoly>,
    #[serde(default)]
    pub family_params: BTreeMap<String, f64>,
    /// All factorizations of the input describe the same kinematic chain.
    #[serde(default)]
    pub kinematically_unique: bool,
}

impl FactorizationResult {
    /// Product of the polynomial factors, without prefactors.
    pub fn product(&self) -> MotionPoly {
        self.factors
            .iter()
            .fold(MotionPoly::constant(DualQuaternion::ONE), |acc, f| &acc * f)
    }

    pub fn eval(&self, t: f64) -> DualQuaternion {
        let s = self
            .prefactors
            .iter()
            .fold(DualNumber::new(1.0, 0.0), |acc, p| acc * p.eval(t));
        self.product().eval(t).scale_dual(s)
    }

    /// Largest projective distance between `c` and the assembled product over `samples`.
    pub fn roundtrip_residual(&self, c: &MotionPoly, samples: &[f64]) -> f64 {
        samples
            .iter()
            .map(|&t| projective_distance(c.eval(t), self.eval(t)))
            .fold(0.0, f64::max)
    }
}

/// `a⁻¹f` for a linear `f = a·t + b`, the monic factor that carries the joint.
pub fn monic_linear(f: &MotionPoly) -> Result<MotionPoly> {
    if f.degree() != 1 {
        return Err(Error::InvalidParams(format!("expected a linear factor, got degree {}", f.degree())));
    }
    let inv = f.leading().inv()?;
    Ok(MotionPoly::linear(-(inv * f.coeff(0))))
}

/// Twenty fixed parameters used for projective roundtrip checks.
pub fn sample_params() -> Vec<f64> {
    (0..20).map(|i| 3.0 * (1.7 * i as f64 + 0.3).sin()).collect()
}

/// `c = c₂·c_m` with `c_m` monic.
fn monic(c: &MotionPoly) -> Result<(DualQuaternion, MotionPoly)> {
    let lead = c.leading();
    let inv = lead.inv().map_err(|_| Error::NotNullCone("leading coefficient is not invertible".into()))?;
    let mut m = c.left_mul(inv);
    let n = m.coeffs.len();
    m.coeffs[n - 1] = DualQuaternion::ONE;
    Ok((lead, m))
}

fn primal_part(c: &MotionPoly) -> MotionPoly {
    MotionPoly::new(c.coeffs.iter().map(|q| DualQuaternion::real(q.primal)).collect())
}

fn scalar_dual(c: &MotionPoly) -> RealPoly {
    RealPoly::new(c.coeffs.iter().map(|q| q.dual.w).collect())
}

/// Case distinction for a quadratic motion polynomial tangent to the null cone.
pub fn classify_case(c: &MotionPoly) -> Result<CaseInfo> {
    if c.degree() != 2 {
        return Err(Error::NotNullCone(format!("degree {} instead of 2", c.degree())));
    }
    let (_, cm) = monic(c)?;
    let pp = primal_part(&cm).norm().primal;
    let (sigma, res) = pp.square_root().ok_or_else(|| Error::NotNullCone("odd primal norm".into()))?;
    if res > ROOT_TOL {
        return Err(Error::NotNullCone(format!(
            "primal norm has no pair of double roots (square residual {res:e})"
        )));
    }
    let (s1, s0) = (sigma.coeff(1), sigma.coeff(0));
    let disc = s1 * s1 - 4.0 * s0;
    if disc.abs() <= ROOT_TOL * (s1 * s1).max(s0.abs()).max(1.0) {
        return Err(Error::QuadrupleRoot);
    }
    let scale = cm.max_abs().max(1.0);
    let real = cm
        .coeffs
        .iter()
        .all(|q| q.primal.vector().iter().all(|v| v.abs() <= CHECK_TOL * scale));
    let case = match (disc < 0.0, real) {
        (true, false) => NullConeCase::NoRealFactor,
        (true, true) => NullConeCase::IrreducibleQuadratic,
        (false, true) => NullConeCase::TwoRealLinear,
        (false, false) => {
            return Err(Error::NotNullCone("real double roots with a non-real primal part".into()))
        }
    };
    Ok(CaseInfo { case, roots: quadratic_roots(1.0, s1, s0), sigma })
}

/// The case, or `NotNullCone` for every input `classify_case` rejects.
pub fn case_of(c: &MotionPoly) -> NullConeCase {
    classify_case(c).map_or(NullConeCase::NotNullCone, |i| i.case)
}

/// Factorization `c = Q·(t − h)` with right factor of norm `s`, a real monic
/// quadratic factor of the norm of `c`.
pub fn factor_generic_quadratic(c: &MotionPoly, s: &RealPoly) -> Result<FactorizationResult> {
    factor_with_norm_factor(c, &DualPoly::real(s.monic()))
}

/// Factorization `c = Q·(t − h)` where `t − h` has norm `m`, a monic quadratic
/// factor of `c c̄` with dual coefficients.
pub fn factor_with_norm_factor(c: &MotionPoly, m: &DualPoly) -> Result<FactorizationResult> {
    if c.degree() != 2 || m.degree() != Some(2) {
        return Err(Error::InvalidParams("expected a quadratic polynomial and a quadratic norm factor".into()));
    }
    if (m.primal.leading() - 1.0).abs() > CHECK_TOL || m.dual.coeff(2).abs() > CHECK_TOL {
        return Err(Error::InvalidParams("norm factor must be monic".into()));
    }
    let (lead, cm) = monic(c).map_err(|_| Error::NonInvertibleRemainder)?;
    let norm = cm.norm();
    let rem = MotionPoly::from_dual_poly(&norm).rem_central(m)?;
    let scale = norm.primal.max_abs().max(norm.dual.max_abs()).max(1.0);
    let rem_primal = rem.coeffs.iter().fold(0.0f64, |a, q| a.max(q.primal.w.abs()));
    let rem_dual = rem.coeffs.iter().fold(0.0f64, |a, q| a.max(q.dual.w.abs()));
    if rem_primal > CHECK_TOL * scale {
        return Err(Error::NoFactorization(format!(
            "the quadratic does not divide the primal norm (remainder {rem_primal:e})"
        )));
    }
    if rem_dual > CHECK_TOL * scale {
        return Err(Error::NoFactorization(format!(
            "c(t0), c(t1) at the roots of the norm factor do not lie on the Study quadric \
             (dual remainder {rem_dual:e})"
        )));
    }
    let r = cm.rem_central(m)?;
    let (r0, r1) = (r.coeff(0), r.coeff(1));
    if r1.primal.norm() <= CHECK_TOL * cm.max_abs().max(1.0) {
        return Err(Error::NonInvertibleRemainder);
    }
    let h = -(r1.inv().map_err(|_| Error::NonInvertibleRemainder)? * r0);
    let right = MotionPoly::linear(h);
    let (q, rest) = c.div_rem_right(&right)?;
    let res = rest.max_abs();
    if res > CHECK_TOL * c.max_abs().max(1.0) {
        return Err(Error::NoFactorization(format!("right factor does not divide (remainder {res:e})")));
    }
    debug_assert!(q.leading().approx_eq(lead, 1e-6 * lead.max_abs().max(1.0)));
    let mut family_params = BTreeMap::new();
    family_params.insert("norm_dual0".to_string(), m.dual.coeff(0));
    family_params.insert("norm_dual1".to_string(), m.dual.coeff(1));
    Ok(FactorizationResult { prefactors: Vec::new(), factors: vec![q, right], family_params, kinematically_unique: false })
}

/// Real monic quadratic factors of the primal norm of `c`, one per pair of
/// complex conjugate roots.
pub fn norm_quadratic_factors(c: &MotionPoly) -> Result<Vec<RealPoly>> {
    if c.degree() != 2 {
        return Err(Error::InvalidParams(format!("degree {} instead of 2", c.degree())));
    }
    let roots = c.norm().primal.roots();
    let mut upper: Vec<_> = roots.iter().filter(|z| z.im > ROOT_TOL).collect();
    upper.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    if upper.len() * 2 != roots.len() {
        return Err(Error::NoFactorization("primal norm has real roots".into()));
    }
    Ok(upper
        .into_iter()
        .map(|z| RealPoly::new(vec![z.norm_sqr(), -2.0 * z.re, 1.0]))
        .collect())
}

/// Factorizations `c = Q·(t − h)` for every real quadratic factor of the primal
/// norm, for inputs off the null cone such as Bennett motions.
pub fn factor_by_norm_factors(c: &MotionPoly) -> Result<Vec<FactorizationResult>> {
    norm_quadratic_factors(c)?.iter().map(|s| factor_generic_quadratic(c, s)).collect()
}

/// Sign choice in the two-family solution for bounded translations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    /// Upper signs: `p₁ = +√(a²−b²)/a`.
    Upper,
    /// Lower signs: `p₁ = −√(a²−b²)/a`.
    Lower,
}

impl Branch {
    fn sign(self) -> f64 {
        match self {
            Self::Upper => 1.0,
            Self::Lower => -1.0,
        }
    }
}

/// `Σ cₖ·numᵏ·den^{n−k}`: homogeneous substitution of `num/den` into a
/// polynomial of formal degree `n`.
fn substitute(c: &MotionPoly, num: &RealPoly, den: &RealPoly, n: usize) -> MotionPoly {
    let mut out = MotionPoly::zero();
    for k in 0..=n {
        let mut w = RealPoly::constant(1.0);
        for _ in 0..k {
            w = &w * num;
        }
        for _ in k..n {
            w = &w * den;
        }
        out = &out + &(&MotionPoly::from_real_poly(&w) * &MotionPoly::constant(c.coeff(k)));
    }
    out
}

fn conj_by(c: &MotionPoly, r: Quaternion) -> MotionPoly {
    let (rq, rb) = (DualQuaternion::real(r), DualQuaternion::real(r.conj()));
    MotionPoly::new(c.coeffs.iter().map(|&q| rq * q * rb).collect())
}

fn norm3(v: [f64; 3]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross3(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

/// Coordinates in which a bounded translation reads
/// `t² + 1 + ε(γ₁t + γ₀ + b𝐣t + a𝐢)` with `a ≥ b ≥ 0`.
///
/// With `c = c₂·c_m`, `p_m = t² + βt + γ`:
/// `c_m(t) = α²·c₁((t + β/2)/α)`, `c₁(τ) ∝ (1+Tτ)²·c₃(σ(τ))` with
/// `σ = (τ − T)/(1 + Tτ)`, `c₃ = L·c₄` and `c₄ = R̄·c₅·R`.
#[derive(Clone, Debug)]
pub struct BoundedFrame {
    pub c2: DualQuaternion,
    pub alpha: f64,
    pub beta: f64,
    pub tan_phi: f64,
    pub lead: DualQuaternion,
    pub rot: Quaternion,
    pub canonical: MotionPoly,
    pub a: f64,
    pub b: f64,
    pub gamma0: f64,
    pub gamma1: f64,
}

impl BoundedFrame {
    pub fn new(c: &MotionPoly) -> Result<Self> {
        match classify_case(c) {
            Ok(info) if info.case == NullConeCase::IrreducibleQuadratic => {}
            _ => return Err(Error::NotCaseB),
        }
        let (c2, cm) = monic(c)?;
        let beta = cm.coeff(1).primal.w;
        let gamma = cm.coeff(0).primal.w;
        let alpha = (gamma - beta * beta / 4.0).sqrt();
        let c1 = substitute(&cm, &RealPoly::new(vec![-beta / 2.0, alpha]), &RealPoly::constant(1.0), 2)
            .scale(1.0 / (alpha * alpha));
        let e0 = c1.coeff(0).dual.vector();
        let e1 = c1.coeff(1).dual.vector();
        let two_phi = 0.5 * (2.0 * dot3(e0, e1)).atan2(dot3(e0, e0) - dot3(e1, e1));
        let tan_phi = (0.5 * two_phi).tan();
        let c3 = substitute(
            &c1,
            &RealPoly::new(vec![tan_phi, 1.0]),
            &RealPoly::new(vec![1.0, -tan_phi]),
            2,
        );
        let lead = c3.leading();
        let mut c4 = c3.left_mul(lead.inv()?);
        c4.coeffs[2] = DualQuaternion::ONE;
        let e0 = c4.coeff(0).dual.vector();
        let e1 = c4.coeff(1).dual.vector();
        let a = norm3(e0);
        if a <= CHECK_TOL * c4.max_abs().max(1.0) {
            return Err(Error::InvalidSemiAxes);
        }
        let x = e0.map(|v| v / a);
        let y0 = [e1[0] - dot3(e1, x) * x[0], e1[1] - dot3(e1, x) * x[1], e1[2] - dot3(e1, x) * x[2]];
        let y = if norm3(y0) > CHECK_TOL * a {
            y0.map(|v| v / norm3(y0))
        } else {
            // segment: any direction orthogonal to x
            let helper = if x[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
            let w = cross3(x, helper);
            w.map(|v| v / norm3(w))
        };
        let z = cross3(x, y);
        let m = Matrix3::new(x[0], x[1], x[2], y[0], y[1], y[2], z[0], z[1], z[2]);
        let uq = UnitQuaternion::from_rotation_matrix(&Rotation3::from_matrix_unchecked(m));
        let rot = Quaternion::new(uq.w, uq.i, uq.j, uq.k);
        let canonical = conj_by(&c4, rot);
        let gamma0 = canonical.coeff(0).dual.w;
        let gamma1 = canonical.coeff(1).dual.w;
        let a = canonical.coeff(0).dual.x;
        let b = canonical.coeff(1).dual.y;
        if b < -CHECK_TOL * a || b > a * (1.0 + CHECK_TOL) {
            return Err(Error::InvalidSemiAxes);
        }
        Ok(Self {
            c2,
            alpha,
            beta,
            tan_phi,
            lead,
            rot,
            canonical,
            a,
            b: b.max(0.0),
            gamma0,
            gamma1,
        })
    }

    /// Maps a linear polynomial in canonical coordinates back to the original
    /// parameter and frame, as a right factor (no constant from the left).
    fn right_factor_back(&self, f: &MotionPoly) -> MotionPoly {
        let t = self.tan_phi;
        let g4 = conj_by(f, self.rot.conj());
        let g1 = substitute(&g4, &RealPoly::new(vec![-t, 1.0]), &RealPoly::new(vec![1.0, t]), 1);
        substitute(
            &g1,
            &RealPoly::new(vec![self.beta / (2.0 * self.alpha), 1.0 / self.alpha]),
            &RealPoly::constant(1.0),
            1,
        )
    }

    /// Maps a quadratic polynomial in canonical coordinates back to the
    /// original parameter and frame.
    pub fn poly_back(&self, c5: &MotionPoly) -> MotionPoly {
        let t = self.tan_phi;
        let c4 = conj_by(c5, self.rot.conj());
        let c3 = c4.left_mul(self.lead);
        let c1 = substitute(&c3, &RealPoly::new(vec![-t, 1.0]), &RealPoly::new(vec![1.0, t]), 2)
            .scale(1.0 / (1.0 + t * t).powi(2));
        let c0 = substitute(
            &c1,
            &RealPoly::new(vec![self.beta / (2.0 * self.alpha), 1.0 / self.alpha]),
            &RealPoly::constant(1.0),
            2,
        )
        .scale(self.alpha * self.alpha);
        c0.left_mul(self.c2)
    }
}

/// Explicit linear factors `F₁ = t + P + εU`, `F₂ = t − P + εV` of the canonical
/// bounded translation. For `a = b` the single family has free parameters
/// `v₁, v₂`; the `v3` argument then supplies `v₁`.
pub fn bounded_translation_factors(
    a: f64,
    b: f64,
    gamma0: f64,
    gamma1: f64,
    v2: f64,
    v3: f64,
    branch: Branch,
) -> Result<(MotionPoly, MotionPoly, BTreeMap<String, f64>)> {
    if !(a > 0.0 && b >= 0.0 && b <= a * (1.0 + CHECK_TOL)) {
        return Err(Error::InvalidSemiAxes);
    }
    let mut params = BTreeMap::new();
    let (p, u, v);
    if a - b <= CHECK_TOL * a {
        let v1 = v3;
        p = [0.0, 0.0, -1.0];
        u = [gamma1 / 2.0, -v1, b - v2, -gamma0 / 2.0];
        v = [gamma1 / 2.0, v1, v2, gamma0 / 2.0];
        params.insert("v1".to_string(), v1);
        params.insert("v2".to_string(), v2);
    } else {
        let s = branch.sign();
        let r = (a * a - b * b).sqrt();
        p = [s * r / a, 0.0, -b / a];
        let u1 = s * (a * gamma0 - 2.0 * b * v3) / (2.0 * r);
        u = [gamma1 / 2.0 - s * r / 2.0, u1, b - v2, -v3];
        v = [gamma1 / 2.0 + s * r / 2.0, -u1, v2, v3];
        params.insert("v2".to_string(), v2);
        params.insert("v3".to_string(), v3);
    }
    let f1 = MotionPoly::new(vec![
        DualQuaternion::new(Quaternion::pure(p), Quaternion::from(u)),
        DualQuaternion::ONE,
    ]);
    let f2 = MotionPoly::new(vec![
        DualQuaternion::new(Quaternion::pure(p.map(|x| -x)), Quaternion::from(v)),
        DualQuaternion::ONE,
    ]);
    Ok((f1, f2, params))
}

/// Factorization of a bounded quadratic translation from the explicit
/// two-parameter families. The input is brought to canonical form internally;
/// `v2`, `v3` refer to the canonical coordinates.
pub fn factor_bounded_translation(c: &MotionPoly, v2: f64, v3: f64, branch: Branch) -> Result<FactorizationResult> {
    let frame = BoundedFrame::new(c)?;
    let (_, f2, family_params) =
        bounded_translation_factors(frame.a, frame.b, frame.gamma0, frame.gamma1, v2, v3, branch)?;
    let g = frame.right_factor_back(&f2);
    let h = -(g.leading().inv()? * g.coeff(0));
    let right = MotionPoly::linear(h);
    let (left, rest) = c.div_rem_right(&right)?;
    let res = rest.max_abs();
    if res > CHECK_TOL * c.max_abs().max(1.0) {
        return Err(Error::DegenerateConfiguration(format!("factor roundtrip failed (remainder {res:e})")));
    }
    Ok(FactorizationResult { prefactors: Vec::new(), factors: vec![left, right], family_params, kinematically_unique: false })
}

/// The representative of the same bounded translation with `γ₀ = 0` and
/// `γ₁ = ±√(a² − b²)` in canonical coordinates. With `Branch::Upper` the first
/// factor of the upper branch and the second factor of the lower branch have
/// real norm.
pub fn revolute_representative(c: &MotionPoly, sign: Branch) -> Result<MotionPoly> {
    let frame = BoundedFrame::new(c)?;
    let r = (frame.a * frame.a - frame.b * frame.b).max(0.0).sqrt();
    let mut canon = frame.canonical.clone();
    canon.coeffs[0].dual.w = 0.0;
    canon.coeffs[1].dual.w = sign.sign() * r;
    Ok(frame.poly_back(&canon))
}

/// The real linear factors `t − t₀`, `t − t₁` (`t₀ < t₁`) of the primal part in
/// the hyperbolic case.
pub fn hyperbolic_roots(c: &MotionPoly) -> Result<(f64, f64)> {
    match classify_case(c) {
        Ok(info) if info.case == NullConeCase::TwoRealLinear => {
            let (a, b) = (info.roots[0].re, info.roots[1].re);
            Ok((a.min(b), a.max(b)))
        }
        _ => Err(Error::NotCaseC),
    }
}

/// `c̃ = (1 − ε(d + d̄)/(2s₁s₂))·c_m` (times `c₂`), a polynomial with real norm
/// `|c₂|²s₁²s₂²` describing the same motion.
pub fn reduce_to_study(c: &MotionPoly, s1: &RealPoly, s2: &RealPoly) -> Result<MotionPoly> {
    let (r0, r1) = hyperbolic_roots(c)?;
    let (s1, s2) = (s1.monic(), s2.monic());
    let given = [-s1.coeff(0), -s2.coeff(0)];
    let matches = |x: f64, y: f64| (x - y).abs() <= ROOT_TOL * x.abs().max(y.abs()).max(1.0);
    let ok = (matches(given[0], r0) && matches(given[1], r1)) || (matches(given[0], r1) && matches(given[1], r0));
    if s1.degree() != Some(1) || s2.degree() != Some(1) || !ok {
        return Err(Error::InvalidParams("s1, s2 are not the linear factors of the primal part".into()));
    }
    let (lead, cm) = monic(c)?;
    // (d + d̄)/(2 s₁s₂)·p = scal(d) because p = s₁s₂
    let mut red = cm.clone();
    for q in red.coeffs.iter_mut() {
        q.dual.w = 0.0;
    }
    let out = red.left_mul(lead);
    let norm = out.norm();
    if !norm.is_real(CHECK_TOL) {
        return Err(Error::DegenerateConfiguration("reduced polynomial has non-real norm".into()));
    }
    Ok(out)
}

/// `c = (1 + ελ₁/s₁)F₁(1 + ελ₂/s₂)F₂` with `F₁F̄₁ ∝ s₁²`, `F₂F̄₂ = s₂²`.
pub fn factor_hyperbolic_translation(c: &MotionPoly) -> Result<FactorizationResult> {
    let (t0, t1) = hyperbolic_roots(c)?;
    let s1 = RealPoly::linear_root(t0);
    let s2 = RealPoly::linear_root(t1);
    let (_, cm) = monic(c)?;
    let reduced = reduce_to_study(c, &s1, &s2)?;
    let mut fact = factor_generic_quadratic(&reduced, &(&s2 * &s2))?;
    let sd = scalar_dual(&cm);
    fact.prefactors = vec![
        Prefactor { lambda: sd.eval(t0) / (t0 - t1), root: t0 },
        Prefactor { lambda: sd.eval(t1) / (t1 - t0), root: t1 },
    ];
    fact.family_params.clear();
    fact.kinematically_unique = true;
    Ok(fact)
}

/// Dispatches on the case and returns one factorization, or all for case b.
pub fn factor_auto(c: &MotionPoly, v2: f64, v3: f64) -> Result<(NullConeCase, Vec<FactorizationResult>)> {
    let info = classify_case(c)?;
    let out = match info.case {
        NullConeCase::NoRealFactor => vec![factor_generic_quadratic(c, &info.sigma)?],
        NullConeCase::IrreducibleQuadratic => vec![
            factor_bounded_translation(c, v2, v3, Branch::Upper)?,
            factor_bounded_translation(c, v2, v3, Branch::Lower)?,
        ],
        NullConeCase::TwoRealLinear => vec![factor_hyperbolic_translation(c)?],
        NullConeCase::NotNullCone => unreachable!(),
    };
    Ok((info.case, out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn dq(p: [f64; 4], d: [f64; 4]) -> DualQuaternion {
        DualQuaternion::from_arrays(p, d)
    }

    fn example_c() -> MotionPoly {
        let s3 = 3f64.sqrt();
        MotionPoly::new(vec![
            dq([1.0, 0.0, 0.0, 0.0], [0.0, 2.0, 0.0, 0.0]),
            dq([0.0; 4], [s3, 0.0, 1.0, 0.0]),
            DualQuaternion::ONE,
        ])
    }

    fn lin(p: [f64; 4], d: [f64; 4]) -> MotionPoly {
        MotionPoly::new(vec![dq(p, d), DualQuaternion::ONE])
    }

    fn rand_q(rng: &mut StdRng) -> [f64; 4] {
        std::array::from_fn(|_| rng.random_range(-1.0..1.0))
    }

    /// Residuals of the coefficient comparison `c = F₁F₂` for the canonical form.
    fn nine_equations(p: [f64; 3], u: [f64; 4], v: [f64; 4], a: f64, b: f64, g0: f64, g1: f64) -> [f64; 9] {
        [
            u[0] + v[0] - g1,
            u[1] + v[1],
            u[2] + v[2] - b,
            u[3] + v[3],
            p[0] * p[0] + p[1] * p[1] + p[2] * p[2] - 1.0,
            p[0] * (u[1] - v[1]) + p[1] * (u[2] - v[2]) + p[2] * (u[3] - v[3]) - g0,
            p[0] * (v[0] - u[0]) + p[1] * (u[3] + v[3]) - p[2] * (u[2] + v[2]) - a,
            -p[0] * (u[3] + v[3]) + p[1] * (v[0] - u[0]) + p[2] * (u[1] + v[1]),
            p[0] * (u[2] + v[2]) - p[1] * (u[1] + v[1]) + p[2] * (v[0] - u[0]),
        ]
    }

    #[test]
    fn example_is_case_b() {
        let info = classify_case(&example_c()).unwrap();
        assert_eq!(info.case, NullConeCase::IrreducibleQuadratic);
        assert!((info.roots[0].im.abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn example_branches_match_printed_factors() {
        let s3 = 3f64.sqrt();
        let c = example_c();
        let f = factor_bounded_translation(&c, 0.0, 1.0 / s3, Branch::Upper).unwrap();
        let g = factor_bounded_translation(&c, 0.0, 1.0 / s3, Branch::Lower).unwrap();
        let f1 = lin([0.0, s3 / 2.0, 0.0, -0.5], [0.0, -1.0 / 3.0, 1.0, -s3 / 3.0]);
        let f2 = lin([0.0, -s3 / 2.0, 0.0, 0.5], [s3, 1.0 / 3.0, 0.0, s3 / 3.0]);
        let g1 = lin([0.0, -s3 / 2.0, 0.0, -0.5], [s3, 1.0 / 3.0, 1.0, -s3 / 3.0]);
        let g2 = lin([0.0, s3 / 2.0, 0.0, 0.5], [0.0, -1.0 / 3.0, 0.0, s3 / 3.0]);
        assert!(f.factors[0].approx_eq(&f1, 1e-12));
        assert!(f.factors[1].approx_eq(&f2, 1e-12));
        assert!(g.factors[0].approx_eq(&g1, 1e-12));
        assert!(g.factors[1].approx_eq(&g2, 1e-12));
        assert!(f.product().approx_eq(&c, 1e-12));
        assert!(g.product().approx_eq(&c, 1e-12));
    }

    #[test]
    fn explicit_families_solve_coefficient_equations() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..200 {
            let b = rng.random_range(0.0..2.0);
            let a = b + rng.random_range(0.01..2.0);
            let (g0, g1) = (rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            let (v2, v3) = (rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            for br in [Branch::Upper, Branch::Lower] {
                let (f1, f2, _) = bounded_translation_factors(a, b, g0, g1, v2, v3, br).unwrap();
                let h1 = f1.coeff(0);
                let h2 = f2.coeff(0);
                let res = nine_equations(h1.primal.vector(), h1.dual.to_array(), h2.dual.to_array(), a, b, g0, g1);
                assert!(res.iter().all(|r| r.abs() < 1e-10), "{res:?}");
                assert!((h1.primal.vector()[1]).abs() < 1e-15);
                let _ = h2;
            }
        }
    }

    #[test]
    fn circular_family() {
        let c = MotionPoly::new(vec![
            dq([1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0]),
            dq([0.0; 4], [0.0, 0.0, 1.0, 0.0]),
            DualQuaternion::ONE,
        ]);
        let f = factor_bounded_translation(&c, 0.3, -0.2, Branch::Upper).unwrap();
        assert!(f.factors[0].coeff(0).primal.approx_eq_q(Quaternion::new(0.0, 0.0, 0.0, -1.0)));
        assert!(f.product().approx_eq(&c, 1e-12));
        // both factors Study: rotations about vertical axes
        assert!(f.factors.iter().all(|g| g.is_study(1e-12)));
        for v in [(0.0, 0.0), (1.0, 2.0)] {
            let (f1, f2, _) = bounded_translation_factors(1.0, 1.0, 0.4, -0.7, v.0, v.1, Branch::Lower).unwrap();
            let res = nine_equations(
                f1.coeff(0).primal.vector(),
                f1.coeff(0).dual.to_array(),
                f2.coeff(0).dual.to_array(),
                1.0,
                1.0,
                0.4,
                -0.7,
            );
            assert!(res.iter().all(|r| r.abs() < 1e-12));
        }
    }

    trait QApprox {
        fn approx_eq_q(self, o: Quaternion) -> bool;
    }
    impl QApprox for Quaternion {
        fn approx_eq_q(self, o: Quaternion) -> bool {
            (self - o).max_abs() < 1e-12
        }
    }

    fn random_bounded(rng: &mut StdRng) -> MotionPoly {
        // canonical ellipse moved by a random pose, reparametrized, and scaled
        let b = rng.random_range(0.0..1.5);
        let a = b + rng.random_range(0.1..1.5);
        let canon = MotionPoly::new(vec![
            dq([1.0, 0.0, 0.0, 0.0], [rng.random_range(-1.0..1.0), a, 0.0, 0.0]),
            dq([0.0; 4], [rng.random_range(-1.0..1.0), 0.0, b, 0.0]),
            DualQuaternion::ONE,
        ]);
        let t = rng.random_range(-0.8..0.8);
        let mob = substitute(&canon, &RealPoly::new(vec![t, 1.0]), &RealPoly::new(vec![1.0, -t]), 2);
        let (al, be) = (rng.random_range(0.5..2.0), rng.random_range(-1.0..1.0));
        let aff = substitute(&mob, &RealPoly::new(vec![be, al]), &RealPoly::constant(1.0), 2);
        let r = Quaternion::from(rand_q(rng)).scale(1.0);
        let r = r.scale(1.0 / r.norm());
        let left = dq(rand_q(rng), rand_q(rng));
        conj_by(&aff, r).left_mul(left)
    }

    #[test]
    fn bounded_translation_roundtrip_for_general_input() {
        let mut rng = StdRng::seed_from_u64(3);
        let samples = sample_params();
        for _ in 0..50 {
            let c = random_bounded(&mut rng);
            assert_eq!(case_of(&c), NullConeCase::IrreducibleQuadratic);
            let v2 = rng.random_range(-2.0..2.0);
            let v3 = rng.random_range(-2.0..2.0);
            for br in [Branch::Upper, Branch::Lower] {
                let f = factor_bounded_translation(&c, v2, v3, br).unwrap();
                assert!(f.roundtrip_residual(&c, &samples) < 1e-8);
                let nc = c.norm();
                let np = &f.factors[0].norm() * &f.factors[1].norm();
                assert!((&nc.primal - &np.primal).max_abs() < 1e-8 * nc.primal.max_abs());
                assert!((&nc.dual - &np.dual).max_abs() < 1e-8 * nc.primal.max_abs());
            }
        }
    }

    #[test]
    fn frame_of_canonical_input_is_trivial() {
        let fr = BoundedFrame::new(&example_c()).unwrap();
        assert_eq!((fr.a, fr.b), (2.0, 1.0));
        assert!((fr.gamma1 - 3f64.sqrt()).abs() < 1e-15 && fr.gamma0 == 0.0);
        assert!(fr.poly_back(&fr.canonical).approx_eq(&example_c(), 1e-14));
    }

    #[test]
    fn revolute_representative_gives_real_norm_factors() {
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..20 {
            let c = random_bounded(&mut rng);
            let rep = revolute_representative(&c, Branch::Upper).unwrap();
            // same motion: the action on points agrees
            for &t in &sample_params()[..5] {
                let x = [1.0, 0.3, -0.2, 0.7];
                let y1 = c.eval(t).act_on_point(x).unwrap();
                let y2 = rep.eval(t).act_on_point(x).unwrap();
                assert!((0..4).all(|i| (y1[i] / y1[0] - y2[i] / y2[0]).abs() < 1e-8));
            }
            let f = factor_bounded_translation(&rep, 0.2, 0.1, Branch::Upper).unwrap();
            let g = factor_bounded_translation(&rep, -0.4, 0.5, Branch::Lower).unwrap();
            let study = |x: &MotionPoly| monic_linear(x).unwrap().is_study(1e-8);
            assert!(study(&f.factors[0]) && !study(&f.factors[1]));
            assert!(study(&g.factors[1]) && !study(&g.factors[0]));
        }
    }

    fn case_a_input(rng: &mut StdRng, study: bool) -> MotionPoly {
        // two factors whose primal norms coincide but whose product has no real factor
        let h0 = rng.random_range(-1.0..1.0);
        let v: [f64; 3] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let w0: [f64; 3] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let s = norm3(v) / norm3(w0);
        let w = w0.map(|x| x * s);
        let f1 = lin([-h0, -v[0], -v[1], -v[2]], rand_q(rng));
        let f2 = lin([-h0, -w[0], -w[1], -w[2]], rand_q(rng));
        let mut c = &f1 * &f2;
        if !study {
            c.coeffs[0].dual = c.coeffs[0].dual + Quaternion::from(rand_q(rng));
        }
        c
    }

    #[test]
    fn case_a_criterion_decides_existence() {
        let mut rng = StdRng::seed_from_u64(21);
        for k in 0..40 {
            let study = k % 2 == 0;
            let c = case_a_input(&mut rng, study);
            let info = classify_case(&c).unwrap();
            assert_eq!(info.case, NullConeCase::NoRealFactor);
            let r = factor_generic_quadratic(&c, &info.sigma);
            if study {
                let f = r.unwrap();
                assert!(f.roundtrip_residual(&c, &sample_params()) < 1e-8);
                assert!(f.factors[1].is_study(1e-8));
            } else {
                assert!(matches!(r, Err(Error::NoFactorization(_))), "{r:?}");
            }
        }
    }

    #[test]
    fn generic_recovers_constructed_right_factor() {
        let mut rng = StdRng::seed_from_u64(8);
        for _ in 0..20 {
            let f = lin(rand_q(&mut rng), rand_q(&mut rng));
            let g = lin(rand_q(&mut rng), rand_q(&mut rng));
            let c = &f * &g;
            let m = g.norm();
            let res = factor_with_norm_factor(&c, &m).unwrap();
            assert!(res.factors[1].approx_eq(&g, 1e-9));
            assert!(res.factors[0].approx_eq(&f, 1e-9));
        }
    }

    #[test]
    fn bennett_gives_two_rotation_factorizations() {
        let mut rng = StdRng::seed_from_u64(9);
        let rot = |rng: &mut StdRng| {
            let dir: [f64; 3] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
            let pt: [f64; 3] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
            let m = cross3(pt, dir);
            lin([-rng.random_range(-1.0..1.0), -dir[0], -dir[1], -dir[2]], [0.0, -m[0], -m[1], -m[2]])
        };
        for _ in 0..10 {
            let (f, g) = (rot(&mut rng), rot(&mut rng));
            let c = &f * &g;
            let nf = f.norm().primal;
            let ng = g.norm().primal;
            let a = factor_generic_quadratic(&c, &ng).unwrap();
            let b = factor_generic_quadratic(&c, &nf).unwrap();
            assert_eq!(factor_by_norm_factors(&c).unwrap().len(), 2);
            assert!(a.factors[1].approx_eq(&g, 1e-9));
            assert!(!b.factors[1].approx_eq(&g, 1e-6));
            for r in [&a, &b] {
                assert!(r.factors.iter().all(|x| x.is_study(1e-9)));
                assert!(r.product().approx_eq(&c, 1e-9));
            }
        }
    }

    fn case_c_input(rng: &mut StdRng) -> MotionPoly {
        let (t0, t1) = (rng.random_range(-2.0..-0.1), rng.random_range(0.1..2.0));
        let p = &RealPoly::linear_root(t0) * &RealPoly::linear_root(t1);
        let mut c = MotionPoly::from_real_poly(&p);
        c.coeffs[0].dual = Quaternion::from(rand_q(rng));
        c.coeffs[1].dual = Quaternion::from(rand_q(rng));
        c
    }

    #[test]
    fn hyperbolic_pipeline() {
        let mut rng = StdRng::seed_from_u64(4);
        for _ in 0..20 {
            let c = case_c_input(&mut rng);
            assert_eq!(case_of(&c), NullConeCase::TwoRealLinear);
            let (t0, t1) = hyperbolic_roots(&c).unwrap();
            let (s1, s2) = (RealPoly::linear_root(t0), RealPoly::linear_root(t1));
            let red = reduce_to_study(&c, &s1, &s2).unwrap();
            let n = red.norm();
            let target = &(&s1 * &s1) * &(&s2 * &s2);
            assert!((&n.primal - &target).max_abs() < 1e-8 && n.dual.max_abs() < 1e-8);
            let f = factor_hyperbolic_translation(&c).unwrap();
            assert!(f.roundtrip_residual(&c, &sample_params()) < 1e-8);
            // translations: primal vector parts vanish
            for g in &f.factors {
                assert!(g.coeffs.iter().all(|q| norm3(q.primal.vector()) < 1e-9));
            }
            assert!(f.kinematically_unique);
        }
    }

    #[test]
    fn reduce_keeps_study_input_and_zero_scalar_dual() {
        let mut rng = StdRng::seed_from_u64(6);
        let c = case_c_input(&mut rng);
        let (t0, t1) = hyperbolic_roots(&c).unwrap();
        let (s1, s2) = (RealPoly::linear_root(t0), RealPoly::linear_root(t1));
        let red = reduce_to_study(&c, &s1, &s2).unwrap();
        // already reduced: identity
        let again = reduce_to_study(&red, &s1, &s2).unwrap();
        assert!(again.approx_eq(&red, 1e-14));
        assert!(matches!(reduce_to_study(&example_c(), &s1, &s2), Err(Error::NotCaseC)));
    }

    #[test]
    fn classification_errors() {
        // (t − 1)² σ-type quadruple root: p = t²
        let c = MotionPoly::new(vec![
            dq([0.0; 4], [0.0, 1.0, 0.0, 0.0]),
            dq([0.0; 4], [0.0, 0.0, 1.0, 0.0]),
            DualQuaternion::ONE,
        ]);
        assert_eq!(classify_case(&c), Err(Error::QuadrupleRoot));
        let mut rng = StdRng::seed_from_u64(1);
        let generic = MotionPoly::new((0..3).map(|_| dq(rand_q(&mut rng), rand_q(&mut rng))).collect());
        assert!(matches!(classify_case(&generic), Err(Error::NotNullCone(_))));
        assert_eq!(case_of(&generic), NullConeCase::NotNullCone);
        assert!(matches!(factor_bounded_translation(&generic, 0.0, 0.0, Branch::Upper), Err(Error::NotCaseB)));
        assert!(matches!(factor_hyperbolic_translation(&example_c()), Err(Error::NotCaseC)));
    }

    #[test]
    fn serde_roundtrip() {
        let f = factor_bounded_translation(&example_c(), 0.0, 0.0, Branch::Upper).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        let back: FactorizationResult = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
    }
}
