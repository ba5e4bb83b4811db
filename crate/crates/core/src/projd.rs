//! Projective space P³(𝔻): points up to invertible dual scaling, straight lines,
//! and contact order of curves.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::dualnum::DualNumber;
use crate::dualquat::DualQuaternion;
use crate::error::{Error, Result};
use crate::series::{dq_series_scale, dual_series_recip, factorial};
use crate::tol::tolerance;

/// Point of P³(𝔻) in canonical form: coordinate `pivot` of `rep` equals `1 + 0ε`
/// and is the first invertible coordinate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjPointD {
    pub rep: DualQuaternion,
    pub pivot: usize,
}

/// First coordinate whose primal part exceeds `tol` relative to the largest primal entry.
fn pivot_index(q: DualQuaternion) -> Option<usize> {
    let tol = tolerance();
    let scale = q.primal.max_abs().max(q.dual.max_abs()).max(1.0);
    q.primal
        .to_array()
        .iter()
        .position(|v| v.abs() > tol * scale)
}

/// Multiplies `q` by the inverse of its first invertible coordinate.
pub fn canonicalize(q: DualQuaternion) -> Result<ProjPointD> {
    let pivot = pivot_index(q).ok_or(Error::AllCoordinatesNull)?;
    let inv = q.coord(pivot).inv()?;
    let mut rep = q.scale_dual(inv);
    // make the pivot exact
    let mut c = rep.coords();
    c[pivot] = DualNumber::ONE;
    rep = DualQuaternion::from_coords(c);
    Ok(ProjPointD { rep, pivot })
}

impl ProjPointD {
    pub fn new(q: DualQuaternion) -> Result<Self> {
        canonicalize(q)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.pivot == other.pivot && self.rep.approx_eq(other.rep, tol)
    }
}

/// Equality in P³(𝔻) within the global tolerance (scaled by the coordinate size).
pub fn proj_eq(x: &ProjPointD, y: &ProjPointD) -> bool {
    let scale = x.rep.max_abs().max(y.rep.max_abs()).max(1.0);
    x.approx_eq(y, tolerance() * scale)
}

/// Largest coordinate difference of canonical representatives; infinite when
/// the pivots differ or a point is entirely null.
pub fn projective_distance(a: DualQuaternion, b: DualQuaternion) -> f64 {
    match (canonicalize(a), canonicalize(b)) {
        (Ok(x), Ok(y)) if x.pivot == y.pivot => (x.rep - y.rep).max_abs(),
        _ => f64::INFINITY,
    }
}

/// `[a] = [b]` as points of P³(𝔻), with the given scaled tolerance.
pub fn same_point(a: DualQuaternion, b: DualQuaternion, tol: f64) -> bool {
    match (canonicalize(a), canonicalize(b)) {
        (Ok(x), Ok(y)) => {
            let scale = x.rep.max_abs().max(y.rep.max_abs()).max(1.0);
            x.approx_eq(&y, tol * scale)
        }
        _ => false,
    }
}

/// Straight line `{[αa + βb] : (α, β) ∈ ℝ² \ {0}}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StraightLineD {
    pub a: DualQuaternion,
    pub b: DualQuaternion,
}

fn svd_singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    s
}

/// Numerical rank with singular values below `rel_tol·σ_max` treated as zero.
pub fn numerical_rank(m: &DMatrix<f64>, rel_tol: f64) -> usize {
    let s = svd_singular_values(m);
    let max = s.first().copied().unwrap_or(0.0);
    if max == 0.0 {
        return 0;
    }
    s.iter().filter(|&&v| v > rel_tol * max).count()
}

fn columns(vs: &[DualQuaternion]) -> DMatrix<f64> {
    DMatrix::from_fn(8, vs.len(), |i, j| vs[j].to_vec8()[i])
}

impl StraightLineD {
    /// Validates that `a` and `b` are not dual multiples of one another.
    pub fn new(a: DualQuaternion, b: DualQuaternion) -> Result<Self> {
        let line = Self { a, b };
        if numerical_rank(&columns(&[a, b]), 1e-9) < 2 || line.is_dual_multiple() {
            return Err(Error::CoincidentPoints);
        }
        Ok(line)
    }

    fn is_dual_multiple(&self) -> bool {
        // b = μa or a = μb with μ ∈ 𝔻ˣ ⇔ the spans of {a, εa} and {b, εb} share b (or a).
        let fits = |x: DualQuaternion, y: DualQuaternion| {
            if !x.primal.to_array().iter().any(|v| v.abs() > tolerance()) {
                return false;
            }
            residual(&[x, x.times_eps()], y) <= 1e-9 * y.max_abs().max(1.0)
        };
        fits(self.a, self.b) || fits(self.b, self.a)
    }

    pub fn point(&self, alpha: f64, beta: f64) -> DualQuaternion {
        self.a.scale(alpha) + self.b.scale(beta)
    }

    /// Whether `[x]` lies on the line: `αa + βb = μx` for real `α, β` and `μ ∈ 𝔻ˣ`.
    pub fn contains(&self, x: DualQuaternion) -> bool {
        // with μ = 1 + εμ″ (μ′ can be absorbed into α, β)
        let r = residual(&[self.a, self.b, x.times_eps().scale(-1.0)], x);
        r <= 1e-9 * x.max_abs().max(1.0)
    }
}

/// Least-squares residual of `target` against the real span of `basis`.
fn residual(basis: &[DualQuaternion], target: DualQuaternion) -> f64 {
    let m = columns(basis);
    let rhs = DVector::from_row_slice(&target.to_vec8());
    let svd = m.clone().svd(true, true);
    match svd.solve(&rhs, 1e-12) {
        Ok(sol) => (m * sol - &rhs).norm(),
        Err(_) => rhs.norm(),
    }
}

fn has_invertible_entry(q: DualQuaternion) -> bool {
    q.primal.to_array().iter().any(|v| v.abs() > tolerance())
}

/// Straight line through `[c]` and `[d]` spanned by `γc` and `δd`.
pub fn connecting_lines(
    c: DualQuaternion,
    d: DualQuaternion,
    gamma: DualNumber,
    delta: DualNumber,
) -> Result<StraightLineD> {
    if !gamma.is_invertible() || !delta.is_invertible() {
        return Err(Error::NonInvertibleFactor);
    }
    if !has_invertible_entry(c) && !has_invertible_entry(d) {
        return Err(Error::AllCoordinatesNull);
    }
    if same_point(c, d, 1e-9) {
        return Err(Error::CoincidentPoints);
    }
    StraightLineD::new(c.scale_dual(gamma), d.scale_dual(delta))
}

/// What is identified when counting connecting lines.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LineQuotient {
    /// Span pairs `(γc, δd)` modulo a common invertible dual factor.
    CommonDualFactor,
    /// Additionally modulo independent real rescaling of each span point, i.e.
    /// lines compared as point sets.
    PointSet,
}

fn normalize_pair(
    a: DualQuaternion,
    b: DualQuaternion,
    quotient: LineQuotient,
) -> Option<[f64; 16]> {
    // Divide both by the pivot coordinate of whichever point has one.
    let (first, second, swap) = if has_invertible_entry(a) { (a, b, false) } else { (b, a, true) };
    let piv = pivot_index(first)?;
    let inv = first.coord(piv).inv().ok()?;
    let f = first.scale_dual(inv);
    let mut s = second.scale_dual(inv);
    if quotient == LineQuotient::PointSet {
        // remove the real scale of the second point
        let scale = s
            .primal
            .to_array()
            .into_iter()
            .chain(s.dual.to_array())
            .find(|v| v.abs() > 1e-6)?;
        s = s.scale(1.0 / scale);
    }
    let (x, y) = if swap { (s, f) } else { (f, s) };
    let mut out = [0.0; 16];
    out[..8].copy_from_slice(&x.to_vec8());
    out[8..].copy_from_slice(&y.to_vec8());
    Some(out)
}

/// Number of essential real parameters of the family of connecting lines through
/// `[c]` and `[d]`: rank of the Jacobian of `(γ′, γ″, δ′, δ″) ↦ line`
/// evaluated at `(γ, δ)`.
pub fn line_family_rank(
    c: DualQuaternion,
    d: DualQuaternion,
    gamma: DualNumber,
    delta: DualNumber,
    quotient: LineQuotient,
) -> Result<usize> {
    connecting_lines(c, d, gamma, delta)?;
    let params = [gamma.primal, gamma.dual, delta.primal, delta.dual];
    let map = |p: &[f64; 4]| {
        let g = DualNumber::new(p[0], p[1]);
        let e = DualNumber::new(p[2], p[3]);
        normalize_pair(c.scale_dual(g), d.scale_dual(e), quotient)
    };
    let h = 1e-6;
    let mut jac = DMatrix::<f64>::zeros(16, 4);
    for j in 0..4 {
        let mut plus = params;
        let mut minus = params;
        plus[j] += h;
        minus[j] -= h;
        let (fp, fm) = match (map(&plus), map(&minus)) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(Error::DegenerateConfiguration("line normalization failed".into())),
        };
        for i in 0..16 {
            jac[(i, j)] = (fp[i] - fm[i]) / (2.0 * h);
        }
    }
    // the map is O(1) in its arguments, so an all-noise Jacobian means rank 0
    if jac.amax() < 1e-7 {
        return Ok(0);
    }
    Ok(numerical_rank(&jac, 1e-6))
}

/// A parametrized curve in 𝔻ℍ viewed as a curve in P³(𝔻).
///
/// Implementors with closed-form derivatives override [`taylor`](Self::taylor);
/// otherwise derivatives come from finite differences.
pub trait CurveEvaluator {
    fn eval(&self, t: f64) -> DualQuaternion;

    /// Taylor coefficients `f⁽ᵏ⁾(t)/k!`, `k = 0..=order`, when known exactly.
    fn taylor(&self, _t: f64, _order: usize) -> Option<Vec<DualQuaternion>> {
        None
    }
}

impl<F: Fn(f64) -> DualQuaternion> CurveEvaluator for F {
    fn eval(&self, t: f64) -> DualQuaternion {
        self(t)
    }
}

/// Finite-difference step: `1e-5` for first derivatives, wider stencils above.
fn fd_step(order: usize) -> f64 {
    if order <= 1 {
        1e-5
    } else {
        0.05
    }
}

/// Taylor coefficients from a symmetric stencil of `2M + 1` samples, `M = order + 2`.
pub fn finite_difference_taylor<C: CurveEvaluator + ?Sized>(
    curve: &C,
    t: f64,
    order: usize,
) -> Vec<DualQuaternion> {
    let m = order + 2;
    let n = 2 * m + 1;
    let h = fd_step(order);
    let vander = DMatrix::from_fn(n, n, |i, k| (i as f64 - m as f64).powi(k as i32));
    let lu = vander.lu();
    let samples: Vec<[f64; 8]> = (0..n)
        .map(|i| curve.eval(t + (i as f64 - m as f64) * h).to_vec8())
        .collect();
    let mut out = vec![[0.0; 8]; order + 1];
    for comp in 0..8 {
        let rhs = DVector::from_fn(n, |i, _| samples[i][comp]);
        let sol = lu.solve(&rhs).expect("Vandermonde system is regular");
        for (k, o) in out.iter_mut().enumerate() {
            o[comp] = sol[k] / h.powi(k as i32);
        }
    }
    out.iter().map(|v| DualQuaternion::from_vec8(v)).collect()
}

/// Taylor coefficients and whether they are exact.
pub fn jet<C: CurveEvaluator + ?Sized>(curve: &C, t: f64, order: usize) -> (Vec<DualQuaternion>, bool) {
    match curve.taylor(t, order) {
        Some(v) => (v, true),
        None => (finite_difference_taylor(curve, t, order), false),
    }
}

/// `k`-th derivative of a curve.
pub fn derivative<C: CurveEvaluator + ?Sized>(curve: &C, order: usize, t: f64) -> DualQuaternion {
    let (j, _) = jet(curve, t, order);
    j[order].scale(factorial(order))
}

/// Tolerance used for analytic derivatives.
pub const CONTACT_TOL_ANALYTIC: f64 = 1e-9;
/// Tolerance used when a derivative comes from finite differences.
pub const CONTACT_TOL_NUMERIC: f64 = 1e-6;

/// Chart-normalized Taylor coefficients: `f · f_pivot⁻¹` where `f_pivot` is the
/// dual-number coordinate `pivot` of `f`.
pub fn chart_normalized(taylor: &[DualQuaternion], pivot: usize) -> Option<Vec<DualQuaternion>> {
    let piv: Vec<DualNumber> = taylor.iter().map(|q| q.coord(pivot)).collect();
    let inv = dual_series_recip(&piv)?;
    Some(dq_series_scale(&inv, taylor))
}

/// Order of contact of `f` at `tf` and `g` at `tg` with the given parametrizations.
pub fn contact_order<F, G>(f: &F, g: &G, tf: f64, tg: f64, max_m: usize) -> Result<usize>
where
    F: CurveEvaluator + ?Sized,
    G: CurveEvaluator + ?Sized,
{
    contact_order_with_tol(f, g, tf, tg, max_m, None)
}

/// As [`contact_order`] with an explicit comparison tolerance. By default
/// `1e-9` is used for analytic jets and `1e-6` when finite differences are involved.
pub fn contact_order_with_tol<F, G>(
    f: &F,
    g: &G,
    tf: f64,
    tg: f64,
    max_m: usize,
    tol: Option<f64>,
) -> Result<usize>
where
    F: CurveEvaluator + ?Sized,
    G: CurveEvaluator + ?Sized,
{
    let (fj, fa) = jet(f, tf, max_m);
    let (gj, ga) = jet(g, tg, max_m);
    let tol = tol.unwrap_or(if fa && ga { CONTACT_TOL_ANALYTIC } else { CONTACT_TOL_NUMERIC });
    let pf = canonicalize(fj[0])?;
    let pg = canonicalize(gj[0])?;
    let scale = pf.rep.max_abs().max(pg.rep.max_abs()).max(1.0);
    if !pf.approx_eq(&pg, tol * scale) {
        return Err(Error::PointsDiffer);
    }
    let fhat = chart_normalized(&fj, pf.pivot).ok_or(Error::AllCoordinatesNull)?;
    let ghat = chart_normalized(&gj, pf.pivot).ok_or(Error::AllCoordinatesNull)?;
    for k in 1..=max_m {
        let fk = fhat[k].scale(factorial(k));
        let gk = ghat[k].scale(factorial(k));
        let scale = fk.max_abs().max(gk.max_abs()).max(1.0);
        if (fk - gk).max_abs() > tol * scale {
            return Ok(k - 1);
        }
    }
    Ok(max_m)
}
