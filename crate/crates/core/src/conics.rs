//! Conics in P³(𝔻) through three points: the interpolating family, Bennett
//! conics on the Study quadric, and conics tangent to the null cone.

use nalgebra::{DMatrix, Matrix2, Vector2};
use serde::{Deserialize, Serialize};

use crate::dualnum::DualNumber;
use crate::dualquat::{DualQuaternion, Quaternion};
use crate::error::{Error, Result};
use crate::motionpoly::MotionPoly;
use crate::poly::{principal_subresultant, RealPoly};
use crate::projd::{numerical_rank, CurveEvaluator};
use crate::tol::tolerance;

/// The conic `γ0c0 + (c1 − γ0c0 − γ2c2)t + γ2c2t²` through `[c0]`, `[c1]`, `[c2]`
/// at `t = 0, 1, ∞`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConicFamily {
    pub c0: DualQuaternion,
    pub c1: DualQuaternion,
    pub c2: DualQuaternion,
    pub gamma0: DualNumber,
    pub gamma2: DualNumber,
}

impl ConicFamily {
    pub fn new(c0: DualQuaternion, c1: DualQuaternion, c2: DualQuaternion, gamma0: DualNumber, gamma2: DualNumber) -> Self {
        Self { c0, c1, c2, gamma0, gamma2 }
    }
}

/// The quadratic motion polynomial of the family. Its three coefficients must be
/// linearly independent over ℝ.
pub fn interp_conic(fam: &ConicFamily) -> Result<MotionPoly> {
    if !fam.gamma0.is_invertible() || !fam.gamma2.is_invertible() {
        return Err(Error::NonInvertibleFactor);
    }
    let a = fam.c0.scale_dual(fam.gamma0);
    let c = fam.c2.scale_dual(fam.gamma2);
    let b = fam.c1 - a - c;
    let m = DMatrix::from_fn(8, 3, |i, j| [a, b, c][j].to_vec8()[i]);
    if numerical_rank(&m, 1e-9) < 3 {
        return Err(Error::DegenerateData);
    }
    Ok(MotionPoly::new(vec![a, b, c]))
}

/// `a = 1 + εa″` such that `a·p` has real norm.
pub fn real_norm_rescale(p: DualQuaternion) -> Result<DualNumber> {
    let pp = p.primal.norm_sq();
    if pp <= tolerance() {
        return Err(Error::NotInvertible(pp));
    }
    Ok(DualNumber::new(1.0, -p.primal.dot(p.dual) / pp))
}

fn rescaled(p: DualQuaternion) -> Result<DualQuaternion> {
    Ok(p.scale_dual(real_norm_rescale(p)?))
}

/// Parameters of the unique conic on the Study quadric through the three
/// points: Study representatives and real multipliers `λ0`, `λ2`.
pub fn bennett_family(c0: DualQuaternion, c1: DualQuaternion, c2: DualQuaternion) -> Result<ConicFamily> {
    let degenerate = |why: &str| Error::DegenerateConfiguration(why.into());
    let (a, b, c) = (rescaled(c0)?, rescaled(c1)?, rescaled(c2)?);
    let scale = a.max_abs() * c.max_abs();
    let s01 = a.study_form(b);
    let s02 = a.study_form(c);
    let s12 = b.study_form(c);
    // dual norm of λ0(1−t)a + tb + λ2(t²−t)c is
    // 2t(1−t)(λ0 S01 − λ0λ2(1−t) S02 − λ2 t S12)
    if s02.abs() <= 1e-9 * scale.max(1.0) {
        return Err(degenerate("first and last point are conjugate on the Study quadric"));
    }
    let l0 = s12 / s02;
    let l2 = s01 / s02;
    if l0.abs() <= 1e-9 || l2.abs() <= 1e-9 {
        return Err(degenerate("vanishing multiplier"));
    }
    Ok(ConicFamily::new(a, b, c, DualNumber::real(l0), DualNumber::real(l2)))
}

/// Conic on the Study quadric (Bennett motion) through the three points.
pub fn bennett_fit(c0: DualQuaternion, c1: DualQuaternion, c2: DualQuaternion) -> Result<MotionPoly> {
    interp_conic(&bennett_family(c0, c1, c2)?)
}

/// Primal norm quartic of `g0(1−t)A + tB + g2(t²−t)C` for real quaternions.
fn primal_quartic(g: [f64; 2], a: Quaternion, b: Quaternion, c: Quaternion) -> [f64; 5] {
    let p0 = a.scale(g[0]);
    let p2 = c.scale(g[1]);
    let p1 = b - p0 - p2;
    [
        p0.dot(p0),
        2.0 * p0.dot(p1),
        p1.dot(p1) + 2.0 * p0.dot(p2),
        2.0 * p1.dot(p2),
        p2.dot(p2),
    ]
}

/// Defect of `q/q4` from the square of the monic quadratic matching its top
/// three coefficients.
fn square_defect(q: [f64; 5]) -> Option<[f64; 2]> {
    if q[4] <= 1e-14 {
        return None;
    }
    let n: Vec<f64> = q.iter().map(|v| v / q[4]).collect();
    let a = n[3] / 2.0;
    let b = (n[2] - a * a) / 2.0;
    let r = [n[1] - 2.0 * a * b, n[0] - b * b];
    r.iter().all(|v| v.is_finite()).then_some(r)
}

/// Scaled principal subresultants `psc_1`, `psc_0` of `q` and `q′` with `q` monic.
pub fn tangency_subresultants(q: &RealPoly) -> [f64; 2] {
    let m = q.monic();
    let d = m.derivative().scale(0.25);
    [principal_subresultant(&m, &d, 1), principal_subresultant(&m, &d, 0)]
}

/// Conic tangent to the null cone at two points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NullConeConic {
    pub family: ConicFamily,
    pub poly: MotionPoly,
    /// Monic real quadratic with primal norm `= lead·σ²`.
    pub sigma: RealPoly,
    /// Relative residual of the square reconstruction.
    pub residual: f64,
}

impl NullConeConic {
    /// Roots of `σ`, the complex conjugate tangency parameters.
    pub fn tangency_parameters(&self) -> Vec<nalgebra::Complex<f64>> {
        self.sigma.roots()
    }
}

const GRID_N: usize = 24;
const MAX_ITER: usize = 100;
const DEDUP: f64 = 1e-6;

/// Damped Newton on the square defect in `(γ0, γ2)`.
fn newton(start: [f64; 2], a: Quaternion, b: Quaternion, c: Quaternion) -> Option<[f64; 2]> {
    let f = |g: [f64; 2]| square_defect(primal_quartic(g, a, b, c));
    let mut th = start;
    let mut r = f(th)?;
    for _ in 0..MAX_ITER {
        let rn = r[0].hypot(r[1]);
        if rn < 1e-14 {
            break;
        }
        let mut jac = Matrix2::zeros();
        for k in 0..2 {
            let h = 1e-7;
            let mut tp = th;
            let mut tm = th;
            tp[k] += h;
            tm[k] -= h;
            let (rp, rm) = (f(tp)?, f(tm)?);
            jac[(0, k)] = (rp[0] - rm[0]) / (2.0 * h);
            jac[(1, k)] = (rp[1] - rm[1]) / (2.0 * h);
        }
        let step = jac.lu().solve(&Vector2::new(-r[0], -r[1]))?;
        let mut alpha = 1.0;
        let mut accepted = false;
        for _ in 0..30 {
            let cand = [th[0] + alpha * step[0], th[1] + alpha * step[1]];
            if let Some(rc) = f(cand) {
                if rc[0].hypot(rc[1]) < rn {
                    th = cand;
                    r = rc;
                    accepted = true;
                    break;
                }
            }
            alpha *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    (r[0].hypot(r[1]) < 1e-10).then_some(th)
}

/// All conics through the three points whose primal norm is a perfect square,
/// with dual parts of `γ0`, `γ2` set to zero.
pub fn nullcone_conic_fit(c0: DualQuaternion, c1: DualQuaternion, c2: DualQuaternion) -> Result<Vec<NullConeConic>> {
    nullcone_conic_fit_with(c0, c1, c2, 0.0, 0.0)
}

/// As [`nullcone_conic_fit`] with prescribed dual parts of `γ0` and `γ2`; these
/// do not enter the tangency condition.
pub fn nullcone_conic_fit_with(
    c0: DualQuaternion,
    c1: DualQuaternion,
    c2: DualQuaternion,
    dual0: f64,
    dual2: f64,
) -> Result<Vec<NullConeConic>> {
    let (na, nb, nc) = (c0.primal.norm(), c1.primal.norm(), c2.primal.norm());
    if na <= tolerance() || nb <= tolerance() || nc <= tolerance() {
        return Err(Error::DegenerateData);
    }
    let prim = DMatrix::from_fn(4, 3, |i, j| [c0, c1, c2][j].primal.to_array()[i]);
    if numerical_rank(&prim, 1e-9) < 3 {
        return Err(Error::DegenerateData);
    }
    let (a, b, c) = (c0.primal.scale(1.0 / na), c1.primal.scale(1.0 / nb), c2.primal.scale(1.0 / nc));

    let mut found: Vec<[f64; 2]> = Vec::new();
    for i in 0..GRID_N {
        for j in 0..GRID_N {
            let th = |k: usize| -1.5 + 3.0 * (k as f64 + 0.5) / GRID_N as f64;
            let start = [th(i).tan(), th(j).tan()];
            let Some(g) = newton(start, a, b, c) else { continue };
            if g[0].abs() < 1e-8 || g[1].abs() < 1e-8 {
                continue;
            }
            if found.iter().all(|h| (h[0] - g[0]).hypot(h[1] - g[1]) > DEDUP) {
                found.push(g);
            }
        }
    }
    found.sort_by(|x, y| x.partial_cmp(y).unwrap());

    let mut out = Vec::new();
    for g in found {
        // back to the scale of the inputs
        let g0 = g[0] * nb / na;
        let g2 = g[1] * nb / nc;
        let family = ConicFamily::new(c0, c1, c2, DualNumber::new(g0, dual0), DualNumber::new(g2, dual2));
        let poly = match interp_conic(&family) {
            Ok(p) => p,
            Err(_) => continue,
        };
        let q = poly.norm().primal;
        let Some((sigma, residual)) = q.square_root() else { continue };
        let [s1, s0] = tangency_subresultants(&q);
        if residual > 1e-8 || s1.abs() > 1e-8 || s0.abs() > 1e-8 {
            continue;
        }
        // A real root of σ would make the primal part vanish at a real parameter;
        // such solutions are limits of reducible conics (γ2 → ∞ or γ0 → 0).
        if sigma.coeff(1).powi(2) - 4.0 * sigma.coeff(0) >= -1e-9 {
            continue;
        }
        out.push(NullConeConic { family, poly, sigma, residual });
    }
    if out.is_empty() {
        return Err(Error::NoSolutionFound);
    }
    Ok(out)
}

/// Null-cone conic osculating a curve, as a polynomial in `s = t − t0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OsculatingConic {
    pub t0: f64,
    pub poly: MotionPoly,
    /// Branch score (smallest singular value of the normalized primal
    /// coefficients) of the chosen and the runner-up branch at the smaller step.
    pub best: f64,
    pub second: f64,
}

impl OsculatingConic {
    /// Evaluates at the curve parameter `t`.
    pub fn eval_at(&self, t: f64) -> DualQuaternion {
        self.poly.eval(t - self.t0)
    }
}

/// `g(s) = (h − s)² c(u)/h²` with `u = (h + s)/(h − s)`.
fn mobius_pullback(c: &MotionPoly, h: f64) -> [DualQuaternion; 3] {
    let (p0, p1, p2) = (c.coeff(0), c.coeff(1), c.coeff(2));
    [p0 + p1 + p2, (p2 - p0).scale(2.0 / h), (p0 - p1 + p2).scale(1.0 / (h * h))]
}

fn branch_score(g: &[DualQuaternion; 3]) -> f64 {
    let m = DMatrix::from_fn(4, 3, |i, j| {
        let p = g[j].primal;
        p.to_array()[i] / p.norm().max(1e-300)
    });
    m.svd(false, false).singular_values.min()
}

fn best_branch(curve: &(impl CurveEvaluator + ?Sized), t0: f64, h: f64) -> Result<([DualQuaternion; 3], f64, f64)> {
    let sols = nullcone_conic_fit(curve.eval(t0 - h), curve.eval(t0), curve.eval(t0 + h))?;
    let mut scored: Vec<([DualQuaternion; 3], f64)> = sols
        .iter()
        .map(|s| {
            let g = mobius_pullback(&s.poly, h);
            let score = branch_score(&g);
            (g, score)
        })
        .collect();
    scored.sort_by(|x, y| y.1.partial_cmp(&x.1).unwrap());
    let second = scored.get(1).map_or(0.0, |s| s.1);
    Ok((scored[0].0, scored[0].1, second))
}

/// Limit of the null-cone conics through `f(t0 − h)`, `f(t0)`, `f(t0 + h)`:
/// the branch that stays away from the tangent line, Richardson-extrapolated
/// over `h` and `h/2`.
pub fn osculating_nullcone_conic(curve: &(impl CurveEvaluator + ?Sized), t0: f64, h: f64) -> Result<OsculatingConic> {
    if !(h > 0.0) {
        return Err(Error::InvalidParams("step must be positive".into()));
    }
    let (g1, _, _) = best_branch(curve, t0, h)?;
    let (g2, best, second) = best_branch(curve, t0, h / 2.0)?;
    if best < 2.0 * second {
        return Err(Error::BranchAmbiguity { best, second });
    }
    let coeffs = (0..3).map(|k| (g2[k].scale(4.0) - g1[k]).scale(1.0 / 3.0)).collect();
    Ok(OsculatingConic { t0, poly: MotionPoly::new(coeffs), best, second })
}

/// Defect of the perfect-square condition of a quadratic motion polynomial.
pub fn square_defect_of(poly: &MotionPoly) -> f64 {
    poly.norm().primal.square_root().map_or(f64::INFINITY, |(_, r)| r)
}
