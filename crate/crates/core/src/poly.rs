//! Univariate polynomials with real and dual-number coefficients.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{Complex, DMatrix};
use serde::{Deserialize, Serialize};

use crate::dualnum::DualNumber;

/// Real polynomial, coefficients in ascending powers of `t`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RealPoly {
    coeffs: Vec<f64>,
}

impl RealPoly {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c])
    }

    /// `t − r`
    pub fn linear_root(r: f64) -> Self {
        Self::new(vec![-r, 1.0])
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> f64 {
        self.coeffs.get(i).copied().unwrap_or(0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> f64 {
        self.coeffs.last().copied().unwrap_or(0.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()))
    }

    /// Drops leading coefficients below `tol * max_abs`.
    pub fn trimmed(&self, tol: f64) -> Self {
        let scale = self.max_abs();
        let mut c = self.coeffs.clone();
        while let Some(&l) = c.last() {
            if l.abs() <= tol * scale {
                c.pop();
            } else {
                break;
            }
        }
        Self::new(c)
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c)
    }

    pub fn eval_complex(&self, z: Complex<f64>) -> Complex<f64> {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| c * i as f64)
                .collect(),
        )
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn monic(&self) -> Self {
        self.scale(1.0 / self.leading())
    }

    /// Euclidean division `self = q·divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let lead = divisor.leading();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![0.0; rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let f = rem[i + dd] / lead;
            quot[i] = f;
            for (j, &dc) in divisor.coeffs.iter().enumerate() {
                rem[i + j] -= f * dc;
            }
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    /// `p(αt + β)`
    pub fn compose_affine(&self, alpha: f64, beta: f64) -> Self {
        let lin = Self::new(vec![beta, alpha]);
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, &c| &(&acc * &lin) + &Self::constant(c))
    }

    /// All complex roots. Closed form up to degree two, companion-matrix
    /// eigenvalues above, each polished by a few Newton steps.
    pub fn roots(&self) -> Vec<Complex<f64>> {
        match self.degree() {
            None | Some(0) => Vec::new(),
            Some(1) => vec![Complex::new(-self.coeffs[0] / self.coeffs[1], 0.0)],
            Some(2) => {
                let (a, b, c) = (self.coeffs[2], self.coeffs[1], self.coeffs[0]);
                quadratic_roots(a, b, c).to_vec()
            }
            Some(n) => {
                let lead = self.leading();
                let mut m = DMatrix::<f64>::zeros(n, n);
                for i in 1..n {
                    m[(i, i - 1)] = 1.0;
                }
                for i in 0..n {
                    m[(i, n - 1)] = -self.coeffs[i] / lead;
                }
                let d = self.derivative();
                m.complex_eigenvalues()
                    .iter()
                    .map(|&z0| {
                        let mut z = z0;
                        for _ in 0..3 {
                            let dz = d.eval_complex(z);
                            if dz.norm() == 0.0 {
                                break;
                            }
                            let step = self.eval_complex(z) / dz;
                            if !step.re.is_finite() || !step.im.is_finite() {
                                break;
                            }
                            z -= step;
                        }
                        z
                    })
                    .collect()
            }
        }
    }

    /// Writes a monic quartic-like polynomial as `lead·σ²` with monic `σ`, if the
    /// degree is even. Returns `σ` and the coefficient residual relative to `lead`.
    pub fn square_root(&self) -> Option<(Self, f64)> {
        let deg = self.degree()?;
        if deg % 2 != 0 {
            return None;
        }
        let m = deg / 2;
        let n = self.monic();
        // Match the top m coefficients of σ², σ monic of degree m.
        let mut s = vec![0.0; m + 1];
        s[m] = 1.0;
        for k in (0..m).rev() {
            // coefficient of t^{m+k} in σ² = 2 s_k + Σ_{i+j=m+k, k<i,j<=m} s_i s_j
            let mut acc = 0.0;
            for i in (k + 1)..=m {
                let j = m + k - i;
                if j > k && j <= m {
                    acc += s[i] * s[j];
                }
            }
            s[k] = (n.coeff(m + k) - acc) / 2.0;
        }
        let sigma = Self::new(s);
        let diff = &n - &(&sigma * &sigma);
        let scale = n.max_abs().max(1.0);
        Some((sigma, diff.max_abs() / scale))
    }
}

/// Principal subresultant coefficient `psc_j(p, q)`: determinant of the leading
/// `(m + n − 2j)` columns of the Sylvester-type matrix built from
/// `t^{n−j−1}p, …, p, t^{m−j−1}q, …, q`. `gcd(p, q)` has degree `> j` iff
/// `psc_0 = … = psc_j = 0`.
pub fn principal_subresultant(p: &RealPoly, q: &RealPoly, j: usize) -> f64 {
    let (m, n) = match (p.degree(), q.degree()) {
        (Some(m), Some(n)) if j < m.min(n) => (m, n),
        _ => return 0.0,
    };
    let size = m + n - 2 * j;
    let mut mat = DMatrix::<f64>::zeros(size, size);
    let mut row = 0;
    for (poly, deg, count) in [(p, m, n - j), (q, n, m - j)] {
        for shift in 0..count {
            // descending coefficients starting at column `shift`
            for k in 0..=deg {
                let col = shift + k;
                if col < size {
                    mat[(row, col)] = poly.coeff(deg - k);
                }
            }
            row += 1;
        }
    }
    mat.determinant()
}

/// Roots of `a t² + b t + c` without cancellation.
pub fn quadratic_roots(a: f64, b: f64, c: f64) -> [Complex<f64>; 2] {
    let disc = b * b - 4.0 * a * c;
    if disc >= 0.0 {
        let s = disc.sqrt();
        let sgn = if b >= 0.0 { 1.0 } else { -1.0 };
        let q = -0.5 * (b + sgn * s);
        if q == 0.0 {
            return [Complex::new(0.0, 0.0), Complex::new(0.0, 0.0)];
        }
        let (r1, r2) = (q / a, c / q);
        let (lo, hi) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
        [Complex::new(lo, 0.0), Complex::new(hi, 0.0)]
    } else {
        let re = -b / (2.0 * a);
        let im = (-disc).sqrt() / (2.0 * a.abs());
        [Complex::new(re, -im), Complex::new(re, im)]
    }
}

impl Add for &RealPoly {
    type Output = RealPoly;
    fn add(self, o: &RealPoly) -> RealPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        RealPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl Sub for &RealPoly {
    type Output = RealPoly;
    fn sub(self, o: &RealPoly) -> RealPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        RealPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl Neg for &RealPoly {
    type Output = RealPoly;
    fn neg(self) -> RealPoly {
        self.scale(-1.0)
    }
}

impl Mul for &RealPoly {
    type Output = RealPoly;
    fn mul(self, o: &RealPoly) -> RealPoly {
        if self.is_zero() || o.is_zero() {
            return RealPoly::zero();
        }
        let mut c = vec![0.0; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        RealPoly::new(c)
    }
}

/// Polynomial with dual-number coefficients, stored as primal and dual real parts.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DualPoly {
    pub primal: RealPoly,
    pub dual: RealPoly,
}

impl DualPoly {
    pub fn new(primal: RealPoly, dual: RealPoly) -> Self {
        Self { primal, dual }
    }

    pub fn real(primal: RealPoly) -> Self {
        Self::new(primal, RealPoly::zero())
    }

    pub fn coeff(&self, i: usize) -> DualNumber {
        DualNumber::new(self.primal.coeff(i), self.dual.coeff(i))
    }

    pub fn from_coeffs(c: &[DualNumber]) -> Self {
        Self::new(
            RealPoly::new(c.iter().map(|x| x.primal).collect()),
            RealPoly::new(c.iter().map(|x| x.dual).collect()),
        )
    }

    pub fn degree(&self) -> Option<usize> {
        match (self.primal.degree(), self.dual.degree()) {
            (None, None) => None,
            (a, b) => Some(a.unwrap_or(0).max(b.unwrap_or(0))),
        }
    }

    pub fn eval(&self, t: f64) -> DualNumber {
        DualNumber::new(self.primal.eval(t), self.dual.eval(t))
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.dual.max_abs() <= tol * self.primal.max_abs().max(1.0)
    }
}

impl Mul for &DualPoly {
    type Output = DualPoly;
    fn mul(self, o: &DualPoly) -> DualPoly {
        DualPoly::new(
            &self.primal * &o.primal,
            &(&self.primal * &o.dual) + &(&self.dual * &o.primal),
        )
    }
}

impl Add for &DualPoly {
    type Output = DualPoly;
    fn add(self, o: &DualPoly) -> DualPoly {
        DualPoly::new(&self.primal + &o.primal, &self.dual + &o.dual)
    }
}

impl Sub for &DualPoly {
    type Output = DualPoly;
    fn sub(self, o: &DualPoly) -> DualPoly {
        DualPoly::new(&self.primal - &o.primal, &self.dual - &o.dual)
    }
}
