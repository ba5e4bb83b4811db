//! Motions in the cylinder group, their development onto the plane, and
//! osculating Darboux motions.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::dualquat::{DualQuaternion, Quaternion};
use crate::error::{Error, Result};
use crate::motionpoly::{cylinder_taylor, TrigMotion};
use crate::poly::RealPoly;
use crate::projd::CurveEvaluator;
use crate::series::Series;
use crate::tol::tolerance;

/// Smooth real function of the motion parameter.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ScalarFn {
    Poly { coeffs: Vec<f64> },
    /// `amp · sin(freq·t + phase)`
    Sinusoid { amp: f64, freq: f64, phase: f64 },
    /// `amp · sin(inner(t) + phase)`
    SineOf { amp: f64, phase: f64, inner: Box<ScalarFn> },
    Sum { terms: Vec<ScalarFn> },
}

impl ScalarFn {
    pub fn constant(c: f64) -> Self {
        Self::Poly { coeffs: vec![c] }
    }

    /// The identity `t ↦ t`.
    pub fn identity() -> Self {
        Self::Poly { coeffs: vec![0.0, 1.0] }
    }

    pub fn poly(coeffs: Vec<f64>) -> Self {
        Self::Poly { coeffs }
    }

    pub fn sinusoid(amp: f64, freq: f64, phase: f64) -> Self {
        Self::Sinusoid { amp, freq, phase }
    }

    pub fn plus(self, other: Self) -> Self {
        match self {
            Self::Sum { mut terms } => {
                terms.push(other);
                Self::Sum { terms }
            }
            s => Self::Sum { terms: vec![s, other] },
        }
    }

    /// Taylor series of order `order` about `t`.
    pub fn series(&self, t: f64, order: usize) -> Series {
        match self {
            Self::Poly { coeffs } => Series::variable(t, order).compose_poly(coeffs),
            Self::Sinusoid { amp, freq, phase } => {
                let mut arg = Series::variable(t, order).scale(*freq);
                arg.0[0] += phase;
                arg.sin_cos().0.scale(*amp)
            }
            Self::SineOf { amp, phase, inner } => {
                let mut arg = inner.series(t, order);
                arg.0[0] += phase;
                arg.sin_cos().0.scale(*amp)
            }
            Self::Sum { terms } => terms
                .iter()
                .fold(Series::constant(0.0, order), |acc, f| acc.add(&f.series(t, order))),
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.series(t, 0).0[0]
    }

    /// `(f, f′, f″)` at `t`.
    pub fn jet2(&self, t: f64) -> [f64; 3] {
        let s = self.series(t, 2);
        [s.0[0], s.0[1], 2.0 * s.0[2]]
    }
}

impl From<RealPoly> for ScalarFn {
    fn from(p: RealPoly) -> Self {
        Self::Poly { coeffs: p.coeffs().to_vec() }
    }
}

/// Motion `t ↦ r(ω(t))·(1 − ½ε z(t) 𝐤)`: rotation by `ω` about the 𝐤 axis
/// combined with translation by `z` along it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CylinderMotion {
    pub angle: ScalarFn,
    pub height: ScalarFn,
}

impl CylinderMotion {
    pub fn new(angle: ScalarFn, height: ScalarFn) -> Self {
        Self { angle, height }
    }

    pub fn rotation() -> Self {
        Self::new(ScalarFn::identity(), ScalarFn::constant(0.0))
    }

    pub fn helical(pitch: f64) -> Self {
        Self::new(ScalarFn::identity(), ScalarFn::poly(vec![0.0, pitch]))
    }

    pub fn darboux(amplitude: f64) -> Self {
        Self::new(ScalarFn::identity(), ScalarFn::sinusoid(amplitude, 1.0, 0.0))
    }
}

impl CurveEvaluator for CylinderMotion {
    fn eval(&self, t: f64) -> DualQuaternion {
        self.taylor_coeffs(t, 0)[0]
    }

    fn taylor(&self, t: f64, order: usize) -> Option<Vec<DualQuaternion>> {
        Some(self.taylor_coeffs(t, order))
    }
}

impl CylinderMotion {
    pub fn taylor_coeffs(&self, t: f64, order: usize) -> Vec<DualQuaternion> {
        cylinder_taylor(&self.angle.series(t, order), &self.height.series(t, order))
    }
}

/// One sample of a developed curve on the unit cylinder.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DevelopedSample {
    pub t: f64,
    pub u: f64,
    pub z: f64,
    pub slope: f64,
    pub curvature: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DevelopedCurve {
    pub samples: Vec<DevelopedSample>,
}

/// Slope `dz/du` and curvature of the graph `u ↦ z` at `t`.
pub fn slope_curvature(m: &CylinderMotion, t: f64) -> Result<(f64, f64)> {
    let [_, w1, w2] = m.angle.jet2(t);
    let [_, z1, z2] = m.height.jet2(t);
    if w1.abs() <= tolerance() {
        return Err(Error::StationaryAngle(t));
    }
    let k = z1 / w1;
    let zuu = (w1 * z2 - z1 * w2) / w1.powi(3);
    Ok((k, zuu / (1.0 + k * k).powf(1.5)))
}

/// Samples `n ≥ 2` points of the development over `t_range`.
pub fn develop(m: &CylinderMotion, t_range: (f64, f64), n: usize) -> Result<DevelopedCurve> {
    let n = n.max(2);
    let samples = (0..n)
        .map(|i| {
            let t = t_range.0 + (t_range.1 - t_range.0) * i as f64 / (n - 1) as f64;
            let (slope, curvature) = slope_curvature(m, t)?;
            Ok(DevelopedSample { t, u: m.angle.eval(t), z: m.height.eval(t), slope, curvature })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DevelopedCurve { samples })
}

/// Stroke-only polyline in `(u, z)` coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct SvgLayer {
    pub points: Vec<(f64, f64)>,
    pub stroke: String,
}

/// Plot of `layers` with the coordinate axes where they fall inside the
/// bounding box, and an optional circle marker.
pub fn svg_plot(layers: &[SvgLayer], marker: Option<(f64, f64)>) -> String {
    let (mut u0, mut u1, mut z0, mut z1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(u, z) in layers.iter().flat_map(|l| &l.points).chain(marker.as_ref()) {
        u0 = u0.min(u);
        u1 = u1.max(u);
        z0 = z0.min(z);
        z1 = z1.max(z);
    }
    if !u0.is_finite() {
        (u0, u1, z0, z1) = (0.0, 0.0, 0.0, 0.0);
    }
    let margin = 10.0;
    let width = (u1 - u0) * SVG_SCALE + 2.0 * margin;
    let height = (z1 - z0) * SVG_SCALE + 2.0 * margin;
    let x = |u: f64| (u - u0) * SVG_SCALE + margin;
    let y = |z: f64| (z1 - z) * SVG_SCALE + margin;
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.3}\" height=\"{height:.3}\" viewBox=\"0 0 {width:.3} {height:.3}\">\n"
    );
    if z0 <= 0.0 && 0.0 <= z1 {
        let _ = writeln!(
            out,
            "<line x1=\"{:.3}\" y1=\"{:.3}\" x2=\"{:.3}\" y2=\"{:.3}\" stroke=\"gray\" stroke-width=\"0.5\"/>",
            x(u0), y(0.0), x(u1), y(0.0)
        );
    }
    if u0 <= 0.0 && 0.0 <= u1 {
        let _ = writeln!(
            out,
            "<line x1=\"{:.3}\" y1=\"{:.3}\" x2=\"{:.3}\" y2=\"{:.3}\" stroke=\"gray\" stroke-width=\"0.5\"/>",
            x(0.0), y(z0), x(0.0), y(z1)
        );
    }
    for l in layers {
        let pts: Vec<String> = l.points.iter().map(|&(u, z)| format!("{:.3},{:.3}", x(u), y(z))).collect();
        let _ = writeln!(
            out,
            "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1\" points=\"{}\"/>",
            l.stroke,
            pts.join(" ")
        );
    }
    if let Some((u, z)) = marker {
        let _ = writeln!(out, "<circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"3\" fill=\"none\" stroke=\"red\"/>", x(u), y(z));
    }
    out.push_str("</svg>\n");
    out
}

/// Pixels per unit length in SVG output.
pub const SVG_SCALE: f64 = 100.0;

impl DevelopedCurve {
    /// CSV with header `u,z`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("u,z\n");
        for s in &self.samples {
            let _ = writeln!(out, "{},{}", s.u, s.z);
        }
        out
    }

    /// SVG polyline, `u` to the right and `z` up.
    pub fn to_svg(&self) -> String {
        svg_plot(&[self.polyline("black")], None)
    }

    pub fn polyline(&self, stroke: &str) -> SvgLayer {
        SvgLayer { points: self.samples.iter().map(|s| (s.u, s.z)).collect(), stroke: stroke.to_string() }
    }
}

/// Amplitude and phase of a point on the graph of `φ ↦ a sin φ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SineFit {
    pub a: f64,
    pub phi: f64,
}

impl SineFit {
    pub fn slope(&self) -> f64 {
        self.a * self.phi.cos()
    }

    pub fn curvature(&self) -> f64 {
        let k = self.slope();
        -self.a * self.phi.sin() / (1.0 + k * k).powf(1.5)
    }
}

/// The point of some graph `a sin φ` with slope `k` and curvature `kappa`:
/// `(a, φ)` are polar coordinates of `(k, −ϰ(1 + k²)^{3/2})`, `a ≥ 0`, `φ ∈ [0, 2π)`.
pub fn sine_fit(k: f64, kappa: f64) -> SineFit {
    let y = -kappa * (1.0 + k * k).powf(1.5);
    let a = k.hypot(y);
    if a == 0.0 {
        return SineFit { a: 0.0, phi: 0.0 };
    }
    let mut phi = y.atan2(k);
    if phi < 0.0 {
        phi += TAU;
    }
    if phi >= TAU {
        phi -= TAU;
    }
    SineFit { a, phi }
}

/// Osculating Darboux motion of a cylinder motion at `t0`. Its development is
/// `z = a sin(u − u0 + φ) + z_off`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OsculatingDarboux {
    pub t0: f64,
    pub fit: SineFit,
    pub u0: f64,
    pub z_off: f64,
}

impl OsculatingDarboux {
    pub fn amplitude(&self) -> f64 {
        self.fit.a
    }

    /// Parameter shift `ψ = φ − u0`: the motion is `C·d_a(ω + ψ)`.
    pub fn shift(&self) -> f64 {
        self.fit.phi - self.u0
    }

    pub fn darboux(&self) -> TrigMotion {
        TrigMotion::darboux(self.fit.a)
    }

    /// Constant cylinder element `C = r(−ψ)·(1 − ½ε z_off 𝐤)`.
    pub fn placement(&self) -> DualQuaternion {
        let r = DualQuaternion::real(Quaternion::rotation([0.0, 0.0, 1.0], -self.shift()));
        r * DualQuaternion::translation([0.0, 0.0, self.z_off])
    }

    pub fn developed_height(&self, u: f64) -> f64 {
        self.fit.a * (u + self.shift()).sin() + self.z_off
    }

    /// The motion with the rotation angle as parameter.
    pub fn in_angle(&self) -> CylinderMotion {
        CylinderMotion::new(
            ScalarFn::identity(),
            ScalarFn::sinusoid(self.fit.a, 1.0, self.shift()).plus(ScalarFn::constant(self.z_off)),
        )
    }

    /// The motion parametrized like `m`, i.e. with angle `ω(t)` of `m`.
    pub fn along(&self, m: &CylinderMotion) -> CylinderMotion {
        CylinderMotion::new(
            m.angle.clone(),
            ScalarFn::SineOf { amp: self.fit.a, phase: self.shift(), inner: Box::new(m.angle.clone()) }
                .plus(ScalarFn::constant(self.z_off)),
        )
    }
}

pub fn osculating_darboux(m: &CylinderMotion, t0: f64) -> Result<OsculatingDarboux> {
    let (k, kappa) = slope_curvature(m, t0)?;
    let fit = sine_fit(k, kappa);
    let u0 = m.angle.eval(t0);
    let z0 = m.height.eval(t0);
    Ok(OsculatingDarboux { t0, fit, u0, z_off: z0 - fit.a * fit.phi.sin() })
}

/// `φ` reduced to `[0, 2π)`.
pub fn wrap_angle(phi: f64) -> f64 {
    let r = phi.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}
