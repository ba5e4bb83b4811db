//! Joints and closed four-bar linkages built from two factorizations.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factor::{monic_linear, sample_params, FactorizationResult};
use crate::motionpoly::MotionPoly;
use crate::projd::projective_distance;

const AXIS_TOL: f64 = 1e-9;
/// Largest closure residual still accepted as "the same motion".
pub const MISMATCH_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum JointType {
    /// Revolute
    R,
    /// Prismatic
    P,
    /// Cylindrical
    C,
}

impl JointType {
    pub fn dof(self) -> u32 {
        match self {
            Self::R | Self::P => 1,
            Self::C => 2,
        }
    }
}

/// Joint axis in Plücker coordinates. For prismatic joints the moment is zero
/// and the direction is the direction of translation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Joint {
    pub direction: [f64; 3],
    pub moment: [f64; 3],
    pub jtype: JointType,
    pub dof: u32,
    /// The monic linear factor `t − h`.
    pub factor: MotionPoly,
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn norm(a: [f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

/// Axis and type of the motion parametrized by a linear factor.
pub fn extract_joint(f: &MotionPoly) -> Result<Joint> {
    let f = monic_linear(f)?;
    let h = -f.coeff(0);
    let (hp, hd) = (h.primal.vector(), h.dual.vector());
    let scale = h.max_abs().max(1.0);
    let hn = norm(hp);
    if hn <= AXIS_TOL * scale {
        let dn = norm(hd);
        if dn <= AXIS_TOL * scale {
            return Err(Error::InvalidParams("factor parametrizes no motion".into()));
        }
        return Ok(Joint {
            direction: hd.map(|v| v / dn),
            moment: [0.0; 3],
            jtype: JointType::P,
            dof: 1,
            factor: f,
        });
    }
    let l = hp.map(|v| v / hn);
    let along = dot(l, hd);
    let moment = std::array::from_fn(|i| -(hd[i] - along * l[i]) / hn);
    let n = f.norm();
    let jtype = if n.is_real(AXIS_TOL) { JointType::R } else { JointType::C };
    Ok(Joint { direction: l, moment, jtype, dof: jtype.dof(), factor: f })
}

/// Angle between two joint axes, in `[0, π/2]`.
pub fn axis_angle(a: &Joint, b: &Joint) -> f64 {
    let c = dot(a.direction, b.direction).abs().min(1.0);
    let s = norm(cross(a.direction, b.direction));
    s.atan2(c)
}

/// Length of the common perpendicular of two joint axes.
pub fn axis_distance(a: &Joint, b: &Joint) -> f64 {
    let cr = cross(a.direction, b.direction);
    let s = norm(cr);
    if s <= AXIS_TOL {
        let sg = dot(a.direction, b.direction).signum();
        let dm = std::array::from_fn(|i| a.moment[i] - sg * b.moment[i]);
        norm(dm)
    } else {
        (dot(a.direction, b.moment) + dot(b.direction, a.moment)).abs() / s
    }
}

pub fn axes_parallel(a: &Joint, b: &Joint) -> bool {
    norm(cross(a.direction, b.direction)) < AXIS_TOL
}

/// Chebyshev–Grübler–Kutzbach mobility `6(n − 1 − j) + Σ fᵢ`.
pub fn cgk_dof(n_links: usize, joint_dofs: &[u32]) -> i64 {
    let j = joint_dofs.len() as i64;
    6 * (n_links as i64 - 1 - j) + joint_dofs.iter().map(|&f| f as i64).sum::<i64>()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxisPair {
    pub i: usize,
    pub j: usize,
    pub parallel: bool,
    pub angle: f64,
    pub distance: f64,
}

/// Closed chain `F₁ F₂ | Ḡ₂ Ḡ₁`: joints 0, 1 realize the first factorization and
/// joints 3, 2 the second, so the loop reads fixed link, F₁, F₂, G₂, G₁.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Linkage {
    pub joints: Vec<Joint>,
    pub links: usize,
    pub dof_cgk: i64,
    pub closure_residual: f64,
    pub axes: Vec<AxisPair>,
    #[serde(default)]
    pub warnings: Vec<String>,
}

impl Linkage {
    pub fn type_string(&self) -> String {
        self.joints
            .iter()
            .map(|j| match j.jtype {
                JointType::R => 'R',
                JointType::P => 'P',
                JointType::C => 'C',
            })
            .collect()
    }

    pub fn pair(&self, i: usize, j: usize) -> Option<&AxisPair> {
        self.axes.iter().find(|p| (p.i, p.j) == (i.min(j), i.max(j)))
    }
}

/// Four-bar linkage from two factorizations of the same quadratic motion.
pub fn synthesize_fourbar(fact1: &FactorizationResult, fact2: &FactorizationResult) -> Result<Linkage> {
    if fact1.factors.len() != 2 || fact2.factors.len() != 2 {
        return Err(Error::InvalidParams("each factorization needs exactly two linear factors".into()));
    }
    let samples = sample_params();
    let residual = samples
        .iter()
        .map(|&t| projective_distance(fact1.eval(t), fact2.eval(t)))
        .fold(0.0, f64::max);
    if residual.is_nan() || residual > MISMATCH_TOL {
        return Err(Error::MismatchedMotions(residual));
    }
    let joints = vec![
        extract_joint(&fact1.factors[0])?,
        extract_joint(&fact1.factors[1])?,
        extract_joint(&fact2.factors[1])?,
        extract_joint(&fact2.factors[0])?,
    ];
    let mut axes = Vec::new();
    for i in 0..joints.len() {
        for j in (i + 1)..joints.len() {
            axes.push(AxisPair {
                i,
                j,
                parallel: axes_parallel(&joints[i], &joints[j]),
                angle: axis_angle(&joints[i], &joints[j]),
                distance: axis_distance(&joints[i], &joints[j]),
            });
        }
    }
    let mut warnings = Vec::new();
    if axes.iter().all(|p| p.parallel) {
        warnings.push("all joint axes are parallel; such linkages generally have two degrees of freedom".into());
    }
    let same = fact1.factors.iter().zip(&fact2.factors).all(|(a, b)| {
        let (a, b) = (monic_linear(a), monic_linear(b));
        matches!((a, b), (Ok(a), Ok(b)) if a.approx_eq(&b, 1e-9))
    });
    if same {
        warnings.push("both factorizations coincide; the linkage is degenerate".into());
    }
    let dofs: Vec<u32> = joints.iter().map(|j| j.dof).collect();
    let mut l = Linkage { joints, links: 4, dof_cgk: cgk_dof(4, &dofs), closure_residual: 0.0, axes, warnings };
    l.closure_residual = closure_check(&l, &samples);
    Ok(l)
}

/// Largest projective distance between the two factor chains over `samples`.
pub fn closure_check(l: &Linkage, samples: &[f64]) -> f64 {
    let n = l.joints.len();
    if n < 2 {
        return 0.0;
    }
    let half = n / 2;
    let chain = |idx: &mut dyn Iterator<Item = usize>| {
        idx.fold(MotionPoly::constant(crate::DualQuaternion::ONE), |acc, i| &acc * &l.joints[i].factor)
    };
    let a = chain(&mut (0..half));
    let b = chain(&mut (half..n).rev());
    samples
        .iter()
        .map(|&t| projective_distance(a.eval(t), b.eval(t)))
        .fold(0.0, f64::max)
}
