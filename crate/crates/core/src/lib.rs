//! Rigid-body motions as curves in projective space over the dual numbers.

pub mod dualnum;
pub mod conics;
pub mod dualquat;
pub mod error;
pub mod factor;
pub mod linkage;
pub mod motionpoly;
pub mod osculate;
pub mod poly;
pub mod projd;
pub mod series;
pub mod tol;

pub use dualnum::{dual_arith, DualNumber, DualOp};
pub use dualquat::{dq_conj, dq_mul, dq_norm, ConjKind, DualQuaternion, PoseClass, Quaternion};
pub use error::{Error, Result};
pub use poly::{DualPoly, RealPoly};
pub use projd::{
    canonicalize, connecting_lines, contact_order, proj_eq, CurveEvaluator, LineQuotient,
    ProjPointD, StraightLineD,
};
pub use tol::{set_tolerance, tolerance};
pub use motionpoly::{make_basic_motion, MotionPoly, TrigKind, TrigMotion};
pub use osculate::{develop, osculating_darboux, sine_fit, CylinderMotion, ScalarFn, SineFit};
pub use conics::{bennett_fit, interp_conic, nullcone_conic_fit, osculating_nullcone_conic, real_norm_rescale, ConicFamily};
pub use factor::{classify_case, factor_bounded_translation, factor_generic_quadratic, factor_hyperbolic_translation, reduce_to_study, Branch, FactorizationResult, NullConeCase};
pub use linkage::{cgk_dof, closure_check, extract_joint, synthesize_fourbar, Joint, JointType, Linkage};
