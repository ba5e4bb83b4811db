//! Python bindings.

use ::motionkit as mk;
use mk::factor::{factor_auto, factor_by_norm_factors};
use mk::osculate::osculating_darboux;
use mk::{CurveEvaluator, CylinderMotion, Error};
use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(motionkit, MotionkitError, PyException);

fn err(e: Error) -> PyErr {
    MotionkitError::new_err(e.to_string())
}

fn json_err(e: serde_json::Error) -> PyErr {
    MotionkitError::new_err(e.to_string())
}

/// Python object from a serializable value, via the `json` module.
fn to_py<'py, T: serde::Serialize>(py: Python<'py>, v: &T) -> PyResult<Bound<'py, PyAny>> {
    let s = serde_json::to_string(v).map_err(json_err)?;
    py.import("json")?.call_method1("loads", (s,))
}

#[pyclass(name = "DualNumber", module = "motionkit", frozen, skip_from_py_object)]
#[derive(Clone, Copy)]
struct PyDualNumber(mk::DualNumber);

#[pymethods]
impl PyDualNumber {
    #[new]
    #[pyo3(signature = (primal, dual = 0.0))]
    fn new(primal: f64, dual: f64) -> Self {
        Self(mk::DualNumber::new(primal, dual))
    }

    #[getter]
    fn primal(&self) -> f64 {
        self.0.primal
    }

    #[getter]
    fn dual(&self) -> f64 {
        self.0.dual
    }

    fn inv(&self) -> PyResult<Self> {
        self.0.inv().map(Self).map_err(err)
    }

    fn sqrt(&self) -> PyResult<Self> {
        self.0.sqrt().map(Self).map_err(err)
    }

    fn is_invertible(&self) -> bool {
        self.0.is_invertible()
    }

    fn __add__(&self, o: PyRef<Self>) -> Self {
        Self(self.0 + o.0)
    }

    fn __sub__(&self, o: PyRef<Self>) -> Self {
        Self(self.0 - o.0)
    }

    fn __mul__(&self, o: PyRef<Self>) -> Self {
        Self(self.0 * o.0)
    }

    fn __truediv__(&self, o: PyRef<Self>) -> PyResult<Self> {
        Ok(Self(self.0 * o.0.inv().map_err(err)?))
    }

    fn __eq__(&self, o: PyRef<Self>) -> bool {
        self.0 == o.0
    }

    fn __repr__(&self) -> String {
        format!("DualNumber({}, {})", self.0.primal, self.0.dual)
    }
}

#[pyclass(name = "DualQuaternion", module = "motionkit", frozen, skip_from_py_object)]
#[derive(Clone, Copy)]
struct PyDualQuaternion(mk::DualQuaternion);

#[pymethods]
impl PyDualQuaternion {
    /// `p + εd` from the coordinates `[w, x, y, z]` of `p` and `d`.
    #[new]
    #[pyo3(signature = (primal, dual = [0.0; 4]))]
    fn new(primal: [f64; 4], dual: [f64; 4]) -> Self {
        Self(mk::DualQuaternion::from_arrays(primal, dual))
    }

    #[staticmethod]
    fn translation(v: [f64; 3]) -> Self {
        Self(mk::DualQuaternion::translation(v))
    }

    #[staticmethod]
    fn rotation(axis: [f64; 3], angle: f64) -> Self {
        Self(mk::DualQuaternion::rotation(axis, angle))
    }

    #[getter]
    fn primal(&self) -> [f64; 4] {
        self.0.primal.to_array()
    }

    #[getter]
    fn dual(&self) -> [f64; 4] {
        self.0.dual.to_array()
    }

    fn conj(&self) -> Self {
        Self(self.0.conj())
    }

    fn eps_conj(&self) -> Self {
        Self(self.0.eps_conj())
    }

    fn norm(&self) -> PyDualNumber {
        PyDualNumber(self.0.norm())
    }

    fn inv(&self) -> PyResult<Self> {
        self.0.inv().map(Self).map_err(err)
    }

    fn is_study(&self) -> bool {
        self.0.norm().dual.abs() <= mk::tolerance() * self.0.max_abs().powi(2).max(1.0)
    }

    /// Image of the affine point `x`.
    fn transform_point(&self, x: [f64; 3]) -> PyResult<[f64; 3]> {
        self.0.transform_point(x).map_err(err)
    }

    fn __add__(&self, o: PyRef<Self>) -> Self {
        Self(self.0 + o.0)
    }

    fn __sub__(&self, o: PyRef<Self>) -> Self {
        Self(self.0 - o.0)
    }

    fn __mul__(&self, o: PyRef<Self>) -> Self {
        Self(self.0 * o.0)
    }

    fn __eq__(&self, o: PyRef<Self>) -> bool {
        self.0 == o.0
    }

    fn __repr__(&self) -> String {
        format!("DualQuaternion({:?}, {:?})", self.primal(), self.dual())
    }
}

#[pyclass(name = "MotionPoly", module = "motionkit", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyMotionPoly(mk::MotionPoly);

#[pymethods]
impl PyMotionPoly {
    /// Coefficients in ascending powers of `t`.
    #[new]
    fn new(coeffs: Vec<PyRef<PyDualQuaternion>>) -> Self {
        Self(mk::MotionPoly::new(coeffs.iter().map(|c| c.0).collect()))
    }

    #[staticmethod]
    fn from_json(s: &str) -> PyResult<Self> {
        serde_json::from_str(s).map(Self).map_err(json_err)
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.0).map_err(json_err)
    }

    #[getter]
    fn coeffs(&self) -> Vec<PyDualQuaternion> {
        self.0.coeffs.iter().map(|&c| PyDualQuaternion(c)).collect()
    }

    fn degree(&self) -> usize {
        self.0.degree()
    }

    fn eval(&self, t: f64) -> PyDualQuaternion {
        PyDualQuaternion(self.0.eval(t))
    }

    /// Norm polynomial as `(primal coefficients, dual coefficients)`.
    fn norm(&self) -> (Vec<f64>, Vec<f64>) {
        let n = self.0.norm();
        (n.primal.coeffs().to_vec(), n.dual.coeffs().to_vec())
    }

    fn conj(&self) -> Self {
        Self(self.0.conj())
    }

    fn is_study(&self, tol: f64) -> bool {
        self.0.is_study(tol)
    }

    fn approx_eq(&self, o: PyRef<Self>, tol: f64) -> bool {
        self.0.approx_eq(&o.0, tol)
    }

    /// Homogeneous trajectory `[y0, y1, y2, y3]` of the affine point `x`.
    fn trajectory(&self, x: [f64; 3], params: Vec<f64>) -> PyResult<Vec<[f64; 4]>> {
        mk::motionpoly::trajectory_of_point(&self.0, x, &params).map(|t| t.points).map_err(err)
    }

    fn __mul__(&self, o: PyRef<Self>) -> Self {
        Self(&self.0 * &o.0)
    }

    fn __eq__(&self, o: PyRef<Self>) -> bool {
        self.0 == o.0
    }

    fn __repr__(&self) -> String {
        format!("MotionPoly(degree={})", self.0.degree())
    }
}

#[pyclass(name = "Factorization", module = "motionkit", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyFactorization(mk::FactorizationResult);

#[pymethods]
impl PyFactorization {
    #[getter]
    fn factors(&self) -> Vec<PyMotionPoly> {
        self.0.factors.iter().cloned().map(PyMotionPoly).collect()
    }

    /// `(λ, root)` of each scalar prefactor `1 + ελ/(t − root)`.
    #[getter]
    fn prefactors(&self) -> Vec<(f64, f64)> {
        self.0.prefactors.iter().map(|p| (p.lambda, p.root)).collect()
    }

    #[getter]
    fn family_params<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let d = PyDict::new(py);
        for (k, v) in &self.0.family_params {
            d.set_item(k, v)?;
        }
        Ok(d)
    }

    #[getter]
    fn kinematically_unique(&self) -> bool {
        self.0.kinematically_unique
    }

    fn product(&self) -> PyMotionPoly {
        PyMotionPoly(self.0.product())
    }

    fn roundtrip_residual(&self, c: PyRef<PyMotionPoly>) -> f64 {
        self.0.roundtrip_residual(&c.0, &mk::factor::sample_params())
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.0).map_err(json_err)
    }

    fn __repr__(&self) -> String {
        format!("Factorization(factors={}, prefactors={})", self.0.factors.len(), self.0.prefactors.len())
    }
}

#[pyclass(name = "Linkage", module = "motionkit", frozen, skip_from_py_object)]
struct PyLinkage(mk::Linkage);

#[pymethods]
impl PyLinkage {
    #[getter]
    fn types(&self) -> String {
        self.0.type_string()
    }

    #[getter]
    fn dof_cgk(&self) -> i64 {
        self.0.dof_cgk
    }

    #[getter]
    fn closure_residual(&self) -> f64 {
        self.0.closure_residual
    }

    #[getter]
    fn warnings(&self) -> Vec<String> {
        self.0.warnings.clone()
    }

    /// Joints as dictionaries with `direction`, `moment`, `jtype`, `dof`.
    #[getter]
    fn joints<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.0.joints)
    }

    /// Axis pairs as dictionaries with `i`, `j`, `parallel`, `angle`, `distance`.
    #[getter]
    fn axes<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.0.axes)
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.0).map_err(json_err)
    }

    fn __repr__(&self) -> String {
        format!("Linkage({}, dof_cgk={})", self.0.type_string(), self.0.dof_cgk)
    }
}

/// Case label `"a"`, `"b"`, `"c"`, or `"none"` of a quadratic motion polynomial.
#[pyfunction]
fn classify_case(c: PyRef<PyMotionPoly>) -> &'static str {
    mk::factor::case_of(&c.0).label()
}

/// Factorizations of a quadratic motion polynomial as `(case, [Factorization])`.
#[pyfunction]
#[pyo3(signature = (c, v2 = 0.0, v3 = 0.0))]
fn factor(c: PyRef<PyMotionPoly>, v2: f64, v3: f64) -> PyResult<(&'static str, Vec<PyFactorization>)> {
    let (case, facts) = match mk::classify_case(&c.0) {
        Ok(_) => factor_auto(&c.0, v2, v3).map_err(err)?,
        Err(Error::NotNullCone(_)) => (mk::NullConeCase::NotNullCone, factor_by_norm_factors(&c.0).map_err(err)?),
        Err(e) => return Err(err(e)),
    };
    Ok((case.label(), facts.into_iter().map(PyFactorization).collect()))
}

#[pyfunction]
fn factor_bounded_translation(c: PyRef<PyMotionPoly>, v2: f64, v3: f64, upper: bool) -> PyResult<PyFactorization> {
    let branch = if upper { mk::Branch::Upper } else { mk::Branch::Lower };
    mk::factor_bounded_translation(&c.0, v2, v3, branch).map(PyFactorization).map_err(err)
}

#[pyfunction]
fn synthesize_fourbar(f: PyRef<PyFactorization>, g: PyRef<PyFactorization>) -> PyResult<PyLinkage> {
    mk::synthesize_fourbar(&f.0, &g.0).map(PyLinkage).map_err(err)
}

#[pyfunction]
fn interp_conic(
    c0: PyRef<PyDualQuaternion>,
    c1: PyRef<PyDualQuaternion>,
    c2: PyRef<PyDualQuaternion>,
    gamma0: PyRef<PyDualNumber>,
    gamma2: PyRef<PyDualNumber>,
) -> PyResult<PyMotionPoly> {
    let fam = mk::ConicFamily::new(c0.0, c1.0, c2.0, gamma0.0, gamma2.0);
    mk::interp_conic(&fam).map(PyMotionPoly).map_err(err)
}

#[pyfunction]
fn bennett_fit(c0: PyRef<PyDualQuaternion>, c1: PyRef<PyDualQuaternion>, c2: PyRef<PyDualQuaternion>) -> PyResult<PyMotionPoly> {
    mk::bennett_fit(c0.0, c1.0, c2.0).map(PyMotionPoly).map_err(err)
}

/// Conics through three poses tangent to the null cone in two points.
#[pyfunction]
fn nullcone_conic_fit(
    c0: PyRef<PyDualQuaternion>,
    c1: PyRef<PyDualQuaternion>,
    c2: PyRef<PyDualQuaternion>,
) -> PyResult<Vec<PyMotionPoly>> {
    let sols = mk::nullcone_conic_fit(c0.0, c1.0, c2.0).map_err(err)?;
    Ok(sols.into_iter().map(|s| PyMotionPoly(s.poly)).collect())
}

/// Amplitude and phase `(a, φ)` of the sine curve `a·sin(u + φ)` with slope `k`
/// and curvature `kappa` at `u = 0`.
#[pyfunction]
fn sine_fit(k: f64, kappa: f64) -> (f64, f64) {
    let f = mk::sine_fit(k, kappa);
    (f.a, f.phi)
}

fn cylinder(kind: &str, param: f64) -> PyResult<CylinderMotion> {
    match kind {
        "rotation" => Ok(CylinderMotion::rotation()),
        "helical" => Ok(CylinderMotion::helical(param)),
        "darboux" => Ok(CylinderMotion::darboux(param)),
        _ => Err(MotionkitError::new_err(format!("unknown cylinder motion '{kind}'"))),
    }
}

/// Developed curve `[(u, z)]` of a rotation, helical, or Darboux motion.
#[pyfunction]
#[pyo3(signature = (kind, param = 1.0, t_range = (0.0, std::f64::consts::TAU), samples = 100))]
fn develop(kind: &str, param: f64, t_range: (f64, f64), samples: usize) -> PyResult<Vec<(f64, f64)>> {
    let d = mk::develop(&cylinder(kind, param)?, t_range, samples).map_err(err)?;
    Ok(d.samples.iter().map(|s| (s.u, s.z)).collect())
}

/// Amplitude and parameter shift of the osculating Darboux motion at `t0`.
#[pyfunction]
#[pyo3(signature = (kind, t0, param = 1.0))]
fn osculating_darboux_at(kind: &str, t0: f64, param: f64) -> PyResult<(f64, f64)> {
    let o = osculating_darboux(&cylinder(kind, param)?, t0).map_err(err)?;
    Ok((o.amplitude(), o.shift()))
}

/// Pose of a basic trigonometric motion at angle `omega`.
#[pyfunction]
#[pyo3(signature = (kind, omega, param = 1.0))]
fn basic_motion_pose(kind: &str, omega: f64, param: f64) -> PyResult<PyDualQuaternion> {
    let k = match kind {
        "rotation" => mk::TrigKind::Rotation,
        "helical" => mk::TrigKind::Helical { pitch: param },
        "darboux" => mk::TrigKind::Darboux { amplitude: param },
        _ => return Err(MotionkitError::new_err(format!("unknown motion '{kind}'"))),
    };
    let m = mk::make_basic_motion(k).map_err(err)?;
    Ok(PyDualQuaternion(m.trig.eval(omega)))
}

#[pyfunction]
fn cgk_dof(n_links: usize, joint_dofs: Vec<u32>) -> i64 {
    mk::cgk_dof(n_links, &joint_dofs)
}

#[pyfunction]
fn set_tolerance(tol: f64) {
    mk::set_tolerance(tol)
}

#[pyfunction]
fn tolerance() -> f64 {
    mk::tolerance()
}

#[pymodule]
#[pyo3(name = "motionkit")]
fn py_motionkit(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("MotionkitError", m.py().get_type::<MotionkitError>())?;
    m.add_class::<PyDualNumber>()?;
    m.add_class::<PyDualQuaternion>()?;
    m.add_class::<PyMotionPoly>()?;
    m.add_class::<PyFactorization>()?;
    m.add_class::<PyLinkage>()?;
    m.add_function(wrap_pyfunction!(classify_case, m)?)?;
    m.add_function(wrap_pyfunction!(factor, m)?)?;
    m.add_function(wrap_pyfunction!(factor_bounded_translation, m)?)?;
    m.add_function(wrap_pyfunction!(synthesize_fourbar, m)?)?;
    m.add_function(wrap_pyfunction!(interp_conic, m)?)?;
    m.add_function(wrap_pyfunction!(bennett_fit, m)?)?;
    m.add_function(wrap_pyfunction!(nullcone_conic_fit, m)?)?;
    m.add_function(wrap_pyfunction!(sine_fit, m)?)?;
    m.add_function(wrap_pyfunction!(develop, m)?)?;
    m.add_function(wrap_pyfunction!(osculating_darboux_at, m)?)?;
    m.add_function(wrap_pyfunction!(basic_motion_pose, m)?)?;
    m.add_function(wrap_pyfunction!(cgk_dof, m)?)?;
    m.add_function(wrap_pyfunction!(set_tolerance, m)?)?;
    m.add_function(wrap_pyfunction!(tolerance, m)?)?;
    Ok(())
}
