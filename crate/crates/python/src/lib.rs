//! Python bindings. Reports come back as plain dicts; coefficient vectors as lists of `complex`.

use std::path::PathBuf;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use num_complex::Complex64;
use qg::coaction::{self as co, Side};
use qg::csalg::{self as cs, CStarAlgebra};
use qg::fqgroup::{self as fq, FiniteGroup, FiniteQuantumGroup};
use qg::io as qio;
use qg::linalg::CVec;
use qg::morita::{self as mo, BiActionAlgebra};
use qg::Config;

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn cfg(tol: f64, seed: u64) -> PyResult<Config> {
    if !(tol > 0.0 && tol <= 1e-2) {
        return Err(err(format!("tolerance {tol} outside (0, 1e-2]")));
    }
    Ok(Config { tol, seed, ..Config::default() })
}

fn to_dict<'py>(py: Python<'py>, v: &impl serde::Serialize) -> PyResult<Bound<'py, PyDict>> {
    let s = serde_json::to_string(v).map_err(err)?;
    py.import("json")?.call_method1("loads", (s,))?.cast_into::<PyDict>().map_err(Into::into)
}

fn to_list(v: &CVec) -> Vec<Complex64> {
    v.iter().copied().collect()
}

fn from_list(a: &CStarAlgebra, v: Vec<Complex64>) -> PyResult<CVec> {
    if v.len() != a.dim() {
        return Err(err(format!("expected {} coefficients, got {}", a.dim(), v.len())));
    }
    Ok(CVec::from_vec(v))
}

fn parse_side(side: &str) -> PyResult<Side> {
    match side {
        "left" => Ok(Side::Left),
        "right" => Ok(Side::Right),
        _ => Err(err(format!("side must be 'left' or 'right', got '{side}'"))),
    }
}

/// Finite group given by its multiplication table.
#[pyclass(name = "Group", module = "qgalois", frozen, skip_from_py_object)]
#[derive(Clone)]
struct Group(FiniteGroup);

#[pymethods]
impl Group {
    #[staticmethod]
    fn cyclic(n: usize) -> PyResult<Self> {
        if n == 0 {
            return Err(err("order must be positive"));
        }
        Ok(Self(FiniteGroup::cyclic(n)))
    }

    #[staticmethod]
    fn symmetric3() -> Self {
        Self(FiniteGroup::symmetric3())
    }

    #[staticmethod]
    fn from_table(table: Vec<Vec<usize>>) -> PyResult<Self> {
        FiniteGroup::from_table(table).map(Self).map_err(err)
    }

    fn product(&self, other: &Group) -> Self {
        Self(FiniteGroup::product(&self.0, &other.0))
    }

    #[getter]
    fn order(&self) -> usize {
        self.0.order()
    }

    fn table(&self) -> Vec<Vec<usize>> {
        self.0.table().to_vec()
    }
}

/// Finite-dimensional C*-algebra in a fixed basis.
#[pyclass(name = "Algebra", module = "qgalois", frozen)]
struct Algebra(CStarAlgebra);

#[pymethods]
impl Algebra {
    #[staticmethod]
    #[pyo3(signature = (sizes, tol = 1e-9, seed = 0))]
    fn multimatrix(sizes: Vec<usize>, tol: f64, seed: u64) -> PyResult<Self> {
        cs::multimatrix(&sizes, &cfg(tol, seed)?).map(Self).map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (path, tol = 1e-9, seed = 0))]
    fn load(path: PathBuf, tol: f64, seed: u64) -> PyResult<Self> {
        qio::load_algebra(&path, &cfg(tol, seed)?).map(Self).map_err(err)
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&qio::AlgebraJson::from_algebra(&self.0)).map_err(err)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn labels(&self) -> Vec<String> {
        self.0.labels().to_vec()
    }

    fn block_sizes(&self) -> Vec<usize> {
        self.0.blocks()
    }

    fn unit(&self) -> Vec<Complex64> {
        to_list(self.0.unit())
    }

    fn multiply(&self, x: Vec<Complex64>, y: Vec<Complex64>) -> PyResult<Vec<Complex64>> {
        Ok(to_list(&self.0.mul(&from_list(&self.0, x)?, &from_list(&self.0, y)?)))
    }

    fn star(&self, x: Vec<Complex64>) -> PyResult<Vec<Complex64>> {
        Ok(to_list(&self.0.star_of(&from_list(&self.0, x)?)))
    }

    /// Frobenius data of `phi` (defaults to the normalized trace).
    #[pyo3(signature = (phi = None, tol = 1e-9))]
    fn frobenius<'py>(&self, py: Python<'py>, phi: Option<Vec<Complex64>>, tol: f64) -> PyResult<Bound<'py, PyDict>> {
        let phi = match phi {
            Some(v) => from_list(&self.0, v)?,
            None => co::normalized_trace(&self.0),
        };
        to_dict(py, &cs::frobenius_report(&self.0, &phi, tol).map_err(err)?)
    }
}

/// Finite quantum group (Hopf C*-algebra) with verified axioms.
#[pyclass(name = "QuantumGroup", module = "qgalois", frozen, skip_from_py_object)]
#[derive(Clone)]
struct QuantumGroup(FiniteQuantumGroup);

#[pymethods]
impl QuantumGroup {
    /// `C(G)` with `Δ(δ_g) = Σ_{hk=g} δ_h ⊗ δ_k`.
    #[staticmethod]
    #[pyo3(signature = (group, tol = 1e-9, seed = 0))]
    fn function_algebra(group: &Group, tol: f64, seed: u64) -> PyResult<Self> {
        fq::function_algebra(&group.0, &cfg(tol, seed)?).map(Self).map_err(err)
    }

    /// `ℂG` with `Δ(g) = g ⊗ g`.
    #[staticmethod]
    #[pyo3(signature = (group, tol = 1e-9, seed = 0))]
    fn group_algebra(group: &Group, tol: f64, seed: u64) -> PyResult<Self> {
        fq::group_algebra(&group.0, &cfg(tol, seed)?).map(Self).map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (path, tol = 1e-9, seed = 0))]
    fn load(path: PathBuf, tol: f64, seed: u64) -> PyResult<Self> {
        qio::load_hopf(&path, &cfg(tol, seed)?).map(Self).map_err(err)
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&qio::HopfJson::from_quantum_group(&self.0)).map_err(err)
    }

    fn dual(&self) -> PyResult<Self> {
        fq::dual_quantum_group(&self.0).map(Self).map_err(err)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn algebra(&self) -> Algebra {
        Algebra(self.0.algebra().clone())
    }

    fn haar(&self) -> Vec<Complex64> {
        to_list(&self.0.haar().coeffs)
    }

    fn irrep_dims(&self) -> Vec<usize> {
        self.0.irreps().iter().map(|u| u.dim).collect()
    }

    fn certificates<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        to_dict(py, self.0.certificates())
    }
}

/// Coaction of a quantum group on an algebra.
#[pyclass(name = "CoAction", module = "qgalois", frozen, skip_from_py_object)]
#[derive(Clone)]
struct CoAction(co::CoAction, Config);

#[pymethods]
impl CoAction {
    /// `Δ` viewed as a coaction of `H` on itself.
    #[staticmethod]
    #[pyo3(signature = (hopf, side = "right", tol = 1e-9, seed = 0))]
    fn regular(hopf: &QuantumGroup, side: &str, tol: f64, seed: u64) -> PyResult<Self> {
        let c = cfg(tol, seed)?;
        co::regular_coaction(&hopf.0, parse_side(side)?, &c).map(|x| Self(x, c)).map_err(err)
    }

    /// `a ↦ 1 ⊗ a` (or `a ⊗ 1`).
    #[staticmethod]
    #[pyo3(signature = (algebra, hopf, side = "right", tol = 1e-9, seed = 0))]
    fn trivial(algebra: &Algebra, hopf: &QuantumGroup, side: &str, tol: f64, seed: u64) -> PyResult<Self> {
        let c = cfg(tol, seed)?;
        co::trivial_coaction(&algebra.0, &hopf.0, parse_side(side)?, &c).map(|x| Self(x, c)).map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (path, tol = 1e-9, seed = 0))]
    fn load(path: PathBuf, tol: f64, seed: u64) -> PyResult<Self> {
        let c = cfg(tol, seed)?;
        qio::load_coaction(&path, &c).map(|x| Self(x, c)).map_err(err)
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&qio::CoactionJson::from_coaction(&self.0)).map_err(err)
    }

    #[getter]
    fn side(&self) -> &'static str {
        match self.0.side() {
            Side::Left => "left",
            Side::Right => "right",
        }
    }

    #[getter]
    fn fixed_dim(&self) -> usize {
        self.0.fixed_basis().ncols()
    }

    fn algebra(&self) -> Algebra {
        Algebra(self.0.algebra().clone())
    }

    fn certificates<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        to_dict(py, self.0.certificates())
    }

    fn freeness<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        to_dict(py, &co::freeness_summary(&self.0, &self.1))
    }

    fn canonical_state<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        to_dict(py, &co::canonical_state(&self.0, &self.1).map_err(err)?)
    }

    fn kms_residual(&self, phi: Vec<Complex64>) -> PyResult<f64> {
        Ok(co::kms_residual(&self.0, &from_list(self.0.algebra(), phi)?))
    }
}

/// Algebra with commuting left and right coactions.
#[pyclass(name = "BiAction", module = "qgalois", frozen)]
struct BiAction(BiActionAlgebra);

#[pymethods]
impl BiAction {
    #[new]
    #[pyo3(signature = (left, right, tol = 1e-9, seed = 0))]
    fn new(left: &CoAction, right: &CoAction, tol: f64, seed: u64) -> PyResult<Self> {
        mo::validate_biaction(left.0.clone(), right.0.clone(), &cfg(tol, seed)?).map(Self).map_err(err)
    }

    /// `H ⋊ Ĥ` with its left `H`- and right `Ĥ`-coactions.
    #[staticmethod]
    #[pyo3(signature = (hopf, tol = 1e-9, seed = 0))]
    fn crossed_product(hopf: &QuantumGroup, tol: f64, seed: u64) -> PyResult<Self> {
        qg::examples::crossed_product(&hopf.0, &cfg(tol, seed)?).map(Self).map_err(err)
    }

    /// Twisted group algebra of the Heisenberg cocycle on `Z_n × Z_n`.
    #[staticmethod]
    #[pyo3(signature = (n, tol = 1e-9, seed = 0))]
    fn heisenberg(n: usize, tol: f64, seed: u64) -> PyResult<Self> {
        let c = cfg(tol, seed)?;
        let sigma = qg::examples::heisenberg_cocycle(n, 1e-12).map_err(err)?;
        qg::examples::projective_cocycle_algebra(&sigma, &c).map(Self).map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (path, tol = 1e-9, seed = 0))]
    fn load(path: PathBuf, tol: f64, seed: u64) -> PyResult<Self> {
        qio::load_bundle(&path, &cfg(tol, seed)?).map(Self).map_err(err)
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&qio::BundleJson::from_biaction(&self.0)).map_err(err)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.algebra().dim()
    }

    fn left(&self) -> CoAction {
        CoAction(self.0.left().clone(), *self.0.config())
    }

    fn right(&self) -> CoAction {
        CoAction(self.0.right().clone(), *self.0.config())
    }

    fn morita_report<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        to_dict(py, &mo::mkey_report(&self.0))
    }

    fn exchange<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        to_dict(py, &mo::exchange_map(&self.0).map_err(err)?.report)
    }

    fn joint_state(&self) -> PyResult<Vec<Complex64>> {
        Ok(to_list(&mo::joint_canonical_state(&self.0).map_err(err)?.functional.coeffs))
    }
}

/// Cotensor product over the shared middle quantum group.
#[pyfunction]
fn cotensor(first: &BiAction, second: &BiAction) -> PyResult<BiAction> {
    let c = *first.0.config();
    mo::cotensor(&first.0, &second.0, &c).map(|c| BiAction(c.biaction)).map_err(err)
}

#[pymodule]
fn qgalois(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Group>()?;
    m.add_class::<Algebra>()?;
    m.add_class::<QuantumGroup>()?;
    m.add_class::<CoAction>()?;
    m.add_class::<BiAction>()?;
    m.add_function(wrap_pyfunction!(cotensor, m)?)?;
    Ok(())
}
