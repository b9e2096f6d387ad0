//! Python bindings. Structured results cross the boundary as JSON and are
//! returned as Python dicts and lists.

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use serde::Serialize;

use lpcomb::compgroup::{alpha_image, component_group, p_phi, s_tilde, Variant};
use lpcomb::endoscopy::{enumerate_elliptic, iota_full};
use lpcomb::gf2::Gf2Vec;
use lpcomb::ledger::{check_ledger, packet_orbit_stats};
use lpcomb::params::{GroupSpec, SimpleGroup, Theta};
use lpcomb::rational::fmt_q;
use lpcomb::spec::parse_spec;
use lpcomb::weylconst::{shape_constants, Constants, ReductiveShape, DEFAULT_WEYL_BOUND};

create_exception!(lpcomb_py, LpcombError, PyException);

fn err(e: lpcomb::Error) -> PyErr {
    LpcombError::new_err(format!("[{}] {e}", e.code()))
}

fn to_py<T: Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| LpcombError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

fn variant(name: &str) -> PyResult<Variant> {
    match name {
        "s" => Ok(Variant::S),
        "sbar" => Ok(Variant::Sbar),
        "sigma0" => Ok(Variant::SbarSigma0),
        "stilde" => Ok(Variant::Stilde),
        _ => Err(LpcombError::new_err(format!("unknown variant '{name}'"))),
    }
}

fn theta(name: &str) -> PyResult<Theta> {
    name.parse().map_err(err)
}

/// A validated parameter read from a spec file.
#[pyclass(name = "Parameter", module = "lpcomb_py")]
struct PyParameter {
    inner: lpcomb::params::Parameter,
}

#[pymethods]
impl PyParameter {
    /// The parameter labelled `label` in the spec text (the first one if omitted).
    #[staticmethod]
    #[pyo3(signature = (text, label = None))]
    fn from_spec(text: &str, label: Option<&str>) -> PyResult<Self> {
        let spec = parse_spec(text).map_err(err)?;
        let found = match label {
            Some(l) => spec.param(l).cloned(),
            None => spec.params.first().map(|(_, p)| p.clone()),
        };
        found
            .map(|inner| PyParameter { inner })
            .ok_or_else(|| LpcombError::new_err("no such parameter in the spec"))
    }

    fn __repr__(&self) -> String {
        format!("Parameter({} of {})", self.inner, self.inner.target())
    }

    fn target(&self) -> String {
        self.inner.target().to_string()
    }

    fn m_phi(&self) -> u32 {
        self.inner.m_phi()
    }

    fn is_discrete(&self) -> bool {
        self.inner.is_discrete()
    }

    #[pyo3(signature = (variant_name = "sbar"))]
    fn component_group_order(&self, variant_name: &str) -> PyResult<u128> {
        Ok(component_group(&self.inner, variant(variant_name)?).order())
    }

    fn s_tilde_order(&self) -> PyResult<u128> {
        Ok(s_tilde(&self.inner).map_err(err)?.order_linear)
    }

    /// Classes of the partition model as `(S, T)` label lists.
    #[pyo3(signature = (sigma0 = false))]
    fn partition_classes(&self, sigma0: bool) -> Vec<(Vec<String>, Vec<String>)> {
        p_phi(&self.inner, sigma0)
            .classes
            .into_iter()
            .map(|c| (c.s, c.t))
            .collect()
    }

    fn alpha_image(&self) -> Vec<String> {
        let d = self.inner.char_dim();
        alpha_image(&self.inner, Variant::Sbar)
            .basis()
            .iter()
            .map(|&b| Gf2Vec::from_bits(b, d).to_string())
            .collect()
    }

    fn packet_stats(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        to_py(py, &packet_orbit_stats(&self.inner).map_err(err)?)
    }

    #[pyo3(signature = (theta_name = "id", max_weyl_order = DEFAULT_WEYL_BOUND))]
    fn ledger(&self, py: Python<'_>, theta_name: &str, max_weyl_order: u128) -> PyResult<Py<PyAny>> {
        let c = Constants::new(max_weyl_order);
        to_py(py, &check_ledger(&c, &self.inner, theta(theta_name)?, None).map_err(err)?)
    }
}

/// `i`, `e` and `σ` of a shape such as `"Sp2*O3'"`, as fraction strings.
#[pyfunction]
#[pyo3(signature = (shape, max_weyl_order = DEFAULT_WEYL_BOUND))]
fn constants(py: Python<'_>, shape: &str, max_weyl_order: u128) -> PyResult<Py<PyAny>> {
    let s: ReductiveShape = shape.parse().map_err(err)?;
    to_py(py, &shape_constants(&Constants::new(max_weyl_order), &s).map_err(err)?)
}

/// Elliptic endoscopic data of `Sp(2n)` or `SO(2n, η)` over the full
/// character universe of the length of `eta`, with their coefficients.
#[pyfunction]
#[pyo3(signature = (family, rank, eta, similitude = false, theta_name = "id"))]
fn elliptic_data(
    py: Python<'_>,
    family: &str,
    rank: usize,
    eta: &str,
    similitude: bool,
    theta_name: &str,
) -> PyResult<Py<PyAny>> {
    let eta = Gf2Vec::parse(eta).map_err(err)?;
    let d = eta.len();
    let g = match family {
        "Sp" => SimpleGroup::sp(rank, d),
        "SO" => SimpleGroup::so(rank, eta),
        _ => return Err(LpcombError::new_err("family must be 'Sp' or 'SO'")),
    };
    let g = GroupSpec::simple(g).with_similitude(similitude);
    let universe: Vec<Gf2Vec> = (0..1u64 << d).map(|b| Gf2Vec::from_bits(b, d)).collect();
    let mut out = Vec::new();
    for datum in enumerate_elliptic(&g, theta(theta_name)?, &universe).map_err(err)? {
        let iota = iota_full(&datum).ok().map(|v| fmt_q(&v));
        out.push(serde_json::json!({ "datum": datum.to_string(), "iota": iota }));
    }
    to_py(py, &out)
}

/// Runs the command line; returns `(exit_code, stdout, stderr)`.
#[pyfunction]
fn run_cli(args: Vec<String>) -> (i32, String, String) {
    let out = lpcomb::cli::run(std::iter::once("lpcomb".to_string()).chain(args));
    (out.code, out.stdout, out.stderr)
}

#[pymodule]
fn lpcomb_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyParameter>()?;
    m.add_function(wrap_pyfunction!(constants, m)?)?;
    m.add_function(wrap_pyfunction!(elliptic_data, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    m.add("LpcombError", m.py().get_type::<LpcombError>())?;
    m.add("__version__", lpcomb::cli::VERSION)?;
    Ok(())
}
