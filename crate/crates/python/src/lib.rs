//! Python bindings: quantile models and their equality curves, empirical
//! indices, income transfers and the model index table.

use median_inequality as mi;
use mi::transfer::{self, Direction, Transfer};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(medineq, MedianInequalityError, PyValueError);

fn py_err(e: mi::Error) -> PyErr {
    MedianInequalityError::new_err(e.to_string())
}

fn strategy(k: u32) -> PyResult<mi::Strategy> {
    mi::Strategy::from_index(k).map_err(py_err)
}

fn quadrature(panels: Option<usize>, nodes: Option<usize>) -> PyResult<mi::QuadratureConfig> {
    let d = mi::QuadratureConfig::default();
    mi::QuadratureConfig::new(panels.unwrap_or(d.panels), nodes.unwrap_or(d.nodes)).map_err(py_err)
}

fn direction_name(d: Option<Direction>) -> Option<&'static str> {
    d.map(|d| match d {
        Direction::Decrease => "decrease",
        Direction::Unchanged => "unchanged",
        Direction::Increase => "increase",
    })
}

/// Parametric income distribution given by its quantile function.
#[pyclass(name = "QuantileModel", module = "medineq", frozen)]
struct PyQuantileModel {
    inner: mi::QuantileModel,
}

#[pymethods]
impl PyQuantileModel {
    /// Parses `family:name=value,...`, e.g. `lognormal:mu=0,sigma=1`.
    #[new]
    fn new(spec: &str) -> PyResult<Self> {
        Ok(Self {
            inner: spec.parse().map_err(py_err)?,
        })
    }

    #[getter]
    fn family(&self) -> &'static str {
        self.inner.family().name()
    }

    #[getter]
    fn params<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let d = PyDict::new(py);
        for (name, value) in self.inner.params() {
            d.set_item(name, value)?;
        }
        Ok(d)
    }

    fn quantile(&self, p: f64) -> PyResult<f64> {
        self.inner.quantile(p).map_err(py_err)
    }

    /// Equality curve ψ_k(p).
    fn psi(&self, k: u32, p: f64) -> PyResult<f64> {
        mi::psi(&self.inner, strategy(k)?, p).map_err(py_err)
    }

    /// Index Ψ_k = 1 - ∫ψ_k.
    #[pyo3(signature = (k, panels=None, nodes=None))]
    fn psi_index(&self, k: u32, panels: Option<usize>, nodes: Option<usize>) -> PyResult<f64> {
        mi::psi_index(&self.inner, strategy(k)?, &quadrature(panels, nodes)?).map_err(py_err)
    }

    /// `(p, psi_k(p))` pairs on an equally spaced open grid.
    #[pyo3(signature = (k, n_points=1000))]
    fn curve(&self, k: u32, n_points: usize) -> PyResult<Vec<(f64, f64)>> {
        Ok(mi::curve_samples(&self.inner, strategy(k)?, n_points).map_err(py_err)?.points)
    }

    fn __repr__(&self) -> String {
        format!("QuantileModel('{}')", self.inner.spec_string())
    }

    fn __str__(&self) -> String {
        self.inner.label()
    }
}

/// Ordered non-negative income sample.
#[pyclass(name = "Sample", module = "medineq", frozen)]
struct PySample {
    inner: mi::Sample,
}

#[pymethods]
impl PySample {
    #[new]
    fn new(values: Vec<f64>) -> PyResult<Self> {
        Ok(Self {
            inner: mi::Sample::new(values).map_err(py_err)?,
        })
    }

    #[getter]
    fn values(&self) -> Vec<f64> {
        self.inner.values().to_vec()
    }

    #[getter]
    fn median_rank(&self) -> usize {
        self.inner.median_rank()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn psi(&self, k: u32) -> PyResult<f64> {
        mi::psi_n(&self.inner, strategy(k)?).map_err(py_err)
    }

    fn gini(&self) -> PyResult<f64> {
        mi::gini_n(&self.inner).map_err(py_err)
    }

    /// All seven indices plus mean, median and counts.
    #[pyo3(signature = (n_total=None))]
    fn report<'py>(&self, py: Python<'py>, n_total: Option<usize>) -> PyResult<Bound<'py, PyDict>> {
        let r = mi::full_report(&self.inner, n_total.unwrap_or(self.inner.len())).map_err(py_err)?;
        let d = PyDict::new(py);
        d.set_item("mean", r.mean)?;
        d.set_item("median", r.median)?;
        d.set_item("n_T", r.n_total)?;
        d.set_item("n_P", r.n_positive)?;
        for (key, v) in [
            ("G", r.gini),
            ("Z", r.zenga),
            ("D", r.dg),
            ("G2", r.g2),
            ("Psi1", r.psi1),
            ("Psi2", r.psi2),
            ("Psi3", r.psi3),
        ] {
            d.set_item(key, v)?;
        }
        Ok(d)
    }

    /// `struggling`, `median` or `well_off`.
    fn classify(&self, rank: usize) -> PyResult<String> {
        Ok(transfer::classify(&self.inner, rank).map_err(py_err)?.to_string())
    }

    /// Supremum of amounts that keep the income order for L <-c- H.
    fn max_admissible(&self, receiver: usize, giver: usize) -> PyResult<f64> {
        transfer::max_admissible(&self.inner, receiver, giver).map_err(py_err)
    }

    fn threshold_c2(&self, receiver: usize, giver: usize) -> PyResult<f64> {
        transfer::threshold_c2(&self.inner, receiver, giver).map_err(py_err)
    }

    fn apply_transfer(&self, receiver: usize, giver: usize, amount: f64) -> PyResult<PySample> {
        let t = Transfer::new(receiver, giver, amount).map_err(py_err)?;
        Ok(PySample {
            inner: transfer::apply_transfer(&self.inner, &t).map_err(py_err)?,
        })
    }

    /// Predicted direction of Ψ_k under the transfer, without recomputing.
    fn predict_effect(&self, k: u32, receiver: usize, giver: usize, amount: f64) -> PyResult<&'static str> {
        let t = Transfer::new(receiver, giver, amount).map_err(py_err)?;
        let d = transfer::predict_effect(&self.inner, strategy(k)?, &t).map_err(py_err)?;
        Ok(direction_name(Some(d)).unwrap())
    }

    /// Runs `(L, H, c)` steps in order; one dict per step.
    fn run_plan<'py>(&self, py: Python<'py>, steps: Vec<(usize, usize, f64)>) -> PyResult<Vec<Bound<'py, PyDict>>> {
        let plan = steps
            .into_iter()
            .map(|(l, h, c)| Transfer::new(l, h, c))
            .collect::<mi::Result<Vec<_>>>()
            .map_err(py_err)?;
        let executed = transfer::run_plan(&self.inner, &plan).map_err(py_err)?;
        executed
            .into_iter()
            .map(|st| {
                let d = PyDict::new(py);
                d.set_item("step", st.step)?;
                d.set_item("values", st.sample.values().to_vec())?;
                d.set_item("psi", st.psi.to_vec())?;
                d.set_item("predicted", st.predicted.map(direction_name).to_vec())?;
                d.set_item("observed", st.observed.map(|o| direction_name(Some(o))).to_vec())?;
                Ok(d)
            })
            .collect()
    }

    fn __repr__(&self) -> String {
        format!("Sample({:?})", self.inner.values())
    }
}

/// Ψ1..Ψ3 and ranks for the sixteen reference models.
#[pyfunction]
#[pyo3(signature = (panels=None, nodes=None))]
fn table1(py: Python<'_>, panels: Option<usize>, nodes: Option<usize>) -> PyResult<Vec<Bound<'_, PyDict>>> {
    let rows = mi::index_table(&mi::reference_catalog(), &quadrature(panels, nodes)?).map_err(py_err)?;
    rows.into_iter()
        .map(|row| {
            let d = PyDict::new(py);
            d.set_item("label", row.label)?;
            d.set_item("psi", row.psi.to_vec())?;
            d.set_item("ranks", row.ranks.map(|r| r.to_string()).to_vec())?;
            Ok(d)
        })
        .collect()
}

#[pymodule]
fn medineq(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyQuantileModel>()?;
    m.add_class::<PySample>()?;
    m.add_function(wrap_pyfunction!(table1, m)?)?;
    m.add("MedianInequalityError", m.py().get_type::<MedianInequalityError>())?;
    Ok(())
}
