//! Python bindings. Reports come back as plain dicts with the same field
//! order and encoding as the CLI's JSON output.

#[pyo3::pymodule(name = "container_lab")]
mod container_lab_py {
    use container_lab::containers::{self, ContainerParams};
    use container_lab::enumeration;
    use container_lab::families::{self, KFamily};
    use container_lab::isoperimetry::{self, IsoMode};
    use container_lab::{combinatorics, report, verify, BigCount, Error, LayerGraph, LayerGraphParams, SubsetWord};
    use num_bigint::BigUint;
    use pyo3::exceptions::{PyOverflowError, PyRuntimeError, PyValueError};
    use pyo3::prelude::*;
    use serde::Serialize;

    fn to_py(e: Error) -> PyErr {
        match e {
            Error::CapExceeded { .. } => PyOverflowError::new_err(e.to_string()),
            Error::Violation { .. } | Error::T0NotFound { .. } | Error::NoConvergence { .. } | Error::Io(_) => {
                PyRuntimeError::new_err(e.to_string())
            }
            _ => PyValueError::new_err(e.to_string()),
        }
    }

    /// Serializes through the report layer and parses with Python's `json`.
    fn to_dict<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
        let text = report::to_json(value).map_err(to_py)?;
        py.import("json")?.call_method1("loads", (text,))
    }

    fn family(members: Vec<Vec<u32>>, n: u32, k: u32) -> PyResult<KFamily> {
        let sets = members
            .into_iter()
            .map(SubsetWord::from_elements)
            .collect::<Result<Vec<_>, _>>()
            .map_err(to_py)?;
        KFamily::new(n, k, sets).map_err(to_py)
    }

    /// Number of intersecting families of k-subsets of [n].
    #[pyfunction]
    #[pyo3(signature = (n, k, workers = 1))]
    fn count_intersecting(n: u32, k: u32, workers: usize) -> PyResult<BigUint> {
        Ok(enumeration::count_intersecting(n, k, workers).map_err(to_py)?.total)
    }

    /// Full count report: total, trivial and nontrivial counts.
    #[pyfunction]
    #[pyo3(signature = (n, k, workers = 1))]
    fn count_report<'py>(py: Python<'py>, n: u32, k: u32, workers: usize) -> PyResult<Bound<'py, PyAny>> {
        to_dict(py, &enumeration::count_intersecting(n, k, workers).map_err(to_py)?)
    }

    #[pyfunction]
    fn maximal_profile<'py>(py: Python<'py>, n: u32, k: u32) -> PyResult<Bound<'py, PyAny>> {
        to_dict(py, &enumeration::maximal_profile(n, k).map_err(to_py)?)
    }

    /// The encoding of an intersecting family: `(f, A, B, independent)`.
    #[pyfunction]
    fn phi_map(members: Vec<Vec<u32>>, n: u32, k: u32) -> PyResult<(u32, Vec<Vec<u32>>, Vec<Vec<u32>>, bool)> {
        let image = families::phi_map(&family(members, n, k)?).map_err(to_py)?;
        let lists = |sets: &[SubsetWord]| sets.iter().map(|s| s.elements().collect()).collect();
        Ok((image.f, lists(&image.a), lists(&image.b), image.is_independent()))
    }

    #[pyfunction]
    fn shadow_size(members: Vec<Vec<u32>>, target: u32) -> PyResult<BigCount> {
        let sets = members
            .into_iter()
            .map(SubsetWord::from_elements)
            .collect::<Result<Vec<_>, _>>()
            .map_err(to_py)?;
        isoperimetry::shadow_size(&sets, target).map_err(to_py)
    }

    #[pyfunction]
    fn lovasz_bound(size: f64, m: u32, target: u32) -> PyResult<f64> {
        isoperimetry::lovasz_bound(size, m, target).map_err(to_py)
    }

    /// The real `x >= m - 1` with `C(x, m) = target`.
    #[pyfunction]
    fn real_binomial_root(m: u32, target: f64) -> PyResult<f64> {
        combinatorics::real_binomial_root(m, target).map_err(to_py)
    }

    #[pyfunction]
    #[pyo3(signature = (n, k, r, mode = "exhaustive", workers = 1))]
    fn isoperimetry_report<'py>(
        py: Python<'py>,
        n: u32,
        k: u32,
        r: u32,
        mode: &str,
        workers: usize,
    ) -> PyResult<Bound<'py, PyAny>> {
        let mode = match mode {
            "exhaustive" => IsoMode::Exhaustive,
            "colex" => IsoMode::Colex,
            other => return Err(PyValueError::new_err(format!("unknown mode {other:?}"))),
        };
        let params = LayerGraphParams::new(n, k, r).map_err(to_py)?;
        to_dict(py, &isoperimetry::verify_isoperimetry(params, mode, workers).map_err(to_py)?)
    }

    /// Container families of `H(n, k, r)` for every feasible `(a, g)`.
    #[pyfunction]
    #[pyo3(signature = (n, k, r, phi = 1, psi = 1, big_c = 1.0, seed = 0, workers = 1))]
    #[allow(clippy::too_many_arguments)]
    fn container_families<'py>(
        py: Python<'py>,
        n: u32,
        k: u32,
        r: u32,
        phi: u32,
        psi: u32,
        big_c: f64,
        seed: u64,
        workers: usize,
    ) -> PyResult<Bound<'py, PyAny>> {
        let graph = LayerGraph::new(LayerGraphParams::new(n, k, r).map_err(to_py)?).map_err(to_py)?;
        let params = ContainerParams {
            big_c,
            ..ContainerParams::new(phi, psi).with_seed(seed)
        };
        to_dict(py, &containers::container_families(&graph, params, workers).map_err(to_py)?)
    }

    /// Natural logs of both container-count bounds for `H(2k+r, k, r)`.
    #[pyfunction]
    #[allow(clippy::too_many_arguments)]
    fn theorem_bounds<'py>(
        py: Python<'py>,
        a: u64,
        g: u64,
        k: u32,
        r: u32,
        phi: f64,
        psi: f64,
        big_c: f64,
        m_phi: f64,
    ) -> PyResult<Bound<'py, PyAny>> {
        to_dict(py, &containers::theorem_bounds(a, g, k, r, phi, psi, big_c, m_phi).map_err(to_py)?)
    }

    #[pyfunction]
    #[pyo3(signature = (workers = 1))]
    fn verify_all<'py>(py: Python<'py>, workers: usize) -> PyResult<Bound<'py, PyAny>> {
        to_dict(py, &verify::verify_all(workers))
    }
}
