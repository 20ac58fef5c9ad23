//! Python bindings: `import blochmaps`.

use blochmaps::bloch::{apply_map, from_density, is_positive_map, to_density, AffineBlochMap, BlochVector};
use blochmaps::cp::{self, DecayRates};
use blochmaps::markov::{self, BlochParams, LindbladGenerator};
use blochmaps::nonmarkov::{self, DephasingChannel, RtsParams};
use blochmaps::separability;
use blochmaps::stochastic::{self, NoiseKind, NoiseSpec};
use blochmaps::{CMat2, C64};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

type Matrix = Vec<Vec<C64>>;

fn err(e: blochmaps::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn rows(m: &CMat2) -> Matrix {
    m.0.iter().map(|r| r.to_vec()).collect()
}

fn bloch(b: [f64; 3]) -> BlochVector {
    BlochVector::from_array(b)
}

/// Verdict of a complete-positivity test.
#[pyclass(frozen, get_all, name = "CpVerdict")]
struct PyCpVerdict {
    is_positive: bool,
    is_completely_positive: bool,
    /// 1-based index of the first violated inequality.
    violated_inequality: Option<usize>,
    choi_min_eigenvalue: f64,
}

impl From<cp::CpVerdict> for PyCpVerdict {
    fn from(v: cp::CpVerdict) -> Self {
        PyCpVerdict {
            is_positive: v.is_positive,
            is_completely_positive: v.is_completely_positive,
            violated_inequality: v.violated_inequality,
            choi_min_eigenvalue: v.choi_min_eigenvalue,
        }
    }
}

#[pymethods]
impl PyCpVerdict {
    fn __repr__(&self) -> String {
        format!(
            "CpVerdict(is_positive={}, is_completely_positive={}, violated_inequality={:?}, choi_min_eigenvalue={})",
            self.is_positive, self.is_completely_positive, self.violated_inequality, self.choi_min_eigenvalue
        )
    }
}

/// Affine Bloch map `b ↦ diag(Λ) b + t`.
#[pyclass(frozen, name = "BlochMap")]
struct PyBlochMap(AffineBlochMap);

#[pymethods]
impl PyBlochMap {
    #[new]
    #[pyo3(signature = (lam, translation = [0.0; 3]))]
    fn new(lam: [f64; 3], translation: [f64; 3]) -> Self {
        PyBlochMap(AffineBlochMap::new(lam, translation))
    }

    #[getter]
    fn lam(&self) -> [f64; 3] {
        self.0.lambda
    }

    #[getter]
    fn translation(&self) -> [f64; 3] {
        self.0.translation
    }

    fn apply(&self, b: [f64; 3]) -> [f64; 3] {
        apply_map(&self.0, bloch(b)).to_array()
    }

    /// Applies the map to a density matrix given as Bloch vector.
    fn apply_density(&self, b: [f64; 3]) -> PyResult<Matrix> {
        let rho = to_density(bloch(b)).map_err(err)?;
        Ok(rows(&self.0.superoperator().apply(rho.matrix())))
    }

    /// Real 4×4 matrix on Pauli coefficients.
    fn superoperator(&self) -> [[f64; 4]; 4] {
        self.0.superoperator().0
    }

    fn is_positive(&self) -> bool {
        is_positive_map(&self.0).is_positive
    }

    fn choi_test(&self) -> PyCpVerdict {
        cp::choi_test(&self.0).into()
    }

    fn choi_matrix(&self) -> Matrix {
        cp::choi_matrix(&self.0.superoperator()).0.iter().map(|r| r.to_vec()).collect()
    }

    /// Kraus operators; fails for maps that are not completely positive.
    fn kraus(&self) -> PyResult<Vec<Matrix>> {
        let set = if self.0.is_unital() {
            cp::unital_kraus(self.0.lambda)
        } else {
            cp::kraus_from_choi(&self.0)
        }
        .map_err(err)?;
        Ok(set.operators.iter().map(rows).collect())
    }

    fn __repr__(&self) -> String {
        format!("BlochMap(lam={:?}, translation={:?})", self.0.lambda, self.0.translation)
    }
}

/// Spectral solution of a time-independent generator.
#[pyclass(frozen, name = "DampingBasis")]
struct PyDampingBasis(markov::DampingBasis);

#[pymethods]
impl PyDampingBasis {
    /// Basis of the Bloch equations with drive `rabi`, `detuning` and the
    /// decay `rates = (1/T_u, 1/T_v, 1/T_w)`.
    #[new]
    #[pyo3(signature = (rates, rabi = 0.0, detuning = 0.0))]
    fn new(rates: [f64; 3], rabi: f64, detuning: f64) -> PyResult<Self> {
        let p = BlochParams::new(rabi, detuning, DecayRates::from_array(rates), 0.0).map_err(err)?;
        let g = LindbladGenerator::from_bloch_params(&p).map_err(err)?;
        markov::damping_basis(&g).map(PyDampingBasis).map_err(err)
    }

    /// Pure dephasing `−D[σ_z, [σ_z, ρ]]`.
    #[staticmethod]
    fn dephasing(d: f64) -> PyResult<Self> {
        let g = LindbladGenerator::dephasing(d).map_err(err)?;
        markov::damping_basis(&g).map(PyDampingBasis).map_err(err)
    }

    #[getter]
    fn eigenvalues(&self) -> Vec<C64> {
        self.0.eigenvalues().to_vec()
    }

    #[getter]
    fn right(&self) -> Vec<Matrix> {
        self.0.right().iter().map(rows).collect()
    }

    #[getter]
    fn left(&self) -> Vec<Matrix> {
        self.0.left().iter().map(rows).collect()
    }

    fn duality_defect(&self) -> f64 {
        self.0.duality_defect()
    }

    fn transfer_matrix(&self, t: f64) -> [[f64; 4]; 4] {
        self.0.transfer_matrix(t).0
    }

    fn evolve(&self, b0: [f64; 3], t: f64) -> PyResult<[f64; 3]> {
        let rho0 = to_density(bloch(b0)).map_err(err)?;
        let rho = markov::evolve_by_damping_basis(&self.0, &rho0, t).map_err(err)?;
        from_density(&rho).map(BlochVector::to_array).map_err(err)
    }
}

/// Telegraph-noise dephasing with amplitude `a` and correlation time `tau`.
#[pyclass(frozen, name = "TelegraphChannel")]
struct PyTelegraph(RtsParams);

#[pymethods]
impl PyTelegraph {
    #[new]
    fn new(a: f64, tau: f64) -> PyResult<Self> {
        RtsParams::new(a, tau).map(PyTelegraph).map_err(err)
    }

    /// Channel with the same white-noise limit `gamma = 4 a² τ`.
    #[staticmethod]
    fn with_white_noise_rate(gamma: f64, tau: f64) -> PyResult<Self> {
        RtsParams::with_white_noise_rate(gamma, tau).map(PyTelegraph).map_err(err)
    }

    #[getter]
    fn a(&self) -> f64 {
        self.0.a
    }

    #[getter]
    fn tau(&self) -> f64 {
        self.0.tau
    }

    #[getter]
    fn regime(&self) -> String {
        nonmarkov::regime(&self.0).to_string()
    }

    fn lam(&self, t: f64) -> PyResult<f64> {
        nonmarkov::rts_lambda(&self.0, t).map_err(err)
    }

    fn map(&self, t: f64) -> PyResult<PyBlochMap> {
        nonmarkov::rts_map(&self.0, t).map(|(m, _)| PyBlochMap(m)).map_err(err)
    }

    fn separability_times(&self, t_max: f64) -> PyResult<Vec<f64>> {
        separability::separability_times(&DephasingChannel::Rts(self.0), t_max).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("TelegraphChannel(a={}, tau={})", self.0.a, self.0.tau)
    }
}

#[pyfunction]
fn bloch_inequalities(lam: [f64; 3]) -> PyCpVerdict {
    cp::bloch_inequalities(lam).into()
}

#[pyfunction]
fn lifetime_inequalities(rates: [f64; 3]) -> PyResult<bool> {
    cp::lifetime_inequalities(DecayRates::from_array(rates)).map_err(err)
}

/// Fraction of an `n³` grid of the cube `[−1, 1]³` that is completely positive.
#[pyfunction]
fn cp_fraction(n: usize) -> PyResult<f64> {
    let pts = cp::tetrahedron_sample(n).map_err(err)?;
    Ok(pts.iter().filter(|p| p.verdict.is_completely_positive).count() as f64 / pts.len() as f64)
}

/// Integrates the Bloch equations; returns `(times, states)`.
#[pyfunction]
#[pyo3(signature = (rates, b0, t_end, dt, rabi = 0.0, detuning = 0.0, w_eq = 0.0))]
fn integrate_bloch(
    rates: [f64; 3],
    b0: [f64; 3],
    t_end: f64,
    dt: f64,
    rabi: f64,
    detuning: f64,
    w_eq: f64,
) -> PyResult<(Vec<f64>, Vec<[f64; 3]>)> {
    let p = BlochParams::new(rabi, detuning, DecayRates::from_array(rates), w_eq).map_err(err)?;
    let trace = markov::integrate_bloch(&p, bloch(b0), t_end, dt).map_err(err)?;
    Ok((trace.times, trace.states.into_iter().map(BlochVector::to_array).collect()))
}

#[pyfunction]
fn white_noise_lambda(gamma: f64, t: f64) -> PyResult<f64> {
    nonmarkov::white_noise_limit(gamma, t).map_err(err)
}

/// Ascending spectrum of the partially transposed Bell pair after the map
/// acts on one qubit.
#[pyfunction]
fn peres_eigenvalues(m: &PyBlochMap) -> [f64; 4] {
    separability::peres_eigenvalues(&m.0).values
}

/// Monte Carlo ensemble. `noise` is `"telegraph"` (uses `a`, `tau`) or
/// `"gaussian"` (uses `gammas`). Returns a dict with `times`, `mean`, `se`.
#[pyfunction]
#[pyo3(signature = (noise, b0, t_end, dt, n_traj, seed = 0, a = 1.0, tau = 1.0, gammas = [1.0; 3]))]
#[allow(clippy::too_many_arguments)]
fn ensemble_average<'py>(
    py: Python<'py>,
    noise: &str,
    b0: [f64; 3],
    t_end: f64,
    dt: f64,
    n_traj: usize,
    seed: u64,
    a: f64,
    tau: f64,
    gammas: [f64; 3],
) -> PyResult<Bound<'py, PyDict>> {
    let kind = match noise {
        "telegraph" => NoiseKind::Telegraph { a, tau },
        "gaussian" => NoiseKind::GaussianWhite { gammas },
        other => return Err(PyValueError::new_err(format!("unknown noise kind {other:?}"))),
    };
    let spec = NoiseSpec { kind, seed };
    let ens = py
        .detach(|| stochastic::ensemble_average(&spec, bloch(b0), t_end, dt, n_traj))
        .map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("times", ens.times)?;
    out.set_item("mean", ens.mean.into_iter().map(BlochVector::to_array).collect::<Vec<_>>())?;
    out.set_item("se", ens.se)?;
    out.set_item("n_traj", ens.n_traj)?;
    Ok(out)
}

#[pymodule]
#[pyo3(name = "blochmaps")]
fn blochmaps_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCpVerdict>()?;
    m.add_class::<PyBlochMap>()?;
    m.add_class::<PyDampingBasis>()?;
    m.add_class::<PyTelegraph>()?;
    m.add_function(wrap_pyfunction!(bloch_inequalities, m)?)?;
    m.add_function(wrap_pyfunction!(lifetime_inequalities, m)?)?;
    m.add_function(wrap_pyfunction!(cp_fraction, m)?)?;
    m.add_function(wrap_pyfunction!(integrate_bloch, m)?)?;
    m.add_function(wrap_pyfunction!(white_noise_lambda, m)?)?;
    m.add_function(wrap_pyfunction!(peres_eigenvalues, m)?)?;
    m.add_function(wrap_pyfunction!(ensemble_average, m)?)?;
    Ok(())
}
