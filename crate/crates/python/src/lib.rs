//! Python bindings: `import tricoh`.
//!
//! Subsystems are named `"a"`, `"b"`, `"c"`; complex amplitudes are Python
//! `complex`. Library errors surface as `ValueError`.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use tricoh_core as core;
use tricoh_core::bench::BeamName;
use tricoh_core::{CoherenceVector, Subsystem};

fn err(e: core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn subsystem(name: &str) -> PyResult<Subsystem> {
    name.parse().map_err(err)
}

fn triple(v: CoherenceVector) -> (f64, f64, f64) {
    (v.sa, v.sb, v.sc)
}

fn checked(sa: f64, sb: f64, sc: f64) -> PyResult<CoherenceVector> {
    CoherenceVector::checked(sa, sb, sc).map_err(err)
}

/// Normalized three-qubit pure state; amplitude index is `4i + 2j + k`.
#[pyclass(name = "ThreeQubitState", frozen, module = "tricoh")]
struct PyState {
    inner: core::ThreeQubitState,
}

#[pymethods]
impl PyState {
    /// Eight amplitudes. With `normalize=False` the norm must already be 1.
    #[new]
    #[pyo3(signature = (amplitudes, normalize = false))]
    fn new(amplitudes: Vec<Complex64>, normalize: bool) -> PyResult<Self> {
        let amps: [Complex64; 8] = amplitudes.try_into().map_err(|v: Vec<_>| {
            PyValueError::new_err(format!("expected 8 amplitudes, got {}", v.len()))
        })?;
        Ok(PyState {
            inner: core::make_state(amps, normalize).map_err(err)?,
        })
    }

    #[staticmethod]
    fn basis(index: usize) -> PyResult<Self> {
        if index >= 8 {
            return Err(PyValueError::new_err("basis index must be below 8"));
        }
        Ok(PyState {
            inner: core::ThreeQubitState::basis(index),
        })
    }

    #[staticmethod]
    fn ghz() -> Self {
        PyState {
            inner: core::ThreeQubitState::ghz(),
        }
    }

    #[staticmethod]
    fn w() -> Self {
        PyState {
            inner: core::ThreeQubitState::w(),
        }
    }

    /// Haar-random state number `index` of `seed`.
    #[staticmethod]
    #[pyo3(signature = (seed, index = 0))]
    fn haar(seed: u64, index: u64) -> Self {
        PyState {
            inner: core::sampling::haar_state_at(seed, index),
        }
    }

    /// Output of the preparation bench for a named beam (E1..E6).
    #[staticmethod]
    fn from_recipe(name: &str) -> PyResult<Self> {
        let r = core::named_recipe(name).map_err(err)?;
        Ok(PyState {
            inner: core::run_pipeline(&r.pipeline).map_err(err)?,
        })
    }

    /// Parses a tricoh-state-v1 or tricoh-beam-v1 JSON document.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let input = core::io::parse_state(text).map_err(err)?;
        Ok(PyState {
            inner: input.to_state().map_err(err)?,
        })
    }

    fn to_json(&self) -> String {
        core::io::state_to_json(&self.inner)
    }

    fn amplitudes(&self) -> Vec<Complex64> {
        self.inner.amplitudes().to_vec()
    }

    fn fidelity(&self, other: &PyState) -> f64 {
        self.inner.fidelity(&other.inner)
    }

    /// 2x2 coherence matrix of one subsystem.
    fn reduced_matrix(&self, sub: &str) -> PyResult<Vec<Vec<Complex64>>> {
        let w = core::reduced_matrix(&self.inner, subsystem(sub)?);
        Ok(w.entries().iter().map(|row| row.to_vec()).collect())
    }

    /// Stokes vector `(s1, s2, s3)` of one subsystem.
    fn stokes(&self, sub: &str) -> PyResult<(f64, f64, f64)> {
        let s = core::stokes_vector(&core::reduced_matrix(&self.inner, subsystem(sub)?));
        Ok((s.s1, s.s2, s.s3))
    }

    /// `(S_a, S_b, S_c)`.
    fn separabilities(&self) -> PyResult<(f64, f64, f64)> {
        core::separabilities(&self.inner).map(triple).map_err(err)
    }

    /// Applies a 2x2 unitary to one subsystem.
    fn apply_local_unitary(&self, sub: &str, u: [[Complex64; 2]; 2]) -> PyResult<Self> {
        Ok(PyState {
            inner: core::apply_local_unitary(&self.inner, subsystem(sub)?, &u).map_err(err)?,
        })
    }

    fn __repr__(&self) -> String {
        let amps: Vec<String> = self
            .inner
            .amplitudes()
            .iter()
            .map(|z| format!("{:.4}{:+.4}j", z.re, z.im))
            .collect();
        format!("ThreeQubitState([{}])", amps.join(", "))
    }
}

/// Two-component beam: `alpha |x>|G_x>|F_x> + beta |y>|G_y>|F_y>`.
#[pyclass(name = "BeamParameters", frozen, module = "tricoh")]
struct PyBeam {
    inner: core::BeamParameters,
}

#[pymethods]
impl PyBeam {
    #[new]
    fn new(
        alpha: Complex64,
        beta: Complex64,
        gx: [Complex64; 2],
        gy: [Complex64; 2],
        fx: [Complex64; 2],
        fy: [Complex64; 2],
    ) -> PyResult<Self> {
        Ok(PyBeam {
            inner: core::BeamParameters::new(alpha, beta, gx, gy, fx, fy).map_err(err)?,
        })
    }

    fn to_state(&self) -> PyResult<PyState> {
        Ok(PyState {
            inner: core::beam_to_state(&self.inner).map_err(err)?,
        })
    }

    /// `(S_a, S_b, S_c)` from the overlaps `<G_x|G_y>` and `<F_x|F_y>`.
    fn closed_form_separabilities(&self) -> PyResult<(f64, f64, f64)> {
        core::closed_form_separabilities(&self.inner)
            .map(triple)
            .map_err(err)
    }
}

#[pyfunction]
fn separabilities(state: &PyState) -> PyResult<(f64, f64, f64)> {
    state.separabilities()
}

/// `(slack_a, slack_b, slack_c)` with `slack_x = 1 - (S_j + S_k - S_x)`.
#[pyfunction]
fn constraint_slacks(sa: f64, sb: f64, sc: f64) -> PyResult<(f64, f64, f64)> {
    let s = core::constraint_slacks(&checked(sa, sb, sc)?).map_err(err)?;
    Ok((s.slack_a, s.slack_b, s.slack_c))
}

/// `(C_a|bc, C_b|ca, C_c|ab)`.
#[pyfunction]
fn directed_coherences(sa: f64, sb: f64, sc: f64) -> PyResult<(f64, f64, f64)> {
    let d = core::directed_coherences(&checked(sa, sb, sc)?).map_err(err)?;
    Ok((d.c_a_bc, d.c_b_ca, d.c_c_ab))
}

#[pyfunction]
fn genuine_coherence(sa: f64, sb: f64, sc: f64) -> PyResult<f64> {
    core::genuine_coherence(&checked(sa, sb, sc)?).map_err(err)
}

/// Region label of a point of the unit cube.
#[pyfunction]
#[pyo3(signature = (sa, sb, sc, tol = core::geometry::BOUNDARY_TOL))]
fn classify_point(sa: f64, sb: f64, sc: f64, tol: f64) -> PyResult<&'static str> {
    core::classify_point(&checked(sa, sb, sc)?, tol)
        .map(|l| l.name())
        .map_err(err)
}

#[pyfunction]
fn cross_section_area(total: f64) -> PyResult<f64> {
    core::cross_section_area(total).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (n, seed, shards = 4))]
fn allowed_volume_mc(
    py: Python<'_>,
    n: u64,
    seed: u64,
    shards: usize,
) -> PyResult<Bound<'_, PyDict>> {
    let v = core::allowed_volume_mc(n, seed, shards).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("n", v.n)?;
    d.set_item("seed", v.seed)?;
    d.set_item("shards", v.shards)?;
    d.set_item("estimate", v.estimate)?;
    d.set_item("std_error", v.std_error)?;
    Ok(d)
}

/// OFF text of the allowed region.
#[pyfunction]
fn mesh_off() -> String {
    core::mesh_export().to_off()
}

#[pyfunction]
#[pyo3(signature = (n, seed, shards = 4, bins = 20))]
fn sweep(
    py: Python<'_>,
    n: u64,
    seed: u64,
    shards: usize,
    bins: usize,
) -> PyResult<Bound<'_, PyDict>> {
    let s = core::sweep(n, seed, shards, bins).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("n", s.n)?;
    d.set_item("seed", s.seed)?;
    d.set_item("shards", s.shards)?;
    d.set_item("violations", s.violations)?;
    d.set_item("min_slack", s.min_slack)?;
    d.set_item("max_c_abc", s.max_c_abc)?;
    d.set_item("min_c_abc", s.min_c_abc)?;
    d.set_item("histogram", s.histogram.counts)?;
    Ok(d)
}

/// Step-by-step check of `S_b + S_c <= 1 + S_a` for one state.
#[pyfunction]
#[pyo3(signature = (state, tol = 1e-9))]
fn verify_appendix<'py>(
    py: Python<'py>,
    state: &PyState,
    tol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let r = core::verify_appendix(&state.inner, tol);
    let d = PyDict::new(py);
    d.set_item("passed", r.passed())?;
    d.set_item("first_failure", r.checks.first_failure())?;
    d.set_item("degenerate", r.degenerate)?;
    d.set_item("normalization_residual", r.normalization_residual)?;
    d.set_item("orthogonality_residual", r.orthogonality_residual)?;
    d.set_item(
        "eigenvalue_identity_residuals",
        r.eigenvalue_identity_residuals.to_vec(),
    )?;
    d.set_item("sum_bc", r.sum_bc)?;
    d.set_item("final_bound", r.final_bound)?;
    d.set_item("one_plus_sa", r.one_plus_sa)?;
    Ok(d)
}

fn settings(shots: u64, noise: &str, seed: u64) -> PyResult<core::TomographySettings> {
    let t = core::TomographySettings {
        shots,
        noise: noise.parse().map_err(err)?,
        seed,
    };
    t.validate().map_err(err)?;
    Ok(t)
}

/// Probability of outcome `sign` (+1 or -1) for a Pauli `axis` on `sub`.
#[pyfunction]
fn simulate_projection(state: &PyState, sub: &str, axis: &str, sign: i32) -> PyResult<f64> {
    let axis = match axis {
        "x" => core::PauliAxis::X,
        "y" => core::PauliAxis::Y,
        "z" => core::PauliAxis::Z,
        _ => return Err(PyValueError::new_err("axis must be 'x', 'y' or 'z'")),
    };
    let sign = match sign {
        1 => core::Sign::Plus,
        -1 => core::Sign::Minus,
        _ => return Err(PyValueError::new_err("sign must be +1 or -1")),
    };
    Ok(core::simulate_projection(
        &state.inner,
        subsystem(sub)?,
        axis,
        sign,
    ))
}

/// Per-subsystem Stokes estimates, separabilities and standard errors.
#[pyfunction]
#[pyo3(signature = (state, shots = 10_000, noise = "none", seed = 0))]
fn tomography<'py>(
    py: Python<'py>,
    state: &PyState,
    shots: u64,
    noise: &str,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let r = core::tomography(&state.inner, &settings(shots, noise, seed)?).map_err(err)?;
    let out = PyDict::new(py);
    for e in &r.subsystems {
        let d = PyDict::new(py);
        d.set_item("stokes", e.stokes.as_array().to_vec())?;
        d.set_item("separability", e.separability)?;
        d.set_item("raw_separability", e.raw_separability)?;
        d.set_item("clamped", e.clamped)?;
        d.set_item("std_error", e.std_error)?;
        out.set_item(e.sub.label(), d)?;
    }
    Ok(out)
}

/// The six-beam table as CSV text.
#[pyfunction]
#[pyo3(signature = (shots = 10_000, noise = "none", seed = 0))]
fn reproduce_table(shots: u64, noise: &str, seed: u64) -> PyResult<String> {
    Ok(core::reproduce_table(&settings(shots, noise, seed)?)
        .map_err(err)?
        .to_csv())
}

/// Names of the bench recipes.
#[pyfunction]
fn recipe_names() -> Vec<&'static str> {
    BeamName::ALL.iter().map(|b| b.as_str()).collect()
}

#[pymodule]
fn tricoh(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", core::VERSION)?;
    m.add_class::<PyState>()?;
    m.add_class::<PyBeam>()?;
    m.add_function(wrap_pyfunction!(separabilities, m)?)?;
    m.add_function(wrap_pyfunction!(constraint_slacks, m)?)?;
    m.add_function(wrap_pyfunction!(directed_coherences, m)?)?;
    m.add_function(wrap_pyfunction!(genuine_coherence, m)?)?;
    m.add_function(wrap_pyfunction!(classify_point, m)?)?;
    m.add_function(wrap_pyfunction!(cross_section_area, m)?)?;
    m.add_function(wrap_pyfunction!(allowed_volume_mc, m)?)?;
    m.add_function(wrap_pyfunction!(mesh_off, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    m.add_function(wrap_pyfunction!(verify_appendix, m)?)?;
    m.add_function(wrap_pyfunction!(simulate_projection, m)?)?;
    m.add_function(wrap_pyfunction!(tomography, m)?)?;
    m.add_function(wrap_pyfunction!(reproduce_table, m)?)?;
    m.add_function(wrap_pyfunction!(recipe_names, m)?)?;
    Ok(())
}
