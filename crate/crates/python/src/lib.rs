use std::f64::consts::PI;

use macroscopality::scenarios::{
    self, MoleculeParams, PhysicalConstants, ScenarioResult, SquidParams,
};
use macroscopality::states::{self, CoherentCatParams, QubitAngles};
use macroscopality::{Criterion, DiscreteSpectrum, GridDensity, Spectrum, WidthKind};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(macroscopality, MacroscopalityError, PyValueError);

fn err(e: macroscopality::Error) -> PyErr {
    MacroscopalityError::new_err(format!("{}: {e}", e.name()))
}

fn criterion(kind: &str, level: Option<f64>, tol_zero: Option<f64>) -> PyResult<Criterion> {
    let c = match (kind, level, tol_zero) {
        ("auto", None, None) => Criterion::Auto,
        ("threshold", level, None) => Criterion::Threshold {
            level: level.unwrap_or(macroscopality::orthogonality::DEFAULT_LEVEL),
        },
        ("first-zero" | "first_zero", None, tol) => Criterion::FirstZero {
            tol_zero: tol.unwrap_or(macroscopality::orthogonality::DEFAULT_TOL_ZERO),
        },
        _ => {
            return Err(PyValueError::new_err(format!(
                "criterion {kind:?} with level={level:?}, tol_zero={tol_zero:?}"
            )))
        }
    };
    c.validate().map_err(err)?;
    Ok(c)
}

fn width_kind(name: &str) -> PyResult<WidthKind> {
    name.parse().map_err(err)
}

/// Eigenvalue distribution of a state over its preferred observable.
#[pyclass(name = "Spectrum", frozen, module = "macroscopality")]
struct PySpectrum(Spectrum);

#[pymethods]
impl PySpectrum {
    /// Weights are normalized on construction.
    #[staticmethod]
    fn discrete(points: Vec<(f64, f64)>) -> PyResult<Self> {
        Ok(Self(
            DiscreteSpectrum::from_unnormalized(points)
                .map_err(err)?
                .into(),
        ))
    }

    /// Samples of a density on a uniform grid from `a_min` to `a_max`.
    #[staticmethod]
    fn density(a_min: f64, a_max: f64, values: Vec<f64>) -> PyResult<Self> {
        Ok(Self(
            GridDensity::from_unnormalized(a_min, a_max, values)
                .map_err(err)?
                .into(),
        ))
    }

    #[staticmethod]
    fn fock_cat(n: u32) -> PyResult<Self> {
        Ok(Self(states::fock_cat_spectrum(n).map_err(err)?))
    }

    #[staticmethod]
    #[pyo3(signature = (mean, sigma))]
    fn gaussian(mean: f64, sigma: f64) -> PyResult<Self> {
        Ok(Self(
            states::gaussian_density(mean, sigma, None).map_err(err)?,
        ))
    }

    #[staticmethod]
    #[pyo3(signature = (n, eps, phi = PI / 4.0))]
    fn qubit_superposition(n: u32, eps: f64, phi: f64) -> PyResult<Self> {
        let p = QubitAngles::new(phi, eps, n).map_err(err)?;
        Ok(Self(states::qubit_superposition_spectrum(&p).map_err(err)?))
    }

    /// Quadrature density of the coherent cat.
    #[staticmethod]
    fn coherent_cat(alpha: f64, phi: f64) -> PyResult<Self> {
        let p = CoherentCatParams::new(alpha, phi).map_err(err)?;
        Ok(Self(
            states::coherent_cat_quadrature_density(&p, None).map_err(err)?,
        ))
    }

    fn char_magnitude(&self, theta: f64) -> f64 {
        self.0.char_magnitude(theta)
    }

    /// `(thetas, magnitudes)` on `n_points` equally spaced angles from zero.
    fn scan_overlap(&self, theta_max: f64, n_points: usize) -> PyResult<(Vec<f64>, Vec<f64>)> {
        let curve = self.0.scan_overlap(theta_max, n_points).map_err(err)?;
        Ok((curve.thetas().to_vec(), curve.magnitudes().to_vec()))
    }

    /// `(mean, stddev)`
    fn moments(&self) -> (f64, f64) {
        self.0.moments()
    }

    fn fwhm(&self) -> PyResult<f64> {
        self.0.fwhm().map_err(err)
    }

    /// `(a1, a2, width)` of the two dominant peaks.
    fn detect_peaks(&self) -> PyResult<(f64, f64, f64)> {
        let p = self.0.detect_peaks().map_err(err)?;
        Ok((p.a1, p.a2, p.width))
    }

    fn translated(&self, shift: f64) -> PyResult<Self> {
        Ok(Self(self.0.translated(shift).map_err(err)?))
    }

    fn scaled(&self, factor: f64) -> PyResult<Self> {
        Ok(Self(self.0.scaled(factor).map_err(err)?))
    }

    fn is_discrete(&self) -> bool {
        matches!(self.0, Spectrum::Discrete(_))
    }

    fn __repr__(&self) -> String {
        let (mean, sd) = self.0.moments();
        let kind = if self.is_discrete() {
            "discrete"
        } else {
            "density"
        };
        format!("Spectrum({kind}, mean={mean}, stddev={sd})")
    }
}

#[pyfunction]
fn bimodal_compose(kernel: &PySpectrum, a1: f64, a2: f64) -> PyResult<PySpectrum> {
    Ok(PySpectrum(
        macroscopality::bimodal_compose(&kernel.0, a1, a2).map_err(err)?,
    ))
}

#[pyfunction]
#[pyo3(signature = (spectrum, criterion = "auto", level = None, tol_zero = None, theta_max = None))]
fn first_orthogonality<'py>(
    py: Python<'py>,
    spectrum: &PySpectrum,
    criterion: &str,
    level: Option<f64>,
    tol_zero: Option<f64>,
    theta_max: Option<f64>,
) -> PyResult<Bound<'py, PyDict>> {
    let c = self::criterion(criterion, level, tol_zero)?;
    let r = macroscopality::first_orthogonality(&spectrum.0, c, theta_max).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("theta_star", r.theta_star)?;
    d.set_item("criterion_used", r.criterion_used.to_string())?;
    d.set_item("overlap_at_theta", r.overlap_at_theta)?;
    Ok(d)
}

#[pyfunction]
#[pyo3(name = "macroscopality", signature = (sup, reference, criterion = "auto", level = None, tol_zero = None, width_kind = "stddev"))]
fn macroscopality_ratio<'py>(
    py: Python<'py>,
    sup: &PySpectrum,
    reference: &PySpectrum,
    criterion: &str,
    level: Option<f64>,
    tol_zero: Option<f64>,
    width_kind: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let c = self::criterion(criterion, level, tol_zero)?;
    let r = macroscopality::macroscopality(&sup.0, &reference.0, c, self::width_kind(width_kind)?)
        .map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("theta_sing", r.theta_sing)?;
    d.set_item("theta_sup", r.theta_sup)?;
    d.set_item("m_numeric", r.m_numeric)?;
    d.set_item("m_width", r.m_width)?;
    d.set_item("width_kind", r.width_kind.to_string())?;
    d.set_item("peaks", (r.peaks.a1, r.peaks.a2, r.peaks.width))?;
    d.set_item("widths", r.widths)?;
    d.set_item(
        "criterion_used",
        (
            r.sup.criterion_used.to_string(),
            r.reference.criterion_used.to_string(),
        ),
    )?;
    Ok(d)
}

fn result_dict<'py>(py: Python<'py>, r: ScenarioResult) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("name", r.name)?;
    d.set_item("inputs", r.inputs)?;
    d.set_item("theta_sing", r.theta_sing)?;
    d.set_item("theta_sup", r.theta_sup)?;
    d.set_item("m_paper", r.m_paper)?;
    d.set_item("m_numeric", r.m_numeric)?;
    d.set_item(
        "criterion_used",
        (
            r.criterion_used.sup.to_string(),
            r.criterion_used.reference.to_string(),
        ),
    )?;
    d.set_item("width_kind", r.width_kind.to_string())?;
    d.set_item("peaks", (r.peaks.a1, r.peaks.a2, r.peaks.width))?;
    d.set_item("derived", r.derived)?;
    d.set_item("notes", r.notes)?;
    Ok(d)
}

#[pyfunction]
fn scenario_fock_cat(py: Python<'_>, n: u32) -> PyResult<Bound<'_, PyDict>> {
    result_dict(py, scenarios::scenario_fock_cat(n).map_err(err)?)
}

#[pyfunction]
fn scenario_qubits(py: Python<'_>, n: u32, eps: f64) -> PyResult<Bound<'_, PyDict>> {
    result_dict(py, scenarios::scenario_qubits(n, eps).map_err(err)?)
}

#[pyfunction]
fn scenario_ghz(py: Python<'_>, n: u32) -> PyResult<Bound<'_, PyDict>> {
    result_dict(py, scenarios::scenario_ghz(n).map_err(err)?)
}

#[pyfunction]
fn scenario_coherent_cat(py: Python<'_>, alpha: f64, phi: f64) -> PyResult<Bound<'_, PyDict>> {
    let p = CoherentCatParams::new(alpha, phi).map_err(err)?;
    result_dict(py, scenarios::scenario_coherent_cat(&p).map_err(err)?)
}

#[pyfunction]
#[pyo3(signature = (slit_width, grating_period, screen_distance, velocity, mass_amu, measured_node = None))]
fn scenario_molecule(
    py: Python<'_>,
    slit_width: f64,
    grating_period: f64,
    screen_distance: f64,
    velocity: f64,
    mass_amu: f64,
    measured_node: Option<f64>,
) -> PyResult<Bound<'_, PyDict>> {
    let p = MoleculeParams {
        slit_width,
        grating_period,
        screen_distance,
        velocity,
        mass_amu,
        measured_node,
    };
    result_dict(
        py,
        scenarios::scenario_molecule(&p, &PhysicalConstants::default()).map_err(err)?,
    )
}

/// Energies in kelvin, flux difference in flux quanta.
#[pyfunction]
fn scenario_squid(
    py: Python<'_>,
    e_l: f64,
    e_j: f64,
    level_spacing: f64,
    flux_diff: f64,
) -> PyResult<Bound<'_, PyDict>> {
    let p = SquidParams {
        e_l,
        e_j,
        level_spacing,
        flux_diff,
    };
    result_dict(
        py,
        scenarios::scenario_squid(&p, &PhysicalConstants::default()).map_err(err)?,
    )
}

#[pyfunction]
#[pyo3(signature = (ratio = 1.0))]
fn scenario_mirror(py: Python<'_>, ratio: f64) -> PyResult<Bound<'_, PyDict>> {
    result_dict(py, scenarios::scenario_mirror(ratio).map_err(err)?)
}

/// The six case studies, in a fixed order.
#[pyfunction]
fn run_all_paper(py: Python<'_>) -> PyResult<Vec<Bound<'_, PyDict>>> {
    scenarios::run_all_paper()
        .map_err(err)?
        .into_iter()
        .map(|r| result_dict(py, r))
        .collect()
}

#[pymodule]
#[pyo3(name = "macroscopality")]
fn python_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add(
        "MacroscopalityError",
        m.py().get_type::<MacroscopalityError>(),
    )?;
    m.add_class::<PySpectrum>()?;
    m.add_function(wrap_pyfunction!(bimodal_compose, m)?)?;
    m.add_function(wrap_pyfunction!(first_orthogonality, m)?)?;
    m.add_function(wrap_pyfunction!(macroscopality_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(scenario_fock_cat, m)?)?;
    m.add_function(wrap_pyfunction!(scenario_qubits, m)?)?;
    m.add_function(wrap_pyfunction!(scenario_ghz, m)?)?;
    m.add_function(wrap_pyfunction!(scenario_coherent_cat, m)?)?;
    m.add_function(wrap_pyfunction!(scenario_molecule, m)?)?;
    m.add_function(wrap_pyfunction!(scenario_squid, m)?)?;
    m.add_function(wrap_pyfunction!(scenario_mirror, m)?)?;
    m.add_function(wrap_pyfunction!(run_all_paper, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn criterion_names() {
        assert_eq!(criterion("auto", None, None).unwrap(), Criterion::Auto);
        assert_eq!(
            criterion("threshold", Some(0.5), None).unwrap(),
            Criterion::Threshold { level: 0.5 }
        );
        assert_eq!(
            criterion("first_zero", None, None).unwrap(),
            Criterion::first_zero()
        );
        assert!(criterion("auto", Some(0.5), None).is_err());
        assert!(criterion("threshold", Some(1.5), None).is_err());
        assert!(criterion("sideways", None, None).is_err());
    }
}
