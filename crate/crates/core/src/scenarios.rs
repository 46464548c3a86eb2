//! Physical case studies: each maps experimental inputs to the two
//! orthogonality angles and to the width-based headline ratio.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};

use serde::Serialize;

use crate::closed_form::decoherence_factor;
use crate::error::{Error, Result};
use crate::orthogonality::{first_orthogonality, Criterion, OrthogonalityResult, WidthKind};
use crate::spectrum::{bimodal_compose, Peaks, Spectrum};
use crate::states::{
    coherent_cat_quadrature_density, coherent_halfdiff_spectrum, coherent_number_spectrum,
    default_gaussian_grid, default_poisson_cutoff, fock_cat_spectrum, gaussian_density,
    ghz_spectra, qubit_product_spectrum, qubit_superposition_spectrum, slit_aperture_density,
    CoherentCatParams, Grid, QubitAngles, Slit, COHERENT_QUADRATURE_SIGMA,
    GAUSSIAN_GRID_HALF_WIDTH,
};

/// CODATA 2018 exact and recommended values, SI units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysicalConstants {
    pub h: f64,
    pub hbar: f64,
    pub amu: f64,
    pub k_b: f64,
    pub e_charge: f64,
    /// Superconducting flux quantum `h / 2e`.
    pub phi0: f64,
}

impl PhysicalConstants {
    pub const CODATA_2018: PhysicalConstants = PhysicalConstants {
        h: 6.626_070_15e-34,
        hbar: 6.626_070_15e-34 / (2.0 * PI),
        amu: 1.660_539_066_60e-27,
        k_b: 1.380_649e-23,
        e_charge: 1.602_176_634e-19,
        phi0: 6.626_070_15e-34 / (2.0 * 1.602_176_634e-19),
    };

    /// Kelvin to joules.
    pub fn kelvin_to_joule(&self, t: f64) -> f64 {
        t * self.k_b
    }

    pub fn joule_to_kelvin(&self, e: f64) -> f64 {
        e / self.k_b
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::CODATA_2018
    }
}

/// Which criterion each side of the ratio ended up using.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriteriaUsed {
    pub sup: Criterion,
    pub reference: Criterion,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioResult {
    pub name: String,
    pub inputs: BTreeMap<String, f64>,
    pub theta_sing: f64,
    pub theta_sup: f64,
    /// Headline value in the width convention of the case study.
    pub m_paper: f64,
    /// `theta_sing / theta_sup` from the numeric engine.
    pub m_numeric: f64,
    pub criterion_used: CriteriaUsed,
    pub width_kind: WidthKind,
    pub peaks: Peaks,
    /// Intermediate quantities worth inspecting.
    pub derived: BTreeMap<String, f64>,
    pub notes: Vec<String>,
}

fn map(entries: &[(&str, f64)]) -> BTreeMap<String, f64> {
    entries.iter().map(|&(k, v)| (k.to_string(), v)).collect()
}

/// Auto-criterion orthogonality of the superposition and the reference.
fn engine_pair(
    sup: &Spectrum,
    reference: &Spectrum,
) -> Result<(OrthogonalityResult, OrthogonalityResult)> {
    Ok((
        first_orthogonality(sup, Criterion::Auto, None)?,
        first_orthogonality(reference, Criterion::Auto, None)?,
    ))
}

struct Engine {
    sup: OrthogonalityResult,
    reference: OrthogonalityResult,
}

impl Engine {
    fn run(sup: &Spectrum, reference: &Spectrum) -> Result<Self> {
        let (sup, reference) = engine_pair(sup, reference)?;
        Ok(Engine { sup, reference })
    }

    fn result(
        &self,
        name: &str,
        inputs: BTreeMap<String, f64>,
        m_paper: f64,
        width_kind: WidthKind,
        peaks: Peaks,
    ) -> ScenarioResult {
        ScenarioResult {
            name: name.to_string(),
            inputs,
            theta_sing: self.reference.theta_star,
            theta_sup: self.sup.theta_star,
            m_paper,
            m_numeric: self.reference.theta_star / self.sup.theta_star,
            criterion_used: CriteriaUsed {
                sup: self.sup.criterion_used,
                reference: self.reference.criterion_used,
            },
            width_kind,
            peaks,
            derived: BTreeMap::new(),
            notes: Vec::new(),
        }
    }
}

/// Number-state cat and its coherent-state reference on `(n1 - n2)/2`.
pub fn fock_cat_spectra(n: u32) -> Result<(Spectrum, Spectrum)> {
    let mean = n as f64;
    Ok((
        fock_cat_spectrum(n)?,
        coherent_halfdiff_spectrum(mean, default_poisson_cutoff(mean))?,
    ))
}

/// `(|0,N> + |N,0>)/sqrt(2)`. The width path takes the photon-number
/// dispersion `sqrt(N)` of a coherent state; the engine compares against the
/// coherent state on the half-difference observable, whose dispersion is
/// `sqrt(N)/2`.
pub fn scenario_fock_cat(n: u32) -> Result<ScenarioResult> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("need N >= 2, got {n}")));
    }
    let (sup, reference) = fock_cat_spectra(n)?;
    let peaks = sup.detect_peaks()?;
    let engine = Engine::run(&sup, &reference)?;
    let mean = n as f64;
    let number_spread = mean.sqrt();
    let number_spectrum = coherent_number_spectrum(mean, default_poisson_cutoff(mean))?;

    let mut r = engine.result(
        "fock_cat",
        map(&[("n", mean)]),
        peaks.separation() / number_spread,
        WidthKind::Stddev,
        peaks,
    );
    r.derived = map(&[
        ("delta_n", number_spread),
        ("delta_n_engine", number_spectrum.stddev()),
        ("theta_sing_width", PI / number_spread),
        ("halfdiff_stddev", reference.stddev()),
        ("m_width_halfdiff", peaks.separation() / reference.stddev()),
    ]);
    r.notes.push("width path uses the photon-number dispersion sqrt(N); on (n1-n2)/2 the dispersion is sqrt(N)/2 and the ratio doubles".into());
    Ok(r)
}

/// Spin cat and the product state of one of its components.
pub fn qubit_spectra(p: &QubitAngles) -> Result<(Spectrum, Spectrum)> {
    Ok((
        qubit_superposition_spectrum(p)?,
        qubit_product_spectrum(p.n_qubits, p.phi + p.eps / 2.0)?,
    ))
}

/// Spin cat at `phi = pi/4`. Headline value `2 sqrt(N) eps`; also reports
/// the GHZ limit `n = 9`.
pub fn scenario_qubits(n: u32, eps: f64) -> Result<ScenarioResult> {
    let p = QubitAngles::balanced(eps, n)?;
    let (sup, reference) = qubit_spectra(&p)?;
    let peaks = sup.detect_peaks()?;
    let engine = Engine::run(&sup, &reference)?;
    let root_n = (n as f64).sqrt();

    let mut r = engine.result(
        "qubits",
        map(&[("n", n as f64), ("eps", eps), ("phi", p.phi)]),
        2.0 * root_n * eps,
        WidthKind::Stddev,
        peaks,
    );
    let ghz = scenario_ghz(9)?;
    r.derived = map(&[
        ("m_sin", 2.0 * root_n * eps.sin()),
        ("separation_expected", n as f64 * eps.sin()),
        ("reference_stddev", reference.stddev()),
        ("m_width_engine", peaks.separation() / reference.stddev()),
        ("ghz9_m_paper", ghz.m_paper),
        ("ghz9_m_numeric", ghz.m_numeric),
    ]);
    r.notes.push(format!(
        "exact small-angle-free value 2 sqrt(N) sin(eps) = {}",
        2.0 * root_n * eps.sin()
    ));
    r.notes.push(format!(
        "GHZ n=9: m_paper = {}, m_numeric = {}",
        ghz.m_paper, ghz.m_numeric
    ));
    Ok(r)
}

/// `(|0>^n + |1>^n)/sqrt(2)` against the spin-coherent state with the same
/// mean excitation: `n / (2 stddev) = sqrt(n)`.
pub fn scenario_ghz(n: u32) -> Result<ScenarioResult> {
    let (sup, reference) = ghz_spectra(n)?;
    let peaks = sup.detect_peaks()?;
    let engine = Engine::run(&sup, &reference)?;
    let sd = reference.stddev();
    let mut r = engine.result(
        "ghz",
        map(&[("n", n as f64)]),
        peaks.separation() / (2.0 * sd),
        WidthKind::Stddev,
        peaks,
    );
    r.derived = map(&[("reference_stddev", sd)]);
    r.notes
        .push("width taken as twice the spin-coherent dispersion".into());
    Ok(r)
}

/// Coherent cat quadrature density and one coherent component.
pub fn coherent_cat_spectra(p: &CoherentCatParams) -> Result<(Spectrum, Spectrum)> {
    Ok((
        coherent_cat_quadrature_density(p, None)?,
        gaussian_density(0.0, COHERENT_QUADRATURE_SIGMA, None)?,
    ))
}

/// Coherent cat `|alpha e^{i phi}> + |alpha e^{-i phi}>` read out on the
/// quadrature `a2`. Headline value is the superposition distance
/// `2 |alpha| sin phi`.
pub fn scenario_coherent_cat(p: &CoherentCatParams) -> Result<ScenarioResult> {
    let distance = p.distance();
    if distance <= 1.0 {
        return Err(Error::InvalidSeparation(format!(
            "superposition distance {distance} does not resolve the components"
        )));
    }
    let (sup, reference) = coherent_cat_spectra(p)?;
    let engine = Engine::run(&sup, &reference)?;
    let x0 = p.displacement();
    let peaks = Peaks {
        a1: -x0,
        a2: x0,
        width: 0.5 * (8.0 * 2f64.ln()).sqrt(),
    };
    let factor = decoherence_factor(distance);

    let mut r = engine.result(
        "coherent_cat",
        map(&[("alpha_abs", p.alpha_abs), ("phi", p.phi)]),
        distance,
        WidthKind::Stddev,
        peaks,
    );
    r.derived = map(&[
        ("distance", distance),
        ("decoherence_factor", factor),
        ("decoherence_exponent", -2.0 * factor.ln()),
        ("theta_sup_nominal", PI / distance),
        ("relative_phase", p.relative_phase()),
    ]);
    r.notes.push(
        "decoherence factor exp(-D^2/2): the decoherence rate grows as the square of the distance"
            .into(),
    );
    r.notes
        .push("peaks from construction at +-|alpha| sin(phi), coherent dispersion 1/2".into());
    Ok(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MoleculeParams {
    /// Slit width `d`, m.
    pub slit_width: f64,
    pub grating_period: f64,
    /// Grating-to-detector distance `L`, m.
    pub screen_distance: f64,
    pub velocity: f64,
    /// Molecular mass in atomic mass units.
    pub mass_amu: f64,
    /// Observed position of the first node on the screen, m.
    pub measured_node: Option<f64>,
}

impl MoleculeParams {
    /// C60 through a 50 nm / 100 nm grating at 220 m/s, first node at 12 um.
    pub const FULLERENE: MoleculeParams = MoleculeParams {
        slit_width: 50e-9,
        grating_period: 100e-9,
        screen_distance: 1.25,
        velocity: 220.0,
        mass_amu: 720.0,
        measured_node: Some(12e-6),
    };

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("slit_width", self.slit_width),
            ("grating_period", self.grating_period),
            ("screen_distance", self.screen_distance),
            ("velocity", self.velocity),
            ("mass", self.mass_amu),
            ("measured_node", self.measured_node.unwrap_or(1.0)),
        ];
        if let Some((name, v)) = fields.iter().find(|(_, v)| !v.is_finite() || *v <= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "{name} must be > 0, got {v}"
            )));
        }
        if self.grating_period <= self.slit_width {
            return Err(Error::InvalidParameter(
                "grating period must exceed the slit width".into(),
            ));
        }
        Ok(())
    }

    /// de Broglie wavenumber `2 pi m v / h`.
    pub fn wavenumber(&self, c: &PhysicalConstants) -> f64 {
        2.0 * PI * self.mass_amu * c.amu * self.velocity / c.h
    }

    /// Single-slit angular node `h / (d m v)`.
    pub fn theta_single(&self, c: &PhysicalConstants) -> f64 {
        c.h / (self.slit_width * self.mass_amu * c.amu * self.velocity)
    }
}

/// Two slits at `+-period/2` and the single slit, over transverse position.
pub fn molecule_spectra(p: &MoleculeParams) -> Result<(Spectrum, Spectrum)> {
    p.validate()?;
    let half = p.grating_period / 2.0;
    let d = p.slit_width;
    Ok((
        slit_aperture_density(
            &[
                Slit {
                    center: -half,
                    width: d,
                },
                Slit {
                    center: half,
                    width: d,
                },
            ],
            None,
        )?,
        slit_aperture_density(
            &[Slit {
                center: 0.0,
                width: d,
            }],
            None,
        )?,
    ))
}

/// Matter-wave diffraction. The engine works in the transverse wavenumber
/// conjugate to position in the grating plane; dividing by the de Broglie
/// wavenumber turns its nodes into diffraction angles.
pub fn scenario_molecule(p: &MoleculeParams, c: &PhysicalConstants) -> Result<ScenarioResult> {
    let (sup, reference) = molecule_spectra(p)?;
    let peaks = sup.detect_peaks()?;
    let engine = Engine::run(&sup, &reference)?;
    let k = p.wavenumber(c);
    let theta_single = p.theta_single(c);
    let x_single = p.screen_distance * theta_single;
    let x_grating = p.screen_distance * engine.sup.theta_star / k;
    let m_model = engine.reference.theta_star / engine.sup.theta_star;

    let mut inputs = map(&[
        ("slit_width", p.slit_width),
        ("grating_period", p.grating_period),
        ("screen_distance", p.screen_distance),
        ("velocity", p.velocity),
        ("mass_amu", p.mass_amu),
    ]);
    if let Some(node) = p.measured_node {
        inputs.insert("measured_node".into(), node);
    }
    let m_paper = match p.measured_node {
        Some(node) => x_single / node,
        None => x_single / x_grating,
    };

    let mut r = engine.result("molecule", inputs, m_paper, WidthKind::Fwhm, peaks);
    r.theta_sing = engine.reference.theta_star / k;
    r.theta_sup = engine.sup.theta_star / k;
    r.derived = map(&[
        ("theta_single", theta_single),
        ("x_single", x_single),
        ("x_grating_model", x_grating),
        ("m_model", m_model),
        ("de_broglie_wavelength", 2.0 * PI / k),
    ]);
    if p.measured_node.is_none() {
        r.notes
            .push("no measured node given; m_paper falls back to the two-slit model".into());
    }
    let slow = MoleculeParams {
        velocity: p.velocity / 2.0,
        measured_node: p.measured_node.map(|x| 2.0 * x),
        ..*p
    };
    let slow_x = slow.screen_distance * slow.theta_single(c);
    r.derived.insert("half_velocity_x_single".into(), slow_x);
    if let Some(node) = slow.measured_node {
        r.derived
            .insert("half_velocity_m_paper".into(), slow_x / node);
        r.notes.push(format!(
            "at {} m/s the single-slit node sits at {:.4e} m; with a node at {:.4e} m, M = {:.4}",
            slow.velocity,
            slow_x,
            node,
            slow_x / node
        ));
    }
    Ok(r)
}

/// SQUID energies in kelvin, flux difference in units of the flux quantum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SquidParams {
    /// Inductive energy `phi0^2 / 2L`.
    pub e_l: f64,
    /// Josephson energy `phi0 I_c / 2 pi`.
    pub e_j: f64,
    /// `hbar omega` of the harmonic well.
    pub level_spacing: f64,
    pub flux_diff: f64,
}

impl SquidParams {
    /// Parameters of the two-fluxoid superposition experiment.
    pub const FLUXOID: SquidParams = SquidParams {
        e_l: 645.0,
        e_j: 76.0,
        level_spacing: 1.0,
        flux_diff: 0.25,
    };

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("e_l", self.e_l),
            ("e_j", self.e_j),
            ("level_spacing", self.level_spacing),
            ("flux_diff", self.flux_diff),
        ];
        match fields.iter().find(|(_, v)| !v.is_finite() || *v <= 0.0) {
            Some((name, v)) => Err(Error::InvalidParameter(format!(
                "{name} must be > 0, got {v}"
            ))),
            None => Ok(()),
        }
    }

    /// `U(y) = E_L (y - y_x)^2 - E_J cos(2 pi y)` with flux `y` in units of
    /// the flux quantum.
    fn potential<T>(&self, y: T, y_x: f64) -> T
    where
        T: Copy
            + Sub<f64, Output = T>
            + Mul<Output = T>
            + Mul<f64, Output = T>
            + Sub<T, Output = T>
            + Cosine,
    {
        let d = y - y_x;
        d * d * self.e_l - (y * (2.0 * PI)).cosine() * self.e_j
    }

    /// `U''(0)`, differentiated exactly.
    pub fn curvature(&self) -> f64 {
        self.potential(Jet2::variable(0.0), 0.0).d2
    }

    /// Flux dispersion of the harmonic ground state, `1/2 sqrt(level_spacing / U''(0))`.
    pub fn flux_dispersion(&self) -> f64 {
        0.5 * (self.level_spacing / self.curvature()).sqrt()
    }
}

trait Cosine {
    fn cosine(self) -> Self;
}

impl Cosine for f64 {
    fn cosine(self) -> Self {
        self.cos()
    }
}

/// Value with first and second derivative, propagated exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Jet2 {
    v: f64,
    d1: f64,
    d2: f64,
}

impl Jet2 {
    fn variable(x: f64) -> Self {
        Jet2 {
            v: x,
            d1: 1.0,
            d2: 0.0,
        }
    }
}

impl Sub<f64> for Jet2 {
    type Output = Jet2;
    fn sub(self, c: f64) -> Jet2 {
        Jet2 {
            v: self.v - c,
            ..self
        }
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    fn sub(self, o: Jet2) -> Jet2 {
        Jet2 {
            v: self.v - o.v,
            d1: self.d1 - o.d1,
            d2: self.d2 - o.d2,
        }
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    fn add(self, o: Jet2) -> Jet2 {
        Jet2 {
            v: self.v + o.v,
            d1: self.d1 + o.d1,
            d2: self.d2 + o.d2,
        }
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    fn mul(self, o: Jet2) -> Jet2 {
        Jet2 {
            v: self.v * o.v,
            d1: self.d1 * o.v + self.v * o.d1,
            d2: self.d2 * o.v + 2.0 * self.d1 * o.d1 + self.v * o.d2,
        }
    }
}

impl Mul<f64> for Jet2 {
    type Output = Jet2;
    fn mul(self, c: f64) -> Jet2 {
        Jet2 {
            v: self.v * c,
            d1: self.d1 * c,
            d2: self.d2 * c,
        }
    }
}

impl Cosine for Jet2 {
    fn cosine(self) -> Jet2 {
        let (s, c) = self.v.sin_cos();
        Jet2 {
            v: c,
            d1: -s * self.d1,
            d2: -c * self.d1 * self.d1 - s * self.d2,
        }
    }
}

/// Two Gaussians of width `sigma` at `a1` and `a2`, and one of them centred
/// at zero. The grid step divides the separation when it can, so the
/// composition shifts whole samples.
pub fn gaussian_pair_spectra(sigma: f64, a1: f64, a2: f64) -> Result<(Spectrum, Spectrum)> {
    if !sigma.is_finite() || sigma <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "sigma must be > 0, got {sigma}"
        )));
    }
    if !(a1.is_finite() && a2.is_finite()) || a1 == a2 {
        return Err(Error::InvalidSeparation(format!("peaks at {a1} and {a2}")));
    }
    let separation = (a2 - a1).abs();
    let base = default_gaussian_grid(0.0, sigma);
    let grid = if separation >= base.step() {
        let step = separation / (separation / base.step()).ceil();
        let half = (GAUSSIAN_GRID_HALF_WIDTH * sigma / step).ceil();
        Grid::new(-half * step, half * step, 2 * half as usize + 1)?
    } else {
        base
    };
    let kernel = gaussian_density(0.0, sigma, Some(grid))?;
    Ok((bimodal_compose(&kernel, a1, a2)?, kernel))
}

pub fn squid_spectra(p: &SquidParams) -> Result<(Spectrum, Spectrum)> {
    p.validate()?;
    gaussian_pair_spectra(p.flux_dispersion(), 0.0, p.flux_diff)
}

/// Superposition of two fluxoid states in a harmonic approximation of the
/// SQUID well at zero external flux.
pub fn scenario_squid(p: &SquidParams, c: &PhysicalConstants) -> Result<ScenarioResult> {
    let (sup, reference) = squid_spectra(p)?;
    let engine = Engine::run(&sup, &reference)?;
    let spread = p.flux_dispersion();
    let peaks = Peaks {
        a1: 0.0,
        a2: p.flux_diff,
        width: spread * (8.0 * 2f64.ln()).sqrt(),
    };
    let mut r = engine.result(
        "squid",
        map(&[
            ("e_l", p.e_l),
            ("e_j", p.e_j),
            ("level_spacing", p.level_spacing),
            ("flux_diff", p.flux_diff),
        ]),
        p.flux_diff / spread,
        WidthKind::Stddev,
        peaks,
    );
    r.derived = map(&[
        ("curvature", p.curvature()),
        ("flux_dispersion", spread),
        ("flux_dispersion_wb", spread * c.phi0),
        ("level_spacing_joule", c.kelvin_to_joule(p.level_spacing)),
    ]);
    r.notes
        .push("potential expanded to second order around zero flux".into());
    r.notes
        .push("fluxoid tunnelling splitting and the local magnetic moment are not modelled".into());
    Ok(r)
}

/// Two coherent wavepackets (dispersion 1/2) separated by `ratio` widths.
pub fn mirror_spectra(ratio: f64) -> Result<(Spectrum, Spectrum)> {
    if !ratio.is_finite() || ratio <= 0.0 {
        return Err(Error::InvalidSeparation(format!(
            "separation ratio must be > 0, got {ratio}"
        )));
    }
    let sigma = COHERENT_QUADRATURE_SIGMA;
    gaussian_pair_spectra(sigma, 0.0, ratio * sigma)
}

/// Mirror in a superposition of two positions `ratio` wavepacket widths
/// apart. At ratios of order one the peaks overlap, so positions and width
/// come from the construction.
pub fn scenario_mirror(ratio: f64) -> Result<ScenarioResult> {
    let (sup, reference) = mirror_spectra(ratio)?;
    let engine = Engine::run(&sup, &reference)?;
    let sigma = reference.stddev();
    let separation = ratio * COHERENT_QUADRATURE_SIGMA;
    let peaks = Peaks {
        a1: 0.0,
        a2: separation,
        width: sigma * (8.0 * 2f64.ln()).sqrt(),
    };
    let mut r = engine.result(
        "mirror",
        map(&[("ratio", ratio)]),
        separation / sigma,
        WidthKind::Stddev,
        peaks,
    );
    r.derived = map(&[("kernel_stddev", sigma), ("separation", separation)]);
    r.notes
        .push("separation of order one wavepacket width; the default ratio 1 is a stand-in".into());
    Ok(r)
}

/// The six case studies in a fixed order.
pub fn run_all_paper() -> Result<Vec<ScenarioResult>> {
    let c = PhysicalConstants::default();
    Ok(vec![
        scenario_fock_cat(20)?,
        scenario_qubits(100, 0.3)?,
        scenario_coherent_cat(&CoherentCatParams::new(3.1, 0.5)?)?,
        scenario_molecule(&MoleculeParams::FULLERENE, &c)?,
        scenario_squid(&SquidParams::FLUXOID, &c)?,
        scenario_mirror(1.0)?,
    ])
}
