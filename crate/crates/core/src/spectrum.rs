//! Probability distributions over a preferred observable, and the modulus of
//! their characteristic function.
//!
//! For a pure state the overlap `|<psi| exp(i theta A) |psi>|` depends only on
//! the distribution `P(A) = |<A|psi>|^2`, so that distribution is all a
//! [`Spectrum`] stores. Two shapes are supported: finitely many eigenvalues
//! with probabilities ([`DiscreteSpectrum`]) and a density sampled on a uniform
//! grid ([`GridDensity`]), integrated with the trapezoid rule.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

const DISCRETE_NORM_TOL: f64 = 1e-9;
const DENSITY_NORM_TOL: f64 = 1e-6;
const MIN_GRID_POINTS: usize = 16;
/// Largest number of grid steps `bimodal_compose` will insert between copies.
const MAX_COMPOSE_SHIFT: f64 = 1e7;

/// Probability masses laid out for evaluation of `sum_k m_k exp(i theta x_k)`.
#[derive(Debug, Clone, PartialEq)]
enum Masses {
    /// Equally spaced abscissae. Evaluated with Horner's scheme in
    /// `exp(i theta step)`, which needs one complex exponential per theta.
    Lattice { step: f64, masses: Vec<f64> },
    /// Arbitrary abscissae, kept as offsets from the support midpoint.
    Scattered { offsets: Vec<f64>, masses: Vec<f64> },
}

impl Masses {
    fn lattice_or_scattered(positions: &[f64], masses: Vec<f64>) -> Self {
        let n = positions.len();
        if n == 1 {
            return Masses::Lattice { step: 0.0, masses };
        }
        let first = positions[0];
        let last = positions[n - 1];
        let step = (last - first) / (n - 1) as f64;
        let tol = 1e-12 * first.abs().max(last.abs()).max(last - first);
        let uniform = positions
            .iter()
            .enumerate()
            .all(|(k, &a)| (a - (first + k as f64 * step)).abs() <= tol);
        if uniform {
            Masses::Lattice { step, masses }
        } else {
            let mid = 0.5 * (first + last);
            Masses::Scattered {
                offsets: positions.iter().map(|a| a - mid).collect(),
                masses,
            }
        }
    }

    fn characteristic(&self, theta: f64) -> Complex64 {
        match self {
            Masses::Lattice { step, masses } => {
                let w = Complex64::cis(theta * step);
                masses
                    .iter()
                    .rev()
                    .fold(Complex64::new(0.0, 0.0), |acc, &m| acc * w + m)
            }
            Masses::Scattered { offsets, masses } => offsets
                .iter()
                .zip(masses)
                .map(|(&a, &m)| Complex64::cis(theta * a) * m)
                .sum(),
        }
    }
}

/// Finitely many eigenvalues with their probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteSpectrum {
    eigenvalues: Vec<f64>,
    weights: Vec<f64>,
    masses: Masses,
}

impl DiscreteSpectrum {
    /// Builds a spectrum from `(eigenvalue, weight)` pairs whose weights must
    /// already sum to one within 1e-9. Points are sorted and coinciding
    /// eigenvalues are merged by adding their weights.
    pub fn new(points: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        Self::build(points, true)
    }

    /// Like [`DiscreteSpectrum::new`] but rescales the weights to unit sum.
    pub fn from_unnormalized(points: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        Self::build(points, false)
    }

    fn build(points: impl IntoIterator<Item = (f64, f64)>, require_unit: bool) -> Result<Self> {
        let mut pts: Vec<(f64, f64)> = points.into_iter().collect();
        if pts.is_empty() {
            return Err(Error::InvalidSpectrum("no spectral points".into()));
        }
        for &(a, w) in &pts {
            if !a.is_finite() || !w.is_finite() {
                return Err(Error::InvalidSpectrum(format!(
                    "non-finite point ({a}, {w})"
                )));
            }
            if w < 0.0 {
                return Err(Error::InvalidSpectrum(format!(
                    "negative weight {w} at {a}"
                )));
            }
        }
        pts.sort_by(|p, q| p.0.total_cmp(&q.0));

        let mut eigenvalues: Vec<f64> = Vec::with_capacity(pts.len());
        let mut weights: Vec<f64> = Vec::with_capacity(pts.len());
        for (a, w) in pts {
            match eigenvalues.last() {
                Some(&prev) if (a - prev).abs() <= 4.0 * f64::EPSILON * a.abs().max(prev.abs()) => {
                    *weights.last_mut().unwrap() += w;
                }
                _ => {
                    eigenvalues.push(a);
                    weights.push(w);
                }
            }
        }

        let total: f64 = weights.iter().sum();
        if require_unit && (total - 1.0).abs() > DISCRETE_NORM_TOL {
            return Err(Error::InvalidSpectrum(format!(
                "weights sum to {total}, expected 1 within {DISCRETE_NORM_TOL:e}"
            )));
        }
        if total <= 0.0 {
            return Err(Error::InvalidSpectrum("total weight is zero".into()));
        }
        weights.iter_mut().for_each(|w| *w /= total);

        let masses = Masses::lattice_or_scattered(&eigenvalues, weights.clone());
        Ok(DiscreteSpectrum {
            eigenvalues,
            weights,
            masses,
        })
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.eigenvalues
            .iter()
            .copied()
            .zip(self.weights.iter().copied())
    }
}

/// A probability density sampled on the uniform grid
/// `a_min, a_min + step, ..., a_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridDensity {
    a_min: f64,
    a_max: f64,
    values: Vec<f64>,
    masses: Masses,
}

impl GridDensity {
    /// Requires at least 16 non-negative samples whose trapezoid integral is
    /// one within 1e-6.
    pub fn new(a_min: f64, a_max: f64, values: Vec<f64>) -> Result<Self> {
        Self::build(a_min, a_max, values, true)
    }

    /// Like [`GridDensity::new`] but rescales the samples to unit integral.
    pub fn from_unnormalized(a_min: f64, a_max: f64, values: Vec<f64>) -> Result<Self> {
        Self::build(a_min, a_max, values, false)
    }

    fn build(a_min: f64, a_max: f64, mut values: Vec<f64>, require_unit: bool) -> Result<Self> {
        if !a_min.is_finite() || !a_max.is_finite() || a_max <= a_min {
            return Err(Error::InvalidSpectrum(format!(
                "grid bounds [{a_min}, {a_max}] must be finite with a_max > a_min"
            )));
        }
        if values.len() < MIN_GRID_POINTS {
            return Err(Error::InvalidSpectrum(format!(
                "{} grid points, need at least {MIN_GRID_POINTS}",
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::InvalidSpectrum(format!(
                "invalid density sample {v}"
            )));
        }
        let step = (a_max - a_min) / (values.len() - 1) as f64;
        let integral = trapezoid_masses(&values, step).iter().sum::<f64>();
        if require_unit && (integral - 1.0).abs() > DENSITY_NORM_TOL {
            return Err(Error::InvalidSpectrum(format!(
                "density integrates to {integral}, expected 1 within {DENSITY_NORM_TOL:e}"
            )));
        }
        if integral <= 0.0 {
            return Err(Error::InvalidSpectrum("density integrates to zero".into()));
        }
        values.iter_mut().for_each(|v| *v /= integral);
        let masses = Masses::Lattice {
            step,
            masses: trapezoid_masses(&values, step),
        };
        Ok(GridDensity {
            a_min,
            a_max,
            values,
            masses,
        })
    }

    pub fn a_min(&self) -> f64 {
        self.a_min
    }

    pub fn a_max(&self) -> f64 {
        self.a_max
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn step(&self) -> f64 {
        (self.a_max - self.a_min) / (self.values.len() - 1) as f64
    }

    pub fn abscissa(&self, i: usize) -> f64 {
        self.a_min + i as f64 * self.step()
    }

    /// Linear interpolation at fractional grid index `t`; zero off the grid.
    fn sample_at_index(&self, t: f64) -> f64 {
        let last = (self.values.len() - 1) as f64;
        if !(0.0..=last).contains(&t) {
            return 0.0;
        }
        let lo = t.floor();
        let frac = t - lo;
        let lo = lo as usize;
        if frac == 0.0 {
            self.values[lo]
        } else {
            self.values[lo] * (1.0 - frac) + self.values[lo + 1] * frac
        }
    }
}

fn trapezoid_masses(values: &[f64], step: f64) -> Vec<f64> {
    let n = values.len();
    values
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let w = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
            w * v * step
        })
        .collect()
}

/// Preferred-observable distribution of a state.
#[derive(Debug, Clone, PartialEq)]
pub enum Spectrum {
    Discrete(DiscreteSpectrum),
    Density(GridDensity),
}

impl From<DiscreteSpectrum> for Spectrum {
    fn from(d: DiscreteSpectrum) -> Self {
        Spectrum::Discrete(d)
    }
}

impl From<GridDensity> for Spectrum {
    fn from(g: GridDensity) -> Self {
        Spectrum::Density(g)
    }
}

/// Samples of `|<psi| exp(i theta A) |psi>|` on a uniform theta grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OverlapCurve {
    thetas: Vec<f64>,
    magnitudes: Vec<f64>,
}

impl OverlapCurve {
    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn magnitudes(&self) -> &[f64] {
        &self.magnitudes
    }

    pub fn len(&self) -> usize {
        self.thetas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.thetas.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.thetas
            .iter()
            .copied()
            .zip(self.magnitudes.iter().copied())
    }

    /// Sample with the smallest magnitude (first one on ties).
    pub fn argmin(&self) -> (f64, f64) {
        self.iter().fold((f64::NAN, f64::INFINITY), |best, p| {
            if p.1 < best.1 {
                p
            } else {
                best
            }
        })
    }
}

/// The two dominant peaks of a bimodal spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Peaks {
    pub a1: f64,
    pub a2: f64,
    /// Full width at half maximum of the taller peak (zero for point masses).
    pub width: f64,
}

impl Peaks {
    pub fn separation(&self) -> f64 {
        self.a2 - self.a1
    }
}

/// Peak positions plus the index range of samples belonging to the taller peak.
pub(crate) struct PeakSplit {
    pub peaks: Peaks,
    pub taller: std::ops::Range<usize>,
}

impl Spectrum {
    /// `|sum_k p_k exp(i theta a_k)|`, or the trapezoid approximation of
    /// `|integral exp(i theta A) P(A) dA|` for densities.
    pub fn char_magnitude(&self, theta: f64) -> f64 {
        // |phi(-theta)| = |conj phi(theta)|; evaluating at |theta| makes the
        // symmetry exact in floating point.
        self.masses().characteristic(theta.abs()).norm()
    }

    /// Reference evaluation with one complex exponential per sample; the
    /// Horner path behind [`Spectrum::char_magnitude`] must agree with it.
    pub fn char_magnitude_direct(&self, theta: f64) -> f64 {
        let (x, m) = self.positions_and_masses();
        let origin = x[0];
        x.iter()
            .zip(&m)
            .map(|(&a, &w)| Complex64::cis(theta.abs() * (a - origin)) * w)
            .sum::<Complex64>()
            .norm()
    }

    pub fn scan_overlap(&self, theta_max: f64, n_points: usize) -> Result<OverlapCurve> {
        if !theta_max.is_finite() || theta_max <= 0.0 {
            return Err(Error::InvalidRange(format!(
                "theta_max must be > 0, got {theta_max}"
            )));
        }
        if n_points < 2 {
            return Err(Error::InvalidRange(format!(
                "need at least 2 points, got {n_points}"
            )));
        }
        let denom = (n_points - 1) as f64;
        let thetas: Vec<f64> = (0..n_points)
            .map(|i| theta_max * (i as f64 / denom))
            .collect();
        let magnitudes = thetas.iter().map(|&t| self.char_magnitude(t)).collect();
        Ok(OverlapCurve { thetas, magnitudes })
    }

    /// Mean and standard deviation.
    pub fn moments(&self) -> (f64, f64) {
        let (x, m) = self.positions_and_masses();
        moments_of(&x, &m)
    }

    pub fn stddev(&self) -> f64 {
        self.moments().1
    }

    /// `(min, max)` of the support.
    pub fn support(&self) -> (f64, f64) {
        match self {
            Spectrum::Discrete(d) => (d.eigenvalues[0], *d.eigenvalues.last().unwrap()),
            Spectrum::Density(g) => (g.a_min, g.a_max),
        }
    }

    /// Half the support width, a Lipschitz bound for `theta -> char_magnitude`.
    pub fn half_span(&self) -> f64 {
        let (lo, hi) = self.support();
        0.5 * (hi - lo)
    }

    /// Full width at half of the global maximum, interpolating linearly
    /// between samples.
    ///
    /// Discrete spectra are treated as weights against eigenvalue positions;
    /// with fewer than three weights above half maximum the Gaussian
    /// equivalent `2 sqrt(2 ln 2) * stddev` is returned instead.
    pub fn fwhm(&self) -> Result<f64> {
        if let Spectrum::Discrete(d) = self {
            if d.len() == 1 {
                return Err(Error::Degenerate("single eigenvalue has no width".into()));
            }
            let max = d.weights.iter().cloned().fold(0.0, f64::max);
            let above = d.weights.iter().filter(|&&w| w > 0.5 * max).count();
            if above < 3 {
                let sd = self.stddev();
                if sd == 0.0 {
                    return Err(Error::Degenerate("zero spread".into()));
                }
                return Ok(sd * 2.0 * (2.0 * std::f64::consts::LN_2).sqrt());
            }
        }
        let (x, y) = self.profile();
        let top = y
            .iter()
            .enumerate()
            .fold(0, |best, (i, &v)| if v > y[best] { i } else { best });
        let (l, r) = plateau(y, top);
        Ok(width_at_half(
            &x,
            y,
            l,
            r,
            matches!(self, Spectrum::Discrete(_)),
        ))
    }

    /// The two highest local maxima, provided the lowest point between them
    /// is under half the lower peak.
    pub fn detect_peaks(&self) -> Result<Peaks> {
        self.peak_split().map(|s| s.peaks)
    }

    pub(crate) fn peak_split(&self) -> Result<PeakSplit> {
        if let Spectrum::Discrete(d) = self {
            // Two point masses: no samples between them, the gap is the dip.
            if d.len() == 2 {
                let taller = if d.weights[1] > d.weights[0] { 1 } else { 0 };
                return Ok(PeakSplit {
                    peaks: Peaks {
                        a1: d.eigenvalues[0],
                        a2: d.eigenvalues[1],
                        width: 0.0,
                    },
                    taller: taller..taller + 1,
                });
            }
        }
        let (x, y) = self.profile();
        let mut maxima = local_maxima(y);
        if maxima.len() < 2 {
            return Err(Error::NotBimodal(format!(
                "{} local maximum found",
                maxima.len()
            )));
        }
        // Highest first; the sort is stable so equal heights keep left-to-right order.
        maxima.sort_by(|p, q| y[q.0].total_cmp(&y[p.0]));
        let (first, second) = if maxima[0].0 < maxima[1].0 {
            (maxima[0], maxima[1])
        } else {
            (maxima[1], maxima[0])
        };
        let (dip, dip_value) =
            (first.1..=second.0)
                .map(|i| (i, y[i]))
                .fold((first.1, f64::INFINITY), |best, p| {
                    if p.1 < best.1 {
                        p
                    } else {
                        best
                    }
                });
        let lower = y[first.0].min(y[second.0]);
        if dip_value >= 0.5 * lower {
            return Err(Error::NotBimodal(format!(
                "dip {dip_value:e} is not below half the lower peak {lower:e}"
            )));
        }
        let centre = |(l, r): (usize, usize)| 0.5 * (x[l] + x[r]);
        let first_taller = y[first.0] >= y[second.0];
        let tall = if first_taller { first } else { second };
        let width = width_at_half(&x, y, tall.0, tall.1, matches!(self, Spectrum::Discrete(_)));
        let taller = if first_taller {
            0..dip
        } else {
            dip + 1..y.len()
        };
        Ok(PeakSplit {
            peaks: Peaks {
                a1: centre(first),
                a2: centre(second),
                width,
            },
            taller,
        })
    }

    /// Standard deviation of the taller peak, taking the samples on its side
    /// of the dip as a normalized distribution.
    pub fn taller_peak_stddev(&self) -> Result<f64> {
        let split = self.peak_split()?;
        let (x, m) = self.positions_and_masses();
        Ok(moments_of(&x[split.taller.clone()], &m[split.taller]).1)
    }

    /// The taller peak of a bimodal spectrum on its own, renormalized.
    pub fn dominant_peak(&self) -> Result<Spectrum> {
        let split = self.peak_split()?;
        match self {
            Spectrum::Discrete(d) => DiscreteSpectrum::from_unnormalized(
                d.points()
                    .enumerate()
                    .filter(|(i, _)| split.taller.contains(i))
                    .map(|(_, p)| p),
            )
            .map(Spectrum::from),
            Spectrum::Density(g) => {
                let values = g
                    .values
                    .iter()
                    .enumerate()
                    .map(|(i, &v)| if split.taller.contains(&i) { v } else { 0.0 })
                    .collect();
                GridDensity::from_unnormalized(g.a_min, g.a_max, values).map(Spectrum::from)
            }
        }
    }

    /// Every eigenvalue moved by `shift`.
    pub fn translated(&self, shift: f64) -> Result<Spectrum> {
        match self {
            Spectrum::Discrete(d) => {
                DiscreteSpectrum::from_unnormalized(d.points().map(|(a, w)| (a + shift, w)))
                    .map(Spectrum::from)
            }
            Spectrum::Density(g) => {
                GridDensity::from_unnormalized(g.a_min + shift, g.a_max + shift, g.values.clone())
                    .map(Spectrum::from)
            }
        }
    }

    /// Every eigenvalue multiplied by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Result<Spectrum> {
        if !factor.is_finite() || factor <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "scale factor must be > 0, got {factor}"
            )));
        }
        match self {
            Spectrum::Discrete(d) => {
                DiscreteSpectrum::from_unnormalized(d.points().map(|(a, w)| (a * factor, w)))
                    .map(Spectrum::from)
            }
            Spectrum::Density(g) => GridDensity::from_unnormalized(
                g.a_min * factor,
                g.a_max * factor,
                g.values.iter().map(|v| v / factor).collect(),
            )
            .map(Spectrum::from),
        }
    }

    fn masses(&self) -> &Masses {
        match self {
            Spectrum::Discrete(d) => &d.masses,
            Spectrum::Density(g) => &g.masses,
        }
    }

    /// Sample positions with the probability mass each sample carries.
    pub(crate) fn positions_and_masses(&self) -> (Vec<f64>, Vec<f64>) {
        match self {
            Spectrum::Discrete(d) => (d.eigenvalues.clone(), d.weights.clone()),
            Spectrum::Density(g) => {
                let step = g.step();
                let x = (0..g.len()).map(|i| g.a_min + i as f64 * step).collect();
                (x, trapezoid_masses(&g.values, step))
            }
        }
    }

    /// Positions with the height profile used for peak and width analysis.
    fn profile(&self) -> (Vec<f64>, &[f64]) {
        match self {
            Spectrum::Discrete(d) => (d.eigenvalues.clone(), &d.weights),
            Spectrum::Density(g) => ((0..g.len()).map(|i| g.abscissa(i)).collect(), &g.values),
        }
    }
}

fn moments_of(x: &[f64], m: &[f64]) -> (f64, f64) {
    let total: f64 = m.iter().sum();
    if total <= 0.0 {
        return (f64::NAN, 0.0);
    }
    let mean = x.iter().zip(m).map(|(a, w)| a * w).sum::<f64>() / total;
    let var = x
        .iter()
        .zip(m)
        .map(|(a, w)| w * (a - mean) * (a - mean))
        .sum::<f64>()
        / total;
    (mean, var.max(0.0).sqrt())
}

/// Extent of the run of samples equal to `y[i]`.
fn plateau(y: &[f64], i: usize) -> (usize, usize) {
    let (mut l, mut r) = (i, i);
    while l > 0 && y[l - 1] == y[i] {
        l -= 1;
    }
    while r + 1 < y.len() && y[r + 1] == y[i] {
        r += 1;
    }
    (l, r)
}

/// Plateaus standing strictly above both neighbours (zero beyond the ends).
fn local_maxima(y: &[f64]) -> Vec<(usize, usize)> {
    let n = y.len();
    let mut out = Vec::new();
    let mut l = 0;
    while l < n {
        let (_, r) = plateau(y, l);
        let rises = l == 0 || y[l - 1] < y[l];
        let falls = r == n - 1 || y[r + 1] < y[r];
        if rises && falls && y[l] > 0.0 {
            out.push((l, r));
        }
        l = r + 1;
    }
    out
}

/// Width between the half-maximum crossings flanking the plateau `[l, r]`.
/// A profile still above half at its last sample crosses one step further
/// out when `extend` is set (point masses) and at that sample otherwise
/// (densities, which vanish outside their grid).
fn width_at_half(x: &[f64], y: &[f64], l: usize, r: usize, extend: bool) -> f64 {
    let half = 0.5 * y[l];
    let n = y.len();
    let lerp = |x0: f64, y0: f64, x1: f64, y1: f64| x0 + (half - y0) / (y1 - y0) * (x1 - x0);

    let mut i = l;
    while i > 0 && y[i - 1] >= half {
        i -= 1;
    }
    let left = if i == 0 && !extend {
        x[0]
    } else if i == 0 {
        let step = if n > 1 { x[1] - x[0] } else { 0.0 };
        lerp(x[0] - step, 0.0, x[0], y[0])
    } else {
        lerp(x[i - 1], y[i - 1], x[i], y[i])
    };

    let mut j = r;
    while j + 1 < n && y[j + 1] >= half {
        j += 1;
    }
    let right = if j == n - 1 && !extend {
        x[n - 1]
    } else if j == n - 1 {
        let step = if n > 1 { x[n - 1] - x[n - 2] } else { 0.0 };
        lerp(x[n - 1] + step, 0.0, x[n - 1], y[n - 1])
    } else {
        lerp(x[j + 1], y[j + 1], x[j], y[j])
    };
    right - left
}

/// Two half-weight copies of `kernel`, translated by `a1` and `a2`.
///
/// For grid densities the second copy lands on the first copy's grid; when
/// the separation is not a whole number of grid steps it is placed by linear
/// interpolation.
pub fn bimodal_compose(kernel: &Spectrum, a1: f64, a2: f64) -> Result<Spectrum> {
    if !a1.is_finite() || !a2.is_finite() || a1 == a2 {
        return Err(Error::InvalidSeparation(format!(
            "peak positions {a1} and {a2} must be finite and distinct"
        )));
    }
    let (lo, hi) = (a1.min(a2), a1.max(a2));
    match kernel {
        Spectrum::Discrete(d) => DiscreteSpectrum::from_unnormalized(
            d.points()
                .map(|(a, w)| (a + lo, 0.5 * w))
                .chain(d.points().map(|(a, w)| (a + hi, 0.5 * w))),
        )
        .map(Spectrum::from),
        Spectrum::Density(g) => {
            let step = g.step();
            let shift = (hi - lo) / step;
            if shift > MAX_COMPOSE_SHIFT {
                return Err(Error::InvalidSeparation(format!(
                    "separation spans {shift:.3e} grid steps"
                )));
            }
            let whole = shift.round();
            let commensurate = (shift - whole).abs() <= 1e-9 * whole.max(1.0);
            let offset = if commensurate { whole } else { shift };
            let n = g.len();
            let len = n + offset.ceil() as usize;
            let values = (0..len)
                .map(|j| {
                    let first = g.values.get(j).copied().unwrap_or(0.0);
                    let second = g.sample_at_index(j as f64 - offset);
                    0.5 * (first + second)
                })
                .collect();
            let a_min = g.a_min + lo;
            let a_max = a_min + (len - 1) as f64 * step;
            GridDensity::from_unnormalized(a_min, a_max, values).map(Spectrum::from)
        }
    }
}
