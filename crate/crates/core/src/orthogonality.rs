//! First-orthogonality search on overlap curves and the macroscopality ratio
//! built from two such searches.
//!
//! The overlap `O(theta)` is sampled on a uniform grid of [`SCAN_POINTS`]
//! points over `[0, theta_max]`. Candidate events found on the grid are then
//! refined: minima by golden-section search, threshold crossings by
//! bisection.
//!
//! A minimum only counts as a zero ("node") when it is a simple zero of the
//! characteristic function, i.e. `O` grows linearly away from it: probing at
//! distances `r` and `2r` must give a ratio near 2 on both sides. This keeps
//! smooth near-misses (the `exp(-2 lambda)` dip of a Poisson distribution on a
//! half-integer lattice) and higher-order zeros (`|cos(theta/2)|^n` of a
//! binomial) from masquerading as interference nodes.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::search::{bisect_down_crossing, golden_section_min};
use crate::spectrum::{Peaks, Spectrum};

pub const DEFAULT_TOL_ZERO: f64 = 1e-3;
/// `1/e`
pub const DEFAULT_LEVEL: f64 = 0.367_879_441_171_442_33;
/// Uniform scan-grid size used to bracket events before refinement.
pub const SCAN_POINTS: usize = 100_000;
/// `theta_max` defaults to this many inverse standard deviations.
pub const DEFAULT_RANGE_IN_STDDEVS: f64 = 50.0;

/// Overlap values below this are indistinguishable from rounding noise.
const NOISE_FLOOR: f64 = 1e-10;
/// Probe distance of the simple-zero test, relative to the zero's position.
const NODE_PROBE: f64 = 1e-4;
const GOLDEN_REL_TOL: f64 = 1e-10;
const BISECT_REL_TOL: f64 = 1e-13;

/// When an overlap curve counts as "orthogonal".
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Criterion {
    /// First simple zero whose refined value is at most `tol_zero`.
    FirstZero { tol_zero: f64 },
    /// First downward crossing of `level`.
    Threshold { level: f64 },
    /// `FirstZero` when the curve has a zero within range, else `Threshold(1/e)`.
    #[default]
    Auto,
}

impl Criterion {
    pub fn first_zero() -> Self {
        Criterion::FirstZero {
            tol_zero: DEFAULT_TOL_ZERO,
        }
    }

    pub fn threshold() -> Self {
        Criterion::Threshold {
            level: DEFAULT_LEVEL,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |v: f64| v > 0.0 && v < 1.0;
        match *self {
            Criterion::FirstZero { tol_zero } if !ok(tol_zero) => Err(Error::InvalidParameter(
                format!("tol_zero must lie in (0, 1), got {tol_zero}"),
            )),
            Criterion::Threshold { level } if !ok(level) => Err(Error::InvalidParameter(format!(
                "threshold level must lie in (0, 1), got {level}"
            ))),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Criterion::FirstZero { tol_zero } => write!(f, "first-zero({tol_zero})"),
            Criterion::Threshold { level } => write!(f, "threshold({level})"),
            Criterion::Auto => f.write_str("auto"),
        }
    }
}

/// Convention for the width of a single peak.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WidthKind {
    #[default]
    Stddev,
    Fwhm,
}

impl fmt::Display for WidthKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WidthKind::Stddev => "stddev",
            WidthKind::Fwhm => "fwhm",
        })
    }
}

impl FromStr for WidthKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "stddev" => Ok(WidthKind::Stddev),
            "fwhm" => Ok(WidthKind::Fwhm),
            other => Err(Error::InvalidParameter(format!(
                "unknown width kind {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrthogonalityResult {
    pub theta_star: f64,
    /// The criterion actually applied (never `Auto`).
    pub criterion_used: Criterion,
    pub overlap_at_theta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MacroscopalityReport {
    /// First orthogonality of the reference (single, semiclassical) state.
    pub theta_sing: f64,
    /// First orthogonality of the superposition.
    pub theta_sup: f64,
    /// `theta_sing / theta_sup`.
    pub m_numeric: f64,
    /// Peak separation over the reference width.
    pub m_width: f64,
    pub width_kind: WidthKind,
    pub peaks: Peaks,
    /// Width of the taller superposition peak and of the reference, both per `width_kind`.
    pub widths: (f64, f64),
    pub sup: OrthogonalityResult,
    pub reference: OrthogonalityResult,
}

/// `50 / stddev`; a spectrum without spread never reaches orthogonality.
pub fn default_theta_max(spec: &Spectrum) -> Result<f64> {
    let sd = spec.stddev();
    if sd > 0.0 {
        Ok(DEFAULT_RANGE_IN_STDDEVS / sd)
    } else {
        Err(Error::NoOrthogonality {
            theta_max: f64::INFINITY,
        })
    }
}

#[derive(Default)]
struct Events {
    node: Option<(f64, f64)>,
    crossing: Option<(f64, f64)>,
}

/// Walks the scan grid in order. Stops at the first node, or at the first
/// crossing when no node is being looked for.
fn scan_events(
    spec: &Spectrum,
    theta_max: f64,
    tol_zero: Option<f64>,
    level: Option<f64>,
) -> Events {
    let overlap = |t: f64| spec.char_magnitude(t);
    let denom = (SCAN_POINTS - 1) as f64;
    let theta_at = |i: usize| theta_max * (i as f64 / denom);
    let step = theta_max / denom;
    // a zero inside a grid cell leaves a sample no higher than this
    let candidate_ceiling = tol_zero.map(|tol| tol + spec.half_span() * step);

    let mut events = Events::default();
    let mut before = f64::NAN;
    let mut prev = overlap(0.0);
    for i in 1..SCAN_POINTS {
        let cur = overlap(theta_at(i));

        if let Some(level) = level {
            if events.crossing.is_none() && prev > level && cur <= level {
                events.crossing = Some(bisect_down_crossing(
                    overlap,
                    theta_at(i - 1),
                    theta_at(i),
                    level,
                    BISECT_REL_TOL,
                ));
                if tol_zero.is_none() {
                    return events;
                }
            }
        }

        if let (Some(tol), Some(ceiling)) = (tol_zero, candidate_ceiling) {
            let is_dip = i >= 2 && prev <= before && prev <= cur;
            if is_dip && prev <= ceiling && before.max(cur) > NOISE_FLOOR {
                let (t, value) =
                    golden_section_min(overlap, theta_at(i - 2), theta_at(i), GOLDEN_REL_TOL);
                if value <= tol && is_simple_zero(spec, t) {
                    events.node = Some((t, value));
                    return events;
                }
            }
        }

        before = prev;
        prev = cur;
    }
    events
}

/// `O(t + r)` and `O(t + 2r)` should be in ratio 2 on either side of a
/// simple zero; a smooth minimum gives ~1 and an order-n zero ~2^n.
fn is_simple_zero(spec: &Spectrum, theta: f64) -> bool {
    let r = NODE_PROBE * theta;
    [1.0, -1.0].iter().all(|side| {
        let near = spec.char_magnitude(theta + side * r);
        let far = spec.char_magnitude(theta + side * 2.0 * r);
        near > NOISE_FLOOR && (1.5..=2.5).contains(&(far / near))
    })
}

/// Smallest `theta` in `(0, theta_max]` at which the overlap is orthogonal
/// under `criterion`. `theta_max` defaults to [`default_theta_max`].
pub fn first_orthogonality(
    spec: &Spectrum,
    criterion: Criterion,
    theta_max: Option<f64>,
) -> Result<OrthogonalityResult> {
    criterion.validate()?;
    let theta_max = match theta_max {
        Some(t) if !t.is_finite() || t <= 0.0 => {
            return Err(Error::InvalidRange(format!(
                "theta_max must be > 0, got {t}"
            )))
        }
        Some(t) => t,
        None => default_theta_max(spec)?,
    };

    let result = |(theta_star, overlap_at_theta): (f64, f64), criterion_used| OrthogonalityResult {
        theta_star,
        criterion_used,
        overlap_at_theta,
    };
    let found = match criterion {
        Criterion::FirstZero { tol_zero } => scan_events(spec, theta_max, Some(tol_zero), None)
            .node
            .map(|n| result(n, criterion)),
        Criterion::Threshold { level } => scan_events(spec, theta_max, None, Some(level))
            .crossing
            .map(|c| result(c, criterion)),
        Criterion::Auto => {
            let events = scan_events(spec, theta_max, Some(DEFAULT_TOL_ZERO), Some(DEFAULT_LEVEL));
            events
                .node
                .map(|n| result(n, Criterion::first_zero()))
                .or_else(|| events.crossing.map(|c| result(c, Criterion::threshold())))
        }
    };
    found.ok_or(Error::NoOrthogonality { theta_max })
}

/// `pi / width`, the orthogonality estimate from a single peak's width.
pub fn width_theta_estimate(spec: &Spectrum, width_kind: WidthKind) -> Result<f64> {
    Ok(std::f64::consts::PI / spectrum_width(spec, width_kind)?)
}

fn spectrum_width(spec: &Spectrum, width_kind: WidthKind) -> Result<f64> {
    match width_kind {
        WidthKind::Stddev => match spec.stddev() {
            sd if sd > 0.0 => Ok(sd),
            _ => Err(Error::Degenerate("zero standard deviation".into())),
        },
        WidthKind::Fwhm => spec.fwhm(),
    }
}

fn taller_peak_width(spec: &Spectrum, peaks: &Peaks, width_kind: WidthKind) -> Result<f64> {
    match width_kind {
        WidthKind::Stddev => spec.taller_peak_stddev(),
        WidthKind::Fwhm => Ok(peaks.width),
    }
}

/// Compares a superposition with the reference state it is built from.
///
/// `theta_sup` and `theta_sing` come from [`first_orthogonality`] on `sup`
/// and `reference` with the same criterion; `m_width` divides the peak
/// separation of `sup` by the width of `reference`.
pub fn macroscopality(
    sup: &Spectrum,
    reference: &Spectrum,
    criterion: Criterion,
    width_kind: WidthKind,
) -> Result<MacroscopalityReport> {
    let peaks = sup.detect_peaks()?;
    let sup_result = first_orthogonality(sup, criterion, None)?;
    let ref_result = first_orthogonality(reference, criterion, None)?;
    let ref_width = spectrum_width(reference, width_kind)?;
    let sup_width = taller_peak_width(sup, &peaks, width_kind)?;
    Ok(MacroscopalityReport {
        theta_sing: ref_result.theta_star,
        theta_sup: sup_result.theta_star,
        m_numeric: ref_result.theta_star / sup_result.theta_star,
        m_width: peaks.separation().abs() / ref_width,
        width_kind,
        peaks,
        widths: (sup_width, ref_width),
        sup: sup_result,
        reference: ref_result,
    })
}

/// `(A2 - A1) / width` read straight off a bimodal spectrum, using the
/// taller peak's width.
pub fn separation_over_width(spec: &Spectrum, width_kind: WidthKind) -> Result<f64> {
    let peaks = spec.detect_peaks()?;
    let width = taller_peak_width(spec, &peaks, width_kind)?;
    if width <= 0.0 {
        return Err(Error::Degenerate(
            "peaks are point masses with zero width".into(),
        ));
    }
    Ok(peaks.separation() / width)
}
