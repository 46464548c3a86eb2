//! Spectra of the state families: number-state cats, coherent states, spin
//! ensembles, coherent-state cats in quadrature space, slit apertures.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use serde::Serialize;
use statrs::function::erf::erfc;
use statrs::function::factorial::{ln_binomial, ln_factorial};

use crate::error::{Error, Result};
use crate::spectrum::{DiscreteSpectrum, GridDensity, Spectrum};

/// Poisson tail beyond the cutoff must be below this.
pub const POISSON_TAIL_TOL: f64 = 1e-12;
/// Largest tolerated density mass outside a construction grid.
pub const GRID_TAIL_TOL: f64 = 1e-6;
/// Quadrature dispersion of a coherent state.
pub const COHERENT_QUADRATURE_SIGMA: f64 = 0.5;

pub const CAT_GRID_MARGIN: f64 = 3.0;
pub const CAT_GRID_POINTS: usize = 4096;
pub const GAUSSIAN_GRID_HALF_WIDTH: f64 = 8.0;
pub const GAUSSIAN_GRID_POINTS: usize = 2048;
pub const SLIT_POINTS_PER_WIDTH: usize = 256;

/// Uniform sampling grid `[a_min, a_max]` with `points` samples, ends included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid {
    pub a_min: f64,
    pub a_max: f64,
    pub points: usize,
}

impl Grid {
    pub fn new(a_min: f64, a_max: f64, points: usize) -> Result<Self> {
        if !a_min.is_finite() || !a_max.is_finite() || a_max <= a_min {
            return Err(Error::InvalidRange(format!(
                "grid [{a_min}, {a_max}] is empty"
            )));
        }
        if points < 16 {
            return Err(Error::InvalidRange(format!(
                "grid needs at least 16 points, got {points}"
            )));
        }
        Ok(Grid {
            a_min,
            a_max,
            points,
        })
    }

    pub fn step(&self) -> f64 {
        (self.a_max - self.a_min) / (self.points - 1) as f64
    }

    pub fn abscissae(&self) -> impl Iterator<Item = f64> + '_ {
        let step = self.step();
        (0..self.points).map(move |i| {
            if i + 1 == self.points {
                self.a_max
            } else {
                self.a_min + i as f64 * step
            }
        })
    }
}

/// `(|0,N> + |N,0>)/sqrt(2)` on `(n1 - n2)/2`: two half weights at `-N/2` and `+N/2`.
pub fn fock_cat_spectrum(n: u32) -> Result<Spectrum> {
    if n == 0 {
        return Err(Error::InvalidParameter("photon number must be >= 1".into()));
    }
    let half = n as f64 / 2.0;
    Ok(DiscreteSpectrum::new([(-half, 0.5), (half, 0.5)])?.into())
}

/// `ceil(mean + 10 sqrt(mean) + 12)`, comfortably past the tail tolerance.
pub fn default_poisson_cutoff(mean: f64) -> usize {
    (mean + 10.0 * mean.sqrt() + 12.0).ceil() as usize
}

/// Poisson(`mean`) weights on eigenvalues `scale * n`, `n = 0..=cutoff`,
/// renormalized after truncation.
pub fn poisson_spectrum(mean: f64, cutoff: usize, scale: f64) -> Result<Spectrum> {
    if !mean.is_finite() || mean <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "Poisson mean must be > 0, got {mean}"
        )));
    }
    if !scale.is_finite() || scale <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "eigenvalue scale must be > 0, got {scale}"
        )));
    }
    if (cutoff as f64) < mean + 10.0 * mean.sqrt() {
        return Err(Error::CutoffTooSmall { mean, cutoff });
    }
    let ln_mean = mean.ln();
    let weights: Vec<f64> = (0..=cutoff)
        .map(|n| (n as f64 * ln_mean - mean - ln_factorial(n as u64)).exp())
        .collect();
    let kept: f64 = weights.iter().sum();
    if 1.0 - kept > POISSON_TAIL_TOL {
        return Err(Error::CutoffTooSmall { mean, cutoff });
    }
    let points = weights
        .into_iter()
        .enumerate()
        .map(|(n, w)| (scale * n as f64, w));
    Ok(DiscreteSpectrum::from_unnormalized(points)?.into())
}

/// `|alpha> (x) |0>` with `|alpha|^2 = mean_n`, on `(n1 - n2)/2`.
pub fn coherent_halfdiff_spectrum(mean_n: f64, cutoff: usize) -> Result<Spectrum> {
    poisson_spectrum(mean_n, cutoff, 0.5)
}

/// Single-mode coherent state on the number operator.
pub fn coherent_number_spectrum(mean_n: f64, cutoff: usize) -> Result<Spectrum> {
    poisson_spectrum(mean_n, cutoff, 1.0)
}

/// Two spin-coherent product states `|phi +- eps/2>^N` in superposition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QubitAngles {
    pub phi: f64,
    pub eps: f64,
    pub n_qubits: u32,
}

impl QubitAngles {
    pub fn new(phi: f64, eps: f64, n_qubits: u32) -> Result<Self> {
        if !phi.is_finite() || !eps.is_finite() || !(0.0..PI).contains(&eps) {
            return Err(Error::InvalidParameter(format!(
                "need finite phi and 0 <= eps < pi, got phi={phi}, eps={eps}"
            )));
        }
        if n_qubits == 0 {
            return Err(Error::InvalidParameter("need at least one qubit".into()));
        }
        Ok(QubitAngles { phi, eps, n_qubits })
    }

    /// `phi = pi/4`, where the two components sit symmetrically about zero.
    pub fn balanced(eps: f64, n_qubits: u32) -> Result<Self> {
        Self::new(PI / 4.0, eps, n_qubits)
    }
}

/// `ln|x|` and the sign of `x`; the power `x^0` is handled by the caller.
fn ln_abs(x: f64) -> (f64, f64) {
    (x.abs().ln(), if x < 0.0 { -1.0 } else { 1.0 })
}

/// `k ln|c| + (N-k) ln|s|` and its sign, with `0^0 = 1`.
fn ln_term(k: u32, n: u32, c: (f64, f64), s: (f64, f64)) -> (f64, f64) {
    let part = |power: u32, (ln, sign): (f64, f64)| {
        if power == 0 {
            (0.0, 1.0)
        } else {
            (power as f64 * ln, if power % 2 == 1 { sign } else { 1.0 })
        }
    };
    let (lc, sc) = part(k, c);
    let (ls, ss) = part(n - k, s);
    (lc + ls, sc * ss)
}

/// Unnormalized log-weights `ln[C(N,k) (c+^k s+^(N-k) + c-^k s-^(N-k))^2]`.
fn superposition_ln_weights(p: &QubitAngles) -> Vec<f64> {
    let n = p.n_qubits;
    let (up, down) = (p.phi + p.eps / 2.0, p.phi - p.eps / 2.0);
    let (cp, sp) = (ln_abs(up.cos()), ln_abs(up.sin()));
    let (cm, sm) = (ln_abs(down.cos()), ln_abs(down.sin()));
    (0..=n)
        .map(|k| {
            let (lp, signp) = ln_term(k, n, cp, sp);
            let (lm, signm) = ln_term(k, n, cm, sm);
            let top = lp.max(lm);
            if top == f64::NEG_INFINITY {
                return f64::NEG_INFINITY;
            }
            let amp = signp * (lp - top).exp() + signm * (lm - top).exp();
            ln_binomial(n as u64, k as u64) + 2.0 * (top + amp.abs().ln())
        })
        .collect()
}

fn from_ln_weights(ln_weights: &[f64], n: u32) -> Result<Spectrum> {
    let top = ln_weights.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let half = n as f64 / 2.0;
    let points = ln_weights
        .iter()
        .enumerate()
        .map(|(k, lw)| (k as f64 - half, (lw - top).exp()))
        .filter(|&(_, w)| w > 0.0);
    Ok(DiscreteSpectrum::from_unnormalized(points)?.into())
}

/// Exact distribution of the collective spin `S_r` (eigenvalues `k - N/2`)
/// for `(|phi+>^N + |phi->^N)` with `|phi+->` at angles `phi +- eps/2`.
pub fn qubit_superposition_spectrum(p: &QubitAngles) -> Result<Spectrum> {
    from_ln_weights(&superposition_ln_weights(p), p.n_qubits)
}

/// Sum of the unnormalized superposition weights; equals `2 (1 + cos^N eps)`.
pub fn qubit_superposition_norm(p: &QubitAngles) -> f64 {
    superposition_ln_weights(p).iter().map(|lw| lw.exp()).sum()
}

/// Product state of `n_qubits` spins each at `angle`: binomial with
/// `P(up) = cos^2(angle)` on eigenvalues `k - N/2`.
pub fn qubit_product_spectrum(n_qubits: u32, angle: f64) -> Result<Spectrum> {
    if n_qubits == 0 {
        return Err(Error::InvalidParameter("need at least one qubit".into()));
    }
    if !angle.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "angle must be finite, got {angle}"
        )));
    }
    let (c, s) = (ln_abs(angle.cos()), ln_abs(angle.sin()));
    let ln_weights: Vec<f64> = (0..=n_qubits)
        .map(|k| {
            let (l, _) = ln_term(k, n_qubits, c, s);
            ln_binomial(n_qubits as u64, k as u64) + 2.0 * l
        })
        .collect();
    from_ln_weights(&ln_weights, n_qubits)
}

/// GHZ state and its spin-coherent reference: `(|0>^n + |1>^n)/sqrt(2)` as a
/// two-point spectrum at `+-n/2`, and binomial(n, 1/2) on `k - n/2`.
pub fn ghz_spectra(n: u32) -> Result<(Spectrum, Spectrum)> {
    let sup = fock_cat_spectrum(n)?;
    let reference = qubit_product_spectrum(n, PI / 4.0)?;
    Ok((sup, reference))
}

/// Coherent states `|alpha e^{+-i phi}>` in superposition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoherentCatParams {
    pub alpha_abs: f64,
    pub phi: f64,
}

impl CoherentCatParams {
    pub fn new(alpha_abs: f64, phi: f64) -> Result<Self> {
        if !alpha_abs.is_finite() || alpha_abs < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "|alpha| must be >= 0, got {alpha_abs}"
            )));
        }
        if !(phi > 0.0 && phi <= PI / 2.0) {
            return Err(Error::InvalidParameter(format!(
                "phi must lie in (0, pi/2], got {phi}"
            )));
        }
        Ok(CoherentCatParams { alpha_abs, phi })
    }

    /// Component centres on the quadrature axis, `+-|alpha| sin phi`.
    pub fn displacement(&self) -> f64 {
        self.alpha_abs * self.phi.sin()
    }

    /// Relative phase between the components, `|alpha|^2 sin 2phi`.
    pub fn relative_phase(&self) -> f64 {
        self.alpha_abs * self.alpha_abs * (2.0 * self.phi).sin()
    }

    /// Superposition distance `2 |alpha| sin phi`.
    pub fn distance(&self) -> f64 {
        2.0 * self.displacement()
    }

    /// `exp(-2 x0^2) cos(delta)`: the interference weight relative to one component.
    fn cross_weight(&self) -> f64 {
        let x0 = self.displacement();
        (-2.0 * x0 * x0).exp() * self.relative_phase().cos()
    }
}

/// Normal density with standard deviation `sigma` centred on `mean`.
fn normal_pdf(x: f64, mean: f64, sigma: f64) -> f64 {
    let z = (x - mean) / sigma;
    (-0.5 * z * z).exp() / (sigma * (2.0 * PI).sqrt())
}

/// Mass of `N(mean, sigma)` outside `[a_min, a_max]`.
fn normal_tail(mean: f64, sigma: f64, grid: &Grid) -> f64 {
    let below = 0.5 * erfc((mean - grid.a_min) / sigma * FRAC_1_SQRT_2);
    let above = 0.5 * erfc((grid.a_max - mean) / sigma * FRAC_1_SQRT_2);
    below + above
}

pub fn default_cat_grid(p: &CoherentCatParams) -> Grid {
    let half = p.displacement() + CAT_GRID_MARGIN;
    Grid {
        a_min: -half,
        a_max: half,
        points: CAT_GRID_POINTS,
    }
}

/// Quadrature distribution of the coherent cat,
/// `[g(x - x0) + g(x + x0) + 2 exp(-2 x0^2) cos(delta) g(x)] / norm`
/// with `g` the coherent-state marginal (sigma 1/2), `x0 = |alpha| sin phi`
/// and `delta = |alpha|^2 sin 2phi`. `grid` defaults to [`default_cat_grid`].
pub fn coherent_cat_quadrature_density(
    p: &CoherentCatParams,
    grid: Option<Grid>,
) -> Result<Spectrum> {
    if p.alpha_abs == 0.0 {
        return Err(Error::InvalidSeparation(
            "|alpha| = 0 puts both components on top of each other".into(),
        ));
    }
    let grid = grid.unwrap_or_else(|| default_cat_grid(p));
    let sigma = COHERENT_QUADRATURE_SIGMA;
    let x0 = p.displacement();
    let cross = 2.0 * p.cross_weight();
    let norm = 2.0 + cross;
    let tail = (normal_tail(x0, sigma, &grid)
        + normal_tail(-x0, sigma, &grid)
        + cross.abs() * normal_tail(0.0, sigma, &grid))
        / norm;
    if tail > GRID_TAIL_TOL {
        return Err(Error::GridTooNarrow { tail_mass: tail });
    }
    let values = grid
        .abscissae()
        .map(|x| {
            let v = normal_pdf(x, x0, sigma)
                + normal_pdf(x, -x0, sigma)
                + cross * normal_pdf(x, 0.0, sigma);
            // the cross term can dip a hair below zero in rounding
            (v / norm).max(0.0)
        })
        .collect();
    // must already integrate to one; no rescaling
    Ok(GridDensity::new(grid.a_min, grid.a_max, values)?.into())
}

pub fn default_gaussian_grid(mean: f64, sigma: f64) -> Grid {
    let half = GAUSSIAN_GRID_HALF_WIDTH * sigma;
    Grid {
        a_min: mean - half,
        a_max: mean + half,
        points: GAUSSIAN_GRID_POINTS,
    }
}

/// Normal density on `grid` (default `mean +- 8 sigma`, 2048 points).
pub fn gaussian_density(mean: f64, sigma: f64, grid: Option<Grid>) -> Result<Spectrum> {
    if !mean.is_finite() || !sigma.is_finite() || sigma <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "need finite mean and sigma > 0, got {mean}, {sigma}"
        )));
    }
    let grid = grid.unwrap_or_else(|| default_gaussian_grid(mean, sigma));
    let tail = normal_tail(mean, sigma, &grid);
    if tail > GRID_TAIL_TOL {
        return Err(Error::GridTooNarrow { tail_mass: tail });
    }
    let values = grid
        .abscissae()
        .map(|x| normal_pdf(x, mean, sigma))
        .collect();
    Ok(GridDensity::from_unnormalized(grid.a_min, grid.a_max, values)?.into())
}

/// Open interval `(center - width/2, center + width/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Slit {
    pub center: f64,
    pub width: f64,
}

impl Slit {
    fn edges(&self) -> (f64, f64) {
        (
            self.center - self.width / 2.0,
            self.center + self.width / 2.0,
        )
    }
}

fn validate_slits(slits: &[Slit]) -> Result<Vec<Slit>> {
    if slits.is_empty() {
        return Err(Error::InvalidParameter("need at least one slit".into()));
    }
    if let Some(s) = slits
        .iter()
        .find(|s| !s.center.is_finite() || !s.width.is_finite() || s.width <= 0.0)
    {
        return Err(Error::InvalidParameter(format!(
            "slit at {} has width {}",
            s.center, s.width
        )));
    }
    let mut sorted = slits.to_vec();
    sorted.sort_by(|a, b| a.center.total_cmp(&b.center));
    for pair in sorted.windows(2) {
        if pair[0].edges().1 > pair[1].edges().0 {
            return Err(Error::OverlappingSlits(format!(
                "slits at {} and {} overlap",
                pair[0].center, pair[1].center
            )));
        }
    }
    Ok(sorted)
}

/// Spans the slits edge to edge with 256 samples per narrowest width.
pub fn default_slit_grid(slits: &[Slit]) -> Result<Grid> {
    let sorted = validate_slits(slits)?;
    let a_min = sorted[0].edges().0;
    let a_max = sorted[sorted.len() - 1].edges().1;
    let narrowest = sorted.iter().map(|s| s.width).fold(f64::INFINITY, f64::min);
    let dx = narrowest / SLIT_POINTS_PER_WIDTH as f64;
    let points = ((a_max - a_min) / dx).round() as usize + 1;
    Grid::new(a_min, a_max, points)
}

/// Uniform amplitude across every slit. Samples falling on a slit edge inside
/// the grid get half weight so the trapezoid rule integrates the step exactly.
pub fn slit_aperture_density(slits: &[Slit], grid: Option<Grid>) -> Result<Spectrum> {
    let sorted = validate_slits(slits)?;
    let grid = match grid {
        Some(g) => g,
        None => default_slit_grid(&sorted)?,
    };
    let edge_tol = 1e-9 * grid.step();
    let last = grid.points - 1;
    let values = grid
        .abscissae()
        .enumerate()
        .map(|(i, x)| {
            sorted
                .iter()
                .map(|s| {
                    let (lo, hi) = s.edges();
                    let on_lo = (x - lo).abs() <= edge_tol;
                    let on_hi = (x - hi).abs() <= edge_tol;
                    // the trapezoid rule already halves the grid ends
                    if (on_lo && i == 0) || (on_hi && i == last) {
                        1.0
                    } else if on_lo || on_hi {
                        0.5
                    } else if x > lo && x < hi {
                        1.0
                    } else {
                        0.0
                    }
                })
                .sum::<f64>()
        })
        .collect();
    Ok(GridDensity::from_unnormalized(grid.a_min, grid.a_max, values)?.into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn fock_cat_points() {
        let s = fock_cat_spectrum(20).unwrap();
        let Spectrum::Discrete(d) = &s else { panic!() };
        assert_eq!(d.eigenvalues(), &[-10.0, 10.0]);
        assert_eq!(d.weights(), &[0.5, 0.5]);
        assert!(fock_cat_spectrum(0).is_err());
    }

    #[test]
    fn poisson_moments_and_cutoff() {
        let s = coherent_halfdiff_spectrum(20.0, default_poisson_cutoff(20.0)).unwrap();
        let (mean, sd) = s.moments();
        assert_abs_diff_eq!(mean, 10.0, epsilon = 1e-9);
        assert_abs_diff_eq!(sd, 20f64.sqrt() / 2.0, epsilon = 1e-9);
        assert!(matches!(
            coherent_halfdiff_spectrum(1.0, 3),
            Err(Error::CutoffTooSmall { .. })
        ));
    }

    #[test]
    fn qubit_single_spin_balanced_is_uniform() {
        for eps in [0.0, 0.3, 1.2, 3.0] {
            let s = qubit_superposition_spectrum(&QubitAngles::balanced(eps, 1).unwrap()).unwrap();
            let Spectrum::Discrete(d) = &s else { panic!() };
            assert_eq!(d.eigenvalues(), &[-0.5, 0.5]);
            assert_abs_diff_eq!(d.weights()[0], 0.5, epsilon = 1e-15);
        }
    }

    #[test]
    fn qubit_identical_components_give_binomial() {
        let phi = 0.6;
        let sup = qubit_superposition_spectrum(&QubitAngles::new(phi, 0.0, 7).unwrap()).unwrap();
        let prod = qubit_product_spectrum(7, phi).unwrap();
        let (Spectrum::Discrete(a), Spectrum::Discrete(b)) = (&sup, &prod) else {
            panic!()
        };
        for (x, y) in a.weights().iter().zip(b.weights()) {
            assert_abs_diff_eq!(x, y, epsilon = 1e-14);
        }
    }

    #[test]
    fn qubit_norm_at_one_over_e_overlap() {
        let n = 50;
        let eps = (-1.0 / n as f64).exp().acos();
        let norm = qubit_superposition_norm(&QubitAngles::balanced(eps, n).unwrap());
        assert_abs_diff_eq!(norm, 2.0 * (1.0 + (-1.0f64).exp()), epsilon = 1e-9);
    }

    #[test]
    fn qubit_large_n_does_not_underflow() {
        let s =
            qubit_superposition_spectrum(&QubitAngles::balanced(0.05, 20_000).unwrap()).unwrap();
        assert!(s.detect_peaks().is_ok());
    }

    #[test]
    fn product_aligned_is_delta() {
        let s = qubit_product_spectrum(4, 0.0).unwrap();
        let Spectrum::Discrete(d) = &s else { panic!() };
        assert_eq!(d.eigenvalues(), &[2.0]);
    }

    #[test]
    fn product_moments() {
        let s = qubit_product_spectrum(100, PI / 4.0).unwrap();
        let (mean, sd) = s.moments();
        assert_abs_diff_eq!(mean, 0.0, epsilon = 1e-9);
        assert_abs_diff_eq!(sd, 5.0, epsilon = 1e-9);
    }

    #[test]
    fn cat_rejects_zero_amplitude() {
        let p = CoherentCatParams::new(0.0, 0.5).unwrap();
        assert!(matches!(
            coherent_cat_quadrature_density(&p, None),
            Err(Error::InvalidSeparation(_))
        ));
        assert!(CoherentCatParams::new(1.0, 0.0).is_err());
    }

    #[test]
    fn cat_orthogonal_components_are_two_gaussians() {
        let p = CoherentCatParams::new(4.0, PI / 2.0).unwrap();
        let cat = coherent_cat_quadrature_density(&p, None).unwrap();
        let kernel = gaussian_density(0.0, 0.5, Some(Grid::new(-3.0, 3.0, 1201).unwrap())).unwrap();
        let pair = crate::spectrum::bimodal_compose(&kernel, -4.0, 4.0).unwrap();
        for theta in [0.1, 0.7, 2.0] {
            assert_abs_diff_eq!(
                cat.char_magnitude(theta),
                pair.char_magnitude(theta),
                epsilon = 1e-6
            );
        }
    }

    #[test]
    fn narrow_grids_are_rejected() {
        let g = Grid::new(-1.0, 1.0, 64).unwrap();
        assert!(matches!(
            gaussian_density(0.0, 1.0, Some(g)),
            Err(Error::GridTooNarrow { .. })
        ));
        let p = CoherentCatParams::new(3.1, 0.5).unwrap();
        assert!(matches!(
            coherent_cat_quadrature_density(&p, Some(g)),
            Err(Error::GridTooNarrow { .. })
        ));
        assert!(gaussian_density(0.0, 0.0, None).is_err());
    }

    #[test]
    fn gaussian_stddev() {
        assert_abs_diff_eq!(
            gaussian_density(0.0, 1.0, None).unwrap().stddev(),
            1.0,
            epsilon = 1e-4
        );
    }

    #[test]
    fn single_slit_width_and_zero() {
        let d = 50e-9;
        let s = slit_aperture_density(
            &[Slit {
                center: 0.0,
                width: d,
            }],
            None,
        )
        .unwrap();
        assert_abs_diff_eq!(s.fwhm().unwrap(), d, epsilon = 1e-3 * d);
        let u = 2.0 * PI / d;
        assert!(s.char_magnitude(u) < 1e-9);
    }

    #[test]
    fn overlapping_slits() {
        let slits = [
            Slit {
                center: 0.0,
                width: 2.0,
            },
            Slit {
                center: 1.5,
                width: 2.0,
            },
        ];
        assert!(matches!(
            slit_aperture_density(&slits, None),
            Err(Error::OverlappingSlits(_))
        ));
        assert!(slit_aperture_density(&[], None).is_err());
    }
}
