//! Analytic overlaps, kept apart from the numeric engine so the two can be
//! checked against each other.

use num_complex::Complex64;

use crate::states::{CoherentCatParams, QubitAngles};

/// `|<alpha| exp(i theta a2) |alpha>| = exp(-theta^2 / 8)`, independent of alpha.
pub fn coherent_self_overlap(theta: f64) -> f64 {
    (-theta * theta / 8.0).exp()
}

/// `2 (1 + exp(-|alpha|^2 (1 - cos 2phi)) cos(|alpha|^2 sin 2phi))`
pub fn coherent_cat_norm(p: &CoherentCatParams) -> f64 {
    let a2 = p.alpha_abs * p.alpha_abs;
    2.0 * (1.0 + (-a2 * (1.0 - (2.0 * p.phi).cos())).exp() * (a2 * (2.0 * p.phi).sin()).cos())
}

/// Overlap of the coherent cat with its displaced copy,
/// `|2 exp(-theta^2/8) / norm * (cos(theta |alpha| sin phi) + exp(-|alpha|^2 (1 - cos 2phi)) cos(|alpha|^2 sin 2phi))|`.
pub fn coherent_cat_overlap(p: &CoherentCatParams, theta: f64) -> f64 {
    let a2 = p.alpha_abs * p.alpha_abs;
    let residual = (-a2 * (1.0 - (2.0 * p.phi).cos())).exp() * (a2 * (2.0 * p.phi).sin()).cos();
    let oscillation = (theta * p.alpha_abs * p.phi.sin()).cos();
    (2.0 * coherent_self_overlap(theta) / coherent_cat_norm(p) * (oscillation + residual)).abs()
}

/// Per-qubit factorization of the spin-cat overlap:
/// `|sum_ab m_ab^N| / (2 (1 + cos^N eps))`, `m_ab = c_a c_b e^{i theta/2} + s_a s_b e^{-i theta/2}`.
pub fn qubit_overlap_closed(p: &QubitAngles, theta: f64) -> f64 {
    let angles = [p.phi + p.eps / 2.0, p.phi - p.eps / 2.0];
    let up = Complex64::cis(theta / 2.0);
    let down = up.conj();
    let mut total = Complex64::new(0.0, 0.0);
    for a in angles {
        for b in angles {
            let m = a.cos() * b.cos() * up + a.sin() * b.sin() * down;
            total += m.powu(p.n_qubits);
        }
    }
    total.norm() / (2.0 * (1.0 + p.eps.cos().powi(p.n_qubits as i32)))
}

/// `|cos^N eps|`, the overlap of the two spin-cat components.
pub fn component_overlap_qubits(n: u32, eps: f64) -> f64 {
    eps.cos().abs().powi(n as i32)
}

/// `exp(-D^2 / 2)`
pub fn decoherence_factor(distance: f64) -> f64 {
    (-distance * distance / 2.0).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn self_overlap_values() {
        assert_eq!(coherent_self_overlap(0.0), 1.0);
        assert_abs_diff_eq!(
            coherent_self_overlap(2.0 * 2f64.sqrt()),
            (-1.0f64).exp(),
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            coherent_self_overlap(2.0),
            0.606_530_659_712_633_4,
            epsilon = 1e-15
        );
    }

    #[test]
    fn cat_norm_limits() {
        assert_eq!(
            coherent_cat_norm(&CoherentCatParams::new(0.0, 0.7).unwrap()),
            4.0
        );
        let orth = coherent_cat_norm(&CoherentCatParams::new(3.0, PI / 2.0).unwrap());
        assert_abs_diff_eq!(orth, 2.0 * (1.0 + (-18.0f64).exp()), epsilon = 1e-12);
        let brune = coherent_cat_norm(&CoherentCatParams::new(3.1, 0.5).unwrap());
        assert_abs_diff_eq!(brune, 1.994_440_283_217_068_2, epsilon = 1e-12);
    }

    #[test]
    fn cat_overlap_unit_at_origin() {
        for (a, phi) in [(0.5, 0.3), (3.1, 0.5), (2.0, 1.5)] {
            let p = CoherentCatParams::new(a, phi).unwrap();
            assert_abs_diff_eq!(coherent_cat_overlap(&p, 0.0), 1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn cat_overlap_reference_values() {
        let p = CoherentCatParams::new(3.1, 0.5).unwrap();
        for (theta, want) in [
            (0.3, 0.891_874_891_111_914_4),
            (0.5, 0.713_000_276_123_023_7),
            (1.0, 0.072_297_886_579_460_57),
            (2.0, 0.601_231_351_901_322_4),
        ] {
            assert_abs_diff_eq!(coherent_cat_overlap(&p, theta), want, epsilon = 1e-12);
        }
    }

    #[test]
    fn qubit_closed_single_spin_zero() {
        let p = QubitAngles::balanced(0.8, 1).unwrap();
        assert_abs_diff_eq!(qubit_overlap_closed(&p, 0.0), 1.0, epsilon = 1e-15);
        assert!(qubit_overlap_closed(&p, PI) < 1e-15);
    }

    #[test]
    fn qubit_closed_product_limit() {
        // eps = 0: the binomial characteristic function |p e^{i t/2} + q e^{-i t/2}|^N
        let (phi, n, theta) = (0.4f64, 11, 0.9f64);
        let p = QubitAngles::new(phi, 0.0, n).unwrap();
        let (c2, s2) = (phi.cos().powi(2), phi.sin().powi(2));
        let single = (c2 * Complex64::cis(theta / 2.0) + s2 * Complex64::cis(-theta / 2.0)).norm();
        assert_abs_diff_eq!(
            qubit_overlap_closed(&p, theta),
            single.powi(n as i32),
            epsilon = 1e-14
        );
    }

    #[test]
    fn component_overlap_values() {
        assert_eq!(component_overlap_qubits(100, 0.0), 1.0);
        let eps = (-1.0f64 / 30.0).exp().acos();
        assert_abs_diff_eq!(
            component_overlap_qubits(30, eps),
            (-1.0f64).exp(),
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(
            component_overlap_qubits(100, 0.3),
            0.010_366_606,
            epsilon = 1e-9
        );
    }

    #[test]
    fn decoherence_matches_distance_squared() {
        assert_eq!(decoherence_factor(0.0), 1.0);
        let d = 2.0 * 3.1 * 0.5f64.sin();
        assert_abs_diff_eq!(
            decoherence_factor(d),
            0.012_062_005_106_402_516,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(-2.0 * decoherence_factor(d).ln(), d * d, epsilon = 1e-12);
    }
}
