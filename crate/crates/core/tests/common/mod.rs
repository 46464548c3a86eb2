//! Randomized spectra and the invariants every spectrum must satisfy. Shared
//! by the property suite and the acceptance run.
#![allow(dead_code)]

pub mod bin;

use std::f64::consts::PI;

use macroscopality::states::{
    coherent_number_spectrum, default_poisson_cutoff, gaussian_density, Grid, QubitAngles,
};
use macroscopality::{
    bimodal_compose, first_orthogonality, macroscopality, Criterion, DiscreteSpectrum, GridDensity,
    Spectrum, WidthKind,
};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

pub const CASES: u32 = 128;

pub fn discrete() -> impl Strategy<Value = Spectrum> {
    prop::collection::vec((-50.0f64..50.0, 0.01f64..1.0), 1..40)
        .prop_map(|pts| DiscreteSpectrum::from_unnormalized(pts).unwrap().into())
}

pub fn density() -> impl Strategy<Value = Spectrum> {
    (
        -20.0f64..0.0,
        0.5f64..20.0,
        prop::collection::vec(0.0f64..1.0, 16..300),
    )
        .prop_filter_map("all-zero samples", |(lo, span, values)| {
            GridDensity::from_unnormalized(lo, lo + span, values)
                .ok()
                .map(Spectrum::from)
        })
}

/// Densities that vanish at both grid ends, as a sampled continuous state does.
pub fn tapered_density() -> impl Strategy<Value = Spectrum> {
    (
        -20.0f64..0.0,
        0.5f64..20.0,
        prop::collection::vec(0.0f64..1.0, 16..300),
    )
        .prop_filter_map("all-zero samples", |(lo, span, mut values)| {
            let last = values.len() - 1;
            values[0] = 0.0;
            values[last] = 0.0;
            GridDensity::from_unnormalized(lo, lo + span, values)
                .ok()
                .map(Spectrum::from)
        })
}

pub fn spectrum() -> impl Strategy<Value = Spectrum> {
    prop_oneof![discrete(), density()]
}

/// Kernel plus two peak positions; density shifts are whole grid steps.
pub fn composition() -> impl Strategy<Value = (Spectrum, f64, f64)> {
    (
        prop_oneof![discrete(), tapered_density()],
        -30.0f64..30.0,
        1usize..400,
    )
        .prop_map(|(kernel, a1, k)| {
            let gap = match &kernel {
                Spectrum::Density(g) => k as f64 * g.step(),
                Spectrum::Discrete(_) => 0.1 * k as f64,
            };
            (kernel, a1, a1 + gap)
        })
}

fn close(a: f64, b: f64, tol: f64, what: &str) -> Result<(), TestCaseError> {
    if (a - b).abs() <= tol {
        Ok(())
    } else {
        Err(TestCaseError::fail(format!(
            "{what}: {a} vs {b} (tol {tol:e})"
        )))
    }
}

pub fn normalization(s: &Spectrum) -> Result<(), TestCaseError> {
    close(s.char_magnitude(0.0), 1.0, 1e-6, "O(0)")
}

pub fn bound(s: &Spectrum, theta: f64) -> Result<(), TestCaseError> {
    prop_assert!(s.char_magnitude(theta) <= 1.0 + 1e-6);
    Ok(())
}

pub fn evenness(s: &Spectrum, theta: f64) -> Result<(), TestCaseError> {
    prop_assert_eq!(s.char_magnitude(-theta), s.char_magnitude(theta));
    Ok(())
}

pub fn shift_invariance(s: &Spectrum, shift: f64, theta: f64) -> Result<(), TestCaseError> {
    let moved = s.translated(shift).unwrap();
    close(
        moved.char_magnitude(theta),
        s.char_magnitude(theta),
        1e-9,
        "shifted O",
    )
}

pub fn scale_covariance(s: &Spectrum, factor: f64, theta: f64) -> Result<(), TestCaseError> {
    let scaled = s.scaled(factor).unwrap();
    close(
        scaled.char_magnitude(theta),
        s.char_magnitude(factor * theta),
        1e-9,
        "scaled O",
    )
}

/// `theta*` of the scaled spectrum is `theta* / factor`; both sides agree on failure.
pub fn theta_star_covariance(s: &Spectrum, factor: f64) -> Result<(), TestCaseError> {
    let scaled = s.scaled(factor).unwrap();
    let c = Criterion::threshold();
    match (
        first_orthogonality(s, c, None),
        first_orthogonality(&scaled, c, None),
    ) {
        (Ok(a), Ok(b)) => close(
            b.theta_star * factor,
            a.theta_star,
            1e-6 * a.theta_star,
            "theta* scaling",
        ),
        (Err(a), Err(b)) => {
            prop_assert_eq!(a.name(), b.name());
            Ok(())
        }
        (a, b) => Err(TestCaseError::fail(format!("{a:?} vs {b:?}"))),
    }
}

/// Coarse Gaussian kernel and its pair `steps` grid cells apart.
pub fn coarse_pair(sigma: f64, steps: usize) -> (Spectrum, Spectrum) {
    let kernel = gaussian_density(
        0.0,
        sigma,
        Some(Grid::new(-8.0 * sigma, 8.0 * sigma, 129).unwrap()),
    )
    .unwrap();
    let step = 16.0 * sigma / 128.0;
    let pair = bimodal_compose(&kernel, 0.0, steps as f64 * step).unwrap();
    (pair, kernel)
}

/// Both ratios survive scaling every eigenvalue of both states.
pub fn ratio_invariance(sigma: f64, steps: usize, factor: f64) -> Result<(), TestCaseError> {
    let (sup, reference) = coarse_pair(sigma, steps);
    let base = macroscopality(&sup, &reference, Criterion::Auto, WidthKind::Stddev).unwrap();
    let scaled = macroscopality(
        &sup.scaled(factor).unwrap(),
        &reference.scaled(factor).unwrap(),
        Criterion::Auto,
        WidthKind::Stddev,
    )
    .unwrap();
    close(
        scaled.m_numeric,
        base.m_numeric,
        1e-6 * base.m_numeric,
        "m_numeric",
    )?;
    close(scaled.m_width, base.m_width, 1e-6 * base.m_width, "m_width")?;
    close(
        scaled.theta_sup * factor,
        base.theta_sup,
        1e-6 * base.theta_sup,
        "theta_sup",
    )?;
    close(
        scaled.theta_sing * factor,
        base.theta_sing,
        1e-6 * base.theta_sing,
        "theta_sing",
    )
}

/// Translating either state moves the peaks and nothing else.
pub fn report_shift_invariance(sigma: f64, steps: usize, shift: f64) -> Result<(), TestCaseError> {
    let (sup, reference) = coarse_pair(sigma, steps);
    let base = macroscopality(&sup, &reference, Criterion::Auto, WidthKind::Stddev).unwrap();
    let moved = macroscopality(
        &sup.translated(shift).unwrap(),
        &reference.translated(-shift).unwrap(),
        Criterion::Auto,
        WidthKind::Stddev,
    )
    .unwrap();
    close(
        moved.m_numeric,
        base.m_numeric,
        1e-9 * base.m_numeric,
        "m_numeric",
    )?;
    close(moved.m_width, base.m_width, 1e-9 * base.m_width, "m_width")?;
    close(
        moved.peaks.a1,
        base.peaks.a1 + shift,
        1e-9 * (1.0 + shift.abs()),
        "a1",
    )?;
    close(
        moved.peaks.a2,
        base.peaks.a2 + shift,
        1e-9 * (1.0 + shift.abs()),
        "a2",
    )
}

pub fn product_form(kernel: &Spectrum, a1: f64, a2: f64, theta: f64) -> Result<(), TestCaseError> {
    let pair = bimodal_compose(kernel, a1, a2).unwrap();
    let expected = (theta * (a2 - a1) / 2.0).cos().abs() * kernel.char_magnitude(theta);
    close(pair.char_magnitude(theta), expected, 1e-6, "product form")
}

/// Lower threshold, later crossing.
pub fn threshold_monotone(s: &Spectrum, l1: f64, l2: f64) -> Result<(), TestCaseError> {
    let (lo, hi) = (l1.min(l2), l1.max(l2));
    let at = |level| {
        first_orthogonality(s, Criterion::Threshold { level }, None)
            .unwrap()
            .theta_star
    };
    prop_assert!(
        at(lo) >= at(hi),
        "level {lo} -> {}, level {hi} -> {}",
        at(lo),
        at(hi)
    );
    Ok(())
}

pub fn enveloped() -> impl Strategy<Value = Spectrum> {
    prop_oneof![
        (0.1f64..10.0).prop_map(|sigma| gaussian_density(0.0, sigma, None).unwrap()),
        (1.0f64..200.0).prop_map(|mean| coherent_number_spectrum(
            mean,
            default_poisson_cutoff(mean)
        )
        .unwrap()),
    ]
}

/// First zero of the two-point spectrum `+-delta/2` sits at `pi/delta`.
pub fn two_point_zero(log_delta: f64) -> Result<(), TestCaseError> {
    let delta = 10f64.powf(log_delta);
    let s: Spectrum = DiscreteSpectrum::new([(-delta / 2.0, 0.5), (delta / 2.0, 0.5)])
        .unwrap()
        .into();
    let r = first_orthogonality(&s, Criterion::first_zero(), None).unwrap();
    close(r.theta_star, PI / delta, 1e-6 * PI / delta, "pi/delta")
}

fn text<T: std::fmt::Debug>(
    r: Result<(), proptest::test_runner::TestError<T>>,
) -> Result<(), String> {
    r.map_err(|e| format!("{e}"))
}

/// Runs every invariant over `CASES` random inputs; returns the first failure.
pub fn run_all() -> Vec<(&'static str, Result<(), String>)> {
    let mut out = Vec::new();
    let mut run = |name: &'static str, f: &mut dyn FnMut(&mut TestRunner) -> Result<(), String>| {
        let mut runner = TestRunner::new(Config {
            cases: CASES,
            failure_persistence: None,
            ..Config::default()
        });
        out.push((name, f(&mut runner)));
    };
    run("normalization", &mut |r| {
        text(r.run(&spectrum(), |s| normalization(&s)))
    });
    run("bound", &mut |r| {
        text(r.run(&(spectrum(), -100.0f64..100.0), |(s, t)| bound(&s, t)))
    });
    run("evenness", &mut |r| {
        text(r.run(&(spectrum(), -100.0f64..100.0), |(s, t)| evenness(&s, t)))
    });
    run("shift invariance", &mut |r| {
        text(r.run(
            &(spectrum(), -100.0f64..100.0, 0.0f64..10.0),
            |(s, c, t)| shift_invariance(&s, c, t),
        ))
    });
    run("scale covariance", &mut |r| {
        text(
            r.run(&(spectrum(), 0.1f64..10.0, 0.0f64..10.0), |(s, f, t)| {
                scale_covariance(&s, f, t)
            }),
        )
    });
    run("theta* covariance", &mut |r| {
        text(r.run(&(discrete(), 0.1f64..10.0), |(s, f)| {
            theta_star_covariance(&s, f)
        }))
    });
    run("M invariance", &mut |r| {
        text(r.run(
            &(0.2f64..3.0, 32usize..320, 0.1f64..10.0),
            |(sigma, k, f)| ratio_invariance(sigma, k, f),
        ))
    });
    run("product form", &mut |r| {
        text(r.run(&(composition(), 0.0f64..10.0), |((k, a1, a2), t)| {
            product_form(&k, a1, a2, t)
        }))
    });
    out
}

/// Sums `|amplitude|^2` over all `2^N` computational basis states.
pub fn brute_force_qubits(p: &QubitAngles) -> Vec<(f64, f64)> {
    let n = p.n_qubits;
    let (up, down) = (p.phi + p.eps / 2.0, p.phi - p.eps / 2.0);
    let mut by_k = vec![0.0; n as usize + 1];
    for bits in 0u32..(1 << n) {
        let amp = |a: f64| {
            (0..n)
                .map(|q| if bits >> q & 1 == 1 { a.cos() } else { a.sin() })
                .product::<f64>()
        };
        let total = amp(up) + amp(down);
        by_k[bits.count_ones() as usize] += total * total;
    }
    let norm: f64 = by_k.iter().sum();
    by_k.iter()
        .enumerate()
        .map(|(k, w)| (k as f64 - n as f64 / 2.0, w / norm))
        .collect()
}
