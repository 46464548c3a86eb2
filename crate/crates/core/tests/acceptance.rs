//! One line per acceptance criterion, then a single verdict.

mod common;

use std::f64::consts::PI;

use common::bin::{paper_rows, parse_csv, run, write_config, BRUNE};
use macroscopality::closed_form::{coherent_cat_overlap, decoherence_factor};
use macroscopality::config::ScenarioConfig;
use macroscopality::scenarios::{
    scenario_coherent_cat, scenario_fock_cat, scenario_ghz, scenario_mirror, scenario_molecule,
    scenario_qubits, scenario_squid, MoleculeParams, PhysicalConstants, ScenarioResult,
    SquidParams,
};
use macroscopality::states::{qubit_superposition_spectrum, CoherentCatParams, QubitAngles};
use macroscopality::{Error, Spectrum};
use proptest::test_runner::{Config, TestRunner};

type Criterion = (&'static str, fn(&mut Checks));

/// Collects the failed checks of one criterion.
#[derive(Default)]
struct Checks(Vec<String>);

impl Checks {
    fn that(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.0.push(what.into());
        }
    }

    fn near(&mut self, what: &str, got: f64, want: f64, tol: f64) {
        self.that(
            (got - want).abs() <= tol,
            format!("{what} = {got}, want {want} +- {tol:e}"),
        );
    }
}

fn relative(got: f64, want: f64) -> f64 {
    ((got - want) / want).abs()
}

fn derived(r: &ScenarioResult, key: &str) -> f64 {
    r.derived.get(key).copied().unwrap_or(f64::NAN)
}

fn fock_cat(c: &mut Checks) {
    let r = scenario_fock_cat(20).unwrap();
    c.that(
        relative(r.theta_sup, PI / 20.0) <= 1e-6,
        format!("theta_sup(20) = {}", r.theta_sup),
    );
    for n in [4, 20, 100] {
        let m = scenario_fock_cat(n).unwrap().m_paper;
        let root = (n as f64).sqrt();
        c.that(
            relative(m, root) <= 1e-12,
            format!("m_paper({n}) = {m}, want {root}"),
        );
    }
    let points: Vec<(f64, f64)> = [10, 20, 50, 100, 200, 500, 1000]
        .iter()
        .map(|&n| {
            (
                (n as f64).ln(),
                scenario_fock_cat(n).unwrap().m_numeric.ln(),
            )
        })
        .collect();
    let k = points.len() as f64;
    let (mx, my) = (
        points.iter().map(|p| p.0).sum::<f64>() / k,
        points.iter().map(|p| p.1).sum::<f64>() / k,
    );
    let slope = points.iter().map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / points.iter().map(|(x, _)| (x - mx) * (x - mx)).sum::<f64>();
    c.near("log-log slope of m_numeric", slope, 0.5, 0.02);
}

fn qubits(c: &mut Checks) {
    c.near(
        "m_paper(100, 0.3)",
        scenario_qubits(100, 0.3).unwrap().m_paper,
        6.0,
        1e-6,
    );
    let p = QubitAngles::balanced(0.3, 12).unwrap();
    let engine: Vec<(f64, f64)> = match qubit_superposition_spectrum(&p).unwrap() {
        Spectrum::Discrete(d) => d.points().collect(),
        Spectrum::Density(_) => Vec::new(),
    };
    let brute = common::brute_force_qubits(&p);
    let worst = engine
        .iter()
        .zip(&brute)
        .map(|(e, b)| (e.1 - b.1).abs())
        .fold(0.0, f64::max);
    let same_support =
        engine.len() == brute.len() && engine.iter().zip(&brute).all(|(e, b)| e.0 == b.0);
    c.that(
        same_support && worst <= 1e-12,
        format!("N=12 enumeration deviates by {worst:e}"),
    );
    let n = 400;
    let root = (n as f64).sqrt();
    let wide =
        qubit_superposition_spectrum(&QubitAngles::balanced(4.0 / root, n).unwrap()).unwrap();
    c.that(
        wide.detect_peaks().is_ok(),
        "eps = 4/sqrt(N) should be bimodal",
    );
    let narrow =
        qubit_superposition_spectrum(&QubitAngles::balanced(0.2 / root, n).unwrap()).unwrap();
    c.that(
        matches!(narrow.detect_peaks(), Err(Error::NotBimodal(_))),
        "eps = 0.2/sqrt(N) should not be bimodal",
    );
}

fn ghz(c: &mut Checks) {
    for n in [1, 9, 100] {
        match scenario_ghz(n) {
            Ok(r) => c.that(
                relative(r.m_paper, (n as f64).sqrt()) <= 1e-12,
                format!("M({n}) = {}", r.m_paper),
            ),
            Err(e) => c.that(false, format!("n = {n}: {e}")),
        }
    }
}

fn coherent_cat(c: &mut Checks) {
    let p = CoherentCatParams::new(3.1, 0.5).unwrap();
    let r = scenario_coherent_cat(&p).unwrap();
    c.near("m_paper", r.m_paper, 2.973, 1e-3);
    c.near("m_numeric", r.m_numeric, 2.676, 0.05);
    let (sup, _) = macroscopality::scenarios::coherent_cat_spectra(&p).unwrap();
    let worst = (0..=4000)
        .map(|i| 4.0 * i as f64 / 4000.0)
        .map(|t| (sup.char_magnitude(t) - coherent_cat_overlap(&p, t)).abs())
        .fold(0.0, f64::max);
    c.that(
        worst < 1e-4,
        format!("closed-form deviation {worst:e} on [0, 4]"),
    );
    let d = p.distance();
    c.near("-2 ln f", -2.0 * decoherence_factor(d).ln(), d * d, 1e-9);
}

fn molecule(c: &mut Checks) {
    let r = scenario_molecule(&MoleculeParams::FULLERENE, &PhysicalConstants::default()).unwrap();
    c.near("x_single at 220 m/s", derived(&r, "x_single"), 63e-6, 1e-6);
    c.near(
        "x_single at 110 m/s",
        derived(&r, "half_velocity_x_single"),
        126e-6,
        1.5e-6,
    );
    c.near("M from 12 um node", r.m_paper, 5.25, 0.05);
    c.near(
        "M from 24 um node",
        derived(&r, "half_velocity_m_paper"),
        5.25,
        0.05,
    );
}

fn squid(c: &mut Checks) {
    let p = SquidParams::FLUXOID;
    let r = scenario_squid(&p, &PhysicalConstants::default()).unwrap();
    c.near(
        "flux dispersion / phi0",
        derived(&r, "flux_dispersion"),
        7.6e-3,
        2e-4,
    );
    c.near("M", r.m_paper, 33.0, 1.0);
    let symbolic = 2.0 * p.e_l + 4.0 * PI * PI * p.e_j;
    c.that(
        relative(p.curvature(), symbolic) <= 1e-12,
        format!("curvature {} vs {symbolic}", p.curvature()),
    );
}

fn mirror(c: &mut Checks) {
    c.near("M", scenario_mirror(1.0).unwrap().m_paper, 1.0, 0.05);
}

fn properties(c: &mut Checks) {
    for (name, outcome) in common::run_all() {
        c.that(
            outcome.is_ok(),
            format!("{name}: {}", outcome.err().unwrap_or_default()),
        );
    }
    let mut runner = TestRunner::new(Config {
        cases: common::CASES,
        failure_persistence: None,
        ..Config::default()
    });
    let monotone = runner.run(
        &(common::enveloped(), 0.05f64..0.95, 0.05f64..0.95),
        |(s, l1, l2)| common::threshold_monotone(&s, l1, l2),
    );
    c.that(monotone.is_ok(), "threshold monotonicity");
    let two_point = runner.run(&(-3.0f64..6.0), common::two_point_zero);
    c.that(two_point.is_ok(), "two-point zero at pi/delta");
}

fn cli(c: &mut Checks) {
    let first = run(&["paper"]);
    let rows = paper_rows(&first.stdout);
    c.that(
        first.code == 0 && rows.len() == 6,
        format!("paper: exit {}, {} rows", first.code, rows.len()),
    );
    c.that(
        run(&["paper"]).stdout == first.stdout,
        "paper output differs between runs",
    );
    let want = [
        ("fock_cat", 20f64.sqrt(), 1e-6),
        ("qubits", 6.0, 1e-6),
        ("coherent_cat", 2.973, 1e-3),
        ("molecule", 5.25, 0.05),
        ("squid", 33.0, 1.0),
        ("mirror", 1.0, 0.05),
    ];
    for (row, (name, m, tol)) in rows.iter().zip(want) {
        let got: f64 = row.get(3).and_then(|v| v.parse().ok()).unwrap_or(f64::NAN);
        c.that(
            row[0] == name && (got - m).abs() <= tol,
            format!("paper row {}: m_paper {got}", row[0]),
        );
    }

    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "brune.toml", BRUNE);
    let cfg = config.to_str().unwrap();
    let scan = run(&[
        "scan",
        "--config",
        cfg,
        "--theta-max",
        "4",
        "--points",
        "4001",
    ]);
    let curve = ScenarioConfig::load(&config)
        .unwrap()
        .spec
        .superposition()
        .unwrap()
        .scan_overlap(4.0, 4001)
        .unwrap();
    c.that(
        scan.code == 0 && parse_csv(&scan.stdout) == curve.iter().collect::<Vec<_>>(),
        "CSV round-trip",
    );

    c.that(run(&["scan"]).code == 1, "usage error exits 1");
    let missing = dir.path().join("absent.toml");
    c.that(
        run(&["measure", "--config", missing.to_str().unwrap()]).code == 2,
        "config error exits 2",
    );
    let flat = write_config(
        dir.path(),
        "flat.toml",
        "type = \"gaussian_pair\"\na1 = 0.0\na2 = 0.5\nsigma = 1.0\n",
    );
    c.that(
        run(&["measure", "--config", flat.to_str().unwrap()]).code == 3,
        "numeric error exits 3",
    );
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 9] = [
        ("Fock cat", fock_cat),
        ("qubit cat", qubits),
        ("GHZ", ghz),
        ("coherent cat", coherent_cat),
        ("molecule interferometry", molecule),
        ("SQUID", squid),
        ("mirror", mirror),
        ("property suites", properties),
        ("command line", cli),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let mut c = Checks::default();
        check(&mut c);
        if c.0.is_empty() {
            println!("PASS criterion {}: {name}", i + 1);
        } else {
            failed += 1;
            println!("FAIL criterion {}: {name}: {}", i + 1, c.0.join("; "));
        }
    }
    assert_eq!(failed, 0, "{failed} acceptance criteria failed");
}
