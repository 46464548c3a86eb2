//! Command-line front end. Exit codes: 0 success, 1 usage, 2 configuration
//! or file access, 3 numeric failure.

use std::ffi::OsString;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::config::{ConfigError, ScenarioConfig, ScenarioSpec};
use crate::error::Error;
use crate::orthogonality::{macroscopality, Criterion, DEFAULT_LEVEL};
use crate::scenarios::{run_all_paper, ScenarioResult};

pub const EXIT_USAGE: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_NUMERIC: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "macroscopality",
    version,
    about = "Interferometric macroscopality of superposition states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Recompute the six case studies.
    Paper {
        #[arg(long)]
        json: bool,
    },
    /// Sample the overlap curve of a configured state as CSV.
    Scan {
        #[arg(long)]
        config: PathBuf,
        /// Defaults to 50 over the spectrum's standard deviation.
        #[arg(long, value_parser = positive_f64)]
        theta_max: Option<f64>,
        #[arg(long, default_value_t = 1001, value_parser = clap::value_parser!(u64).range(2..))]
        points: u64,
        /// Defaults to standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Orthogonality angles and macroscopality of a configured state.
    Measure {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum)]
        criterion: Option<CriterionArg>,
        /// Threshold level; implies `--criterion threshold`.
        #[arg(long, value_parser = unit_interval)]
        level: Option<f64>,
    },
    /// Peak positions and widths of a configured state.
    Peaks {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CriterionArg {
    Auto,
    FirstZero,
    Threshold,
}

fn positive_f64(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x.is_finite() && x > 0.0 => Ok(x),
        _ => Err(format!("expected a positive number, got {s:?}")),
    }
}

fn unit_interval(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x > 0.0 && x < 1.0 => Ok(x),
        _ => Err(format!("expected a number in (0, 1), got {s:?}")),
    }
}

enum Failure {
    Usage(String),
    Config(String),
    Numeric(Error),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.to_string())
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Numeric(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Config(format!("output: {e}"))
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Config(format!("output: {e}"))
    }
}

/// Runs the command line `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(rendered.as_bytes())
            } else {
                out.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Paper { json } => cmd_paper(json, out),
        Command::Scan {
            config,
            theta_max,
            points,
            out: path,
        } => cmd_scan(&config, theta_max, points as usize, path, out),
        Command::Measure {
            config,
            criterion,
            level,
        } => cmd_measure(&config, criterion, level, out),
        Command::Peaks { config } => cmd_peaks(&config, out),
    };
    match outcome {
        Ok(()) => 0,
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_USAGE
        }
        Err(Failure::Config(m)) => {
            let _ = writeln!(err, "error: config: {m}");
            EXIT_CONFIG
        }
        Err(Failure::Numeric(e)) => {
            let _ = writeln!(err, "error: {}: {e}", e.name());
            EXIT_NUMERIC
        }
    }
}

/// Shortest round-trip decimal, switching to exponent form for very small or
/// very large magnitudes.
pub fn fmt_num(x: f64) -> String {
    let a = x.abs();
    if a != 0.0 && !(1e-4..1e16).contains(&a) {
        format!("{x:e}")
    } else {
        x.to_string()
    }
}

fn cmd_paper(json: bool, out: &mut dyn Write) -> Result<(), Failure> {
    let rows = run_all_paper()?;
    if json {
        let doc =
            serde_json::to_string_pretty(&rows).map_err(|e| Failure::Config(e.to_string()))?;
        writeln!(out, "{doc}")?;
    } else {
        write_table(&rows, out)?;
    }
    Ok(())
}

fn write_table(rows: &[ScenarioResult], out: &mut dyn Write) -> io::Result<()> {
    writeln!(
        out,
        "{:<14} {:>24} {:>24} {:>20} {:>20}  criterion (sup/ref)",
        "name", "theta_sing", "theta_sup", "m_paper", "m_numeric"
    )?;
    for r in rows {
        writeln!(
            out,
            "{:<14} {:>24} {:>24} {:>20.10} {:>20.10}  {}/{}",
            r.name,
            fmt_num(r.theta_sing),
            fmt_num(r.theta_sup),
            r.m_paper,
            r.m_numeric,
            r.criterion_used.sup,
            r.criterion_used.reference
        )?;
    }
    for r in rows {
        for note in &r.notes {
            writeln!(out, "# {}: {note}", r.name)?;
        }
    }
    Ok(())
}

fn cmd_scan(
    config: &Path,
    theta_max: Option<f64>,
    points: usize,
    path: Option<PathBuf>,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    let cfg = ScenarioConfig::load(config)?;
    let spectrum = cfg.spec.superposition()?;
    let theta_max = match theta_max {
        Some(t) => t,
        None => crate::orthogonality::default_theta_max(&spectrum)?,
    };
    let curve = spectrum.scan_overlap(theta_max, points)?;
    let sink: Box<dyn Write + '_> = match path {
        Some(p) => Box::new(
            std::fs::File::create(&p)
                .map_err(|e| Failure::Config(format!("{}: {e}", p.display())))?,
        ),
        None => Box::new(out),
    };
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(sink);
    writer.write_record(["theta", "overlap"])?;
    for row in curve.iter() {
        writer.serialize(row)?;
    }
    writer.flush()?;
    Ok(())
}

fn resolve_criterion(
    file: Option<Criterion>,
    flag: Option<CriterionArg>,
    level: Option<f64>,
) -> Result<Criterion, Failure> {
    Ok(match (flag, level) {
        (Some(CriterionArg::Threshold) | None, Some(level)) => Criterion::Threshold { level },
        (Some(CriterionArg::Threshold), None) => Criterion::Threshold {
            level: DEFAULT_LEVEL,
        },
        (Some(CriterionArg::FirstZero), None) => Criterion::first_zero(),
        (Some(CriterionArg::Auto), None) => Criterion::Auto,
        (Some(other), Some(_)) => {
            return Err(Failure::Usage(format!(
                "--level only applies to the threshold criterion, not {other:?}"
            )))
        }
        (None, None) => file.unwrap_or_default(),
    })
}

fn cmd_measure(
    config: &Path,
    flag: Option<CriterionArg>,
    level: Option<f64>,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    let cfg = ScenarioConfig::load(config)?;
    let criterion = resolve_criterion(cfg.criterion, flag, level)?;
    let (sup, reference) = cfg.spec.spectra()?;
    let r = macroscopality(&sup, &reference, criterion, cfg.width_kind)?;
    let mut lines: Vec<(&str, String)> = vec![
        ("theta_sing", fmt_num(r.theta_sing)),
        ("theta_sup", fmt_num(r.theta_sup)),
        ("m_numeric", fmt_num(r.m_numeric)),
        ("m_width", fmt_num(r.m_width)),
        ("width_kind", r.width_kind.to_string()),
        ("a1", fmt_num(r.peaks.a1)),
        ("a2", fmt_num(r.peaks.a2)),
        ("width_sup", fmt_num(r.widths.0)),
        ("width_ref", fmt_num(r.widths.1)),
        ("criterion", criterion.to_string()),
        ("criterion_used_sup", r.sup.criterion_used.to_string()),
        ("criterion_used_ref", r.reference.criterion_used.to_string()),
        ("overlap_at_theta_sup", fmt_num(r.sup.overlap_at_theta)),
        (
            "overlap_at_theta_sing",
            fmt_num(r.reference.overlap_at_theta),
        ),
    ];
    if let ScenarioSpec::Molecule(p) = &cfg.spec {
        // transverse wavenumber over de Broglie wavenumber is the diffraction angle
        let k = p.wavenumber(&cfg.constants);
        lines.push(("angle_sing", fmt_num(r.theta_sing / k)));
        lines.push(("angle_sup", fmt_num(r.theta_sup / k)));
        lines.push((
            "x_single",
            fmt_num(p.screen_distance * p.theta_single(&cfg.constants)),
        ));
    }
    for (key, value) in lines {
        writeln!(out, "{key:<22} {value}")?;
    }
    Ok(())
}

fn cmd_peaks(config: &Path, out: &mut dyn Write) -> Result<(), Failure> {
    let cfg = ScenarioConfig::load(config)?;
    let spectrum = cfg.spec.superposition()?;
    let peaks = spectrum.detect_peaks()?;
    let taller_sd = spectrum.taller_peak_stddev()?;
    for (key, value) in [
        ("a1", peaks.a1),
        ("a2", peaks.a2),
        ("separation", peaks.separation()),
        ("width_fwhm", peaks.width),
        ("width_stddev", taller_sd),
    ] {
        writeln!(out, "{key:<14} {}", fmt_num(value))?;
    }
    Ok(())
}
