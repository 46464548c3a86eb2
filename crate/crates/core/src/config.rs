//! Scenario configuration files: one flat TOML table per file, selected by
//! `type`, with per-type required and optional keys.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};

use toml::{Table, Value};

use crate::error::Result as EngineResult;
use crate::orthogonality::{Criterion, WidthKind, DEFAULT_LEVEL, DEFAULT_TOL_ZERO};
use crate::scenarios::{
    coherent_cat_spectra, fock_cat_spectra, gaussian_pair_spectra, mirror_spectra,
    molecule_spectra, qubit_spectra, squid_spectra, MoleculeParams, PhysicalConstants, SquidParams,
};
use crate::spectrum::{DiscreteSpectrum, GridDensity, Spectrum};
use crate::states::{ghz_spectra, slit_aperture_density, CoherentCatParams, QubitAngles, Slit};

#[derive(Debug, Clone, PartialEq)]
pub enum ConfigError {
    Io { path: PathBuf, message: String },
    Syntax(String),
    MissingKey { kind: String, key: &'static str },
    UnknownKey { kind: String, key: String },
    UnknownType(String),
    InvalidValue { key: String, message: String },
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Io { path, message } => {
                write!(f, "cannot read {}: {message}", path.display())
            }
            ConfigError::Syntax(m) => write!(f, "syntax: {m}"),
            ConfigError::MissingKey { kind, key } => {
                write!(f, "missing required key `{key}` for type {kind}")
            }
            ConfigError::UnknownKey { kind, key } => {
                write!(f, "unknown key `{key}` for type {kind}")
            }
            ConfigError::UnknownType(t) => write!(f, "unknown scenario type {t:?}"),
            ConfigError::InvalidValue { key, message } => {
                write!(f, "invalid value for `{key}`: {message}")
            }
        }
    }
}

impl std::error::Error for ConfigError {}

type Result<T> = std::result::Result<T, ConfigError>;

pub const TYPES: [&str; 11] = [
    "fock_cat",
    "qubit",
    "ghz",
    "coherent_cat",
    "molecule",
    "squid",
    "mirror",
    "gaussian_pair",
    "slits",
    "custom_discrete",
    "custom_density",
];

#[derive(Debug, Clone, PartialEq)]
pub enum ScenarioSpec {
    FockCat {
        n: u32,
    },
    Qubit(QubitAngles),
    Ghz {
        n: u32,
    },
    CoherentCat(CoherentCatParams),
    Molecule(MoleculeParams),
    Squid(SquidParams),
    Mirror {
        ratio: f64,
    },
    GaussianPair {
        a1: f64,
        a2: f64,
        sigma: f64,
    },
    Slits(Vec<Slit>),
    CustomDiscrete(Vec<(f64, f64)>),
    CustomDensity {
        a_min: f64,
        a_max: f64,
        values: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub spec: ScenarioSpec,
    /// `None` when the file does not choose; callers fall back to `Auto`.
    pub criterion: Option<Criterion>,
    pub width_kind: WidthKind,
    /// CODATA unless a molecule file overrides `h` or `amu`.
    pub constants: PhysicalConstants,
}

impl ScenarioSpec {
    /// The spectrum whose overlap is scanned.
    pub fn superposition(&self) -> EngineResult<Spectrum> {
        match self {
            ScenarioSpec::Slits(slits) => slit_aperture_density(slits, None),
            ScenarioSpec::CustomDiscrete(points) => {
                Ok(DiscreteSpectrum::new(points.iter().copied())?.into())
            }
            ScenarioSpec::CustomDensity {
                a_min,
                a_max,
                values,
            } => Ok(GridDensity::new(*a_min, *a_max, values.clone())?.into()),
            _ => self.spectra().map(|(sup, _)| sup),
        }
    }

    /// Superposition and the single-peak state it is compared with. Types
    /// without a physical reference use the superposition's taller peak.
    pub fn spectra(&self) -> EngineResult<(Spectrum, Spectrum)> {
        match self {
            ScenarioSpec::FockCat { n } => fock_cat_spectra(*n),
            ScenarioSpec::Qubit(p) => qubit_spectra(p),
            ScenarioSpec::Ghz { n } => ghz_spectra(*n),
            ScenarioSpec::CoherentCat(p) => coherent_cat_spectra(p),
            ScenarioSpec::Molecule(p) => molecule_spectra(p),
            ScenarioSpec::Squid(p) => squid_spectra(p),
            ScenarioSpec::Mirror { ratio } => mirror_spectra(*ratio),
            ScenarioSpec::GaussianPair { a1, a2, sigma } => gaussian_pair_spectra(*sigma, *a1, *a2),
            ScenarioSpec::Slits(_)
            | ScenarioSpec::CustomDiscrete(_)
            | ScenarioSpec::CustomDensity { .. } => {
                let sup = self.superposition()?;
                let reference = sup.dominant_peak()?;
                Ok((sup, reference))
            }
        }
    }
}

/// Tracks which keys of the table have been consumed.
struct Fields<'a> {
    table: &'a Table,
    kind: String,
    seen: BTreeSet<&'a str>,
    base_dir: PathBuf,
}

impl<'a> Fields<'a> {
    fn value(&mut self, key: &'static str) -> Option<&'a Value> {
        let (k, v) = self.table.get_key_value(key)?;
        self.seen.insert(k.as_str());
        Some(v)
    }

    fn require(&mut self, key: &'static str) -> Result<&'a Value> {
        let kind = self.kind.clone();
        self.value(key).ok_or(ConfigError::MissingKey { kind, key })
    }

    fn invalid(key: &str, message: impl Into<String>) -> ConfigError {
        ConfigError::InvalidValue {
            key: key.to_string(),
            message: message.into(),
        }
    }

    fn as_f64(key: &str, v: &Value) -> Result<f64> {
        let x = match v {
            Value::Float(f) => *f,
            Value::Integer(i) => *i as f64,
            other => {
                return Err(Self::invalid(
                    key,
                    format!("expected a number, got {}", other.type_str()),
                ))
            }
        };
        if x.is_finite() {
            Ok(x)
        } else {
            Err(Self::invalid(key, "must be finite"))
        }
    }

    fn as_count(key: &str, v: &Value) -> Result<u32> {
        match v {
            Value::Integer(i) if *i >= 1 && *i <= u32::MAX as i64 => Ok(*i as u32),
            Value::Float(f) if f.fract() == 0.0 && *f >= 1.0 && *f <= u32::MAX as f64 => {
                Ok(*f as u32)
            }
            _ => Err(Self::invalid(key, "expected a positive integer")),
        }
    }

    fn as_f64_array(key: &str, v: &Value) -> Result<Vec<f64>> {
        match v {
            Value::Array(items) => items.iter().map(|x| Self::as_f64(key, x)).collect(),
            other => Err(Self::invalid(
                key,
                format!("expected an array, got {}", other.type_str()),
            )),
        }
    }

    fn float(&mut self, key: &'static str) -> Result<f64> {
        Self::as_f64(key, self.require(key)?)
    }

    fn opt_float(&mut self, key: &'static str) -> Result<Option<f64>> {
        self.value(key).map(|v| Self::as_f64(key, v)).transpose()
    }

    fn count(&mut self, key: &'static str) -> Result<u32> {
        Self::as_count(key, self.require(key)?)
    }

    fn floats(&mut self, key: &'static str) -> Result<Vec<f64>> {
        Self::as_f64_array(key, self.require(key)?)
    }

    fn opt_string(&mut self, key: &'static str) -> Result<Option<&'a str>> {
        match self.value(key) {
            None => Ok(None),
            Some(Value::String(s)) => Ok(Some(s.as_str())),
            Some(other) => Err(Self::invalid(
                key,
                format!("expected a string, got {}", other.type_str()),
            )),
        }
    }

    /// Inline `eigenvalues`/`weights`-style arrays, or a CSV file with
    /// columns `a,p`.
    fn columns(
        &mut self,
        a_key: &'static str,
        p_key: &'static str,
    ) -> Result<(Vec<f64>, Vec<f64>)> {
        if let Some(path) = self.opt_string("csv")? {
            if self.table.contains_key(a_key) || self.table.contains_key(p_key) {
                return Err(Self::invalid(
                    "csv",
                    format!("give either `csv` or `{a_key}`/`{p_key}`, not both"),
                ));
            }
            return read_columns(&self.base_dir.join(path));
        }
        let a = self.floats(a_key)?;
        let p = self.floats(p_key)?;
        if a.len() != p.len() {
            return Err(Self::invalid(
                p_key,
                format!("{} values for {} positions", p.len(), a.len()),
            ));
        }
        Ok((a, p))
    }

    fn finish(self) -> Result<()> {
        match self.table.keys().find(|k| !self.seen.contains(k.as_str())) {
            Some(key) => Err(ConfigError::UnknownKey {
                kind: self.kind,
                key: key.clone(),
            }),
            None => Ok(()),
        }
    }
}

fn read_columns(path: &Path) -> Result<(Vec<f64>, Vec<f64>)> {
    let io = |e: csv::Error| ConfigError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    };
    let mut reader = csv::Reader::from_path(path).map_err(io)?;
    let headers = reader.headers().map_err(io)?.clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| ConfigError::InvalidValue {
                key: "csv".into(),
                message: format!("{} has no column `{name}`", path.display()),
            })
    };
    let (ia, ip) = (column("a")?, column("p")?);
    let mut a = Vec::new();
    let mut p = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(io)?;
        let parse = |i: usize| -> Result<f64> {
            record
                .get(i)
                .and_then(|s| s.trim().parse::<f64>().ok())
                .filter(|x| x.is_finite())
                .ok_or_else(|| ConfigError::InvalidValue {
                    key: "csv".into(),
                    message: format!("{} row {}: not a finite number", path.display(), line + 2),
                })
        };
        a.push(parse(ia)?);
        p.push(parse(ip)?);
    }
    Ok((a, p))
}

/// Density samples must sit on a uniform grid.
fn uniform_grid(a: &[f64]) -> Result<(f64, f64)> {
    let bad = |m: &str| ConfigError::InvalidValue {
        key: "csv".into(),
        message: m.into(),
    };
    if a.len() < 2 {
        return Err(bad("need at least two density samples"));
    }
    let (lo, hi) = (a[0], a[a.len() - 1]);
    let step = (hi - lo) / (a.len() - 1) as f64;
    let uniform = step > 0.0
        && a.iter()
            .enumerate()
            .all(|(i, &x)| (x - (lo + i as f64 * step)).abs() <= 1e-6 * step);
    if uniform {
        Ok((lo, hi))
    } else {
        Err(bad("abscissae must be increasing and evenly spaced"))
    }
}

fn parse_criterion(fields: &mut Fields) -> Result<Option<Criterion>> {
    let name = fields.opt_string("criterion")?;
    let level = fields.opt_float("level")?;
    let tol_zero = fields.opt_float("tol_zero")?;
    let criterion = match (name, level, tol_zero) {
        (None, None, None) => None,
        (Some("auto"), None, None) => Some(Criterion::Auto),
        (Some("auto"), _, _) => {
            return Err(Fields::invalid(
                "criterion",
                "auto takes neither `level` nor `tol_zero`",
            ));
        }
        (Some("threshold") | None, level, None) => Some(Criterion::Threshold {
            level: level.unwrap_or(DEFAULT_LEVEL),
        }),
        (Some("first-zero") | None, None, tol) => Some(Criterion::FirstZero {
            tol_zero: tol.unwrap_or(DEFAULT_TOL_ZERO),
        }),
        (Some(other @ ("threshold" | "first-zero")), _, _) => {
            return Err(Fields::invalid(
                "criterion",
                format!("{other} does not combine `level` with `tol_zero`"),
            ));
        }
        (None, Some(_), Some(_)) => {
            return Err(Fields::invalid(
                "level",
                "`level` and `tol_zero` select different criteria",
            ));
        }
        (Some(other), _, _) => {
            return Err(Fields::invalid(
                "criterion",
                format!("expected auto, first-zero or threshold, got {other:?}"),
            ));
        }
    };
    if let Some(c) = criterion {
        c.validate()
            .map_err(|e| Fields::invalid("criterion", e.to_string()))?;
    }
    Ok(criterion)
}

fn domain<T>(key: &str, r: EngineResult<T>) -> Result<T> {
    r.map_err(|e| Fields::invalid(key, e.to_string()))
}

fn parse_spec(
    kind: &str,
    f: &mut Fields,
    constants: &mut PhysicalConstants,
) -> Result<ScenarioSpec> {
    Ok(match kind {
        "fock_cat" => ScenarioSpec::FockCat { n: f.count("n")? },
        "qubit" => {
            let n = f.count("n")?;
            let eps = f.float("eps")?;
            let phi = f.opt_float("phi")?.unwrap_or(PI / 4.0);
            ScenarioSpec::Qubit(domain("eps", QubitAngles::new(phi, eps, n))?)
        }
        "ghz" => ScenarioSpec::Ghz { n: f.count("n")? },
        "coherent_cat" => {
            let alpha = f.float("alpha")?;
            let phi = f.float("phi")?;
            ScenarioSpec::CoherentCat(domain("alpha", CoherentCatParams::new(alpha, phi))?)
        }
        "molecule" => {
            let p = MoleculeParams {
                slit_width: f.float("slit_width")?,
                grating_period: f.float("grating_period")?,
                screen_distance: f.float("screen_distance")?,
                velocity: f.float("velocity")?,
                mass_amu: f.float("mass")?,
                measured_node: f.opt_float("measured_node")?,
            };
            if let Some(h) = f.opt_float("h")? {
                constants.h = h;
                constants.hbar = h / (2.0 * PI);
                constants.phi0 = h / (2.0 * constants.e_charge);
            }
            if let Some(amu) = f.opt_float("amu")? {
                constants.amu = amu;
            }
            domain("molecule", p.validate())?;
            ScenarioSpec::Molecule(p)
        }
        "squid" => {
            let p = SquidParams {
                e_l: f.float("e_l")?,
                e_j: f.float("e_j")?,
                level_spacing: f.float("level_spacing")?,
                flux_diff: f.float("flux_diff")?,
            };
            domain("squid", p.validate())?;
            ScenarioSpec::Squid(p)
        }
        "mirror" => ScenarioSpec::Mirror {
            ratio: f.opt_float("ratio")?.unwrap_or(1.0),
        },
        "gaussian_pair" => ScenarioSpec::GaussianPair {
            a1: f.float("a1")?,
            a2: f.float("a2")?,
            sigma: f.float("sigma")?,
        },
        "slits" => {
            let centers = f.floats("centers")?;
            let widths = f.floats("widths")?;
            if centers.len() != widths.len() {
                return Err(Fields::invalid(
                    "widths",
                    format!("{} widths for {} centers", widths.len(), centers.len()),
                ));
            }
            ScenarioSpec::Slits(
                centers
                    .into_iter()
                    .zip(widths)
                    .map(|(center, width)| Slit { center, width })
                    .collect(),
            )
        }
        "custom_discrete" => {
            let (a, p) = f.columns("eigenvalues", "weights")?;
            ScenarioSpec::CustomDiscrete(a.into_iter().zip(p).collect())
        }
        "custom_density" => {
            if f.table.contains_key("csv") {
                let (a, p) = f.columns("a", "p")?;
                let (a_min, a_max) = uniform_grid(&a)?;
                ScenarioSpec::CustomDensity {
                    a_min,
                    a_max,
                    values: p,
                }
            } else {
                ScenarioSpec::CustomDensity {
                    a_min: f.float("a_min")?,
                    a_max: f.float("a_max")?,
                    values: f.floats("values")?,
                }
            }
        }
        other => return Err(ConfigError::UnknownType(other.to_string())),
    })
}

impl ScenarioConfig {
    /// `base_dir` resolves relative CSV paths.
    pub fn parse(text: &str, base_dir: &Path) -> Result<Self> {
        let table: Table = text
            .parse()
            .map_err(|e: toml::de::Error| ConfigError::Syntax(e.message().to_string()))?;
        let kind = match table.get("type") {
            Some(Value::String(s)) => s.clone(),
            Some(_) => return Err(Fields::invalid("type", "expected a string")),
            None => {
                return Err(ConfigError::MissingKey {
                    kind: "(any)".into(),
                    key: "type",
                })
            }
        };
        let mut fields = Fields {
            table: &table,
            kind: kind.clone(),
            seen: BTreeSet::from(["type"]),
            base_dir: base_dir.to_path_buf(),
        };
        let mut constants = PhysicalConstants::default();
        let spec = parse_spec(&kind, &mut fields, &mut constants)?;
        let criterion = parse_criterion(&mut fields)?;
        let width_kind = match fields.opt_string("width_kind")? {
            None => WidthKind::default(),
            Some(s) => s
                .parse()
                .map_err(|e: crate::Error| Fields::invalid("width_kind", e.to_string()))?,
        };
        fields.finish()?;
        Ok(ScenarioConfig {
            spec,
            criterion,
            width_kind,
            constants,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        Self::parse(&text, path.parent().unwrap_or(Path::new(".")))
    }
}
