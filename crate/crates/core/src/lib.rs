pub mod cli;
pub mod closed_form;
pub mod config;
pub mod error;
pub mod orthogonality;
pub mod scenarios;
pub mod search;
pub mod spectrum;
pub mod states;

pub use error::{Error, Result};
pub use orthogonality::{
    first_orthogonality, macroscopality, separation_over_width, width_theta_estimate, Criterion,
    MacroscopalityReport, OrthogonalityResult, WidthKind,
};
pub use spectrum::{bimodal_compose, DiscreteSpectrum, GridDensity, OverlapCurve, Peaks, Spectrum};
