//! Experiment harness for `qdist-core`: configuration, parallel sweeps,
//! CSV records, scaling fits, SVG plots and verification reports.

pub mod config;
pub mod error;
pub mod experiment;
pub mod family;
pub mod fit;
pub mod record;
pub mod report;
pub mod svg;

pub use config::{Algorithm, ExperimentConfig, ModelName};
pub use error::{LabError, Result};
pub use experiment::{collect_records, run_experiment};
pub use fit::{fit_power_law, fit_scaling, ScalingFit};
pub use record::{parse_csv, to_csv_string, ExperimentRecord};
pub use svg::render_svg;
