//! The `fringe` pipeline: source, phase scan, analysis, CSV and JSON output.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use noonsim::detection::{classical_reference, fringe_scan_with};
use noonsim::spectrum::{debroglie_reduction_factor, harmonic_spectrum_on_grid, visibility};
use noonsim::{Error, FringeTable, Injection};
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatternSummary {
    pub pattern: String,
    pub visibility: f64,
    /// Harmonic index (as a string key) to cosine amplitude.
    pub harmonics: BTreeMap<usize, f64>,
    /// `None` when the pattern is never observed.
    pub reduction_factor: Option<usize>,
    /// Product of single-photon responses on the same grid; present for
    /// four-photon runs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classical_reference: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub source: String,
    pub grid_size: usize,
    pub injection: String,
    pub threshold: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub postselection_probability: Option<f64>,
    pub patterns: Vec<PatternSummary>,
}

/// Output of [`run`]: the table and its summary, not yet written anywhere.
pub struct RunOutput {
    pub table: FringeTable,
    pub summary: Summary,
}

pub fn run(config: &ExperimentConfig) -> Result<RunOutput, CliError> {
    config.validate()?;
    let (state, postselection_probability) = config.source.build()?;
    let injection = config.injection();
    let mut table = fringe_scan_with(&state, config.grid_size, injection)?;
    if let Some(patterns) = config.parsed_patterns()? {
        table = table.restricted_to(&patterns);
    }

    let four_photon = state.terms().all(|(ket, _)| ket.total() == 4);
    let patterns = table
        .iter()
        .map(|(pattern, series)| {
            let harmonics = harmonic_spectrum_on_grid(table.phi(), series, config.threshold)?;
            let reduction_factor = match debroglie_reduction_factor(series, config.threshold) {
                Ok(k) => Some(k),
                Err(Error::AllZeroSeries) => None,
                Err(e) => return Err(e.into()),
            };
            let classical = if four_photon && pattern.counts().len() == 2 {
                Some(
                    table
                        .phi()
                        .iter()
                        .map(|&phi| classical_reference(pattern, phi))
                        .collect::<Result<Vec<_>, _>>()?,
                )
            } else {
                None
            };
            Ok(PatternSummary {
                pattern: pattern.to_string(),
                visibility: visibility(series)?,
                harmonics,
                reduction_factor,
                classical_reference: classical,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;

    let summary = Summary {
        source: config.source.to_string(),
        grid_size: config.grid_size,
        injection: match injection {
            Injection::Input => "input".into(),
            Injection::Inside => "inside".into(),
        },
        threshold: config.threshold,
        postselection_probability,
        patterns,
    };
    Ok(RunOutput { table, summary })
}

/// `phi,pattern,probability` rows in grid order, patterns in lexicographic
/// order within each phase. Floats carry 17 significant digits.
pub fn render_csv(table: &FringeTable) -> String {
    let mut out = String::from("phi,pattern,probability\n");
    for (i, phi) in table.phi().iter().enumerate() {
        for (pattern, series) in table.iter() {
            writeln!(out, "{phi:.16e},{pattern},{:.16e}", series[i]).unwrap();
        }
    }
    out
}

pub fn render_json(summary: &Summary) -> String {
    let mut text = serde_json::to_string_pretty(summary).expect("summary serializes");
    text.push('\n');
    text
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}
