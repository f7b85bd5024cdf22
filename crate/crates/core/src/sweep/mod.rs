//! Temperature sweeps and everything built on them.

mod config;
mod csv;
mod fit;
mod optimize;
mod preset;
mod verify;

pub use config::{parse_key_values, Spacing, SweepConfig};
pub use csv::{emit_csv, format_value, write_csv};
pub use fit::{default_tail_window, fit_power_tail, FitResult, TAIL_SCALE_FACTOR};
pub use optimize::{find_optimal_gamma, golden_section_max, indirect_c2, OptimalCoupling};
pub use preset::{figure_preset, preset_names};
pub use verify::{verify_suite, verify_suite_with, CheckOutcome, Mutation, VerifyReport};

use rayon::prelude::*;

use crate::coherence::SpectralCoherence;
use crate::thermal::eig_hermitian;
use crate::{operator::build_operator, Error, Result, ENGINE_VERSION};

/// Coherence columns over an ascending temperature grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub temperatures: Vec<f64>,
    /// Site index of each column.
    pub sites: Vec<usize>,
    /// `coherences[row][col]` is the coherence of `sites[col]` at `temperatures[row]`.
    pub coherences: Vec<Vec<f64>>,
    pub provenance: String,
}

impl SweepTable {
    pub fn column(&self, site: usize) -> Result<Vec<f64>> {
        let col = self
            .sites
            .iter()
            .position(|&s| s == site)
            .ok_or_else(|| Error::InvalidParameter(format!("site {site} is not in the table")))?;
        Ok(self.coherences.iter().map(|row| row[col]).collect())
    }

    pub fn n_rows(&self) -> usize {
        self.temperatures.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Serial,
    #[default]
    Parallel,
}

pub fn run_sweep(config: &SweepConfig) -> Result<SweepTable> {
    run_sweep_with(config, Execution::default())
}

/// One eigendecomposition; every temperature is evaluated from it.
pub fn run_sweep_with(config: &SweepConfig, execution: Execution) -> Result<SweepTable> {
    config.validate()?;
    let spec = config.model.spec()?;
    let sites = config.sites_or_all();
    let spectrum = eig_hermitian(&build_operator(&spec)?)?;
    let evaluator = SpectralCoherence::new(spectrum, &sites)?;
    let temperatures = config.temperatures();
    let coherences = match execution {
        Execution::Serial => temperatures
            .iter()
            .map(|&t| evaluator.at(t))
            .collect::<Result<Vec<_>>>()?,
        Execution::Parallel => temperatures
            .par_iter()
            .map(|&t| evaluator.at(t))
            .collect::<Result<Vec<_>>>()?,
    };
    Ok(SweepTable {
        temperatures,
        sites,
        coherences,
        provenance: format!("{ENGINE_VERSION}\n{}", config.to_key_values()),
    })
}
