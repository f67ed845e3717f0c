use rayon::prelude::*;

use crate::bell_optimizer::{bell_max_scan, identity_lower_bound};
use crate::entanglement_tools::{atom_entropy, ppt_min_eigenvalue, EntropyBase};
use crate::error::Result;
use crate::jc_dynamics::{noisy_density_matrix, HybridPureState};

use super::config::{ExperimentConfig, Output};

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub t: f64,
    /// One value per requested output, in request order.
    pub values: Vec<f64>,
}

/// Records with their column names (`t` excluded).
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub columns: Vec<String>,
    pub records: Vec<SweepRecord>,
}

pub fn run_sweep(cfg: &ExperimentConfig) -> Result<SweepTable> {
    run_times(cfg, &cfg.time_grid.points())
}

/// Evaluates the configured outputs at arbitrary times. Points are
/// independent and computed in parallel; records keep the order of `times`.
pub fn run_times(cfg: &ExperimentConfig, times: &[f64]) -> Result<SweepTable> {
    cfg.validate()?;
    let state = cfg.initial_pure_state()?;
    let records = times
        .par_iter()
        .map(|&t| evaluate(cfg, &state, t).map(|values| SweepRecord { t, values }))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepTable {
        columns: cfg.column_names(),
        records,
    })
}

fn evaluate(cfg: &ExperimentConfig, state: &HybridPureState, t: f64) -> Result<Vec<f64>> {
    let rho = noisy_density_matrix(state, &cfg.noise, t)?;
    rho.check_physical()?;
    cfg.outputs
        .iter()
        .map(|o| {
            Ok(match o {
                Output::Bell => bell_max_scan(&rho, &cfg.scan)?.value,
                Output::BellLower => identity_lower_bound(&rho)?,
                Output::Entropy => atom_entropy(&rho, EntropyBase::Bits),
                Output::PptMin => ppt_min_eigenvalue(&rho),
            })
        })
        .collect()
}
