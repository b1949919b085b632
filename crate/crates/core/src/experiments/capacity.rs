use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::with_threads;
use crate::ensembles::ginibre_density;
use crate::error::{Error, Result};
use crate::linalg::DensityMatrix;
use crate::metrics::state_metrics;
use crate::rng::trial_stream;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapacityConfig {
    pub dims: Vec<usize>,
    pub trials: usize,
    pub master_seed: u64,
    #[serde(default)]
    pub threads: Option<usize>,
}

impl Default for CapacityConfig {
    fn default() -> Self {
        CapacityConfig { dims: vec![2, 4, 8, 13], trials: 200, master_seed: 0, threads: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateKind {
    Random,
    Pure,
    MaximallyMixed,
}

impl StateKind {
    pub fn as_str(self) -> &'static str {
        match self {
            StateKind::Random => "random",
            StateKind::Pure => "pure",
            StateKind::MaximallyMixed => "maximally_mixed",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapacityRecord {
    pub d: usize,
    pub index: usize,
    pub kind: StateKind,
    pub purity: f64,
    pub kappa: f64,
    pub von_neumann_entropy: f64,
    pub renyi2_entropy: f64,
}

fn record(d: usize, index: usize, kind: StateKind, rho: &DensityMatrix) -> CapacityRecord {
    let m = state_metrics(rho);
    CapacityRecord {
        d,
        index,
        kind,
        purity: m.purity,
        kappa: m.kappa,
        von_neumann_entropy: m.von_neumann_entropy,
        renyi2_entropy: m.renyi2_entropy,
    }
}

/// Random states spread over the purity range (Ginibre rank uniform in
/// `1..=d`, then mixed with `I/d` at a uniform weight), followed by one pure
/// and one maximally mixed anchor per dimension.
pub fn run_capacity_scan(cfg: &CapacityConfig) -> Result<Vec<CapacityRecord>> {
    if cfg.dims.is_empty() || cfg.dims.iter().any(|&d| d < 2) {
        return Err(Error::invalid("dimensions must be nonempty and at least 2"));
    }
    if cfg.trials == 0 {
        return Err(Error::invalid("trials must be at least 1"));
    }
    let tasks: Vec<(usize, usize)> = cfg.dims.iter().flat_map(|&d| (0..cfg.trials).map(move |t| (d, t))).collect();
    let random = with_threads(cfg.threads, || {
        tasks
            .par_iter()
            .map(|&(d, t)| {
                let mut rng = trial_stream(cfg.master_seed, d, t);
                let rank = rng.random_range(1..=d);
                let eps: f64 = rng.random();
                let rho = ginibre_density(d, rank, &mut rng)?.mix_with_identity(eps)?;
                Ok(record(d, t, StateKind::Random, &rho))
            })
            .collect::<Result<Vec<_>>>()
    })??;
    let mut out = Vec::with_capacity(random.len() + 2 * cfg.dims.len());
    let mut it = random.into_iter();
    for &d in &cfg.dims {
        out.extend(it.by_ref().take(cfg.trials));
        out.push(record(d, cfg.trials, StateKind::Pure, &DensityMatrix::basis_state(d, 0)));
        out.push(record(d, cfg.trials + 1, StateKind::MaximallyMixed, &DensityMatrix::maximally_mixed(d)));
    }
    Ok(out)
}
