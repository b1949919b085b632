use serde::{Deserialize, Serialize};

use crate::ensembles::{ginibre_with_purity, EnsembleConfig};
use crate::error::{Error, Result};
use crate::gevp::{adaptive_pipeline, AdaptiveReport};
use crate::linalg::{c64, CMatrix, CVector, DensityMatrix};
use crate::povm::{build_sic_povm, find_sic_fiducial, SicSearchConfig};
use crate::rng::{derive_seed, stream};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrueStateKind {
    /// `diag(d, d-1, ..., 1)` normalized.
    Diagonal,
    MaximallyMixed,
    /// Ginibre draw at purity 0.7.
    Ginibre,
}

impl std::str::FromStr for TrueStateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "diagonal" => Ok(TrueStateKind::Diagonal),
            "maximally_mixed" | "maximally-mixed" | "mixed" => Ok(TrueStateKind::MaximallyMixed),
            "ginibre" => Ok(TrueStateKind::Ginibre),
            other => Err(Error::invalid(format!("unknown state kind {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdaptiveDemoConfig {
    pub d: usize,
    pub n_coarse: usize,
    pub master_seed: u64,
    pub state: TrueStateKind,
    pub sic_restarts: usize,
}

impl Default for AdaptiveDemoConfig {
    fn default() -> Self {
        AdaptiveDemoConfig { d: 2, n_coarse: 1000, master_seed: 0, state: TrueStateKind::Diagonal, sic_restarts: 64 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdaptiveDemoReport {
    pub state: TrueStateKind,
    pub sic_zauner_residual: f64,
    pub pipeline: AdaptiveReport,
}

pub fn true_state(kind: TrueStateKind, d: usize, master_seed: u64) -> Result<DensityMatrix> {
    match kind {
        TrueStateKind::Diagonal => {
            let norm = (d * (d + 1) / 2) as f64;
            let diag = CVector::from_iterator(d, (0..d).map(|k| c64((d - k) as f64 / norm, 0.0)));
            DensityMatrix::new(CMatrix::from_diagonal(&diag))
        }
        TrueStateKind::MaximallyMixed => Ok(DensityMatrix::maximally_mixed(d)),
        TrueStateKind::Ginibre => {
            let mut rng = stream(derive_seed(master_seed, d, 0));
            Ok(ginibre_with_purity(&EnsembleConfig::new(d, 0.7)?, &mut rng)?.state)
        }
    }
}

/// SIC search for `d`, then the two-stage adaptive pipeline on the chosen true state.
pub fn run_adaptive_demo(cfg: &AdaptiveDemoConfig) -> Result<AdaptiveDemoReport> {
    if !(2..=13).contains(&cfg.d) {
        return Err(Error::invalid(format!("adaptive demo needs 2 <= d <= 13, got {}", cfg.d)));
    }
    let rho = true_state(cfg.state, cfg.d, cfg.master_seed)?;
    let sic_cfg = SicSearchConfig { restarts: cfg.sic_restarts, seed: cfg.master_seed, ..Default::default() };
    let fiducial = find_sic_fiducial(cfg.d, &sic_cfg)?;
    let sic = build_sic_povm(cfg.d, &fiducial)?;
    let seed = derive_seed(cfg.master_seed, cfg.d, 1);
    let pipeline = adaptive_pipeline(&rho, &sic, cfg.n_coarse, seed, &mut stream(seed))?;
    Ok(AdaptiveDemoReport { state: cfg.state, sic_zauner_residual: fiducial.zauner_residual, pipeline })
}
