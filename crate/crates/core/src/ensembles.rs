//! Random and parameterized state generation.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c64, identity, CMatrix, DensityMatrix};

/// `rho = (I + r . sigma) / 2` for `||r|| <= 1`.
pub fn qubit_from_bloch(r: [f64; 3]) -> Result<DensityMatrix> {
    let norm = r.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 1.0 + 1e-12 {
        return Err(Error::invalid(format!("Bloch vector norm {norm} exceeds 1")));
    }
    let [x, y, z] = r;
    let m = CMatrix::from_row_slice(2, 2, &[c64(1.0 + z, 0.0), c64(x, -y), c64(x, y), c64(1.0 - z, 0.0)]).scale(0.5);
    DensityMatrix::new(m)
}

/// `rho = G G^dag / Tr(G G^dag)` with `G` a `d x rank` matrix of iid standard complex Gaussians.
pub fn ginibre_density<R: Rng + ?Sized>(d: usize, rank: usize, rng: &mut R) -> Result<DensityMatrix> {
    if rank == 0 || rank > d {
        return Err(Error::invalid(format!("Ginibre rank {rank} outside 1..={d}")));
    }
    let g = CMatrix::from_fn(d, rank, |_, _| {
        c64(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal)) * std::f64::consts::FRAC_1_SQRT_2
    });
    DensityMatrix::from_unnormalized(&g * g.adjoint())
}

/// Mean purity `(d + r) / (d r + 1)` of a rank-`r` Ginibre state.
pub fn expected_ginibre_purity(d: usize, rank: usize) -> f64 {
    (d + rank) as f64 / (d * rank + 1) as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleConfig {
    pub dim: usize,
    pub target_purity: f64,
    pub purity_tolerance: f64,
}

impl EnsembleConfig {
    pub fn new(dim: usize, target_purity: f64) -> Result<Self> {
        let cfg = EnsembleConfig { dim, target_purity, purity_tolerance: 0.01 };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim < 2 {
            return Err(Error::invalid(format!("dimension must be at least 2, got {}", self.dim)));
        }
        if !(self.target_purity > 1.0 / self.dim as f64 + 1e-9 && self.target_purity <= 1.0) {
            return Err(Error::invalid(format!(
                "target purity {} outside (1/{}, 1]",
                self.target_purity, self.dim
            )));
        }
        if self.purity_tolerance.is_nan() || self.purity_tolerance <= 0.0 {
            return Err(Error::invalid("purity tolerance must be positive"));
        }
        Ok(())
    }

    /// Largest Ginibre rank whose mean purity still reaches the target.
    pub fn base_rank(&self) -> usize {
        (1..=self.dim)
            .rev()
            .find(|&r| expected_ginibre_purity(self.dim, r) >= self.target_purity)
            .unwrap_or(1)
    }
}

/// A purity-controlled draw and how it was made.
#[derive(Debug, Clone)]
pub struct PurityControlledState {
    pub state: DensityMatrix,
    /// Rank of the Ginibre base state actually used.
    pub base_rank: usize,
    /// Weight `eps` of `I/d` in `(1 - eps) base + eps I/d`.
    pub mixing_weight: f64,
}

const BISECTION_STEPS: usize = 60;
const DRAWS_PER_RANK: usize = 16;

/// Ginibre state mixed with `I/d` to hit `config.target_purity`.
///
/// The base rank is the largest `r` whose mean purity is at least the target
/// (rank 1 when only pure bases can reach it). A base draw below the target
/// is redrawn, dropping to a lower rank after a few failures; rank 1 always
/// succeeds. The weight `eps` is then found by bisection on `[0, 1]`, where
/// purity is monotone decreasing.
pub fn ginibre_with_purity<R: Rng + ?Sized>(config: &EnsembleConfig, rng: &mut R) -> Result<PurityControlledState> {
    config.validate()?;
    let d = config.dim;
    let target = config.target_purity;
    let mut rank = config.base_rank();
    let base = loop {
        let mut found = None;
        for _ in 0..DRAWS_PER_RANK {
            let candidate = ginibre_density(d, rank, rng)?;
            if candidate.purity() >= target {
                found = Some(candidate);
                break;
            }
        }
        match found {
            Some(b) => break b,
            None if rank > 1 => rank -= 1,
            None => return Err(Error::invalid("no Ginibre draw reached the target purity")),
        }
    };

    let mix = |eps: f64| base.matrix().scale(1.0 - eps) + identity(d).scale(eps / d as f64);
    let purity_at = |eps: f64| {
        let m = mix(eps);
        crate::linalg::hs_inner(&m, &m).re
    };
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if purity_at(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let eps = if (purity_at(lo) - target).abs() <= (purity_at(hi) - target).abs() { lo } else { hi };
    let state = DensityMatrix::new(mix(eps))?;
    let purity = state.purity();
    if (purity - target).abs() > config.purity_tolerance {
        return Err(Error::Verification(format!("purity {purity} missed target {target}")));
    }
    Ok(PurityControlledState { state, base_rank: rank, mixing_weight: eps })
}
