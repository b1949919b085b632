//! SIC fiducial search by frame-potential minimization.
//!
//! For a unit vector `phi` the Heisenberg-Weyl frame potential
//! `sum_{(a,b) != (0,0)} |<phi|X^a Z^b|phi>|^4` is bounded below by
//! `(d-1)/(d+1)`, with equality exactly on SIC fiducials. Since the overlaps
//! `x_ab = |<phi|X^a Z^b|phi>|^2` always sum to `d - 1`, the gap to the bound
//! equals `sum (x_ab - 1/(d+1))^2`, so the Zauner residual is at most the
//! square root of the gap.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{build_group_povm, Povm};
use crate::error::{Error, Result};
use crate::groups::build_heisenberg_weyl;
use crate::linalg::{c64, CVector};
use crate::optim::{minimize, LbfgsOptions};
use crate::rng::{derive_seed, stream};

/// Largest Zauner residual accepted by [`build_sic_povm`] and counted as success.
pub const SIC_RESIDUAL_LIMIT: f64 = 1e-6;
const MAX_SIC_DIM: usize = 13;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SicSearchConfig {
    pub restarts: usize,
    pub max_iterations: usize,
    /// Zauner residual counted as success.
    pub tolerance: f64,
    /// Restarts stop once the frame potential is this close to its minimum.
    pub objective_tolerance: f64,
    pub seed: u64,
}

impl Default for SicSearchConfig {
    fn default() -> Self {
        SicSearchConfig {
            restarts: 64,
            max_iterations: 5000,
            tolerance: SIC_RESIDUAL_LIMIT,
            objective_tolerance: 1e-14,
            seed: 0x51C_F1D0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiducialVector {
    pub dim: usize,
    pub labels: Vec<String>,
    /// Unit vector, components as `[re, im]`.
    pub amplitudes: Vec<[f64; 2]>,
    pub zauner_residual: f64,
    pub frame_potential: f64,
    pub converged: bool,
    pub restart: usize,
    pub iterations: usize,
}

impl FiducialVector {
    pub fn state(&self) -> CVector {
        CVector::from_iterator(self.dim, self.amplitudes.iter().map(|a| c64(a[0], a[1])))
    }

    fn from_state(psi: &CVector, restart: usize, iterations: usize, tolerance: f64) -> Self {
        let d = psi.len();
        let residual = zauner_residual(psi);
        FiducialVector {
            dim: d,
            labels: (0..d).map(|k| format!("|{k}>")).collect(),
            amplitudes: psi.iter().map(|z| [z.re, z.im]).collect(),
            zauner_residual: residual,
            frame_potential: frame_potential(psi),
            converged: residual <= tolerance,
            restart,
            iterations,
        }
    }
}

/// `(d-1)/(d+1)`.
pub fn frame_potential_minimum(d: usize) -> f64 {
    (d as f64 - 1.0) / (d as f64 + 1.0)
}

fn omega_table(d: usize) -> Vec<Complex64> {
    (0..d)
        .map(|k| if k == 0 { c64(1.0, 0.0) } else { Complex64::from_polar(1.0, 2.0 * PI * k as f64 / d as f64) })
        .collect()
}

/// `<z|X^a Z^b|z> = sum_j conj(z_{j+a}) omega^{bj} z_j`.
fn overlap(z: &[Complex64], omega: &[Complex64], a: usize, b: usize) -> Complex64 {
    let d = z.len();
    (0..d).map(|j| z[(j + a) % d].conj() * omega[(b * j) % d] * z[j]).sum()
}

/// Frame potential of `psi / ||psi||`.
pub fn frame_potential(psi: &CVector) -> f64 {
    let d = psi.len();
    let z: Vec<Complex64> = psi.iter().copied().collect();
    let omega = omega_table(d);
    let n = psi.norm_squared();
    let mut total = 0.0;
    for a in 0..d {
        for b in 0..d {
            if a != 0 || b != 0 {
                total += overlap(&z, &omega, a, b).norm_sqr().powi(2);
            }
        }
    }
    total / n.powi(4)
}

/// `max_{(a,b) != (0,0)} | |<phi|X^a Z^b|phi>|^2 - 1/(d+1) |` for `phi = psi / ||psi||`.
pub fn zauner_residual(psi: &CVector) -> f64 {
    let d = psi.len();
    let z: Vec<Complex64> = psi.iter().copied().collect();
    let omega = omega_table(d);
    let n = psi.norm_squared();
    let target = 1.0 / (d as f64 + 1.0);
    let mut worst: f64 = 0.0;
    for a in 0..d {
        for b in 0..d {
            if a != 0 || b != 0 {
                let x = overlap(&z, &omega, a, b).norm_sqr() / (n * n);
                worst = worst.max((x - target).abs());
            }
        }
    }
    worst
}

/// Frame potential of the unnormalized vector packed as `[re0, im0, re1, im1, ...]`,
/// with its real gradient.
///
/// With `q = z^dag D z` and `n = z^dag z`, `d|q|^4/d conj(z) = 2|q|^2 (conj(q) D z + q D^dag z)`
/// and `f = S / n^4`; the real gradient is twice the Wirtinger derivative.
fn potential_and_gradient(x: &[f64], grad: &mut [f64], omega: &[Complex64]) -> f64 {
    let d = x.len() / 2;
    let z: Vec<Complex64> = (0..d).map(|j| c64(x[2 * j], x[2 * j + 1])).collect();
    let n: f64 = z.iter().map(|v| v.norm_sqr()).sum();
    let mut s = 0.0;
    let mut ds = vec![c64(0.0, 0.0); d];
    for a in 0..d {
        for b in 0..d {
            if a == 0 && b == 0 {
                continue;
            }
            let q = overlap(&z, omega, a, b);
            let q2 = q.norm_sqr();
            s += q2 * q2;
            let w = 2.0 * q2;
            for i in 0..d {
                // (D z)_i = omega^{b(i-a)} z_{i-a};  (D^dag z)_i = omega^{-b i} z_{i+a}
                let im = (i + d - a) % d;
                let dz = omega[(b * im) % d] * z[im];
                let ddz = omega[(d - (b * i) % d) % d] * z[(i + a) % d];
                ds[i] += (q.conj() * dz + q * ddz) * w;
            }
        }
    }
    let n4 = n.powi(4);
    let f = s / n4;
    for i in 0..d {
        let g = ds[i] / n4 - z[i] * (4.0 * s / (n4 * n));
        grad[2 * i] = 2.0 * g.re;
        grad[2 * i + 1] = 2.0 * g.im;
    }
    f
}

/// Searches for a SIC fiducial in dimension `2 <= d <= 13`.
///
/// Runs `config.restarts` independent L-BFGS descents from seeded random
/// starts (in parallel) and returns the best one; ties go to the lowest
/// restart index. Non-convergence is reported through `converged`, not as an
/// error.
pub fn find_sic_fiducial(d: usize, config: &SicSearchConfig) -> Result<FiducialVector> {
    if !(2..=MAX_SIC_DIM).contains(&d) {
        return Err(Error::invalid(format!("SIC search supports 2 <= d <= {MAX_SIC_DIM}, got {d}")));
    }
    if config.restarts == 0 {
        return Err(Error::invalid("SIC search needs at least one restart"));
    }
    let omega = omega_table(d);
    let minimum = frame_potential_minimum(d);
    let opts = LbfgsOptions {
        memory: 12,
        max_iterations: config.max_iterations,
        target: minimum + config.objective_tolerance,
        gradient_tolerance: 1e-15,
    };
    let runs: Vec<(f64, usize, CVector, usize)> = (0..config.restarts)
        .into_par_iter()
        .map(|restart| {
            let mut rng = stream(derive_seed(config.seed, d, restart));
            let x0: Vec<f64> = (0..2 * d).map(|_| rng.sample(StandardNormal)).collect();
            let out = minimize(|x, g| potential_and_gradient(x, g, &omega), x0, &opts);
            let z = CVector::from_fn(d, |j, _| c64(out.x[2 * j], out.x[2 * j + 1]));
            let z = z.unscale(z.norm());
            (frame_potential(&z), restart, z, out.iterations)
        })
        .collect();
    let (_, restart, psi, iterations) = runs
        .into_iter()
        .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
        .expect("at least one restart");
    Ok(FiducialVector::from_state(&psi, restart, iterations, config.tolerance))
}

/// SIC-POVM `E_ab = (1/d) X^a Z^b |phi><phi| Z^-b X^-a`.
pub fn build_sic_povm(d: usize, fiducial: &FiducialVector) -> Result<Povm> {
    if fiducial.dim != d {
        return Err(Error::DimensionMismatch { expected: d, found: fiducial.dim });
    }
    if fiducial.zauner_residual > SIC_RESIDUAL_LIMIT {
        return Err(Error::FiducialInaccurate { residual: fiducial.zauner_residual, limit: SIC_RESIDUAL_LIMIT });
    }
    let hw = build_heisenberg_weyl(d)?;
    let psi = fiducial.state();
    let psi = psi.unscale(psi.norm());
    Ok(build_group_povm(&hw, &psi)?.with_zauner_residual(fiducial.zauner_residual))
}
