//! Born-rule sampling and the single-copy estimators.

use rand::Rng;
use rand_distr::Binomial;

use crate::error::{Error, Result};
use crate::groups::GroupRep;
use crate::linalg::{hs_inner, projector, CMatrix, CVector, DensityMatrix};
use crate::povm::Povm;

/// Outcome probabilities `p_m = Tr(rho E_m)` of one POVM.
#[derive(Debug, Clone)]
pub struct BornDistribution<'a> {
    probabilities: Vec<f64>,
    povm: &'a Povm,
}

impl<'a> BornDistribution<'a> {
    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn povm(&self) -> &'a Povm {
        self.povm
    }

    /// `sum_m p_m^2`.
    pub fn collision_probability(&self) -> f64 {
        self.probabilities.iter().map(|p| p * p).sum()
    }
}

/// A sampled outcome and its unit direction `|phi_m>`.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub index: usize,
    pub state: CVector,
}

impl Outcome {
    pub fn new(index: usize, state: CVector) -> Result<Self> {
        let n = state.norm();
        if (n - 1.0).abs() > 1e-10 {
            return Err(Error::invalid(format!("outcome state has norm {n}")));
        }
        Ok(Outcome { index, state })
    }
}

pub fn born_probabilities<'a>(rho: &DensityMatrix, povm: &'a Povm) -> Result<BornDistribution<'a>> {
    if rho.dim() != povm.dim() {
        return Err(Error::DimensionMismatch { expected: povm.dim(), found: rho.dim() });
    }
    let mut probabilities: Vec<f64> = povm
        .effects()
        .iter()
        .map(|e| hs_inner(rho.matrix(), e).re)
        .collect();
    if let Some(&p) = probabilities.iter().find(|&&p| p < -1e-12) {
        return Err(Error::invalid(format!("negative Born probability {p}")));
    }
    probabilities.iter_mut().for_each(|p| *p = p.max(0.0));
    let total: f64 = probabilities.iter().sum();
    if (total - 1.0).abs() > 1e-10 {
        return Err(Error::invalid(format!("Born probabilities sum to {total}")));
    }
    probabilities.iter_mut().for_each(|p| *p /= total);
    Ok(BornDistribution { probabilities, povm })
}

/// Inverse-CDF index draw over the stored outcome ordering.
pub fn sample_index<R: Rng + ?Sized>(probabilities: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.random();
    let mut cumulative = 0.0;
    for (m, p) in probabilities.iter().enumerate() {
        cumulative += p;
        if u < cumulative {
            return m;
        }
    }
    // u landed in the rounding gap above the final partial sum
    probabilities.iter().rposition(|&p| p > 0.0).unwrap_or(0)
}

/// Outcome counts of `n` independent draws, sampled as a chain of
/// conditional binomials so the cost does not grow with `n`.
pub fn sample_counts<R: Rng + ?Sized>(probabilities: &[f64], n: u64, rng: &mut R) -> Vec<u64> {
    let mut counts = vec![0; probabilities.len()];
    let mut remaining = n;
    let mut mass = 1.0;
    for (m, &p) in probabilities.iter().enumerate() {
        if remaining == 0 {
            break;
        }
        if m + 1 == probabilities.len() || mass <= p {
            counts[m] = remaining;
            break;
        }
        let q = (p / mass).clamp(0.0, 1.0);
        let k = Binomial::new(remaining, q).map(|b| rng.sample(b)).unwrap_or(0);
        counts[m] = k;
        remaining -= k;
        mass -= p;
    }
    counts
}

/// Draws one outcome; fails only if the drawn effect is not rank 1.
pub fn sample_outcome<R: Rng + ?Sized>(dist: &BornDistribution<'_>, rng: &mut R) -> Result<Outcome> {
    let index = sample_index(&dist.probabilities, rng);
    let state = dist.povm.outcome_state(index)?.clone();
    Ok(Outcome { index, state })
}

/// `|phi_m><phi_m|`.
pub fn standard_estimator(outcome: &Outcome) -> Result<DensityMatrix> {
    DensityMatrix::pure(&outcome.state)
}

/// `(1/|G|) sum_g U_g |phi_m><phi_m| U_g^dag`.
pub fn qad_estimator(rep: &GroupRep, outcome: &Outcome) -> Result<DensityMatrix> {
    if rep.dim() != outcome.state.len() {
        return Err(Error::DimensionMismatch { expected: rep.dim(), found: outcome.state.len() });
    }
    DensityMatrix::new(rep.twirl(&projector(&outcome.state)))
}

/// `sum_m p_m (1/|G|) sum_g U_g |phi_m><phi_m| U_g^dag` for a rank-1 POVM.
pub fn expected_estimator(rho: &DensityMatrix, rep: &GroupRep, povm: &Povm) -> Result<DensityMatrix> {
    if rep.dim() != povm.dim() {
        return Err(Error::DimensionMismatch { expected: rep.dim(), found: povm.dim() });
    }
    let dist = born_probabilities(rho, povm)?;
    let d = povm.dim();
    let mut weighted = CMatrix::zeros(d, d);
    for (m, &p) in dist.probabilities().iter().enumerate() {
        let phi = povm.outcome_state(m)?;
        if p > 0.0 {
            weighted += projector(phi).scale(p);
        }
    }
    DensityMatrix::new(rep.twirl(&weighted))
}
