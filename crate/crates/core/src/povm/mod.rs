//! Group-structured POVMs, SIC-POVMs from Heisenberg-Weyl orbits, and
//! mutually unbiased bases in prime dimension.

mod mub;
mod sic;

pub use mub::{build_mub, is_prime, mub_povm, MubReport, MubSet, UNBIASED_TOL};
pub use sic::{
    build_sic_povm, find_sic_fiducial, frame_potential, frame_potential_minimum, zauner_residual, FiducialVector,
    SicSearchConfig, SIC_RESIDUAL_LIMIT,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groups::GroupRep;
use crate::linalg::{
    c64, frobenius_norm, hermitian_eig, hermiticity_residual, identity, projector, symmetrize, CMatrix, CVector,
};

/// Completeness tolerance `||sum E - I||_F`.
pub const COMPLETENESS_TOL: f64 = 1e-8;
const EFFECT_TOL: f64 = 1e-10;

/// Where a group-covariant POVM came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub group: String,
    pub seed: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zauner_residual: Option<f64>,
}

/// PSD effects summing to the identity.
///
/// Rank-1 effects carry a unit outcome state `|phi_m>` with
/// `E_m ∝ |phi_m><phi_m|`; for group-covariant POVMs these are the orbit
/// vectors `U_g |seed>` themselves.
#[derive(Debug, Clone)]
pub struct Povm {
    dim: usize,
    effects: Vec<CMatrix>,
    labels: Vec<String>,
    outcome_states: Vec<Option<CVector>>,
    provenance: Option<Provenance>,
}

impl Povm {
    /// Validates effects and derives outcome states from rank-1 effects.
    pub fn new(effects: Vec<CMatrix>, labels: Vec<String>) -> Result<Self> {
        let mut states = Vec::with_capacity(effects.len());
        for e in &effects {
            let eig = hermitian_eig(e)?;
            let top = eig.values.last().copied().unwrap_or(0.0);
            let rank = eig.values.iter().filter(|&&l| l > 1e-10 * top.max(1e-300)).count();
            states.push((rank == 1).then(|| eig.vector(eig.dim() - 1)));
        }
        Self::assemble(effects, labels, states, None)
    }

    fn assemble(
        effects: Vec<CMatrix>,
        labels: Vec<String>,
        outcome_states: Vec<Option<CVector>>,
        provenance: Option<Provenance>,
    ) -> Result<Self> {
        let dim = effects.first().map(|e| e.nrows()).ok_or_else(|| Error::invalid("POVM needs at least one effect"))?;
        if labels.len() != effects.len() {
            return Err(Error::invalid(format!("{} labels for {} effects", labels.len(), effects.len())));
        }
        let mut sum = CMatrix::zeros(dim, dim);
        let mut checked = Vec::with_capacity(effects.len());
        for e in effects {
            if e.nrows() != dim || e.ncols() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: e.nrows() });
            }
            let residual = hermiticity_residual(&e);
            if residual > EFFECT_TOL * frobenius_norm(&e).max(1.0) {
                return Err(Error::NotHermitian { residual });
            }
            let e = symmetrize(&e);
            let min = hermitian_eig(&e)?.values[0];
            if min < -EFFECT_TOL {
                return Err(Error::NotPositiveSemidefinite { min_eigenvalue: min });
            }
            sum += &e;
            checked.push(e);
        }
        let residual = frobenius_norm(&(sum - identity(dim)));
        if residual > COMPLETENESS_TOL {
            return Err(Error::IncompletePovm { residual });
        }
        Ok(Povm { dim, effects: checked, labels, outcome_states, provenance })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }

    pub fn effects(&self) -> &[CMatrix] {
        &self.effects
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn provenance(&self) -> Option<&Provenance> {
        self.provenance.as_ref()
    }

    pub fn is_rank_one(&self) -> bool {
        self.outcome_states.iter().all(Option::is_some)
    }

    /// Unit vector of rank-1 effect `m`.
    pub fn outcome_state(&self, m: usize) -> Result<&CVector> {
        match self.outcome_states.get(m) {
            Some(Some(v)) => Ok(v),
            Some(None) => {
                let rank = crate::metrics::numerical_rank(&self.effects[m], None).unwrap_or(0);
                Err(Error::NotRankOne { index: m, rank })
            }
            None => Err(Error::invalid(format!("outcome {m} out of range for {} effects", self.len()))),
        }
    }

    pub fn completeness_residual(&self) -> f64 {
        let sum = self.effects.iter().fold(CMatrix::zeros(self.dim, self.dim), |acc, e| acc + e);
        frobenius_norm(&(sum - identity(self.dim)))
    }

    pub(crate) fn with_zauner_residual(mut self, residual: f64) -> Self {
        if let Some(p) = self.provenance.as_mut() {
            p.zauner_residual = Some(residual);
        }
        self
    }

    pub fn to_json(&self) -> PovmJson {
        PovmJson {
            dim: self.dim,
            labels: self.labels.clone(),
            effects: self.effects.iter().map(matrix_to_pairs).collect(),
            provenance: self.provenance.clone(),
        }
    }

    /// Rebuilds and revalidates a POVM from its JSON form.
    pub fn from_json(json: &PovmJson) -> Result<Self> {
        let effects = json
            .effects
            .iter()
            .map(|rows| pairs_to_matrix(rows, json.dim))
            .collect::<Result<Vec<_>>>()?;
        let mut povm = Povm::new(effects, json.labels.clone())?;
        povm.provenance = json.provenance.clone();
        Ok(povm)
    }
}

/// Serialized POVM: complex entries as `[re, im]` pairs, row-major rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PovmJson {
    pub dim: usize,
    pub labels: Vec<String>,
    pub effects: Vec<Vec<Vec<[f64; 2]>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
}

pub(crate) fn matrix_to_pairs(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows()).map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect()).collect()
}

fn pairs_to_matrix(rows: &[Vec<[f64; 2]>], dim: usize) -> Result<CMatrix> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(Error::invalid(format!("effect is not {dim}x{dim}")));
    }
    Ok(CMatrix::from_fn(dim, dim, |r, c| c64(rows[r][c][0], rows[r][c][1])))
}

/// Projective measurement in the computational basis.
pub fn computational_povm(d: usize) -> Povm {
    let states: Vec<CVector> = (0..d).map(|k| basis_vector(d, k)).collect();
    let effects = states.iter().map(projector).collect();
    let labels = (0..d).map(|k| format!("|{k}>")).collect();
    Povm::assemble(effects, labels, states.into_iter().map(Some).collect(), None)
        .expect("computational basis is a complete POVM")
}

pub fn basis_vector(d: usize, k: usize) -> CVector {
    CVector::from_fn(d, |i, _| if i == k { c64(1.0, 0.0) } else { c64(0.0, 0.0) })
}

/// Group-covariant POVM `E_g = (d/|G|) U_g |seed><seed| U_g^dag`.
///
/// Fails with the completeness residual when the orbit does not twirl to `I/d`.
pub fn build_group_povm(rep: &GroupRep, seed: &CVector) -> Result<Povm> {
    let d = rep.dim();
    if seed.len() != d {
        return Err(Error::DimensionMismatch { expected: d, found: seed.len() });
    }
    let n = seed.norm();
    if (n - 1.0).abs() > 1e-10 {
        return Err(Error::invalid(format!("seed state has norm {n}, expected 1")));
    }
    let weight = d as f64 / rep.order() as f64;
    let orbit = rep.orbit(seed);
    let effects = orbit.iter().map(|v| projector(v).scale(weight)).collect();
    let labels = rep.elements().iter().map(|e| e.label.clone()).collect();
    let provenance = Provenance { group: rep.name().to_string(), seed: describe_vector(seed), zauner_residual: None };
    Povm::assemble(effects, labels, orbit.into_iter().map(Some).collect(), Some(provenance))
}

fn describe_vector(v: &CVector) -> String {
    let parts: Vec<String> = v.iter().map(|z| format!("{:.6}{:+.6}i", z.re, z.im)).collect();
    format!("[{}]", parts.join(", "))
}
