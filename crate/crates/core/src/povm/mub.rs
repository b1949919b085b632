use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::Povm;
use crate::error::{Error, Result};
use crate::linalg::{c64, frobenius_norm, identity, projector, CMatrix, CVector};

/// Unbiasedness tolerance on `|<b,k|b',k'>|^2 - 1/d`.
pub const UNBIASED_TOL: f64 = 1e-10;

/// A set of orthonormal bases; each basis is stored as a unitary whose columns are the vectors.
#[derive(Debug, Clone)]
pub struct MubSet {
    pub dim: usize,
    pub bases: Vec<CMatrix>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MubReport {
    pub dim: usize,
    pub bases: usize,
    pub max_unbiasedness_deviation: f64,
    pub max_orthonormality_deviation: f64,
    pub povm_completeness_residual: f64,
}

impl MubSet {
    pub fn vector(&self, basis: usize, k: usize) -> CVector {
        self.bases[basis].column(k).into_owned()
    }

    /// `max | |<b,k|b',k'>|^2 - 1/d |` over all pairs of distinct bases.
    pub fn max_unbiasedness_deviation(&self) -> f64 {
        let target = 1.0 / self.dim as f64;
        let mut worst: f64 = 0.0;
        for (i, bi) in self.bases.iter().enumerate() {
            for bj in &self.bases[i + 1..] {
                let overlaps = bi.adjoint() * bj;
                for z in overlaps.iter() {
                    worst = worst.max((z.norm_sqr() - target).abs());
                }
            }
        }
        worst
    }

    pub fn max_orthonormality_deviation(&self) -> f64 {
        self.bases
            .iter()
            .map(|b| frobenius_norm(&(b.adjoint() * b - identity(self.dim))))
            .fold(0.0, f64::max)
    }

    pub fn report(&self) -> Result<MubReport> {
        let povm = mub_povm(self)?;
        Ok(MubReport {
            dim: self.dim,
            bases: self.bases.len(),
            max_unbiasedness_deviation: self.max_unbiasedness_deviation(),
            max_orthonormality_deviation: self.max_orthonormality_deviation(),
            povm_completeness_residual: povm.completeness_residual(),
        })
    }
}

pub fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|k| k * k <= n).all(|k| !n.is_multiple_of(k))
}

/// Complete set of `d + 1` MUBs for prime `2 <= d <= 13`.
///
/// Basis 0 is computational. For odd `d`, basis `m + 1` has vectors
/// `|m, j>_k = omega^{m k^2 + j k} / sqrt(d)`; for `d = 2` the extra bases are
/// the eigenbases of `sigma_x` and `sigma_y`.
pub fn build_mub(d: usize) -> Result<MubSet> {
    if !is_prime(d) {
        return Err(Error::NotPrime(d));
    }
    if d > 13 {
        return Err(Error::invalid(format!("MUB construction limited to d <= 13, got {d}")));
    }
    let mut bases = vec![identity(d)];
    if d == 2 {
        let h = 1.0 / 2f64.sqrt();
        bases.push(CMatrix::from_row_slice(2, 2, &[c64(h, 0.0), c64(h, 0.0), c64(h, 0.0), c64(-h, 0.0)]));
        bases.push(CMatrix::from_row_slice(2, 2, &[c64(h, 0.0), c64(h, 0.0), c64(0.0, h), c64(0.0, -h)]));
    } else {
        let norm = 1.0 / (d as f64).sqrt();
        for m in 0..d {
            bases.push(CMatrix::from_fn(d, d, |k, j| {
                let phase = (m * k * k + j * k) % d;
                Complex64::from_polar(norm, 2.0 * PI * phase as f64 / d as f64)
            }));
        }
    }
    Ok(MubSet { dim: d, bases })
}

/// POVM `E_{b,k} = |b,k><b,k| / (d+1)`; rejects sets that are not unbiased.
pub fn mub_povm(set: &MubSet) -> Result<Povm> {
    let deviation = set.max_unbiasedness_deviation().max(set.max_orthonormality_deviation());
    if deviation > UNBIASED_TOL {
        return Err(Error::NotUnbiased { deviation });
    }
    let weight = 1.0 / set.bases.len() as f64;
    let mut effects = Vec::new();
    let mut labels = Vec::new();
    let mut states = Vec::new();
    for b in 0..set.bases.len() {
        for k in 0..set.dim {
            let v = set.vector(b, k);
            effects.push(projector(&v).scale(weight));
            labels.push(format!("b{b}k{k}"));
            states.push(Some(v));
        }
    }
    Povm::assemble(effects, labels, states, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::trace;

    #[test]
    fn primes() {
        let found: Vec<usize> = (0..20).filter(|&n| is_prime(n)).collect();
        assert_eq!(found, vec![2, 3, 5, 7, 11, 13, 17, 19]);
    }

    #[test]
    fn qubit_mubs_are_pauli_eigenbases() {
        let set = build_mub(2).unwrap();
        assert_eq!(set.bases.len(), 3);
        let [x, y, z] = crate::linalg::testing::pauli();
        for (basis, op) in set.bases.iter().zip([z, x, y]) {
            let diag = basis.adjoint() * op * basis;
            assert!((diag[(0, 1)]).norm() < 1e-15 && (diag[(1, 0)]).norm() < 1e-15);
        }
        let povm = mub_povm(&set).unwrap();
        assert_eq!(povm.len(), 6);
        assert!(povm.effects().iter().all(|e| (trace(e).re - 1.0 / 3.0).abs() < 1e-15));
    }

    #[test]
    fn qutrit_overlaps_exhaustive() {
        let set = build_mub(3).unwrap();
        assert_eq!(set.bases.len(), 4);
        for b in 0..4 {
            for bp in 0..4 {
                for k in 0..3 {
                    for kp in 0..3 {
                        let o = set.vector(b, k).dotc(&set.vector(bp, kp)).norm_sqr();
                        let expected = if b != bp { 1.0 / 3.0 } else if k == kp { 1.0 } else { 0.0 };
                        assert!((o - expected).abs() < 1e-12, "b={b} bp={bp} k={k} kp={kp}: {o}");
                    }
                }
            }
        }
    }

    #[test]
    fn composite_rejected() {
        assert!(matches!(build_mub(4), Err(Error::NotPrime(4))));
        assert!(matches!(build_mub(9), Err(Error::NotPrime(9))));
        assert!(build_mub(17).is_err());
    }

    #[test]
    fn born_probabilities_sum_to_one() {
        let set = build_mub(5).unwrap();
        let povm = mub_povm(&set).unwrap();
        let mut rng = crate::rng::stream(44);
        let rho = crate::linalg::testing::random_density(&mut rng, 5);
        let total: f64 = povm.effects().iter().map(|e| trace(&(rho.matrix() * e)).re).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn biased_set_rejected() {
        let mut set = build_mub(3).unwrap();
        set.bases[2] = identity(3);
        assert!(matches!(mub_povm(&set), Err(Error::NotUnbiased { .. })));
    }
}
