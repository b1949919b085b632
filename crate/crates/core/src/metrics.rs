//! Scalar quality and structure measures.
//!
//! Fidelity uses the squared convention `F = (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2`.
//! Entropies are in bits.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, hs_inner, psd_sqrt, spectral_floor, CMatrix, DensityMatrix};

fn same_dim(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<()> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), found: sigma.dim() });
    }
    Ok(())
}

/// Uhlmann fidelity, squared convention, clamped to `[0, 1]`.
pub fn uhlmann_fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    same_dim(rho, sigma)?;
    let s = psd_sqrt(rho.matrix())?;
    let inner = &s * sigma.matrix() * &s;
    let values = hermitian_eigenvalues(&inner)?;
    let floor = spectral_floor(&values);
    let root_trace: f64 = values.iter().filter(|&&l| l > floor).map(|l| l.sqrt()).sum();
    Ok((root_trace * root_trace).clamp(0.0, 1.0))
}

/// `Tr(rho sigma)`.
pub fn linear_fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    same_dim(rho, sigma)?;
    Ok(hs_inner(rho.matrix(), sigma.matrix()).re)
}

/// `(1/2) ||rho - sigma||_1`.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    same_dim(rho, sigma)?;
    let diff = rho.matrix() - sigma.matrix();
    let norm: f64 = hermitian_eigenvalues(&diff)?.iter().map(|l| l.abs()).sum();
    Ok((0.5 * norm).clamp(0.0, 1.0))
}

/// l2 distance between the ascending eigenvalue vectors.
pub fn spectral_error(rho_hat: &DensityMatrix, rho: &DensityMatrix) -> Result<f64> {
    same_dim(rho_hat, rho)?;
    let a = rho_hat.eigenvalues();
    let b = rho.eigenvalues();
    Ok(a.iter().zip(&b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt())
}

/// Number of eigenvalues above `tol`, which defaults to `1e-10 * max eigenvalue`.
pub fn numerical_rank(m: &CMatrix, tol: Option<f64>) -> Result<usize> {
    let values = hermitian_eigenvalues(m)?;
    let top = values.last().copied().unwrap_or(0.0);
    let tol = tol.unwrap_or(1e-10 * top.abs());
    Ok(values.iter().filter(|&&l| l > tol).count())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateMetrics {
    pub purity: f64,
    /// Structural capacity `1 + 1/purity`.
    pub kappa: f64,
    pub von_neumann_entropy: f64,
    pub renyi2_entropy: f64,
}

pub fn state_metrics(rho: &DensityMatrix) -> StateMetrics {
    let purity = rho.purity();
    let von_neumann_entropy = rho
        .eigenvalues()
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| -l * l.log2())
        .sum::<f64>()
        .max(0.0);
    StateMetrics { purity, kappa: 1.0 + 1.0 / purity, von_neumann_entropy, renyi2_entropy: (-purity.log2()).max(0.0) }
}

/// `F(I/d, rho) = (sum_i sqrt(lambda_i / d))^2`.
pub fn maximally_mixed_fidelity(rho: &DensityMatrix) -> f64 {
    let d = rho.dim() as f64;
    let s: f64 = rho.eigenvalues().iter().map(|l| (l.max(0.0) / d).sqrt()).sum();
    s * s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::qubit_from_bloch;
    use crate::linalg::testing::*;
    use crate::linalg::{c64, CVector};
    use crate::rng::stream;

    fn det2(m: &CMatrix) -> f64 {
        (m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]).re
    }

    /// Independent qubit closed form `Tr(rho sigma) + 2 sqrt(det rho det sigma)`.
    fn qubit_closed_form(rho: &DensityMatrix, sigma: &DensityMatrix) -> f64 {
        hs_inner(rho.matrix(), sigma.matrix()).re + 2.0 * (det2(rho.matrix()) * det2(sigma.matrix())).max(0.0).sqrt()
    }

    fn diag(v: &[f64]) -> DensityMatrix {
        DensityMatrix::new(CMatrix::from_diagonal(&CVector::from_iterator(v.len(), v.iter().map(|&x| c64(x, 0.0)))))
            .unwrap()
    }

    #[test]
    fn fidelity_examples() {
        let rho = qubit_from_bloch([0.3, 0.0, 0.6]).unwrap();
        assert!((uhlmann_fidelity(&rho, &rho).unwrap() - 1.0).abs() < 1e-12);
        let zero = DensityMatrix::basis_state(2, 0);
        assert!((uhlmann_fidelity(&zero, &rho).unwrap() - 0.8).abs() < 1e-12);
        let hadamard_avg = DensityMatrix::new(
            CMatrix::from_row_slice(2, 2, &[c64(3.0, 0.0), c64(1.0, 0.0), c64(1.0, 0.0), c64(1.0, 0.0)]).scale(0.25),
        )
        .unwrap();
        // closed form: 0.725 + 2 sqrt(0.1375 * 0.125) = 0.98720
        let oracle = 0.725 + 2.0 * (0.1375f64 * 0.125).sqrt();
        assert!((qubit_closed_form(&hadamard_avg, &rho) - oracle).abs() < 1e-12);
        assert!((uhlmann_fidelity(&hadamard_avg, &rho).unwrap() - oracle).abs() < 1e-10);
        assert!((oracle - 0.98720).abs() < 1e-5);
    }

    #[test]
    fn fidelity_properties_random() {
        let mut rng = stream(51);
        for d in [2, 3, 5, 8] {
            for _ in 0..20 {
                let rho = random_density(&mut rng, d);
                let sigma = random_density(&mut rng, d);
                let f = uhlmann_fidelity(&rho, &sigma).unwrap();
                assert!((f - uhlmann_fidelity(&sigma, &rho).unwrap()).abs() < 1e-10);
                let t = trace_distance(&rho, &sigma).unwrap();
                assert!(1.0 - f.sqrt() <= t + 1e-9 && t <= (1.0 - f).sqrt() + 1e-9);
                let psi = random_unit_vector(&mut rng, d);
                let pure = DensityMatrix::pure(&psi).unwrap();
                let expect = psi.dotc(&(sigma.matrix() * &psi)).re;
                assert!((uhlmann_fidelity(&pure, &sigma).unwrap() - expect).abs() < 1e-10);
                if d == 2 {
                    assert!((f - qubit_closed_form(&rho, &sigma)).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn linear_fidelity_examples() {
        let rho = qubit_from_bloch([0.3, 0.0, 0.6]).unwrap();
        let mixed = DensityMatrix::maximally_mixed(2);
        assert!((linear_fidelity(&rho, &mixed).unwrap() - 0.5).abs() < 1e-15);
        assert!((linear_fidelity(&rho, &rho).unwrap() - 0.725).abs() < 1e-12);
        assert!((linear_fidelity(&DensityMatrix::basis_state(2, 0), &rho).unwrap() - 0.8).abs() < 1e-15);
        assert!(linear_fidelity(&rho, &DensityMatrix::maximally_mixed(3)).is_err());
    }

    #[test]
    fn trace_distance_examples() {
        let rho = qubit_from_bloch([0.3, 0.0, 0.6]).unwrap();
        assert!(trace_distance(&rho, &rho).unwrap() < 1e-15);
        let a = DensityMatrix::basis_state(3, 0);
        let b = DensityMatrix::basis_state(3, 2);
        assert!((trace_distance(&a, &b).unwrap() - 1.0).abs() < 1e-15);
        assert!((trace_distance(&diag(&[0.8, 0.2]), &diag(&[0.2, 0.8])).unwrap() - 0.6).abs() < 1e-15);
    }

    #[test]
    fn state_metric_examples() {
        let m = state_metrics(&DensityMatrix::basis_state(4, 1));
        assert_eq!((m.purity, m.kappa), (1.0, 2.0));
        assert!(m.von_neumann_entropy.abs() < 1e-15);
        for d in [2, 5, 13] {
            let m = state_metrics(&DensityMatrix::maximally_mixed(d));
            assert!((m.purity - 1.0 / d as f64).abs() < 1e-15);
            assert!((m.kappa - (1.0 + d as f64)).abs() < 1e-12);
            assert!((m.von_neumann_entropy - (d as f64).log2()).abs() < 1e-12);
        }
        let m = state_metrics(&qubit_from_bloch([0.3, 0.0, 0.6]).unwrap());
        assert!((m.purity - 0.725).abs() < 1e-12);
        assert!((m.kappa - (1.0 + 1.0 / 0.725)).abs() < 1e-12);
        assert!((m.kappa - 2.3793).abs() < 1e-4);
    }

    #[test]
    fn state_metric_invariants_random() {
        let mut rng = stream(52);
        for d in 2..=9 {
            for _ in 0..10 {
                let m = state_metrics(&random_density(&mut rng, d));
                assert!((m.kappa - (1.0 + 1.0 / m.purity)).abs() < 1e-12);
                assert!((m.renyi2_entropy + m.purity.log2()).abs() < 1e-12);
                assert!(m.von_neumann_entropy >= m.renyi2_entropy - 1e-10);
            }
        }
    }

    #[test]
    fn spectral_error_examples() {
        let rho = qubit_from_bloch([0.3, 0.0, 0.6]).unwrap();
        assert!(spectral_error(&rho, &rho).unwrap() < 1e-15);
        let e = spectral_error(&DensityMatrix::maximally_mixed(2), &diag(&[0.836, 0.164])).unwrap();
        assert!((e - (2.0 * 0.336f64 * 0.336).sqrt()).abs() < 1e-12);
        assert!((e - 0.4752).abs() < 1e-4);
        let mut rng = stream(53);
        let u = random_unitary(&mut rng, 2);
        let rotated = DensityMatrix::new(&u * rho.matrix() * u.adjoint()).unwrap();
        assert!(spectral_error(&rotated, &rho).unwrap() < 1e-12);
    }

    #[test]
    fn rank_examples() {
        assert_eq!(numerical_rank(DensityMatrix::basis_state(3, 1).matrix(), None).unwrap(), 1);
        assert_eq!(numerical_rank(DensityMatrix::maximally_mixed(6).matrix(), None).unwrap(), 6);
        let h = CMatrix::from_row_slice(2, 2, &[c64(3.0, 0.0), c64(1.0, 0.0), c64(1.0, 0.0), c64(1.0, 0.0)]).scale(0.25);
        assert_eq!(numerical_rank(&h, None).unwrap(), 2);
    }

    #[test]
    fn mixed_fidelity_closed_form() {
        let mut rng = stream(54);
        for d in [2, 4, 7] {
            let rho = random_density(&mut rng, d);
            let f = uhlmann_fidelity(&DensityMatrix::maximally_mixed(d), &rho).unwrap();
            assert!((f - maximally_mixed_fidelity(&rho)).abs() < 1e-10);
        }
    }
}
