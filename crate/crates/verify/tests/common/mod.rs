#![allow(dead_code)]

use nalgebra::DMatrix;
use qadlab_core::linalg::{c64, CMatrix, CVector, DensityMatrix, UnitaryMatrix};
use rand::Rng;
use rand_distr::StandardNormal;

pub fn gaussian_matrix<R: Rng>(rng: &mut R, r: usize, c: usize) -> CMatrix {
    DMatrix::from_fn(r, c, |_, _| c64(rng.sample(StandardNormal), rng.sample(StandardNormal)))
}

pub fn random_unit_vector<R: Rng>(rng: &mut R, d: usize) -> CVector {
    let v = gaussian_matrix(rng, d, 1).column(0).into_owned();
    v.unscale(v.norm())
}

/// Haar-distributed unitary: QR of a Ginibre matrix with the phases of R's diagonal removed.
pub fn random_unitary<R: Rng>(rng: &mut R, d: usize) -> UnitaryMatrix {
    let qr = gaussian_matrix(rng, d, d).qr();
    let (mut q, r) = qr.unpack();
    for k in 0..d {
        let z = r[(k, k)];
        let phase = if z.norm() > 0.0 { z / z.norm() } else { c64(1.0, 0.0) };
        for x in q.column_mut(k).iter_mut() {
            *x *= phase;
        }
    }
    UnitaryMatrix::new(q).expect("QR factor is unitary")
}

/// Full-rank random state.
pub fn random_density<R: Rng>(rng: &mut R, d: usize) -> DensityMatrix {
    let g = gaussian_matrix(rng, d, d);
    DensityMatrix::from_unnormalized(&g * g.adjoint()).expect("Wishart matrix is PSD")
}

/// Diagonal state with the given (not necessarily normalized) positive weights.
pub fn diagonal_density(weights: &[f64]) -> DensityMatrix {
    let v = CVector::from_iterator(weights.len(), weights.iter().map(|&w| c64(w, 0.0)));
    DensityMatrix::from_unnormalized(CMatrix::from_diagonal(&v)).expect("positive diagonal")
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}
