//! Double-commutator generalized eigenproblem `M c = lambda G c` for choosing
//! a measurement generator adapted to a state estimate, and the two-stage
//! adaptive protocol built on it.
//!
//! `M_ij = Tr(B_i^dag [rho, [rho, B_j]])` equals `Tr([rho, B_i]^dag [rho, B_j])`
//! for Hermitian `rho` and `B`, so `M` is a Gram matrix and PSD. Its null
//! directions are the basis combinations commuting with `rho`.

use std::f64::consts::PI;

use nalgebra::{Cholesky, DMatrix};
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::{born_probabilities, expected_estimator, sample_counts};
use crate::groups::{build_cyclic_from_generator, build_heisenberg_weyl, commutativity_residual, GroupRep};
use crate::linalg::{
    c64, commutator, exp_i_hermitian, frobenius_norm, hermitian_eig, hermitian_eigenvalues, hermiticity_residual, hs_inner, symmetrize,
    CMatrix, CVector, DensityMatrix, UnitaryMatrix,
};
use crate::metrics::{trace_distance, uhlmann_fidelity};
use crate::povm::{computational_povm, Povm};

/// Candidate generators `B_k` with their Hilbert-Schmidt Gram matrix.
#[derive(Debug, Clone)]
pub struct OperatorBasis {
    dim: usize,
    operators: Vec<CMatrix>,
    gram: CMatrix,
}

impl OperatorBasis {
    pub fn new(operators: Vec<CMatrix>) -> Result<Self> {
        let dim = operators.first().map(|b| b.nrows()).ok_or_else(|| Error::invalid("empty operator basis"))?;
        for b in &operators {
            if b.nrows() != dim || b.ncols() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: b.nrows() });
            }
            let residual = hermiticity_residual(b);
            if residual > 1e-10 * frobenius_norm(b).max(1.0) {
                return Err(Error::NotHermitian { residual });
            }
        }
        let n = operators.len();
        let gram = CMatrix::from_fn(n, n, |i, j| hs_inner(&operators[i], &operators[j]));
        let min = hermitian_eig(&gram)?.values[0];
        if min <= 1e-12 {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(OperatorBasis { dim, operators, gram })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn operators(&self) -> &[CMatrix] {
        &self.operators
    }

    pub fn gram(&self) -> &CMatrix {
        &self.gram
    }

    /// `sum_k c_k B_k`.
    pub fn combine(&self, coefficients: &CVector) -> CMatrix {
        self.operators
            .iter()
            .zip(coefficients.iter())
            .fold(CMatrix::zeros(self.dim, self.dim), |acc, (b, c)| acc + b * *c)
    }
}

/// Generalized Gell-Mann matrices normalized to `Tr(B_i B_j) = delta_ij`:
/// symmetric, then antisymmetric off-diagonal families, then diagonal.
pub fn gell_mann_basis(d: usize) -> Result<OperatorBasis> {
    if d < 2 {
        return Err(Error::invalid(format!("dimension must be at least 2, got {d}")));
    }
    let h = 1.0 / 2f64.sqrt();
    let mut ops = Vec::with_capacity(d * d - 1);
    for j in 0..d {
        for k in j + 1..d {
            let mut m = CMatrix::zeros(d, d);
            m[(j, k)] = c64(h, 0.0);
            m[(k, j)] = c64(h, 0.0);
            ops.push(m);
        }
    }
    for j in 0..d {
        for k in j + 1..d {
            let mut m = CMatrix::zeros(d, d);
            m[(j, k)] = c64(0.0, -h);
            m[(k, j)] = c64(0.0, h);
            ops.push(m);
        }
    }
    for l in 1..d {
        let norm = 1.0 / ((l * (l + 1)) as f64).sqrt();
        let mut m = CMatrix::zeros(d, d);
        for j in 0..l {
            m[(j, j)] = c64(norm, 0.0);
        }
        m[(l, l)] = c64(-(l as f64) * norm, 0.0);
        ops.push(m);
    }
    OperatorBasis::new(ops)
}

/// `M_ij = Tr(B_i^dag [rho, [rho, B_j]])`.
pub fn double_commutator_matrix(rho: &DensityMatrix, basis: &OperatorBasis) -> Result<CMatrix> {
    if rho.dim() != basis.dim() {
        return Err(Error::DimensionMismatch { expected: basis.dim(), found: rho.dim() });
    }
    let r = rho.matrix();
    let inner: Vec<CMatrix> = basis
        .operators()
        .iter()
        .map(|b| commutator(r, &commutator(r, b)?))
        .collect::<Result<_>>()?;
    let n = basis.len();
    let m = CMatrix::from_fn(n, n, |i, j| hs_inner(&basis.operators()[i], &inner[j]));
    Ok(symmetrize(&m))
}

/// Ascending generalized eigenvalues with `G`-orthonormal coefficient vectors.
#[derive(Debug, Clone)]
pub struct GevpSpectrum {
    pub eigenvalues: Vec<f64>,
    pub coefficient_vectors: Vec<CVector>,
}

impl GevpSpectrum {
    /// `max_k ||M c_k - lambda_k G c_k||`.
    pub fn max_residual(&self, m: &CMatrix, gram: &CMatrix) -> f64 {
        self.eigenvalues
            .iter()
            .zip(&self.coefficient_vectors)
            .map(|(&l, c)| (m * c - (gram * c) * c64(l, 0.0)).norm())
            .fold(0.0, f64::max)
    }
}

fn is_real(m: &CMatrix) -> bool {
    let scale = frobenius_norm(m).max(1.0);
    m.iter().all(|z| z.im.abs() <= 1e-14 * scale)
}

/// Solves `M c = lambda G c` by Cholesky reduction `G = L L^dag`,
/// `(L^-1 M L^-dag) y = lambda y`, `c = L^-dag y`.
///
/// Real symmetric inputs are solved in real arithmetic so the coefficient
/// vectors come out real.
pub fn solve_gevp(m: &CMatrix, gram: &CMatrix) -> Result<GevpSpectrum> {
    let n = gram.nrows();
    if m.nrows() != n || m.ncols() != n || gram.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, found: m.nrows() });
    }
    let residual = hermiticity_residual(m);
    if residual > 1e-8 * frobenius_norm(m).max(1.0) {
        return Err(Error::NotHermitian { residual });
    }
    let m = symmetrize(m);
    let gram = symmetrize(gram);
    // complex Cholesky happily takes square roots of negative pivots
    if hermitian_eigenvalues(&gram)?[0] <= 0.0 {
        return Err(Error::NotPositiveDefinite);
    }
    if is_real(&m) && is_real(&gram) {
        let mr = m.map(|z| z.re);
        let gr = gram.map(|z| z.re);
        let chol = Cholesky::new(gr).ok_or(Error::NotPositiveDefinite)?;
        let l = chol.l();
        let a = l.solve_lower_triangular(&mr).ok_or(Error::NotPositiveDefinite)?;
        let c = l.solve_lower_triangular(&a.transpose()).ok_or(Error::NotPositiveDefinite)?;
        let c = (&c + c.transpose()) * 0.5;
        let eig = c.symmetric_eigen();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
        let lt = l.transpose();
        let mut eigenvalues = Vec::with_capacity(n);
        let mut vectors = Vec::with_capacity(n);
        for &k in &order {
            let y = eig.eigenvectors.column(k).into_owned();
            let x = lt.solve_upper_triangular(&y).ok_or(Error::NotPositiveDefinite)?;
            eigenvalues.push(eig.eigenvalues[k]);
            vectors.push(x.map(|v| c64(v, 0.0)));
        }
        return Ok(GevpSpectrum { eigenvalues, coefficient_vectors: vectors });
    }
    let chol = Cholesky::new(gram).ok_or(Error::NotPositiveDefinite)?;
    let l: DMatrix<Complex64> = chol.l();
    let a = l.solve_lower_triangular(&m).ok_or(Error::NotPositiveDefinite)?;
    let c = l.solve_lower_triangular(&a.adjoint()).ok_or(Error::NotPositiveDefinite)?;
    let eig = hermitian_eig(&symmetrize(&c))?;
    let lh = l.adjoint();
    let mut vectors = Vec::with_capacity(n);
    for k in 0..n {
        vectors.push(lh.solve_upper_triangular(&eig.vector(k)).ok_or(Error::NotPositiveDefinite)?);
    }
    Ok(GevpSpectrum { eigenvalues: eig.values, coefficient_vectors: vectors })
}

/// Generator `A*` (unit Frobenius norm) and `U* = exp(i pi A*)`.
#[derive(Debug, Clone)]
pub struct OptimalGenerator {
    pub generator: CMatrix,
    pub unitary: UnitaryMatrix,
}

/// Builds `A*` from the smallest-eigenvalue vector; ties go to the lowest index.
pub fn optimal_generator(spectrum: &GevpSpectrum, basis: &OperatorBasis) -> Result<OptimalGenerator> {
    let c = spectrum.coefficient_vectors.first().ok_or_else(|| Error::invalid("empty GEVP spectrum"))?;
    if c.len() != basis.len() {
        return Err(Error::DimensionMismatch { expected: basis.len(), found: c.len() });
    }
    // A global phase on c would make A* non-Hermitian; align the dominant coefficient.
    let peak = c.iter().fold(c64(0.0, 0.0), |best, z| if z.norm() > best.norm() + 1e-15 { *z } else { best });
    let phase = if peak.norm() > 0.0 { peak.conj() / peak.norm() } else { c64(1.0, 0.0) };
    let a = symmetrize(&basis.combine(&(c * phase)));
    let a = a.unscale(frobenius_norm(&a));
    let unitary = exp_i_hermitian(&a, PI)?;
    Ok(OptimalGenerator { generator: a, unitary })
}

/// Spectrum and selected generator together.
#[derive(Debug, Clone)]
pub struct GevpResult {
    pub spectrum: GevpSpectrum,
    pub generator: CMatrix,
    pub unitary: UnitaryMatrix,
}

pub fn solve_for_generator(rho: &DensityMatrix, basis: &OperatorBasis) -> Result<GevpResult> {
    let m = double_commutator_matrix(rho, basis)?;
    let spectrum = solve_gevp(&m, basis.gram())?;
    let OptimalGenerator { generator, unitary } = optimal_generator(&spectrum, basis)?;
    Ok(GevpResult { spectrum, generator, unitary })
}

/// Largest order tried when closing the cyclic group generated by `U*`.
pub const MAX_CYCLIC_ORDER: usize = 64;

/// How the measurement group was obtained from `U*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CyclicGroupKind {
    /// A power of `U*` up to [`MAX_CYCLIC_ORDER`] returned to the identity.
    Exact,
    /// `U*` did not close; its eigenphases were rounded to multiples of `2 pi / 64`.
    Quantized,
}

/// Cyclic group generated by `U*`, or by its phase-quantized version when `U*`
/// has no finite order up to [`MAX_CYCLIC_ORDER`].
pub fn cyclic_group_from_unitary(u: &UnitaryMatrix) -> Result<(GroupRep, CyclicGroupKind)> {
    if let Ok(rep) = build_cyclic_from_generator("gevp-cyclic", u, MAX_CYCLIC_ORDER) {
        return Ok((rep, CyclicGroupKind::Exact));
    }
    // U = V diag(e^{i theta}) V^dag; a global phase is irrelevant, so measure
    // angles relative to the first eigenphase before rounding.
    let h = symmetrize(&(u.matrix() + u.matrix().adjoint()));
    let eig = hermitian_eig(&h)?;
    let v = &eig.vectors;
    let phases: Vec<f64> = (0..u.dim())
        .map(|k| {
            let col = v.column(k).into_owned();
            col.dotc(&(u.matrix() * &col)).arg()
        })
        .collect();
    let step = 2.0 * PI / MAX_CYCLIC_ORDER as f64;
    let quantized = CVector::from_iterator(
        u.dim(),
        phases.iter().map(|&t| {
            let k = ((t - phases[0]) / step).round();
            Complex64::from_polar(1.0, k * step)
        }),
    );
    let w = UnitaryMatrix::new(v * CMatrix::from_diagonal(&quantized) * v.adjoint())?;
    let rep = build_cyclic_from_generator("gevp-cyclic-quantized", &w, MAX_CYCLIC_ORDER)?;
    Ok((rep, CyclicGroupKind::Quantized))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdaptiveFidelities {
    /// Expected estimator with the GEVP-derived group, computational outcomes.
    pub gevp_group: f64,
    /// Expected estimator with the fixed `HW(d)` baseline.
    pub baseline_hw: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdaptiveReport {
    pub d: usize,
    pub seed: u64,
    pub n_coarse: usize,
    pub lambda_spectrum: Vec<f64>,
    /// `delta_Q(HW(d), rho_true)`.
    pub delta_q_before: f64,
    /// `delta_Q(GEVP group, rho_true)`.
    pub delta_q_after: f64,
    pub fidelities: AdaptiveFidelities,
    pub coarse_trace_distance: f64,
    /// `||[rho_true, A*]||_F`.
    pub generator_commutator_true: f64,
    pub group_order: usize,
    pub group_kind: CyclicGroupKind,
}

/// SIC linear inversion `sum_m [(d+1) f_m - 1/d] Pi_m` from outcome counts,
/// followed by eigenvalue clipping and renormalization.
pub fn sic_linear_inversion(sic: &Povm, counts: &[u64]) -> Result<DensityMatrix> {
    let d = sic.dim();
    if sic.len() != d * d || counts.len() != sic.len() {
        return Err(Error::invalid("linear inversion needs a d^2-outcome SIC POVM and one count per outcome"));
    }
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return Err(Error::invalid("no outcomes recorded"));
    }
    let mut est = CMatrix::zeros(d, d);
    for (e, &n) in sic.effects().iter().zip(counts) {
        let f = n as f64 / total as f64;
        // Pi_m = d E_m
        est += e.scale(d as f64 * ((d as f64 + 1.0) * f - 1.0 / d as f64));
    }
    project_to_density(&est)
}

/// Clips negative eigenvalues of a Hermitian unit-trace estimate and renormalizes.
pub fn project_to_density(m: &CMatrix) -> Result<DensityMatrix> {
    let eig = hermitian_eig(m)?;
    let clipped: Vec<f64> = eig.values.iter().map(|l| l.max(0.0)).collect();
    let total: f64 = clipped.iter().sum();
    if total.is_nan() || total <= 0.0 {
        return Err(Error::invalid("estimate has no positive spectrum"));
    }
    let rebuilt = eig.map(|l| c64(l.max(0.0) / total, 0.0));
    DensityMatrix::new(symmetrize(&rebuilt))
}

/// Two-stage adaptive protocol.
///
/// 1. Draw `n_coarse` outcomes of `sic` on `rho_true`; estimate by linear inversion.
/// 2. Solve the double-commutator GEVP on the estimate over the Gell-Mann basis,
///    take `U* = exp(i pi A*)` and its cyclic group.
/// 3. Report `delta_Q` of `HW(d)` (before) and of the new group (after) against
///    `rho_true`, and the fidelity of both groups' expected estimators.
pub fn adaptive_pipeline<R: Rng + ?Sized>(
    rho_true: &DensityMatrix,
    sic: &Povm,
    n_coarse: usize,
    seed: u64,
    rng: &mut R,
) -> Result<AdaptiveReport> {
    let d = rho_true.dim();
    if sic.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: sic.dim() });
    }
    if n_coarse < d * d {
        return Err(Error::invalid(format!("n_coarse = {n_coarse} is below d^2 = {}", d * d)));
    }
    let dist = born_probabilities(rho_true, sic)?;
    let counts = sample_counts(dist.probabilities(), n_coarse as u64, rng);
    let coarse = sic_linear_inversion(sic, &counts)?;

    let basis = gell_mann_basis(d)?;
    let gevp = solve_for_generator(&coarse, &basis)?;
    let (group, group_kind) = cyclic_group_from_unitary(&gevp.unitary)?;
    let baseline = build_heisenberg_weyl(d)?;

    let comp = computational_povm(d);
    let after_estimate = expected_estimator(rho_true, &group, &comp)?;
    let baseline_estimate = expected_estimator(rho_true, &baseline, &comp)?;

    Ok(AdaptiveReport {
        d,
        seed,
        n_coarse,
        lambda_spectrum: gevp.spectrum.eigenvalues.clone(),
        delta_q_before: commutativity_residual(&baseline, rho_true)?,
        delta_q_after: if group.generator_indices().is_empty() {
            0.0
        } else {
            commutativity_residual(&group, rho_true)?
        },
        fidelities: AdaptiveFidelities {
            gevp_group: uhlmann_fidelity(&after_estimate, rho_true)?,
            baseline_hw: uhlmann_fidelity(&baseline_estimate, rho_true)?,
        },
        coarse_trace_distance: trace_distance(&coarse, rho_true)?,
        generator_commutator_true: frobenius_norm(&commutator(rho_true.matrix(), &gevp.generator)?),
        group_order: group.order(),
        group_kind,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::identity;
    use crate::linalg::testing::*;
    use crate::rng::stream;

    fn diag_density(v: &[f64]) -> DensityMatrix {
        DensityMatrix::new(CMatrix::from_diagonal(&CVector::from_iterator(v.len(), v.iter().map(|&x| c64(x, 0.0)))))
            .unwrap()
    }

    #[test]
    fn gell_mann_examples() {
        let b = gell_mann_basis(2).unwrap();
        let [x, y, z] = pauli();
        let s = 1.0 / 2f64.sqrt();
        assert!(frobenius_norm(&(&b.operators()[0] - x.scale(s))) < 1e-15);
        assert!(frobenius_norm(&(&b.operators()[1] - y.scale(s))) < 1e-15);
        assert!(frobenius_norm(&(&b.operators()[2] - z.scale(s))) < 1e-15);
        for d in 2..=8 {
            let b = gell_mann_basis(d).unwrap();
            assert_eq!(b.len(), d * d - 1);
            assert!(frobenius_norm(&(b.gram() - identity(d * d - 1))) < 1e-12);
        }
    }

    #[test]
    fn operator_basis_validation() {
        let [x, _, _] = pauli();
        assert!(matches!(OperatorBasis::new(vec![x.clone(), x.clone()]), Err(Error::NotPositiveDefinite)));
        let mut nh = x.clone();
        nh[(0, 1)] = c64(2.0, 0.0);
        assert!(matches!(OperatorBasis::new(vec![nh]), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn double_commutator_examples() {
        for d in [2, 3, 5] {
            let b = gell_mann_basis(d).unwrap();
            let m = double_commutator_matrix(&DensityMatrix::maximally_mixed(d), &b).unwrap();
            assert!(frobenius_norm(&m) < 1e-15);
        }
        let rho = diag_density(&[0.5, 0.3, 0.2]);
        let b = gell_mann_basis(3).unwrap();
        let m = double_commutator_matrix(&rho, &b).unwrap();
        // the last two operators are diagonal
        for j in [6, 7] {
            for i in 0..8 {
                assert!(m[(i, j)].norm() < 1e-15);
            }
        }
    }

    #[test]
    fn double_commutator_equals_commutator_gram() {
        let mut rng = stream(81);
        for d in [2, 3, 4, 6] {
            let b = gell_mann_basis(d).unwrap();
            let rho = random_density(&mut rng, d);
            let m = double_commutator_matrix(&rho, &b).unwrap();
            let comms: Vec<CMatrix> = b.operators().iter().map(|op| commutator(rho.matrix(), op).unwrap()).collect();
            let n = b.len();
            let oracle = CMatrix::from_fn(n, n, |i, j| hs_inner(&comms[i], &comms[j]));
            assert!(frobenius_norm(&(&m - oracle)) < 1e-10);
            let spectrum = solve_gevp(&m, b.gram()).unwrap();
            assert!(spectrum.eigenvalues[0] >= -1e-10);
        }
    }

    #[test]
    fn gevp_trivial_cases() {
        let g = identity(4);
        let zero = CMatrix::zeros(4, 4);
        let s = solve_gevp(&zero, &g).unwrap();
        assert!(s.eigenvalues.iter().all(|&l| l == 0.0));
        let mut rng = stream(82);
        let h = random_hermitian(&mut rng, 4);
        let s = solve_gevp(&h, &g).unwrap();
        let plain = crate::linalg::hermitian_eigenvalues(&h).unwrap();
        for (a, b) in s.eigenvalues.iter().zip(&plain) {
            assert!((a - b).abs() < 1e-10);
        }
        assert!(matches!(solve_gevp(&h, &(-identity(4))), Err(Error::NotPositiveDefinite)));
    }

    #[test]
    fn gevp_residual_and_orthonormality_random() {
        let mut rng = stream(83);
        for n in [2, 3, 5, 8] {
            for complex in [false, true] {
                let (m, g) = if complex {
                    let a = random_matrix(&mut rng, n, n);
                    (random_hermitian(&mut rng, n), &a * a.adjoint() + identity(n))
                } else {
                    let a = random_matrix(&mut rng, n, n).map(|z| c64(z.re, 0.0));
                    let h = random_matrix(&mut rng, n, n).map(|z| c64(z.re, 0.0));
                    (symmetrize(&h), &a * a.adjoint() + identity(n))
                };
                let s = solve_gevp(&m, &g).unwrap();
                assert!(s.max_residual(&m, &g) < 1e-8);
                assert!(s.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
                for (i, ci) in s.coefficient_vectors.iter().enumerate() {
                    for (j, cj) in s.coefficient_vectors.iter().enumerate() {
                        let ip = ci.dotc(&(&g * cj));
                        let expected = if i == j { 1.0 } else { 0.0 };
                        assert!((ip - c64(expected, 0.0)).norm() < 1e-8);
                    }
                }
            }
        }
    }

    #[test]
    fn generator_for_diagonal_state_commutes() {
        let rho = diag_density(&[0.4, 0.3, 0.2, 0.1]);
        let r = solve_for_generator(&rho, &gell_mann_basis(4).unwrap()).unwrap();
        assert!(r.spectrum.eigenvalues[0].abs() < 1e-12);
        assert!(frobenius_norm(&commutator(rho.matrix(), &r.generator).unwrap()) < 1e-8);
        assert!((frobenius_norm(&r.generator) - 1.0).abs() < 1e-12);
        assert!(r.unitary.residual() < 1e-10);
        assert!(hermiticity_residual(&r.generator) < 1e-14);
    }

    #[test]
    fn generator_for_maximally_mixed_takes_first_direction() {
        let b = gell_mann_basis(3).unwrap();
        let r = solve_for_generator(&DensityMatrix::maximally_mixed(3), &b).unwrap();
        assert!(r.spectrum.eigenvalues.iter().all(|&l| l == 0.0));
        let again = solve_for_generator(&DensityMatrix::maximally_mixed(3), &b).unwrap();
        assert_eq!(r.generator, again.generator);
        assert!(r.unitary.residual() < 1e-10);
    }

    #[test]
    fn zero_eigenvalue_iff_commuting_direction() {
        let mut rng = stream(84);
        let b = gell_mann_basis(3).unwrap();
        // generic full-rank state: only its own functions commute, and there
        // are d - 1 = 2 traceless ones, so lambda_min is zero.
        let rho = random_density(&mut rng, 3);
        let r = solve_for_generator(&rho, &b).unwrap();
        assert!(r.spectrum.eigenvalues[0] <= 1e-10);
        assert!(frobenius_norm(&commutator(rho.matrix(), &r.generator).unwrap()) <= 1e-8);
        // a basis with no commuting direction: the off-diagonal Gell-Mann
        // matrices against a diagonal state with distinct entries
        let rho = diag_density(&[0.6, 0.3, 0.1]);
        let off = OperatorBasis::new(b.operators()[..6].to_vec()).unwrap();
        let m = double_commutator_matrix(&rho, &off).unwrap();
        let s = solve_gevp(&m, off.gram()).unwrap();
        assert!(s.eigenvalues[0] > 1e-3);
    }

    #[test]
    fn quantized_group_commutes_with_generator() {
        let rho = diag_density(&[0.5, 0.3, 0.2]);
        let r = solve_for_generator(&rho, &gell_mann_basis(3).unwrap()).unwrap();
        let (group, kind) = cyclic_group_from_unitary(&r.unitary).unwrap();
        assert_eq!(kind, CyclicGroupKind::Quantized);
        group.check_closure().unwrap();
        for u in group.unitaries() {
            assert!(frobenius_norm(&commutator(u.matrix(), &r.generator).unwrap()) < 1e-8);
        }
        let x = UnitaryMatrix::new(crate::groups::shift_operator(3)).unwrap();
        let (group, kind) = cyclic_group_from_unitary(&x).unwrap();
        assert_eq!((group.order(), kind), (3, CyclicGroupKind::Exact));
    }

    #[test]
    fn linear_inversion_recovers_state_from_exact_frequencies() {
        let fid = crate::povm::find_sic_fiducial(3, &crate::povm::SicSearchConfig { restarts: 8, ..Default::default() })
            .unwrap();
        let sic = crate::povm::build_sic_povm(3, &fid).unwrap();
        let rho = diag_density(&[0.6, 0.3, 0.1]);
        let p = born_probabilities(&rho, &sic).unwrap();
        let scale = 1_000_000_000u64;
        let counts: Vec<u64> = p.probabilities().iter().map(|q| (q * scale as f64).round() as u64).collect();
        let est = sic_linear_inversion(&sic, &counts).unwrap();
        assert!(trace_distance(&est, &rho).unwrap() < 1e-6);
    }
}
