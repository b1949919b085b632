//! Finite unitary (projective) representations used as measurement groups.
//!
//! A [`GroupRep`] is an ordered list of labelled unitaries with the identity at
//! index 0 and a declared generating set. Closure is only required up to a
//! global phase: estimators conjugate by `U_g`, so phases never matter.

use std::f64::consts::PI;

use itertools::Itertools;
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{
    c64, commutator, frobenius_norm, hermitian_eig, identity, phase_distance, projector, CMatrix, CVector,
    DensityMatrix, UnitaryMatrix,
};

/// Tolerance for `||UV - e^{i phi} W||_F` in the closure check.
pub const CLOSURE_TOL: f64 = 1e-8;
/// Groups up to this order get an exhaustive closure check; larger ones are sampled.
pub const EXHAUSTIVE_CLOSURE_MAX: usize = 16;
const SAMPLED_CLOSURE_PAIRS: usize = 100;
/// Eigenvalues closer than this are treated as one degenerate eigenspace.
pub const DEGENERACY_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct GroupElement {
    pub label: String,
    pub unitary: UnitaryMatrix,
}

#[derive(Debug, Clone)]
pub struct GroupRep {
    name: String,
    dim: usize,
    elements: Vec<GroupElement>,
    generator_indices: Vec<usize>,
}

impl GroupRep {
    /// Builds a representation from raw matrices, validating every invariant.
    pub fn from_elements(
        name: impl Into<String>,
        elements: Vec<(String, CMatrix)>,
        generator_indices: Vec<usize>,
    ) -> Result<Self> {
        let first = elements.first().ok_or_else(|| Error::invalid("group needs at least one element"))?;
        let dim = first.1.nrows();
        let mut validated = Vec::with_capacity(elements.len());
        for (label, m) in elements {
            if m.nrows() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: m.nrows() });
            }
            validated.push(GroupElement { label, unitary: UnitaryMatrix::new(m)? });
        }
        let id_residual = phase_distance(validated[0].unitary.matrix(), &identity(dim));
        if id_residual > 1e-10 {
            return Err(Error::invalid(format!("element 0 is not the identity (residual {id_residual:.3e})")));
        }
        if let Some(&bad) = generator_indices.iter().find(|&&g| g >= validated.len()) {
            return Err(Error::invalid(format!("generator index {bad} out of range")));
        }
        let rep = GroupRep { name: name.into(), dim, elements: validated, generator_indices };
        rep.check_closure()?;
        Ok(rep)
    }

    fn assemble(name: impl Into<String>, dim: usize, elements: Vec<(String, CMatrix)>, gens: Vec<usize>) -> Self {
        let elements = elements
            .into_iter()
            .map(|(label, m)| GroupElement { label, unitary: UnitaryMatrix::new_unchecked(m) })
            .collect();
        GroupRep { name: name.into(), dim, elements, generator_indices: gens }
    }

    /// The one-element group `{I}`.
    pub fn trivial(dim: usize) -> Self {
        Self::assemble("trivial", dim, vec![("I".into(), identity(dim))], vec![])
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn unitaries(&self) -> impl Iterator<Item = &UnitaryMatrix> {
        self.elements.iter().map(|e| &e.unitary)
    }

    pub fn generator_indices(&self) -> &[usize] {
        &self.generator_indices
    }

    /// Checks projective closure: exhaustively for small groups, on sampled pairs otherwise.
    pub fn check_closure(&self) -> Result<()> {
        let n = self.order();
        if n <= EXHAUSTIVE_CLOSURE_MAX {
            for (i, j) in (0..n).cartesian_product(0..n) {
                self.check_product(i, j)?;
            }
        } else {
            let mut rng = crate::rng::stream(0x00C1_0505);
            for _ in 0..SAMPLED_CLOSURE_PAIRS {
                let (i, j) = (rng.random_range(0..n), rng.random_range(0..n));
                self.check_product(i, j)?;
            }
        }
        Ok(())
    }

    fn check_product(&self, i: usize, j: usize) -> Result<()> {
        let product = self.elements[i].unitary.matrix() * self.elements[j].unitary.matrix();
        let best = self
            .unitaries()
            .map(|w| phase_distance(&product, w.matrix()))
            .fold(f64::INFINITY, f64::min);
        if best > CLOSURE_TOL {
            return Err(Error::NotClosed { left: i, right: j, residual: best });
        }
        Ok(())
    }

    /// `{U_g |psi>}` in element order.
    pub fn orbit(&self, psi: &CVector) -> Vec<CVector> {
        self.unitaries().map(|u| u.matrix() * psi).collect()
    }

    /// Uniform conjugation average `(1/|G|) sum_g U_g M U_g^dag`.
    pub fn twirl(&self, m: &CMatrix) -> CMatrix {
        let mut acc = CMatrix::zeros(self.dim, self.dim);
        for u in self.unitaries() {
            acc += u.conjugate(m);
        }
        acc.unscale(self.order() as f64)
    }

    /// Rank of the Gram matrix of the orbit of `psi`, i.e. the dimension of its span.
    pub fn orbit_rank(&self, psi: &CVector) -> usize {
        let orbit = self.orbit(psi);
        let n = orbit.len();
        let gram = CMatrix::from_fn(n, n, |i, j| orbit[i].dotc(&orbit[j]));
        let values = hermitian_eig(&gram).expect("Gram matrix is Hermitian").values;
        let top = values.last().copied().unwrap_or(0.0);
        values.iter().filter(|&&l| l > 1e-10 * top.max(1e-300)).count()
    }
}

fn root_of_unity(d: usize, k: usize) -> Complex64 {
    let k = k % d;
    if k == 0 {
        c64(1.0, 0.0)
    } else {
        Complex64::from_polar(1.0, 2.0 * PI * k as f64 / d as f64)
    }
}

/// Cyclic shift `X|j> = |j+1 mod d>`.
pub fn shift_operator(d: usize) -> CMatrix {
    displacement(d, 1, 0)
}

/// Clock `Z|j> = omega^j |j>`.
pub fn clock_operator(d: usize) -> CMatrix {
    displacement(d, 0, 1)
}

/// `X^a Z^b`, built entrywise: it maps `|j>` to `omega^{bj} |j+a>`.
pub fn displacement(d: usize, a: usize, b: usize) -> CMatrix {
    let mut m = CMatrix::zeros(d, d);
    for j in 0..d {
        m[((j + a) % d, j)] = root_of_unity(d, b * j);
    }
    m
}

fn ensure_dim(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::invalid(format!("dimension must be at least 2, got {d}")));
    }
    Ok(())
}

/// Heisenberg-Weyl group `{X^a Z^b}` of order `d^2`; element `a*d + b` is `X^a Z^b`.
/// Generators are `X` and `Z`.
pub fn build_heisenberg_weyl(d: usize) -> Result<GroupRep> {
    ensure_dim(d)?;
    let elements = (0..d)
        .cartesian_product(0..d)
        .map(|(a, b)| (format!("X^{a} Z^{b}"), displacement(d, a, b)))
        .collect();
    Ok(GroupRep::assemble(format!("HW({d})"), d, elements, vec![d, 1]))
}

/// `{I, sigma_x, sigma_y, sigma_z}` with generators `sigma_x`, `sigma_z`.
pub fn build_pauli_qubit() -> GroupRep {
    let o = c64(0.0, 0.0);
    let l = c64(1.0, 0.0);
    let i = c64(0.0, 1.0);
    let elements = vec![
        ("I".to_string(), identity(2)),
        ("X".to_string(), CMatrix::from_row_slice(2, 2, &[o, l, l, o])),
        ("Y".to_string(), CMatrix::from_row_slice(2, 2, &[o, -i, i, o])),
        ("Z".to_string(), CMatrix::from_row_slice(2, 2, &[l, o, o, -l])),
    ];
    GroupRep::assemble("Pauli", 2, elements, vec![1, 3])
}

/// `{X^k}` for the cyclic shift `X`.
pub fn build_cyclic_shift(d: usize) -> Result<GroupRep> {
    ensure_dim(d)?;
    let elements = (0..d).map(|k| (format!("X^{k}"), displacement(d, k, 0))).collect();
    Ok(GroupRep::assemble(format!("Z{d}-shift"), d, elements, vec![1]))
}

/// `{I, U}` for a unitary with `U^2 = e^{i phi} I`.
pub fn build_involution_pair(u: &UnitaryMatrix) -> Result<GroupRep> {
    let d = u.dim();
    let square = u.matrix() * u.matrix();
    let residual = phase_distance(&square, &identity(d));
    if residual > 1e-8 {
        return Err(Error::NotInvolution { residual });
    }
    let elements = vec![("I".to_string(), identity(d)), ("U".to_string(), u.matrix().clone())];
    Ok(GroupRep::assemble("involution-pair", d, elements, vec![1]))
}

/// Eigenvectors of `rho` as columns, ordered by descending eigenvalue, with a
/// deterministic basis inside each degenerate eigenspace.
///
/// Inside a degenerate block the basis is rebuilt by pivoted Gram-Schmidt on
/// the projected computational basis vectors, so it depends only on the
/// eigenspace and not on the solver. Every vector's largest-magnitude
/// component is made real positive, and vectors of one block are ordered by
/// the index of that component.
pub fn canonical_eigenbasis(rho: &DensityMatrix) -> (Vec<f64>, CMatrix) {
    let eig = rho.eigen();
    let d = eig.dim();
    let desc: Vec<usize> = (0..d).rev().collect();
    let mut values = Vec::with_capacity(d);
    let mut columns: Vec<CVector> = Vec::with_capacity(d);
    let mut start = 0;
    while start < d {
        let mut end = start + 1;
        while end < d && (eig.values[desc[start]] - eig.values[desc[end]]).abs() <= DEGENERACY_TOL {
            end += 1;
        }
        let block: Vec<CVector> = desc[start..end].iter().map(|&k| eig.vector(k)).collect();
        let mut basis = if block.len() == 1 { block } else { canonical_subspace_basis(&block, d) };
        for v in basis.iter_mut() {
            fix_phase(v);
        }
        basis.sort_by_key(peak_index);
        for (k, v) in basis.into_iter().enumerate() {
            values.push(eig.values[desc[start + k]]);
            columns.push(v);
        }
        start = end;
    }
    (values, CMatrix::from_columns(&columns))
}

fn canonical_subspace_basis(block: &[CVector], d: usize) -> Vec<CVector> {
    let k = block.len();
    let mut projector_sum = CMatrix::zeros(d, d);
    for v in block {
        projector_sum += projector(v);
    }
    let mut candidates: Vec<CVector> = (0..d).map(|j| projector_sum.column(j).into_owned()).collect();
    let mut basis: Vec<CVector> = Vec::with_capacity(k);
    for _ in 0..k {
        let (best, _) = candidates
            .iter()
            .enumerate()
            .map(|(j, v)| (j, v.norm()))
            .fold((0, -1.0), |acc, (j, n)| if n > acc.1 + 1e-12 { (j, n) } else { acc });
        let v = candidates[best].clone();
        let v = v.unscale(v.norm());
        for c in candidates.iter_mut() {
            let overlap = v.dotc(c);
            *c -= &v * overlap;
        }
        basis.push(v);
    }
    basis
}

fn peak_index(v: &CVector) -> usize {
    v.iter()
        .enumerate()
        .fold((0, -1.0), |acc, (j, z)| if z.norm() > acc.1 + 1e-12 { (j, z.norm()) } else { acc })
        .0
}

fn fix_phase(v: &mut CVector) {
    let z = v[peak_index(v)];
    if z.norm() > 0.0 {
        let phase = z.conj() / z.norm();
        *v *= phase;
    }
}

/// Cyclic group `{V X^k V^dag}` with `V` the canonical eigenbasis of `rho`.
pub fn build_matched_cyclic(rho: &DensityMatrix) -> GroupRep {
    let d = rho.dim();
    let (_, v) = canonical_eigenbasis(rho);
    let vh = v.adjoint();
    let elements = (0..d)
        .map(|k| (format!("V X^{k} V^dag"), &v * displacement(d, k, 0) * &vh))
        .collect();
    GroupRep::assemble(format!("matched-Z{d}"), d, elements, vec![1])
}

/// Powers of `u` until `u^n` returns to the identity up to phase.
///
/// Fails if no power up to `max_order` closes within [`CLOSURE_TOL`].
pub fn build_cyclic_from_generator(name: impl Into<String>, u: &UnitaryMatrix, max_order: usize) -> Result<GroupRep> {
    let d = u.dim();
    let id = identity(d);
    let mut elements = vec![("I".to_string(), id.clone())];
    let mut power = u.matrix().clone();
    for n in 1..=max_order {
        if phase_distance(&power, &id) <= CLOSURE_TOL {
            let gens = if n > 1 { vec![1] } else { vec![] };
            return Ok(GroupRep::assemble(name, d, elements, gens));
        }
        elements.push((format!("U^{n}"), power.clone()));
        power = u.matrix() * power;
    }
    Err(Error::NotClosed { left: 1, right: max_order, residual: phase_distance(&power, &id) })
}

/// Permutation-matrix representation of `S_d` for `2 <= d <= 5`.
/// Generators are the transposition `(0 1)` and the cycle `(0 1 ... d-1)`.
pub fn build_symmetric_group(d: usize) -> Result<GroupRep> {
    ensure_dim(d)?;
    if d > 5 {
        return Err(Error::invalid(format!("S_d is only enumerated for d <= 5, got {d}")));
    }
    let perms: Vec<Vec<usize>> = (0..d).permutations(d).collect();
    let transposition: Vec<usize> = (0..d).map(|j| match j { 0 => 1, 1 => 0, j => j }).collect();
    let cycle: Vec<usize> = (0..d).map(|j| (j + 1) % d).collect();
    let find = |p: &Vec<usize>| perms.iter().position(|q| q == p).expect("permutation enumerated");
    let gens = vec![find(&transposition), find(&cycle)];
    let elements = perms
        .iter()
        .map(|p| {
            let mut m = CMatrix::zeros(d, d);
            for (j, &pj) in p.iter().enumerate() {
                m[(pj, j)] = c64(1.0, 0.0);
            }
            (format!("perm{p:?}"), m)
        })
        .collect();
    Ok(GroupRep::assemble(format!("S{d}"), d, elements, gens))
}

/// Cayley operator `A_G = sum_{s} (U_s + U_s^dag)` over the declared generators.
///
/// A generator equal to an earlier generator or to the inverse of one is
/// skipped, so listing both `g` and `g^-1` does not double count.
pub fn cayley_operator(rep: &GroupRep) -> Result<CMatrix> {
    if rep.generator_indices().is_empty() {
        return Err(Error::invalid(format!("group {} has no declared generators", rep.name())));
    }
    let mut kept: Vec<&CMatrix> = Vec::new();
    let mut acc = CMatrix::zeros(rep.dim(), rep.dim());
    for &g in rep.generator_indices() {
        let u = rep.elements()[g].unitary.matrix();
        let duplicate = kept
            .iter()
            .any(|s| frobenius_norm(&(u - *s)) <= 1e-10 || frobenius_norm(&(u.adjoint() - *s)) <= 1e-10);
        if duplicate {
            continue;
        }
        acc += u + u.adjoint();
        kept.push(u);
    }
    Ok(acc)
}

/// `||[A_G, rho]||_F / ||rho||_F`.
pub fn commutativity_residual(rep: &GroupRep, rho: &DensityMatrix) -> Result<f64> {
    if rep.dim() != rho.dim() {
        return Err(Error::DimensionMismatch { expected: rep.dim(), found: rho.dim() });
    }
    let a = cayley_operator(rep)?;
    Ok(frobenius_norm(&commutator(&a, rho.matrix())?) / frobenius_norm(rho.matrix()))
}
