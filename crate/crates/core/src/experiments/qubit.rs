use serde::{Deserialize, Serialize};

use crate::ensembles::qubit_from_bloch;
use crate::error::{Error, Result};
use crate::estimators::{qad_estimator, standard_estimator, Outcome};
use crate::groups::{build_involution_pair, build_pauli_qubit, GroupRep};
use crate::linalg::{c64, frobenius_norm, CMatrix, DensityMatrix, UnitaryMatrix};
use crate::metrics::{linear_fidelity, numerical_rank, uhlmann_fidelity};
use crate::povm::basis_vector;

/// Bloch vector of the worked example.
pub const EXAMPLE_BLOCH: [f64; 3] = [0.3, 0.0, 0.6];
const EXACT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QubitRow {
    pub method: String,
    pub group: String,
    pub rank: usize,
    pub uhlmann_fidelity: f64,
    pub linear_fidelity: f64,
    /// Published single-copy fidelity for this row.
    pub reference_fidelity: f64,
    pub eigenvalues: Vec<f64>,
    pub matrix: Vec<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QubitExampleReport {
    pub bloch: [f64; 3],
    pub outcome: usize,
    pub rows: Vec<QubitRow>,
    /// `Tr(rho sigma) + 2 sqrt(det rho det sigma)` for the Hadamard-group estimate.
    pub hadamard_closed_form_fidelity: f64,
    pub hadamard_reference_fidelity: f64,
    /// Closed form minus the published value.
    pub hadamard_fidelity_discrepancy: f64,
    pub notes: Vec<String>,
}

fn det2(m: &CMatrix) -> f64 {
    (m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]).re
}

fn expect_matrix(label: &str, got: &DensityMatrix, want: &CMatrix) -> Result<()> {
    let err = frobenius_norm(&(got.matrix() - want));
    if err > EXACT_TOL {
        return Err(Error::Verification(format!("{label} deviates from its exact form by {err:e}")));
    }
    Ok(())
}

fn row(method: &str, group: &str, est: &DensityMatrix, truth: &DensityMatrix, reference: f64) -> Result<QubitRow> {
    Ok(QubitRow {
        method: method.to_string(),
        group: group.to_string(),
        rank: numerical_rank(est.matrix(), None)?,
        uhlmann_fidelity: uhlmann_fidelity(est, truth)?,
        linear_fidelity: linear_fidelity(est, truth)?,
        reference_fidelity: reference,
        eigenvalues: est.eigenvalues(),
        matrix: crate::povm::matrix_to_pairs(est.matrix()),
    })
}

fn hadamard() -> UnitaryMatrix {
    let h = 1.0 / 2f64.sqrt();
    UnitaryMatrix::new(CMatrix::from_row_slice(2, 2, &[c64(h, 0.0), c64(h, 0.0), c64(h, 0.0), c64(-h, 0.0)]))
        .expect("Hadamard is unitary")
}

fn sigma_z() -> UnitaryMatrix {
    UnitaryMatrix::new(CMatrix::from_row_slice(2, 2, &[c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(-1.0, 0.0)]))
        .expect("sigma_z is unitary")
}

/// The single-qubit walkthrough: `rho = (I + 0.3 sigma_x + 0.6 sigma_z)/2`,
/// outcome `|0>`, and the estimators of the standard protocol and of the
/// Pauli, `{I, sigma_z}` and `{I, H}` groups. Fails if any estimate differs
/// from its exact closed form.
pub fn run_qubit_example() -> Result<QubitExampleReport> {
    let truth = qubit_from_bloch(EXAMPLE_BLOCH)?;
    let outcome = Outcome::new(0, basis_vector(2, 0))?;

    let z = c64(0.0, 0.0);
    let o = c64(1.0, 0.0);
    let zero_proj = CMatrix::from_row_slice(2, 2, &[o, z, z, z]);
    let half_identity = CMatrix::identity(2, 2).scale(0.5);
    let hadamard_avg = CMatrix::from_row_slice(2, 2, &[c64(3.0, 0.0), o, o, o]).scale(0.25);

    let std = standard_estimator(&outcome)?;
    let pauli = qad_estimator(&build_pauli_qubit(), &outcome)?;
    let z_pair: GroupRep = build_involution_pair(&sigma_z())?;
    let z_avg = qad_estimator(&z_pair, &outcome)?;
    let h_pair = build_involution_pair(&hadamard())?;
    let h_avg = qad_estimator(&h_pair, &outcome)?;

    expect_matrix("standard estimate", &std, &zero_proj)?;
    expect_matrix("Pauli average", &pauli, &half_identity)?;
    expect_matrix("{I, sigma_z} average", &z_avg, &zero_proj)?;
    expect_matrix("{I, H} average", &h_avg, &hadamard_avg)?;

    let rows = vec![
        row("standard", "-", &std, &truth, 0.80)?,
        row("group average", "Pauli {I,X,Y,Z}", &pauli, &truth, 0.50)?,
        row("group average", "{I, sigma_z}", &z_avg, &truth, 0.80)?,
        row("group average", "{I, H}", &h_avg, &truth, 0.91)?,
        row("true state", "-", &truth, &truth, 1.00)?,
    ];
    let closed = linear_fidelity(&h_avg, &truth)? + 2.0 * (det2(h_avg.matrix()) * det2(truth.matrix())).max(0.0).sqrt();
    let reference = 0.91;
    let mut notes = vec![
        "fidelity is Uhlmann (squared convention); linear fidelity is Tr(rho_hat rho)".to_string(),
        "the Pauli row's reference value 0.50 equals the linear fidelity, not the Uhlmann fidelity".to_string(),
    ];
    if (closed - reference).abs() > 5e-3 {
        notes.push(format!(
            "{{I, H}}: closed-form Uhlmann fidelity {closed:.5} differs from the reference {reference:.2} by {:+.5}",
            closed - reference
        ));
    }
    Ok(QubitExampleReport {
        bloch: EXAMPLE_BLOCH,
        outcome: 0,
        rows,
        hadamard_closed_form_fidelity: closed,
        hadamard_reference_fidelity: reference,
        hadamard_fidelity_discrepancy: closed - reference,
        notes,
    })
}
