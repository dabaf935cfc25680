use nalgebra::{DMatrix, DVector};

use crate::{cr, sqrtm_psd, C64, Operator, QcError, QutritBasis};

const TRACE_TOL: f64 = 1e-9;
const HERM_TOL: f64 = 1e-10;
const EIG_TOL: f64 = 1e-9;

/// Validated density matrix: unit trace, Hermitian, positive semidefinite
/// (all within construction tolerances).
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    mat: DMatrix<C64>,
}

impl DensityMatrix {
    pub fn new(mat: DMatrix<C64>) -> Result<Self, QcError> {
        if mat.nrows() != mat.ncols() {
            return Err(QcError::DimensionMismatch(mat.nrows(), mat.ncols()));
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(QcError::BadTrace(tr.re));
        }
        let herm_dev = crate::max_abs_diff(&mat, &mat.adjoint());
        if herm_dev > HERM_TOL {
            return Err(QcError::NotHermitian(herm_dev));
        }
        let op = Operator::new(mat.clone());
        let (evals, _) = op.herm_eigen();
        if let Some(&min) = evals.first() {
            if min < -EIG_TOL {
                return Err(QcError::NotPositive(min));
            }
        }
        Ok(DensityMatrix { mat })
    }

    pub fn from_pure(ket: &DVector<C64>) -> Self {
        let n2: f64 = ket.iter().map(|z| z.norm_sqr()).sum();
        let k = ket.map(|z| z / n2.sqrt());
        DensityMatrix {
            mat: &k * k.adjoint(),
        }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix {
            mat: DMatrix::identity(dim, dim).map(|z: C64| z / dim as f64),
        }
    }

    /// Basis state |i⟩⟨i|.
    pub fn basis_state(dim: usize, i: usize) -> Self {
        let mut k = DVector::zeros(dim);
        k[i] = cr(1.0);
        DensityMatrix::from_pure(&k)
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn mat(&self) -> &DMatrix<C64> {
        &self.mat
    }

    pub fn population(&self, i: usize) -> f64 {
        self.mat[(i, i)].re
    }

    /// ⟨ψ|ρ|ψ⟩ for a normalized |ψ⟩.
    pub fn expectation(&self, ket: &DVector<C64>) -> f64 {
        (ket.adjoint() * &self.mat * ket)[(0, 0)].re
    }
}

/// Uhlmann–Jozsa fidelity F = (tr √(√ρ_id · ρ_act · √ρ_id))², clipped to
/// [0, 1] after a 1e-9 tolerance.
pub fn uhlmann_fidelity(rho_id: &DensityMatrix, rho_act: &DensityMatrix) -> Result<f64, QcError> {
    if rho_id.dim() != rho_act.dim() {
        return Err(QcError::DimensionMismatch(rho_id.dim(), rho_act.dim()));
    }
    let sq = sqrtm_psd(rho_id.mat(), EIG_TOL)?;
    let inner = &sq * rho_act.mat() * &sq;
    let sq_inner = sqrtm_psd(&inner, EIG_TOL)?;
    let f = sq_inner.trace().re.powi(2);
    if !(-1e-9..=1.0 + 1e-9).contains(&f) {
        return Err(QcError::NotPositive(f));
    }
    Ok(f.clamp(0.0, 1.0))
}

/// Split a qutrit state into auxiliary-level population (leakage) and the
/// renormalized logical-subspace qubit state. Survival is 1 − leakage.
pub fn project_computational(
    rho3: &DensityMatrix,
    basis: QutritBasis,
) -> Result<(DensityMatrix, f64), QcError> {
    if rho3.dim() != 3 {
        return Err(QcError::DimensionMismatch(rho3.dim(), 3));
    }
    let leakage = rho3.population(basis.aux).clamp(0.0, 1.0);
    if leakage >= 1.0 - 1e-12 {
        return Err(QcError::FullyLeaked);
    }
    let idx = basis.logical();
    let mut block: DMatrix<C64> = DMatrix::zeros(2, 2);
    for a in 0..2 {
        for b in 0..2 {
            block[(a, b)] = rho3.mat()[(idx[a], idx[b])] / (1.0 - leakage);
        }
    }
    // Renormalized block can pick up tiny negative eigenvalues from the
    // parent state's tolerance; clip through the validated constructor.
    let rho2 = DensityMatrix::new(block)?;
    Ok((rho2, leakage))
}
