use nalgebra::{DMatrix, DVector};
use propagation::ChannelRun;
use quantum_core::{
    c, cr, max_abs_diff, project_computational, C64, DensityMatrix, Operator, QutritBasis,
};

use crate::TomoError;

/// Index of the |0_L⟩ (= |−1⟩) preparation in the fixed input order
/// (+x, −x, +y, −y, +z, −z).
pub const IC_PLUS_Z: usize = 4;

/// The six informationally complete qubit inputs embedded on the logical
/// pair of the qutrit, ordered (+x, −x, +y, −y, +z, −z). The +z input is
/// |−1⟩; none of them populate the auxiliary level.
pub fn ic_states() -> Vec<DensityMatrix> {
    let idx = QutritBasis::STANDARD.logical();
    let s = 1.0 / 2f64.sqrt();
    // (|0_L⟩, |1_L⟩) coefficients of the six axis eigenstates.
    let coeffs: [[C64; 2]; 6] = [
        [cr(s), cr(s)],
        [cr(s), cr(-s)],
        [cr(s), c(0.0, s)],
        [cr(s), c(0.0, -s)],
        [cr(1.0), cr(0.0)],
        [cr(0.0), cr(1.0)],
    ];
    coeffs
        .iter()
        .map(|co| {
            let mut k: DVector<C64> = DVector::zeros(3);
            k[idx[0]] = co[0];
            k[idx[1]] = co[1];
            DensityMatrix::from_pure(&k)
        })
        .collect()
}

/// Choi matrix J = Σ_ij |i⟩⟨j| ⊗ Λ(|i⟩⟨j|) of a qubit channel, possibly
/// trace-decreasing when built from unconditioned logical blocks.
#[derive(Clone, Debug)]
pub struct ChoiMatrix {
    mat: DMatrix<C64>,
}

impl ChoiMatrix {
    pub fn new(mat: DMatrix<C64>) -> Result<Self, TomoError> {
        if mat.nrows() != 4 || mat.ncols() != 4 {
            return Err(TomoError::BadReconstruction(format!(
                "Choi must be 4×4, got {}×{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        if mat.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(TomoError::BadReconstruction(
                "non-finite entries".to_string(),
            ));
        }
        let dev = max_abs_diff(&mat, &mat.adjoint());
        if dev > 1e-8 {
            return Err(TomoError::BadReconstruction(format!(
                "Hermiticity deviation {dev:.3e}"
            )));
        }
        Ok(ChoiMatrix { mat })
    }

    pub fn mat(&self) -> &DMatrix<C64> {
        &self.mat
    }

    pub fn trace(&self) -> f64 {
        self.mat.trace().re
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let (evals, _) = Operator::new(self.mat.clone()).herm_eigen();
        evals[0]
    }

    /// Channel action Λ(ρ) = tr_in[J·(ρᵀ ⊗ I)].
    pub fn apply(&self, rho: &DMatrix<C64>) -> DMatrix<C64> {
        assert_eq!(rho.nrows(), 2);
        assert_eq!(rho.ncols(), 2);
        let mut out: DMatrix<C64> = DMatrix::zeros(2, 2);
        for b in 0..2 {
            for d in 0..2 {
                let mut s = cr(0.0);
                for a in 0..2 {
                    for e in 0..2 {
                        s += self.mat[(2 * a + b, 2 * e + d)] * rho[(a, e)];
                    }
                }
                out[(b, d)] = s;
            }
        }
        out
    }
}

/// Normalized Bell vector (|00⟩ + |11⟩)/√2 in the input ⊗ output index
/// convention of the Choi matrix.
pub fn bell_phi_plus() -> DVector<C64> {
    let s = 1.0 / 2f64.sqrt();
    DVector::from_vec(vec![cr(s), cr(0.0), cr(0.0), cr(s)])
}

/// (I ⊗ U)|Φ⁺⟩ for a 2×2 target unitary.
pub fn target_bell(u: &Operator) -> DVector<C64> {
    assert_eq!(u.dim(), 2);
    let s = 1.0 / 2f64.sqrt();
    let mut v: DVector<C64> = DVector::zeros(4);
    for i in 0..2 {
        for o in 0..2 {
            v[2 * i + o] = u.mat()[(o, i)] * s;
        }
    }
    v
}

/// Direct Choi of a Kraus-operator channel: J = Σ_k (I ⊗ K_k)·d|Φ⁺⟩⟨Φ⁺|·(I ⊗ K_k)†.
pub fn choi_from_kraus(kraus: &[Operator]) -> ChoiMatrix {
    let mut j: DMatrix<C64> = DMatrix::zeros(4, 4);
    for k in kraus {
        assert_eq!(k.dim(), 2, "qubit Kraus operators only");
        let mut v: DVector<C64> = DVector::zeros(4);
        for i in 0..2 {
            for o in 0..2 {
                v[2 * i + o] = k.mat()[(o, i)];
            }
        }
        j += &v * v.adjoint();
    }
    ChoiMatrix { mat: j }
}

fn logical_block(
    rho: &DensityMatrix,
    basis: QutritBasis,
    conditional: bool,
) -> Result<DMatrix<C64>, TomoError> {
    if rho.dim() != 3 {
        return Err(TomoError::BadReconstruction(format!(
            "expected qutrit outputs, got dim {}",
            rho.dim()
        )));
    }
    if conditional {
        let (rho2, _) = project_computational(rho, basis)?;
        Ok(rho2.mat().clone())
    } else {
        let idx = basis.logical();
        let mut m: DMatrix<C64> = DMatrix::zeros(2, 2);
        for a in 0..2 {
            for b in 0..2 {
                m[(a, b)] = rho.mat()[(idx[a], idx[b])];
            }
        }
        Ok(m)
    }
}

pub(crate) fn mean_aux_population(outputs: &[DensityMatrix]) -> f64 {
    let aux = QutritBasis::STANDARD.aux;
    outputs.iter().map(|r| r.population(aux)).sum::<f64>() / outputs.len() as f64
}

/// Linear-inversion Choi reconstruction from the six axis outputs.
/// `conditional` renormalizes every output on the logical pair first
/// (survival post-selection); otherwise the raw, trace-decreasing logical
/// blocks enter and the Choi trace reports the mean survival.
pub fn choi_from_outputs(
    outputs: &[DensityMatrix],
    conditional: bool,
) -> Result<ChoiMatrix, TomoError> {
    if outputs.len() != 6 {
        return Err(TomoError::WrongInputCount(outputs.len()));
    }
    let basis = QutritBasis::STANDARD;
    let blocks: Vec<DMatrix<C64>> = outputs
        .iter()
        .map(|r| logical_block(r, basis, conditional))
        .collect::<Result<_, _>>()?;

    // Images of I (averaged over the three axis pairs) and of the Paulis.
    let mut lam_i: DMatrix<C64> = DMatrix::zeros(2, 2);
    for b in &blocks {
        lam_i += b;
    }
    lam_i /= cr(3.0);
    let lam_x = &blocks[0] - &blocks[1];
    let lam_y = &blocks[2] - &blocks[3];
    let lam_z = &blocks[4] - &blocks[5];

    // Matrix-unit images rebuilt from the operator basis:
    // E_00 = (I+Z)/2, E_01 = (X+iY)/2, E_10 = (X−iY)/2, E_11 = (I−Z)/2.
    let half = cr(0.5);
    let i_half = c(0.0, 0.5);
    let lam_e = [
        [
            (&lam_i + &lam_z) * half,
            &lam_x * half + &lam_y * i_half,
        ],
        [
            &lam_x * half - &lam_y * i_half,
            (&lam_i - &lam_z) * half,
        ],
    ];

    let mut j: DMatrix<C64> = DMatrix::zeros(4, 4);
    for (i, row) in lam_e.iter().enumerate() {
        for (jj, lam) in row.iter().enumerate() {
            for b in 0..2 {
                for d in 0..2 {
                    j[(2 * i + b, 2 * jj + d)] = lam[(b, d)];
                }
            }
        }
    }
    ChoiMatrix::new(j)
}

/// Reconstruction straight off a Monte Carlo channel run; outputs must be
/// in the `ic_states` order.
pub fn choi_reconstruct(run: &ChannelRun, conditional: bool) -> Result<ChoiMatrix, TomoError> {
    choi_from_outputs(&run.outputs, conditional)
}
