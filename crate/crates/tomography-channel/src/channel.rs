use nalgebra::DMatrix;
use propagation::ChannelRun;
use quantum_core::{qubit_paulis, C64, Operator};

use crate::choi::{choi_from_outputs, mean_aux_population, ChoiMatrix};
use crate::TomoError;

/// Extracted X/Y rates below this are resolution-limited, not measured.
pub const P_XY_FLOOR: f64 = 1e-7;

/// Per-gate error channel split into a known-location erasure and the
/// residual Pauli components of the surviving population.
#[derive(Clone, Copy, Debug)]
pub struct BiasedErasureChannel {
    /// Detected leakage converted to erasure: η_det·L.
    pub p_era: f64,
    /// Phase-flip rate of the survivors (twirl diagonal, scaled by
    /// survival so it reads as a per-gate probability).
    pub p_z: f64,
    /// Undetected leakage folded into depolarizing noise: (1−η_det)·L.
    pub p_dep: f64,
    /// Combined X and Y rate of the survivors.
    pub p_xy: f64,
    pub eta_det: f64,
    /// True when p_xy sits below [`P_XY_FLOOR`].
    pub p_xy_at_floor: bool,
}

/// Pauli-twirl the survival-conditioned channel in the frame of the target
/// unitary and split the leakage by detection efficiency.
pub fn extract_biased_erasure(
    run: &ChannelRun,
    u_target: &Operator,
    eta_det: f64,
) -> Result<BiasedErasureChannel, TomoError> {
    if !(0.0..=1.0).contains(&eta_det) {
        return Err(TomoError::OutOfRange("eta_det", eta_det));
    }
    if run.outputs.len() != 6 {
        return Err(TomoError::WrongInputCount(run.outputs.len()));
    }
    let leakage = mean_aux_population(&run.outputs);
    let p_surv = 1.0 - leakage;
    let choi = choi_from_outputs(&run.outputs, true)?;

    // Target frame: compose with U† so the ideal gate becomes the identity
    // and the twirl diagnoses only the deviation.
    let iu: DMatrix<C64> =
        DMatrix::identity(2, 2).kronecker(&u_target.mat().adjoint());
    let j_t = &iu * choi.mat() * iu.adjoint();
    let choi_t = ChoiMatrix::new(j_t)?;

    let (sx, sy, sz) = qubit_paulis();
    let diag = |q: &Operator| -> f64 {
        let img = choi_t.apply(q.mat());
        0.5 * (q.mat() * img).trace().re
    };
    let (rxx, ryy, rzz) = (diag(&sx), diag(&sy), diag(&sz));
    let p_x = (0.25 * (1.0 + rxx - ryy - rzz)).max(0.0);
    let p_y = (0.25 * (1.0 - rxx + ryy - rzz)).max(0.0);
    let p_z_cond = (0.25 * (1.0 - rxx - ryy + rzz)).max(0.0);

    let p_xy = p_surv * (p_x + p_y);
    Ok(BiasedErasureChannel {
        p_era: eta_det * leakage,
        p_z: p_surv * p_z_cond,
        p_dep: (1.0 - eta_det) * leakage,
        p_xy,
        eta_det,
        p_xy_at_floor: p_xy < P_XY_FLOOR,
    })
}
