use std::f64::consts::PI;

use num_complex::Complex;
use quantum_core::{c, cr, Operator, C64};

use crate::ControlError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnvelopeShape {
    SinSquared,
    FlatTop,
}

/// Bright-state drive command: one envelope Ω(t) steering the fixed
/// control direction u₀ = (cos α cos(ϑ/2), cos α e^{−iφ} sin(ϑ/2), sin α)
/// for the channels (Ω₀, Ω₁, Δ). Because the direction never moves, the
/// generator commutes with itself at all times and only the pulse area
/// matters downstream.
#[derive(Clone, Debug)]
pub struct SingleShotCommand {
    pub axis_polar: f64,
    pub axis_azimuth: f64,
    pub alpha: f64,
    pub shape: EnvelopeShape,
    pub t: Vec<f64>,
    /// Envelope in MHz; the cyclic condition fixes ∫Ω dt = 1 in
    /// cycle units so the bright branches wind by full turns.
    pub omega: Vec<f64>,
    pub t_gate: f64,
}

impl SingleShotCommand {
    /// Constant direction multiplying the envelope.
    pub fn control_direction(&self) -> (f64, C64, f64) {
        let ca = self.alpha.cos();
        let u0 = ca * (self.axis_polar / 2.0).cos();
        let u1 = Complex::from_polar(ca * (self.axis_polar / 2.0).sin(), -self.axis_azimuth);
        (u0, u1, self.alpha.sin())
    }

    /// Channel commands at sample k: (Ω₀, Ω₁, Δ) = Ω(t_k)·u₀.
    pub fn controls(&self, k: usize) -> (f64, C64, f64) {
        let (u0, u1, ud) = self.control_direction();
        let w = self.omega[k];
        (w * u0, u1 * cr(w), w * ud)
    }

    /// Trapezoid pulse area; unity for a well-formed command.
    pub fn area(&self) -> f64 {
        let mut a = 0.0;
        for k in 1..self.t.len() {
            a += (self.t[k] - self.t[k - 1]) * 0.5 * (self.omega[k] + self.omega[k - 1]);
        }
        a
    }

    /// Rotation angle the cyclic evolution imprints: γ = π(1 + sin α).
    pub fn predicted_gamma(&self) -> f64 {
        PI * (1.0 + self.alpha.sin())
    }
}

/// Solve the gate time from the unit-area condition and sample the
/// envelope. sin²: T = 2/Ω_max; flat top: T = 1/Ω_max.
pub fn single_shot_controls(
    axis: (f64, f64),
    alpha: f64,
    omega_max: f64,
    shape: EnvelopeShape,
    n_samples: usize,
) -> Result<SingleShotCommand, ControlError> {
    if alpha.abs() >= PI / 2.0 {
        return Err(ControlError::BadParams(
            "mixing angle must satisfy |alpha| < pi/2".into(),
        ));
    }
    if omega_max <= 0.0 {
        return Err(ControlError::BadParams("omega_max must be positive".into()));
    }
    if n_samples < 2 {
        return Err(ControlError::BadParams("need at least 2 samples".into()));
    }
    let t_gate = match shape {
        EnvelopeShape::SinSquared => 2.0 / omega_max,
        EnvelopeShape::FlatTop => 1.0 / omega_max,
    };
    let n = n_samples;
    let mut t = Vec::with_capacity(n + 1);
    let mut omega = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let tk = t_gate * k as f64 / n as f64;
        t.push(tk);
        omega.push(match shape {
            EnvelopeShape::SinSquared => omega_max * (PI * tk / t_gate).sin().powi(2),
            EnvelopeShape::FlatTop => omega_max,
        });
    }
    Ok(SingleShotCommand {
        axis_polar: axis.0,
        axis_azimuth: axis.1,
        alpha,
        shape,
        t,
        omega,
        t_gate,
    })
}

/// U(n, γ) = cos(γ/2)·I − i sin(γ/2)·(n·σ) for a unit axis n.
pub fn su2_gate(axis: [f64; 3], gamma: f64) -> Operator {
    let norm = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
    assert!(norm > 1e-12, "rotation axis must be nonzero");
    let (nx, ny, nz) = (axis[0] / norm, axis[1] / norm, axis[2] / norm);
    let ch = cr((gamma / 2.0).cos());
    let sh = (gamma / 2.0).sin();
    Operator::from_rows(
        2,
        &[
            ch - c(0.0, sh * nz),
            c(-sh * ny, -sh * nx),
            c(sh * ny, -sh * nx),
            ch + c(0.0, sh * nz),
        ],
    )
}

/// Horodecki mean fidelity between unitaries: (|tr(U†V)|² + d) / (d(d+1)).
pub fn avg_gate_fidelity_unitary(u: &Operator, v: &Operator) -> f64 {
    let d = u.dim() as f64;
    let overlap = (u.dagger().mat() * v.mat()).trace();
    (overlap.norm_sqr() + d) / (d * (d + 1.0))
}

#[derive(Clone, Debug)]
pub struct OrderComparison {
    pub u1: Operator,
    pub u2: Operator,
    /// u1·u2 as a matrix product, so gate 2 acts first.
    pub ab: Operator,
    pub ba: Operator,
    pub avg_fidelity: f64,
    pub commutator_fro: f64,
    pub commutator_op: f64,
}

/// Build both compositions of two axis rotations and measure how far the
/// orders disagree. [U1, U2] = −2i sin(γ1/2) sin(γ2/2) (n1×n2)·σ, so the
/// family is non-Abelian exactly when the axes are skew.
pub fn su2_gate_and_commutator(
    n1: [f64; 3],
    gamma1: f64,
    n2: [f64; 3],
    gamma2: f64,
) -> OrderComparison {
    let u1 = su2_gate(n1, gamma1);
    let u2 = su2_gate(n2, gamma2);
    let ab = &u1 * &u2;
    let ba = &u2 * &u1;
    let comm = u1.commutator(&u2);
    OrderComparison {
        avg_fidelity: avg_gate_fidelity_unitary(&ab, &ba),
        commutator_fro: comm.fro_norm(),
        commutator_op: comm.op_norm(),
        u1,
        u2,
        ab,
        ba,
    }
}
