use std::f64::consts::PI;

use nalgebra::DMatrix;
use quantum_core::{c, Operator, C64};

use crate::HamError;

/// Phases left on two Λ qubits after one closed loop of a shared detuned
/// mode driven through the logical bright projectors. Basis order of the
/// unitary: (d₁d₂, d₁b₂, b₁d₂, b₁b₂).
#[derive(Clone, Debug)]
pub struct BusPhases {
    /// Nonlocal phase on the joint bright projector, rad.
    pub chi: f64,
    /// Single-qubit phase picked up by the bright state of qubit 1.
    pub phi1: f64,
    pub phi2: f64,
    /// Loop closure time 1/δ, µs.
    pub t_gate_us: f64,
    pub unitary: Operator,
}

/// After T = 1/δ the mode displacement closes and each force sector F
/// keeps exp(2πi F²/δ²). With F ∈ {0, f₁, f₂, f₁+f₂} the cross term is
/// χ = 4π f₁f₂/δ² on P_b1 P_b2.
pub fn projector_bus_unitary(f1: f64, f2: f64, delta: f64) -> Result<BusPhases, HamError> {
    if delta == 0.0 {
        return Err(HamError::BadParams(
            "bus detuning must be nonzero".into(),
        ));
    }
    let phase = |force: f64| 2.0 * PI * force * force / (delta * delta);
    let phi1 = phase(f1);
    let phi2 = phase(f2);
    let chi = 4.0 * PI * f1 * f2 / (delta * delta);
    let mut u = DMatrix::<C64>::zeros(4, 4);
    u[(0, 0)] = c(0.0, 0.0).exp();
    u[(1, 1)] = c(0.0, phi2).exp();
    u[(2, 2)] = c(0.0, phi1).exp();
    u[(3, 3)] = c(0.0, phi1 + phi2 + chi).exp();
    Ok(BusPhases {
        chi,
        phi1,
        phi2,
        t_gate_us: 1.0 / delta.abs(),
        unitary: Operator::new(u),
    })
}
