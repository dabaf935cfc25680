//! Control-waveform synthesis for the Λ-system gate family: echo-lune and
//! orange-slice sweep trajectories, counterdiabatic quadrature amplitudes,
//! the resonant double-quantum hardware tone, and the single-shot
//! bright-state command.

mod single_shot;
mod trajectory;

pub use single_shot::{
    avg_gate_fidelity_unitary, single_shot_controls, su2_gate, su2_gate_and_commutator,
    EnvelopeShape, OrderComparison, SingleShotCommand,
};
pub use trajectory::{
    build_trajectory, ProtocolKind, TrajectoryParams, TrajectorySamples,
};

use std::f64::consts::PI;

#[derive(Debug, thiserror::Error)]
pub enum ControlError {
    #[error("azimuth step width {width} µs is below 2 grid spacings ({spacing} µs each)")]
    StepNotResolvable { width: f64, spacing: f64 },
    #[error("invalid control parameters: {0}")]
    BadParams(String),
}

/// Counterdiabatic quadrature amplitudes in MHz (the propagator's 2π
/// restores rad/µs). They multiply the lower-manifold operators
/// Op_re = |−1⟩⟨+1| + h.c. and Op_im = i(|+1⟩⟨−1| − |−1⟩⟨+1|).
#[derive(Clone, Debug)]
pub struct SatdWaveform {
    pub omega_re: Vec<f64>,
    pub omega_im: Vec<f64>,
    pub alpha_cd: f64,
}

/// Ω_re = −α·θ̇·sin φ/(2π), Ω_im = +α·θ̇·cos φ/(2π). α = 1 is the exact
/// transitionless correction; other values are scanned deliberately.
///
/// The quadrature pair is fixed by requiring that ½(Ω_re·Op_re + Ω_im·Op_im)
/// cancel the non-adiabatic coupling ⟨B|∂_t D⟩ = −θ̇/2 of the dark state
/// cos(θ/2)|−1⟩ + e^{iφ} sin(θ/2)|+1⟩; equivalently it is the tone of
/// amplitude |θ̇|/2π at drive phase φ + π/2.
pub fn satd_waveform(traj: &TrajectorySamples, alpha_cd: f64) -> SatdWaveform {
    let n = traj.t.len();
    let mut omega_re = Vec::with_capacity(n);
    let mut omega_im = Vec::with_capacity(n);
    for k in 0..n {
        let td = traj.theta_dot[k];
        let phi = traj.phi[k];
        omega_re.push(-alpha_cd * td * phi.sin() / (2.0 * PI));
        omega_im.push(alpha_cd * td * phi.cos() / (2.0 * PI));
    }
    SatdWaveform {
        omega_re,
        omega_im,
        alpha_cd,
    }
}

/// Resonant double-quantum tone realizing the counterdiabatic term in
/// hardware: carrier at twice the Zeeman splitting, Rabi envelope |θ̇|/2π,
/// phase φ + π/2 with a π flip wherever θ̇ goes negative.
#[derive(Clone, Debug)]
pub struct DqHardwareTone {
    pub carrier_mhz: f64,
    pub envelope_mhz: Vec<f64>,
    pub phase: Vec<f64>,
    pub peak_strain: f64,
}

/// γ_e is the electron gyromagnetic ratio in MHz/G; b_z in gauss; h16 in
/// MHz/strain sets how much strain the peak envelope demands.
pub fn dq_satd_hardware(traj: &TrajectorySamples, b_z: f64, h16: f64) -> DqHardwareTone {
    const GAMMA_E: f64 = 2.8;
    let envelope_mhz: Vec<f64> = traj.theta_dot.iter().map(|td| td.abs() / (2.0 * PI)).collect();
    let phase: Vec<f64> = traj
        .theta_dot
        .iter()
        .zip(&traj.phi)
        .map(|(&td, &phi)| phi + PI / 2.0 + if td < 0.0 { PI } else { 0.0 })
        .collect();
    DqHardwareTone {
        carrier_mhz: 2.0 * GAMMA_E * b_z,
        envelope_mhz,
        phase,
        peak_strain: (PI / traj.t_gate) / h16.abs(),
    }
}

/// One row per sample: holonomic exports fill the trajectory and
/// counterdiabatic columns, single-shot exports the channel commands.
pub enum WaveformExport<'a> {
    Holonomic {
        traj: &'a TrajectorySamples,
        satd: &'a SatdWaveform,
    },
    SingleShot(&'a SingleShotCommand),
}

pub fn export_waveform_csv(export: &WaveformExport) -> String {
    let mut out = String::from("t_us,theta,phi,omega_re,omega_im,omega0,omega1_re,omega1_im,delta\n");
    match export {
        WaveformExport::Holonomic { traj, satd } => {
            for k in 0..traj.t.len() {
                out.push_str(&format!(
                    "{:.9},{:.9},{:.9},{:.9},{:.9},0,0,0,0\n",
                    traj.t[k], traj.theta[k], traj.phi[k], satd.omega_re[k], satd.omega_im[k],
                ));
            }
        }
        WaveformExport::SingleShot(cmd) => {
            for k in 0..cmd.t.len() {
                let (o0, o1, d) = cmd.controls(k);
                out.push_str(&format!(
                    "{:.9},0,0,0,0,{:.9},{:.9},{:.9},{:.9}\n",
                    cmd.t[k], o0, o1.re, o1.im, d,
                ));
            }
        }
    }
    out
}
