//! Time-dependent generator assembly for the Λ-manifold gates: static
//! defect Hamiltonians, the driven Λ term, the counterdiabatic correction,
//! the parasitic Stark shift and its compensation, the single-shot
//! bright-state Hamiltonian, and the detuned-bus entangling phase.
//!
//! All generators are stored as cycle frequencies (MHz); the propagator
//! supplies the 2π when integrating over µs.

mod assembly;
mod bus;
mod platform;
mod stark;

pub use assembly::{
    cd_operator, lambda_assembly, lambda_rwa, lambda_rwa_elliptic, single_shot_hamiltonian,
    single_shot_mixing_direction, single_shot_unitary, x_minus, x_plus, y_plus, AssemblyTerm,
    CdOperators, HamiltonianAssembly, LambdaDriveConfig,
};
pub use bus::{projector_bus_unitary, BusPhases};
pub use platform::{
    dq_stark_scale, nv_static, siv_platform, Platform, PlatformParams, SivLambda, StarkScale,
    TempRegime,
};
pub use stark::{stark_terms, StarkTerms, BESSEL_J0_PI};

#[derive(Debug, thiserror::Error)]
pub enum HamError {
    #[error("operation requires a spin-1 ground-state platform, got {0:?}")]
    WrongPlatform(Platform),
    #[error("invalid parameters: {0}")]
    BadParams(String),
}
