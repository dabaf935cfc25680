//! Qubit process tomography on the qutrit's logical pair, fidelity and
//! erasure-channel metrics, and static sector diagnostics of the Λ drive.
//!
//! Channel reconstruction is linear inversion over the fixed six-state
//! input set; everything downstream (fidelities, Pauli twirl, bootstrap
//! intervals) consumes the resulting 4×4 Choi matrix in the
//! input ⊗ output index convention.

mod channel;
mod choi;
mod metrics;
mod sector;

pub use channel::{extract_biased_erasure, BiasedErasureChannel, P_XY_FLOOR};
pub use choi::{
    bell_phi_plus, choi_from_kraus, choi_from_outputs, choi_reconstruct, ic_states, target_bell,
    ChoiMatrix, IC_PLUS_Z,
};
pub use metrics::{effective_fidelity, gate_fidelities, process_metrics, ProcessMetrics};
pub use sector::{
    first_order_dark_correction, mixed_sector_scan, sector_injection, spurion_robustness,
    MixedScanResult, SectorInjectionResult, SectorProbe, SpurionReport,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum TomoError {
    #[error("expected the six informationally complete outputs, got {0}")]
    WrongInputCount(usize),
    #[error("reconstruction rejected: {0}")]
    BadReconstruction(String),
    #[error("state error: {0}")]
    State(#[from] quantum_core::QcError),
    #[error("{0} = {1} out of range")]
    OutOfRange(&'static str, f64),
}
