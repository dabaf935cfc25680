//! Time-dependent Lindblad integrator and Monte Carlo channel averaging.
//!
//! Equations of motion use cycle-frequency Hamiltonians (MHz) and times in
//! µs, so the coherent part is dρ/dt = −2πi[H(t), ρ].  Integration is an
//! embedded Dormand–Prince 5(4) pair with per-component error control;
//! stochastic field traces are handled exactly by restarting the stepper at
//! every telegraph event, with the field constant inside each segment.

mod lindblad;
mod montecarlo;
mod rk45;

pub use lindblad::{propagate, propagate_noisy, propagate_unitary, StochasticField};
pub use montecarlo::{monte_carlo_channel, BathCoupling, ChannelRun, NoiseModel, SeedPath};
pub use rk45::PropagationGrid;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum PropError {
    #[error("step size underflow at t = {t} µs (h = {h:.3e})")]
    StepUnderflow { t: f64, h: f64 },
    #[error("step budget exhausted at t = {t} µs after {n} steps; tolerances unattainable")]
    StepLimit { t: f64, n: usize },
    #[error("trace drifted by {drift:.3e} at t = {t} µs; integration is unreliable")]
    TraceDrift { t: f64, drift: f64 },
    #[error("invalid grid: {0}")]
    BadGrid(String),
    #[error("dimension mismatch: {0}")]
    Dim(String),
    #[error("output state rejected: {0}")]
    Output(String),
}
