//! Stochastic surface-spin bath and Lindblad collapse channels.
//!
//! The bath is a finite patch of electron spins on the diamond surface
//! (z = 0 plane) above a defect sitting at depth d below it.  Spin
//! polarization hops between sites via a kinetic Monte Carlo process and
//! the defect sees the instantaneous dipolar field sum, reported in
//! gauss as a piecewise-constant [`FieldTrace`].  Relaxation channels
//! that are not driven by this field (amplitude damping, rotating-frame
//! depolarization, orbital decay) are packaged as [`CollapseSet`]s of
//! jump operators with rates in µs⁻¹.

mod collapse;
mod geometry;
mod kmc;
mod seed;

pub use collapse::{lindblad_collapse_set, CollapsePlatform, CollapseSet};
pub use geometry::{
    continuum_field_variance, dipolar_coupling, hop_rate, sample_bath_geometry, BathGeometry,
    SurfaceBathConfig, DIPOLE_FIELD_T_NM3, GAUSS_PER_TESLA,
};
pub use kmc::{kmc_field_trace, FieldTrace, HoppingRule};
pub use seed::{child_rng, child_seed, splitmix64};
