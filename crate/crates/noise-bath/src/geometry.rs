use crate::kmc::HoppingRule;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use std::f64::consts::PI;

/// Dipolar field prefactor μ₀μ_B/4π in tesla·nm³.
pub const DIPOLE_FIELD_T_NM3: f64 = 9.274_010_078_3e-4;

pub const GAUSS_PER_TESLA: f64 = 1.0e4;

/// Surface-spin patch parameters.  Lengths in nm, correlation time in ns.
#[derive(Clone, Debug)]
pub struct SurfaceBathConfig {
    pub n_spins: usize,
    /// Areal spin density in nm⁻²; fixes the patch area at n_spins/density.
    pub density: f64,
    /// Hopping range r_c in the pair rate (1/τ_c)·exp(−r/r_c).
    pub r_c_nm: f64,
    /// Correlation time τ_c in ns; 1/τ_c is the contact hopping rate.
    pub tau_c_ns: f64,
    /// Defect depth below the surface plane, nm.
    pub depth_nm: f64,
    pub hopping: HoppingRule,
    pub master_seed: u64,
}

impl Default for SurfaceBathConfig {
    fn default() -> Self {
        SurfaceBathConfig {
            n_spins: 20,
            density: 0.004,
            r_c_nm: 5.0,
            tau_c_ns: 10.0,
            depth_nm: 20.0,
            hopping: HoppingRule::Swap,
            master_seed: 0x5eed_ba7b,
        }
    }
}

/// Axial dipolar field, in tesla per unit spin projection, produced at the
/// defect by a surface spin displaced laterally by `offset` from the point
/// directly overhead: (μ₀μ_B/4π)(3cos²α − 1)/r³ with cos α = d/r.
pub fn dipolar_coupling(offset: [f64; 2], depth_nm: f64) -> f64 {
    let r2 = offset[0] * offset[0] + offset[1] * offset[1] + depth_nm * depth_nm;
    let cos2 = depth_nm * depth_nm / r2;
    DIPOLE_FIELD_T_NM3 * (3.0 * cos2 - 1.0) / (r2 * r2.sqrt())
}

/// Variance of the axial field (tesla²) from an infinite half-plane of
/// independent spin-½ at areal density `density`, defect at depth `depth`:
/// (3π/16)·ρ_s·(μ₀μ_B/4π)²/d⁴.  The discrete patch is rescaled to this.
pub fn continuum_field_variance(density: f64, depth_nm: f64) -> f64 {
    0.25 * density * DIPOLE_FIELD_T_NM3 * DIPOLE_FIELD_T_NM3 * (0.75 * PI) / depth_nm.powi(4)
}

/// Pairwise polarization-hopping rate in µs⁻¹ for site separation `r_nm`.
pub fn hop_rate(r_nm: f64, tau_c_ns: f64, r_c_nm: f64) -> f64 {
    1.0e3 / tau_c_ns * (-r_nm / r_c_nm).exp()
}

/// One sampled bath lattice: site positions, initial states, per-site field
/// couplings, the static variance-normalization scalar, and the pair rate
/// table used by the jump process.
#[derive(Clone, Debug)]
pub struct BathGeometry {
    pub cfg: SurfaceBathConfig,
    /// Site coordinates in the surface plane, nm.
    pub positions: Vec<[f64; 2]>,
    /// Initial spin projections, fair coin over {+½, −½}.
    pub init_states: Vec<f64>,
    /// Per-site axial field coupling, tesla per unit spin projection.
    pub couplings: Vec<f64>,
    /// Scalar applied to every field sample of every trace drawn from this
    /// lattice; fixed once here so DC offsets survive.
    pub norm_factor: f64,
    /// (i, j, Γ_ij µs⁻¹) for all site pairs i < j.
    pub pair_rates: Vec<(u32, u32, f64)>,
    /// Σ Γ_ij, µs⁻¹.
    pub total_rate: f64,
}

impl BathGeometry {
    /// Normalized field for a given spin-state vector, in gauss.
    pub fn field_gauss(&self, states: &[f64]) -> f64 {
        let raw: f64 = states
            .iter()
            .zip(&self.couplings)
            .map(|(s, c)| s * c)
            .sum();
        self.norm_factor * raw * GAUSS_PER_TESLA
    }
}

/// Draw a bath lattice: sites uniform over a square patch of area N/ρ_s
/// centered above the defect, fair-coin initial states, couplings and pair
/// rates precomputed.  The normalization scalar is chosen so the fair-coin
/// field variance of this specific lattice equals the continuum half-plane
/// value; it is a property of the lattice, never of an individual trace.
pub fn sample_bath_geometry(cfg: &SurfaceBathConfig, seed: u64) -> BathGeometry {
    assert!(cfg.n_spins >= 1, "bath needs at least one spin");
    assert!(
        cfg.density > 0.0 && cfg.r_c_nm > 0.0 && cfg.tau_c_ns > 0.0 && cfg.depth_nm > 0.0,
        "bath parameters must be positive"
    );
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let half = 0.5 * (cfg.n_spins as f64 / cfg.density).sqrt();

    let mut positions = Vec::with_capacity(cfg.n_spins);
    let mut init_states = Vec::with_capacity(cfg.n_spins);
    for _ in 0..cfg.n_spins {
        positions.push([rng.gen_range(-half..half), rng.gen_range(-half..half)]);
        init_states.push(if rng.gen::<bool>() { 0.5 } else { -0.5 });
    }

    let couplings: Vec<f64> = positions
        .iter()
        .map(|p| dipolar_coupling(*p, cfg.depth_nm))
        .collect();
    let var_disc: f64 = 0.25 * couplings.iter().map(|c| c * c).sum::<f64>();
    assert!(var_disc > 0.0, "degenerate lattice with zero field variance");
    let norm_factor = (continuum_field_variance(cfg.density, cfg.depth_nm) / var_disc).sqrt();

    let mut pair_rates = Vec::with_capacity(cfg.n_spins * (cfg.n_spins - 1) / 2);
    let mut total_rate = 0.0;
    for i in 0..cfg.n_spins {
        for j in (i + 1)..cfg.n_spins {
            let dx = positions[i][0] - positions[j][0];
            let dy = positions[i][1] - positions[j][1];
            let rate = hop_rate((dx * dx + dy * dy).sqrt(), cfg.tau_c_ns, cfg.r_c_nm);
            pair_rates.push((i as u32, j as u32, rate));
            total_rate += rate;
        }
    }

    BathGeometry {
        cfg: cfg.clone(),
        positions,
        init_states,
        couplings,
        norm_factor,
        pair_rates,
        total_rate,
    }
}
