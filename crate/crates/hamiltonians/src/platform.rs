use quantum_core::{cr, Operator, C64};

use crate::{HamError, LambdaDriveConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Platform {
    Nv,
    SiCVv,
    SiV,
}

/// Defect parameters. Couplings are stored as magnitudes in MHz per unit
/// strain; sign conventions are applied where the operators are built.
#[derive(Clone, Debug)]
pub struct PlatformParams {
    pub platform: Platform,
    /// Zero-field splitting (spin-1 hosts) in MHz.
    pub d_mhz: f64,
    /// Electron gyromagnetic ratio, MHz/G.
    pub gamma_e: f64,
    /// Static axial field, G.
    pub b_z: f64,
    pub h26: f64,
    pub h25: f64,
    pub h16: f64,
    pub h43: f64,
    /// Orbital strain coupling (SiV), MHz/strain.
    pub f_perp: f64,
    /// Spin-orbit splitting (SiV), MHz.
    pub delta_so_mhz: f64,
}

impl PlatformParams {
    pub fn nv() -> Self {
        PlatformParams {
            platform: Platform::Nv,
            d_mhz: 2870.0,
            gamma_e: 2.8,
            b_z: 50.0,
            h26: 2830.0,
            h25: 2600.0,
            h16: 19660.0,
            h43: 2300.0,
            f_perp: 0.0,
            delta_so_mhz: 0.0,
        }
    }

    /// Divacancy in 3C-SiC: same point group as NV, much smaller
    /// double-quantum to single-quantum coupling ratio.
    pub fn sic_3c() -> Self {
        PlatformParams {
            platform: Platform::SiCVv,
            d_mhz: 1330.0,
            gamma_e: 2.8,
            b_z: 50.0,
            h26: 1800.0,
            h25: 0.0,
            h16: 1350.0,
            h43: 0.0,
            f_perp: 0.0,
            delta_so_mhz: 0.0,
        }
    }

    pub fn siv() -> Self {
        PlatformParams {
            platform: Platform::SiV,
            d_mhz: 0.0,
            gamma_e: 2.8,
            b_z: 0.0,
            h26: 0.0,
            h25: 0.0,
            h16: 0.0,
            h43: 0.0,
            f_perp: 1.3e9,
            delta_so_mhz: 48_000.0,
        }
    }

    pub fn is_spin_one(&self) -> bool {
        matches!(self.platform, Platform::Nv | Platform::SiCVv)
    }

    /// Computational doublet splitting 2 γ_e B_z in MHz.
    pub fn doublet_splitting(&self) -> f64 {
        2.0 * self.gamma_e * self.b_z
    }
}

/// H₀/h = D S_z² + γ_e B_z S_z, diagonal in (|+1⟩, |0⟩, |−1⟩).
pub fn nv_static(params: &PlatformParams) -> Result<Operator, HamError> {
    if !params.is_spin_one() {
        return Err(HamError::WrongPlatform(params.platform));
    }
    let zeeman = params.gamma_e * params.b_z;
    let mut m = nalgebra::DMatrix::<C64>::zeros(3, 3);
    m[(0, 0)] = cr(params.d_mhz + zeeman);
    m[(2, 2)] = cr(params.d_mhz - zeeman);
    Ok(Operator::new(m))
}

#[derive(Clone, Copy, Debug)]
pub struct StarkScale {
    /// Strain amplitude needed for the target single-quantum rate.
    pub epsilon0: f64,
    /// Parasitic double-quantum Rabi rate at that strain, MHz.
    pub omega_dq_mhz: f64,
    /// Dispersive shift scale, kHz.
    pub delta_ac_khz: f64,
}

/// δ_AC = |h16/h26|²·Ω_m²/(4D). The same strain that drives the Λ legs
/// also drives the Δm = ±2 channel; detuned by ~2D it leaves a
/// quadratic light shift.
pub fn dq_stark_scale(omega_m: f64, params: &PlatformParams) -> Result<StarkScale, HamError> {
    if !params.is_spin_one() {
        return Err(HamError::WrongPlatform(params.platform));
    }
    if omega_m <= 0.0 {
        return Err(HamError::BadParams("omega_m must be positive".into()));
    }
    let epsilon0 = omega_m / params.h26;
    let omega_dq_mhz = params.h16 * epsilon0;
    let delta_ac_mhz = omega_dq_mhz * omega_dq_mhz / (4.0 * params.d_mhz);
    Ok(StarkScale {
        epsilon0,
        omega_dq_mhz,
        delta_ac_khz: delta_ac_mhz * 1e3,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TempRegime {
    MilliKelvin,
    FourKelvin,
}

#[derive(Clone, Debug)]
pub struct SivLambda {
    pub params: PlatformParams,
    pub drive: LambdaDriveConfig,
    /// Orbital relaxation time of the upper branch, ns.
    pub t1_orb_ns: f64,
}

/// Orbital Λ system in the SiV ground-state doublets. No counterdiabatic
/// channel exists for the lower Kramers doublet, so the drive ships with
/// α_CD = 0 and gate times are stretched instead.
pub fn siv_platform(omega_m: f64, regime: TempRegime) -> SivLambda {
    let t1_orb_ns = match regime {
        TempRegime::MilliKelvin => 143.0,
        TempRegime::FourKelvin => 40.0,
    };
    SivLambda {
        params: PlatformParams::siv(),
        drive: LambdaDriveConfig {
            omega_m,
            alpha_cd: 0.0,
            ..LambdaDriveConfig::default()
        },
        t1_orb_ns,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nv_level_energies() {
        let h0 = nv_static(&PlatformParams::nv()).unwrap();
        assert!((h0.mat()[(0, 0)].re - 3010.0).abs() < 1e-12);
        assert!(h0.mat()[(1, 1)].norm() < 1e-15);
        assert!((h0.mat()[(2, 2)].re - 2730.0).abs() < 1e-12);
        assert!((PlatformParams::nv().doublet_splitting() - 280.0).abs() < 1e-12);
    }

    #[test]
    fn static_field_rejects_orbital_platform() {
        assert!(matches!(
            nv_static(&PlatformParams::siv()),
            Err(HamError::WrongPlatform(Platform::SiV))
        ));
    }

    #[test]
    fn nv_stark_scale_chain() {
        let s = dq_stark_scale(2.22, &PlatformParams::nv()).unwrap();
        assert!((s.epsilon0 - 7.845e-4).abs() < 5e-7);
        assert!((s.omega_dq_mhz - 15.42).abs() < 5e-3);
        assert!((s.delta_ac_khz - 20.718).abs() < 5e-3);
    }

    #[test]
    fn sic_stark_scale_and_platform_ratio() {
        let nv = dq_stark_scale(2.22, &PlatformParams::nv()).unwrap();
        let sic = dq_stark_scale(2.22, &PlatformParams::sic_3c()).unwrap();
        assert!((sic.delta_ac_khz - 0.521).abs() < 5e-4);
        assert!((nv.delta_ac_khz / sic.delta_ac_khz - 39.76).abs() < 5e-3);
    }

    #[test]
    fn stark_scale_is_quadratic_in_drive() {
        let p = PlatformParams::nv();
        let s1 = dq_stark_scale(1.37, &p).unwrap();
        let s2 = dq_stark_scale(2.74, &p).unwrap();
        assert!((s2.delta_ac_khz / s1.delta_ac_khz - 4.0).abs() < 1e-12);
    }

    #[test]
    fn siv_regimes() {
        let mk = siv_platform(300.0, TempRegime::MilliKelvin);
        assert!((mk.t1_orb_ns - 143.0).abs() < 1e-12);
        assert_eq!(mk.drive.alpha_cd, 0.0);
        let hot = siv_platform(300.0, TempRegime::FourKelvin);
        assert!((hot.t1_orb_ns - 40.0).abs() < 1e-12);
    }

    #[test]
    fn siv_strain_to_rabi() {
        let p = PlatformParams::siv();
        let omega = p.f_perp * 2.308e-7;
        assert!((omega - 300.0).abs() < 0.1);
    }
}
