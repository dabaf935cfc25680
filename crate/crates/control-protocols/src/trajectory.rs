use std::f64::consts::PI;

use crate::ControlError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProtocolKind {
    /// Two (or, with phase cycling, N) sinusoidal lunes with the azimuth
    /// advancing by 2π/N between lunes and by δφ inside each lune.
    CompositeNgqc,
    /// Single two-leg sweep through the South Pole; the slower foil the
    /// composite protocol is benchmarked against.
    OrangeSlice,
}

#[derive(Clone, Copy, Debug)]
pub struct TrajectoryParams {
    pub theta_max: f64,
    /// Azimuth advance inside each lune, applied as a tanh step at the
    /// South-Pole crossing. Defaults: π/4 composite, π/2 orange slice.
    pub dphi: Option<f64>,
    /// Step width in µs; defaults to 1% of the sub-loop duration.
    pub step_width: Option<f64>,
    pub n_samples: usize,
    pub n_lunes: usize,
    pub phi0: f64,
}

impl Default for TrajectoryParams {
    fn default() -> Self {
        TrajectoryParams {
            theta_max: PI,
            dphi: None,
            step_width: None,
            n_samples: 2000,
            n_lunes: 2,
            phi0: 0.0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct TrajectorySamples {
    pub kind: ProtocolKind,
    pub t: Vec<f64>,
    pub theta: Vec<f64>,
    pub phi: Vec<f64>,
    /// Analytic derivative of θ; the counterdiabatic exactness is
    /// sensitive to derivative noise, so no finite differences.
    pub theta_dot: Vec<f64>,
    pub t_gate: f64,
    pub dphi: f64,
    pub n_lunes: usize,
}

impl TrajectorySamples {
    /// Solid angle enclosed by one lune: δφ(1 − cos θ_max).
    pub fn lune_solid_angle(&self) -> f64 {
        self.dphi * (1.0 - self.theta_max().cos())
    }

    pub fn theta_max(&self) -> f64 {
        self.theta.iter().cloned().fold(0.0, f64::max)
    }

    pub fn sub_loop_duration(&self) -> f64 {
        self.t_gate / self.n_lunes as f64
    }
}

/// Sample the lune trajectory. Each lune j of duration τ = T/N runs
/// θ(s) = θ_max·sin(πs/τ) from the North Pole through the South Pole and
/// back, with base azimuth φ₀ + 2πj/N and a tanh azimuth step of height
/// δφ centered at the pole crossing s = τ/2.
pub fn build_trajectory(
    kind: ProtocolKind,
    t_gate: f64,
    params: &TrajectoryParams,
) -> Result<TrajectorySamples, ControlError> {
    if t_gate <= 0.0 {
        return Err(ControlError::BadParams("t_gate must be positive".into()));
    }
    if params.n_samples < 500 {
        return Err(ControlError::BadParams(
            "need at least 500 samples to resolve the sweep".into(),
        ));
    }
    let n_lunes = match kind {
        ProtocolKind::OrangeSlice => 1,
        ProtocolKind::CompositeNgqc => params.n_lunes.max(1),
    };
    let dphi = params.dphi.unwrap_or(match kind {
        ProtocolKind::CompositeNgqc => PI / 4.0,
        ProtocolKind::OrangeSlice => PI / 2.0,
    });
    let tau = t_gate / n_lunes as f64;
    let width = params.step_width.unwrap_or(0.01 * tau);
    // Round the sample count up to a lune multiple so every lune boundary
    // sits on a grid point; otherwise the inter-lune azimuth advance lands
    // on a sample with θ already lifted off the pole.
    let per_lune = params.n_samples.div_ceil(n_lunes);
    let n = per_lune * n_lunes;
    let spacing = t_gate / n as f64;
    if width < 2.0 * spacing {
        return Err(ControlError::StepNotResolvable { width, spacing });
    }
    let mut t = Vec::with_capacity(n + 1);
    let mut theta = Vec::with_capacity(n + 1);
    let mut phi = Vec::with_capacity(n + 1);
    let mut theta_dot = Vec::with_capacity(n + 1);
    for k in 0..=n {
        // Integer grid arithmetic: fp division of t by τ can misassign a
        // boundary sample to the previous lune, shifting the inter-lune
        // azimuth advance one sample off the pole.
        let j = (k / per_lune).min(n_lunes - 1);
        let frac = (k - j * per_lune) as f64 / per_lune as f64;
        let base = params.phi0 + 2.0 * PI * j as f64 / n_lunes as f64;
        let step = 0.5 * (1.0 + (tau * (frac - 0.5) / width).tanh());
        t.push(t_gate * k as f64 / n as f64);
        theta.push(params.theta_max * (PI * frac).sin());
        theta_dot.push(params.theta_max * PI / tau * (PI * frac).cos());
        phi.push(base + dphi * step);
    }
    // Loop closure is exact up to fp roundoff in the sine evaluation.
    theta[0] = 0.0;
    let last = theta.len() - 1;
    theta[last] = 0.0;

    Ok(TrajectorySamples {
        kind,
        t,
        theta,
        phi,
        theta_dot,
        t_gate,
        dphi,
        n_lunes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn composite(t_gate: f64) -> TrajectorySamples {
        build_trajectory(
            ProtocolKind::CompositeNgqc,
            t_gate,
            &TrajectoryParams::default(),
        )
        .unwrap()
    }

    #[test]
    fn closed_loop_at_north_pole() {
        let traj = composite(1.833);
        assert!(traj.theta[0].abs() < 1e-9);
        assert!(traj.theta.last().unwrap().abs() < 1e-9);
    }

    #[test]
    fn south_pole_reached_at_quarter_time() {
        let traj = composite(1.833);
        let quarter = traj.t.len() / 4;
        assert!((traj.theta[quarter] - PI).abs() < 1e-6);
    }

    #[test]
    fn loop_two_starts_opposite() {
        let traj = composite(1.833);
        let half = traj.t.len() / 2;
        let start2 = traj.phi[half + 1];
        assert!((start2 - (traj.phi[0] + PI)).abs() < 1e-6);
    }

    #[test]
    fn echo_symmetry_between_lunes() {
        let traj = composite(2.0);
        let half = traj.t.len() / 2;
        for k in 1..half {
            assert!((traj.phi[half + k] - traj.phi[k] - PI).abs() < 1e-6);
            assert!((traj.theta[half + k] - traj.theta[k]).abs() < 1e-9);
        }
    }

    #[test]
    fn azimuth_step_centered_at_pole() {
        // The sample of fastest azimuth change must sit where sin θ has
        // collapsed, which is what neutralizes the coordinate singularity.
        for (kind, t_gate) in [
            (ProtocolKind::CompositeNgqc, 1.833),
            (ProtocolKind::OrangeSlice, 1.833),
            (ProtocolKind::CompositeNgqc, 0.4),
        ] {
            let traj = build_trajectory(kind, t_gate, &TrajectoryParams::default()).unwrap();
            let per_lune = traj.t.len() / traj.n_lunes;
            for j in 0..traj.n_lunes {
                let lo = j * per_lune + 1;
                let hi = ((j + 1) * per_lune).min(traj.t.len());
                let (kmax, _) = (lo..hi)
                    .map(|k| (k, (traj.phi[k] - traj.phi[k - 1]).abs()))
                    .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
                    .unwrap();
                assert!(
                    traj.theta[kmax].sin().abs() < 1e-3,
                    "lune {j}: step at sinθ = {}",
                    traj.theta[kmax].sin().abs()
                );
            }
        }
    }

    #[test]
    fn lune_solid_angle_is_quarter_sphere_slice() {
        let traj = composite(1.833);
        assert!((traj.lune_solid_angle() - PI / 2.0).abs() < 1e-9);
    }

    #[test]
    fn phase_cycling_spreads_azimuths() {
        let traj = build_trajectory(
            ProtocolKind::CompositeNgqc,
            3.0,
            &TrajectoryParams {
                n_lunes: 3,
                ..TrajectoryParams::default()
            },
        )
        .unwrap();
        let third = traj.t.len() / 3;
        assert!((traj.phi[third + 1] - traj.phi[1] - 2.0 * PI / 3.0).abs() < 1e-6);
        assert!((traj.phi[2 * third + 1] - traj.phi[1] - 4.0 * PI / 3.0).abs() < 1e-6);
    }

    #[test]
    fn unresolvable_step_is_rejected() {
        let err = build_trajectory(
            ProtocolKind::CompositeNgqc,
            1.0,
            &TrajectoryParams {
                step_width: Some(1e-4),
                n_samples: 2000,
                ..TrajectoryParams::default()
            },
        );
        assert!(matches!(err, Err(ControlError::StepNotResolvable { .. })));
    }

    #[test]
    fn orange_slice_is_single_lune() {
        let traj =
            build_trajectory(ProtocolKind::OrangeSlice, 1.833, &TrajectoryParams::default())
                .unwrap();
        assert_eq!(traj.n_lunes, 1);
        let mid = traj.t.len() / 2;
        assert!((traj.theta[mid] - PI).abs() < 1e-6);
        // Default slice angle π/2 encloses a full π of solid angle.
        assert!((traj.lune_solid_angle() - PI).abs() < 1e-9);
    }
}
