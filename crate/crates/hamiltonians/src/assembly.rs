use std::f64::consts::PI;

use control_protocols::{satd_waveform, SingleShotCommand, TrajectorySamples};
use nalgebra::DMatrix;
use quantum_core::{c, cr, ketbra, Operator, C64};

use crate::stark::StarkTerms;

// Basis ordering everywhere: (|+1⟩, |0⟩, |−1⟩) = indices (0, 1, 2);
// logical |0_L⟩ = |−1⟩, |1_L⟩ = |+1⟩, auxiliary |a⟩ = |0⟩.

/// |0⟩⟨−1| + h.c.
pub fn x_minus() -> Operator {
    Operator::new(ketbra(3, 1, 2) + ketbra(3, 2, 1))
}

/// |0⟩⟨+1| + h.c.
pub fn x_plus() -> Operator {
    Operator::new(ketbra(3, 1, 0) + ketbra(3, 0, 1))
}

/// i(|+1⟩⟨0| − |0⟩⟨+1|)
pub fn y_plus() -> Operator {
    Operator::new((ketbra(3, 0, 1) - ketbra(3, 1, 0)).map(|v| v * quantum_core::I))
}

/// Driven Λ Hamiltonian in MHz with an amplitude imbalance η between the
/// two legs: (Ω_m/2)[(1+η) sin(θ/2)(|0⟩⟨−1| + h.c.)
/// − (1−η) cos(θ/2)(e^{−iφ}|0⟩⟨+1| + h.c.)]. η = 0 is the ideal drive
/// whose null eigenvector is the dark state.
pub fn lambda_rwa_elliptic(omega_m: f64, theta: f64, phi: f64, eta: f64) -> Operator {
    let leg_m = 0.5 * omega_m * (1.0 + eta) * (theta / 2.0).sin();
    let leg_p = -0.5 * omega_m * (1.0 - eta) * (theta / 2.0).cos();
    let sum = x_minus().mat() * cr(leg_m)
        + x_plus().mat() * cr(leg_p * phi.cos())
        + y_plus().mat() * cr(leg_p * phi.sin());
    Operator::new(sum)
}

pub fn lambda_rwa(omega_m: f64, theta: f64, phi: f64) -> Operator {
    lambda_rwa_elliptic(omega_m, theta, phi, 0.0)
}

#[derive(Clone, Debug)]
pub struct CdOperators {
    /// |−1⟩⟨+1| + h.c.
    pub op_re: Operator,
    /// i(|+1⟩⟨−1| − |−1⟩⟨+1|)
    pub op_im: Operator,
    /// [−sin φ·Op_re + cos φ·Op_im]/2; multiplied by θ̇ (rad/µs) this is
    /// the counterdiabatic generator in rad/µs, i.e. i(θ̇/2)e^{iφ}|+1⟩⟨−1| + h.c.,
    /// which is i(θ̇/2)(|D⟩⟨B| − |B⟩⟨D|) for the dark/bright pair of the Λ drive.
    pub combined: Operator,
}

pub fn cd_operator(phi: f64) -> CdOperators {
    let op_re = Operator::new(ketbra(3, 2, 0) + ketbra(3, 0, 2));
    let op_im = Operator::new((ketbra(3, 0, 2) - ketbra(3, 2, 0)).map(|v| v * quantum_core::I));
    let combined = Operator::new(
        op_re.mat() * cr(-0.5 * phi.sin()) + op_im.mat() * cr(0.5 * phi.cos()),
    );
    CdOperators {
        op_re,
        op_im,
        combined,
    }
}

/// One constant Hermitian operator with a real scalar envelope over the
/// shared time grid.
#[derive(Clone, Debug)]
pub struct AssemblyTerm {
    pub label: &'static str,
    pub op: Operator,
    pub envelope: Vec<f64>,
}

/// H(t) = Σ_i envelope_i(t)·Op_i in MHz. Envelopes are interpolated
/// linearly between grid points; the operators never change, which keeps
/// Hermiticity exact at interpolated times too.
#[derive(Clone, Debug)]
pub struct HamiltonianAssembly {
    pub t: Vec<f64>,
    pub dim: usize,
    pub terms: Vec<AssemblyTerm>,
}

impl HamiltonianAssembly {
    pub fn sample(&self, k: usize) -> Operator {
        let mut m = DMatrix::<C64>::zeros(self.dim, self.dim);
        for term in &self.terms {
            m += term.op.mat() * cr(term.envelope[k]);
        }
        Operator::new(m)
    }

    pub fn at_time(&self, time: f64) -> Operator {
        let n = self.t.len();
        if time <= self.t[0] {
            return self.sample(0);
        }
        if time >= self.t[n - 1] {
            return self.sample(n - 1);
        }
        let idx = self.t.partition_point(|&x| x <= time);
        let w = (time - self.t[idx - 1]) / (self.t[idx] - self.t[idx - 1]);
        let mut m = DMatrix::<C64>::zeros(self.dim, self.dim);
        for term in &self.terms {
            let e = term.envelope[idx - 1] * (1.0 - w) + term.envelope[idx] * w;
            m += term.op.mat() * cr(e);
        }
        Operator::new(m)
    }

    pub fn t_end(&self) -> f64 {
        *self.t.last().unwrap()
    }

    pub fn max_hermiticity_deviation(&self) -> f64 {
        (0..self.t.len())
            .map(|k| self.sample(k).hermiticity_deviation())
            .fold(0.0, f64::max)
    }
}

/// Drive settings for the holonomic Λ gate. The deliberate-error knobs
/// (amplitude ratio, phase skew, auxiliary detuning) apply to the Λ legs
/// only; the counterdiabatic channel always follows the nominal
/// trajectory, which is how control misalignment becomes visible.
#[derive(Clone, Copy, Debug)]
pub struct LambdaDriveConfig {
    pub omega_m: f64,
    pub alpha_cd: f64,
    pub ellipticity: f64,
    /// Multiplies the |+1⟩ leg amplitude; 1 is nominal.
    pub leg_amp_ratio: f64,
    /// Added to the drive azimuth on the Λ legs; rad.
    pub leg_phase_skew: f64,
    /// Common detuning of the auxiliary level, MHz on |0⟩⟨0|.
    pub aux_detuning: f64,
}

impl Default for LambdaDriveConfig {
    fn default() -> Self {
        LambdaDriveConfig {
            omega_m: 2.22,
            alpha_cd: 1.0,
            ellipticity: 0.0,
            leg_amp_ratio: 1.0,
            leg_phase_skew: 0.0,
            aux_detuning: 0.0,
        }
    }
}

pub fn lambda_assembly(
    traj: &TrajectorySamples,
    cfg: &LambdaDriveConfig,
    stark: Option<&StarkTerms>,
) -> HamiltonianAssembly {
    let n = traj.t.len();
    let half = 0.5 * cfg.omega_m;
    let mut env_xm = Vec::with_capacity(n);
    let mut env_xp = Vec::with_capacity(n);
    let mut env_yp = Vec::with_capacity(n);
    for k in 0..n {
        let th = traj.theta[k];
        let ph = traj.phi[k] + cfg.leg_phase_skew;
        env_xm.push(half * (1.0 + cfg.ellipticity) * (th / 2.0).sin());
        let leg_p = -half * (1.0 - cfg.ellipticity) * cfg.leg_amp_ratio * (th / 2.0).cos();
        env_xp.push(leg_p * ph.cos());
        env_yp.push(leg_p * ph.sin());
    }
    let mut terms = vec![
        AssemblyTerm {
            label: "lambda-xm",
            op: x_minus(),
            envelope: env_xm,
        },
        AssemblyTerm {
            label: "lambda-xp",
            op: x_plus(),
            envelope: env_xp,
        },
        AssemblyTerm {
            label: "lambda-yp",
            op: y_plus(),
            envelope: env_yp,
        },
    ];
    if cfg.alpha_cd != 0.0 {
        let w = satd_waveform(traj, cfg.alpha_cd);
        let ops = cd_operator(0.0);
        terms.push(AssemblyTerm {
            label: "cd-re",
            op: ops.op_re,
            envelope: w.omega_re.iter().map(|v| 0.5 * v).collect(),
        });
        terms.push(AssemblyTerm {
            label: "cd-im",
            op: ops.op_im,
            envelope: w.omega_im.iter().map(|v| 0.5 * v).collect(),
        });
    }
    if cfg.aux_detuning != 0.0 {
        terms.push(AssemblyTerm {
            label: "aux-detuning",
            op: Operator::new(ketbra(3, 1, 1)),
            envelope: vec![cfg.aux_detuning; n],
        });
    }
    if let Some(st) = stark {
        assert_eq!(
            st.envelope_mhz.len(),
            n,
            "stark envelope must share the trajectory grid"
        );
        terms.push(AssemblyTerm {
            label: "stark",
            op: st.op.clone(),
            envelope: st.envelope_mhz.clone(),
        });
    }
    HamiltonianAssembly {
        t: traj.t.clone(),
        dim: 3,
        terms,
    }
}

/// Constant direction matrix M of the bright-state command: K(t) = Ω(t)·M.
/// Its spectrum is {(sin α − 1)/2, 0, (sin α + 1)/2}; the null vector is
/// the dark state of the chosen axis.
pub fn single_shot_mixing_direction(cmd: &SingleShotCommand) -> Operator {
    let (u0, u1, ud) = cmd.control_direction();
    let phi = -u1.arg();
    let m = ketbra(3, 1, 1) * cr(ud)
        + x_minus().mat() * cr(0.5 * u0)
        + x_plus().mat() * cr(0.5 * u1.norm() * phi.cos())
        + y_plus().mat() * cr(0.5 * u1.norm() * phi.sin());
    Operator::new(m)
}

pub fn single_shot_hamiltonian(cmd: &SingleShotCommand) -> HamiltonianAssembly {
    let (u0, u1, ud) = cmd.control_direction();
    // Ω₁ = |Ω₁| e^{−iφ}: ½(Ω₁|0⟩⟨+1| + h.c.) = (|Ω₁|/2)(cos φ·X_p + sin φ·Y_p)
    let phi = -u1.arg();
    let mag1 = u1.norm();
    let env = |scale: f64| -> Vec<f64> { cmd.omega.iter().map(|w| w * scale).collect() };
    HamiltonianAssembly {
        t: cmd.t.clone(),
        dim: 3,
        terms: vec![
            AssemblyTerm {
                label: "ss-detuning",
                op: Operator::new(ketbra(3, 1, 1)),
                envelope: env(ud),
            },
            AssemblyTerm {
                label: "ss-leg0",
                op: x_minus(),
                envelope: env(0.5 * u0),
            },
            AssemblyTerm {
                label: "ss-leg1-re",
                op: x_plus(),
                envelope: env(0.5 * mag1 * phi.cos()),
            },
            AssemblyTerm {
                label: "ss-leg1-im",
                op: y_plus(),
                envelope: env(0.5 * mag1 * phi.sin()),
            },
        ],
    }
}

/// Exact gate of the commuting family: U = exp(−2πi·M·∫Ω dt). The two
/// bright branches acquire equal phase after a unit-area pulse, so the
/// auxiliary level decouples and the logical block is exp(−iγ n·σ/2) up
/// to a global phase, γ = π(1 + sin α).
pub fn single_shot_unitary(cmd: &SingleShotCommand) -> Operator {
    let m = single_shot_mixing_direction(cmd);
    let (vals, vecs) = m.herm_eigen();
    let area = cmd.area();
    let mut u = DMatrix::<C64>::zeros(3, 3);
    for (j, &lambda) in vals.iter().enumerate() {
        let col = vecs.column(j);
        let phase = c(0.0, -2.0 * PI * lambda * area).exp();
        for r in 0..3 {
            for s in 0..3 {
                u[(r, s)] += col[r] * col[s].conj() * phase;
            }
        }
    }
    Operator::new(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use control_protocols::{
        build_trajectory, su2_gate, EnvelopeShape, ProtocolKind, TrajectoryParams,
    };
    use nalgebra::DVector;
    use quantum_core::max_abs_diff;

    fn dark_vec(theta: f64, phi: f64) -> DVector<C64> {
        DVector::from_vec(vec![
            c(0.0, phi).exp() * cr((theta / 2.0).sin()),
            cr(0.0),
            cr((theta / 2.0).cos()),
        ])
    }

    fn bright_vec(theta: f64, phi: f64) -> DVector<C64> {
        DVector::from_vec(vec![
            -c(0.0, phi).exp() * cr((theta / 2.0).cos()),
            cr(0.0),
            cr((theta / 2.0).sin()),
        ])
    }

    #[test]
    fn dark_state_is_annihilated() {
        for (theta, phi) in [(0.3, 0.0), (1.7, 2.1), (PI, -0.9), (2.9, 0.4)] {
            let h = lambda_rwa(2.22, theta, phi);
            let residual = h.mat() * dark_vec(theta, phi);
            assert!(residual.norm() < 1e-12, "theta={theta} phi={phi}");
        }
    }

    #[test]
    fn bright_state_couples_at_half_rabi() {
        for (theta, phi) in [(0.3, 0.0), (1.7, 2.1), (2.2, -1.3)] {
            let h = lambda_rwa(2.22, theta, phi);
            let hb = h.mat() * bright_vec(theta, phi);
            // ⟨0|H|B⟩ lives on the auxiliary row.
            assert!((hb[1] - cr(1.11)).norm() < 1e-12);
        }
    }

    #[test]
    fn south_pole_leaves_single_leg() {
        let h = lambda_rwa(2.22, PI, 0.0);
        let expected = x_minus().scale_re(1.11);
        assert!(max_abs_diff(h.mat(), expected.mat()) < 1e-12);
    }

    #[test]
    fn elliptic_imbalance_breaks_darkness() {
        let h = lambda_rwa_elliptic(2.22, 1.2, 0.7, 0.043);
        let residual = (h.mat() * dark_vec(1.2, 0.7)).norm();
        assert!(residual > 1e-3 && residual < 0.15);
        assert!(h.is_hermitian(1e-12));
    }

    #[test]
    fn cd_operators_structure() {
        let ops = cd_operator(0.77);
        for op in [&ops.op_re, &ops.op_im] {
            assert!(op.is_hermitian(1e-15));
            assert!(op.trace().norm() < 1e-15);
            for k in 0..3 {
                assert!(op.mat()[(1, k)].norm() < 1e-15);
                assert!(op.mat()[(k, 1)].norm() < 1e-15);
            }
        }
    }

    #[test]
    fn cd_combination_matches_complex_element() {
        for (theta_dot, phi) in [(1.3, 0.0), (-2.0, 0.9), (0.7, -2.4)] {
            let assembled = cd_operator(phi).combined.scale_re(theta_dot);
            let elem = c(0.0, theta_dot / 2.0) * c(0.0, phi).exp();
            let mut expected = DMatrix::<C64>::zeros(3, 3);
            expected[(0, 2)] = elem;
            expected[(2, 0)] = elem.conj();
            assert!(max_abs_diff(assembled.mat(), &expected) < 1e-14);
        }
    }

    #[test]
    fn zero_azimuth_is_pure_imaginary_quadrature() {
        let ops = cd_operator(0.0);
        assert!(max_abs_diff(ops.combined.mat(), ops.op_im.scale_re(0.5).mat()) < 1e-15);
    }

    // The counterdiabatic generator must transport the dark state exactly:
    // −iH_CD|D(θ,φ)⟩ = ∂_t|D(θ,φ)⟩ for φ̇ = 0, independent of speed. This
    // pins the quadrature signs against the dressed-state derivation rather
    // than against a frozen matrix.
    #[test]
    fn cd_generator_transports_the_dark_state() {
        for (theta, phi, theta_dot) in [(0.4, 0.0, 1.7), (1.9, 2.3, -0.8), (2.8, -1.1, 3.0)] {
            let h_cd = cd_operator(phi).combined.scale_re(theta_dot);
            let lhs = h_cd.mat() * dark_vec(theta, phi) * c(0.0, -1.0);
            let d_dot = DVector::from_vec(vec![
                c(0.0, phi).exp() * cr(0.5 * theta_dot * (theta / 2.0).cos()),
                cr(0.0),
                cr(-0.5 * theta_dot * (theta / 2.0).sin()),
            ]);
            assert!((lhs - d_dot).norm() < 1e-14, "theta={theta} phi={phi}");
        }
    }

    fn composite() -> control_protocols::TrajectorySamples {
        build_trajectory(
            ProtocolKind::CompositeNgqc,
            1.833,
            &TrajectoryParams::default(),
        )
        .unwrap()
    }

    #[test]
    fn assembly_is_hermitian_everywhere() {
        let traj = composite();
        let cfg = LambdaDriveConfig {
            leg_amp_ratio: 1.05,
            leg_phase_skew: 0.1,
            ellipticity: 0.02,
            aux_detuning: 0.3,
            ..LambdaDriveConfig::default()
        };
        let asm = lambda_assembly(&traj, &cfg, None);
        assert!(asm.max_hermiticity_deviation() < 1e-12);
    }

    #[test]
    fn assembly_matches_direct_construction() {
        let traj = composite();
        let cfg = LambdaDriveConfig::default();
        let asm = lambda_assembly(&traj, &cfg, None);
        for k in [0, 137, 500, 1499, 2000] {
            let direct = {
                let h_lambda = lambda_rwa(cfg.omega_m, traj.theta[k], traj.phi[k]);
                // MHz counterdiabatic term: (θ̇/2π)·combined
                let h_cd = cd_operator(traj.phi[k])
                    .combined
                    .scale_re(traj.theta_dot[k] / (2.0 * PI));
                &h_lambda + &h_cd
            };
            assert!(
                max_abs_diff(asm.sample(k).mat(), direct.mat()) < 1e-13,
                "sample {k}"
            );
        }
    }

    #[test]
    fn interpolation_is_exact_on_grid_and_linear_between() {
        let traj = composite();
        let asm = lambda_assembly(&traj, &LambdaDriveConfig::default(), None);
        let k = 321;
        assert!(max_abs_diff(asm.at_time(asm.t[k]).mat(), asm.sample(k).mat()) < 1e-13);
        let mid = 0.5 * (asm.t[k] + asm.t[k + 1]);
        let avg = (&asm.sample(k) + &asm.sample(k + 1)).scale_re(0.5);
        assert!(max_abs_diff(asm.at_time(mid).mat(), avg.mat()) < 1e-13);
    }

    #[test]
    fn bare_protocol_drops_cd_terms() {
        let traj = composite();
        let asm = lambda_assembly(
            &traj,
            &LambdaDriveConfig {
                alpha_cd: 0.0,
                ..LambdaDriveConfig::default()
            },
            None,
        );
        assert!(asm.terms.iter().all(|t| !t.label.starts_with("cd-")));
    }

    fn command(alpha: f64) -> SingleShotCommand {
        control_protocols::single_shot_controls(
            (1.1, 0.6),
            alpha,
            2.220,
            EnvelopeShape::SinSquared,
            600,
        )
        .unwrap()
    }

    #[test]
    fn single_shot_family_commutes() {
        let asm = single_shot_hamiltonian(&command(0.35));
        let ks = [3, 150, 300, 450, 599];
        for &a in &ks {
            for &b in &ks {
                let comm = asm.sample(a).commutator(&asm.sample(b));
                assert!(comm.fro_norm() < 1e-10);
            }
        }
    }

    #[test]
    fn mixing_direction_spectrum() {
        for alpha in [-0.8, 0.0, 0.35, 1.2] {
            let m = single_shot_mixing_direction(&command(alpha));
            let (vals, _) = m.herm_eigen();
            let lm = (alpha.sin() - 1.0) / 2.0;
            let lp = (alpha.sin() + 1.0) / 2.0;
            assert!((vals[0] - lm).abs() < 1e-12);
            assert!(vals[1].abs() < 1e-12);
            assert!((vals[2] - lp).abs() < 1e-12);
        }
    }

    #[test]
    fn mixing_direction_times_envelope_is_the_hamiltonian() {
        let cmd = command(0.35);
        let m = single_shot_mixing_direction(&cmd);
        let asm = single_shot_hamiltonian(&cmd);
        for k in [10, 200, 400] {
            let expected = m.scale_re(cmd.omega[k]);
            assert!(max_abs_diff(asm.sample(k).mat(), expected.mat()) < 1e-13);
        }
    }

    #[test]
    fn single_shot_gate_is_axis_rotation_without_leakage() {
        for alpha in [-0.6, 0.0, 0.35] {
            let cmd = command(alpha);
            let u = single_shot_unitary(&cmd);
            assert!(u.is_unitary(1e-10));
            // Auxiliary level decoupled: no logical-aux mixing.
            assert!(u.mat()[(1, 0)].norm() < 1e-10);
            assert!(u.mat()[(1, 2)].norm() < 1e-10);
            // Logical block in the (|0_L⟩=|−1⟩, |1_L⟩=|+1⟩) ordering.
            let gamma = cmd.predicted_gamma();
            let (th, ph) = (cmd.axis_polar, cmd.axis_azimuth);
            let n = [th.sin() * ph.cos(), th.sin() * ph.sin(), th.cos()];
            let target = su2_gate(n, gamma);
            let global = c(0.0, -gamma / 2.0).exp();
            let idx = [2usize, 0usize];
            for (r, &ir) in idx.iter().enumerate() {
                for (s, &is) in idx.iter().enumerate() {
                    let want = global * target.mat()[(r, s)];
                    assert!(
                        (u.mat()[(ir, is)] - want).norm() < 1e-9,
                        "alpha={alpha} ({r},{s})"
                    );
                }
            }
        }
    }
}
