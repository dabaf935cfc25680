use nalgebra::{DMatrix, DVector};
use propagation::ChannelRun;
use quantum_core::{cr, C64, DensityMatrix, Operator, QutritBasis};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::choi::{choi_from_outputs, mean_aux_population, target_bell, ChoiMatrix, IC_PLUS_Z};
use crate::TomoError;

/// Entanglement and average gate fidelity against a 2×2 target unitary:
/// F_e = ⟨Φ_U|J|Φ_U⟩/tr J with |Φ_U⟩ = (I ⊗ U)|Φ⁺⟩, and
/// F_avg = (d·F_e + 1)/(d + 1) at d = 2. The trace normalization makes the
/// entanglement fidelity meaningful for trace-decreasing reconstructions
/// too.
pub fn gate_fidelities(choi: &ChoiMatrix, u_target: &Operator) -> (f64, f64) {
    let tr = choi.trace();
    assert!(tr > 1e-12, "channel with vanishing trace");
    let phi_u = target_bell(u_target);
    let f_e = (phi_u.adjoint() * choi.mat() * &phi_u)[(0, 0)].re / tr;
    (f_e, (2.0 * f_e + 1.0) / 3.0)
}

/// F_eff = p_surv · F_cond: leaked population counts as total error.
pub fn effective_fidelity(p_surv: f64, f_cond: f64) -> f64 {
    assert!((0.0..=1.0).contains(&p_surv), "p_surv = {p_surv}");
    assert!(
        (-1e-9..=1.0 + 1e-9).contains(&f_cond),
        "F_cond = {f_cond} outside [0, 1]"
    );
    p_surv * f_cond
}

#[derive(Clone, Copy, Debug)]
pub struct ProcessMetrics {
    /// Population fidelity of the unconditioned |0_L⟩ input against its
    /// pure target image.
    pub f_leg: f64,
    /// Entanglement fidelity of the survival-conditioned channel.
    pub f_e: f64,
    /// Average gate fidelity of the survival-conditioned channel.
    pub f_avg: f64,
    /// Mean auxiliary-level population across the six inputs.
    pub leakage: f64,
    pub p_surv: f64,
    pub f_eff: f64,
    /// 95% bootstrap interval on the conditional F_avg, resampling whole
    /// trajectories.
    pub ci_low: f64,
    pub ci_high: f64,
    pub n_resamples: usize,
}

/// Full metric set for one tomography run. The bootstrap resamples whole
/// trajectories (all six inputs of one noise realization move together),
/// preserving the shared-noise correlation across inputs.
pub fn process_metrics(
    run: &ChannelRun,
    u_target: &Operator,
    n_resamples: usize,
    seed: u64,
) -> Result<ProcessMetrics, TomoError> {
    if run.outputs.len() != 6 {
        return Err(TomoError::WrongInputCount(run.outputs.len()));
    }
    let leakage = mean_aux_population(&run.outputs);
    let p_surv = 1.0 - leakage;
    let choi = choi_from_outputs(&run.outputs, true)?;
    let (f_e, f_avg) = gate_fidelities(&choi, u_target);
    let f_eff = effective_fidelity(p_surv, f_avg);

    let basis = QutritBasis::STANDARD;
    let idx = basis.logical();
    let mut psi: DVector<C64> = DVector::zeros(3);
    for a in 0..2 {
        psi[idx[a]] = u_target.mat()[(a, 0)];
    }
    let f_leg = run.outputs[IC_PLUS_Z].expectation(&psi);

    let (ci_low, ci_high) = if n_resamples == 0 {
        (f_avg, f_avg)
    } else {
        bootstrap_ci(run, u_target, n_resamples, seed)?
    };

    Ok(ProcessMetrics {
        f_leg,
        f_e,
        f_avg,
        leakage,
        p_surv,
        f_eff,
        ci_low,
        ci_high,
        n_resamples,
    })
}

fn bootstrap_ci(
    run: &ChannelRun,
    u_target: &Operator,
    n_resamples: usize,
    seed: u64,
) -> Result<(f64, f64), TomoError> {
    let n = run.traj_outputs.len();
    if n == 0 {
        return Err(TomoError::BadReconstruction(
            "per-trajectory outputs missing; cannot bootstrap".to_string(),
        ));
    }
    if run.traj_outputs.iter().any(|t| t.len() != 6) {
        return Err(TomoError::BadReconstruction(
            "trajectory records must hold all six inputs".to_string(),
        ));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut f_avgs = Vec::with_capacity(n_resamples);
    for _ in 0..n_resamples {
        let mut acc: Vec<DMatrix<C64>> = vec![DMatrix::zeros(3, 3); 6];
        for _ in 0..n {
            let t = rng.gen_range(0..n);
            for (i, rho) in run.traj_outputs[t].iter().enumerate() {
                acc[i] += rho.mat();
            }
        }
        let outputs: Vec<DensityMatrix> = acc
            .into_iter()
            .map(|m| DensityMatrix::new(m / cr(n as f64)))
            .collect::<Result<_, _>>()?;
        let choi = choi_from_outputs(&outputs, true)?;
        f_avgs.push(gate_fidelities(&choi, u_target).1);
    }
    f_avgs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok((percentile(&f_avgs, 0.025), percentile(&f_avgs, 0.975)))
}

/// Linear-interpolation percentile on a sorted slice.
fn percentile(sorted: &[f64], q: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let pos = q * (n - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let w = pos - lo as f64;
    sorted[lo] * (1.0 - w) + sorted[hi] * w
}
