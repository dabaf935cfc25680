use crate::lindblad::{propagate_noisy, StochasticField};
use crate::rk45::PropagationGrid;
use crate::PropError;
use hamiltonians::HamiltonianAssembly;
use nalgebra::DMatrix;
use noise_bath::{
    child_seed, kmc_field_trace, sample_bath_geometry, CollapseSet, SurfaceBathConfig,
};
use quantum_core::{C64, DensityMatrix, Operator, QutritBasis};
use rayon::prelude::*;

/// Telegraph bath and its coupling operator (field in gauss times `op`
/// must land in MHz).
#[derive(Clone)]
pub struct BathCoupling {
    pub cfg: SurfaceBathConfig,
    pub op: Operator,
}

#[derive(Clone)]
pub struct NoiseModel {
    pub bath: Option<BathCoupling>,
    pub collapse: CollapseSet,
}

impl NoiseModel {
    pub fn quiet() -> Self {
        NoiseModel {
            bath: None,
            collapse: CollapseSet::empty(),
        }
    }
}

/// Position in the deterministic seed tree.  Every trajectory seed is
/// derived from (master, sweep, point, trajectory), so runs reproduce
/// bit-identically regardless of worker count.
#[derive(Clone, Copy, Debug)]
pub struct SeedPath {
    pub master: u64,
    pub sweep: u64,
    pub point: u64,
}

impl SeedPath {
    pub fn new(master: u64, sweep: u64, point: u64) -> Self {
        SeedPath {
            master,
            sweep,
            point,
        }
    }

    pub fn trajectory_seed(&self, traj: u64) -> u64 {
        child_seed(self.master, &[self.sweep, self.point, traj])
    }
}

/// Averaged channel output: one mean density matrix per input state.
#[derive(Clone, Debug)]
pub struct ChannelRun {
    pub outputs: Vec<DensityMatrix>,
    /// Per-trajectory outputs, outer index trajectory, inner index input.
    /// Kept so resampling schemes can rebuild averages from whole
    /// trajectories instead of mixing inputs across realizations.
    pub traj_outputs: Vec<Vec<DensityMatrix>>,
    /// Mean auxiliary-level population across inputs, one entry per
    /// trajectory.
    pub traj_leakage: Vec<f64>,
    pub n_traj: usize,
    pub traj_seeds: Vec<u64>,
}

/// Propagate every input through `n_traj` fresh noise realizations and
/// average per input.  Within one trajectory all inputs share the same
/// field trace and collapse set; across trajectories the bath lattice and
/// its trace are redrawn from the seed tree.
pub fn monte_carlo_channel(
    assembly: &HamiltonianAssembly,
    noise: &NoiseModel,
    inputs: &[DensityMatrix],
    n_traj: usize,
    seeds: SeedPath,
    grid: &PropagationGrid,
) -> Result<ChannelRun, PropError> {
    assert!(n_traj >= 1, "need at least one trajectory");
    assert!(!inputs.is_empty(), "need at least one input state");
    let t_end = assembly.t_end();
    let aux = QutritBasis::STANDARD.aux;

    let per_traj: Vec<(Vec<DensityMatrix>, f64)> = (0..n_traj as u64)
        .into_par_iter()
        .map(|traj| -> Result<(Vec<DensityMatrix>, f64), PropError> {
            let base = seeds.trajectory_seed(traj);
            let realization = noise.bath.as_ref().map(|bath| {
                let geom = sample_bath_geometry(&bath.cfg, child_seed(base, &[0]));
                kmc_field_trace(&geom, t_end, child_seed(base, &[1]))
            });

            let mut outs = Vec::with_capacity(inputs.len());
            let mut leak = 0.0;
            for rho0 in inputs {
                let stoch = realization.as_ref().map(|trace| StochasticField {
                    op: &noise.bath.as_ref().unwrap().op,
                    trace,
                });
                let out = propagate_noisy(assembly, stoch, &noise.collapse, rho0, grid)?;
                leak += out.population(aux);
                outs.push(out);
            }
            Ok((outs, leak / inputs.len() as f64))
        })
        .collect::<Result<Vec<_>, _>>()?;

    // Fixed-order reduction: trajectory index order, independent of how the
    // parallel map scheduled the work.
    let mut outputs = Vec::with_capacity(inputs.len());
    for i in 0..inputs.len() {
        let mut acc: DMatrix<C64> = DMatrix::zeros(3, 3);
        for (outs, _) in &per_traj {
            acc += outs[i].mat();
        }
        acc /= quantum_core::cr(n_traj as f64);
        outputs
            .push(DensityMatrix::new(acc).map_err(|e| PropError::Output(e.to_string()))?);
    }

    let traj_leakage = per_traj.iter().map(|(_, l)| *l).collect();
    Ok(ChannelRun {
        outputs,
        traj_outputs: per_traj.into_iter().map(|(outs, _)| outs).collect(),
        traj_leakage,
        n_traj,
        traj_seeds: (0..n_traj as u64).map(|k| seeds.trajectory_seed(k)).collect(),
    })
}
