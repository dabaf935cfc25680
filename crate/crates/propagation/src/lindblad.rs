use crate::rk45::{integrate_piecewise, M3, PropagationGrid};
use crate::PropError;
use hamiltonians::HamiltonianAssembly;
use nalgebra::DMatrix;
use noise_bath::{CollapseSet, FieldTrace};
use quantum_core::{c, cr, C64, DensityMatrix, Operator};
use std::f64::consts::TAU;

/// Telegraph field coupled through a fixed operator.  `op·B(t)` must come
/// out in MHz, so `op` carries the gyromagnetic factor (MHz per gauss).
#[derive(Clone, Copy)]
pub struct StochasticField<'a> {
    pub op: &'a Operator,
    pub trace: &'a FieldTrace,
}

fn to_m3(m: &DMatrix<C64>) -> M3 {
    M3::from_fn(|i, j| m[(i, j)])
}

fn from_m3(m: &M3) -> DMatrix<C64> {
    DMatrix::from_fn(3, 3, |i, j| m[(i, j)])
}

struct Precomp {
    grid_t: Vec<f64>,
    terms: Vec<(M3, Vec<f64>)>,
    /// (A, A†, ½A†A) with the rate folded in: A = √rate·L.
    jumps: Vec<(M3, M3, M3)>,
}

impl Precomp {
    fn build(assembly: &HamiltonianAssembly, collapse: &CollapseSet) -> Result<Self, PropError> {
        if assembly.dim != 3 {
            return Err(PropError::Dim(format!(
                "assembly dimension {} (this integrator is three-level)",
                assembly.dim
            )));
        }
        if assembly.t.len() < 2 {
            return Err(PropError::BadGrid("assembly needs at least two samples".into()));
        }
        let mut terms = Vec::with_capacity(assembly.terms.len());
        for term in &assembly.terms {
            if term.envelope.len() != assembly.t.len() {
                return Err(PropError::BadGrid(format!(
                    "term '{}' envelope length {} vs grid {}",
                    term.label,
                    term.envelope.len(),
                    assembly.t.len()
                )));
            }
            terms.push((to_m3(term.op.mat()), term.envelope.clone()));
        }
        let mut jumps = Vec::with_capacity(collapse.len());
        for (l, rate) in collapse.iter() {
            if l.dim() != 3 {
                return Err(PropError::Dim("collapse operator dimension".into()));
            }
            assert!(*rate >= 0.0, "collapse rates are nonnegative by contract");
            let a = to_m3(l.mat()) * cr(rate.sqrt());
            let ad = a.adjoint();
            jumps.push((a, ad, ad * a * cr(0.5)));
        }
        Ok(Precomp {
            grid_t: assembly.t.clone(),
            terms,
            jumps,
        })
    }

    /// Linearly interpolated Hamiltonian sum (clamped at the grid ends).
    fn h_at(&self, t: f64) -> M3 {
        let n = self.grid_t.len();
        let idx = self.grid_t.partition_point(|&x| x <= t).clamp(1, n - 1) - 1;
        let (ta, tb) = (self.grid_t[idx], self.grid_t[idx + 1]);
        let w = ((t - ta) / (tb - ta)).clamp(0.0, 1.0);
        let mut h = M3::zeros();
        for (op, env) in &self.terms {
            let e = env[idx] + w * (env[idx + 1] - env[idx]);
            if e != 0.0 {
                h += op * cr(e);
            }
        }
        h
    }
}

fn lindblad_rhs(pre: &Precomp, h: &M3, y: &M3) -> M3 {
    let mut f = (h * y - y * h) * c(0.0, -TAU);
    for (a, ad, half_ada) in &pre.jumps {
        f += a * y * ad - half_ada * y - y * half_ada;
    }
    f
}

/// Integrate the master equation over the assembly's full time span.
/// The stochastic field is exact: integration restarts at every telegraph
/// event with the field frozen inside each segment.
pub fn propagate_noisy(
    assembly: &HamiltonianAssembly,
    stoch: Option<StochasticField>,
    collapse: &CollapseSet,
    rho0: &DensityMatrix,
    grid: &PropagationGrid,
) -> Result<DensityMatrix, PropError> {
    if rho0.dim() != 3 {
        return Err(PropError::Dim(format!("state dimension {}", rho0.dim())));
    }
    let pre = Precomp::build(assembly, collapse)?;
    let t_end = assembly.t_end();
    let breakpoints = stoch
        .map(|s| s.trace.interior_breakpoints(t_end))
        .unwrap_or_default();
    let stoch_op = stoch.map(|s| (to_m3(s.op.mat()), s.trace));

    let make_rhs = |mid: f64| {
        let h_field = match &stoch_op {
            Some((op, trace)) => op * cr(trace.value_at(mid)),
            None => M3::zeros(),
        };
        let pre = &pre;
        move |t: f64, y: &M3| lindblad_rhs(pre, &(pre.h_at(t) + h_field), y)
    };
    let post = |t: f64, y: &M3| {
        let tr = y.trace();
        let drift = (tr.re - 1.0).abs() + tr.im.abs();
        if drift > 1e-6 {
            return Err(PropError::TraceDrift { t, drift });
        }
        Ok(())
    };

    let y0 = to_m3(rho0.mat());
    let yf = integrate_piecewise(make_rhs, y0, t_end, &breakpoints, grid, &post)?;
    // Round off the rounding-level asymmetry before validation.
    let herm = (yf + yf.adjoint()) * cr(0.5);
    physical_output(from_m3(&herm))
}

/// Adaptive stepping leaves eigenvalue dust of order steps·rtol around zero
/// for near-pure states, slightly outside the strict state validation.
/// Project dust within the channel floor onto the physical set; anything
/// below the floor is a genuine integration or generator failure.
fn physical_output(m: DMatrix<C64>) -> Result<DensityMatrix, PropError> {
    const EIG_FLOOR: f64 = -1e-7;
    let (vals, vecs) = Operator::new(m).herm_eigen();
    if vals[0] < EIG_FLOOR {
        return Err(PropError::Output(format!(
            "output eigenvalue {:.3e} below the {EIG_FLOOR:.0e} channel floor",
            vals[0]
        )));
    }
    let clipped: Vec<f64> = vals.iter().map(|&v| v.max(0.0)).collect();
    let total: f64 = clipped.iter().sum();
    if (total - 1.0).abs() > 1e-6 {
        return Err(PropError::Output(format!("output trace {total} after projection")));
    }
    let mut rho = DMatrix::<C64>::zeros(3, 3);
    for (j, &v) in clipped.iter().enumerate() {
        let col = vecs.column(j);
        for r in 0..3 {
            for s in 0..3 {
                rho[(r, s)] += col[r] * col[s].conj() * cr(v / total);
            }
        }
    }
    DensityMatrix::new(rho).map_err(|e| PropError::Output(e.to_string()))
}

/// Deterministic master-equation run (no telegraph field).
pub fn propagate(
    assembly: &HamiltonianAssembly,
    collapse: &CollapseSet,
    rho0: &DensityMatrix,
    grid: &PropagationGrid,
) -> Result<DensityMatrix, PropError> {
    propagate_noisy(assembly, None, collapse, rho0, grid)
}

/// Integrate dU/dt = −2πi·H(t)·U from the identity.  Coherent part only;
/// useful for noiseless gate references.
pub fn propagate_unitary(
    assembly: &HamiltonianAssembly,
    grid: &PropagationGrid,
) -> Result<Operator, PropError> {
    let pre = Precomp::build(assembly, &CollapseSet::empty())?;
    let make_rhs = |_mid: f64| {
        let pre = &pre;
        move |t: f64, y: &M3| (pre.h_at(t) * y) * c(0.0, -TAU)
    };
    let ok = |_t: f64, _y: &M3| Ok(());
    let yf = integrate_piecewise(make_rhs, M3::identity(), assembly.t_end(), &[], grid, &ok)?;
    Ok(Operator::new(from_m3(&yf)))
}
